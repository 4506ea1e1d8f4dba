//! Finite V-categories (generalised metric spaces), V-functors and preorders.
//!
//! Distances are stored row-major with the source first: `d(x', x)` is the
//! distance from `x'` to `x`.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::limits::max_enum;
use crate::quantale::{QElem, Quantale};
use crate::relation::Relation;
use crate::report::LawReport;

#[derive(Clone)]
pub struct VCat {
    quantale: Arc<Quantale>,
    objects: Vec<String>,
    dist: Vec<QElem>,
}

pub(crate) fn same_quantale(a: &Arc<Quantale>, b: &Arc<Quantale>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl VCat {
    /// Builds a space from a distance matrix. Only shape and carrier
    /// membership are checked here; call [`validate`](Self::validate) for the
    /// category axioms.
    pub fn new(quantale: Arc<Quantale>, objects: Vec<String>, dist: Vec<Vec<QElem>>) -> Result<VCat> {
        let n = objects.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(domain(format!("distance matrix must be {n}x{n}")));
        }
        let dist: Vec<QElem> = dist.into_iter().flatten().collect();
        for &r in &dist {
            quantale.check(r)?;
        }
        Ok(VCat { quantale, objects, dist })
    }

    /// Like [`new`](Self::new), but also rejects matrices that violate the axioms.
    pub fn new_validated(quantale: Arc<Quantale>, objects: Vec<String>, dist: Vec<Vec<QElem>>) -> Result<VCat> {
        let x = Self::new(quantale, objects, dist)?;
        let rep = x.validate();
        if rep.all_pass() {
            Ok(x)
        } else {
            Err(domain(rep.to_string()))
        }
    }

    pub(crate) fn from_flat(quantale: Arc<Quantale>, objects: Vec<String>, dist: Vec<QElem>) -> VCat {
        debug_assert_eq!(dist.len(), objects.len() * objects.len());
        VCat { quantale, objects, dist }
    }

    /// Self-distances `e`, every other distance `⊥`.
    pub fn discrete(quantale: Arc<Quantale>, objects: Vec<String>) -> VCat {
        let n = objects.len();
        let (e, bot) = (quantale.unit(), quantale.bottom());
        let dist = (0..n * n).map(|k| if k / n == k % n { e } else { bot }).collect();
        VCat { quantale, objects, dist }
    }

    /// The one-object space with self-distance `e`, the unit for [`tensor`](Self::tensor).
    pub fn unit(quantale: Arc<Quantale>) -> VCat {
        let e = quantale.unit();
        VCat { quantale, objects: vec!["*".into()], dist: vec![e] }
    }

    /// The one-object space with self-distance `⊤`.
    pub fn top_point(quantale: Arc<Quantale>) -> VCat {
        let top = quantale.top();
        VCat { quantale, objects: vec!["*".into()], dist: vec![top] }
    }

    /// Objects `0` and `1` with `d(0,1) = r` and `d(1,0) = ⊥`.
    pub fn two_r(quantale: Arc<Quantale>, r: QElem) -> Result<VCat> {
        let bot = quantale.bottom();
        Self::two_rs(quantale, r, bot)
    }

    /// Objects `0` and `1` with `d(0,1) = r` and `d(1,0) = s`; needs `r ⊗ s ≤ e`.
    pub fn two_rs(quantale: Arc<Quantale>, r: QElem, s: QElem) -> Result<VCat> {
        let q = &quantale;
        q.check(r)?;
        q.check(s)?;
        if !q.le(q.mul(r, s), q.unit()) {
            return Err(domain(format!("{} ⊗ {} is not below the unit", q.format_elem(r), q.format_elem(s))));
        }
        let e = q.unit();
        Ok(VCat { objects: vec!["0".into(), "1".into()], dist: vec![e, r, s, e], quantale })
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// `d(x', x)`.
    pub fn d(&self, from: usize, to: usize) -> QElem {
        self.dist[from * self.objects.len() + to]
    }

    pub fn matrix(&self) -> Vec<Vec<QElem>> {
        let n = self.len();
        (0..n).map(|i| self.dist[i * n..(i + 1) * n].to_vec()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    /// Whether both spaces have the same objects and, up to the quantale's
    /// tolerance, the same distances.
    pub fn same_as(&self, other: &VCat) -> bool {
        same_quantale(&self.quantale, &other.quantale)
            && self.objects == other.objects
            && self.dist.iter().zip(&other.dist).all(|(&a, &b)| self.quantale.equal(a, b))
    }

    /// Like [`same_as`](Self::same_as) but ignores object labels.
    pub fn same_distances(&self, other: &VCat) -> bool {
        same_quantale(&self.quantale, &other.quantale)
            && self.len() == other.len()
            && self.dist.iter().zip(&other.dist).all(|(&a, &b)| self.quantale.equal(a, b))
    }

    /// Reflexivity `e ≤ d(x,x)` and the triangle law `d(x',x) ⊗ d(x'',x') ≤ d(x'',x)`.
    pub fn validate(&self) -> LawReport {
        let q = &self.quantale;
        let n = self.len();
        let name = |i: usize| self.objects[i].as_str();
        let mut rep = LawReport::new();
        rep.begin("reflexivity");
        for x in 0..n {
            rep.record(q.le(q.unit(), self.d(x, x)), || {
                format!("self-distance of {} is {}, not above the unit", name(x), q.format_elem(self.d(x, x)))
            });
        }
        rep.begin("triangle");
        for a in 0..n {
            for b in 0..n {
                let ab = self.d(a, b);
                for c in 0..n {
                    let via = q.mul(self.d(b, c), ab);
                    rep.record(q.le(via, self.d(a, c)), || {
                        format!(
                            "triangle fails at ({}, {}, {}): d({0},{1}) ⊗ d({1},{2}) = {} but d({0},{2}) = {}",
                            name(a),
                            name(b),
                            name(c),
                            q.format_elem(via),
                            q.format_elem(self.d(a, c))
                        )
                    });
                }
            }
        }
        rep
    }

    pub fn is_discrete(&self) -> bool {
        let q = &self.quantale;
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| q.equal(self.d(i, j), if i == j { q.unit() } else { q.bottom() })))
    }

    /// `{(x', x) | r ≤ d(x', x)}`.
    pub fn level_relation(&self, r: QElem) -> Relation {
        let n = self.len();
        let q = &self.quantale;
        let mut rel = Relation::empty(n, n);
        for a in 0..n {
            for b in 0..n {
                if q.le(r, self.d(a, b)) {
                    rel.insert(a, b);
                }
            }
        }
        rel
    }

    /// `x ≤ y` iff `e ≤ d(x, y)`.
    pub fn underlying_preorder(&self) -> Preorder {
        Preorder { elements: self.objects.clone(), leq: self.level_relation(self.quantale.unit()) }
    }

    /// Objects are pairs; distances multiply componentwise.
    pub fn tensor(&self, other: &VCat) -> Result<VCat> {
        if !same_quantale(&self.quantale, &other.quantale) {
            return Err(Error::QuantaleMismatch);
        }
        let q = &self.quantale;
        let (n, m) = (self.len(), other.len());
        let mut objects = Vec::with_capacity(n * m);
        for x in &self.objects {
            for y in &other.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut dist = Vec::with_capacity(n * n * m * m);
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        dist.push(q.mul(self.d(a, c), other.d(b, d)));
                    }
                }
            }
        }
        Ok(VCat { quantale: q.clone(), objects, dist })
    }

    /// The internal hom `[self, target]` with the default enumeration cap.
    pub fn hom(&self, target: &VCat) -> Result<VCat> {
        self.hom_capped(target, max_enum())
    }

    /// Objects are the V-functors `self → target` (as maps, listed by their
    /// images); `d(f, g) = ⋀_y target(f y, g y)`.
    pub fn hom_capped(&self, target: &VCat, cap: usize) -> Result<VCat> {
        if !same_quantale(&self.quantale, &target.quantale) {
            return Err(Error::QuantaleMismatch);
        }
        let maps = self.functors_into(target, cap)?;
        let q = &self.quantale;
        let objects = maps
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.iter().map(|&z| target.objects[z].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut dist = Vec::with_capacity(maps.len() * maps.len());
        for f in &maps {
            for g in &maps {
                dist.push(q.meet_all(f.iter().zip(g).map(|(&a, &b)| target.d(a, b))));
            }
        }
        Ok(VCat { quantale: q.clone(), objects, dist })
    }

    /// All V-functor object maps `self → target`, in lexicographic order of images.
    pub fn functors_into(&self, target: &VCat, cap: usize) -> Result<Vec<Vec<usize>>> {
        let (n, m) = (self.len(), target.len());
        let total = (m as f64).powi(n as i32);
        if total > cap as f64 {
            return Err(Error::Resource(format!("{m}^{n} candidate maps exceed the cap of {cap}")));
        }
        let q = &self.quantale;
        let mut out = Vec::new();
        if m == 0 && n > 0 {
            return Ok(out);
        }
        let mut f = vec![0usize; n];
        loop {
            let ok = (0..n).all(|a| (0..n).all(|b| q.le(self.d(a, b), target.d(f[a], f[b]))));
            if ok {
                out.push(f.clone());
            }
            // Odometer increment, last position fastest.
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                f[i] += 1;
                if f[i] < m {
                    break;
                }
                f[i] = 0;
            }
        }
    }

    /// `self^A`, the space of all functions `A → self` with the meet of
    /// pointwise distances.
    pub fn power(&self, exponent: &[String]) -> Result<VCat> {
        VCat::discrete(self.quantale.clone(), exponent.to_vec()).hom(self)
    }
}

impl fmt::Debug for VCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VCat over {} {:?}", self.quantale.kind(), self.objects)?;
        for row in self.matrix() {
            let cells: Vec<String> = row.iter().map(|&r| self.quantale.format_elem(r)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// An object assignment between two spaces.
#[derive(Clone, Debug)]
pub struct VFunctorMap {
    pub source: VCat,
    pub target: VCat,
    pub map: Vec<usize>,
}

impl VFunctorMap {
    pub fn new(source: VCat, target: VCat, map: Vec<usize>) -> Result<VFunctorMap> {
        if !same_quantale(source.quantale(), target.quantale()) {
            return Err(Error::QuantaleMismatch);
        }
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(domain("object map does not fit its source and target"));
        }
        Ok(VFunctorMap { source, target, map })
    }

    pub fn identity(x: VCat) -> VFunctorMap {
        let map = (0..x.len()).collect();
        VFunctorMap { source: x.clone(), target: x, map }
    }

    /// Non-expansiveness: `source(x', x) ≤ target(f x', f x)` for all pairs.
    pub fn validate(&self) -> LawReport {
        let q = self.source.quantale();
        let n = self.source.len();
        let mut rep = LawReport::new();
        rep.begin("non-expansive");
        for a in 0..n {
            for b in 0..n {
                let before = self.source.d(a, b);
                let after = self.target.d(self.map[a], self.map[b]);
                rep.record(q.le(before, after), || {
                    format!(
                        "({}, {}): {} is not below {}",
                        self.source.objects()[a],
                        self.source.objects()[b],
                        q.format_elem(before),
                        q.format_elem(after)
                    )
                });
            }
        }
        rep
    }
}

/// A finite preorder.
#[derive(Clone, Debug, PartialEq)]
pub struct Preorder {
    elements: Vec<String>,
    leq: Relation,
}

impl Preorder {
    /// Requires `leq` to be reflexive and transitive.
    pub fn new(elements: Vec<String>, leq: Relation) -> Result<Preorder> {
        let n = elements.len();
        if leq.rows() != n || leq.cols() != n {
            return Err(domain("order relation does not match the element list"));
        }
        if !leq.is_reflexive() {
            return Err(domain("order relation is not reflexive"));
        }
        if !leq.is_transitive() {
            return Err(domain("order relation is not transitive"));
        }
        Ok(Preorder { elements, leq })
    }

    /// The preorder generated by the given pairs.
    pub fn generated(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Preorder> {
        let n = elements.len();
        if pairs.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(domain("order pair mentions an unknown element"));
        }
        let leq = Relation::from_pairs(n, n, pairs.iter().copied()).preorder_closure();
        Ok(Preorder { elements, leq })
    }

    pub fn discrete(elements: Vec<String>) -> Preorder {
        let leq = Relation::identity(elements.len());
        Preorder { elements, leq }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

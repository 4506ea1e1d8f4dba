use std::fmt;
use std::sync::Arc;

use crate::error::{unsupported, Error, Result};
use crate::limits::max_enum;
use crate::quantale::{QElem, Quantale};
use crate::setfunctor::{Carrier, SetFunctor, Term};
use crate::space::VCat;

/// A map `♥: T(V) → V` for a finite quantale `V`.
#[derive(Clone)]
pub struct PredicateLifting {
    quantale: Arc<Quantale>,
    functor: SetFunctor,
    /// `T(V)` with atoms standing for quantale elements in table order.
    carrier: Arc<Carrier>,
    heart: Vec<QElem>,
}

impl fmt::Debug for PredicateLifting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PredicateLifting({} over {})", self.functor, self.quantale.kind())
    }
}

impl PredicateLifting {
    /// Tabulates `heart` on `T(V)`. The closure receives a term whose atoms
    /// index into `elements`.
    pub fn new(
        quantale: Arc<Quantale>,
        functor: SetFunctor,
        heart: impl Fn(&Term, &[QElem]) -> QElem,
    ) -> Result<PredicateLifting> {
        let elements = quantale
            .elements()
            .ok_or_else(|| unsupported(format!("predicate liftings need a finite quantale, not {}", quantale.kind())))?;
        let carrier = Arc::new(functor.apply_on_set(elements.len())?);
        let heart = carrier.terms.iter().map(|t| heart(t, &elements)).collect::<Vec<_>>();
        for &v in &heart {
            quantale.check(v)?;
        }
        Ok(PredicateLifting { quantale, functor, carrier, heart })
    }

    /// Finite powerset with `♥(A) = ⋁A`.
    pub fn join(quantale: Arc<Quantale>) -> Result<PredicateLifting> {
        let q = quantale.clone();
        Self::new(quantale, SetFunctor::Powerset, move |t, els| match t {
            Term::Set(items) => q.join_all(items.iter().map(|i| atom(i, els))),
            other => panic!("not a subset: {other:?}"),
        })
    }

    /// Finite powerset with `♥(A) = ⋀A`.
    pub fn meet(quantale: Arc<Quantale>) -> Result<PredicateLifting> {
        let q = quantale.clone();
        Self::new(quantale, SetFunctor::Powerset, move |t, els| match t {
            Term::Set(items) => q.meet_all(items.iter().map(|i| atom(i, els))),
            other => panic!("not a subset: {other:?}"),
        })
    }

    pub fn constant(quantale: Arc<Quantale>, functor: SetFunctor, value: QElem) -> Result<PredicateLifting> {
        Self::new(quantale, functor, move |_, _| value)
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn functor(&self) -> &SetFunctor {
        &self.functor
    }

    /// `♥(T h (A))` for every `A ∈ T(n)`, where `h` maps `{0..n}` to element indices.
    fn evaluate(&self, source: &Carrier, h: &[usize]) -> Vec<QElem> {
        self.functor
            .map_carrier(source, &self.carrier, h)
            .into_iter()
            .map(|i| self.heart[i])
            .collect()
    }

    /// Whether `⋀_x [h x, k x] ≤ ⋀_{A ∈ T X} [♥(T h A), ♥(T k A)]` for all
    /// `h, k: X → V` and every set `X` with at most `max_size` elements.
    pub fn is_vmonotone(&self, max_size: usize) -> Result<bool> {
        let q = &self.quantale;
        let k = q.size().expect("finite quantale");
        for n in 0..=max_size {
            let source = self.functor.apply_on_set(n)?;
            let maps = all_functions(n, k, max_enum())?;
            let values: Vec<Vec<QElem>> = maps.iter().map(|h| self.evaluate(&source, h)).collect();
            let elem = |i: usize| QElem::Fin(i as u32);
            for (h, vh) in maps.iter().zip(&values) {
                for (g, vg) in maps.iter().zip(&values) {
                    let lhs = q.meet_all(h.iter().zip(g).map(|(&a, &b)| q.residual(elem(a), elem(b))));
                    let rhs = q.meet_all(vh.iter().zip(vg).map(|(&a, &b)| q.residual(a, b)));
                    if !q.le(lhs, rhs) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn atom(t: &Term, elements: &[QElem]) -> QElem {
    match t {
        Term::Atom(i) => elements[*i],
        other => panic!("not an element: {other:?}"),
    }
}

/// Every function `{0..n} → {0..k}`, last argument varying fastest.
fn all_functions(n: usize, k: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    if (k as f64).powi(n as i32) > cap as f64 {
        return Err(Error::Resource(format!("{k}^{n} test functions exceed the cap of {cap}")));
    }
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..k).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

fn kantorovich_over(p: &PredicateLifting, labels: &[String], tests: &[Vec<usize>]) -> Result<VCat> {
    let q = p.quantale();
    let source = p.functor.apply_on_set(labels.len())?;
    let m = source.len();
    let mut dist = vec![vec![q.top(); m]; m];
    for h in tests {
        let v = p.evaluate(&source, h);
        for a in 0..m {
            for b in 0..m {
                dist[a][b] = q.meet2(dist[a][b], q.residual(v[a], v[b]));
            }
        }
    }
    let objects = source.terms.iter().map(|t| SetFunctor::render(t, labels)).collect();
    VCat::new(q.clone(), objects, dist)
}

/// `T S` with `d(A', A) = ⋀_{h: S → V} [♥(T h A'), ♥(T h A)]` over all functions `h`.
pub fn discrete_kantorovich(p: &PredicateLifting, labels: &[String]) -> Result<VCat> {
    let k = p.quantale.size().expect("finite quantale");
    let tests = all_functions(labels.len(), k, max_enum())?;
    kantorovich_over(p, labels, &tests)
}

/// `T X` with the meet taken over the V-functors `h: X → V`, i.e. the maps
/// with `X(x', x) ≤ [h x', h x]`.
pub fn kantorovich_lift(p: &PredicateLifting, x: &VCat) -> Result<VCat> {
    let q = p.quantale();
    if !crate::space::same_quantale(q, x.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    let k = q.size().expect("finite quantale");
    let n = x.len();
    let elem = |i: usize| QElem::Fin(i as u32);
    let tests: Vec<Vec<usize>> = all_functions(n, k, max_enum())?
        .into_iter()
        .filter(|h| (0..n).all(|a| (0..n).all(|b| q.le(x.d(a, b), q.residual(elem(h[a]), elem(h[b]))))))
        .collect();
    kantorovich_over(p, x.objects(), &tests)
}

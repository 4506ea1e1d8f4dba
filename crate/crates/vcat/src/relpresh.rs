//! V-categories viewed as families of relations indexed by quantale elements.
//!
//! A [`RelPresheaf`] is stored on a finite grid of elements. Between grid
//! points it is read off by interpolation: the relation at `r` is the union of
//! the grid relations at elements above `r`. For a space `X`, the family
//! `r ↦ X_r` is represented exactly by the grid of its distances.

use std::sync::Arc;

use crate::error::{domain, Result};
use crate::quantale::{QElem, Quantale};
use crate::relation::Relation;
use crate::report::LawReport;
use crate::space::VCat;

#[derive(Clone, Debug)]
pub struct RelPresheaf {
    quantale: Arc<Quantale>,
    carrier: Vec<String>,
    grid: Vec<QElem>,
    values: Vec<Relation>,
}

/// Grid elements in a deterministic order with duplicates (up to tolerance) removed.
pub(crate) fn dedup_elems(q: &Quantale, items: impl IntoIterator<Item = QElem>) -> Vec<QElem> {
    let mut out: Vec<QElem> = Vec::new();
    for r in items {
        if !out.iter().any(|&s| q.equal(r, s)) {
            out.push(r);
        }
    }
    out
}

impl RelPresheaf {
    /// A presheaf from grid values. Later entries for an element already on
    /// the grid are rejected.
    pub fn new(quantale: Arc<Quantale>, carrier: Vec<String>, entries: Vec<(QElem, Relation)>) -> Result<RelPresheaf> {
        let n = carrier.len();
        let mut grid = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (r, rel) in entries {
            quantale.check(r)?;
            if rel.rows() != n || rel.cols() != n {
                return Err(domain("relation does not live on the carrier"));
            }
            if grid.iter().any(|&g| quantale.equal(g, r)) {
                return Err(domain(format!("grid element {} given twice", quantale.format_elem(r))));
            }
            grid.push(r);
            values.push(rel);
        }
        Ok(RelPresheaf { quantale, carrier, grid, values })
    }

    /// `Φ(X)`: the level relations of `X` on its distances together with `⊥`, `e` and `⊤`.
    pub fn from_space(x: &VCat) -> RelPresheaf {
        let q = x.quantale();
        let n = x.len();
        let mut candidates = vec![q.bottom(), q.unit(), q.top()];
        for a in 0..n {
            for b in 0..n {
                candidates.push(x.d(a, b));
            }
        }
        let grid = dedup_elems(q, candidates);
        let values = grid.iter().map(|&r| x.level_relation(r)).collect();
        RelPresheaf { quantale: q.clone(), carrier: x.objects().to_vec(), grid, values }
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn grid(&self) -> &[QElem] {
        &self.grid
    }

    /// Grid entries as `(element, relation)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (QElem, &Relation)> {
        self.grid.iter().copied().zip(&self.values)
    }

    /// The relation at `r`: the union of the grid values at elements above `r`.
    pub fn value_at(&self, r: QElem) -> Relation {
        let n = self.carrier.len();
        let mut out = Relation::empty(n, n);
        for (g, rel) in self.entries() {
            if self.quantale.le(r, g) {
                out = out.union(rel);
            }
        }
        out
    }

    /// Join of the grid elements whose relation contains `(a, b)`.
    fn support_join(&self, a: usize, b: usize) -> QElem {
        self.quantale
            .join_all(self.entries().filter(|(_, rel)| rel.contains(a, b)).map(|(g, _)| g))
    }

    /// Whether `value(⋁S) ⊇ ⋂_{s∈S} value(s)` for every set `S` of grid
    /// elements. It suffices to take, for each pair, `S` = the grid elements
    /// whose relation contains it.
    pub fn is_continuous(&self) -> bool {
        let n = self.carrier.len();
        (0..n).all(|a| (0..n).all(|b| self.value_at(self.support_join(a, b)).contains(a, b)))
    }

    /// Identity, composition and antitonicity laws, checked on the grid.
    pub fn validate(&self) -> LawReport {
        let q = &self.quantale;
        let n = self.carrier.len();
        let mut rep = LawReport::new();
        rep.begin("identity below the unit level");
        let at_unit = self.value_at(q.unit());
        for a in 0..n {
            rep.record(at_unit.contains(a, a), || format!("({0}, {0}) missing at the unit", self.carrier[a]));
        }
        rep.begin("composition");
        for (r, rr) in self.entries() {
            for (s, ss) in self.entries() {
                let ok = ss.then(rr).is_subset(&self.value_at(q.mul(r, s)));
                rep.record(ok, || format!("levels {} and {} do not compose", q.format_elem(r), q.format_elem(s)));
            }
        }
        rep.begin("antitone");
        for (r, rr) in self.entries() {
            for (s, ss) in self.entries() {
                rep.record(!q.le(s, r) || rr.is_subset(ss), || {
                    format!("level {} is not contained in level {}", q.format_elem(r), q.format_elem(s))
                });
            }
        }
        rep
    }

    /// `Ψ(P)`: `d(x', x) = ⋁{r | (x', x) ∈ P(r)}` over the grid.
    pub fn to_space(&self) -> Result<VCat> {
        if !self.is_continuous() {
            return Err(domain("presheaf is not continuous on its grid"));
        }
        let n = self.carrier.len();
        let dist = (0..n).map(|a| (0..n).map(|b| self.support_join(a, b)).collect()).collect();
        let x = VCat::new(self.quantale.clone(), self.carrier.clone(), dist)?;
        let rep = x.validate();
        if !rep.all_pass() {
            return Err(domain(format!("presheaf does not describe a V-category:\n{rep}")));
        }
        Ok(x)
    }

    /// The closure `C(P)(r) = ⋂{P(s) | s ≪ r}`, on the same grid.
    ///
    /// For finite quantales the meet ranges over every element totally below
    /// `r`. For the closed-form kinds, complete distributivity turns the
    /// condition into `r ≤ ⋁{g | (x', x) ∈ P(g)}` for each pair.
    pub fn closure(&self) -> Result<RelPresheaf> {
        let q = &self.quantale;
        q.require_completely_distributive()?;
        let n = self.carrier.len();
        let values = match q.elements() {
            Some(all) => {
                let levels: Vec<(QElem, Relation)> = all.iter().map(|&s| (s, self.value_at(s))).collect();
                self.grid
                    .iter()
                    .map(|&r| {
                        levels
                            .iter()
                            .filter(|(s, _)| q.way_below(*s, r))
                            .fold(Relation::full(n, n), |acc, (_, rel)| acc.intersection(rel))
                    })
                    .collect()
            }
            None => self
                .grid
                .iter()
                .map(|&r| {
                    let mut rel = Relation::empty(n, n);
                    for a in 0..n {
                        for b in 0..n {
                            if q.le(r, self.support_join(a, b)) {
                                rel.insert(a, b);
                            }
                        }
                    }
                    rel
                })
                .collect(),
        };
        Ok(RelPresheaf { quantale: q.clone(), carrier: self.carrier.clone(), grid: self.grid.clone(), values })
    }

    /// Grid-wise equality of the represented families.
    pub fn same_values(&self, other: &RelPresheaf) -> bool {
        self.carrier.len() == other.carrier.len()
            && self.grid.len() == other.grid.len()
            && self.grid.iter().all(|&g| self.value_at(g) == other.value_at(g))
            && other.grid.iter().all(|&g| self.value_at(g) == other.value_at(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    fn lawvere_space(rows: &[&[f64]]) -> VCat {
        let q = Arc::new(Quantale::lawvere());
        let dist = rows.iter().map(|r| r.iter().map(|&x| QElem::Real(x)).collect()).collect();
        VCat::new_validated(q, labels(rows.len()), dist).unwrap()
    }

    #[test]
    fn presheaf_of_a_discrete_space() {
        let q = Arc::new(Quantale::lawvere());
        let p = RelPresheaf::from_space(&VCat::discrete(q.clone(), labels(2)));
        assert_eq!(p.value_at(q.unit()), Relation::identity(2));
        assert_eq!(p.value_at(q.bottom()), Relation::full(2, 2));
    }

    #[test]
    fn presheaf_of_a_boolean_preorder() {
        let q = Arc::new(Quantale::boolean());
        let (o, z) = (q.top(), q.bottom());
        let x = VCat::new_validated(q.clone(), labels(2), vec![vec![o, o], vec![z, o]]).unwrap();
        let p = RelPresheaf::from_space(&x);
        assert_eq!(p.grid().len(), 2);
        assert_eq!(p.value_at(z), Relation::full(2, 2));
        assert_eq!(p.value_at(o).pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert!(p.to_space().unwrap().same_as(&x));
    }

    #[test]
    fn lawvere_grid_is_nested() {
        let x = lawvere_space(&[&[0.0, 1.0], &[2.0, 0.0]]);
        let p = RelPresheaf::from_space(&x);
        let mut grid: Vec<f64> = p.grid().iter().map(|r| r.as_real().unwrap()).collect();
        grid.sort_by(f64::total_cmp);
        assert_eq!(grid, vec![0.0, 1.0, 2.0, f64::INFINITY]);
        assert_eq!(p.value_at(QElem::Real(1.0)).pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(p.value_at(QElem::Real(1.5)), p.value_at(QElem::Real(1.0)));
        assert!(p.validate().all_pass());
        assert!(p.is_continuous());
        assert!(p.to_space().unwrap().same_as(&x));
    }

    #[test]
    fn only_bottom_is_rejected() {
        let q = Arc::new(Quantale::lawvere());
        let p = RelPresheaf::new(q.clone(), labels(2), vec![(q.bottom(), Relation::full(2, 2))]).unwrap();
        assert!(p.is_continuous());
        assert!(p.to_space().is_err());
    }

    /// The four-element Boolean algebra `{⊥, a, b, ⊤}` as a frame.
    fn diamond() -> Arc<Quantale> {
        let names = ["bot", "a", "b", "top"].iter().map(|s| s.to_string()).collect();
        let meet = |x: usize, y: usize| x & y;
        let tensor = (0..4).map(|x| (0..4).map(|y| meet(x, y)).collect()).collect();
        Arc::new(Quantale::from_table(names, &[(0, 1), (0, 2), (1, 3), (2, 3)], tensor, 3).unwrap())
    }

    #[test]
    fn gap_at_a_join_is_not_continuous() {
        let q = diamond();
        let full = Relation::full(2, 2);
        let diag = Relation::identity(2);
        let entries = vec![
            (q.element("bot").unwrap(), full.clone()),
            (q.element("a").unwrap(), full.clone()),
            (q.element("b").unwrap(), full),
            (q.element("top").unwrap(), diag),
        ];
        let p = RelPresheaf::new(q, labels(2), entries).unwrap();
        assert!(!p.is_continuous());
        assert!(p.to_space().is_err());
    }

    #[test]
    fn single_point_is_continuous() {
        let q = Arc::new(Quantale::chain(3, 1).unwrap());
        let p = RelPresheaf::from_space(&VCat::discrete(q, labels(1)));
        assert!(p.is_continuous());
    }

    #[test]
    fn closure_fixes_continuous_presheaves() {
        let x = lawvere_space(&[&[0.0, 1.0, 3.0], &[2.0, 0.0, 2.0], &[4.0, 2.0, 0.0]]);
        let p = RelPresheaf::from_space(&x);
        let c = p.closure().unwrap();
        assert!(c.same_values(&p));
        assert!(c.closure().unwrap().same_values(&c));
        let b = Arc::new(Quantale::boolean());
        let (o, z) = (b.top(), b.bottom());
        let y = VCat::new_validated(b, labels(2), vec![vec![o, z], vec![o, o]]).unwrap();
        let p = RelPresheaf::from_space(&y);
        assert!(p.closure().unwrap().same_values(&p));
    }

    #[test]
    fn closure_needs_complete_distributivity() {
        let names = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let order = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
        let meet = |x: usize, y: usize| if x == y || y == 4 { x } else if x == 4 { y } else { 0 };
        let tensor = (0..5).map(|x| (0..5).map(|y| meet(x, y)).collect()).collect();
        let q = Arc::new(Quantale::from_table(names, &order, tensor, 4).unwrap());
        let p = RelPresheaf::from_space(&VCat::discrete(q, labels(2)));
        assert!(matches!(p.closure(), Err(crate::Error::Unsupported(_))));
    }
}

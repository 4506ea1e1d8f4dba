//! Extending functors from sets to V-categories.
//!
//! The central operation is [`lan_extend`], the enriched left Kan extension of
//! a functor `H: Set → V-Cat` along the discrete functor `D`. A space `X` is
//! presented by its nerve, the level relations `X_r = {(x', x) | r ≤ X(x', x)}`,
//! and the extension is computed as the path closure
//!
//! ```text
//! H♯X = M ∨ M·E·M ∨ M·E·M·E·M ∨ ...
//! ```
//!
//! in the (join, tensor) matrix semiring, where `M` holds the distances of
//! `H(X_o)` and `E(A, B)` is the join of the levels `r` at which some object of
//! `H(X_r)` projects to `A` and `B`.
//!
//! For set functors that preserve weak pullbacks the same space is obtained
//! directly from relation lifting ([`vcatify_wpb`]); over completely
//! distributive quantales the powerset and multiset cases have closed forms
//! ([`hausdorff`], [`matching_metric`]).

mod functors;
mod kantorovich;
mod metrics;

pub use functors::{
    map_is_non_expanding, ConstantOne, Discrete, DiscreteKantorovich, Machine, PowersetOrder, Provenance, UserFunctor,
    VValuedFunctor,
};
pub use kantorovich::{discrete_kantorovich, kantorovich_lift, PredicateLifting};
pub use metrics::{hausdorff, matching_metric};

use crate::error::{unsupported, Error, Result};
use crate::quantale::{QElem, Quantale};
use crate::relation::Relation;
use crate::relpresh::dedup_elems;
use crate::setfunctor::SetFunctor;
use crate::space::{VCat, VFunctorMap};

/// Which quantale elements index the nerve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Grid {
    /// The distances of the space, `⊥`, `e` and `⊤`, closed under binary meets.
    #[default]
    Values,
    /// Every element of a finite quantale.
    Full,
}

#[derive(Clone, Debug, Default)]
pub struct ExtendOptions {
    pub grid: Grid,
    /// Additional grid points.
    pub extra_grid: Vec<QElem>,
    /// Rounds allowed beyond the object count before the closure gives up
    /// (closed-form quantales only).
    pub extra_rounds: usize,
}

/// Result of an extension together with how it was computed.
#[derive(Clone, Debug)]
pub struct Extension {
    pub space: VCat,
    pub grid: Vec<QElem>,
    /// Closure rounds, 0 for the relation-lifting route.
    pub iterations: usize,
    pub converged: bool,
}

/// One level `X_r` of a nerve, listed as pairs `(x', x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NerveLevel {
    pub level: QElem,
    pub pairs: Vec<(usize, usize)>,
}

impl NerveLevel {
    /// The projection `(x', x) ↦ x'`.
    pub fn d0(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    /// The projection `(x', x) ↦ x`.
    pub fn d1(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn relation(&self, n: usize) -> Relation {
        Relation::from_pairs(n, n, self.pairs.iter().copied())
    }
}

#[derive(Clone, Debug)]
pub struct NerveDiagram {
    pub objects: Vec<String>,
    pub levels: Vec<NerveLevel>,
}

impl NerveDiagram {
    pub fn grid(&self) -> Vec<QElem> {
        self.levels.iter().map(|l| l.level).collect()
    }
}

fn meet_closure(q: &Quantale, mut items: Vec<QElem>) -> Vec<QElem> {
    if q.is_chain() {
        return items;
    }
    loop {
        let mut added = Vec::new();
        for &a in &items {
            for &b in &items {
                let m = q.meet2(a, b);
                if !items.iter().chain(&added).any(|&c| q.equal(c, m)) {
                    added.push(m);
                }
            }
        }
        if added.is_empty() {
            return items;
        }
        items.extend(added);
    }
}

fn grid_for(x: &VCat, options: &ExtendOptions) -> Result<Vec<QElem>> {
    let q = x.quantale();
    let mut base = match options.grid {
        Grid::Full => q
            .elements()
            .ok_or_else(|| unsupported(format!("the full grid needs a finite quantale, not {}", q.kind())))?,
        Grid::Values => {
            let n = x.len();
            let mut v = vec![q.bottom(), q.unit(), q.top()];
            v.extend((0..n * n).map(|k| x.d(k / n, k % n)));
            meet_closure(q, dedup_elems(q, v))
        }
    };
    for &r in &options.extra_grid {
        base.push(q.check(r)?);
    }
    let mut grid = dedup_elems(q, base);
    let rank = |r: QElem, all: &[QElem]| all.iter().filter(|&&s| q.lt(s, r)).count();
    let ranks: Vec<usize> = grid.iter().map(|&r| rank(r, &grid)).collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| ranks[i]);
    grid = order.into_iter().map(|i| grid[i]).collect();
    Ok(grid)
}

/// The nerve of `X` on the default grid.
pub fn vnerve(x: &VCat) -> NerveDiagram {
    vnerve_with(x, &ExtendOptions::default()).expect("the value grid is always available")
}

pub fn vnerve_with(x: &VCat, options: &ExtendOptions) -> Result<NerveDiagram> {
    let levels = grid_for(x, options)?
        .into_iter()
        .map(|r| NerveLevel { level: r, pairs: x.level_relation(r).pairs() })
        .collect();
    Ok(NerveDiagram { objects: x.objects().to_vec(), levels })
}

/// `(P·Q)(a, c) = ⋁_b P(a, b) ⊗ Q(b, c)`.
fn mat_mul(q: &Quantale, p: &[QElem], r: &[QElem], n: usize) -> Vec<QElem> {
    let bot = q.bottom();
    let mut out = vec![bot; n * n];
    for a in 0..n {
        for b in 0..n {
            let pab = p[a * n + b];
            if q.equal(pab, bot) {
                continue;
            }
            for c in 0..n {
                let v = q.mul(pab, r[b * n + c]);
                out[a * n + c] = q.join2(out[a * n + c], v);
            }
        }
    }
    out
}

/// The left Kan extension of `H` along `D`, evaluated at `X`, on the default grid.
pub fn lan_extend(h: &dyn VValuedFunctor, x: &VCat) -> Result<VCat> {
    Ok(lan_extend_with(h, x, &ExtendOptions::default())?.space)
}

pub fn lan_extend_with(h: &dyn VValuedFunctor, x: &VCat, options: &ExtendOptions) -> Result<Extension> {
    let q = h.quantale().clone();
    if !crate::space::same_quantale(&q, x.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    let nerve = vnerve_with(x, options)?;
    let base = h.on_set(x.objects())?;
    let n = base.len();
    let mut edges = vec![q.bottom(); n * n];
    for level in &nerve.levels {
        for (a, b) in h.span_image(&level.d0(), &level.d1(), x.len(), x.len())? {
            edges[a * n + b] = q.join2(edges[a * n + b], level.level);
        }
    }

    let m: Vec<QElem> = (0..n * n).map(|k| base.d(k / n, k % n)).collect();
    let em = mat_mul(&q, &edges, &m, n);
    let bound = match q.size() {
        // Each round raises at least one entry, and no entry can rise more
        // than |V| times.
        Some(size) => n * n * size + 1,
        None if q.is_integral() => n + 1 + options.extra_rounds,
        None => n + options.extra_rounds,
    };
    let mut closure = m.clone();
    let mut iterations = 0;
    loop {
        if iterations > bound {
            return Err(Error::Iteration(format!("path closure did not stabilise within {bound} rounds")));
        }
        iterations += 1;
        let step = mat_mul(&q, &closure, &em, n);
        let next: Vec<QElem> = m.iter().zip(&step).map(|(&a, &b)| q.join2(a, b)).collect();
        let stable = next.iter().zip(&closure).all(|(&a, &b)| q.equal(a, b));
        closure = next;
        if stable {
            break;
        }
    }
    Ok(Extension {
        space: VCat::from_flat(q, base.objects().to_vec(), closure),
        grid: nerve.grid(),
        iterations,
        converged: true,
    })
}

/// The extension applied to a V-functor: `H(f_o)` between the extended spaces.
pub fn lan_extend_map(h: &dyn VValuedFunctor, f: &VFunctorMap) -> Result<VFunctorMap> {
    let source = lan_extend(h, &f.source)?;
    let target = lan_extend(h, &f.target)?;
    let map = h.on_map(&f.map, f.target.len())?;
    VFunctorMap::new(source, target, map)
}

/// The V-cat-ification of a weak-pullback-preserving set functor via
/// relation lifting: `d(A', A) = ⋁{r | (A', A) ∈ Rel_T(X_r)}`.
pub fn vcatify_wpb(t: &SetFunctor, x: &VCat) -> Result<VCat> {
    Ok(vcatify_wpb_with(t, x, &ExtendOptions::default())?.space)
}

pub fn vcatify_wpb_with(t: &SetFunctor, x: &VCat, options: &ExtendOptions) -> Result<Extension> {
    if !t.preserves_weak_pullbacks() {
        return Err(unsupported(format!("{t} does not preserve weak pullbacks")));
    }
    let q = x.quantale().clone();
    let nerve = vnerve_with(x, options)?;
    let carrier = t.apply_on_set(x.len())?;
    let m = carrier.len();
    let mut dist = vec![q.bottom(); m * m];
    for level in &nerve.levels {
        let lifted = t.relation_lift_on(&level.relation(x.len()), &carrier, &carrier)?;
        for (a, b) in lifted.pairs() {
            dist[a * m + b] = q.join2(dist[a * m + b], level.level);
        }
    }
    let objects = carrier.terms.iter().map(|term| SetFunctor::render(term, x.objects())).collect();
    Ok(Extension { space: VCat::from_flat(q, objects, dist), grid: nerve.grid(), iterations: 0, converged: true })
}

/// Whether every self-distance of `H(∅)` is `⊤`, the condition under which
/// the unit `H(X_o) → H♯X` of the extension is an isomorphism.
pub fn unit_iso_check(h: &dyn VValuedFunctor) -> Result<bool> {
    Ok(functors::self_distances_top(&h.on_set(&[])?))
}

/// `X^{2_r}`: the space of V-functors from the two-point space `2_r` into `X`.
pub fn power_by_two(x: &VCat, r: QElem) -> Result<VCat> {
    VCat::two_r(x.quantale().clone(), r)?.hom(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    fn lawvere(dist: &[&[f64]]) -> VCat {
        let q = Arc::new(Quantale::lawvere());
        let dist: Vec<Vec<QElem>> = dist.iter().map(|row| row.iter().map(|&v| QElem::Real(v)).collect()).collect();
        VCat::new_validated(q, labels(dist.len()), dist).unwrap()
    }

    #[test]
    fn nerve_of_a_discrete_space() {
        let q = Arc::new(Quantale::chain(3, 1).unwrap());
        let x = VCat::discrete(q.clone(), labels(2));
        let nerve = vnerve(&x);
        for level in &nerve.levels {
            let expected = if q.le(level.level, q.bottom()) {
                4
            } else if q.le(level.level, q.unit()) {
                2
            } else {
                0
            };
            assert_eq!(level.pairs.len(), expected, "{:?}", level.level);
        }
    }

    #[test]
    fn nerve_grid_of_a_lawvere_pair() {
        let x = lawvere(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let mut grid: Vec<f64> = vnerve(&x)
            .grid()
            .into_iter()
            .map(|r| match r {
                QElem::Real(v) => v,
                _ => unreachable!(),
            })
            .collect();
        grid.sort_by(f64::total_cmp);
        assert_eq!(grid, vec![0.0, 1.0, f64::INFINITY]);
    }

    #[test]
    fn extending_the_discrete_functor_is_the_identity() {
        let x = lawvere(&[&[0.0, 1.0, 3.0], &[2.0, 0.0, 2.0], &[4.5, 2.5, 0.0]]);
        let d = Discrete::identity(x.quantale().clone());
        let ext = lan_extend_with(&d, &x, &ExtendOptions::default()).unwrap();
        assert!(ext.space.same_as(&x), "{:?}", ext.space);
        assert!(ext.converged);
    }

    #[test]
    fn constant_one_extends_to_the_top_point() {
        let q = Arc::new(Quantale::chain(3, 1).unwrap());
        let h = ConstantOne::new(q.clone());
        for x in [VCat::discrete(q.clone(), labels(2)), VCat::discrete(q.clone(), vec![])] {
            let ext = lan_extend(&h, &x).unwrap();
            assert_eq!(ext.matrix(), vec![vec![q.top()]]);
        }
        assert!(!unit_iso_check(&h).unwrap());
        assert!(!unit_iso_check(&Discrete::new(q.clone(), SetFunctor::Powerset)).unwrap());
        assert!(unit_iso_check(&Discrete::identity(q)).unwrap());
        let integral = Arc::new(Quantale::chain(3, 2).unwrap());
        assert!(unit_iso_check(&Discrete::new(integral, SetFunctor::Powerset)).unwrap());
    }

    #[test]
    fn powerset_on_a_lawvere_pair_is_hausdorff() {
        let x = lawvere(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let h = Discrete::new(x.quantale().clone(), SetFunctor::Powerset);
        let zigzag = lan_extend(&h, &x).unwrap();
        let lifted = vcatify_wpb(&SetFunctor::Powerset, &x).unwrap();
        assert!(zigzag.same_as(&lifted));
        let subsets: [&[usize]; 4] = [&[], &[0], &[1], &[0, 1]];
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                assert_eq!(zigzag.d(i, j), hausdorff(&x, a, b).unwrap(), "{a:?} {b:?}");
            }
        }
        assert_eq!(zigzag.d(1, 3), QElem::Real(1.0));
    }

    #[test]
    fn extra_grid_points_change_nothing() {
        let q = Arc::new(Quantale::chain(4, 2).unwrap());
        let e = q.unit();
        let x = VCat::new_validated(
            q.clone(),
            labels(3),
            vec![vec![e, QElem::Fin(1), QElem::Fin(1)], vec![e, e, QElem::Fin(1)], vec![q.bottom(), q.bottom(), e]],
        )
        .unwrap();
        let h = Discrete::new(q.clone(), SetFunctor::Multiset(2));
        let base = lan_extend(&h, &x).unwrap();
        let full = lan_extend_with(&h, &x, &ExtendOptions { grid: Grid::Full, ..Default::default() }).unwrap();
        assert!(base.same_as(&full.space));
        assert!(base.same_as(&vcatify_wpb(&SetFunctor::Multiset(2), &x).unwrap()));
    }

    #[test]
    fn vcatify_examples() {
        let x = lawvere(&[&[0.0, 1.0], &[2.0, 0.0]]);
        assert!(vcatify_wpb(&SetFunctor::Identity, &x).unwrap().same_as(&x));
        let c = vcatify_wpb(&SetFunctor::Const(vec!["p".into(), "q".into()]), &x).unwrap();
        assert_eq!(c.matrix(), vec![vec![QElem::Real(0.0), QElem::Real(f64::INFINITY)], vec![QElem::Real(f64::INFINITY), QElem::Real(0.0)]]);
        let sq = vcatify_wpb(&SetFunctor::Power(2), &x).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let q = x.quantale();
                let expect = q.meet2(x.d(a / 2, b / 2), x.d(a % 2, b % 2));
                assert_eq!(sq.d(a, b), expect);
            }
        }
    }

    #[test]
    fn power_by_two_is_not_an_extension() {
        let x = lawvere(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let q = x.quantale().clone();
        let g = power_by_two(&x, q.unit()).unwrap();
        assert_eq!(g.len(), 3);
        let d = VCat::discrete(q.clone(), labels(2));
        assert!(power_by_two(&d, q.unit()).unwrap().is_discrete());
        let id = lan_extend(&Discrete::identity(q), &x).unwrap();
        assert_ne!(id.len(), g.len());
    }

    #[test]
    fn extended_maps_act_on_objects() {
        let q = Arc::new(Quantale::boolean());
        let x = VCat::two_r(q.clone(), q.unit()).unwrap();
        let y = VCat::unit(q.clone());
        let f = VFunctorMap::new(x, y, vec![0, 0]).unwrap();
        let h = Discrete::new(q, SetFunctor::Powerset);
        let g = lan_extend_map(&h, &f).unwrap();
        assert_eq!(g.map, vec![0, 1, 1, 1]);
    }
}

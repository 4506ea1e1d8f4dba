use crate::error::{domain, Error, Result};
use crate::quantale::QElem;
use crate::setfunctor::perfect_matching;
use crate::space::VCat;

const MAX_PERMUTED: usize = 10;

fn check_indices(x: &VCat, items: &[usize]) -> Result<()> {
    match items.iter().find(|&&i| i >= x.len()) {
        Some(i) => Err(domain(format!("object index {i} is out of range"))),
        None => Ok(()),
    }
}

/// The Pompeiu–Hausdorff distance
/// `(⋀_{x'∈A'} ⋁_{x∈A} X(x',x)) ∧ (⋀_{x∈A} ⋁_{x'∈A'} X(x',x))`.
///
/// Only meaningful over completely distributive quantales; elsewhere use the
/// relation-lifting extension of the powerset functor.
pub fn hausdorff(x: &VCat, left: &[usize], right: &[usize]) -> Result<QElem> {
    let q = x.quantale();
    q.require_completely_distributive()?;
    check_indices(x, left)?;
    check_indices(x, right)?;
    let forth = q.meet_all(left.iter().map(|&a| q.join_all(right.iter().map(|&b| x.d(a, b)))));
    let back = q.meet_all(right.iter().map(|&b| q.join_all(left.iter().map(|&a| x.d(a, b)))));
    Ok(q.meet2(forth, back))
}

/// The matching distance between multisets (given as lists with repetition):
/// `⊥` unless the sizes agree, and otherwise the best over bijections of the
/// worst matched distance.
pub fn matching_metric(x: &VCat, left: &[usize], right: &[usize]) -> Result<QElem> {
    let q = x.quantale();
    check_indices(x, left)?;
    check_indices(x, right)?;
    if left.len() != right.len() {
        return Ok(q.bottom());
    }
    let n = left.len();
    let w = |i: usize, j: usize| x.d(left[i], right[j]);
    if q.is_chain() {
        // On a chain the best bottleneck is the largest threshold admitting a
        // perfect matching among the edges at or above it.
        let mut thresholds: Vec<QElem> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| w(i, j)).collect();
        thresholds.push(q.top());
        thresholds.sort_by(|&a, &b| {
            if q.equal(a, b) {
                std::cmp::Ordering::Equal
            } else if q.le(a, b) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            }
        });
        for t in thresholds {
            if perfect_matching(n, |i, j| q.le(t, w(i, j))) {
                return Ok(t);
            }
        }
        return Ok(q.bottom());
    }
    if n > MAX_PERMUTED {
        return Err(Error::Resource(format!("matching {n} elements over a non-linear quantale")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = q.bottom();
    permutations(&mut perm, 0, &mut |p| {
        let worst = q.meet_all(p.iter().enumerate().map(|(i, &j)| w(i, j)));
        best = q.join2(best, worst);
    });
    Ok(best)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;
    use std::sync::Arc;

    fn line(points: &[f64]) -> VCat {
        let q = Arc::new(Quantale::lawvere());
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        let dist = points.iter().map(|a| points.iter().map(|b| QElem::Real((a - b).abs())).collect()).collect();
        VCat::new_validated(q, labels, dist).unwrap()
    }

    #[test]
    fn hausdorff_values() {
        let x = line(&[0.0, 1.0]);
        assert_eq!(hausdorff(&x, &[0, 1], &[0, 1]).unwrap(), QElem::Real(0.0));
        assert_eq!(hausdorff(&x, &[0], &[0, 1]).unwrap(), QElem::Real(1.0));
        assert_eq!(hausdorff(&x, &[], &[]).unwrap(), QElem::Real(0.0));
        assert_eq!(hausdorff(&x, &[], &[0]).unwrap(), QElem::Real(f64::INFINITY));
    }

    #[test]
    fn egli_milner_on_a_two_chain() {
        let q = Arc::new(Quantale::boolean());
        let x = VCat::two_r(q.clone(), q.unit()).unwrap();
        assert_eq!(hausdorff(&x, &[0], &[0, 1]).unwrap(), q.top());
        assert_eq!(hausdorff(&x, &[0, 1], &[0]).unwrap(), q.bottom());
    }

    #[test]
    fn matching_values() {
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(matching_metric(&x, &[0, 2], &[1, 3]).unwrap(), QElem::Real(1.0));
        assert_eq!(matching_metric(&x, &[1, 1], &[1, 1]).unwrap(), QElem::Real(0.0));
        assert_eq!(matching_metric(&x, &[0], &[0, 1]).unwrap(), QElem::Real(f64::INFINITY));
        assert_eq!(matching_metric(&x, &[], &[]).unwrap(), QElem::Real(0.0));
        assert!(matching_metric(&x, &[9], &[0]).is_err());
    }

    #[test]
    fn matching_on_a_non_chain_uses_all_bijections() {
        let names = ["bot", "a", "b", "top"].iter().map(|s| s.to_string()).collect();
        let tensor = (0..4).map(|x| (0..4).map(|y| x & y).collect()).collect();
        let q = Arc::new(Quantale::from_table(names, &[(0, 1), (0, 2), (1, 3), (2, 3)], tensor, 3).unwrap());
        let (a, b, top, bot) = (q.element("a").unwrap(), q.element("b").unwrap(), q.top(), q.bottom());
        let x = VCat::new_validated(
            q.clone(),
            vec!["u".into(), "v".into()],
            vec![vec![top, a], vec![b, top]],
        )
        .unwrap();
        // Identity pairing gives ⊤; the swap gives a ∧ b = ⊥.
        assert_eq!(matching_metric(&x, &[0, 1], &[0, 1]).unwrap(), top);
        assert_eq!(matching_metric(&x, &[0, 0], &[0, 1]).unwrap(), a);
        assert_eq!(matching_metric(&x, &[1], &[0]).unwrap(), b);
        assert_eq!(q.meet2(a, b), bot);
    }
}

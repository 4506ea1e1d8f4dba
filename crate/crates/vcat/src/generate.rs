//! Exhaustive and random generation of small spaces and machines, for tests
//! and experiments.

use std::sync::Arc;

use rand::Rng;

use crate::coalgebra::MachineCoalgebra;
use crate::quantale::{QElem, Quantale};
use crate::space::VCat;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Every space on `n` labelled objects over a finite quantale, in
/// lexicographic order of the row-major distance matrix.
pub fn all_spaces(q: &Arc<Quantale>, n: usize) -> Vec<VCat> {
    let elements = q.elements().expect("enumerating spaces needs a finite quantale");
    let mut out = Vec::new();
    let mut dist = vec![q.bottom(); n * n];
    fill(q, &elements, n, 0, &mut dist, &mut out);
    out
}

fn fill(q: &Arc<Quantale>, elements: &[QElem], n: usize, cell: usize, dist: &mut [QElem], out: &mut Vec<VCat>) {
    if cell == n * n {
        out.push(VCat::new(q.clone(), labels(n), dist.chunks(n.max(1)).map(<[QElem]>::to_vec).collect()).expect("valid carrier"));
        return;
    }
    let (a, c) = (cell / n, cell % n);
    for &v in elements {
        if a == c && !q.le(q.unit(), v) {
            continue;
        }
        dist[cell] = v;
        if consistent(q, n, cell, dist) {
            fill(q, elements, n, cell + 1, dist, out);
        }
    }
}

/// Triangle laws among the cells filled so far (row-major up to `last`).
fn consistent(q: &Quantale, n: usize, last: usize, dist: &[QElem]) -> bool {
    let known = |a: usize, b: usize| a * n + b <= last;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let cells = [a * n + b, b * n + c, a * n + c];
                if !cells.contains(&last) || !(known(a, b) && known(b, c) && known(a, c)) {
                    continue;
                }
                if !q.le(q.mul(dist[a * n + b], dist[b * n + c]), dist[a * n + c]) {
                    return false;
                }
            }
        }
    }
    true
}

/// A random element: uniform on finite quantales; for the real-valued kinds
/// a value on a coarse grid, `⊥` with small probability.
pub fn random_elem(q: &Quantale, rng: &mut impl Rng) -> QElem {
    match q.elements() {
        Some(els) => els[rng.gen_range(0..els.len())],
        None => {
            if rng.gen_bool(0.1) {
                q.bottom()
            } else {
                let top = if q.le(QElem::Real(1.0), q.bottom()) { 4 } else { 40 };
                q.check(QElem::Real(rng.gen_range(0..top) as f64 / 4.0)).unwrap_or_else(|_| q.bottom())
            }
        }
    }
}

/// A random space on `n` objects: random entries with self-distances raised
/// to at least `e`, closed under composition of paths.
pub fn random_space(q: &Arc<Quantale>, n: usize, rng: &mut impl Rng) -> VCat {
    let mut d: Vec<QElem> = (0..n * n)
        .map(|k| {
            let r = random_elem(q, rng);
            if k / n == k % n {
                q.join2(r, q.unit())
            } else {
                r
            }
        })
        .collect();
    loop {
        let mut changed = false;
        for b in 0..n {
            for a in 0..n {
                for c in 0..n {
                    let via = q.mul(d[a * n + b], d[b * n + c]);
                    let joined = q.join2(d[a * n + c], via);
                    if !q.equal(joined, d[a * n + c]) {
                        d[a * n + c] = joined;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    VCat::new(q.clone(), labels(n), d.chunks(n.max(1)).map(<[QElem]>::to_vec).collect()).expect("valid carrier")
}

/// A random machine with the given numbers of states and inputs.
pub fn random_machine(states: usize, inputs: usize, output: VCat, rng: &mut impl Rng) -> MachineCoalgebra {
    let delta = (0..states).map(|_| (0..inputs).map(|_| rng.gen_range(0..states)).collect()).collect();
    let out = (0..states).map(|_| rng.gen_range(0..output.len())).collect();
    let inputs = (0..inputs).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let states = (0..states).map(|i| format!("s{i}")).collect();
    MachineCoalgebra::new(inputs, states, delta, out, output).expect("random machine is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn counts_of_small_spaces() {
        // Preorders on up to four labelled points.
        let b = Arc::new(Quantale::boolean());
        let counts: Vec<usize> = (0..=4).map(|n| all_spaces(&b, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        let c = Arc::new(Quantale::chain(3, 1).unwrap());
        assert_eq!(all_spaces(&c, 2).len(), 16);
        assert!(all_spaces(&c, 3).iter().all(|x| x.validate().all_pass()));
    }

    #[test]
    fn random_spaces_are_valid() {
        let mut rng = StdRng::seed_from_u64(7);
        for q in [Quantale::lawvere(), Quantale::ultrametric(), Quantale::chain(3, 1).unwrap()] {
            let q = Arc::new(q);
            for n in 0..6 {
                let x = random_space(&q, n, &mut rng);
                assert!(x.validate().all_pass(), "{x:?}");
            }
        }
    }
}

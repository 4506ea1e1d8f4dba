//! Change of base between preorders and V-categories, deterministic machines
//! with outputs in a V-category, behavioural distances and bisimilarity.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, unsupported, Result};
use crate::quantale::{QElem, Quantale};
use crate::relation::Relation;
use crate::space::{Preorder, VCat};

/// A deterministic machine `δ: S × A → S`, `out: S → B` with outputs in a
/// V-category `B`.
#[derive(Clone, Debug)]
pub struct MachineCoalgebra {
    inputs: Vec<String>,
    states: Vec<String>,
    /// `delta[s][a]`.
    delta: Vec<Vec<usize>>,
    out: Vec<usize>,
    output: VCat,
}

impl MachineCoalgebra {
    pub fn new(
        inputs: Vec<String>,
        states: Vec<String>,
        delta: Vec<Vec<usize>>,
        out: Vec<usize>,
        output: VCat,
    ) -> Result<MachineCoalgebra> {
        let n = states.len();
        if delta.len() != n || out.len() != n {
            return Err(domain(format!("transition and output tables must cover all {n} states")));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != inputs.len() {
                return Err(domain(format!("state {} needs a successor for each of {} inputs", states[s], inputs.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(domain(format!("state {} has successor index {t} out of range", states[s])));
            }
        }
        if let Some(&o) = out.iter().find(|&&o| o >= output.len()) {
            return Err(domain(format!("output index {o} is not an object of the output space")));
        }
        Ok(MachineCoalgebra { inputs, states, delta, out, output })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn output_space(&self) -> &VCat {
        &self.output
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.output.quantale()
    }

    pub fn next(&self, state: usize, input: usize) -> usize {
        self.delta[state][input]
    }

    pub fn out(&self, state: usize) -> usize {
        self.out[state]
    }

    /// The state reached after reading `word`.
    pub fn run(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |s, &a| self.delta[s][a])
    }

    fn output_distance(&self, x: usize, y: usize) -> QElem {
        self.output.d(self.out[x], self.out[y])
    }
}

/// A finite Kripke frame: each state has a set of successors.
#[derive(Clone, Debug)]
pub struct KripkeCoalgebra {
    states: Vec<String>,
    successors: Vec<Vec<usize>>,
}

impl KripkeCoalgebra {
    pub fn new(states: Vec<String>, mut successors: Vec<Vec<usize>>) -> Result<KripkeCoalgebra> {
        if successors.len() != states.len() {
            return Err(domain(format!("successor lists must cover all {} states", states.len())));
        }
        for list in &mut successors {
            if let Some(&t) = list.iter().find(|&&t| t >= states.len()) {
                return Err(domain(format!("successor index {t} out of range")));
            }
            list.sort_unstable();
            list.dedup();
        }
        Ok(KripkeCoalgebra { states, successors })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.successors[state]
    }
}

/// A partition of `{0..n}`; classes are sorted and listed by their least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups elements by key; the class numbering follows first occurrence.
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> Partition {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            let id = *ids.entry(k.clone()).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push(i);
        }
        let class_of = (0..keys.len()).map(|i| ids[&keys[i]]).collect();
        Partition { class_of, classes }
    }

    /// The classes of an equivalence relation; fails if `rel` is not one.
    pub fn from_equivalence(rel: &Relation) -> Result<Partition> {
        let n = rel.rows();
        let symmetric = rel.pairs().iter().all(|&(a, b)| rel.contains(b, a));
        if rel.cols() != n || !rel.is_reflexive() || !symmetric || !rel.is_transitive() {
            return Err(domain("relation is not an equivalence"));
        }
        let keys: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| rel.contains(a, b)).expect("reflexive")).collect();
        Ok(Self::from_keys(&keys))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Renders the partition with element labels, e.g. `{s0,s2} {s1}`.
    pub fn render(&self, labels: &[String]) -> String {
        self.classes
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.class_of.len()).map(|i| i.to_string()).collect();
        f.write_str(&self.render(&labels))
    }
}

/// The free V-category on a preorder: `e` where `x' ≤ x` and `⊥` elsewhere.
pub fn base_d(quantale: Arc<Quantale>, p: &Preorder) -> VCat {
    let n = p.len();
    let (e, bot) = (quantale.unit(), quantale.bottom());
    let dist = (0..n).map(|a| (0..n).map(|b| if p.le(a, b) { e } else { bot }).collect()).collect();
    VCat::new(quantale, p.elements().to_vec(), dist).expect("unit and bottom belong to the quantale")
}

/// The preorder `x' ≤ x ⟺ X(x', x) ≠ ⊥`. Requires an integral quantale
/// without zero divisors, which makes the relation transitive.
pub fn base_c(x: &VCat) -> Result<Preorder> {
    let q = x.quantale();
    if !q.is_integral() || !q.is_zero_divisor_free() {
        return Err(unsupported(format!(
            "reading a preorder off non-bottom distances needs an integral quantale without zero divisors; {} is not",
            q.kind()
        )));
    }
    let n = x.len();
    let bot = q.bottom();
    let pairs = (0..n * n).map(|k| (k / n, k % n)).filter(|&(a, b)| !q.equal(x.d(a, b), bot));
    Preorder::new(x.objects().to_vec(), Relation::from_pairs(n, n, pairs))
}

/// Classes of the equivalence generated by `≤`.
pub fn connected_components(p: &Preorder) -> Partition {
    let n = p.len();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], a: usize) -> usize {
        let mut r = a;
        while root[r] != r {
            r = root[r];
        }
        root[a] = r;
        r
    }
    for (a, b) in p.relation().pairs() {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        root[ra.max(rb)] = ra.min(rb);
    }
    let keys: Vec<usize> = (0..n).map(|a| find(&mut root, a)).collect();
    Partition::from_keys(&keys)
}

/// `d(x, y) = ⋀ B(out δ*(x, w), out δ*(y, w))` over all words `w` of length at
/// most `depth`.
pub fn beh_metric_words(m: &MachineCoalgebra, depth: usize) -> Vec<Vec<QElem>> {
    let q = m.quantale();
    let n = m.states.len();
    let base: Vec<Vec<QElem>> = (0..n).map(|x| (0..n).map(|y| m.output_distance(x, y)).collect()).collect();
    let mut d = base.clone();
    for _ in 0..depth {
        d = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let later = q.meet_all((0..m.inputs.len()).map(|a| d[m.next(x, a)][m.next(y, a)]));
                        q.meet2(base[x][y], later)
                    })
                    .collect()
            })
            .collect();
    }
    d
}

#[derive(Clone, Debug)]
pub struct IteratedMetric {
    pub dist: Vec<Vec<QElem>>,
    pub steps: usize,
    pub converged: bool,
}

/// Iterates `d₀ = ⊤`, `d_{n+1}(x, y) = (⋀_a d_n(δ(x,a), δ(y,a))) ⊗ B(out x, out y)`
/// until two successive matrices agree (within `tol` on real-valued
/// quantales) or `max_steps` rounds have run.
pub fn beh_metric_iterate(m: &MachineCoalgebra, max_steps: usize, tol: f64) -> IteratedMetric {
    let q = m.quantale();
    let n = m.states.len();
    let mut d = vec![vec![q.top(); n]; n];
    for step in 1..=max_steps {
        let next: Vec<Vec<QElem>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let later = q.meet_all((0..m.inputs.len()).map(|a| d[m.next(x, a)][m.next(y, a)]));
                        q.mul(later, m.output_distance(x, y))
                    })
                    .collect()
            })
            .collect();
        let close = next.iter().flatten().zip(d.iter().flatten()).all(|(&a, &b)| within(a, b, tol));
        d = next;
        if close {
            return IteratedMetric { dist: d, steps: step, converged: true };
        }
    }
    IteratedMetric { dist: d, steps: max_steps, converged: false }
}

fn within(a: QElem, b: QElem, tol: f64) -> bool {
    match (a, b) {
        (QElem::Real(x), QElem::Real(y)) => x == y || (x - y).abs() <= tol,
        _ => a == b,
    }
}

/// Pairs `(x, y)` with `e ≤ d(x, y)` and `e ≤ d(y, x)`.
pub fn kernel(q: &Quantale, dist: &[Vec<QElem>]) -> Relation {
    let n = dist.len();
    let e = q.unit();
    let pairs = (0..n * n).map(|k| (k / n, k % n)).filter(|&(x, y)| q.le(e, dist[x][y]) && q.le(e, dist[y][x]));
    Relation::from_pairs(n, n, pairs)
}

/// Pointwise comparison of two distance matrices in the quantale order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub equal: usize,
    pub below: usize,
    pub above: usize,
    pub incomparable: usize,
}

pub fn compare(q: &Quantale, left: &[Vec<QElem>], right: &[Vec<QElem>]) -> Comparison {
    let mut c = Comparison::default();
    for (&a, &b) in left.iter().flatten().zip(right.iter().flatten()) {
        match (q.le(a, b), q.le(b, a)) {
            (true, true) => c.equal += 1,
            (true, false) => c.below += 1,
            (false, true) => c.above += 1,
            (false, false) => c.incomparable += 1,
        }
    }
    c
}

fn refine<K: Ord + Clone>(n: usize, initial: Partition, signature: impl Fn(usize, &Partition) -> K) -> Partition {
    let mut p = initial;
    loop {
        let keys: Vec<(usize, K)> = (0..n).map(|x| (p.class_of(x), signature(x, &p))).collect();
        let next = Partition::from_keys(&keys);
        if next.len() == p.len() {
            return next;
        }
        p = next;
    }
}

/// Coarsest partition that respects outputs and is stable under every input.
pub fn bisimilarity(m: &MachineCoalgebra) -> Partition {
    let n = m.states.len();
    refine(n, Partition::from_keys(&m.out), |x, p| (0..m.inputs.len()).map(|a| p.class_of(m.next(x, a))).collect::<Vec<_>>())
}

/// Coarsest partition in which related states have the same set of successor classes.
pub fn kripke_bisimilarity(k: &KripkeCoalgebra) -> Partition {
    let n = k.states.len();
    refine(n, Partition::from_keys(&vec![0; n]), |x, p| {
        let mut classes: Vec<usize> = k.successors[x].iter().map(|&y| p.class_of(y)).collect();
        classes.sort_unstable();
        classes.dedup();
        classes
    })
}

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::quantale::Quantale;
use crate::setfunctor::{Carrier, SetFunctor};
use crate::space::VCat;

use super::kantorovich::PredicateLifting;

/// Where a [`VValuedFunctor`] comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// `D ∘ T` for a set functor `T`.
    Composed(SetFunctor),
    /// `S ↦ D(S^A) ⊗ B`.
    Machine { inputs: usize, outputs: usize },
    PowersetOrder,
    Kantorovich(SetFunctor),
    ConstantOne,
    User(String),
}

/// A functor from finite sets to V-categories, given by its action on sets
/// `{0..n}` and on functions between them.
pub trait VValuedFunctor {
    fn quantale(&self) -> &Arc<Quantale>;

    fn provenance(&self) -> Provenance;

    /// `H(S)` for the set whose elements carry the given labels.
    fn on_set(&self, labels: &[String]) -> Result<VCat>;

    /// Number of objects of `H({0..n})`.
    fn object_count(&self, n: usize) -> Result<usize>;

    /// `H(f)` for `f: {0..f.len()} → {0..dst}`, as an object map.
    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>>;

    /// For each object `C` of `H(Z)`, where `|Z| = p.len()`, the pair
    /// `(H(p)(C), H(q)(C))` with `p: Z → left` and `q: Z → right`.
    fn span_image(&self, p: &[usize], q: &[usize], left: usize, right: usize) -> Result<Vec<(usize, usize)>> {
        let a = self.on_map(p, left)?;
        let b = self.on_map(q, right)?;
        Ok(a.into_iter().zip(b).collect())
    }
}

/// Memoised carriers `T(n)`; the Kan extension evaluates `T` on the same
/// base set once per grid level.
#[derive(Default)]
pub(crate) struct CarrierCache {
    cache: Mutex<HashMap<usize, Arc<Carrier>>>,
}

impl CarrierCache {
    pub(crate) fn get(&self, functor: &SetFunctor, n: usize) -> Result<Arc<Carrier>> {
        if let Some(c) = self.cache.lock().expect("carrier cache poisoned").get(&n) {
            return Ok(c.clone());
        }
        let c = Arc::new(functor.apply_on_set(n)?);
        self.cache.lock().expect("carrier cache poisoned").insert(n, c.clone());
        Ok(c)
    }
}

impl fmt::Debug for CarrierCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CarrierCache")
    }
}

/// `D ∘ T`: the set functor `T` followed by the discrete V-category functor.
#[derive(Debug)]
pub struct Discrete {
    quantale: Arc<Quantale>,
    functor: SetFunctor,
    carriers: CarrierCache,
}

impl Discrete {
    pub fn new(quantale: Arc<Quantale>, functor: SetFunctor) -> Discrete {
        Discrete { quantale, functor, carriers: CarrierCache::default() }
    }

    /// `D` itself.
    pub fn identity(quantale: Arc<Quantale>) -> Discrete {
        Self::new(quantale, SetFunctor::Identity)
    }

    pub fn functor(&self) -> &SetFunctor {
        &self.functor
    }
}

impl VValuedFunctor for Discrete {
    fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    fn provenance(&self) -> Provenance {
        Provenance::Composed(self.functor.clone())
    }

    fn on_set(&self, labels: &[String]) -> Result<VCat> {
        let carrier = self.carriers.get(&self.functor, labels.len())?;
        let objects = carrier.terms.iter().map(|t| SetFunctor::render(t, labels)).collect();
        Ok(VCat::discrete(self.quantale.clone(), objects))
    }

    fn object_count(&self, n: usize) -> Result<usize> {
        Ok(self.carriers.get(&self.functor, n)?.len())
    }

    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        let src = self.carriers.get(&self.functor, f.len())?;
        let dst = self.carriers.get(&self.functor, dst)?;
        Ok(self.functor.map_carrier(&src, &dst, f))
    }

    fn span_image(&self, p: &[usize], q: &[usize], left: usize, right: usize) -> Result<Vec<(usize, usize)>> {
        let l = self.carriers.get(&self.functor, left)?;
        let r = self.carriers.get(&self.functor, right)?;
        self.functor.span_image(p, q, &l, &r)
    }
}

/// The constant functor at the one-object space with self-distance `e`.
#[derive(Debug, Clone)]
pub struct ConstantOne {
    quantale: Arc<Quantale>,
}

impl ConstantOne {
    pub fn new(quantale: Arc<Quantale>) -> ConstantOne {
        ConstantOne { quantale }
    }
}

impl VValuedFunctor for ConstantOne {
    fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    fn provenance(&self) -> Provenance {
        Provenance::ConstantOne
    }

    fn on_set(&self, _labels: &[String]) -> Result<VCat> {
        Ok(VCat::unit(self.quantale.clone()))
    }

    fn object_count(&self, _n: usize) -> Result<usize> {
        Ok(1)
    }

    fn on_map(&self, _f: &[usize], _dst: usize) -> Result<Vec<usize>> {
        Ok(vec![0])
    }
}

/// The machine functor `S ↦ D(S^A) ⊗ B` for an input alphabet `A` and an
/// output space `B`. Objects of `H(S)` are pairs (transition table, output),
/// with the output varying fastest.
#[derive(Debug)]
pub struct Machine {
    inputs: Vec<String>,
    output: VCat,
    tables: Discrete,
}

impl Machine {
    pub fn new(inputs: Vec<String>, output: VCat) -> Machine {
        let tables = Discrete::new(output.quantale().clone(), SetFunctor::Power(inputs.len()));
        Machine { inputs, output, tables }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn output(&self) -> &VCat {
        &self.output
    }
}

impl VValuedFunctor for Machine {
    fn quantale(&self) -> &Arc<Quantale> {
        self.output.quantale()
    }

    fn provenance(&self) -> Provenance {
        Provenance::Machine { inputs: self.inputs.len(), outputs: self.output.len() }
    }

    fn on_set(&self, labels: &[String]) -> Result<VCat> {
        self.tables.on_set(labels)?.tensor(&self.output)
    }

    fn object_count(&self, n: usize) -> Result<usize> {
        Ok(self.tables.object_count(n)? * self.output.len())
    }

    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        let b = self.output.len();
        let tables = self.tables.on_map(f, dst)?;
        Ok(tables.iter().flat_map(|&t| (0..b).map(move |o| t * b + o)).collect())
    }
}

/// Finite subsets with `d(A', A) = e` if `A' ⊆ A` and `⊥` otherwise.
#[derive(Debug)]
pub struct PowersetOrder {
    sets: Discrete,
}

impl PowersetOrder {
    pub fn new(quantale: Arc<Quantale>) -> PowersetOrder {
        PowersetOrder { sets: Discrete::new(quantale, SetFunctor::Powerset) }
    }
}

impl VValuedFunctor for PowersetOrder {
    fn quantale(&self) -> &Arc<Quantale> {
        self.sets.quantale()
    }

    fn provenance(&self) -> Provenance {
        Provenance::PowersetOrder
    }

    fn on_set(&self, labels: &[String]) -> Result<VCat> {
        let q = self.quantale();
        let objects = self.sets.on_set(labels)?.objects().to_vec();
        // Subsets are enumerated by bitmask, so index `i` is the mask itself.
        let n = objects.len();
        let dist = (0..n)
            .map(|a| (0..n).map(|b| if a & !b == 0 { q.unit() } else { q.bottom() }).collect())
            .collect();
        VCat::new(q.clone(), objects, dist)
    }

    fn object_count(&self, n: usize) -> Result<usize> {
        self.sets.object_count(n)
    }

    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        self.sets.on_map(f, dst)
    }

    fn span_image(&self, p: &[usize], q: &[usize], left: usize, right: usize) -> Result<Vec<(usize, usize)>> {
        self.sets.span_image(p, q, left, right)
    }
}

/// `T(S)` with the discrete Kantorovich distances of a predicate lifting.
#[derive(Debug)]
pub struct DiscreteKantorovich {
    lifting: PredicateLifting,
    carriers: CarrierCache,
}

impl DiscreteKantorovich {
    pub fn new(lifting: PredicateLifting) -> DiscreteKantorovich {
        DiscreteKantorovich { lifting, carriers: CarrierCache::default() }
    }
}

impl VValuedFunctor for DiscreteKantorovich {
    fn quantale(&self) -> &Arc<Quantale> {
        self.lifting.quantale()
    }

    fn provenance(&self) -> Provenance {
        Provenance::Kantorovich(self.lifting.functor().clone())
    }

    fn on_set(&self, labels: &[String]) -> Result<VCat> {
        super::kantorovich::discrete_kantorovich(&self.lifting, labels)
    }

    fn object_count(&self, n: usize) -> Result<usize> {
        Ok(self.carriers.get(self.lifting.functor(), n)?.len())
    }

    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        let t = self.lifting.functor();
        let src = self.carriers.get(t, f.len())?;
        let dst = self.carriers.get(t, dst)?;
        Ok(t.map_carrier(&src, &dst, f))
    }

    fn span_image(&self, p: &[usize], q: &[usize], left: usize, right: usize) -> Result<Vec<(usize, usize)>> {
        let t = self.lifting.functor();
        let l = self.carriers.get(t, left)?;
        let r = self.carriers.get(t, right)?;
        t.span_image(p, q, &l, &r)
    }
}

type SetFn = dyn Fn(&[String]) -> Result<VCat> + Send + Sync;
type MapFn = dyn Fn(&[usize], usize) -> Result<Vec<usize>> + Send + Sync;

/// A functor supplied as a pair of closures.
pub struct UserFunctor {
    quantale: Arc<Quantale>,
    name: String,
    on_set: Box<SetFn>,
    on_map: Box<MapFn>,
}

impl UserFunctor {
    pub fn new(
        quantale: Arc<Quantale>,
        name: impl Into<String>,
        on_set: impl Fn(&[String]) -> Result<VCat> + Send + Sync + 'static,
        on_map: impl Fn(&[usize], usize) -> Result<Vec<usize>> + Send + Sync + 'static,
    ) -> UserFunctor {
        UserFunctor { quantale, name: name.into(), on_set: Box::new(on_set), on_map: Box::new(on_map) }
    }
}

impl fmt::Debug for UserFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UserFunctor({})", self.name)
    }
}

impl VValuedFunctor for UserFunctor {
    fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    fn provenance(&self) -> Provenance {
        Provenance::User(self.name.clone())
    }

    fn on_set(&self, labels: &[String]) -> Result<VCat> {
        (self.on_set)(labels)
    }

    fn object_count(&self, n: usize) -> Result<usize> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Ok((self.on_set)(&labels)?.len())
    }

    fn on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        (self.on_map)(f, dst)
    }
}

/// Checks that `H(f)` is non-expanding between `H(S)` and `H(S')`.
pub fn map_is_non_expanding(h: &dyn VValuedFunctor, f: &[usize], dst: usize) -> Result<bool> {
    let src_labels: Vec<String> = (0..f.len()).map(|i| format!("s{i}")).collect();
    let dst_labels: Vec<String> = (0..dst).map(|i| format!("t{i}")).collect();
    let a = h.on_set(&src_labels)?;
    let b = h.on_set(&dst_labels)?;
    let m = h.on_map(f, dst)?;
    let q = h.quantale();
    Ok((0..a.len()).all(|i| (0..a.len()).all(|j| q.le(a.d(i, j), b.d(m[i], m[j])))))
}

pub(crate) fn self_distances_top(x: &VCat) -> bool {
    let q = x.quantale();
    (0..x.len()).all(|i| q.equal(x.d(i, i), q.top()))
}

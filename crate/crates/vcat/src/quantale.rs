//! Commutative quantales: complete lattices carrying a join-preserving
//! commutative monoid structure.
//!
//! Two families are supported. Finite quantales are stored as explicit
//! tables (order, tensor, and the derived joins, meets and residuals).
//! The closed-form kinds `lawvere` (`[0,∞]` with `+`) and `ultrametric`
//! (`[0,1]` with `max`) store elements as real distances; their lattice
//! order is the *reverse* of the real order, so `⊤ = 0` and `⊥` is the
//! largest distance.
//!
//! Operations named after the algebra (`mul`, `join2`, `residual`, `le`, ...)
//! assume their arguments belong to the quantale. The checked variants
//! (`tensor`, `join`, `meet`, `hom`) validate membership first.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{domain, unsupported, Error, Result};
use crate::report::LawReport;

/// Absolute tolerance for comparing real-valued elements.
pub const TOL: f64 = 1e-9;

/// Largest monoid accepted for the free commutative monoid quantale (2^6 subsets).
const MAX_MONOID: usize = 6;

/// Finite quantales up to this size get every subset checked in the law suite.
const EXHAUSTIVE_SUBSETS: usize = 12;

/// An element of some quantale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QElem {
    /// A distance in `[0,∞]`, for the closed-form kinds.
    Real(f64),
    /// An index into the carrier of a finite quantale.
    Fin(u32),
}

impl QElem {
    pub fn real(x: f64) -> Self {
        QElem::Real(x)
    }

    pub fn as_real(self) -> Option<f64> {
        match self {
            QElem::Real(x) => Some(x),
            QElem::Fin(_) => None,
        }
    }

    pub fn as_index(self) -> Option<usize> {
        match self {
            QElem::Fin(i) => Some(i as usize),
            QElem::Real(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuantaleKind {
    Boolean,
    Chain { n: usize, unit: usize },
    Table,
    FreeCommutativeMonoid,
    Lawvere,
    Ultrametric,
}

impl fmt::Display for QuantaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantaleKind::Boolean => write!(f, "boolean-2"),
            QuantaleKind::Chain { n, unit } => write!(f, "chain-{n} (unit {unit})"),
            QuantaleKind::Table => write!(f, "finite-table"),
            QuantaleKind::FreeCommutativeMonoid => write!(f, "free-commutative-monoid"),
            QuantaleKind::Lawvere => write!(f, "lawvere"),
            QuantaleKind::Ultrametric => write!(f, "ultrametric"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureFlags {
    pub integral: bool,
    pub zero_divisor_free: bool,
    pub completely_distributive: bool,
}

/// A finite commutative monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct Monoid {
    pub names: Vec<String>,
    pub op: Vec<Vec<usize>>,
    pub unit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantale {
    kind: QuantaleKind,
    carrier: Carrier,
}

#[derive(Debug, Clone, PartialEq)]
enum Carrier {
    Lawvere,
    Ultrametric,
    Finite(Box<Table>),
}

#[derive(Debug, Clone, PartialEq)]
struct Table {
    names: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    tensor: Vec<u32>,
    unit: u32,
    bottom: u32,
    top: u32,
    join: Vec<u32>,
    meet: Vec<u32>,
    hom: Vec<u32>,
    way_below: Vec<bool>,
    /// Lattice defects found while deriving joins and meets.
    defects: Vec<String>,
    monoid: Option<Monoid>,
}

impl Table {
    fn build(names: Vec<String>, leq: Vec<bool>, tensor: Vec<u32>, unit: u32) -> Table {
        let n = names.len();
        let le = |a: usize, b: usize| leq[a * n + b];
        let mut defects = Vec::new();

        let least = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&d| le(c, d)));
        let greatest = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&d| le(d, c)));

        let all: Vec<usize> = (0..n).collect();
        let bottom = least(&all).unwrap_or_else(|| {
            defects.push("no least element".to_string());
            0
        });
        let top = greatest(&all).unwrap_or_else(|| {
            defects.push("no greatest element".to_string());
            n.saturating_sub(1)
        });

        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let ups: Vec<usize> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
                join[a * n + b] = match least(&ups) {
                    Some(c) => c as u32,
                    None => {
                        defects.push(format!("no least upper bound of ({}, {})", names[a], names[b]));
                        ups.first().copied().unwrap_or(top) as u32
                    }
                };
                let downs: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                meet[a * n + b] = match greatest(&downs) {
                    Some(c) => c as u32,
                    None => {
                        defects.push(format!("no greatest lower bound of ({}, {})", names[a], names[b]));
                        downs.first().copied().unwrap_or(bottom) as u32
                    }
                };
            }
        }

        let mut hom = vec![0u32; n * n];
        for r in 0..n {
            for s in 0..n {
                let mut acc = bottom as usize;
                for t in 0..n {
                    if le(tensor[t * n + r] as usize, s) {
                        acc = join[acc * n + t] as usize;
                    }
                }
                hom[r * n + s] = acc as u32;
            }
        }

        // s ≪ r iff r is not below the join of the largest downset avoiding s,
        // namely {t | s ≰ t}.
        let mut way_below = vec![false; n * n];
        for s in 0..n {
            let mut avoid = bottom as usize;
            for t in 0..n {
                if !le(s, t) {
                    avoid = join[avoid * n + t] as usize;
                }
            }
            for r in 0..n {
                way_below[s * n + r] = !le(r, avoid);
            }
        }

        Table { names, n, leq, tensor, unit, bottom: bottom as u32, top: top as u32, join, meet, hom, way_below, defects, monoid: None }
    }

    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }
}

impl Quantale {
    /// The two-element frame `{0 < 1}` with conjunction as tensor.
    pub fn boolean() -> Quantale {
        let names = vec!["0".to_string(), "1".to_string()];
        let leq = vec![true, true, false, true];
        let tensor = vec![0, 0, 0, 1];
        Quantale {
            kind: QuantaleKind::Boolean,
            carrier: Carrier::Finite(Box::new(Table::build(names, leq, tensor, 1))),
        }
    }

    /// The chain `0 < 1 < ... < n-1` with the idempotent tensor that has the
    /// given unit: a product is the minimum of its factors if any factor lies
    /// strictly below the unit, and the maximum otherwise.
    ///
    /// `chain(3, 1)` is the smallest non-integral quantale (`1⊗2 = 2`);
    /// `chain(3, 2)` is the three-element frame (`1⊗2 = 1`).
    pub fn chain(n: usize, unit: usize) -> Result<Quantale> {
        if n == 0 || unit >= n {
            return Err(domain(format!("chain of length {n} has no element {unit}")));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut leq = vec![false; n * n];
        let mut tensor = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a <= b;
                tensor[a * n + b] = if a < unit || b < unit { a.min(b) } else { a.max(b) } as u32;
            }
        }
        Ok(Quantale {
            kind: QuantaleKind::Chain { n, unit },
            carrier: Carrier::Finite(Box::new(Table::build(names, leq, tensor, unit as u32))),
        })
    }

    /// `[0,∞]` ordered by `≥`, with addition as tensor.
    pub fn lawvere() -> Quantale {
        Quantale { kind: QuantaleKind::Lawvere, carrier: Carrier::Lawvere }
    }

    /// `[0,1]` ordered by `≥`, with `max` as tensor.
    pub fn ultrametric() -> Quantale {
        Quantale { kind: QuantaleKind::Ultrametric, carrier: Carrier::Ultrametric }
    }

    /// A finite quantale from explicit tables.
    ///
    /// `order` lists generating pairs `(a, b)` meaning `a ≤ b`; its
    /// reflexive-transitive closure is used. `tensor[a][b]` is `a ⊗ b`.
    /// Residuals are derived. Law violations (a non-lattice order, a
    /// non-associative tensor, ...) do not make construction fail; they are
    /// reported by [`check_laws`](Self::check_laws).
    pub fn from_table(names: Vec<String>, order: &[(usize, usize)], tensor: Vec<Vec<usize>>, unit: usize) -> Result<Quantale> {
        let n = names.len();
        if n == 0 {
            return Err(domain("a quantale needs at least one element"));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(domain(format!("duplicate element name {a:?}")));
            }
        }
        if unit >= n {
            return Err(domain("unit is not an element"));
        }
        if tensor.len() != n || tensor.iter().any(|row| row.len() != n) {
            return Err(domain(format!("tensor table must be {n}x{n}")));
        }
        let mut rel = crate::relation::Relation::empty(n, n);
        for &(a, b) in order {
            if a >= n || b >= n {
                return Err(domain("order pair mentions an unknown element"));
            }
            rel.insert(a, b);
        }
        let rel = rel.preorder_closure();
        let leq = (0..n * n).map(|k| rel.contains(k / n, k % n)).collect();
        let mut flat = Vec::with_capacity(n * n);
        for row in &tensor {
            for &c in row {
                if c >= n {
                    return Err(domain("tensor table mentions an unknown element"));
                }
                flat.push(c as u32);
            }
        }
        Ok(Quantale {
            kind: QuantaleKind::Table,
            carrier: Carrier::Finite(Box::new(Table::build(names, leq, flat, unit as u32))),
        })
    }

    /// The quantale of subsets of a finite commutative monoid, ordered by
    /// inclusion, with `S ⊗ S' = {x·y | x ∈ S, y ∈ S'}` and unit `{e}`.
    pub fn free_commutative_monoid(monoid: Monoid) -> Result<Quantale> {
        let m = monoid.names.len();
        if m == 0 || m > MAX_MONOID {
            return Err(domain(format!("monoid must have between 1 and {MAX_MONOID} elements")));
        }
        if monoid.unit >= m || monoid.op.len() != m || monoid.op.iter().any(|r| r.len() != m || r.iter().any(|&c| c >= m)) {
            return Err(domain("malformed monoid table"));
        }
        let op = &monoid.op;
        for a in 0..m {
            if op[monoid.unit][a] != a || op[a][monoid.unit] != a {
                return Err(domain(format!("{} is not a unit for {}", monoid.names[monoid.unit], monoid.names[a])));
            }
            for b in 0..m {
                if op[a][b] != op[b][a] {
                    return Err(domain(format!("monoid is not commutative at ({}, {})", monoid.names[a], monoid.names[b])));
                }
                for c in 0..m {
                    if op[op[a][b]][c] != op[a][op[b][c]] {
                        return Err(domain(format!(
                            "monoid is not associative at ({}, {}, {})",
                            monoid.names[a], monoid.names[b], monoid.names[c]
                        )));
                    }
                }
            }
        }
        let n = 1usize << m;
        let names = (0..n)
            .map(|mask| {
                let parts: Vec<&str> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| monoid.names[i].as_str()).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        let mut leq = vec![false; n * n];
        let mut tensor = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & !b == 0;
                let mut prod = 0usize;
                for x in (0..m).filter(|x| a >> x & 1 == 1) {
                    for y in (0..m).filter(|y| b >> y & 1 == 1) {
                        prod |= 1 << op[x][y];
                    }
                }
                tensor[a * n + b] = prod as u32;
            }
        }
        let mut table = Table::build(names, leq, tensor, 1 << monoid.unit);
        table.monoid = Some(monoid);
        Ok(Quantale { kind: QuantaleKind::FreeCommutativeMonoid, carrier: Carrier::Finite(Box::new(table)) })
    }

    pub fn kind(&self) -> &QuantaleKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.carrier, Carrier::Finite(_))
    }

    /// The underlying monoid of a free commutative monoid quantale.
    pub fn monoid(&self) -> Option<&Monoid> {
        match &self.carrier {
            Carrier::Finite(t) => t.monoid.as_ref(),
            _ => None,
        }
    }

    /// Number of elements, for finite quantales.
    pub fn size(&self) -> Option<usize> {
        match &self.carrier {
            Carrier::Finite(t) => Some(t.n),
            _ => None,
        }
    }

    /// All elements, for finite quantales, in table order.
    pub fn elements(&self) -> Option<Vec<QElem>> {
        self.size().map(|n| (0..n as u32).map(QElem::Fin).collect())
    }

    pub fn element_names(&self) -> Option<&[String]> {
        match &self.carrier {
            Carrier::Finite(t) => Some(&t.names),
            _ => None,
        }
    }

    /// Looks up a finite element by name.
    pub fn element(&self, name: &str) -> Result<QElem> {
        match &self.carrier {
            Carrier::Finite(t) => t
                .names
                .iter()
                .position(|x| x == name)
                .map(|i| QElem::Fin(i as u32))
                .ok_or_else(|| domain(format!("{name:?} is not an element of {}", self.kind))),
            _ => Err(domain(format!("{} has no named elements", self.kind))),
        }
    }

    pub fn bottom(&self) -> QElem {
        match &self.carrier {
            Carrier::Lawvere => QElem::Real(f64::INFINITY),
            Carrier::Ultrametric => QElem::Real(1.0),
            Carrier::Finite(t) => QElem::Fin(t.bottom),
        }
    }

    pub fn top(&self) -> QElem {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => QElem::Real(0.0),
            Carrier::Finite(t) => QElem::Fin(t.top),
        }
    }

    pub fn unit(&self) -> QElem {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => QElem::Real(0.0),
            Carrier::Finite(t) => QElem::Fin(t.unit),
        }
    }

    pub fn contains(&self, r: QElem) -> bool {
        match (&self.carrier, r) {
            (Carrier::Lawvere, QElem::Real(x)) => x >= 0.0,
            (Carrier::Ultrametric, QElem::Real(x)) => (0.0..=1.0).contains(&x),
            (Carrier::Finite(t), QElem::Fin(i)) => (i as usize) < t.n,
            _ => false,
        }
    }

    pub fn check(&self, r: QElem) -> Result<QElem> {
        if self.contains(r) {
            Ok(r)
        } else {
            Err(domain(format!("{r:?} is not an element of {}", self.kind)))
        }
    }

    /// `r ≤ s` in the quantale order.
    pub fn le(&self, r: QElem, s: QElem) -> bool {
        match (&self.carrier, r, s) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => t.le(a as usize, b as usize),
            (_, QElem::Real(a), QElem::Real(b)) => a >= b - TOL,
            _ => panic!("element of a different quantale"),
        }
    }

    /// Equality up to [`TOL`] for real elements.
    pub fn equal(&self, r: QElem, s: QElem) -> bool {
        match (r, s) {
            (QElem::Real(a), QElem::Real(b)) => a == b || (a - b).abs() <= TOL,
            (QElem::Fin(a), QElem::Fin(b)) => a == b,
            _ => false,
        }
    }

    pub fn lt(&self, r: QElem, s: QElem) -> bool {
        self.le(r, s) && !self.equal(r, s)
    }

    /// `r ⊗ s`, unchecked.
    pub fn mul(&self, r: QElem, s: QElem) -> QElem {
        match (&self.carrier, r, s) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => QElem::Fin(t.tensor[a as usize * t.n + b as usize]),
            (Carrier::Lawvere, QElem::Real(a), QElem::Real(b)) => QElem::Real(a + b),
            (Carrier::Ultrametric, QElem::Real(a), QElem::Real(b)) => QElem::Real(a.max(b)),
            _ => panic!("element of a different quantale"),
        }
    }

    /// `r ∨ s`, unchecked.
    pub fn join2(&self, r: QElem, s: QElem) -> QElem {
        match (&self.carrier, r, s) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => QElem::Fin(t.join[a as usize * t.n + b as usize]),
            (_, QElem::Real(a), QElem::Real(b)) => QElem::Real(a.min(b)),
            _ => panic!("element of a different quantale"),
        }
    }

    /// `r ∧ s`, unchecked.
    pub fn meet2(&self, r: QElem, s: QElem) -> QElem {
        match (&self.carrier, r, s) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => QElem::Fin(t.meet[a as usize * t.n + b as usize]),
            (_, QElem::Real(a), QElem::Real(b)) => QElem::Real(a.max(b)),
            _ => panic!("element of a different quantale"),
        }
    }

    /// `[r, s]`, the residual of the tensor, unchecked.
    pub fn residual(&self, r: QElem, s: QElem) -> QElem {
        match (&self.carrier, r, s) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => QElem::Fin(t.hom[a as usize * t.n + b as usize]),
            (Carrier::Lawvere, QElem::Real(a), QElem::Real(b)) => QElem::Real(if a >= b - TOL { 0.0 } else { b - a }),
            (Carrier::Ultrametric, QElem::Real(a), QElem::Real(b)) => QElem::Real(if a >= b - TOL { 0.0 } else { b }),
            _ => panic!("element of a different quantale"),
        }
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = QElem>) -> QElem {
        items.into_iter().fold(self.bottom(), |a, b| self.join2(a, b))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = QElem>) -> QElem {
        items.into_iter().fold(self.top(), |a, b| self.meet2(a, b))
    }

    pub fn tensor(&self, r: QElem, s: QElem) -> Result<QElem> {
        Ok(self.mul(self.check(r)?, self.check(s)?))
    }

    pub fn join(&self, items: &[QElem]) -> Result<QElem> {
        for &r in items {
            self.check(r)?;
        }
        Ok(self.join_all(items.iter().copied()))
    }

    pub fn meet(&self, items: &[QElem]) -> Result<QElem> {
        for &r in items {
            self.check(r)?;
        }
        Ok(self.meet_all(items.iter().copied()))
    }

    pub fn hom(&self, r: QElem, s: QElem) -> Result<QElem> {
        Ok(self.residual(self.check(r)?, self.check(s)?))
    }

    pub fn is_integral(&self) -> bool {
        self.equal(self.unit(), self.top())
    }

    pub fn is_zero_divisor_free(&self) -> bool {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => true,
            Carrier::Finite(t) => {
                let bot = t.bottom;
                (0..t.n).all(|a| {
                    (0..t.n).all(|b| t.tensor[a * t.n + b] != bot || a as u32 == bot || b as u32 == bot)
                })
            }
        }
    }

    /// Whether the order is total.
    pub fn is_chain(&self) -> bool {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => true,
            Carrier::Finite(t) => (0..t.n).all(|a| (0..t.n).all(|b| t.le(a, b) || t.le(b, a))),
        }
    }

    /// Whether `r ⊗ r = r` for every element.
    pub fn is_idempotent(&self) -> bool {
        match &self.carrier {
            Carrier::Lawvere => false,
            Carrier::Ultrametric => true,
            Carrier::Finite(t) => (0..t.n).all(|a| t.tensor[a * t.n + a] as usize == a),
        }
    }

    /// Whether the map sending a downset to its join has a left adjoint,
    /// i.e. every element is the join of the elements totally below it.
    pub fn is_completely_distributive(&self) -> bool {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => true,
            Carrier::Finite(t) => (0..t.n).all(|r| {
                let mut acc = t.bottom as usize;
                for s in 0..t.n {
                    if t.way_below[s * t.n + r] {
                        acc = t.join[acc * t.n + s] as usize;
                    }
                }
                t.le(r, acc)
            }),
        }
    }

    pub fn structure_flags(&self) -> StructureFlags {
        StructureFlags {
            integral: self.is_integral(),
            zero_divisor_free: self.is_zero_divisor_free(),
            completely_distributive: self.is_completely_distributive(),
        }
    }

    pub fn require_completely_distributive(&self) -> Result<()> {
        if self.is_completely_distributive() {
            Ok(())
        } else {
            Err(unsupported(format!("{} is not completely distributive", self.kind)))
        }
    }

    /// `s ≪ r`: every downset whose join lies above `r` contains `s`.
    pub fn totally_below(&self, s: QElem, r: QElem) -> Result<bool> {
        self.check(s)?;
        self.check(r)?;
        self.require_completely_distributive()?;
        Ok(self.way_below(s, r))
    }

    pub(crate) fn way_below(&self, s: QElem, r: QElem) -> bool {
        match (&self.carrier, s, r) {
            (Carrier::Finite(t), QElem::Fin(a), QElem::Fin(b)) => t.way_below[a as usize * t.n + b as usize],
            (_, QElem::Real(a), QElem::Real(b)) => a > b + TOL,
            _ => panic!("element of a different quantale"),
        }
    }

    /// Whether `r ≪ s` and `r' ≪ s'` imply `r⊗r' ≪ s⊗s'`. Decided
    /// exhaustively for finite quantales and true for the closed-form kinds.
    pub fn tensor_preserves_totally_below(&self) -> bool {
        match &self.carrier {
            Carrier::Lawvere | Carrier::Ultrametric => true,
            Carrier::Finite(t) => {
                let n = t.n;
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|s| (0..n).map(move |r| (s, r))).filter(|&(s, r)| t.way_below[s * n + r]).collect();
                pairs.iter().all(|&(a, b)| {
                    pairs.iter().all(|&(c, d)| {
                        let lo = t.tensor[a * n + c] as usize;
                        let hi = t.tensor[b * n + d] as usize;
                        t.way_below[lo * n + hi]
                    })
                })
            }
        }
    }

    /// Parses an element: a name for finite kinds, a numeral or `inf` otherwise.
    pub fn parse_elem(&self, text: &str) -> Result<QElem> {
        let text = text.trim();
        match &self.carrier {
            Carrier::Finite(_) => self.element(text),
            _ => {
                let x = match text {
                    "inf" | "infinity" | "∞" => f64::INFINITY,
                    _ => text
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("{text:?} is not a distance")))?,
                };
                if x.is_nan() {
                    return Err(Error::Parse("NaN is not a distance".into()));
                }
                self.check(QElem::Real(x))
            }
        }
    }

    /// Renders an element: its name, or a distance with nine fractional digits.
    pub fn format_elem(&self, r: QElem) -> String {
        match (&self.carrier, r) {
            (Carrier::Finite(t), QElem::Fin(i)) => t.names[i as usize].clone(),
            (_, QElem::Real(x)) if x.is_infinite() => "inf".to_string(),
            (_, QElem::Real(x)) => format!("{:.9}", if x == 0.0 { 0.0 } else { x }),
            _ => format!("{r:?}"),
        }
    }

    /// Checks the quantale laws: exhaustively for finite kinds, on 10^4
    /// seeded samples for the closed-form kinds.
    pub fn check_laws(&self) -> LawReport {
        match &self.carrier {
            Carrier::Finite(t) => check_table(t),
            _ => self.check_laws_sampled(10_000, 0x5eed),
        }
    }

    /// Law suite for the closed-form kinds over `samples` random instances.
    /// Finite kinds ignore the arguments and are checked exhaustively.
    pub fn check_laws_sampled(&self, samples: usize, seed: u64) -> LawReport {
        if let Carrier::Finite(t) = &self.carrier {
            return check_table(t);
        }
        let mut rng = StdRng::seed_from_u64(seed);
        let bound = if self.kind == QuantaleKind::Ultrametric { 1.0 } else { 20.0 };
        let draw = |rng: &mut StdRng| -> QElem {
            let x = match rng.gen_range(0..10) {
                0 => 0.0,
                1 => self.bottom().as_real().unwrap(),
                // Dyadic values keep sums exact.
                2..=5 => (rng.gen_range(0..=(bound * 8.0) as u32) as f64) / 8.0,
                _ => rng.gen_range(0.0..=bound),
            };
            QElem::Real(x)
        };
        let fmt = |r: QElem| self.format_elem(r);
        let mut inst = Vec::with_capacity(samples);
        for _ in 0..samples {
            let len = rng.gen_range(0..4);
            let set: Vec<QElem> = (0..len).map(|_| draw(&mut rng)).collect();
            inst.push((draw(&mut rng), draw(&mut rng), draw(&mut rng), set));
        }

        let mut rep = LawReport::new();
        rep.begin("partial order");
        for (r, s, t, _) in &inst {
            let (r, s, t) = (*r, *s, *t);
            rep.record(self.le(r, r), || format!("reflexivity fails at {}", fmt(r)));
            rep.record(!(self.le(r, s) && self.le(s, r)) || self.equal(r, s), || {
                format!("antisymmetry fails at ({}, {})", fmt(r), fmt(s))
            });
            rep.record(!(self.le(r, s) && self.le(s, t)) || self.le(r, t), || {
                format!("transitivity fails at ({}, {}, {})", fmt(r), fmt(s), fmt(t))
            });
        }
        rep.begin("complete-lattice joins");
        rep.record(self.equal(self.join_all([]), self.bottom()), || "empty join is not bottom".into());
        for (_, _, t, set) in &inst {
            let j = self.join_all(set.iter().copied());
            let upper = set.iter().all(|&s| self.le(s, j));
            let least = !set.iter().all(|&s| self.le(s, *t)) || self.le(j, *t);
            rep.record(upper && least, || format!("join of {:?} is {} but {} bounds the set", set, fmt(j), fmt(*t)));
        }
        rep.begin("tensor monoid laws");
        for (r, s, t, _) in &inst {
            let (r, s, t) = (*r, *s, *t);
            let lhs = self.mul(r, self.mul(s, t));
            let rhs = self.mul(self.mul(r, s), t);
            rep.record(self.equal(lhs, rhs), || format!("associativity fails at ({}, {}, {})", fmt(r), fmt(s), fmt(t)));
            rep.record(self.equal(self.mul(r, s), self.mul(s, r)), || format!("commutativity fails at ({}, {})", fmt(r), fmt(s)));
            rep.record(self.equal(self.mul(self.unit(), r), r), || format!("unit law fails at {}", fmt(r)));
            rep.record(!self.le(r, s) || self.le(self.mul(r, t), self.mul(s, t)), || {
                format!("monotonicity fails at ({}, {}, {})", fmt(r), fmt(s), fmt(t))
            });
        }
        rep.begin("distributivity over joins");
        for (r, _, _, set) in &inst {
            let lhs = self.mul(*r, self.join_all(set.iter().copied()));
            let rhs = self.join_all(set.iter().map(|&s| self.mul(*r, s)));
            rep.record(self.equal(lhs, rhs), || format!("{} ⊗ join {:?} differs from the join of products", fmt(*r), set));
        }
        rep.begin("residuation adjunction");
        for (r, s, t, _) in &inst {
            let (r, s, t) = (*r, *s, *t);
            let left = self.le(self.mul(t, r), s);
            let right = self.le(t, self.residual(r, s));
            rep.record(left == right, || format!("adjunction fails at t={}, r={}, s={}", fmt(t), fmt(r), fmt(s)));
        }
        rep
    }
}

fn check_table(t: &Table) -> LawReport {
    let n = t.n;
    let name = |i: usize| t.names[i].as_str();
    let mul = |a: usize, b: usize| t.tensor[a * n + b] as usize;
    let join = |a: usize, b: usize| t.join[a * n + b] as usize;
    let mut rep = LawReport::new();

    rep.begin("partial order");
    for a in 0..n {
        rep.record(t.le(a, a), || format!("reflexivity fails at {}", name(a)));
        for b in 0..n {
            rep.record(a == b || !(t.le(a, b) && t.le(b, a)), || {
                format!("antisymmetry fails at ({}, {})", name(a), name(b))
            });
            for c in 0..n {
                rep.record(!(t.le(a, b) && t.le(b, c)) || t.le(a, c), || {
                    format!("transitivity fails at ({}, {}, {})", name(a), name(b), name(c))
                });
            }
        }
    }

    rep.begin("complete-lattice joins");
    for d in &t.defects {
        rep.record(false, || d.clone());
    }
    if n <= EXHAUSTIVE_SUBSETS {
        for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let j = members.iter().fold(t.bottom as usize, |acc, &x| join(acc, x));
            let upper = members.iter().all(|&x| t.le(x, j));
            let least = (0..n).filter(|&u| members.iter().all(|&x| t.le(x, u))).all(|u| t.le(j, u));
            rep.record(upper && least, || {
                let names: Vec<&str> = members.iter().map(|&i| name(i)).collect();
                format!("computed join {} of {{{}}} is not the least upper bound", name(j), names.join(","))
            });
        }
    } else {
        for a in 0..n {
            rep.record(t.le(t.bottom as usize, a), || format!("bottom is not below {}", name(a)));
        }
    }

    rep.begin("tensor monoid laws");
    for a in 0..n {
        rep.record(mul(t.unit as usize, a) == a && mul(a, t.unit as usize) == a, || format!("unit law fails at {}", name(a)));
        for b in 0..n {
            rep.record(mul(a, b) == mul(b, a), || format!("commutativity fails at ({}, {})", name(a), name(b)));
            for c in 0..n {
                rep.record(mul(a, mul(b, c)) == mul(mul(a, b), c), || {
                    format!("associativity fails at ({}, {}, {})", name(a), name(b), name(c))
                });
                rep.record(!t.le(a, b) || t.le(mul(a, c), mul(b, c)), || {
                    format!("monotonicity fails at ({}, {}, {})", name(a), name(b), name(c))
                });
            }
        }
    }

    rep.begin("distributivity over joins");
    if n <= EXHAUSTIVE_SUBSETS {
        for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let j = members.iter().fold(t.bottom as usize, |acc, &x| join(acc, x));
            for r in 0..n {
                let lhs = mul(r, j);
                let rhs = members.iter().fold(t.bottom as usize, |acc, &x| join(acc, mul(r, x)));
                rep.record(lhs == rhs, || format!("{} does not distribute over the join of subset {mask:#b}", name(r)));
            }
        }
    } else {
        for r in 0..n {
            rep.record(mul(r, t.bottom as usize) == t.bottom as usize, || format!("{} ⊗ ⊥ is not ⊥", name(r)));
            for a in 0..n {
                for b in 0..n {
                    rep.record(mul(r, join(a, b)) == join(mul(r, a), mul(r, b)), || {
                        format!("{} does not distribute over ({} ∨ {})", name(r), name(a), name(b))
                    });
                }
            }
        }
    }

    rep.begin("residuation adjunction");
    for r in 0..n {
        for s in 0..n {
            let h = t.hom[r * n + s] as usize;
            for u in 0..n {
                rep.record(t.le(mul(u, r), s) == t.le(u, h), || {
                    format!("adjunction fails at t={}, r={}, s={}", name(u), name(r), name(s))
                });
            }
        }
    }
    rep
}

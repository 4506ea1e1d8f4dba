//! Syntactic descriptions of finitary endofunctors on finite sets.
//!
//! A [`SetFunctor`] is evaluated on the set `{0..n}`; the result is a list of
//! [`Term`]s in a canonical order, so elements of `T(n)` can be addressed by
//! index. Subsets and bags are kept sorted, which makes equality of terms
//! structural.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::max_enum;
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetFunctor {
    Identity,
    /// The constant functor on the listed elements.
    Const(Vec<String>),
    /// `X ↦ X^n`.
    Power(usize),
    Product(Vec<SetFunctor>),
    Coproduct(Vec<SetFunctor>),
    /// Lists of length at most the bound.
    List(usize),
    /// Finite subsets.
    Powerset,
    /// Multisets of size at most the bound.
    Multiset(usize),
    /// `Compose(outer, inner)` is `X ↦ outer(inner(X))`.
    Compose(Box<SetFunctor>, Box<SetFunctor>),
}

/// An element of `T(S)` for some functor `T`. Leaves are [`Term::Atom`]s
/// pointing into `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(usize),
    Const(String),
    Tuple(Vec<Term>),
    Tag(usize, Box<Term>),
    Set(Vec<Term>),
    Bag(Vec<Term>),
    List(Vec<Term>),
}

/// `T(n)` together with a lookup from terms to their position.
#[derive(Clone, Debug)]
pub struct Carrier {
    pub terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl Carrier {
    fn new(terms: Vec<Term>) -> Carrier {
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Carrier { terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

impl SetFunctor {
    pub fn compose(outer: SetFunctor, inner: SetFunctor) -> SetFunctor {
        SetFunctor::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn product(parts: impl IntoIterator<Item = SetFunctor>) -> SetFunctor {
        SetFunctor::Product(parts.into_iter().collect())
    }

    /// Every bundled constructor preserves weak pullbacks.
    pub fn preserves_weak_pullbacks(&self) -> bool {
        match self {
            SetFunctor::Product(fs) | SetFunctor::Coproduct(fs) => fs.iter().all(Self::preserves_weak_pullbacks),
            SetFunctor::Compose(a, b) => a.preserves_weak_pullbacks() && b.preserves_weak_pullbacks(),
            _ => true,
        }
    }

    /// `|T(n)|`, or `None` if it does not fit in 128 bits.
    pub fn count(&self, n: usize) -> Option<u128> {
        let n = n as u128;
        match self {
            SetFunctor::Identity => Some(n),
            SetFunctor::Const(s) => Some(s.len() as u128),
            SetFunctor::Power(k) => n.checked_pow(*k as u32),
            SetFunctor::Product(fs) => fs.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.count(n as usize)?)),
            SetFunctor::Coproduct(fs) => fs.iter().try_fold(0u128, |acc, f| acc.checked_add(f.count(n as usize)?)),
            SetFunctor::List(k) => (0..=*k as u32).try_fold(0u128, |acc, i| acc.checked_add(n.checked_pow(i)?)),
            SetFunctor::Powerset => 1u128.checked_shl(u32::try_from(n).ok()?).filter(|_| n < 128),
            SetFunctor::Multiset(k) => (0..=*k as u128).try_fold(0u128, |acc, i| {
                if n == 0 {
                    return acc.checked_add(u128::from(i == 0));
                }
                acc.checked_add(binomial(n + i - 1, i)?)
            }),
            SetFunctor::Compose(outer, inner) => outer.count(usize::try_from(inner.count(n as usize)?).ok()?),
        }
    }

    fn check_size(&self, n: usize, cap: usize) -> Result<()> {
        match self.count(n) {
            Some(c) if c <= cap as u128 => match self {
                SetFunctor::Compose(_, inner) => inner.check_size(n, cap),
                SetFunctor::Product(fs) | SetFunctor::Coproduct(fs) => fs.iter().try_for_each(|f| f.check_size(n, cap)),
                _ => Ok(()),
            },
            _ => Err(Error::Resource(format!("{self} applied to a {n}-element set exceeds the cap of {cap} elements"))),
        }
    }

    /// `T(n)` in canonical order, using the default enumeration cap.
    pub fn apply_on_set(&self, n: usize) -> Result<Carrier> {
        self.apply_on_set_capped(n, max_enum())
    }

    pub fn apply_on_set_capped(&self, n: usize, cap: usize) -> Result<Carrier> {
        self.check_size(n, cap)?;
        let leaves: Vec<Term> = (0..n).map(Term::Atom).collect();
        Ok(Carrier::new(self.enumerate(&leaves)))
    }

    fn enumerate(&self, leaves: &[Term]) -> Vec<Term> {
        match self {
            SetFunctor::Identity => leaves.to_vec(),
            SetFunctor::Const(s) => s.iter().map(|c| Term::Const(c.clone())).collect(),
            SetFunctor::Power(k) => cartesian(&vec![leaves.to_vec(); *k]).into_iter().map(Term::Tuple).collect(),
            SetFunctor::Product(fs) => {
                let parts: Vec<Vec<Term>> = fs.iter().map(|f| f.enumerate(leaves)).collect();
                cartesian(&parts).into_iter().map(Term::Tuple).collect()
            }
            SetFunctor::Coproduct(fs) => fs
                .iter()
                .enumerate()
                .flat_map(|(i, f)| f.enumerate(leaves).into_iter().map(move |t| Term::Tag(i, Box::new(t))))
                .collect(),
            SetFunctor::List(k) => (0..=*k)
                .flat_map(|len| cartesian(&vec![leaves.to_vec(); len]))
                .map(Term::List)
                .collect(),
            SetFunctor::Powerset => {
                let n = leaves.len();
                (0u64..1 << n)
                    .map(|mask| {
                        let mut items: Vec<Term> =
                            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| leaves[i].clone()).collect();
                        items.sort();
                        Term::Set(items)
                    })
                    .collect()
            }
            SetFunctor::Multiset(k) => {
                let mut out = Vec::new();
                for size in 0..=*k {
                    let mut picks = Vec::with_capacity(size);
                    bags(leaves, size, 0, &mut picks, &mut out);
                }
                out
            }
            SetFunctor::Compose(outer, inner) => outer.enumerate(&inner.enumerate(leaves)),
        }
    }

    /// Applies `T` to a term, replacing each leaf by `leaf(leaf_term)` and
    /// restoring canonical form.
    pub fn map_term(&self, term: &Term, leaf: &dyn Fn(&Term) -> Term) -> Term {
        match (self, term) {
            (SetFunctor::Identity, t) => leaf(t),
            (SetFunctor::Const(_), t) => t.clone(),
            (SetFunctor::Power(_), Term::Tuple(items)) => Term::Tuple(items.iter().map(leaf).collect()),
            (SetFunctor::Product(fs), Term::Tuple(items)) => {
                Term::Tuple(fs.iter().zip(items).map(|(f, t)| f.map_term(t, leaf)).collect())
            }
            (SetFunctor::Coproduct(fs), Term::Tag(i, t)) => Term::Tag(*i, Box::new(fs[*i].map_term(t, leaf))),
            (SetFunctor::List(_), Term::List(items)) => Term::List(items.iter().map(leaf).collect()),
            (SetFunctor::Powerset, Term::Set(items)) => {
                let mut out: Vec<Term> = items.iter().map(leaf).collect();
                out.sort();
                out.dedup();
                Term::Set(out)
            }
            (SetFunctor::Multiset(_), Term::Bag(items)) => {
                let mut out: Vec<Term> = items.iter().map(leaf).collect();
                out.sort();
                Term::Bag(out)
            }
            (SetFunctor::Compose(outer, inner), t) => outer.map_term(t, &|sub| inner.map_term(sub, leaf)),
            (f, t) => panic!("term {t:?} does not belong to {f}"),
        }
    }

    /// `T f` for `f: {0..src} → {0..dst}`, as an index map `T(src) → T(dst)`.
    pub fn apply_on_map(&self, f: &[usize], dst: usize) -> Result<Vec<usize>> {
        let source = self.apply_on_set(f.len())?;
        let target = self.apply_on_set(dst)?;
        Ok(self.map_carrier(&source, &target, f))
    }

    pub(crate) fn map_carrier(&self, source: &Carrier, target: &Carrier, f: &[usize]) -> Vec<usize> {
        let leaf = |t: &Term| match t {
            Term::Atom(i) => Term::Atom(f[*i]),
            other => panic!("unexpected leaf {other:?}"),
        };
        source
            .terms
            .iter()
            .map(|t| target.position(&self.map_term(t, &leaf)).expect("image of a term lies in the target carrier"))
            .collect()
    }

    /// For a span `left ← Z → right` given by `p` and `q` (with `|Z| = p.len()`),
    /// the pairs `(Tp(C), Tq(C))` for every `C ∈ T(Z)`, as indices into
    /// `left_carrier` and `right_carrier`.
    pub fn span_image(&self, p: &[usize], q: &[usize], left_carrier: &Carrier, right_carrier: &Carrier) -> Result<Vec<(usize, usize)>> {
        if *self == SetFunctor::Powerset {
            return powerset_span_image(p, q);
        }
        let middle = self.apply_on_set(p.len())?;
        let lp = self.map_carrier(&middle, left_carrier, p);
        let lq = self.map_carrier(&middle, right_carrier, q);
        Ok(lp.into_iter().zip(lq).collect())
    }

    /// `Rel_T(R)` with indices into `apply_on_set(R.rows())` and
    /// `apply_on_set(R.cols())`, computed structurally: componentwise on
    /// tuples and tags, Egli-Milner on finite sets, and perfect matchings on
    /// multisets.
    pub fn relation_lift(&self, rel: &Relation) -> Result<Relation> {
        let left = self.apply_on_set(rel.rows())?;
        let right = self.apply_on_set(rel.cols())?;
        self.relation_lift_on(rel, &left, &right)
    }

    pub(crate) fn relation_lift_on(&self, rel: &Relation, left: &Carrier, right: &Carrier) -> Result<Relation> {
        let leaf = |a: &Term, b: &Term| match (a, b) {
            (Term::Atom(i), Term::Atom(j)) => rel.contains(*i, *j),
            _ => panic!("unexpected leaves {a:?}, {b:?}"),
        };
        let mut out = Relation::empty(left.len(), right.len());
        for (i, a) in left.terms.iter().enumerate() {
            for (j, b) in right.terms.iter().enumerate() {
                if self.related(a, b, &leaf) {
                    out.insert(i, j);
                }
            }
        }
        Ok(out)
    }

    fn related(&self, a: &Term, b: &Term, leaf: &dyn Fn(&Term, &Term) -> bool) -> bool {
        match (self, a, b) {
            (SetFunctor::Identity, a, b) => leaf(a, b),
            (SetFunctor::Const(_), a, b) => a == b,
            (SetFunctor::Power(_), Term::Tuple(xs), Term::Tuple(ys)) | (SetFunctor::List(_), Term::List(xs), Term::List(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| leaf(x, y))
            }
            (SetFunctor::Product(fs), Term::Tuple(xs), Term::Tuple(ys)) => {
                fs.iter().zip(xs.iter().zip(ys)).all(|(f, (x, y))| f.related(x, y, leaf))
            }
            (SetFunctor::Coproduct(fs), Term::Tag(i, x), Term::Tag(j, y)) => i == j && fs[*i].related(x, y, leaf),
            (SetFunctor::Powerset, Term::Set(xs), Term::Set(ys)) => {
                xs.iter().all(|x| ys.iter().any(|y| leaf(x, y))) && ys.iter().all(|y| xs.iter().any(|x| leaf(x, y)))
            }
            (SetFunctor::Multiset(_), Term::Bag(xs), Term::Bag(ys)) => {
                xs.len() == ys.len() && perfect_matching(xs.len(), |i, j| leaf(&xs[i], &ys[j]))
            }
            (SetFunctor::Compose(outer, inner), a, b) => outer.related(a, b, &|x, y| inner.related(x, y, leaf)),
            (f, a, b) => panic!("terms {a:?}, {b:?} do not belong to {f}"),
        }
    }

    /// Renders a term of `T(S)` using the labels of `S`.
    pub fn render(term: &Term, labels: &[String]) -> String {
        let join = |items: &[Term]| items.iter().map(|t| Self::render(t, labels)).collect::<Vec<_>>().join(",");
        match term {
            Term::Atom(i) => labels[*i].clone(),
            Term::Const(c) => c.clone(),
            Term::Tuple(items) => format!("({})", join(items)),
            Term::Tag(i, t) => format!("in{i}({})", Self::render(t, labels)),
            Term::Set(items) => format!("{{{}}}", join(items)),
            Term::Bag(items) => format!("{{|{}|}}", join(items)),
            Term::List(items) => format!("[{}]", join(items)),
        }
    }

    /// Parses expressions such as `powerset`, `multiset(3)`,
    /// `product(identity, const(b0,b1))` or `compose(powerset, powerset)`.
    pub fn parse(text: &str) -> Result<SetFunctor> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let f = p.functor()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }
}

fn cartesian(parts: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for prefix in &acc {
            for t in part {
                let mut row = prefix.clone();
                row.push(t.clone());
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

fn bags(leaves: &[Term], size: usize, from: usize, picks: &mut Vec<usize>, out: &mut Vec<Term>) {
    if picks.len() == size {
        let mut items: Vec<Term> = picks.iter().map(|&i| leaves[i].clone()).collect();
        items.sort();
        out.push(Term::Bag(items));
        return;
    }
    for i in from..leaves.len() {
        picks.push(i);
        bags(leaves, size, i, picks, out);
        picks.pop();
    }
}

impl fmt::Display for SetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |fs: &[SetFunctor]| fs.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            SetFunctor::Identity => write!(f, "identity"),
            SetFunctor::Const(s) => write!(f, "const({})", s.join(",")),
            SetFunctor::Power(n) => write!(f, "power({n})"),
            SetFunctor::Product(fs) => write!(f, "product({})", list(fs)),
            SetFunctor::Coproduct(fs) => write!(f, "coproduct({})", list(fs)),
            SetFunctor::List(n) => write!(f, "list({n})"),
            SetFunctor::Powerset => write!(f, "powerset"),
            SetFunctor::Multiset(n) => write!(f, "multiset({n})"),
            SetFunctor::Compose(a, b) => write!(f, "compose({a}, {b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("functor expression, column {}: {msg}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || b"_-.".contains(&self.src[self.pos])) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        let w = self.word()?;
        w.parse().map_err(|_| self.error(&format!("{w:?} is not a size bound")))
    }

    fn close(&mut self) -> Result<()> {
        if self.eat(b')') {
            Ok(())
        } else {
            Err(self.error("expected ')'"))
        }
    }

    fn functors(&mut self) -> Result<Vec<SetFunctor>> {
        let mut out = vec![self.functor()?];
        while self.eat(b',') {
            out.push(self.functor()?);
        }
        self.close()?;
        Ok(out)
    }

    fn bounded(&mut self, name: &str) -> Result<usize> {
        if !self.eat(b'(') {
            return Err(self.error(&format!("{name} needs an explicit size bound, e.g. {name}(3)")));
        }
        let n = self.number()?;
        self.close()?;
        Ok(n)
    }

    fn functor(&mut self) -> Result<SetFunctor> {
        let name = self.word()?;
        match name.as_str() {
            "identity" | "id" => Ok(SetFunctor::Identity),
            "powerset" => Ok(SetFunctor::Powerset),
            "power" => Ok(SetFunctor::Power(self.bounded("power")?)),
            "list" => Ok(SetFunctor::List(self.bounded("list")?)),
            "multiset" => Ok(SetFunctor::Multiset(self.bounded("multiset")?)),
            "const" => {
                if !self.eat(b'(') {
                    return Err(self.error("const needs a list of elements"));
                }
                let mut items = Vec::new();
                if !self.eat(b')') {
                    items.push(self.word()?);
                    while self.eat(b',') {
                        items.push(self.word()?);
                    }
                    self.close()?;
                }
                Ok(SetFunctor::Const(items))
            }
            "product" | "coproduct" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let fs = self.functors()?;
                Ok(if name == "product" { SetFunctor::Product(fs) } else { SetFunctor::Coproduct(fs) })
            }
            "compose" => {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let fs = self.functors()?;
                let mut it = fs.into_iter().rev();
                let innermost = it.next().expect("at least one functor");
                Ok(it.fold(innermost, |inner, outer| SetFunctor::compose(outer, inner)))
            }
            other => Err(self.error(&format!("unknown functor {other:?}"))),
        }
    }
}

/// Image pairs of every subset of `Z`; powerset carriers are indexed by bitmask.
fn powerset_span_image(p: &[usize], q: &[usize]) -> Result<Vec<(usize, usize)>> {
    let n = p.len();
    let total = 1usize.checked_shl(n as u32).filter(|&t| t <= max_enum()).ok_or_else(|| {
        Error::Resource(format!("powerset applied to a {n}-element set exceeds the cap of {}", max_enum()))
    })?;
    let mut image = vec![(0usize, 0usize); total];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let (a, b) = image[mask & (mask - 1)];
        image[mask] = (a | 1 << p[low], b | 1 << q[low]);
    }
    Ok(image)
}

/// Kuhn's augmenting paths on an `n × n` bipartite graph.
pub(crate) fn perfect_matching(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(i: usize, edge: &dyn Fn(usize, usize) -> bool, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..seen.len() {
            if edge(i, j) && !seen[j] {
                seen[j] = true;
                if owner[j].map_or(true, |k| augment(k, edge, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n];
    (0..n).all(|i| augment(i, &edge, &mut vec![false; n], &mut owner))
}

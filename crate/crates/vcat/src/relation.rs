use std::fmt;

/// A binary relation between `{0..rows}` and `{0..cols}`, stored densely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Relation { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Relation { rows, cols, bits: vec![true; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(rows, cols);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// The graph `{(i, f(i))}` of a function.
    pub fn graph(f: &[usize], cols: usize) -> Self {
        Self::from_pairs(f.len(), cols, f.iter().copied().enumerate())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.cols + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.cols + b] = true;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.cols + b] = false;
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.rows {
            for b in 0..self.cols {
                if self.contains(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.same_shape(other);
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        self.same_shape(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a && b).collect();
        Relation { rows: self.rows, cols: self.cols, bits }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        self.same_shape(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect();
        Relation { rows: self.rows, cols: self.cols, bits }
    }

    /// Relational composite `self ; other`: `a ~ c` iff `a self b` and `b other c` for some `b`.
    pub fn then(&self, other: &Relation) -> Relation {
        assert_eq!(self.cols, other.rows, "relation shapes do not compose");
        let mut out = Relation::empty(self.rows, other.cols);
        for a in 0..self.rows {
            for b in 0..self.cols {
                if self.contains(a, b) {
                    for c in 0..other.cols {
                        if other.contains(b, c) {
                            out.insert(a, c);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.cols, self.rows);
        for (a, b) in self.pairs() {
            out.insert(b, a);
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.then(self).is_subset(self)
    }

    /// Reflexive-transitive closure of an endorelation.
    pub fn preorder_closure(&self) -> Relation {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out.insert(i, i);
        }
        for k in 0..n {
            for i in 0..n {
                if out.contains(i, k) {
                    for j in 0..n {
                        if out.contains(k, j) {
                            out.insert(i, j);
                        }
                    }
                }
            }
        }
        out
    }

    fn same_shape(&self, other: &Relation) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "relations have different shapes"
        );
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation{}x{}{:?}", self.rows, self.cols, self.pairs())
    }
}

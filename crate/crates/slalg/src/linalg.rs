//! Exact sparse linear algebra over the rationals.
//!
//! Everything downstream (boundary ranks, homotopy solves, operator norms)
//! sits on top of this module. Matrices are maps from index pairs to
//! nonzero rationals; elimination is fraction-free in spirit but plain
//! fraction arithmetic in practice, since `BigRational` keeps entries exact.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact scalar type used throughout the crate.
pub type Rat = BigRational;

/// Sparse vector: coordinate index to nonzero value.
pub type SparseVec = BTreeMap<usize, Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Parse "num/den" or "num". Denominator must be nonzero.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse().ok().map(Rat::from_integer),
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// Render as "num" or "num/den" with positive denominator.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// v += c * w
pub fn add_scaled(v: &mut SparseVec, c: &Rat, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&i, x) in w {
        let entry = v.entry(i).or_insert_with(Rat::zero);
        *entry += c * x;
        if entry.is_zero() {
            v.remove(&i);
        }
    }
}

pub fn dot(a: &SparseVec, b: &SparseVec) -> Rat {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = Rat::zero();
    for (i, x) in small {
        if let Some(y) = big.get(i) {
            acc += x * y;
        }
    }
    acc
}

pub fn unit_vec(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Rat::one());
    v
}

/// Sparse rational matrix with explicit shape.
///
/// Invariant: no stored zeros, all indices in bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, rat(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Set column j to the given sparse vector (rows beyond bounds panic).
    pub fn set_col(&mut self, j: usize, col: &SparseVec) {
        for (&i, v) in col {
            self.set(i, j, v.clone());
        }
    }

    pub fn col(&self, j: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for (&(i, jj), x) in &self.entries {
            if jj == j {
                v.insert(i, x.clone());
            }
        }
        v
    }

    /// Column-major view: for each column, its sparse entries.
    pub fn col_major(&self) -> Vec<Vec<(usize, Rat)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(i, j), v) in &self.entries {
            cols[j].push((i, v.clone()));
        }
        cols
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zero(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            t.entries.insert((j, i), v.clone());
        }
        t
    }

    pub fn scale(&self, c: &Rat) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.rows, self.cols);
        if c.is_zero() {
            return m;
        }
        for (&(i, j), v) in &self.entries {
            m.entries.insert((i, j), v * c);
        }
        m
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (&(i, j), v) in &other.entries {
            m.add_to(i, j, v);
        }
        m
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Matrix product, column by column of the right factor.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let own_cols = self.col_major();
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        let mut acc: SparseVec = SparseVec::new();
        let rhs_cols = other.col_major();
        for (j, rc) in rhs_cols.iter().enumerate() {
            acc.clear();
            for (k, v) in rc {
                for (i, a) in &own_cols[*k] {
                    let e = acc.entry(*i).or_insert_with(Rat::zero);
                    *e += a * v;
                }
            }
            for (&i, v) in &acc {
                if !v.is_zero() {
                    out.entries.insert((i, j), v.clone());
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        let cols = self.col_major();
        for (&j, x) in v {
            assert!(j < self.cols, "vector index out of bounds");
            for (i, a) in &cols[j] {
                let e = out.entry(*i).or_insert_with(Rat::zero);
                *e += a * x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// Kronecker product, row-major index convention:
    /// (i1*rows2 + i2, j1*cols2 + j2) -> a[i1,j1] * b[i2,j2].
    pub fn kronecker(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for (&(i1, j1), a) in &self.entries {
            for (&(i2, j2), b) in &other.entries {
                out.entries
                    .insert((i1 * other.rows + i2, j1 * other.cols + j2), a * b);
            }
        }
        out
    }

    /// n-fold Kronecker power (n >= 1).
    pub fn kronecker_power(&self, n: usize) -> SparseMatrix {
        assert!(n >= 1);
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kronecker(self);
        }
        out
    }

    /// Operator norm with respect to the distinguished basis: the maximum
    /// over columns of the sum of absolute values of the column entries.
    pub fn l1_operator_norm(&self) -> Rat {
        let mut col_sums: BTreeMap<usize, Rat> = BTreeMap::new();
        for (&(_, j), v) in &self.entries {
            *col_sums.entry(j).or_insert_with(Rat::zero) += v.abs();
        }
        col_sums.into_values().max().unwrap_or_else(Rat::zero)
    }
}

/// Row echelon factorisation of a sparse matrix, with the transform rows
/// retained so that many right-hand sides can be solved against one
/// elimination.
///
/// Pivot columns are chosen strictly left to right (so the pivot column set
/// is the standard echelon one and the particular solution with free
/// variables zeroed is canonical); among candidate rows the sparsest is
/// taken, which keeps fill-in tolerable on boundary matrices.
pub struct Echelon {
    rows: usize,
    cols: usize,
    pivot_cols: Vec<usize>,
    /// Reduced rows in pivot order, each normalised to leading coefficient 1.
    reduced: Vec<SparseVec>,
    /// Rows of the transform E with E*M = reduced (same order as `reduced`).
    transform: Vec<SparseVec>,
    /// Transform rows whose image row vanished; used for consistency checks.
    null_transform: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(m: &SparseMatrix) -> Self {
        let mut rows: Vec<Option<(SparseVec, SparseVec)>> = Vec::with_capacity(m.rows);
        for i in 0..m.rows {
            rows.push(Some((SparseVec::new(), unit_vec(i))));
        }
        for (&(i, j), v) in &m.entries {
            rows[i].as_mut().unwrap().0.insert(j, v.clone());
        }
        // column -> ids of active rows with a nonzero there
        let mut col_index: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
        for (id, r) in rows.iter().enumerate() {
            for &j in r.as_ref().unwrap().0.keys() {
                col_index[j].insert(id);
            }
        }

        let mut pivot_cols = Vec::new();
        let mut reduced = Vec::new();
        let mut transform = Vec::new();

        for c in 0..m.cols {
            if col_index[c].is_empty() {
                continue;
            }
            let pivot_id = *col_index[c]
                .iter()
                .min_by_key(|&&id| (rows[id].as_ref().unwrap().0.len(), id))
                .unwrap();
            let (mut prow, mut perow) = rows[pivot_id].take().unwrap();
            for &j in prow.keys() {
                col_index[j].remove(&pivot_id);
            }
            let lead = prow.get(&c).unwrap().clone();
            if !lead.is_one() {
                let inv = lead.recip();
                for v in prow.values_mut() {
                    *v *= &inv;
                }
                for v in perow.values_mut() {
                    *v *= &inv;
                }
            }
            let victims: Vec<usize> = col_index[c].iter().cloned().collect();
            for id in victims {
                let (row, erow) = rows[id].as_mut().unwrap();
                let factor = -row.get(&c).unwrap().clone();
                let before: BTreeSet<usize> = row.keys().cloned().collect();
                add_scaled(row, &factor, &prow);
                add_scaled(erow, &factor, &perow);
                // maintain the column index for changed coordinates
                for &j in prow.keys() {
                    let has = row.contains_key(&j);
                    let had = before.contains(&j);
                    if has && !had {
                        col_index[j].insert(id);
                    } else if !has && had {
                        col_index[j].remove(&id);
                    }
                }
            }
            pivot_cols.push(c);
            reduced.push(prow);
            transform.push(perow);
        }

        let mut null_transform = Vec::new();
        for r in rows.into_iter().flatten() {
            debug_assert!(r.0.is_empty());
            null_transform.push(r.1);
        }

        Echelon {
            rows: m.rows,
            cols: m.cols,
            pivot_cols,
            reduced,
            transform,
            null_transform,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Particular solution of M x = b with all free variables zero, or None
    /// when the system is inconsistent.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        debug_assert!(b.keys().all(|&i| i < self.rows));
        for e in &self.null_transform {
            if !dot(e, b).is_zero() {
                return None;
            }
        }
        let mut x = SparseVec::new();
        // back-substitute in reverse pivot order
        for k in (0..self.pivot_cols.len()).rev() {
            let c = self.pivot_cols[k];
            let mut val = dot(&self.transform[k], b);
            for (&j, coef) in self.reduced[k].range((c + 1)..) {
                if let Some(xj) = x.get(&j) {
                    val -= coef * xj;
                }
            }
            if !val.is_zero() {
                x.insert(c, val);
            }
        }
        Some(x)
    }

    /// Echelon basis of the null space: one vector per free column, with a 1
    /// in that column.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let pivots: BTreeSet<usize> = self.pivot_cols.iter().cloned().collect();
        let mut vectors = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut x = unit_vec(f);
            for k in (0..self.pivot_cols.len()).rev() {
                let c = self.pivot_cols[k];
                if c > f {
                    continue;
                }
                let mut val = Rat::zero();
                for (&j, coef) in self.reduced[k].range((c + 1)..) {
                    if let Some(xj) = x.get(&j) {
                        val -= coef * xj;
                    }
                }
                if !val.is_zero() {
                    x.insert(c, val);
                }
            }
            vectors.push(x);
        }
        SubspaceBasis {
            ambient_dim: self.cols,
            vectors,
        }
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    Echelon::new(m).rank()
}

pub fn kernel_basis(m: &SparseMatrix) -> SubspaceBasis {
    Echelon::new(m).kernel_basis()
}

pub fn solve_particular(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    Echelon::new(m).solve(b)
}

/// A linearly independent family of sparse vectors kept in reduced
/// row-echelon form with strictly increasing pivots.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    pub fn empty(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    fn leading(v: &SparseVec) -> Option<usize> {
        v.keys().next().cloned()
    }

    /// Reduce v against the basis; the remainder has no entry at any pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for row in &self.vectors {
            let lead = Self::leading(row).unwrap();
            if let Some(c) = v.get(&lead).cloned() {
                add_scaled(&mut v, &-c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.keys().all(|&i| i < self.ambient_dim));
        let mut r = self.reduce(v);
        let Some(lead) = Self::leading(&r) else {
            return false;
        };
        let c = r.get(&lead).unwrap().clone();
        if !c.is_one() {
            let inv = c.recip();
            for x in r.values_mut() {
                *x *= &inv;
            }
        }
        // back-reduce existing rows so the family stays fully reduced
        for row in &mut self.vectors {
            if let Some(c) = row.get(&lead).cloned() {
                add_scaled(row, &-c, &r);
            }
        }
        let pos = self
            .vectors
            .partition_point(|row| Self::leading(row).unwrap() < lead);
        self.vectors.insert(pos, r);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.vectors
            .iter()
            .map(|v| Self::leading(v).unwrap())
            .collect()
    }
}

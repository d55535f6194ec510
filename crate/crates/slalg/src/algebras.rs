//! Finite-dimensional associative algebras over the rationals with a
//! distinguished basis, algebra homomorphisms, and bimodules.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    solve_particular, unit_vec, Echelon, Rat, SparseMatrix, SparseVec,
};
use crate::semigroups::FiniteSemigroup;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constants are not {0}×{0} for dimension {0}")]
    Shape(usize),
    #[error("structure constant vector at ({i}, {j}) has an index out of range")]
    EntryRange { i: usize, j: usize },
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("declared unit is not a two-sided identity (fails at basis element {0})")]
    BadUnit(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// An algebra given by structure constants on a distinguished basis.
/// The unit is optional: convolution algebras need not be unital.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    basis_labels: Vec<String>,
    /// product[i][j] = coordinates of bᵢ·bⱼ
    product: Vec<Vec<SparseVec>>,
    unit: Option<SparseVec>,
}

pub fn validate_algebra(
    basis_labels: Vec<String>,
    product: Vec<Vec<SparseVec>>,
    unit: Option<SparseVec>,
) -> Result<Algebra, AlgebraError> {
    let d = basis_labels.len();
    if product.len() != d || product.iter().any(|r| r.len() != d) {
        return Err(AlgebraError::Shape(d));
    }
    for (i, row) in product.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.keys().any(|&k| k >= d) {
                return Err(AlgebraError::EntryRange { i, j });
            }
        }
    }
    let a = Algebra {
        basis_labels,
        product,
        unit: None,
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = a.mul_vec(&a.product[i][j], &unit_vec(k));
                let rhs = a.mul_vec(&unit_vec(i), &a.product[j][k]);
                if lhs != rhs {
                    return Err(AlgebraError::NonAssociative { i, j, k });
                }
            }
        }
    }
    if let Some(u) = &unit {
        if u.keys().any(|&k| k >= d) {
            return Err(AlgebraError::EntryRange { i: d, j: d });
        }
        for k in 0..d {
            let e = unit_vec(k);
            if a.mul_vec(u, &e) != e || a.mul_vec(&e, u) != e {
                return Err(AlgebraError::BadUnit(k));
            }
        }
    }
    Ok(Algebra { unit, ..a })
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i][j]
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    /// Bilinear extension of the basis product.
    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, xi) in x {
            for (&j, yj) in y {
                let c = xi * yj;
                for (&k, pk) in &self.product[i][j] {
                    let e = out.entry(k).or_insert_with(Rat::zero);
                    *e += &c * pk;
                    if e.is_zero() {
                        out.remove(&k);
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by the vector `a`.
    pub fn left_mult_matrix(&self, a: &SparseVec) -> SparseMatrix {
        let d = self.dim();
        let mut m = SparseMatrix::zero(d, d);
        for j in 0..d {
            m.set_col(j, &self.mul_vec(a, &unit_vec(j)));
        }
        m
    }

    /// Matrix of right multiplication by the vector `a`.
    pub fn right_mult_matrix(&self, a: &SparseVec) -> SparseMatrix {
        let d = self.dim();
        let mut m = SparseMatrix::zero(d, d);
        for j in 0..d {
            m.set_col(j, &self.mul_vec(&unit_vec(j), a));
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.product[i][j] == self.product[j][i]))
    }
}

/// Group/semigroup algebra: basis indexed by semigroup elements, product of
/// basis vectors given by the multiplication table. The unit is set when the
/// semigroup has an identity element; other algebras may still possess a
/// unit, found by `find_unit`.
pub fn semigroup_algebra(s: &FiniteSemigroup) -> Algebra {
    let d = s.size();
    let product = (0..d)
        .map(|i| (0..d).map(|j| unit_vec(s.product(i, j))).collect())
        .collect();
    let unit = s.identity().map(unit_vec);
    validate_algebra(s.labels().to_vec(), product, unit)
        .expect("semigroup table yields an associative algebra")
}

/// Solve the two-sided identity equations u·bⱼ = bⱼ = bⱼ·u for u.
/// Exact linear solve; returns None when the algebra has no unit.
pub fn find_unit(a: &Algebra) -> Option<SparseVec> {
    let d = a.dim();
    if d == 0 {
        return Some(SparseVec::new());
    }
    // unknown u: rows (2·j·d + k) encode coordinate k of u·bⱼ − bⱼ and bⱼ·u − bⱼ
    let mut m = SparseMatrix::zero(2 * d * d, d);
    let mut rhs = SparseVec::new();
    for j in 0..d {
        for i in 0..d {
            for (&k, c) in a.basis_product(i, j) {
                m.add_to(2 * j * d + k, i, c);
            }
            for (&k, c) in a.basis_product(j, i) {
                m.add_to((2 * j + 1) * d + k, i, c);
            }
        }
        rhs.insert(2 * j * d + j, Rat::one());
        rhs.insert((2 * j + 1) * d + j, Rat::one());
    }
    solve_particular(&m, &rhs)
}

/// A linear map between algebras, stored as a target.dim × source.dim matrix
/// acting on coordinate vectors.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    pub source: Algebra,
    pub target: Algebra,
    pub matrix: SparseMatrix,
}

impl AlgebraHom {
    pub fn identity(a: &Algebra) -> Self {
        AlgebraHom {
            source: a.clone(),
            target: a.clone(),
            matrix: SparseMatrix::identity(a.dim()),
        }
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        self.matrix.apply(x)
    }

    pub fn compose(&self, inner: &AlgebraHom) -> AlgebraHom {
        AlgebraHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        }
    }
}

/// Lift a semigroup homomorphism (index map) to the algebra level.
pub fn hom_from_semigroup_map(
    source: &FiniteSemigroup,
    target: &FiniteSemigroup,
    map: &[usize],
) -> AlgebraHom {
    let mut m = SparseMatrix::zero(target.size(), source.size());
    for (x, &tx) in map.iter().enumerate() {
        m.set(tx, x, Rat::one());
    }
    AlgebraHom {
        source: semigroup_algebra(source),
        target: semigroup_algebra(target),
        matrix: m,
    }
}

/// Validation report for an algebra homomorphism. Contractivity is recorded
/// but never gates anything: the algebraic identities hold regardless of
/// norms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomVerdict {
    /// None when multiplicative, otherwise the first failing basis pair
    pub multiplicative_failure: Option<(usize, usize)>,
    /// Some(true/false) when both units are present
    pub unital: Option<bool>,
    pub norm: Rat,
    pub contractive: bool,
}

impl HomVerdict {
    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative_failure.is_none()
    }
}

pub fn validate_hom(h: &AlgebraHom) -> Result<HomVerdict, AlgebraError> {
    if h.matrix.rows() != h.target.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: h.target.dim(),
            got: h.matrix.rows(),
        });
    }
    if h.matrix.cols() != h.source.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: h.source.dim(),
            got: h.matrix.cols(),
        });
    }
    let d = h.source.dim();
    let mut multiplicative_failure = None;
    'scan: for i in 0..d {
        for j in 0..d {
            let lhs = h.apply(h.source.basis_product(i, j));
            let rhs = h.target.mul_vec(&h.apply(&unit_vec(i)), &h.apply(&unit_vec(j)));
            if lhs != rhs {
                multiplicative_failure = Some((i, j));
                break 'scan;
            }
        }
    }
    let unital = match (h.source.unit(), h.target.unit()) {
        (Some(u), Some(v)) => Some(&h.apply(u) == v),
        _ => None,
    };
    let norm = h.matrix.l1_operator_norm();
    let contractive = norm <= Rat::one();
    Ok(HomVerdict {
        multiplicative_failure,
        unital,
        norm,
        contractive,
    })
}

/// A bimodule over an algebra, given by one left- and one right-action
/// matrix per algebra basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    dim: usize,
    left: Vec<SparseMatrix>,
    right: Vec<SparseMatrix>,
}

impl Bimodule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, i: usize) -> &SparseMatrix {
        &self.left[i]
    }

    pub fn right_action(&self, i: usize) -> &SparseMatrix {
        &self.right[i]
    }

    /// a·x for an algebra coordinate vector a and module vector x.
    pub fn act_left(&self, a: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in a {
            crate::linalg::add_scaled(&mut out, c, &self.left[i].apply(x));
        }
        out
    }

    pub fn act_right(&self, x: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in a {
            crate::linalg::add_scaled(&mut out, c, &self.right[i].apply(x));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("expected one action matrix per algebra basis element")]
    ActionCount,
    #[error("action matrix {0} is not square of the module dimension")]
    ActionShape(usize),
    #[error("left action fails the module axiom on basis pair ({i}, {j})")]
    LeftAxiom { i: usize, j: usize },
    #[error("right action fails the module axiom on basis pair ({i}, {j})")]
    RightAxiom { i: usize, j: usize },
    #[error("left and right actions do not commute on basis pair ({i}, {j})")]
    ActionsDoNotCommute { i: usize, j: usize },
}

pub fn validate_bimodule(
    a: &Algebra,
    dim: usize,
    left: Vec<SparseMatrix>,
    right: Vec<SparseMatrix>,
) -> Result<Bimodule, BimoduleError> {
    let d = a.dim();
    if left.len() != d || right.len() != d {
        return Err(BimoduleError::ActionCount);
    }
    for (i, m) in left.iter().chain(right.iter()).enumerate() {
        if m.rows() != dim || m.cols() != dim {
            return Err(BimoduleError::ActionShape(i % d));
        }
    }
    let act_of = |coeffs: &SparseVec, mats: &[SparseMatrix]| {
        let mut m = SparseMatrix::zero(dim, dim);
        for (&k, c) in coeffs {
            m = m.add(&mats[k].scale(c));
        }
        m
    };
    for i in 0..d {
        for j in 0..d {
            // (bᵢbⱼ)·x = bᵢ·(bⱼ·x)
            if act_of(a.basis_product(i, j), &left) != left[i].mul(&left[j]) {
                return Err(BimoduleError::LeftAxiom { i, j });
            }
            // x·(bᵢbⱼ) = (x·bᵢ)·bⱼ
            if act_of(a.basis_product(i, j), &right) != right[j].mul(&right[i]) {
                return Err(BimoduleError::RightAxiom { i, j });
            }
            // (bᵢ·x)·bⱼ = bᵢ·(x·bⱼ)
            if right[j].mul(&left[i]) != left[i].mul(&right[j]) {
                return Err(BimoduleError::ActionsDoNotCommute { i, j });
            }
        }
    }
    Ok(Bimodule { dim, left, right })
}

/// The algebra acting on itself by multiplication.
pub fn regular_bimodule(a: &Algebra) -> Bimodule {
    let d = a.dim();
    let left = (0..d).map(|i| a.left_mult_matrix(&unit_vec(i))).collect();
    let right = (0..d).map(|i| a.right_mult_matrix(&unit_vec(i))).collect();
    validate_bimodule(a, d, left, right).expect("regular actions satisfy the axioms")
}

/// Dual bimodule: actions transposed and swapped, (a·f)(x) = f(x·a) and
/// (f·a)(x) = f(a·x).
pub fn dual_bimodule(a: &Algebra, m: &Bimodule) -> Bimodule {
    let d = a.dim();
    let left = (0..d).map(|i| m.right[i].transpose()).collect();
    let right = (0..d).map(|i| m.left[i].transpose()).collect();
    validate_bimodule(a, m.dim, left, right).expect("dual actions satisfy the axioms")
}

/// True iff the left and right actions agree on every algebra basis element.
pub fn symmetric_bimodule_check(m: &Bimodule) -> bool {
    m.left == m.right
}

/// One-dimensional bimodule on which the algebra acts on both sides through
/// a character (an algebra hom to the ground field, given by its coordinate
/// row). The character property is verified by the bimodule axioms.
pub fn character_bimodule(a: &Algebra, chi: &SparseVec) -> Result<Bimodule, BimoduleError> {
    let d = a.dim();
    let mats: Vec<SparseMatrix> = (0..d)
        .map(|i| {
            let mut m = SparseMatrix::zero(1, 1);
            if let Some(c) = chi.get(&i) {
                m.set(0, 0, c.clone());
            }
            m
        })
        .collect();
    validate_bimodule(a, 1, mats.clone(), mats)
}

/// Is the given unit vector fixed by the Echelon-based unit solver? Small
/// convenience used by tests and verification suites.
pub fn has_unit(a: &Algebra) -> bool {
    a.unit().is_some() || find_unit(a).is_some()
}

#[allow(dead_code)]
fn _use_echelon(_e: &Echelon) {}

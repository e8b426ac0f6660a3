//! Exact arithmetic on integral symmetric bilinear forms.
//!
//! A [`GramForm`] is a nondegenerate symmetric integer matrix together with
//! its cached invariants (rank, signature, parity, determinant). Classes in
//! `H₂/Tor` are [`HomologyClass`] coordinate vectors tagged with the basis
//! they refer to, and congruences are carried by [`BasisChange`].

mod congruence;
mod enumerate;
mod matrix;
mod reduce;
mod signature;

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use congruence::{congruent_brute, CongruenceOutcome};
pub use enumerate::enumerate_vectors;
pub(crate) use enumerate::{find_first, find_first_definite, find_first_in_ellipsoid, schur_table, SearchExhausted};
pub use matrix::IntMatrix;
pub(crate) use matrix::{fma, kernel_basis};
pub(crate) use reduce::{lll_reduce, majorant_matrix, reduce_by_majorant, reduce_indefinite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("matrix is not symmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    NotSymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error("form is degenerate (determinant 0)")]
    Degenerate,
    #[error("form is not unimodular")]
    NotUnimodular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis mismatch: class is in basis `{found}`, form is in basis `{expected}`")]
    BasisMismatch { expected: BasisId, found: BasisId },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("constraint matrix is rank deficient")]
    RankDeficient,
    #[error("basis change does not verify: {0}")]
    Unverified(String),
}

/// Name of the basis a coordinate vector or Gram matrix refers to.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisId(String);

impl BasisId {
    pub const ORIGINAL: &'static str = "original";
    pub const CANONICAL: &'static str = "canonical";

    pub fn new(name: impl Into<String>) -> Self {
        BasisId(name.into())
    }

    pub fn original() -> Self {
        Self::new(Self::ORIGINAL)
    }

    pub fn canonical() -> Self {
        Self::new(Self::CANONICAL)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Default for BasisId {
    fn default() -> Self {
        Self::original()
    }
}

impl fmt::Debug for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Congruence invariants of a nondegenerate form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariants {
    pub rank: usize,
    pub signature_pos: usize,
    pub signature_neg: usize,
    pub parity: Parity,
    pub determinant: i64,
}

impl Invariants {
    /// `b₂⁺ − b₂⁻`.
    pub fn signature(&self) -> i64 {
        self.signature_pos as i64 - self.signature_neg as i64
    }

    pub fn is_definite(&self) -> bool {
        self.signature_pos == 0 || self.signature_neg == 0
    }

    pub fn is_indefinite(&self) -> bool {
        !self.is_definite()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs() == 1
    }
}

/// A nondegenerate integral symmetric bilinear form given by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GramJson", into = "GramJson")]
pub struct GramForm {
    entries: IntMatrix,
    basis: BasisId,
    invariants: Invariants,
}

/// Wire format: `{"gram": [[int, ...], ...]}`, plus `"basis"` when it is
/// not the original one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramJson {
    pub gram: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisId>,
}

impl TryFrom<GramJson> for GramForm {
    type Error = LatticeError;

    fn try_from(json: GramJson) -> Result<Self, Self::Error> {
        GramForm::with_basis(IntMatrix::from_rows(json.gram)?, json.basis.unwrap_or_default())
    }
}

impl From<GramForm> for GramJson {
    fn from(form: GramForm) -> Self {
        let basis = (form.basis != BasisId::original()).then_some(form.basis);
        GramJson { gram: form.entries.to_rows(), basis }
    }
}

impl GramForm {
    /// Validates symmetry and nondegeneracy and caches the invariants.
    /// The empty (rank 0) form is allowed and has determinant 1.
    pub fn new(entries: IntMatrix) -> Result<Self, LatticeError> {
        Self::with_basis(entries, BasisId::original())
    }

    pub fn with_basis(entries: IntMatrix, basis: BasisId) -> Result<Self, LatticeError> {
        if !entries.is_square() {
            return Err(LatticeError::NotSquare { rows: entries.rows(), cols: entries.cols() });
        }
        let n = entries.rows();
        for i in 0..n {
            for j in 0..i {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(LatticeError::NotSymmetric { i: j, j: i, a: entries[(j, i)], b: entries[(i, j)] });
                }
            }
        }
        let inertia = signature::inertia(&entries);
        if inertia.zero > 0 || inertia.determinant.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let determinant = inertia.determinant.to_i64().ok_or(LatticeError::Overflow)?;
        let parity = if (0..n).all(|i| entries[(i, i)] % 2 == 0) { Parity::Even } else { Parity::Odd };
        let invariants = Invariants {
            rank: n,
            signature_pos: inertia.positive,
            signature_neg: inertia.negative,
            parity,
            determinant,
        };
        Ok(GramForm { entries, basis, invariants })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::diagonal(entries))
    }

    /// The hyperbolic plane `[[0, 1], [1, 0]]`.
    pub fn hyperbolic() -> Self {
        Self::from_rows(vec![vec![0, 1], vec![1, 0]]).expect("H is unimodular")
    }

    pub fn empty() -> Self {
        Self::new(IntMatrix::zeros(0, 0)).expect("empty form is valid")
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn basis(&self) -> &BasisId {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.invariants.rank
    }

    pub fn invariants(&self) -> Invariants {
        self.invariants
    }

    pub fn parity(&self) -> Parity {
        self.invariants.parity
    }

    pub fn is_unimodular(&self) -> bool {
        self.invariants.is_unimodular()
    }

    pub fn relabel(mut self, basis: BasisId) -> Self {
        self.basis = basis;
        self
    }

    pub fn negate(&self) -> Result<GramForm, LatticeError> {
        let entries = self.entries.neg()?;
        let inv = self.invariants;
        let determinant = if inv.rank.is_multiple_of(2) { inv.determinant } else { -inv.determinant };
        Ok(GramForm {
            entries,
            basis: self.basis.clone(),
            invariants: Invariants {
                signature_pos: inv.signature_neg,
                signature_neg: inv.signature_pos,
                determinant,
                ..inv
            },
        })
    }

    /// Block-diagonal sum; invariants add (determinants multiply).
    pub fn direct_sum(&self, other: &GramForm) -> Result<GramForm, LatticeError> {
        let entries = self.entries.direct_sum(&other.entries);
        let a = self.invariants;
        let b = other.invariants;
        let determinant = a.determinant.checked_mul(b.determinant).ok_or(LatticeError::Overflow)?;
        let parity = if a.parity == Parity::Even && b.parity == Parity::Even { Parity::Even } else { Parity::Odd };
        Ok(GramForm {
            entries,
            basis: self.basis.clone(),
            invariants: Invariants {
                rank: a.rank + b.rank,
                signature_pos: a.signature_pos + b.signature_pos,
                signature_neg: a.signature_neg + b.signature_neg,
                parity,
                determinant,
            },
        })
    }

    /// `aᵀ · entries · b`.
    pub fn evaluate(&self, a: &HomologyClass, b: &HomologyClass) -> Result<i64, LatticeError> {
        for c in [a, b] {
            if c.basis != self.basis {
                return Err(LatticeError::BasisMismatch { expected: self.basis.clone(), found: c.basis.clone() });
            }
        }
        self.pair(&a.coords, &b.coords)
    }

    /// `evaluate` on raw coordinate slices in this form's basis.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> Result<i64, LatticeError> {
        let n = self.rank();
        for v in [a, b] {
            if v.len() != n {
                return Err(LatticeError::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let gb = self.entries.mul_vec(b)?;
        a.iter().zip(&gb).try_fold(0, |acc, (&x, &y)| fma(acc, x, y))
    }

    pub fn norm(&self, v: &[i64]) -> Result<i64, LatticeError> {
        self.pair(v, v)
    }

    /// Gram matrix of a family of vectors given in this form's basis.
    pub fn gram_of(&self, vectors: &[Vec<i64>]) -> Result<IntMatrix, LatticeError> {
        let mut out = IntMatrix::zeros(vectors.len(), vectors.len());
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let x = self.pair(a, b)?;
                out[(i, j)] = x;
                out[(j, i)] = x;
            }
        }
        Ok(out)
    }

    /// `Uᵀ · entries · U` as a new form in `target` basis.
    pub fn transform(&self, change: &IntMatrix, target: BasisId) -> Result<GramForm, LatticeError> {
        GramForm::with_basis(change.congruence(&self.entries)?, target)
    }

    /// Coordinate vector of the `i`-th basis element.
    pub fn basis_vector(&self, i: usize) -> HomologyClass {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        HomologyClass::new(coords, self.basis.clone())
    }
}

impl fmt::Debug for GramForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GramForm[{}]{:?}", self.basis, self.entries)
    }
}

/// Integer coordinate vector of a class in `H₂/Tor` in a declared basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyClass {
    pub coords: Vec<i64>,
    pub basis: BasisId,
}

impl HomologyClass {
    pub fn new(coords: Vec<i64>, basis: BasisId) -> Self {
        HomologyClass { coords, basis }
    }

    pub fn original(coords: Vec<i64>) -> Self {
        Self::new(coords, BasisId::original())
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Result<HomologyClass, LatticeError> {
        let coords = self.coords.iter().map(|&x| x.checked_mul(k).ok_or(LatticeError::Overflow)).collect::<Result<_, _>>()?;
        Ok(HomologyClass::new(coords, self.basis.clone()))
    }

    /// `Σ cᵢ · vᵢ` over classes sharing one basis.
    pub fn combination(terms: &[(i64, &HomologyClass)]) -> Result<HomologyClass, LatticeError> {
        let (_, first) = terms.first().expect("at least one term");
        let mut coords = vec![0i64; first.rank()];
        for (c, v) in terms {
            if v.basis != first.basis {
                return Err(LatticeError::BasisMismatch { expected: first.basis.clone(), found: v.basis.clone() });
            }
            if v.rank() != coords.len() {
                return Err(LatticeError::DimensionMismatch { expected: coords.len(), found: v.rank() });
            }
            for (acc, &x) in coords.iter_mut().zip(&v.coords) {
                *acc = fma(*acc, *c, x)?;
            }
        }
        Ok(HomologyClass::new(coords, first.basis.clone()))
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Unimodular matrix `U` with `Uᵀ · source · U = target`. Column `j` of `U`
/// is the `j`-th target basis vector written in source coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub matrix: IntMatrix,
    pub source_basis: BasisId,
    pub target_basis: BasisId,
}

impl BasisChange {
    pub fn new(matrix: IntMatrix, source_basis: BasisId, target_basis: BasisId) -> Result<Self, LatticeError> {
        if !matrix.is_square() {
            return Err(LatticeError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        if !matrix.determinant().abs().to_i64().is_some_and(|d| d == 1) {
            return Err(LatticeError::NotUnimodular);
        }
        Ok(BasisChange { matrix, source_basis, target_basis })
    }

    pub fn identity(rank: usize, source_basis: BasisId, target_basis: BasisId) -> Self {
        BasisChange { matrix: IntMatrix::identity(rank), source_basis, target_basis }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// Checks `|det U| = 1`, `U·U⁻¹ = I` and `Uᵀ · source · U = target` exactly.
    pub fn verify(&self, source: &GramForm, target: &GramForm) -> Result<(), LatticeError> {
        if source.basis() != &self.source_basis {
            return Err(LatticeError::BasisMismatch { expected: self.source_basis.clone(), found: source.basis().clone() });
        }
        if !self.matrix.is_unimodular() {
            return Err(LatticeError::Unverified("|det U| ≠ 1".into()));
        }
        let inv = self.inverse()?;
        if self.matrix.mul(&inv.matrix)? != IntMatrix::identity(self.rank()) {
            return Err(LatticeError::Unverified("U·U⁻¹ ≠ I".into()));
        }
        let image = self.matrix.congruence(source.entries())?;
        if &image != target.entries() {
            return Err(LatticeError::Unverified(format!("Uᵀ·A·U = {image:?} ≠ {:?}", target.entries())));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<BasisChange, LatticeError> {
        Ok(BasisChange {
            matrix: self.matrix.inverse_unimodular()?,
            source_basis: self.target_basis.clone(),
            target_basis: self.source_basis.clone(),
        })
    }

    /// `self` followed by `next`: source of `self` to target of `next`.
    pub fn then(&self, next: &BasisChange) -> Result<BasisChange, LatticeError> {
        if self.target_basis != next.source_basis {
            return Err(LatticeError::BasisMismatch { expected: self.target_basis.clone(), found: next.source_basis.clone() });
        }
        Ok(BasisChange {
            matrix: self.matrix.mul(&next.matrix)?,
            source_basis: self.source_basis.clone(),
            target_basis: next.target_basis.clone(),
        })
    }

    /// Rewrites a target-basis class in source coordinates (`U · v`).
    pub fn pull_back(&self, class: &HomologyClass) -> Result<HomologyClass, LatticeError> {
        if class.basis != self.target_basis {
            return Err(LatticeError::BasisMismatch { expected: self.target_basis.clone(), found: class.basis.clone() });
        }
        Ok(HomologyClass::new(self.matrix.mul_vec(&class.coords)?, self.source_basis.clone()))
    }
}

/// Convenience: `invariants` of a raw matrix, rejecting degenerate input.
pub fn invariants(entries: &IntMatrix) -> Result<Invariants, LatticeError> {
    GramForm::new(entries.clone()).map(|f| f.invariants())
}

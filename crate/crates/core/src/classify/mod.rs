//! Constructive recognition of unimodular intersection forms.
//!
//! Three regimes are handled, each producing a verified [`BasisChange`] to a
//! canonical Gram matrix:
//!
//! * odd indefinite forms are diagonalized to `diag(+1 … , −1 …)`;
//! * even indefinite forms are split as `⊕|a| (±E8) ⊕ b·H`;
//! * definite forms are tested for congruence to `±I`.
//!
//! Searches are bounded (see [`SearchConfig`]); exhausting a bound is
//! reported as inconclusive rather than as a disproof.

mod definite;
mod even;
mod frame;
mod odd;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BasisChange, BasisId, CongruenceOutcome, GramForm, HomologyClass, IntMatrix, LatticeError, Parity};

pub use definite::check_definite_diagonal;
pub use even::{recognize_even_indefinite, split_hyperbolic};
pub use odd::diagonalize_odd;

pub(crate) use frame::is_characteristic_local;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("form is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("form is not odd")]
    NotOdd,
    #[error("form is not even")]
    NotEven,
    #[error("form is definite")]
    Definite,
    #[error("form is indefinite")]
    Indefinite,
    #[error("definite form is not congruent to ±I")]
    NotDiagonalizable,
    #[error("no unit vector found with coordinates up to {ceiling} (inconclusive)")]
    NoUnitVectorWithinBound { ceiling: u32 },
    #[error("no primitive isotropic vector found with coordinates up to {ceiling} (inconclusive)")]
    NoIsotropicWithinBound { ceiling: u32 },
    #[error("invariant mismatch: {0}")]
    InvariantMismatch(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl ClassifyError {
    /// Search exhaustion, as opposed to a property of the input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            ClassifyError::NoUnitVectorWithinBound { .. } | ClassifyError::NoIsotropicWithinBound { .. }
        )
    }
}

/// Bounds for the vector searches behind classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// First coordinate bound tried; doubled on each failure.
    pub start_bound: u32,
    /// Largest coordinate bound tried.
    pub ceiling: u32,
    /// Node limit for a single bounded enumeration.
    pub node_budget: u64,
}

impl SearchConfig {
    pub const DEFAULT_CEILING: u32 = 32;

    pub fn with_ceiling(ceiling: u32) -> Self {
        SearchConfig { ceiling: ceiling.max(1), ..Self::default() }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { start_bound: 2, ceiling: Self::DEFAULT_CEILING, node_budget: 20_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    OddDiagonal,
    EvenIndefinite,
    DefiniteDiagonal,
    Unrecognized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SummandLayout {
    /// Canonical form is `diag(entries)`, positive entries first.
    Diagonal { entries: Vec<i64> },
    /// Canonical form is `⊕|a| (sign(a)·E8) ⊕ b·H`, E8 blocks first. When
    /// `e8_explicit` is false the E8 part is the leftover Gram as found,
    /// checked only by invariants.
    EvenIndefinite { a: i64, b: usize, e8_explicit: bool },
    /// Definite form not congruent to `±I`: unit vectors split off, then a
    /// leftover block with no vector of norm ±1.
    Partial { unit_entries: Vec<i64>, leftover_rank: usize },
}

/// Outcome of recognizing a unimodular form.
///
/// Invariant: `changeᵀ · original · change = canonical`, checked on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ClassKind,
    pub original: GramForm,
    pub change: BasisChange,
    pub canonical: GramForm,
    pub layout: SummandLayout,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Classification {
    /// Assembles a classification from the canonical basis vectors (columns
    /// in original coordinates) and verifies it.
    pub(crate) fn assemble(
        kind: ClassKind,
        original: &GramForm,
        columns: &[Vec<i64>],
        expected: IntMatrix,
        layout: SummandLayout,
    ) -> Result<Self, ClassifyError> {
        let n = original.rank();
        let matrix = IntMatrix::from_columns(columns, n);
        let change = BasisChange::new(matrix, original.basis().clone(), BasisId::canonical())?;
        let canonical = GramForm::with_basis(expected, BasisId::canonical())?;
        change.verify(original, &canonical)?;
        if canonical.invariants() != original.invariants() {
            return Err(ClassifyError::InvariantMismatch("canonical invariants differ from input".into()));
        }
        Ok(Classification { kind, original: original.clone(), change, canonical, layout, notes: Vec::new() })
    }

    pub fn rank(&self) -> usize {
        self.original.rank()
    }

    pub fn parity(&self) -> Parity {
        self.original.parity()
    }

    /// Re-checks `changeᵀ · original · change = canonical`.
    pub fn verify(&self) -> Result<(), LatticeError> {
        self.change.verify(&self.original, &self.canonical)
    }

    pub fn is_recognized(&self) -> bool {
        self.kind != ClassKind::Unrecognized
    }

    /// Diagonal entries for the diagonal kinds.
    pub fn diagonal_entries(&self) -> Option<&[i64]> {
        match &self.layout {
            SummandLayout::Diagonal { entries } => Some(entries),
            _ => None,
        }
    }

    /// Canonical indices of `(η₁, η₂)` for each hyperbolic summand.
    pub fn hyperbolic_pairs(&self) -> Vec<(usize, usize)> {
        match self.layout {
            SummandLayout::EvenIndefinite { a, b, .. } => {
                let offset = 8 * a.unsigned_abs() as usize;
                (0..b).map(|j| (offset + 2 * j, offset + 2 * j + 1)).collect()
            }
            _ => Vec::new(),
        }
    }

    /// `(offset, sign)` for each explicit E8 block in the canonical basis.
    pub fn e8_blocks(&self) -> Vec<(usize, i64)> {
        match self.layout {
            SummandLayout::EvenIndefinite { a, e8_explicit: true, .. } => {
                (0..a.unsigned_abs() as usize).map(|i| (8 * i, a.signum())).collect()
            }
            _ => Vec::new(),
        }
    }

    /// A class in the canonical basis.
    pub fn canonical_class(&self, coords: Vec<i64>) -> HomologyClass {
        HomologyClass::new(coords, BasisId::canonical())
    }

    /// Canonical-basis unit vector `i`.
    pub fn canonical_basis_vector(&self, i: usize) -> HomologyClass {
        self.canonical.basis_vector(i)
    }

    pub fn to_original(&self, class: &HomologyClass) -> Result<HomologyClass, LatticeError> {
        self.change.pull_back(class)
    }
}

/// Dispatches to the recognizer for the form's regime.
pub fn classify(form: &GramForm, config: &SearchConfig) -> Result<Classification, ClassifyError> {
    let inv = form.invariants();
    if !inv.is_unimodular() {
        return Err(ClassifyError::NotUnimodular(inv.determinant));
    }
    if inv.is_definite() {
        check_definite_diagonal(form, config)
    } else if inv.parity == Parity::Odd {
        diagonalize_odd(form, config)
    } else {
        recognize_even_indefinite(form, config)
    }
}

/// Congruence decision through classification: equal canonical forms give
/// an explicit `U = U_a · U_b⁻¹`; differing recognized layouts or invariants
/// prove incongruence; anything else is inconclusive.
pub fn congruent(a: &GramForm, b: &GramForm, config: &SearchConfig) -> Result<CongruenceOutcome, ClassifyError> {
    if a.invariants() != b.invariants() {
        return Ok(CongruenceOutcome::Incongruent { reason: "invariants differ".into() });
    }
    let ca = classify(a, config)?;
    let cb = classify(b, config)?;
    let definitive = |c: &Classification| {
        c.is_recognized() && !matches!(c.layout, SummandLayout::EvenIndefinite { e8_explicit: false, .. })
    };
    if ca.canonical.entries() == cb.canonical.entries() {
        let back = cb.change.inverse()?;
        let matrix = ca.change.matrix.mul(&back.matrix)?;
        let change = BasisChange::new(matrix, a.basis().clone(), b.basis().clone())?;
        change.verify(a, b)?;
        return Ok(CongruenceOutcome::Congruent { change });
    }
    if definitive(&ca) && definitive(&cb) {
        return Ok(CongruenceOutcome::Incongruent { reason: "canonical forms differ".into() });
    }
    if ca.is_recognized() != cb.is_recognized() {
        return Ok(CongruenceOutcome::Incongruent { reason: "only one form is congruent to ±I".into() });
    }
    Ok(CongruenceOutcome::NotFound)
}

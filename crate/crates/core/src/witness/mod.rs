//! Explicit homology classes and sublattices that certify feasibility:
//! single classes of prescribed square, `(φ₁, φ₂)` pairs for sphere bundles,
//! and orthogonal families `⊕ₘ⟨k⟩ ⊕ₙ⟨−k⟩`.
//!
//! Witnesses are built in the canonical basis of a [`Classification`],
//! pulled back to the original basis and re-verified there.

mod e8;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ClassKind, Classification, SummandLayout};
use crate::lattice::{GramForm, HomologyClass, IntMatrix, LatticeError, Parity};

pub use e8::{e8_combinations, e8_constants, e8_sublattice, e8_sublattice_from, h_generators, h_sublattice, A8, G};
pub use table::{bundle_row, local_gram, BundleRow, BUNDLE_TABLE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("not feasible: {0}")]
    NotFeasible(String),
    #[error("rank insufficient: need {needed}, have {available}")]
    RankInsufficient { needed: usize, available: usize },
    #[error("k = {k} is not available for {parity} forms")]
    ParityMismatch { k: i64, parity: Parity },
    #[error("unsupported k = {0}")]
    InvalidK(i64),
    #[error("form was not recognized; no canonical basis to build witnesses in")]
    Unrecognized,
    #[error("E8 summands were not identified explicitly")]
    E8Unavailable,
    #[error("witness failed verification: {0}")]
    Unverified(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Whether `φ·x ≡ x·x (mod 2)` for every basis vector `x`.
pub fn is_characteristic(form: &GramForm, phi: &HomologyClass) -> bool {
    phi.rank() == form.rank() && crate::classify::is_characteristic_local(form.entries(), &phi.coords)
}

/// Classes in `ambient` whose Gram matrix should equal `target_gram`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeEmbedding {
    pub ambient: GramForm,
    pub generators: Vec<HomologyClass>,
    /// The same generators in the classification's canonical basis, when
    /// they were built there.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub canonical_generators: Vec<HomologyClass>,
    pub target_gram: GramForm,
    /// `Gram(generators) − target_gram`.
    pub residual: IntMatrix,
}

impl SublatticeEmbedding {
    pub fn new(
        ambient: GramForm,
        generators: Vec<HomologyClass>,
        canonical_generators: Vec<HomologyClass>,
        target_gram: GramForm,
    ) -> Result<Self, WitnessError> {
        let residual = Self::compute_residual(&ambient, &generators, &target_gram)?;
        Ok(SublatticeEmbedding { ambient, generators, canonical_generators, target_gram, residual })
    }

    fn compute_residual(ambient: &GramForm, generators: &[HomologyClass], target: &GramForm) -> Result<IntMatrix, WitnessError> {
        for g in generators {
            if g.basis != *ambient.basis() {
                return Err(LatticeError::BasisMismatch { expected: ambient.basis().clone(), found: g.basis.clone() }.into());
            }
        }
        if generators.len() != target.rank() {
            return Err(LatticeError::DimensionMismatch { expected: target.rank(), found: generators.len() }.into());
        }
        let coords: Vec<Vec<i64>> = generators.iter().map(|g| g.coords.clone()).collect();
        let gram = ambient.gram_of(&coords)?;
        let n = gram.rows();
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = gram[(i, j)].checked_sub(target.entries()[(i, j)]).ok_or(LatticeError::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn coords(&self) -> Vec<Vec<i64>> {
        self.generators.iter().map(|g| g.coords.clone()).collect()
    }

    /// Recomputes the residual and requires it to vanish.
    pub fn verify(&self) -> Result<(), WitnessError> {
        self.verify_against(&self.ambient)
    }

    /// Verifies the generators against another form (e.g. the user's input).
    pub fn verify_against(&self, form: &GramForm) -> Result<(), WitnessError> {
        let r = Self::compute_residual(form, &self.generators, &self.target_gram)?;
        if r.max_abs() != 0 || r != self.residual {
            return Err(WitnessError::Unverified(format!("Gram residual {r:?}")));
        }
        Ok(())
    }
}

/// A class of prescribed self-intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWitness {
    pub phi: HomologyClass,
    pub phi_canonical: HomologyClass,
    pub self_intersection: i64,
    pub characteristic: bool,
}

impl ClassWitness {
    pub fn degree(&self) -> i64 {
        self.self_intersection.abs()
    }

    pub fn residual(&self, form: &GramForm) -> Result<i64, WitnessError> {
        Ok(form.norm(&self.phi.coords)? - self.self_intersection)
    }

    pub fn verify(&self, form: &GramForm) -> Result<(), WitnessError> {
        match self.residual(form)? {
            0 => Ok(()),
            r => Err(WitnessError::Unverified(format!("φ·φ − {} = {r}", self.self_intersection))),
        }
    }

    /// The same class seen in the oppositely oriented manifold.
    pub fn reversed(&self) -> ClassWitness {
        ClassWitness { self_intersection: -self.self_intersection, ..self.clone() }
    }
}

/// Classes with `φ₁·φ₁ = nd`, `φ₁·φ₂ = d`, `φ₂·φ₂ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub phi1: HomologyClass,
    pub phi2: HomologyClass,
    pub n: i64,
    pub d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<(HomologyClass, HomologyClass)>,
}

impl PairWitness {
    pub fn residuals(&self, form: &GramForm) -> Result<[i64; 3], WitnessError> {
        let (a, b) = (&self.phi1.coords, &self.phi2.coords);
        Ok([form.norm(a)? - self.n * self.d, form.pair(a, b)? - self.d, form.norm(b)?])
    }

    pub fn verify(&self, form: &GramForm) -> Result<(), WitnessError> {
        match self.residuals(form)? {
            [0, 0, 0] => Ok(()),
            r => Err(WitnessError::Unverified(format!("pair residuals {r:?}"))),
        }
    }
}

/// Indices of the `+1` and `−1` canonical basis vectors of a diagonal
/// classification.
fn diagonal_split(entries: &[i64]) -> (Vec<usize>, Vec<usize>) {
    let pos = (0..entries.len()).filter(|&i| entries[i] > 0).collect();
    let neg = (0..entries.len()).filter(|&i| entries[i] < 0).collect();
    (pos, neg)
}

fn require_recognized(cls: &Classification) -> Result<(), WitnessError> {
    if cls.kind == ClassKind::Unrecognized {
        Err(WitnessError::Unrecognized)
    } else {
        Ok(())
    }
}

fn canonical(cls: &Classification, terms: &[(i64, usize)]) -> HomologyClass {
    let mut coords = vec![0; cls.rank()];
    for &(c, i) in terms {
        coords[i] += c;
    }
    cls.canonical_class(coords)
}

/// A class `φ` with `φ·φ = d > 0` in the original basis: `d = 4` immersed;
/// embedded `d = 9` when `b₂ = 1`, else `5` (odd) or `6` (even).
///
/// Odd: `2δ₁`, `3δ₁`, `(2 − δ₂·δ₂)δ₁ + 2δ₂`. Even: `η₁ + 2η₂`, `η₁ + 3η₂`.
pub fn cp2_witness(cls: &Classification, embedded: bool) -> Result<(ClassWitness, i64), WitnessError> {
    require_recognized(cls)?;
    let inv = cls.original.invariants();
    if inv.signature_pos == 0 {
        return Err(WitnessError::NotFeasible("b₂⁺ = 0".into()));
    }
    let (terms, d) = match &cls.layout {
        SummandLayout::Diagonal { entries } => {
            let (pos, _) = diagonal_split(entries);
            let d1 = pos[0];
            match (embedded, inv.rank) {
                (false, _) => (vec![(2, d1)], 4),
                (true, 1) => (vec![(3, d1)], 9),
                (true, _) => {
                    let d2 = if d1 == 0 { 1 } else { 0 };
                    (vec![(2 - entries[d2], d1), (2, d2)], 5)
                }
            }
        }
        SummandLayout::EvenIndefinite { .. } => {
            let (e, f) = cls.hyperbolic_pairs()[0];
            if embedded {
                (vec![(1, e), (3, f)], 6)
            } else {
                (vec![(1, e), (2, f)], 4)
            }
        }
        SummandLayout::Partial { .. } => return Err(WitnessError::Unrecognized),
    };
    let phi_canonical = canonical(cls, &terms);
    let phi = cls.to_original(&phi_canonical)?;
    let w = ClassWitness {
        characteristic: is_characteristic(&cls.original, &phi),
        phi,
        phi_canonical,
        self_intersection: d,
    };
    w.verify(&cls.original)?;
    Ok((w, d))
}

/// `count` mutually orthogonal sphere-bundle witnesses from the table row
/// for `(parity, twisted, embedded)`, each on its own basis pair.
pub fn bundle_witnesses(
    cls: &Classification,
    count: usize,
    twisted: bool,
    embedded: bool,
) -> Result<Vec<PairWitness>, WitnessError> {
    require_recognized(cls)?;
    let inv = cls.original.invariants();
    if inv.is_definite() {
        return Err(WitnessError::NotFeasible("form is definite".into()));
    }
    let slots: Vec<(usize, usize)> = match &cls.layout {
        SummandLayout::Diagonal { entries } => {
            let (pos, neg) = diagonal_split(entries);
            pos.into_iter().zip(neg).collect()
        }
        SummandLayout::EvenIndefinite { .. } => cls.hyperbolic_pairs(),
        SummandLayout::Partial { .. } => return Err(WitnessError::Unrecognized),
    };
    if slots.len() < count {
        return Err(WitnessError::RankInsufficient { needed: count, available: slots.len() });
    }
    let row = bundle_row(inv.parity, twisted, embedded);
    slots
        .into_iter()
        .take(count)
        .map(|(x, y)| {
            let c1 = canonical(cls, &[(row.phi1[0], x), (row.phi1[1], y)]);
            let c2 = canonical(cls, &[(row.phi2[0], x), (row.phi2[1], y)]);
            let w = PairWitness {
                phi1: cls.to_original(&c1)?,
                phi2: cls.to_original(&c2)?,
                n: row.n,
                d: row.d,
                canonical: Some((c1, c2)),
            };
            w.verify(&cls.original)?;
            Ok(w)
        })
        .collect()
}

/// `(φ₁, φ₂)` for `S² × S²` (`n = 0`) or the twisted bundle (`n = 1`).
pub fn bundle_witness(cls: &Classification, twisted: bool, embedded: bool) -> Result<PairWitness, WitnessError> {
    Ok(bundle_witnesses(cls, 1, twisted, embedded)?.remove(0))
}

/// Orthogonal family `⊕ₘ⟨k⟩ ⊕ₙ⟨−k⟩` in the original basis.
///
/// Diagonal forms: `k = 4` uses `2δ`, `k = 9` uses `3δ`, and `k = 5` pairs
/// each generator `δ` (of sign `s`) with a spare basis vector `δ'` as
/// `(2 − s·δ'·δ')δ + 2δ'`, which needs `b₂ ≥ 2(m + n)`. Even forms take
/// `k ∈ {4, 6}`: positive generators come from `+E8` blocks, then from
/// `e + (k/2)f` in hyperbolic planes; negative ones from `−E8`, then
/// `e − (k/2)f`.
pub fn lambda_sublattice(cls: &Classification, m: usize, n: usize, k: i64) -> Result<SublatticeEmbedding, WitnessError> {
    require_recognized(cls)?;
    let inv = cls.original.invariants();
    if inv.signature_pos < m {
        return Err(WitnessError::RankInsufficient { needed: m, available: inv.signature_pos });
    }
    if inv.signature_neg < n {
        return Err(WitnessError::RankInsufficient { needed: n, available: inv.signature_neg });
    }
    let canonical_gens: Vec<HomologyClass> = match &cls.layout {
        SummandLayout::Diagonal { entries } => diagonal_lambda(cls, entries, m, n, k)?,
        SummandLayout::EvenIndefinite { a, e8_explicit, .. } => even_lambda(cls, *a, *e8_explicit, m, n, k)?,
        SummandLayout::Partial { .. } => return Err(WitnessError::Unrecognized),
    };
    let generators = canonical_gens.iter().map(|c| cls.to_original(c)).collect::<Result<Vec<_>, _>>()?;
    let mut diag = vec![k; m];
    diag.extend(std::iter::repeat_n(-k, n));
    let s = SublatticeEmbedding::new(cls.original.clone(), generators, canonical_gens, GramForm::diagonal(&diag)?)?;
    s.verify()?;
    Ok(s)
}

fn diagonal_lambda(cls: &Classification, entries: &[i64], m: usize, n: usize, k: i64) -> Result<Vec<HomologyClass>, WitnessError> {
    let (pos, neg) = diagonal_split(entries);
    let primaries: Vec<usize> = pos.iter().take(m).chain(neg.iter().take(n)).copied().collect();
    match k {
        4 | 9 => {
            let c = if k == 4 { 2 } else { 3 };
            Ok(primaries.iter().map(|&i| canonical(cls, &[(c, i)])).collect())
        }
        5 => {
            let needed = 2 * (m + n);
            if entries.len() < needed {
                return Err(WitnessError::RankInsufficient { needed, available: entries.len() });
            }
            let spare: Vec<usize> = (0..entries.len()).filter(|i| !primaries.contains(i)).collect();
            Ok(primaries
                .iter()
                .zip(spare)
                .map(|(&p, q)| canonical(cls, &[(2 - entries[p] * entries[q], p), (2, q)]))
                .collect())
        }
        6 => Err(WitnessError::ParityMismatch { k, parity: Parity::Odd }),
        _ => Err(WitnessError::InvalidK(k)),
    }
}

fn even_lambda(cls: &Classification, a: i64, e8_explicit: bool, m: usize, n: usize, k: i64) -> Result<Vec<HomologyClass>, WitnessError> {
    match k {
        4 | 6 => {}
        5 | 9 => return Err(WitnessError::ParityMismatch { k, parity: Parity::Even }),
        _ => return Err(WitnessError::InvalidK(k)),
    }
    let (u, v) = h_generators(k)?;
    let pairs = cls.hyperbolic_pairs();
    let e8_rows: Vec<Vec<i64>> = if a == 0 {
        Vec::new()
    } else {
        let g = e8::matrix(&G);
        e8_combinations(k)?.iter().map(|c| g.mul_vec(c)).collect::<Result<_, _>>()?
    };

    let take = |want: usize, sign: i64, h: [i64; 2]| -> Result<Vec<HomologyClass>, WitnessError> {
        let mut out = Vec::with_capacity(want);
        if a.signum() == sign && e8_explicit {
            for block in 0..a.unsigned_abs() as usize {
                for row in &e8_rows {
                    if out.len() == want {
                        break;
                    }
                    let terms: Vec<(i64, usize)> = row.iter().enumerate().map(|(j, &c)| (c, 8 * block + j)).collect();
                    out.push(canonical(cls, &terms));
                }
            }
        }
        for &(e, f) in &pairs {
            if out.len() == want {
                break;
            }
            out.push(canonical(cls, &[(h[0], e), (h[1], f)]));
        }
        if out.len() < want {
            return Err(WitnessError::E8Unavailable);
        }
        Ok(out)
    };
    let mut gens = take(m, 1, u)?;
    gens.extend(take(n, -1, v)?);
    Ok(gens)
}

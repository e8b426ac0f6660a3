//! The E8 Gram matrix `A8`, the orthogonal frame `G` of norm-2 vectors in
//! it, and the diagonal sublattices built from them.

use crate::lattice::{GramForm, HomologyClass, IntMatrix, LatticeError};

use super::{SublatticeEmbedding, WitnessError};

/// Gram matrix of E8 in a basis of simple roots.
pub const A8: [[i64; 8]; 8] = [
    [2, 1, 0, 0, 0, 0, 0, 0],
    [1, 2, 1, 0, 0, 0, 0, 0],
    [0, 1, 2, 1, 0, 0, 0, 0],
    [0, 0, 1, 2, 1, 0, 0, 0],
    [0, 0, 0, 1, 2, 1, 0, 1],
    [0, 0, 0, 0, 1, 2, 1, 0],
    [0, 0, 0, 0, 0, 1, 2, 0],
    [0, 0, 0, 0, 1, 0, 0, 2],
];

/// Columns `g₁ … g₈` (in the `A8` basis) span `⊕₈⟨2⟩ ⊂ E8`.
pub const G: [[i64; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, -2],
    [1, 0, 0, 0, 0, 1, 1, 3],
    [0, 0, 0, 0, 0, -2, -2, -4],
    [0, 1, 0, 0, 1, 2, 3, 5],
    [0, 0, 0, 0, -2, -2, -4, -6],
    [0, 0, 1, 0, 1, 1, 3, 4],
    [0, 0, 0, 0, 0, 0, -2, -2],
    [0, 0, 0, 1, 1, 1, 2, 3],
];

pub(crate) fn matrix(rows: &[[i64; 8]; 8]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("8×8")
}

/// `(E8 as a form in the A8 basis, G)`.
pub fn e8_constants() -> (GramForm, IntMatrix) {
    (GramForm::new(matrix(&A8)).expect("A8 is unimodular"), matrix(&G))
}

/// Coefficients over `g₁ … g₈` of the eight generators of `⊕₈⟨k⟩ ⊂ E8`.
pub fn e8_combinations(k: i64) -> Result<Vec<[i64; 8]>, WitnessError> {
    let unit = |i: usize| {
        let mut c = [0; 8];
        c[i] = 1;
        c
    };
    match k {
        2 => Ok((0..8).map(unit).collect()),
        4 => Ok((0..4)
            .flat_map(|i| {
                let (a, b) = (2 * i, 2 * i + 1);
                let mut plus = [0; 8];
                plus[a] = 1;
                plus[b] = 1;
                let mut minus = plus;
                minus[b] = -1;
                [plus, minus]
            })
            .collect()),
        6 => Ok([0usize, 4]
            .into_iter()
            .flat_map(|i| {
                let combo = |terms: [(usize, i64); 3]| {
                    let mut c = [0; 8];
                    for (j, s) in terms {
                        c[i + j - 1] = s;
                    }
                    c
                };
                [
                    combo([(1, 1), (2, 1), (3, -1)]),
                    combo([(1, 1), (2, -1), (4, 1)]),
                    combo([(1, 1), (3, 1), (4, -1)]),
                    combo([(2, 1), (3, 1), (4, 1)]),
                ]
            })
            .collect()),
        _ => Err(WitnessError::InvalidK(k)),
    }
}

/// `⊕₈⟨k⟩ ⊂ E8` for `k ∈ {2, 4, 6}` computed from explicit constants, so a
/// corrupted `G` shows up as a nonzero residual rather than a panic.
pub fn e8_sublattice_from(a8: &IntMatrix, g: &IntMatrix, k: i64) -> Result<SublatticeEmbedding, WitnessError> {
    let ambient = GramForm::new(a8.clone())?;
    let generators = e8_combinations(k)?
        .iter()
        .map(|c| g.mul_vec(c).map(HomologyClass::original))
        .collect::<Result<Vec<_>, LatticeError>>()?;
    let target = GramForm::new(IntMatrix::diagonal(&[k; 8]))?;
    SublatticeEmbedding::new(ambient, generators, Vec::new(), target)
}

/// `⊕₈⟨k⟩ ⊂ E8` for `k ∈ {2, 4, 6}`, verified.
pub fn e8_sublattice(k: i64) -> Result<SublatticeEmbedding, WitnessError> {
    let s = e8_sublattice_from(&matrix(&A8), &matrix(&G), k)?;
    s.verify()?;
    Ok(s)
}

/// Coordinates of `u = e + (k/2)f` and `v = e − (k/2)f` in `H = ⟨e, f⟩`.
pub fn h_generators(k: i64) -> Result<([i64; 2], [i64; 2]), WitnessError> {
    if k < 4 || k % 2 != 0 {
        return Err(WitnessError::InvalidK(k));
    }
    Ok(([1, k / 2], [1, -k / 2]))
}

/// `⟨k⟩ ⊕ ⟨−k⟩ ⊂ H` for even `k ≥ 4`, verified.
pub fn h_sublattice(k: i64) -> Result<SublatticeEmbedding, WitnessError> {
    let (u, v) = h_generators(k)?;
    let s = SublatticeEmbedding::new(
        GramForm::hyperbolic(),
        vec![HomologyClass::original(u.to_vec()), HomologyClass::original(v.to_vec())],
        Vec::new(),
        GramForm::diagonal(&[k, -k])?,
    )?;
    s.verify()?;
    Ok(s)
}

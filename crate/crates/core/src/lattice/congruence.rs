use serde::{Deserialize, Serialize};

use super::{enumerate_vectors, BasisChange, GramForm, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CongruenceOutcome {
    /// `Uᵀ·A·U = B`, verified.
    Congruent { change: BasisChange },
    /// A congruence invariant differs; this is a proof of non-congruence.
    Incongruent { reason: String },
    /// The bounded search found nothing. Inconclusive.
    NotFound,
}

impl CongruenceOutcome {
    pub fn is_congruent(&self) -> bool {
        matches!(self, CongruenceOutcome::Congruent { .. })
    }
}

/// Backtracking search for a unimodular `U` with entries in
/// `[−coord_bound, coord_bound]` such that `Uᵀ·A·U = B`.
///
/// Column `j` of `U` must have norm `B_jj` under `A` and pair to `B_ij` with
/// every earlier column. Meant for rank ≤ 4.
pub fn congruent_brute(a: &GramForm, b: &GramForm, coord_bound: u32) -> CongruenceOutcome {
    let (ia, ib) = (a.invariants(), b.invariants());
    let checks = [
        (ia.rank != ib.rank, "rank differs"),
        (ia.parity != ib.parity, "parity differs"),
        ((ia.signature_pos, ia.signature_neg) != (ib.signature_pos, ib.signature_neg), "signature differs"),
        (ia.determinant != ib.determinant, "determinant differs"),
    ];
    if let Some((_, reason)) = checks.iter().find(|(bad, _)| *bad) {
        return CongruenceOutcome::Incongruent { reason: reason.to_string() };
    }
    let n = ia.rank;
    let target = b.entries();
    let candidates: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|j| {
            enumerate_vectors(a, target[(j, j)], coord_bound)
                .into_iter()
                .flat_map(|v| {
                    let neg: Vec<i64> = v.coords.iter().map(|x| -x).collect();
                    [v.coords, neg]
                })
                .collect()
        })
        .collect();

    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
    if search(a, target, &candidates, &mut chosen) {
        let u = IntMatrix::from_columns(&chosen, n);
        if let Ok(change) = BasisChange::new(u, a.basis().clone(), b.basis().clone()) {
            if change.verify(a, b).is_ok() {
                return CongruenceOutcome::Congruent { change };
            }
        }
    }
    CongruenceOutcome::NotFound
}

fn search(a: &GramForm, target: &IntMatrix, candidates: &[Vec<Vec<i64>>], chosen: &mut Vec<Vec<i64>>) -> bool {
    let j = chosen.len();
    if j == candidates.len() {
        return IntMatrix::from_columns(chosen, j).is_unimodular();
    }
    for v in &candidates[j] {
        let fits = chosen.iter().enumerate().all(|(i, u)| a.pair(u, v).ok() == Some(target[(i, j)]));
        if fits {
            chosen.push(v.clone());
            if search(a, target, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

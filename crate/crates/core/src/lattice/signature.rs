use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Result of congruence-diagonalizing a symmetric matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    /// Product of pivots (and `−b²` per hyperbolic block); equals the determinant.
    pub determinant: BigInt,
}

/// Symmetric Gaussian elimination with exact rationals.
///
/// A nonzero diagonal pivot is eliminated on its own. When the whole
/// remaining diagonal vanishes but some off-diagonal `b` does not, the
/// `[[0, b], [b, 0]]` block is eliminated at once and contributes one
/// positive and one negative direction.
pub(crate) fn inertia(gram: &IntMatrix) -> Inertia {
    debug_assert!(gram.is_symmetric());
    let mut m: Vec<Vec<BigRational>> = gram
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut det = BigRational::one();

    while !m.is_empty() {
        let n = m.len();
        if let Some(p) = (0..n).find(|&i| !m[i][i].is_zero()) {
            let pivot = m[p][p].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            let next = rest
                .iter()
                .map(|&i| {
                    rest.iter()
                        .map(|&j| &m[i][j] - &m[i][p] * &m[p][j] / &pivot)
                        .collect()
                })
                .collect();
            det *= pivot;
            m = next;
            continue;
        }
        let block = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
        let Some((p, q)) = block else {
            zero += n;
            det = BigRational::zero();
            break;
        };
        // The 2×2 block [[0, b], [b, 0]] has inverse [[0, 1/b], [1/b, 0]].
        let b = m[p][q].clone();
        pos += 1;
        neg += 1;
        let rest: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
        let next = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| {
                        let correction = (&m[i][p] * &m[q][j] + &m[i][q] * &m[p][j]) / &b;
                        &m[i][j] - correction
                    })
                    .collect()
            })
            .collect();
        det *= -(&b * &b);
        m = next;
    }

    debug_assert!(det.is_integer());
    Inertia { positive: pos, negative: neg, zero, determinant: det.to_integer() }
}

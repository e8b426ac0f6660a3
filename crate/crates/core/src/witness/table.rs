use serde::Serialize;

use crate::lattice::Parity;

/// One row of the sphere-bundle witness table. Coefficients are over a
/// local basis pair: `(δ₁, δ₂)` with `δ₁² = 1, δ₂² = −1` for odd forms and
/// a hyperbolic pair `(η₁, η₂)` for even forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BundleRow {
    pub parity: Parity,
    pub twisted: bool,
    pub embedded: bool,
    pub d: i64,
    pub n: i64,
    pub phi1: [i64; 2],
    pub phi2: [i64; 2],
}

const fn row(parity: Parity, twisted: bool, embedded: bool, d: i64, n: i64, phi1: [i64; 2], phi2: [i64; 2]) -> BundleRow {
    BundleRow { parity, twisted, embedded, d, n, phi1, phi2 }
}

pub const BUNDLE_TABLE: [BundleRow; 8] = [
    row(Parity::Odd, false, false, 4, 0, [1, 1], [2, -2]),
    row(Parity::Odd, false, true, 6, 0, [1, 1], [3, -3]),
    row(Parity::Odd, true, false, 4, 1, [2, 0], [2, -2]),
    row(Parity::Odd, true, true, 5, 1, [3, 2], [1, -1]),
    row(Parity::Even, false, false, 4, 0, [1, 0], [0, 4]),
    row(Parity::Even, false, true, 5, 0, [1, 0], [0, 5]),
    row(Parity::Even, true, false, 4, 1, [1, 2], [0, 4]),
    row(Parity::Even, true, true, 6, 1, [1, 3], [0, 6]),
];

pub fn bundle_row(parity: Parity, twisted: bool, embedded: bool) -> &'static BundleRow {
    BUNDLE_TABLE
        .iter()
        .find(|r| r.parity == parity && r.twisted == twisted && r.embedded == embedded)
        .expect("table covers every combination")
}

/// Gram matrix of the local basis pair for a parity.
pub fn local_gram(parity: Parity) -> [[i64; 2]; 2] {
    match parity {
        Parity::Odd => [[1, 0], [0, -1]],
        Parity::Even => [[0, 1], [1, 0]],
    }
}

impl BundleRow {
    /// `(φ₁·φ₁ − nd, φ₁·φ₂ − d, φ₂·φ₂)` on the local model; all zero when
    /// the row is correct.
    pub fn residuals(&self) -> [i64; 3] {
        let g = local_gram(self.parity);
        let pair = |a: [i64; 2], b: [i64; 2]| -> i64 {
            (0..2).flat_map(|i| (0..2).map(move |j| a[i] * g[i][j] * b[j])).sum()
        };
        [
            pair(self.phi1, self.phi1) - self.n * self.d,
            pair(self.phi1, self.phi2) - self.d,
            pair(self.phi2, self.phi2),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_satisfies_the_equations() {
        for r in &BUNDLE_TABLE {
            assert_eq!(r.residuals(), [0, 0, 0], "{r:?}");
        }
    }

    #[test]
    fn immersed_rows_have_degree_four() {
        assert!(BUNDLE_TABLE.iter().filter(|r| !r.embedded).all(|r| r.d == 4));
        assert_eq!(bundle_row(Parity::Odd, true, true).d, 5);
        assert_eq!(bundle_row(Parity::Even, false, true).d, 5);
        assert_eq!(bundle_row(Parity::Odd, false, true).d, 6);
        assert_eq!(bundle_row(Parity::Even, true, true).d, 6);
    }
}

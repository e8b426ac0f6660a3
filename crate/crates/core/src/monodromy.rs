//! Branch data of simple branched coverings of `S²`: ordered transpositions
//! in `S_d`, one per branch point, with identity product and transitive
//! action.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A transposition `(i j)` on 1-based sheets, smaller index first.
pub type Transposition = (usize, usize);

/// Wire format: `{"degree": d, "points": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchData {
    pub degree: usize,
    pub points: Vec<Transposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    #[error("degree {degree} is below 2")]
    DegreeTooSmall { degree: usize },
    #[error("point {index} is not a transposition of 1..{degree}: ({}, {})", pair.0, pair.1)]
    InvalidPoint { index: usize, pair: Transposition, degree: usize },
    #[error("product of the transpositions is {product}, not the identity")]
    ProductNotIdentity { product: String },
    #[error("action is not transitive: sheet orbit of 1 is {orbit:?}")]
    NotTransitive { orbit: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("branch data does not verify: {0}")]
    NotVerified(Violation),
    #[error("odd number of branch points ({0})")]
    OddBranchCount(usize),
    #[error("new degree {new} does not exceed current degree {current}")]
    DegreeNotIncreasing { current: usize, new: usize },
    #[error("arithmetic overflow")]
    Overflow,
}

/// A permutation of `0..n` written as `p[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Perm(Vec<usize>);

impl Perm {
    fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Post-composes with the transposition of `a` and `b` (0-based).
    fn then_swap(&mut self, a: usize, b: usize) {
        for x in self.0.iter_mut() {
            if *x == a {
                *x = b;
            } else if *x == b {
                *x = a;
            }
        }
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycle notation on 1-based sheets, fixed points omitted.
    fn cycles(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.0[x];
            }
            out.push_str(&format!("({})", cycle.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl BranchData {
    /// Normalizes every pair to smaller index first. No validation.
    pub fn new(degree: usize, points: impl IntoIterator<Item = Transposition>) -> Self {
        let points = points.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect();
        BranchData { degree, points }
    }

    pub fn branch_count(&self) -> usize {
        self.points.len()
    }

    /// Checks the degree, each point, the identity product and transitivity,
    /// reporting the first failure in that order.
    pub fn verify(&self) -> Result<(), Violation> {
        let d = self.degree;
        if d < 2 {
            return Err(Violation::DegreeTooSmall { degree: d });
        }
        for (index, &(i, j)) in self.points.iter().enumerate() {
            if !(1 <= i && i < j && j <= d) {
                return Err(Violation::InvalidPoint { index, pair: (i, j), degree: d });
            }
        }
        let mut product = Perm::identity(d);
        for &(i, j) in &self.points {
            product.then_swap(i - 1, j - 1);
        }
        if !product.is_identity() {
            return Err(Violation::ProductNotIdentity { product: product.cycles() });
        }
        let orbit = self.orbit_of_first();
        if orbit.len() != d {
            return Err(Violation::NotTransitive { orbit });
        }
        Ok(())
    }

    /// Sheets reachable from sheet 1 under the generated subgroup.
    fn orbit_of_first(&self) -> Vec<usize> {
        let mut reached = vec![false; self.degree + 1];
        reached[1] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(i, j) in &self.points {
                if reached[i] != reached[j] {
                    reached[i] = true;
                    reached[j] = true;
                    changed = true;
                }
            }
        }
        (1..=self.degree).filter(|&s| reached[s]).collect()
    }

    /// Genus of the covering surface by Riemann–Hurwitz, `1 − d + B/2`.
    pub fn total_genus(&self) -> Result<u64, MonodromyError> {
        self.verify().map_err(MonodromyError::NotVerified)?;
        let b = self.points.len();
        if !b.is_multiple_of(2) {
            return Err(MonodromyError::OddBranchCount(b));
        }
        let genus = 1 + (b / 2) as i64 - self.degree as i64;
        u64::try_from(genus).map_err(|_| MonodromyError::Overflow)
    }

    /// Covering stabilization up to degree `new_degree`: appends
    /// `(j j+1), (j j+1)` for `j = d, …, new_degree − 1`.
    pub fn stabilize(&self, new_degree: usize) -> Result<BranchData, MonodromyError> {
        if new_degree <= self.degree {
            return Err(MonodromyError::DegreeNotIncreasing { current: self.degree, new: new_degree });
        }
        let mut points = self.points.clone();
        for j in self.degree..new_degree {
            points.push((j, j + 1));
            points.push((j, j + 1));
        }
        Ok(BranchData { degree: new_degree, points })
    }
}

impl fmt::Display for BranchData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} [", self.degree)?;
        for (k, (i, j)) in self.points.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({i} {j})")?;
        }
        f.write_str("]")
    }
}

/// The `d`-fold stabilization of the hyperelliptic 2-fold covering of a
/// genus-`g` surface: `2g + 2` copies of `(1 2)`, then `(j j+1)` twice for
/// `j = 2, …, d − 1`.
pub fn stabilized_two_fold(genus: usize, degree: usize) -> BranchData {
    assert!(degree >= 2, "degree must be at least 2");
    let base = BranchData { degree: 2, points: vec![(1, 2); 2 * genus + 2] };
    if degree == 2 {
        base
    } else {
        base.stabilize(degree).expect("degree increases")
    }
}

/// Number of branch points of [`stabilized_two_fold`], `2(g + d − 1)`.
pub fn branch_disk_count(genus: u64, degree: u64) -> u64 {
    2 * (genus + degree - 1)
}

/// Euler number of the pullback of a disk bundle of Euler number `e` under
/// a `d`-fold branched covering of the base.
pub fn euler_pullback(degree: i64, euler: i64) -> Result<i64, MonodromyError> {
    degree.checked_mul(euler).ok_or(MonodromyError::Overflow)
}

/// An oriented disk bundle over a closed surface of genus `base_genus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskBundleLabel {
    pub base_genus: u64,
    pub euler: i64,
}

impl DiskBundleLabel {
    /// The bundle pulled back along a branched covering with `data`.
    pub fn pull_back(&self, data: &BranchData) -> Result<DiskBundleLabel, MonodromyError> {
        Ok(DiskBundleLabel { base_genus: data.total_genus()?, euler: euler_pullback(data.degree as i64, self.euler)? })
    }
}

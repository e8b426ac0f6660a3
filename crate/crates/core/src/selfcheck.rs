//! Exact re-verification of the built-in constants: the E8 Gram matrix and
//! its sublattice frame, the hyperbolic sublattices and the bundle table.

use std::fmt;

use crate::lattice::{GramForm, IntMatrix, Parity};
use crate::witness::{self, BUNDLE_TABLE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{ok}/{} checks passed", self.checks.len())
    }
}

/// Runs every check on the built-in constants.
pub fn run() -> SelfCheckReport {
    run_with(&witness::A8, &witness::G)
}

/// Runs the checks with the given E8 Gram matrix and frame `G`.
pub fn run_with(a8: &[[i64; 8]; 8], g: &[[i64; 8]; 8]) -> SelfCheckReport {
    let a8 = IntMatrix::from_rows(a8.iter().map(|r| r.to_vec()).collect()).expect("8x8");
    let g = IntMatrix::from_rows(g.iter().map(|r| r.to_vec()).collect()).expect("8x8");
    let mut checks = Vec::new();
    let mut push = |name: &str, outcome: Result<String, String>| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(CheckResult { name: name.to_string(), passed, detail });
    };

    push(
        "e8-invariants",
        match GramForm::new(a8.clone()) {
            Ok(form) => {
                let i = form.invariants();
                let want = (8, 8, 0, Parity::Even, 1);
                let got = (i.rank, i.signature_pos, i.signature_neg, i.parity, i.determinant);
                if got == want {
                    Ok("rank 8, signature (8,0), even, det 1".into())
                } else {
                    Err(format!("got {got:?}"))
                }
            }
            Err(e) => Err(e.to_string()),
        },
    );

    push(
        "e8-frame",
        match g.transpose().mul(&a8).and_then(|m| m.mul(&g)) {
            Ok(m) if m == IntMatrix::diagonal(&[2; 8]) => Ok("GᵀA8G = 2·I8".into()),
            Ok(m) => Err(format!("GᵀA8G = {:?}", m.to_rows())),
            Err(e) => Err(e.to_string()),
        },
    );

    for k in [4, 6] {
        push(
            &format!("e8-sublattice-{k}"),
            match witness::e8_sublattice_from(&a8, &g, k) {
                Ok(s) if s.residual.max_abs() == 0 => Ok(format!("Gram = {k}·I8 (36 products)")),
                Ok(s) => Err(format!("residual {:?}", s.residual.to_rows())),
                Err(e) => Err(e.to_string()),
            },
        );
    }

    for k in [4, 6] {
        push(
            &format!("h-sublattice-{k}"),
            match witness::h_sublattice(k).and_then(|s| s.verify().map(|_| s)) {
                Ok(s) => Ok(format!("u={:?} v={:?}, Gram diag({k},{})", s.generators[0].coords, s.generators[1].coords, -k)),
                Err(e) => Err(e.to_string()),
            },
        );
    }

    for row in &BUNDLE_TABLE {
        let name = format!(
            "bundle-{}-{}-d{}",
            row.parity,
            if row.twisted { "twisted" } else { "trivial" },
            row.d
        );
        let r = row.residuals();
        push(
            &name,
            if r == [0, 0, 0] {
                Ok(format!("φ₁={:?} φ₂={:?} n={}", row.phi1, row.phi2, row.n))
            } else {
                Err(format!("residuals (φ₁·φ₁−nd, φ₁·φ₂−d, φ₂·φ₂) = {r:?}"))
            },
        );
    }

    SelfCheckReport { checks }
}

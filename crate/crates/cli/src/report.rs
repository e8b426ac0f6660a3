use std::fmt::Write as _;

use covermap_core::lattice::Invariants;
use covermap_core::planner::{FeasibilityReport, ManifoldInvariants, Verdict};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "covermap-report/1";

/// Which branch surface the witness column describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchMode {
    Immersed,
    Embedded,
}

impl BranchMode {
    pub fn embedded(self) -> bool {
        self == BranchMode::Embedded
    }
}

/// The document printed by `analyze --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: String,
    pub branch: BranchMode,
    pub input: ManifoldInvariants,
    pub invariants: Invariants,
    /// Some classification search hit its ceiling.
    pub inconclusive: bool,
    pub reports: Vec<FeasibilityReport>,
}

impl AnalysisReport {
    pub fn new(input: ManifoldInvariants, branch: BranchMode, inconclusive: bool, reports: Vec<FeasibilityReport>) -> Self {
        let invariants = input.form.invariants();
        AnalysisReport { schema: SCHEMA.to_string(), branch, input, invariants, inconclusive, reports }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let i = &self.invariants;
        let mut out = String::new();
        let branch = if self.branch.embedded() { "embedded" } else { "immersed" };
        let _ = writeln!(out, "{SCHEMA}  branch: {branch}");
        let _ = writeln!(
            out,
            "rank {}  signature ({},{})  {}  det {}  b1 {}",
            i.rank, i.signature_pos, i.signature_neg, i.parity, i.determinant, self.input.b1
        );
        if let Some(n) = self.input.free_quotient_rank {
            let _ = writeln!(out, "free quotient rank {n}");
        }
        if self.inconclusive {
            let _ = writeln!(out, "classification inconclusive; raise COVERMAP_ENUM_CEILING");
        }
        out.push('\n');

        let header = ["BASE", "VERDICT", "IMMERSED", "EMBEDDED", "WITNESS", "CAVEATS"];
        let rows: Vec<[String; 6]> = self.reports.iter().map(|r| self.row(r)).collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut line = |cells: &[String]| {
            let mut l = String::new();
            for (k, cell) in cells.iter().enumerate() {
                if k + 1 == cells.len() {
                    l.push_str(cell);
                } else {
                    let pad = widths[k] - cell.chars().count();
                    l.push_str(cell);
                    l.extend(std::iter::repeat_n(' ', pad + 2));
                }
            }
            let _ = writeln!(out, "{}", l.trim_end());
        };
        line(&header.map(String::from));
        for row in &rows {
            line(row);
        }
        out
    }

    fn row(&self, r: &FeasibilityReport) -> [String; 6] {
        let degree = |d: Option<u32>| d.map_or_else(|| "-".to_string(), |d| d.to_string());
        let verdict = match r.verdict {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Undetermined => "undetermined",
        };
        let witness = match r.witness(self.branch.embedded()) {
            Some(w) => format!("d={}: {}", w.degree, w.witness.summary()),
            None => match r.reason.iter().find(|c| c.holds == Some(false)) {
                Some(c) => format!("fails {}", c.check),
                None => "-".into(),
            },
        };
        let caveats = if r.caveats.is_empty() { "-".into() } else { r.caveats.join("; ") };
        [r.base.to_string(), verdict.into(), degree(r.immersed_degree), degree(r.embedded_degree), witness, caveats]
    }
}

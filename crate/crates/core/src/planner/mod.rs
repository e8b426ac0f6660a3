//! Feasibility of simple branched coverings `M → N` over standard bases,
//! decided from the intersection form and first Betti number of `M`, with
//! guaranteed degree bounds and verified witness classes.

mod base;
mod plans;

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, ClassKind, Classification, ClassifyError, SearchConfig};
use crate::lattice::{GramForm, IntMatrix, LatticeError, Parity};
use crate::witness::{self, ClassWitness, PairWitness, SublatticeEmbedding, WitnessError};

pub use base::BaseManifold;
pub use plans::{
    plan_3manifold, plan_surface, plan_surface_pair, plan_trivialized_link, BranchSurface, LinkComponent, PairTarget,
    PlanError, SubmanifoldPlan,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlannerError {
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("invalid input at {field}: {message}")]
    InvalidInput { field: String, message: String },
    #[error("consistency check on CP2, CP2bar and the S² bundles failed: {0}")]
    ConsistencyViolation(String),
}

/// Wire format of [`ManifoldInvariants`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsJson {
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub b1: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_quotient_rank: Option<u64>,
}

/// Algebraic data of a closed oriented 4-manifold `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InvariantsJson", into = "InvariantsJson")]
pub struct ManifoldInvariants {
    /// Intersection form on `H₂(M)/Tor`.
    pub form: GramForm,
    pub b1: u64,
    /// User-asserted largest `n` such that `π₁(M)` maps onto a free group
    /// of rank `n`.
    pub free_quotient_rank: Option<u64>,
}

impl ManifoldInvariants {
    pub fn new(form: GramForm, b1: u64, free_quotient_rank: Option<u64>) -> Result<Self, PlannerError> {
        if !form.is_unimodular() {
            return Err(PlannerError::InvalidInput {
                field: "gram".into(),
                message: format!("intersection form must be unimodular, determinant is {}", form.invariants().determinant),
            });
        }
        if let Some(r) = free_quotient_rank {
            if r > b1 {
                return Err(PlannerError::InvalidInput {
                    field: "free_quotient_rank".into(),
                    message: format!("a free quotient of rank {r} needs b1 ≥ {r}, but b1 = {b1}"),
                });
            }
        }
        Ok(ManifoldInvariants { form, b1, free_quotient_rank })
    }

    pub fn from_form(form: GramForm) -> Result<Self, PlannerError> {
        Self::new(form, 0, None)
    }
}

impl TryFrom<InvariantsJson> for ManifoldInvariants {
    type Error = PlannerError;

    fn try_from(json: InvariantsJson) -> Result<Self, Self::Error> {
        let form = IntMatrix::from_rows(json.gram).and_then(GramForm::new).map_err(gram_error)?;
        Self::new(form, json.b1, json.free_quotient_rank)
    }
}

impl From<ManifoldInvariants> for InvariantsJson {
    fn from(inv: ManifoldInvariants) -> Self {
        InvariantsJson { gram: inv.form.entries().to_rows(), b1: inv.b1, free_quotient_rank: inv.free_quotient_rank }
    }
}

/// Maps a Gram validation error to the offending JSON field.
fn gram_error(e: LatticeError) -> PlannerError {
    let field = match &e {
        LatticeError::Ragged { row, .. } => format!("gram[{row}]"),
        LatticeError::NotSymmetric { i, j, .. } => format!("gram[{i}][{j}]"),
        _ => "gram".into(),
    };
    PlannerError::InvalidInput { field, message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    /// The classification search was inconclusive, or feasibility depends
    /// on data that cannot be checked here.
    Undetermined,
}

/// One checked condition; `holds` is `None` when it could not be decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub check: String,
    pub holds: Option<bool>,
}

impl Condition {
    fn new(check: impl Into<String>, holds: bool) -> Self {
        Condition { check: check.into(), holds: Some(holds) }
    }

    fn open(check: impl Into<String>) -> Self {
        Condition { check: check.into(), holds: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Witness {
    Class(ClassWitness),
    Pairs(Vec<PairWitness>),
    Sublattice(SublatticeEmbedding),
}

impl Witness {
    /// Re-verifies the witness against `form`.
    pub fn verify(&self, form: &GramForm) -> Result<(), WitnessError> {
        match self {
            Witness::Class(w) => w.verify(form),
            Witness::Pairs(ws) => ws.iter().try_for_each(|w| w.verify(form)),
            Witness::Sublattice(s) => s.verify_against(form),
        }
    }

    /// Largest absolute entry of the verification residuals against `form`.
    pub fn max_residual(&self, form: &GramForm) -> Result<i64, WitnessError> {
        Ok(match self {
            Witness::Class(w) => w.residual(form)?.abs(),
            Witness::Pairs(ws) => {
                let mut m = 0;
                for w in ws {
                    m = w.residuals(form)?.iter().fold(m, |acc, r| acc.max(r.abs()));
                }
                m
            }
            Witness::Sublattice(s) => {
                SublatticeEmbedding::new(form.clone(), s.generators.clone(), Vec::new(), s.target_gram.clone())?.residual.max_abs()
            }
        })
    }

    /// One-line description for tables.
    pub fn summary(&self) -> String {
        match self {
            Witness::Class(w) => format!("φ={} (φ·φ={})", w.phi, w.self_intersection),
            Witness::Pairs(ws) => ws
                .iter()
                .map(|w| format!("φ₁={} φ₂={} (n={}, d={})", w.phi1, w.phi2, w.n, w.d))
                .collect::<Vec<_>>()
                .join("; "),
            Witness::Sublattice(s) => {
                let diag: Vec<String> = (0..s.target_gram.rank()).map(|i| s.target_gram.entries()[(i, i)].to_string()).collect();
                format!("{} classes, Gram diag({})", s.generators.len(), diag.join(","))
            }
        }
    }
}

/// Verified witnesses for a covering of the given degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPlan {
    pub base: BaseManifold,
    pub degree: u32,
    pub embedded: bool,
    pub witness: Witness,
}

/// Outcome for one base. Degrees are the guaranteed upper bounds: the
/// immersed bound for a self-transversally immersed branch surface and the
/// bound after desingularizing it to an embedded one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub base: BaseManifold,
    pub verdict: Verdict,
    pub reason: Vec<Condition>,
    pub immersed_degree: Option<u32>,
    pub embedded_degree: Option<u32>,
    pub witnesses: Vec<WitnessPlan>,
    pub caveats: Vec<String>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }

    fn new(base: BaseManifold) -> Self {
        FeasibilityReport {
            base,
            verdict: Verdict::Infeasible,
            reason: Vec::new(),
            immersed_degree: None,
            embedded_degree: None,
            witnesses: Vec::new(),
            caveats: Vec::new(),
        }
    }

    /// Witness plan for the immersed or embedded branch surface.
    pub fn witness(&self, embedded: bool) -> Option<&WitnessPlan> {
        self.witnesses.iter().find(|w| w.embedded == embedded)
    }
}

/// Shared state for deciding several bases over one manifold: the
/// classifications of `β` and `−β` are computed at most once.
pub struct Planner<'a> {
    inv: &'a ManifoldInvariants,
    config: SearchConfig,
    positive: OnceCell<Result<Classification, ClassifyError>>,
    negative: OnceCell<Result<Classification, ClassifyError>>,
}

const DONALDSON: &str = "a definite intersection form of a closed oriented PL 4-manifold is congruent to ±I \
                         (Donaldson); this input is not, so no base is reported feasible";

impl<'a> Planner<'a> {
    pub fn new(inv: &'a ManifoldInvariants, config: SearchConfig) -> Self {
        Planner { inv, config, positive: OnceCell::new(), negative: OnceCell::new() }
    }

    /// Classification of `β` (`sign > 0`) or `−β` (`sign < 0`).
    fn classification(&self, sign: i64) -> &Result<Classification, ClassifyError> {
        if sign > 0 {
            self.positive.get_or_init(|| classify(&self.inv.form, &self.config))
        } else {
            self.negative.get_or_init(|| {
                let neg = self.inv.form.negate().map_err(ClassifyError::from)?;
                classify(&neg, &self.config)
            })
        }
    }

    /// Whether any classification attempted so far was inconclusive.
    pub fn inconclusive(&self) -> bool {
        [&self.positive, &self.negative]
            .iter()
            .any(|c| c.get().is_some_and(|r| r.as_ref().is_err_and(ClassifyError::is_inconclusive)))
    }

    pub fn decide(&self, base: BaseManifold) -> Result<FeasibilityReport, PlannerError> {
        let base = base.normalize()?;
        let mut report = FeasibilityReport::new(base);
        let inv = self.inv.form.invariants();

        if inv.is_definite() && inv.rank > 0 {
            match self.classification(1) {
                Ok(c) if c.kind == ClassKind::Unrecognized => {
                    report.reason.push(Condition::new("definite form is congruent to ±I", false));
                    report.caveats.push(DONALDSON.into());
                    report.caveats.extend(c.notes.iter().cloned());
                    return Ok(report);
                }
                Ok(_) => {}
                Err(e) => {
                    report.verdict = Verdict::Undetermined;
                    report.reason.push(Condition::open("definite form is congruent to ±I"));
                    report.caveats.push(format!("classification inconclusive: {e}"));
                    return Ok(report);
                }
            }
        }

        let conditions = self.conditions(base);
        let all_hold = conditions.iter().all(|c| c.holds == Some(true));
        let any_fails = conditions.iter().any(|c| c.holds == Some(false));
        report.reason = conditions;
        if any_fails {
            return Ok(report);
        }
        report.immersed_degree = Some(4);
        report.embedded_degree = Some(self.embedded_degree(base));
        if !all_hold {
            report.verdict = Verdict::Undetermined;
            report.caveats.push(format!(
                "feasibility over {} requires a free quotient of π₁ of that rank, which is not asserted; b1 ≥ n is only necessary",
                base.describe()
            ));
            return Ok(report);
        }
        if let BaseManifold::SumCP2 { m, n } = base {
            let rank = inv.rank as u64;
            if inv.parity == Parity::Even && rank < 2 * (m as u64 + n as u64) {
                report.caveats.push(format!(
                    "embedded degree {} is the stated bound for b₂ < 2(m+n); the recorded even-form witness already has degree 6",
                    report.embedded_degree.unwrap_or(9)
                ));
            }
        }

        for embedded in [false, true] {
            match self.witness(base, embedded) {
                Ok(None) => {}
                Ok(Some(plan)) => {
                    if let Err(e) = plan.witness.verify(&self.inv.form) {
                        report.verdict = Verdict::Undetermined;
                        report.caveats.push(format!("witness failed re-verification against the input form: {e}"));
                        return Ok(report);
                    }
                    report.witnesses.push(plan);
                }
                Err(e) => {
                    report.verdict = Verdict::Undetermined;
                    report.caveats.push(format!("witness construction failed: {e}"));
                    return Ok(report);
                }
            }
        }
        for sign in [1, -1] {
            if let Some(Ok(c)) = [&self.positive, &self.negative][(sign < 0) as usize].get() {
                for note in &c.notes {
                    if !report.caveats.contains(note) {
                        report.caveats.push(note.clone());
                    }
                }
            }
        }
        report.verdict = Verdict::Feasible;
        Ok(report)
    }

    /// Reports for every base of [`bases_up_to`], cross-checked against the
    /// fact that an indefinite form covers all of `CP²`, `C̄P²`, `S²×̃S²` and
    /// `S²×S²`, while a positive (negative) definite one covers only `CP²`
    /// (`C̄P²`) among them.
    pub fn decide_all(&self, max_sum: u32) -> Result<Vec<FeasibilityReport>, PlannerError> {
        if max_sum < 1 {
            return Err(PlannerError::InvalidBase("max_sum must be at least 1".into()));
        }
        let reports = bases_up_to(max_sum).into_iter().map(|b| self.decide(b)).collect::<Result<Vec<_>, _>>()?;
        consistency_check(self.inv, &reports)?;
        Ok(reports)
    }

    fn conditions(&self, base: BaseManifold) -> Vec<Condition> {
        use BaseManifold::*;
        let inv = self.inv.form.invariants();
        let (p, q) = (inv.signature_pos as u64, inv.signature_neg as u64);
        let b1 = self.inv.b1;
        let plus = |k: u64| Condition::new(format!("b₂⁺ = {p} ≥ {k}"), p >= k);
        let minus = |k: u64| Condition::new(format!("b₂⁻ = {q} ≥ {k}"), q >= k);
        match base {
            CP2 => vec![plus(1)],
            CP2bar => vec![minus(1)],
            S2twistedS2 | S2xS2 => vec![plus(1), minus(1)],
            S3xS1 => vec![Condition::new(format!("b1 = {b1} ≥ 1"), b1 >= 1)],
            SumCP2 { m, n } => vec![plus(m as u64), minus(n as u64)],
            SumS2xS2(n) => vec![plus(n as u64), minus(n as u64)],
            SumS3xS1(n) => {
                let n = n as u64;
                let mut out = vec![Condition::new(format!("b1 = {b1} ≥ {n} (necessary)"), b1 >= n)];
                let check = format!("π₁ maps onto a free group of rank {n}");
                out.push(match self.inv.free_quotient_rank {
                    Some(r) => Condition::new(format!("{check} (asserted largest rank {r})"), r >= n),
                    None => Condition::open(format!("{check} (not asserted)")),
                });
                out
            }
        }
    }

    fn embedded_degree(&self, base: BaseManifold) -> u32 {
        use BaseManifold::*;
        let inv = self.inv.form.invariants();
        let odd = inv.parity == Parity::Odd;
        let rank = inv.rank as u64;
        match base {
            CP2 | CP2bar if rank == 1 => 9,
            CP2 | CP2bar => {
                if odd {
                    5
                } else {
                    6
                }
            }
            S2twistedS2 => {
                if odd {
                    5
                } else {
                    6
                }
            }
            S2xS2 | SumS2xS2(_) => {
                if odd {
                    6
                } else {
                    5
                }
            }
            S3xS1 | SumS3xS1(_) => 5,
            SumCP2 { m, n } => {
                if rank < 2 * (m as u64 + n as u64) {
                    9
                } else if odd {
                    5
                } else {
                    6
                }
            }
        }
    }

    /// Witness for the immersed (`d = 4`) or embedded bound; `None` where
    /// the Betti number condition is the whole certificate.
    fn witness(&self, base: BaseManifold, embedded: bool) -> Result<Option<WitnessPlan>, String> {
        use BaseManifold::*;
        let cls = |sign: i64| self.classification(sign).as_ref().map_err(|e| format!("classification inconclusive: {e}"));
        let fail = |e: WitnessError| e.to_string();
        let plan = |degree: u32, witness: Witness| Ok(Some(WitnessPlan { base, degree, embedded, witness }));
        let degree = if embedded { self.embedded_degree(base) } else { 4 };
        match base {
            CP2 => {
                let (w, d) = witness::cp2_witness(cls(1)?, embedded).map_err(fail)?;
                plan(d as u32, Witness::Class(w))
            }
            CP2bar => {
                let (w, d) = witness::cp2_witness(cls(-1)?, embedded).map_err(fail)?;
                plan(d as u32, Witness::Class(w.reversed()))
            }
            S2twistedS2 | S2xS2 => {
                let twisted = base == S2twistedS2;
                let ws = witness::bundle_witnesses(cls(1)?, 1, twisted, embedded).map_err(fail)?;
                plan(ws[0].d as u32, Witness::Pairs(ws))
            }
            SumS2xS2(n) => {
                let ws = witness::bundle_witnesses(cls(1)?, n as usize, false, embedded).map_err(fail)?;
                plan(ws[0].d as u32, Witness::Pairs(ws))
            }
            SumCP2 { m, n } => {
                let c = cls(1)?;
                let k = match (embedded, c.parity(), degree) {
                    (false, _, _) => 4,
                    (true, Parity::Even, _) => 6,
                    (true, Parity::Odd, d) => d as i64,
                };
                let s = witness::lambda_sublattice(c, m as usize, n as usize, k).map_err(fail)?;
                plan(k as u32, Witness::Sublattice(s))
            }
            S3xS1 | SumS3xS1(_) => Ok(None),
        }
    }
}

/// Decides a single base with the default search configuration.
pub fn decide(inv: &ManifoldInvariants, base: BaseManifold) -> Result<FeasibilityReport, PlannerError> {
    Planner::new(inv, SearchConfig::default()).decide(base)
}

/// All bases up to `max_sum` summands, in report order.
pub fn bases_up_to(max_sum: u32) -> Vec<BaseManifold> {
    let mut out = BaseManifold::PRIME.to_vec();
    for total in 2..=max_sum {
        for m in (0..=total).rev() {
            out.push(BaseManifold::SumCP2 { m, n: total - m });
        }
    }
    out.extend((2..=max_sum).map(BaseManifold::SumS2xS2));
    out.extend((2..=max_sum).map(BaseManifold::SumS3xS1));
    out.sort();
    out
}

/// Reports for every base of [`bases_up_to`] with the given search
/// configuration; see [`Planner::decide_all`].
pub fn decide_all_with(inv: &ManifoldInvariants, max_sum: u32, config: SearchConfig) -> Result<Vec<FeasibilityReport>, PlannerError> {
    Planner::new(inv, config).decide_all(max_sum)
}

pub fn decide_all(inv: &ManifoldInvariants, max_sum: u32) -> Result<Vec<FeasibilityReport>, PlannerError> {
    decide_all_with(inv, max_sum, SearchConfig::default())
}

fn consistency_check(inv: &ManifoldInvariants, reports: &[FeasibilityReport]) -> Result<(), PlannerError> {
    use BaseManifold::*;
    let i = inv.form.invariants();
    let gated = reports.iter().any(|r| r.caveats.iter().any(|c| c == DONALDSON));
    for r in reports.iter().filter(|r| matches!(r.base, CP2 | CP2bar | S2twistedS2 | S2xS2)) {
        if r.verdict == Verdict::Undetermined {
            continue;
        }
        let expected = if gated {
            false
        } else if i.is_indefinite() {
            true
        } else {
            match r.base {
                CP2 => i.signature_pos > 0,
                CP2bar => i.signature_neg > 0,
                _ => false,
            }
        };
        if r.feasible() != expected {
            return Err(PlannerError::ConsistencyViolation(format!("{} reported {:?}", r.base, r.verdict)));
        }
    }
    Ok(())
}

//! Precondition checks for coverings `(M; F) → (N; standard submanifold)`
//! built from a surface or 3-manifold inside `M`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::{stabilized_two_fold, BranchData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("degree {d} is below the minimum {min}")]
    DegreeTooSmall { d: i64, min: i64 },
}

/// Target pair `(N; submanifold)` of a planned covering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum PairTarget {
    /// `(CP²; CP¹)`.
    Cp2Line,
    /// `(C̄P²; CP¹)`.
    Cp2barLine,
    /// `(S²×S²; section, fiber)` with the section of self-intersection `section`.
    S2xS2 { section: i64 },
    /// `(S²×̃S²; section, fiber)`.
    S2twistedS2 { section: i64 },
    /// `(S⁴; S³)`.
    S4Equator,
    /// `(S³×S¹; S³×{∗})`.
    S3xS1Slice,
    /// `(S⁴; T_k)`, the trivial 2-link with `components` spheres.
    S4TrivialLink { components: usize },
    /// `(S⁴; S²)` with a single unknotted sphere.
    S4Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSurface {
    /// Self-transversally immersed.
    Immersed,
    Embedded,
}

impl BranchSurface {
    fn for_degree(d: i64) -> Self {
        if d >= 5 {
            BranchSurface::Embedded
        } else {
            BranchSurface::Immersed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmanifoldPlan {
    pub target: PairTarget,
    pub degree: i64,
    pub branch: BranchSurface,
    /// Restrictions to surface components, where prescribed; `None` for a
    /// sphere mapped with degree 1.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrictions: Vec<Option<BranchData>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SubmanifoldPlan {
    fn new(target: PairTarget, degree: i64) -> Self {
        SubmanifoldPlan { target, degree, branch: BranchSurface::for_degree(degree), restrictions: Vec::new(), notes: Vec::new() }
    }
}

/// A surface `F ⊂ M` with `d = |F·F| ≥ 4` is the preimage of `CP¹` under a
/// `d`-fold covering of `CP²` (positive `F·F`) or `C̄P²` (negative).
pub fn plan_surface(self_intersection: i64) -> Result<SubmanifoldPlan, PlanError> {
    let d = self_intersection.checked_abs().ok_or(PlanError::HypothesisFailed("F·F out of range".into()))?;
    if d < 4 {
        return Err(PlanError::HypothesisFailed(format!("|F·F| = {d} < 4")));
    }
    let target = if self_intersection > 0 { PairTarget::Cp2Line } else { PairTarget::Cp2barLine };
    let mut plan = SubmanifoldPlan::new(target, d);
    plan.notes.push(format!("tubular neighborhood of F is the disk bundle of Euler number {self_intersection}, pulled back from CP¹"));
    Ok(plan)
}

/// Two surfaces with `F₁·F₁ = nd`, `F₁·F₂ = d ≥ 4`, `F₂·F₂ = 0` map to a
/// section of self-intersection `n` and a fiber of `S²×S²` (`n` even) or
/// `S²×̃S²` (`n` odd).
pub fn plan_surface_pair(f11: i64, f12: i64, f22: i64) -> Result<SubmanifoldPlan, PlanError> {
    if f22 != 0 {
        return Err(PlanError::HypothesisFailed(format!("F₂·F₂ = {f22} ≠ 0")));
    }
    let d = f12;
    if d < 4 {
        return Err(PlanError::HypothesisFailed(format!("F₁·F₂ = {d} < 4")));
    }
    if f11 % d != 0 {
        return Err(PlanError::HypothesisFailed(format!("F₁·F₁ = {f11} is not a multiple of d = {d}")));
    }
    let n = f11 / d;
    let target = if n % 2 == 0 { PairTarget::S2xS2 { section: n } } else { PairTarget::S2twistedS2 { section: n } };
    Ok(SubmanifoldPlan::new(target, d))
}

/// A 3-manifold `N ⊂ M` maps to `S³ ⊂ S⁴` if it disconnects `M`, otherwise
/// to `S³×{∗} ⊂ S³×S¹`. With `to_s4`, a non-disconnecting `N` is sent to
/// `S³ ⊂ S⁴` instead, which needs `d ≥ 6` and gives an embedded branch
/// surface.
pub fn plan_3manifold(disconnects: bool, d: i64, to_s4: bool) -> Result<SubmanifoldPlan, PlanError> {
    if d < 4 {
        return Err(PlanError::DegreeTooSmall { d, min: 4 });
    }
    if disconnects {
        return Ok(SubmanifoldPlan::new(PairTarget::S4Equator, d));
    }
    if !to_s4 {
        return Ok(SubmanifoldPlan::new(PairTarget::S3xS1Slice, d));
    }
    if d < 6 {
        return Err(PlanError::DegreeTooSmall { d, min: 6 });
    }
    let mut plan = SubmanifoldPlan::new(PairTarget::S4Equator, d);
    plan.branch = BranchSurface::Embedded;
    plan.notes.push("N does not disconnect M; built from two extensions over a collar of N".into());
    Ok(plan)
}

/// One component `Fᵢ` of a surface with trivial normal bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkComponent {
    pub self_intersection: i64,
    pub genus: u64,
    /// Degree `dᵢ` of the prescribed restriction `Fᵢ → S²`.
    pub restriction_degree: i64,
}

/// A surface whose components all have `Fᵢ·Fᵢ = 0` maps onto the trivial
/// 2-link `T_k ⊂ S⁴`, with each restriction of any degree `1 ≤ dᵢ ≤ d − 2`.
/// With `single_sphere` (needs `k ≥ 2` and `d = 4k`) the target is one
/// unknotted `S² ⊂ S⁴`.
pub fn plan_trivialized_link(components: &[LinkComponent], d: i64, single_sphere: bool) -> Result<SubmanifoldPlan, PlanError> {
    let k = components.len();
    if k == 0 {
        return Err(PlanError::HypothesisFailed("no components".into()));
    }
    if d < 4 {
        return Err(PlanError::DegreeTooSmall { d, min: 4 });
    }
    if single_sphere {
        if k < 2 {
            return Err(PlanError::HypothesisFailed("a single-sphere target needs at least 2 components".into()));
        }
        if d != 4 * k as i64 {
            return Err(PlanError::HypothesisFailed(format!("a single-sphere target needs d = 4k = {}, got {d}", 4 * k)));
        }
    }
    let mut restrictions = Vec::with_capacity(k);
    for (i, c) in components.iter().enumerate() {
        let i = i + 1;
        if c.self_intersection != 0 {
            return Err(PlanError::HypothesisFailed(format!("F{i}·F{i} = {} ≠ 0", c.self_intersection)));
        }
        let di = c.restriction_degree;
        if !(1..=d - 2).contains(&di) {
            return Err(PlanError::HypothesisFailed(format!("restriction degree d{i} = {di} is outside 1..={}", d - 2)));
        }
        if di == 1 {
            if c.genus != 0 {
                return Err(PlanError::HypothesisFailed(format!("F{i} has genus {} and cannot map to S² with degree 1", c.genus)));
            }
            restrictions.push(None);
        } else {
            restrictions.push(Some(stabilized_two_fold(c.genus as usize, di as usize)));
        }
    }
    let target = if single_sphere { PairTarget::S4Sphere } else { PairTarget::S4TrivialLink { components: k } };
    let mut plan = SubmanifoldPlan::new(target, d);
    if components.iter().all(|c| c.genus == 0 && c.restriction_degree == 1) {
        plan.notes.push("all components are spheres: the branch surface misses the link, which is covered trivially".into());
    }
    plan.restrictions = restrictions;
    Ok(plan)
}

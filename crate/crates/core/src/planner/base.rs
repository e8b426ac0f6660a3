use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PlannerError;

/// Standard 4-manifolds offered as covering bases.
///
/// Variant order is the report order. Connected sums with a single summand
/// are normalized to the corresponding prime base by [`BaseManifold::normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BaseManifold {
    CP2,
    CP2bar,
    S2twistedS2,
    S2xS2,
    S3xS1,
    /// `#ₘ CP² #ₙ C̄P²`.
    SumCP2 { m: u32, n: u32 },
    /// `#ₙ (S² × S²)`.
    SumS2xS2(u32),
    /// `#ₙ (S³ × S¹)`.
    SumS3xS1(u32),
}

impl BaseManifold {
    /// The five prime bases, in report order.
    pub const PRIME: [BaseManifold; 5] =
        [BaseManifold::CP2, BaseManifold::CP2bar, BaseManifold::S2twistedS2, BaseManifold::S2xS2, BaseManifold::S3xS1];

    /// Rejects empty sums and folds one-summand sums into prime bases.
    pub fn normalize(self) -> Result<BaseManifold, PlannerError> {
        use BaseManifold::*;
        Ok(match self {
            SumCP2 { m: 0, n: 0 } | SumS2xS2(0) | SumS3xS1(0) => {
                return Err(PlannerError::InvalidBase(format!("{self} has no summands")))
            }
            SumCP2 { m: 1, n: 0 } => CP2,
            SumCP2 { m: 0, n: 1 } => CP2bar,
            SumS2xS2(1) => S2xS2,
            SumS3xS1(1) => S3xS1,
            other => other,
        })
    }

    pub fn describe(&self) -> String {
        use BaseManifold::*;
        match *self {
            CP2 => "CP²".into(),
            CP2bar => "C̄P²".into(),
            S2twistedS2 => "S²×̃S²".into(),
            S2xS2 => "S²×S²".into(),
            S3xS1 => "S³×S¹".into(),
            SumCP2 { m, n } => format!("#{m} CP² #{n} C̄P²"),
            SumS2xS2(n) => format!("#{n} (S²×S²)"),
            SumS3xS1(n) => format!("#{n} (S³×S¹)"),
        }
    }
}

impl fmt::Display for BaseManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BaseManifold::*;
        match *self {
            CP2 => f.write_str("CP2"),
            CP2bar => f.write_str("CP2bar"),
            S2twistedS2 => f.write_str("S2twistedS2"),
            S2xS2 => f.write_str("S2xS2"),
            S3xS1 => f.write_str("S3xS1"),
            SumCP2 { m, n } => write!(f, "sum:{m},{n}"),
            SumS2xS2(n) => write!(f, "sum-s2xs2:{n}"),
            SumS3xS1(n) => write!(f, "sum-s3xs1:{n}"),
        }
    }
}

impl FromStr for BaseManifold {
    type Err = PlannerError;

    /// Accepts the display tags; matching of the fixed names ignores case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PlannerError::InvalidBase(format!("unknown base tag {s:?}"));
        let count = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("sum-s2xs2:") {
            return Ok(BaseManifold::SumS2xS2(count(rest)?));
        }
        if let Some(rest) = lower.strip_prefix("sum-s3xs1:") {
            return Ok(BaseManifold::SumS3xS1(count(rest)?));
        }
        if let Some(rest) = lower.strip_prefix("sum:") {
            let (m, n) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(BaseManifold::SumCP2 { m: count(m)?, n: count(n)? });
        }
        match lower.as_str() {
            "cp2" => Ok(BaseManifold::CP2),
            "cp2bar" => Ok(BaseManifold::CP2bar),
            "s2twisteds2" => Ok(BaseManifold::S2twistedS2),
            "s2xs2" => Ok(BaseManifold::S2xS2),
            "s3xs1" => Ok(BaseManifold::S3xS1),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for BaseManifold {
    type Error = PlannerError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BaseManifold> for String {
    fn from(b: BaseManifold) -> String {
        b.to_string()
    }
}

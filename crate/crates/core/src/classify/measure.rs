//! Tags for the depth/distance measures and the classification rules,
//! with the validity matrix between them.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A per-group measure: three depths (larger = more central) and three
/// distances (larger = more outlying).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Halfspace depth.
    Hd,
    /// Projection depth, 1 / (1 + SDO).
    Pd,
    /// Skew-adjusted projection depth, 1 / (1 + AO).
    Spd,
    /// Bag distance.
    Bd,
    /// Stahel-Donoho outlyingness.
    Sdo,
    /// Adjusted outlyingness.
    Ao,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Hd,
        Measure::Pd,
        Measure::Spd,
        Measure::Bd,
        Measure::Sdo,
        Measure::Ao,
    ];

    /// Depths are maximised, distances minimised.
    pub fn is_depth(self) -> bool {
        matches!(self, Measure::Hd | Measure::Pd | Measure::Spd)
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Hd => "hd",
            Measure::Pd => "pd",
            Measure::Spd => "spd",
            Measure::Bd => "bd",
            Measure::Sdo => "sdo",
            Measure::Ao => "ao",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure '{s}'")))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A classification rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Assign to the group with the largest depth coordinate.
    MaxDepth,
    /// Assign to the group with the smallest distance coordinate.
    MinDist,
    /// kNN on the G-vector of depths.
    DepthDepthKnn,
    /// kNN on the G-vector of distances.
    DistSpace,
    /// kNN on the raw coordinates.
    PlainKnn,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::MaxDepth,
        Method::MinDist,
        Method::DepthDepthKnn,
        Method::DistSpace,
        Method::PlainKnn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::MaxDepth => "maxdepth",
            Method::MinDist => "mindist",
            Method::DepthDepthKnn => "depthdepthknn",
            Method::DistSpace => "distspace",
            Method::PlainKnn => "knn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }

    /// Whether the rule runs kNN on some reference coordinates.
    pub fn uses_knn(self) -> bool {
        matches!(
            self,
            Method::DepthDepthKnn | Method::DistSpace | Method::PlainKnn
        )
    }

    /// The measure families each rule accepts: depth rules take depths,
    /// distance rules take distances, plain kNN takes none.
    pub fn accepts(self, measure: Option<Measure>) -> bool {
        match (self, measure) {
            (Method::MaxDepth | Method::DepthDepthKnn, Some(m)) => m.is_depth(),
            (Method::MinDist | Method::DistSpace, Some(m)) => !m.is_depth(),
            (Method::PlainKnn, None) => true,
            _ => false,
        }
    }

    /// Error unless `accepts(measure)` holds.
    pub fn check_measure(self, measure: Option<Measure>) -> Result<()> {
        if self.accepts(measure) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "method '{}' cannot use measure '{}'",
                self.name(),
                measure.map_or("none", |m| m.name())
            )))
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

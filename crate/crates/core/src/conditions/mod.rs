//! Deciders and falsifiers for the hypotheses of the three fixed-point
//! theorems: onto (a), the convex-combination conditions (b1), (b2), (b3),
//! and the compactness/closedness conditions (c1), (c2), (c3).

mod bcond;
mod ccond;
pub(crate) mod linear;
mod search;

use std::fmt;

use serde::Serialize;

use crate::exactnum::QuadExt;
use crate::mapping::{ClassSet, MappingSpec};

pub use bcond::{
    b_value, check_b3_strong, check_b_subset, criterion, decide_b_exact, prove_b_special, sign_sets, SignSets,
    StrongB3,
};
pub use ccond::{
    c1_verdict, c2_verdict, check_c1, check_c2, check_c3, lsc_failures, sublevel, xstar_grid, CSet, Sublevel,
};
pub use search::{falsify_b, window as search_window, SearchStrategy, DEFAULT_BUDGET, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proven,
    Falsified,
    NotFalsified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proven => "PROVEN",
            Status::Falsified => "FALSIFIED",
            Status::NotFalsified => "NOT FALSIFIED",
        })
    }
}

/// The convex-combination conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BKind {
    B1,
    B2,
    B3,
}

impl BKind {
    pub fn name(self) -> &'static str {
        match self {
            BKind::B1 => "b1",
            BKind::B2 => "b2",
            BKind::B3 => "b3",
        }
    }
}

/// A finite subset of `C` with a point `u` of its convex hull. When present,
/// `weights` are positive, sum to one and combine `points` into `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetWitness {
    pub points: Vec<QuadExt>,
    pub weights: Option<Vec<QuadExt>>,
    pub u: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Subset(SubsetWitness),
    Point(QuadExt),
    Points(Vec<QuadExt>),
    Set(ClassSet),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Subset(s) => {
                write!(f, "points {{{}}}, u = {}", join(&s.points), s.u)?;
                if let Some(w) = &s.weights {
                    write!(f, ", weights ({})", join(w))?;
                }
                Ok(())
            }
            Witness::Point(p) => write!(f, "{p}"),
            Witness::Points(ps) => write!(f, "{{{}}}", join(ps)),
            Witness::Set(s) => write!(f, "{s}"),
        }
    }
}

pub(crate) fn join(items: &[QuadExt]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub subsets_checked: u64,
    pub points_tried: u64,
}

/// Outcome of one hypothesis check. `violation`, when present, is the
/// positive amount by which the witness breaks the condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub violation: Option<QuadExt>,
    pub detail: String,
    pub stats: SearchStats,
}

impl ConditionVerdict {
    pub fn proven(detail: impl Into<String>) -> Self {
        ConditionVerdict {
            status: Status::Proven,
            witness: None,
            violation: None,
            detail: detail.into(),
            stats: SearchStats::default(),
        }
    }

    pub fn falsified(witness: Witness, detail: impl Into<String>) -> Self {
        ConditionVerdict {
            status: Status::Falsified,
            witness: Some(witness),
            violation: None,
            detail: detail.into(),
            stats: SearchStats::default(),
        }
    }

    pub fn not_falsified(stats: SearchStats, detail: impl Into<String>) -> Self {
        ConditionVerdict {
            status: Status::NotFalsified,
            witness: None,
            violation: None,
            detail: detail.into(),
            stats,
        }
    }

    pub fn with_violation(mut self, v: QuadExt) -> Self {
        self.violation = Some(v);
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_stats(mut self, stats: SearchStats) -> Self {
        self.stats = stats;
        self
    }

    /// Proven or not falsified.
    pub fn is_favorable(&self) -> bool {
        self.status != Status::Falsified
    }

    pub fn subset_witness(&self) -> Option<&SubsetWitness> {
        match &self.witness {
            Some(Witness::Subset(s)) => Some(s),
            _ => None,
        }
    }
}

/// Condition (a): `f(C) = C`, decided on the exact image.
pub fn check_onto(spec: &MappingSpec) -> ConditionVerdict {
    let missing = spec.domain_set().difference(&spec.image());
    if missing.is_empty() {
        return ConditionVerdict::proven("the exact image equals C");
    }
    let detail = format!("values of C with no preimage: {missing}");
    match missing.finite_points() {
        Some(points) => ConditionVerdict::falsified(Witness::Points(points), detail),
        None => ConditionVerdict::falsified(
            Witness::Point(missing.sample_point().expect("nonempty")),
            detail,
        ),
    }
}

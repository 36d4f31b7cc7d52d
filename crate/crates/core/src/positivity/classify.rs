use serde::{Deserialize, Serialize};

use super::conditions::{condition_report, Condition, ConditionReport, SimplexPoint, EDGE_PAIRS};
use super::minors::{min_minor_scan, minor_of, IndexSet, MinorScan};
use crate::error::Result;
use crate::map::GeneralizedMap;
use crate::tolerance::ToleranceConfig;

pub const DEFAULT_RESOLUTION: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PositivityVerdict {
    Positive,
    #[serde(rename_all = "camelCase")]
    NotPositive {
        witness: SimplexPoint,
        minor_index_set: IndexSet,
        minor_value: f64,
    },
    #[serde(rename = "unknown")]
    UnknownOutsideHessian,
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, Self::Positive)
    }
}

/// Minimizer of the 2×2 minor of edge `k` along its face, where it is a
/// quadratic in the position.
fn edge_candidate(map: &GeneralizedMap, k: usize) -> MinorScan {
    let (i, j) = EDGE_PAIRS[k - 1];
    let set = IndexSet::new(&[i + 1, j + 1]).expect("valid pair");
    let point = |s: f64| {
        let mut x = [0.0; 3];
        x[i] = s;
        x[j] = 1.0 - s;
        SimplexPoint::from_unchecked(x)
    };
    let q = |s: f64| minor_of(map, set, &point(s));
    let (q0, qh, q1) = (q(0.0), q(0.5), q(1.0));
    let curv = 2.0 * (q1 - 2.0 * qh + q0);
    let slope = q1 - q0 - curv / 2.0;
    let mut best = (q0, 0.0);
    if q1 < best.0 {
        best = (q1, 1.0);
    }
    if curv > 0.0 {
        let s = (-slope / curv).clamp(0.0, 1.0);
        let v = q(s);
        if v < best.0 {
            best = (v, s);
        }
    }
    MinorScan { min_value: best.0, argmin: point(best.1), index_set: set }
}

/// Analytic probes for each failing condition, each a point where the
/// corresponding minor is negative.
fn analytic_candidates(map: &GeneralizedMap, failing: &[Condition]) -> Vec<MinorScan> {
    failing
        .iter()
        .map(|c| match c {
            Condition::Vertex1 | Condition::Vertex2 | Condition::Vertex3 => {
                let k = *c as usize;
                let x = SimplexPoint::vertex(k);
                let set = IndexSet::new(&[k + 1]).expect("valid index");
                MinorScan { min_value: minor_of(map, set, &x), argmin: x, index_set: set }
            }
            Condition::Edge1 => edge_candidate(map, 1),
            Condition::Edge2 => edge_candidate(map, 2),
            Condition::Edge3 => edge_candidate(map, 3),
            Condition::Interior => {
                let x = SimplexPoint::CENTER;
                let set = IndexSet::full();
                MinorScan { min_value: minor_of(map, set, &x), argmin: x, index_set: set }
            }
        })
        .collect()
}

fn lowest(scan: MinorScan, extra: Vec<MinorScan>) -> MinorScan {
    extra.into_iter().fold(scan, |best, c| if c.min_value < best.min_value { c } else { best })
}

fn not_positive(s: MinorScan) -> PositivityVerdict {
    PositivityVerdict::NotPositive {
        witness: s.argmin,
        minor_index_set: s.index_set,
        minor_value: s.min_value,
    }
}

/// Closed-form verdict from a condition report alone: every condition is
/// necessary, and together they are sufficient inside the Hessian gate.
/// `None` means the report cannot decide (all conditions hold, gate fails).
pub fn verdict_from_conditions(report: &ConditionReport, sat_tol: f64) -> Option<bool> {
    if !report.all_hold(sat_tol) {
        Some(false)
    } else if report.hessian_holds {
        Some(true)
    } else {
        None
    }
}

pub fn classify_positivity(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<PositivityVerdict> {
    classify_with_resolution(map, tol, DEFAULT_RESOLUTION)
}

pub fn classify_with_resolution(
    map: &GeneralizedMap,
    tol: &ToleranceConfig,
    resolution: usize,
) -> Result<PositivityVerdict> {
    let report = condition_report(map, tol);
    let failing = report.failing(tol.saturation);
    if failing.is_empty() && report.hessian_holds {
        return Ok(PositivityVerdict::Positive);
    }
    let scan = lowest(min_minor_scan(map, resolution)?, analytic_candidates(map, &failing));
    if !failing.is_empty() || scan.min_value < -tol.saturation {
        Ok(not_positive(scan))
    } else {
        Ok(PositivityVerdict::UnknownOutsideHessian)
    }
}

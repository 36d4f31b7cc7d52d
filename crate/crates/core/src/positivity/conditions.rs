use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{GeneralizedMap, MapParams};
use crate::tolerance::ToleranceConfig;

/// A point of the 2-simplex `x_i ≥ 0, Σ x_i = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SimplexPoint([f64; 3]);

impl SimplexPoint {
    pub const CENTER: SimplexPoint = SimplexPoint([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);

    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let x = [x1, x2, x3];
        if x.iter().any(|v| !v.is_finite() || *v < -1e-12) {
            return Err(Error::InvalidSimplexPoint(format!("negative coordinate in {x:?}")));
        }
        let s = x1 + x2 + x3;
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSimplexPoint(format!("coordinates sum to {s}")));
        }
        Ok(Self(x))
    }

    pub fn vertex(k: usize) -> Self {
        let mut x = [0.0; 3];
        x[k] = 1.0;
        Self(x)
    }

    pub(crate) fn from_unchecked(x: [f64; 3]) -> Self {
        Self(x)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }
}

impl TryFrom<[f64; 3]> for SimplexPoint {
    type Error = Error;
    fn try_from(x: [f64; 3]) -> Result<Self> {
        Self::new(x[0], x[1], x[2])
    }
}

impl From<SimplexPoint> for [f64; 3] {
    fn from(p: SimplexPoint) -> Self {
        p.0
    }
}

/// One of the seven positivity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Vertex1,
    Vertex2,
    Vertex3,
    Edge1,
    Edge2,
    Edge3,
    Interior,
}

impl Condition {
    pub fn vertex(k: usize) -> Self {
        [Self::Vertex1, Self::Vertex2, Self::Vertex3][k - 1]
    }

    pub fn edge(k: usize) -> Self {
        [Self::Edge1, Self::Edge2, Self::Edge3][k - 1]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Vertex1 => "vertex_1",
            Self::Vertex2 => "vertex_2",
            Self::Vertex3 => "vertex_3",
            Self::Edge1 => "edge_1",
            Self::Edge2 => "edge_2",
            Self::Edge3 => "edge_3",
            Self::Interior => "interior",
        }
    }
}

/// Vertex pair `(i, j)` (0-based) of edge `k` (1-based); edge `k` lies on
/// the simplex face `x_m = 0` for the remaining index `m`.
pub(crate) const EDGE_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub(crate) fn edge_pair(k: usize) -> Result<(usize, usize)> {
    if !(1..=3).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k });
    }
    Ok(EDGE_PAIRS[k - 1])
}

/// `w_ii` minus 1 for the diagonal of `W` assembled from raw parameters.
pub(crate) fn diag_minus_one(p: &MapParams) -> [f64; 3] {
    [p.a + p.f - 1.0, p.a + p.e - 1.0, p.a + p.d - 1.0]
}

/// The two off-diagonal entries of edge `k` as `(b + q_k, c + q_k)`; for
/// edge 2 this is `(w_31, w_13)`.
pub(crate) fn offdiag_pair(p: &MapParams, k: usize) -> (f64, f64) {
    let q = p.perturbation()[k - 1];
    (p.b + q, p.c + q)
}

/// The two radicands of `F_k`: `(w_ii−1)(w_jj−1)` and `w_ij w_ji`.
pub(crate) fn edge_radicands(p: &MapParams, k: usize) -> (f64, f64) {
    let (i, j) = EDGE_PAIRS[k - 1];
    let dm = diag_minus_one(p);
    let (u, v) = offdiag_pair(p, k);
    (dm[i] * dm[j], u * v)
}

/// `F_k` with radicands in `[−clamp, 0)` read as zero; `None` below that.
pub(crate) fn edge_function_clamped(p: &MapParams, k: usize, clamp: f64) -> Option<f64> {
    let (r1, r2) = edge_radicands(p, k);
    if r1 < -clamp || r2 < -clamp {
        return None;
    }
    Some(r1.max(0.0).sqrt() + r2.max(0.0).sqrt())
}

pub(crate) fn edge_function_raw(p: &MapParams, k: usize, tol: &ToleranceConfig) -> Result<f64> {
    let (r1, r2) = edge_radicands(p, k);
    Ok(tol.checked_sqrt(r1, k)? + tol.checked_sqrt(r2, k)?)
}

/// `F_k = √((w_ii−1)(w_jj−1)) + √(w_ij w_ji)`; the edge conditions read
/// `F_k ≥ 1`.
pub fn edge_functions(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<[f64; 3]> {
    let p = map.params();
    Ok([
        edge_function_raw(&p, 1, tol)?,
        edge_function_raw(&p, 2, tol)?,
        edge_function_raw(&p, 3, tol)?,
    ])
}

/// Signed radius `(a+b+c − √((a−2b−2c)² + 3(b−c)²)) / √6`.
pub fn hessian_radius(a: f64, b: f64, c: f64) -> f64 {
    (a + b + c - ((a - 2.0 * b - 2.0 * c).powi(2) + 3.0 * (b - c).powi(2)).sqrt()) / 6f64.sqrt()
}

/// Values of all positivity conditions; each holds when its value is `≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionReport {
    /// `w_ii − 1`.
    pub vertex_values: [f64; 3],
    /// `F_k − 1`; `None` when a radicand is negative beyond tolerance,
    /// which only happens once a vertex condition already fails.
    pub edge_values: [Option<f64>; 3],
    /// `a + b + c − 3`.
    pub interior_value: f64,
    pub hessian_lhs: f64,
    pub hessian_rhs: f64,
    pub hessian_holds: bool,
    pub r_h: f64,
    pub delta: f64,
    pub saturated: Vec<Condition>,
}

impl ConditionReport {
    fn value(&self, c: Condition) -> Option<f64> {
        match c {
            Condition::Vertex1 => Some(self.vertex_values[0]),
            Condition::Vertex2 => Some(self.vertex_values[1]),
            Condition::Vertex3 => Some(self.vertex_values[2]),
            Condition::Edge1 => self.edge_values[0],
            Condition::Edge2 => self.edge_values[1],
            Condition::Edge3 => self.edge_values[2],
            Condition::Interior => Some(self.interior_value),
        }
    }

    /// Conditions whose value is below `−sat_tol` (or undefined).
    pub fn failing(&self, sat_tol: f64) -> Vec<Condition> {
        ALL_CONDITIONS
            .iter()
            .copied()
            .filter(|c| self.value(*c).is_none_or(|v| v < -sat_tol))
            .collect()
    }

    pub fn all_hold(&self, sat_tol: f64) -> bool {
        self.failing(sat_tol).is_empty()
    }

    pub fn is_saturated(&self, c: Condition) -> bool {
        self.saturated.contains(&c)
    }

    pub fn saturated_vertices(&self) -> Vec<usize> {
        (1..=3).filter(|k| self.is_saturated(Condition::vertex(*k))).collect()
    }

    pub fn saturated_edges(&self) -> Vec<usize> {
        (1..=3).filter(|k| self.is_saturated(Condition::edge(*k))).collect()
    }
}

pub(crate) const ALL_CONDITIONS: [Condition; 7] = [
    Condition::Vertex1,
    Condition::Vertex2,
    Condition::Vertex3,
    Condition::Edge1,
    Condition::Edge2,
    Condition::Edge3,
    Condition::Interior,
];

pub fn condition_report(map: &GeneralizedMap, tol: &ToleranceConfig) -> ConditionReport {
    condition_report_params(&map.params(), tol)
}

/// Same as [`condition_report`] for parameters that need not form a valid
/// map (plane scans cross the region where entries of `W` go negative).
pub(crate) fn condition_report_params(p: &MapParams, tol: &ToleranceConfig) -> ConditionReport {
    let p = *p;
    let sat = tol.saturation;
    let vertex_values = diag_minus_one(&p);
    let edge_values = [1, 2, 3].map(|k| edge_function_raw(&p, k, tol).ok().map(|f| f - 1.0));
    let interior_value = p.a + p.b + p.c - 3.0;
    let r_h = hessian_radius(p.a, p.b, p.c);
    let hessian_lhs = r_h * r_h;
    let hessian_rhs = p.d * p.d + p.e * p.e + p.f * p.f;
    let mut report = ConditionReport {
        vertex_values,
        edge_values,
        interior_value,
        hessian_lhs,
        hessian_rhs,
        hessian_holds: hessian_lhs - hessian_rhs >= -sat,
        r_h,
        delta: (p.b - p.c).abs(),
        saturated: Vec::new(),
    };
    report.saturated = ALL_CONDITIONS
        .iter()
        .copied()
        .filter(|c| report.value(*c).is_some_and(|v| v.abs() <= sat))
        .collect();
    report
}

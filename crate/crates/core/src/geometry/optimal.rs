//! Optimal points on the plane for interior-saturated maps `a = 3 − b − c`.

use serde::{Deserialize, Serialize};

use super::plane::{in_alice, in_bob, PlanePoint};
use super::regions::{bc_region_class, BcRegionClass};
use crate::error::{Error, Result};
use crate::map::GeneralizedMap;
use crate::optimality::{spanning_report, CaseLabel};
use crate::positivity::{
    classify_positivity, condition_report, edge_function_raw, projected_gradients, Condition,
};
use crate::tolerance::ToleranceConfig;

const MAX_NEWTON: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimalPointSet {
    pub b: f64,
    pub c: f64,
    pub a: f64,
    pub case: CaseLabel,
    pub region: BcRegionClass,
    pub points: Vec<PlanePoint>,
    /// Set when the points sit on a region boundary or collapse (circle).
    pub degenerate: bool,
    /// Discriminants of the side solve, direct and as printed in the
    /// literature formula (iev only).
    pub discriminants: Option<(f64, f64)>,
}

fn base(b: f64, c: f64) -> (f64, f64) {
    let a = 3.0 - b - c;
    (a, a - 1.0)
}

fn wrong(expected: &str, found: BcRegionClass) -> Error {
    Error::WrongRegion { expected: expected.to_string(), found: found.as_str().to_string() }
}

const PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn push_unique(points: &mut Vec<PlanePoint>, p: PlanePoint) {
    let dup = points.iter().any(|q| {
        q.coords().iter().zip(p.coords()).all(|(x, y)| (x - y).abs() < 1e-12)
    });
    if !dup {
        points.push(p);
    }
}

/// Vertices of Bob, `(2μ, −μ, −μ)` and permutations with `μ = min{b, c}`.
pub fn optimal_points_ivv(b: f64, c: f64, tol: &ToleranceConfig) -> Result<OptimalPointSet> {
    let region = bc_region_class(b, c, tol)?;
    if !matches!(region, BcRegionClass::Blue | BcRegionClass::BoundaryBlueViolet) {
        return Err(wrong("blue", region));
    }
    let (a, _) = base(b, c);
    let mu = b.min(c);
    let points = vec![
        PlanePoint::from_de(2.0 * mu, -mu),
        PlanePoint::from_de(-mu, 2.0 * mu),
        PlanePoint::from_de(-mu, -mu),
    ];
    Ok(OptimalPointSet {
        b,
        c,
        a,
        case: CaseLabel::Ivv,
        region,
        points,
        degenerate: region != BcRegionClass::Blue,
        discriminants: None,
    })
}

/// Intersections of Alice with the sides of Bob. On the side where
/// coordinate `m` equals `−μ` the off-diagonal term of edge `m + 1`
/// vanishes, so its saturation reads `(a−1+s)(a−1+t) = 1` with `s + t = μ`.
pub fn optimal_points_iev(b: f64, c: f64, tol: &ToleranceConfig) -> Result<OptimalPointSet> {
    let region = bc_region_class(b, c, tol)?;
    if region != BcRegionClass::Violet {
        return Err(wrong("violet", region));
    }
    let (a, am1) = base(b, c);
    let mu = am1.min(b).min(c);
    let direct = mu * mu + 4.0 * am1 * (am1 + mu) - 4.0;
    let printed = mu * mu - 4.0 * (am1 + mu) * am1 + 4.0;
    if direct < 0.0 {
        return Err(Error::NoRealIntersection { discriminant: direct });
    }
    let root = direct.sqrt();
    // Exact cancellation keeps the vanishing entry at zero, which the square
    // root in the edge function would otherwise amplify.
    let s = 0.5 * (mu + root);
    let t = mu - s;
    let mut points = Vec::new();
    for perm in PERMUTATIONS {
        let mut q = [0.0; 3];
        q[perm[0]] = -mu;
        q[perm[1]] = s;
        q[perm[2]] = t;
        let p = PlanePoint::from_raw(q[0], q[1], q[2]);
        let params = p.with_base(a, b, c);
        if in_bob(mu, &p, tol.saturation) && in_alice(&params, tol) {
            push_unique(&mut points, p);
        }
    }
    Ok(OptimalPointSet {
        b,
        c,
        a,
        case: CaseLabel::Iev,
        region,
        points,
        degenerate: false,
        discriminants: Some((direct, printed)),
    })
}

/// Edge pairs meeting at each Alice vertex and the symmetry axis through
/// it: swapping the two perturbation channels swaps the two functions.
const VERTEX_PAIRS: [((usize, usize), [f64; 3]); 3] =
    [((1, 2), [-1.0, -1.0, 2.0]), ((1, 3), [-1.0, 2.0, -1.0]), ((2, 3), [2.0, -1.0, -1.0])];

fn axis_point(dir: [f64; 3], t: f64) -> PlanePoint {
    let n = 6f64.sqrt();
    PlanePoint::from_de(t * dir[0] / n, t * dir[1] / n)
}

fn f_minus_one(a: f64, b: f64, c: f64, p: &PlanePoint, k: usize, tol: &ToleranceConfig) -> Option<f64> {
    edge_function_raw(&p.with_base(a, b, c), k, tol).ok().map(|f| f - 1.0)
}

/// Damped Newton on `(F_i − 1, F_j − 1)` in the `(u, v)` chart.
fn newton_pair(
    a: f64,
    b: f64,
    c: f64,
    (i, j): (usize, usize),
    seed: PlanePoint,
    tol: &ToleranceConfig,
) -> Result<PlanePoint> {
    let residual = |p: &PlanePoint| -> Option<(f64, f64)> {
        Some((f_minus_one(a, b, c, p, i, tol)?, f_minus_one(a, b, c, p, j, tol)?))
    };
    let mut p = seed;
    let (mut r1, mut r2) = residual(&p).ok_or(Error::ConvergenceFailure { iterations: 0, residual: f64::NAN })?;
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6f64.sqrt();
    for it in 0..MAX_NEWTON {
        let norm = r1.abs().max(r2.abs());
        if norm < 1e-13 {
            return Ok(p);
        }
        let map_params = p.with_base(a, b, c);
        let map = GeneralizedMap::with_tolerance(map_params, &ToleranceConfig { entry: f64::INFINITY, ..*tol })
            .map_err(|_| Error::ConvergenceFailure { iterations: it, residual: norm })?;
        let g = projected_gradients(&map, tol)
            .map_err(|_| Error::ConvergenceFailure { iterations: it, residual: norm })?;
        // Chain rule to the chart: ∂/∂u = (∂d − ∂e)/√2, ∂/∂v = (∂d + ∂e − 2∂f)/√6.
        let chart = |gk: [f64; 3]| ((gk[0] - gk[1]) / s2, (gk[0] + gk[1] - 2.0 * gk[2]) / s6);
        let (j11, j12) = chart(g[i - 1]);
        let (j21, j22) = chart(g[j - 1]);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return Err(Error::ConvergenceFailure { iterations: it, residual: norm });
        }
        let du = (j22 * r1 - j12 * r2) / det;
        let dv = (-j21 * r1 + j11 * r2) / det;
        let (u0, v0) = p.uv();
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-10 {
            let q = PlanePoint::from_uv(u0 - step * du, v0 - step * dv);
            if let Some((q1, q2)) = residual(&q) {
                if q1.abs().max(q2.abs()) < norm {
                    p = q;
                    r1 = q1;
                    r2 = q2;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            return if norm < 1e-11 {
                Ok(p)
            } else {
                Err(Error::ConvergenceFailure { iterations: it, residual: norm })
            };
        }
    }
    let norm = r1.abs().max(r2.abs());
    if norm < 1e-11 {
        Ok(p)
    } else {
        Err(Error::ConvergenceFailure { iterations: MAX_NEWTON, residual: norm })
    }
}

/// Seeds on the symmetry axis: sign changes of `F_i − 1` on a grid in `t`.
fn axis_seeds(a: f64, b: f64, c: f64, k: usize, dir: [f64; 3], reach: f64, tol: &ToleranceConfig) -> Vec<PlanePoint> {
    const N: usize = 400;
    let mut seeds = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for s in 0..=N {
        let t = -reach + 2.0 * reach * s as f64 / N as f64;
        let val = f_minus_one(a, b, c, &axis_point(dir, t), k, tol);
        if let (Some((t0, v0)), Some(v1)) = (prev, val) {
            if v0 == 0.0 || v0.signum() != v1.signum() {
                let (mut lo, mut hi, mut vlo) = (t0, t, v0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    match f_minus_one(a, b, c, &axis_point(dir, mid), k, tol) {
                        Some(vm) if vm.signum() == vlo.signum() && vm != 0.0 => {
                            lo = mid;
                            vlo = vm;
                        }
                        _ => hi = mid,
                    }
                }
                seeds.push(axis_point(dir, 0.5 * (lo + hi)));
            }
        }
        prev = val.map(|v| (t, v));
    }
    seeds
}

/// Vertices of Alice, where two edge conditions saturate together. Each
/// lies on the symmetry axis of its pair of edge functions; the axis root
/// seeds a two-dimensional Newton solve.
pub fn optimal_points_iee(b: f64, c: f64, tol: &ToleranceConfig) -> Result<OptimalPointSet> {
    let region = bc_region_class(b, c, tol)?;
    if !matches!(
        region,
        BcRegionClass::Red | BcRegionClass::Violet | BcRegionClass::BoundaryVioletRed
    ) {
        return Err(wrong("red or violet", region));
    }
    let (a, am1) = base(b, c);
    let mu = am1.min(b).min(c);
    let circle = (b - c).abs() <= tol.saturation;
    let reach = 6f64.sqrt() * mu.max(1e-6) * 1.05;
    let mut points = Vec::new();
    for ((i, j), dir) in VERTEX_PAIRS {
        let other = 6 - i - j;
        let mut found = None;
        let mut last_err = None;
        for seed in axis_seeds(a, b, c, i, dir, reach, tol) {
            match newton_pair(a, b, c, (i, j), seed, tol) {
                Ok(p) => {
                    let third = f_minus_one(a, b, c, &p, other, tol);
                    if in_bob(mu, &p, tol.saturation) && third.is_some_and(|v| v >= -tol.saturation) {
                        found = Some(p);
                        break;
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        match found {
            Some(p) => push_unique(&mut points, p),
            None => {
                return Err(last_err.unwrap_or(Error::ConvergenceFailure { iterations: 0, residual: f64::NAN }))
            }
        }
    }
    Ok(OptimalPointSet { b, c, a, case: CaseLabel::Iee, region, points, degenerate: circle, discriminants: None })
}

/// Numerical evidence for one optimal point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PointValidation {
    pub point: PlanePoint,
    pub positive: bool,
    pub interior_saturated: bool,
    /// Coordinates `k` (1-based) with `q_k = −μ`: the point is on a side of
    /// Bob.
    pub bob_saturations: Vec<usize>,
    pub edge_saturations: Vec<usize>,
    pub max_edge_residual: f64,
    pub rank: usize,
    /// `max(0, RHS − LHS)` of the Hessian inequality.
    pub hessian_residual: f64,
}

pub fn validate_point(b: f64, c: f64, p: &PlanePoint, tol: &ToleranceConfig) -> Result<PointValidation> {
    let (a, am1) = base(b, c);
    let mu = am1.min(b).min(c);
    let map = GeneralizedMap::with_tolerance(p.with_base(a, b, c), tol)?;
    let report = condition_report(&map, tol);
    let edges = report.saturated_edges();
    let max_edge_residual = edges
        .iter()
        .filter_map(|k| report.edge_values[k - 1])
        .map(f64::abs)
        .fold(0.0, f64::max);
    Ok(PointValidation {
        point: *p,
        positive: classify_positivity(&map, tol)?.is_positive(),
        interior_saturated: report.is_saturated(Condition::Interior),
        bob_saturations: (1..=3).filter(|k| (p.coords()[k - 1] + mu).abs() <= tol.saturation).collect(),
        edge_saturations: edges,
        max_edge_residual,
        rank: spanning_report(&map, tol)?.rank,
        hessian_residual: (report.hessian_rhs - report.hessian_lhs).max(0.0),
    })
}

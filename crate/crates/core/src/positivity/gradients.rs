//! Gradients of the edge functions on the plane `d + e + f = 0`.
//!
//! The closed form returned by [`edge_gradients`] is the projected gradient
//! of `F_k` rescaled by `6√((w_ii−1)(w_jj−1))`; the two agree in direction
//! wherever `F_k = 1`, and [`closed_form_scale`] gives the factor.

use crate::error::{Error, Result};
use crate::map::{GeneralizedMap, MapParams};
use crate::tolerance::ToleranceConfig;

use super::conditions::{edge_function_raw, edge_radicands, offdiag_pair};

const SHAPES: [[f64; 3]; 3] = [[-2.0, 1.0, 1.0], [1.0, -2.0, 1.0], [1.0, 1.0, -2.0]];

fn project(v: [f64; 3]) -> [f64; 3] {
    let m = (v[0] + v[1] + v[2]) / 3.0;
    [v[0] - m, v[1] - m, v[2] - m]
}

/// `κ(t) = (b + c + 2t) / √((b+t)(c+t))`; `κ ≥ 2` with equality iff `b = c`.
fn kappa(p: &MapParams, k: usize, tol: &ToleranceConfig) -> Result<f64> {
    let (u, v) = offdiag_pair(p, k);
    let root = tol.checked_sqrt(u * v, k)?;
    if root <= tol.degenerate {
        return Err(Error::DegenerateEdge { edge: k, radicand: u * v });
    }
    Ok((u + v) / root)
}

/// Closed-form gradient fields `(a+b+c−1−κ_k)·s_k − 3(d, e, f)`.
pub fn edge_gradients(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<[[f64; 3]; 3]> {
    let p = map.params();
    let q = p.perturbation();
    let mut out = [[0.0; 3]; 3];
    for k in 1..=3 {
        let bracket = p.a + p.b + p.c - 1.0 - kappa(&p, k, tol)?;
        for i in 0..3 {
            out[k - 1][i] = bracket * SHAPES[k - 1][i] - 3.0 * q[i];
        }
    }
    Ok(out)
}

/// `6√((w_ii−1)(w_jj−1))` for edge `k`.
pub fn closed_form_scale(map: &GeneralizedMap, k: usize, tol: &ToleranceConfig) -> Result<f64> {
    let (r1, _) = edge_radicands(&map.params(), k);
    Ok(6.0 * tol.checked_sqrt(r1, k)?)
}

/// Exact projected gradients of `F_1, F_2, F_3` with respect to `(d, e, f)`.
pub fn projected_gradients(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<[[f64; 3]; 3]> {
    let p = map.params();
    let q = p.perturbation();
    let mut out = [[0.0; 3]; 3];
    for k in 1..=3 {
        let (r1, _) = edge_radicands(&p, k);
        let root = tol.checked_sqrt(r1, k)?;
        if root <= tol.degenerate {
            return Err(Error::DegenerateEdge { edge: k, radicand: r1 });
        }
        // w_ii − 1 = a + q_m − 1 for the two diagonal channels of the edge;
        // the derivative with respect to one channel carries the other.
        let m = k - 1;
        let mut g = [0.0; 3];
        g[m] = kappa(&p, k, tol)? / 2.0;
        let others: Vec<usize> = (0..3).filter(|i| *i != m).collect();
        g[others[0]] = (p.a + q[others[1]] - 1.0) / (2.0 * root);
        g[others[1]] = (p.a + q[others[0]] - 1.0) / (2.0 * root);
        out[k - 1] = project(g);
    }
    Ok(out)
}

/// Central differences of `F_k` along `e_i − (1,1,1)/3`, which stay in the
/// gauge plane and yield the projected gradient directly.
pub fn finite_difference_gradients(
    map: &GeneralizedMap,
    h: f64,
    tol: &ToleranceConfig,
) -> Result<[[f64; 3]; 3]> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {h}")));
    }
    let p = map.params();
    let shifted = |i: usize, s: f64| {
        let mut r = p;
        let delta = project([0, 1, 2].map(|j| if j == i { s } else { 0.0 }));
        r.d += delta[0];
        r.e += delta[1];
        r.f += delta[2];
        r
    };
    let mut out = [[0.0; 3]; 3];
    for k in 1..=3 {
        for i in 0..3 {
            let fp = edge_function_raw(&shifted(i, h), k, tol)?;
            let fm = edge_function_raw(&shifted(i, -h), k, tol)?;
            out[k - 1][i] = (fp - fm) / (2.0 * h);
        }
    }
    Ok(out)
}

/// `max_k |a+b+c−1 − κ_k|`: zero iff the three closed-form fields coincide.
pub fn equal_gradient_residual(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<f64> {
    let p = map.params();
    let mut worst = 0.0f64;
    for k in 1..=3 {
        worst = worst.max((p.a + p.b + p.c - 1.0 - kappa(&p, k, tol)?).abs());
    }
    Ok(worst)
}

/// Largest relative deviation between the closed form and rescaled central
/// differences, over the edges that are saturated.
pub fn gradient_check(map: &GeneralizedMap, h: f64, tol: &ToleranceConfig) -> Result<GradientCheck> {
    let closed = edge_gradients(map, tol)?;
    let fd = finite_difference_gradients(map, h, tol)?;
    let fs = [1, 2, 3].map(|k| edge_function_raw(&map.params(), k, tol));
    let mut edges = Vec::new();
    let mut max_rel = 0.0f64;
    for k in 1..=3 {
        let fk = fs[k - 1].clone()?;
        if (fk - 1.0).abs() > tol.saturation.max(1e-8) {
            continue;
        }
        let scale = closed_form_scale(map, k, tol)?;
        let num: f64 = (0..3).map(|i| (closed[k - 1][i] - scale * fd[k - 1][i]).powi(2)).sum();
        let den: f64 = (0..3).map(|i| closed[k - 1][i].powi(2)).sum();
        let rel = num.sqrt() / den.sqrt().max(f64::MIN_POSITIVE);
        max_rel = max_rel.max(rel);
        edges.push(k);
    }
    Ok(GradientCheck { closed_form: closed, finite_difference: fd, saturated_edges: edges, max_relative_deviation: max_rel })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GradientCheck {
    pub closed_form: [[f64; 3]; 3],
    pub finite_difference: [[f64; 3]; 3],
    pub saturated_edges: Vec<usize>,
    pub max_relative_deviation: f64,
}

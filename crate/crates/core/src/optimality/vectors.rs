//! Product vectors `(ψ, φ)` with `⟨φ|Φ(ψψ†)|φ⟩ = 0`, one family per
//! saturated positivity condition.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::GeneralizedMap;
use crate::matrix::{kron3, serde_cvector, CVector3, CVector9, Hermitian3};
use crate::positivity::{edge_function_raw, edge_pair, Condition};
use crate::tolerance::ToleranceConfig;

/// Relative phases used for every edge family.
pub const EDGE_PHASES: [f64; 3] = [0.0, FRAC_PI_2, PI];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductVector {
    #[serde(with = "serde_cvector")]
    pub psi: CVector3,
    #[serde(with = "serde_cvector")]
    pub phi: CVector3,
    /// `conj(φ) ⊗ ψ`.
    #[serde(with = "serde_cvector")]
    pub tensor: CVector9,
    pub source_condition: Condition,
    pub phases: Vec<f64>,
}

impl ProductVector {
    pub fn new(psi: CVector3, phi: CVector3, source: Condition, phases: Vec<f64>) -> Self {
        let tensor = kron3(&phi.map(|z| z.conj()), &psi);
        Self { psi, phi, tensor, source_condition: source, phases }
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `⟨φ|Φ(ψψ†)|φ⟩`; Hermiticity of the image makes it real.
pub fn zero_value_check(map: &GeneralizedMap, pv: &ProductVector) -> f64 {
    let value = map.apply(&Hermitian3::rank_one(&pv.psi)).expectation(&pv.phi);
    debug_assert!(value.im.abs() < 1e-12 * (1.0 + value.re.abs()));
    value.re
}

/// Phase tuples whose vectors `(e^{iθ_k})` give linearly independent
/// tensors `ψ* ⊗ ψ`: the zero tuple plus, for every pair `k < l`, the two
/// tuples with `(θ_k, θ_l) = (π/2, π)` and `(π, π/2)`.
pub fn random_phase_basis(n: usize) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("phase basis needs n >= 2, got {n}")));
    }
    let mut out = vec![vec![0.0; n]];
    for k in 0..n {
        for l in (k + 1)..n {
            for (tk, tl) in [(FRAC_PI_2, PI), (PI, FRAC_PI_2)] {
                let mut t = vec![0.0; n];
                t[k] = tk;
                t[l] = tl;
                out.push(t);
            }
        }
    }
    Ok(out)
}

fn not_saturated(c: Condition, value: f64) -> Error {
    Error::ConditionNotSaturated { condition: c.name().to_string(), value }
}

/// `ψ = φ = (e^{iα_1}, e^{iα_2}, e^{iα_3})` for each tuple.
pub fn interior_spanning_vectors(
    map: &GeneralizedMap,
    phase_tuples: &[[f64; 3]],
    tol: &ToleranceConfig,
) -> Result<Vec<ProductVector>> {
    let value = map.total_weight() - 3.0;
    if value.abs() > tol.saturation {
        return Err(not_saturated(Condition::Interior, value));
    }
    Ok(phase_tuples
        .iter()
        .map(|alpha| {
            let psi = CVector3::new(cis(alpha[0]), cis(alpha[1]), cis(alpha[2]));
            ProductVector::new(psi, psi, Condition::Interior, alpha.to_vec())
        })
        .collect())
}

/// The default interior family from [`random_phase_basis`]`(3)`.
pub fn default_interior_phases() -> Vec<[f64; 3]> {
    random_phase_basis(3)
        .expect("n = 3")
        .into_iter()
        .map(|t| [t[0], t[1], t[2]])
        .collect()
}

/// Kernel vectors of edge `k` on the face spanned by its vertex pair
/// `(i, j)`, one per relative phase `η`:
///
/// ```text
/// ψ_i = (w_ji (w_ii−1))^{−1/4}          φ_i = (w_ij (w_ii−1))^{−1/4}
/// ψ_j = e^{iη} (w_ij (w_jj−1))^{−1/4}   φ_j = e^{iη} (w_ji (w_jj−1))^{−1/4}
/// ```
///
/// When both `w_ii − 1` and `w_jj − 1` vanish the edge is flat and the
/// diagonal factors drop out.
pub fn edge_spanning_vectors(
    map: &GeneralizedMap,
    k: usize,
    phases: &[f64],
    tol: &ToleranceConfig,
) -> Result<Vec<ProductVector>> {
    let (i, j) = edge_pair(k)?;
    let p = map.params();
    let value = edge_function_raw(&p, k, tol)? - 1.0;
    if value.abs() > tol.saturation {
        return Err(not_saturated(Condition::edge(k), value));
    }
    let (wij, wji) = (map.entry(i, j), map.entry(j, i));
    let (di, dj) = (map.entry(i, i) - 1.0, map.entry(j, j) - 1.0);
    for r in [wij, wji] {
        if r <= tol.degenerate {
            return Err(Error::DegenerateEdge { edge: k, radicand: r });
        }
    }
    let flat = di <= tol.degenerate && dj <= tol.degenerate;
    if !flat {
        for r in [di, dj] {
            if r <= tol.degenerate {
                return Err(Error::DegenerateEdge { edge: k, radicand: r });
            }
        }
    }
    let (gi, gj) = if flat { (1.0, 1.0) } else { (di, dj) };
    let q = |x: f64| Complex64::new(x.powf(-0.25), 0.0);
    Ok(phases
        .iter()
        .map(|&eta| {
            let mut psi = CVector3::zeros();
            let mut phi = CVector3::zeros();
            psi[i] = q(wji * gi);
            psi[j] = cis(eta) * q(wij * gj);
            phi[i] = q(wij * gi);
            phi[j] = cis(eta) * q(wji * gj);
            ProductVector::new(psi, phi, Condition::edge(k), vec![0.0, eta])
        })
        .collect())
}

/// `ψ = φ = e_k` for a saturated vertex condition `w_kk = 1`.
pub fn vertex_spanning_vector(
    map: &GeneralizedMap,
    k: usize,
    tol: &ToleranceConfig,
) -> Result<ProductVector> {
    if !(1..=3).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k });
    }
    let value = map.entry(k - 1, k - 1) - 1.0;
    if value.abs() > tol.saturation {
        return Err(not_saturated(Condition::vertex(k), value));
    }
    let mut e = CVector3::zeros();
    e[k - 1] = Complex64::new(1.0, 0.0);
    Ok(ProductVector::new(e, e, Condition::vertex(k), Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn phase_basis_counts() {
        for n in 2..7 {
            assert_eq!(random_phase_basis(n).unwrap().len(), n * n - n + 1);
        }
        assert!(random_phase_basis(1).is_err());
    }

    #[test]
    fn interior_vectors_vanish() {
        for m in [GeneralizedMap::reduction(), GeneralizedMap::choi()] {
            let vs = interior_spanning_vectors(&m, &default_interior_phases(), &tol()).unwrap();
            assert_eq!(vs.len(), 7);
            for v in &vs {
                assert_abs_diff_eq!(zero_value_check(&m, v), 0.0, epsilon = 1e-12);
            }
        }
        let m = GeneralizedMap::circulant(1.5, 1.0, 1.0).unwrap();
        let err = interior_spanning_vectors(&m, &default_interior_phases(), &tol()).unwrap_err();
        assert!(matches!(err, Error::ConditionNotSaturated { .. }));
    }

    #[test]
    fn hyperbola_edge_vectors() {
        let m = GeneralizedMap::circulant(1.0, 2.0, 0.5).unwrap();
        for k in 1..=3 {
            let vs = edge_spanning_vectors(&m, k, &EDGE_PHASES, &tol()).unwrap();
            assert_eq!(vs.len(), 3);
            for v in &vs {
                assert_abs_diff_eq!(zero_value_check(&m, v), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn same_shape_edge_vectors() {
        let m = GeneralizedMap::new(1.4, 0.8, 0.8, 0.4, -0.2, -0.2).unwrap();
        for k in [2, 3] {
            for v in edge_spanning_vectors(&m, k, &EDGE_PHASES, &tol()).unwrap() {
                assert_abs_diff_eq!(zero_value_check(&m, &v), 0.0, epsilon = 1e-12);
            }
        }
        let err = edge_spanning_vectors(&m, 1, &EDGE_PHASES, &tol()).unwrap_err();
        assert!(matches!(err, Error::ConditionNotSaturated { .. }));
    }

    #[test]
    fn choi_edges_are_degenerate() {
        for k in 1..=3 {
            let err = edge_spanning_vectors(&GeneralizedMap::choi(), k, &EDGE_PHASES, &tol());
            assert!(matches!(err, Err(Error::DegenerateEdge { .. })), "{err:?}");
        }
    }

    #[test]
    fn vertex_vectors() {
        let v = vertex_spanning_vector(&GeneralizedMap::reduction(), 3, &tol()).unwrap();
        let mut expected = CVector9::zeros();
        expected[8] = Complex64::new(1.0, 0.0);
        assert_eq!(v.tensor, expected);
        assert_eq!(zero_value_check(&GeneralizedMap::reduction(), &v), 0.0);
        let err = vertex_spanning_vector(&GeneralizedMap::choi(), 1, &tol()).unwrap_err();
        assert!(matches!(err, Error::ConditionNotSaturated { .. }));
        // w_33 = a + d = 1 with a = 1.3.
        let m = GeneralizedMap::new(1.3, 0.9, 0.8, -0.3, 0.1, 0.2).unwrap();
        assert!(vertex_spanning_vector(&m, 3, &tol()).is_ok());
    }

    #[test]
    fn zero_value_examples() {
        let s = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let u = CVector3::new(s, s, s);
        let pv = ProductVector::new(u, u, Condition::Interior, vec![]);
        assert_abs_diff_eq!(zero_value_check(&GeneralizedMap::reduction(), &pv), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero_value_check(&GeneralizedMap::choi(), &pv), 0.0, epsilon = 1e-15);
    }
}

//! The generalized Choi map `Φ_W(X) = D_W(X) − X` on 3×3 matrices.
//!
//! `D_W(X)` is diagonal with entries `Σ_j w_ij x_jj`, and `W/w` is doubly
//! stochastic. `W` is parameterized as a circulant part `(a, b, c)` plus the
//! three transposition-like permutations weighted by `(d, e, f)`:
//!
//! ```text
//!     | a+f  b+d  c+e |
//! W = | c+d  a+e  b+f |
//!     | b+e  c+f  a+d |
//! ```
//!
//! The representation has a one-parameter redundancy which is fixed by
//! requiring `d + e + f = 0`.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix3, CMatrix9, Hermitian3, Hermitian9};
use crate::tolerance::ToleranceConfig;

/// Raw `(a, b, c, d, e, f)` record; the JSON form of a map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl MapParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn circulant(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c, 0.0, 0.0, 0.0)
    }

    pub fn perturbation(&self) -> [f64; 3] {
        [self.d, self.e, self.f]
    }
}

/// Shift `{a,b,c} += ξ`, `{d,e,f} −= ξ` with `ξ = (d+e+f)/3`, which leaves
/// every `w_ij` unchanged and lands on `d + e + f = 0`.
pub fn gauge_fix(p: MapParams) -> MapParams {
    let xi = (p.d + p.e + p.f) / 3.0;
    MapParams::new(p.a + xi, p.b + xi, p.c + xi, p.d - xi, p.e - xi, p.f - xi)
}

fn assemble(p: &MapParams) -> Matrix3<f64> {
    let MapParams { a, b, c, d, e, f } = *p;
    Matrix3::new(
        a + f, b + d, c + e, //
        c + d, a + e, b + f, //
        b + e, c + f, a + d,
    )
}

/// A validated, gauge-fixed generalized Choi map. Immutable; `W` is cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "MapParams", try_from = "MapParams")]
pub struct GeneralizedMap {
    params: MapParams,
    w: Matrix3<f64>,
}

impl GeneralizedMap {
    /// Validate and build a map with the default tolerances.
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        Self::with_tolerance(MapParams::new(a, b, c, d, e, f), &ToleranceConfig::default())
    }

    pub fn circulant(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a, b, c, 0.0, 0.0, 0.0)
    }

    pub fn with_tolerance(params: MapParams, tol: &ToleranceConfig) -> Result<Self> {
        let sum = params.d + params.e + params.f;
        if !sum.is_finite() || sum.abs() > tol.gauge {
            return Err(Error::GaugeViolation { sum, tol: tol.gauge });
        }
        let w = assemble(&params);
        for row in 0..3 {
            for col in 0..3 {
                let value = w[(row, col)];
                if !value.is_finite() || value < -tol.entry {
                    return Err(Error::NegativeEntry { row: row + 1, col: col + 1, value });
                }
            }
        }
        Ok(Self { params, w })
    }

    /// Recover the gauge-fixed parameters from a doubly scalable `W`.
    pub fn from_matrix(w: &Matrix3<f64>, tol: &ToleranceConfig) -> Result<Self> {
        let sums: Vec<f64> = (0..3)
            .map(|i| w.row(i).sum())
            .chain((0..3).map(|j| w.column(j).sum()))
            .collect();
        let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
        if !(hi - lo <= tol.doubly_stochastic) {
            return Err(Error::NotDoublyScalable { spread: hi - lo });
        }
        let a = w.trace() / 3.0;
        let b = (w[(0, 1)] + w[(1, 2)] + w[(2, 0)]) / 3.0;
        let c = (w[(0, 2)] + w[(1, 0)] + w[(2, 1)]) / 3.0;
        let d = w[(0, 1)] - b;
        let e = w[(2, 0)] - b;
        let f = w[(1, 2)] - b;
        // The c-channel must agree; it does whenever row and column sums match.
        let spread = [w[(1, 0)] - c - d, w[(0, 2)] - c - e, w[(2, 1)] - c - f]
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max);
        if spread > tol.doubly_stochastic {
            return Err(Error::NotDoublyScalable { spread });
        }
        // d+e+f vanishes analytically; remove the rounding residue.
        let p = gauge_fix(MapParams::new(a, b, c, d, e, f));
        Self::with_tolerance(p, tol)
    }

    /// `(2, 1, 0, 0, 0, 0)`: Choi's original non-decomposable map.
    pub fn choi() -> Self {
        Self::circulant(2.0, 1.0, 0.0).expect("valid preset")
    }

    /// `(1, 1, 1, 0, 0, 0)`: the reduction map `X ↦ I·Tr X − X`.
    pub fn reduction() -> Self {
        Self::circulant(1.0, 1.0, 1.0).expect("valid preset")
    }

    pub fn params(&self) -> MapParams {
        self.params
    }

    pub fn a(&self) -> f64 {
        self.params.a
    }
    pub fn b(&self) -> f64 {
        self.params.b
    }
    pub fn c(&self) -> f64 {
        self.params.c
    }
    pub fn d(&self) -> f64 {
        self.params.d
    }
    pub fn e(&self) -> f64 {
        self.params.e
    }
    pub fn f(&self) -> f64 {
        self.params.f
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.w
    }

    /// `w_ij` with 0-based indices.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    /// Common row/column sum `w = a + b + c`.
    pub fn total_weight(&self) -> f64 {
        self.params.a + self.params.b + self.params.c
    }

    /// `μ = min{a−1, b, c}`; Bob is `d, e, f ≥ −μ`.
    pub fn mu(&self) -> f64 {
        (self.params.a - 1.0).min(self.params.b).min(self.params.c)
    }

    pub fn is_circulant(&self, tol: f64) -> bool {
        self.params.d.abs() <= tol && self.params.e.abs() <= tol && self.params.f.abs() <= tol
    }

    /// The map applied to an arbitrary (not necessarily Hermitian) matrix.
    pub fn apply_matrix(&self, x: &CMatrix3) -> CMatrix3 {
        let mut out = -x;
        for i in 0..3 {
            let diag: Complex64 = (0..3).map(|j| x[(j, j)] * self.w[(i, j)]).sum();
            out[(i, i)] += diag;
        }
        out
    }

    pub fn apply(&self, x: &Hermitian3) -> Hermitian3 {
        Hermitian3::from_unchecked(self.apply_matrix(x.matrix()))
    }

    /// Validates Hermiticity of a raw input before applying.
    pub fn apply_checked(&self, x: &CMatrix3, tol: &ToleranceConfig) -> Result<Hermitian3> {
        let h = Hermitian3::new(*x, tol.hermitian)?;
        Ok(self.apply(&h))
    }

    /// `Σ_ij E_ij ⊗ Φ(E_ij)`: block `(i, j)` is `Φ(E_ij)`.
    pub fn choi_matrix(&self) -> Hermitian9 {
        let mut out = CMatrix9::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut unit = CMatrix3::zeros();
                unit[(i, j)] = Complex64::new(1.0, 0.0);
                let block = self.apply_matrix(&unit);
                out.fixed_view_mut::<3, 3>(3 * i, 3 * j).copy_from(&block);
            }
        }
        Hermitian9::from_unchecked(out)
    }

    /// `Tr(C(Φ) ρ)`. Negative values certify that `ρ` is entangled whenever
    /// the map is positive.
    pub fn witness_value(&self, rho: &Hermitian9, tol: &ToleranceConfig) -> Result<f64> {
        rho.check_state(tol.state_psd)?;
        let choi = self.choi_matrix();
        Ok((choi.matrix() * rho.matrix()).trace().re)
    }
}

impl From<GeneralizedMap> for MapParams {
    fn from(m: GeneralizedMap) -> Self {
        m.params
    }
}

impl TryFrom<MapParams> for GeneralizedMap {
    type Error = Error;

    fn try_from(p: MapParams) -> Result<Self> {
        Self::with_tolerance(p, &ToleranceConfig::default())
    }
}

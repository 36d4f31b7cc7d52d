//! Small dense complex matrix wrappers and their JSON encoding.
//!
//! Matrices serialize as row-major nested arrays of `[re, im]` pairs;
//! vectors as flat arrays of `[re, im]` pairs.

use nalgebra::{Matrix3, SMatrix, SVector, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type CMatrix3 = Matrix3<Complex64>;
pub type CMatrix9 = SMatrix<Complex64, 9, 9>;
pub type CVector3 = Vector3<Complex64>;
pub type CVector9 = SVector<Complex64, 9>;

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_deviation<const N: usize>(m: &SMatrix<Complex64, N, N>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in i..N {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `a ⊗ b` with the left factor as the slow index: entry `3i + k = a_i b_k`.
pub fn kron3(a: &CVector3, b: &CVector3) -> CVector9 {
    CVector9::from_fn(|idx, _| a[idx / 3] * b[idx % 3])
}

/// A Hermitian 3×3 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian3(CMatrix3);

impl Hermitian3 {
    pub fn new(m: CMatrix3, tol: f64) -> Result<Self> {
        let deviation = hermitian_deviation(&m);
        if deviation > tol {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self(m))
    }

    /// The rank-one projector-like matrix `ψψ†` (unnormalized).
    pub fn rank_one(psi: &CVector3) -> Self {
        Self(psi * psi.adjoint())
    }

    pub fn from_real_diagonal(diag: [f64; 3]) -> Self {
        Self(CMatrix3::from_diagonal(&Vector3::new(
            Complex64::new(diag[0], 0.0),
            Complex64::new(diag[1], 0.0),
            Complex64::new(diag[2], 0.0),
        )))
    }

    pub(crate) fn from_unchecked(m: CMatrix3) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix3 {
        self.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }

    /// `⟨v|X|v⟩`, real up to rounding.
    pub fn expectation(&self, v: &CVector3) -> Complex64 {
        (v.adjoint() * self.0 * v)[(0, 0)]
    }
}

/// A Hermitian 9×9 complex matrix: a Choi matrix or a two-qutrit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian9(CMatrix9);

impl Hermitian9 {
    pub fn new(m: CMatrix9, tol: f64) -> Result<Self> {
        let deviation = hermitian_deviation(&m);
        if deviation > tol {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self(m))
    }

    pub(crate) fn from_unchecked(m: CMatrix9) -> Self {
        Self(m)
    }

    /// The pure state `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure_state(v: &CVector9) -> Result<Self> {
        let norm2 = v.norm_squared();
        if norm2 <= 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self(v * v.adjoint() / Complex64::new(norm2, 0.0)))
    }

    /// `σ ⊗ τ` for two 3×3 Hermitian factors.
    pub fn product(sigma: &Hermitian3, tau: &Hermitian3) -> Self {
        Self(sigma.0.kronecker(&tau.0))
    }

    pub fn maximally_mixed() -> Self {
        Self(CMatrix9::identity() / Complex64::new(9.0, 0.0))
    }

    pub fn matrix(&self) -> &CMatrix9 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Unit trace and positive semidefinite within `psd_tol`.
    pub fn check_state(&self, psd_tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > psd_tol.max(1e-12) {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let lowest = self.eigenvalues()[0];
        if lowest < -psd_tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(())
    }

    pub fn expectation(&self, v: &CVector9) -> Complex64 {
        (v.adjoint() * self.0 * v)[(0, 0)]
    }
}

pub(crate) mod serde_cmatrix {
    use super::*;

    pub fn serialize<S, const N: usize>(
        m: &SMatrix<Complex64, N, N>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error>
    where
        S: Serializer,
    {
        let rows: Vec<Vec<[f64; 2]>> = (0..N)
            .map(|i| (0..N).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D, const N: usize>(
        d: D,
    ) -> std::result::Result<SMatrix<Complex64, N, N>, D::Error>
    where
        D: Deserializer<'de>,
    {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(serde::de::Error::custom(format!("expected a {N}x{N} matrix")));
        }
        Ok(SMatrix::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

pub(crate) mod serde_cvector {
    use super::*;

    pub fn serialize<S, const N: usize>(
        v: &SVector<Complex64, N>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error>
    where
        S: Serializer,
    {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D, const N: usize>(
        d: D,
    ) -> std::result::Result<SVector<Complex64, N>, D::Error>
    where
        D: Deserializer<'de>,
    {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if pairs.len() != N {
            return Err(serde::de::Error::custom(format!("expected {N} entries")));
        }
        Ok(SVector::from_fn(|i, _| Complex64::new(pairs[i][0], pairs[i][1])))
    }
}

impl Serialize for Hermitian3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_cmatrix::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Hermitian3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = serde_cmatrix::deserialize(d)?;
        Hermitian3::new(m, 1e-12).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Hermitian9 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_cmatrix::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Hermitian9 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = serde_cmatrix::deserialize(d)?;
        Hermitian9::new(m, 1e-12).map_err(serde::de::Error::custom)
    }
}

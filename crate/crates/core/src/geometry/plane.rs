//! The gauge plane `d + e + f = 0` with orthonormal chart
//! `u = (d − e)/√2`, `v = (d + e − 2f)/√6`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MapParams;
use crate::positivity::{
    condition_report_params, edge_function_clamped, hessian_radius, verdict_from_conditions,
};
use crate::tolerance::ToleranceConfig;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn sqrt6() -> f64 {
    6f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct PlanePoint {
    d: f64,
    e: f64,
    f: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    d: f64,
    e: f64,
    f: f64,
}

impl TryFrom<RawPoint> for PlanePoint {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        PlanePoint::new(r.d, r.e, r.f)
    }
}

impl From<PlanePoint> for RawPoint {
    fn from(p: PlanePoint) -> Self {
        RawPoint { d: p.d, e: p.e, f: p.f }
    }
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { d: 0.0, e: 0.0, f: 0.0 };

    pub fn new(d: f64, e: f64, f: f64) -> Result<Self> {
        let sum = d + e + f;
        if !sum.is_finite() || sum.abs() > 1e-12 {
            return Err(Error::GaugeViolation { sum, tol: 1e-12 });
        }
        Ok(Self { d, e, f })
    }

    /// Exact on the plane: `f` absorbs the rounding of `d + e`.
    pub fn from_de(d: f64, e: f64) -> Self {
        Self { d, e, f: 0.0 - (d + e) }
    }

    /// Caller guarantees the gauge up to rounding.
    pub(crate) fn from_raw(d: f64, e: f64, f: f64) -> Self {
        Self { d, e, f }
    }

    pub fn from_uv(u: f64, v: f64) -> Self {
        let d = u / SQRT2 + v / sqrt6();
        let e = -u / SQRT2 + v / sqrt6();
        Self::from_de(d, e)
    }

    pub fn uv(&self) -> (f64, f64) {
        ((self.d - self.e) / SQRT2, (self.d + self.e - 2.0 * self.f) / sqrt6())
    }

    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn e(&self) -> f64 {
        self.e
    }
    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.d, self.e, self.f]
    }

    pub fn norm_squared(&self) -> f64 {
        self.d * self.d + self.e * self.e + self.f * self.f
    }

    /// `(d, e, f)` permuted so that coordinate `m` is moved to `pos[m]`.
    pub fn permuted(&self, pos: [usize; 3]) -> Self {
        let c = self.coords();
        let mut out = [0.0; 3];
        for m in 0..3 {
            out[pos[m]] = c[m];
        }
        Self { d: out[0], e: out[1], f: out[2] }
    }

    pub fn with_base(&self, a: f64, b: f64, c: f64) -> MapParams {
        MapParams::new(a, b, c, self.d, self.e, self.f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MembershipFlags {
    pub in_bob: bool,
    pub in_alice: bool,
    pub in_hessian_circle: bool,
}

pub(crate) fn check_base(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a >= 1.0 && b >= 0.0 && c >= 0.0) || !(a + b + c).is_finite() {
        return Err(Error::InadmissibleBase(format!("need a >= 1 and b, c >= 0, got ({a}, {b}, {c})")));
    }
    Ok(())
}

/// `μ = min{a − 1, b, c}`.
pub fn base_mu(a: f64, b: f64, c: f64) -> f64 {
    (a - 1.0).min(b).min(c)
}

pub(crate) fn in_alice(p: &MapParams, tol: &ToleranceConfig) -> bool {
    (1..=3).all(|k| {
        edge_function_clamped(p, k, tol.radicand_clamp).is_some_and(|f| f >= 1.0 - tol.saturation)
    })
}

pub(crate) fn in_bob(mu: f64, p: &PlanePoint, sat: f64) -> bool {
    p.coords().iter().all(|q| *q >= -mu - sat)
}

pub fn plane_membership(
    a: f64,
    b: f64,
    c: f64,
    p: &PlanePoint,
    tol: &ToleranceConfig,
) -> Result<MembershipFlags> {
    check_base(a, b, c)?;
    let sat = tol.saturation;
    let r_h = hessian_radius(a, b, c);
    Ok(MembershipFlags {
        in_bob: in_bob(base_mu(a, b, c), p, sat),
        in_alice: in_alice(&p.with_base(a, b, c), tol),
        in_hessian_circle: p.norm_squared() <= r_h * r_h + sat,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneVerdict {
    Positive,
    NotPositive,
    Unknown,
}

impl PlaneVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Positive => "positive",
            Self::NotPositive => "not_positive",
            Self::Unknown => "unknown",
        }
    }
}

/// Closed-form positivity of the map `(a, b, c) + p`. A negative entry of
/// `W` makes a one-element minor negative at a simplex vertex.
pub fn plane_verdict(a: f64, b: f64, c: f64, p: &PlanePoint, tol: &ToleranceConfig) -> PlaneVerdict {
    let params = p.with_base(a, b, c);
    let offdiag = [
        b + p.d, c + p.d, b + p.e, c + p.e, b + p.f, c + p.f,
    ];
    if offdiag.iter().any(|w| *w < -tol.entry) {
        return PlaneVerdict::NotPositive;
    }
    let report = condition_report_params(&params, tol);
    match verdict_from_conditions(&report, tol.saturation) {
        Some(true) => PlaneVerdict::Positive,
        Some(false) => PlaneVerdict::NotPositive,
        None => PlaneVerdict::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionSample {
    pub u: f64,
    pub v: f64,
    pub point: PlanePoint,
    pub flags: MembershipFlags,
    pub positivity: PlaneVerdict,
}

/// `n × n` grid over `[−R, R]²` in the `(u, v)` chart, rows of constant `v`
/// from bottom to top, each row left to right.
pub fn region_scan(
    a: f64,
    b: f64,
    c: f64,
    grid_radius: f64,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<RegionSample>> {
    check_base(a, b, c)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size {n} < 2")));
    }
    if !(grid_radius > 0.0 && grid_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid radius {grid_radius}")));
    }
    let coord = |i: usize| -grid_radius + 2.0 * grid_radius * i as f64 / (n - 1) as f64;
    let rows: Vec<Vec<RegionSample>> = (0..n)
        .into_par_iter()
        .map(|iv| {
            let v = coord(iv);
            (0..n)
                .map(|iu| {
                    let u = coord(iu);
                    let point = PlanePoint::from_uv(u, v);
                    let flags = plane_membership(a, b, c, &point, tol).expect("base checked");
                    RegionSample { u, v, point, flags, positivity: plane_verdict(a, b, c, &point, tol) }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn chart_round_trip() {
        let p = PlanePoint::new(0.3, -0.1, -0.2).unwrap();
        let (u, v) = p.uv();
        let q = PlanePoint::from_uv(u, v);
        for (x, y) in p.coords().iter().zip(q.coords()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(u * u + v * v, p.norm_squared(), epsilon = 1e-15);
        assert!(PlanePoint::new(0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn membership_examples() {
        let f = plane_membership(1.7, 0.9, 0.5, &PlanePoint::ORIGIN, &tol()).unwrap();
        assert!(f.in_alice && f.in_bob && f.in_hessian_circle);

        let mu = base_mu(1.7, 0.9, 0.5);
        let vertex = PlanePoint::new(2.0 * mu, -mu, -mu).unwrap();
        assert!(plane_membership(1.7, 0.9, 0.5, &vertex, &tol()).unwrap().in_bob);

        let f = plane_membership(3.0, 0.0, 0.0, &PlanePoint::ORIGIN, &tol()).unwrap();
        assert!(f.in_bob);
        let off = PlanePoint::new(0.01, -0.005, -0.005).unwrap();
        assert!(!plane_membership(3.0, 0.0, 0.0, &off, &tol()).unwrap().in_bob);

        assert!(matches!(
            plane_membership(0.9, 1.0, 1.0, &PlanePoint::ORIGIN, &tol()),
            Err(Error::InadmissibleBase(_))
        ));
    }

    #[test]
    fn scan_shape_and_order() {
        let s = region_scan(1.7, 0.9, 0.5, 1.0, 5, &tol()).unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!((s[0].u, s[0].v), (-1.0, -1.0));
        assert_eq!((s[1].u, s[1].v), (-0.5, -1.0));
        assert_eq!((s[24].u, s[24].v), (1.0, 1.0));
        assert!(s.iter().any(|r| r.flags.in_alice && r.flags.in_bob && r.flags.in_hessian_circle));
        assert!(region_scan(1.7, 0.9, 0.5, 1.0, 1, &tol()).is_err());
    }

    #[test]
    fn degenerate_bob_scan() {
        let s = region_scan(3.0, 0.0, 0.0, 0.5, 5, &tol()).unwrap();
        let inside: Vec<_> = s.iter().filter(|r| r.flags.in_bob).collect();
        assert_eq!(inside.len(), 1);
        assert_eq!(inside[0].point.norm_squared(), 0.0);
    }
}

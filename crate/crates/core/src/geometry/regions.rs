//! Classification of the `(b, c)` plane at `a = 3 − b − c` by how the
//! vertex triangle (Bob) and the edge region (Alice) sit inside each other.

use serde::{Deserialize, Serialize};

use super::plane::{in_alice, PlanePoint};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcRegionClass {
    /// Bob inside Alice.
    Blue,
    /// Proper crossing.
    Violet,
    /// Alice inside Bob.
    Red,
    BoundaryBlueViolet,
    BoundaryVioletRed,
    Inadmissible,
}

impl BcRegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Blue => "blue",
            Self::Violet => "violet",
            Self::Red => "red",
            Self::BoundaryBlueViolet => "boundary_blue_violet",
            Self::BoundaryVioletRed => "boundary_violet_red",
            Self::Inadmissible => "inadmissible",
        }
    }
}

/// `b, c ≥ 0`, `a = 3 − b − c ≥ 1` and the origin in Alice, i.e.
/// `b + c − 1 ≤ √(bc)`.
pub fn bc_admissible(b: f64, c: f64, tol: f64) -> bool {
    b >= 0.0 && c >= 0.0 && b + c <= 2.0 + tol && b + c - 1.0 <= (b * c).sqrt() + tol
}

/// `(blue, red)` margins: Bob ⊂ Alice iff `blue ≥ 0`, Alice ⊂ Bob iff
/// `red > 0`.
pub fn bc_margins(b: f64, c: f64) -> (f64, f64) {
    let a = 3.0 - b - c;
    let m = b.min(c);
    if m <= a - 1.0 {
        let blue = (a - 1.0 + 2.0 * m) * (a - 1.0 - m) - 1.0;
        let red = (b + c - 1.0) - 0.5 * m;
        (blue, red)
    } else {
        let blue = (b - a + 1.0) * (c - a + 1.0) - 1.0;
        let red = (b - c).powi(2);
        (blue, red)
    }
}

/// Class of an arbitrary pair, `Inadmissible` included.
pub fn bc_class(b: f64, c: f64, tol: &ToleranceConfig) -> BcRegionClass {
    let sat = tol.saturation;
    if !bc_admissible(b, c, sat) {
        return BcRegionClass::Inadmissible;
    }
    let (blue, red) = bc_margins(b, c);
    if blue > sat {
        BcRegionClass::Blue
    } else if blue >= -sat {
        BcRegionClass::BoundaryBlueViolet
    } else if red > sat {
        BcRegionClass::Red
    } else if red >= -sat {
        BcRegionClass::BoundaryVioletRed
    } else {
        BcRegionClass::Violet
    }
}

pub fn bc_region_class(b: f64, c: f64, tol: &ToleranceConfig) -> Result<BcRegionClass> {
    match bc_class(b, c, tol) {
        BcRegionClass::Inadmissible => Err(Error::Inadmissible { b, c }),
        class => Ok(class),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BcSample {
    pub b: f64,
    pub c: f64,
    pub a: f64,
    pub class: BcRegionClass,
}

/// `n × n` grid over `[0, 2]²`, rows of constant `c`, row-major.
pub fn bc_scan(n: usize, tol: &ToleranceConfig) -> Result<Vec<BcSample>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size {n} < 2")));
    }
    let coord = |i: usize| 2.0 * i as f64 / (n - 1) as f64;
    Ok((0..n)
        .flat_map(|ic| (0..n).map(move |ib| (coord(ib), coord(ic))))
        .map(|(b, c)| BcSample { b, c, a: 3.0 - b - c, class: bc_class(b, c, tol) })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    AliceInsideBob,
    BobInsideAlice,
    Crossing,
}

/// Points on the boundary of Bob, `samples_per_side` per side, always
/// including the three vertices and the three side midpoints.
pub fn bob_boundary(mu: f64, samples_per_side: usize) -> Vec<PlanePoint> {
    let n = samples_per_side.max(2) & !1;
    let vertices = [
        PlanePoint::from_de(2.0 * mu, -mu),
        PlanePoint::from_de(-mu, 2.0 * mu),
        PlanePoint::from_de(-mu, -mu),
    ];
    let mut out = Vec::with_capacity(3 * n);
    for s in 0..3 {
        let (p, q) = (vertices[s], vertices[(s + 1) % 3]);
        for i in 0..n {
            let t = i as f64 / n as f64;
            out.push(PlanePoint::from_de(p.d() + t * (q.d() - p.d()), p.e() + t * (q.e() - p.e())));
        }
    }
    out
}

/// Containment read off by sampling Bob's boundary: none of it in Alice
/// means Alice sits inside Bob, all of it means the reverse.
pub fn containment_scan(b: f64, c: f64, samples_per_side: usize, tol: &ToleranceConfig) -> Result<Containment> {
    if !bc_admissible(b, c, tol.saturation) {
        return Err(Error::Inadmissible { b, c });
    }
    let a = 3.0 - b - c;
    let mu = (a - 1.0).min(b).min(c);
    let boundary = bob_boundary(mu, samples_per_side);
    let inside = boundary.iter().filter(|p| in_alice(&p.with_base(a, b, c), tol)).count();
    Ok(if inside == 0 {
        Containment::AliceInsideBob
    } else if inside == boundary.len() {
        Containment::BobInsideAlice
    } else {
        Containment::Crossing
    })
}

/// Bisection along `b + c = s` at fixed `b − c` for the switch between two
/// containment states; `lo` must show `at_lo` and `hi` must not.
pub fn bisect_transition(
    diff: f64,
    lo: f64,
    hi: f64,
    at_lo: Containment,
    samples_per_side: usize,
    tol: &ToleranceConfig,
    width: f64,
) -> Result<(f64, f64)> {
    let state = |s: f64| containment_scan((s + diff) / 2.0, (s - diff) / 2.0, samples_per_side, tol);
    if state(lo)? != at_lo || state(hi)? == at_lo {
        return Err(Error::InvalidArgument(format!("[{lo}, {hi}] does not bracket a transition")));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if state(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

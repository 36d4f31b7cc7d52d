//! Maps with `b = c = (3 − a)/2`, whose edge regions share one circle, and
//! boundary facets of the circulant family.

use serde::{Deserialize, Serialize};

use super::plane::{in_bob, PlanePoint};
use crate::error::{Error, Result};
use crate::map::GeneralizedMap;
use crate::positivity::classify_positivity;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SameShapeRegime {
    /// `a = 1`: the circle shrinks to the origin.
    Point,
    FullCircle,
    Tangent,
    ThreeArcs,
    Joining,
    ThreeVertexPoints,
}

impl SameShapeRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Point => "point",
            Self::FullCircle => "full_circle",
            Self::Tangent => "tangent",
            Self::ThreeArcs => "three_arcs",
            Self::Joining => "joining",
            Self::ThreeVertexPoints => "three_vertex_points",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SameShapeStructure {
    pub a: f64,
    pub b: f64,
    pub radius: f64,
    pub regime: SameShapeRegime,
    pub bob_inradius: f64,
    pub bob_circumradius: f64,
    pub hessian_radius: f64,
    pub optimal_set: String,
    /// Isolated optimal points: tangency, joining or vertex points.
    pub points: Vec<PlanePoint>,
}

/// Point of the circle of radius `r` at chart angle `theta`.
pub fn circle_point(r: f64, theta: f64) -> PlanePoint {
    PlanePoint::from_uv(r * theta.cos(), r * theta.sin())
}

fn bob_vertices(mu: f64) -> Vec<PlanePoint> {
    vec![
        PlanePoint::from_de(2.0 * mu, -mu),
        PlanePoint::from_de(-mu, 2.0 * mu),
        PlanePoint::from_de(-mu, -mu),
    ]
}

fn side_midpoints(mu: f64) -> Vec<PlanePoint> {
    vec![
        PlanePoint::from_de(-mu, 0.5 * mu),
        PlanePoint::from_de(0.5 * mu, -mu),
        PlanePoint::from_de(0.5 * mu, 0.5 * mu),
    ]
}

pub fn same_shape_structure(a: f64, tol: &ToleranceConfig) -> Result<SameShapeStructure> {
    if !(1.0..=3.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [1, 3]")));
    }
    let b = (3.0 - a) / 2.0;
    let radius = 1.5f64.sqrt() * (a - 1.0);
    let mu = (a - 1.0).min(b);
    let inradius = 1.5f64.sqrt() * b;
    let circumradius = 6f64.sqrt() * b;
    let hessian_radius = if b <= 0.5 { 6f64.sqrt() * b } else { 6f64.sqrt() * (1.0 - b) };
    let sat = tol.saturation;
    let (regime, optimal_set, points) = if (a - 1.0).abs() <= sat {
        (SameShapeRegime::Point, "origin".to_string(), vec![PlanePoint::ORIGIN])
    } else if radius < inradius - sat {
        (SameShapeRegime::FullCircle, "whole circle".to_string(), Vec::new())
    } else if radius <= inradius + sat {
        (SameShapeRegime::Tangent, "whole circle, touching the sides of Bob".to_string(), side_midpoints(mu))
    } else if radius < circumradius - sat {
        (SameShapeRegime::ThreeArcs, "three arcs of the circle inside Bob".to_string(), Vec::new())
    } else if radius <= circumradius + sat {
        (SameShapeRegime::Joining, "circle meets Bob at its vertices".to_string(), bob_vertices(mu))
    } else {
        (SameShapeRegime::ThreeVertexPoints, "vertices of Bob".to_string(), bob_vertices(mu))
    };
    Ok(SameShapeStructure {
        a,
        b,
        radius,
        regime,
        bob_inradius: inradius,
        bob_circumradius: circumradius,
        hessian_radius,
        optimal_set,
        points,
    })
}

/// How many of `samples` equally spaced circle points lie in Bob. The
/// sampling includes the directions of Bob's vertices and side normals
/// when `samples` is a multiple of 12.
pub fn circle_points_in_bob(a: f64, samples: usize, tol: &ToleranceConfig) -> usize {
    let b = (3.0 - a) / 2.0;
    let r = 1.5f64.sqrt() * (a - 1.0);
    let mu = (a - 1.0).min(b);
    (0..samples)
        .filter(|i| {
            let theta = std::f64::consts::TAU * *i as f64 / samples as f64;
            in_bob(mu, &circle_point(r, theta), tol.saturation)
        })
        .count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeaAnchorTransitions {
    /// Bracket on `a` where the circle stops fitting in Bob.
    pub tangency: (f64, f64),
    /// Bracket on `a` where the last arcs inside Bob vanish.
    pub joining: (f64, f64),
    pub joining_points: Vec<PlanePoint>,
}

fn bisect(mut lo: f64, mut hi: f64, width: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Locate both regime changes by bisection on sampled circle membership.
pub fn sea_anchor_transitions(samples: usize, width: f64, tol: &ToleranceConfig) -> Result<SeaAnchorTransitions> {
    if samples < 12 || !samples.is_multiple_of(12) {
        return Err(Error::InvalidArgument(format!("samples {samples} must be a positive multiple of 12")));
    }
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(format!("width {width}")));
    }
    // No saturation slack here: the brackets must resolve the exact events.
    let strict = ToleranceConfig { saturation: 0.0, ..*tol };
    let tangency = bisect(1.2, 1.9, width, |a| circle_points_in_bob(a, samples, &strict) == samples);
    let joining = bisect(1.8, 2.5, width, |a| circle_points_in_bob(a, samples, &strict) > 0);
    let a = 0.5 * (joining.0 + joining.1);
    let r = 1.5f64.sqrt() * (a - 1.0);
    let joining_points = (0..3)
        .map(|k| circle_point(r, -std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::TAU / 3.0))
        .collect();
    Ok(SeaAnchorTransitions { tangency, joining, joining_points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KyeFacet {
    VertexA,
    VertexB,
    VertexC,
    Edge,
    Interior,
    InteriorOfCone,
}

impl KyeFacet {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::VertexA => "vertex_a",
            Self::VertexB => "vertex_b",
            Self::VertexC => "vertex_c",
            Self::Edge => "edge",
            Self::Interior => "interior",
            Self::InteriorOfCone => "interior_of_cone",
        }
    }
}

/// Boundary facets of the positive circulant cone touched by `map`.
pub fn kye_boundary_classify(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<Vec<KyeFacet>> {
    if !map.is_circulant(tol.gauge) {
        return Err(Error::NotOnCirculantSlice);
    }
    if !classify_positivity(map, tol)?.is_positive() {
        return Err(Error::NotPositive);
    }
    let (a, b, c) = (map.a(), map.b(), map.c());
    let sat = tol.saturation;
    let mut out = Vec::new();
    if (a - 1.0).abs() <= sat {
        out.push(KyeFacet::VertexA);
    }
    if b.abs() <= sat {
        out.push(KyeFacet::VertexB);
    }
    if c.abs() <= sat {
        out.push(KyeFacet::VertexC);
    }
    if a <= 2.0 + sat && (a + (b * c).sqrt() - 2.0).abs() <= sat {
        out.push(KyeFacet::Edge);
    }
    if (a + b + c - 3.0).abs() <= sat {
        out.push(KyeFacet::Interior);
    }
    if out.is_empty() {
        out.push(KyeFacet::InteriorOfCone);
    }
    Ok(out)
}

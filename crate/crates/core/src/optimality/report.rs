use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::vectors::{
    default_interior_phases, edge_spanning_vectors, interior_spanning_vectors,
    vertex_spanning_vector, ProductVector, EDGE_PHASES,
};
use crate::error::{Error, Result};
use crate::map::GeneralizedMap;
use crate::positivity::{classify_positivity, condition_report, Condition, ConditionReport};
use crate::tolerance::ToleranceConfig;

/// Saturation pattern supplying the spanning vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    EeeKye,
    EeeSameshape,
    Iee,
    Iev,
    Ivv,
    Insufficient,
    None,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::EeeKye => "eee_kye",
            Self::EeeSameshape => "eee_sameshape",
            Self::Iee => "iee",
            Self::Iev => "iev",
            Self::Ivv => "ivv",
            Self::Insufficient => "insufficient",
            Self::None => "none",
        }
    }
}

/// An edge whose saturation could not contribute vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkippedEdge {
    pub edge: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpanningReport {
    pub vectors: Vec<ProductVector>,
    /// Descending, padded with zeros to length 9.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub case_label: CaseLabel,
    pub optimal_by_spanning: bool,
    pub saturated: Vec<Condition>,
    pub skipped_edges: Vec<SkippedEdge>,
    pub max_zero_value: f64,
}

/// Singular values of the `9 × N` matrix whose columns are the tensors,
/// descending and padded to 9, with the rank relative to the largest.
pub fn span_rank(tensors: &[ProductVector], rank_tol: f64) -> (Vec<f64>, usize) {
    let mut sv: Vec<f64> = if tensors.is_empty() {
        Vec::new()
    } else {
        let m = DMatrix::<Complex64>::from_fn(9, tensors.len(), |r, c| tensors[c].tensor[r]);
        m.svd(false, false).singular_values.iter().copied().collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.truncate(9);
    sv.resize(9, 0.0);
    let top = sv[0];
    let rank = if top > 0.0 { sv.iter().filter(|s| **s > rank_tol * top).count() } else { 0 };
    (sv, rank)
}

/// Edges that are saturated and admit the kernel construction.
fn usable_edges(map: &GeneralizedMap, report: &ConditionReport, tol: &ToleranceConfig) -> Vec<usize> {
    report
        .saturated_edges()
        .into_iter()
        .filter(|k| edge_spanning_vectors(map, *k, &[0.0], tol).is_ok())
        .collect()
}

fn label_from(
    map: &GeneralizedMap,
    report: &ConditionReport,
    edges: &[usize],
    tol: &ToleranceConfig,
) -> CaseLabel {
    let sat = tol.saturation;
    let p = map.params();
    let interior = report.is_saturated(Condition::Interior);
    let vertices = report.saturated_vertices().len();
    let b_eq_c = (p.b - p.c).abs() <= sat;
    if interior && vertices >= 2 {
        CaseLabel::Ivv
    } else if edges.len() == 3 && map.is_circulant(sat) && !b_eq_c {
        CaseLabel::EeeKye
    } else if b_eq_c && interior && edges.len() >= 2 {
        CaseLabel::EeeSameshape
    } else if interior && vertices >= 1 && !edges.is_empty() {
        CaseLabel::Iev
    } else if interior && edges.len() >= 2 {
        CaseLabel::Iee
    } else {
        CaseLabel::Insufficient
    }
}

/// Saturation case of a map; `None` unless the map is certified positive.
pub fn classify_case(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<CaseLabel> {
    if !classify_positivity(map, tol)?.is_positive() {
        return Ok(CaseLabel::None);
    }
    let report = condition_report(map, tol);
    let edges = usable_edges(map, &report, tol);
    Ok(label_from(map, &report, &edges, tol))
}

/// Collect kernel vectors of every saturated condition and test whether
/// they span `C³ ⊗ C³`. A rank below 9 is inconclusive, not a refutation.
pub fn spanning_report(map: &GeneralizedMap, tol: &ToleranceConfig) -> Result<SpanningReport> {
    let report = condition_report(map, tol);
    if !classify_positivity(map, tol)?.is_positive() {
        return Ok(SpanningReport {
            vectors: Vec::new(),
            singular_values: vec![0.0; 9],
            rank: 0,
            case_label: CaseLabel::None,
            optimal_by_spanning: false,
            saturated: report.saturated,
            skipped_edges: Vec::new(),
            max_zero_value: 0.0,
        });
    }
    let mut vectors = Vec::new();
    if report.is_saturated(Condition::Interior) {
        vectors.extend(interior_spanning_vectors(map, &default_interior_phases(), tol)?);
    }
    let mut skipped = Vec::new();
    let mut edges = Vec::new();
    for k in report.saturated_edges() {
        match edge_spanning_vectors(map, k, &EDGE_PHASES, tol) {
            Ok(vs) => {
                vectors.extend(vs);
                edges.push(k);
            }
            Err(e @ Error::DegenerateEdge { .. }) => {
                skipped.push(SkippedEdge { edge: k, reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    for k in report.saturated_vertices() {
        vectors.push(vertex_spanning_vector(map, k, tol)?);
    }
    let (singular_values, rank) = span_rank(&vectors, tol.rank);
    let max_zero_value = vectors
        .iter()
        .map(|v| super::zero_value_check(map, v).abs())
        .fold(0.0, f64::max);
    Ok(SpanningReport {
        case_label: label_from(map, &report, &edges, tol),
        optimal_by_spanning: rank == 9,
        vectors,
        singular_values,
        rank,
        saturated: report.saturated,
        skipped_edges: skipped,
        max_zero_value,
    })
}

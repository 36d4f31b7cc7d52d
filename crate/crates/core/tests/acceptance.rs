//! Acceptance criteria, one test each. Every test prints a PASS or FAIL
//! line before asserting.

use std::f64::consts::TAU;
use std::time::Instant;

use choimap::geometry::{
    bc_class, bisect_transition, optimal_points_iee, optimal_points_iev, optimal_points_ivv,
    sea_anchor_transitions, validate_point, BcRegionClass, Containment, PlanePoint,
};
use choimap::optimality::{random_phase_basis, span_rank, spanning_report, CaseLabel, ProductVector};
use choimap::positivity::{
    classify_positivity, condition_report, equal_gradient_residual, gradient_check,
    min_minor_scan, Condition,
};
use choimap::{CMatrix3, CVector3, CVector9, GeneralizedMap, Hermitian3, Hermitian9, MapParams, ToleranceConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn report(id: u32, ok: bool, detail: &str) {
    println!("{} acceptance-{id}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "acceptance-{id}: {detail}");
}

#[test]
fn criterion_01_circulant_equivalence() {
    let start = Instant::now();
    let n = 25;
    let grid = |i: usize| 0.5 + 2.5 * i as f64 / (n - 1) as f64;
    let mut disagreements = Vec::new();
    let mut banded = 0;
    for ia in 0..n {
        for ib in 0..n {
            for ic in 0..n {
                let (a, b, c) = (grid(ia), grid(ib), grid(ic));
                let map = GeneralizedMap::circulant(a, b, c).unwrap();
                let oracle = min_minor_scan(&map, 60).unwrap().min_value;
                if oracle.abs() <= 1e-7 {
                    banded += 1;
                    continue;
                }
                let positive = classify_positivity(&map, &tol()).unwrap().is_positive();
                if positive != (oracle > 0.0) {
                    disagreements.push((a, b, c, oracle));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        disagreements.is_empty() && secs < 300.0,
        &format!(
            "{} points, {banded} inside the 1e-7 band, {} disagreements {:?}, {secs:.1}s",
            n * n * n,
            disagreements.len(),
            disagreements.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_02_choi_map() {
    let map = GeneralizedMap::choi();
    let positive = classify_positivity(&map, &tol()).unwrap().is_positive();
    let sat = condition_report(&map, &tol()).saturated;
    let expected = vec![Condition::Edge1, Condition::Edge2, Condition::Edge3, Condition::Interior];
    let r = spanning_report(&map, &tol()).unwrap();
    let ratio = r.singular_values[8] / r.singular_values[0];
    let ok = positive && sat == expected && r.rank < 9 && ratio < 1e-12 && r.skipped_edges.len() == 3;
    report(
        2,
        ok,
        &format!("positive={positive}, saturated={sat:?}, rank={}, sigma9/sigma1={ratio:.3e}, skipped edges={}", r.rank, r.skipped_edges.len()),
    );
}

#[test]
fn criterion_03_reduction_map() {
    let r = spanning_report(&GeneralizedMap::reduction(), &tol()).unwrap();
    let ok = r.rank == 9 && r.case_label == CaseLabel::Ivv && r.max_zero_value < 1e-10;
    report(3, ok, &format!("rank={}, case={}, max zero value={:.3e}", r.rank, r.case_label.as_str(), r.max_zero_value));
}

#[test]
fn criterion_04_hyperbola_map() {
    let map = GeneralizedMap::circulant(1.0, 2.0, 0.5).unwrap();
    let rep = condition_report(&map, &tol());
    let r = spanning_report(&map, &tol()).unwrap();
    let ok = rep.saturated_edges() == vec![1, 2, 3] && r.skipped_edges.is_empty() && r.rank == 9;
    report(
        4,
        ok,
        &format!("saturated edges={:?}, skipped={}, rank={}, max zero value={:.3e}", rep.saturated_edges(), r.skipped_edges.len(), r.rank, r.max_zero_value),
    );
}

#[test]
fn criterion_05_same_shape_family() {
    let mut total = 0;
    let mut all_three = 0;
    let mut rank9 = 0;
    for a in [1.2, 1.4, 1.6] {
        let b = (3.0 - a) / 2.0;
        let r = 1.5f64.sqrt() * (a - 1.0);
        for i in 0..36 {
            let theta = TAU * i as f64 / 36.0;
            let p = PlanePoint::from_uv(r * theta.cos(), r * theta.sin());
            let map = GeneralizedMap::with_tolerance(p.with_base(a, b, b), &tol()).unwrap();
            let rep = condition_report(&map, &tol());
            let saturated = rep.edge_values.iter().all(|v| v.is_some_and(|v| v.abs() < 1e-10));
            total += 1;
            all_three += saturated as usize;
            rank9 += (spanning_report(&map, &tol()).unwrap().rank == 9) as usize;
        }
    }
    report(
        5,
        all_three == total && rank9 == total,
        &format!("{all_three}/{total} points saturate all three edges, {rank9}/{total} reach rank 9"),
    );
}

#[test]
fn criterion_06_sea_anchor_transitions() {
    let t = sea_anchor_transitions(360, 1e-10, &tol()).unwrap();
    let near = |(lo, hi): (f64, f64), x: f64| lo >= x - 1e-9 && hi <= x + 1e-9;
    let tangency = near(t.tangency, 5.0 / 3.0);
    let joining = near(t.joining, 2.0);
    let expected = [[-1.0, 0.5, 0.5], [0.5, -1.0, 0.5], [0.5, 0.5, -1.0]];
    let matches = expected
        .iter()
        .filter(|q| {
            t.joining_points
                .iter()
                .any(|p| p.coords().iter().zip(q.iter()).all(|(x, y)| (x - y).abs() < 1e-6))
        })
        .count();
    let found: Vec<[f64; 3]> = t.joining_points.iter().map(|p| p.coords()).collect();
    report(
        6,
        tangency && joining && matches == 3,
        &format!(
            "tangency in {:?} ({tangency}), joining in {:?} ({joining}), joining points {found:?} match {matches}/3 of permutations of (-1, 1/2, 1/2)",
            t.tangency, t.joining
        ),
    );
}

#[test]
fn criterion_07_fig7_transitions() {
    let samples = 2000;
    let touch = bisect_transition(0.2, 1.20, 1.35, Containment::Crossing, samples, &tol(), 1e-7).unwrap();
    let coincide = bisect_transition(0.2, 1.01, 1.20, Containment::BobInsideAlice, samples, &tol(), 1e-7).unwrap();
    let mid = |(lo, hi): (f64, f64)| 0.5 * (lo + hi);
    let ok = (mid(touch) - 38.0 / 30.0).abs() < 1e-3 && (mid(coincide) - 139.0 / 135.0).abs() < 1e-3;
    report(
        7,
        ok,
        &format!(
            "touching at b+c in {touch:?} (target {:.6}), coincidence in {coincide:?} (target {:.6})",
            38.0 / 30.0,
            139.0 / 135.0
        ),
    );
}

fn sample_region(rng: &mut ChaCha8Rng, want: &[BcRegionClass], n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    while out.len() < n {
        let (b, c) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        if want.contains(&bc_class(b, c, &tol())) {
            out.push((b, c));
        }
    }
    out
}

#[test]
fn criterion_08_optimal_point_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = tol();

    let mut blue = (0, 0, 0);
    for (b, c) in sample_region(&mut rng, &[BcRegionClass::Blue], 50) {
        for p in optimal_points_ivv(b, c, &t).unwrap().points {
            let v = validate_point(b, c, &p, &t).unwrap();
            blue.0 += 1;
            blue.1 += (v.positive && v.interior_saturated && v.bob_saturations.len() == 2) as usize;
            blue.2 += (v.rank == 9) as usize;
        }
    }

    let mut violet = (0, 0, 0);
    for (b, c) in sample_region(&mut rng, &[BcRegionClass::Violet], 50) {
        for p in optimal_points_iev(b, c, &t).unwrap().points {
            let v = validate_point(b, c, &p, &t).unwrap();
            violet.0 += 1;
            violet.1 += (v.positive
                && v.interior_saturated
                && v.bob_saturations.len() == 1
                && v.edge_saturations.len() == 1) as usize;
            violet.2 += (v.rank == 9) as usize;
        }
    }

    let mut red = (0, 0, 0, 0);
    let mut red_errors = 0;
    for (b, c) in sample_region(&mut rng, &[BcRegionClass::Red], 50) {
        match optimal_points_iee(b, c, &t) {
            Ok(set) => {
                for p in set.points {
                    let v = validate_point(b, c, &p, &t).unwrap();
                    red.0 += 1;
                    red.1 += (v.positive && v.interior_saturated && v.edge_saturations.len() >= 2) as usize;
                    red.2 += (v.rank == 9) as usize;
                    red.3 += (v.hessian_residual < 1e-8) as usize;
                }
            }
            Err(_) => red_errors += 1,
        }
    }

    let ok = blue.0 > 0
        && blue.0 == blue.1
        && blue.0 == blue.2
        && violet.0 > 0
        && violet.0 == violet.1
        && violet.0 == violet.2
        && red_errors == 0
        && red.0 == red.1
        && red.0 == red.2
        && red.0 == red.3;
    report(
        8,
        ok,
        &format!(
            "blue: {}/{} saturations, {}/{} rank 9; violet: {}/{} saturations, {}/{} rank 9; red: {} solver errors, {}/{} saturations, {}/{} rank 9, {}/{} hessian",
            blue.1, blue.0, blue.2, blue.0, violet.1, violet.0, violet.2, violet.0, red_errors, red.1, red.0, red.2, red.0, red.3, red.0
        ),
    );
}

/// Random map with edge `k` saturated: `a` found by bisection on `F_k = 1`.
fn saturated_edge_map(rng: &mut ChaCha8Rng, k: usize) -> Option<GeneralizedMap> {
    let b = rng.gen_range(0.3..1.5);
    let c = rng.gen_range(0.3..1.5);
    let d = rng.gen_range(-0.2..0.2);
    let e = rng.gen_range(-0.2..0.2);
    let f = -(d + e);
    let diag = |a: f64| [a + f - 1.0, a + e - 1.0, a + d - 1.0];
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (i, j) = pairs[k - 1];
    let fk = |a: f64| {
        let m = GeneralizedMap::with_tolerance(MapParams::new(a, b, c, d, e, f), &tol()).ok()?;
        let dm = diag(a);
        Some((dm[i] * dm[j]).max(0.0).sqrt() + (m.entry(i, j) * m.entry(j, i)).sqrt())
    };
    let mut lo = 1.0 - d.min(e).min(f) + 1e-3;
    let mut hi = lo + 5.0;
    if fk(lo)? >= 1.0 || fk(hi)? <= 1.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fk(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    GeneralizedMap::with_tolerance(MapParams::new(0.5 * (lo + hi), b, c, d, e, f), &tol()).ok()
}

#[test]
fn criterion_09_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 100 {
        let k = 1 + checked % 3;
        let Some(map) = saturated_edge_map(&mut rng, k) else { continue };
        let g = gradient_check(&map, 1e-6, &tol()).unwrap();
        if !g.saturated_edges.contains(&k) {
            continue;
        }
        worst = worst.max(g.max_relative_deviation);
        checked += 1;
    }

    let c = 0.6;
    let mut mismatches = 0;
    let mut sweep = 0;
    for ia in 0..=20 {
        for ib in 0..=18 {
            let a = 1.2 + 0.05 * ia as f64;
            let b = 0.3 + 0.05 * ib as f64;
            let map = GeneralizedMap::new(a, b, c, 0.05, -0.02, -0.03).unwrap();
            let equal = equal_gradient_residual(&map, &tol()).unwrap() <= 1e-9;
            let predicted = (b - c).abs() <= 1e-9 && (a + b + c - 3.0).abs() <= 1e-9;
            mismatches += (equal != predicted) as usize;
            sweep += 1;
        }
    }
    report(
        9,
        worst < 1e-5 && mismatches == 0,
        &format!("{checked} saturated edge points, worst relative deviation {worst:.3e}; equal-gradient sweep {mismatches}/{sweep} mismatches"),
    );
}

#[test]
fn criterion_10_phase_basis() {
    let tuples = random_phase_basis(3).unwrap();
    let vectors: Vec<ProductVector> = tuples
        .iter()
        .map(|t| {
            let psi = CVector3::from_iterator(t.iter().map(|th| Complex64::from_polar(1.0, *th)));
            ProductVector::new(psi, psi, Condition::Interior, t.clone())
        })
        .collect();
    let (_, rank) = span_rank(&vectors, tol().rank);
    report(10, tuples.len() == 7 && rank == 7, &format!("{} tuples, rank {rank}", tuples.len()));
}

fn random_state(rng: &mut ChaCha8Rng) -> Hermitian3 {
    let g = CMatrix3::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = g * g.adjoint();
    let m = (m + m.adjoint()) / Complex64::new(2.0 * m.trace().re, 0.0);
    Hermitian3::new(m, 1e-12).unwrap()
}

fn random_positive_map(rng: &mut ChaCha8Rng) -> GeneralizedMap {
    loop {
        let a = rng.gen_range(1.0..3.0);
        let b = rng.gen_range(0.0..2.0);
        let c = rng.gen_range(0.0..2.0);
        let d = rng.gen_range(-0.3..0.3);
        let e = rng.gen_range(-0.3..0.3);
        let Ok(map) = GeneralizedMap::new(a, b, c, d, e, -(d + e)) else { continue };
        if classify_positivity(&map, &tol()).unwrap().is_positive() {
            return map;
        }
    }
}

#[test]
fn criterion_11_witness() {
    let s = 1.0 / 3f64.sqrt();
    let mut omega = CVector9::zeros();
    for i in 0..3 {
        omega[4 * i] = Complex64::new(s, 0.0);
    }
    let rho = Hermitian9::pure_state(&omega).unwrap();
    let w = GeneralizedMap::reduction().witness_value(&rho, &tol()).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lowest = f64::INFINITY;
    for _ in 0..1000 {
        let map = random_positive_map(&mut rng);
        let state = Hermitian9::product(&random_state(&mut rng), &random_state(&mut rng));
        lowest = lowest.min(map.witness_value(&state, &tol()).unwrap());
    }
    report(
        11,
        (w + 2.0).abs() <= 1e-12 && lowest >= -1e-10,
        &format!("reduction on maximally entangled state {w:.15}, lowest value on product states {lowest:.3e}"),
    );
}

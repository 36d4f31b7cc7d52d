use approx::assert_abs_diff_eq;
use choimap::geometry::{
    bc_admissible, optimal_points_ivv, plane_membership, plane_verdict, PlanePoint, PlaneVerdict,
};
use choimap::positivity::{classify_positivity, condition_report, minor, SimplexPoint};
use choimap::{CMatrix3, CVector3, GeneralizedMap, Hermitian3, MapParams, ToleranceConfig};
use nalgebra::Complex;
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

prop_compose! {
    fn valid_map()(a in 0.0..3.0f64, b in 0.5..2.0f64, c in 0.5..2.0f64, d in -0.2..0.2f64, e in -0.2..0.2f64) -> GeneralizedMap {
        GeneralizedMap::new(a + 0.5, b, c, d, e, -(d + e)).unwrap()
    }
}

prop_compose! {
    fn cvec()(re in prop::array::uniform3(-1.0..1.0f64), im in prop::array::uniform3(-1.0..1.0f64)) -> CVector3 {
        CVector3::new(Complex::new(re[0], im[0]), Complex::new(re[1], im[1]), Complex::new(re[2], im[2]))
    }
}

fn cmat(v: &[f64; 18]) -> CMatrix3 {
    CMatrix3::from_fn(|i, j| Complex64::new(v[2 * (3 * i + j)], v[2 * (3 * i + j) + 1]))
}

proptest! {
    #[test]
    fn json_round_trip(map in valid_map()) {
        let s = serde_json::to_string(&map).unwrap();
        let back: GeneralizedMap = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, map);
    }

    #[test]
    fn linear(map in valid_map(), x in prop::array::uniform18(-1.0..1.0f64), y in prop::array::uniform18(-1.0..1.0f64), s in -2.0..2.0f64) {
        let (x, y) = (cmat(&x), cmat(&y));
        let s = Complex64::new(s, 0.0);
        let lhs = map.apply_matrix(&(x * s + y));
        let rhs = map.apply_matrix(&x) * s + map.apply_matrix(&y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn choi_blocks_are_images(map in valid_map(), i in 0usize..3, j in 0usize..3) {
        let mut unit = CMatrix3::zeros();
        unit[(i, j)] = Complex64::new(1.0, 0.0);
        let block = map.choi_matrix().matrix().fixed_view::<3, 3>(3 * i, 3 * j).into_owned();
        prop_assert!((block - map.apply_matrix(&unit)).norm() == 0.0);
    }

    #[test]
    fn full_minor_is_determinant(map in valid_map(), psi in cvec()) {
        prop_assume!(psi.norm() > 1e-3);
        let psi = psi / Complex64::new(psi.norm(), 0.0);
        let image = map.apply(&Hermitian3::rank_one(&psi));
        let x = psi.map(|z| z.norm_sqr());
        let s = x.sum();
        let point = SimplexPoint::new(x[0] / s, x[1] / s, x[2] / s).unwrap();
        let m = minor(&map, &[1, 2, 3], &point).unwrap();
        prop_assert!((image.matrix().determinant().re - m).abs() < 1e-10);
    }

    #[test]
    fn positive_maps_send_pure_states_to_psd(map in valid_map(), psi in cvec()) {
        prop_assume!(psi.norm() > 1e-3);
        prop_assume!(classify_positivity(&map, &tol()).unwrap().is_positive());
        let image = map.apply(&Hermitian3::rank_one(&psi));
        prop_assert!(image.eigenvalues()[0] >= -1e-10);
    }

    #[test]
    fn flags_match_condition_report(a in 1.0..2.5f64, b in 0.2..1.5f64, c in 0.2..1.5f64, d in -0.5..0.5f64, e in -0.5..0.5f64) {
        let p = PlanePoint::from_de(d, e);
        let mu = (a - 1.0).min(b).min(c);
        let flags = plane_membership(a, b, c, &p, &tol()).unwrap();
        prop_assert_eq!(flags.in_bob, p.coords().iter().all(|q| *q >= -mu - tol().saturation));
        if let Ok(map) = GeneralizedMap::with_tolerance(p.with_base(a, b, c), &tol()) {
            let r = condition_report(&map, &tol());
            let alice = r.edge_values.iter().all(|v| v.is_some_and(|v| v >= -tol().saturation));
            prop_assert_eq!(flags.in_alice, alice);
        }
    }

    #[test]
    fn membership_implies_positive(a in 1.0..2.5f64, b in 0.2..1.5f64, c in 0.2..1.5f64, d in -0.5..0.5f64, e in -0.5..0.5f64) {
        prop_assume!(a + b + c >= 3.0);
        let p = PlanePoint::from_de(d, e);
        let flags = plane_membership(a, b, c, &p, &tol()).unwrap();
        let verdict = plane_verdict(a, b, c, &p, &tol());
        if flags.in_alice && flags.in_bob && flags.in_hessian_circle {
            prop_assert_eq!(verdict, PlaneVerdict::Positive);
            let map = GeneralizedMap::with_tolerance(p.with_base(a, b, c), &tol()).unwrap();
            prop_assert!(classify_positivity(&map, &tol()).unwrap().is_positive());
        }
        if !flags.in_alice || !flags.in_bob {
            prop_assert_eq!(verdict, PlaneVerdict::NotPositive);
        }
    }

    #[test]
    fn admissibility_is_origin_in_alice(b in 0.0..1.0f64, c in 0.0..1.0f64) {
        let a = 3.0 - b - c;
        let flags = plane_membership(a, b, c, &PlanePoint::ORIGIN, &tol()).unwrap();
        let margin = b + c - 1.0 - (b * c).sqrt();
        prop_assume!(margin.abs() > 1e-6);
        prop_assert_eq!(bc_admissible(b, c, 0.0), flags.in_alice);
    }

    #[test]
    fn ivv_points_closed_under_permutation(b in 0.0..0.3f64, c in 0.6..1.0f64) {
        if let Ok(set) = optimal_points_ivv(b, c, &tol()) {
            for p in &set.points {
                for pos in [[1, 2, 0], [2, 0, 1]] {
                    let q = p.permuted(pos);
                    prop_assert!(set.points.iter().any(|r| r.coords() == q.coords()));
                }
            }
        }
    }
}

#[test]
fn same_shape_arcs() {
    for a in [1.2, 1.4, 1.6] {
        let big = a - 1.0;
        let b = (3.0 - a) / 2.0;
        let r = 1.5f64.sqrt() * big;
        for i in 0..100 {
            let theta = std::f64::consts::TAU * i as f64 / 100.0;
            let p = PlanePoint::from_uv(r * theta.cos(), r * theta.sin());
            let map = GeneralizedMap::with_tolerance(p.with_base(a, b, b), &tol()).unwrap();
            let r = condition_report(&map, &tol());
            for k in 0..3 {
                let f = r.edge_values[k].unwrap();
                assert!(f >= -1e-10);
                if p.coords()[k] <= big / 2.0 - 1e-9 {
                    assert_abs_diff_eq!(f, 0.0, epsilon = 1e-10);
                } else if p.coords()[k] > big / 2.0 + 1e-9 {
                    assert!(f > 0.0);
                }
            }
        }
    }
}

#[test]
fn params_survive_gauge_round_trip() {
    let p = MapParams::new(1.7, 0.9, 0.5, 0.1, 0.2, -0.3);
    let m = GeneralizedMap::try_from(p).unwrap();
    assert_eq!(MapParams::from(m), p);
}

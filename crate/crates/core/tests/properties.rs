use num_complex::Complex64;
use proptest::prelude::*;

use opineq::linalg::{
    abs, abs_adjoint, frac_power, geometric_mean, matrix_from_json, matrix_to_json, numerical_radius, polar,
    spectral_norm, CMatrix,
};
use opineq::operator::refined_radius_bound;
use opineq::scalar::{check_triangle_refinement, segment_mean_abs};

const GRID: usize = 2_000;
const REFINE: f64 = 1e-12;

fn scalar() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n)
        .prop_map(move |v| CMatrix::new(n, n, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
}

fn any_matrix() -> impl Strategy<Value = CMatrix> {
    (2usize..=4).prop_flat_map(matrix)
}

fn positive_definite(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n).prop_map(move |g| &(&g * &g.adjoint()) + &CMatrix::identity(n).scale_real(0.5))
}

fn diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).frobenius_norm()
}

/// Unitary factor of a random matrix, used for unitary similarity.
fn unitary_of(m: &CMatrix) -> CMatrix {
    polar(&(m + &CMatrix::identity(m.rows()).scale_real(5.0))).unwrap().unitary
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn segment_mean_is_symmetric(c in scalar(), d in scalar()) {
        let a = segment_mean_abs(c, d);
        let b = segment_mean_abs(d, c);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn segment_mean_scales_with_complex_factor(c in scalar(), d in scalar(), k in scalar()) {
        let lhs = segment_mean_abs(k * c, k * d);
        let rhs = k.norm() * segment_mean_abs(c, d);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn triangle_chain_holds(c in scalar(), d in scalar()) {
        let r = check_triangle_refinement(c, d);
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn matrix_json_round_trip_is_exact(m in any_matrix()) {
        let back = matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap();
        prop_assert_eq!(back.as_slice(), m.as_slice());
    }

    #[test]
    fn polar_identities(m in any_matrix()) {
        let p = polar(&m).unwrap();
        let scale = 1.0 + m.frobenius_norm();
        prop_assert!(p.unitary.is_unitary(1e-9));
        prop_assert!(diff(&(&p.unitary * &p.positive), &m) <= 1e-10 * scale);
        prop_assert!(diff(&(&p.positive * &p.positive), &(&m.adjoint() * &m)) <= 1e-10 * scale * scale);
        let up = &(&p.unitary * &p.positive) * &p.unitary.adjoint();
        prop_assert!(diff(&up, &abs_adjoint(&m).unwrap()) <= 1e-9 * scale);
        prop_assert!(diff(&p.adjoint_positive(), &abs_adjoint(&m).unwrap()) <= 1e-9 * scale);
    }

    #[test]
    fn fractional_powers_compose(m in any_matrix()) {
        let a = abs(&m).unwrap();
        let scale = 1.0 + a.frobenius_norm();
        for p in [0.2, 0.5, 1.0, 1.7] {
            let ap = frac_power(&a, p).unwrap();
            let doubled = frac_power(&a, 2.0 * p).unwrap();
            prop_assert!(diff(&(&ap * &ap), &doubled) <= 1e-8 * scale.powf(2.0 * p.max(1.0)), "p = {}", p);
        }
        prop_assert!(diff(&frac_power(&a, 1.0).unwrap(), &a) <= 1e-10 * scale);
    }

    #[test]
    fn numerical_radius_sandwich(m in any_matrix()) {
        let w = numerical_radius(&m, GRID, REFINE).unwrap();
        let norm = spectral_norm(&m);
        prop_assert!(0.5 * norm <= w + 1e-9 * norm);
        prop_assert!(w <= norm * (1.0 + 1e-12));
    }

    #[test]
    fn numerical_radius_unitary_invariance(m in matrix(3), g in matrix(3)) {
        let u = unitary_of(&g);
        let conj = &(&u.adjoint() * &m) * &u;
        let a = numerical_radius(&m, GRID, REFINE).unwrap();
        let b = numerical_radius(&conj, GRID, REFINE).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a));
    }

    #[test]
    fn numerical_radius_scales(m in any_matrix(), k in scalar()) {
        let a = numerical_radius(&m.scale(k), GRID, REFINE).unwrap();
        let b = k.norm() * numerical_radius(&m, GRID, REFINE).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + b));
    }

    #[test]
    fn geometric_mean_is_symmetric(a in positive_definite(3), b in positive_definite(3)) {
        let ab = geometric_mean(&a, &b, 0.5).unwrap();
        let ba = geometric_mean(&b, &a, 0.5).unwrap();
        prop_assert!(diff(&ab, &ba) <= 1e-9 * (1.0 + ab.frobenius_norm()));
    }

    #[test]
    fn refined_bound_does_not_grow_with_angle(m in any_matrix(), t1 in 0.0..std::f64::consts::FRAC_PI_2, t2 in 0.0..std::f64::consts::FRAC_PI_2) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let b_lo = refined_radius_bound(&m, 0.5, lo).unwrap();
        let b_hi = refined_radius_bound(&m, 0.5, hi).unwrap();
        prop_assert!(b_hi <= b_lo * (1.0 + 1e-12) + 1e-15);
    }
}

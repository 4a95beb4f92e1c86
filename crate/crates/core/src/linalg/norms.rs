//! Operator norm, numerical radius and vector angles.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::eigen::{hermitian_eig, max_eigenvalue_unchecked};
use super::matrix::{inner, vec_norm, CMatrix, CVector};
use super::svd::singular_values;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_RADIUS_GRID: usize = 720;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
const REFINED_PEAKS: usize = 3;

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m)[0]
}

/// `λ_max((e^{iφ} A + e^{-iφ} A*) / 2)`.
fn support_value(a: &CMatrix, adj: &CMatrix, phi: f64) -> f64 {
    let e = Complex64::from_polar(1.0, phi);
    let n = a.rows();
    let h = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] * e + adj[(i, j)] * e.conj()) * 0.5);
    max_eigenvalue_unchecked(&h)
}

/// `(argmax, max)` of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f2 > f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// `w(A) = max_φ λ_max(Re(e^{iφ} A))`: a coarse grid over `[0, 2π)` followed
/// by golden-section refinement around the best few grid peaks.
pub fn numerical_radius(a: &CMatrix, grid: usize, refine_tol: f64) -> Result<f64> {
    let (_, w) = maximize_support(a, grid, refine_tol)?;
    // w(A) >= 0; only the zero matrix reaches it
    Ok(w.max(0.0))
}

/// `w(A)` together with a unit vector `x` at which `|⟨Ax, x⟩|` attains it
/// (up to the refinement accuracy).
pub fn numerical_radius_witness(a: &CMatrix, grid: usize, refine_tol: f64) -> Result<(f64, CVector)> {
    let (phi, w) = maximize_support(a, grid, refine_tol)?;
    let e = Complex64::from_polar(1.0, phi);
    let n = a.rows();
    let adj = a.adjoint();
    let h = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] * e + adj[(i, j)] * e.conj()) * 0.5);
    let eig = hermitian_eig(&h, 1e-8)?;
    Ok((w.max(0.0), eig.vectors.column(n - 1)))
}

fn maximize_support(a: &CMatrix, grid: usize, refine_tol: f64) -> Result<(f64, f64)> {
    a.require_square("numerical_radius")?;
    if grid < 8 {
        return invalid(format!("numerical radius grid needs at least 8 points, got {grid}"));
    }
    if !(refine_tol > 0.0) {
        return invalid(format!("refinement tolerance must be positive, got {refine_tol}"));
    }
    let adj = a.adjoint();
    let step = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|k| support_value(a, &adj, k as f64 * step)).collect();

    let mut peaks: Vec<usize> = (0..grid)
        .filter(|&k| {
            let prev = values[(k + grid - 1) % grid];
            let next = values[(k + 1) % grid];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    peaks.truncate(REFINED_PEAKS);

    let mut best = (0.0, f64::NEG_INFINITY);
    for (k, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (k as f64 * step, v);
        }
    }
    for k in peaks {
        let center = k as f64 * step;
        let refined = golden_max(|phi| support_value(a, &adj, phi), center - step, center + step, refine_tol);
        if refined.1 > best.1 {
            best = refined;
        }
    }
    Ok(best)
}

/// `∠(x, y) = arccos(|⟨x, y⟩| / (‖x‖ ‖y‖))`, in `[0, π/2]`.
pub fn angle(x: &[Complex64], y: &[Complex64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("angle between vectors of length {} and {}", x.len(), y.len())));
    }
    let nx = vec_norm(x);
    let ny = vec_norm(y);
    if !(nx > 0.0 && ny > 0.0) || !nx.is_finite() || !ny.is_finite() {
        return Err(Error::AngleUndefined(format!("vector norms {nx:.3e} and {ny:.3e}")));
    }
    let ratio = (inner(x, y).norm() / (nx * ny)).clamp(0.0, 1.0);
    Ok(ratio.acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::basis;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&CMatrix::identity(5)) - 1.0).abs() < 1e-15);
        let nil = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(spectral_norm(&nil), 1.0);
    }

    #[test]
    fn radius_examples() {
        let nil = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let w = numerical_radius(&nil, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL).unwrap();
        assert!((w - 0.5).abs() < 1e-8);
        let h = CMatrix::from_diag(&[1.0, -3.0]);
        let w = numerical_radius(&h, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL).unwrap();
        assert!((w - 3.0).abs() < 1e-8);
        let w = numerical_radius(&CMatrix::identity(3), DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        assert_eq!(numerical_radius(&CMatrix::zeros(2, 2), 16, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn radius_rejects_bad_arguments() {
        assert!(numerical_radius(&CMatrix::zeros(2, 3), 720, 1e-10).is_err());
        assert!(numerical_radius(&CMatrix::identity(2), 4, 1e-10).is_err());
        assert!(numerical_radius(&CMatrix::identity(2), 720, 0.0).is_err());
    }

    #[test]
    fn rotated_normal_matrix() {
        // normal matrix: w = spectral radius
        let d = CMatrix::from_complex_diag(&[Complex64::from_polar(2.0, 0.4), Complex64::from_polar(1.5, 2.0)]);
        let w = numerical_radius(&d, 64, 1e-12).unwrap();
        assert!((w - 2.0).abs() < 1e-12);
    }

    #[test]
    fn witness_attains_radius() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, -0.5, 3.0], &[1.0, 0.0, 0.25]]).unwrap();
        let (w, x) = numerical_radius_witness(&a, 720, 1e-12).unwrap();
        assert!((vec_norm(&x) - 1.0).abs() < 1e-13);
        let attained = inner(&a.mul_vec(&x).unwrap(), &x).norm();
        assert!((attained - w).abs() < 1e-9, "{attained} vs {w}");
    }

    #[test]
    fn angle_examples() {
        let e1 = basis(2, 0);
        let e2 = basis(2, 1);
        assert_eq!(angle(&e1, &e1).unwrap(), 0.0);
        assert!((angle(&e1, &e2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
        assert!((angle(&e1, &diag).unwrap() - FRAC_PI_4).abs() < 1e-15);
        // the modulus folds obtuse pairs back into [0, π/2]
        let neg: Vec<_> = e1.iter().map(|z| -z).collect();
        assert_eq!(angle(&e1, &neg).unwrap(), 0.0);
        assert!(matches!(angle(&e1, &[Complex64::new(0.0, 0.0); 2]), Err(Error::AngleUndefined(_))));
    }
}

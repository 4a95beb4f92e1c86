//! Spectral functions of positive matrices.

use super::eigen::{hermitian_eig, EigSystem};
use super::matrix::CMatrix;
use crate::error::{invalid, Error, Result};

/// Relative Hermiticity tolerance accepted for inputs of the spectral functions.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues within `PSD_CLAMP_REL · max(1, ‖P‖)` of zero are treated as zero.
pub const PSD_CLAMP_REL: f64 = 1e-10;

/// Default relative floor on the smallest eigenvalue for the geometric mean.
pub const PD_FLOOR_REL: f64 = 1e-10;

fn spectral_radius(e: &EigSystem) -> f64 {
    e.min().abs().max(e.max().abs())
}

fn psd_eig(p: &CMatrix) -> Result<(EigSystem, f64)> {
    p.require_square("frac_power")?;
    let e = hermitian_eig(p, HERMITIAN_TOL)?;
    let clamp = PSD_CLAMP_REL * spectral_radius(&e).max(1.0);
    if e.min() < -clamp {
        return Err(Error::NotPsd { min_eig: e.min() });
    }
    Ok((e, clamp))
}

/// `P^p` through the spectral decomposition.
///
/// `p = 0` gives the identity, kernel included; for `p > 0`, `0^p = 0`.
pub fn frac_power(p_mat: &CMatrix, p: f64) -> Result<CMatrix> {
    if !(p >= 0.0) || !p.is_finite() {
        return invalid(format!("fractional power needs a finite p >= 0, got {p}"));
    }
    let (e, clamp) = psd_eig(p_mat)?;
    if p == 0.0 {
        return Ok(CMatrix::identity(p_mat.rows()));
    }
    Ok(e.map_values(|l| if l <= clamp { 0.0 } else { l.powf(p) }))
}

fn pd_eig(m: &CMatrix, floor_rel: f64) -> Result<EigSystem> {
    m.require_square("geometric_mean")?;
    let e = hermitian_eig(m, HERMITIAN_TOL)?;
    let floor = floor_rel * spectral_radius(&e);
    if !(e.min() > 0.0 && e.min() >= floor) {
        return Err(Error::NotPositiveDefinite { min_eig: e.min(), floor });
    }
    Ok(e)
}

/// Weighted geometric mean `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`.
pub fn geometric_mean(a: &CMatrix, b: &CMatrix, t: f64) -> Result<CMatrix> {
    geometric_mean_with_floor(a, b, t, PD_FLOOR_REL)
}

pub fn geometric_mean_with_floor(a: &CMatrix, b: &CMatrix, t: f64, floor_rel: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("geometric mean weight must lie in [0, 1], got {t}"));
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape(format!(
            "geometric mean of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let ea = pd_eig(a, floor_rel)?;
    pd_eig(b, floor_rel)?;
    let sqrt_a = ea.map_values(f64::sqrt);
    let inv_sqrt_a = ea.map_values(|l| 1.0 / l.sqrt());
    let inner = (&(&inv_sqrt_a * b) * &inv_sqrt_a).hermitian_part();
    let inner_t = inner_power(&inner, t)?;
    Ok((&(&sqrt_a * &inner_t) * &sqrt_a).hermitian_part())
}

fn inner_power(c: &CMatrix, t: f64) -> Result<CMatrix> {
    if t == 0.0 {
        return Ok(CMatrix::identity(c.rows()));
    }
    let e = hermitian_eig(c, HERMITIAN_TOL)?;
    Ok(e.map_values(|l| l.max(0.0).powf(t)))
}

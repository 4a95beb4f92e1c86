//! Scalar refinements of the triangle inequality.
//!
//! Everything here is a pure function of its arguments. The central quantity
//! is the segment average `I(c, d) = ∫₀¹ |s c + (1 - s) d| ds`, which sits
//! between `|c + d| / 2` and `(|c| + |d|) / 2`. On the unit circle pair
//! `(e^{iθ}, e^{-iθ})` it reduces to the refinement factor [`mu`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quadrature::GaussLegendre;

pub type ComplexScalar = Complex64;

/// Switchover distance (radians) to the removable singularities of `mu`.
pub const MU_SINGULAR_TOL: f64 = 1e-8;

/// Minimum distance of `|sin θ|` from 1 accepted by [`nu`].
pub const NU_SINGULAR_TOL: f64 = 1e-12;

/// Tolerance for the two sides of the logarithmic bound.
pub const LOG_BOUND_TOL: f64 = 1e-12;

/// Relative threshold on the discriminant `4αγ - β²` below which the segment
/// is treated as collinear with the origin.
pub const COLLINEAR_REL_TOL: f64 = 1e-14;

pub const DEFAULT_QUADRATURE_NODES: usize = 64;

/// Slack tolerance for the scalar chains: `max(abs, rel * max(|c|, |d|, 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for ScalarTolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-12 }
    }
}

impl ScalarTolerance {
    pub fn for_pair(&self, c: ComplexScalar, d: ComplexScalar) -> f64 {
        let scale = c.norm().max(d.norm()).max(1.0);
        self.abs.max(self.rel * scale)
    }
}

/// One evaluated scalar inequality chain `lhs ≤ mid ≤ rhs`.
///
/// Two-term chains (the reverse triangle inequality) leave `mid` empty; there
/// `slack_low` is `rhs - lhs` and `slack_high` is the slack of the
/// division-free equivalent form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarChainReport {
    pub lhs: f64,
    pub mid: Option<f64>,
    pub rhs: f64,
    pub slack_low: f64,
    pub slack_high: f64,
    pub tol: f64,
    pub holds: bool,
}

impl ScalarChainReport {
    fn new(lhs: f64, mid: Option<f64>, rhs: f64, slack_low: f64, slack_high: f64, tol: f64) -> Self {
        let holds = slack_low >= -tol && slack_high >= -tol;
        Self { lhs, mid, rhs, slack_low, slack_high, tol, holds }
    }

    pub fn worst_slack(&self) -> f64 {
        self.slack_low.min(self.slack_high)
    }
}

/// A sampled value of one of the bound functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundFunctionSample {
    pub theta: f64,
    pub value: f64,
}

impl BoundFunctionSample {
    pub fn mu(theta: f64) -> Result<Self> {
        Ok(Self { theta, value: mu(theta)? })
    }

    pub fn gamma(t: f64, theta: f64) -> Result<Self> {
        Ok(Self { theta, value: gamma(t, theta)? })
    }
}

/// `r_t = min(t, 1 - t)`.
pub fn refinement_weight(t: f64) -> f64 {
    t.min(1.0 - t)
}

/// Closed-form `∫₀¹ |s c + (1 - s) d| ds`.
///
/// The integrand is `|d + s w|` with `w = c - d`. Writing `τ = L (s - s₀)` for
/// the signed distance from the foot of the perpendicular (`L = |w|`, `h` the
/// distance of the line from the origin) gives `(1/L) ∫ √(τ² + h²) dτ`.
/// When both endpoints lie on the same side of the foot the difference of
/// antiderivatives is rewritten so no large terms cancel.
pub fn segment_mean_abs(c: ComplexScalar, d: ComplexScalar) -> f64 {
    let w = c - d;
    let len_sq = w.norm_sqr();
    if len_sq == 0.0 {
        return d.norm();
    }
    let proj = d.conj() * w;
    let (dot, cross) = (proj.re, proj.im);
    let alpha = len_sq;
    let beta = 2.0 * dot;
    let gamma = d.norm_sqr();
    let len = len_sq.sqrt();
    let s0 = -dot / len_sq;

    if 4.0 * cross * cross <= COLLINEAR_REL_TOL * (alpha * gamma + beta * beta) {
        // |d + s w| = L |s - s0| on a line through the origin.
        let unit = if s0 <= 0.0 {
            0.5 - s0
        } else if s0 >= 1.0 {
            s0 - 0.5
        } else {
            0.5 * (s0 * s0 + (1.0 - s0) * (1.0 - s0))
        };
        return len * unit;
    }

    let h = cross.abs() / len;
    let h_sq = h * h;
    let tau0 = -len * s0;
    let tau1 = len * (1.0 - s0);

    if tau0 >= 0.0 || tau1 <= 0.0 {
        let (a, b) = if tau0 >= 0.0 { (tau0, tau1) } else { (-tau1, -tau0) };
        let ra = a.hypot(h);
        let rb = b.hypot(h);
        let radial = (a + b) * (a * a + b * b + h_sq) / (b * rb + a * ra);
        let log_part = h_sq * (len * (a + b) / (b * ra + a * rb)).asinh() / len;
        0.5 * (radial + log_part)
    } else {
        let r0 = tau0.hypot(h);
        let r1 = tau1.hypot(h);
        let radial = tau1 * r1 - tau0 * r0;
        let log_part = h_sq * ((tau1 / h).asinh() - (tau0 / h).asinh());
        0.5 * (radial + log_part) / len
    }
}

/// Gauss-Legendre approximation of the segment average with `nodes` points.
pub fn segment_mean_abs_quadrature(c: ComplexScalar, d: ComplexScalar, nodes: usize) -> Result<f64> {
    let rule = GaussLegendre::new(nodes)?;
    Ok(segment_mean_abs_with_rule(&rule, c, d))
}

/// Same as [`segment_mean_abs_quadrature`] with a prebuilt rule.
pub fn segment_mean_abs_with_rule(rule: &GaussLegendre, c: ComplexScalar, d: ComplexScalar) -> f64 {
    rule.integrate(0.0, 1.0, |s| (c * s + d * (1.0 - s)).norm())
}

/// Composite Gauss-Legendre value of the segment average: the interval is
/// split at the point closest to the origin and panels shrink geometrically
/// toward it, so the near-kink of the integrand is resolved.
///
/// A single fixed-order panel converges slowly once the segment passes within
/// a small fraction of its length of the origin; this is the oracle used to
/// cross-check [`segment_mean_abs`] there.
pub fn segment_mean_abs_panelled(rule: &GaussLegendre, c: ComplexScalar, d: ComplexScalar) -> f64 {
    let w = c - d;
    let len_sq = w.norm_sqr();
    let f = |s: f64| (c * s + d * (1.0 - s)).norm();
    if len_sq == 0.0 {
        return d.norm();
    }
    let s0 = (-(d.conj() * w).re / len_sq).clamp(0.0, 1.0);
    // width of the smoothed kink, in units of s
    let kink = f(s0) / len_sq.sqrt();
    let graded = |from: f64, to: f64| -> f64 {
        let span = (to - from).abs();
        if span == 0.0 {
            return 0.0;
        }
        let floor = kink.max(span * 1e-16);
        let mut total = 0.0;
        let mut outer = span;
        while outer > floor {
            let inner = outer * PANEL_RATIO;
            total += rule.integrate(inner, outer, |u| f(from + (to - from).signum() * u));
            outer = inner;
        }
        total + rule.integrate(0.0, outer, |u| f(from + (to - from).signum() * u))
    };
    graded(s0, 1.0) + graded(s0, 0.0)
}

/// Ratio of consecutive panel lengths in [`segment_mean_abs_panelled`].
const PANEL_RATIO: f64 = 0.1;

/// `|c + d|/2 ≤ I(c, d) ≤ (|c| + |d|)/2` with the default tolerance.
pub fn check_triangle_refinement(c: ComplexScalar, d: ComplexScalar) -> ScalarChainReport {
    check_triangle_refinement_with(c, d, &ScalarTolerance::default())
}

pub fn check_triangle_refinement_with(
    c: ComplexScalar,
    d: ComplexScalar,
    tol: &ScalarTolerance,
) -> ScalarChainReport {
    let lhs = 0.5 * (c + d).norm();
    let mid = segment_mean_abs(c, d);
    let rhs = 0.5 * (c.norm() + d.norm());
    ScalarChainReport::new(lhs, Some(mid), rhs, mid - lhs, rhs - mid, tol.for_pair(c, d))
}

fn reduce_mod_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly PI for tiny negative inputs.
    if r >= PI {
        0.0
    } else {
        r
    }
}

fn require_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} must be finite, got {x}"))
    }
}

/// `atanh(s)` for `s = sin θ`, `c = cos θ`, accurate as `|s| → 1`.
fn atanh_of_sin(s: f64, c: f64) -> f64 {
    let a = s.abs();
    let v = if a < 0.5 { a.atanh() } else { ((1.0 + a) / c.abs()).ln() };
    v.copysign(s)
}

/// The refinement factor `μ(θ) = ¼ (2 + cos θ cot θ log((1 + sin θ)/(1 - sin θ)))`.
///
/// π-periodic, with value 1 at multiples of π and 1/2 at odd multiples of π/2.
pub fn mu(theta: f64) -> Result<f64> {
    require_finite("theta", theta)?;
    let r = reduce_mod_pi(theta);
    if r < MU_SINGULAR_TOL || PI - r < MU_SINGULAR_TOL {
        return Ok(1.0);
    }
    if (r - FRAC_PI_2).abs() < MU_SINGULAR_TOL {
        return Ok(0.5);
    }
    let (s, c) = r.sin_cos();
    // cos θ cot θ · log(...) = 2 cos²θ atanh(sin θ) / sin θ
    Ok(0.5 + 0.5 * c * c * atanh_of_sin(s, c) / s)
}

fn nu_unchecked(s: f64, c: f64) -> f64 {
    4.0 * s - 4.0 * (s * s + 1.0) * atanh_of_sin(s, c)
}

/// `ν(θ) = 4 sin θ - 2 (sin²θ + 1) log((1 + sin θ)/(1 - sin θ))`.
pub fn nu(theta: f64) -> Result<f64> {
    require_finite("theta", theta)?;
    let (s, c) = theta.sin_cos();
    if 1.0 - s.abs() < NU_SINGULAR_TOL {
        return invalid(format!("nu has a log singularity at theta = {theta} (|sin theta| = 1)"));
    }
    Ok(nu_unchecked(s, c))
}

/// `μ'(θ) = cos θ / (8 sin²θ) · ν(θ)`, with the limit 0 at π/2.
pub fn mu_derivative(theta: f64) -> Result<f64> {
    require_finite("theta", theta)?;
    let r = reduce_mod_pi(theta);
    if r < MU_SINGULAR_TOL || PI - r < MU_SINGULAR_TOL {
        return invalid(format!("mu_derivative is undefined within {MU_SINGULAR_TOL} of a multiple of pi (theta = {theta})"));
    }
    if (r - FRAC_PI_2).abs() < MU_SINGULAR_TOL {
        return Ok(0.0);
    }
    let (s, c) = r.sin_cos();
    Ok(c / (8.0 * s * s) * nu_unchecked(s, c))
}

/// The reverse factor `γ_t(θ) = 1 - (1 - √(cos²θ + (2t-1)² sin²θ)) / (2 r_t)`.
///
/// With `a = |2t - 1| = 1 - 2 r_t` and `ρ = √(c² + a² s²)` this equals
/// `(c² + (ρ - a|s|) + a|s|(1 - |s|)) / (1 + ρ)`, where
/// `ρ - a|s| = c² / (ρ + a|s|)`; every term is non-negative, so rounding
/// cannot push the value below zero.
pub fn gamma(t: f64, theta: f64) -> Result<f64> {
    require_finite("theta", theta)?;
    if !(t > 0.0 && t < 1.0) {
        return invalid(format!("gamma needs 0 < t < 1, got t = {t}"));
    }
    let a = 1.0 - 2.0 * refinement_weight(t);
    let (s, c) = reduce_mod_pi(theta).sin_cos();
    let s = s.abs();
    let root = c.hypot(a * s);
    if root == 0.0 {
        return Ok(0.0);
    }
    let c2 = c * c;
    Ok((c2 + c2 / (root + a * s) + a * s * (1.0 - s)) / (1.0 + root))
}

/// Reverse triangle inequality
/// `(|c|+|d|)/2 - ((1-t)|c| + t|d| - |(1-t)c + td|) / (2 r_t) ≤ |c + d| / 2`.
pub fn check_reverse_triangle(c: ComplexScalar, d: ComplexScalar, t: f64) -> Result<ScalarChainReport> {
    check_reverse_triangle_with(c, d, t, &ScalarTolerance::default())
}

pub fn check_reverse_triangle_with(
    c: ComplexScalar,
    d: ComplexScalar,
    t: f64,
    tol: &ScalarTolerance,
) -> Result<ScalarChainReport> {
    if !(t > 0.0 && t < 1.0) {
        return invalid(format!("reverse triangle needs 0 < t < 1, got t = {t}"));
    }
    let r_t = refinement_weight(t);
    let (abs_c, abs_d) = (c.norm(), d.norm());
    let half_sum = 0.5 * (abs_c + abs_d);
    let half_res = 0.5 * (c + d).norm();

    let lhs = half_sum - 0.5 * convexity_gap_over_weight(c, d, t);
    let rhs = half_res;

    let combo = (c * (1.0 - t) + d * t).norm();
    let bound = (1.0 - t) * abs_c + t * abs_d - 2.0 * r_t * (half_sum - half_res);
    Ok(ScalarChainReport::new(lhs, None, rhs, rhs - lhs, bound - combo, tol.for_pair(c, d)))
}

/// `((1-t)|c| + t|d| - |(1-t)c + td|) / r_t`, without dividing a rounded
/// difference by a small weight.
fn convexity_gap_over_weight(c: ComplexScalar, d: ComplexScalar, t: f64) -> f64 {
    // (1-t)c + td = base + tau (other - base) with tau = r_t.
    let (base, other, tau) = if t <= 0.5 { (c, d, t) } else { (d, c, 1.0 - t) };
    let w = other - base;
    let moved = base + w * tau;
    let den = moved.norm() + base.norm();
    let growth = if den == 0.0 {
        0.0
    } else {
        (2.0 * (base.conj() * w).re + tau * w.norm_sqr()) / den
    };
    other.norm() - base.norm() - growth
}

/// Signed slack of `2x/(x²+1) ≤ log((1+x)/(1-x))` for `x ≥ 0`, reversed for `x < 0`.
pub fn log_bound_slack(x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return invalid(format!("log bound needs |x| < 1, got x = {x}"));
    }
    let rational = 2.0 * x / (x * x + 1.0);
    let log = 2.0 * x.atanh();
    Ok(if x >= 0.0 { log - rational } else { rational - log })
}

pub fn check_log_bound(x: f64) -> Result<bool> {
    Ok(log_bound_slack(x)? >= -LOG_BOUND_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn cx(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn unit(theta: f64) -> ComplexScalar {
        ComplexScalar::from_polar(1.0, theta)
    }

    #[test]
    fn segment_constant_integrand() {
        let c = cx(3.0, -4.0);
        assert_eq!(segment_mean_abs(c, c), 5.0);
    }

    #[test]
    fn segment_through_origin() {
        assert!((segment_mean_abs(cx(1.0, 0.0), cx(-1.0, 0.0)) - 0.5).abs() < 1e-15);
        // s0 outside [0, 1]: |2 + s| on [0, 1] averages 2.5
        assert!((segment_mean_abs(cx(3.0, 0.0), cx(2.0, 0.0)) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn segment_on_unit_circle_pair_is_mu() {
        let theta = 1.0;
        let got = segment_mean_abs(unit(theta), unit(-theta));
        assert!((got - mu(theta).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn segment_matches_quadrature() {
        let (c, d) = (cx(3.0, 4.0), cx(1.0, -2.0));
        let closed = segment_mean_abs(c, d);
        let quad = segment_mean_abs_quadrature(c, d, 64).unwrap();
        assert!((closed - quad).abs() <= 1e-12 * closed);

        let (c, d) = (cx(2.0, 1.0), cx(-1.0, 3.0));
        let closed = segment_mean_abs(c, d);
        let quad = segment_mean_abs_quadrature(c, d, 64).unwrap();
        assert!((closed - quad).abs() <= 1e-10 * closed);
    }

    #[test]
    fn panelled_quadrature_resolves_near_kink() {
        let rule = GaussLegendre::new(64).unwrap();
        for (c, d) in [
            (cx(2.531_814, 5.435_262), cx(-3.697_761, -8.244_310)),
            (cx(1.0, 1e-3), cx(-1.0, 1e-3)),
            (cx(1.0, 1e-7), cx(-3.0, 1e-7)),
            (cx(3.0, 4.0), cx(1.0, -2.0)),
        ] {
            let closed = segment_mean_abs(c, d);
            let quad = segment_mean_abs_panelled(&rule, c, d);
            assert!((closed - quad).abs() <= 1e-12 * closed, "{c} {d}: {closed} vs {quad}");
        }
        let kink = segment_mean_abs_panelled(&rule, cx(1.0, 0.0), cx(-1.0, 0.0));
        assert!((kink - 0.5).abs() < 1e-15);
        assert_eq!(segment_mean_abs_panelled(&rule, cx(2.0, 0.0), cx(2.0, 0.0)), 2.0);
    }

    #[test]
    fn quadrature_examples() {
        let c = cx(0.3, 0.7);
        let q = segment_mean_abs_quadrature(c, c, 16).unwrap();
        assert!((q - c.norm()).abs() < 1e-14);
        let kink = segment_mean_abs_quadrature(cx(1.0, 0.0), cx(-1.0, 0.0), 64).unwrap();
        assert!((kink - 0.5).abs() < 1e-3);
        assert!(segment_mean_abs_quadrature(c, c, 1).is_err());
    }

    #[test]
    fn short_segment_far_from_origin() {
        let d = cx(5.0, 2.0);
        let c = d + cx(1e-7, -3e-7);
        let closed = segment_mean_abs(c, d);
        let quad = segment_mean_abs_quadrature(c, d, 16).unwrap();
        assert!((closed - quad).abs() <= 1e-14 * closed, "{closed} vs {quad}");
    }

    #[test]
    fn triangle_chain_examples() {
        let r = check_triangle_refinement(cx(1.0, 0.0), cx(1.0, 0.0));
        assert_eq!((r.lhs, r.mid, r.rhs), (1.0, Some(1.0), 1.0));
        assert!(r.holds);

        let r = check_triangle_refinement(cx(1.0, 0.0), cx(-1.0, 0.0));
        assert_eq!(r.lhs, 0.0);
        assert!((r.mid.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(r.rhs, 1.0);
        assert!(r.holds);
    }

    #[test]
    fn mu_pinned_values() {
        assert_eq!(mu(FRAC_PI_2).unwrap(), 0.5);
        assert_eq!(mu(0.0).unwrap(), 1.0);
        assert_eq!(mu(PI).unwrap(), 1.0);
        let near = mu(1e-6).unwrap();
        assert!((1.0 - 1e-5..=1.0).contains(&near));
        let quarter = mu(FRAC_PI_4).unwrap();
        let quad = segment_mean_abs_quadrature(unit(FRAC_PI_4), unit(-FRAC_PI_4), 64).unwrap();
        assert!((quarter - quad).abs() < 1e-12);
        assert!(mu(f64::NAN).is_err());
        assert!(mu(f64::INFINITY).is_err());
    }

    #[test]
    fn mu_is_pi_periodic() {
        for &theta in &[0.2, 1.1, 2.9] {
            let base = mu(theta).unwrap();
            for k in [-3.0, -1.0, 1.0, 4.0] {
                assert!((mu(theta + k * PI).unwrap() - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nu_values() {
        assert!(nu(1e-8).unwrap().abs() < 1e-7);
        assert!(nu(FRAC_PI_4).unwrap() < 0.0);
        // 40-digit evaluation of 4 sin 1 - 2 (sin² 1 + 1) log((1 + sin 1)/(1 - sin 1))
        let reference = -5.011_814_239_599_94;
        assert!((nu(1.0).unwrap() - reference).abs() < 1e-13);
        assert!(nu(FRAC_PI_2).is_err());
    }

    #[test]
    fn mu_derivative_examples() {
        assert_eq!(mu_derivative(FRAC_PI_2).unwrap(), 0.0);
        assert!(mu_derivative(FRAC_PI_4).unwrap() < 0.0);
        assert!(mu_derivative(3.0 * FRAC_PI_4).unwrap() > 0.0);
        assert!(mu_derivative(0.0).is_err());
        assert!(mu_derivative(PI).is_err());

        let h = 1e-6;
        let fd = (mu(FRAC_PI_4 + h).unwrap() - mu(FRAC_PI_4 - h).unwrap()) / (2.0 * h);
        let exact = mu_derivative(FRAC_PI_4).unwrap();
        assert!((fd - exact).abs() <= 1e-6 * exact.abs());
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma(0.5, PI / 3.0).unwrap() - 0.5).abs() < 1e-15);
        for t in [0.01, 0.3, 0.5, 0.77, 0.999] {
            assert_eq!(gamma(t, 0.0).unwrap(), 1.0);
            assert!(gamma(t, FRAC_PI_2).unwrap().abs() < 1e-15);
            assert!((gamma(t, 0.7).unwrap() - gamma(1.0 - t, 0.7).unwrap()).abs() < 1e-15);
        }
        assert!(gamma(0.0, 1.0).is_err());
        assert!(gamma(1.0, 1.0).is_err());
        assert!(gamma(1.5, 1.0).is_err());
        assert!(gamma(0.3, f64::NAN).is_err());
    }

    #[test]
    fn gamma_matches_unrationalized_formula() {
        for t in [0.1, 0.35, 0.8] {
            for theta in [0.3, 1.2, 2.5] {
                let r_t = refinement_weight(t);
                let (s, c) = f64::sin_cos(theta);
                let root = (c * c + (2.0 * t - 1.0).powi(2) * s * s).sqrt();
                let direct = 1.0 - (1.0 - root) / (2.0 * r_t);
                assert!((gamma(t, theta).unwrap() - direct).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gamma_stays_in_unit_interval() {
        for k in 1..200 {
            let t = k as f64 / 200.0;
            for theta in [0.0, FRAC_PI_2, PI, 1.0, 2.0, FRAC_PI_2 + 1e-9] {
                let g = gamma(t, theta).unwrap();
                assert!((0.0..=1.0).contains(&g), "t = {t}, theta = {theta}: {g}");
            }
        }
    }

    #[test]
    fn reverse_triangle_examples() {
        let r = check_reverse_triangle(cx(1.0, 0.0), cx(1.0, 0.0), 0.3).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && r.rhs == 1.0 && r.holds);

        let r = check_reverse_triangle(cx(1.0, 0.0), cx(-1.0, 0.0), 0.5).unwrap();
        assert!(r.lhs.abs() < 1e-15 && r.rhs == 0.0 && r.holds);

        assert!(check_reverse_triangle(cx(1.0, 0.0), cx(2.0, 0.0), 0.0).is_err());
        assert!(check_reverse_triangle(cx(1.0, 0.0), cx(2.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn reverse_triangle_stable_gap_matches_direct() {
        let (c, d, t) = (cx(2.0, -1.0), cx(-0.5, 3.0), 0.37);
        let r_t = refinement_weight(t);
        let direct = ((1.0 - t) * c.norm() + t * d.norm() - (c * (1.0 - t) + d * t).norm()) / r_t;
        assert!((convexity_gap_over_weight(c, d, t) - direct).abs() < 1e-14);
        let direct_hi = (t * c.norm() + (1.0 - t) * d.norm() - (c * t + d * (1.0 - t)).norm()) / r_t;
        assert!((convexity_gap_over_weight(c, d, 1.0 - t) - direct_hi).abs() < 1e-14);
    }

    #[test]
    fn reverse_triangle_zero_base() {
        let r = check_reverse_triangle(cx(0.0, 0.0), cx(0.0, 2.0), 0.2).unwrap();
        assert!(r.holds);
        let r = check_reverse_triangle(cx(0.0, 0.0), cx(0.0, 0.0), 0.2).unwrap();
        assert!(r.holds && r.lhs == 0.0);
    }

    #[test]
    fn log_bound_examples() {
        assert!(check_log_bound(0.0).unwrap());
        assert_eq!(log_bound_slack(0.0).unwrap(), 0.0);
        assert!(check_log_bound(0.9).unwrap());
        let s = log_bound_slack(0.9).unwrap();
        assert!((s - (19f64.ln() - 1.8 / 1.81)).abs() < 1e-14);
        assert!(check_log_bound(-0.5).unwrap());
        assert!(check_log_bound(1.0).is_err());
        assert!(check_log_bound(-1.2).is_err());
    }
}

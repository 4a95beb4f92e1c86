//! Operator inequalities built on the scalar refinements.
//!
//! For `A = U|A|` and `0 ≤ v ≤ 1` every check works with the two auxiliary
//! vectors `|A|^v x` and `|A|^{1-v} U* y`, whose inner product is `⟨Ax, y⟩`,
//! and with the positive pair `P = |A|^{2v}`, `Q = |A*|^{2(1-v)}`.
//!
//! The statement-level bounds quantify an angle hypothesis over every unit
//! vector. That cannot be verified exactly, so the per-vector chains of the
//! proofs are checked instead, and the statement-level numbers are only
//! produced next to an empirically sampled [`AngleProfile`].

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::harness::ensemble::unit_vector;
use crate::linalg::{
    abs_adjoint, angle, frac_power, geometric_mean, inner, numerical_radius, polar, spectral_norm, vec_norm, CMatrix,
    CVector, PolarParts, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL,
};
use crate::rng::named_trial_rng;
use crate::scalar::{gamma, mu};

/// Default slack tolerance for the operator chains.
pub const OPERATOR_TOL: f64 = 1e-8;
/// Tolerance of the exact-equality link `cos θ_x ‖a‖‖b‖ = |⟨Ax, x⟩|`.
pub const EQUALITY_TOL: f64 = 1e-10;
/// Relative tolerance (in units of `‖x‖‖y‖`) of `γ_{1/2}(θ)‖x‖‖y‖ = |⟨x, y⟩|`.
pub const SHARPNESS_TOL: f64 = 1e-12;
/// Auxiliary vectors shorter than this (relative to `max(1, ‖A‖)‖x‖`) have no angle.
pub const DEGENERATE_REL: f64 = 1e-12;
/// Allowed deviation of a "unit" vector's norm from 1.
pub const UNIT_TOL: f64 = 1e-8;
pub const HISTOGRAM_BINS: usize = 18;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkKind {
    /// `left ≤ right`; slack is `right - left`.
    Inequality,
    /// `left = right`; slack is `-|right - left|`.
    Equality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link {
    pub name: &'static str,
    pub kind: LinkKind,
    pub slack: f64,
    pub tol: f64,
}

impl Link {
    fn le(name: &'static str, left: f64, right: f64, tol: f64) -> Self {
        Self { name, kind: LinkKind::Inequality, slack: right - left, tol }
    }

    fn eq(name: &'static str, left: f64, right: f64, tol: f64) -> Self {
        Self { name, kind: LinkKind::Equality, slack: -(right - left).abs(), tol }
    }

    pub fn holds(&self) -> bool {
        self.slack >= -self.tol
    }
}

/// One evaluated operator chain.
///
/// `links` holds one relation per adjacent pair of `terms`, in order,
/// followed by any side relations (Kato's bound, equality checks).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorChainReport {
    pub terms: Vec<Term>,
    pub links: Vec<Link>,
    pub holds: bool,
    pub worst_slack: f64,
    pub theta: Option<f64>,
    pub input_digest: String,
}

impl OperatorChainReport {
    fn new(terms: Vec<Term>, links: Vec<Link>, theta: Option<f64>) -> Self {
        let holds = links.iter().all(Link::holds);
        let worst_slack = links.iter().map(|l| l.slack).fold(f64::INFINITY, f64::min);
        Self { terms, links, holds, worst_slack, theta, input_digest: String::new() }
    }

    pub fn with_digest(mut self, digest: impl Into<String>) -> Self {
        self.input_digest = digest.into();
        self
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }

    /// Worst slack over links of one kind, if any.
    pub fn worst_slack_of(&self, kind: LinkKind) -> Option<f64> {
        self.links.iter().filter(|l| l.kind == kind).map(|l| l.slack).reduce(f64::min)
    }
}

/// Outcome of a per-vector check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ChainOutcome {
    Evaluated(OperatorChainReport),
    AngleUndefined { reason: String },
}

impl ChainOutcome {
    pub fn report(&self) -> Option<&OperatorChainReport> {
        match self {
            ChainOutcome::Evaluated(r) => Some(r),
            ChainOutcome::AngleUndefined { .. } => None,
        }
    }

    pub fn into_report(self) -> Option<OperatorChainReport> {
        match self {
            ChainOutcome::Evaluated(r) => Some(r),
            ChainOutcome::AngleUndefined { .. } => None,
        }
    }

    pub fn is_angle_undefined(&self) -> bool {
        matches!(self, ChainOutcome::AngleUndefined { .. })
    }
}

fn check_weight(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        invalid(format!("weight v must lie in [0, 1], got {v}"))
    }
}

fn check_unit(x: &[num_complex::Complex64]) -> Result<()> {
    let n = vec_norm(x);
    if (n - 1.0).abs() <= UNIT_TOL {
        Ok(())
    } else {
        invalid(format!("expected a unit vector, got norm {n}"))
    }
}

fn quad_form(m: &CMatrix, x: &[num_complex::Complex64]) -> Result<f64> {
    Ok(inner(&m.mul_vec(x)?, x).re.max(0.0))
}

/// Everything the per-vector checks need for a fixed `(A, v)`.
#[derive(Debug, Clone)]
pub struct OperatorSetup {
    pub a: CMatrix,
    pub v: f64,
    pub polar: PolarParts,
    pub norm: f64,
    /// `|A|^v`
    pub abs_pow_v: CMatrix,
    /// `|A|^{1-v} U*`
    pub abs_pow_rest_u_adj: CMatrix,
    /// `|A|^{2v}`
    pub p: CMatrix,
    /// `|A*|^{2(1-v)}`
    pub q: CMatrix,
    /// `‖P + Q‖`
    pub sum_norm: f64,
    /// `P # Q`, present after [`OperatorSetup::prepare_geomean`].
    pub geomean: Option<CMatrix>,
}

impl OperatorSetup {
    pub fn new(a: &CMatrix, v: f64) -> Result<Self> {
        a.require_square("operator inequality")?;
        check_weight(v)?;
        let parts = polar(a)?;
        let abs_a = &parts.positive;
        let abs_a_adj = abs_adjoint(a)?;
        let abs_pow_v = frac_power(abs_a, v)?;
        let abs_pow_rest_u_adj = &frac_power(abs_a, 1.0 - v)? * &parts.unitary.adjoint();
        let p = frac_power(abs_a, 2.0 * v)?;
        let q = frac_power(&abs_a_adj, 2.0 * (1.0 - v))?;
        let sum_norm = spectral_norm(&(&p + &q));
        let norm = parts.svd.sigma[0];
        Ok(Self {
            a: a.clone(),
            v,
            polar: parts,
            norm,
            abs_pow_v,
            abs_pow_rest_u_adj,
            p,
            q,
            sum_norm,
            geomean: None,
        })
    }

    /// Computes `|A|^{2v} # |A*|^{2(1-v)}`; fails when either side is not
    /// positive definite.
    pub fn prepare_geomean(&mut self) -> Result<()> {
        if self.geomean.is_none() {
            let g = geometric_mean(&self.p, &self.q, 0.5).map_err(|e| match e {
                Error::NotPositiveDefinite { min_eig, floor } => Error::InvalidArgument(format!(
                    "|A|^(2v) # |A*|^(2(1-v)) needs positive definite factors (v = {}, min eigenvalue {min_eig:.3e} < floor {floor:.3e})",
                    self.v
                )),
                other => other,
            })?;
            self.geomean = Some(g);
        }
        Ok(())
    }

    fn degenerate_floor(&self, x: &[num_complex::Complex64]) -> f64 {
        DEGENERATE_REL * self.norm.max(1.0) * vec_norm(x)
    }

    /// `(|A|^v x, |A|^{1-v} U* y)` and their angle, or the reason it is undefined.
    fn auxiliary(
        &self,
        x: &[num_complex::Complex64],
        y: &[num_complex::Complex64],
    ) -> Result<std::result::Result<(CVector, CVector, f64), String>> {
        let a = self.abs_pow_v.mul_vec(x)?;
        let b = self.abs_pow_rest_u_adj.mul_vec(y)?;
        let (na, nb) = (vec_norm(&a), vec_norm(&b));
        if na <= self.degenerate_floor(x) {
            return Ok(Err(format!("|A|^v x vanishes (norm {na:.3e})")));
        }
        if nb <= self.degenerate_floor(y) {
            return Ok(Err(format!("|A|^(1-v) U* y vanishes (norm {nb:.3e})")));
        }
        let theta = angle(&a, &b)?;
        Ok(Ok((a, b, theta)))
    }

    /// Refined mixed Schwarz chain
    /// `|⟨Ax,y⟩| ≤ μ(θ)√(⟨Px,x⟩⟨Qy,y⟩) ≤ √(⟨Px,x⟩⟨Qy,y⟩)`.
    pub fn mixed_schwarz(&self, x: &[num_complex::Complex64], y: &[num_complex::Complex64]) -> Result<ChainOutcome> {
        if vec_norm(x) == 0.0 || vec_norm(y) == 0.0 {
            return invalid("mixed Schwarz needs nonzero x and y");
        }
        let (_, _, theta) = match self.auxiliary(x, y)? {
            Ok(aux) => aux,
            Err(reason) => return Ok(ChainOutcome::AngleUndefined { reason }),
        };
        let lhs = inner(&self.a.mul_vec(x)?, y).norm();
        let kato = (quad_form(&self.p, x)? * quad_form(&self.q, y)?).sqrt();
        let refined = mu(theta)? * kato;
        let terms = vec![
            Term { name: "abs_inner", value: lhs },
            Term { name: "refined_bound", value: refined },
            Term { name: "kato_bound", value: kato },
        ];
        let links = vec![
            Link::le("refined", lhs, refined, OPERATOR_TOL),
            Link::le("mu_at_most_one", refined, kato, OPERATOR_TOL),
            Link::le("kato", lhs, kato, OPERATOR_TOL),
        ];
        Ok(ChainOutcome::Evaluated(OperatorChainReport::new(terms, links, Some(theta))))
    }

    /// Per-vector numerical radius chain with `θ_x` in place of `θ₁`.
    pub fn radius_chain(&self, x: &[num_complex::Complex64]) -> Result<ChainOutcome> {
        check_unit(x)?;
        let (_, _, theta) = match self.auxiliary(x, x)? {
            Ok(aux) => aux,
            Err(reason) => return Ok(ChainOutcome::AngleUndefined { reason }),
        };
        let m = mu(theta)?;
        let lhs = inner(&self.a.mul_vec(x)?, x).norm();
        let px = quad_form(&self.p, x)?;
        let qx = quad_form(&self.q, x)?;
        let t1 = m * (px * qx).sqrt();
        let t2 = 0.5 * m * (px + qx);
        let t3 = 0.5 * m * self.sum_norm;
        let terms = vec![
            Term { name: "abs_inner", value: lhs },
            Term { name: "refined_geometric", value: t1 },
            Term { name: "refined_arithmetic", value: t2 },
            Term { name: "refined_norm", value: t3 },
        ];
        let links = vec![
            Link::le("mixed_schwarz", lhs, t1, OPERATOR_TOL),
            Link::le("am_gm", t1, t2, OPERATOR_TOL),
            Link::le("quadratic_form_norm", t2, t3, OPERATOR_TOL),
        ];
        Ok(ChainOutcome::Evaluated(OperatorChainReport::new(terms, links, Some(theta))))
    }

    /// Per-vector geometric-mean lower chain
    /// `cos θ_x ⟨(P#Q)x,x⟩ ≤ cos θ_x √(⟨Px,x⟩⟨Qx,x⟩) = |⟨Ax,x⟩|`.
    pub fn geomean_lower(&self, x: &[num_complex::Complex64]) -> Result<ChainOutcome> {
        check_unit(x)?;
        let Some(g) = self.geomean.as_ref() else {
            return invalid("geometric mean not prepared; call prepare_geomean first");
        };
        let (a, b, theta) = match self.auxiliary(x, x)? {
            Ok(aux) => aux,
            Err(reason) => return Ok(ChainOutcome::AngleUndefined { reason }),
        };
        let cos = theta.cos();
        let mean_term = cos * inner(&g.mul_vec(x)?, x).re;
        let geometric = cos * (quad_form(&self.p, x)? * quad_form(&self.q, x)?).sqrt();
        let rhs = inner(&self.a.mul_vec(x)?, x).norm();
        let angle_identity = cos * vec_norm(&a) * vec_norm(&b);
        let terms = vec![
            Term { name: "mean_form", value: mean_term },
            Term { name: "geometric_form", value: geometric },
            Term { name: "abs_inner", value: rhs },
        ];
        let links = vec![
            Link::le("geomean_form", mean_term, geometric, OPERATOR_TOL),
            Link::eq("angle_definition", geometric, rhs, EQUALITY_TOL),
            Link::eq("angle_identity", angle_identity, rhs, EQUALITY_TOL),
        ];
        Ok(ChainOutcome::Evaluated(OperatorChainReport::new(terms, links, Some(theta))))
    }

    /// `θ_x` for a unit vector, `None` when the angle is undefined.
    pub fn theta_x(&self, x: &[num_complex::Complex64]) -> Result<Option<f64>> {
        Ok(self.auxiliary(x, x)?.ok().map(|(_, _, t)| t))
    }

    /// `μ(θ_ref)/2 · ‖P + Q‖`.
    pub fn refined_radius_bound(&self, theta_ref: f64) -> Result<f64> {
        if !(0.0..=FRAC_PI_2).contains(&theta_ref) {
            return invalid(format!("theta_ref must lie in [0, pi/2], got {theta_ref}"));
        }
        Ok(0.5 * mu(theta_ref)? * self.sum_norm)
    }
}

pub fn check_mixed_schwarz(
    a: &CMatrix,
    x: &[num_complex::Complex64],
    y: &[num_complex::Complex64],
    v: f64,
) -> Result<ChainOutcome> {
    OperatorSetup::new(a, v)?.mixed_schwarz(x, y)
}

pub fn check_radius_chain(a: &CMatrix, v: f64, x: &[num_complex::Complex64]) -> Result<ChainOutcome> {
    OperatorSetup::new(a, v)?.radius_chain(x)
}

pub fn check_geomean_lower(a: &CMatrix, v: f64, x: &[num_complex::Complex64]) -> Result<ChainOutcome> {
    let mut setup = OperatorSetup::new(a, v)?;
    setup.prepare_geomean()?;
    setup.geomean_lower(x)
}

/// `½ ‖ |A| + |A*| ‖`.
pub fn kittaneh_bound(a: &CMatrix) -> Result<f64> {
    a.require_square("kittaneh_bound")?;
    let sum = &polar(a)?.positive + &abs_adjoint(a)?;
    Ok(0.5 * spectral_norm(&sum))
}

/// `μ(θ_ref)/2 · ‖ |A|^{2v} + |A*|^{2(1-v)} ‖`.
///
/// The caller is responsible for `θ_ref` being a lower bound of every `θ_x`.
pub fn refined_radius_bound(a: &CMatrix, v: f64, theta_ref: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta_ref) {
        return invalid(format!("theta_ref must lie in [0, pi/2], got {theta_ref}"));
    }
    OperatorSetup::new(a, v)?.refined_radius_bound(theta_ref)
}

/// Reverse Cauchy-Schwarz chain `0 ≤ γ_t(θ)‖x‖‖y‖ ≤ |⟨x,y⟩|`, plus the
/// sharpness relation at `t = 1/2`.
pub fn check_reverse_cs(x: &[num_complex::Complex64], y: &[num_complex::Complex64], t: f64) -> Result<OperatorChainReport> {
    let theta = angle(x, y).map_err(|e| match e {
        Error::AngleUndefined(msg) => Error::InvalidArgument(format!("reverse Cauchy-Schwarz needs nonzero vectors ({msg})")),
        other => other,
    })?;
    let scale = vec_norm(x) * vec_norm(y);
    let abs_inner = inner(x, y).norm();
    let lower = gamma(t, theta)? * scale;
    let half = gamma(0.5, theta)? * scale;
    let terms = vec![
        Term { name: "zero", value: 0.0 },
        Term { name: "gamma_bound", value: lower },
        Term { name: "abs_inner", value: abs_inner },
    ];
    let links = vec![
        Link::le("gamma_nonnegative", 0.0, lower, OPERATOR_TOL),
        Link::le("reverse_cauchy_schwarz", lower, abs_inner, OPERATOR_TOL),
        Link::eq("sharp_at_half", half / scale, abs_inner / scale, SHARPNESS_TOL),
    ];
    Ok(OperatorChainReport::new(terms, links, Some(theta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Empirical distribution of `θ_x` over Haar-random unit vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleProfile {
    pub v: f64,
    pub samples: usize,
    pub skipped: usize,
    pub theta_min: f64,
    pub theta_max: f64,
    pub histogram: Vec<HistogramBin>,
}

impl AngleProfile {
    pub fn bin_width(&self) -> f64 {
        FRAC_PI_2 / self.histogram.len() as f64
    }
}

pub fn angle_profile(a: &CMatrix, v: f64, samples: usize, seed: u64) -> Result<AngleProfile> {
    angle_profile_of(&OperatorSetup::new(a, v)?, samples, seed)
}

pub fn angle_profile_of(setup: &OperatorSetup, samples: usize, seed: u64) -> Result<AngleProfile> {
    if samples == 0 {
        return invalid("angle profile needs at least one sample");
    }
    let n = setup.a.rows();
    let mut rng = named_trial_rng(seed, "angle-profile", 0);
    let width = FRAC_PI_2 / HISTOGRAM_BINS as f64;
    let mut histogram: Vec<HistogramBin> = (0..HISTOGRAM_BINS)
        .map(|k| HistogramBin { lower: k as f64 * width, upper: (k + 1) as f64 * width, count: 0 })
        .collect();
    let (mut lo, mut hi, mut skipped) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for _ in 0..samples {
        let x = unit_vector(&mut rng, n);
        match setup.theta_x(&x)? {
            Some(theta) => {
                lo = lo.min(theta);
                hi = hi.max(theta);
                let bin = ((theta / width) as usize).min(HISTOGRAM_BINS - 1);
                histogram[bin].count += 1;
            }
            None => skipped += 1,
        }
    }
    if skipped == samples {
        return Err(Error::ProfileEmpty(samples));
    }
    Ok(AngleProfile { v: setup.v, samples, skipped, theta_min: lo, theta_max: hi, histogram })
}

/// Angle hypothesis `θ₁ ≤ θ_x ≤ θ₂` for all unit `x`, on one side of π/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleRange {
    pub lower: f64,
    pub upper: f64,
}

impl AngleRange {
    pub fn from_profile(p: &AngleProfile) -> Self {
        Self { lower: p.theta_min, upper: p.theta_max }
    }
}

/// Statement-level bounds derived from an angle hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatementBounds {
    /// Always "sampled hypothesis" when built from an [`AngleProfile`].
    pub hypothesis: String,
    pub range: AngleRange,
    /// `μ(θ₁)/2 ‖P + Q‖` (acute range) or `μ(θ₂)/2 ‖P + Q‖` (obtuse range).
    pub radius_upper: f64,
    /// `cos(θ₂) ‖P # Q‖` (acute range) or `cos(θ₁) ‖P # Q‖` (obtuse range);
    /// absent when the geometric mean has not been prepared.
    pub radius_lower: Option<f64>,
}

pub fn statement_bounds(setup: &OperatorSetup, range: AngleRange, hypothesis: &str) -> Result<StatementBounds> {
    let AngleRange { lower, upper } = range;
    if !(lower <= upper) || lower < 0.0 || upper > std::f64::consts::PI {
        return invalid(format!("invalid angle range [{lower}, {upper}]"));
    }
    let (mu_at, cos_at) = if upper <= FRAC_PI_2 {
        (lower, upper)
    } else if lower >= FRAC_PI_2 {
        (upper, lower)
    } else {
        return invalid(format!("angle range [{lower}, {upper}] straddles pi/2"));
    };
    let radius_upper = 0.5 * mu(mu_at)? * setup.sum_norm;
    let radius_lower = setup.geomean.as_ref().map(|g| cos_at.cos() * spectral_norm(g));
    Ok(StatementBounds { hypothesis: hypothesis.to_string(), range, radius_upper, radius_lower })
}

/// `‖A‖`, `w(A)`, Kittaneh's bound and the refined bound for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsSummary {
    pub v: f64,
    pub theta_ref: f64,
    pub spectral_norm: f64,
    pub numerical_radius: f64,
    pub kittaneh_bound: f64,
    pub refined_bound: f64,
}

pub fn bounds_summary(a: &CMatrix, v: f64, theta_ref: f64) -> Result<BoundsSummary> {
    let setup = OperatorSetup::new(a, v)?;
    Ok(BoundsSummary {
        v,
        theta_ref,
        spectral_norm: setup.norm,
        numerical_radius: numerical_radius(a, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL)?,
        kittaneh_bound: kittaneh_bound(a)?,
        refined_bound: setup.refined_radius_bound(theta_ref)?,
    })
}

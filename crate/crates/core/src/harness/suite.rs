//! Sweep configuration and execution.
//!
//! Work is split into units (the bound-function grids, one unit per scalar
//! trial, one per operator matrix). Each unit draws from its own
//! counter-based stream, so the per-unit reports do not depend on scheduling;
//! units are evaluated in parallel and folded in index order.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::{gaussian_vector, gen_matrix, open_unit, point_in_disk, unit_vector, Ensemble};
use super::report::SuiteSummary;
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eig, numerical_radius_witness, spectral_norm, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL};
use crate::operator::{
    check_reverse_cs, kittaneh_bound, statement_bounds, AngleRange, ChainOutcome, LinkKind, OperatorSetup,
};
use crate::quadrature::GaussLegendre;
use crate::rng::named_trial_rng;
use crate::scalar::{
    check_reverse_triangle, check_triangle_refinement, gamma, log_bound_slack, mu, segment_mean_abs,
    segment_mean_abs_panelled, ComplexScalar, DEFAULT_QUADRATURE_NODES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Scalar,
    Operator,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Scalar => "scalar",
            Suite::Operator => "operator",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(Suite::Scalar),
            "operator" => Ok(Suite::Operator),
            "all" => Ok(Suite::All),
            other => invalid(format!("unknown suite '{other}' (expected scalar, operator or all)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    pub suite: Suite,
    pub default_tol: f64,
}

const fn check(name: &'static str, suite: Suite, default_tol: f64) -> CheckInfo {
    CheckInfo { name, suite, default_tol }
}

/// Every check the harness runs, in report order.
pub const CHECKS: &[CheckInfo] = &[
    check("triangle-refinement", Suite::Scalar, 1e-10),
    check("segment-quadrature", Suite::Scalar, 1e-10),
    check("segment-quadrature-kink", Suite::Scalar, 1e-3),
    check("reverse-triangle", Suite::Scalar, 1e-10),
    check("log-bound", Suite::Scalar, 1e-12),
    check("mu-range", Suite::Scalar, 1e-12),
    check("mu-monotone", Suite::Scalar, 1e-12),
    check("gamma-range", Suite::Scalar, 1e-12),
    check("gamma-monotone", Suite::Scalar, 1e-12),
    check("gamma-symmetry", Suite::Scalar, 1e-12),
    check("gamma-half-cosine", Suite::Scalar, 1e-14),
    check("reverse-cauchy-schwarz", Suite::Scalar, 1e-8),
    check("reverse-cs-sharpness", Suite::Scalar, 1e-12),
    check("radius-sandwich", Suite::Operator, 1e-8),
    check("kittaneh", Suite::Operator, 1e-8),
    check("mixed-schwarz", Suite::Operator, 1e-8),
    check("radius-chain", Suite::Operator, 1e-8),
    check("geomean-lower", Suite::Operator, 1e-8),
    check("geomean-equality", Suite::Operator, 1e-10),
    check("refined-radius-upper", Suite::Operator, 1e-8),
    check("refined-radius-lower", Suite::Operator, 1e-8),
];

fn check_info(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Segments passing closer than this to the origin are compared against the
/// quadrature under the looser kink tolerance.
const KINK_DISTANCE: f64 = 1e-6;
/// Every this many scalar trials uses `d = c`, the equality case.
const EQUALITY_EVERY: u64 = 100;
const LOG_BOUND_RANGE: f64 = 0.9999;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub suite: Suite,
    /// Scalar trials.
    pub trials: usize,
    /// Matrices per dimension, cycled through `ensembles`.
    pub operator_trials: usize,
    /// Random vectors (or vector pairs) per matrix and weight `v`.
    pub vectors_per_matrix: usize,
    /// Points of the `μ`/`γ` grids on `(0, π)`.
    pub grid_points: usize,
    pub dims: Vec<usize>,
    pub v_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub scalar_scale: f64,
    pub ensembles: Vec<Ensemble>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            suite: Suite::All,
            trials: 10_000,
            operator_trials: 200,
            vectors_per_matrix: 100,
            grid_points: 10_000,
            dims: vec![2, 3, 4, 6, 8],
            v_grid: vec![0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0],
            t_grid: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            scalar_scale: 10.0,
            ensembles: Ensemble::ALL.to_vec(),
            tolerances: CHECKS.iter().map(|c| (c.name.to_string(), c.default_tol)).collect(),
        }
    }
}

impl SweepConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Sets every tolerance to `tol`.
    pub fn with_uniform_tolerance(mut self, tol: f64) -> Self {
        for v in self.tolerances.values_mut() {
            *v = tol;
        }
        self
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| check_info(name).map(|c| c.default_tol))
            .unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.operator_trials == 0 || self.vectors_per_matrix == 0 {
            return invalid("trials, operator_trials and vectors_per_matrix must be at least 1");
        }
        if self.grid_points < 4 {
            return invalid(format!("grid_points must be at least 4, got {}", self.grid_points));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&n| n == 0 || n > 64) {
            return invalid(format!("dims must be non-empty with entries in 1..=64, got {:?}", self.dims));
        }
        if self.v_grid.is_empty() || self.v_grid.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return invalid(format!("v_grid must be non-empty with entries in [0, 1], got {:?}", self.v_grid));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            return invalid(format!("t_grid must be non-empty with entries in (0, 1), got {:?}", self.t_grid));
        }
        if !(self.scalar_scale > 0.0 && self.scalar_scale.is_finite()) {
            return invalid(format!("scalar_scale must be positive and finite, got {}", self.scalar_scale));
        }
        if self.suite.includes(Suite::Operator) && self.ensembles.is_empty() {
            return invalid("the operator suite needs at least one ensemble");
        }
        for (name, &tol) in &self.tolerances {
            if check_info(name).is_none() {
                return invalid(format!("unknown check '{name}' in tolerances"));
            }
            if !(tol >= 0.0 && tol.is_finite()) {
                return invalid(format!("tolerance for '{name}' must be finite and non-negative, got {tol}"));
            }
        }
        Ok(())
    }

    /// Checks this configuration runs, in report order.
    pub fn selected_checks(&self) -> impl Iterator<Item = &'static CheckInfo> + '_ {
        CHECKS.iter().filter(move |c| self.suite.includes(c.suite))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    AngleUndefined,
    Skipped,
}

/// One evaluated (or excluded) instance of a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub check: &'static str,
    pub inputs_digest: String,
    pub terms: Vec<f64>,
    pub worst_slack: Option<f64>,
    pub outcome: Outcome,
    /// Category of an undefined or skipped outcome.
    pub reason: Option<&'static str>,
    pub detail: Option<String>,
}

impl TrialReport {
    fn evaluated(check: &'static str, digest: String, terms: Vec<f64>, slack: f64, tol: f64) -> Self {
        // NaN slack counts as a failure
        let outcome = if slack >= -tol { Outcome::Pass } else { Outcome::Fail };
        Self { check, inputs_digest: digest, terms, worst_slack: Some(slack), outcome, reason: None, detail: None }
    }

    fn excluded(check: &'static str, digest: String, outcome: Outcome, reason: &'static str, detail: String) -> Self {
        Self { check, inputs_digest: digest, terms: Vec::new(), worst_slack: None, outcome, reason: Some(reason), detail: Some(detail) }
    }
}

struct Sink<'a> {
    config: &'a SweepConfig,
    reports: Vec<TrialReport>,
}

impl Sink<'_> {
    fn value(&mut self, check: &'static str, digest: impl FnOnce() -> String, terms: Vec<f64>, slack: f64) {
        let tol = self.config.tolerance(check);
        self.reports.push(TrialReport::evaluated(check, digest(), terms, slack, tol));
    }

    fn skip(&mut self, check: &'static str, digest: String, reason: &'static str, err: impl fmt::Display) {
        self.reports.push(TrialReport::excluded(check, digest, Outcome::Skipped, reason, err.to_string()));
    }

    fn undefined(&mut self, check: &'static str, digest: String, detail: String) {
        self.reports.push(TrialReport::excluded(check, digest, Outcome::AngleUndefined, "angle undefined", detail));
    }

    /// Records a per-vector chain; `eq_check` receives the equality links.
    fn chain(&mut self, check: &'static str, eq_check: Option<&'static str>, digest: String, out: ChainOutcome) {
        match out {
            ChainOutcome::Evaluated(r) => {
                let slack = r.worst_slack_of(LinkKind::Inequality).unwrap_or(f64::INFINITY);
                if let (Some(eq), Some(eq_slack)) = (eq_check, r.worst_slack_of(LinkKind::Equality)) {
                    let d = digest.clone();
                    self.value(eq, || d, r.values(), eq_slack);
                }
                self.value(check, || digest, r.values(), slack);
            }
            ChainOutcome::AngleUndefined { reason } => {
                if let Some(eq) = eq_check {
                    self.undefined(eq, digest.clone(), reason.clone());
                }
                self.undefined(check, digest, reason);
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Unit {
    Grid,
    Scalar(u64),
    Operator { dim: usize, index: u64 },
}

fn units(config: &SweepConfig) -> Vec<Unit> {
    let mut out = Vec::new();
    if config.suite.includes(Suite::Scalar) {
        out.push(Unit::Grid);
        out.extend((0..config.trials as u64).map(Unit::Scalar));
    }
    if config.suite.includes(Suite::Operator) {
        for &dim in &config.dims {
            out.extend((0..config.operator_trials as u64).map(|index| Unit::Operator { dim, index }));
        }
    }
    out
}

fn run_unit(config: &SweepConfig, unit: Unit, rule: &GaussLegendre) -> Vec<TrialReport> {
    let mut sink = Sink { config, reports: Vec::new() };
    match unit {
        Unit::Grid => grid_checks(&mut sink),
        Unit::Scalar(k) => scalar_trial(&mut sink, rule, k),
        Unit::Operator { dim, index } => operator_trial(&mut sink, dim, index),
    }
    sink.reports
}

fn quadrature_rule() -> GaussLegendre {
    GaussLegendre::new(DEFAULT_QUADRATURE_NODES).expect("default node count is valid")
}

/// Every trial report of the configured sweep, in deterministic order.
pub fn trial_stream(config: &SweepConfig) -> Result<Vec<TrialReport>> {
    config.validate()?;
    let rule = quadrature_rule();
    Ok(units(config).into_iter().flat_map(|u| run_unit(config, u, &rule)).collect())
}

/// Runs the sweep in parallel; the summary is identical to folding
/// [`trial_stream`] in order.
pub fn run_suite(config: &SweepConfig) -> Result<SuiteSummary> {
    config.validate()?;
    let start = Instant::now();
    let rule = quadrature_rule();
    let selected: Vec<&'static str> = config.selected_checks().map(|c| c.name).collect();
    let tallies: Vec<SuiteSummary> = units(config)
        .par_iter()
        .map(|&u| {
            let mut partial = SuiteSummary::empty_for(config.clone(), &selected);
            for r in run_unit(config, u, &rule) {
                partial.record(&r);
            }
            partial
        })
        .collect();
    let mut summary = SuiteSummary::empty_for(config.clone(), &selected);
    for t in &tallies {
        summary.merge(t);
    }
    summary.wall_ms = start.elapsed().as_millis() as u64;
    Ok(summary)
}

/// Summary of an existing report stream (no timing).
pub fn summarize(config: &SweepConfig, reports: &[TrialReport]) -> SuiteSummary {
    let selected: Vec<&'static str> = config.selected_checks().map(|c| c.name).collect();
    let mut summary = SuiteSummary::empty_for(config.clone(), &selected);
    for r in reports {
        summary.record(r);
    }
    summary
}

fn grid_checks(sink: &mut Sink<'_>) {
    let n = sink.config.grid_points;
    let thetas: Vec<f64> = (1..n).map(|i| i as f64 * PI / n as f64).collect();
    let digest = |name: &str, i: usize| format!("grid={name} points={n} i={i}");

    let mus: Vec<Option<f64>> = thetas.iter().map(|&th| mu(th).ok()).collect();
    for (i, (&th, m)) in thetas.iter().zip(&mus).enumerate() {
        match *m {
            Some(m) => sink.value("mu-range", || digest("mu", i), vec![th, m], (m - 0.5).min(1.0 - m)),
            None => sink.skip("mu-range", digest("mu", i), "mu rejected grid point", th),
        }
    }
    monotone_pattern(sink, "mu-monotone", &thetas, &mus, "mu");

    let t_grid = sink.config.t_grid.clone();
    for &t in &t_grid {
        let name = format!("gamma t={t}");
        let gs: Vec<Option<f64>> = thetas.iter().map(|&th| gamma(t, th).ok()).collect();
        for (i, (&th, g)) in thetas.iter().zip(&gs).enumerate() {
            let Some(g) = *g else {
                sink.skip("gamma-range", digest(&name, i), "gamma rejected grid point", th);
                continue;
            };
            sink.value("gamma-range", || digest(&name, i), vec![th, g], g.min(1.0 - g));
            match gamma(1.0 - t, th) {
                Ok(h) => sink.value("gamma-symmetry", || digest(&name, i), vec![g, h], -(g - h).abs()),
                Err(e) => sink.skip("gamma-symmetry", digest(&name, i), "gamma rejected grid point", e),
            }
        }
        monotone_pattern(sink, "gamma-monotone", &thetas, &gs, &name);
    }
    for (i, &th) in thetas.iter().enumerate() {
        match gamma(0.5, th) {
            Ok(g) => {
                let c = th.cos().abs();
                sink.value("gamma-half-cosine", || digest("gamma t=0.5", i), vec![g, c], -(g - c).abs());
            }
            Err(e) => sink.skip("gamma-half-cosine", digest("gamma t=0.5", i), "gamma rejected grid point", e),
        }
    }
}

/// Non-increasing on `(0, π/2]`, non-decreasing on `[π/2, π)`.
fn monotone_pattern(sink: &mut Sink<'_>, check: &'static str, thetas: &[f64], values: &[Option<f64>], name: &str) {
    let n = sink.config.grid_points;
    for i in 0..thetas.len().saturating_sub(1) {
        let digest = || format!("grid={name} points={n} pair={i}");
        let (Some(a), Some(b)) = (values[i], values[i + 1]) else {
            sink.skip(check, digest(), "grid point rejected", "missing value");
            continue;
        };
        let (lo, hi) = (thetas[i], thetas[i + 1]);
        let slack = if hi <= FRAC_PI_2 {
            a - b
        } else if lo >= FRAC_PI_2 {
            b - a
        } else {
            sink.skip(check, digest(), "pair straddles pi/2", format!("[{lo}, {hi}]"));
            continue;
        };
        sink.value(check, digest, vec![a, b], slack);
    }
}

/// Minimum of `|s c + (1 - s) d|` over `s ∈ [0, 1]`.
fn segment_distance_to_origin(c: ComplexScalar, d: ComplexScalar) -> f64 {
    let w = c - d;
    let l2 = w.norm_sqr();
    if l2 == 0.0 {
        return c.norm();
    }
    let s = (-(d.conj() * w).re / l2).clamp(0.0, 1.0);
    (c * s + d * (1.0 - s)).norm()
}

fn scalar_trial(sink: &mut Sink<'_>, rule: &GaussLegendre, k: u64) {
    let cfg = sink.config;
    let seed = cfg.seed;
    let mut rng = named_trial_rng(seed, "scalar", k);
    let c = point_in_disk(&mut rng, cfg.scalar_scale);
    let d = if k.is_multiple_of(EQUALITY_EVERY) { c } else { point_in_disk(&mut rng, cfg.scalar_scale) };
    let t = open_unit(&mut rng);
    let x = (2.0 * open_unit(&mut rng) - 1.0) * LOG_BOUND_RANGE;
    let pair = format!("seed={seed} scalar={k} c={},{} d={},{}", c.re, c.im, d.re, d.im);

    let tri = check_triangle_refinement(c, d);
    sink.value("triangle-refinement", || pair.clone(), vec![tri.lhs, tri.mid.unwrap_or(f64::NAN), tri.rhs], tri.worst_slack());

    let closed = segment_mean_abs(c, d);
    let quad = segment_mean_abs_panelled(rule, c, d);
    let rel = (closed - quad).abs() / quad.abs().max(f64::MIN_POSITIVE);
    let check = if segment_distance_to_origin(c, d) >= KINK_DISTANCE { "segment-quadrature" } else { "segment-quadrature-kink" };
    sink.value(check, || pair.clone(), vec![closed, quad], -rel);

    match check_reverse_triangle(c, d, t) {
        Ok(r) => sink.value("reverse-triangle", || format!("{pair} t={t}"), vec![r.lhs, r.rhs], r.worst_slack()),
        Err(e) => sink.skip("reverse-triangle", format!("{pair} t={t}"), "reverse triangle rejected input", e),
    }

    match log_bound_slack(x) {
        Ok(s) => sink.value("log-bound", || format!("seed={seed} scalar={k} x={x}"), vec![x], s),
        Err(e) => sink.skip("log-bound", format!("seed={seed} scalar={k} x={x}"), "log bound rejected input", e),
    }

    let n = cfg.dims[(k % cfg.dims.len() as u64) as usize];
    let u = gaussian_vector(&mut rng, n);
    let w = gaussian_vector(&mut rng, n);
    let tv = open_unit(&mut rng);
    let digest = format!("seed={seed} scalar={k} vectors n={n} t={tv}");
    match check_reverse_cs(&u, &w, tv) {
        Ok(r) => {
            let ineq = r.worst_slack_of(LinkKind::Inequality).unwrap_or(f64::INFINITY);
            let eq = r.worst_slack_of(LinkKind::Equality).unwrap_or(f64::INFINITY);
            sink.value("reverse-cauchy-schwarz", || digest.clone(), r.values(), ineq);
            sink.value("reverse-cs-sharpness", || digest, r.values(), eq);
        }
        Err(e) => {
            sink.skip("reverse-cs-sharpness", digest.clone(), "zero vector", &e);
            sink.skip("reverse-cauchy-schwarz", digest, "zero vector", e);
        }
    }
}

const OPERATOR_CHECKS: [&str; 8] = [
    "radius-sandwich",
    "kittaneh",
    "mixed-schwarz",
    "radius-chain",
    "geomean-lower",
    "geomean-equality",
    "refined-radius-upper",
    "refined-radius-lower",
];

fn operator_trial(sink: &mut Sink<'_>, dim: usize, index: u64) {
    let cfg = sink.config;
    let seed = cfg.seed;
    let ensemble = cfg.ensembles[(index % cfg.ensembles.len() as u64) as usize];
    let base = format!("seed={seed} ensemble={ensemble} n={dim} matrix={index}");
    let mut rng = named_trial_rng(seed, &format!("operator/{dim}"), index);

    let a = match gen_matrix(&mut rng, ensemble, dim) {
        Ok(a) => a,
        Err(e) => {
            for check in OPERATOR_CHECKS {
                sink.skip(check, base.clone(), "instance generation failed", &e);
            }
            return;
        }
    };
    let norm = spectral_norm(&a);
    let (w, witness) = match numerical_radius_witness(&a, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL) {
        Ok(r) => r,
        Err(e) => {
            for check in OPERATOR_CHECKS {
                sink.skip(check, base.clone(), "numerical radius failed", &e);
            }
            return;
        }
    };
    sink.value("radius-sandwich", || base.clone(), vec![0.5 * norm, w, norm], (w - 0.5 * norm).min(norm - w));
    match kittaneh_bound(&a) {
        Ok(k) => sink.value("kittaneh", || base.clone(), vec![w, k, norm], (k - w).min(norm - k)),
        Err(e) => sink.skip("kittaneh", base.clone(), "kittaneh bound failed", e),
    }

    for &v in &cfg.v_grid {
        let at_v = format!("{base} v={v}");
        let mut setup = match OperatorSetup::new(&a, v) {
            Ok(s) => s,
            Err(e) => {
                for check in &OPERATOR_CHECKS[2..] {
                    for j in 0..cfg.vectors_per_matrix {
                        sink.skip(check, format!("{at_v} vector={j}"), "operator setup failed", &e);
                    }
                }
                continue;
            }
        };
        let geomean = if ensemble.generically_invertible() {
            setup.prepare_geomean().map_err(|e| ("geometric mean unavailable", e.to_string()))
        } else {
            Err(("ensemble not invertible", format!("{ensemble} matrices are singular")))
        };

        let mut thetas = Vec::with_capacity(cfg.vectors_per_matrix + 2);
        for j in 0..cfg.vectors_per_matrix {
            let digest = format!("{at_v} vector={j}");
            let x = gaussian_vector(&mut rng, dim);
            let y = gaussian_vector(&mut rng, dim);
            let u = unit_vector(&mut rng, dim);
            record_chain(sink, "mixed-schwarz", None, &digest, setup.mixed_schwarz(&x, &y));
            record_chain(sink, "radius-chain", None, &digest, setup.radius_chain(&u));
            match &geomean {
                Ok(()) => record_chain(sink, "geomean-lower", Some("geomean-equality"), &digest, setup.geomean_lower(&u)),
                Err((reason, detail)) => {
                    sink.skip("geomean-lower", digest.clone(), reason, detail);
                    sink.skip("geomean-equality", digest.clone(), reason, detail);
                }
            }
            if let Ok(Some(th)) = setup.theta_x(&u) {
                thetas.push(th);
            }
        }
        statement_checks(sink, &setup, &at_v, w, &witness, thetas, geomean.as_ref().err());
    }
}

fn record_chain(
    sink: &mut Sink<'_>,
    check: &'static str,
    eq_check: Option<&'static str>,
    digest: &str,
    out: Result<ChainOutcome>,
) {
    match out {
        Ok(o) => sink.chain(check, eq_check, digest.to_string(), o),
        Err(e) => {
            if let Some(eq) = eq_check {
                sink.skip(eq, digest.to_string(), "check rejected input", &e);
            }
            sink.skip(check, digest.to_string(), "check rejected input", e);
        }
    }
}

/// Statement-level bounds under a sampled angle hypothesis.
///
/// The sample is augmented with the vector attaining `w(A)` and the top
/// eigenvector of `P # Q`; with those included, the bounds follow from the
/// per-vector chains and must hold however coarse the sample is.
fn statement_checks(
    sink: &mut Sink<'_>,
    setup: &OperatorSetup,
    at_v: &str,
    w: f64,
    witness: &[num_complex::Complex64],
    mut thetas: Vec<f64>,
    geomean_err: Option<&(&'static str, String)>,
) {
    let digest = format!("{at_v} profile");
    if let Ok(Some(th)) = setup.theta_x(witness) {
        thetas.push(th);
    }
    let top = setup.geomean.as_ref().and_then(|g| hermitian_eig(g, 1e-8).ok()).map(|e| e.vectors.column(e.vectors.cols() - 1));
    if let Some(g) = &top {
        if let Ok(Some(th)) = setup.theta_x(g) {
            thetas.push(th);
        }
    }
    if thetas.is_empty() {
        sink.undefined("refined-radius-upper", digest.clone(), "every sampled angle undefined".into());
        sink.undefined("refined-radius-lower", digest, "every sampled angle undefined".into());
        return;
    }
    let lower = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    match statement_bounds(setup, AngleRange { lower, upper }, "sampled hypothesis") {
        Ok(b) => {
            sink.value("refined-radius-upper", || digest.clone(), vec![w, b.radius_upper], b.radius_upper - w);
            match (b.radius_lower, geomean_err) {
                (Some(lo), _) => sink.value("refined-radius-lower", || digest, vec![lo, w], w - lo),
                (None, Some((reason, detail))) => sink.skip("refined-radius-lower", digest, reason, detail),
                (None, None) => sink.skip("refined-radius-lower", digest, "geometric mean unavailable", "not prepared"),
            }
        }
        Err(e) => {
            sink.skip("refined-radius-upper", digest.clone(), "statement bounds failed", &e);
            sink.skip("refined-radius-lower", digest, "statement bounds failed", e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SweepConfig {
        SweepConfig {
            seed,
            trials: 200,
            operator_trials: 10,
            vectors_per_matrix: 3,
            grid_points: 200,
            dims: vec![2, 3],
            v_grid: vec![0.0, 0.5, 1.0],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn small_suite_has_no_failures() {
        let s = run_suite(&small(1)).unwrap();
        for c in &s.checks {
            assert_eq!(c.fail, 0, "{c:?}");
        }
        let mixed = s.check("mixed-schwarz").unwrap();
        assert_eq!(mixed.total(), 2 * 10 * 3 * 3);
        let geo = s.check("geomean-lower").unwrap();
        assert!(geo.skipped > 0 && geo.pass > 0);
    }

    #[test]
    fn parallel_summary_matches_ordered_stream() {
        let cfg = small(3);
        let mut a = run_suite(&cfg).unwrap();
        let b = summarize(&cfg, &trial_stream(&cfg).unwrap());
        a.wall_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn identical_configs_give_identical_summaries() {
        let cfg = SweepConfig { trials: 10, seed: 1, ..small(1) };
        let mut a = run_suite(&cfg).unwrap();
        let mut b = run_suite(&cfg).unwrap();
        a.wall_ms = 0;
        b.wall_ms = 0;
        assert_eq!(a, b);
        let other = run_suite(&SweepConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a.check("reverse-triangle").unwrap().worst_digest, other.check("reverse-triangle").unwrap().worst_digest);
    }

    #[test]
    fn zero_tolerance_fails_only_by_round_off() {
        let cfg = small(5).with_uniform_tolerance(0.0);
        let s = run_suite(&cfg).unwrap();
        let fails: usize = s.checks.iter().map(|c| c.fail).sum();
        assert!(fails > 0);
        for c in s.checks.iter().filter(|c| c.fail > 0) {
            let worst = c.worst_slack.unwrap();
            assert!(worst.abs() <= 1e-10, "{}: {worst}", c.name);
        }
    }

    #[test]
    fn scalar_only_suite() {
        let cfg = SweepConfig { suite: Suite::Scalar, ..small(1) };
        let s = run_suite(&cfg).unwrap();
        assert!(s.checks.iter().all(|c| check_info(&c.name).unwrap().suite == Suite::Scalar));
        assert_eq!(s.check("triangle-refinement").unwrap().total(), 200);
        let equal_pairs = s.check("triangle-refinement").unwrap();
        assert!(equal_pairs.slack_histogram.iter().any(|b| b.label == "0" && b.count >= 2));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            SweepConfig { trials: 0, ..small(1) },
            SweepConfig { v_grid: vec![1.5], ..small(1) },
            SweepConfig { t_grid: vec![0.0], ..small(1) },
            SweepConfig { dims: vec![], ..small(1) },
            SweepConfig { ensembles: vec![], ..small(1) },
            SweepConfig { scalar_scale: -1.0, ..small(1) },
        ];
        for cfg in bad {
            assert!(run_suite(&cfg).is_err(), "{cfg:?}");
        }
        let mut cfg = small(1);
        cfg.tolerances.insert("no-such-check".into(), 1.0);
        assert!(cfg.validate().is_err());
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn segment_distance() {
        let c = ComplexScalar::new(1.0, 1.0);
        let d = ComplexScalar::new(-1.0, 1.0);
        assert!((segment_distance_to_origin(c, d) - 1.0).abs() < 1e-15);
        assert_eq!(segment_distance_to_origin(c, c), c.norm());
        assert!(segment_distance_to_origin(ComplexScalar::new(1.0, 0.0), ComplexScalar::new(-2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn trial_outcome_rule() {
        let r = TrialReport::evaluated("kittaneh", String::new(), vec![], -1e-9, 1e-8);
        assert_eq!(r.outcome, Outcome::Pass);
        let r = TrialReport::evaluated("kittaneh", String::new(), vec![], -1e-7, 1e-8);
        assert_eq!(r.outcome, Outcome::Fail);
        let r = TrialReport::evaluated("kittaneh", String::new(), vec![], f64::NAN, 1e-8);
        assert_eq!(r.outcome, Outcome::Fail);
    }
}

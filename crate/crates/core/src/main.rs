use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use opineq::harness::{run_suite, write_report, ReportFormat, Suite, SuiteSummary, SweepConfig};
use opineq::linalg::{numerical_radius, read_matrix, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL};
use opineq::operator::{angle_profile, bounds_summary};
use opineq::scalar::{
    check_reverse_triangle, check_triangle_refinement, gamma, mu, segment_mean_abs, segment_mean_abs_quadrature,
    ComplexScalar, ScalarChainReport,
};
use opineq::Error;

#[derive(Parser)]
#[command(name = "opineq", version, about = "Refined triangle, Cauchy-Schwarz and numerical-radius inequalities")]
struct Cli {
    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AngleArg {
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Interpret --theta in degrees.
    #[arg(long)]
    degrees: bool,
}

impl AngleArg {
    fn radians(&self) -> f64 {
        if self.degrees {
            self.theta.to_radians()
        } else {
            self.theta
        }
    }
}

#[derive(Args)]
struct PairArgs {
    /// First scalar as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: ComplexScalar,
    /// Second scalar as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    d: ComplexScalar,
}

#[derive(Subcommand)]
enum Command {
    /// Print mu(theta).
    Mu {
        #[command(flatten)]
        angle: AngleArg,
    },
    /// Print gamma_t(theta).
    Gamma {
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        angle: AngleArg,
    },
    /// Print the closed-form segment average of |s c + (1-s) d|.
    Segment {
        #[command(flatten)]
        pair: PairArgs,
        /// Also print an N-node Gauss-Legendre value.
        #[arg(long, value_name = "N")]
        quadrature: Option<usize>,
    },
    /// Check the refined triangle inequality for one pair.
    Triangle {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Check the reverse triangle inequality for one pair.
    ReverseTriangle {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        t: f64,
    },
    /// Print the numerical radius of a matrix.
    Radius {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
        refine_tol: f64,
    },
    /// Print the norm, numerical radius, Kittaneh bound and refined bound.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        theta_ref: f64,
    },
    /// Sample the angles theta_x over random unit vectors.
    AngleProfile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the seeded verification suite.
    Check {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        /// Scalar trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Matrices per dimension.
        #[arg(long)]
        operator_trials: Option<usize>,
        /// Random vectors per matrix and weight.
        #[arg(long)]
        vectors_per_matrix: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Override a check tolerance as NAME=VALUE ("all" sets every check).
        #[arg(long = "tolerance", value_name = "NAME=VALUE", value_parser = parse_tolerance)]
        tolerances: Vec<(String, f64)>,
    },
}

fn parse_complex(s: &str) -> Result<ComplexScalar, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got \"{s}\""))?;
    let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number \"{p}\" in \"{s}\": {e}"));
    let z = ComplexScalar::new(part(re)?, part(im)?);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite scalar \"{s}\""))
    }
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got \"{s}\""))?;
    let value = value.trim().parse::<f64>().map_err(|e| format!("bad tolerance \"{value}\": {e}"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Inequality,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        println!("{value}");
    } else {
        println!("{}", text());
    }
}

fn chain_text(r: &ScalarChainReport) -> String {
    let verdict = if r.holds { "holds" } else { "FAILS" };
    match r.mid {
        Some(mid) => format!("{} <= {} <= {} ({verdict}, worst slack {:e})", r.lhs, mid, r.rhs, r.worst_slack()),
        None => format!("{} <= {} ({verdict}, worst slack {:e})", r.lhs, r.rhs, r.worst_slack()),
    }
}

fn summary_text(s: &SuiteSummary) -> String {
    let mut out = format!("{:<26} {:>9} {:>6} {:>9} {:>8}  worst slack\n", "check", "pass", "fail", "undefined", "skipped");
    for c in &s.checks {
        let worst = c.worst_slack.map_or_else(|| "-".to_string(), |w| format!("{w:e}"));
        out.push_str(&format!("{:<26} {:>9} {:>6} {:>9} {:>8}  {worst}\n", c.name, c.pass, c.fail, c.undefined, c.skipped));
    }
    out.push_str(&format!("{} failures, {} ms", s.total_fails(), s.wall_ms));
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Mu { angle } => {
            let theta = angle.radians();
            let value = mu(theta)?;
            emit(json, json!({ "theta": theta, "mu": value }), || value.to_string());
        }
        Command::Gamma { t, angle } => {
            let theta = angle.radians();
            let value = gamma(t, theta)?;
            emit(json, json!({ "t": t, "theta": theta, "gamma": value }), || value.to_string());
        }
        Command::Segment { pair, quadrature } => {
            let closed = segment_mean_abs(pair.c, pair.d);
            let quad = quadrature.map(|n| segment_mean_abs_quadrature(pair.c, pair.d, n)).transpose()?;
            emit(json, json!({ "closed_form": closed, "quadrature": quad, "nodes": quadrature }), || match quad {
                Some(q) => format!("{closed}\nquadrature ({} nodes): {q}", quadrature.unwrap_or_default()),
                None => closed.to_string(),
            });
        }
        Command::Triangle { pair } => {
            let r = check_triangle_refinement(pair.c, pair.d);
            emit(json, json!(r), || chain_text(&r));
            if !r.holds {
                return Err(Failure::Inequality);
            }
        }
        Command::ReverseTriangle { pair, t } => {
            let r = check_reverse_triangle(pair.c, pair.d, t)?;
            emit(json, json!(r), || chain_text(&r));
            if !r.holds {
                return Err(Failure::Inequality);
            }
        }
        Command::Radius { input, grid, refine_tol } => {
            let a = read_matrix(&input)?;
            let w = numerical_radius(&a, grid, refine_tol)?;
            emit(json, json!({ "numerical_radius": w }), || w.to_string());
        }
        Command::Bounds { input, v, theta_ref } => {
            let a = read_matrix(&input)?;
            let b = bounds_summary(&a, v, theta_ref)?;
            emit(json, json!(b), || {
                format!(
                    "norm: {}\nnumerical radius: {}\nkittaneh bound: {}\nrefined bound (theta_ref = {}): {}",
                    b.spectral_norm, b.numerical_radius, b.kittaneh_bound, b.theta_ref, b.refined_bound
                )
            });
        }
        Command::AngleProfile { input, v, samples, seed } => {
            let a = read_matrix(&input)?;
            let p = angle_profile(&a, v, samples, seed)?;
            emit(json, json!(p), || {
                let mut s = format!(
                    "samples: {} (skipped {})\ntheta_min: {}\ntheta_max: {}\n",
                    p.samples, p.skipped, p.theta_min, p.theta_max
                );
                for b in &p.histogram {
                    s.push_str(&format!("[{:.4}, {:.4}) {}\n", b.lower, b.upper, b.count));
                }
                s.trim_end().to_string()
            });
        }
        Command::Check { suite, trials, operator_trials, vectors_per_matrix, seed, out, csv, tolerances } => {
            let defaults = SweepConfig::default();
            let mut config = SweepConfig {
                seed,
                suite,
                trials: trials.unwrap_or(defaults.trials),
                operator_trials: operator_trials.unwrap_or(defaults.operator_trials),
                vectors_per_matrix: vectors_per_matrix.unwrap_or(defaults.vectors_per_matrix),
                ..defaults
            };
            for (name, value) in tolerances {
                if name == "all" {
                    config = config.with_uniform_tolerance(value);
                } else {
                    config.tolerances.insert(name, value);
                }
            }
            let summary = run_suite(&config)?;
            if let Some(path) = &out {
                write_report(&summary, path, ReportFormat::Json)?;
            }
            if let Some(path) = &csv {
                write_report(&summary, path, ReportFormat::Csv)?;
            }
            if json {
                print!("{}", summary.to_json()?);
            } else {
                println!("{}", summary_text(&summary));
            }
            if !summary.all_pass() {
                return Err(Failure::Inequality);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inequality) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

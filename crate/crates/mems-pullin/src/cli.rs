//! Command-line front end.
//!
//! Every subcommand follows the same discipline: the full effective
//! configuration (defaults included) is echoed to stderr as one JSON line,
//! the payload goes to stdout or `--out` in CSV or JSON, and a short human
//! summary lands on stderr. Payloads are deterministic for a fixed
//! configuration and version, independent of `--jobs`.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation failure,
//! 3 partially failed sweep.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dynamics::{self, IntegrationOptions, Outcome, Trajectory};
use crate::manifold::{self, ManifoldTrace};
use crate::model::{energy_xy, Params, PhaseState};
use crate::pullin::{self, Method};
use crate::report::{Field, RunReport, Table};
use crate::steady::{self, Equilibria};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "mems-pullin",
    version,
    about = "Pull-in thresholds and phase-plane analysis of a lumped MEMS actuator model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Payload format.
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Write the payload to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cap the worker-thread count for parallel sweeps.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutFormat {
    Csv,
    Json,
}

impl OutFormat {
    fn name(self) -> &'static str {
        match self {
            OutFormat::Csv => "csv",
            OutFormat::Json => "json",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Manifold,
    Trajectory,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Manifold => vec![Method::ManifoldCrossing],
            MethodArg::Trajectory => vec![Method::TrajectoryBisection],
            MethodArg::Both => vec![Method::ManifoldCrossing, Method::TrajectoryBisection],
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Manifold => "manifold",
            MethodArg::Trajectory => "trajectory",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stationary solutions and their linear stability at a given load.
    Equilibria {
        /// Load parameter (proportional to voltage squared).
        #[arg(long)]
        lambda: f64,
        /// Damping used for the stability labels.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate one trajectory and export t, x, y, E samples.
    Simulate {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Initial displacement (must stay above the touchdown surface).
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        /// Initial velocity.
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        /// Integration horizon.
        #[arg(long, default_value_t = 2000.0)]
        t_max: f64,
        /// Relative integration tolerance; absolute is 1/100 of it.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Sample interval; omit to record every accepted step.
        #[arg(long)]
        sample_every: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a parameter point into stable / critical / touchdown.
    Classify {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trace the saddle's stable-manifold branch as (u, phi) samples.
    Manifold {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Trace extent past the saddle; defaults to 10(x2 - x1) + 5.
        #[arg(long)]
        u_max: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dynamic pull-in threshold lambda_d*(alpha): one point or a curve.
    Pullin {
        /// Single damping value.
        #[arg(long, conflicts_with = "alpha_grid")]
        alpha: Option<f64>,
        /// Damping grid as start:stop:step (inclusive).
        #[arg(long)]
        alpha_grid: Option<String>,
        /// Bisection half-width target; defaults to 1e-8 (manifold) or
        /// 1e-6 (trajectory).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Manifold)]
        method: MethodArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a whole (lambda, alpha) grid: the regime map.
    Sweep {
        /// Load grid as start:stop:step (inclusive).
        #[arg(long)]
        lambda_grid: String,
        /// Damping grid as start:stop:step (inclusive).
        #[arg(long)]
        alpha_grid: String,
        #[arg(long, default_value_t = 2000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Phase-plane picture: orbits, equilibria, separatrix, nullcline.
    PhasePortrait {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Starting displacements (released from rest) as start:stop:step.
        #[arg(long, default_value = "-0.9:0.6:0.3")]
        seed_grid: String,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Approach / dwell / collapse durations of a touchdown orbit.
    Residence {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Radius of the ball around the saddle defining the dwell phase.
        #[arg(long, default_value_t = 0.2)]
        saddle_radius: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Equilibria { output, .. }
            | Command::Simulate { output, .. }
            | Command::Classify { output, .. }
            | Command::Manifold { output, .. }
            | Command::Pullin { output, .. }
            | Command::Sweep { output, .. }
            | Command::PhasePortrait { output, .. }
            | Command::Residence { output, .. } => output,
        }
    }
}

/// Parse the arguments, run the command, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.command.output().jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return 1;
        }
        // Only effective once per process; later calls keep the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli.command) {
        Ok(code) => code,
        // A consumer closing the pipe early (`... | head`) is its choice,
        // not a failure of ours.
        Err(Error::Io(io)) if io.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::BadLambda { .. }
        | Error::BadAlpha { .. }
        | Error::OutsideDomain { .. }
        | Error::NonFiniteState { .. }
        | Error::ThresholdDomain { .. }
        | Error::NoSaddle { .. }
        | Error::NoEquilibria { .. }
        | Error::NotAnEquilibrium { .. } => 1,
        Error::BracketFailure { .. }
        | Error::NotTouchdown { .. }
        | Error::SaddleBallMiss { .. }
        | Error::CurveShape(_)
        | Error::Io(_) => 2,
    }
}

/// Inclusive `start:stop:step` grid, or a single scalar as a 1-point grid.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::InvalidInput(format!("grid {spec:?}: {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("expected numbers")))
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [v] if v.is_finite() => Ok(vec![*v]),
        [start, stop, step] => {
            if !(start.is_finite() && stop.is_finite() && step.is_finite() && *step > 0.0) {
                return Err(bad("need finite start:stop:step with step > 0"));
            }
            if stop < start {
                return Err(bad("stop must not be below start"));
            }
            let n = ((stop - start) / step + 0.5).floor() as i64;
            if n >= 100_000 {
                return Err(bad("more than 100000 points"));
            }
            Ok((0..=n).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(bad("expected VALUE or start:stop:step")),
    }
}

fn echo_config(config: &serde_json::Value) {
    eprintln!("config: {config}");
}

fn emit(output: &OutputArgs, table: &Table, report: &RunReport) -> Result<()> {
    let text = match output.format {
        OutFormat::Csv => table.to_csv(),
        OutFormat::Json => report.to_json_string(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn output_config(output: &OutputArgs) -> serde_json::Value {
    json!({
        "format": output.format.name(),
        "out": output.out.as_ref().map(|p| p.display().to_string()),
        "jobs": output.jobs,
    })
}

fn options_for(t_max: f64, tol: f64, sample_every: Option<f64>) -> Result<IntegrationOptions> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("--tol must be positive, got {tol}")));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidInput(format!("--t-max must be positive, got {t_max}")));
    }
    if let Some(d) = sample_every {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidInput(format!(
                "--sample-every must be positive, got {d}"
            )));
        }
    }
    Ok(IntegrationOptions {
        rtol: tol,
        atol: 1e-2 * tol,
        t_max,
        sample_every,
        ..IntegrationOptions::default()
    })
}

fn outcome_fields(outcome: &Outcome) -> (Field, Field) {
    let label = Field::Text(outcome.label().to_string());
    let t_td = match outcome {
        Outcome::Touchdown { t_td } => Field::Num(*t_td),
        _ => Field::Empty,
    };
    (label, t_td)
}

fn execute(cmd: &Command) -> Result<i32> {
    let start = Instant::now();
    match cmd {
        Command::Equilibria { lambda, alpha, output } => {
            let config = json!({
                "command": "equilibria",
                "lambda": lambda,
                "alpha": alpha,
                "output": output_config(output),
            });
            echo_config(&config);
            let eq = steady::equilibria(*lambda)?;
            let params = Params::new(*lambda, *alpha)?;
            let points: Vec<f64> = match eq {
                Equilibria::Pair { x1, x2 } => vec![x1, x2],
                Equilibria::Degenerate { x } => vec![x],
                Equilibria::None => vec![],
            };
            let reports: Vec<_> = points
                .iter()
                .map(|&x| steady::stability(x, &params))
                .collect::<Result<_>>()?;

            let mut table = Table::new(vec![
                "x",
                "label",
                "mu_plus_re",
                "mu_plus_im",
                "mu_minus_re",
                "mu_minus_im",
                "residual",
            ]);
            for r in &reports {
                table.push_row(vec![
                    Field::Num(r.x),
                    Field::Text(r.label.to_string()),
                    Field::Num(r.mu_plus.re),
                    Field::Num(r.mu_plus.im),
                    Field::Num(r.mu_minus.re),
                    Field::Num(r.mu_minus.im),
                    Field::Num(r.residual),
                ]);
            }
            match &eq {
                Equilibria::Pair { x1, x2 } => {
                    eprintln!("pair: x1 = {x1} (saddle), x2 = {x2}");
                }
                Equilibria::Degenerate { x } => {
                    table.note("degenerate fold point");
                    eprintln!("degenerate equilibrium at x = {x}");
                }
                Equilibria::None => {
                    table.note("no stationary solutions (lambda > 4/27)");
                    eprintln!("no stationary solutions (lambda > 4/27)");
                }
            }
            let results = json!({ "equilibria": eq, "reports": reports });
            let report = RunReport::new(config, results, start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(0)
        }

        Command::Simulate {
            lambda,
            alpha,
            x0,
            y0,
            t_max,
            tol,
            sample_every,
            output,
        } => {
            let config = json!({
                "command": "simulate",
                "lambda": lambda,
                "alpha": alpha,
                "x0": x0,
                "y0": y0,
                "t_max": t_max,
                "rtol": tol,
                "atol": 1e-2 * tol,
                "sample_every": sample_every,
                "output": output_config(output),
            });
            echo_config(&config);
            let params = Params::new(*lambda, *alpha)?;
            let initial = PhaseState::new(0.0, *x0, *y0)?;
            let opts = options_for(*t_max, *tol, *sample_every)?;
            let traj = dynamics::integrate(&params, initial, &opts);
            let table = trajectory_table(&traj, *lambda)?;
            eprintln!("{} samples, outcome: {}", traj.samples.len(), traj.outcome);
            let report =
                RunReport::new(config, serde_json::to_value(&traj).expect("serializable"),
                    start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(0)
        }

        Command::Classify { lambda, alpha, t_max, tol, output } => {
            let config = json!({
                "command": "classify",
                "lambda": lambda,
                "alpha": alpha,
                "t_max": t_max,
                "rtol": tol,
                "atol": 1e-2 * tol,
                "output": output_config(output),
            });
            echo_config(&config);
            let params = Params::new(*lambda, *alpha)?;
            let opts = options_for(*t_max, *tol, None)?;
            let outcome = dynamics::classify(&params, &opts);
            let mut table = Table::new(vec!["lambda", "alpha", "outcome", "t_touchdown"]);
            let (label, t_td) = outcome_fields(&outcome);
            table.push_row(vec![Field::Num(*lambda), Field::Num(*alpha), label, t_td]);
            table.note(format!("outcome: {outcome}"));
            eprintln!("outcome: {outcome}");
            let code = match &outcome {
                Outcome::BudgetExhausted { .. } => 2,
                _ => 0,
            };
            let report = RunReport::new(config, json!({ "outcome": outcome }),
                start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(code)
        }

        Command::Manifold { lambda, alpha, u_max, output } => {
            let resolved_u_max = match u_max {
                Some(u) => *u,
                None => manifold::default_u_max(*lambda)?,
            };
            let config = json!({
                "command": "manifold",
                "lambda": lambda,
                "alpha": alpha,
                "u_max": resolved_u_max,
                "output": output_config(output),
            });
            echo_config(&config);
            let params = Params::new(*lambda, *alpha)?;
            let trace = manifold::trace_stable_manifold(&params, resolved_u_max)?;
            let table = manifold_table(&trace);
            match trace.x_bar() {
                Some(xb) => eprintln!("crossing at x_bar = {xb}"),
                None => eprintln!("no crossing before u_max = {resolved_u_max}"),
            }
            let report = RunReport::new(config,
                serde_json::to_value(&trace).expect("serializable"),
                start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(0)
        }

        Command::Pullin { alpha, alpha_grid, tol, method, output } => {
            let grid = match (alpha, alpha_grid) {
                (Some(a), None) => vec![*a],
                (None, Some(g)) => parse_grid(g)?,
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "pullin needs --alpha or --alpha-grid".into(),
                    ))
                }
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let methods = method.methods();
            let config = json!({
                "command": "pullin",
                "alpha_grid": grid,
                "tol": tol,
                "method": method.name(),
                "output": output_config(output),
            });
            echo_config(&config);

            let mut table = Table::new(vec!["alpha", "lambda_d", "half_width", "method"]);
            let mut curves = Vec::new();
            let mut any_points = false;
            let mut any_failures = false;
            for m in methods {
                let curve = pullin::sweep_curve_with(&grid, tol.unwrap_or(m.default_tol()), m)?;
                for p in &curve.points {
                    table.push_row(vec![
                        Field::Num(p.alpha),
                        Field::Num(p.lambda_d),
                        Field::Num(p.half_width),
                        Field::Text(m.to_string()),
                    ]);
                }
                for f in &curve.failures {
                    table.note(format!("failed: method {m}, alpha {}: {}", f.alpha, f.error));
                }
                eprintln!(
                    "method {m}: {} points, {} failures",
                    curve.points.len(),
                    curve.failures.len()
                );
                any_points |= !curve.points.is_empty();
                any_failures |= !curve.failures.is_empty();
                curves.push(curve);
            }
            let code = match (any_failures, any_points) {
                (false, _) => 0,
                (true, true) => 3,
                (true, false) => 2,
            };
            let mut report = RunReport::new(config,
                json!({ "curves": curves }), start.elapsed().as_millis());
            report.stats.failures = curves
                .iter()
                .flat_map(|c| c.failures.iter())
                .map(|f| format!("alpha {}: {}", f.alpha, f.error))
                .collect();
            emit(output, &table, &report)?;
            Ok(code)
        }

        Command::Sweep { lambda_grid, alpha_grid, t_max, tol, output } => {
            let lambdas = parse_grid(lambda_grid)?;
            let alphas = parse_grid(alpha_grid)?;
            if lambdas.len().saturating_mul(alphas.len()) > 100_000 {
                return Err(Error::InvalidInput(
                    "regime map larger than 100000 points".into(),
                ));
            }
            let config = json!({
                "command": "sweep",
                "lambda_grid": lambdas,
                "alpha_grid": alphas,
                "t_max": t_max,
                "rtol": tol,
                "atol": 1e-2 * tol,
                "output": output_config(output),
            });
            echo_config(&config);
            let opts = options_for(*t_max, *tol, None)?;
            let pairs: Vec<(f64, f64)> = lambdas
                .iter()
                .flat_map(|&l| alphas.iter().map(move |&a| (l, a)))
                .collect();
            for &(l, a) in &pairs {
                // Validate before spawning work so usage errors stay crisp.
                Params::new(l, a)?;
            }
            use rayon::prelude::*;
            let outcomes: Vec<Outcome> = pairs
                .par_iter()
                .map(|&(l, a)| {
                    let params = Params::new(l, a).expect("validated above");
                    dynamics::classify(&params, &opts)
                })
                .collect();

            let mut table = Table::new(vec!["lambda", "alpha", "outcome", "t_touchdown"]);
            let mut counts = [0usize; 4];
            for (&(l, a), outcome) in pairs.iter().zip(&outcomes) {
                let (label, t_td) = outcome_fields(outcome);
                table.push_row(vec![Field::Num(l), Field::Num(a), label, t_td]);
                counts[match outcome {
                    Outcome::ConvergedStable { .. } => 0,
                    Outcome::ConvergedSaddle { .. } => 1,
                    Outcome::Touchdown { .. } => 2,
                    Outcome::BudgetExhausted { .. } => 3,
                }] += 1;
            }
            let summary = format!(
                "{} points: {} stable, {} saddle, {} touchdown, {} unresolved",
                pairs.len(), counts[0], counts[1], counts[2], counts[3]
            );
            table.note(summary.clone());
            eprintln!("{summary}");
            let points: Vec<serde_json::Value> = pairs
                .iter()
                .zip(&outcomes)
                .map(|(&(l, a), o)| json!({ "lambda": l, "alpha": a, "outcome": o }))
                .collect();
            let report = RunReport::new(config, json!({ "points": points }),
                start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(if counts[3] > 0 { 3 } else { 0 })
        }

        Command::PhasePortrait { lambda, alpha, seed_grid, t_max, output } => {
            let seeds = parse_grid(seed_grid)?;
            let config = json!({
                "command": "phase-portrait",
                "lambda": lambda,
                "alpha": alpha,
                "seed_grid": seeds,
                "t_max": t_max,
                "output": output_config(output),
            });
            echo_config(&config);
            let params = Params::new(*lambda, *alpha)?;
            let opts = options_for(*t_max, 1e-10, Some(t_max / 1000.0))?;

            let mut table = Table::new(vec!["series", "t", "x", "y"]);
            let mut series_json = Vec::new();

            // Orbits released from rest on the seed grid.
            use rayon::prelude::*;
            let valid_seeds: Vec<f64> = seeds
                .iter()
                .copied()
                .filter(|&x0| x0 > -1.0 + 1e-3)
                .collect();
            if valid_seeds.len() < seeds.len() {
                eprintln!(
                    "skipping {} seed(s) at or below the touchdown surface",
                    seeds.len() - valid_seeds.len()
                );
            }
            let orbits: Vec<Trajectory> = valid_seeds
                .par_iter()
                .map(|&x0| {
                    let s0 = PhaseState::new(0.0, x0, 0.0).expect("seed validated");
                    dynamics::integrate(&params, s0, &opts)
                })
                .collect();
            for (i, traj) in orbits.iter().enumerate() {
                let name = format!("orbit-{i}");
                for s in &traj.samples {
                    table.push_row(vec![
                        Field::Text(name.clone()),
                        Field::Num(s.t()),
                        Field::Num(s.x()),
                        Field::Num(s.y()),
                    ]);
                }
                series_json.push(json!({
                    "name": name,
                    "x0": valid_seeds[i],
                    "outcome": traj.outcome,
                    "points": traj.samples.iter()
                        .map(|s| [s.t(), s.x(), s.y()])
                        .collect::<Vec<_>>(),
                }));
            }

            // Equilibria, when they exist.
            let eq = steady::equilibria(*lambda)?;
            let eq_points: Vec<f64> = match eq {
                Equilibria::Pair { x1, x2 } => vec![x1, x2],
                Equilibria::Degenerate { x } => vec![x],
                Equilibria::None => vec![],
            };
            for &x in &eq_points {
                table.push_row(vec![
                    Field::Text("equilibrium".into()),
                    Field::Empty,
                    Field::Num(x),
                    Field::Num(0.0),
                ]);
            }
            series_json.push(json!({
                "name": "equilibrium",
                "points": eq_points.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>(),
            }));

            // The separatrix branch, when a saddle exists.
            if matches!(eq, Equilibria::Pair { .. }) {
                let trace =
                    manifold::trace_stable_manifold(&params, manifold::default_u_max(*lambda)?)?;
                let pts: Vec<[f64; 2]> = trace.original_coords().map(|(x, y)| [x, y]).collect();
                for p in &pts {
                    table.push_row(vec![
                        Field::Text("stable-manifold".into()),
                        Field::Empty,
                        Field::Num(p[0]),
                        Field::Num(p[1]),
                    ]);
                }
                series_json.push(json!({ "name": "stable-manifold", "points": pts }));
            }

            // The slow nullcline y = -f(x)/alpha, defined for alpha > 0.
            if *alpha > 0.0 {
                let n = 300;
                let (lo, hi) = (-0.95, 0.55);
                let mut pts = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let x = lo + (hi - lo) * k as f64 / n as f64;
                    let y = -crate::model::force(x, *lambda)? / alpha;
                    pts.push([x, y]);
                    table.push_row(vec![
                        Field::Text("nullcline".into()),
                        Field::Empty,
                        Field::Num(x),
                        Field::Num(y),
                    ]);
                }
                series_json.push(json!({ "name": "nullcline", "points": pts }));
            }

            eprintln!("{} series", series_json.len());
            let report = RunReport::new(config, json!({ "series": series_json }),
                start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(0)
        }

        Command::Residence { lambda, alpha, saddle_radius, output } => {
            let config = json!({
                "command": "residence",
                "lambda": lambda,
                "alpha": alpha,
                "saddle_radius": saddle_radius,
                "output": output_config(output),
            });
            echo_config(&config);
            let params = Params::new(*lambda, *alpha)?;
            let profile = dynamics::residence_profile(&params, *saddle_radius)?;
            let mut table = Table::new(vec![
                "saddle_radius",
                "t_approach",
                "t_dwell",
                "t_collapse",
                "t_touchdown",
            ]);
            table.push_row(vec![
                Field::Num(profile.saddle_radius),
                Field::Num(profile.t_approach),
                Field::Num(profile.t_dwell),
                Field::Num(profile.t_collapse),
                Field::Num(profile.t_touchdown),
            ]);
            eprintln!(
                "approach {}, dwell {}, collapse {}",
                profile.t_approach, profile.t_dwell, profile.t_collapse
            );
            let report = RunReport::new(config,
                serde_json::to_value(profile).expect("serializable"),
                start.elapsed().as_millis());
            emit(output, &table, &report)?;
            Ok(0)
        }
    }
}

fn trajectory_table(traj: &Trajectory, lambda: f64) -> Result<Table> {
    let mut table = Table::new(vec!["t", "x", "y", "E"]);
    for s in &traj.samples {
        table.push_row(vec![
            Field::Num(s.t()),
            Field::Num(s.x()),
            Field::Num(s.y()),
            Field::Num(energy_xy(s.x(), s.y(), lambda)?),
        ]);
    }
    table.note(format!("outcome: {}", traj.outcome));
    table.note(format!(
        "steps: {} accepted, {} rejected, min_gap: {}",
        traj.stats.steps, traj.stats.rejected_steps, traj.stats.min_gap
    ));
    Ok(table)
}

fn manifold_table(trace: &ManifoldTrace) -> Table {
    let mut table = Table::new(vec!["u", "phi"]);
    for (u, phi) in trace.samples() {
        table.push_row(vec![Field::Num(u), Field::Num(phi)]);
    }
    table.note(format!("lambda: {}", trace.lambda()));
    table.note(format!("alpha: {}", trace.alpha()));
    table.note(format!("x1: {}", trace.x1()));
    table.note(format!("mu_plus: {}", trace.mu_plus()));
    match (trace.u_crossing(), trace.x_bar()) {
        (Some(ub), Some(xb)) => {
            table.note(format!("u_crossing: {ub}"));
            table.note(format!("x_bar: {xb}"));
        }
        _ => table.note(format!("no crossing before u_max: {}", trace.u_max())),
    }
    table
}

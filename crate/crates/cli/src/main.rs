//! `arccap`: capacities of circular-arc and parallel-segment condensers.
//!
//! Exit codes: 0 success, 2 bad configuration, 3 numerical failure,
//! 4 a verification criterion failed.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use arccap::arc_map::{trace_boundary, RectangleMapParams};
use arccap::asymptotics::{arc_series, linear_series, SeriesBreakdown};
use arccap::convergence::{arc_sweep, linear_sweep, SweepRow};
use arccap::elliptic::EllipticContext;
use arccap::exact::{normalize, sc_solve, solve_normalized, ArcCondenser, NormalizedGeometry};
use arccap::oracle_fd::{fd_solve, FdProblem};
use arccap::{verify, Error};

/// Gap-to-length ratio above which an expansion is flagged as outside its regime.
const REGIME_RATIO: f64 = 0.1;

#[derive(Parser, Debug)]
#[command(
    name = "arccap",
    version,
    about = "Conformal capacity of circular-arc and parallel-segment condensers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. Defaults to JSON for single results, CSV for sweeps and
    /// traces, and plain pass/fail lines for verify.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact capacity of an arc condenser.
    Exact(GeomArgs),
    /// Asymptotic expansion with its per-term breakdown.
    Series(GeomArgs),
    /// Exact capacity of the parallel-segment condenser.
    Sc(LinearArgs),
    /// Finite-difference capacity estimate.
    Oracle(OracleArgs),
    /// Exact against series over log-spaced gaps.
    Sweep(SweepArgs),
    /// Run the acceptance criteria.
    Verify,
    /// Boundary trace of the rectangle map.
    Trace(TraceArgs),
}

#[derive(Args, Debug, Clone)]
struct GeomArgs {
    /// Mid-arc radius ρ.
    #[arg(long)]
    rho: Option<f64>,
    /// Arc length L of each plate.
    #[arg(long = "arc-length")]
    arc_length: Option<f64>,
    /// Gap h between the plates.
    #[arg(long)]
    gap: Option<f64>,
    /// Use the parallel-segment condenser (with --L and --gap).
    #[arg(long)]
    linear: bool,
    /// Segment length for --linear.
    #[arg(long = "L")]
    l: Option<f64>,
    /// Half-angle γ of the reduced condenser (with --R instead of ρ, L, h).
    #[arg(long)]
    gamma: Option<f64>,
    /// Radius ratio R of the reduced condenser.
    #[arg(long = "R")]
    r: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct LinearArgs {
    #[arg(long = "L")]
    l: f64,
    #[arg(long)]
    gap: f64,
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[command(flatten)]
    geom: GeomArgs,
    /// Grid size as NRxNT.
    #[arg(long, default_value = "256x256")]
    grid: String,
    /// Truncation radius; defaults to 50 R.
    #[arg(long = "r-out")]
    r_out: Option<f64>,
    /// Write the potential as CSV (r, theta, omega) to this file.
    #[arg(long = "dump-field")]
    dump_field: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long = "arc-length")]
    arc_length: Option<f64>,
    #[arg(long)]
    linear: bool,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long = "h-min")]
    h_min: f64,
    #[arg(long = "h-max")]
    h_max: f64,
    #[arg(long, default_value_t = 12)]
    points: usize,
}

#[derive(Args, Debug, Clone)]
struct TraceArgs {
    /// Radius ratio R.
    #[arg(long = "R")]
    r: f64,
    /// Capacity y fixing the rectangle ω₁/ω₂ = y.
    #[arg(long, conflicts_with = "gamma")]
    capacity: Option<f64>,
    /// Half-angle γ; the capacity is solved for.
    #[arg(long)]
    gamma: Option<f64>,
    /// Samples per side.
    #[arg(long, default_value_t = 200)]
    points: usize,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GeometryInvalid(_)
            | Error::ArgOutOfRange(_)
            | Error::ModulusOutOfRange(_)
            | Error::NomeOutOfRange(_)
            | Error::OutsideLemmaRange { .. } => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numerical(format!("{e:#}"))
    }
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Config(format!("missing --{flag}")))
}

/// 17 significant digits.
fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serialises")
}

fn arc_geometry(g: &GeomArgs) -> Result<(NormalizedGeometry, Option<ArcCondenser>), Failure> {
    if let (Some(gamma), Some(r)) = (g.gamma, g.r) {
        return Ok((NormalizedGeometry::from_gamma_r(gamma, r)?, None));
    }
    let c = ArcCondenser {
        rho: need(g.rho, "rho")?,
        l: need(g.arc_length, "arc-length")?,
        h: need(g.gap, "gap")?,
    };
    Ok((normalize(c)?, Some(c)))
}

fn series_json(s: &SeriesBreakdown, ratio: f64) -> Value {
    let mut v = to_json(s);
    if ratio > REGIME_RATIO {
        v["warning"] = json!(format!(
            "gap ratio {ratio} exceeds {REGIME_RATIO}: outside the asymptotic regime, the expansion is not reliable here"
        ));
    }
    v
}

fn series_csv(s: &SeriesBreakdown) -> String {
    let mut out = String::from("label,value\n");
    for t in &s.terms {
        out.push_str(&format!("\"{}\",{}\n", t.label, num(t.value)));
    }
    out.push_str(&format!("\"total\",{}\n", num(s.total)));
    out
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("h,cap_exact,cap_series,abs_err,slope_running\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            num(r.h),
            num(r.cap_exact),
            num(r.cap_series),
            num(r.abs_err),
            num(r.slope_running)
        ));
    }
    out
}

fn record_csv(pairs: &[(&str, f64)]) -> String {
    let head: Vec<&str> = pairs.iter().map(|p| p.0).collect();
    let vals: Vec<String> = pairs.iter().map(|p| num(p.1)).collect();
    format!("{}\n{}\n", head.join(","), vals.join(","))
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Config(format!("--grid expects NRxNT, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let tabular = matches!(
        cli.command,
        Command::Sweep(_) | Command::Trace(_) | Command::Verify
    );
    let fmt = cli
        .format
        .unwrap_or(if tabular { Format::Csv } else { Format::Json });
    match &cli.command {
        Command::Exact(g) => {
            if g.linear {
                return run_sc(need(g.l, "L")?, need(g.gap, "gap")?, fmt);
            }
            let (geom, _) = arc_geometry(g)?;
            let res = solve_normalized(&geom)?;
            Ok(match fmt {
                Format::Json => {
                    json!({ "result": to_json(&res), "geometry": to_json(&geom) }).to_string()
                }
                Format::Csv => record_csv(&[
                    ("value", res.value),
                    ("residual", res.residual),
                    ("iterations", res.iterations as f64),
                    ("gamma", geom.gamma),
                    ("R", geom.r),
                ]),
            })
        }
        Command::Series(g) => {
            let (s, ratio) = if g.linear {
                let (l, h) = (need(g.l, "L")?, need(g.gap, "gap")?);
                (linear_series(l, h)?, h / l)
            } else {
                let (rho, l, h) = (
                    need(g.rho, "rho")?,
                    need(g.arc_length, "arc-length")?,
                    need(g.gap, "gap")?,
                );
                (arc_series(rho, l, h)?, (h / l).max(h / rho))
            };
            Ok(match fmt {
                Format::Json => series_json(&s, ratio).to_string(),
                Format::Csv => series_csv(&s),
            })
        }
        Command::Sc(a) => run_sc(a.l, a.gap, fmt),
        Command::Oracle(o) => {
            let (geom, _) = if o.geom.gamma.is_some() && o.geom.r.is_some() {
                // γ = π (full circles) is allowed here, unlike the exact solver
                let (gamma, r) = (
                    o.geom.gamma.unwrap_or_default(),
                    o.geom.r.unwrap_or_default(),
                );
                (
                    NormalizedGeometry {
                        gamma,
                        r,
                        ln_r: r.ln(),
                        delta: r.ln().tanh(),
                        epsilon: r - 1.0,
                    },
                    None,
                )
            } else {
                arc_geometry(&o.geom)?
            };
            let (n_r, n_t) = parse_grid(&o.grid)?;
            let mut p = FdProblem::new(geom.gamma, geom.r, n_r, n_t);
            if let Some(r_out) = o.r_out {
                p = p.with_r_out(r_out);
            }
            let sol = fd_solve(&p)?;
            if let Some(path) = &o.dump_field {
                fs::write(path, sol.field.to_csv())
                    .with_context(|| format!("writing field to {}", path.display()))?;
            }
            Ok(match fmt {
                Format::Json => json!({
                    "value": sol.cap_estimate,
                    "method": "oracle",
                    "residual": sol.grid_residual,
                    "iterations": sol.iterations,
                    "energy": sol.energy,
                    "problem": to_json(&p),
                })
                .to_string(),
                Format::Csv => record_csv(&[
                    ("value", sol.cap_estimate),
                    ("residual", sol.grid_residual),
                    ("energy", sol.energy),
                    ("iterations", sol.iterations as f64),
                ]),
            })
        }
        Command::Sweep(s) => {
            if s.points < 2 || !(s.h_min < s.h_max) {
                return Err(Failure::Config(
                    "sweep needs --points >= 2 and --h-min < --h-max".into(),
                ));
            }
            let rows = if s.linear {
                linear_sweep(need(s.l, "L")?, s.h_min, s.h_max, s.points)?
            } else {
                arc_sweep(
                    need(s.rho, "rho")?,
                    need(s.arc_length, "arc-length")?,
                    s.h_min,
                    s.h_max,
                    s.points,
                )?
            };
            Ok(match fmt {
                Format::Csv => sweep_csv(&rows),
                Format::Json => to_json(&rows).to_string(),
            })
        }
        Command::Verify => {
            let outcomes = verify::run_all();
            let failed: Vec<u32> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.number)
                .collect();
            let text = match fmt {
                Format::Json => to_json(&outcomes).to_string(),
                Format::Csv => {
                    let mut t = String::new();
                    for o in &outcomes {
                        t.push_str(&o.line());
                        t.push('\n');
                    }
                    t
                }
            };
            if failed.is_empty() {
                Ok(text)
            } else {
                // still emit the report before failing
                emit(cli, &text).map_err(|e| Failure::Numerical(e.to_string()))?;
                Err(Failure::Verification(format!(
                    "criteria failed: {failed:?}"
                )))
            }
        }
        Command::Trace(t) => {
            let y = match (t.capacity, t.gamma) {
                (Some(y), _) => y,
                (None, Some(gamma)) => {
                    solve_normalized(&NormalizedGeometry::from_gamma_r(gamma, t.r)?)?.value
                }
                (None, None) => {
                    return Err(Failure::Config("trace needs --capacity or --gamma".into()))
                }
            };
            let ctx = EllipticContext::from_capacity(y, t.r)?;
            let params = RectangleMapParams::from_context(&ctx)?;
            let tr = trace_boundary(&params, t.points)?;
            Ok(match fmt {
                Format::Csv => tr.to_csv(),
                Format::Json => json!({
                    "params": to_json(&params),
                    "capacity": y,
                    "gamma_est": tr.gamma_est,
                    "t_max": tr.t_max,
                    "alpha_pre": tr.alpha_pre,
                    "beta_pre": tr.beta_pre,
                    "samples": tr.outer_arc.len(),
                })
                .to_string(),
            })
        }
    }
}

fn run_sc(l: f64, h: f64, fmt: Format) -> Result<String, Failure> {
    let res = sc_solve(l, h)?;
    Ok(match fmt {
        Format::Json => json!({ "result": to_json(&res), "L": l, "h": h }).to_string(),
        Format::Csv => record_csv(&[
            ("value", res.value),
            ("residual", res.residual),
            ("iterations", res.iterations as f64),
        ]),
    })
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match emit(&cli, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(3)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

//! `medax` — germ-local medial axis analysis of plane curves.
//!
//! Subcommands: `classify` (symbolic verdicts and predictions), `scan`
//! (grid oracle, CSV + SVG), `trace` (conflict-set tracer per branch
//! pair), `verify` (full prediction-versus-observation report).
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or parse error, 3 inconclusive.

mod csv_out;
mod svg_out;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use medax_core::curve::parse_curve_spec;
use medax_core::germ::{self, Contribution};
use medax_core::medial::{self, GridScanConfig, TraceConfig};
use medax_core::verify::{run_verification, ClaimVerdict, VerifyConfig};
use medax_core::{DirectionFan, PlaneCurveGerm};

#[derive(Parser)]
#[command(
    name = "medax",
    version,
    about = "Medial axis laboratory for plane-curve germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify branches and print the symbolic predictions.
    Classify(CommonArgs),
    /// Run the grid oracle and emit sample CSV plus an SVG plot.
    Scan(CommonArgs),
    /// March the conflict set of every consecutive branch pair.
    Trace(CommonArgs),
    /// Run the full verification pipeline and report per-claim verdicts.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Curve-spec file.
    #[arg(long)]
    curve: PathBuf,
    /// Analysis window radius (default: half the curve domain).
    #[arg(long)]
    window: Option<f64>,
    /// Grid resolution per axis.
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    /// March step of the tracer (default: window/128).
    #[arg(long)]
    step: Option<f64>,
    /// Number of innermost annuli used by the fan estimator.
    #[arg(long, default_value_t = 8)]
    annuli: usize,
    /// Refinement tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output directory for CSV/SVG artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl CommonArgs {
    fn load_curve(&self) -> Result<PlaneCurveGerm> {
        let text = fs::read_to_string(&self.curve)
            .with_context(|| format!("cannot read curve file {}", self.curve.display()))?;
        let curve = parse_curve_spec(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", self.curve.display()))?;
        Ok(curve)
    }

    fn window_for(&self, curve: &PlaneCurveGerm) -> Result<f64> {
        let half = curve.min_domain_length() / 2.0;
        let w = self.window.unwrap_or(half);
        if !(w > 0.0) || w > half * (1.0 + 1e-12) {
            anyhow::bail!("window must lie in (0, {half}], got {w}");
        }
        if !(self.tol > 0.0) {
            anyhow::bail!("tolerance must be positive, got {}", self.tol);
        }
        if self.resolution < 64 {
            anyhow::bail!("resolution must be at least 64, got {}", self.resolution);
        }
        Ok(w)
    }

    fn label(&self) -> String {
        self.curve
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.curve.display().to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Trace(args) => cmd_trace(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Contribution flags used when only predictions are available: a region
/// counts unless the theory rules it out.
fn assumed_contributing(curve: &PlaneCurveGerm) -> Result<Vec<bool>> {
    if curve.branch_count() == 1 {
        return Ok(vec![germ::predict_reach(curve)?]);
    }
    let regions = germ::predict_regions(curve)?;
    Ok(regions
        .iter()
        .map(|r| r.contributing_predicted != Contribution::No)
        .collect())
}

fn predicted_fan(curve: &PlaneCurveGerm) -> Result<DirectionFan> {
    let flags = assumed_contributing(curve)?;
    Ok(germ::predict_tangent_cone(curve, &flags)?)
}

fn fan_text(fan: &DirectionFan) -> String {
    let degs: Vec<String> = fan.angles_deg().iter().map(|d| format!("{d:.3}")).collect();
    format!("[{}]", degs.join(", "))
}

fn cmd_classify(args: &CommonArgs) -> Result<ExitCode> {
    let curve = args.load_curve()?;
    for (i, branch) in curve.branches().iter().enumerate() {
        let v = germ::classify_superquadratic(branch, i);
        match v.leading {
            Some((a, e)) => {
                let alpha = if e.is_integer() {
                    format!("{}", e.numer())
                } else {
                    format!("{}/{}", e.numer(), e.denom())
                };
                println!(
                    "branch {i}: rotation {:.12} rad, leading {a}*t^({alpha}), superquadratic: {} (α={alpha})",
                    branch.rotation(),
                    if v.superquadratic { "yes" } else { "no" },
                );
            }
            None => println!(
                "branch {i}: rotation {:.12} rad, identically zero, superquadratic: no",
                branch.rotation()
            ),
        }
    }
    if curve.branch_count() >= 2 {
        for region in germ::predict_regions(&curve)? {
            let necessary = if region.oriented_angle > std::f64::consts::PI {
                if region.necessary_condition_met {
                    " (necessary condition met)"
                } else {
                    " (necessary condition fails)"
                }
            } else {
                ""
            };
            println!(
                "region D(G{}, G{}): oriented angle {:.6} deg, predicted contribution: {}{}",
                region.pair.0,
                region.pair.1,
                region.oriented_angle.to_degrees(),
                region.contributing_predicted,
                necessary,
            );
        }
    } else {
        println!(
            "reach prediction: {}",
            if germ::predict_reach(&curve)? {
                "medial axis reaches the origin"
            } else {
                "medial axis bounded away from the origin"
            }
        );
    }
    println!(
        "predicted fan (deg, regions assumed contributing unless ruled out): {}",
        fan_text(&predicted_fan(&curve)?)
    );
    Ok(ExitCode::SUCCESS)
}

fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, content).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn cmd_scan(args: &CommonArgs) -> Result<ExitCode> {
    let curve = args.load_curve()?;
    let window = args.window_for(&curve)?;
    let mut cfg = GridScanConfig::new(window, args.resolution);
    cfg.tol = args.tol;
    let samples = medial::grid_medial_scan(&curve, &cfg)?;
    let fan = predicted_fan(&curve)?;

    let csv_path = write_artifact(&args.out, "scan.csv", &csv_out::samples_to_csv(&samples))?;
    let svg = svg_out::render_scan(&curve, &samples, &fan, window);
    let svg_path = write_artifact(&args.out, "scan.svg", &svg)?;
    println!(
        "scanned {} at window {:.6e}, resolution {}: {} medial samples",
        args.label(),
        window,
        args.resolution,
        samples.len()
    );
    println!("wrote {}", csv_path.display());
    println!("wrote {}", svg_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(args: &CommonArgs) -> Result<ExitCode> {
    let curve = args.load_curve()?;
    if curve.branch_count() < 2 {
        anyhow::bail!("trace needs at least two branches; use scan for single-branch curves");
    }
    let window = args.window_for(&curve)?;
    let step = args.step.unwrap_or(window / 128.0);
    let mut cfg = TraceConfig::new(window, step);
    cfg.tol = args.tol;
    let order = curve.cyclic_order().to_vec();
    for pos in 0..order.len() {
        let i = order[pos];
        let j = order[(pos + 1) % order.len()];
        let trace = medial::trace_conflict_set(&curve, (i, j), &cfg)?;
        let name = format!("trace_{i}_{j}.csv");
        let path = write_artifact(&args.out, &name, &csv_out::samples_to_csv(&trace.polyline))?;
        println!(
            "pair (G{i}, G{j}): {} samples from radius {:.6e}, termination {:?}; wrote {}",
            trace.polyline.len(),
            trace.start_radius,
            trace.termination,
            path.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &CommonArgs) -> Result<ExitCode> {
    let curve = args.load_curve()?;
    let window = args.window_for(&curve)?;
    let mut cfg = VerifyConfig::for_curve(&curve);
    cfg.window_radius = window;
    cfg.resolution = args.resolution;
    cfg.annuli = args.annuli.max(1);
    cfg.tol = args.tol;
    let report = run_verification(&curve, &args.label(), &cfg)?;
    print!("{}", report.render_text());
    let path = write_artifact(&args.out, "verify.csv", &report.render_csv())?;
    println!("wrote {}", path.display());
    Ok(match report.overall() {
        ClaimVerdict::Pass => ExitCode::SUCCESS,
        ClaimVerdict::Fail => ExitCode::from(1),
        ClaimVerdict::Inconclusive => ExitCode::from(3),
    })
}

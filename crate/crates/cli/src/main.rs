//! `corner-demo`: certify corner shortcuts per step, verify certificate files,
//! and emit algebra descriptions.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use corner_core::certify::{load_certificate_file, run_demo, verify, ErrorRecord, RunConfig};
use corner_core::rational::{parse_rational, to_f64};
use corner_core::shortcut::{EtaChoice, ShortcutOptions};
use corner_core::{build_free_nilpotent, make_norm, BigRational, Error, NormRequest};

/// Exit code when a run or a verification yields no certificate.
const EXIT_NOT_CERTIFIED: u8 = 1;
/// Exit code for malformed input or any other error.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "corner-demo", version, about = "Certified shortcuts of corners in Carnot groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify shortcuts for one step or a range of steps.
    Run(RunArgs),
    /// Re-verify a certificate file from scratch.
    Verify {
        certificate: PathBuf,
    },
    /// Write the description of a free nilpotent algebra.
    Algebra {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        step: usize,
        #[arg(long)]
        emit: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Step `n` or inclusive range `a..b`.
    #[arg(long)]
    step: String,
    /// `euclidean` or `lp:<p/q>`.
    #[arg(long, default_value = "euclidean")]
    norm: String,
    /// First generator, comma-separated first-layer coordinates.
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x2: Option<String>,
    /// `auto` or a fixed rational for the outermost step.
    #[arg(long, default_value = "auto")]
    eta: String,
    /// Required margin at the outermost step (default: strictly positive).
    #[arg(long)]
    margin: Option<String>,
    /// Tolerance for certified norm bounds.
    #[arg(long)]
    tolerance: Option<String>,
    /// Directory for certificates and report.json.
    #[arg(long, env = "CORNER_DEMO_OUT")]
    out: Option<PathBuf>,
}

fn rational(text: &str) -> anyhow::Result<BigRational> {
    parse_rational(text).with_context(|| format!("bad rational {text:?}"))
}

fn parse_steps(text: &str) -> anyhow::Result<Vec<usize>> {
    let parse = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad step {s:?}"));
    let steps: Vec<usize> = match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                bail!("empty step range {text:?}");
            }
            (a..=b).collect()
        }
        None => vec![parse(text)?],
    };
    Ok(steps)
}

fn parse_coords(text: &str) -> anyhow::Result<Vec<BigRational>> {
    text.split(',').map(|c| rational(c.trim())).collect()
}

fn run_config(args: &RunArgs) -> anyhow::Result<RunConfig> {
    let request: NormRequest = args.norm.parse()?;
    let norm = make_norm(&request)?;
    let mut options = ShortcutOptions::default();
    if args.eta != "auto" {
        options.eta = EtaChoice::Fixed(rational(&args.eta)?);
    }
    if let Some(m) = &args.margin {
        options.min_margin = rational(m)?;
    }
    if let Some(t) = &args.tolerance {
        options.tolerance = rational(t)?;
    }
    Ok(RunConfig {
        steps: parse_steps(&args.step)?,
        norm,
        x1: args.x1.as_deref().map(parse_coords).transpose()?,
        x2: args.x2.as_deref().map(parse_coords).transpose()?,
        options,
        out_dir: args.out.clone(),
    })
}

fn run(args: &RunArgs) -> anyhow::Result<u8> {
    let config = run_config(args)?;
    let report = run_demo(&config)?;
    for s in &report.steps {
        match (&s.margin, &s.error) {
            (Some(m), _) => println!(
                "step {}: {} margin {} (~{:.3e}) eta {} segments {} in {} ms",
                s.step,
                if s.certified { "certified" } else { "NOT certified" },
                m,
                s.margin_approx.unwrap_or(f64::NAN),
                s.eta.as_deref().unwrap_or("-"),
                s.segments.unwrap_or(0),
                s.wall_time_ms
            ),
            (None, Some(e)) => println!("step {}: error {}: {}", s.step, e.kind, e.message),
            (None, None) => println!("step {}: no result", s.step),
        }
    }
    match &config.out_dir {
        Some(dir) => println!("report written to {}", dir.join("report.json").display()),
        None => println!("{}", report.to_json()),
    }
    if let Some(failed) = report.steps.iter().find_map(|s| s.error.as_ref()) {
        eprintln!("{}", error_json(failed));
    }
    Ok(if report.all_certified { 0 } else { EXIT_NOT_CERTIFIED })
}

fn verify_file(path: &Path) -> anyhow::Result<u8> {
    let cert = load_certificate_file(path)?;
    let verdict = verify(&cert)?;
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    if let Some(m) = &verdict.margin {
        eprintln!("margin ~{:.3e}", to_f64(&rational(m)?));
    }
    Ok(if verdict.certified { 0 } else { EXIT_NOT_CERTIFIED })
}

fn emit_algebra(rank: usize, step: usize, emit: &Path) -> anyhow::Result<u8> {
    let algebra = build_free_nilpotent(rank, step).map_err(Error::from)?;
    std::fs::write(emit, algebra.to_json()).with_context(|| format!("writing {}", emit.display()))?;
    println!(
        "wrote {} (id {}, dims {:?})",
        emit.display(),
        algebra.id(),
        algebra.layer_dims()
    );
    Ok(0)
}

fn error_json(record: &ErrorRecord) -> String {
    serde_json::json!({ "error": record }).to_string()
}

fn record_for(err: &anyhow::Error) -> ErrorRecord {
    match err.downcast_ref::<Error>() {
        Some(e) => e.into(),
        None => ErrorRecord {
            kind: "Usage".into(),
            message: format!("{err:#}"),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Verify { certificate } => verify_file(certificate),
        Command::Algebra { rank, step, emit } => emit_algebra(*rank, *step, emit),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{}", error_json(&record_for(&err)));
            ExitCode::from(EXIT_ERROR)
        }
    }
}

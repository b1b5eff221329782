//! Experiment driver for the linadv library.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 run aborted
//! by blow-up (outside presets; inside a preset an abort is recorded in
//! the curve's CSV instead).

use clap::{Args, Parser, Subcommand};
use linadv::convergence::convergence_study;
use linadv::error::Error;
use linadv::operators::{build_fd_sbp, build_spectral_sbp, verify_sbp};
use linadv::output::write_csv;
use linadv::presets::{build_preset, run_preset};
use linadv::quadrature::{build_rule, NodeFamily};
use linadv::run::{execute, RunConfig, RunOutcome};
use linadv::solutions::CaseId;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "linadv", version, about = "Variable-coefficient advection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run and write its CSV
    Run(RunArgs),
    /// Execute a named experiment preset (one CSV per curve)
    Preset(PresetArgs),
    /// Mesh-refinement study, printing error and observed order per K
    Converge(ConvergeArgs),
    /// Verify operator and quadrature identities, printing residuals
    VerifyOps(VerifyArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// Config file of key=value lines; flags below override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    basis: Option<String>,
    /// Polynomial degree
    #[arg(long = "N")]
    degree: Option<String>,
    /// Number of elements
    #[arg(long = "K")]
    elements: Option<String>,
    #[arg(long)]
    flux: Option<String>,
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    /// Step count, or 'auto' for the CFL default
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// true/false: compute the theory diagnostics per sample
    #[arg(long)]
    diagnostics: Option<String>,
    #[arg(long)]
    fd_order: Option<String>,
    #[arg(long)]
    fd_nodes: Option<String>,
    /// Artificial dissipation strength, or 'none'
    #[arg(long)]
    dissipation: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: Option<String>,
    /// Free-form note recorded in the CSV metadata
    #[arg(long)]
    note: Option<String>,
}

#[derive(Args)]
struct PresetArgs {
    /// Preset name (fig1..fig8, fd_cos)
    name: String,
    /// Output directory (default results/<name>)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Use the source experiments' full step counts instead of the
    /// desk-scale cap
    #[arg(long)]
    paper_scale: bool,
    /// Also write an SVG overview plot
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated element counts, strictly increasing
    #[arg(long, value_delimiter = ',', required = true)]
    k_list: Vec<usize>,
    /// Evaluation time
    #[arg(long)]
    t_eval: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check spectral operators for N = 1 ..= this degree
    #[arg(long, default_value_t = 10)]
    max_degree: usize,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Preset(args) => cmd_preset(&args),
        Command::Converge(args) => cmd_converge(&args),
        Command::VerifyOps(args) => cmd_verify(&args),
    };
    std::process::exit(code);
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    2
}

/// File config first, then flag overrides, mirroring the key=value keys.
fn build_config(args: &RunArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::parse(&text)?
        }
        None => {
            let case = args.case.as_deref().ok_or_else(|| {
                Error::Config("missing required key 'case' (use --case or --config)".into())
            })?;
            RunConfig::default_for(CaseId::parse(case)?)
        }
    };
    let overrides: [(&str, &Option<String>); 16] = [
        ("case", &args.case),
        ("variant", &args.variant),
        ("basis", &args.basis),
        ("N", &args.degree),
        ("K", &args.elements),
        ("flux", &args.flux),
        ("form", &args.form),
        ("t_final", &args.t_final),
        ("steps", &args.steps),
        ("cfl", &args.cfl),
        ("samples", &args.samples),
        ("diagnostics", &args.diagnostics),
        ("fd_order", &args.fd_order),
        ("fd_nodes", &args.fd_nodes),
        ("dissipation", &args.dissipation),
        ("out", &args.out),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.apply_override(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> i32 {
    let cfg = match build_config(args) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let path = Path::new(&cfg.output);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            if let Err(e) = std::fs::create_dir_all(parent) {
                return fail(&Error::Config(format!(
                    "cannot create {}: {e}",
                    parent.display()
                )));
            }
        }
    }
    if let Err(e) = write_csv(path, &out, args.note.as_deref()) {
        return fail(&e);
    }
    match out.outcome {
        RunOutcome::Completed => {
            println!("wrote {} ({} rows)", cfg.output, out.records.len());
            0
        }
        RunOutcome::Aborted { t } => {
            println!(
                "wrote {} ({} rows, aborted at t={t})",
                cfg.output,
                out.records.len()
            );
            3
        }
    }
}

fn cmd_preset(args: &PresetArgs) -> i32 {
    let preset = match build_preset(&args.name, args.paper_scale) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let out_dir = args
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(&preset.name));
    println!("{}: {}", preset.name, preset.description);
    let report = match run_preset(&preset, &out_dir, args.svg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    for c in &report.curves {
        let status = match c.outcome {
            RunOutcome::Completed => "completed".to_string(),
            RunOutcome::Aborted { t } => format!("aborted at t={t}"),
        };
        println!("  {:<40} {status}", c.filename);
    }
    println!("manifest: {}", out_dir.join("manifest.txt").display());
    0
}

fn cmd_converge(args: &ConvergeArgs) -> i32 {
    let cfg = match build_config(&args.run) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let table = match convergence_study(&cfg, &args.k_list, args.t_eval) {
        Ok(t) => t,
        Err(e @ Error::Config(_)) => return fail(&e),
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    println!("{:>8}  {:>24}  {:>10}", "K", "oversampled_error", "order");
    for p in &table {
        match p.observed_order {
            Some(o) => println!("{:>8}  {:>24.16e}  {:>10.3}", p.elements, p.error, o),
            None => println!("{:>8}  {:>24.16e}  {:>10}", p.elements, p.error, "-"),
        }
    }
    0
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    const TOL: f64 = 1e-12;
    let mut worst: f64 = 0.0;
    println!(
        "{:<28} {:>14} {:>14}",
        "operator", "sbp_residual", "quad_residual"
    );
    for family in [NodeFamily::GaussLegendre, NodeFamily::GaussLobatto] {
        let name = match family {
            NodeFamily::GaussLegendre => "gl",
            NodeFamily::GaussLobatto => "gll",
        };
        for n in 1..=args.max_degree {
            let ops = match build_spectral_sbp(family, n) {
                Ok(o) => o,
                Err(e) => return fail(&e),
            };
            let sbp = verify_sbp(&ops);
            let quad = match quadrature_residual(family, n) {
                Ok(q) => q,
                Err(e) => return fail(&e),
            };
            worst = worst.max(sbp).max(quad);
            println!("{:<28} {:>14.3e} {:>14.3e}", format!("{name} N={n}"), sbp, quad);
        }
    }
    for order in [2usize, 4] {
        for nodes in [20usize, 50, 100] {
            let ops = match build_fd_sbp(order, nodes, 2.0) {
                Ok(o) => o,
                Err(e) => return fail(&e),
            };
            let sbp = verify_sbp(&ops);
            worst = worst.max(sbp);
            println!(
                "{:<28} {:>14.3e} {:>14}",
                format!("fd order={order} nodes={nodes}"),
                sbp,
                "-"
            );
        }
    }
    println!("max residual {worst:.3e} (tolerance {TOL:.0e})");
    if worst <= TOL {
        println!("verify-ops: OK");
        0
    } else {
        println!("verify-ops: FAILED");
        1
    }
}

/// Largest quadrature error over all monomials the rule must integrate
/// exactly on [-1, 1].
fn quadrature_residual(family: NodeFamily, degree: usize) -> Result<f64, Error> {
    let rule = build_rule(family, degree)?;
    let exact_to = family.exactness(degree);
    let mut worst: f64 = 0.0;
    for d in 0..=exact_to {
        let sum: f64 = rule
            .nodes
            .iter()
            .zip(rule.weights.iter())
            .map(|(&x, &w)| w * x.powi(d as i32))
            .sum();
        let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
        worst = worst.max((sum - exact).abs());
    }
    Ok(worst)
}

use clap::{Parser, Subcommand};
use qcurv_cli::cmd::{self, report::summarize, Context};
use qcurv_cli::{CheckReport, CliError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Radial Q-curvature solvers and blow-up diagnostics.
#[derive(Debug, Parser)]
#[command(name = "qcurv", version)]
struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Multiplies integrator and fixed-point tolerances.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the standard bubble and compare with the closed forms.
    Spherical,
    /// Build and analyse an example family (1a, 1b, 2, 3).
    Family,
    /// λ-continuation of entire solutions and the hybrid family.
    Hybrid,
    /// Linearized operator at the bubble: kernel, identity draws, ψ₀.
    Linearize,
    /// Analyse trajectory CSV files as one family.
    Analyze { inputs: Vec<PathBuf> },
    /// Verify checksums and collect all checks in the output directory.
    Report,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError::run("thread pool", e))?;
    }
    if let Command::Report = cli.command {
        let rep = cmd::report::run(&cli.out);
        match &rep {
            Ok(r) => println!("{} artifacts verified, {} command reports", r.artifacts, r.commands.len()),
            Err(CliError::ChecksFailed(ids)) => {
                for id in ids {
                    println!("FAIL {id}");
                }
            }
            Err(_) => {}
        }
        return rep.map(|_| ());
    }
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let ctx = Context::new(cfg, cli.out.clone(), cli.tol_scale)?;
    let res: Result<CheckReport, CliError> = match &cli.command {
        Command::Spherical => cmd::spherical::run(&ctx),
        Command::Family => cmd::family::run(&ctx),
        Command::Hybrid => cmd::hybrid::run(&ctx),
        Command::Linearize => cmd::linearize::run(&ctx),
        Command::Analyze { inputs } => cmd::analyze::run(&ctx, inputs),
        Command::Report => unreachable!(),
    };
    let checks_file = cli.out.join(match &cli.command {
        Command::Family => format!("family_{}_checks.json", ctx.cfg.family.example),
        Command::Analyze { .. } => format!("analyze_{}_checks.json", ctx.cfg.analyze.name),
        Command::Spherical => "spherical_checks.json".into(),
        Command::Hybrid => "hybrid_checks.json".into(),
        Command::Linearize => "linearize_checks.json".into(),
        Command::Report => unreachable!(),
    });
    match &res {
        Ok(r) => println!("{}", summarize(&r.checks)),
        Err(CliError::ChecksFailed(_)) => {
            if let Ok(bytes) = std::fs::read(&checks_file) {
                if let Ok(r) = serde_json::from_slice::<CheckReport>(&bytes) {
                    println!("{}", summarize(&r.checks));
                }
            }
        }
        Err(_) => {}
    }
    res.map(|_| ())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcurv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

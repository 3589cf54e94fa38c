//! Thin command-line front end over the experiment library.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on
//! usage/configuration errors.

use clap::{Parser, Subcommand};
use sphere_control::experiments::{
    cmd_bch_check, cmd_converge, cmd_plan, cmd_saturate, cmd_transfer, cmd_verify_lemma,
    CommandOutcome, ExperimentConfig, ExperimentError,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sphere-control",
    version,
    about = "Small-time controllability workbench for the bilinear Schrödinger equation on S²"
)]
struct Cli {
    /// Sectioned key = value configuration file; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for result files and the run manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Spherical-harmonic band limit.
    #[arg(long, global = true)]
    jmax: Option<u32>,
    /// Grid oversampling factor for phase kicks and transforms.
    #[arg(long, global = true)]
    oversample: Option<u32>,
    /// Seed for the randomized property suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite and certify P_n ⊂ H_n.
    VerifyLemma {
        /// Inclusion level n (n ≥ 2).
        #[arg(long)]
        n: Option<u32>,
        /// Sample count for the randomized identities.
        #[arg(long)]
        pairs: Option<u32>,
        /// Negative control: corrupt the quotient rewrite; the suite must fail.
        #[arg(long)]
        mutate: bool,
    },
    /// Build the saturation chain H_1 .. H_n and emit bases with provenance.
    Saturate {
        #[arg(long)]
        n: Option<u32>,
        /// Degree cap applied at every step.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Convergence study of the conjugated three-exponential composition.
    Converge {
        /// Conjugation phase polynomial, e.g. "z" or "x + z".
        #[arg(long)]
        phi: Option<String>,
        /// Constant controls "u1, u2, u3".
        #[arg(long)]
        u: Option<String>,
        /// δ schedule: "first:last:count" (geometric) or an explicit list.
        #[arg(long)]
        deltas: Option<String>,
        /// Free potential V as polynomial text.
        #[arg(long)]
        potential: Option<String>,
        /// Initial basis state "j, m".
        #[arg(long)]
        psi0: Option<String>,
    },
    /// Eigenfunction transfer Y_j^{-j} → (−1)^j Y_j^{+j}.
    Transfer {
        #[arg(long)]
        j: Option<u32>,
        /// Fit degrees to sweep, comma separated.
        #[arg(long)]
        degrees: Option<String>,
        /// exact | fitted | synthesized.
        #[arg(long)]
        mode: Option<String>,
        /// Step size for synthesized mode.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Numeric commutator checks for a multiplication phase.
    BchCheck {
        #[arg(long)]
        phi: Option<String>,
    },
    /// Compile a synthesis plan for a target phase polynomial.
    Plan {
        /// Target polynomial text, e.g. "4 x z".
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        cap: Option<u32>,
    },
}

fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, ExperimentError> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    let mut overrides = String::from("[general]\n");
    if let Some(v) = cli.jmax {
        overrides.push_str(&format!("jmax = {v}\n"));
    }
    if let Some(v) = cli.oversample {
        overrides.push_str(&format!("oversample = {v}\n"));
    }
    if let Some(v) = cli.seed {
        overrides.push_str(&format!("seed = {v}\n"));
    }

    match &cli.command {
        Command::VerifyLemma { n, pairs, mutate } => {
            overrides.push_str("[verify]\n");
            if let Some(n) = n {
                overrides.push_str(&format!("n = {n}\n"));
            }
            if let Some(pairs) = pairs {
                overrides.push_str(&format!("pairs = {pairs}\n"));
            }
            if *mutate {
                overrides.push_str("mutate = true\n");
            }
        }
        Command::Saturate { n, cap } => {
            overrides.push_str("[saturate]\n");
            if let Some(n) = n {
                overrides.push_str(&format!("n = {n}\n"));
            }
            if let Some(cap) = cap {
                overrides.push_str(&format!("cap = {cap}\n"));
            }
        }
        Command::Converge {
            phi,
            u,
            deltas,
            potential,
            psi0,
        } => {
            overrides.push_str("[converge]\n");
            if let Some(phi) = phi {
                overrides.push_str(&format!("phi = {phi}\n"));
            }
            if let Some(u) = u {
                overrides.push_str(&format!("u = {u}\n"));
            }
            if let Some(deltas) = deltas {
                overrides.push_str(&format!("deltas = {deltas}\n"));
            }
            if let Some(potential) = potential {
                overrides.push_str(&format!("potential = {potential}\n"));
            }
            if let Some(psi0) = psi0 {
                overrides.push_str(&format!("psi0 = {psi0}\n"));
            }
        }
        Command::Transfer {
            j,
            degrees,
            mode,
            delta,
        } => {
            overrides.push_str("[transfer]\n");
            if let Some(j) = j {
                overrides.push_str(&format!("j = {j}\n"));
            }
            if let Some(degrees) = degrees {
                overrides.push_str(&format!("degrees = {degrees}\n"));
            }
            if let Some(mode) = mode {
                overrides.push_str(&format!("mode = {mode}\n"));
            }
            if let Some(delta) = delta {
                overrides.push_str(&format!("delta = {delta}\n"));
            }
        }
        Command::BchCheck { phi } => {
            if let Some(phi) = phi {
                overrides.push_str("[bch]\n");
                overrides.push_str(&format!("phi = {phi}\n"));
            }
        }
        Command::Plan { target, n, cap } => {
            overrides.push_str("[plan]\n");
            if let Some(target) = target {
                overrides.push_str(&format!("target = {target}\n"));
            }
            if let Some(n) = n {
                overrides.push_str(&format!("n = {n}\n"));
            }
            if let Some(cap) = cap {
                overrides.push_str(&format!("cap = {cap}\n"));
            }
        }
    }
    config.apply_text(&overrides)?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<CommandOutcome, ExperimentError> {
    let config = resolve_config(cli)?;
    match &cli.command {
        Command::VerifyLemma { .. } => cmd_verify_lemma(&config),
        Command::Saturate { .. } => cmd_saturate(&config),
        Command::Converge { .. } => cmd_converge(&config),
        Command::Transfer { .. } => cmd_transfer(&config),
        Command::BchCheck { .. } => cmd_bch_check(&config),
        Command::Plan { .. } => cmd_plan(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.headline).expect("headline serializes")
            );
            if outcome.failures > 0 {
                eprintln!("{} check(s) failed", outcome.failures);
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}

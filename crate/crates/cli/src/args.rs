//! Command-line grammar and its translation into a [`JobConfig`].

use std::path::PathBuf;

use apnforge_core::upoly::DEFAULT_SEED;
use apnforge_core::FieldSpec;
use clap::{Args, Parser, Subcommand};

use crate::config::{format_seed, parse_seed, Command, JobConfig, Options, PolyInput};

pub const SEED_ENV: &str = "APNFORGE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "apnforge",
    version,
    about = "Exact GF(2^n) algebra for APN functions and their phi surfaces"
)]
pub struct Cli {
    /// Worker threads for parallel phases.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed (decimal or 0x hex); overrides APNFORGE_SEED.
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Add wall-clock times to the output.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Write the JSON document to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print the resolved job configuration instead of running it.
    #[arg(long, global = true)]
    pub emit_config: bool,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// Field as JSON, e.g. '{"n":2,"modulus":"0x7"}'; modulus defaults to the Conway polynomial.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub field: FieldArg,
    /// Polynomial as JSON, e.g. '{"coeffs":{"3":"0x1"}}'.
    #[arg(long, conflicts_with = "poly_file")]
    pub poly: Option<String>,
    /// File holding the polynomial JSON.
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Describe a field.
    FieldInfo(FieldArg),
    /// Build phi and its homogenization for f.
    PhiBuild(PolyArgs),
    /// Decide absolute irreducibility of the surface phi = 0.
    PhiFactor(PolyArgs),
    /// Absolute factorization of a bivariate or homogeneous trivariate polynomial.
    Factor {
        #[command(flatten)]
        field: FieldArg,
        /// Polynomial text such as "x^2*y+0x3*y+1".
        #[arg(long)]
        mpoly: String,
        /// Number of variables: 2, or 3 for homogeneous input.
        #[arg(long, default_value_t = 2)]
        nvars: usize,
        /// Factor over F_{q^ext} only.
        #[arg(long)]
        ext: Option<u32>,
    },
    /// Differential spectrum of f on its field.
    ApnSpectrum(PolyArgs),
    /// APN status of f over F_{q^m}, m = 1..=max-ext.
    ApnScan {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        max_ext: u32,
        /// Largest extension field size, as a power of two.
        #[arg(long)]
        budget_bits: Option<u32>,
    },
    /// Gold / Kasami-Welch classification of an exponent.
    Classify {
        #[arg(long)]
        degree: u64,
    },
    /// Run the check harness.
    Verify {
        /// Name prefix of the checks to run; all when omitted.
        check: Option<String>,
        /// Time budget in seconds.
        #[arg(long)]
        budget_secs: Option<u64>,
        /// List check names.
        #[arg(long)]
        list: bool,
    },
    /// Run a job configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_field(arg: &FieldArg) -> Result<Option<FieldSpec>, String> {
    arg.field
        .as_deref()
        .map(|s| serde_json::from_str(s).map_err(|e| format!("--field: {e}")))
        .transpose()
}

fn parse_poly(args: &PolyArgs) -> Result<PolyInput, String> {
    let text = match (&args.poly, &args.poly_file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| format!("--poly-file {}: {e}", path.display()))?
        }
        (None, None) => return Err("one of --poly or --poly-file is required".into()),
    };
    serde_json::from_str(&text).map_err(|e| format!("polynomial JSON: {e}"))
}

fn poly_job(command: Command, args: &PolyArgs) -> Result<(Command, Option<FieldSpec>, Option<PolyInput>), String> {
    Ok((command, parse_field(&args.field)?, Some(parse_poly(args)?)))
}

/// Resolves the seed from the flag, then the environment, then the default.
fn resolve_seed(flag: Option<&str>, env: Option<String>) -> Result<u64, String> {
    match (flag, env) {
        (Some(s), _) => parse_seed(s),
        (None, Some(e)) => parse_seed(&e).map_err(|m| format!("{SEED_ENV}: {m}")),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

/// Builds the job configuration; `Run` is handled by the caller.
pub fn to_config(cli: &Cli, env_seed: Option<String>) -> Result<JobConfig, String> {
    let seed = resolve_seed(cli.seed.as_deref(), env_seed)?;
    let mut options = Options {
        jobs: cli.jobs,
        seed: format_seed(seed),
        output: cli.output.as_ref().map(|p| p.display().to_string()),
        timings: cli.timings,
        ..Options::default()
    };
    let (command, field, poly) = match &cli.command {
        Sub::FieldInfo(f) => (Command::FieldInfo, parse_field(f)?, None),
        Sub::PhiBuild(p) => poly_job(Command::PhiBuild, p)?,
        Sub::PhiFactor(p) => poly_job(Command::PhiFactor, p)?,
        Sub::ApnSpectrum(p) => poly_job(Command::ApnSpectrum, p)?,
        Sub::ApnScan {
            poly,
            max_ext,
            budget_bits,
        } => {
            options.max_ext = Some(*max_ext);
            options.budget_bits = *budget_bits;
            poly_job(Command::ApnScan, poly)?
        }
        Sub::Factor {
            field,
            mpoly,
            nvars,
            ext,
        } => {
            options.mpoly = Some(mpoly.clone());
            options.nvars = Some(*nvars);
            options.ext = *ext;
            (Command::Factor, parse_field(field)?, None)
        }
        Sub::Classify { degree } => {
            options.degree = Some(*degree);
            (Command::Classify, None, None)
        }
        Sub::Verify {
            check,
            budget_secs,
            list,
        } => {
            options.check = check.clone();
            options.budget_secs = *budget_secs;
            options.list = *list;
            (Command::Verify, None, None)
        }
        Sub::Run { .. } => return Err("run takes its settings from the configuration file".into()),
    };
    Ok(JobConfig {
        command,
        field,
        poly,
        options,
    })
}

//! Command-line harness: configuration, subcommands and reproducible output files.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::analytic::poisson::ConstantVariant;
use hecke_core::{Error, Result};

pub use config::RunConfig;
pub use output::{Context, Outcome};

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Quadratic Hecke families: verification and large-sieve experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; they override the config file.
#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Field: Q or Qi.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Generator of a modulus replacing the minimal one.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Family value cache directory (default: $HECKE_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the effective configuration to this file.
    #[arg(long, global = true)]
    pub write_config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    ZetaZero,
    PaperConstant,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Power residue symbol (a/b)_n.
    Symbol {
        a: String,
        b: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Builds the family and checks its axioms.
    FamilyVerify {
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Plain, twisted and restricted Poisson summation.
    PoissonCheck {
        /// Comma-separated X values for the plain formula.
        #[arg(long, value_delimiter = ',')]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        char_x: Option<Vec<f64>>,
        #[arg(long)]
        function: Option<String>,
        /// Variant whose residuals decide the exit code; both are always written.
        #[arg(long, value_enum, default_value_t = Variant::ZetaZero)]
        variant: Variant,
    },
    /// Contour kernel against its closed form, and Parseval.
    KernelTable {
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// B1 grid, duality, B2/B3 and optionally the square-sequence ratios.
    Sieve {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<f64>>,
        #[arg(long)]
        max_dimension: Option<usize>,
        #[arg(long)]
        square_sequence: bool,
    },
    /// Bracket values and main terms.
    Bracket {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// Comma-separated generators of g.
        #[arg(long, value_delimiter = ',')]
        g: Option<Vec<String>>,
    },
    /// B1 scaling fit and the monotonicity table.
    Scaling {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<f64>>,
        #[arg(long)]
        max_dimension: Option<usize>,
    },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// The config file (or defaults) with every given flag applied.
pub fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.field, g.field.clone());
    if g.modulus.is_some() {
        cfg.modulus = g.modulus.clone();
    }
    set(&mut cfg.output_dir, g.out.clone());
    if g.cache_dir.is_some() {
        cfg.cache_dir = g.cache_dir.clone();
    }
    set(&mut cfg.threads, g.threads);
    let b = &mut cfg.bounds;
    match &cli.command {
        Command::Symbol { .. } => {}
        Command::FamilyVerify { bound } => set(&mut b.family_bound, *bound),
        Command::PoissonCheck { x, char_x, function, .. } => {
            set(&mut b.poisson_x, x.clone());
            set(&mut b.char_x, char_x.clone());
            set(&mut b.test_function, function.clone());
        }
        Command::KernelTable { t_min, t_max, points } => {
            set(&mut b.kernel_t_min, *t_min);
            set(&mut b.kernel_t_max, *t_max);
            set(&mut b.kernel_points, *points);
        }
        Command::Sieve { sizes, max_dimension, .. } | Command::Scaling { sizes, max_dimension } => {
            set(&mut b.sieve_sizes, sizes.clone());
            set(&mut b.max_dimension, *max_dimension);
        }
        Command::Bracket { m, n, k, g } => {
            set(&mut b.bracket_m, *m);
            set(&mut b.bracket_n, *n);
            set(&mut b.bracket_k, *k);
            set(&mut b.bracket_g, g.clone());
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = effective_config(cli)?;
    if let Some(p) = &cli.global.write_config {
        std::fs::write(p, cfg.to_toml()).map_err(|e| Error::Configuration(format!("{}: {e}", p.display())))?;
    }
    if cfg.threads > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    if let Command::Symbol { a, b, n } = &cli.command {
        println!("{}", commands::symbol_line(cfg.field_id()?, a, b, *n)?);
        return Ok(Outcome::Success);
    }
    let mut ctx = Context::new(cfg)?;
    let outcome = match &cli.command {
        Command::Symbol { .. } => unreachable!(),
        Command::FamilyVerify { .. } => commands::family_verify(&mut ctx)?,
        Command::PoissonCheck { variant, .. } => {
            let judged = match variant {
                Variant::ZetaZero => ConstantVariant::ZetaZero,
                Variant::PaperConstant => ConstantVariant::PaperConstant,
            };
            commands::poisson_check(&mut ctx, judged)?
        }
        Command::KernelTable { .. } => commands::kernel_table(&mut ctx)?,
        Command::Sieve { square_sequence, .. } => commands::sieve(&mut ctx, *square_sequence)?,
        Command::Bracket { .. } => commands::bracket(&mut ctx)?,
        Command::Scaling { .. } => commands::scaling(&mut ctx)?,
    };
    ctx.save_cache()?;
    for p in &ctx.written {
        println!("wrote {}", p.display());
    }
    Ok(outcome)
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => o.code(),
        Err(e) => {
            eprintln!("error: {e}");
            output::error_code(&e)
        }
    }
}

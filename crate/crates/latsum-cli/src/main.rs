use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latsum_cli::{run, CliError, CommandKind, JobConfig, LatticeArg};

#[derive(Parser)]
#[command(name = "latsum", version, about = "Lattice sums over two-dimensional Bravais lattices")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// json, csv or text
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the canonical job configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Args)]
struct LatticeOpts {
    /// square, hex, rect2 or rectsqrt3
    #[arg(long, conflicts_with = "tau")]
    lattice: Option<String>,
    /// Lattice shape as re,im
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Lattice scale
    #[arg(long, default_value_t = 1.0)]
    a: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generalized Eisenstein series σₙ⁽ᵐ⁾.
    Sigma {
        #[command(flatten)]
        lattice: LatticeOpts,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        /// Keep the extraordinary term in n = 2 results.
        #[arg(long)]
        no_regularize: bool,
        /// Direct-space displaced set: Wb, Wc or Wd.
        #[arg(long)]
        set: Option<String>,
        /// Compare against a truncated direct sum.
        #[arg(long)]
        verify_oracle: bool,
        /// Oracle radius (default 200a).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Cylindrical harmonic sum S_{l,m,n}.
    #[command(name = "S")]
    S {
        #[command(flatten)]
        lattice: LatticeOpts,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long)]
        n: u32,
        /// Evaluation points, comma separated.
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
        /// Reciprocal point set: gamma, X, Y, M, M1..M3, K.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        verify_oracle: bool,
        /// Oracle radius in reciprocal space (default 400π/a).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Dedekind η, Weber quotients and θ-constants.
    Eta {
        #[command(flatten)]
        lattice: LatticeOpts,
    },
    /// The 24 exact values against the Fourier engine.
    Table1,
    /// Run invariant suites.
    Verify {
        /// modular, eisenstein, cylsum, displaced or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// List lattice or displaced-set points.
    Points {
        #[command(flatten)]
        lattice: LatticeOpts,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        reciprocal: bool,
        #[arg(long)]
        set: Option<String>,
    },
}

fn apply_lattice(cfg: &mut JobConfig, opts: LatticeOpts) -> Result<(), CliError> {
    cfg.lattice = match (opts.lattice, opts.tau) {
        (Some(k), _) => k.parse()?,
        (None, Some(t)) => LatticeArg::Tau(latsum_cli::config::parse_tau(&t)?),
        (None, None) => cfg.lattice,
    };
    cfg.a = opts.a;
    Ok(())
}

fn build(cli: Cli) -> Result<JobConfig, CliError> {
    let mut cfg = match &cli.command {
        Cmd::Sigma { .. } => JobConfig::new(CommandKind::Sigma),
        Cmd::S { .. } => JobConfig::new(CommandKind::S),
        Cmd::Eta { .. } => JobConfig::new(CommandKind::Eta),
        Cmd::Table1 => JobConfig::new(CommandKind::Table1),
        Cmd::Verify { .. } => JobConfig::new(CommandKind::Verify),
        Cmd::Points { .. } => JobConfig::new(CommandKind::Points),
    };
    cfg.format = cli.format.parse()?;
    match cli.command {
        Cmd::Sigma { lattice, n, m, no_regularize, set, verify_oracle, radius } => {
            apply_lattice(&mut cfg, lattice)?;
            (cfg.n, cfg.m, cfg.regularize, cfg.set, cfg.verify_oracle, cfg.radius) = (n, m, !no_regularize, set, verify_oracle, radius);
        }
        Cmd::S { lattice, l, m, n, u, set, verify_oracle, radius } => {
            apply_lattice(&mut cfg, lattice)?;
            (cfg.l, cfg.m, cfg.n, cfg.u, cfg.set, cfg.verify_oracle, cfg.radius) = (l, m, n, u, set, verify_oracle, radius);
        }
        Cmd::Eta { lattice } => apply_lattice(&mut cfg, lattice)?,
        Cmd::Table1 => {}
        Cmd::Verify { suite } => cfg.suite = suite.parse()?,
        Cmd::Points { lattice, radius, reciprocal, set } => {
            apply_lattice(&mut cfg, lattice)?;
            (cfg.radius, cfg.reciprocal, cfg.set) = (radius, reciprocal, set);
        }
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let out = cli.out.clone();
    let print_config = cli.print_config;
    let cfg = build(cli)?;
    if print_config {
        print!("{}", cfg.to_canonical());
        return Ok(true);
    }
    let report = run(&cfg)?;
    let text = report.render(cfg.format);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(!report.failed)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("latsum: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

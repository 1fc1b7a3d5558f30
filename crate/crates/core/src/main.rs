use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use vertex_induce::exact::{parse_rational, ScaledExponent};
use vertex_induce::report::{exit_code, run, AlgebraSource, Command, Format, KindChoice, ModuleSource, RunConfig};
use vertex_induce::{Error, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    CheckAlgebra,
    Zhu,
    Induce,
    VerifyModule,
    VerifyAnnihilation,
    VerifyUniversal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

/// Zhu algebras, induced modules and their checks for weight-truncated
/// vertex operator algebras, in exact rational arithmetic.
#[derive(Debug, Parser)]
#[command(name = "vertex-induce", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    /// Algebra definition file.
    #[arg(long, value_name = "PATH", required_unless_present = "heisenberg")]
    algebra: Option<PathBuf>,
    /// Built-in rank one free boson truncated at this weight.
    #[arg(long, value_name = "WEIGHT", conflicts_with = "algebra")]
    heisenberg: Option<i64>,
    /// Module definition file.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["fock", "twisted_fock"])]
    module: Option<PathBuf>,
    /// Fock module of the built-in free boson with this zero-mode eigenvalue.
    #[arg(long, value_name = "LAMBDA", conflicts_with = "twisted_fock")]
    fock: Option<String>,
    /// Fock module of the built-in free boson twisted by a -> -a.
    #[arg(long)]
    twisted_fock: bool,
    /// Algebra-module file to induce from (induce only).
    #[arg(long, value_name = "PATH")]
    context: Option<PathBuf>,
    /// Level of the associative algebra.
    #[arg(long, value_name = "N", conflicts_with = "twist")]
    level: Option<i64>,
    /// Twist: identity, parity or algebra.
    #[arg(long, value_name = "TWIST")]
    twist: Option<String>,
    /// Degree cutoff of modules; the cap for zhu.
    #[arg(long, value_name = "D", default_value = "2")]
    cutoff: String,
    /// Largest algebra weight used by the checks.
    #[arg(long, value_name = "W", default_value_t = 2)]
    weight: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Jacobi components drawn when the window is not enumerated.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Enumerate Jacobi windows with at most this many tuples.
    #[arg(long, value_name = "K", default_value_t = 2000)]
    exhaustive_limit: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

fn config(cli: Cli) -> Result<RunConfig> {
    let command = match cli.command {
        CommandArg::CheckAlgebra => Command::CheckAlgebra,
        CommandArg::Zhu => Command::Zhu,
        CommandArg::Induce => Command::Induce,
        CommandArg::VerifyModule => Command::VerifyModule,
        CommandArg::VerifyAnnihilation => Command::VerifyAnnihilation,
        CommandArg::VerifyUniversal => Command::VerifyUniversal,
    };
    let algebra = match (cli.algebra, cli.heisenberg) {
        (Some(p), _) => AlgebraSource::File(p),
        (None, Some(n)) => AlgebraSource::Heisenberg(n),
        (None, None) => return Err(Error::Invalid("no algebra given".into())),
    };
    let mut cfg = RunConfig::new(command, algebra);
    cfg.module = if let Some(p) = cli.module {
        Some(ModuleSource::File(p))
    } else if let Some(l) = cli.fock {
        Some(ModuleSource::Fock(parse_rational(&l)?))
    } else if cli.twisted_fock {
        Some(ModuleSource::TwistedFock)
    } else {
        None
    };
    cfg.context = cli.context;
    cfg.kind = match (cli.level, cli.twist) {
        (_, Some(t)) => KindChoice::Twisted(t.parse()?),
        (Some(n), None) => KindChoice::Level(n),
        (None, None) => KindChoice::Level(0),
    };
    cfg.cutoff = cli.cutoff.parse::<ScaledExponent>()?;
    cfg.weight = cli.weight;
    cfg.seed = cli.seed;
    cfg.samples = cli.samples;
    cfg.exhaustive_limit = cli.exhaustive_limit;
    cfg.format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let outcome = config(cli).and_then(|cfg| run(&cfg));
    match &outcome {
        Ok(report) => print!(
            "{}",
            report.render(match format {
                FormatArg::Text => Format::Text,
                FormatArg::Structured => Format::Structured,
            })
        ),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&outcome) as u8)
}

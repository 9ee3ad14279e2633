use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nctorus_cli::config::parse_tolerance;
use nctorus_cli::{
    c_space_text, cmd_c_space, cmd_clifford_check, cmd_orbit, cmd_spectrum, cmd_verify, orbit_text,
    read_matrices, spectrum_csv, to_json, verdict_text, write_file, CliError, ResolvedConfig,
    RunConfig, Status,
};

#[derive(Parser)]
#[command(
    name = "nctorus",
    version,
    about = "Spectral triples on the noncommutative torus: construction and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override a tolerance, e.g. `--tol first_order=1e-9`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Override the lattice cutoff `M`.
    #[arg(long, global = true, value_name = "M")]
    cutoff: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every axiom check on the configured triple.
    Verify {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Dirac spectrum, one eigenvalue per line, ascending.
    Spectrum {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Orbits of spin structures and witnessing words.
    Orbit { n: usize },
    /// Decide whether the matrices in FILE generate a Clifford algebra.
    CliffordCheck { file: PathBuf },
    /// Admissible constant blocks `C` for dimension `n`.
    CSpace { n: usize },
}

fn load(cli: &Cli, path: &PathBuf) -> Result<ResolvedConfig, CliError> {
    let tols = cli
        .tol
        .iter()
        .map(|t| parse_tolerance(t))
        .collect::<Result<Vec<_>, _>>()?;
    RunConfig::load(path)?
        .resolve()?
        .with_overrides(cli.cutoff, cli.seed, &tols)
}

/// Writes `body` to `--out` when given, otherwise to stdout.
fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => write_file(p, body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Write {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

fn run(cli: &Cli) -> Result<Status, CliError> {
    match &cli.command {
        Command::Verify { config } => {
            let cfg = load(cli, config)?;
            let report = cmd_verify(&cfg)?;
            if let Some(p) = &cli.out {
                write_file(p, &to_json(&report))?;
            }
            print!(
                "{}",
                if cli.json {
                    to_json(&report)
                } else {
                    report.text()
                }
            );
            Ok(Status::from_pass(report.pass))
        }
        Command::Spectrum { config } => {
            let cfg = load(cli, config)?;
            let out = cmd_spectrum(&cfg)?;
            match &cli.out {
                Some(p) => {
                    write_file(p, &spectrum_csv(&out.eigenvalues))?;
                    print!("{}", to_json(&out.summary));
                }
                None if cli.json => print!("{}", to_json(&out)),
                None => print!("{}", spectrum_csv(&out.eigenvalues)),
            }
            Ok(Status::Pass)
        }
        Command::Orbit { n } => {
            let p = cmd_orbit(*n)?;
            emit(
                cli,
                &if cli.json {
                    to_json(&p)
                } else {
                    orbit_text(&p)
                },
            )?;
            Ok(Status::Pass)
        }
        Command::CliffordCheck { file } => {
            let mats = read_matrices(file)?;
            let v = cmd_clifford_check(&mats, cli.seed.unwrap_or(0))?;
            emit(
                cli,
                &if cli.json {
                    to_json(&v)
                } else {
                    verdict_text(&v)
                },
            )?;
            Ok(Status::from_pass(v.overall))
        }
        Command::CSpace { n } => {
            let c = cmd_c_space(*n)?;
            emit(
                cli,
                &if cli.json {
                    to_json(&c)
                } else {
                    c_space_text(&c)
                },
            )?;
            Ok(Status::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let ok = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            return ExitCode::from(if ok { 0 } else { Status::Usage.code() });
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Usage.code())
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use trinets::{enewick, trinet_file, Network, RandomNetSpec, TrinetCollection};

#[derive(Parser)]
#[command(
    name = "trinets",
    version,
    about = "Level-2 network reconstruction from trinets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the trinets of a network, one per line.
    Extract {
        network: PathBuf,
        /// Include the binets as well.
        #[arg(long)]
        binets: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reconstruct a network from a trinet file.
    Build {
        trinets: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the choices made at each level of the recursion to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Exit 0 if the two networks are isomorphic, 1 otherwise.
    Eq { a: PathBuf, b: PathBuf },
    /// Exit 0 if the two networks have the same set of trinets, 1 otherwise.
    CompareTrinets { a: PathBuf, b: PathBuf },
    /// Write a seeded random network of level at most 2.
    Gen {
        #[arg(long)]
        leaves: usize,
        #[arg(long, env = "TRINETS_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        level: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the invariant violations of a network; exit 0 iff there are none.
    Validate { network: PathBuf },
}

/// Errors that map to exit status 2.
struct Failure(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.into())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?)
}

fn read_network(path: &Path) -> Result<Network, Failure> {
    let text = read(path)?;
    enewick::parse(text.trim_end()).map_err(|e| {
        Failure(anyhow!(
            "{}:{}:{}: {}",
            path.display(),
            e.line,
            e.column,
            e.message
        ))
    })
}

fn read_trinets(path: &Path) -> Result<TrinetCollection, Failure> {
    let text = read(path)?;
    trinet_file::read(&text).map_err(|e| {
        Failure(anyhow!(
            "{}:{}:{}: {}",
            path.display(),
            e.line,
            e.column,
            e.message
        ))
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
        }
        _ => print!("{text}"),
    }
    Ok(())
}

fn verdict(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Extract {
            network,
            binets,
            output,
        } => {
            let net = read_network(&network)?;
            let t = if binets {
                net.binets_and_trinets()?
            } else {
                net.trinets()?
            };
            emit(output.as_deref(), &trinet_file::write_collection(&t))?;
        }
        Command::Build {
            trinets,
            output,
            report,
        } => {
            let t = read_trinets(&trinets)?;
            let (net, rep) = trinets::reconstruct_with_report(&t)?;
            if report {
                eprint!("{rep}");
            }
            emit(output.as_deref(), &format!("{}\n", enewick::write(&net)))?;
        }
        Command::Eq { a, b } => {
            let same = read_network(&a)?.isomorphic(&read_network(&b)?);
            println!("{}", if same { "isomorphic" } else { "not isomorphic" });
            return Ok(verdict(same));
        }
        Command::CompareTrinets { a, b } => {
            let ta = read_network(&a)?.trinets()?;
            let tb = read_network(&b)?.trinets()?;
            let (ka, kb) = (ta.key_set(), tb.key_set());
            let same = ka == kb;
            if same {
                println!("equal trinet sets ({} distinct trinets)", ka.len());
            } else {
                println!("different trinet sets");
                for k in ka.difference(&kb) {
                    println!("  only in {}: {k}", a.display());
                }
                for k in kb.difference(&ka) {
                    println!("  only in {}: {k}", b.display());
                }
            }
            return Ok(verdict(same));
        }
        Command::Gen {
            leaves,
            seed,
            level,
            output,
        } => {
            let net = trinets::random_network(&RandomNetSpec::new(leaves, level.into(), seed))?;
            emit(output.as_deref(), &format!("{}\n", enewick::write(&net)))?;
        }
        Command::Validate { network } => {
            let net = read_network(&network)?;
            let mut diagnostics: Vec<String> =
                net.validate().iter().map(ToString::to_string).collect();
            if diagnostics.is_empty() && !net.is_recoverable() {
                diagnostics.push("network is not recoverable".into());
            }
            for d in &diagnostics {
                println!("{d}");
            }
            return Ok(verdict(diagnostics.is_empty()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

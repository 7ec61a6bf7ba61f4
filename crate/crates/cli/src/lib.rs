//! Command-line front end for the `arborflow` library.

pub mod dump;
pub mod error;
pub mod treefile;
pub mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arborflow::exactalg::{PrimeField, DEFAULT_PRIME};
use arborflow::{all_trees, Tree};

pub use error::CliError;
use dump::DumpKind;
use verify::{Target, VerifyOptions};

/// Largest `--all-n` accepted; tree counts grow quickly past this.
pub const MAX_ALL_N: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "arborflow", version, about = "Distance-matrix determinants of trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a tree file, either random or from a Prüfer sequence.
    #[command(group(ArgGroup::new("source").required(true).args(["n", "prufer"])))]
    GenTree {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated Prüfer sequence.
        #[arg(long)]
        prufer: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an identity on one tree or on every tree up to a size.
    #[command(group(ArgGroup::new("trees").required(true).args(["tree", "all_n"])))]
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Every labelled tree with 2..=K vertices.
        #[arg(long, value_name = "K")]
        all_n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, env = "ARBORFLOW_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "ARBORFLOW_PRIME", default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Export a route map, catalysts or arrowflow classes.
    Dump {
        #[arg(value_enum)]
        kind: DumpKind,
        #[arg(long)]
        tree: PathBuf,
        /// Arrowflow as `i>j,k>l,...`.
        #[arg(long)]
        arrowflow: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_tree(path: &Path) -> Result<Tree, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    treefile::parse_tree(&text)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn parse_prufer(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Format(format!("bad Prüfer entry {t:?}"))))
        .collect()
}

pub fn gen_tree(n: Option<usize>, prufer: Option<&str>, seed: u64) -> Result<Tree, CliError> {
    match (n, prufer) {
        (_, Some(p)) => Tree::from_prufer(&parse_prufer(p)?).map_err(|e| CliError::Format(e.to_string())),
        (Some(n), None) if n < 2 => Err(CliError::Usage(format!("--n must be at least 2, got {n}"))),
        (Some(n), None) => Ok(Tree::random(n, &mut ChaCha8Rng::seed_from_u64(seed))?),
        (None, None) => Err(CliError::Usage("one of --n or --prufer is required".into())),
    }
}

/// Runs a parsed command. The returned flag is false when a check failed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::GenTree { n, prufer, seed, out } => {
            let tree = gen_tree(n, prufer.as_deref(), seed)?;
            emit(out.as_deref(), &treefile::format_tree(&tree))?;
            Ok(true)
        }
        Command::Verify { target, tree, all_n, trials, seed, prime, out, corrupt } => {
            let field = PrimeField::new(prime).map_err(|e| CliError::Usage(e.to_string()))?;
            let trees = match (tree, all_n) {
                (Some(p), _) => vec![read_tree(&p)?],
                (None, Some(k)) if (2..=MAX_ALL_N).contains(&k) => {
                    let mut v = Vec::new();
                    for n in 2..=k {
                        v.extend(all_trees(n)?);
                    }
                    v
                }
                (None, Some(k)) => {
                    return Err(CliError::Usage(format!("--all-n must lie in 2..={MAX_ALL_N}, got {k}")))
                }
                (None, None) => return Err(CliError::Usage("one of --tree or --all-n is required".into())),
            };
            if trials == 0 {
                return Err(CliError::Usage("--trials must be positive".into()));
            }
            let opts = VerifyOptions { trials, seed, field, corrupt };
            let report = verify::verify(target, &trees, &opts)?;
            let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            emit(out.as_deref(), &json)?;
            if !report.ok {
                eprintln!("{} of {} trees failed", report.failed, report.trees);
            }
            Ok(report.ok)
        }
        Command::Dump { kind, tree, arrowflow, out } => {
            let tree = read_tree(&tree)?;
            let text = dump::dump(kind, &tree, arrowflow.as_deref())?;
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prufer_parsing() {
        assert_eq!(parse_prufer("1, 1,2").unwrap(), vec![1, 1, 2]);
        assert_eq!(parse_prufer("").unwrap(), Vec::<usize>::new());
        assert!(parse_prufer("1,x").is_err());
    }

    #[test]
    fn gen_tree_star_from_prufer() {
        let t = gen_tree(None, Some("1,1"), 0).unwrap();
        assert_eq!(treefile::format_tree(&t), "4\n1 2\n1 3\n1 4\n");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

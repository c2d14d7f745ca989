use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cannon_growth::bundled;
use cannon_growth::config::{parse_config, parse_config_file, JobConfig};
use cannon_growth::run::{run, Command, GrowthKind, RunOptions};
use cannon_growth::Error;
use clap::{ArgGroup, Parser, Subcommand};

/// Exact growth series of groups with falsification by fellow traveler.
#[derive(Parser, Debug)]
#[command(name = "cannon", version)]
struct Cli {
    /// Skip the brute-force oracle comparisons.
    #[arg(long, global = true)]
    unchecked: bool,
    /// Omit the [timings] block from the report.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Directory for ball caches.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Test the rewriting rules for local confluence.
    CheckConfluence { config: PathBuf },
    /// Run bounded Knuth-Bendix completion and print the rules.
    Complete { config: PathBuf },
    /// Certify the fellow traveler property with constant M up to radius R.
    CheckFftp { config: PathBuf },
    /// Check bounded and fellow projections onto a subgroup.
    CheckProjections { subgroup: String, config: PathBuf },
    /// Build the type automaton and validate it.
    BuildAutomaton { config: PathBuf },
    /// Vertex or geodesic growth series.
    #[command(group(ArgGroup::new("kind").required(true).args(["sphere", "ball", "geodesic"])))]
    Growth {
        #[arg(long)]
        sphere: bool,
        #[arg(long)]
        ball: bool,
        #[arg(long)]
        geodesic: bool,
        config: PathBuf,
    },
    /// Growth series of the coset graph G/H.
    CosetGrowth { subgroup: String, config: PathBuf },
    /// Growth of translates of a finite subgraph.
    EmbedGrowth { subgraph: String, config: PathBuf },
    /// Acceptor of shortlex-least coset-geodesic words.
    ShortlexTransversal { subgroup: String, config: PathBuf },
    /// Exponential growth rates of every series.
    Rate { config: PathBuf },
    /// Print a DFA: automaton, geodesics, cone-types, irreducible,
    /// language, coset:H or transversal:H.
    ExportDfa {
        which: String,
        config: PathBuf,
        /// Also write the DFA text to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run every bundled example against the oracles.
    Selftest,
}

/// A config path, falling back to the bundled group of the same stem.
fn load(path: &Path) -> Result<JobConfig, Error> {
    if path.exists() {
        return parse_config_file(path);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    match bundled::text(stem) {
        Some(text) => Ok(parse_config(text, &format!("{stem}.gs"))?),
        None => Err(Error::Io(format!("{}: no such file or bundled group", path.display()))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, config, out) = match cli.command {
        Sub::CheckConfluence { config } => (Command::CheckConfluence, Some(config), None),
        Sub::Complete { config } => (Command::Complete, Some(config), None),
        Sub::CheckFftp { config } => (Command::CheckFftp, Some(config), None),
        Sub::CheckProjections { subgroup, config } => (Command::CheckProjections(subgroup), Some(config), None),
        Sub::BuildAutomaton { config } => (Command::BuildAutomaton, Some(config), None),
        Sub::Growth {
            sphere,
            ball,
            config,
            ..
        } => {
            let kind = if sphere {
                GrowthKind::Sphere
            } else if ball {
                GrowthKind::Ball
            } else {
                GrowthKind::Geodesic
            };
            (Command::Growth(kind), Some(config), None)
        }
        Sub::CosetGrowth { subgroup, config } => (Command::CosetGrowth(subgroup), Some(config), None),
        Sub::EmbedGrowth { subgraph, config } => (Command::EmbedGrowth(subgraph), Some(config), None),
        Sub::ShortlexTransversal { subgroup, config } => (Command::ShortlexTransversal(subgroup), Some(config), None),
        Sub::Rate { config } => (Command::Rate, Some(config), None),
        Sub::ExportDfa { which, config, out } => (Command::ExportDfa(which), Some(config), out),
        Sub::Selftest => (Command::Selftest, None, None),
    };
    let opts = RunOptions {
        unchecked: cli.unchecked,
        cache_dir: cli.cache_dir,
    };
    let result = config
        .as_deref()
        .map(load)
        .transpose()
        .and_then(|cfg| run(&cmd, cfg.as_ref(), &opts));
    match result {
        Ok(report) => {
            print!("{}", report.render(!cli.no_timings));
            if let (Some(path), Some(text)) = (out, &report.dfa) {
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", cmd.label());
            ExitCode::from(2)
        }
    }
}

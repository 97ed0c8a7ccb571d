use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hodge_invariants::corpus;
use hodge_invariants::hodge::HarmonicKind;
use hodge_invariants::report::{self, corpus_listing, error_json, Check, Command};
use hodge_invariants::{Error, Result};

#[derive(Parser)]
#[command(name = "hodgecalc", version, about = "Exact invariant Hodge numbers of nilmanifolds and solvmanifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Metric to use (or metric pattern for `symbolic`); defaults to the first one in the file.
    #[arg(long, global = true)]
    metric: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    D,
    Dbar,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the presentation, classify it, report Betti numbers.
    Validate { manifold: String },
    /// Full tables of h_d, h_dbar and h_J.
    Numbers { manifold: String },
    /// A basis of harmonic (p,q)-forms.
    Harmonic {
        manifold: String,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
        #[arg(long, value_enum, default_value = "d")]
        kind: Kind,
    },
    /// Representatives of H^{p,q}_J.
    Jcoh {
        manifold: String,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
    },
    /// Pure and full at an even stage, with witnesses.
    Purefull {
        manifold: String,
        #[arg(long)]
        stage: usize,
    },
    /// Star-eigenvalue refinement of middle-degree cohomology.
    Gpm { manifold: String },
    /// Differential-ring computations with non-constant coefficients.
    Symbolic {
        manifold: String,
        #[arg(long, default_value = "dstar-sigma")]
        check: String,
    },
    /// Print the canonical form of a manifold file.
    Canon { manifold: String },
    /// Bundled manifolds.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    List,
    Show { name: String },
}

fn execute(cli: &Cli) -> Result<String> {
    let metric = cli.metric.as_deref();
    let (manifold, cmd) = match &cli.cmd {
        Cmd::Validate { manifold } => (manifold, Command::Validate),
        Cmd::Numbers { manifold } => (manifold, Command::Numbers),
        Cmd::Harmonic { manifold, p, q, kind } => {
            let kind = match kind {
                Kind::D => HarmonicKind::D,
                Kind::Dbar => HarmonicKind::Dbar,
            };
            (manifold, Command::Harmonic { p: *p, q: *q, kind })
        }
        Cmd::Jcoh { manifold, p, q } => (manifold, Command::Jcoh { p: *p, q: *q }),
        Cmd::Purefull { manifold, stage } => (manifold, Command::Purefull { stage: *stage }),
        Cmd::Gpm { manifold } => (manifold, Command::Gpm),
        Cmd::Symbolic { manifold, check } => (manifold, Command::Symbolic { check: Check::from_name(check)? }),
        Cmd::Canon { manifold } => {
            let file = match corpus::entry(manifold) {
                Ok(e) => e.file(),
                Err(_) => {
                    let text = std::fs::read_to_string(manifold).map_err(|_| Error::UnknownManifold(manifold.clone()))?;
                    hodge_invariants::manifold::parse(&text)?
                }
            };
            return Ok(file.serialize());
        }
        Cmd::Corpus { action: CorpusCmd::List } => {
            let list = corpus_listing();
            if cli.json {
                return Ok(serde_json::to_string_pretty(&list).expect("listing serializes") + "\n");
            }
            return Ok(list.iter().map(|e| format!("{} ({})\n", e.name, e.class.name())).collect());
        }
        Cmd::Corpus { action: CorpusCmd::Show { name } } => {
            let e = corpus::entry(name)?;
            if cli.json {
                return Ok(serde_json::json!({ "name": e.name, "text": e.text }).to_string() + "\n");
            }
            return Ok(e.text.to_string());
        }
    };
    let target = report::load(manifold)?;
    let r = report::run(&target, &cmd, metric)?;
    Ok(if cli.json { r.to_json() + "\n" } else { r.to_text() })
}

// A closed pipe (`hodgecalc ... | head`) is not an error.
fn emit(text: &str) -> ExitCode {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(err) if err.kind() != std::io::ErrorKind::BrokenPipe => fail(&Error::Usage(format!("cannot write output: {err}"))),
        _ => ExitCode::SUCCESS,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("{}", error_json(e));
    ExitCode::from(e.class() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            return emit(&e.render().to_string());
        }
        Err(e) => return fail(&Error::Usage(e.render().to_string().trim().to_string())),
    };
    match execute(&cli) {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(err) => fail(&Error::Usage(format!("cannot write `{path}`: {err}"))),
            },
            None => emit(&text),
        },
        Err(e) => fail(&e),
    }
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tanglekit::diagram::{bracket_budget, emit_pd, identify_link, linking_number, parse_pd, simplify};
use tanglekit::enumerate::{verify_split_or_parallel, MAX_CROSSINGS};
use tanglekit::experiments::{linking_matrix, pjh_tangle, solve_system, verify_solution_tangle, ExperimentError};
use tanglekit::graphdeduce::deduce;
use tanglekit::{DiagramError, ExperimentSystem, Fact, FactBase, SimplifyMode, TangleDiagram};

#[derive(Parser)]
#[command(name = "tanglekit", version, about = "Tangle calculus, diagram checks and planarity deduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the experiment system and print the solution report.
    Solve {
        /// Experiment products as JSON; the default system when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the PJH solution tangle.
    Pjh {
        #[arg(long, value_enum, default_value_t = Emit::Pd)]
        emit: Emit,
    },
    /// Check the experiment equations on a 3-string tangle.
    Verify {
        /// PD file; stdin when omitted or `-`.
        #[arg(long)]
        pd: Option<PathBuf>,
        /// Also check the in trans equations.
        #[arg(long)]
        in_trans: bool,
    },
    /// Identify a link, or the numerator closure of a 2-string tangle.
    Identify {
        #[arg(long)]
        pd: Option<PathBuf>,
    },
    /// Linking numbers of a link or of a 3-string tangle.
    Lk {
        #[arg(long)]
        pd: Option<PathBuf>,
    },
    /// Generate and classify all 3-string diagrams up to a crossing count.
    Enumerate {
        #[arg(long, default_value_t = 5)]
        max_crossings: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write each unresolved diagram as a PD file in this directory.
        #[arg(long)]
        unresolved_dir: Option<PathBuf>,
        /// Worker threads; all cores when omitted.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Forward-chain the planarity rules from a set of facts.
    Deduce {
        /// JSON list of facts, or an object with a `facts` list.
        #[arg(long)]
        facts: PathBuf,
        /// Include the proof trace.
        #[arg(long)]
        trace: bool,
    },
    /// Simplify a diagram by Reidemeister moves and print it.
    Reduce {
        #[arg(long)]
        pd: Option<PathBuf>,
        /// Allow moves that twist boundary points.
        #[arg(long)]
        free: bool,
        /// Fail unless the result has at most this many crossings.
        #[arg(long)]
        target: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Pd,
    Json,
}

/// Exit statuses besides success and usage errors.
#[derive(Debug)]
enum Failure {
    /// A check ran and did not pass; the report has been printed.
    Verification,
    Budget(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let budget = e.chain().any(|c| {
            matches!(c.downcast_ref::<DiagramError>(), Some(DiagramError::BudgetExceeded { .. }))
                || matches!(
                    c.downcast_ref::<ExperimentError>(),
                    Some(ExperimentError::Diagram(DiagramError::BudgetExceeded { .. }))
                )
        });
        if budget {
            Failure::Budget(format!("{e:#}"))
        } else {
            Failure::Input(e)
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_diagram(path: Option<&Path>) -> anyhow::Result<TangleDiagram> {
    let text = read_input(path)?;
    Ok(parse_pd(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn solve(config: Option<&Path>) -> Outcome {
    let sys = match config {
        Some(p) => {
            let text = read_input(Some(p))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ExperimentSystem::default(),
    };
    match solve_system(&sys) {
        Ok(report) => Ok(print_json(&report)?),
        Err(e @ ExperimentError::NoSolution { .. }) => {
            print_json(&serde_json::json!({ "error": e.to_string() }))?;
            Err(Failure::Verification)
        }
        Err(e) => Err(anyhow::Error::from(e).into()),
    }
}

fn pjh(emit: Emit) -> Outcome {
    let d = pjh_tangle();
    match emit {
        Emit::Pd => print!("{}", emit_pd(&d)),
        Emit::Json => {
            let (capped, pairwise) = linking_matrix(&d).map_err(anyhow::Error::from)?;
            print_json(&serde_json::json!({
                "pd": emit_pd(&d),
                "crossings": d.n_crossings(),
                "capped_linking": capped,
                "pairwise_linking": pairwise,
            }))?;
        }
    }
    Ok(())
}

fn verify(pd: Option<&Path>, in_trans: bool) -> Outcome {
    let d = read_diagram(pd)?;
    let report = verify_solution_tangle(&d, in_trans, bracket_budget()).map_err(anyhow::Error::from)?;
    print_json(&report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn identify(pd: Option<&Path>) -> Outcome {
    let d = read_diagram(pd)?;
    let link = match d.n_boundary() {
        0 => d,
        4 => d.numerator().map_err(anyhow::Error::from)?,
        k => return Err(Failure::Input(anyhow!("expected a link or a 2-string tangle, got {k} boundary points"))),
    };
    let id = identify_link(&link, bracket_budget()).map_err(anyhow::Error::from)?;
    print_json(&id)?;
    Ok(())
}

#[derive(Serialize)]
struct LinkMatrix {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

fn lk(pd: Option<&Path>) -> Outcome {
    let d = read_diagram(pd)?;
    if d.n_boundary() == 6 {
        let (capped, pairwise) = linking_matrix(&d).map_err(anyhow::Error::from)?;
        print_json(&serde_json::json!({ "capped": capped, "pairwise": pairwise }))?;
        return Ok(());
    }
    if d.n_boundary() != 0 {
        return Err(Failure::Input(anyhow!("expected a link or a 3-string tangle")));
    }
    let n = d.n_components();
    let entry = |a: usize, b: usize| if a == b { Ok(0) } else { linking_number(&d, a.min(b), a.max(b)) };
    let matrix = (0..n)
        .map(|a| (0..n).map(|b| entry(a, b)).collect::<Result<Vec<i64>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(anyhow::Error::from)?;
    print_json(&LinkMatrix { labels: d.labels().to_vec(), matrix })?;
    Ok(())
}

fn enumerate(max: usize, out: Option<&Path>, unresolved_dir: Option<&Path>, jobs: Option<usize>) -> Outcome {
    if max > MAX_CROSSINGS {
        return Err(Failure::Budget(format!("{max} crossings requested, at most {MAX_CROSSINGS} supported")));
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build().context("starting worker threads")?;
    let report = pool.install(|| verify_split_or_parallel(max)).map_err(|e| anyhow!(e))?;
    if let Some(dir) = unresolved_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for level in &report.levels {
            for (k, code) in level.unresolved.iter().enumerate() {
                let path = dir.join(format!("n{}_{k:05}.pd", level.n));
                fs::write(&path, code).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    let text = serde_json::to_string_pretty(&report).context("serializing report")?;
    match out {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    if report.holds() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FactsFile {
    List(Vec<Fact>),
    Base(FactBase),
}

fn deduce_cmd(facts: &Path, trace: bool) -> Outcome {
    let text = read_input(Some(facts))?;
    let base = match serde_json::from_str(&text).with_context(|| format!("parsing {}", facts.display()))? {
        FactsFile::List(list) => FactBase::new(list),
        FactsFile::Base(b) => FactBase::new(b.facts),
    };
    let d = deduce(&base);
    let mut report = serde_json::json!({
        "closure": d.closure.facts,
        "consistent": d.consistent,
        "rounds": d.rounds,
    });
    if trace {
        report["trace"] = serde_json::to_value(&d.trace).context("serializing trace")?;
    }
    print_json(&report)?;
    if d.consistent {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn reduce(pd: Option<&Path>, free: bool, target: Option<usize>) -> Outcome {
    let d = read_diagram(pd)?;
    let mode = if free { SimplifyMode::Free } else { SimplifyMode::RelBoundary };
    let s = simplify(&d, mode);
    print!("{}", emit_pd(&s));
    match target {
        Some(t) if s.n_crossings() > t => {
            eprintln!("reduced {} -> {} crossings, target {t} not reached", d.n_crossings(), s.n_crossings());
            Err(Failure::Verification)
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve { config } => solve(config.as_deref()),
        Command::Pjh { emit } => pjh(emit),
        Command::Verify { pd, in_trans } => verify(pd.as_deref(), in_trans),
        Command::Identify { pd } => identify(pd.as_deref()),
        Command::Lk { pd } => lk(pd.as_deref()),
        Command::Enumerate { max_crossings, out, unresolved_dir, jobs } => {
            enumerate(max_crossings, out.as_deref(), unresolved_dir.as_deref(), jobs)
        }
        Command::Deduce { facts, trace } => deduce_cmd(&facts, trace),
        Command::Reduce { pd, free, target } => reduce(pd.as_deref(), free, target),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

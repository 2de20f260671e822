//! Command-line prover: `prove` runs one problem and prints an SZS status,
//! `check-lifting` runs the ground-calculus lifting oracle on a file, and
//! `bench` sweeps a directory of problems over the calculus variants and
//! emits a CSV comparison.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use delsup::clause::SelectionStrategy;
use delsup::saturation::{self, CalculusMode, SaturationConfig, SaturationStatus};
use delsup::term::PrecedenceScheme;
use delsup::tptp;

#[derive(Parser)]
#[command(name = "delsup", about = "A superposition prover with delayed unification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Standard,
    Delayed,
    DelayedFp,
    DelayedEager,
}

impl ModeArg {
    fn to_mode(self) -> CalculusMode {
        match self {
            ModeArg::Standard => CalculusMode::Standard,
            ModeArg::Delayed => CalculusMode::Delayed,
            ModeArg::DelayedFp => CalculusMode::DelayedFp,
            ModeArg::DelayedEager => CalculusMode::DelayedEager,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Standard => "standard",
            ModeArg::Delayed => "delayed",
            ModeArg::DelayedFp => "delayed-fp",
            ModeArg::DelayedEager => "delayed-eager",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    None,
    OneNegative,
    AllNegative,
}

impl SelectionArg {
    fn to_strategy(self) -> SelectionStrategy {
        match self {
            SelectionArg::None => SelectionStrategy::None,
            SelectionArg::OneNegative => SelectionStrategy::OneNegative,
            SelectionArg::AllNegative => SelectionStrategy::AllNegative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecedenceArg {
    Occurrence,
    Arity,
    Reverse,
}

impl PrecedenceArg {
    fn to_scheme(self) -> PrecedenceScheme {
        match self {
            PrecedenceArg::Occurrence => PrecedenceScheme::Occurrence,
            PrecedenceArg::Arity => PrecedenceScheme::Arity,
            PrecedenceArg::Reverse => PrecedenceScheme::Reverse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    /// Every symbol weight 1, variable weight 1.
    Uniform,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prove a single TPTP CNF problem.
    Prove {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "delayed")]
        calculus: ModeArg,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        max_clauses: Option<usize>,
        #[arg(long, value_enum, default_value = "all-negative")]
        selection: SelectionArg,
        #[arg(long, value_enum, default_value = "occurrence")]
        precedence: PrecedenceArg,
        #[arg(long, value_enum, default_value = "uniform")]
        kbo_weights: WeightsArg,
        /// Print the refutation trace.
        #[arg(long)]
        proof: bool,
        /// Print saturation statistics.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        include_dir: Vec<PathBuf>,
    },
    /// Check the lifting property of the problem's clause set.
    CheckLifting {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all-negative")]
        selection: SelectionArg,
        /// Grounding depth bound.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, value_enum, default_value = "occurrence")]
        precedence: PrecedenceArg,
        #[arg(long)]
        include_dir: Vec<PathBuf>,
    },
    /// Run every problem in a directory under several calculi; emit CSV.
    Bench {
        dir: PathBuf,
        /// Calculi to compare.
        #[arg(long, value_enum, value_delimiter = ',',
              default_values = ["standard", "delayed", "delayed-fp", "delayed-eager"])]
        modes: Vec<ModeArg>,
        #[arg(long, default_value_t = 10.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 200_000)]
        max_clauses: usize,
        #[arg(long, value_enum, default_value = "all-negative")]
        selection: SelectionArg,
        #[arg(long, value_enum, default_value = "occurrence")]
        precedence: PrecedenceArg,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        include_dir: Vec<PathBuf>,
    },
}

fn load(
    file: &Path,
    include_dirs: &[PathBuf],
    precedence: PrecedenceScheme,
) -> Result<tptp::ProblemFile, String> {
    let mut pf = tptp::parse_file(file, include_dirs)
        .map_err(|e| format!("{}: {e}", file.display()))?;
    pf.sig.assign_precedence(precedence);
    Ok(pf)
}

struct RunOutcome {
    status: SaturationStatus,
    timed_out: bool,
    result: delsup::SaturationResult,
}

fn run(pf: &tptp::ProblemFile, config: &SaturationConfig) -> RunOutcome {
    let started = Instant::now();
    let input = pf.clauses.iter().map(|(_, lits)| lits.clone()).collect();
    let result = saturation::saturate(&pf.sig, input, config);
    let timed_out = config
        .time_limit
        .is_some_and(|limit| started.elapsed() >= limit);
    RunOutcome { status: result.status, timed_out, result }
}

fn szs(status: SaturationStatus, timed_out: bool) -> &'static str {
    match status {
        SaturationStatus::Unsatisfiable => "Unsatisfiable",
        SaturationStatus::Saturated => "Satisfiable",
        SaturationStatus::ResourceOut => {
            if timed_out {
                "Timeout"
            } else {
                "GaveUp"
            }
        }
    }
}

fn prove(
    file: &Path,
    calculus: ModeArg,
    time_limit: Option<f64>,
    max_clauses: Option<usize>,
    selection: SelectionArg,
    precedence: PrecedenceArg,
    proof: bool,
    stats: bool,
    include_dirs: &[PathBuf],
) -> Result<(), String> {
    let pf = load(file, include_dirs, precedence.to_scheme())?;
    let config = SaturationConfig {
        mode: calculus.to_mode(),
        selection: selection.to_strategy(),
        time_limit: time_limit.map(Duration::from_secs_f64),
        max_clauses,
        ..SaturationConfig::default()
    };
    let outcome = run(&pf, &config);
    println!("% SZS status {}", szs(outcome.status, outcome.timed_out));
    if proof {
        if let Some(ids) = outcome.result.proof_ids() {
            println!("% SZS output start Proof");
            for id in ids {
                let c = &outcome.result.clauses[id.0];
                let premises: Vec<String> =
                    c.derivation.premises.iter().map(|p| p.0.to_string()).collect();
                println!(
                    "% {}. {} [{}{}{}]",
                    id.0,
                    c.display(&pf.sig),
                    c.derivation.rule,
                    if premises.is_empty() { "" } else { " " },
                    premises.join(",")
                );
            }
            println!("% SZS output end Proof");
        }
    }
    if stats {
        let s = outcome.result.stats;
        println!("% generated: {}", s.generated);
        println!("% simplified: {}", s.simplified);
        println!("% subsumed: {}", s.subsumed);
        println!("% tautologies: {}", s.tautologies);
        println!("% iterations: {}", s.iterations);
        println!("% clauses: {}", outcome.result.clauses.len());
    }
    Ok(())
}

fn check_lifting(
    file: &Path,
    selection: SelectionArg,
    depth: usize,
    precedence: PrecedenceArg,
    include_dirs: &[PathBuf],
) -> Result<bool, String> {
    let pf = load(file, include_dirs, precedence.to_scheme())?;
    let clauses: Vec<_> = pf.clauses.iter().map(|(_, lits)| lits.clone()).collect();
    let violations =
        delsup::ground::check_lifting(&pf.sig, &clauses, selection.to_strategy(), depth)
            .map_err(|e| format!("{e:?}"))?;
    if violations.is_empty() {
        println!("lifting check passed: no violations at depth {depth}");
        Ok(true)
    } else {
        println!("lifting check FAILED: {} violation(s)", violations.len());
        for v in &violations {
            println!("  {}", v.description);
        }
        Ok(false)
    }
}

struct BenchRow {
    problem: String,
    mode: &'static str,
    status: String,
    wall_ms: u128,
    generated: usize,
    iterations: usize,
}

#[allow(clippy::too_many_arguments)]
fn bench(
    dir: &Path,
    modes: &[ModeArg],
    time_limit: f64,
    max_clauses: usize,
    selection: SelectionArg,
    precedence: PrecedenceArg,
    out: Option<&Path>,
    include_dirs: &[PathBuf],
) -> Result<(), String> {
    let mut problems: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "p"))
        .collect();
    problems.sort();
    let jobs: Vec<(PathBuf, ModeArg)> = problems
        .iter()
        .flat_map(|p| modes.iter().map(move |m| (p.clone(), *m)))
        .collect();
    let mut rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|(path, mode)| {
            let problem = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let started = Instant::now();
            match load(path, include_dirs, precedence.to_scheme()) {
                Err(_) => BenchRow {
                    problem,
                    mode: mode.name(),
                    status: "Error".into(),
                    wall_ms: started.elapsed().as_millis(),
                    generated: 0,
                    iterations: 0,
                },
                Ok(pf) => {
                    let config = SaturationConfig {
                        mode: mode.to_mode(),
                        selection: selection.to_strategy(),
                        time_limit: Some(Duration::from_secs_f64(time_limit)),
                        max_clauses: Some(max_clauses),
                        ..SaturationConfig::default()
                    };
                    let outcome = run(&pf, &config);
                    BenchRow {
                        problem,
                        mode: mode.name(),
                        status: szs(outcome.status, outcome.timed_out).into(),
                        wall_ms: started.elapsed().as_millis(),
                        generated: outcome.result.stats.generated,
                        iterations: outcome.result.stats.iterations,
                    }
                }
            }
        })
        .collect();
    let mode_rank = |m: &str| modes.iter().position(|x| x.name() == m).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| {
        a.problem
            .cmp(&b.problem)
            .then(mode_rank(a.mode).cmp(&mode_rank(b.mode)))
    });

    let mut text = String::from("problem,mode,status,wall_ms,generated,iterations\n");
    for r in &rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.problem, r.mode, r.status, r.wall_ms, r.generated, r.iterations
        ));
    }
    let solved = |r: &BenchRow| r.status == "Unsatisfiable" || r.status == "Satisfiable";
    text.push_str("# summary\n");
    for m in modes {
        let n = rows.iter().filter(|r| r.mode == m.name() && solved(r)).count();
        text.push_str(&format!("# solved {}: {}\n", m.name(), n));
    }
    for m in modes {
        let unique = problems
            .iter()
            .filter(|p| {
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let solvers: Vec<&str> = rows
                    .iter()
                    .filter(|r| r.problem == name && solved(r))
                    .map(|r| r.mode)
                    .collect();
                solvers == [m.name()]
            })
            .count();
        text.push_str(&format!("# unique {}: {}\n", m.name(), unique));
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Prove {
            file,
            calculus,
            time_limit,
            max_clauses,
            selection,
            precedence,
            kbo_weights: WeightsArg::Uniform,
            proof,
            stats,
            include_dir,
        } => prove(
            &file, calculus, time_limit, max_clauses, selection, precedence, proof, stats,
            &include_dir,
        )
        .map(|()| ExitCode::SUCCESS),
        Cmd::CheckLifting { file, selection, depth, precedence, include_dir } => {
            check_lifting(&file, selection, depth, precedence, &include_dir).map(|ok| {
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            })
        }
        Cmd::Bench {
            dir,
            modes,
            time_limit,
            max_clauses,
            selection,
            precedence,
            out,
            include_dir,
        } => bench(
            &dir,
            &modes,
            time_limit,
            max_clauses,
            selection,
            precedence,
            out.as_deref(),
            &include_dir,
        )
        .map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

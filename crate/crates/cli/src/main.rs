use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sortsweep::appendix::run_appendix_suite;
use sortsweep::cnf::evaluate;
use sortsweep::dimacs::{parse_dimacs_bytes, write_dimacs};
use sortsweep::expand::{expand, ExpandLimits, OutcomeKind};
use sortsweep::harness::{
    bench, gen_complete_signs, gen_expansion_example, gen_random, random_corpus, run_differential,
    CorpusSpec, GenConfig, HarnessConfig, Instance,
};
use sortsweep::oracle::{self, Verdict};
use sortsweep::reduce::{reduce_to_fixpoint, IrreducibleForm, ReductionTrace, Status};
use sortsweep::{Backend, Formula, ReduceConfig};

const SAT: u8 = 10;
const UNSAT: u8 = 20;
const UNKNOWN: u8 = 30;
const FAILURE: u8 = 1;

#[derive(Parser)]
#[command(
    name = "sortsweep",
    version,
    about = "Sort-and-sweep reduction solver for CNF of width at most 3"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Sorted,
    Pairwise,
}

#[derive(Args)]
struct EngineArgs {
    /// Candidate discovery backend.
    #[arg(long, value_enum, default_value = "sorted")]
    backend: BackendArg,
    /// Enable the self-subsuming resolution rule.
    #[arg(long)]
    enable_r4: bool,
}

impl EngineArgs {
    fn config(&self) -> ReduceConfig {
        ReduceConfig {
            backend: match self.backend {
                BackendArg::Sorted => Backend::Sorted,
                BackendArg::Pairwise => Backend::Pairwise,
            },
            self_subsumption: self.enable_r4,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce, then expand until a model is found.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Maximum branch visits during expansion.
        #[arg(long)]
        budget: Option<u64>,
        /// Omit the v-line.
        #[arg(long)]
        no_model: bool,
        /// Write the reduction trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the irreducible form as DIMACS.
    Reduce {
        path: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// List satisfying branches of the irreducible form.
    Enumerate {
        path: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide with the reference solver (truth table up to 20 variables).
    Oracle { path: PathBuf },
    /// Check the worked examples and rule identities.
    VerifyAppendix {
        #[arg(long)]
        enable_r4: bool,
    },
    /// Write a generated instance as DIMACS.
    Gen {
        #[arg(long, required_unless_present_any = ["complete_signs", "expansion_example"])]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Clause-to-variable ratio; overrides --m.
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// All sign patterns over K variables (only K = 3).
        #[arg(long, value_name = "K")]
        complete_signs: Option<u32>,
        /// Units plus two residual 3-clauses.
        #[arg(long)]
        expansion_example: bool,
    },
    /// Differential run against the oracle.
    Harness {
        /// Number of random instances.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [3.0, 4.3, 5.0])]
        ratios: Vec<f64>,
        /// DIMACS files to run instead of a generated corpus.
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long)]
        workers: Option<usize>,
        /// Directory for report.txt and certificates.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sort and pair counts against their bounds.
    Bench {
        /// DIMACS input; a random instance is generated when absent.
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        n: u32,
        #[arg(long, default_value_t = 200)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        enable_r4: bool,
    },
}

/// Error reported on stderr before exiting with status 1.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn load(path: &Path) -> Result<Formula, Fail> {
    let bytes = fs::read(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    let parsed =
        parse_dimacs_bytes(&bytes).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("c {}: {w}", path.display());
    }
    Ok(parsed.formula)
}

fn write_trace(path: Option<&Path>, trace: &ReductionTrace) -> Result<(), Fail> {
    if let Some(p) = path {
        fs::write(p, trace.to_log()).map_err(|e| Fail(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn print_stats(ir: &IrreducibleForm, trace: &ReductionTrace) {
    println!(
        "c reduction: {} after {} sweeps ({} productive), {} steps, {} eliminations",
        ir.status,
        trace.sweeps_run,
        trace.productive_sweeps,
        trace.steps.len(),
        trace.eliminations
    );
}

fn solve(
    path: &Path,
    cfg: ReduceConfig,
    budget: Option<u64>,
    no_model: bool,
    trace_path: Option<&Path>,
) -> Result<u8, Fail> {
    let f = load(path)?;
    let (ir, trace) = reduce_to_fixpoint(&f, cfg);
    write_trace(trace_path, &trace)?;
    print_stats(&ir, &trace);
    if ir.status == Status::ContradictionFound {
        println!("s UNSATISFIABLE");
        println!("c reason: reduction");
        return Ok(UNSAT);
    }
    let out = expand(&ir, ExpandLimits::first_solution(budget))?;
    println!(
        "c expansion: {} branch visits, {} re-routes",
        out.branches_explored, out.reroutes
    );
    match out.kind {
        OutcomeKind::FoundAssignments => {
            let model = out.branches[0].total();
            if evaluate(&f, &model)? {
                println!("s SATISFIABLE");
                if !no_model {
                    println!("{}", model.to_value_line());
                }
                Ok(SAT)
            } else {
                println!("c error: model failed verification against the input");
                println!("s UNKNOWN");
                Ok(UNKNOWN)
            }
        }
        OutcomeKind::Exhausted => {
            println!("s UNSATISFIABLE");
            println!("c reason: exhaustion");
            Ok(UNSAT)
        }
        OutcomeKind::BudgetExceeded => {
            println!("s UNKNOWN");
            Ok(UNKNOWN)
        }
    }
}

fn reduce(path: &Path, cfg: ReduceConfig, trace_path: Option<&Path>) -> Result<u8, Fail> {
    let f = load(path)?;
    let (ir, trace) = reduce_to_fixpoint(&f, cfg);
    write_trace(trace_path, &trace)?;
    print_stats(&ir, &trace);
    for s in &trace.sweep_stats {
        println!(
            "c sweep {}: {} clauses, {} records, {} comparisons, {} candidates, {} applied",
            s.sweep, s.clauses, s.records, s.comparisons, s.candidates, s.applied
        );
    }
    print!("{}", write_dimacs(&ir.formula));
    Ok(0)
}

fn enumerate(
    path: &Path,
    cfg: ReduceConfig,
    limit: usize,
    budget: Option<u64>,
) -> Result<u8, Fail> {
    let f = load(path)?;
    let (ir, _) = reduce_to_fixpoint(&f, cfg);
    if ir.status == Status::ContradictionFound {
        println!("c branches: 0");
        println!("s UNSATISFIABLE");
        println!("c reason: reduction");
        return Ok(UNSAT);
    }
    let limits = ExpandLimits {
        max_solutions: Some(limit),
        max_visits: budget,
    };
    let out = expand(&ir, limits)?;
    for (k, b) in out.branches.iter().enumerate() {
        let model = b.total();
        if !evaluate(&f, &model)? {
            return Err(Fail(format!("branch {} fails the input formula", k + 1)));
        }
        let picks: Vec<String> = b
            .chosen
            .iter()
            .map(|&(_, l)| l.to_dimacs().to_string())
            .collect();
        println!("c branch {}: {}", k + 1, picks.join(" "));
        println!("{}", model.to_value_line());
    }
    println!("c branches: {}", out.branches.len());
    Ok(match out.kind {
        OutcomeKind::FoundAssignments => {
            println!("s SATISFIABLE");
            SAT
        }
        OutcomeKind::Exhausted => {
            println!("s UNSATISFIABLE");
            println!("c reason: exhaustion");
            UNSAT
        }
        OutcomeKind::BudgetExceeded => {
            println!("s UNKNOWN");
            UNKNOWN
        }
    })
}

fn run_oracle(path: &Path) -> Result<u8, Fail> {
    let f = load(path)?;
    let r = if f.num_vars() <= 20 {
        oracle::truth_table_solve(&f)?
    } else {
        oracle::backtracking_solve(&f)
    };
    if let Some(c) = r.model_count {
        println!("c models: {c}");
    }
    match (r.verdict, r.witness) {
        (Verdict::Sat, Some(w)) => {
            println!("s SATISFIABLE");
            println!("{}", w.to_value_line());
            Ok(SAT)
        }
        _ => {
            println!("s UNSATISFIABLE");
            Ok(UNSAT)
        }
    }
}

fn verify_appendix(enable_r4: bool) -> u8 {
    let report = run_appendix_suite(enable_r4);
    for r in report.records() {
        println!("{r}");
    }
    for line in report.human_summary().lines() {
        println!("c {line}");
    }
    if report.summary.all_equalities_hold() {
        0
    } else {
        FAILURE
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::Solve {
            path,
            engine,
            budget,
            no_model,
            trace,
        } => solve(&path, engine.config(), budget, no_model, trace.as_deref()),
        Command::Reduce {
            path,
            engine,
            trace,
        } => reduce(&path, engine.config(), trace.as_deref()),
        Command::Enumerate {
            path,
            engine,
            limit,
            budget,
        } => enumerate(&path, engine.config(), limit, budget),
        Command::Oracle { path } => run_oracle(&path),
        Command::VerifyAppendix { enable_r4 } => Ok(verify_appendix(enable_r4)),
        Command::Gen {
            n,
            m,
            ratio,
            seed,
            complete_signs,
            expansion_example,
        } => {
            let f = if expansion_example {
                gen_expansion_example()
            } else if let Some(k) = complete_signs {
                gen_complete_signs(k)?
            } else {
                gen_random(&GenConfig {
                    n: n.unwrap_or(0),
                    m,
                    seed,
                    ratio,
                })?
            };
            print!("{}", write_dimacs(&f));
            Ok(0)
        }
        Command::Harness {
            count,
            seed,
            n_min,
            n_max,
            ratios,
            input,
            engine,
            budget,
            workers,
            out,
        } => {
            let instances = if input.is_empty() {
                if n_min < 3 || n_max < n_min || ratios.is_empty() {
                    return Err(Fail(
                        "need 3 <= n-min <= n-max and at least one ratio".into(),
                    ));
                }
                random_corpus(&CorpusSpec {
                    count,
                    base_seed: seed,
                    n_min,
                    n_max,
                    ratios,
                })?
            } else {
                input
                    .iter()
                    .enumerate()
                    .map(|(index, p)| {
                        Ok(Instance {
                            index,
                            seed: None,
                            ratio: None,
                            formula: load(p)?,
                        })
                    })
                    .collect::<Result<_, Fail>>()?
            };
            let cfg = HarnessConfig {
                reduce: engine.config(),
                max_visits: Some(budget),
                workers,
                ..HarnessConfig::default()
            };
            let report = run_differential(&instances, &cfg);
            if let Some(dir) = &out {
                report
                    .write_to(dir)
                    .map_err(|e| Fail(format!("{}: {e}", dir.display())))?;
            }
            for line in report.human_summary().lines() {
                println!("c {line}");
            }
            if let Some(dir) = &out {
                println!("c report written to {}", dir.display());
            }
            Ok(0)
        }
        Command::Bench {
            path,
            n,
            m,
            seed,
            enable_r4,
        } => {
            let f = match path {
                Some(p) => load(&p)?,
                None => gen_random(&GenConfig {
                    n,
                    m,
                    seed,
                    ratio: None,
                })?,
            };
            let b = bench(&f, enable_r4);
            println!("{}", b.record());
            println!(
                "c sort: {} comparisons for {} records, bound 2R log2 R + R = {:.1}, 6m log2 6m = {:.1}",
                b.comparisons, b.records, b.comparison_bound, b.sort_bound
            );
            println!(
                "c pairwise: {} pairs in the first sweep (m(m-1)/2 = {}), {} in total (m^3 = {})",
                b.pairwise_first_sweep_pairs, b.pair_bound, b.pairwise_total_pairs, b.cubic_bound
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { FAILURE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(FAILURE)
        }
    }
}

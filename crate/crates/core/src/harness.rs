//! Instance generation and the differential harness.
//!
//! Every instance runs through reduction and expansion, any model is checked
//! against the original formula, and the verdict is compared with the oracle.
//! Outcomes fall into exactly one class; an unsatisfiable instance that the
//! reducer leaves irreducible is a claim violation and gets a certificate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cnf::{evaluate, Assignment, Formula, Lit, Var};
use crate::dimacs::{parse_dimacs, write_dimacs};
use crate::expand::{expand, ExpandLimits, OutcomeKind};
use crate::oracle::{self, Verdict};
use crate::reduce::{
    reduce_to_fixpoint, replay, IrreducibleForm, ReduceConfig, ReductionTrace, Status,
};
use crate::report::Record;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("width-3 generation needs at least 3 variables, got {0}")]
    TooFewVariables(u32),
    #[error("{m} distinct 3-clauses requested, only {max} exist over {n} variables")]
    TooManyClauses { n: u32, m: usize, max: u64 },
    #[error("complete sign families are only provided for 3 variables, got {0}")]
    Unsupported(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub n: u32,
    pub m: usize,
    pub seed: u64,
    /// When set, the clause count is `round(ratio * n)` and `m` is ignored.
    pub ratio: Option<f64>,
}

impl GenConfig {
    pub fn clause_count(&self) -> usize {
        match self.ratio {
            Some(r) => (r * f64::from(self.n)).round() as usize,
            None => self.m,
        }
    }
}

/// Distinct 3-clauses over `n` variables: `C(n,3) * 8`.
fn distinct_triples(n: u32) -> u64 {
    let n = u64::from(n);
    n * n.saturating_sub(1) * n.saturating_sub(2) / 6 * 8
}

/// Uniform random 3-CNF: each clause draws three distinct variables and
/// independent signs. Repeated clauses are redrawn so the result has exactly
/// `m` clauses.
pub fn gen_random(cfg: &GenConfig) -> Result<Formula, GenError> {
    if cfg.n < 3 {
        return Err(GenError::TooFewVariables(cfg.n));
    }
    let m = cfg.clause_count();
    let max = distinct_triples(cfg.n);
    if m as u64 > max {
        return Err(GenError::TooManyClauses { n: cfg.n, m, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = BTreeSet::new();
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let mut lits: Vec<Lit> = index::sample(&mut rng, cfg.n as usize, 3)
            .into_iter()
            .map(|i| Lit::new(Var::new(i as u32 + 1), rng.random::<bool>()))
            .collect();
        lits.sort_unstable();
        if seen.insert(lits.clone()) {
            clauses.push(lits);
        }
    }
    Ok(Formula::new(cfg.n, clauses).expect("generated clauses are valid"))
}

/// All eight sign patterns over three variables, `(A+B+C)` first and `!C`
/// varying fastest.
pub fn gen_complete_signs(k: u32) -> Result<Formula, GenError> {
    if k != 3 {
        return Err(GenError::Unsupported(k));
    }
    let clauses: Vec<Vec<Lit>> = (0u32..8)
        .map(|mask| {
            (1..=3)
                .map(|v| Lit::new(Var::new(v), mask >> (3 - v) & 1 == 1))
                .collect()
        })
        .collect();
    Ok(Formula::new(3, clauses).expect("sign patterns are valid"))
}

/// Variable labels for [`gen_expansion_example`], in index order.
pub const EXPANSION_EXAMPLE_NAMES: [&str; 12] =
    ["A", "B", "C", "D", "E", "M", "G", "J", "P", "W", "Q", "R"];

/// Units `A.B.!C.D.E.M` with residual clauses `(G+J+P)` and `(W+Q+R)`.
///
/// Variables are numbered in order of appearance, so ascending literal order
/// inside each residual clause is `G, J, P` and `W, Q, R`.
pub fn gen_expansion_example() -> Formula {
    Formula::from_signed(
        12,
        &[
            vec![1],
            vec![2],
            vec![-3],
            vec![4],
            vec![5],
            vec![6],
            vec![7, 8, 9],
            vec![10, 11, 12],
        ],
    )
    .expect("fixture is valid")
}

/// One instance of a harness corpus.
#[derive(Debug, Clone)]
pub struct Instance {
    pub index: usize,
    /// Generator seed, or `None` for externally supplied formulas.
    pub seed: Option<u64>,
    pub ratio: Option<f64>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub count: usize,
    pub base_seed: u64,
    pub n_min: u32,
    pub n_max: u32,
    pub ratios: Vec<f64>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 1000,
            base_seed: 1,
            n_min: 4,
            n_max: 20,
            ratios: vec![3.0, 4.3, 5.0],
        }
    }
}

/// Instance `i` uses ratio `ratios[i % r]`, cycles `n` through
/// `n_min..=n_max`, and seed `base_seed + i`.
pub fn random_corpus(spec: &CorpusSpec) -> Result<Vec<Instance>, GenError> {
    let span = (spec.n_max - spec.n_min + 1) as usize;
    (0..spec.count)
        .map(|i| {
            let ratio = spec.ratios[i % spec.ratios.len()];
            let n = spec.n_min + ((i / spec.ratios.len()) % span) as u32;
            let seed = spec.base_seed.wrapping_add(i as u64);
            let cfg = GenConfig {
                n,
                m: 0,
                seed,
                ratio: Some(ratio),
            };
            Ok(Instance {
                index: i,
                seed: Some(seed),
                ratio: Some(ratio),
                formula: gen_random(&cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeClass {
    AgreeSat,
    ReductionUnsat,
    ClaimViolation,
    SolverBug,
    Budget,
}

impl OutcomeClass {
    pub const ALL: [OutcomeClass; 5] = [
        OutcomeClass::AgreeSat,
        OutcomeClass::ReductionUnsat,
        OutcomeClass::ClaimViolation,
        OutcomeClass::SolverBug,
        OutcomeClass::Budget,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutcomeClass::AgreeSat => "agree-sat",
            OutcomeClass::ReductionUnsat => "reduction-unsat",
            OutcomeClass::ClaimViolation => "claim-violation",
            OutcomeClass::SolverBug => "solver-bug",
            OutcomeClass::Budget => "budget",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        OutcomeClass::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    TruthTable,
    Backtracking,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::TruthTable => "truth-table",
            OracleMethod::Backtracking => "backtracking",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarnessConfig {
    pub reduce: ReduceConfig,
    /// Branch-visit budget for expansion; `None` searches exhaustively.
    pub max_visits: Option<u64>,
    /// Instances with at most this many variables use the truth table.
    pub truth_table_max_vars: u32,
    /// Worker threads; `None` uses all available cores.
    pub workers: Option<usize>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            reduce: ReduceConfig::default(),
            max_visits: Some(50_000_000),
            truth_table_max_vars: 20,
            workers: None,
        }
    }
}

/// Per-instance classification and measurements.
#[derive(Debug, Clone)]
pub struct InstanceOutcome {
    pub index: usize,
    pub seed: Option<u64>,
    pub ratio: Option<f64>,
    pub n: u32,
    pub m: usize,
    pub class: OutcomeClass,
    /// Why the instance is a solver bug; empty otherwise.
    pub reason: String,
    pub status: Status,
    pub oracle: Verdict,
    pub oracle_method: OracleMethod,
    pub sweeps: u32,
    pub productive_sweeps: u32,
    pub eliminations: usize,
    pub literal_instances: usize,
    pub records: usize,
    pub records_expected: usize,
    pub comparisons: u64,
    pub comparisons_within_bound: bool,
    pub branches: u64,
    pub reroutes: u64,
    pub model: Option<Assignment>,
    pub certificate: Option<Certificate>,
}

impl InstanceOutcome {
    pub fn exceeds_three_sweeps(&self) -> bool {
        self.productive_sweeps > 3
    }

    pub fn record(&self) -> Record {
        Record::new("instance")
            .field("index", self.index)
            .field(
                "seed",
                self.seed.map_or("na".to_string(), |s| s.to_string()),
            )
            .field(
                "ratio",
                self.ratio.map_or("na".to_string(), |r| format!("{r:.1}")),
            )
            .field("n", self.n)
            .field("m", self.m)
            .field("class", self.class)
            .field("status", self.status)
            .field(
                "oracle",
                if self.oracle == Verdict::Sat {
                    "sat"
                } else {
                    "unsat"
                },
            )
            .field("oracle_method", self.oracle_method.name())
            .field("sweeps", self.productive_sweeps)
            .field("sweeps_run", self.sweeps)
            .field("eliminations", self.eliminations)
            .field("literals", self.literal_instances)
            .field("records", self.records)
            .field("comparisons", self.comparisons)
            .field("branches", self.branches)
            .field("reroutes", self.reroutes)
            .field(
                "reason",
                if self.reason.is_empty() {
                    "-"
                } else {
                    &self.reason
                },
            )
    }
}

/// Files that let an outcome be re-checked independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub index: usize,
    pub class: OutcomeClass,
    pub instance: String,
    pub irreducible: String,
    pub trace: String,
    pub outcome: String,
}

impl Certificate {
    pub fn dir_name(&self) -> String {
        format!("cert-{:06}", self.index)
    }

    /// Writes `instance.cnf`, `irreducible.cnf`, `trace.log` and `outcome.txt`.
    pub fn write_to(&self, root: &Path) -> io::Result<PathBuf> {
        let dir = root.join(self.dir_name());
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("instance.cnf"), &self.instance)?;
        fs::write(dir.join("irreducible.cnf"), &self.irreducible)?;
        fs::write(dir.join("trace.log"), &self.trace)?;
        fs::write(dir.join("outcome.txt"), &self.outcome)?;
        Ok(dir)
    }

    pub fn read_from(dir: &Path) -> io::Result<Certificate> {
        let outcome = fs::read_to_string(dir.join("outcome.txt"))?;
        let rec = outcome
            .lines()
            .find_map(Record::parse)
            .unwrap_or_else(|| Record::new("instance"));
        let bad = |what: &str| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("outcome.txt: bad {what}"),
            )
        };
        Ok(Certificate {
            index: rec
                .get("index")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("index"))?,
            class: rec
                .get("class")
                .and_then(OutcomeClass::from_name)
                .ok_or_else(|| bad("class"))?,
            instance: fs::read_to_string(dir.join("instance.cnf"))?,
            irreducible: fs::read_to_string(dir.join("irreducible.cnf"))?,
            trace: fs::read_to_string(dir.join("trace.log"))?,
            outcome,
        })
    }
}

fn oracle_verdict(
    formula: &Formula,
    cfg: &HarnessConfig,
) -> (Verdict, OracleMethod, Option<Assignment>) {
    if formula.num_vars() <= cfg.truth_table_max_vars.min(oracle::MAX_ENUM_VARS) {
        let r = oracle::truth_table_solve(formula).expect("within enumeration range");
        (r.verdict, OracleMethod::TruthTable, r.witness)
    } else {
        let r = oracle::backtracking_solve(formula);
        (r.verdict, OracleMethod::Backtracking, r.witness)
    }
}

/// Runs the full pipeline on one formula and classifies the result.
pub fn classify(
    index: usize,
    seed: Option<u64>,
    ratio: Option<f64>,
    formula: &Formula,
    cfg: &HarnessConfig,
) -> InstanceOutcome {
    let (ir, trace) = reduce_to_fixpoint(formula, cfg.reduce);
    let (oracle, oracle_method, witness) = oracle_verdict(formula, cfg);
    let [c1, c2, c3] = formula.width_histogram();
    let first = trace.sweep_stats.first().copied().unwrap_or_default();

    let mut out = InstanceOutcome {
        index,
        seed,
        ratio,
        n: formula.num_vars(),
        m: formula.len(),
        class: OutcomeClass::SolverBug,
        reason: String::new(),
        status: ir.status,
        oracle,
        oracle_method,
        sweeps: trace.sweeps_run,
        productive_sweeps: trace.productive_sweeps,
        eliminations: trace.eliminations,
        literal_instances: formula.literal_count(),
        records: first.records,
        records_expected: 6 * c3 + 2 * c2 + c1,
        comparisons: trace.total_comparisons(),
        comparisons_within_bound: trace.comparisons_within_bound(),
        branches: 0,
        reroutes: 0,
        model: None,
        certificate: None,
    };
    let mut bugs: Vec<String> = Vec::new();

    // witness sanity: the oracle must agree with plain evaluation
    if let Some(w) = &witness {
        if evaluate(formula, w) != Ok(true) {
            bugs.push("oracle witness fails evaluation".into());
        }
    }
    match replay(formula, &trace) {
        Ok(f)
            if f.clause_set() == ir.formula.clause_set()
                && f.has_empty_clause() == ir.formula.has_empty_clause() => {}
        Ok(_) => bugs.push("trace replay diverges from irreducible form".into()),
        Err(e) => bugs.push(format!("trace replay failed: {e}")),
    }
    if trace.eliminations > 3 * formula.len() {
        bugs.push("eliminations exceed 3m".into());
    }
    if cfg.reduce.backend == crate::reduce::Backend::Sorted
        && !formula.has_empty_clause()
        && first.records != out.records_expected
    {
        bugs.push("permutation record count mismatch".into());
    }
    if !out.comparisons_within_bound {
        bugs.push("sort comparisons exceed 2R log2 R + R".into());
    }

    let class = match ir.status {
        Status::ContradictionFound => {
            if oracle == Verdict::Sat {
                bugs.push("reduction derived a contradiction on a satisfiable formula".into());
            }
            OutcomeClass::ReductionUnsat
        }
        Status::Irreducible => {
            let search = expand(&ir, ExpandLimits::first_solution(cfg.max_visits))
                .expect("irreducible form");
            out.branches = search.branches_explored;
            out.reroutes = search.reroutes;
            match search.kind {
                OutcomeKind::FoundAssignments => {
                    let model = search.branches[0].total();
                    if evaluate(&ir.formula, &model) != Ok(true) {
                        bugs.push("model fails the irreducible form".into());
                    }
                    if evaluate(formula, &model) != Ok(true) {
                        bugs.push("model fails the original formula".into());
                    }
                    if oracle == Verdict::Unsat {
                        bugs.push("model reported for an oracle-unsatisfiable formula".into());
                    }
                    out.model = Some(model);
                    OutcomeClass::AgreeSat
                }
                OutcomeKind::Exhausted => {
                    if oracle == Verdict::Sat {
                        bugs.push("expansion exhausted on a satisfiable formula".into());
                    }
                    OutcomeClass::ClaimViolation
                }
                OutcomeKind::BudgetExceeded => OutcomeClass::Budget,
            }
        }
    };
    if bugs.is_empty() {
        out.class = class;
    } else {
        out.reason = bugs.join("; ");
    }
    if matches!(
        out.class,
        OutcomeClass::ClaimViolation | OutcomeClass::SolverBug
    ) {
        out.certificate = Some(certificate(&out, formula, &ir, &trace));
    }
    out
}

fn certificate(
    out: &InstanceOutcome,
    formula: &Formula,
    ir: &IrreducibleForm,
    trace: &ReductionTrace,
) -> Certificate {
    let mut outcome = out.record().to_string();
    outcome.push('\n');
    outcome.push_str(&format!(
        "c reduction={} sweeps={} residual={} units={}\nc expansion branches={} reroutes={}\nc oracle={} via {}\n",
        ir.status,
        trace.productive_sweeps,
        ir.residual.len(),
        ir.units.len(),
        out.branches,
        out.reroutes,
        if out.oracle == Verdict::Sat { "sat" } else { "unsat" },
        out.oracle_method.name(),
    ));
    Certificate {
        index: out.index,
        class: out.class,
        instance: write_dimacs(formula),
        irreducible: write_dimacs(&ir.formula),
        trace: trace.to_log(),
        outcome,
    }
}

/// Re-runs reduction, expansion and the oracle on a certificate's instance
/// and confirms the stored class.
pub fn verify_certificate(cert: &Certificate, cfg: &HarnessConfig) -> bool {
    let Ok(parsed) = parse_dimacs(&cert.instance) else {
        return false;
    };
    let again = classify(cert.index, None, None, &parsed.formula, cfg);
    if again.class != cert.class {
        return false;
    }
    match parse_dimacs(&cert.irreducible) {
        Ok(stored) => {
            let (ir, _) = reduce_to_fixpoint(&parsed.formula, cfg.reduce);
            stored.formula.clause_set() == ir.formula.clause_set()
        }
        Err(_) => false,
    }
}

/// Aggregate counts and instrumentation over a run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Aggregates {
    pub instances: usize,
    pub counts: BTreeMap<OutcomeClass, usize>,
    pub oracle_unsat: usize,
    pub max_sweeps: u32,
    /// Productive sweeps -> instance count.
    pub sweep_histogram: BTreeMap<u32, usize>,
    pub over_three_sweeps: usize,
    pub eliminations: usize,
    pub literal_instances: usize,
    pub max_elimination_ratio_permille: usize,
    pub comparisons: u64,
    pub record_mismatches: usize,
    pub comparison_bound_violations: usize,
    pub elimination_budget_violations: usize,
}

impl Aggregates {
    pub fn count(&self, class: OutcomeClass) -> usize {
        self.counts.get(&class).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct HarnessReport {
    pub config: HarnessConfig,
    pub outcomes: Vec<InstanceOutcome>,
    pub aggregates: Aggregates,
}

fn aggregate(outcomes: &[InstanceOutcome], sorted_backend: bool) -> Aggregates {
    let mut a = Aggregates {
        instances: outcomes.len(),
        ..Aggregates::default()
    };
    for class in OutcomeClass::ALL {
        a.counts.insert(class, 0);
    }
    for o in outcomes {
        *a.counts.entry(o.class).or_default() += 1;
        if o.oracle == Verdict::Unsat {
            a.oracle_unsat += 1;
        }
        a.max_sweeps = a.max_sweeps.max(o.productive_sweeps);
        *a.sweep_histogram.entry(o.productive_sweeps).or_default() += 1;
        if o.exceeds_three_sweeps() {
            a.over_three_sweeps += 1;
        }
        a.eliminations += o.eliminations;
        a.literal_instances += o.literal_instances;
        if o.m > 0 {
            a.max_elimination_ratio_permille = a
                .max_elimination_ratio_permille
                .max(o.eliminations * 1000 / (3 * o.m));
        }
        a.comparisons += o.comparisons;
        if sorted_backend && o.records != o.records_expected && o.m > 0 {
            a.record_mismatches += 1;
        }
        if !o.comparisons_within_bound {
            a.comparison_bound_violations += 1;
        }
        if o.eliminations > 3 * o.m {
            a.elimination_budget_violations += 1;
        }
    }
    a
}

/// Classifies every instance, in parallel, keeping input order.
pub fn run_differential(instances: &[Instance], cfg: &HarnessConfig) -> HarnessReport {
    let work = || -> Vec<InstanceOutcome> {
        instances
            .par_iter()
            .map(|i| classify(i.index, i.seed, i.ratio, &i.formula, cfg))
            .collect()
    };
    let outcomes = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work()),
        None => work(),
    };
    let aggregates = aggregate(
        &outcomes,
        cfg.reduce.backend == crate::reduce::Backend::Sorted,
    );
    HarnessReport {
        config: *cfg,
        outcomes,
        aggregates,
    }
}

impl HarnessReport {
    /// Machine-readable report: config, one record per instance, summary.
    /// Contains no timing, so identical runs give identical text.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let a = &self.aggregates;
        let mut lines = vec![Record::new("config")
            .field("instances", a.instances)
            .field("backend", c.reduce.backend.name())
            .field("r4", c.reduce.self_subsumption)
            .field(
                "budget",
                c.max_visits
                    .map_or("unlimited".to_string(), |b| b.to_string()),
            )
            .field("truth_table_max_vars", c.truth_table_max_vars)
            .to_string()];
        lines.extend(self.outcomes.iter().map(|o| o.record().to_string()));
        let mut summary = Record::new("summary").field("instances", a.instances);
        for class in OutcomeClass::ALL {
            summary = summary.field(&class.name().replace('-', "_"), a.count(class));
        }
        summary = summary
            .field("oracle_unsat", a.oracle_unsat)
            .field("max_sweeps", a.max_sweeps)
            .field("over_three_sweeps", a.over_three_sweeps)
            .field("eliminations", a.eliminations)
            .field("literal_instances", a.literal_instances)
            .field(
                "max_elimination_permille_of_3m",
                a.max_elimination_ratio_permille,
            )
            .field("comparisons", a.comparisons)
            .field("record_mismatches", a.record_mismatches)
            .field("comparison_bound_violations", a.comparison_bound_violations)
            .field(
                "elimination_budget_violations",
                a.elimination_budget_violations,
            );
        lines.push(summary.to_string());
        let hist: Vec<String> = a
            .sweep_histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        lines.push(
            Record::new("sweeps")
                .field("histogram", hist.join(","))
                .to_string(),
        );
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }

    pub fn human_summary(&self) -> String {
        let a = &self.aggregates;
        let mut s = format!(
            "{} instances: {} agree-sat, {} reduction-unsat, {} claim-violation, {} solver-bug, {} budget\n",
            a.instances,
            a.count(OutcomeClass::AgreeSat),
            a.count(OutcomeClass::ReductionUnsat),
            a.count(OutcomeClass::ClaimViolation),
            a.count(OutcomeClass::SolverBug),
            a.count(OutcomeClass::Budget),
        );
        s.push_str(&format!(
            "oracle-unsat instances: {} ({} caught by reduction, {} missed by reduction)\n",
            a.oracle_unsat,
            a.count(OutcomeClass::ReductionUnsat),
            a.count(OutcomeClass::ClaimViolation),
        ));
        let hist: Vec<String> = a
            .sweep_histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        s.push_str(&format!(
            "productive sweeps: max {}, distribution {}, more than three in {} instances\n",
            a.max_sweeps,
            hist.join(" "),
            a.over_three_sweeps
        ));
        s.push_str(&format!(
            "eliminations: {} of {} literal occurrences; record mismatches {}, comparison-bound violations {}\n",
            a.eliminations, a.literal_instances, a.record_mismatches, a.comparison_bound_violations
        ));
        s
    }

    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.outcomes.iter().filter_map(|o| o.certificate.as_ref())
    }

    /// Writes `report.txt` and one directory per certificate under `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), self.to_text())?;
        fs::write(dir.join("summary.txt"), self.human_summary())?;
        for cert in self.certificates() {
            cert.write_to(dir)?;
        }
        Ok(())
    }
}

/// Sort and pairwise instrumentation for one formula.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub m: usize,
    pub records: usize,
    pub records_expected: usize,
    pub comparisons: u64,
    pub comparison_bound: f64,
    /// `6m log2(6m)`.
    pub sort_bound: f64,
    pub sorted_sweeps: u32,
    pub sorted_total_comparisons: u64,
    pub pairwise_first_sweep_pairs: u64,
    pub pairwise_total_pairs: u64,
    /// `m(m-1)/2`.
    pub pair_bound: u64,
    /// `m^3`.
    pub cubic_bound: u64,
    pub pairwise_sweeps: u32,
    pub status: Status,
}

pub fn bench(formula: &Formula, self_subsumption: bool) -> BenchReport {
    use crate::permute::{expand_permutations, sort_records};
    use crate::reduce::Backend;

    let m = formula.len();
    let (_, stats) = sort_records(expand_permutations(formula.clauses()));
    let [c1, c2, c3] = formula.width_histogram();
    let sorted_cfg = ReduceConfig {
        backend: Backend::Sorted,
        self_subsumption,
    };
    let pair_cfg = ReduceConfig {
        backend: Backend::Pairwise,
        self_subsumption,
    };
    let (ir, sorted_trace) = reduce_to_fixpoint(formula, sorted_cfg);
    let (_, pair_trace) = reduce_to_fixpoint(formula, pair_cfg);
    let six_m = 6.0 * m as f64;
    BenchReport {
        m,
        records: stats.record_count,
        records_expected: 6 * c3 + 2 * c2 + c1,
        comparisons: stats.comparisons,
        comparison_bound: stats.comparison_bound(),
        sort_bound: if six_m > 1.0 {
            six_m * six_m.log2()
        } else {
            six_m
        },
        sorted_sweeps: sorted_trace.productive_sweeps,
        sorted_total_comparisons: sorted_trace.total_comparisons(),
        pairwise_first_sweep_pairs: pair_trace.sweep_stats.first().map_or(0, |s| s.pairs),
        pairwise_total_pairs: pair_trace.total_pairs(),
        pair_bound: (m as u64) * (m as u64).saturating_sub(1) / 2,
        cubic_bound: (m as u64).pow(3),
        pairwise_sweeps: pair_trace.productive_sweeps,
        status: ir.status,
    }
}

impl BenchReport {
    pub fn record(&self) -> Record {
        Record::new("bench")
            .field("m", self.m)
            .field("records", self.records)
            .field("records_expected", self.records_expected)
            .field("comparisons", self.comparisons)
            .field("comparison_bound", format!("{:.1}", self.comparison_bound))
            .field("six_m_log_six_m", format!("{:.1}", self.sort_bound))
            .field("sorted_sweeps", self.sorted_sweeps)
            .field("sorted_total_comparisons", self.sorted_total_comparisons)
            .field("pairs_first_sweep", self.pairwise_first_sweep_pairs)
            .field("pairs_bound", self.pair_bound)
            .field("pairs_total", self.pairwise_total_pairs)
            .field("m_cubed", self.cubic_bound)
            .field("pairwise_sweeps", self.pairwise_sweeps)
            .field("status", self.status)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_generation() {
        let cfg = GenConfig {
            n: 5,
            m: 10,
            seed: 42,
            ratio: None,
        };
        let f = gen_random(&cfg).unwrap();
        assert_eq!(f.len(), 10);
        assert!(f.clauses().iter().all(|c| c.width() == 3));
        assert!(gen_random(&cfg).unwrap().same_clauses(&f));
        assert_eq!(write_dimacs(&gen_random(&cfg).unwrap()), write_dimacs(&f));
        let small = GenConfig {
            n: 2,
            m: 1,
            seed: 0,
            ratio: None,
        };
        assert_eq!(
            gen_random(&small).unwrap_err(),
            GenError::TooFewVariables(2)
        );
        let crowded = GenConfig {
            n: 3,
            m: 9,
            seed: 0,
            ratio: None,
        };
        assert!(matches!(
            gen_random(&crowded),
            Err(GenError::TooManyClauses { .. })
        ));
    }

    #[test]
    fn ratio_mode() {
        let cfg = GenConfig {
            n: 20,
            m: 0,
            seed: 7,
            ratio: Some(4.3),
        };
        assert_eq!(gen_random(&cfg).unwrap().len(), 86);
    }

    #[test]
    fn complete_signs_family() {
        let f = gen_complete_signs(3).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(
            oracle::truth_table_solve(&f).unwrap().verdict,
            Verdict::Unsat
        );
        assert_eq!(gen_complete_signs(4).unwrap_err(), GenError::Unsupported(4));
    }

    #[test]
    fn classify_examples() {
        let cfg = HarnessConfig::default();
        let o = classify(0, None, None, &gen_complete_signs(3).unwrap(), &cfg);
        assert_eq!(o.class, OutcomeClass::ReductionUnsat);
        let one = Formula::from_signed(3, &[[1, 2, 3]]).unwrap();
        let o = classify(1, None, None, &one, &cfg);
        assert_eq!(o.class, OutcomeClass::AgreeSat);
        assert!(evaluate(&one, o.model.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn implication_cycle_is_a_claim_violation() {
        let f = Formula::from_signed(
            5,
            &[
                vec![-1, 2],
                vec![-2, 3],
                vec![-1, -3],
                vec![1, 4],
                vec![-4, 5],
                vec![1, -5],
            ],
        )
        .unwrap();
        let cfg = HarnessConfig::default();
        let o = classify(3, None, None, &f, &cfg);
        assert_eq!(o.class, OutcomeClass::ClaimViolation);
        let cert = o.certificate.as_ref().unwrap();
        assert!(verify_certificate(cert, &cfg));
    }

    #[test]
    fn corpus_layout() {
        let spec = CorpusSpec {
            count: 9,
            base_seed: 100,
            n_min: 5,
            n_max: 6,
            ratios: vec![3.0, 4.3, 5.0],
        };
        let c = random_corpus(&spec).unwrap();
        let shape: Vec<(u32, usize)> = c
            .iter()
            .map(|i| (i.formula.num_vars(), i.formula.len()))
            .collect();
        assert_eq!(
            shape,
            vec![
                (5, 15),
                (5, 22),
                (5, 25),
                (6, 18),
                (6, 26),
                (6, 30),
                (5, 15),
                (5, 22),
                (5, 25)
            ]
        );
        assert_eq!(c[4].seed, Some(104));
    }
}

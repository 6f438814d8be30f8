//! Sweep-based clause reduction to an irreducible form.
//!
//! A sweep discovers every candidate on the current clause set, then applies
//! them in a fixed order (subsume, unit-resolve, self-subsume, merge; lowest
//! source ids first). A candidate whose source was consumed earlier in the same
//! sweep is skipped. Every product gets a fresh id, so presence of both source
//! ids is enough to know a candidate is still valid.
//!
//! Each applied step strictly lowers the number of literal occurrences, which
//! bounds the whole run by the initial occurrence count.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cnf::{Clause, ClauseId, Formula, Lit, Lits};
use crate::permute::{self, CandidateKind, ReductionCandidate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("clauses are not identical up to one complementary pair")]
    NotMergeable,
    #[error("first clause is not a strict subset of the second")]
    NotSubsumed,
    #[error("clause does not contain the complement of the unit")]
    NotApplicable,
}

/// Result of a rule that produces a clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolvent {
    Clause(Lits),
    Empty,
}

/// `(L+x).(L+!x) = (L)`. Both inputs must share width and differ only in the pivot.
pub fn apply_r1_merge(c1: &Lits, c2: &Lits) -> Result<Resolvent, RuleError> {
    if c1.width() != c2.width() {
        return Err(RuleError::NotMergeable);
    }
    let only_1: Vec<Lit> = c1.iter().copied().filter(|&l| !c2.contains(l)).collect();
    let only_2: Vec<Lit> = c2.iter().copied().filter(|&l| !c1.contains(l)).collect();
    match (only_1.as_slice(), only_2.as_slice()) {
        ([x], [y]) if x.complement() == *y => Ok(match c1.without(*x) {
            Some(rest) => Resolvent::Clause(rest),
            None => Resolvent::Empty,
        }),
        _ => Err(RuleError::NotMergeable),
    }
}

/// `(K).(A+K+L) = (K)`: succeeds when `short` is a strict subset of `long`,
/// meaning `long` is removed.
pub fn apply_subsumption(short: &Lits, long: &Lits) -> Result<(), RuleError> {
    if short.width() < long.width() && short.is_subset_of(long) {
        Ok(())
    } else {
        Err(RuleError::NotSubsumed)
    }
}

/// Deletes `!unit` from `clause`. The unit clause itself stays in the formula.
pub fn apply_unit_resolution(unit: Lit, clause: &Lits) -> Result<Resolvent, RuleError> {
    let target = unit.complement();
    if !clause.contains(target) {
        return Err(RuleError::NotApplicable);
    }
    Ok(match clause.without(target) {
        Some(rest) => Resolvent::Clause(rest),
        None => Resolvent::Empty,
    })
}

/// Shrinks `long` by `!pivot` when `short \ {pivot}` is contained in `long`.
pub fn apply_self_subsumption(
    short: &Lits,
    pivot: Lit,
    long: &Lits,
) -> Result<Resolvent, RuleError> {
    let rest_inside = short
        .iter()
        .filter(|&&l| l != pivot)
        .all(|&l| long.contains(l));
    if !short.contains(pivot) || short.width() >= long.width() || !rest_inside {
        return Err(RuleError::NotApplicable);
    }
    apply_unit_resolution(pivot, long)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Expand permutations, sort, scan.
    #[default]
    Sorted,
    /// Test every clause pair directly.
    Pairwise,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Sorted => "sorted",
            Backend::Pairwise => "pairwise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReduceConfig {
    pub backend: Backend,
    /// Enables the optional self-subsuming resolution rule.
    pub self_subsumption: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Merge,
    Subsume,
    UnitResolve,
    SelfSubsume,
    /// A product identical to an existing clause; the newer copy is removed.
    Dedup,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Merge => "r1-merge",
            Rule::Subsume => "subsume",
            Rule::UnitResolve => "unit-resolve",
            Rule::SelfSubsume => "self-subsume",
            Rule::Dedup => "dedup",
        }
    }

    fn from_kind(kind: CandidateKind) -> Rule {
        match kind {
            CandidateKind::Merge => Rule::Merge,
            CandidateKind::Subsume => Rule::Subsume,
            CandidateKind::UnitResolve => Rule::UnitResolve,
            CandidateKind::SelfSubsume => Rule::SelfSubsume,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutput {
    /// A new clause added under a fresh id.
    Clause(Clause),
    Removed(ClauseId),
    Empty,
}

/// One rewrite. `inputs` follow the candidate's role order; for `Dedup` they
/// are (new copy, existing clause).
///
/// Replay semantics: merge removes both inputs; unit-resolve and self-subsume
/// remove `inputs[1]`; subsume removes `inputs[1]`; dedup removes `inputs[0]`.
/// A clause output is then inserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub sweep: u32,
    pub rule: Rule,
    pub inputs: Vec<ClauseId>,
    pub output: StepOutput,
}

impl RewriteStep {
    /// Ids deleted by this step.
    pub fn removed(&self) -> Vec<ClauseId> {
        match self.rule {
            Rule::Merge => self.inputs.clone(),
            Rule::Dedup => vec![self.inputs[0]],
            Rule::Subsume | Rule::UnitResolve | Rule::SelfSubsume => vec![self.inputs[1]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepStats {
    pub sweep: u32,
    pub clauses: usize,
    /// Permutation records built (sorted backend).
    pub records: usize,
    pub comparisons: u64,
    /// Clause pairs tested (pairwise backend).
    pub pairs: u64,
    pub candidates: usize,
    pub applied: usize,
    pub skipped: usize,
    pub eliminations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Irreducible,
    ContradictionFound,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<RewriteStep>,
    /// Sweeps executed, including the final one that found nothing.
    pub sweeps_run: u32,
    /// Sweeps that applied at least one step.
    pub productive_sweeps: u32,
    /// Literal occurrences removed over the run.
    pub eliminations: usize,
    pub sweep_stats: Vec<SweepStats>,
}

impl ReductionTrace {
    pub fn total_comparisons(&self) -> u64 {
        self.sweep_stats.iter().map(|s| s.comparisons).sum()
    }

    pub fn total_pairs(&self) -> u64 {
        self.sweep_stats.iter().map(|s| s.pairs).sum()
    }

    /// True when every sort stayed within `2R log2 R + R` comparisons.
    pub fn comparisons_within_bound(&self) -> bool {
        self.sweep_stats.iter().all(|s| {
            let stats = permute::SortStats {
                record_count: s.records,
                comparisons: s.comparisons,
            };
            (s.comparisons as f64) <= stats.comparison_bound()
        })
    }

    /// Line-oriented log, one step per line:
    /// `<sweep> <rule> <input ids> => <id>: <dimacs literals> | removed <id> | empty`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let ids: Vec<String> = s.inputs.iter().map(ToString::to_string).collect();
            let _ = write!(out, "{} {} {} => ", s.sweep, s.rule.name(), ids.join(" "));
            match s.output {
                StepOutput::Clause(c) => {
                    let lits: Vec<String> = c.lits.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "{}: {}", c.id, lits.join(" "));
                }
                StepOutput::Removed(id) => {
                    let _ = writeln!(out, "removed {id}");
                }
                StepOutput::Empty => out.push_str("empty\n"),
            }
        }
        out
    }
}

/// Reduction result: units, width-2/3 residual clauses, and the full formula.
#[derive(Debug, Clone)]
pub struct IrreducibleForm {
    pub status: Status,
    pub units: BTreeSet<Lit>,
    pub residual: Vec<Clause>,
    pub formula: Formula,
}

impl IrreducibleForm {
    fn from_working(ws: &WorkingSet, status: Status) -> Self {
        let formula = ws.to_formula(status == Status::ContradictionFound);
        let units = formula
            .clauses()
            .iter()
            .filter(|c| c.width() == 1)
            .map(|c| c.lits[0])
            .collect();
        let residual = formula
            .clauses()
            .iter()
            .filter(|c| c.width() > 1)
            .copied()
            .collect();
        IrreducibleForm {
            status,
            units,
            residual,
            formula,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.formula.num_vars()
    }
}

/// Mutable clause store keyed by id, with a literal-list index for dedup.
#[derive(Debug, Clone)]
pub struct WorkingSet {
    num_vars: u32,
    clauses: BTreeMap<ClauseId, Lits>,
    index: HashMap<Lits, ClauseId>,
    next_id: u32,
    contradiction: bool,
}

impl WorkingSet {
    pub fn new(formula: &Formula) -> Self {
        let clauses: BTreeMap<ClauseId, Lits> =
            formula.clauses().iter().map(|c| (c.id, c.lits)).collect();
        let index = clauses.iter().map(|(&id, &l)| (l, id)).collect();
        let next_id = formula.clauses().iter().map(|c| c.id.0).max().unwrap_or(0) + 1;
        WorkingSet {
            num_vars: formula.num_vars(),
            clauses,
            index,
            next_id,
            contradiction: formula.has_empty_clause(),
        }
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.clauses.contains_key(&id)
    }

    pub fn get(&self, id: ClauseId) -> Option<&Lits> {
        self.clauses.get(&id)
    }

    pub fn has_contradiction(&self) -> bool {
        self.contradiction
    }

    pub fn clause_list(&self) -> Vec<Clause> {
        self.clauses
            .iter()
            .map(|(&id, &lits)| Clause { id, lits })
            .collect()
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.values().map(Lits::width).sum()
    }

    pub fn to_formula(&self, has_empty: bool) -> Formula {
        Formula::from_parts(
            self.num_vars,
            self.clause_list(),
            has_empty || self.contradiction,
        )
    }

    fn remove(&mut self, id: ClauseId) -> Lits {
        let lits = self.clauses.remove(&id).expect("removed clause is present");
        self.index.remove(&lits);
        lits
    }

    /// Inserts a product under a fresh id. Returns the new id and the id of an
    /// existing identical clause, if any (the caller records the dedup).
    fn insert(&mut self, lits: Lits) -> (ClauseId, Option<ClauseId>) {
        let id = ClauseId(self.next_id);
        self.next_id += 1;
        let existing = self.index.get(&lits).copied();
        self.clauses.insert(id, lits);
        if existing.is_none() {
            self.index.insert(lits, id);
        }
        (id, existing)
    }

    fn drop_duplicate(&mut self, id: ClauseId) {
        // the index still points at the surviving original
        self.clauses.remove(&id);
    }
}

/// Outcome of a single sweep on a standalone formula.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub formula: Formula,
    pub steps: Vec<RewriteStep>,
    pub stats: SweepStats,
    pub status: Status,
}

/// Runs one sweep over `formula`.
pub fn sweep(formula: &Formula, config: ReduceConfig) -> SweepOutput {
    let mut ws = WorkingSet::new(formula);
    let mut steps = Vec::new();
    let stats = if ws.has_contradiction() {
        SweepStats::default()
    } else {
        sweep_working(&mut ws, config, 1, &mut steps)
    };
    let status = if ws.has_contradiction() {
        Status::ContradictionFound
    } else {
        Status::Irreducible
    };
    SweepOutput {
        formula: ws.to_formula(false),
        steps,
        stats,
        status,
    }
}

/// Candidates for the current clause set under `config`, with discovery stats.
pub fn discover_candidates(
    clauses: &[Clause],
    config: ReduceConfig,
) -> (Vec<ReductionCandidate>, SweepStats) {
    let mut stats = SweepStats {
        clauses: clauses.len(),
        ..SweepStats::default()
    };
    let candidates = match config.backend {
        Backend::Sorted => {
            let (c, sort) = permute::discover(clauses, config.self_subsumption);
            stats.records = sort.record_count;
            stats.comparisons = sort.comparisons;
            c
        }
        Backend::Pairwise => {
            let (c, pairs) = permute::discover_pairwise(clauses, config.self_subsumption);
            stats.pairs = pairs;
            c
        }
    };
    stats.candidates = candidates.len();
    (candidates, stats)
}

fn sweep_working(
    ws: &mut WorkingSet,
    config: ReduceConfig,
    sweep_no: u32,
    steps: &mut Vec<RewriteStep>,
) -> SweepStats {
    let (candidates, mut stats) = discover_candidates(&ws.clause_list(), config);
    stats.sweep = sweep_no;
    let before = ws.literal_count();

    for cand in candidates {
        let [s0, s1] = cand.sources;
        if !ws.contains(s0) || !ws.contains(s1) {
            stats.skipped += 1;
            continue;
        }
        let (l0, l1) = (*ws.get(s0).unwrap(), *ws.get(s1).unwrap());
        let rule = Rule::from_kind(cand.kind);
        let product = match cand.kind {
            CandidateKind::Subsume => {
                apply_subsumption(&l0, &l1).expect("discovered subsumption holds");
                ws.remove(s1);
                steps.push(RewriteStep {
                    sweep: sweep_no,
                    rule,
                    inputs: vec![s0, s1],
                    output: StepOutput::Removed(s1),
                });
                stats.applied += 1;
                continue;
            }
            CandidateKind::UnitResolve => {
                apply_unit_resolution(cand.pivot, &l1).expect("discovered unit resolution holds")
            }
            CandidateKind::SelfSubsume => apply_self_subsumption(&l0, cand.pivot, &l1)
                .expect("discovered self-subsumption holds"),
            CandidateKind::Merge => apply_r1_merge(&l0, &l1).expect("discovered merge holds"),
        };
        stats.applied += 1;
        if cand.kind == CandidateKind::Merge {
            ws.remove(s0);
        }
        ws.remove(s1);
        match product {
            Resolvent::Empty => {
                steps.push(RewriteStep {
                    sweep: sweep_no,
                    rule,
                    inputs: vec![s0, s1],
                    output: StepOutput::Empty,
                });
                ws.contradiction = true;
                break;
            }
            Resolvent::Clause(lits) => {
                let (id, existing) = ws.insert(lits);
                steps.push(RewriteStep {
                    sweep: sweep_no,
                    rule,
                    inputs: vec![s0, s1],
                    output: StepOutput::Clause(Clause { id, lits }),
                });
                if let Some(orig) = existing {
                    ws.drop_duplicate(id);
                    steps.push(RewriteStep {
                        sweep: sweep_no,
                        rule: Rule::Dedup,
                        inputs: vec![id, orig],
                        output: StepOutput::Removed(id),
                    });
                }
            }
        }
    }
    // an empty product removes its parents' literals and adds none
    stats.eliminations = before - ws.literal_count();
    stats
}

/// Sweeps until nothing applies or a contradiction appears.
pub fn reduce_to_fixpoint(
    formula: &Formula,
    config: ReduceConfig,
) -> (IrreducibleForm, ReductionTrace) {
    let mut ws = WorkingSet::new(formula);
    let mut trace = ReductionTrace::default();
    while !ws.has_contradiction() {
        let sweep_no = trace.sweeps_run + 1;
        let stats = sweep_working(&mut ws, config, sweep_no, &mut trace.steps);
        trace.sweeps_run = sweep_no;
        trace.eliminations += stats.eliminations;
        trace.sweep_stats.push(stats);
        if stats.applied == 0 {
            break;
        }
        trace.productive_sweeps += 1;
    }
    let status = if ws.has_contradiction() {
        Status::ContradictionFound
    } else {
        Status::Irreducible
    };
    (IrreducibleForm::from_working(&ws, status), trace)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index}: input clause {id} is not present")]
    MissingInput { index: usize, id: ClauseId },
    #[error("step {index}: {rule} does not produce the recorded output")]
    WrongOutput { index: usize, rule: &'static str },
    #[error("step {index}: {source}")]
    Rule { index: usize, source: RuleError },
    #[error("step {index} follows a contradiction")]
    AfterContradiction { index: usize },
}

/// Re-applies trace steps to a formula, re-checking each rule from the
/// clause contents alone.
#[derive(Debug, Clone)]
pub struct Replayer {
    num_vars: u32,
    clauses: BTreeMap<ClauseId, Lits>,
    contradiction: bool,
    applied: usize,
}

impl Replayer {
    pub fn new(formula: &Formula) -> Self {
        Replayer {
            num_vars: formula.num_vars(),
            clauses: formula.clauses().iter().map(|c| (c.id, c.lits)).collect(),
            contradiction: formula.has_empty_clause(),
            applied: 0,
        }
    }

    pub fn apply(&mut self, step: &RewriteStep) -> Result<(), ReplayError> {
        let index = self.applied;
        if self.contradiction {
            return Err(ReplayError::AfterContradiction { index });
        }
        let mut lits = Vec::with_capacity(step.inputs.len());
        for &id in &step.inputs {
            match self.clauses.get(&id) {
                Some(l) => lits.push(*l),
                None => return Err(ReplayError::MissingInput { index, id }),
            }
        }
        let wrong = || ReplayError::WrongOutput {
            index,
            rule: step.rule.name(),
        };
        let rule_err = |source| ReplayError::Rule { index, source };
        let expected: Option<Resolvent> = match step.rule {
            Rule::Subsume => {
                apply_subsumption(&lits[0], &lits[1]).map_err(rule_err)?;
                None
            }
            Rule::Dedup => {
                if lits[0] != lits[1] || step.inputs[0] == step.inputs[1] {
                    return Err(wrong());
                }
                None
            }
            Rule::Merge => Some(apply_r1_merge(&lits[0], &lits[1]).map_err(rule_err)?),
            Rule::UnitResolve => {
                if lits[0].width() != 1 {
                    return Err(rule_err(RuleError::NotApplicable));
                }
                Some(apply_unit_resolution(lits[0][0], &lits[1]).map_err(rule_err)?)
            }
            Rule::SelfSubsume => {
                let pivot = lits[0]
                    .iter()
                    .copied()
                    .find(|l| lits[1].contains(l.complement()))
                    .ok_or_else(|| rule_err(RuleError::NotApplicable))?;
                Some(apply_self_subsumption(&lits[0], pivot, &lits[1]).map_err(rule_err)?)
            }
        };
        match (expected, step.output) {
            (None, StepOutput::Removed(id)) if step.removed() == [id] => {}
            (Some(Resolvent::Empty), StepOutput::Empty) => {}
            (Some(Resolvent::Clause(l)), StepOutput::Clause(c))
                if c.lits == l && !self.clauses.contains_key(&c.id) => {}
            _ => return Err(wrong()),
        }
        for id in step.removed() {
            self.clauses.remove(&id);
        }
        match step.output {
            StepOutput::Clause(c) => {
                self.clauses.insert(c.id, c.lits);
            }
            StepOutput::Empty => self.contradiction = true,
            StepOutput::Removed(_) => {}
        }
        self.applied += 1;
        Ok(())
    }

    pub fn has_contradiction(&self) -> bool {
        self.contradiction
    }

    pub fn to_formula(&self) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .map(|(&id, &lits)| Clause { id, lits })
            .collect();
        Formula::from_parts(self.num_vars, clauses, self.contradiction)
    }
}

/// Replays a whole trace; the result must match the reported irreducible form.
pub fn replay(formula: &Formula, trace: &ReductionTrace) -> Result<Formula, ReplayError> {
    let mut r = Replayer::new(formula);
    for step in &trace.steps {
        r.apply(step)?;
    }
    Ok(r.to_formula())
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Irreducible => "irreducible",
            Status::ContradictionFound => "contradiction",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;

    fn lits(raw: &[i64]) -> Lits {
        let f = Formula::from_signed(9, &[raw]).unwrap();
        f.clauses()[0].lits
    }

    fn signed(l: &Lits) -> Vec<i64> {
        l.iter().map(|l| l.to_dimacs()).collect()
    }

    fn clause_sets(f: &Formula) -> Vec<Vec<i64>> {
        f.clauses().iter().map(|c| signed(&c.lits)).collect()
    }

    #[test]
    fn merge_examples() {
        match apply_r1_merge(&lits(&[1, 2, 3]), &lits(&[1, 2, -3])).unwrap() {
            Resolvent::Clause(c) => assert_eq!(signed(&c), [1, 2]),
            Resolvent::Empty => panic!(),
        }
        match apply_r1_merge(&lits(&[1, 2]), &lits(&[1, -2])).unwrap() {
            Resolvent::Clause(c) => assert_eq!(signed(&c), [1]),
            Resolvent::Empty => panic!(),
        }
        assert_eq!(
            apply_r1_merge(&lits(&[1]), &lits(&[-1])).unwrap(),
            Resolvent::Empty
        );
        assert_eq!(
            apply_r1_merge(&lits(&[1, 2]), &lits(&[-1, -2])),
            Err(RuleError::NotMergeable)
        );
        assert_eq!(
            apply_r1_merge(&lits(&[1, 2]), &lits(&[1, 2, 3])),
            Err(RuleError::NotMergeable)
        );
        assert_eq!(
            apply_r1_merge(&lits(&[1, 2]), &lits(&[1, 3])),
            Err(RuleError::NotMergeable)
        );
    }

    #[test]
    fn subsumption_examples() {
        // [7] is D, [1,7,9] is (A+D+E)
        assert!(apply_subsumption(&lits(&[4]), &lits(&[1, 4, 5])).is_ok());
        assert!(apply_subsumption(&lits(&[1, 2]), &lits(&[1, 2, 3])).is_ok());
        assert_eq!(
            apply_subsumption(&lits(&[1, 2]), &lits(&[1, -2, 3])),
            Err(RuleError::NotSubsumed)
        );
        assert_eq!(
            apply_subsumption(&lits(&[1, 2]), &lits(&[1, 2])),
            Err(RuleError::NotSubsumed)
        );
    }

    #[test]
    fn unit_resolution_examples() {
        let not_a = Lit::from_dimacs(-1).unwrap();
        match apply_unit_resolution(not_a, &lits(&[1, 4])).unwrap() {
            Resolvent::Clause(c) => assert_eq!(signed(&c), [4]),
            Resolvent::Empty => panic!(),
        }
        assert_eq!(
            apply_unit_resolution(not_a, &lits(&[1])).unwrap(),
            Resolvent::Empty
        );
        assert_eq!(
            apply_unit_resolution(not_a, &lits(&[2, 3])),
            Err(RuleError::NotApplicable)
        );
    }

    #[test]
    fn self_subsumption_example() {
        let not_q = Lit::from_dimacs(-1).unwrap();
        match apply_self_subsumption(&lits(&[-1, 2]), not_q, &lits(&[1, 2, 3])).unwrap() {
            Resolvent::Clause(c) => assert_eq!(signed(&c), [2, 3]),
            Resolvent::Empty => panic!(),
        }
        assert!(apply_self_subsumption(&lits(&[-1, -2]), not_q, &lits(&[1, 2, 3])).is_err());
    }

    #[test]
    fn sweep_examples() {
        let f = Formula::from_signed(3, &[[1, 2, 3], [1, 2, -3]]).unwrap();
        let out = sweep(&f, ReduceConfig::default());
        assert_eq!(clause_sets(&out.formula), vec![vec![1, 2]]);
        assert_eq!(out.steps.len(), 1);

        let f = Formula::from_signed(6, &[[1, 2, 3], [4, 5, 6]]).unwrap();
        let out = sweep(&f, ReduceConfig::default());
        assert!(out.steps.is_empty());
        assert!(out.formula.same_clauses(&f));

        let f = Formula::from_signed(1, &[[1], [-1]]).unwrap();
        assert_eq!(
            sweep(&f, ReduceConfig::default()).status,
            Status::ContradictionFound
        );
    }

    #[test]
    fn complete_signs_reduce_by_merge_chain() {
        let mut raw = Vec::new();
        for mask in 0..8 {
            raw.push(
                (1..=3)
                    .map(|v| if mask >> (3 - v) & 1 == 1 { -v } else { v })
                    .collect::<Vec<i64>>(),
            );
        }
        let f = Formula::from_signed(3, &raw).unwrap();
        let (ir, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert_eq!(ir.status, Status::ContradictionFound);
        let rules: Vec<(u32, Rule)> = trace.steps.iter().map(|s| (s.sweep, s.rule)).collect();
        assert_eq!(
            rules,
            vec![
                (1, Rule::Merge),
                (1, Rule::Merge),
                (1, Rule::Merge),
                (1, Rule::Merge),
                (2, Rule::Merge),
                (2, Rule::Merge),
                (3, Rule::UnitResolve),
            ]
        );
        let second: Vec<Vec<i64>> = trace.steps[..4]
            .iter()
            .map(|s| match s.output {
                StepOutput::Clause(c) => signed(&c.lits),
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            second,
            vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]
        );
        assert_eq!(trace.steps.last().unwrap().output, StepOutput::Empty);
        assert_eq!(trace.productive_sweeps, 3);
    }

    #[test]
    fn single_clause_is_irreducible() {
        let f = Formula::from_signed(3, &[[1, 2, 3]]).unwrap();
        let (ir, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert_eq!(ir.status, Status::Irreducible);
        assert_eq!(ir.residual.len(), 1);
        assert!(ir.units.is_empty());
        assert!(trace.steps.is_empty());
        assert_eq!(trace.sweeps_run, 1);
    }

    #[test]
    fn two_merges_leave_unit() {
        let f = Formula::from_signed(3, &[vec![1, 2, 3], vec![1, 2, -3], vec![1, -2]]).unwrap();
        let (ir, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert_eq!(ir.status, Status::Irreducible);
        assert_eq!(
            ir.units.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(),
            [1]
        );
        assert!(ir.residual.is_empty());
        assert_eq!(
            trace.steps.iter().filter(|s| s.rule == Rule::Merge).count(),
            2
        );
        assert_eq!(trace.steps.len(), 2);
    }

    #[test]
    fn products_matching_existing_clauses_are_deduplicated() {
        // (A+B+C).(A+B+!C) merges to (A+B), which is already present
        let f = Formula::from_signed(3, &[vec![1, 2, 3], vec![1, 2, -3], vec![1, 2]]).unwrap();
        let (ir, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert_eq!(clause_sets(&ir.formula), vec![vec![1, 2]]);
        assert_eq!(
            replay(&f, &trace).unwrap().clause_set(),
            ir.formula.clause_set()
        );
    }

    #[test]
    fn dedup_step_recorded() {
        // both 3-clause pairs merge to (A+B) in the same sweep
        let f = Formula::from_signed(
            4,
            &[vec![1, 2, 3], vec![1, 2, -3], vec![1, 2, 4], vec![1, 2, -4]],
        )
        .unwrap();
        let (ir, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert!(trace.steps.iter().any(|s| s.rule == Rule::Dedup));
        assert_eq!(clause_sets(&ir.formula), vec![vec![1, 2]]);
        let replayed = replay(&f, &trace).unwrap();
        assert_eq!(replayed.clause_set(), ir.formula.clause_set());
    }

    #[test]
    fn replay_rejects_tampered_output() {
        let f = Formula::from_signed(3, &[[1, 2, 3], [1, 2, -3]]).unwrap();
        let (_, mut trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        if let StepOutput::Clause(c) = &mut trace.steps[0].output {
            c.lits = lits(&[1]);
        }
        assert!(matches!(
            replay(&f, &trace),
            Err(ReplayError::WrongOutput { .. })
        ));
    }

    #[test]
    fn trace_log_format() {
        let f = Formula::from_signed(3, &[[1, 2, 3], [1, 2, -3]]).unwrap();
        let (_, trace) = reduce_to_fixpoint(&f, ReduceConfig::default());
        assert_eq!(trace.to_log(), "1 r1-merge 1 2 => 3: 1 2\n");
    }
}

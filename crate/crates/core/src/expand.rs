//! Expansion of an irreducible form into product terms.
//!
//! The search walks residual clauses in ascending id order and picks one
//! literal per clause, lowest index first. A literal that contradicts the
//! current partial assignment is skipped; a clause with no usable literal
//! forces a re-route (chronological backtrack). Choosing the `k`-th literal of
//! a clause also fixes the earlier, rejected literals of that clause to false,
//! so sibling branches describe disjoint sets of assignments. A clause that is
//! already satisfied when reached is passed through without branching.

use thiserror::Error;

use crate::cnf::{evaluate, Assignment, ClauseId, Lit};
use crate::oracle::{ModelSet, OracleError};
use crate::reduce::{IrreducibleForm, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("expansion requires an irreducible form, got a contradiction")]
    InvalidState,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpandLimits {
    /// Stop after this many branches; `None` enumerates all.
    pub max_solutions: Option<usize>,
    /// Stop after this many branch visits; `None` is unbounded.
    pub max_visits: Option<u64>,
}

impl ExpandLimits {
    pub fn first_solution(max_visits: Option<u64>) -> Self {
        ExpandLimits {
            max_solutions: Some(1),
            max_visits,
        }
    }

    pub fn unlimited() -> Self {
        ExpandLimits::default()
    }
}

/// A successful product term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// Literal chosen for each residual clause, in clause order.
    pub chosen: Vec<(ClauseId, Lit)>,
    /// Units, chosen literals and excluded siblings.
    pub partial: Assignment,
}

impl Branch {
    /// Total assignment with unconstrained variables set to false.
    pub fn total(&self) -> Assignment {
        self.partial.completed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    FoundAssignments,
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub kind: OutcomeKind,
    pub branches: Vec<Branch>,
    pub branches_explored: u64,
    pub reroutes: u64,
}

impl SearchOutcome {
    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.branches.iter().map(Branch::total)
    }
}

struct Frame {
    /// Next literal position to try.
    next: usize,
    /// Trail length before this frame assigned anything.
    mark: usize,
    passthrough: bool,
}

struct Search<'a> {
    ir: &'a IrreducibleForm,
    partial: Assignment,
    trail: Vec<Lit>,
    chosen: Vec<(ClauseId, Lit)>,
}

impl Search<'_> {
    fn assign(&mut self, lit: Lit) {
        self.partial.set(lit.var(), !lit.is_negated());
        self.trail.push(lit);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let l = self.trail.pop().unwrap();
            self.partial.unset(l.var());
        }
    }

    /// Tries literal positions from `frame.next`; returns true when one was taken.
    fn take_next(&mut self, depth: usize, frame: &mut Frame) -> bool {
        let clause = self.ir.residual[depth];
        let lits = &clause.lits;
        while frame.next < lits.width() {
            let pos = frame.next;
            frame.next += 1;
            self.undo_to(frame.mark);
            let lit = lits[pos];
            if self.partial.lit_value(lit).is_some() {
                continue;
            }
            for &earlier in &lits[..pos] {
                if self.partial.lit_value(earlier).is_none() {
                    self.assign(earlier.complement());
                }
            }
            self.assign(lit);
            self.chosen.truncate(depth);
            self.chosen.push((clause.id, lit));
            return true;
        }
        self.undo_to(frame.mark);
        false
    }
}

/// Enumerates product terms of an irreducible form.
pub fn expand(ir: &IrreducibleForm, limits: ExpandLimits) -> Result<SearchOutcome, ExpandError> {
    if ir.status == Status::ContradictionFound {
        return Err(ExpandError::InvalidState);
    }
    let mut s = Search {
        ir,
        partial: Assignment::partial(ir.num_vars()),
        trail: Vec::new(),
        chosen: Vec::new(),
    };
    for &u in &ir.units {
        s.assign(u);
    }
    let base = s.trail.len();
    let depth_max = ir.residual.len();
    let mut branches = Vec::new();
    let mut visits = 0u64;
    let mut reroutes = 0u64;
    let mut budget_hit = false;
    let mut stack: Vec<Frame> = Vec::new();
    let mut entering = true;

    'search: loop {
        if entering {
            let depth = stack.len();
            if depth == depth_max {
                branches.push(Branch {
                    chosen: s.chosen.clone(),
                    partial: s.partial.clone(),
                });
                if limits.max_solutions.is_some_and(|m| branches.len() >= m) {
                    break 'search;
                }
                entering = false;
                continue;
            }
            let clause = ir.residual[depth];
            let mut frame = Frame {
                next: 0,
                mark: s.trail.len(),
                passthrough: false,
            };
            if let Some(&t) = clause
                .lits
                .iter()
                .find(|&&l| s.partial.lit_value(l) == Some(true))
            {
                frame.passthrough = true;
                s.chosen.truncate(depth);
                s.chosen.push((clause.id, t));
                stack.push(frame);
                continue;
            }
            if limits.max_visits.is_some_and(|b| visits >= b) {
                budget_hit = true;
                break 'search;
            }
            if s.take_next(depth, &mut frame) {
                visits += 1;
                stack.push(frame);
            } else {
                reroutes += 1;
                entering = false;
            }
            continue;
        }

        // backtrack into the deepest frame with an untried literal
        loop {
            let Some(mut frame) = stack.pop() else {
                break 'search;
            };
            let depth = stack.len();
            if frame.passthrough {
                continue;
            }
            if limits.max_visits.is_some_and(|b| visits >= b) {
                budget_hit = true;
                break 'search;
            }
            if s.take_next(depth, &mut frame) {
                visits += 1;
                stack.push(frame);
                entering = true;
                break;
            }
        }
    }
    s.undo_to(base);

    let kind = if !branches.is_empty() {
        OutcomeKind::FoundAssignments
    } else if budget_hit {
        OutcomeKind::BudgetExceeded
    } else {
        OutcomeKind::Exhausted
    };
    Ok(SearchOutcome {
        kind,
        branches,
        branches_explored: visits,
        reroutes,
    })
}

/// Number of distinct total assignments covered by at least one branch.
pub fn count_branch_models(ir: &IrreducibleForm) -> Result<u64, ExpandError> {
    Ok(branch_model_set(ir)?.count())
}

/// Union of all branch terms as a model set.
pub fn branch_model_set(ir: &IrreducibleForm) -> Result<ModelSet, ExpandError> {
    let n = ir.num_vars();
    let mut set = ModelSet::empty(n)?;
    if ir.status == Status::ContradictionFound {
        return Ok(set);
    }
    let outcome = expand(ir, ExpandLimits::unlimited())?;
    for b in &outcome.branches {
        let mut fixed = 0u64;
        let mut free = 0u64;
        for v in 1..=n {
            let var = crate::cnf::Var::new(v);
            let bit = 1u64 << ModelSet::var_bit(n, var);
            match b.partial.get(var) {
                Some(true) => fixed |= bit,
                Some(false) => {}
                None => free |= bit,
            }
        }
        // every subset of the free bits
        let mut sub = free;
        loop {
            set.insert(fixed | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(set)
}

/// Checks every branch's total assignment against the irreducible form.
pub fn branches_satisfy(ir: &IrreducibleForm, outcome: &SearchOutcome) -> bool {
    outcome
        .assignments()
        .all(|a| evaluate(&ir.formula, &a).unwrap_or(false))
}

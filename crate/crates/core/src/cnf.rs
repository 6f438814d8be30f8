//! Literals, clauses, formulas and truth assignments.
//!
//! Literals use the interleaved integer encoding where the positive literal of
//! variable `v` is `2v - 1` and its negation is `2v`. Complementary literals are
//! therefore adjacent integers, which is what lets the sort-based reducer find
//! clashing clauses next to each other.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// Maximum number of literals in a clause.
pub const MAX_WIDTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause has {width} distinct literals, at most 3 are allowed")]
    WidthExceeded { width: usize },
    #[error("variable {var} is out of range (formula has {num_vars} variables)")]
    VarOutOfRange { var: u32, num_vars: u32 },
    #[error("invalid literal {0}")]
    InvalidLiteral(i64),
    #[error("assignment leaves variable {var} unassigned")]
    IncompleteAssignment { var: u32 },
}

/// A 1-based variable number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics if `id` is zero.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "variables are 1-based");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, false)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, true)
    }
}

/// A literal in the interleaved encoding: `2v - 1` for `v`, `2v` for `!v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Self {
        Lit(2 * var.0 - u32::from(!negated))
    }

    /// Builds a literal from its raw index. Returns `None` for index 0.
    pub fn from_index(index: u32) -> Option<Self> {
        (index >= 1).then_some(Lit(index))
    }

    /// Converts a signed DIMACS literal (`+v` / `-v`).
    pub fn from_dimacs(value: i64) -> Result<Self, CnfError> {
        let var = value.unsigned_abs();
        if value == 0 || var > u64::from(u32::MAX / 2) {
            return Err(CnfError::InvalidLiteral(value));
        }
        Ok(Lit::new(Var(var as u32), value < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0);
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.div_ceil(2))
    }

    pub fn is_negated(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Odd indices map to the next integer, even ones to the previous.
    pub fn complement(self) -> Self {
        if self.is_negated() {
            Lit(self.0 - 1)
        } else {
            Lit(self.0 + 1)
        }
    }

    /// Truth value of the literal when its variable is `value`.
    pub fn eval(self, value: bool) -> bool {
        value != self.is_negated()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Free-function form of [`Lit::new`].
pub fn encode_literal(var: Var, negated: bool) -> Lit {
    Lit::new(var, negated)
}

/// Free-function form of [`Lit::complement`].
pub fn complement(lit: Lit) -> Lit {
    lit.complement()
}

/// Strictly ascending list of one to three literals with no complementary pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lits {
    len: u8,
    lits: [Lit; MAX_WIDTH],
}

impl Lits {
    /// Caller guarantees `sorted` is strictly ascending, tautology free and 1..=3 long.
    fn from_sorted(sorted: &[Lit]) -> Self {
        debug_assert!(!sorted.is_empty() && sorted.len() <= MAX_WIDTH);
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        let mut lits = [Lit(u32::MAX); MAX_WIDTH];
        lits[..sorted.len()].copy_from_slice(sorted);
        Lits {
            len: sorted.len() as u8,
            lits,
        }
    }

    pub fn width(&self) -> usize {
        usize::from(self.len)
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self[..].contains(&lit)
    }

    /// True if every literal of `self` occurs in `other`.
    pub fn is_subset_of(&self, other: &Lits) -> bool {
        self.iter().all(|&l| other.contains(l))
    }

    /// The clause with `lit` removed; `None` when nothing is left.
    pub fn without(&self, lit: Lit) -> Option<Lits> {
        let rest: Vec<Lit> = self.iter().copied().filter(|&l| l != lit).collect();
        (!rest.is_empty()).then(|| Lits::from_sorted(&rest))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.iter().map(|l| l.var())
    }
}

impl Deref for Lits {
    type Target = [Lit];

    fn deref(&self) -> &[Lit] {
        &self.lits[..usize::from(self.len)]
    }
}

impl fmt::Debug for Lits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.iter().map(|l| l.index()))
            .finish()
    }
}

/// Result of normalizing a raw literal list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalized {
    Clause(Lits),
    Tautology,
    Empty,
}

/// Sorts and deduplicates `raw`, classifying tautologies and the empty clause.
///
/// Width is checked after deduplication and before the tautology test, so a
/// four-literal clause is rejected even when it contains `x` and `!x`.
pub fn normalize_clause(raw: &[Lit]) -> Result<Normalized, CnfError> {
    let mut lits = raw.to_vec();
    lits.sort_unstable();
    lits.dedup();
    if lits.is_empty() {
        return Ok(Normalized::Empty);
    }
    if lits.len() > MAX_WIDTH {
        return Err(CnfError::WidthExceeded { width: lits.len() });
    }
    // complements are adjacent after sorting
    if lits.windows(2).any(|w| w[0].complement() == w[1]) {
        return Ok(Normalized::Tautology);
    }
    Ok(Normalized::Clause(Lits::from_sorted(&lits)))
}

/// Stable clause identifier. Ids start at 1 and are never reused within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clause {
    pub id: ClauseId,
    pub lits: Lits,
}

impl Clause {
    pub fn width(&self) -> usize {
        self.lits.width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    Tautology,
    Duplicate,
}

/// An input clause that was not admitted into the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    /// Zero-based position in the raw input.
    pub input_index: usize,
    pub lits: Vec<Lit>,
    pub reason: DropReason,
}

/// A conjunction of width-limited clauses over variables `1..=num_vars`.
///
/// Duplicate clauses are collapsed and tautologies dropped on construction;
/// surviving clauses get ids `1, 2, ...` in input order. An empty input clause
/// sets the contradiction marker instead of becoming a clause.
#[derive(Debug, Clone)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
    has_empty: bool,
    dropped: Vec<Dropped>,
}

impl Formula {
    pub fn new<I, C>(num_vars: u32, raw: I) -> Result<Self, CnfError>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[Lit]>,
    {
        let mut clauses = Vec::new();
        let mut seen = HashSet::new();
        let mut has_empty = false;
        let mut dropped = Vec::new();
        for (input_index, raw) in raw.into_iter().enumerate() {
            let raw = raw.as_ref();
            if let Some(l) = raw.iter().find(|l| l.var().0 > num_vars) {
                return Err(CnfError::VarOutOfRange {
                    var: l.var().0,
                    num_vars,
                });
            }
            match normalize_clause(raw)? {
                Normalized::Empty => has_empty = true,
                Normalized::Tautology => dropped.push(Dropped {
                    input_index,
                    lits: raw.to_vec(),
                    reason: DropReason::Tautology,
                }),
                Normalized::Clause(lits) => {
                    if seen.insert(lits) {
                        let id = ClauseId(clauses.len() as u32 + 1);
                        clauses.push(Clause { id, lits });
                    } else {
                        dropped.push(Dropped {
                            input_index,
                            lits: raw.to_vec(),
                            reason: DropReason::Duplicate,
                        });
                    }
                }
            }
        }
        Ok(Formula {
            num_vars,
            clauses,
            has_empty,
            dropped,
        })
    }

    /// Convenience constructor from signed DIMACS-style literals.
    pub fn from_signed<C: AsRef<[i64]>>(num_vars: u32, raw: &[C]) -> Result<Self, CnfError> {
        let clauses = raw
            .iter()
            .map(|c| c.as_ref().iter().map(|&v| Lit::from_dimacs(v)).collect())
            .collect::<Result<Vec<Vec<Lit>>, _>>()?;
        Formula::new(num_vars, clauses)
    }

    /// Assembles a formula from already-normalized, pairwise distinct clauses.
    pub(crate) fn from_parts(num_vars: u32, clauses: Vec<Clause>, has_empty: bool) -> Self {
        Formula {
            num_vars,
            clauses,
            has_empty,
            dropped: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of admitted clauses, not counting the empty-clause marker.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty() && !self.has_empty
    }

    /// True when the input contained a zero-width clause.
    pub fn has_empty_clause(&self) -> bool {
        self.has_empty
    }

    pub fn dropped(&self) -> &[Dropped] {
        &self.dropped
    }

    /// Total number of literal occurrences.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::width).sum()
    }

    /// Clause counts by width: `[width 1, width 2, width 3]`.
    pub fn width_histogram(&self) -> [usize; MAX_WIDTH] {
        let mut h = [0; MAX_WIDTH];
        for c in &self.clauses {
            h[c.width() - 1] += 1;
        }
        h
    }

    /// The literal lists, ignoring ids and order.
    pub fn clause_set(&self) -> BTreeSet<Lits> {
        self.clauses.iter().map(|c| c.lits).collect()
    }

    /// Same variable count, empty marker and clause set.
    pub fn same_clauses(&self, other: &Formula) -> bool {
        self.num_vars == other.num_vars
            && self.has_empty == other.has_empty
            && self.clause_set() == other.clause_set()
    }

    /// Largest variable index that occurs in some clause.
    pub fn max_var_used(&self) -> u32 {
        self.clauses
            .iter()
            .flat_map(|c| c.lits.vars())
            .map(Var::id)
            .max()
            .unwrap_or(0)
    }
}

/// A partial or total truth assignment over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    /// All variables unassigned.
    pub fn partial(num_vars: u32) -> Self {
        Assignment {
            values: vec![None; num_vars as usize],
        }
    }

    /// `values[i]` is the value of variable `i + 1`.
    pub fn total(values: Vec<bool>) -> Self {
        Assignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.0 as usize - 1).copied().flatten()
    }

    /// Panics if `var` is beyond the assignment's range.
    pub fn set(&mut self, var: Var, value: bool) {
        self.values[var.0 as usize - 1] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        self.values[var.0 as usize - 1] = None;
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.eval(v))
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Fills unassigned variables with `false`.
    pub fn completed(&self) -> Assignment {
        Assignment {
            values: self
                .values
                .iter()
                .map(|v| Some(v.unwrap_or(false)))
                .collect(),
        }
    }

    /// Assigned literals in variable order.
    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Lit::new(Var(i as u32 + 1), !b)))
    }

    /// Solver-convention value line, e.g. `v 1 -2 3 0`.
    pub fn to_value_line(&self) -> String {
        let mut out = String::from("v");
        for lit in self.literals() {
            out.push(' ');
            out.push_str(&lit.to_dimacs().to_string());
        }
        out.push_str(" 0");
        out
    }
}

/// Truth value of `formula` under a total assignment.
pub fn evaluate(formula: &Formula, assignment: &Assignment) -> Result<bool, CnfError> {
    for v in 1..=formula.num_vars() {
        if assignment.get(Var(v)).is_none() {
            return Err(CnfError::IncompleteAssignment { var: v });
        }
    }
    if formula.has_empty_clause() {
        return Ok(false);
    }
    Ok(formula.clauses().iter().all(|c| {
        c.lits
            .iter()
            .any(|&l| assignment.lit_value(l) == Some(true))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lits(raw: &[u32]) -> Vec<Lit> {
        raw.iter().map(|&i| Lit::from_index(i).unwrap()).collect()
    }

    #[test]
    fn letter_encoding() {
        assert_eq!(encode_literal(Var::new(1), false).index(), 1);
        assert_eq!(encode_literal(Var::new(1), true).index(), 2);
        assert_eq!(encode_literal(Var::new(2), false).index(), 3);
    }

    #[test]
    fn complement_examples() {
        let c = |i| complement(Lit::from_index(i).unwrap()).index();
        assert_eq!(c(1), 2);
        assert_eq!(c(2), 1);
        assert_eq!(c(5), 6);
    }

    #[test]
    fn normalize_examples() {
        let n = normalize_clause(&lits(&[1, 1, 3])).unwrap();
        match n {
            Normalized::Clause(l) => {
                assert_eq!(l.iter().map(|l| l.index()).collect::<Vec<_>>(), [1, 3])
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            normalize_clause(&lits(&[1, 2, 3])).unwrap(),
            Normalized::Tautology
        );
        assert_eq!(normalize_clause(&[]).unwrap(), Normalized::Empty);
        assert_eq!(
            normalize_clause(&lits(&[1, 3, 5, 7])),
            Err(CnfError::WidthExceeded { width: 4 })
        );
    }

    #[test]
    fn evaluate_examples() {
        let f = Formula::from_signed(3, &[[1, 2, 3]]).unwrap();
        assert!(!evaluate(&f, &Assignment::total(vec![false; 3])).unwrap());

        let empty = Formula::new(2, Vec::<Vec<Lit>>::new()).unwrap();
        assert!(evaluate(&empty, &Assignment::total(vec![true, false])).unwrap());

        let f = Formula::from_signed(1, &[[1], [-1]]).unwrap();
        assert!(!evaluate(&f, &Assignment::total(vec![true])).unwrap());
    }

    #[test]
    fn evaluate_rejects_partial() {
        let f = Formula::from_signed(2, &[[1, 2]]).unwrap();
        let mut a = Assignment::partial(2);
        a.set(Var::new(1), true);
        assert_eq!(
            evaluate(&f, &a),
            Err(CnfError::IncompleteAssignment { var: 2 })
        );
    }

    #[test]
    fn construction_collapses_and_drops() {
        let f = Formula::from_signed(3, &[vec![1, 2], vec![2, 1], vec![1, -1], vec![3]]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.clauses()[1].id, ClauseId(2));
        assert_eq!(f.dropped().len(), 2);
        assert_eq!(f.dropped()[0].reason, DropReason::Duplicate);
        assert_eq!(f.dropped()[1].reason, DropReason::Tautology);
    }

    #[test]
    fn construction_rejects_out_of_range() {
        assert_eq!(
            Formula::from_signed(2, &[[1, 3]]).unwrap_err(),
            CnfError::VarOutOfRange {
                var: 3,
                num_vars: 2
            }
        );
    }

    #[test]
    fn empty_clause_marker() {
        let f = Formula::new(1, vec![Vec::<Lit>::new()]).unwrap();
        assert!(f.has_empty_clause());
        assert!(!evaluate(&f, &Assignment::total(vec![true])).unwrap());
    }

    proptest! {
        #[test]
        fn encoding_bijection(v in 1u32..=1_000_000, neg: bool) {
            let l = encode_literal(Var::new(v), neg);
            prop_assert_eq!(l.var().id(), v);
            prop_assert_eq!(l.is_negated(), neg);
            prop_assert_eq!(Lit::from_dimacs(l.to_dimacs()).unwrap(), l);
        }

        #[test]
        fn complement_is_fixed_point_free_involution(i in 1u32..=2_000_000) {
            let l = Lit::from_index(i).unwrap();
            prop_assert_ne!(l.complement(), l);
            prop_assert_eq!(l.complement().complement(), l);
            prop_assert_eq!(l.complement().var(), l.var());
        }

        #[test]
        fn normalize_is_idempotent(raw in prop::collection::vec(1u32..=12, 0..5)) {
            let raw = lits(&raw);
            if let Ok(Normalized::Clause(c)) = normalize_clause(&raw) {
                prop_assert_eq!(normalize_clause(&c).unwrap(), Normalized::Clause(c));
            }
        }

        #[test]
        fn evaluate_matches_direct_semantics(
            clauses in prop::collection::vec(prop::collection::vec((1u32..=6, any::<bool>()), 1..=3), 0..12),
            values in prop::collection::vec(any::<bool>(), 6),
        ) {
            let raw: Vec<Vec<Lit>> = clauses
                .iter()
                .map(|c| c.iter().map(|&(v, n)| Lit::new(Var::new(v), n)).collect())
                .collect();
            let f = Formula::new(6, &raw).unwrap();
            let direct = clauses
                .iter()
                .all(|c| c.iter().any(|&(v, n)| values[v as usize - 1] != n));
            prop_assert_eq!(evaluate(&f, &Assignment::total(values.clone())).unwrap(), direct);
        }
    }
}

//! Ground truth by exhaustive enumeration, plus a small DPLL fallback.
//!
//! Assignments over `n` variables are numbered so that variable 1 is the most
//! significant bit. Ascending index order is then lexicographic order over
//! `(x1, ..., xn)` with `false < true`.

use thiserror::Error;

use crate::cnf::{Assignment, Formula, Lit, Var};

/// Largest variable count the truth table accepts.
pub const MAX_ENUM_VARS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{num_vars} variables exceed the enumeration limit of {limit}")]
    TooLarge { num_vars: u32, limit: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub verdict: Verdict,
    /// Exact count from enumeration; `None` for the backtracking solver.
    pub model_count: Option<u64>,
    pub witness: Option<Assignment>,
}

/// Set of total assignments, one bit per assignment.
#[derive(Clone, PartialEq, Eq)]
pub struct ModelSet {
    num_vars: u32,
    words: Vec<u64>,
}

impl std::fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModelSet(n={}, count={})", self.num_vars, self.count())
    }
}

impl ModelSet {
    fn check(num_vars: u32) -> Result<(), OracleError> {
        if num_vars > MAX_ENUM_VARS {
            Err(OracleError::TooLarge {
                num_vars,
                limit: MAX_ENUM_VARS,
            })
        } else {
            Ok(())
        }
    }

    fn word_count(num_vars: u32) -> usize {
        (1usize << num_vars).div_ceil(64)
    }

    /// Mask of the valid bits in the last word.
    fn tail_mask(num_vars: u32) -> u64 {
        if num_vars >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << num_vars)) - 1
        }
    }

    pub fn empty(num_vars: u32) -> Result<Self, OracleError> {
        Self::check(num_vars)?;
        Ok(ModelSet {
            num_vars,
            words: vec![0; Self::word_count(num_vars)],
        })
    }

    pub fn full(num_vars: u32) -> Result<Self, OracleError> {
        Self::check(num_vars)?;
        let mut words = vec![u64::MAX; Self::word_count(num_vars)];
        *words.last_mut().unwrap() = Self::tail_mask(num_vars);
        Ok(ModelSet { num_vars, words })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, index: u64) -> bool {
        self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn insert(&mut self, index: u64) {
        self.words[(index / 64) as usize] |= 1 << (index % 64);
    }

    pub fn first(&self) -> Option<u64> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i as u64 * 64 + u64::from(w.trailing_zeros()))
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let bit = w.trailing_zeros();
                    w &= w - 1;
                    i as u64 * 64 + u64::from(bit)
                })
            })
        })
    }

    /// Bit position of variable `var` inside an assignment index.
    pub fn var_bit(num_vars: u32, var: Var) -> u32 {
        num_vars - var.id()
    }

    pub fn assignment(&self, index: u64) -> Assignment {
        assignment_of(self.num_vars, index)
    }

    /// Index of a total assignment (variables beyond `num_vars` are ignored).
    pub fn index_of(num_vars: u32, a: &Assignment) -> u64 {
        (1..=num_vars).fold(0u64, |acc, v| {
            if a.get(Var::new(v)) == Some(true) {
                acc | 1 << Self::var_bit(num_vars, Var::new(v))
            } else {
                acc
            }
        })
    }

    /// Restricts to assignments where at least one literal of `lits` holds.
    fn and_clause(&mut self, lits: &[Lit]) {
        let n = self.num_vars;
        let mut low_mask = 0u64;
        // literals whose variable lives in the word index: (bit, wanted value)
        let mut high: Vec<(u32, bool)> = Vec::new();
        for &l in lits {
            let bit = Self::var_bit(n, l.var());
            let positive = !l.is_negated();
            if bit < 6 {
                let pattern = LOW_PATTERNS[bit as usize];
                low_mask |= if positive { pattern } else { !pattern };
            } else {
                high.push((bit - 6, positive));
            }
        }
        for (i, w) in self.words.iter_mut().enumerate() {
            let satisfied_high = high.iter().any(|&(b, pos)| ((i >> b) & 1 == 1) == pos);
            if !satisfied_high {
                *w &= low_mask;
            }
        }
        if let Some(last) = self.words.last_mut() {
            *last &= Self::tail_mask(n);
        }
    }

    pub fn intersect(&mut self, other: &ModelSet) {
        assert_eq!(self.num_vars, other.num_vars);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }
}

/// `LOW_PATTERNS[b]` has bit `i` set iff bit `b` of `i` is set, for `i < 64`.
const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

pub fn assignment_of(num_vars: u32, index: u64) -> Assignment {
    Assignment::total(
        (1..=num_vars)
            .map(|v| index >> ModelSet::var_bit(num_vars, Var::new(v)) & 1 == 1)
            .collect(),
    )
}

/// Model set of `formula` over its own variable count.
pub fn model_set(formula: &Formula) -> Result<ModelSet, OracleError> {
    model_set_over(formula, formula.num_vars())
}

/// Model set of `formula` over `num_vars >= formula.num_vars()` variables.
pub fn model_set_over(formula: &Formula, num_vars: u32) -> Result<ModelSet, OracleError> {
    assert!(num_vars >= formula.max_var_used());
    let mut set = ModelSet::full(num_vars)?;
    if formula.has_empty_clause() {
        return ModelSet::empty(num_vars);
    }
    for c in formula.clauses() {
        set.and_clause(&c.lits);
    }
    Ok(set)
}

/// Model set of an arbitrary predicate, by evaluating it on every assignment.
pub fn model_set_of<F>(num_vars: u32, mut predicate: F) -> Result<ModelSet, OracleError>
where
    F: FnMut(&Assignment) -> bool,
{
    let mut set = ModelSet::empty(num_vars)?;
    for index in 0..1u64 << num_vars {
        if predicate(&assignment_of(num_vars, index)) {
            set.insert(index);
        }
    }
    Ok(set)
}

/// Exhaustive solve with exact model count and the lexicographically first model.
pub fn truth_table_solve(formula: &Formula) -> Result<OracleResult, OracleError> {
    let set = model_set(formula)?;
    let count = set.count();
    Ok(OracleResult {
        verdict: if count > 0 {
            Verdict::Sat
        } else {
            Verdict::Unsat
        },
        model_count: Some(count),
        witness: set.first().map(|i| set.assignment(i)),
    })
}

/// True iff both formulas have the same models over the union of their variables.
pub fn equivalent(f1: &Formula, f2: &Formula) -> Result<bool, OracleError> {
    let n = f1.num_vars().max(f2.num_vars());
    Ok(model_set_over(f1, n)? == model_set_over(f2, n)?)
}

/// Unit-propagating backtracking search. Verdict and witness only.
pub fn backtracking_solve(formula: &Formula) -> OracleResult {
    let unsat = OracleResult {
        verdict: Verdict::Unsat,
        model_count: None,
        witness: None,
    };
    if formula.has_empty_clause() {
        return unsat;
    }
    let clauses: Vec<Vec<Lit>> = formula.clauses().iter().map(|c| c.lits.to_vec()).collect();
    let mut values: Vec<Option<bool>> = vec![None; formula.num_vars() as usize + 1];
    if dpll(&clauses, &mut values) {
        let a = Assignment::total(values[1..].iter().map(|v| v.unwrap_or(false)).collect());
        OracleResult {
            verdict: Verdict::Sat,
            model_count: None,
            witness: Some(a),
        }
    } else {
        unsat
    }
}

fn lit_value(values: &[Option<bool>], l: Lit) -> Option<bool> {
    values[l.var().id() as usize].map(|v| l.eval(v))
}

fn dpll(clauses: &[Vec<Lit>], values: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    // propagate to fixpoint
    loop {
        let mut unit = None;
        let mut all_sat = true;
        for c in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(values, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open_count += 1;
                        open = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            all_sat = false;
            match open_count {
                0 => {
                    undo(values, &trail);
                    return false;
                }
                1 => {
                    unit = open;
                    break;
                }
                _ => {}
            }
        }
        if all_sat {
            return true;
        }
        match unit {
            Some(l) => {
                let v = l.var().id() as usize;
                values[v] = Some(!l.is_negated());
                trail.push(v);
            }
            None => break,
        }
    }
    // branch on the first open literal of the first unsatisfied clause
    let pick = clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| lit_value(values, l) == Some(true)))
        .flat_map(|c| c.iter().copied())
        .find(|&l| lit_value(values, l).is_none())
        .expect("an unsatisfied clause has an open literal after propagation");
    let v = pick.var().id() as usize;
    for value in [!pick.is_negated(), pick.is_negated()] {
        values[v] = Some(value);
        if dpll(clauses, values) {
            return true;
        }
    }
    values[v] = None;
    undo(values, &trail);
    false
}

fn undo(values: &mut [Option<bool>], trail: &[usize]) {
    for &v in trail {
        values[v] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::evaluate;

    fn f(n: u32, raw: &[&[i64]]) -> Formula {
        Formula::from_signed(n, raw).unwrap()
    }

    fn complete_signs() -> Formula {
        let raw: Vec<Vec<i64>> = (0..8)
            .map(|m| {
                (1..=3i64)
                    .map(|v| if m >> (3 - v) & 1 == 1 { -v } else { v })
                    .collect()
            })
            .collect();
        Formula::from_signed(3, &raw).unwrap()
    }

    /// Reference count by evaluating every assignment clause by clause.
    fn slow_count(formula: &Formula) -> u64 {
        let n = formula.num_vars();
        (0..1u64 << n)
            .filter(|&i| evaluate(formula, &assignment_of(n, i)).unwrap())
            .count() as u64
    }

    #[test]
    fn single_clause_has_seven_models() {
        let r = truth_table_solve(&f(3, &[&[1, 2, 3]])).unwrap();
        assert_eq!(r.verdict, Verdict::Sat);
        assert_eq!(r.model_count, Some(7));
        // lexicographically first: A=false, B=false, C=true
        assert_eq!(r.witness.unwrap().to_value_line(), "v -1 -2 3 0");
    }

    #[test]
    fn complete_signs_unsat() {
        let r = truth_table_solve(&complete_signs()).unwrap();
        assert_eq!(r.verdict, Verdict::Unsat);
        assert_eq!(r.model_count, Some(0));
        assert_eq!(
            backtracking_solve(&complete_signs()).verdict,
            Verdict::Unsat
        );
    }

    #[test]
    fn odd_parity_product() {
        let parity = f(3, &[&[1, 2, 3], &[-1, 2, -3], &[-1, 3, -2], &[1, -3, -2]]);
        let set = model_set(&parity).unwrap();
        let models: Vec<String> = set
            .iter()
            .map(|i| set.assignment(i).to_value_line())
            .collect();
        assert_eq!(
            models,
            vec!["v -1 -2 3 0", "v -1 2 -3 0", "v 1 -2 -3 0", "v 1 2 3 0"]
        );
    }

    #[test]
    fn backtracking_examples() {
        let one = f(3, &[&[1, 2, 3]]);
        let r = backtracking_solve(&one);
        assert_eq!(r.verdict, Verdict::Sat);
        assert!(evaluate(&one, &r.witness.unwrap()).unwrap());
        assert_eq!(
            backtracking_solve(&f(1, &[&[1], &[-1]])).verdict,
            Verdict::Unsat
        );
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&f(3, &[&[1, 2, 3], &[1, 2, -3]]), &f(2, &[&[1, 2]])).unwrap());
        // (A+K).(!K) against (A)
        assert!(!equivalent(&f(2, &[&[1, 2], &[-2]]), &f(1, &[&[1]])).unwrap());
    }

    #[test]
    fn too_large() {
        let big = Formula::from_signed(25, &[[25]]).unwrap();
        assert!(matches!(
            truth_table_solve(&big),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn bitset_agrees_with_slow_count_across_word_boundaries() {
        for n in [1u32, 3, 5, 6, 7, 9] {
            let raw: Vec<Vec<i64>> = vec![
                vec![1, -(n as i64)],
                vec![-1, (n as i64 + 1) / 2],
                vec![(n as i64), -((n as i64 + 1) / 2)],
            ];
            let formula = Formula::from_signed(n, &raw).unwrap();
            assert_eq!(
                model_set(&formula).unwrap().count(),
                slow_count(&formula),
                "n={n}"
            );
        }
    }

    #[test]
    fn empty_marker_has_no_models() {
        let formula = Formula::new(2, vec![Vec::<Lit>::new()]).unwrap();
        assert_eq!(truth_table_solve(&formula).unwrap().verdict, Verdict::Unsat);
        assert_eq!(backtracking_solve(&formula).verdict, Verdict::Unsat);
    }
}

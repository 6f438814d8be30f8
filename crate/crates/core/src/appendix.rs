//! Machine checks for the hand case analysis of two-clause interactions.
//!
//! Each case is a small product over `Q, W, E` (the clause under attack) and
//! `A, B, C` (the clause attacking it), together with the classification the
//! hand analysis gives it. The suite checks stated equalities with the oracle,
//! runs the reducer with and without self-subsumption, and records whether the
//! engine's behaviour matches the classification. Mismatches are data, not
//! failures.

use std::fmt;

use crate::cnf::{Assignment, Formula, Lit, Var};
use crate::oracle::{self, Verdict};
use crate::reduce::{reduce_to_fixpoint, Backend, ReduceConfig, Status};
use crate::report::Record;

/// Variable names for the case analysis, in index order.
pub const CASE_VARS: &str = "QWEABC";
/// Variable names for the basic rule examples.
pub const RULE_VARS: &str = "ABCKL";

/// Boolean expression over single-letter variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(u32),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError(pub String);

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ExprError {}

struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a str,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some('.') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::And(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.factor()?)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(ExprError(format!("expected ')' at {}", self.pos)));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) => match self.names.find(c) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Expr::Var(i as u32 + 1))
                }
                None => Err(ExprError(format!("unknown variable '{c}'"))),
            },
            None => Err(ExprError("unexpected end of expression".into())),
        }
    }
}

impl Expr {
    /// Parses `+` (or), `.` (and), `!` (not) and parentheses; whitespace is ignored.
    pub fn parse(text: &str, names: &str) -> Result<Expr, ExprError> {
        let mut p = ExprParser {
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            names,
        };
        let e = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(ExprError(format!("trailing input at {}", p.pos)));
        }
        Ok(e)
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        match self {
            Expr::Var(v) => a.get(Var::new(*v)).unwrap_or(false),
            Expr::Not(e) => !e.eval(a),
            Expr::And(es) => es.iter().all(|e| e.eval(a)),
            Expr::Or(es) => es.iter().any(|e| e.eval(a)),
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            Expr::Var(v) => *v,
            Expr::Not(e) => e.max_var(),
            Expr::And(es) | Expr::Or(es) => es.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    fn as_literal(&self) -> Option<Lit> {
        match self {
            Expr::Var(v) => Some(Var::new(*v).positive()),
            Expr::Not(e) => match e.as_ref() {
                Expr::Var(v) => Some(Var::new(*v).negative()),
                _ => None,
            },
            _ => None,
        }
    }

    /// Reads a product of literal sums as raw clauses (unnormalized).
    pub fn to_raw_clauses(&self) -> Option<Vec<Vec<Lit>>> {
        let clause = |e: &Expr| -> Option<Vec<Lit>> {
            match e {
                Expr::Or(lits) => lits.iter().map(Expr::as_literal).collect(),
                other => other.as_literal().map(|l| vec![l]),
            }
        };
        match self {
            Expr::And(cs) => cs.iter().map(clause).collect(),
            other => clause(other).map(|c| vec![c]),
        }
    }
}

/// Builds a formula from product notation over `names`, using the highest
/// variable mentioned as the variable count.
pub fn formula_from_notation(text: &str, names: &str) -> Result<Formula, ExprError> {
    let e = Expr::parse(text, names)?;
    let raw = e
        .to_raw_clauses()
        .ok_or_else(|| ExprError(format!("`{text}` is not a product of sums")))?;
    Formula::new(e.max_var(), raw).map_err(|err| ExprError(err.to_string()))
}

/// The hand analysis' classification of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// Caught by the unit or merge rules during a sweep.
    SpottedBySweep,
    /// Caught once clause permutations are sorted.
    SpottedAfterSorting,
    /// A tautological clause; only the bare clause remains.
    NoConstraint,
    /// Left untouched by the reducer; the number groups cases of the same shape.
    Remains(u8),
    /// The product stays satisfiable.
    Satisfiable,
    /// The reducer derives the empty clause.
    DetectedUnsat,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::SpottedBySweep => f.write_str("spotted-by-sweep"),
            Claim::SpottedAfterSorting => f.write_str("spotted-after-sorting"),
            Claim::NoConstraint => f.write_str("no-constraint"),
            Claim::Remains(k) => write!(f, "remains-{k}"),
            Claim::Satisfiable => f.write_str("satisfiable"),
            Claim::DetectedUnsat => f.write_str("detected-unsat"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppendixCase {
    pub label: String,
    pub lhs_text: String,
    pub lhs: Formula,
    pub rhs_text: Option<String>,
    pub rhs: Option<Formula>,
    /// Whether lhs and rhs are stated to be equal. Only meaningful with a rhs.
    pub expect_equivalent: bool,
    pub claim: Claim,
}

impl AppendixCase {
    fn new(label: &str, names: &str, lhs: &str, claim: Claim) -> Self {
        AppendixCase {
            label: label.to_string(),
            lhs_text: lhs.to_string(),
            lhs: formula_from_notation(lhs, names).expect("case fixtures are well formed"),
            rhs_text: None,
            rhs: None,
            expect_equivalent: true,
            claim,
        }
    }

    fn equals(mut self, names: &str, rhs: &str) -> Self {
        self.rhs_text = Some(rhs.to_string());
        self.rhs = Some(formula_from_notation(rhs, names).expect("case fixtures are well formed"));
        self
    }

    fn differs_from(mut self, names: &str, rhs: &str) -> Self {
        self = self.equals(names, rhs);
        self.expect_equivalent = false;
        self
    }
}

pub const EXACTLY_ONE_PRODUCT: &str = "(Q+W+E).(!Q+!W).(!Q+!E).(!W+!E)";
pub const ODD_PARITY_PRODUCT: &str = "(Q+W+E).(!Q+W+!E).(!Q+E+!W).(Q+!E+!W)";
pub const COMBINED_PRODUCT: &str = "(Q+W+E).(!Q+!W).(!Q+!E).(!W+!E).(!Q+W+!E).(!Q+E+!W).(Q+!E+!W)";

/// Every case, in report order.
pub fn appendix_cases() -> Vec<AppendixCase> {
    use Claim::*;
    let r = RULE_VARS;
    let q = CASE_VARS;
    vec![
        AppendixCase::new("rule/merge", r, "(A+B+C).(A+B+!C)", SpottedAfterSorting)
            .equals(r, "(A+B)"),
        AppendixCase::new("rule/unit-subsume", r, "(A+K+L).(K)", SpottedBySweep).equals(r, "(K)"),
        AppendixCase::new("rule/unit-resolve", r, "(A+K).(!K)", SpottedBySweep)
            .differs_from(r, "(A)"),
        AppendixCase::new("unit/A=!Q", q, "(Q+W+E).(!Q)", SpottedBySweep),
        AppendixCase::new("unit/fresh-pair", q, "(Q+W+E).(!Q+B)", Remains(1)),
        AppendixCase::new("unit/fresh-triple", q, "(Q+W+E).(!Q+B+C)", Remains(2)),
        AppendixCase::new("pair/B=Q", q, "(Q+W+E).(!Q+Q)", NoConstraint).equals(q, "(Q+W+E)"),
        AppendixCase::new("pair/B=!Q", q, "(Q+W+E).(!Q+!Q)", SpottedBySweep),
        AppendixCase::new("pair/B=W", q, "(Q+W+E).(!Q+W)", SpottedAfterSorting),
        AppendixCase::new("pair/B=E", q, "(Q+W+E).(!Q+E)", SpottedAfterSorting),
        AppendixCase::new("pair/B=!W", q, "(Q+W+E).(!Q+!W)", Remains(3)),
        AppendixCase::new("pair/B=!E", q, "(Q+W+E).(!Q+!E)", Remains(3)),
        AppendixCase::new("triple/B=Q", q, "(Q+W+E).(!Q+Q+C)", NoConstraint).equals(q, "(Q+W+E)"),
        AppendixCase::new("triple/B=!Q", q, "(Q+W+E).(!Q+!Q+C)", Remains(1))
            .equals(q, "(Q+W+E).(!Q+C)"),
        AppendixCase::new("triple/B=C=W", q, "(Q+W+E).(!Q+W+W)", SpottedAfterSorting)
            .equals(q, "(Q+W+E).(!Q+W)"),
        AppendixCase::new("triple/B=C=E", q, "(Q+W+E).(!Q+E+E)", SpottedAfterSorting)
            .equals(q, "(Q+W+E).(!Q+E)"),
        AppendixCase::new("triple/B=C=!W", q, "(Q+W+E).(!Q+!W+!W)", Remains(3))
            .equals(q, "(Q+W+E).(!Q+!W)"),
        AppendixCase::new("triple/B=C=!E", q, "(Q+W+E).(!Q+!E+!E)", Remains(3))
            .equals(q, "(Q+W+E).(!Q+!E)"),
        AppendixCase::new("triple/B=W,C=!W", q, "(Q+W+E).(!Q+W+!W)", NoConstraint)
            .equals(q, "(Q+W+E)"),
        AppendixCase::new("triple/B=E,C=!E", q, "(Q+W+E).(!Q+E+!E)", NoConstraint)
            .equals(q, "(Q+W+E)"),
        AppendixCase::new("triple/B=W,C=E", q, "(Q+W+E).(!Q+W+E)", SpottedAfterSorting),
        AppendixCase::new("triple/B=W,C=!E", q, "(Q+W+E).(!Q+W+!E)", Remains(4)),
        AppendixCase::new("triple/B=E,C=!W", q, "(Q+W+E).(!Q+E+!W)", Remains(4)),
        AppendixCase::new(
            "product/pair-after-triple",
            q,
            "(Q+W+E).(!Q+!W)",
            Satisfiable,
        ),
        AppendixCase::new(
            "product/triple-after-triple",
            q,
            "(Q+W+E).(!Q+W+!E)",
            Satisfiable,
        ),
        AppendixCase::new("product/exactly-one", q, EXACTLY_ONE_PRODUCT, Satisfiable),
        AppendixCase::new("product/odd-parity", q, ODD_PARITY_PRODUCT, Satisfiable),
        AppendixCase::new("product/combined", q, COMBINED_PRODUCT, Satisfiable)
            .equals(q, EXACTLY_ONE_PRODUCT),
        AppendixCase::new(
            "product/negated-clause",
            q,
            "(Q+W+E).(!Q).(!W).(!E)",
            DetectedUnsat,
        ),
    ]
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub label: String,
    pub claim: Claim,
    /// Oracle equivalence of lhs and rhs, when a rhs is stated.
    pub equivalence: Option<bool>,
    /// `equivalence` agrees with the stated (in)equality.
    pub equivalence_ok: Option<bool>,
    /// Some rule fired under the configuration the suite ran with.
    pub engine_detected: bool,
    pub detected_default: bool,
    pub detected_with_r4: bool,
    pub matches_claim: bool,
    pub model_count: u64,
    pub status: Status,
    pub tautologies_dropped: usize,
    /// Irreducible form under the suite's configuration, in product notation.
    pub reduced: String,
}

impl CaseResult {
    /// Detection only happens once self-subsumption is enabled.
    pub fn needs_r4(&self) -> bool {
        !self.detected_default && self.detected_with_r4
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct AppendixSummary {
    pub enable_r4: bool,
    pub cases: usize,
    pub equalities_checked: usize,
    pub equalities_ok: usize,
    pub claims_matched: usize,
    pub discrepancies: Vec<String>,
    pub r4_cases: Vec<String>,
    pub exactly_one_count: u64,
    pub odd_parity_count: u64,
    pub combined_count: u64,
    pub combined_equals_exactly_one: bool,
    /// Oracle verdict on `(A+K).(!K) = (A)`; expected false.
    pub unit_rule_equivalent: bool,
    pub identities_ok: bool,
}

impl AppendixSummary {
    /// Every stated equality (and the documented inequality) checks out.
    pub fn all_equalities_hold(&self) -> bool {
        self.equalities_ok == self.equalities_checked
            && self.identities_ok
            && self.combined_equals_exactly_one
    }
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub results: Vec<CaseResult>,
    pub identities: Vec<IdentityResult>,
    pub summary: AppendixSummary,
}

fn names_for(label: &str) -> &'static str {
    if label.starts_with("rule/") {
        RULE_VARS
    } else {
        CASE_VARS
    }
}

fn notation(f: &Formula, names: &str) -> String {
    let name = |l: &Lit| {
        let c = names.chars().nth(l.var().id() as usize - 1).unwrap_or('?');
        if l.is_negated() {
            format!("!{c}")
        } else {
            c.to_string()
        }
    };
    let mut parts: Vec<String> = f
        .clauses()
        .iter()
        .map(|c| {
            format!(
                "({})",
                c.lits.iter().map(name).collect::<Vec<_>>().join("+")
            )
        })
        .collect();
    if f.has_empty_clause() {
        parts.push("()".into());
    }
    parts.join(".")
}

fn run_case(case: &AppendixCase, enable_r4: bool) -> CaseResult {
    let config = |r4| ReduceConfig {
        backend: Backend::Sorted,
        self_subsumption: r4,
    };
    let (ir_default, tr_default) = reduce_to_fixpoint(&case.lhs, config(false));
    let (ir_r4, tr_r4) = reduce_to_fixpoint(&case.lhs, config(true));
    let (ir, trace) = if enable_r4 {
        (ir_r4, &tr_r4)
    } else {
        (ir_default, &tr_default)
    };
    let detected = !trace.steps.is_empty();

    let oracle = oracle::truth_table_solve(&case.lhs).expect("cases are tiny");
    let equivalence = case
        .rhs
        .as_ref()
        .map(|rhs| oracle::equivalent(&case.lhs, rhs).expect("cases are tiny"));
    let tautologies_dropped = case
        .lhs
        .dropped()
        .iter()
        .filter(|d| d.reason == crate::cnf::DropReason::Tautology)
        .count();

    let matches_claim = match case.claim {
        Claim::SpottedBySweep | Claim::SpottedAfterSorting => detected,
        Claim::NoConstraint => {
            tautologies_dropped > 0
                && case.lhs.len() == 1
                && case.lhs.clauses()[0].width() == 3
                && !detected
        }
        Claim::Remains(_) => !detected && ir.status == Status::Irreducible,
        Claim::Satisfiable => oracle.verdict == Verdict::Sat && ir.status == Status::Irreducible,
        Claim::DetectedUnsat => ir.status == Status::ContradictionFound,
    };

    CaseResult {
        label: case.label.clone(),
        claim: case.claim,
        equivalence,
        equivalence_ok: equivalence.map(|e| e == case.expect_equivalent),
        engine_detected: detected,
        detected_default: !tr_default.steps.is_empty(),
        detected_with_r4: !tr_r4.steps.is_empty(),
        matches_claim,
        model_count: oracle.model_count.unwrap_or(0),
        status: ir.status,
        tautologies_dropped,
        reduced: notation(&ir.formula, names_for(&case.label)),
    }
}

/// Checks the distribution identities and De Morgan's law by enumeration.
pub fn check_distribution_identities() -> Vec<IdentityResult> {
    let pairs = [
        ("distribute/unit", "(Q+W+E).(A)", "Q.A+W.A+E.A"),
        (
            "distribute/pair",
            "(Q+W+E).(A+B)",
            "Q.(A+B)+W.(A+B)+E.(A+B)",
        ),
        (
            "distribute/triple",
            "(Q+W+E).(A+B+C)",
            "Q.(A+B+C)+W.(A+B+C)+E.(A+B+C)",
        ),
        ("de-morgan", "!(Q+W+E)", "!Q.!W.!E"),
    ];
    pairs
        .iter()
        .map(|&(label, lhs, rhs)| {
            let l = Expr::parse(lhs, CASE_VARS).expect("identity fixtures parse");
            let r = Expr::parse(rhs, CASE_VARS).expect("identity fixtures parse");
            let n = l.max_var().max(r.max_var());
            let ls = oracle::model_set_of(n, |a| l.eval(a)).expect("small");
            let rs = oracle::model_set_of(n, |a| r.eval(a)).expect("small");
            IdentityResult {
                label: label.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                holds: ls == rs,
            }
        })
        .collect()
}

/// Runs every case and identity. `enable_r4` selects the configuration whose
/// behaviour is compared against the claims; both are always recorded.
pub fn run_appendix_suite(enable_r4: bool) -> AppendixReport {
    let cases = appendix_cases();
    let results: Vec<CaseResult> = cases.iter().map(|c| run_case(c, enable_r4)).collect();
    let identities = check_distribution_identities();

    let count_of = |text: &str| {
        let f = formula_from_notation(text, CASE_VARS).expect("fixture");
        oracle::truth_table_solve(&f)
            .expect("small")
            .model_count
            .unwrap_or(0)
    };
    let exactly_one = formula_from_notation(EXACTLY_ONE_PRODUCT, CASE_VARS).expect("fixture");
    let combined = formula_from_notation(COMBINED_PRODUCT, CASE_VARS).expect("fixture");
    let unit_rule = results
        .iter()
        .find(|r| r.label == "rule/unit-resolve")
        .and_then(|r| r.equivalence)
        .unwrap_or(true);

    let checked: Vec<&CaseResult> = results
        .iter()
        .filter(|r| r.equivalence_ok.is_some())
        .collect();
    let summary = AppendixSummary {
        enable_r4,
        cases: results.len(),
        equalities_checked: checked.len(),
        equalities_ok: checked
            .iter()
            .filter(|r| r.equivalence_ok == Some(true))
            .count(),
        claims_matched: results.iter().filter(|r| r.matches_claim).count(),
        discrepancies: results
            .iter()
            .filter(|r| !r.matches_claim)
            .map(|r| r.label.clone())
            .collect(),
        r4_cases: results
            .iter()
            .filter(|r| r.needs_r4())
            .map(|r| r.label.clone())
            .collect(),
        exactly_one_count: count_of(EXACTLY_ONE_PRODUCT),
        odd_parity_count: count_of(ODD_PARITY_PRODUCT),
        combined_count: count_of(COMBINED_PRODUCT),
        combined_equals_exactly_one: oracle::equivalent(&exactly_one, &combined).expect("small"),
        unit_rule_equivalent: unit_rule,
        identities_ok: identities.iter().all(|i| i.holds),
    };
    AppendixReport {
        results,
        identities,
        summary,
    }
}

fn opt(b: Option<bool>) -> String {
    b.map_or_else(|| "na".to_string(), |b| b.to_string())
}

impl AppendixReport {
    pub fn records(&self) -> Vec<Record> {
        let cases = appendix_cases();
        let mut out = Vec::new();
        for (r, c) in self.results.iter().zip(&cases) {
            out.push(
                Record::new("case")
                    .field("label", &r.label)
                    .field("lhs", &c.lhs_text)
                    .field("rhs", c.rhs_text.as_deref().unwrap_or("na"))
                    .field("claim", r.claim)
                    .field(
                        "stated_equal",
                        if c.rhs.is_some() {
                            c.expect_equivalent.to_string()
                        } else {
                            "na".into()
                        },
                    )
                    .field("equivalent", opt(r.equivalence))
                    .field("equivalence_ok", opt(r.equivalence_ok))
                    .field("detected", r.engine_detected)
                    .field("detected_default", r.detected_default)
                    .field("detected_r4", r.detected_with_r4)
                    .field("needs_r4", r.needs_r4())
                    .field("matches", r.matches_claim)
                    .field("models", r.model_count)
                    .field("status", r.status)
                    .field("reduced", &r.reduced),
            );
        }
        for i in &self.identities {
            out.push(
                Record::new("identity")
                    .field("label", &i.label)
                    .field("lhs", &i.lhs)
                    .field("rhs", &i.rhs)
                    .field("holds", i.holds),
            );
        }
        let s = &self.summary;
        out.push(
            Record::new("summary")
                .field("r4", s.enable_r4)
                .field("cases", s.cases)
                .field("equalities_checked", s.equalities_checked)
                .field("equalities_ok", s.equalities_ok)
                .field("identities_ok", s.identities_ok)
                .field("claims_matched", s.claims_matched)
                .field("discrepancies", s.discrepancies.join(","))
                .field("needs_r4", s.r4_cases.join(","))
                .field("exactly_one_models", s.exactly_one_count)
                .field("odd_parity_models", s.odd_parity_count)
                .field("combined_models", s.combined_count)
                .field("combined_equals_exactly_one", s.combined_equals_exactly_one)
                .field("unit_rule_equivalent", s.unit_rule_equivalent)
                .field("all_equalities_hold", s.all_equalities_hold()),
        );
        out
    }

    /// Short human-readable summary.
    pub fn human_summary(&self) -> String {
        let s = &self.summary;
        let mut lines = vec![
            format!(
                "appendix suite ({}): {} cases, {}/{} equalities hold, {}/{} claims matched",
                if s.enable_r4 { "self-subsumption on" } else { "default rules" },
                s.cases,
                s.equalities_ok,
                s.equalities_checked,
                s.claims_matched,
                s.cases
            ),
            format!(
                "model counts: exactly-one = {}, odd-parity = {}, combined = {} (same models as exactly-one: {})",
                s.exactly_one_count, s.odd_parity_count, s.combined_count, s.combined_equals_exactly_one
            ),
            format!(
                "(A+K).(!K) = (A) holds: {} (the unit rule is applied with the unit retained)",
                s.unit_rule_equivalent
            ),
        ];
        if !s.r4_cases.is_empty() {
            lines.push(format!(
                "detected only with self-subsumption: {}",
                s.r4_cases.join(", ")
            ));
        }
        if !s.discrepancies.is_empty() {
            lines.push(format!("discrepancies: {}", s.discrepancies.join(", ")));
        }
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_notation() {
        let f = formula_from_notation("(Q+W+E).(!Q+B)", CASE_VARS).unwrap();
        assert_eq!(f.num_vars(), 5);
        assert_eq!(f.len(), 2);
        assert!(formula_from_notation("(Q+W).(X)", CASE_VARS).is_err());
        assert!(formula_from_notation("Q.(A+B)+W", CASE_VARS).is_err());
    }

    #[test]
    fn product_counts() {
        let r = run_appendix_suite(true);
        assert_eq!(r.summary.exactly_one_count, 3);
        assert_eq!(r.summary.odd_parity_count, 4);
        assert_eq!(r.summary.combined_count, 3);
        assert!(r.summary.combined_equals_exactly_one);
    }

    #[test]
    fn identities_hold() {
        assert!(check_distribution_identities().iter().all(|i| i.holds));
    }

    #[test]
    fn tautology_cases_leave_bare_clause() {
        for r in run_appendix_suite(false)
            .results
            .iter()
            .filter(|r| r.claim == Claim::NoConstraint)
        {
            assert!(r.matches_claim, "{}", r.label);
            assert_eq!(r.reduced, "(Q+W+E)");
        }
    }
}

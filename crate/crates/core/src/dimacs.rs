//! DIMACS CNF reading and writing, plus the `(A+B+!C).(D)` product notation.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cnf::{CnfError, DropReason, Formula, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// A message tied to a 1-based input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "line {}: {}: {}", self.line, sev, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: clause has {width} distinct literals, at most 3 are allowed")]
    WidthExceeded { line: usize, width: usize },
    #[error("line {line}: variable {var} exceeds the declared {num_vars}")]
    VarOutOfRange {
        line: usize,
        var: u64,
        num_vars: u32,
    },
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::WidthExceeded { line, .. }
            | ParseError::VarOutOfRange { line, .. }
            | ParseError::SyntaxError { line, .. } => *line,
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic {
            line: self.line(),
            message: self.to_string(),
            severity: Severity::Error,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub formula: Formula,
    pub warnings: Vec<Diagnostic>,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        line,
        message: message.into(),
    }
}

/// Parses DIMACS CNF text.
pub fn parse_dimacs(text: &str) -> Result<Parsed, ParseError> {
    parse_dimacs_bytes(text.as_bytes())
}

/// Parses DIMACS CNF from raw bytes. Never panics; every rejection names a line.
pub fn parse_dimacs_bytes(input: &[u8]) -> Result<Parsed, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut clause_lines: Vec<usize> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start = 0;
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (i, raw_line) in input.split(|&b| b == b'\n').enumerate() {
        let line = i + 1;
        last_line = line;
        let text = std::str::from_utf8(raw_line).map_err(|_| syntax(line, "invalid UTF-8"))?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // SATLIB benchmark files end their clause section with a lone '%'
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line, "duplicate problem line"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(syntax(line, "expected `p cnf <vars> <clauses>`"));
            }
            let n: u32 = fields[2]
                .parse()
                .ok()
                .filter(|&n| n <= u32::MAX / 2)
                .ok_or_else(|| syntax(line, format!("bad variable count `{}`", fields[2])))?;
            let m: usize = fields[3]
                .parse()
                .map_err(|_| syntax(line, format!("bad clause count `{}`", fields[3])))?;
            header = Some((n, m));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(syntax(line, "clause before problem line"));
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| syntax(line, format!("malformed token `{token}`")))?;
            if current.is_empty() {
                current_start = line;
            }
            if value == 0 {
                check_width(&current, line)?;
                clauses.push(std::mem::take(&mut current));
                clause_lines.push(line);
                continue;
            }
            let var = value.unsigned_abs();
            if var > u64::from(num_vars) {
                return Err(ParseError::VarOutOfRange {
                    line,
                    var,
                    num_vars,
                });
            }
            current.push(Lit::from_dimacs(value).map_err(|_| syntax(line, "bad literal"))?);
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(syntax(last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        check_width(&current, last_line)?;
        warnings.push(Diagnostic {
            line: current_start,
            message: "last clause is not terminated by 0".into(),
            severity: Severity::Warning,
        });
        clauses.push(current);
        clause_lines.push(last_line);
    }
    if clauses.len() != declared {
        warnings.push(Diagnostic {
            line: 1,
            message: format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            ),
            severity: Severity::Warning,
        });
    }

    let formula = Formula::new(num_vars, &clauses).map_err(|e| match e {
        // width and range are checked above, so only these remain reachable
        CnfError::WidthExceeded { width } => ParseError::WidthExceeded {
            line: last_line,
            width,
        },
        other => syntax(last_line, other.to_string()),
    })?;
    for d in formula.dropped() {
        let what = match d.reason {
            DropReason::Tautology => "tautological clause dropped",
            DropReason::Duplicate => "duplicate clause collapsed",
        };
        warnings.push(Diagnostic {
            line: clause_lines[d.input_index],
            message: what.into(),
            severity: Severity::Warning,
        });
    }
    Ok(Parsed { formula, warnings })
}

fn check_width(lits: &[Lit], line: usize) -> Result<(), ParseError> {
    let mut sorted = lits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() > crate::cnf::MAX_WIDTH {
        return Err(ParseError::WidthExceeded {
            line,
            width: sorted.len(),
        });
    }
    Ok(())
}

/// Canonical DIMACS text: header, then one clause per line in id order.
///
/// The empty-clause marker is written as a bare `0` line.
pub fn write_dimacs(formula: &Formula) -> String {
    let m = formula.len() + usize::from(formula.has_empty_clause());
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), m);
    for c in formula.clauses() {
        for l in c.lits.iter() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    if formula.has_empty_clause() {
        out.push_str("0\n");
    }
    out
}

/// Display name of a variable: letters up to 26 variables, `x<i>` beyond.
pub fn var_name(var: u32, num_vars: u32) -> String {
    if num_vars <= 26 {
        char::from(b'A' + (var - 1) as u8).to_string()
    } else {
        format!("x{var}")
    }
}

pub fn lit_name(lit: Lit, num_vars: u32) -> String {
    let name = var_name(lit.var().id(), num_vars);
    if lit.is_negated() {
        format!("!{name}")
    } else {
        name
    }
}

/// Renders `(A+B+C).(!D)`; the empty-clause marker renders as `()`.
pub fn format_product_notation(formula: &Formula) -> String {
    let n = formula.num_vars();
    let mut parts: Vec<String> = formula
        .clauses()
        .iter()
        .map(|c| {
            let names: Vec<String> = c.lits.iter().map(|&l| lit_name(l, n)).collect();
            format!("({})", names.join("+"))
        })
        .collect();
    if formula.has_empty_clause() {
        parts.push("()".into());
    }
    parts.join(".")
}

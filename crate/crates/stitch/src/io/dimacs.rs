//! DIMACS CNF.

use std::io::{self, Write};

use drat_stitch_core::{Clause, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header {text:?}, expected `p cnf <variables> <clauses>`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: {token:?} is not a literal")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: clause is not terminated by 0 before the end of input")]
    LiteralAfterMissingTerminator { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub formula: Formula,
    /// `(variables, clauses)` from the header. Informational only.
    pub declared: Option<(usize, usize)>,
}

pub fn parse_dimacs(text: &[u8]) -> Result<Dimacs, DimacsError> {
    let mut formula = Formula::new();
    let mut declared = None;
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_since = 0;
    let mut last_line = 0;
    for (i, raw) in text.split(|&b| b == b'\n').enumerate() {
        let line = i + 1;
        last_line = line;
        let raw = String::from_utf8_lossy(raw);
        let trimmed = raw.trim_start();
        if trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_ascii_whitespace().collect();
            let header = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            match header {
                Some(h) if declared.is_none() && pending.is_empty() => declared = Some(h),
                _ => {
                    return Err(DimacsError::MalformedHeader {
                        line,
                        text: trimmed.trim_end().to_string(),
                    })
                }
            }
            continue;
        }
        for token in trimmed.split_ascii_whitespace() {
            let value: i32 = token
                .parse()
                .ok()
                .filter(|&v| v != i32::MIN)
                .ok_or_else(|| DimacsError::InvalidToken {
                    line,
                    token: token.to_string(),
                })?;
            match Literal::new(value) {
                Some(l) => {
                    if pending.is_empty() {
                        pending_since = line;
                    }
                    pending.push(l);
                }
                None => formula.add(Clause::new(pending.drain(..))),
            }
        }
    }
    if !pending.is_empty() {
        return Err(DimacsError::LiteralAfterMissingTerminator {
            line: pending_since.max(1).min(last_line),
        });
    }
    Ok(Dimacs { formula, declared })
}

/// Writes `p cnf` with the largest variable and every clause occurrence on its own line.
pub fn write_dimacs<W: Write>(formula: &Formula, mut out: W) -> io::Result<()> {
    let vars = formula.max_variable().map_or(0, |v| v.index());
    writeln!(out, "p cnf {} {}", vars, formula.total_clauses())?;
    for clause in formula.occurrences() {
        for l in clause.literals() {
            write!(out, "{l} ")?;
        }
        writeln!(out, "0")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use drat_stitch_core::formula::formula;

    #[test]
    fn examples() {
        let d = parse_dimacs(b"p cnf 3 2\n-1 0\n2 3 0\n").unwrap();
        assert_eq!(d.formula, formula(&[&[-1], &[2, 3]]));
        assert_eq!(d.declared, Some((3, 2)));
        let d = parse_dimacs(b"p cnf 3 3\n-1 0\n2 3 0\n-2 3 0\n").unwrap();
        assert_eq!(d.formula, formula(&[&[-1], &[2, 3], &[-2, 3]]));
        let d = parse_dimacs(b"c comment\np cnf 1 1\n1 -1 0").unwrap();
        assert_eq!(d.formula, formula(&[&[1, -1]]));
    }

    #[test]
    fn zero_only_clause_is_empty() {
        let d = parse_dimacs(b"p cnf 0 1\n0\n").unwrap();
        assert_eq!(d.formula, formula(&[&[]]));
    }

    #[test]
    fn clauses_span_lines_and_header_is_optional() {
        let d = parse_dimacs(b"1 2\n 3 0 -1\t0\n").unwrap();
        assert_eq!(d.formula, formula(&[&[1, 2, 3], &[-1]]));
        assert_eq!(d.declared, None);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_dimacs(b"p cnf x 2\n"),
            Err(DimacsError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs(b"p cnf 1 1\np cnf 1 1\n"),
            Err(DimacsError::MalformedHeader { line: 2, .. })
        ));
        assert_eq!(
            parse_dimacs(b"p cnf 2 1\n1 2\n"),
            Err(DimacsError::LiteralAfterMissingTerminator { line: 2 })
        );
        assert!(matches!(
            parse_dimacs(b"1 a 0\n"),
            Err(DimacsError::InvalidToken { line: 1, .. })
        ));
    }

    #[test]
    fn write_then_parse() {
        let f = formula(&[&[1, -2], &[1, -2], &[3], &[]]);
        let mut out = Vec::new();
        write_dimacs(&f, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "p cnf 3 4\n0\n1 -2 0\n1 -2 0\n3 0\n");
        assert_eq!(parse_dimacs(&out).unwrap().formula, f);
    }
}

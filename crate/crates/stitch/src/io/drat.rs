//! ASCII DRAT.

use std::io::{self, Write};

use drat_stitch_core::{Clause, Literal, ProofStep, Refutation, StepKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DratError {
    #[error("line {line}: {token:?} is not a literal")]
    NonIntegerToken { line: usize, token: String },
    #[error("line {line}: step is not terminated by 0 before the end of input")]
    MissingTerminator { line: usize },
}

/// Parses `ℓ₁ … ℓₖ 0` additions and `d ℓ₁ … ℓₖ 0` deletions. Steps may span lines;
/// lines starting with `c` are comments. Literal order is kept, so the first literal
/// stays the pivot.
pub fn parse_drat(text: &[u8]) -> Result<Refutation, DratError> {
    let mut steps = Vec::new();
    let mut kind: Option<StepKind> = None;
    let mut literals: Vec<Literal> = Vec::new();
    let mut started = 0;
    for (i, raw) in text.split(|&b| b == b'\n').enumerate() {
        let line = i + 1;
        let raw = String::from_utf8_lossy(raw);
        if kind.is_none() && raw.trim_start().starts_with('c') {
            continue;
        }
        for token in raw.split_ascii_whitespace() {
            if kind.is_none() {
                started = line;
                if token == "d" {
                    kind = Some(StepKind::Delete);
                    continue;
                }
                kind = Some(StepKind::Add);
            }
            let value = token
                .parse::<i32>()
                .ok()
                .filter(|&v| v != i32::MIN)
                .ok_or_else(|| DratError::NonIntegerToken {
                    line,
                    token: token.to_string(),
                })?;
            match Literal::new(value) {
                Some(l) => literals.push(l),
                None => {
                    let clause = Clause::new(literals.drain(..));
                    steps.push(ProofStep {
                        kind: kind.take().expect("inside a step"),
                        clause,
                    });
                }
            }
        }
    }
    if kind.is_some() {
        return Err(DratError::MissingTerminator { line: started });
    }
    Ok(steps.into())
}

/// One step per line, single spaces, trailing newline.
pub fn write_drat<W: Write>(proof: &Refutation, out: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    for step in proof {
        writeln!(out, "{step}")?;
    }
    out.flush()
}

pub fn drat_to_string(proof: &Refutation) -> String {
    let mut out = Vec::with_capacity(proof.serialized_len());
    write_drat(proof, &mut out).expect("writing to memory");
    String::from_utf8(out).expect("DRAT text is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use drat_stitch_core::lit::lit;

    fn add(v: &[i32]) -> ProofStep {
        ProofStep::add(Clause::from_ints(v))
    }

    #[test]
    fn examples() {
        assert_eq!(parse_drat(b"0\n").unwrap(), Refutation::from(vec![add(&[])]));
        assert_eq!(
            parse_drat(b"1 2 0\nd 1 2 0\n0\n").unwrap(),
            Refutation::from(vec![
                add(&[1, 2]),
                ProofStep::delete(Clause::from_ints(&[1, 2])),
                add(&[])
            ])
        );
        assert_eq!(
            parse_drat(b"-1 0\n1 0\n0\n").unwrap(),
            Refutation::from(vec![add(&[-1]), add(&[1]), add(&[])])
        );
    }

    #[test]
    fn pivot_is_written_first() {
        let p: Refutation = vec![add(&[2, -1])].into();
        assert_eq!(drat_to_string(&p), "2 -1 0\n");
        assert_eq!(drat_to_string(&vec![add(&[])].into()), "0\n");
        assert_eq!(parse_drat(b"2 -1 0").unwrap().steps()[0].clause.pivot(), Some(lit(2)));
    }

    #[test]
    fn layout_is_free() {
        let p = parse_drat(b"c hello\n1\n2 0 d\t1 2\n0 0\n").unwrap();
        assert_eq!(drat_to_string(&p), "1 2 0\nd 1 2 0\n0\n");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_drat(b"1 2 0\n3 4\n"), Err(DratError::MissingTerminator { line: 2 }));
        assert_eq!(parse_drat(b"d\n"), Err(DratError::MissingTerminator { line: 1 }));
        assert!(matches!(parse_drat(b"1 x 0\n"), Err(DratError::NonIntegerToken { line: 1, .. })));
        assert!(matches!(parse_drat(b"1 d 0\n"), Err(DratError::NonIntegerToken { .. })));
    }
}

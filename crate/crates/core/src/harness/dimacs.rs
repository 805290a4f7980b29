//! DIMACS CNF with an optional planted-assignment comment.
//!
//! ```text
//! c planted 1 -2 3
//! p cnf 3 2
//! 1 -2 0
//! 2 3 0
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit};

/// A parsed DIMACS file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsInstance {
    pub formula: Formula,
    pub planted: Option<Assignment>,
}

fn signed(a: &Assignment) -> String {
    let vals: Vec<String> = a.to_dimacs().iter().map(i64::to_string).collect();
    vals.join(" ")
}

/// Renders `formula`, with `planted` as a `c planted` comment when given.
pub fn dimacs_write(formula: &Formula, planted: Option<&Assignment>) -> String {
    let mut out = String::new();
    if let Some(sigma) = planted {
        assert_eq!(sigma.len(), formula.num_vars(), "planted assignment length");
        if sigma.is_empty() {
            out.push_str("c planted\n");
        } else {
            let _ = writeln!(out, "c planted {}", signed(sigma));
        }
    }
    let _ = writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        formula.num_clauses()
    );
    for clause in formula.clauses() {
        for lit in clause {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// The solver-output model line, `v 1 -2 3 0`.
pub fn model_line(a: &Assignment) -> String {
    if a.is_empty() {
        "v 0".to_string()
    } else {
        format!("v {} 0", signed(a))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        message: message.into(),
    }
}

fn parse_planted(line: usize, rest: &str) -> Result<Vec<i64>> {
    rest.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| parse_err(line, format!("bad planted literal {t:?}")))
        })
        .collect()
}

fn planted_assignment(line: usize, n: usize, values: &[i64]) -> Result<Assignment> {
    if values.len() != n {
        return Err(parse_err(
            line,
            format!(
                "planted comment lists {} values for {n} variables",
                values.len()
            ),
        ));
    }
    let mut sigma = Assignment::all_false(n);
    let mut seen = vec![false; n + 1];
    for &v in values {
        let var = v.unsigned_abs() as usize;
        if v == 0 || var > n {
            return Err(parse_err(line, format!("planted literal {v} out of range")));
        }
        if std::mem::replace(&mut seen[var], true) {
            return Err(parse_err(line, format!("planted variable {var} repeated")));
        }
        sigma.set(var, v > 0);
    }
    Ok(sigma)
}

/// Parses DIMACS text. With `width = Some(k)` every clause must have exactly `k`
/// literals; with `None` the width is inferred when uniform and left unset otherwise.
///
/// Clauses are normalised (sorted by variable), so `read(write(F)) == F` for formulas
/// built through [`Formula`]'s constructors.
pub fn dimacs_read(text: &str, width: Option<usize>) -> Result<DimacsInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut planted_raw: Option<(usize, Vec<i64>)> = None;
    let mut clauses: Vec<(usize, Vec<Lit>)> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('c') {
            if comment.is_empty() || comment.starts_with(char::is_whitespace) {
                let mut words = comment.split_whitespace();
                if words.next() == Some("planted") {
                    if header.is_some() {
                        return Err(parse_err(line, "planted comment must precede the header"));
                    }
                    if planted_raw.is_some() {
                        return Err(parse_err(line, "second planted comment"));
                    }
                    let rest = comment.trim_start().trim_start_matches("planted");
                    planted_raw = Some((line, parse_planted(line, rest)?));
                }
                continue;
            }
        }
        if trimmed.starts_with('%') {
            break;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            if header.is_some() {
                return Err(parse_err(line, "duplicate header"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| parse_err(line, "expected \"p cnf <n> <m>\""))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line, "clause before header"));
        };
        for token in trimmed.split_whitespace() {
            let v: i64 = token
                .parse()
                .map_err(|_| parse_err(line, format!("bad literal {token:?}")))?;
            if v == 0 {
                clauses.push((line, std::mem::take(&mut current)));
                continue;
            }
            if v.unsigned_abs() as usize > n {
                return Err(parse_err(line, format!("literal {v} exceeds n = {n}")));
            }
            if current.is_empty() {
                current_line = line;
            }
            current.push(Lit::from_dimacs(v).expect("nonzero"));
        }
    }

    let last_line = text.lines().count().max(1);
    let (n, m) = header.ok_or_else(|| parse_err(last_line, "missing \"p cnf\" header"))?;
    if !current.is_empty() {
        return Err(parse_err(current_line, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    let width = match width {
        Some(k) => {
            if let Some((line, c)) = clauses.iter().find(|(_, c)| c.len() != k) {
                return Err(parse_err(
                    *line,
                    format!("clause has {} literals, expected width {k}", c.len()),
                ));
            }
            Some(k)
        }
        None => match clauses.first() {
            Some((_, c0)) if clauses.iter().all(|(_, c)| c.len() == c0.len()) => Some(c0.len()),
            Some(_) => None,
            None => Some(0),
        },
    };
    let mut formula = match width {
        Some(k) => Formula::with_capacity(n, k, m),
        None => Formula::mixed(n),
    };
    for (_, c) in &clauses {
        formula.push(c);
    }
    let planted = planted_raw
        .map(|(line, values)| planted_assignment(line, n, &values))
        .transpose()?;
    Ok(DimacsInstance { formula, planted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_header_and_clauses() {
        let f = Formula::from_dimacs(2, Some(2), &[&[1, -2]]);
        assert_eq!(dimacs_write(&f, None), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn planted_comment_recovered() {
        let text = "c planted 1 -2\np cnf 2 1\n1 -2 0\n";
        let inst = dimacs_read(text, Some(2)).unwrap();
        assert_eq!(inst.planted, Some(Assignment::from_bools(&[true, false])));
        assert_eq!(dimacs_write(&inst.formula, inst.planted.as_ref()), text);
    }

    #[test]
    fn ordinary_comments_and_wrapped_clauses() {
        let text = "c hello\np cnf 3 2\n1 -2\n 3 0 -1 2 -3 0\n";
        let inst = dimacs_read(text, None).unwrap();
        assert_eq!(inst.formula.num_clauses(), 2);
        assert_eq!(inst.formula.width(), Some(3));
        assert_eq!(inst.planted, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = dimacs_read("p cnf 2 1\n1 x 0\n", None).unwrap_err();
        assert!(matches!(err, Error::Dimacs { line: 2, .. }), "{err}");
        let err = dimacs_read("p cnf 2 2\n1 2 0\n1 0\n", Some(2)).unwrap_err();
        assert!(matches!(err, Error::Dimacs { line: 3, .. }), "{err}");
        let err = dimacs_read("p cnf 2 1\n1 3 0\n", None).unwrap_err();
        assert!(matches!(err, Error::Dimacs { line: 2, .. }), "{err}");
        assert!(dimacs_read("1 2 0\n", None).is_err());
        assert!(dimacs_read("p cnf 2 2\n1 2 0\n", None).is_err());
        assert!(dimacs_read("p cnf 2 1\n1 2\n", None).is_err());
        assert!(dimacs_read("c planted 1\np cnf 2 0\n", None).is_err());
        assert!(dimacs_read("p cnf 2 0\nc planted 1 2\n", None).is_err());
    }

    #[test]
    fn mixed_widths_without_contract() {
        let inst = dimacs_read("p cnf 2 2\n1 0\n-1 2 0\n", None).unwrap();
        assert_eq!(inst.formula.width(), None);
        assert_eq!(
            dimacs_write(&inst.formula, None),
            "p cnf 2 2\n1 0\n-1 2 0\n"
        );
    }

    #[test]
    fn model_lines() {
        assert_eq!(
            model_line(&Assignment::from_bools(&[true, false])),
            "v 1 -2 0"
        );
    }
}

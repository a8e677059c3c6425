//! DIMACS CNF reading and writing.

use std::io::{BufRead, Write};

use log::warn;

use crate::clause::{Clause, Formula, Literal};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct DimacsOptions {
    /// Reject literals whose variable exceeds the header's count instead of
    /// growing the formula.
    pub strict: bool,
}

pub fn parse_dimacs<R: BufRead>(source: R) -> Result<Formula> {
    parse_dimacs_with(source, DimacsOptions::default())
}

pub fn parse_dimacs_str(text: &str) -> Result<Formula> {
    parse_dimacs(text.as_bytes())
}

pub fn parse_dimacs_with<R: BufRead>(source: R, opts: DimacsOptions) -> Result<Formula> {
    let mut header: Option<(u32, usize)> = None;
    let mut formula = Formula::default();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (n, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = n + 1;
        last_line = lineno;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::cnf(lineno, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let (v, c) = parsed.ok_or_else(|| Error::cnf(lineno, "malformed header"))?;
            formula.num_vars = v;
            formula.clauses.reserve(c);
            header = Some((v, c));
            continue;
        }
        let Some((declared_vars, _)) = header else {
            return Err(Error::cnf(lineno, "clause before 'p cnf' header"));
        };
        for tok in trimmed.split_whitespace() {
            let d: i64 = tok
                .parse()
                .map_err(|_| Error::cnf(lineno, format!("not an integer: {tok:?}")))?;
            if d == 0 {
                formula.push(Clause::from_literals(std::mem::take(&mut current)));
                continue;
            }
            let lit = Literal::from_dimacs(d).map_err(|e| Error::cnf(lineno, e.to_string()))?;
            if lit.var() > declared_vars && opts.strict {
                return Err(Error::cnf(
                    lineno,
                    format!("variable {} exceeds declared {}", lit.var(), declared_vars),
                ));
            }
            current.push(lit);
        }
    }

    let Some((_, declared_clauses)) = header else {
        return Err(Error::cnf(last_line.max(1), "missing 'p cnf' header"));
    };
    if !current.is_empty() {
        return Err(Error::cnf(last_line, "final clause is not terminated by 0"));
    }
    if formula.clauses.len() != declared_clauses {
        warn!(
            "header declares {} clauses, found {}",
            declared_clauses,
            formula.clauses.len()
        );
    }
    Ok(formula)
}

pub fn write_dimacs<W: Write>(f: &Formula, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p cnf {} {}", f.num_vars, f.clauses.len())?;
    for c in &f.clauses {
        writeln!(out, "{}", c)?;
    }
    Ok(())
}

pub fn to_dimacs_string(f: &Formula) -> String {
    let mut buf = Vec::new();
    write_dimacs(f, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

//! Literals, clauses, formulas and the weighted-sum clause hash.

use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

/// A propositional literal.
///
/// Stored as `2 * var + neg`, which is also the numeric key the clause hash
/// uses. Variables start at 1, so the smallest code is 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: u32, negative: bool) -> Literal {
        debug_assert!(var >= 1);
        Literal(var << 1 | negative as u32)
    }

    /// Reads a DIMACS integer. Zero is the clause terminator and is rejected.
    pub fn from_dimacs(d: i64) -> Result<Literal> {
        if d == 0 {
            return Err(Error::ZeroLiteral);
        }
        let var = d.unsigned_abs();
        if var > (u32::MAX >> 2) as u64 {
            return Err(Error::VariableOutOfRange(var));
        }
        Ok(Literal::new(var as u32, d < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64;
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    /// Injective non-negative key, `2 * var + sign bit`.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Literal {
        Literal(code as u32)
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal(self.0 ^ 1)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A normalized clause: duplicate-free, sorted by `(var, sign)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Literal>,
    tautology: bool,
}

/// Result of [`normalize_clause`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Clause(Clause),
    /// Contains a complementary pair. The sorted literals are kept so that
    /// deletions can still be matched against it.
    Tautology(Clause),
}

impl Normalized {
    pub fn into_clause(self) -> Clause {
        match self {
            Normalized::Clause(c) | Normalized::Tautology(c) => c,
        }
    }
}

/// Sorts, removes duplicates and detects complementary pairs.
pub fn normalize_clause(raw: &[i64]) -> Result<Normalized> {
    let lits = raw
        .iter()
        .map(|&d| Literal::from_dimacs(d))
        .collect::<Result<Vec<_>>>()?;
    let clause = Clause::from_literals(lits);
    Ok(if clause.is_tautology() {
        Normalized::Tautology(clause)
    } else {
        Normalized::Clause(clause)
    })
}

impl Clause {
    pub fn from_literals(mut lits: Vec<Literal>) -> Clause {
        lits.sort_unstable();
        lits.dedup();
        // Complements share a variable, so after sorting they are adjacent.
        let tautology = lits.windows(2).any(|w| w[0].var() == w[1].var());
        Clause { lits, tautology }
    }

    /// Builds a clause from DIMACS integers. Panics on zero; meant for tests
    /// and generators.
    pub fn from_dimacs(raw: &[i64]) -> Clause {
        normalize_clause(raw)
            .expect("zero is not a literal")
            .into_clause()
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.tautology
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn max_var(&self) -> u32 {
        self.lits.last().map_or(0, |l| l.var())
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }

    pub fn hash_value(&self) -> u64 {
        clause_hash(self)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.lits.iter()).finish()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{} ", l)?;
        }
        write!(f, "0")
    }
}

/// Weighted-sum hash: `m + sum_i key(l_i) * i` over the literals sorted by
/// key, with `i` counting from 1. Wrapping 64-bit arithmetic.
pub fn clause_hash(c: &Clause) -> u64 {
    // Normalized clauses are already sorted by key.
    c.lits
        .iter()
        .enumerate()
        .fold(c.lits.len() as u64, |h, (i, l)| {
            h.wrapping_add((l.code() as u64).wrapping_mul(i as u64 + 1))
        })
}

/// A CNF formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: u32) -> Formula {
        Formula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn from_dimacs(num_vars: u32, clauses: &[&[i64]]) -> Formula {
        let mut f = Formula::new(num_vars);
        for c in clauses {
            f.push(Clause::from_dimacs(c));
        }
        f
    }

    /// Adds a clause, growing `num_vars` if it mentions a new variable.
    pub fn push(&mut self, c: Clause) {
        self.num_vars = self.num_vars.max(c.max_var());
        self.clauses.push(c);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }
}

/// Hash table from clause content to caller-chosen ids, used to match
/// deletion steps. Buckets are indexed by `hash mod size` with a power-of-two
/// size; equal hashes are resolved by full literal comparison in the caller
/// supplied lookup.
#[derive(Clone, Debug)]
pub struct ClauseTable {
    buckets: Vec<Vec<(u64, u32)>>,
    len: usize,
}

impl Default for ClauseTable {
    fn default() -> Self {
        ClauseTable::with_capacity(16)
    }
}

impl ClauseTable {
    pub fn with_capacity(n: usize) -> ClauseTable {
        let size = n.max(16).next_power_of_two();
        ClauseTable {
            buckets: vec![Vec::new(); size],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn slot(&self, hash: u64) -> usize {
        (hash & (self.buckets.len() as u64 - 1)) as usize
    }

    pub fn insert(&mut self, hash: u64, id: u32) {
        if self.len >= self.buckets.len() {
            self.grow();
        }
        let s = self.slot(hash);
        self.buckets[s].push((hash, id));
        self.len += 1;
    }

    fn grow(&mut self) {
        let size = self.buckets.len() * 2;
        let old = std::mem::replace(&mut self.buckets, vec![Vec::new(); size]);
        for (h, id) in old.into_iter().flatten() {
            let s = self.slot(h);
            self.buckets[s].push((h, id));
        }
    }

    /// Removes and returns the most recently inserted id with this hash for
    /// which `matches` holds.
    pub fn remove_matching<F>(&mut self, hash: u64, mut matches: F) -> Result<Option<u32>>
    where
        F: FnMut(u32) -> Result<bool>,
    {
        let s = self.slot(hash);
        let bucket = &self.buckets[s];
        let mut found = None;
        for (pos, &(h, id)) in bucket.iter().enumerate().rev() {
            if h == hash && matches(id)? {
                found = Some(pos);
                break;
            }
        }
        Ok(found.map(|pos| {
            self.len -= 1;
            self.buckets[s].remove(pos).1
        }))
    }
}

//! Resolution-asymmetric-tautology checks and the equivalence-block fast
//! path for extension definitions.

use crate::clause::{Clause, Literal};
use crate::error::Result;
use crate::session::Session;

/// For each literal, the ids of the clauses containing it.
#[derive(Clone, Debug, Default)]
pub struct OccurrenceIndex {
    lists: Vec<Vec<u32>>,
}

impl OccurrenceIndex {
    pub fn occurrences(&self, lit: Literal) -> &[u32] {
        self.lists.get(lit.code()).map_or(&[], Vec::as_slice)
    }

    fn add(&mut self, id: usize, c: &Clause) {
        for &l in c.literals() {
            if self.lists.len() <= l.code() {
                self.lists.resize(l.code() + 1, Vec::new());
            }
            self.lists[l.code()].push(id as u32);
        }
    }

    /// Total entries over all literals.
    pub fn size(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

/// A definition `z ∨ ¬x1 ∨ … ∨ ¬xn` with fresh `z` followed by the `n`
/// binaries `¬z ∨ xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceBlock {
    pub definition: usize,
    pub pivot: Literal,
    pub units: Vec<usize>,
}

/// Resolvent of `c` and `d` on `l`, or `None` if it is a tautology.
fn resolvent(c: &Clause, d: &Clause, l: Literal) -> Option<Vec<Literal>> {
    let mut lits: Vec<Literal> = c.literals().to_vec();
    lits.extend(d.literals().iter().copied().filter(|&x| x != !l));
    let merged = Clause::from_literals(lits);
    (!merged.is_tautology()).then(|| merged.literals().to_vec())
}

impl Session {
    /// Indexes the non-tautological formula clauses and the inferences
    /// before the empty clause.
    pub fn build_occurrence_index(&mut self) -> Result<OccurrenceIndex> {
        self.stats.occurrence_builds += 1;
        let mut occ = OccurrenceIndex::default();
        for (id, c) in self.formula.clauses.iter().enumerate() {
            if !c.is_tautology() {
                occ.add(id, c);
            }
        }
        for k in 0..self.end {
            if self.db.record(k).tautology {
                continue;
            }
            let c = self.db.inference(k)?;
            occ.add(self.nf + k, &c);
        }
        Ok(occ)
    }

    /// RAT check of inference `i`: the pivot is tried first, then the other
    /// literals. Every non-tautological resolvent with a live clause
    /// containing the negated candidate must be RUP at position `i`.
    pub fn check_rat(&mut self, i: usize, occ: &OccurrenceIndex) -> Result<bool> {
        self.stats.rat_checks += 1;
        let c = self.lemma(i)?.into_owned();
        let pivot = self.db.record(i).pivot.filter(|p| c.contains(*p));
        let mut candidates: Vec<Literal> = pivot.into_iter().collect();
        candidates.extend(c.literals().iter().copied().filter(|&l| Some(l) != pivot));

        self.goto(i, true)?;
        'candidates: for l in candidates {
            let mut ants = Vec::new();
            for &id in occ.occurrences(!l) {
                let id = id as usize;
                if !self.live_at(id, i) {
                    continue;
                }
                if id >= self.nf && id - self.nf >= i {
                    continue;
                }
                let d = self.clause(id)?.into_owned();
                let Some(e) = resolvent(&c, &d, l) else {
                    continue;
                };
                match self.rup(&e)? {
                    Some(a) => ants.extend(a),
                    None => continue 'candidates,
                }
            }
            self.mark_used(&ants);
            return Ok(true);
        }
        Ok(false)
    }

    /// Final stage: every used, unverified inference gets an exact RUP check
    /// (unless that already failed) and then a RAT check. Returns the first
    /// inference that fails both.
    pub fn rat_stage(&mut self) -> Result<Option<usize>> {
        if !self.any_used_unverified() {
            return Ok(None);
        }
        let all = self.end;
        self.restore_pruned(0, all)?;
        let occ = self.build_occurrence_index()?;
        for i in (0..self.end).rev() {
            let r = self.db.record(i);
            if !r.used || r.verified {
                continue;
            }
            if !self.rup_failed[i] && self.check_rup(i)? {
                self.set_verified(i);
                continue;
            }
            self.rup_failed[i] = true;
            if self.check_rat(i, &occ)? {
                self.set_verified(i);
            } else {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn variable_origins(&mut self) -> Result<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let nv = self.formula.num_vars.max(self.db.max_var()) as usize;
        let mut origin = vec![UNSEEN; nv + 1];
        for c in &self.formula.clauses {
            for l in c.literals() {
                origin[l.var() as usize] = 0;
            }
        }
        for k in 0..self.end {
            let c = self.db.inference(k)?;
            for l in c.literals() {
                let o = &mut origin[l.var() as usize];
                if *o == UNSEEN {
                    *o = k + 1;
                }
            }
        }
        Ok(origin)
    }

    fn match_block(&mut self, i: usize, origin: &[usize]) -> Result<Option<EquivalenceBlock>> {
        let r = self.db.record(i);
        if i >= self.end || r.tautology || r.len < 2 {
            return Ok(None);
        }
        let Some(p) = r.pivot else {
            return Ok(None);
        };
        if origin[p.var() as usize] != i + 1 {
            return Ok(None);
        }
        let n = r.len - 1;
        if i + n >= self.end || !self.live_at(self.nf + i, i + n) {
            return Ok(None);
        }
        let mut units = Vec::with_capacity(n);
        for u in i + 1..=i + n {
            let ru = self.db.record(u);
            if ru.len != 2 || ru.tautology || !self.lemma(u)?.contains(!p) {
                return Ok(None);
            }
            units.push(u);
        }
        Ok(Some(EquivalenceBlock { definition: i, pivot: p, units }))
    }

    /// Recognizes an equivalence block starting at inference `i`.
    pub fn match_equivalence_block(&mut self, i: usize) -> Result<Option<EquivalenceBlock>> {
        let origin = self.variable_origins()?;
        self.match_block(i, &origin)
    }

    /// Each binary `¬z ∨ y` of the block must have `¬y` in the definition.
    pub fn verify_equivalence_block(&mut self, block: &EquivalenceBlock) -> Result<bool> {
        let def = self.lemma(block.definition)?.into_owned();
        if !def.contains(block.pivot) || def.len() != block.units.len() + 1 {
            return Ok(false);
        }
        for &u in &block.units {
            let c = self.lemma(u)?;
            let Some(&y) = c.literals().iter().find(|&&l| l != !block.pivot) else {
                return Ok(false);
            };
            if !c.contains(!block.pivot) || y.var() == block.pivot.var() || !def.contains(!y) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verifies every recognized equivalence block without RAT checks.
    pub fn fast_path_stage(&mut self) -> Result<usize> {
        let origin = self.variable_origins()?;
        let mut i = 0;
        let mut blocks = 0;
        while i < self.end {
            if let Some(b) = self.match_block(i, &origin)? {
                if self.verify_equivalence_block(&b)? {
                    self.set_verified(b.definition);
                    for &u in &b.units {
                        self.set_verified(u);
                    }
                    blocks += 1;
                    i += b.units.len() + 1;
                    continue;
                }
            }
            i += 1;
        }
        self.stats.fastpath_blocks += blocks as u64;
        Ok(blocks)
    }
}

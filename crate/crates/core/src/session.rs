//! State shared by the checking stages of one verification run.
//!
//! Clause ids: formula clause `f` is `ClauseId(f)`, inference `k` is
//! `ClauseId(nf + k)`. A check "at position `i`" sees the formula clauses not
//! yet deleted before inference `i`, the promoted clauses while the formula
//! is still intact, and (in lemma mode) the live inferences `k < i`.

use std::borrow::Cow;

use log::warn;

use crate::clause::{Clause, ClauseTable, Formula, Literal};
use crate::config::Config;
use crate::driver::Stats;
use crate::error::Result;
use crate::proof::{ProofDb, StepRef};
use crate::propagation::{ClauseId, Conflict, Outcome, PropagationState};

pub(crate) const NEVER: usize = usize::MAX;

pub struct Session {
    pub(crate) formula: Formula,
    pub(crate) db: ProofDb,
    pub(crate) config: Config,
    pub(crate) state: PropagationState,
    pub(crate) stats: Stats,
    pub(crate) nf: usize,
    /// Index of the empty clause, or the inference count when there is none.
    pub(crate) end: usize,
    /// Per clause id: number of additions before the step deleting it.
    pub(crate) died: Vec<usize>,
    /// Positions below this see every formula clause.
    pub(crate) intact: usize,
    pub(crate) has_deletions: bool,
    pub(crate) promoted: Vec<bool>,
    pub(crate) pruned: Vec<bool>,
    /// `(k, until)`: subsumed by unit inference `k`, inactive at positions
    /// `k < i < until`.
    pub(crate) inactive: Vec<Option<(usize, usize)>>,
    pub(crate) rup_failed: Vec<bool>,
    ctx: Option<(usize, bool)>,
    events: Vec<Vec<u32>>,
    events_dirty: bool,
    pub(crate) temp: Vec<ClauseId>,
}

impl Session {
    pub fn new(formula: Formula, mut db: ProofDb, config: Config) -> Result<Session> {
        let nf = formula.len();
        let m = db.len();
        let end = db.empty_at().unwrap_or(m);
        let num_vars = formula.num_vars.max(db.max_var());
        let mut died = vec![NEVER; nf + m];
        let mut stats = Stats::default();

        let mut table = ClauseTable::with_capacity(nf + m);
        for (f, c) in formula.clauses.iter().enumerate() {
            table.insert(c.hash_value(), f as u32);
        }
        let steps = db.steps().to_vec();
        for step in steps {
            match step {
                StepRef::Add(k) => table.insert(db.record(k).hash, (nf + k) as u32),
                StepRef::Delete(d) => {
                    let target = db.deletion(d)?.into_owned();
                    let position = db.deletions()[d].position;
                    let found = table.remove_matching(target.hash_value(), |id| {
                        let id = id as usize;
                        Ok(if id < nf {
                            formula.clauses[id] == target
                        } else {
                            *db.inference(id - nf)? == target
                        })
                    })?;
                    match found {
                        Some(id) => died[id as usize] = position,
                        None => {
                            stats.missing_deletions += 1;
                            warn!("ignoring deletion of absent clause {}", target);
                        }
                    }
                }
            }
        }
        let intact = died[..nf].iter().copied().min().unwrap_or(NEVER);
        let has_deletions = died.iter().any(|&d| d != NEVER);

        let mut session = Session {
            formula,
            db,
            config,
            state: PropagationState::new(num_vars),
            stats,
            nf,
            end,
            died,
            intact,
            has_deletions,
            promoted: vec![false; m],
            pruned: vec![false; m],
            inactive: vec![None; m],
            rup_failed: vec![false; m],
            ctx: None,
            events: Vec::new(),
            events_dirty: true,
            temp: Vec::new(),
        };
        for k in 0..m {
            if session.db.record(k).tautology {
                session.db.record_mut(k).verified = true;
            }
        }
        Ok(session)
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn db(&self) -> &ProofDb {
        &self.db
    }

    pub fn db_mut(&mut self) -> &mut ProofDb {
        &mut self.db
    }

    pub fn state(&self) -> &PropagationState {
        &self.state
    }

    /// Index of the empty clause (or the inference count if there is none).
    pub fn end(&self) -> usize {
        self.end
    }

    pub fn is_verified(&self, k: usize) -> bool {
        self.db.record(k).verified
    }

    pub fn is_used(&self, k: usize) -> bool {
        self.db.record(k).used
    }

    pub fn is_promoted(&self, k: usize) -> bool {
        self.promoted.get(k).copied().unwrap_or(false)
    }

    pub fn is_pruned(&self, k: usize) -> bool {
        self.pruned.get(k).copied().unwrap_or(false)
    }

    pub fn is_inactive_at(&self, k: usize, pos: usize) -> bool {
        matches!(self.inactive.get(k), Some(Some((u, until))) if *u < pos && pos < *until)
    }

    /// `(verified, used)` for every inference.
    pub fn flags(&self) -> Vec<(bool, bool)> {
        self.db.records().iter().map(|r| (r.verified, r.used)).collect()
    }

    pub(crate) fn lemma_id(&self, k: usize) -> ClauseId {
        ClauseId((self.nf + k) as u32)
    }

    pub(crate) fn lemma_of(&self, id: ClauseId) -> Option<usize> {
        id.index().checked_sub(self.nf)
    }

    /// Deleted before inference `pos`?
    pub(crate) fn live_at(&self, id: usize, pos: usize) -> bool {
        pos < self.died[id]
    }

    pub(crate) fn lemma(&mut self, k: usize) -> Result<Cow<'_, Clause>> {
        self.db.inference(k)
    }

    pub(crate) fn clause(&mut self, id: usize) -> Result<Cow<'_, Clause>> {
        if id < self.nf {
            Ok(Cow::Borrowed(&self.formula.clauses[id]))
        } else {
            self.db.inference(id - self.nf)
        }
    }

    /// Whether inference `k` belongs to the lemma-mode context at `pos`,
    /// ignoring promotion.
    pub(crate) fn lemma_in_context(&self, k: usize, pos: usize) -> bool {
        let r = self.db.record(k);
        k < self.end
            && !r.tautology
            && k < pos
            && self.live_at(self.nf + k, pos)
            && !self.pruned[k]
            && !self.is_inactive_at(k, pos)
    }

    fn desired(&self, id: usize, pos: usize, lemmas: bool) -> bool {
        if id < self.nf {
            return !self.formula.clauses[id].is_tautology() && self.live_at(id, pos);
        }
        let k = id - self.nf;
        if k >= self.end || self.db.record(k).tautology {
            return false;
        }
        if self.promoted[k] && pos < self.intact {
            return true;
        }
        lemmas && self.lemma_in_context(k, pos)
    }

    pub(crate) fn attach_id(&mut self, id: usize) -> Result<()> {
        let cid = ClauseId(id as u32);
        if id < self.nf {
            self.state.attach(cid, self.formula.clauses[id].literals())
        } else {
            let k = id - self.nf;
            let c = self.db.reload_inference(k)?;
            self.state.attach(cid, c.literals())?;
            self.db.record_mut(k).active = true;
            Ok(())
        }
    }

    pub(crate) fn detach_id(&mut self, id: usize) -> Result<()> {
        self.state.detach(ClauseId(id as u32))?;
        if id >= self.nf {
            let k = id - self.nf;
            self.db.record_mut(k).active = false;
            self.db.evict(k);
        }
        Ok(())
    }

    fn sync(&mut self, id: usize, pos: usize, lemmas: bool) -> Result<()> {
        let want = self.desired(id, pos, lemmas);
        let have = self.state.is_attached(ClauseId(id as u32));
        if want && !have {
            self.attach_id(id)?;
        } else if have && !want {
            self.detach_id(id)?;
        }
        Ok(())
    }

    /// Re-evaluates one clause after a flag change.
    pub(crate) fn refresh(&mut self, id: usize) -> Result<()> {
        self.events_dirty = true;
        if let Some((pos, lemmas)) = self.ctx {
            self.sync(id, pos, lemmas)?;
        }
        Ok(())
    }

    fn rebuild_events(&mut self) {
        let n = self.end + 2;
        let mut events = vec![Vec::new(); n];
        let mut push = |b: usize, id: usize| {
            if b < n {
                events[b].push(id as u32);
            }
        };
        for (id, &d) in self.died.iter().enumerate() {
            push(d, id);
        }
        for k in 0..self.end {
            let id = self.nf + k;
            push(k + 1, id);
            if let Some((u, until)) = self.inactive[k] {
                push(u + 1, id);
                push(until, id);
            }
            if self.promoted[k] {
                push(self.intact, id);
            }
        }
        self.events = events;
        self.events_dirty = false;
    }

    /// Brings the attached clause set to the context of position `pos`.
    /// Must be called with no pending assumptions.
    pub(crate) fn goto(&mut self, pos: usize, lemmas: bool) -> Result<()> {
        debug_assert_eq!(self.state.depth(), 0);
        debug_assert!(self.temp.is_empty());
        match self.ctx {
            Some((cur, l)) if l == lemmas && pos <= cur => {
                if self.events_dirty {
                    self.rebuild_events();
                }
                for b in (pos + 1..=cur).rev() {
                    for e in 0..self.events[b].len() {
                        let id = self.events[b][e] as usize;
                        self.sync(id, b - 1, lemmas)?;
                    }
                }
            }
            Some((cur, false)) if !lemmas && cur < self.intact && pos < self.intact => {}
            _ => {
                for id in 0..self.nf + self.db.len() {
                    self.sync(id, pos, lemmas)?;
                }
            }
        }
        self.ctx = Some((pos, lemmas));
        Ok(())
    }

    /// Attaches an inference for the current check only.
    pub(crate) fn attach_temp(&mut self, k: usize) -> Result<()> {
        let id = self.nf + k;
        self.attach_id(id)?;
        self.temp.push(ClauseId(id as u32));
        Ok(())
    }

    /// Ends the current check: undoes assumptions and temporary clauses.
    pub(crate) fn release(&mut self) -> Result<()> {
        while self.state.depth() > 0 {
            self.state.rollback()?;
        }
        for id in std::mem::take(&mut self.temp) {
            self.detach_id(id.index())?;
        }
        Ok(())
    }

    /// Assumes the negation of `lits` and propagates. Leaves the
    /// assignment in place; call [`Session::release`] afterwards.
    pub(crate) fn refute(&mut self, lits: &[Literal]) -> Outcome {
        self.state.save_point();
        for &l in lits {
            if let out @ Outcome::Conflict(_) = self.state.assume(!l) {
                return out;
            }
        }
        self.state.propagate()
    }

    /// RUP check of `lits` against the current context.
    pub(crate) fn rup(&mut self, lits: &[Literal]) -> Result<Option<Vec<ClauseId>>> {
        self.stats.rup_checks += 1;
        let out = match self.refute(lits) {
            Outcome::Conflict(c) => Some(self.state.antecedents(c)),
            Outcome::Fixpoint => None,
        };
        self.release()?;
        Ok(out)
    }

    pub(crate) fn mark_used(&mut self, ids: &[ClauseId]) {
        for &id in ids {
            if let Some(k) = self.lemma_of(id) {
                self.db.record_mut(k).used = true;
            }
        }
    }

    /// Inferences in the implication graph of `conflict`.
    pub fn mark_used_antecedents(&mut self, conflict: Conflict) -> Vec<usize> {
        let ids = self.state.antecedents(conflict);
        self.mark_used(&ids);
        let mut ks: Vec<usize> = ids.iter().filter_map(|&id| self.lemma_of(id)).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub(crate) fn set_verified(&mut self, k: usize) {
        self.db.record_mut(k).verified = true;
    }

    pub(crate) fn promote(&mut self, k: usize) -> Result<()> {
        if !self.promoted[k] {
            self.promoted[k] = true;
            self.refresh(self.nf + k)?;
        }
        Ok(())
    }

    pub(crate) fn any_used_unverified(&self) -> bool {
        self.db.records()[..self.end]
            .iter()
            .any(|r| r.used && !r.verified)
    }

    pub(crate) fn sync_io_stats(&mut self) {
        self.stats.propagations = self.state.propagations;
        self.stats.evictions = self.db.io.evictions;
        self.stats.reloads = self.db.io.reloads;
        self.stats.reads = self.db.io.reads;
    }
}

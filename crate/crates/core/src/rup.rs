//! Stages built on reverse unit propagation: unit probing, subset
//! segments, subsumption deactivation, pruning and the window passes.

use std::collections::BTreeSet;

use crate::clause::Literal;
use crate::config::Limit;
use crate::error::Result;
use crate::propagation::{Conflict, Outcome};
use crate::session::{Session, NEVER};

/// Assignment state after [`Session::build_window_context`]. The session
/// keeps the assumptions in place until [`Session::release`] is called.
#[derive(Clone, Debug)]
pub struct WindowContext {
    pub position: usize,
    /// Inferences attached on top of the base context, in attach order.
    pub window: Vec<usize>,
    pub conflict: Option<Conflict>,
}

/// Start of the segment for the subset check anchored at unit `i`.
/// `units` holds unit inference indices in ascending order and contains `i`.
/// The segment grows downward over units less than `span` apart and then
/// extends `span` below the lowest one.
pub fn select_subset_window(units: &[usize], i: usize, span: usize) -> usize {
    let mut p = units
        .iter()
        .position(|&u| u == i)
        .expect("anchor must be a unit inference");
    while p > 0 && units[p] - units[p - 1] < span {
        p -= 1;
    }
    units[p].saturating_sub(span)
}

impl Session {
    /// RUP check of inference `k` at its own position with every live
    /// earlier inference. Marks antecedents used on success.
    pub fn check_rup(&mut self, k: usize) -> Result<bool> {
        self.goto(k, true)?;
        let lits = self.lemma(k)?.literals().to_vec();
        match self.rup(&lits)? {
            Some(ants) => {
                self.mark_used(&ants);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// RUP check of `lits` against the context of position `pos`.
    pub fn check_clause_at(
        &mut self,
        pos: usize,
        lemmas: bool,
        lits: &[Literal],
    ) -> Result<bool> {
        self.goto(pos, lemmas)?;
        Ok(self.rup(lits)?.is_some())
    }

    /// Verifies unit inferences implied by the formula (plus what was
    /// promoted so far) and promotes them.
    pub fn unit_probe(&mut self) -> Result<usize> {
        let limit = self.end.min(self.intact);
        let mut promoted = 0;
        for k in 0..limit {
            let r = self.db.record(k);
            if r.len != 1 || r.tautology || self.promoted[k] {
                continue;
            }
            self.goto(k, false)?;
            let lits = self.lemma(k)?.literals().to_vec();
            if self.rup(&lits)?.is_some() {
                self.set_verified(k);
                self.promote(k)?;
                promoted += 1;
            }
        }
        self.stats.probe_promotions += promoted as u64;
        Ok(promoted)
    }

    /// Checks the unit inference `i` using only the formula, the promoted
    /// clauses and the inferences of `[j, i)`. Inferences that became unit or
    /// conflicting during a successful check are checked the same way.
    /// Returns the set of inferences verified this way, or `None` (with no
    /// flag changed) if any of them fails.
    pub fn subset_proof_check(&mut self, j: usize, i: usize) -> Result<Option<Vec<usize>>> {
        self.stats.subset_calls += 1;
        let mut pending = BTreeSet::from([i]);
        let mut members = BTreeSet::from([i]);
        let mut newly = Vec::new();
        while let Some(cur) = pending.pop_last() {
            if self.db.record(cur).verified {
                continue;
            }
            self.goto(cur, false)?;
            let mut segment = Vec::new();
            for t in j..cur {
                let r = self.db.record(t);
                if r.tautology || self.promoted[t] || !self.live_at(self.nf + t, cur) {
                    continue;
                }
                self.attach_temp(t)?;
                segment.push(t);
            }
            let lits = self.lemma(cur)?.literals().to_vec();
            self.stats.rup_checks += 1;
            let outcome = self.refute(&lits);
            if !outcome.is_conflict() {
                self.release()?;
                for k in newly {
                    self.db.record_mut(k).verified = false;
                }
                return Ok(None);
            }
            for &t in &segment {
                let id = self.lemma_id(t);
                let lits = self.state.clause(id).unwrap_or(&[]);
                if self.state.open_literals(lits) <= 1 && members.insert(t) {
                    pending.insert(t);
                }
            }
            self.release()?;
            self.set_verified(cur);
            newly.push(cur);
        }
        Ok(Some(members.into_iter().collect()))
    }

    /// Runs subset checks anchored at the unverified unit inferences,
    /// from the last one down, and promotes small verified members.
    pub fn subset_stage(&mut self) -> Result<()> {
        let limit = self.end.min(self.intact);
        let units: Vec<usize> = (0..limit)
            .filter(|&k| {
                let r = self.db.record(k);
                r.len == 1 && !r.tautology && !self.promoted[k]
            })
            .collect();
        let mut p = units.len();
        while p > 0 {
            let i = units[p - 1];
            let j = select_subset_window(&units, i, self.config.span);
            let members = if self.db.record(i).verified {
                Some(vec![i])
            } else {
                self.subset_proof_check(j, i)?
            };
            for t in members.into_iter().flatten() {
                if self.db.record(t).len <= self.config.add_max {
                    self.promote(t)?;
                    self.stats.subset_promotions += 1;
                }
            }
            while p > 0 && units[p - 1] >= j {
                p -= 1;
            }
        }
        Ok(())
    }

    /// Marks inference `j` inactive between the first later unit inference
    /// `[x]` with `x` in `j` and the deletion of that unit.
    pub fn deactivate_subsumed(&mut self) -> Result<usize> {
        let mut next_unit: Vec<usize> = vec![NEVER; 2 * (self.state_vars() + 1)];
        let mut count = 0;
        for j in (0..self.end).rev() {
            let r = self.db.record(j);
            if r.tautology {
                continue;
            }
            let lits = self.lemma(j)?.literals().to_vec();
            if lits.len() >= 2 {
                let best = lits
                    .iter()
                    .map(|l| next_unit.get(l.code()).copied().unwrap_or(NEVER))
                    .min()
                    .unwrap_or(NEVER);
                if best != NEVER {
                    let until = self.died[self.nf + best];
                    if until > best + 1 {
                        self.inactive[j] = Some((best, until));
                        self.refresh(self.nf + j)?;
                        count += 1;
                    }
                }
            } else if let [x] = lits[..] {
                if x.code() >= next_unit.len() {
                    next_unit.resize(x.code() + 2, NEVER);
                }
                next_unit[x.code()] = j;
            }
        }
        self.stats.deactivated += count as u64;
        Ok(count)
    }

    fn state_vars(&self) -> usize {
        self.formula.num_vars.max(self.db.max_var()) as usize
    }

    /// Detaches unused, unverified binary and ternary inferences, keeping
    /// the last `prune_cap` of them.
    pub fn prune_small_inferences(&mut self) -> Result<usize> {
        let candidates: Vec<usize> = (0..self.end)
            .filter(|&k| {
                let r = self.db.record(k);
                (2..=3).contains(&r.len)
                    && !r.used
                    && !r.verified
                    && !r.tautology
                    && !self.promoted[k]
            })
            .collect();
        let keep = self.config.prune_cap.finite().unwrap_or(usize::MAX);
        let cut = candidates.len().saturating_sub(keep);
        for &k in &candidates[..cut] {
            self.pruned[k] = true;
            self.refresh(self.nf + k)?;
        }
        self.stats.pruned += cut as u64;
        Ok(cut)
    }

    /// Restores pruned inferences with index in `[lo, hi)`.
    pub fn restore_pruned(&mut self, lo: usize, hi: usize) -> Result<usize> {
        let mut n = 0;
        for k in lo..hi.min(self.end) {
            if self.pruned[k] {
                self.pruned[k] = false;
                self.refresh(self.nf + k)?;
                n += 1;
            }
        }
        self.stats.restored += n as u64;
        Ok(n)
    }

    /// Sets up the check of inference `i` with window size `theta`: the
    /// formula, the promoted clauses and the negation of `i` are asserted,
    /// then the window inferences `t` in `[i+1-theta, i)` admitted by
    /// `filter`, of size at most `mu` and with at most two non-false
    /// literals are attached one by one until a conflict appears. With an
    /// infinite `theta` the context holds every live earlier inference.
    pub fn build_window_context<F>(
        &mut self,
        i: usize,
        theta: Limit,
        mu: Limit,
        filter: F,
    ) -> Result<WindowContext>
    where
        F: Fn(usize, usize) -> bool,
    {
        let lits = self.lemma(i)?.literals().to_vec();
        let Some(theta) = theta.finite() else {
            self.goto(i, true)?;
            let window = (0..i)
                .filter(|&t| self.state.is_attached(self.lemma_id(t)))
                .collect();
            let conflict = match self.refute(&lits) {
                Outcome::Conflict(c) => Some(c),
                Outcome::Fixpoint => None,
            };
            return Ok(WindowContext { position: i, window, conflict });
        };
        self.goto(i, false)?;
        let mut ctx = WindowContext { position: i, window: Vec::new(), conflict: None };
        if let Outcome::Conflict(c) = self.refute(&lits) {
            ctx.conflict = Some(c);
            return Ok(ctx);
        }
        let lo = (i + 1).saturating_sub(theta);
        for t in lo..i {
            let r = self.db.record(t);
            if !mu.admits(r.len) || !filter(t, r.len) || !self.lemma_in_context(t, i) {
                continue;
            }
            if self.state.is_attached(self.lemma_id(t)) {
                continue;
            }
            let open = {
                let c = self.db.inference(t)?;
                self.state.open_literals(c.literals())
            };
            if open > 2 {
                continue;
            }
            self.attach_temp(t)?;
            ctx.window.push(t);
            if let Outcome::Conflict(c) = self.state.propagate() {
                ctx.conflict = Some(c);
                break;
            }
        }
        Ok(ctx)
    }

    /// Backward pass over used, unverified inferences admitted by `filter`.
    /// A miss restores pruned inferences of the window and retries once.
    /// Returns the number of inferences verified.
    pub fn window_shift_check<F>(&mut self, theta: Limit, mu: Limit, filter: F) -> Result<usize>
    where
        F: Fn(usize, usize) -> bool,
    {
        let mut verified = 0;
        for i in (0..self.end).rev() {
            let r = self.db.record(i);
            if !r.used || r.verified || !filter(i, r.len) {
                continue;
            }
            let mut attempts = 0;
            loop {
                attempts += 1;
                self.stats.rup_checks += 1;
                let ctx = self.build_window_context(i, theta, mu, &filter)?;
                if let Some(c) = ctx.conflict {
                    if theta.is_infinite() && self.config.debug_theorem2 {
                        self.theorem2_probe(i)?;
                    }
                    self.mark_used_antecedents(c);
                    self.release()?;
                    self.set_verified(i);
                    verified += 1;
                    break;
                }
                self.release()?;
                self.stats.window_misses += 1;
                if theta.is_infinite() {
                    self.rup_failed[i] = true;
                    break;
                }
                let lo = (i + 1).saturating_sub(theta.finite().unwrap_or(0));
                if attempts > 1 || !self.config.prune || self.restore_pruned(lo, i)? == 0 {
                    break;
                }
            }
        }
        Ok(verified)
    }

    /// Checks the empty clause against the full context at its position and
    /// seeds the used flags from the conflict.
    pub fn seed_used_flags(&mut self) -> Result<bool> {
        let end = self.end;
        self.goto(end, true)?;
        match self.rup(&[])? {
            Some(ants) => {
                self.mark_used(&ants);
                if end < self.db.len() {
                    let r = self.db.record_mut(end);
                    r.used = true;
                    r.verified = true;
                }
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

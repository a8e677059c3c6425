//! Two-watched-literal unit propagation with reason tracking.
//!
//! The state owns a private copy of every attached clause; the first two
//! literals of that copy are the watched ones. Clauses of length one live on
//! a unit list and are asserted at the start of each propagation instead of
//! being watched.

use crate::clause::Literal;
use crate::error::{Error, Result};

/// Caller-chosen clause identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl ClauseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conflict {
    /// Every literal of the clause is false.
    Clause(ClauseId),
    /// The literal was assumed while its complement was already true.
    Assumption(Literal),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Fixpoint,
    Conflict(Conflict),
}

impl Outcome {
    pub fn is_conflict(self) -> bool {
        matches!(self, Outcome::Conflict(_))
    }
}

#[derive(Clone, Copy, Debug)]
struct SavePoint {
    trail: usize,
    units: usize,
    conflict: Option<Conflict>,
}

#[derive(Clone, Debug, Default)]
pub struct PropagationState {
    /// Value of the positive literal per variable: 1, -1 or 0.
    values: Vec<i8>,
    reasons: Vec<Option<ClauseId>>,
    positions: Vec<u32>,
    trail: Vec<Literal>,
    queue_head: usize,
    watches: Vec<Vec<ClauseId>>,
    clauses: Vec<Option<Vec<Literal>>>,
    attached: usize,
    units: Vec<ClauseId>,
    units_done: usize,
    conflict: Option<Conflict>,
    saves: Vec<SavePoint>,
    /// Literals assigned by propagation (not assumptions) since creation.
    pub propagations: u64,
}

impl PropagationState {
    pub fn new(num_vars: u32) -> PropagationState {
        let mut s = PropagationState::default();
        s.ensure_var(num_vars);
        s
    }

    pub fn ensure_var(&mut self, var: u32) {
        let n = var as usize + 1;
        if self.values.len() < n {
            self.values.resize(n, 0);
            self.reasons.resize(n, None);
            self.positions.resize(n, 0);
            self.watches.resize(2 * n, Vec::new());
        }
    }

    pub fn value(&self, lit: Literal) -> i8 {
        let v = self.values.get(lit.var() as usize).copied().unwrap_or(0);
        if lit.is_negative() {
            -v
        } else {
            v
        }
    }

    pub fn is_true(&self, lit: Literal) -> bool {
        self.value(lit) > 0
    }

    pub fn is_false(&self, lit: Literal) -> bool {
        self.value(lit) < 0
    }

    pub fn trail(&self) -> &[Literal] {
        &self.trail
    }

    pub fn reason(&self, var: u32) -> Option<ClauseId> {
        self.reasons[var as usize]
    }

    pub fn is_attached(&self, id: ClauseId) -> bool {
        matches!(self.clauses.get(id.index()), Some(Some(_)))
    }

    pub fn clause(&self, id: ClauseId) -> Option<&[Literal]> {
        self.clauses.get(id.index())?.as_deref()
    }

    /// Number of attached clauses.
    pub fn attached_count(&self) -> usize {
        self.attached
    }

    /// Total entries across all watch lists plus the unit list.
    pub fn watch_entries(&self) -> usize {
        self.watches.iter().map(Vec::len).sum::<usize>() + self.units.len()
    }

    fn enqueue(&mut self, lit: Literal, reason: Option<ClauseId>) {
        let v = lit.var() as usize;
        self.values[v] = if lit.is_negative() { -1 } else { 1 };
        self.reasons[v] = reason;
        self.positions[v] = self.trail.len() as u32;
        self.trail.push(lit);
        if reason.is_some() {
            self.propagations += 1;
        }
    }

    /// Makes a clause visible to propagation. The literals must be duplicate
    /// free. Attaching under a non-empty trail picks watches that keep the
    /// watch invariant and reports unit or conflicting clauses right away.
    pub fn attach(&mut self, id: ClauseId, lits: &[Literal]) -> Result<()> {
        if self.is_attached(id) {
            return Err(Error::Internal("clause attached twice"));
        }
        if self.clauses.len() <= id.index() {
            self.clauses.resize(id.index() + 1, None);
        }
        if let Some(max) = lits.iter().map(|l| l.var()).max() {
            self.ensure_var(max);
        }
        let mut lits = lits.to_vec();
        self.attached += 1;
        if lits.len() <= 1 {
            self.clauses[id.index()] = Some(lits);
            self.units.push(id);
            return Ok(());
        }
        // True literals first, then unassigned, then false ones latest first.
        lits.sort_by_key(|&l| match self.value(l) {
            1 => (0, 0),
            0 => (1, 0),
            _ => (2, u32::MAX - self.positions[l.var() as usize]),
        });
        let (w0, w1) = (lits[0], lits[1]);
        if self.is_false(w0) {
            self.conflict.get_or_insert(Conflict::Clause(id));
        } else if self.is_false(w1) && self.value(w0) == 0 {
            self.enqueue(w0, Some(id));
        }
        self.watches[w0.code()].push(id);
        self.watches[w1.code()].push(id);
        self.clauses[id.index()] = Some(lits);
        Ok(())
    }

    /// Removes a clause from propagation. Meant to be called with no
    /// assignments depending on the clause.
    pub fn detach(&mut self, id: ClauseId) -> Result<Vec<Literal>> {
        let lits = self
            .clauses
            .get_mut(id.index())
            .and_then(Option::take)
            .ok_or(Error::Internal("detaching a clause that is not attached"))?;
        self.attached -= 1;
        if lits.len() <= 1 {
            let pos = self.units.iter().position(|&u| u == id).unwrap();
            self.units.remove(pos);
            if pos < self.units_done {
                self.units_done -= 1;
            }
        } else {
            for w in &lits[..2] {
                let list = &mut self.watches[w.code()];
                let pos = list.iter().position(|&c| c == id).unwrap();
                list.swap_remove(pos);
            }
        }
        Ok(lits)
    }

    /// Pushes an assumption. Assuming a literal that is already true is a
    /// no-op; assuming one that is false records a conflict.
    pub fn assume(&mut self, lit: Literal) -> Outcome {
        self.ensure_var(lit.var());
        match self.value(lit) {
            1 => Outcome::Fixpoint,
            0 => {
                self.enqueue(lit, None);
                Outcome::Fixpoint
            }
            _ => {
                let c = Conflict::Assumption(lit);
                self.conflict.get_or_insert(c);
                Outcome::Conflict(c)
            }
        }
    }

    /// Runs unit propagation to a fixpoint or the first conflict.
    pub fn propagate(&mut self) -> Outcome {
        if let Some(c) = self.conflict {
            return Outcome::Conflict(c);
        }
        while self.units_done < self.units.len() {
            let id = self.units[self.units_done];
            self.units_done += 1;
            let lit = match self.clauses[id.index()].as_deref() {
                Some([l]) => *l,
                _ => return self.fail(Conflict::Clause(id)),
            };
            match self.value(lit) {
                1 => {}
                0 => self.enqueue(lit, Some(id)),
                _ => return self.fail(Conflict::Clause(id)),
            }
        }
        while self.queue_head < self.trail.len() {
            let falsified = !self.trail[self.queue_head];
            self.queue_head += 1;
            if let Some(c) = self.propagate_literal(falsified) {
                return self.fail(Conflict::Clause(c));
            }
        }
        Outcome::Fixpoint
    }

    fn fail(&mut self, c: Conflict) -> Outcome {
        self.conflict = Some(c);
        Outcome::Conflict(c)
    }

    fn propagate_literal(&mut self, falsified: Literal) -> Option<ClauseId> {
        let mut ws = std::mem::take(&mut self.watches[falsified.code()]);
        let mut conflict = None;
        let mut i = 0;
        let mut j = 0;
        while i < ws.len() {
            let id = ws[i];
            i += 1;
            let lits = self.clauses[id.index()].as_mut().unwrap();
            if lits[0] == falsified {
                lits.swap(0, 1);
            }
            let other = lits[0];
            let other_value = {
                let v = self.values[other.var() as usize];
                if other.is_negative() {
                    -v
                } else {
                    v
                }
            };
            if other_value > 0 {
                ws[j] = id;
                j += 1;
                continue;
            }
            let values = &self.values;
            let replacement = lits[2..].iter().position(|&l| {
                let v = values[l.var() as usize];
                (if l.is_negative() { -v } else { v }) >= 0
            });
            if let Some(k) = replacement {
                lits.swap(1, k + 2);
                let w = lits[1];
                self.watches[w.code()].push(id);
                continue;
            }
            ws[j] = id;
            j += 1;
            if other_value < 0 {
                conflict = Some(id);
                while i < ws.len() {
                    ws[j] = ws[i];
                    i += 1;
                    j += 1;
                }
                break;
            }
            self.enqueue(other, Some(id));
        }
        ws.truncate(j);
        debug_assert!(self.watches[falsified.code()].is_empty());
        self.watches[falsified.code()] = ws;
        conflict
    }

    pub fn save_point(&mut self) {
        self.saves.push(SavePoint {
            trail: self.trail.len(),
            units: self.units_done,
            conflict: self.conflict,
        });
    }

    /// Undoes every assignment made since the matching save point.
    pub fn rollback(&mut self) -> Result<()> {
        let save = self
            .saves
            .pop()
            .ok_or(Error::Internal("rollback without a save point"))?;
        for lit in self.trail.drain(save.trail..) {
            let v = lit.var() as usize;
            self.values[v] = 0;
            self.reasons[v] = None;
        }
        self.queue_head = self.queue_head.min(save.trail);
        self.units_done = save.units.min(self.units.len());
        self.conflict = save.conflict;
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.saves.len()
    }

    /// `Some(x)` when every literal but `x` is false and `x` is not.
    pub fn unit_literal(&self, lits: &[Literal]) -> Option<Literal> {
        let mut open = None;
        for &l in lits {
            if !self.is_false(l) {
                if open.is_some() {
                    return None;
                }
                open = Some(l);
            }
        }
        open
    }

    /// Number of literals of `lits` that are not false.
    pub fn open_literals(&self, lits: &[Literal]) -> usize {
        lits.iter().filter(|&&l| !self.is_false(l)).count()
    }

    pub fn is_falsified(&self, lits: &[Literal]) -> bool {
        lits.iter().all(|&l| self.is_false(l))
    }

    /// Clauses in the implication graph of a conflict: the conflicting clause
    /// and every reason reached by walking back through the trail.
    pub fn antecedents(&self, conflict: Conflict) -> Vec<ClauseId> {
        let mut seen = vec![false; self.values.len()];
        let mut stack: Vec<u32> = Vec::new();
        let mut out = Vec::new();
        match conflict {
            Conflict::Clause(id) => {
                out.push(id);
                stack.extend(self.clause(id).unwrap_or(&[]).iter().map(|l| l.var()));
            }
            Conflict::Assumption(lit) => stack.push(lit.var()),
        }
        while let Some(v) = stack.pop() {
            let v = v as usize;
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if let Some(r) = self.reasons[v] {
                out.push(r);
                if let Some(lits) = self.clause(r) {
                    stack.extend(lits.iter().map(|l| l.var()).filter(|&u| u as usize != v));
                }
            }
        }
        out
    }
}

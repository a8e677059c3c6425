//! Oracles and generators for testing the checker at small scale.
//!
//! Everything here favors obvious correctness over speed: the propagation
//! oracle rescans every clause each round and the SAT oracle enumerates all
//! assignments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clause::{Clause, Formula, Literal};
use crate::config::{Config, Limit};
use crate::driver::verify;
use crate::error::{Error, Result};
use crate::proof::{load_proof_str, proof_to_string, ProofStep, StepKind};

/// Largest variable count the enumerating oracles accept.
pub const MAX_ORACLE_VARS: u32 = 24;
/// Variable limit of the proof-emitting solver.
pub const MAX_SOLVER_VARS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// Values indexed by variable; index 0 is unused.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// All satisfying assignments, as bitmasks with bit `v-1` holding variable `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSet {
    pub num_vars: u32,
    pub models: Vec<u32>,
}

impl ModelSet {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

fn satisfied_by(c: &Clause, bits: u32) -> bool {
    c.literals()
        .iter()
        .any(|l| ((bits >> (l.var() - 1)) & 1 == 1) != l.is_negative())
}

fn oracle_vars(clauses: &[&Clause], num_vars: u32) -> Result<u32> {
    let n = clauses
        .iter()
        .map(|c| c.max_var())
        .max()
        .unwrap_or(0)
        .max(num_vars);
    if n > MAX_ORACLE_VARS {
        return Err(Error::TooManyVariables(n));
    }
    Ok(n)
}

fn models_of(clauses: &[&Clause], num_vars: u32, first_only: bool) -> Result<ModelSet> {
    let n = oracle_vars(clauses, num_vars)?;
    let mut models = Vec::new();
    for bits in 0..(1u32 << n) {
        if clauses.iter().all(|c| satisfied_by(c, bits)) {
            models.push(bits);
            if first_only {
                break;
            }
        }
    }
    Ok(ModelSet { num_vars: n, models })
}

pub fn model_set(f: &Formula) -> Result<ModelSet> {
    let refs: Vec<&Clause> = f.clauses.iter().collect();
    models_of(&refs, f.num_vars, false)
}

/// Models of `f` together with extra clauses, over the variables of both.
pub fn model_set_with(f: &Formula, extra: &[Clause]) -> Result<ModelSet> {
    let refs: Vec<&Clause> = f.clauses.iter().chain(extra).collect();
    models_of(&refs, f.num_vars, false)
}

pub fn exhaustive_sat(f: &Formula) -> Result<SatResult> {
    let refs: Vec<&Clause> = f.clauses.iter().collect();
    let set = models_of(&refs, f.num_vars, true)?;
    Ok(match set.models.first() {
        Some(&bits) => SatResult::Sat(
            (0..=set.num_vars)
                .map(|v| v > 0 && (bits >> (v - 1)) & 1 == 1)
                .collect(),
        ),
        None => SatResult::Unsat,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveOutcome {
    pub conflict: bool,
    /// Every assigned literal, sorted by code.
    pub assignment: Vec<Literal>,
}

/// Unit propagation by repeated full scans.
pub fn naive_propagate<'a, I>(clauses: I, assumptions: &[Literal]) -> NaiveOutcome
where
    I: IntoIterator<Item = &'a [Literal]>,
    I::IntoIter: Clone,
{
    let clauses = clauses.into_iter();
    let mut value: std::collections::HashMap<u32, bool> = Default::default();
    let val = |value: &std::collections::HashMap<u32, bool>, l: Literal| {
        value.get(&l.var()).map(|&b| b != l.is_negative())
    };
    let finish = |value: &std::collections::HashMap<u32, bool>, conflict: bool| {
        let mut assignment: Vec<Literal> = value.iter().map(|(&v, &b)| Literal::new(v, !b)).collect();
        assignment.sort();
        NaiveOutcome { conflict, assignment }
    };
    for &a in assumptions {
        match val(&value, a) {
            Some(false) => return finish(&value, true),
            Some(true) => {}
            None => {
                value.insert(a.var(), !a.is_negative());
            }
        }
    }
    loop {
        let mut changed = false;
        for c in clauses.clone() {
            let mut open = None;
            let mut n_open = 0;
            let mut sat = false;
            for &l in c {
                match val(&value, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        n_open += 1;
                        open = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match (n_open, open) {
                (0, _) => return finish(&value, true),
                (1, Some(l)) => {
                    value.insert(l.var(), !l.is_negative());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return finish(&value, false);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForwardVerdict {
    Verified,
    /// 0-based index of the first inference that is neither RUP nor RAT.
    NotVerified(usize),
    NoEmptyClause,
}

fn naive_rup(live: &[Clause], lits: &[Literal]) -> bool {
    let negs: Vec<Literal> = lits.iter().map(|&l| !l).collect();
    naive_propagate(live.iter().map(Clause::literals), &negs).conflict
}

fn naive_rat(live: &[Clause], c: &Clause, pivot: Literal) -> bool {
    live.iter()
        .filter(|d| !d.is_tautology() && d.contains(!pivot))
        .all(|d| {
            let mut lits = c.literals().to_vec();
            lits.extend(d.literals().iter().copied().filter(|&x| x != !pivot));
            let e = Clause::from_literals(lits);
            e.is_tautology() || naive_rup(live, e.literals())
        })
}

/// Checks every inference in order against everything before it.
pub fn naive_forward_check(f: &Formula, steps: &[ProofStep]) -> ForwardVerdict {
    let mut live: Vec<Clause> = f.clauses.clone();
    let mut index = 0;
    for step in steps {
        match step.kind {
            StepKind::Delete => {
                if let Some(p) = live.iter().rposition(|c| *c == step.clause) {
                    live.remove(p);
                }
            }
            StepKind::Add => {
                let c = &step.clause;
                let ok = c.is_tautology()
                    || naive_rup(&live, c.literals())
                    || step.pivot.into_iter().chain(c.literals().iter().copied()).any(|l| {
                        c.contains(l) && naive_rat(&live, c, l)
                    });
                if !ok {
                    return ForwardVerdict::NotVerified(index);
                }
                if c.is_empty() {
                    return ForwardVerdict::Verified;
                }
                live.push(c.clone());
                index += 1;
            }
        }
    }
    ForwardVerdict::NoEmptyClause
}

/// PHP(n+1, n): `n+1` pigeons, `n` holes. Variable `i*n + h + 1` puts
/// pigeon `i` in hole `h`.
pub fn gen_pigeonhole(holes: u32) -> Formula {
    assert!(holes >= 1);
    let n = holes;
    let p = |i: u32, h: u32| Literal::new(i * n + h + 1, false);
    let mut f = Formula::new((n + 1) * n);
    for i in 0..=n {
        f.push(Clause::from_literals((0..n).map(|h| p(i, h)).collect()));
    }
    for h in 0..n {
        for i in 0..=n {
            for j in i + 1..=n {
                f.push(Clause::from_literals(vec![!p(i, h), !p(j, h)]));
            }
        }
    }
    f
}

/// Uniform random k-CNF: each clause has `k` distinct variables with random
/// signs.
pub fn gen_random_ksat(vars: u32, clauses: usize, k: usize, seed: u64) -> Formula {
    assert!(k as u32 <= vars);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<u32> = (1..=vars).collect();
    let mut f = Formula::new(vars);
    for _ in 0..clauses {
        let lits = all
            .choose_multiple(&mut rng, k)
            .map(|&v| Literal::new(v, rng.gen_bool(0.5)))
            .collect();
        f.push(Clause::from_literals(lits));
    }
    f
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DpllOptions {
    /// Emit deletions of unlocked learned clauses every few conflicts.
    pub deletions: bool,
    /// Pick decision variables and phases at random instead of by activity.
    pub random_branching: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpllOutcome {
    Unsat(Vec<ProofStep>),
    Sat(Vec<bool>),
}

impl DpllOutcome {
    pub fn proof(&self) -> Option<&[ProofStep]> {
        match self {
            DpllOutcome::Unsat(p) => Some(p),
            DpllOutcome::Sat(_) => None,
        }
    }
}

/// Small CDCL solver with first-UIP learning that writes every learned
/// clause as a proof step and finishes with the empty clause.
struct Cdcl {
    clauses: Vec<Vec<Literal>>,
    learned_from: usize,
    deleted: Vec<bool>,
    occ: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<Literal>,
    trail_lim: Vec<usize>,
    head: usize,
    num_vars: u32,
    proof: Vec<ProofStep>,
    rng: ChaCha8Rng,
    activity: Vec<f64>,
    bump: f64,
}

impl Cdcl {
    fn new(f: &Formula, seed: u64) -> Cdcl {
        let num_vars = f.clauses.iter().map(Clause::max_var).max().unwrap_or(0).max(f.num_vars);
        let n = num_vars as usize + 1;
        let mut s = Cdcl {
            clauses: Vec::new(),
            learned_from: 0,
            deleted: Vec::new(),
            occ: vec![Vec::new(); 2 * n],
            value: vec![0; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            head: 0,
            num_vars,
            proof: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            activity: vec![0.0; n],
            bump: 1.0,
        };
        for c in f.clauses.iter().filter(|c| !c.is_tautology()) {
            s.add_clause(c.literals().to_vec());
        }
        s.learned_from = s.clauses.len();
        s
    }

    fn add_clause(&mut self, lits: Vec<Literal>) -> usize {
        let id = self.clauses.len();
        for l in &lits {
            self.occ[l.code()].push(id);
        }
        self.clauses.push(lits);
        self.deleted.push(false);
        id
    }

    fn val(&self, l: Literal) -> i8 {
        let v = self.value[l.var() as usize];
        if l.is_negative() {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: Literal, reason: Option<usize>) {
        let v = l.var() as usize;
        self.value[v] = if l.is_negative() { -1 } else { 1 };
        self.level[v] = self.trail_lim.len();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = !self.trail[self.head];
            self.head += 1;
            for k in 0..self.occ[falsified.code()].len() {
                let id = self.occ[falsified.code()][k];
                if self.deleted[id] {
                    continue;
                }
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &l in &self.clauses[id] {
                    match self.val(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            n_open += 1;
                            open = Some(l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => return Some(id),
                    1 => self.assign(open.unwrap(), Some(id)),
                    _ => {}
                }
            }
        }
        None
    }

    fn analyze(&mut self, conflict: usize) -> (Vec<Literal>, usize) {
        let current = self.trail_lim.len();
        let mut seen = vec![false; self.value.len()];
        let mut learned: Vec<Literal> = Vec::new();
        let mut pending = 0;
        let mut clause = conflict;
        let mut idx = self.trail.len();
        let mut uip: Option<Literal> = None;
        loop {
            for &l in &self.clauses[clause] {
                let v = l.var() as usize;
                if Some(l) == uip || seen[v] || self.level[v] == 0 {
                    continue;
                }
                seen[v] = true;
                self.activity[v] += self.bump;
                if self.level[v] == current {
                    pending += 1;
                } else {
                    learned.push(l);
                }
            }
            loop {
                idx -= 1;
                if seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let p = self.trail[idx];
            pending -= 1;
            if pending == 0 {
                learned.insert(0, !p);
                break;
            }
            uip = Some(p);
            clause = self.reason[p.var() as usize].expect("implied literal has a reason");
        }
        self.bump *= 1.05;
        let back = learned[1..]
            .iter()
            .map(|l| self.level[l.var() as usize])
            .max()
            .unwrap_or(0);
        (learned, back)
    }

    fn backtrack(&mut self, level: usize) {
        if self.trail_lim.len() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for l in self.trail.drain(keep..) {
            self.value[l.var() as usize] = 0;
            self.reason[l.var() as usize] = None;
        }
        self.trail_lim.truncate(level);
        self.head = keep;
    }

    fn decide(&mut self, random: bool) -> Option<Literal> {
        if random {
            let open: Vec<u32> = (1..=self.num_vars).filter(|&v| self.value[v as usize] == 0).collect();
            let &v = open.choose(&mut self.rng)?;
            return Some(Literal::new(v, self.rng.gen_bool(0.5)));
        }
        let mut best: Option<(f64, u32)> = None;
        for v in 1..=self.num_vars {
            if self.value[v as usize] == 0 {
                let a = self.activity[v as usize];
                if best.is_none_or(|(b, _)| a > b) {
                    best = Some((a, v));
                }
            }
        }
        best.map(|(_, v)| Literal::new(v, true))
    }

    fn reduce(&mut self) {
        let locked: std::collections::HashSet<usize> =
            self.trail.iter().filter_map(|l| self.reason[l.var() as usize]).collect();
        let live: Vec<usize> = (self.learned_from..self.clauses.len())
            .filter(|&id| !self.deleted[id] && !locked.contains(&id) && self.clauses[id].len() > 2)
            .collect();
        for &id in live.iter().take(live.len() / 2) {
            if self.rng.gen_bool(0.7) {
                self.deleted[id] = true;
                self.proof.push(ProofStep {
                    kind: StepKind::Delete,
                    clause: Clause::from_literals(self.clauses[id].clone()),
                    pivot: None,
                    offset: 0,
                });
            }
        }
    }

    fn emit(&mut self, lits: &[Literal]) {
        self.proof.push(ProofStep {
            kind: StepKind::Add,
            clause: Clause::from_literals(lits.to_vec()),
            pivot: lits.first().copied(),
            offset: 0,
        });
    }

    fn solve(mut self, opts: DpllOptions) -> DpllOutcome {
        if self.clauses.iter().any(Vec::is_empty) {
            self.emit(&[]);
            return DpllOutcome::Unsat(self.proof);
        }
        for id in 0..self.clauses.len() {
            if let [l] = self.clauses[id][..] {
                match self.val(l) {
                    0 => self.assign(l, Some(id)),
                    -1 => {
                        self.emit(&[]);
                        return DpllOutcome::Unsat(self.proof);
                    }
                    _ => {}
                }
            }
        }
        let mut conflicts = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                if self.trail_lim.is_empty() {
                    self.emit(&[]);
                    return DpllOutcome::Unsat(self.proof);
                }
                conflicts += 1;
                let (learned, back) = self.analyze(conflict);
                self.emit(&learned);
                self.backtrack(back);
                let id = self.add_clause(learned.clone());
                self.assign(learned[0], Some(id));
                if opts.deletions && conflicts.is_multiple_of(16) {
                    self.reduce();
                }
                continue;
            }
            match self.decide(opts.random_branching) {
                Some(l) => {
                    self.trail_lim.push(self.trail.len());
                    self.assign(l, None);
                }
                None => {
                    let model = (0..=self.num_vars as usize).map(|v| self.value[v] > 0).collect();
                    return DpllOutcome::Sat(model);
                }
            }
        }
    }
}

/// Runs the proof-emitting solver.
pub fn emit_proof_dpll(f: &Formula) -> Result<DpllOutcome> {
    emit_proof_dpll_with(f, DpllOptions::default())
}

pub fn emit_proof_dpll_with(f: &Formula, opts: DpllOptions) -> Result<DpllOutcome> {
    let vars = f.clauses.iter().map(Clause::max_var).max().unwrap_or(0).max(f.num_vars);
    if vars > MAX_SOLVER_VARS {
        return Err(Error::TooManyVariables(vars));
    }
    Ok(Cdcl::new(f, opts.seed).solve(opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitEncoding {
    /// A fresh variable `z` per branch, defined by an equivalence block;
    /// branch lemmas carry `¬z`.
    Equivalence,
    /// Branch lemmas carry the negated branch conjunction.
    Expanded,
}

fn add_step(lits: Vec<Literal>) -> ProofStep {
    ProofStep {
        kind: StepKind::Add,
        pivot: lits.first().copied(),
        clause: Clause::from_literals(lits),
        offset: 0,
    }
}

/// Refutes `f` by splitting on every sign combination of `branch`. Each
/// branch is refuted separately and the branch clauses `¬cube` are then
/// resolved back to the empty clause.
pub fn emit_split_proof(f: &Formula, branch: &[Literal], encoding: SplitEncoding) -> Result<Vec<ProofStep>> {
    let n = branch.len();
    assert!(n < 16, "too many branch literals");
    if n == 0 {
        return match emit_proof_dpll(f)? {
            DpllOutcome::Unsat(steps) => Ok(steps),
            DpllOutcome::Sat(_) => Err(Error::Internal("split formula is satisfiable")),
        };
    }
    let mut fresh = f.clauses.iter().map(Clause::max_var).max().unwrap_or(0).max(f.num_vars);
    let mut proof = Vec::new();
    for signs in 0..(1usize << n) {
        let cube: Vec<Literal> = branch
            .iter()
            .enumerate()
            .map(|(b, &l)| if (signs >> b) & 1 == 1 { !l } else { l })
            .collect();
        let negated: Vec<Literal> = cube.iter().map(|&l| !l).collect();
        let mut sub = f.clone();
        for &l in &cube {
            sub.push(Clause::from_literals(vec![l]));
        }
        let DpllOutcome::Unsat(steps) = emit_proof_dpll(&sub)? else {
            return Err(Error::Internal("split branch is satisfiable"));
        };
        let lemmas: Vec<&ProofStep> = steps
            .iter()
            .filter(|s| s.kind == StepKind::Add && !s.clause.is_empty())
            .collect();
        if lemmas.is_empty() {
            proof.push(add_step(negated));
            continue;
        }
        match encoding {
            SplitEncoding::Equivalence => {
                fresh += 1;
                let z = Literal::new(fresh, false);
                let mut def = vec![z];
                def.extend(&negated);
                proof.push(add_step(def));
                for &l in &cube {
                    proof.push(add_step(vec![!z, l]));
                }
                for s in &lemmas {
                    let mut lits = vec![!z];
                    lits.extend(s.clause.literals());
                    proof.push(add_step(lits));
                }
                // The merge clauses follow by propagation from `¬z` and
                // the definition, so `¬cube` itself is not emitted.
                proof.push(add_step(vec![!z]));
            }
            SplitEncoding::Expanded => {
                for s in &lemmas {
                    let mut lits = s.clause.literals().to_vec();
                    lits.extend(&negated);
                    proof.push(add_step(lits));
                }
                proof.push(add_step(negated));
            }
        }
    }
    for depth in (0..n).rev() {
        for signs in 0..(1usize << depth) {
            let lits = branch[..depth]
                .iter()
                .enumerate()
                .map(|(b, &l)| if (signs >> b) & 1 == 1 { l } else { !l })
                .collect();
            proof.push(add_step(lits));
        }
    }
    Ok(proof)
}

/// Total literal count over the added clauses of a proof.
pub fn proof_literals(steps: &[ProofStep]) -> usize {
    steps
        .iter()
        .filter(|s| s.kind == StepKind::Add)
        .map(|s| s.clause.len())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    FlipLiteral,
    DropStep,
    DropEmpty,
    /// Inserts a random clause over the formula's variables.
    InsertClause,
}

/// Applies one mutation at a random place.
pub fn mutate_proof(steps: &[ProofStep], num_vars: u32, m: Mutation, rng: &mut impl Rng) -> Vec<ProofStep> {
    let mut out = steps.to_vec();
    match m {
        Mutation::FlipLiteral => {
            let nonempty: Vec<usize> = (0..out.len()).filter(|&i| !out[i].clause.is_empty()).collect();
            if let Some(&i) = nonempty.choose(rng) {
                let mut lits = out[i].clause.literals().to_vec();
                let j = rng.gen_range(0..lits.len());
                lits[j] = !lits[j];
                let pivot = lits.first().copied();
                out[i].clause = Clause::from_literals(lits);
                if out[i].kind == StepKind::Add {
                    out[i].pivot = pivot;
                }
            }
        }
        Mutation::DropStep => {
            if !out.is_empty() {
                out.remove(rng.gen_range(0..out.len()));
            }
        }
        Mutation::DropEmpty => out.retain(|s| !(s.kind == StepKind::Add && s.clause.is_empty())),
        Mutation::InsertClause => {
            let len = rng.gen_range(1..=3.min(num_vars.max(1)) as usize);
            let lits: Vec<Literal> = (0..len)
                .map(|_| Literal::new(rng.gen_range(1..=num_vars.max(1)), rng.gen_bool(0.5)))
                .collect();
            let at = rng.gen_range(0..=out.len());
            out.insert(at, add_step(lits));
        }
    }
    out
}

/// A proof of random short clauses ending in the empty clause.
pub fn random_proof(num_vars: u32, len: usize, rng: &mut impl Rng) -> Vec<ProofStep> {
    let mut out: Vec<ProofStep> = (0..len)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            add_step(
                (0..k)
                    .map(|_| Literal::new(rng.gen_range(1..=num_vars.max(1)), rng.gen_bool(0.5)))
                    .collect(),
            )
        })
        .collect();
    out.push(add_step(Vec::new()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationReport {
    /// Model sets of `F ∧ S` in original and permuted order agree.
    pub models_equal: bool,
    /// The driver accepted the permuted proof.
    pub accepted: bool,
    /// `accepted` implies the formula is unsatisfiable.
    pub sound: bool,
}

impl PermutationReport {
    pub fn passed(&self) -> bool {
        self.models_equal && self.sound
    }
}

/// Permutes the verified clauses `s`, compares model sets and re-runs the
/// driver on the permuted clauses followed by the empty clause.
pub fn lemma1_permutation_check(f: &Formula, s: &[Clause], seed: u64) -> Result<PermutationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut permuted = s.to_vec();
    permuted.shuffle(&mut rng);
    let before = model_set_with(f, s)?;
    let after = model_set_with(f, &permuted)?;
    let mut steps: Vec<ProofStep> = permuted
        .iter()
        .map(|c| add_step(c.literals().to_vec()))
        .collect();
    steps.push(add_step(Vec::new()));
    let db = load_proof_str(&proof_to_string(&steps), Limit::Infinite)?;
    let (verdict, _) = verify(f.clone(), db, &Config::default())?;
    let unsat = !exhaustive_sat(f)?.is_sat();
    Ok(PermutationReport {
        models_equal: before == after,
        accepted: verdict.is_verified(),
        sound: !verdict.is_verified() || unsat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: i64) -> Literal {
        Literal::from_dimacs(d).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let f = Formula::from_dimacs(1, &[&[1], &[-1]]);
        assert_eq!(exhaustive_sat(&f).unwrap(), SatResult::Unsat);
        let f = Formula::from_dimacs(2, &[&[1, 2]]);
        assert_eq!(model_set(&f).unwrap().len(), 3);
        assert!(exhaustive_sat(&Formula::new(25)).is_err());
    }

    #[test]
    fn naive_propagation_examples() {
        let f = Formula::from_dimacs(3, &[&[1], &[-1, 2], &[-2, 3], &[-3]]);
        let out = naive_propagate(f.clauses.iter().map(Clause::literals), &[]);
        assert!(out.conflict);
        let f = Formula::from_dimacs(3, &[&[-1, 2], &[-2, 3]]);
        let out = naive_propagate(f.clauses.iter().map(Clause::literals), &[lit(1)]);
        assert!(!out.conflict);
        assert_eq!(out.assignment, vec![lit(1), lit(2), lit(3)]);
    }

    #[test]
    fn pigeonhole_shape() {
        let f = gen_pigeonhole(1);
        assert_eq!(f.len(), 3);
        assert_eq!(exhaustive_sat(&f).unwrap(), SatResult::Unsat);
        assert_eq!(gen_pigeonhole(3).len(), 22);
        assert_eq!(gen_pigeonhole(3).num_vars, 12);
    }

    #[test]
    fn random_generator_is_deterministic() {
        assert_eq!(gen_random_ksat(10, 40, 3, 7), gen_random_ksat(10, 40, 3, 7));
        assert_ne!(gen_random_ksat(10, 40, 3, 7), gen_random_ksat(10, 40, 3, 8));
    }

    #[test]
    fn solver_proofs_check_forward() {
        let f = Formula::from_dimacs(1, &[&[1], &[-1]]);
        let DpllOutcome::Unsat(p) = emit_proof_dpll(&f).unwrap() else { panic!() };
        assert_eq!(proof_to_string(&p), "0\n");
        for holes in 1..=3 {
            let f = gen_pigeonhole(holes);
            let out = emit_proof_dpll_with(&f, DpllOptions { deletions: true, random_branching: true, seed: 1 }).unwrap();
            let p = out.proof().unwrap();
            assert!(p.last().unwrap().clause.is_empty());
            assert_eq!(naive_forward_check(&f, p), ForwardVerdict::Verified);
        }
        let f = Formula::from_dimacs(2, &[&[1, 2]]);
        let DpllOutcome::Sat(m) = emit_proof_dpll(&f).unwrap() else { panic!() };
        assert!(m[1] || m[2]);
    }

    #[test]
    fn forward_checker_rejects_bogus_step() {
        let f = Formula::from_dimacs(2, &[&[1, 2]]);
        let p = vec![ProofStep::add(&[1]), ProofStep::add(&[])];
        assert_eq!(naive_forward_check(&f, &p), ForwardVerdict::NotVerified(1));
        let f = Formula::from_dimacs(1, &[&[1], &[-1]]);
        assert_eq!(naive_forward_check(&f, &[ProofStep::add(&[])]), ForwardVerdict::Verified);
    }

    #[test]
    fn split_proofs_check_forward() {
        let f = gen_pigeonhole(2);
        for enc in [SplitEncoding::Equivalence, SplitEncoding::Expanded] {
            for n in 0..=2 {
                let branch: Vec<Literal> = (1..=n).map(|v| lit(v as i64)).collect();
                let p = emit_split_proof(&f, &branch, enc).unwrap();
                assert_eq!(naive_forward_check(&f, &p), ForwardVerdict::Verified, "{enc:?} {n}");
            }
        }
        // PHP(3,2) branches close by propagation alone; PHP(4,3) needs lemmas.
        let f = gen_pigeonhole(3);
        let p = emit_split_proof(&f, &[lit(1)], SplitEncoding::Equivalence).unwrap();
        assert_eq!(naive_forward_check(&f, &p), ForwardVerdict::Verified);
        assert_eq!(p[0].clause, Clause::from_dimacs(&[13, -1]));
        assert_eq!(p[0].pivot, Some(lit(13)));
        assert_eq!(p[1].clause, Clause::from_dimacs(&[-13, 1]));
    }

    #[test]
    fn identity_permutation_passes() {
        let f = Formula::from_dimacs(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        let s = vec![Clause::from_dimacs(&[2])];
        let r = lemma1_permutation_check(&f, &s, 0).unwrap();
        assert!(r.passed() && r.accepted);
    }
}

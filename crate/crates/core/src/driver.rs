//! Stage orchestration and the public verification entry points.

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use log::{debug, info};

use crate::clause::{Formula, Literal};
use crate::config::{Config, Limit};
use crate::dimacs::parse_dimacs;
use crate::error::Result;
use crate::proof::{load_proof, ProofDb};
use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// The proof never derives the empty clause.
    NoEmptyClause,
    /// Propagation over the formula and every inference finds no conflict.
    NoGlobalConflict,
    /// This inference (0-based) is neither RUP nor RAT.
    Inference(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    NotVerified(Rejection),
}

impl Verdict {
    pub fn is_verified(self) -> bool {
        self == Verdict::Verified
    }

    /// First inference that failed every check, if that is the reason.
    pub fn failing_index(self) -> Option<usize> {
        match self {
            Verdict::NotVerified(Rejection::Inference(i)) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => write!(f, "VERIFIED"),
            Verdict::NotVerified(_) => write!(f, "NOT VERIFIED"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageTimes {
    pub load: Duration,
    pub probe: Duration,
    pub subset: Duration,
    pub fast_path: Duration,
    pub seed: Duration,
    pub window: Duration,
    pub exact: Duration,
    pub rat: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub inferences: u64,
    pub deletions: u64,
    pub missing_deletions: u64,
    pub rup_checks: u64,
    pub rat_checks: u64,
    pub occurrence_builds: u64,
    pub fastpath_blocks: u64,
    pub window_misses: u64,
    pub probe_promotions: u64,
    pub subset_calls: u64,
    pub subset_promotions: u64,
    pub deactivated: u64,
    pub pruned: u64,
    pub restored: u64,
    pub used: u64,
    pub propagations: u64,
    pub evictions: u64,
    pub reloads: u64,
    pub reads: u64,
    pub theorem2_checks: u64,
    pub theorem2_violations: u64,
    pub times: StageTimes,
}

impl Stats {
    /// `(name, value)` pairs for reporting.
    pub fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("inferences", self.inferences),
            ("deletions", self.deletions),
            ("missing_deletions", self.missing_deletions),
            ("rup_checks", self.rup_checks),
            ("rat_checks", self.rat_checks),
            ("occurrence_builds", self.occurrence_builds),
            ("fastpath_blocks", self.fastpath_blocks),
            ("window_misses", self.window_misses),
            ("probe_promotions", self.probe_promotions),
            ("subset_calls", self.subset_calls),
            ("subset_promotions", self.subset_promotions),
            ("deactivated", self.deactivated),
            ("pruned", self.pruned),
            ("restored", self.restored),
            ("used", self.used),
            ("propagations", self.propagations),
            ("evictions", self.evictions),
            ("reloads", self.reloads),
            ("reads", self.reads),
            ("theorem2_checks", self.theorem2_checks),
            ("theorem2_violations", self.theorem2_violations),
        ]
    }

    pub fn timings(&self) -> Vec<(&'static str, Duration)> {
        let t = &self.times;
        vec![
            ("load", t.load),
            ("probe", t.probe),
            ("subset", t.subset),
            ("fast_path", t.fast_path),
            ("seed", t.seed),
            ("window", t.window),
            ("exact", t.exact),
            ("rat", t.rat),
        ]
    }
}

/// Index of the first empty inference, if any.
pub fn locate_empty_clause(db: &ProofDb) -> Option<usize> {
    db.empty_at()
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    *slot += start.elapsed();
    out
}

impl Session {
    /// Runs every enabled stage and returns the verdict. Flags and
    /// statistics stay available on the session afterwards.
    pub fn run(&mut self) -> Result<Verdict> {
        self.stats.inferences = self.db.len() as u64;
        self.stats.deletions = self.db.deletions().len() as u64;
        let verdict = self.run_stages();
        self.stats.used = self.db.records().iter().filter(|r| r.used).count() as u64;
        self.sync_io_stats();
        let verdict = verdict?;
        info!("verdict: {}", verdict);
        Ok(verdict)
    }

    fn run_stages(&mut self) -> Result<Verdict> {
        if locate_empty_clause(&self.db).is_none() {
            return Ok(Verdict::NotVerified(Rejection::NoEmptyClause));
        }
        let mut times = std::mem::take(&mut self.stats.times);
        let result = self.stages(&mut times);
        self.stats.times = times;
        result
    }

    fn stages(&mut self, times: &mut StageTimes) -> Result<Verdict> {
        let cfg = self.config.clone();
        if cfg.unit_probe {
            let n = timed(&mut times.probe, || self.unit_probe())?;
            debug!("unit probe promoted {n}");
        }
        if cfg.subset {
            timed(&mut times.subset, || self.subset_stage())?;
        }
        if cfg.fast_path {
            let n = timed(&mut times.fast_path, || self.fast_path_stage())?;
            debug!("fast path verified {n} blocks");
        }
        if cfg.deactivate {
            self.deactivate_subsumed()?;
        }
        if !timed(&mut times.seed, || self.seed_used_flags())? {
            return Ok(Verdict::NotVerified(Rejection::NoGlobalConflict));
        }
        if cfg.prune {
            self.prune_small_inferences()?;
        }
        if cfg.window && !cfg.theta.is_infinite() {
            let (tail, mu) = (cfg.tail, cfg.mu);
            let n = timed(&mut times.window, || {
                self.window_shift_check(cfg.theta, cfg.mu, move |t, len| {
                    t + 1 > tail || mu.admits(len)
                })
            })?;
            debug!("window pass verified {n}");
        }
        if self.any_used_unverified() {
            let n = timed(&mut times.exact, || {
                self.window_shift_check(Limit::Infinite, Limit::Infinite, |_, _| true)
            })?;
            debug!("exact pass verified {n}");
        }
        if let Some(i) = timed(&mut times.rat, || self.rat_stage())? {
            return Ok(Verdict::NotVerified(Rejection::Inference(i)));
        }
        debug_assert!(!self.any_used_unverified());
        Ok(Verdict::Verified)
    }

    /// Debug check run on a conflict of the exact pass at position `i`:
    /// closes the current assignment under unit resolution over the whole
    /// context and counts the case where no formula or promoted clause ends
    /// up falsified. Skipped for proofs with deletions.
    pub(crate) fn theorem2_probe(&mut self, i: usize) -> Result<()> {
        if self.has_deletions {
            return Ok(());
        }
        self.stats.theorem2_checks += 1;
        let nv = self.formula.num_vars.max(self.db.max_var()) as usize;
        let mut value = vec![0i8; nv + 1];
        for &l in self.state.trail() {
            value[l.var() as usize] = if l.is_negative() { -1 } else { 1 };
        }
        let val = |value: &[i8], l: Literal| {
            let v = value[l.var() as usize];
            if l.is_negative() {
                -v
            } else {
                v
            }
        };

        let mut base: Vec<Vec<Literal>> = self
            .formula
            .clauses
            .iter()
            .filter(|c| !c.is_tautology())
            .map(|c| c.literals().to_vec())
            .collect();
        for k in 0..self.end {
            if self.promoted[k] && i < self.intact {
                base.push(self.db.inference(k)?.literals().to_vec());
            }
        }
        let mut lemmas: Vec<Vec<Literal>> = Vec::new();
        for k in 0..i {
            if self.lemma_in_context(k, i) {
                lemmas.push(self.db.inference(k)?.literals().to_vec());
            }
        }
        loop {
            let mut changed = false;
            for c in base.iter().chain(&lemmas) {
                let mut open = c.iter().filter(|&&l| val(&value, l) >= 0);
                if let (Some(&l), None) = (open.next(), open.next()) {
                    if val(&value, l) == 0 {
                        value[l.var() as usize] = if l.is_negative() { -1 } else { 1 };
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let falsified = |c: &Vec<Literal>| c.iter().all(|&l| val(&value, l) < 0);
        if !base.iter().any(falsified) && lemmas.iter().any(falsified) {
            self.stats.theorem2_violations += 1;
            debug!("conflict at inference {i} falsifies no formula clause");
        }
        Ok(())
    }
}

/// Verifies a loaded proof against a formula.
pub fn verify(formula: Formula, db: ProofDb, config: &Config) -> Result<(Verdict, Stats)> {
    let mut session = Session::new(formula, db, config.clone())?;
    let verdict = session.run()?;
    Ok((verdict, session.stats().clone()))
}

/// Reads both files and verifies.
pub fn verify_files(
    cnf: impl AsRef<Path>,
    proof: impl AsRef<Path>,
    config: &Config,
) -> Result<(Verdict, Stats)> {
    let start = Instant::now();
    let file = std::fs::File::open(cnf)?;
    let formula = parse_dimacs(std::io::BufReader::new(file))?;
    let db = load_proof(proof, config.mem_budget)?;
    let load = start.elapsed();
    let (verdict, mut stats) = verify(formula, db, config)?;
    stats.times.load = load;
    Ok((verdict, stats))
}

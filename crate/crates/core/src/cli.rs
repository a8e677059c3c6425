//! Command-line front end. Prints `s VERIFIED` or `s NOT VERIFIED` on
//! stdout, statistics as `c ` lines, and exits 0, 1 or 2 (error).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{Config, Limit};
use crate::driver::{verify_files, Rejection, Verdict};

fn positive_limit(s: &str) -> Result<Limit, String> {
    match s.parse::<Limit>()? {
        Limit::Finite(0) => Err("must be positive or 'inf'".into()),
        l => Ok(l),
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got {s:?}")),
        Ok(n) => Ok(n),
    }
}

#[derive(Parser, Debug)]
#[command(name = "winrat", version, about = "Check a DRUP/DRAT refutation proof")]
pub struct CliOptions {
    /// Formula in DIMACS CNF.
    pub cnf: PathBuf,
    /// Proof in textual DRAT.
    pub proof: PathBuf,

    /// Window size of the approximate backward pass.
    #[arg(long, value_parser = positive_limit, default_value = "40000")]
    pub theta: Limit,
    /// Largest inference admitted into the window.
    #[arg(long, value_parser = positive_limit, default_value = "6")]
    pub mu: Limit,
    /// Gap and reach of subset segments.
    #[arg(long, value_parser = positive, default_value = "500")]
    pub span: usize,
    /// Inferences past this index enter the window whatever their size.
    #[arg(long, value_parser = positive_limit, default_value = "100000")]
    pub tail: Limit,
    /// Largest subset-verified clause promoted into the formula.
    #[arg(long, default_value = "3")]
    pub add_max: usize,
    /// Literal slots of proof clauses kept in memory ('inf' keeps all).
    #[arg(long, default_value = "inf")]
    pub mem_budget: Limit,
    /// Unused binary/ternary inferences kept after pruning.
    #[arg(long, default_value = "50000")]
    pub prune_cap: Limit,

    /// Skip the unit probe.
    #[arg(long)]
    pub no_probe: bool,
    /// Skip subset proof checks.
    #[arg(long)]
    pub no_subset: bool,
    /// Skip the approximate window pass.
    #[arg(long)]
    pub no_window: bool,
    /// Keep subsumed inferences active.
    #[arg(long)]
    pub no_deactivate: bool,
    /// Keep unused binary/ternary inferences.
    #[arg(long)]
    pub no_prune: bool,
    /// Check extension definitions by RAT.
    #[arg(long)]
    pub no_fastpath: bool,

    /// Print counters and stage times.
    #[arg(long)]
    pub stats: bool,
    /// Count conflicts that falsify no formula clause (slow).
    #[arg(long)]
    pub debug_theorem2: bool,
    /// Print only the verdict line.
    #[arg(long, short)]
    pub quiet: bool,
}

impl CliOptions {
    pub fn config(&self) -> Config {
        Config {
            theta: self.theta,
            mu: self.mu,
            span: self.span,
            tail: self.tail.finite().unwrap_or(usize::MAX),
            add_max: self.add_max,
            prune_cap: self.prune_cap,
            mem_budget: self.mem_budget,
            unit_probe: !self.no_probe,
            subset: !self.no_subset,
            window: !self.no_window,
            deactivate: !self.no_deactivate,
            prune: !self.no_prune,
            fast_path: !self.no_fastpath,
            debug_theorem2: self.debug_theorem2,
        }
    }
}

/// Parses `args` (including the program name), runs the check and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let opts = match CliOptions::try_parse_from(args) {
        Ok(o) => o,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let config = opts.config();
    let (verdict, stats) = match verify_files(&opts.cnf, &opts.proof, &config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "winrat: {e}");
            return 2;
        }
    };
    if !opts.quiet {
        let reason = match verdict {
            Verdict::Verified => None,
            Verdict::NotVerified(Rejection::NoEmptyClause) => {
                Some("proof does not derive the empty clause".to_owned())
            }
            Verdict::NotVerified(Rejection::NoGlobalConflict) => {
                Some("empty clause is not implied by propagation".to_owned())
            }
            Verdict::NotVerified(Rejection::Inference(i)) => {
                Some(format!("inference {} is neither RUP nor RAT", i + 1))
            }
        };
        if let Some(r) = reason {
            let _ = writeln!(out, "c {r}");
        }
    }
    if opts.stats {
        for (name, value) in stats.counters() {
            let _ = writeln!(out, "c {name:<20} {value}");
        }
        for (name, t) in stats.timings() {
            let _ = writeln!(out, "c time_{name:<15} {:.6}", t.as_secs_f64());
        }
    }
    let _ = writeln!(out, "s {verdict}");
    if verdict.is_verified() {
        0
    } else {
        1
    }
}

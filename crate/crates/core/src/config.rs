use std::fmt;
use std::str::FromStr;

/// A positive bound that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Limit {
    Finite(usize),
    Infinite,
}

impl Limit {
    pub fn is_infinite(self) -> bool {
        self == Limit::Infinite
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Limit::Finite(n) => Some(n),
            Limit::Infinite => None,
        }
    }

    /// `n <= self`
    pub fn admits(self, n: usize) -> bool {
        match self {
            Limit::Finite(m) => n <= m,
            Limit::Infinite => true,
        }
    }
}

impl From<usize> for Limit {
    fn from(n: usize) -> Limit {
        Limit::Finite(n)
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(n) => write!(f, "{n}"),
            Limit::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Limit {
    type Err = String;

    fn from_str(s: &str) -> Result<Limit, String> {
        match s.trim() {
            "inf" | "infinite" | "infinity" => Ok(Limit::Infinite),
            t => t
                .parse::<usize>()
                .map(Limit::Finite)
                .map_err(|_| format!("expected a non-negative integer or 'inf', got {s:?}")),
        }
    }
}

/// Tuning constants and stage switches for one verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Window size for the approximate backward pass.
    pub theta: Limit,
    /// Largest inference admitted into a finite window.
    pub mu: Limit,
    /// Maximum gap between unit inferences of one subset segment, and the
    /// distance the segment extends below its first unit.
    pub span: usize,
    /// Inferences past this (one-based) index enter the window pass whatever
    /// their size.
    pub tail: usize,
    /// Largest subset-verified clause promoted into the formula.
    pub add_max: usize,
    /// Unused binary/ternary inferences kept attached after pruning.
    pub prune_cap: Limit,
    /// Literal slots of proof clauses kept resident while loading.
    pub mem_budget: Limit,

    pub unit_probe: bool,
    pub subset: bool,
    pub window: bool,
    pub deactivate: bool,
    pub prune: bool,
    pub fast_path: bool,
    /// Check that every conflict found in the exact pass has a falsified
    /// formula clause in the unit-resolution closure. Slow.
    pub debug_theorem2: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            theta: Limit::Finite(40_000),
            mu: Limit::Finite(6),
            span: 500,
            tail: 100_000,
            add_max: 3,
            prune_cap: Limit::Finite(50_000),
            mem_budget: Limit::Infinite,
            unit_probe: true,
            subset: true,
            window: true,
            deactivate: true,
            prune: true,
            fast_path: true,
            debug_theorem2: false,
        }
    }
}

impl Config {
    /// Plain backward checking: every optimization stage off.
    pub fn baseline() -> Config {
        Config {
            unit_probe: false,
            subset: false,
            window: false,
            deactivate: false,
            prune: false,
            fast_path: false,
            ..Config::default()
        }
    }
}

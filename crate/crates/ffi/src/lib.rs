//! C interface to the winrat proof checker.
//!
//! Every function returns one of the `WINRAT_*` status codes. On failure
//! a message is available from `winrat_last_error` on the same thread.
//! Handles are created by `winrat_checker_from_files` or
//! `winrat_checker_from_buffers` and released with `winrat_checker_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use winrat::dimacs::parse_dimacs;
use winrat::{load_proof, load_proof_bytes, Config, Error, Limit, Session, Verdict};

pub const WINRAT_OK: i32 = 0;
pub const WINRAT_ERR_NULL: i32 = -1;
pub const WINRAT_ERR_IO: i32 = -2;
pub const WINRAT_ERR_PARSE: i32 = -3;
pub const WINRAT_ERR_INTEGRITY: i32 = -4;
pub const WINRAT_ERR_INVALID_ARG: i32 = -5;
pub const WINRAT_ERR_PANIC: i32 = -6;
pub const WINRAT_ERR_INTERNAL: i32 = -7;

pub const WINRAT_VERIFIED: i32 = 1;
pub const WINRAT_NOT_VERIFIED: i32 = 0;

/// Stands for an unbounded limit in `WinratConfig`.
pub const WINRAT_INFINITE: u64 = u64::MAX;

/// Opaque checker handle.
pub struct WinratChecker {
    session: Session,
    verdict: Option<Verdict>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WinratConfig {
    pub theta: u64,
    pub mu: u64,
    pub span: u64,
    pub tail: u64,
    pub add_max: u64,
    pub prune_cap: u64,
    pub mem_budget: u64,
    pub unit_probe: bool,
    pub subset: bool,
    pub window: bool,
    pub deactivate: bool,
    pub prune: bool,
    pub fast_path: bool,
    pub debug_theorem2: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct WinratStats {
    pub inferences: u64,
    pub deletions: u64,
    pub rup_checks: u64,
    pub rat_checks: u64,
    pub occurrence_builds: u64,
    pub fastpath_blocks: u64,
    pub window_misses: u64,
    pub probe_promotions: u64,
    pub subset_promotions: u64,
    pub used: u64,
    pub propagations: u64,
    pub evictions: u64,
    pub reloads: u64,
    pub theorem2_violations: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => WINRAT_ERR_IO,
        Error::Cnf { .. } | Error::Proof { .. } | Error::ZeroLiteral | Error::VariableOutOfRange(_) => {
            WINRAT_ERR_PARSE
        }
        Error::Integrity { .. } => WINRAT_ERR_INTEGRITY,
        Error::TooManyVariables(_) => WINRAT_ERR_INVALID_ARG,
        Error::Internal(_) => WINRAT_ERR_INTERNAL,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WINRAT_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside winrat");
            WINRAT_ERR_PANIC
        }
    }
}

fn lib_err(e: Error) -> (i32, String) {
    (error_code(&e), e.to_string())
}

fn null_err(what: &str) -> (i32, String) {
    (WINRAT_ERR_NULL, format!("{what} is null"))
}

fn limit(n: u64) -> Limit {
    if n == WINRAT_INFINITE {
        Limit::Infinite
    } else {
        Limit::Finite(n as usize)
    }
}

fn unlimit(l: Limit) -> u64 {
    l.finite().map_or(WINRAT_INFINITE, |n| n as u64)
}

impl From<&Config> for WinratConfig {
    fn from(c: &Config) -> WinratConfig {
        WinratConfig {
            theta: unlimit(c.theta),
            mu: unlimit(c.mu),
            span: c.span as u64,
            tail: if c.tail == usize::MAX { WINRAT_INFINITE } else { c.tail as u64 },
            add_max: c.add_max as u64,
            prune_cap: unlimit(c.prune_cap),
            mem_budget: unlimit(c.mem_budget),
            unit_probe: c.unit_probe,
            subset: c.subset,
            window: c.window,
            deactivate: c.deactivate,
            prune: c.prune,
            fast_path: c.fast_path,
            debug_theorem2: c.debug_theorem2,
        }
    }
}

impl WinratConfig {
    fn to_config(self) -> Result<Config, (i32, String)> {
        if self.theta == 0 || self.mu == 0 || self.span == 0 {
            return Err((WINRAT_ERR_INVALID_ARG, "theta, mu and span must be positive".into()));
        }
        Ok(Config {
            theta: limit(self.theta),
            mu: limit(self.mu),
            span: usize::try_from(self.span).unwrap_or(usize::MAX),
            tail: usize::try_from(self.tail).unwrap_or(usize::MAX),
            add_max: usize::try_from(self.add_max).unwrap_or(usize::MAX),
            prune_cap: limit(self.prune_cap),
            mem_budget: limit(self.mem_budget),
            unit_probe: self.unit_probe,
            subset: self.subset,
            window: self.window,
            deactivate: self.deactivate,
            prune: self.prune,
            fast_path: self.fast_path,
            debug_theorem2: self.debug_theorem2,
        })
    }
}

unsafe fn read_config(cfg: *const WinratConfig) -> Result<Config, (i32, String)> {
    match cfg.as_ref() {
        Some(c) => c.to_config(),
        None => Ok(Config::default()),
    }
}

unsafe fn read_path(p: *const c_char, what: &str) -> Result<String, (i32, String)> {
    if p.is_null() {
        return Err(null_err(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| (WINRAT_ERR_INVALID_ARG, format!("{what} is not valid UTF-8")))
}

unsafe fn write_handle(out: *mut *mut WinratChecker, session: Session) {
    *out = Box::into_raw(Box::new(WinratChecker { session, verdict: None }));
}

/// Fills `out` with the default configuration.
///
/// # Safety
/// `out` must be null or point to writable memory for one `WinratConfig`.
#[no_mangle]
pub unsafe extern "C" fn winrat_config_default(out: *mut WinratConfig) -> i32 {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null_err("out"))?;
        *out = WinratConfig::from(&Config::default());
        Ok(())
    })
}

/// Loads a DIMACS formula and a DRAT proof from files. `cfg` may be null
/// for the defaults. On success `*out` owns a new handle.
///
/// # Safety
/// Paths must be null or NUL-terminated strings; `cfg` must be null or
/// valid; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn winrat_checker_from_files(
    cnf_path: *const c_char,
    proof_path: *const c_char,
    cfg: *const WinratConfig,
    out: *mut *mut WinratChecker,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = ptr::null_mut();
        let cnf = read_path(cnf_path, "cnf_path")?;
        let proof = read_path(proof_path, "proof_path")?;
        let config = read_config(cfg)?;
        let file = std::fs::File::open(&cnf).map_err(|e| lib_err(e.into()))?;
        let formula = parse_dimacs(std::io::BufReader::new(file)).map_err(lib_err)?;
        let db = load_proof(&proof, config.mem_budget).map_err(lib_err)?;
        let session = Session::new(formula, db, config).map_err(lib_err)?;
        write_handle(out, session);
        Ok(())
    })
}

/// Like `winrat_checker_from_files` with both inputs in memory. The
/// buffers are copied.
///
/// # Safety
/// Each buffer must be null with length 0 or valid for its length.
#[no_mangle]
pub unsafe extern "C" fn winrat_checker_from_buffers(
    cnf: *const u8,
    cnf_len: usize,
    proof: *const u8,
    proof_len: usize,
    cfg: *const WinratConfig,
    out: *mut *mut WinratChecker,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = ptr::null_mut();
        let bytes = |p: *const u8, n: usize, what| -> Result<&[u8], (i32, String)> {
            match (p.is_null(), n) {
                (true, 0) => Ok(&[]),
                (true, _) => Err(null_err(what)),
                (false, _) => Ok(std::slice::from_raw_parts(p, n)),
            }
        };
        let cnf = bytes(cnf, cnf_len, "cnf")?;
        let proof = bytes(proof, proof_len, "proof")?;
        let config = read_config(cfg)?;
        let formula = parse_dimacs(cnf).map_err(lib_err)?;
        let db = load_proof_bytes(proof.to_vec(), config.mem_budget).map_err(lib_err)?;
        let session = Session::new(formula, db, config).map_err(lib_err)?;
        write_handle(out, session);
        Ok(())
    })
}

/// Runs the check and stores `WINRAT_VERIFIED` or `WINRAT_NOT_VERIFIED` in
/// `*verdict`. Later calls return the first result.
///
/// # Safety
/// `checker` must be null or a live handle; `verdict` null or writable.
#[no_mangle]
pub unsafe extern "C" fn winrat_verify(checker: *mut WinratChecker, verdict: *mut i32) -> i32 {
    guard(|| {
        let c = checker.as_mut().ok_or_else(|| null_err("checker"))?;
        let out = verdict.as_mut().ok_or_else(|| null_err("verdict"))?;
        let v = match c.verdict {
            Some(v) => v,
            None => {
                let v = c.session.run().map_err(lib_err)?;
                c.verdict = Some(v);
                v
            }
        };
        *out = if v.is_verified() { WINRAT_VERIFIED } else { WINRAT_NOT_VERIFIED };
        Ok(())
    })
}

/// Stores the 0-based index of the first inference that failed every
/// check, or -1 if there is none (or the check has not run).
///
/// # Safety
/// `checker` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn winrat_failing_index(checker: *const WinratChecker, out: *mut i64) -> i32 {
    guard(|| {
        let c = checker.as_ref().ok_or_else(|| null_err("checker"))?;
        let out = out.as_mut().ok_or_else(|| null_err("out"))?;
        *out = c
            .verdict
            .and_then(Verdict::failing_index)
            .map_or(-1, |i| i as i64);
        Ok(())
    })
}

/// Copies the counters of the last run.
///
/// # Safety
/// `checker` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn winrat_stats(checker: *const WinratChecker, out: *mut WinratStats) -> i32 {
    guard(|| {
        let c = checker.as_ref().ok_or_else(|| null_err("checker"))?;
        let out = out.as_mut().ok_or_else(|| null_err("out"))?;
        let s = c.session.stats();
        *out = WinratStats {
            inferences: s.inferences,
            deletions: s.deletions,
            rup_checks: s.rup_checks,
            rat_checks: s.rat_checks,
            occurrence_builds: s.occurrence_builds,
            fastpath_blocks: s.fastpath_blocks,
            window_misses: s.window_misses,
            probe_promotions: s.probe_promotions,
            subset_promotions: s.subset_promotions,
            used: s.used,
            propagations: s.propagations,
            evictions: s.evictions,
            reloads: s.reloads,
            theorem2_violations: s.theorem2_violations,
        };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `checker` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn winrat_checker_free(checker: *mut WinratChecker) {
    if !checker.is_null() {
        drop(Box::from_raw(checker));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn winrat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn winrat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

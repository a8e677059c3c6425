//! ASCII DRAT/DRUP proofs and the proof database.
//!
//! A proof is one step per line: `[d] lit* 0`. Lines starting with `c` are
//! comments. Loading makes a single streaming pass that records every step
//! with its byte offset; clause bodies beyond the memory budget are dropped
//! and read back from the file on demand.

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::clause::{clause_hash, Clause, Literal};
use crate::config::Limit;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Add,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub kind: StepKind,
    pub clause: Clause,
    /// First literal as written; the preferred RAT pivot.
    pub pivot: Option<Literal>,
    pub offset: u64,
}

impl ProofStep {
    pub fn add(lits: &[i64]) -> ProofStep {
        ProofStep {
            kind: StepKind::Add,
            clause: Clause::from_dimacs(lits),
            pivot: lits.first().map(|&d| Literal::from_dimacs(d).unwrap()),
            offset: 0,
        }
    }

    pub fn delete(lits: &[i64]) -> ProofStep {
        ProofStep {
            kind: StepKind::Delete,
            clause: Clause::from_dimacs(lits),
            pivot: None,
            offset: 0,
        }
    }
}

/// Parses one proof line. Returns `None` for blank and comment lines.
/// `offset` is the byte position of the line, used in error messages.
pub fn parse_proof_line(line: &[u8], offset: u64) -> Result<Option<ProofStep>> {
    let text = std::str::from_utf8(line).map_err(|_| Error::proof(offset, "not ASCII"))?;
    let mut tokens = text.split_ascii_whitespace().peekable();
    let kind = match tokens.peek() {
        None => return Ok(None),
        Some(t) if t.starts_with('c') => return Ok(None),
        Some(&"d") => {
            tokens.next();
            StepKind::Delete
        }
        Some(_) => StepKind::Add,
    };
    let mut lits = Vec::new();
    let mut pivot = None;
    let mut terminated = false;
    for tok in tokens {
        if terminated {
            return Err(Error::proof(offset, format!("stray token {tok:?} after 0")));
        }
        let d: i64 = tok
            .parse()
            .map_err(|_| Error::proof(offset, format!("not an integer: {tok:?}")))?;
        if d == 0 {
            terminated = true;
            continue;
        }
        let lit = Literal::from_dimacs(d).map_err(|e| Error::proof(offset, e.to_string()))?;
        pivot.get_or_insert(lit);
        lits.push(lit);
    }
    if !terminated {
        return Err(Error::proof(offset, "missing 0 terminator"));
    }
    Ok(Some(ProofStep {
        kind,
        clause: Clause::from_literals(lits),
        pivot: if kind == StepKind::Add { pivot } else { None },
        offset,
    }))
}

/// Serializes steps in ASCII DRAT, writing the pivot first.
pub fn write_proof<W: Write>(steps: &[ProofStep], mut out: W) -> std::io::Result<()> {
    for s in steps {
        if s.kind == StepKind::Delete {
            write!(out, "d ")?;
        }
        if let Some(p) = s.pivot {
            write!(out, "{} ", p)?;
        }
        for &l in s.clause.literals() {
            if Some(l) != s.pivot {
                write!(out, "{} ", l)?;
            }
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn proof_to_string(steps: &[ProofStep]) -> String {
    let mut buf = Vec::new();
    write_proof(steps, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DRAT output is ASCII")
}

/// One added proof clause and its bookkeeping.
#[derive(Clone, Debug)]
pub struct InferenceRecord {
    clause: Option<Clause>,
    pinned: bool,
    pub len: usize,
    pub hash: u64,
    pub pivot: Option<Literal>,
    pub tautology: bool,
    pub offset: u64,
    pub verified: bool,
    pub used: bool,
    pub active: bool,
}

impl InferenceRecord {
    pub fn is_resident(&self) -> bool {
        self.clause.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct DeletionRecord {
    clause: Option<Clause>,
    pub len: usize,
    pub hash: u64,
    pub offset: u64,
    /// Number of additions preceding this deletion.
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRef {
    Add(usize),
    Delete(usize),
}

#[derive(Debug)]
enum Source {
    File {
        path: PathBuf,
        reader: Option<BufReader<File>>,
    },
    Memory(Arc<[u8]>),
}

impl Source {
    fn read_line_at(&mut self, offset: u64) -> Result<Vec<u8>> {
        let mut line = Vec::new();
        match self {
            Source::File { path, reader } => {
                if reader.is_none() {
                    *reader = Some(BufReader::new(File::open(&*path)?));
                }
                let r = reader.as_mut().unwrap();
                r.seek(SeekFrom::Start(offset))?;
                r.read_until(b'\n', &mut line)?;
            }
            Source::Memory(bytes) => {
                let start = (offset as usize).min(bytes.len());
                let rest = &bytes[start..];
                let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
                line.extend_from_slice(&rest[..end]);
            }
        }
        Ok(line)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IoStats {
    pub evictions: u64,
    pub reloads: u64,
    pub reads: u64,
}

/// The ordered proof steps, truncated after the first empty clause.
#[derive(Debug)]
pub struct ProofDb {
    source: Source,
    steps: Vec<StepRef>,
    inferences: Vec<InferenceRecord>,
    deletions: Vec<DeletionRecord>,
    empty_at: Option<usize>,
    max_var: u32,
    resident_lits: usize,
    pub io: IoStats,
}

pub fn load_proof(path: impl AsRef<Path>, budget: Limit) -> Result<ProofDb> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    ProofDb::load(
        reader,
        Source::File {
            path: path.to_owned(),
            reader: None,
        },
        budget,
    )
}

pub fn load_proof_bytes(bytes: impl Into<Arc<[u8]>>, budget: Limit) -> Result<ProofDb> {
    let bytes: Arc<[u8]> = bytes.into();
    ProofDb::load(&bytes[..], Source::Memory(bytes.clone()), budget)
}

pub fn load_proof_str(text: &str, budget: Limit) -> Result<ProofDb> {
    load_proof_bytes(text.as_bytes().to_vec(), budget)
}

impl ProofDb {
    fn load<R: Read>(source: R, backing: Source, budget: Limit) -> Result<ProofDb> {
        let mut reader = BufReader::new(source);
        let mut db = ProofDb {
            source: backing,
            steps: Vec::new(),
            inferences: Vec::new(),
            deletions: Vec::new(),
            empty_at: None,
            max_var: 0,
            resident_lits: 0,
            io: IoStats::default(),
        };
        let mut offset = 0u64;
        let mut line = Vec::new();
        loop {
            line.clear();
            let n = reader.read_until(b'\n', &mut line)?;
            if n == 0 {
                break;
            }
            let at = offset;
            offset += n as u64;
            let Some(step) = parse_proof_line(&line, at)? else {
                continue;
            };
            db.max_var = db.max_var.max(step.clause.max_var());
            let len = step.clause.len();
            let keep = budget.admits(db.resident_lits + len);
            if keep {
                db.resident_lits += len;
            }
            let hash = clause_hash(&step.clause);
            match step.kind {
                StepKind::Add => {
                    let index = db.inferences.len();
                    db.steps.push(StepRef::Add(index));
                    db.inferences.push(InferenceRecord {
                        tautology: step.clause.is_tautology(),
                        clause: keep.then_some(step.clause),
                        pinned: keep,
                        len,
                        hash,
                        pivot: step.pivot,
                        offset: at,
                        verified: false,
                        used: false,
                        active: false,
                    });
                    if !keep {
                        db.io.evictions += 1;
                    }
                    if len == 0 {
                        db.empty_at = Some(index);
                        break;
                    }
                }
                StepKind::Delete => {
                    db.steps.push(StepRef::Delete(db.deletions.len()));
                    db.deletions.push(DeletionRecord {
                        clause: keep.then_some(step.clause),
                        len,
                        hash,
                        offset: at,
                        position: db.inferences.len(),
                    });
                }
            }
        }
        Ok(db)
    }

    pub fn steps(&self) -> &[StepRef] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.inferences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inferences.is_empty()
    }

    /// Zero-based index of the first empty clause added, if any.
    pub fn empty_at(&self) -> Option<usize> {
        self.empty_at
    }

    pub fn max_var(&self) -> u32 {
        self.max_var
    }

    pub fn record(&self, i: usize) -> &InferenceRecord {
        &self.inferences[i]
    }

    pub fn record_mut(&mut self, i: usize) -> &mut InferenceRecord {
        &mut self.inferences[i]
    }

    pub fn records(&self) -> &[InferenceRecord] {
        &self.inferences
    }

    pub fn deletions(&self) -> &[DeletionRecord] {
        &self.deletions
    }

    /// Literal slots currently held in memory.
    pub fn resident_literals(&self) -> usize {
        self.resident_lits
    }

    fn read_step(&mut self, offset: u64, kind: StepKind, len: usize, hash: u64) -> Result<ProofStep> {
        let line = self.source.read_line_at(offset)?;
        let integrity = |message: &str| Error::Integrity {
            offset,
            message: message.to_owned(),
        };
        let step = parse_proof_line(&line, offset)
            .map_err(|e| integrity(&e.to_string()))?
            .ok_or_else(|| integrity("is no longer a proof step"))?;
        if step.kind != kind || step.clause.len() != len || clause_hash(&step.clause) != hash {
            return Err(integrity("no longer matches the parsed clause"));
        }
        Ok(step)
    }

    /// The clause of inference `i`, read from the file without making it
    /// resident when it has been evicted.
    pub fn inference(&mut self, i: usize) -> Result<Cow<'_, Clause>> {
        if self.inferences[i].clause.is_some() {
            return Ok(Cow::Borrowed(self.inferences[i].clause.as_ref().unwrap()));
        }
        let r = &self.inferences[i];
        let (offset, len, hash) = (r.offset, r.len, r.hash);
        self.io.reads += 1;
        Ok(Cow::Owned(self.read_step(offset, StepKind::Add, len, hash)?.clause))
    }

    /// Brings an evicted inference back into memory.
    pub fn reload_inference(&mut self, i: usize) -> Result<&Clause> {
        if self.inferences[i].clause.is_none() {
            let r = &self.inferences[i];
            let (offset, len, hash) = (r.offset, r.len, r.hash);
            let step = self.read_step(offset, StepKind::Add, len, hash)?;
            self.io.reloads += 1;
            self.resident_lits += len;
            self.inferences[i].clause = Some(step.clause);
        }
        Ok(self.inferences[i].clause.as_ref().unwrap())
    }

    /// Drops the body of a reloaded inference. Bodies kept under the load
    /// budget stay.
    pub fn evict(&mut self, i: usize) {
        let r = &mut self.inferences[i];
        if !r.pinned && r.clause.take().is_some() {
            self.resident_lits -= r.len;
            self.io.evictions += 1;
        }
    }

    pub fn deletion(&mut self, d: usize) -> Result<Cow<'_, Clause>> {
        if self.deletions[d].clause.is_some() {
            return Ok(Cow::Borrowed(self.deletions[d].clause.as_ref().unwrap()));
        }
        let r = &self.deletions[d];
        let (offset, len, hash) = (r.offset, r.len, r.hash);
        self.io.reads += 1;
        Ok(Cow::Owned(self.read_step(offset, StepKind::Delete, len, hash)?.clause))
    }

    /// All steps with their clauses, in proof order.
    pub fn materialize(&mut self) -> Result<Vec<ProofStep>> {
        let mut out = Vec::with_capacity(self.steps.len());
        for k in 0..self.steps.len() {
            let step = match self.steps[k] {
                StepRef::Add(i) => ProofStep {
                    kind: StepKind::Add,
                    clause: self.inference(i)?.into_owned(),
                    pivot: self.inferences[i].pivot,
                    offset: self.inferences[i].offset,
                },
                StepRef::Delete(d) => ProofStep {
                    kind: StepKind::Delete,
                    clause: self.deletion(d)?.into_owned(),
                    pivot: None,
                    offset: self.deletions[d].offset,
                },
            };
            out.push(step);
        }
        Ok(out)
    }
}

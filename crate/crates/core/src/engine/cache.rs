//! Append-only JSON-lines store of computed numbers.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{NumberQuery, NumberResult, NumberValue};
use crate::error::{Error, Result};

pub const CACHE_SCHEMA: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

static WRITER: Mutex<()> = Mutex::new(());

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: u32,
    pub key: String,
    pub query: NumberQuery,
    pub result: NumberResult,
    pub engine_version: String,
    pub date: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CacheVerifyReport {
    pub records: usize,
    /// `(line, key, reason)` for each record that failed re-verification.
    pub failures: Vec<(usize, String, String)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GcReport {
    pub kept: usize,
    pub dropped_corrupt: usize,
    pub dropped_superseded: usize,
    pub backup: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
}

/// `a` is at least as tight as `b`.
fn tighter_or_equal(a: &NumberValue, b: &NumberValue) -> bool {
    match (a, b) {
        (NumberValue::Exact { .. }, _) => true,
        (NumberValue::Interval { .. }, NumberValue::Exact { .. }) => false,
        (NumberValue::Interval { lo: l1, hi: h1 }, NumberValue::Interval { lo: l2, hi: h2 }) => {
            l1 >= l2 && match (h1, h2) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x <= y,
            }
        }
    }
}

impl Cache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        Cache { path: path.as_ref().to_path_buf() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn raw_lines(&self) -> Result<Vec<String>> {
        match fs::read_to_string(&self.path) {
            Ok(s) => Ok(s.lines().map(str::to_string).collect()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(vec![]),
            Err(e) => Err(e.into()),
        }
    }

    fn parse_line(line_no: usize, line: &str) -> Result<CacheRecord> {
        let rec: CacheRecord =
            serde_json::from_str(line).map_err(|e| Error::CacheCorrupt { line: line_no, reason: e.to_string() })?;
        if rec.schema != CACHE_SCHEMA {
            return Err(Error::CacheCorrupt { line: line_no, reason: format!("unknown schema {}", rec.schema) });
        }
        if rec.key != rec.query.cache_key() {
            return Err(Error::CacheCorrupt { line: line_no, reason: "key does not match query".into() });
        }
        Ok(rec)
    }

    /// All records with their 1-based line numbers. Any malformed line is an
    /// error.
    pub fn list(&self) -> Result<Vec<(usize, CacheRecord)>> {
        let mut out = vec![];
        for (i, line) in self.raw_lines()?.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            out.push((i + 1, Self::parse_line(i + 1, line)?));
        }
        Ok(out)
    }

    /// Best stored result for a query: an exact value if one exists,
    /// otherwise the most recent (tightest) interval.
    pub fn lookup(&self, q: &NumberQuery) -> Result<Option<NumberResult>> {
        let key = q.cache_key();
        let mut best: Option<NumberResult> = None;
        for (_, rec) in self.list()? {
            if rec.key != key {
                continue;
            }
            let replace = match &best {
                None => true,
                Some(b) => b.value.exact().is_none() && tighter_or_equal(&rec.result.value, &b.value),
            };
            if replace {
                best = Some(rec.result);
            }
        }
        Ok(best)
    }

    /// Appends a result unless an equal or tighter one is stored. Returns
    /// whether a line was written.
    pub fn store(&self, q: &NumberQuery, r: &NumberResult) -> Result<bool> {
        let _guard = WRITER.lock().unwrap_or_else(|e| e.into_inner());
        let key = q.cache_key();
        if let Some(old) = self.lookup(q)? {
            match (old.value, r.value) {
                (NumberValue::Exact { value: a }, NumberValue::Exact { value: b }) if a != b => {
                    return Err(Error::CacheConflict { key, stored: a, new: b });
                }
                (old_v, new_v) if tighter_or_equal(&old_v, &new_v) => return Ok(false),
                _ => {}
            }
        }
        let rec = CacheRecord {
            schema: CACHE_SCHEMA,
            key,
            query: q.clone(),
            result: r.clone(),
            engine_version: ENGINE_VERSION.to_string(),
            date: chrono::Utc::now().to_rfc3339(),
        };
        let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(format!("{line}\n").as_bytes())?;
        Ok(true)
    }

    /// Re-verifies every stored witness against its query.
    pub fn verify(&self) -> Result<CacheVerifyReport> {
        let recs = self.list()?;
        let mut rep = CacheVerifyReport { records: recs.len(), failures: vec![] };
        for (line, rec) in recs {
            if let Err(reason) = check_record(&rec) {
                rep.failures.push((line, rec.key.clone(), reason));
            }
        }
        Ok(rep)
    }

    /// Rewrites the file keeping the best record per key and dropping
    /// malformed lines. The previous file is kept next to it with `.bak`.
    pub fn gc(&self) -> Result<GcReport> {
        let _guard = WRITER.lock().unwrap_or_else(|e| e.into_inner());
        let lines = self.raw_lines()?;
        let mut rep = GcReport::default();
        let mut best: BTreeMap<String, (usize, CacheRecord)> = BTreeMap::new();
        let mut total = 0;
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let Ok(rec) = Self::parse_line(i + 1, line) else {
                rep.dropped_corrupt += 1;
                continue;
            };
            total += 1;
            let replace = match best.get(&rec.key) {
                None => true,
                Some((_, b)) => b.result.value.exact().is_none() && tighter_or_equal(&rec.result.value, &b.result.value),
            };
            if replace {
                best.insert(rec.key.clone(), (i, rec));
            }
        }
        rep.kept = best.len();
        rep.dropped_superseded = total - best.len();
        if lines.is_empty() {
            return Ok(rep);
        }
        let mut backup = self.path.clone().into_os_string();
        backup.push(".bak");
        let backup = PathBuf::from(backup);
        fs::copy(&self.path, &backup)?;
        rep.backup = Some(backup);
        let mut keep: Vec<(usize, CacheRecord)> = best.into_values().collect();
        keep.sort_by_key(|(i, _)| *i);
        let mut out = String::new();
        for (_, rec) in keep {
            out.push_str(&serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?);
            out.push('\n');
        }
        fs::write(&self.path, out)?;
        Ok(rep)
    }
}

fn check_record(rec: &CacheRecord) -> std::result::Result<(), String> {
    rec.query.validate().map_err(|e| e.to_string())?;
    let r = &rec.result;
    match (&r.value, &r.witness) {
        (NumberValue::Exact { .. }, None) => {
            // sizes below 2 have only trivial witnesses
            if r.value.exact() > Some(1) {
                return Err("exact value stored without a witness".into());
            }
        }
        (NumberValue::Interval { lo, hi }, _) if hi.is_some_and(|h| h < *lo) => {
            return Err(format!("empty interval [{lo}, {}]", hi.unwrap_or(0)));
        }
        _ => {}
    }
    if let Some(w) = &r.witness {
        let size = rec.query.witness_size(w);
        if let NumberValue::Exact { value } = r.value {
            if size as u64 + 1 != value {
                return Err(format!("witness has size {size}, expected {}", value - 1));
            }
        }
        let (host, cons) = rec.query.instance(size);
        w.verify(&host, &cons)?;
    }
    Ok(())
}

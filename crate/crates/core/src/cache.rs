//! Write-once memo table for structure constants, optionally persisted as
//! one JSON record per line.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flaggeo::MatrixType;

pub const CACHE_FILE: &str = "constants.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    C,
    H,
    G,
    A,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub kind: ConstantKind,
    pub q: u64,
    pub n: usize,
    pub matrices: Vec<MatrixType>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    kind: ConstantKind,
    q: u64,
    n: usize,
    matrices: Vec<MatrixType>,
    value: u128,
}

#[derive(Default)]
pub struct ConstantCache {
    map: RwLock<HashMap<CacheKey, u128>>,
    sink: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl ConstantCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Open (creating if needed) `dir/constants.jsonl` and load its records.
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut map = HashMap::new();
        if path.exists() {
            load_records(BufReader::new(File::open(&path)?), &mut map)?;
        }
        let sink = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self {
            map: RwLock::new(map),
            sink: Some(Mutex::new(sink)),
            path: Some(path),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &CacheKey) -> Option<u128> {
        self.map.read().expect("cache lock").get(key).copied()
    }

    /// Insert a batch. Keys already present must carry the same value;
    /// only new keys are appended to the backing file.
    pub fn insert_all(&self, mut entries: Vec<(CacheKey, u128)>) -> Result<()> {
        entries.sort();
        let mut fresh = Vec::new();
        {
            let mut map = self.map.write().expect("cache lock");
            for (k, v) in entries {
                match map.get(&k) {
                    Some(&old) if old != v => {
                        return Err(Error::Mismatch(format!(
                            "cache already holds {old} for {:?}, refusing {v}",
                            k
                        )))
                    }
                    Some(_) => {}
                    None => {
                        map.insert(k.clone(), v);
                        fresh.push((k, v));
                    }
                }
            }
        }
        if let (Some(sink), false) = (&self.sink, fresh.is_empty()) {
            let mut buf = String::new();
            for (k, v) in fresh {
                let rec = Record {
                    kind: k.kind,
                    q: k.q,
                    n: k.n,
                    matrices: k.matrices,
                    value: v,
                };
                buf.push_str(&serde_json::to_string(&rec)?);
                buf.push('\n');
            }
            let mut f = sink.lock().expect("cache file lock");
            f.write_all(buf.as_bytes())?;
            f.flush()?;
        }
        Ok(())
    }
}

fn load_records(reader: impl BufRead, map: &mut HashMap<CacheKey, u128>) -> Result<()> {
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::CorruptCache {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if rec.matrices.iter().any(|m| m.n() != rec.n) {
            return Err(Error::CorruptCache {
                line: idx + 1,
                message: format!("matrix size does not match n = {}", rec.n),
            });
        }
        let key = CacheKey {
            kind: rec.kind,
            q: rec.q,
            n: rec.n,
            matrices: rec.matrices,
        };
        if let Some(old) = map.insert(key, rec.value) {
            if old != rec.value {
                return Err(Error::CorruptCache {
                    line: idx + 1,
                    message: format!("conflicting values {old} and {}", rec.value),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(v: u32) -> CacheKey {
        CacheKey {
            kind: ConstantKind::A,
            q: 2,
            n: 2,
            matrices: vec![MatrixType::cell(2, 1, 1, v)],
        }
    }

    #[test]
    fn write_once_semantics() {
        let c = ConstantCache::in_memory();
        c.insert_all(vec![(key(1), 1)]).unwrap();
        c.insert_all(vec![(key(1), 1)]).unwrap();
        assert!(c.insert_all(vec![(key(1), 2)]).is_err());
        assert_eq!(c.get(&key(1)), Some(1));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        {
            let c = ConstantCache::open(dir.path()).unwrap();
            c.insert_all(vec![(key(1), 1), (key(2), 2)]).unwrap();
        }
        let text = std::fs::read_to_string(dir.path().join(CACHE_FILE)).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(
            text.starts_with(r#"{"kind":"a","q":2,"n":2,"matrices":[[[1,0],[0,0]]],"value":1}"#)
        );
        let c = ConstantCache::open(dir.path()).unwrap();
        assert_eq!(c.get(&key(2)), Some(2));
    }

    #[test]
    fn corrupt_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let good = r#"{"kind":"a","q":2,"n":1,"matrices":[[[1]]],"value":1}"#;
        std::fs::write(dir.path().join(CACHE_FILE), format!("{good}\nnot json\n")).unwrap();
        match ConstantCache::open(dir.path()) {
            Err(Error::CorruptCache { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected corrupt cache error, got {:?}", other.map(|_| ())),
        }
    }
}

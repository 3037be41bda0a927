//! Content-addressed cache of computed reports.
//!
//! An entry is `<key>.json` holding the key, the SHA-256 of the compact
//! serialized report, and the report. The key hashes everything the result
//! depends on, including [`CODE_VERSION`], so stale entries are never read.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{JobError, CODE_VERSION};
use crate::diagram::{CableSpec, KnotDiagram};
use crate::khcomplex::{KhReport, RESOLUTION_LABELING};

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "COLOREDKH_CACHE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// The entry failed to parse or its hash did not match; it was recomputed.
    Corrupt(String),
}

/// The `--cache-dir` flag wins, then [`CACHE_ENV`]; otherwise no cache.
pub fn cache_dir_from(flag: Option<PathBuf>, env: Option<String>) -> Option<PathBuf> {
    flag.or_else(|| env.filter(|v| !v.is_empty()).map(PathBuf::from))
}

pub fn cache_key(name: &str, d: &KnotDiagram, n: usize, spec: &CableSpec, mirrored: bool) -> String {
    let pd: Vec<String> = d
        .crossings()
        .iter()
        .map(|c| format!("{},{},{},{}", c[0], c[1], c[2], c[3]))
        .collect();
    let material = format!(
        "version={CODE_VERSION}\nlabeling={RESOLUTION_LABELING}\nname={name}\npd={}\nmarked={}\nn={n}\npattern={}\nmirror={mirrored}\n",
        pd.join(";"),
        d.marked_edge(),
        spec.pattern_tag(),
    );
    hex::encode(Sha256::digest(material.as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    sha256: String,
    report: KhReport,
}

fn report_hash(r: &KhReport) -> String {
    let text = serde_json::to_string(r).expect("reports serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `Ok(None)` on a miss, `Err(reason)` on a corrupt entry.
    pub fn load(&self, key: &str) -> Result<Option<KhReport>, String> {
        let text = match std::fs::read_to_string(self.path(key)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let entry: Entry = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if entry.key != key {
            return Err(format!("entry is for key {}", entry.key));
        }
        if report_hash(&entry.report) != entry.sha256 {
            return Err("report hash mismatch".into());
        }
        Ok(Some(entry.report))
    }

    /// Writes through a temporary file so readers never see half an entry.
    pub fn store(&self, key: &str, report: &KhReport) -> Result<(), JobError> {
        let io = |source| JobError::Io {
            path: self.dir.display().to_string(),
            source,
        };
        std::fs::create_dir_all(&self.dir).map_err(io)?;
        let entry = Entry {
            key: key.into(),
            sha256: report_hash(report),
            report: report.clone(),
        };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, serde_json::to_string_pretty(&entry).expect("entries serialize")).map_err(io)?;
        std::fs::rename(&tmp, self.path(key)).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{compute, JobConfig, Subject};
    use super::*;

    #[test]
    fn precedence() {
        let flag = Some(PathBuf::from("a"));
        assert_eq!(cache_dir_from(flag.clone(), Some("b".into())), flag);
        assert_eq!(cache_dir_from(None, Some("b".into())), Some(PathBuf::from("b")));
        assert_eq!(cache_dir_from(None, Some(String::new())), None);
        assert_eq!(cache_dir_from(None, None), None);
    }

    #[test]
    fn key_depends_on_inputs() {
        let s = Subject::from_table("3_1").unwrap();
        let k = |n, m| cache_key("3_1", &s.diagram, n, &CableSpec::parallel(n), m);
        assert_ne!(k(1, false), k(2, false));
        assert_ne!(k(1, false), k(1, true));
        assert_ne!(
            k(2, false),
            cache_key("3_1", &s.diagram, 2, &CableSpec::alternating(2), false)
        );
        let moved = s.diagram.clone().with_marked_edge(3).unwrap();
        assert_ne!(k(1, false), cache_key("3_1", &moved, 1, &CableSpec::parallel(1), false));
        assert_eq!(k(1, false).len(), 64);
    }

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = JobConfig {
            cache: Some(Cache::new(dir.path())),
            ..JobConfig::default()
        };
        let s = Subject::from_table("3_1").unwrap();
        let (r1, st1) = compute(&s, 1, &cfg).unwrap();
        assert_eq!(st1, CacheStatus::Miss);
        let (r2, st2) = compute(&s, 1, &cfg).unwrap();
        assert_eq!((st2, &r2), (CacheStatus::Hit, &r1));

        let key = cache_key("3_1", &s.diagram, 1, &CableSpec::parallel(1), false);
        let path = cfg.cache.as_ref().unwrap().path(&key);
        let tampered = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"total_rank\": 3", "\"total_rank\": 1");
        std::fs::write(&path, tampered).unwrap();
        let (r3, st3) = compute(&s, 1, &cfg).unwrap();
        assert!(matches!(st3, CacheStatus::Corrupt(_)));
        assert_eq!(r3, r1);
        assert_eq!(compute(&s, 1, &cfg).unwrap().1, CacheStatus::Hit);
    }
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Catalog, CatalogError};
use crate::pimverify::{verify_ipp_with, VerificationReport, VerifyOptions, TIMEOUT};
use crate::rng::splitmix64;

fn default_minutes() -> f64 {
    5.0
}

/// One expected verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub group: String,
    pub subgroup: String,
    pub prime: u64,
    pub expect_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_dim: Option<u64>,
    #[serde(default = "default_minutes")]
    pub max_minutes: f64,
    #[serde(default)]
    pub tag: String,
}

impl ManifestEntry {
    /// Stable identifier; per-entry seeds are derived from it.
    pub fn id(&self) -> String {
        self.id.clone().unwrap_or_else(|| format!("{}/{}/{}", self.group, self.subgroup, self.prime))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

pub fn parse_manifest(text: &str) -> Result<Manifest, CatalogError> {
    let m: Manifest = serde_json::from_str(text).map_err(CatalogError::from_json)?;
    let mut ids = std::collections::HashSet::new();
    for e in &m.entries {
        let id = e.id();
        if e.expect_dim.is_some() && !e.expect_holds {
            return Err(CatalogError::Invalid { entry: id, message: "expect_dim requires expect_holds".into() });
        }
        if !(e.max_minutes > 0.0) {
            return Err(CatalogError::Invalid { entry: id, message: "max_minutes must be positive".into() });
        }
        if !ids.insert(id.clone()) {
            return Err(CatalogError::Invalid { entry: id, message: "duplicate manifest entry".into() });
        }
    }
    Ok(m)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest, CatalogError> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_manifest(&text)
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    pub parallel: usize,
    pub cache_dir: Option<PathBuf>,
    /// Where per-entry reports and the summary are written.
    pub out_dir: Option<PathBuf>,
    pub verify: VerifyOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 1, parallel: 0, cache_dir: None, out_dir: None, verify: VerifyOptions::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Mismatch,
    Timeout,
    Inconclusive,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub id: String,
    pub tag: String,
    pub group: String,
    pub subgroup: String,
    pub prime: u64,
    pub expect_holds: bool,
    pub expect_dim: Option<u64>,
    pub status: EntryStatus,
    pub report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: u64,
    pub cached: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub manifest: String,
    pub seed: u64,
    pub outcomes: Vec<EntryOutcome>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == EntryStatus::Pass)
    }

    /// Plain-text table of the entries.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:<10} {:>4} {:>8} {:>8} {:<9} {:>10}  {}",
            "group", "subgroup", "p", "exp_dim", "got_dim", "path", "time_ms", "status"
        );
        for o in &self.outcomes {
            let exp = match (o.expect_holds, o.expect_dim) {
                (true, Some(d)) => d.to_string(),
                (true, None) => "holds".into(),
                (false, _) => "fails".into(),
            };
            let (got, path) = match &o.report {
                Some(r) if r.inconclusive => ("?".to_string(), format!("{:?}", r.path).to_lowercase()),
                Some(r) => (
                    r.dim_phi1.map_or_else(|| "fails".to_string(), |d| d.to_string()),
                    format!("{:?}", r.path).to_lowercase(),
                ),
                None => ("-".into(), "-".into()),
            };
            let status = format!("{:?}", o.status).to_lowercase();
            let note = if o.cached { " (cached)" } else { "" };
            let _ = writeln!(
                s,
                "{:<10} {:<10} {:>4} {:>8} {:>8} {:<9} {:>10}  {status}{note}",
                o.group, o.subgroup, o.prime, exp, got, path, o.elapsed_ms
            );
            if let Some(m) = &o.message {
                let _ = writeln!(s, "    {m}");
            }
        }
        s
    }
}

/// Seed for one entry, independent of scheduling.
pub fn entry_seed(seed: u64, id: &str) -> u64 {
    let digest = Sha256::digest(id.as_bytes());
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    splitmix64(seed ^ u64::from_le_bytes(b))
}

fn cache_key(catalog: &Catalog, e: &ManifestEntry, seed: u64, opts: &VerifyOptions) -> String {
    let text = format!(
        "{}\0{}\0{}\0{}\0{}\0{}\0{}\0{}",
        catalog.hash(),
        e.group,
        e.subgroup,
        e.prime,
        seed,
        opts.shortcut,
        opts.max_dim,
        opts.meataxe_budget
    );
    hex::encode(Sha256::digest(text.as_bytes()))
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Write through a temporary file in the same directory and rename.
fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.{n}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Canonical serialization: timing zeroed so that reruns are byte-identical.
pub fn canonical_json(report: &VerificationReport) -> String {
    let mut r = report.clone();
    r.wall_time_ms = 0;
    let mut s = serde_json::to_string_pretty(&r).expect("reports serialize");
    s.push('\n');
    s
}

fn slug(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

fn status_of(e: &ManifestEntry, r: &VerificationReport) -> EntryStatus {
    if r.inconclusive {
        return if r.reason.as_deref() == Some(TIMEOUT) { EntryStatus::Timeout } else { EntryStatus::Inconclusive };
    }
    let dim_ok = e.expect_dim.is_none_or(|d| r.dim_phi1 == Some(d));
    if r.holds == e.expect_holds && dim_ok {
        EntryStatus::Pass
    } else {
        EntryStatus::Mismatch
    }
}

fn run_entry(catalog: &Catalog, e: &ManifestEntry, opts: &RunOptions) -> EntryOutcome {
    let id = e.id();
    let seed = entry_seed(opts.seed, &id);
    let start = Instant::now();
    let mut out = EntryOutcome {
        id,
        tag: e.tag.clone(),
        group: e.group.clone(),
        subgroup: e.subgroup.clone(),
        prime: e.prime,
        expect_holds: e.expect_holds,
        expect_dim: e.expect_dim,
        status: EntryStatus::Error,
        report: None,
        message: None,
        elapsed_ms: 0,
        cached: false,
    };
    let key = cache_key(catalog, e, seed, &opts.verify);
    let cache_path = opts.cache_dir.as_ref().map(|d| d.join(format!("{key}.json")));
    let cached: Option<VerificationReport> = cache_path
        .as_ref()
        .and_then(|p| fs::read_to_string(p).ok())
        .and_then(|s| serde_json::from_str(&s).ok());
    let report = match cached {
        Some(r) => {
            out.cached = true;
            Ok(r)
        }
        None => catalog.pair(&e.group, &e.subgroup).map_err(|err| err.to_string()).and_then(|(g, h)| {
            let mut vo = opts.verify.clone();
            vo.deadline = Some(Instant::now() + Duration::from_secs_f64(e.max_minutes * 60.0));
            verify_ipp_with(&g, &h, e.prime, seed, &vo).map_err(|err| err.to_string())
        }),
    };
    out.elapsed_ms = start.elapsed().as_millis() as u64;
    match report {
        Ok(r) => {
            out.status = status_of(e, &r);
            if let Some(p) = cache_path.filter(|_| !out.cached && r.reason.as_deref() != Some(TIMEOUT)) {
                if let Err(err) = write_atomic(&p, canonical_json(&r).as_bytes()) {
                    out.message = Some(format!("cache write failed: {err}"));
                }
            }
            out.report = Some(r);
        }
        Err(msg) => out.message = Some(msg),
    }
    out
}

/// Run every entry, collecting mismatches instead of stopping at the first.
pub fn run_manifest(manifest: &Manifest, catalog: &Catalog, opts: &RunOptions) -> Result<RunSummary, CatalogError> {
    for e in &manifest.entries {
        catalog.pair(&e.group, &e.subgroup)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallel)
        .build()
        .map_err(|err| CatalogError::Invalid { entry: manifest.name.clone(), message: err.to_string() })?;
    let outcomes: Vec<EntryOutcome> =
        pool.install(|| manifest.entries.par_iter().map(|e| run_entry(catalog, e, opts)).collect());
    let summary = RunSummary { manifest: manifest.name.clone(), seed: opts.seed, outcomes };
    if let Some(dir) = &opts.out_dir {
        let io = |source| CatalogError::Io { path: dir.display().to_string(), source };
        for o in &summary.outcomes {
            if let Some(r) = &o.report {
                write_atomic(&dir.join("reports").join(format!("{}.json", slug(&o.id))), canonical_json(r).as_bytes())
                    .map_err(io)?;
            }
        }
        let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
        write_atomic(&dir.join("summary.json"), json.as_bytes()).map_err(io)?;
        write_atomic(&dir.join("summary.txt"), summary.table().as_bytes()).map_err(io)?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_catalog;

    const SMALL: &str = r#"{"name": "small", "entries": [
        {"group": "A5", "subgroup": "D5", "prime": 3, "expect_holds": true, "expect_dim": 6, "tag": "t"},
        {"group": "A5", "subgroup": "C5", "prime": 3, "expect_holds": false, "tag": "t"},
        {"group": "A5", "subgroup": "C5", "prime": 2, "expect_holds": true, "expect_dim": 13, "tag": "t"}
    ]}"#;

    #[test]
    fn manifest_validation() {
        assert!(parse_manifest(SMALL).is_ok());
        let bad = r#"{"entries": [{"group": "A5", "subgroup": "D5", "prime": 3, "expect_holds": false, "expect_dim": 6}]}"#;
        assert!(parse_manifest(bad).is_err());
        let dup = r#"{"entries": [{"group": "A5", "subgroup": "D5", "prime": 3, "expect_holds": true},
                                  {"group": "A5", "subgroup": "D5", "prime": 3, "expect_holds": true}]}"#;
        assert!(parse_manifest(dup).is_err());
    }

    #[test]
    fn mismatches_are_collected() {
        let catalog = default_catalog().unwrap();
        let m = parse_manifest(SMALL).unwrap();
        let s = run_manifest(&m, &catalog, &RunOptions::default()).unwrap();
        let st: Vec<EntryStatus> = s.outcomes.iter().map(|o| o.status).collect();
        assert_eq!(st, [EntryStatus::Pass, EntryStatus::Pass, EntryStatus::Mismatch]);
        assert!(!s.all_passed());
        assert!(s.table().contains("mismatch"));
    }

    #[test]
    fn cache_and_reports_are_reproducible() {
        let catalog = default_catalog().unwrap();
        let m = parse_manifest(SMALL).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut opts = RunOptions { cache_dir: Some(dir.path().join("cache")), ..RunOptions::default() };
        opts.out_dir = Some(dir.path().join("a"));
        let first = run_manifest(&m, &catalog, &opts).unwrap();
        assert!(first.outcomes.iter().all(|o| !o.cached));
        opts.out_dir = Some(dir.path().join("b"));
        opts.parallel = 2;
        let second = run_manifest(&m, &catalog, &opts).unwrap();
        assert!(second.outcomes.iter().all(|o| o.cached));
        for o in &first.outcomes {
            let name = format!("{}.json", slug(&o.id));
            let a = fs::read(dir.path().join("a/reports").join(&name)).unwrap();
            let b = fs::read(dir.path().join("b/reports").join(&name)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unknown_names_fail_up_front() {
        let catalog = default_catalog().unwrap();
        let m = parse_manifest(r#"{"entries": [{"group": "A5", "subgroup": "Q8", "prime": 3, "expect_holds": true}]}"#).unwrap();
        assert!(matches!(run_manifest(&m, &catalog, &RunOptions::default()), Err(CatalogError::UnknownSubgroup { .. })));
    }

    #[test]
    fn entry_seeds_differ() {
        assert_ne!(entry_seed(1, "A5/D5/3"), entry_seed(1, "A5/C5/3"));
        assert_ne!(entry_seed(1, "A5/D5/3"), entry_seed(2, "A5/D5/3"));
    }
}

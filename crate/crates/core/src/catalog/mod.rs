//! Group catalogs, manifests of expected verdicts and report persistence.

mod manifest;

use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use manifest::{
    canonical_json, entry_seed, load_manifest, parse_manifest, run_manifest, EntryOutcome, EntryStatus, Manifest, ManifestEntry, RunOptions,
    RunSummary,
};

use crate::permgrp::{Bsgs, GenSet, PermError, Permutation};

/// Catalog shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../../data/groups.json");

/// Manifests shipped with the crate, by name.
pub const BUILTIN_MANIFESTS: [(&str, &str); 4] = [
    ("alternating", include_str!("../../data/manifests/alternating.json")),
    ("sporadic", include_str!("../../data/manifests/sporadic.json")),
    ("l2q", include_str!("../../data/manifests/l2q.json")),
    ("negative", include_str!("../../data/manifests/negative.json")),
];

pub fn builtin_manifest(name: &str) -> Option<Manifest> {
    BUILTIN_MANIFESTS.iter().find(|(n, _)| *n == name).map(|(_, t)| parse_manifest(t).expect("shipped manifests parse"))
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{entry}: {source}")]
    Perm { entry: String, source: PermError },
    #[error("{entry}: declared order {declared} but the generators give {computed}")]
    OrderMismatch { entry: String, declared: String, computed: String },
    #[error("{entry}: generator {index} of {subgroup} is not in the group")]
    NotMember { entry: String, subgroup: String, index: usize },
    #[error("{entry}: {message}")]
    Invalid { entry: String, message: String },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("group {group:?} has no subgroup {subgroup:?}")]
    UnknownSubgroup { group: String, subgroup: String },
}

impl CatalogError {
    pub(crate) fn from_json(e: serde_json::Error) -> CatalogError {
        CatalogError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// A permutation in a file: a cycle string with 1-based points, or a list of
/// 1-based images.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermText {
    Cycles(String),
    Images(Vec<u32>),
}

impl PermText {
    fn parse(&self, degree: usize) -> Result<Permutation, PermError> {
        match self {
            PermText::Cycles(s) => Permutation::parse_cycles(s, degree),
            PermText::Images(v) => {
                if v.len() != degree {
                    return Err(PermError::DegreeMismatch { expected: degree, got: v.len() });
                }
                Permutation::from_one_based(v)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawSubgroup {
    name: String,
    order: String,
    generators: Vec<PermText>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawGroup {
    name: String,
    degree: usize,
    order: String,
    #[serde(default)]
    provenance: String,
    generators: Vec<PermText>,
    #[serde(default)]
    subgroups: Vec<RawSubgroup>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawCatalog {
    groups: Vec<RawGroup>,
}

#[derive(Clone, Debug)]
pub struct SubgroupEntry {
    pub name: String,
    pub order: BigUint,
    pub gens: GenSet,
}

/// A validated group with its named subgroups.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub order: BigUint,
    pub provenance: String,
    pub gens: GenSet,
    pub subgroups: Vec<SubgroupEntry>,
}

impl CatalogEntry {
    pub fn subgroup(&self, name: &str) -> Result<&SubgroupEntry, CatalogError> {
        self.subgroups
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CatalogError::UnknownSubgroup { group: self.name.clone(), subgroup: name.to_string() })
    }
}

/// Every entry has passed the order and membership checks.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    hash: String,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// SHA-256 of the catalog text, in hex.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn group(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::UnknownGroup(name.to_string()))
    }

    /// Group and subgroup generating sets by name.
    pub fn pair(&self, group: &str, subgroup: &str) -> Result<(GenSet, GenSet), CatalogError> {
        let g = self.group(group)?;
        Ok((g.gens.clone(), g.subgroup(subgroup)?.gens.clone()))
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let subs: Vec<&str> = e.subgroups.iter().map(|s| s.name.as_str()).collect();
            writeln!(f, "{} (degree {}, order {}): {}", e.name, e.degree, e.order, subs.join(", "))?;
        }
        Ok(())
    }
}

/// Seed for the validation chains. Orders are exact for every seed.
const VALIDATION_SEED: u64 = 0x5eed;

fn parse_order(entry: &str, s: &str) -> Result<BigUint, CatalogError> {
    s.trim()
        .parse::<BigUint>()
        .map_err(|_| CatalogError::Invalid { entry: entry.to_string(), message: format!("bad order {s:?}") })
}

fn gens_of(entry: &str, name: &str, degree: usize, gens: &[PermText]) -> Result<GenSet, CatalogError> {
    let perm_err = |source| CatalogError::Perm { entry: entry.to_string(), source };
    let perms = gens.iter().map(|g| g.parse(degree)).collect::<Result<Vec<_>, _>>().map_err(perm_err)?;
    GenSet::new(name, degree, perms).map_err(perm_err)
}

fn check_order(entry: &str, declared: &BigUint, chain: &Bsgs) -> Result<(), CatalogError> {
    let computed = chain.order();
    if computed != *declared {
        return Err(CatalogError::OrderMismatch {
            entry: entry.to_string(),
            declared: declared.to_string(),
            computed: computed.to_string(),
        });
    }
    Ok(())
}

fn validate(raw: RawGroup) -> Result<CatalogEntry, CatalogError> {
    let name = raw.name.clone();
    let order = parse_order(&name, &raw.order)?;
    let gens = gens_of(&name, &name, raw.degree, &raw.generators)?;
    let chain = Bsgs::schreier_sims(&gens, VALIDATION_SEED);
    check_order(&name, &order, &chain)?;
    let mut subgroups: Vec<SubgroupEntry> = Vec::new();
    for s in raw.subgroups {
        let label = format!("{name}/{}", s.name);
        if subgroups.iter().any(|x| x.name == s.name) {
            return Err(CatalogError::Invalid { entry: label, message: "duplicate subgroup name".into() });
        }
        let sub_order = parse_order(&label, &s.order)?;
        let sub = gens_of(&label, &s.name, raw.degree, &s.generators)?;
        for (index, x) in sub.generators().iter().enumerate() {
            let member = chain.contains(x).map_err(|source| CatalogError::Perm { entry: label.clone(), source })?;
            if !member {
                return Err(CatalogError::NotMember { entry: name.clone(), subgroup: s.name.clone(), index });
            }
        }
        check_order(&label, &sub_order, &Bsgs::schreier_sims(&sub, VALIDATION_SEED))?;
        subgroups.push(SubgroupEntry { name: s.name, order: sub_order, gens: sub });
    }
    Ok(CatalogEntry { name, degree: raw.degree, order, provenance: raw.provenance, gens, subgroups })
}

/// Parse and validate a catalog. Fails on the first invalid entry.
pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let raw: RawCatalog = serde_json::from_str(text).map_err(CatalogError::from_json)?;
    let mut entries: Vec<CatalogEntry> = Vec::with_capacity(raw.groups.len());
    for g in raw.groups {
        if entries.iter().any(|e| e.name == g.name) {
            return Err(CatalogError::Invalid { entry: g.name, message: "duplicate group name".into() });
        }
        entries.push(validate(g)?);
    }
    Ok(Catalog { entries, hash: hex::encode(Sha256::digest(text.as_bytes())) })
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_catalog(&text)
}

pub fn default_catalog() -> Result<Catalog, CatalogError> {
    parse_catalog(DEFAULT_CATALOG)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5_catalog(order: &str, sub: &str) -> String {
        format!(
            r#"{{"groups": [{{"name": "A5", "degree": 5, "order": "{order}",
                "generators": ["(1 2 3 4 5)", [1, 2, 4, 5, 3]],
                "subgroups": [{{"name": "H", "order": "2", "generators": ["{sub}"]}}]}}]}}"#
        )
    }

    #[test]
    fn loads_with_both_notations() {
        let c = parse_catalog(&a5_catalog("60", "(1 2)(3 4)")).unwrap();
        let e = c.group("A5").unwrap();
        assert_eq!(e.order, BigUint::from(60u32));
        assert_eq!(e.gens.generators()[1], Permutation::parse_cycles("(3 4 5)", 5).unwrap());
        assert!(e.subgroup("H").is_ok());
        assert!(matches!(c.group("A6"), Err(CatalogError::UnknownGroup(_))));
    }

    #[test]
    fn wrong_order_is_rejected() {
        let err = parse_catalog(&a5_catalog("61", "(1 2)(3 4)")).unwrap_err();
        assert!(matches!(err, CatalogError::OrderMismatch { .. }), "{err}");
    }

    #[test]
    fn odd_subgroup_generator_is_rejected() {
        let err = parse_catalog(&a5_catalog("60", "(1 2)")).unwrap_err();
        assert!(matches!(err, CatalogError::NotMember { index: 0, .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_catalog("{\"groups\": [\n  {\"name\": 5}\n]}").unwrap_err();
        let CatalogError::Parse { line, column, .. } = err else { panic!("{err}") };
        assert_eq!(line, 2);
        assert!(column > 0);
    }

    #[test]
    fn hash_tracks_content() {
        let a = parse_catalog(&a5_catalog("60", "(1 2)(3 4)")).unwrap();
        let b = parse_catalog(&a5_catalog("60", "(1 3)(2 4)")).unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}

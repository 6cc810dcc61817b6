//! Permutation groups: elements, Schreier-Sims, coset actions and class
//! counting.

mod bsgs;
mod classes;
mod coset;
mod perm;

pub use bsgs::{BasicOrbit, Bsgs};
pub use classes::{is_p_prime_group, p_regular_class_count, MAX_ENUMERATED_ORDER};
pub use coset::{permutation_rank, CosetAction};
pub use perm::Permutation;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a bijection")]
    NotBijection,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("generator set is empty")]
    NoGenerators,
    #[error("{0} is not a subgroup: generator {1} is not in the parent group")]
    NotSubgroup(String, usize),
    #[error("unsupported size: {0}")]
    TooLarge(String),
}

/// A named generating set of permutations of a common degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSet {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
}

impl GenSet {
    pub fn new(name: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if generators.is_empty() {
            return Err(PermError::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch { expected: degree, got: g.degree() });
        }
        Ok(GenSet { name: name.into(), degree, generators })
    }

    /// Parse 1-based cycle strings.
    pub fn from_cycles(name: impl Into<String>, degree: usize, cycles: &[&str]) -> Result<Self, PermError> {
        let gens = cycles.iter().map(|s| Permutation::parse_cycles(s, degree)).collect::<Result<Vec<_>, _>>()?;
        GenSet::new(name, degree, gens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
    pub fn len(&self) -> usize {
        self.generators.len()
    }
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Direct product acting on the disjoint union of the two point sets;
    /// generators of `self` come first.
    pub fn direct_product(&self, other: &GenSet) -> GenSet {
        let total = self.degree + other.degree;
        let mut gens: Vec<Permutation> = self.generators.iter().map(|g| g.shifted(0, total)).collect();
        gens.extend(other.generators.iter().map(|g| g.shifted(self.degree, total)));
        GenSet { name: format!("{}x{}", self.name, other.name), degree: total, generators: gens }
    }
}

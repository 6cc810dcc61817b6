//! Deciding whether `k[G/H]` is the projective cover of the trivial module,
//! plus the independent oracle and side checks.
//!
//! `k[G/H]` is that projective cover exactly when `p` does not divide `|H|`
//! and no nontrivial composition factor of `k[G/H]` has nonzero `H`-fixed
//! points. The README explains why working over GF(p) alone suffices.

mod checks;
mod lie;
mod oracle;

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use checks::{l_bound_check, product_property_check, two_transitive_shortcut, ProductCheck};
pub use lie::{steinberg_margin, suzuki_multiplicity, Series, SteinbergMargin, SteinbergSpec, SuzukiMultiplicity};
pub use oracle::{end_ring_local_oracle, EndRingOracle, MAX_ORACLE_ELEMENTS};

use crate::gfmat::{is_prime, PrimeField};
use crate::modrep::{chop_with, fixed_space, induced_permutation_module, ChopOptions, FactorList, ModError};
use crate::permgrp::{permutation_rank, Bsgs, CosetAction, GenSet, PermError};
use crate::rng::splitmix64;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error("index {index} exceeds the dimension limit {limit}")]
    TooLarge { index: String, limit: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// One composition factor of `k[G/H]` as recorded in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRow {
    pub dim: usize,
    pub multiplicity: usize,
    pub is_trivial: bool,
    pub h_fixed_dim: usize,
}

/// Which route produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    Shortcut,
    Full,
}

/// Outcome of one `(G, H, p)` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: String,
    pub subgroup: String,
    pub prime: u64,
    pub group_order: u64,
    pub subgroup_order: u64,
    pub index: u64,
    pub p_prime_subgroup: bool,
    pub rank: usize,
    pub factors: Vec<FactorRow>,
    pub holds: bool,
    pub inconclusive: bool,
    pub dim_phi1: Option<u64>,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub path: Path,
    /// Set when the verdict did not come from the factor table:
    /// `NOT_P_PRIME`, `P_COPRIME_TO_GROUP`, `MEATAXE_BUDGET` or `TIMEOUT`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub const NOT_P_PRIME: &str = "NOT_P_PRIME";
pub const P_COPRIME_TO_GROUP: &str = "P_COPRIME_TO_GROUP";
pub const MEATAXE_BUDGET: &str = "MEATAXE_BUDGET";
pub const TIMEOUT: &str = "TIMEOUT";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Accept rank-2 actions without chopping.
    pub shortcut: bool,
    /// Refuse coset actions of larger index.
    pub max_dim: usize,
    pub meataxe_budget: usize,
    pub deadline: Option<Instant>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { shortcut: false, max_dim: 4096, meataxe_budget: 200, deadline: None }
    }
}

/// Stream labels for the independent random streams of one verification.
const STREAM_G: u64 = 1;
const STREAM_H: u64 = 2;
const STREAM_CHOP: u64 = 3;

pub(crate) fn stream(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label))
}

/// Groups, orders and the coset action shared by the checks.
pub struct Prepared {
    pub g: GenSet,
    pub h: GenSet,
    pub g_chain: Bsgs,
    pub h_chain: Bsgs,
    pub action: Arc<CosetAction>,
    pub rank: usize,
}

impl Prepared {
    pub fn new(g: &GenSet, h: &GenSet, seed: u64, max_dim: usize) -> Result<Prepared, VerifyError> {
        let g_chain = Bsgs::schreier_sims(g, stream(seed, STREAM_G));
        let h_chain = Bsgs::schreier_sims(h, stream(seed, STREAM_H));
        let action = match CosetAction::new(g, &g_chain, h, &h_chain, Some(max_dim)) {
            Ok(a) => Arc::new(a),
            Err(PermError::TooLarge(_)) => {
                return Err(VerifyError::TooLarge { index: (g_chain.order() / h_chain.order()).to_string(), limit: max_dim })
            }
            Err(e) => return Err(e.into()),
        };
        let rank = permutation_rank(&action, h);
        Ok(Prepared { g: g.clone(), h: h.clone(), g_chain, h_chain, action, rank })
    }

    pub fn group_order(&self) -> BigUint {
        self.g_chain.order()
    }
    pub fn subgroup_order(&self) -> BigUint {
        self.h_chain.order()
    }
    pub fn index(&self) -> usize {
        self.action.index()
    }
}

fn to_u64(x: &BigUint) -> Result<u64, VerifyError> {
    x.to_u64().ok_or_else(|| VerifyError::Unsupported(format!("order {x} does not fit in 64 bits")))
}

fn divides(p: u64, n: &BigUint) -> bool {
    (n % BigUint::from(p)).is_zero()
}

/// Decide the property for `(G, H, p)` with default options.
pub fn verify_ipp(g: &GenSet, h: &GenSet, p: u64, seed: u64) -> Result<VerificationReport, VerifyError> {
    verify_ipp_with(g, h, p, seed, &VerifyOptions::default())
}

pub fn verify_ipp_with(g: &GenSet, h: &GenSet, p: u64, seed: u64, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(VerifyError::NotPrime(p));
    }
    let start = Instant::now();
    let prep = Prepared::new(g, h, seed, opts.max_dim)?;
    let mut report = verify_prepared(&prep, p, seed, opts)?;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// As [`verify_ipp_with`] on an already prepared pair; `wall_time_ms` is left 0.
pub fn verify_prepared(prep: &Prepared, p: u64, seed: u64, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    verify_detailed(prep, p, seed, opts).map(|(r, _)| r)
}

/// As [`verify_prepared`], also returning the composition factors when the
/// module was chopped.
pub fn verify_detailed(
    prep: &Prepared,
    p: u64,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<(VerificationReport, Option<FactorList>), VerifyError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(VerifyError::NotPrime(p));
    }
    let go = prep.group_order();
    let ho = prep.subgroup_order();
    let index = prep.index() as u64;
    let p_prime = !divides(p, &ho);
    let mut report = VerificationReport {
        group: prep.g.name().to_string(),
        subgroup: prep.h.name().to_string(),
        prime: p,
        group_order: to_u64(&go)?,
        subgroup_order: to_u64(&ho)?,
        index,
        p_prime_subgroup: p_prime,
        rank: prep.rank,
        factors: Vec::new(),
        holds: false,
        inconclusive: false,
        dim_phi1: None,
        seed,
        wall_time_ms: 0,
        path: Path::Full,
        reason: None,
    };
    if !p_prime {
        report.reason = Some(NOT_P_PRIME.into());
        return Ok((report, None));
    }
    if !divides(p, &go) {
        // k[G/H] is semisimple and the projective cover of k is k itself
        report.reason = Some(P_COPRIME_TO_GROUP.into());
        report.holds = go == ho;
        report.dim_phi1 = report.holds.then_some(1);
        return Ok((report, None));
    }
    if opts.shortcut && two_transitive_decision(prep.rank, &go, &ho, p) == Some(true) {
        report.path = Path::Shortcut;
        report.holds = true;
        report.dim_phi1 = Some(index);
        return Ok((report, None));
    }
    let field = PrimeField::new(p).map_err(|_| VerifyError::NotPrime(p))?;
    let module = induced_permutation_module(prep.action.clone(), field);
    let chop_opts = ChopOptions { budget: opts.meataxe_budget, deadline: opts.deadline };
    let factors = match chop_with(&module, stream(seed, STREAM_CHOP), &chop_opts) {
        Ok(f) => f,
        Err(e @ (ModError::BudgetExceeded(_) | ModError::Timeout)) => {
            report.inconclusive = true;
            report.reason = Some(if matches!(e, ModError::Timeout) { TIMEOUT } else { MEATAXE_BUDGET }.into());
            return Ok((report, None));
        }
        Err(e) => return Err(e.into()),
    };
    let mut holds = true;
    for e in &factors.entries {
        let is_trivial = e.factor.is_trivial();
        let (h_fixed_dim, _) = fixed_space(&e.factor, prep.h.generators())?;
        if !is_trivial && h_fixed_dim > 0 {
            holds = false;
        }
        report.factors.push(FactorRow { dim: e.factor.dim(), multiplicity: e.multiplicity, is_trivial, h_fixed_dim });
    }
    report.holds = holds;
    report.dim_phi1 = holds.then_some(index);
    Ok((report, Some(factors)))
}

/// Rank 2 with `p` dividing `|G|` but not `|H|` forces the property.
pub(crate) fn two_transitive_decision(rank: usize, go: &BigUint, ho: &BigUint, p: u64) -> Option<bool> {
    (rank == 2 && divides(p, go) && !divides(p, ho)).then_some(true)
}

/// `|G|_p`, the order of a Sylow `p`-subgroup.
pub fn p_part(n: &BigUint, p: u64) -> BigUint {
    let pb = BigUint::from(p);
    let mut n = n.clone();
    let mut out = BigUint::one();
    while !n.is_zero() && (&n % &pb).is_zero() {
        n /= &pb;
        out *= &pb;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> GenSet {
        GenSet::from_cycles("A5", 5, &["(1 2 3 4 5)", "(3 4 5)"]).unwrap()
    }

    #[test]
    fn a5_d5_at_3() {
        let d5 = GenSet::from_cycles("D5", 5, &["(1 2 3 4 5)", "(2 5)(3 4)"]).unwrap();
        let r = verify_ipp(&a5(), &d5, 3, 42).unwrap();
        assert!(r.holds);
        assert_eq!(r.dim_phi1, Some(6));
        assert_eq!(r.rank, 2);
        assert_eq!(r.factors.iter().map(|f| f.dim * f.multiplicity).sum::<usize>(), 6);
    }

    #[test]
    fn a5_c5_at_3_fails() {
        let c5 = GenSet::from_cycles("C5", 5, &["(1 2 3 4 5)"]).unwrap();
        let r = verify_ipp(&a5(), &c5, 3, 1).unwrap();
        assert!(r.p_prime_subgroup);
        assert!(!r.holds);
        assert!(!r.inconclusive);
    }

    #[test]
    fn coprime_prime_needs_whole_group() {
        let r = verify_ipp(&a5(), &a5(), 7, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.dim_phi1, Some(1));
        let a4 = GenSet::from_cycles("A4", 5, &["(1 2 3)", "(2 3 4)"]).unwrap();
        assert!(!verify_ipp(&a5(), &a4, 7, 1).unwrap().holds);
    }

    #[test]
    fn p_dividing_subgroup_is_a_value_not_an_error() {
        let a4 = GenSet::from_cycles("A4", 5, &["(1 2 3)", "(2 3 4)"]).unwrap();
        let r = verify_ipp(&a5(), &a4, 2, 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.reason.as_deref(), Some(NOT_P_PRIME));
    }

    #[test]
    fn sylow_part() {
        assert_eq!(p_part(&BigUint::from(360u32), 2), BigUint::from(8u32));
        assert_eq!(p_part(&BigUint::from(360u32), 7), BigUint::one());
    }
}

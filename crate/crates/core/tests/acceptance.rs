//! One PASS/FAIL line per acceptance criterion. All comparisons are exact
//! integer equalities; the only tolerances are wall-clock budgets.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigUint;
use pimcheck::catalog::{default_catalog, Catalog};
use pimcheck::gfmat::{char_poly, left_nullspace, nullspace, rank, PrimeField};
use pimcheck::modrep::{chop, fixed_space, hom_space, FactorList};
use pimcheck::permgrp::{permutation_rank, Bsgs};
use pimcheck::pimverify::{
    end_ring_local_oracle, product_property_check, steinberg_margin, suzuki_multiplicity, verify_detailed, Prepared,
    Series, SteinbergSpec, VerificationReport, VerifyOptions, MAX_ORACLE_ELEMENTS,
};
use pimcheck::rng::XorShift64;

const SEED: u64 = 1;

struct Row {
    group: &'static str,
    subgroup: &'static str,
    p: u64,
    /// `Some(dim)` when the property is expected to hold.
    expect: Option<u64>,
    budget: Duration,
}

const fn row(group: &'static str, subgroup: &'static str, p: u64, expect: Option<u64>, minutes: u64) -> Row {
    Row { group, subgroup, p, expect, budget: Duration::from_secs(60 * minutes) }
}

const ALTERNATING: [Row; 10] = [
    row("A5", "A4", 5, Some(5), 1),
    row("A7", "A6", 7, Some(7), 1),
    row("A11", "A10", 11, Some(11), 1),
    row("A13", "A12", 13, Some(13), 1),
    row("A5", "C5", 2, Some(12), 1),
    row("A5", "D5", 3, Some(6), 1),
    row("A6", "C3^2", 2, Some(40), 1),
    row("A6", "3^2.4", 5, Some(10), 1),
    row("A7", "L3(2)", 5, Some(15), 1),
    row("A8", "2^3.L3(2)", 5, Some(15), 1),
];

const SPORADIC: [Row; 7] = [
    row("M11", "M10", 11, Some(11), 5),
    row("M22", "L3(4)", 11, Some(22), 5),
    row("M23", "M22", 23, Some(23), 5),
    row("HS", "U3(5).2", 11, Some(176), 5),
    row("Co3", "McL.2", 23, Some(276), 45),
    row("J2", "U3(3)", 5, Some(100), 5),
    row("He", "S4(4).2", 7, Some(2058), 45),
];

const PROP_L2: [Row; 5] = [
    row("L2(7)", "S4", 7, Some(7), 1),
    row("L2(11)", "A5", 11, Some(11), 1),
    row("L2(11)", "B", 3, Some(12), 1),
    row("L2(9)", "O^2(B)", 2, Some(40), 1),
    row("L2(8)", "C9", 2, Some(56), 1),
];

const NEGATIVE: [Row; 2] = [row("PGL2(7)", "S4", 7, None, 1), row("S7", "L3(2)", 5, None, 1)];

struct Run {
    row: &'static Row,
    prep: Prepared,
    report: VerificationReport,
    factors: Option<FactorList>,
    elapsed: Duration,
}

impl Run {
    fn ok(&self) -> bool {
        let r = &self.report;
        let verdict = match self.row.expect {
            Some(d) => r.holds && !r.inconclusive && r.dim_phi1 == Some(d) && r.index == d,
            None => !r.holds && !r.inconclusive,
        };
        verdict && self.elapsed <= self.row.budget
    }

    fn describe(&self) -> String {
        let got = if self.report.holds { self.report.index.to_string() } else { "fails".into() };
        format!("{}/{}/{}={} ({:.1}s)", self.row.group, self.row.subgroup, self.row.p, got, self.elapsed.as_secs_f64())
    }
}

fn run(cat: &Catalog, row: &'static Row) -> Run {
    let (g, h) = cat.pair(row.group, row.subgroup).unwrap();
    let start = Instant::now();
    let prep = Prepared::new(&g, &h, SEED, 4096).unwrap();
    let opts = VerifyOptions { deadline: Some(start + row.budget), ..VerifyOptions::default() };
    let (report, factors) = verify_detailed(&prep, row.p, SEED, &opts).unwrap();
    Run { row, prep, report, factors, elapsed: start.elapsed() }
}

struct Board {
    lines: Vec<String>,
    failed: usize,
}

impl Board {
    fn record(&mut self, n: usize, title: &str, ok: bool, detail: String) {
        let line = format!("[{}] {n}. {title}: {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        self.failed += usize::from(!ok);
    }
}

fn table_criterion(board: &mut Board, n: usize, title: &str, runs: &[Run]) {
    let ok = runs.iter().all(Run::ok);
    let bad: Vec<String> = runs.iter().filter(|r| !r.ok()).map(Run::describe).collect();
    let detail = if ok {
        runs.iter().map(Run::describe).collect::<Vec<_>>().join(", ")
    } else {
        format!("mismatch: {}", bad.join(", "))
    };
    board.record(n, title, ok, detail);
}

/// Margin exponent m for each type at a few ranks.
fn margin_table() -> Vec<(Series, Option<u32>, u32)> {
    let mut v = Vec::new();
    for n in 1..=8 {
        v.push((Series::A, Some(n), n));
    }
    for n in 2..=8 {
        v.push((Series::B, Some(n), 2 * (n - 1)));
        v.push((Series::C, Some(n), 2 * (n - 1)));
    }
    for n in 4..=8 {
        v.push((Series::D, Some(n), 2 * (n - 1)));
    }
    v.extend([
        (Series::G2, None, 3),
        (Series::D4Triality, None, 8),
        (Series::F4, None, 8),
        (Series::E6, None, 16),
        (Series::E6Twisted, None, 16),
        (Series::E7, None, 32),
        (Series::E8, None, 56),
    ]);
    v
}

fn kernel_suites(seeds: u64) -> Result<(), String> {
    let small = [
        (gens("A5", 5, &A5), gens("D5", 5, &["(1 2 3 4 5)", "(2 5)(3 4)"])),
        (gens("A5", 5, &A5), gens("A4", 5, &["(1 2 3)", "(2 3 4)"])),
        (gens("S4", 4, &["(1 2 3 4)", "(1 2)"]), gens("C3", 4, &["(1 2 3)"])),
        (gens("S4", 4, &["(1 2 3 4)", "(1 2)"]), gens("V4", 4, &["(1 2)(3 4)", "(1 3)(2 4)"])),
        (gens("S3", 3, &["(1 2 3)", "(1 2)"]), gens("1", 3, &["()"])),
    ];
    for seed in 0..seeds {
        let mut rng = XorShift64::new(seed);
        let p = [2u64, 3, 5, 7][rng.index(4)];
        let f = PrimeField::new(p).unwrap();
        let (r, c) = (1 + rng.index(10), 1 + rng.index(10));
        let m = random_matrix(&mut rng, f, r, c);
        if rank(&m) + nullspace(&m).rows() != c || rank(&m) + left_nullspace(&m).rows() != r {
            return Err(format!("rank-nullity, seed {seed}"));
        }
        let sq = random_matrix(&mut rng, f, r, r);
        if !char_poly(&sq).unwrap().eval_matrix(&sq).unwrap().is_zero() {
            return Err(format!("Cayley-Hamilton, seed {seed}"));
        }
        let (g, h) = &small[rng.index(small.len())];
        let q = [2u64, 3][rng.index(2)];
        let module = perm_module(g, h, q, seed);
        let a = chop(&module, seed).unwrap();
        let b = chop(&module, seed).unwrap();
        if a.dims() != b.dims() || a.entries.iter().zip(&b.entries).any(|(x, y)| x.factor != y.factor) {
            return Err(format!("chop determinism, seed {seed}"));
        }
        if a.dim_multiset() != brute_force_factor_dims(q as u32, module.dim(), &as_rows(&module)) {
            return Err(format!("chop against brute force, seed {seed}"));
        }
        let act = action(g, h, seed);
        let orbits = permutation_rank(&act, h);
        let helems = Bsgs::schreier_sims(h, seed).elements();
        let fixed: usize = helems.iter().map(|x| act.coset_perm(x).unwrap().fixed_points()).sum();
        let end = hom_space(&perm_module(g, h, 1_000_003, seed), &perm_module(g, h, 1_000_003, seed)).unwrap();
        if fixed != orbits * helems.len() || end != orbits {
            return Err(format!("Burnside rank, seed {seed}"));
        }
    }
    Ok(())
}

fn main() {
    let cat = default_catalog().unwrap();
    let mut board = Board { lines: Vec::new(), failed: 0 };

    let t1: Vec<Run> = ALTERNATING.iter().map(|r| run(&cat, r)).collect();
    table_criterion(&mut board, 1, "Alternating and small-degree pairs", &t1);
    let t2: Vec<Run> = SPORADIC.iter().map(|r| run(&cat, r)).collect();
    table_criterion(&mut board, 2, "Sporadic pairs", &t2);
    let l2: Vec<Run> = PROP_L2.iter().map(|r| run(&cat, r)).collect();
    table_criterion(&mut board, 3, "L2(q) instances", &l2);
    let neg: Vec<Run> = NEGATIVE.iter().map(|r| run(&cat, r)).collect();
    table_criterion(&mut board, 4, "Negative controls", &neg);

    let all: Vec<&Run> = t1.iter().chain(&t2).chain(&l2).chain(&neg).collect();

    // 5: Hom(Ind, S) against the H-fixed space of S
    let start = Instant::now();
    let (mut checked, mut agree) = (0usize, 0usize);
    let mut disagreements = Vec::new();
    for r in &all {
        let Some(factors) = &r.factors else { continue };
        let h = &r.prep.h;
        let ind = pimcheck::modrep::induced_permutation_module(r.prep.action.clone(), PrimeField::new(r.row.p).unwrap());
        for e in &factors.entries {
            let (fixed, _) = fixed_space(&e.factor, h.generators()).unwrap();
            let hom = hom_space(&ind, &e.factor).unwrap();
            checked += 1;
            if hom == fixed {
                agree += 1;
            } else {
                disagreements.push(format!("{} dim {}: hom {hom} vs fixed {fixed}", r.describe(), e.factor.dim()));
            }
        }
    }
    board.record(
        5,
        "Frobenius reciprocity",
        checked > 0 && agree == checked,
        format!("{agree}/{checked} factors agree ({:.1}s){}", start.elapsed().as_secs_f64(), disagreements.join("; ")),
    );

    // 6: endomorphism-ring oracle wherever p^r is in range
    let (mut compared, mut matched, mut skipped) = (0, 0, 0);
    for r in &all {
        if !r.report.p_prime_subgroup {
            continue;
        }
        let size = r.row.p.checked_pow(r.prep.rank as u32);
        if size.is_none_or(|s| s > MAX_ORACLE_ELEMENTS) {
            skipped += 1;
            continue;
        }
        let o = end_ring_local_oracle(&r.prep.action, &r.prep.h, r.row.p).unwrap();
        compared += 1;
        matched += usize::from(o.is_local == r.report.holds && o.rank == r.report.rank);
    }
    let extra = [("A5", "C5", 3u64), ("A5", "C5", 2)];
    for (g, h, p) in extra {
        let (gg, hh) = cat.pair(g, h).unwrap();
        let prep = Prepared::new(&gg, &hh, SEED, 4096).unwrap();
        let o = end_ring_local_oracle(&prep.action, &hh, p).unwrap();
        let report = pimcheck::pimverify::verify_prepared(&prep, p, SEED, &VerifyOptions::default()).unwrap();
        compared += 1;
        matched += usize::from(o.is_local == report.holds);
    }
    board.record(
        6,
        "End-ring oracle equivalence",
        compared > 0 && matched == compared,
        format!("{matched}/{compared} agree, {skipped} out of oracle range"),
    );

    // 7: direct products
    let (a5, d5) = cat.pair("A5", "D5").unwrap();
    let (l27, s4) = cat.pair("L2(7)", "S4").unwrap();
    let opts = VerifyOptions::default();
    let x = product_property_check(&a5, &d5, 3, &a5, &d5, SEED, &opts).unwrap();
    let y = product_property_check(&l27, &s4, 7, &l27, &s4, SEED, &opts).unwrap();
    let ok = x.passes && x.product.dim_phi1 == Some(36) && y.passes && y.product.dim_phi1 == Some(49);
    board.record(
        7,
        "Product suite",
        ok,
        format!("(A5,D5,3)^2 -> {:?}, (L2(7),S4,7)^2 -> {:?}", x.product.dim_phi1, y.product.dim_phi1),
    );

    // 8: margin exponents and the Suzuki identity
    let mut mismatched = Vec::new();
    let table = margin_table();
    for &(series, n, m) in &table {
        let spec = SteinbergSpec::new(series, n, 2).unwrap();
        if spec.margin_exponent() != m {
            mismatched.push(format!("{series}{}", spec.n));
        }
    }
    let e8 = steinberg_margin(&SteinbergSpec::new(Series::E8, None, 2).unwrap(), &(BigUint::from(1u32) << 56)).unwrap();
    let suz = suzuki_multiplicity(8).unwrap().value;
    board.record(
        8,
        "Steinberg margin table and Suzuki multiplicity",
        mismatched.is_empty() && e8.guaranteed_positive && suz == 4,
        format!("{} (type, rank) pairs, mismatches {mismatched:?}; E8 q=2 positive {}; Sz(8) multiplicity {suz}", table.len(), e8.guaranteed_positive),
    );

    // 9: kernel property suites
    let start = Instant::now();
    let res = kernel_suites(200);
    let elapsed = start.elapsed();
    board.record(
        9,
        "Kernel property suites",
        res.is_ok() && elapsed <= Duration::from_secs(120),
        format!("200 seeds in {:.1}s{}", elapsed.as_secs_f64(), res.err().map(|e| format!(", failed: {e}")).unwrap_or_default()),
    );

    println!("{} of {} criteria passed", board.lines.len() - board.failed, board.lines.len());
    if board.failed > 0 {
        std::process::exit(1);
    }
}

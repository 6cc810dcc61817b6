use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use pimcheck::catalog::{
    builtin_manifest, default_catalog, load_catalog, load_manifest, run_manifest, Catalog, RunOptions, RunSummary,
    BUILTIN_MANIFESTS,
};
use pimcheck::gfmat::PrimeField;
use pimcheck::modrep::{chop, fixed_space, induced_permutation_module};
use pimcheck::permgrp::{Bsgs, CosetAction};
use pimcheck::pimverify::{
    end_ring_local_oracle, steinberg_margin, suzuki_multiplicity, verify_ipp_with, Prepared, Series, SteinbergSpec,
    VerifyOptions,
};

#[derive(Parser)]
#[command(name = "pimcheck", version, about = "Check whether k[G/H] is the projective cover of the trivial module")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Also write the result as JSON to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Worker threads for manifest runs (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    parallel: usize,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Refuse coset actions of larger index.
    #[arg(long, global = true, default_value_t = 4096)]
    max_dim: usize,
    /// Catalog file; defaults to the built-in catalog.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Accept 2-transitive actions without chopping.
    #[arg(long, global = true)]
    shortcut: bool,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    group: String,
    #[arg(long)]
    subgroup: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the property for a group, subgroup and prime.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        prime: u64,
        /// Exit 1 unless the verdict matches.
        #[arg(long)]
        expect_holds: Option<bool>,
        #[arg(long)]
        expect_dim: Option<u64>,
    },
    /// Composition factors of the permutation module.
    Chop {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        prime: u64,
    },
    /// Number of H-orbits on the cosets of H.
    Rank {
        #[command(flatten)]
        pair: Pair,
    },
    /// Locality of the endomorphism ring by idempotent enumeration.
    EndringOracle {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        prime: u64,
    },
    /// Steinberg lower bound for a group of Lie type.
    SteinbergMargin {
        #[arg(long)]
        series: String,
        /// Rank; implied for the exceptional types.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        h_order: BigUint,
    },
    /// Multiplicity of the trivial character for Suzuki groups.
    SuzukiMult {
        #[arg(long)]
        q2: u64,
    },
    /// Run a manifest file or a built-in manifest by name.
    RunManifest {
        manifest: String,
        /// Directory for per-entry reports and the summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the small built-in manifests.
    Selftest,
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn emit<T: Serialize>(global: &Global, value: &T) -> Result<(), Failure> {
    if let Some(path) = &global.json {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        std::fs::write(path, s)?;
    }
    Ok(())
}

fn catalog(global: &Global) -> Result<Catalog, Failure> {
    Ok(match &global.catalog {
        Some(p) => load_catalog(p)?,
        None => default_catalog()?,
    })
}

fn options(global: &Global) -> VerifyOptions {
    VerifyOptions { shortcut: global.shortcut, max_dim: global.max_dim, ..VerifyOptions::default() }
}

#[derive(Serialize)]
struct FactorOut {
    dim: usize,
    multiplicity: usize,
    is_trivial: bool,
    h_fixed_dim: usize,
}

#[derive(Serialize)]
struct RankOut<'a> {
    group: &'a str,
    subgroup: &'a str,
    index: usize,
    rank: usize,
}

fn print_summary(s: &RunSummary) {
    print!("{}", s.table());
    let passed = s.outcomes.iter().filter(|o| o.status == pimcheck::catalog::EntryStatus::Pass).count();
    println!("{passed}/{} entries passed", s.outcomes.len());
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Verify { pair, prime, expect_holds, expect_dim } => {
            let cat = catalog(g)?;
            let (gg, hh) = cat.pair(&pair.group, &pair.subgroup)?;
            let r = verify_ipp_with(&gg, &hh, prime, g.seed, &options(g))?;
            println!(
                "{} / {} at p = {}: index {}, rank {}, {}",
                r.group,
                r.subgroup,
                r.prime,
                r.index,
                r.rank,
                if r.inconclusive {
                    format!("inconclusive ({})", r.reason.as_deref().unwrap_or("?"))
                } else if r.holds {
                    format!("holds, dim = {}", r.index)
                } else {
                    format!("does not hold{}", r.reason.as_deref().map(|x| format!(" ({x})")).unwrap_or_default())
                }
            );
            for f in &r.factors {
                println!(
                    "  factor dim {:>5} x{:<3} trivial={:<5} H-fixed {}",
                    f.dim, f.multiplicity, f.is_trivial, f.h_fixed_dim
                );
            }
            emit(g, &r)?;
            let mismatch = r.inconclusive
                || expect_holds.is_some_and(|e| e != r.holds)
                || expect_dim.is_some_and(|d| r.dim_phi1 != Some(d));
            if mismatch {
                return Err(Failure::Mismatch);
            }
        }
        Command::Chop { pair, prime } => {
            let cat = catalog(g)?;
            let (gg, hh) = cat.pair(&pair.group, &pair.subgroup)?;
            let prep = Prepared::new(&gg, &hh, g.seed, g.max_dim)?;
            let field = PrimeField::new(prime)?;
            let m = induced_permutation_module(prep.action.clone(), field);
            let factors = chop(&m, g.seed)?;
            let mut out = Vec::new();
            for e in &factors.entries {
                let (h_fixed_dim, _) = fixed_space(&e.factor, hh.generators())?;
                let f = FactorOut { dim: e.factor.dim(), multiplicity: e.multiplicity, is_trivial: e.factor.is_trivial(), h_fixed_dim };
                println!("dim {:>5} x{:<3} trivial={:<5} H-fixed {}", f.dim, f.multiplicity, f.is_trivial, f.h_fixed_dim);
                out.push(f);
            }
            emit(g, &out)?;
        }
        Command::Rank { pair } => {
            let cat = catalog(g)?;
            let (gg, hh) = cat.pair(&pair.group, &pair.subgroup)?;
            let prep = Prepared::new(&gg, &hh, g.seed, g.max_dim)?;
            println!("{}", prep.rank);
            emit(g, &RankOut { group: &pair.group, subgroup: &pair.subgroup, index: prep.index(), rank: prep.rank })?;
        }
        Command::EndringOracle { pair, prime } => {
            let cat = catalog(g)?;
            let (gg, hh) = cat.pair(&pair.group, &pair.subgroup)?;
            let gc = Bsgs::schreier_sims(&gg, g.seed);
            let hc = Bsgs::schreier_sims(&hh, g.seed.wrapping_add(1));
            let act = Arc::new(CosetAction::new(&gg, &gc, &hh, &hc, Some(g.max_dim))?);
            let o = end_ring_local_oracle(&act, &hh, prime)?;
            println!("rank {}, {} idempotents, local: {}", o.rank, o.idempotents, o.is_local);
            emit(g, &o)?;
        }
        Command::SteinbergMargin { series, n, q, h_order } => {
            let series: Series = series.parse()?;
            let spec = SteinbergSpec::new(series, n, q)?;
            let r = steinberg_margin(&spec, &h_order)?;
            println!(
                "{spec} over GF({}): N = {}, m = {}, lower bound {}, guaranteed_positive {}",
                r.q, r.positive_roots, r.m, r.lower_bound, r.guaranteed_positive
            );
            emit(g, &r)?;
        }
        Command::SuzukiMult { q2 } => {
            let r = suzuki_multiplicity(q2)?;
            println!("{}{}", r.value, if r.below_range { " (q^2 < 8: outside the Suzuki range)" } else { "" });
            emit(g, &r)?;
        }
        Command::RunManifest { manifest, out } => {
            let m = match builtin_manifest(&manifest) {
                Some(m) => m,
                None => load_manifest(&manifest)?,
            };
            let cat = catalog(g)?;
            let opts = RunOptions {
                seed: g.seed,
                parallel: g.parallel,
                cache_dir: g.cache_dir.clone(),
                out_dir: out,
                verify: options(g),
            };
            let s = run_manifest(&m, &cat, &opts)?;
            print_summary(&s);
            emit(g, &s)?;
            if !s.all_passed() {
                return Err(Failure::Mismatch);
            }
        }
        Command::Selftest => {
            let cat = catalog(g)?;
            let opts = RunOptions {
                seed: g.seed,
                parallel: g.parallel,
                cache_dir: g.cache_dir.clone(),
                out_dir: None,
                verify: options(g),
            };
            let mut ok = true;
            let mut all = Vec::new();
            for (name, _) in BUILTIN_MANIFESTS.iter().filter(|(n, _)| *n != "sporadic") {
                let s = run_manifest(&builtin_manifest(name).expect("built-in"), &cat, &opts)?;
                println!("{name}: {}", if s.all_passed() { "pass" } else { "FAIL" });
                ok &= s.all_passed();
                all.push(s);
            }
            let suz = suzuki_multiplicity(8)?.value == 4;
            println!("suzuki q^2 = 8: {}", if suz { "pass" } else { "FAIL" });
            ok &= suz;
            emit(g, &all)?;
            if !ok {
                for s in &all {
                    print_summary(s);
                }
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use pimcheck::gfmat::{GFMatrix, PrimeField};
use pimcheck::modrep::{induced_permutation_module, GModule};
use pimcheck::permgrp::{Bsgs, CosetAction, GenSet, Permutation};
use pimcheck::rng::XorShift64;

pub const A5: [&str; 2] = ["(1 2 3 4 5)", "(3 4 5)"];

pub fn gens(name: &str, degree: usize, cycles: &[&str]) -> GenSet {
    GenSet::from_cycles(name, degree, cycles).unwrap()
}

pub fn action(g: &GenSet, h: &GenSet, seed: u64) -> Arc<CosetAction> {
    let gc = Bsgs::schreier_sims(g, seed);
    let hc = Bsgs::schreier_sims(h, seed ^ 0xabc);
    Arc::new(CosetAction::new(g, &gc, h, &hc, None).unwrap())
}

pub fn perm_module(g: &GenSet, h: &GenSet, p: u64, seed: u64) -> GModule {
    induced_permutation_module(action(g, h, seed), PrimeField::new(p).unwrap())
}

/// Every element of `<gens>` by breadth-first closure.
pub fn closure(gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(gens[0].degree());
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for s in gens {
            let y = x.compose(s);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

pub fn random_perm(rng: &mut XorShift64, n: usize) -> Permutation {
    let mut v: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.index(i + 1));
    }
    Permutation::from_images(v).unwrap()
}

pub fn random_matrix(rng: &mut XorShift64, f: PrimeField, r: usize, c: usize) -> GFMatrix {
    GFMatrix::from_fn(f, r, c, |_, _| rng.below(f.p() as u64) as u32)
}

/// Plain row vectors over GF(p), independent of the library's linear algebra.
type Vector = Vec<u32>;

fn vec_mat(p: u32, v: &[u32], m: &[Vector]) -> Vector {
    let mut out = vec![0u32; m[0].len()];
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(&m[i]) {
                *o = (*o + c * x) % p;
            }
        }
    }
    out
}

fn inv_mod(p: u32, a: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).unwrap()
}

/// Reduced echelon basis with pivot columns.
struct Basis {
    p: u32,
    rows: Vec<(usize, Vector)>,
}

impl Basis {
    fn new(p: u32) -> Self {
        Basis { p, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vector) -> Vector {
        for (piv, r) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = (*x + (self.p - c) * y) % self.p;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vector) -> bool {
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(self.p, v[piv]);
        v.iter_mut().for_each(|x| *x = *x * inv % self.p);
        for (_, r) in self.rows.iter_mut() {
            let c = r[piv];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(&v) {
                    *x = (*x + (self.p - c) * y) % self.p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

fn spin_naive(p: u32, gens: &[Vec<Vector>], v: Vector) -> Basis {
    let mut b = Basis::new(p);
    let mut queue = vec![v];
    while let Some(w) = queue.pop() {
        if b.insert(w.clone()) {
            for g in gens {
                queue.push(vec_mat(p, &w, g));
            }
        }
    }
    b
}

/// Composition factor dimensions by exhaustive search: the smallest cyclic
/// submodule is simple; split it off and recurse on the quotient.
pub fn brute_force_factor_dims(p: u32, dim: usize, gens: &[Vec<Vector>]) -> Vec<usize> {
    if dim == 0 {
        return Vec::new();
    }
    let total = (p as u64).pow(dim as u32);
    let mut best: Option<Basis> = None;
    for idx in 1..total {
        let mut v = vec![0u32; dim];
        let mut x = idx;
        for slot in v.iter_mut() {
            *slot = (x % p as u64) as u32;
            x /= p as u64;
        }
        // scalar multiples span the same submodule
        if v.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let b = spin_naive(p, gens, v);
        if best.as_ref().is_none_or(|s| b.rows.len() < s.rows.len()) {
            let small = b.rows.len() == 1;
            best = Some(b);
            if small {
                break;
            }
        }
    }
    let sub = best.unwrap();
    let s = sub.rows.len();
    if s == dim {
        return vec![dim];
    }
    let pivots: HashSet<usize> = sub.rows.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let quotient: Vec<Vec<Vector>> = gens
        .iter()
        .map(|g| {
            free.iter()
                .map(|&q| {
                    let img = sub.reduce(g[q].clone());
                    free.iter().map(|&c| img[c]).collect()
                })
                .collect()
        })
        .collect();
    let mut out = vec![s];
    out.extend(brute_force_factor_dims(p, free.len(), &quotient));
    out.sort_unstable();
    out
}

pub fn as_rows(m: &GModule) -> Vec<Vec<Vector>> {
    m.gens().iter().map(|g| g.to_rows()).collect()
}

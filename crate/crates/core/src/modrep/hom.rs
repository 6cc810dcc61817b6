use std::collections::HashMap;

use super::{GModule, ModError};
use crate::gfmat::{left_nullspace, GFMatrix, LazyRow, SemiEchelon};

/// The early phase evaluates relations along tree paths, cheapest first,
/// until at most this many unknowns remain.
const EARLY_STOP_DIM: usize = 8;

enum Event {
    Seed { node: usize, seed: usize },
    Edge { from: usize, gen: usize, node: usize },
    Relation { from: usize, gen: usize, coeffs: Vec<(usize, u32)> },
}

/// A presentation of a module by spinning: nodes are basis vectors, each a
/// seed or a generator image of an earlier node; relations express the
/// remaining generator images in terms of nodes.
struct Presentation {
    events: Vec<Event>,
    parent: Vec<Option<(usize, usize)>>,
    seed_of: Vec<Option<usize>>,
    depth: Vec<usize>,
    seeds: usize,
}

fn present(a: &GModule) -> Presentation {
    let f = a.field();
    let d = a.dim();
    let mut ech = SemiEchelon::new(f, d);
    // combos[i]: echelon row i as a combination of nodes
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    let mut pres = Presentation { events: Vec::new(), parent: Vec::new(), seed_of: Vec::new(), depth: Vec::new(), seeds: 0 };

    // Reduce `w`; either insert it as node `vectors.len()` or return its
    // expression in terms of nodes.
    let absorb = |w: Vec<u32>,
                      ech: &mut SemiEchelon,
                      combos: &mut Vec<Vec<u32>>,
                      vectors: &mut Vec<Vec<u32>>|
     -> Result<usize, Vec<(usize, u32)>> {
        let mut lz = LazyRow::from_row(f, &w);
        let mut subs = Vec::new();
        ech.reduce_lazy_with(&mut lz, |i, c| subs.push((i, c)));
        let node = vectors.len();
        let mut combo = LazyRow::zeros(f, d);
        for &(i, c) in &subs {
            combo.add_scaled(c, &combos[i]);
        }
        match ech.insert_reduced(lz.into_reduced()) {
            Some((_, inv)) => {
                // row = inv * (w - sum c_i row_i) = inv * (node - sum c_i combo_i)
                let mut combo = combo.into_reduced();
                for x in combo.iter_mut() {
                    *x = f.mul(f.neg(*x), inv);
                }
                combo[node] = f.add(combo[node], inv);
                combos.push(combo);
                vectors.push(w);
                Ok(node)
            }
            None => {
                let combo = combo.into_reduced();
                Err(combo.iter().enumerate().filter(|(_, &c)| c != 0).map(|(l, &c)| (l, c)).collect())
            }
        }
    };

    let gens = a.gens();
    let mut next_seed = 0;
    while ech.rank() < d {
        while ech.is_pivot_col(next_seed) {
            next_seed += 1;
        }
        let mut e = vec![0u32; d];
        e[next_seed] = 1;
        let start = vectors.len();
        let node = absorb(e, &mut ech, &mut combos, &mut vectors).expect("a non-pivot unit vector is independent");
        pres.events.push(Event::Seed { node, seed: pres.seeds });
        pres.parent.push(None);
        pres.seed_of.push(Some(pres.seeds));
        pres.depth.push(0);
        pres.seeds += 1;
        let mut k = start;
        while k < vectors.len() {
            for (j, g) in gens.iter().enumerate() {
                let w = g.vec_mul(&vectors[k]);
                match absorb(w, &mut ech, &mut combos, &mut vectors) {
                    Ok(node) => {
                        pres.events.push(Event::Edge { from: k, gen: j, node });
                        pres.parent.push(Some((k, j)));
                        pres.seed_of.push(None);
                        pres.depth.push(pres.depth[k] + 1);
                    }
                    Err(coeffs) => pres.events.push(Event::Relation { from: k, gen: j, coeffs }),
                }
            }
            k += 1;
        }
    }
    pres
}

/// Images of the nodes under a candidate homomorphism, as matrices whose rows
/// are indexed by a basis of the remaining unknowns.
struct Unknowns<'a> {
    b: &'a GModule,
    /// Basis of allowed seed images, rows of length `seeds * dim b`.
    c: GFMatrix,
}

impl Unknowns<'_> {
    fn seed_block(&self, seed: usize) -> GFMatrix {
        let db = self.b.dim();
        let cols: Vec<usize> = (seed * db..(seed + 1) * db).collect();
        self.c.select_cols(&cols)
    }

    /// Impose `y * k == 0`; returns the transform applied to the unknowns.
    fn constrain(&mut self, k: &GFMatrix) -> Option<GFMatrix> {
        if k.is_zero() {
            return None;
        }
        let r = left_nullspace(k);
        self.c = r.mul_unchecked(&self.c);
        Some(r)
    }

    fn dim(&self) -> usize {
        self.c.rows()
    }
}

fn relation_matrix(img: GFMatrix, coeffs: &[(usize, u32)], q: &impl Fn(usize) -> GFMatrix) -> GFMatrix {
    let p = img.field().p();
    let mut k = img;
    for &(l, c) in coeffs {
        k.add_scaled_assign(p - c, &q(l)).expect("shapes agree");
    }
    k
}

/// Dimension of `Hom(a, b)`: matrices `T` with `a_i T = T b_i` for every
/// generator.
pub fn hom_space(a: &GModule, b: &GModule) -> Result<usize, ModError> {
    a.check_compatible(b)?;
    let f = a.field();
    let db = b.dim();
    let pres = present(a);
    let mut unk = Unknowns { b, c: GFMatrix::identity(f, pres.seeds * db) };

    // Early phase: cheapest relations evaluated along tree paths.
    let mut rels: Vec<(usize, usize, &Vec<(usize, u32)>, usize)> = pres
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Relation { from, gen, coeffs } => {
                let cost = pres.depth[*from] + 1 + coeffs.iter().map(|(l, _)| pres.depth[*l]).sum::<usize>();
                Some((*from, *gen, coeffs, cost))
            }
            _ => None,
        })
        .collect();
    rels.sort_by_key(|r| r.3);
    let mut memo: HashMap<usize, GFMatrix> = HashMap::new();
    for &(from, gen, coeffs, _) in &rels {
        if unk.dim() <= EARLY_STOP_DIM {
            break;
        }
        let mut q = |node: usize, unk: &Unknowns| -> GFMatrix { path_image(node, &pres, unk, &mut memo) };
        let img = q(from, &unk).mul_unchecked(&b.gens()[gen]);
        let parts: Vec<(usize, GFMatrix)> = coeffs.iter().map(|&(l, _)| (l, q(l, &unk))).collect();
        let lookup = |l: usize| parts.iter().find(|(x, _)| *x == l).unwrap().1.clone();
        let k = relation_matrix(img, coeffs, &lookup);
        if unk.constrain(&k).is_some() {
            if unk.dim() == 0 {
                return Ok(0);
            }
            memo.clear();
        }
    }

    // Full sweep in presentation order.
    let n = pres.parent.len();
    let mut q: Vec<Option<GFMatrix>> = vec![None; n];
    for ev in &pres.events {
        match ev {
            Event::Seed { node, seed } => q[*node] = Some(unk.seed_block(*seed)),
            Event::Edge { from, gen, node } => {
                q[*node] = Some(q[*from].as_ref().unwrap().mul_unchecked(&b.gens()[*gen]));
            }
            Event::Relation { from, gen, coeffs } => {
                let img = q[*from].as_ref().unwrap().mul_unchecked(&b.gens()[*gen]);
                let k = relation_matrix(img, coeffs, &|l| q[l].clone().unwrap());
                if let Some(r) = unk.constrain(&k) {
                    if unk.dim() == 0 {
                        return Ok(0);
                    }
                    for slot in q.iter_mut().flatten() {
                        *slot = r.mul_unchecked(slot);
                    }
                }
            }
        }
    }
    Ok(unk.dim())
}

fn path_image(node: usize, pres: &Presentation, unk: &Unknowns, memo: &mut HashMap<usize, GFMatrix>) -> GFMatrix {
    let mut chain = Vec::new();
    let mut x = node;
    let mut base = loop {
        if let Some(m) = memo.get(&x) {
            break m.clone();
        }
        match pres.parent[x] {
            Some((from, gen)) => {
                chain.push((x, gen));
                x = from;
            }
            None => {
                let m = unk.seed_block(pres.seed_of[x].unwrap());
                memo.insert(x, m.clone());
                break m;
            }
        }
    };
    for &(y, gen) in chain.iter().rev() {
        base = base.mul_unchecked(&unk.b.gens()[gen]);
        memo.insert(y, base.clone());
    }
    base
}

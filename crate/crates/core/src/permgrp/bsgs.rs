use num_bigint::BigUint;
use num_traits::One;

use super::{GenSet, PermError, Permutation};
use crate::rng::XorShift64;

/// One level of a stabiliser chain.
#[derive(Clone, Debug)]
pub struct BasicOrbit {
    pub base_point: usize,
    /// Indices into the strong generators fixing all earlier base points.
    pub gens: Vec<usize>,
    /// Orbit points in discovery order; `orbit[0] == base_point`.
    pub orbit: Vec<usize>,
    /// For each orbit point `b`, `u` with `base_point^u == b` and its inverse.
    transversal: Vec<Option<Box<(Permutation, Permutation)>>>,
}

impl BasicOrbit {
    pub fn len(&self) -> usize {
        self.orbit.len()
    }
    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }
    pub fn contains(&self, pt: usize) -> bool {
        self.transversal[pt].is_some()
    }
    /// Transversal element mapping the base point to `pt`.
    pub fn rep(&self, pt: usize) -> Option<&Permutation> {
        self.transversal[pt].as_ref().map(|b| &b.0)
    }
    pub fn rep_inverse(&self, pt: usize) -> Option<&Permutation> {
        self.transversal[pt].as_ref().map(|b| &b.1)
    }
}

/// Base and strong generating set.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<BasicOrbit>,
}

/// Settings of the randomised phase.
const RANDOM_SIFTS_TO_STOP: usize = 40;
const REPLACEMENT_POOL: usize = 10;
const REPLACEMENT_WARMUP: usize = 60;

impl Bsgs {
    /// Randomised Schreier-Sims followed by a deterministic pass that sifts
    /// every Schreier generator. The result is correct for every seed; the
    /// seed only affects speed and the choice of strong generators.
    pub fn schreier_sims(g: &GenSet, seed: u64) -> Bsgs {
        let degree = g.degree();
        let mut b = Bsgs { degree, strong: Vec::new(), levels: Vec::new() };
        let gens: Vec<Permutation> = g.generators().iter().filter(|x| !x.is_identity()).cloned().collect();
        if gens.is_empty() {
            return b;
        }
        for x in &gens {
            let (res, j) = b.sift(x, 0);
            if !res.is_identity() {
                b.add_strong(res, j);
            }
        }
        let mut rng = XorShift64::new(seed);
        let mut pool = ProductReplacement::new(&gens, &mut rng);
        let mut quiet = 0;
        while quiet < RANDOM_SIFTS_TO_STOP {
            let r = pool.next(&mut rng);
            let (res, j) = b.sift(&r, 0);
            if res.is_identity() {
                quiet += 1;
            } else {
                b.add_strong(res, j);
                quiet = 0;
            }
        }
        b.verify_schreier_generators();
        b
    }

    fn verify_schreier_generators(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            let mut found = None;
            'search: for oi in 0..self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[oi];
                for gi in 0..self.levels[lvl].gens.len() {
                    let s = &self.strong[self.levels[lvl].gens[gi]];
                    let gamma = s.image(beta);
                    let level = &self.levels[lvl];
                    let g = level.rep(beta).unwrap().compose(s).compose(level.rep_inverse(gamma).unwrap());
                    if g.is_identity() {
                        continue;
                    }
                    let (res, j) = self.sift(&g, lvl + 1);
                    if !res.is_identity() {
                        found = Some((res, j));
                        break 'search;
                    }
                }
            }
            match found {
                Some((res, j)) => {
                    self.add_strong(res, j);
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
    }

    /// Add `h` (which fixes the first `j` base points) and rebuild the
    /// affected levels.
    fn add_strong(&mut self, h: Permutation, j: usize) {
        if j == self.levels.len() {
            let moved = (0..self.degree).find(|&x| h.image(x) != x).expect("identity is never added");
            self.levels.push(BasicOrbit { base_point: moved, gens: Vec::new(), orbit: Vec::new(), transversal: Vec::new() });
        }
        self.strong.push(h);
        for lvl in 0..=j {
            self.rebuild_level(lvl);
        }
    }

    fn rebuild_level(&mut self, lvl: usize) {
        let fixed: Vec<usize> = self.levels[..lvl].iter().map(|l| l.base_point).collect();
        let gens: Vec<usize> =
            (0..self.strong.len()).filter(|&k| fixed.iter().all(|&b| self.strong[k].image(b) == b)).collect();
        let bp = self.levels[lvl].base_point;
        let mut transversal: Vec<Option<Box<(Permutation, Permutation)>>> = vec![None; self.degree];
        let id = Permutation::identity(self.degree);
        transversal[bp] = Some(Box::new((id.clone(), id)));
        let mut orbit = vec![bp];
        let mut head = 0;
        while head < orbit.len() {
            let beta = orbit[head];
            head += 1;
            for &k in &gens {
                let s = &self.strong[k];
                let gamma = s.image(beta);
                if transversal[gamma].is_none() {
                    let u = transversal[beta].as_ref().unwrap().0.compose(s);
                    let ui = u.inverse();
                    transversal[gamma] = Some(Box::new((u, ui)));
                    orbit.push(gamma);
                }
            }
        }
        let level = &mut self.levels[lvl];
        level.gens = gens;
        level.orbit = orbit;
        level.transversal = transversal;
    }

    /// Strip `g` through the chain starting at level `from`. Returns the
    /// residue and the level at which sifting stopped (`levels().len()` if it
    /// went all the way through).
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut g = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.base_point);
            match level.rep_inverse(beta) {
                Some(ui) => g = g.compose(ui),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }
    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }
    pub fn levels(&self) -> &[BasicOrbit] {
        &self.levels
    }

    /// Exact group order: the product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.len()))
    }

    pub fn contains(&self, x: &Permutation) -> Result<bool, PermError> {
        if x.degree() != self.degree {
            return Err(PermError::DegreeMismatch { expected: self.degree, got: x.degree() });
        }
        let (res, _) = self.sift(x, 0);
        Ok(res.is_identity())
    }

    /// Every group element, each exactly once. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        // g = u_k ... u_1 with u_i from level i; build from the bottom level up
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.len());
            for x in &out {
                for &pt in &level.orbit {
                    next.push(x.compose(level.rep(pt).unwrap()));
                }
            }
            out = next;
        }
        out
    }
}

/// Product-replacement random elements.
struct ProductReplacement {
    pool: Vec<Permutation>,
    acc: Permutation,
}

impl ProductReplacement {
    fn new(gens: &[Permutation], rng: &mut XorShift64) -> Self {
        let mut pool: Vec<Permutation> = gens.iter().cycle().take(REPLACEMENT_POOL.max(gens.len())).cloned().collect();
        if pool.is_empty() {
            pool.push(Permutation::identity(0));
        }
        let mut pr = ProductReplacement { acc: pool[0].clone(), pool };
        for _ in 0..REPLACEMENT_WARMUP {
            pr.next(rng);
        }
        pr
    }

    fn next(&mut self, rng: &mut XorShift64) -> Permutation {
        let n = self.pool.len();
        let i = rng.index(n);
        let mut j = rng.index(n);
        if n > 1 {
            while j == i {
                j = rng.index(n);
            }
        }
        let pj = if rng.below(2) == 0 { self.pool[j].clone() } else { self.pool[j].inverse() };
        self.pool[i] = if rng.below(2) == 0 { self.pool[i].compose(&pj) } else { pj.compose(&self.pool[i]) };
        self.acc = self.acc.compose(&self.pool[i]);
        self.acc.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(gens: &[&str], degree: usize) -> GenSet {
        GenSet::new("g", degree, gens.iter().map(|s| Permutation::parse_cycles(s, degree).unwrap()).collect()).unwrap()
    }

    #[test]
    fn a5_order() {
        let g = group(&["(1 2 3 4 5)", "(3 4 5)"], 5);
        let b = Bsgs::schreier_sims(&g, 1);
        assert_eq!(b.order(), BigUint::from(60u32));
        let odd = Permutation::parse_cycles("(1 2)", 5).unwrap();
        assert!(!b.contains(&odd).unwrap());
        for s in b.strong_generators() {
            assert!(b.contains(s).unwrap());
        }
    }

    #[test]
    fn trivial_and_cyclic() {
        let g = group(&["()"], 4);
        assert_eq!(Bsgs::schreier_sims(&g, 3).order(), BigUint::one());
        let g = group(&["(1 2)"], 4);
        assert_eq!(Bsgs::schreier_sims(&g, 3).order(), BigUint::from(2u32));
    }

    #[test]
    fn degree_mismatch_is_error() {
        let b = Bsgs::schreier_sims(&group(&["(1 2)"], 3), 1);
        assert!(b.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn elements_are_distinct_members() {
        let g = group(&["(1 2 3 4)", "(1 2)"], 4);
        let b = Bsgs::schreier_sims(&g, 9);
        let els = b.elements();
        assert_eq!(els.len(), 24);
        let set: std::collections::HashSet<_> = els.iter().collect();
        assert_eq!(set.len(), 24);
    }
}

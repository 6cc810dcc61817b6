use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Bsgs, GenSet, PermError, Permutation};

/// Action of `G` on the right cosets `H g`.
///
/// Cosets are identified by a canonical representative: the element of `H x`
/// whose images of `H`'s base points are lexicographically smallest. Points are
/// numbered in order of discovery by breadth-first search from `H` itself,
/// following `G`'s generators in order.
#[derive(Clone, Debug)]
pub struct CosetAction {
    degree: usize,
    h_chain: Bsgs,
    transversal: Vec<Permutation>,
    lookup: HashMap<Vec<u32>, usize>,
    gen_images: Vec<Permutation>,
}

impl CosetAction {
    /// Build the action. `max_index` refuses indices above the given bound
    /// before any enumeration happens.
    pub fn new(
        g: &GenSet,
        g_chain: &Bsgs,
        h: &GenSet,
        h_chain: &Bsgs,
        max_index: Option<usize>,
    ) -> Result<CosetAction, PermError> {
        if h.degree() != g.degree() {
            return Err(PermError::DegreeMismatch { expected: g.degree(), got: h.degree() });
        }
        for (i, x) in h.generators().iter().enumerate() {
            if !g_chain.contains(x)? {
                return Err(PermError::NotSubgroup(h.name().to_string(), i));
            }
        }
        let go = g_chain.order();
        let ho = h_chain.order();
        let index_big: BigUint = &go / &ho;
        let index = index_big.to_usize().filter(|&n| max_index.is_none_or(|m| n <= m)).ok_or_else(|| {
            PermError::TooLarge(format!("index {index_big} exceeds the limit of {}", max_index.unwrap_or(usize::MAX)))
        })?;
        let mut act = CosetAction {
            degree: g.degree(),
            h_chain: h_chain.clone(),
            transversal: Vec::with_capacity(index),
            lookup: HashMap::with_capacity(index),
            gen_images: Vec::new(),
        };
        let id = Permutation::identity(g.degree());
        act.lookup.insert(act.canonical(&id).images().to_vec(), 0);
        act.transversal.push(id);
        let ngens = g.generators().len();
        let mut tables = vec![vec![0u32; index]; ngens];
        let mut head = 0;
        while head < act.transversal.len() {
            for (k, s) in g.generators().iter().enumerate() {
                let y = act.transversal[head].compose(s);
                let key = act.canonical(&y).images().to_vec();
                let next = act.transversal.len();
                let pt = *act.lookup.entry(key).or_insert(next);
                if pt == next {
                    act.transversal.push(y);
                }
                tables[k][head] = pt as u32;
            }
            head += 1;
        }
        // |G|/|H| is exact, so a mismatch means the orbit of H was not closed
        assert_eq!(act.transversal.len(), index, "coset enumeration disagrees with |G|/|H|");
        act.gen_images = tables.into_iter().map(Permutation::from_images_unchecked).collect();
        Ok(act)
    }

    /// Canonical element of `H x`.
    fn canonical(&self, x: &Permutation) -> Permutation {
        let mut x = x.clone();
        for level in self.h_chain.levels() {
            let best = *level.orbit.iter().min_by_key(|&&b| x.image(b)).expect("orbits are nonempty");
            if best != level.base_point {
                x = level.rep(best).unwrap().compose(&x);
            }
        }
        x
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn transversal(&self) -> &[Permutation] {
        &self.transversal
    }
    pub fn subgroup_chain(&self) -> &Bsgs {
        &self.h_chain
    }

    /// Coset point containing `g`, or `None` if `g` is not in `G`.
    pub fn point_of(&self, g: &Permutation) -> Option<usize> {
        if g.degree() != self.degree {
            return None;
        }
        self.lookup.get(self.canonical(g).images()).copied()
    }

    /// Images of `G`'s generators on coset points, in generator order.
    pub fn generator_images(&self) -> &[Permutation] {
        &self.gen_images
    }

    /// Permutation of coset points induced by `g`.
    pub fn coset_perm(&self, g: &Permutation) -> Option<Permutation> {
        let images = self
            .transversal
            .iter()
            .map(|t| self.point_of(&t.compose(g)).map(|x| x as u32))
            .collect::<Option<Vec<u32>>>()?;
        Some(Permutation::from_images_unchecked(images))
    }
}

/// Number of orbits of `H` on the coset points.
pub fn permutation_rank(act: &CosetAction, h: &GenSet) -> usize {
    let perms: Vec<Permutation> = h.generators().iter().filter_map(|x| act.coset_perm(x)).collect();
    orbit_count(act.index(), &perms)
}

pub(crate) fn orbit_count(n: usize, perms: &[Permutation]) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for s in perms {
                let y = s.image(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

use num_traits::Zero;
use serde::Serialize;

use super::VerifyError;
use crate::gfmat::{is_prime, PrimeField};
use crate::permgrp::{CosetAction, GenSet, Permutation};

/// Largest algebra size `p^r` the oracle will enumerate.
pub const MAX_ORACLE_ELEMENTS: u64 = 1 << 20;

/// Outcome of the endomorphism-ring oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndRingOracle {
    pub rank: usize,
    pub idempotents: u64,
    pub is_local: bool,
}

/// Orbits of `H` on coset points: `orbit_of[x]` and a representative list.
/// Orbit 0 is `{0}`.
fn suborbits(act: &CosetAction, h: &GenSet) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = act.index();
    let perms: Vec<Permutation> = h.generators().iter().map(|x| act.coset_perm(x).expect("H is inside G")).collect();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for s in &perms {
                let y = s.image(x);
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        orbits.push(members);
    }
    (orbit_of, orbits)
}

/// Structure constants of the orbital algebra: `A_i A_j = sum_k c[i][j][k] A_k`
/// where `A_i` is the 0/1 matrix of the `G`-orbital through `(0, y)` for
/// `y` in suborbit `i`. Entries are reduced mod `p`.
fn structure_constants(act: &CosetAction, h: &GenSet, p: u64) -> Vec<Vec<Vec<u32>>> {
    let (orbit_of, orbits) = suborbits(act, h);
    let r = orbits.len();
    let t = act.transversal();
    let inv: Vec<Permutation> = t.iter().map(|x| x.inverse()).collect();
    let mut c = vec![vec![vec![0u64; r]; r]; r];
    for (k, ok) in orbits.iter().enumerate() {
        let z = ok[0];
        for (i, oi) in orbits.iter().enumerate() {
            for &y in oi {
                // (y, z) moved by t_y^-1 becomes (0, z t_y^-1)
                let w = act.point_of(&t[z].compose(&inv[y])).expect("transversal elements lie in G");
                c[i][orbit_of[w]][k] += 1;
            }
        }
    }
    c.into_iter()
        .map(|a| a.into_iter().map(|b| b.into_iter().map(|x| (x % p) as u32).collect()).collect())
        .collect()
}

/// Decide whether `End(k[G/H])` is local by counting its idempotents.
pub fn end_ring_local_oracle(act: &CosetAction, h: &GenSet, p: u64) -> Result<EndRingOracle, VerifyError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(VerifyError::NotPrime(p));
    }
    if (act.subgroup_chain().order() % p).is_zero() {
        return Err(VerifyError::Unsupported(format!("{} has order divisible by {p}", h.name())));
    }
    let f = PrimeField::new(p).map_err(|_| VerifyError::NotPrime(p))?;
    let (_, orbits) = suborbits(act, h);
    let r = orbits.len();
    let size = p.checked_pow(r as u32).filter(|&s| s <= MAX_ORACLE_ELEMENTS);
    let Some(size) = size else {
        return Err(VerifyError::Unsupported(format!("oracle unsupported at this size: {p}^{r} elements")));
    };
    let c = structure_constants(act, h, p);
    let mut x = vec![0u32; r];
    let mut sq = vec![0u32; r];
    let mut count = 0u64;
    for idx in 0..size {
        let mut v = idx;
        for slot in x.iter_mut() {
            *slot = (v % p) as u32;
            v /= p;
        }
        sq.iter_mut().for_each(|s| *s = 0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0 {
                    continue;
                }
                let w = f.mul(xi, xj);
                for (s, &cij) in sq.iter_mut().zip(&c[i][j]) {
                    if cij != 0 {
                        *s = f.add(*s, f.mul(w, cij));
                    }
                }
            }
        }
        if sq == x {
            count += 1;
        }
    }
    Ok(EndRingOracle { rank: r, idempotents: count, is_local: count == 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::Bsgs;

    fn action(g: &[&str], h: &[&str], n: usize) -> (CosetAction, GenSet) {
        let g = GenSet::from_cycles("G", n, g).unwrap();
        let h = GenSet::from_cycles("H", n, h).unwrap();
        let act = CosetAction::new(&g, &Bsgs::schreier_sims(&g, 1), &h, &Bsgs::schreier_sims(&h, 2), None).unwrap();
        (act, h)
    }

    const A5: [&str; 2] = ["(1 2 3 4 5)", "(3 4 5)"];

    #[test]
    fn identity_orbital_is_the_unit() {
        let (act, h) = action(&A5, &["(1 2 3 4 5)"], 5);
        let c = structure_constants(&act, &h, 1_000_003);
        let r = c.len();
        for i in 0..r {
            for k in 0..r {
                assert_eq!(c[0][i][k], (i == k) as u32);
                assert_eq!(c[i][0][k], (i == k) as u32);
            }
        }
    }

    #[test]
    fn a5_d5_at_3_is_local() {
        let (act, h) = action(&A5, &["(1 2 3 4 5)", "(2 5)(3 4)"], 5);
        let o = end_ring_local_oracle(&act, &h, 3).unwrap();
        assert_eq!(o.rank, 2);
        assert!(o.is_local);
    }

    #[test]
    fn a5_c5_at_3_has_nontrivial_idempotents() {
        let (act, h) = action(&A5, &["(1 2 3 4 5)"], 5);
        let o = end_ring_local_oracle(&act, &h, 3).unwrap();
        assert!(!o.is_local);
        assert!(o.idempotents > 2);
    }

    #[test]
    fn whole_group_is_local() {
        let (act, h) = action(&A5, &A5, 5);
        let o = end_ring_local_oracle(&act, &h, 2);
        assert!(o.is_err(), "2 divides |A5|");
        let o = end_ring_local_oracle(&act, &h, 7).unwrap();
        assert_eq!((o.rank, o.is_local), (1, true));
    }

    #[test]
    fn guard_refuses_large_algebras() {
        let (act, h) = action(&A5, &["()"], 5);
        assert!(matches!(end_ring_local_oracle(&act, &h, 7), Err(VerifyError::Unsupported(_))));
    }
}

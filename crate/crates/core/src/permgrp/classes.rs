use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Bsgs, GenSet, PermError, Permutation};

/// Largest group whose elements are enumerated for class counting.
pub const MAX_ENUMERATED_ORDER: usize = 1_000_000;

/// Number of conjugacy classes of elements of order prime to `p`.
pub fn p_regular_class_count(g: &GenSet, chain: &Bsgs, p: u64) -> Result<usize, PermError> {
    let order = chain.order();
    match order.to_usize() {
        Some(n) if n <= MAX_ENUMERATED_ORDER => {}
        _ => return Err(PermError::TooLarge(format!("class enumeration needs |G| <= {MAX_ENUMERATED_ORDER}, got {order}"))),
    }
    let elements = chain.elements();
    let index: HashMap<&[u32], usize> = elements.iter().enumerate().map(|(i, x)| (x.images(), i)).collect();
    let conj: Vec<(Permutation, Permutation)> =
        g.generators().iter().map(|s| (s.inverse(), s.clone())).collect();
    let mut class_of = vec![usize::MAX; elements.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..elements.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        class_of[start] = start;
        if is_p_regular(&elements[start], p) {
            count += 1;
        }
        stack.push(start);
        while let Some(i) = stack.pop() {
            for (si, s) in &conj {
                let y = si.compose(&elements[i]).compose(s);
                let j = index[y.images()];
                if class_of[j] == usize::MAX {
                    class_of[j] = start;
                    stack.push(j);
                }
            }
        }
    }
    Ok(count)
}

/// Element order is prime to `p` iff no cycle length is divisible by `p`.
fn is_p_regular(x: &Permutation, p: u64) -> bool {
    x.cycles().iter().all(|c| c.len() as u64 % p != 0)
}

/// Whether `p` does not divide the group order.
pub fn is_p_prime_group(chain: &Bsgs, p: u64) -> bool {
    !(chain.order() % BigUint::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a5_classes() {
        let g = GenSet::from_cycles("A5", 5, &["(1 2 3 4 5)", "(3 4 5)"]).unwrap();
        let b = Bsgs::schreier_sims(&g, 1);
        assert_eq!(p_regular_class_count(&g, &b, 3).unwrap(), 4);
        assert_eq!(p_regular_class_count(&g, &b, 7).unwrap(), 5);
        assert_eq!(p_regular_class_count(&g, &b, 2).unwrap(), 4);
        assert_eq!(p_regular_class_count(&g, &b, 5).unwrap(), 3);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = GenSet::from_cycles("1", 3, &["()"]).unwrap();
        let b = Bsgs::schreier_sims(&g, 1);
        assert_eq!(p_regular_class_count(&g, &b, 2).unwrap(), 1);
    }

    #[test]
    fn p_prime_subgroups() {
        let d5 = GenSet::from_cycles("D5", 5, &["(1 2 3 4 5)", "(2 5)(3 4)"]).unwrap();
        let b = Bsgs::schreier_sims(&d5, 1);
        assert!(is_p_prime_group(&b, 3));
        assert!(!is_p_prime_group(&b, 5));
    }

    #[test]
    fn size_guard() {
        let g = GenSet::from_cycles("S10", 10, &["(1 2 3 4 5 6 7 8 9 10)", "(1 2)"]).unwrap();
        let b = Bsgs::schreier_sims(&g, 1);
        assert!(matches!(p_regular_class_count(&g, &b, 2), Err(PermError::TooLarge(_))));
    }
}

use serde::Serialize;

use super::{two_transitive_decision, verify_ipp_with, Prepared, VerificationReport, VerifyError, VerifyOptions};
use crate::permgrp::{p_regular_class_count, GenSet};

/// `Some(true)` when the action is 2-transitive, `p` divides `|G|` and not
/// `|H|`; `None` otherwise.
pub fn two_transitive_shortcut(g: &GenSet, h: &GenSet, p: u64, seed: u64) -> Result<Option<bool>, VerifyError> {
    let prep = Prepared::new(g, h, seed, usize::MAX)?;
    Ok(two_transitive_decision(prep.rank, &prep.group_order(), &prep.subgroup_order(), p))
}

/// Number of `p`-regular classes of `G` and whether it is at most `|H|`.
pub fn l_bound_check(g: &GenSet, h: &GenSet, p: u64, seed: u64) -> Result<(usize, bool), VerifyError> {
    let prep = Prepared::new(g, h, seed, usize::MAX)?;
    let l = p_regular_class_count(g, &prep.g_chain, p)?;
    Ok((l, num_bigint::BigUint::from(l) <= prep.subgroup_order()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheck {
    pub left: VerificationReport,
    pub right: VerificationReport,
    pub product: VerificationReport,
    /// Product holds and its index is the product of the two indices.
    pub passes: bool,
}

/// Verify `G1 x G2` on disjoint points with `H1 x H2` and compare with the
/// two factors.
pub fn product_property_check(
    g1: &GenSet,
    h1: &GenSet,
    p: u64,
    g2: &GenSet,
    h2: &GenSet,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<ProductCheck, VerifyError> {
    let left = verify_ipp_with(g1, h1, p, seed, opts)?;
    let right = verify_ipp_with(g2, h2, p, seed.wrapping_add(1), opts)?;
    let g = g1.direct_product(g2);
    let h = h1.direct_product(h2);
    let product = verify_ipp_with(&g, &h, p, seed.wrapping_add(2), opts)?;
    let passes = left.holds && right.holds && product.holds && product.index == left.index * right.index;
    Ok(ProductCheck { left, right, product, passes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> GenSet {
        GenSet::from_cycles("A5", 5, &["(1 2 3 4 5)", "(3 4 5)"]).unwrap()
    }
    fn d5() -> GenSet {
        GenSet::from_cycles("D5", 5, &["(1 2 3 4 5)", "(2 5)(3 4)"]).unwrap()
    }

    #[test]
    fn shortcut_decisions() {
        assert_eq!(two_transitive_shortcut(&a5(), &d5(), 3, 1).unwrap(), Some(true));
        let c5 = GenSet::from_cycles("C5", 5, &["(1 2 3 4 5)"]).unwrap();
        assert_eq!(two_transitive_shortcut(&a5(), &c5, 2, 1).unwrap(), None);
        // 2 divides |D5|
        assert_eq!(two_transitive_shortcut(&a5(), &d5(), 2, 1).unwrap(), None);
    }

    #[test]
    fn class_bound() {
        assert_eq!(l_bound_check(&a5(), &d5(), 3, 1).unwrap(), (4, true));
        assert_eq!(l_bound_check(&a5(), &a5(), 7, 1).unwrap(), (5, true));
    }

    #[test]
    fn product_of_a5_d5_squares_the_dimension() {
        let r = product_property_check(&a5(), &d5(), 3, &a5(), &d5(), 5, &VerifyOptions::default()).unwrap();
        assert!(r.passes);
        assert_eq!(r.product.dim_phi1, Some(36));
    }

    #[test]
    fn trivial_factor_keeps_the_dimension() {
        let c2 = GenSet::from_cycles("C2", 2, &["(1 2)"]).unwrap();
        let r = product_property_check(&c2, &c2, 3, &a5(), &d5(), 5, &VerifyOptions::default()).unwrap();
        assert!(r.passes);
        assert_eq!(r.product.dim_phi1, Some(6));
    }
}

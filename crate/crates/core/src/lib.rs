//! Decide whether the permutation module of a finite group on a subgroup is
//! the projective cover of the trivial module in characteristic `p`.
//!
//! The crate is layered bottom-up:
//!
//! * [`gfmat`]: dense matrices and polynomials over GF(p);
//! * [`permgrp`]: permutation groups, Schreier-Sims, coset actions;
//! * [`modrep`]: modules given by matrices, the MeatAxe, homomorphism and
//!   fixed-point spaces;
//! * [`pimverify`]: the decision procedure and its side checks;
//! * [`catalog`]: group catalogs, manifests and report persistence used by
//!   the `pimcheck` binary.

pub mod catalog;
pub mod gfmat;
pub mod modrep;
pub mod permgrp;
pub mod pimverify;
pub mod rng;

pub use gfmat::{GFMatrix, GFPoly, PrimeField};
pub use modrep::{FactorList, GModule};
pub use permgrp::{Bsgs, CosetAction, GenSet, Permutation};
pub use pimverify::{verify_ipp, VerificationReport};

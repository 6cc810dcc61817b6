//! Modules over group algebras given by generator matrices, and the MeatAxe.
//!
//! Vectors are rows and group elements act on the right: `v -> v * g`.

mod hom;
mod iso;
mod meataxe;
mod spin;

use std::sync::Arc;

pub use hom::hom_space;
pub use iso::{iso, iso_with_certificate};
pub use meataxe::{chop, chop_with, is_irreducible, AlgebraElement, Certificate, ChopOptions, FactorEntry, FactorList, Split};
pub use spin::{spin, spin_echelon, SpinTranscript};

use crate::gfmat::{nullspace, rref, GFMatrix, GfError, PrimeField, SemiEchelon};
use crate::permgrp::{CosetAction, Permutation};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("meataxe budget exceeded after {0} random algebra elements")]
    BudgetExceeded(usize),
    #[error("deadline passed")]
    Timeout,
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("module has dimension zero")]
    ZeroDimension,
    #[error("group element is not in the acting group")]
    NotInGroup,
    #[error("this module has no permutation provenance; element action unavailable")]
    NoProvenance,
    #[error("generator {0} is not invertible")]
    Singular(usize),
}

/// How arbitrary group elements act on a module.
#[derive(Clone, Debug)]
enum Provenance {
    /// Only the generator matrices are known.
    None,
    /// Permutation module on coset points.
    Permutation(Arc<CosetAction>),
    /// `basis / kernel` inside a permutation module; `basis` rows are reduced
    /// modulo `kernel`.
    Subquotient { action: Arc<CosetAction>, basis: GFMatrix, kernel: Arc<SemiEchelon> },
}

/// A module given by one invertible matrix per group generator.
#[derive(Clone, Debug)]
pub struct GModule {
    field: PrimeField,
    dim: usize,
    gens: Vec<GFMatrix>,
    provenance: Provenance,
}

impl GModule {
    /// Module from explicit generator matrices; each must be square of the
    /// same size and invertible.
    pub fn new(field: PrimeField, gens: Vec<GFMatrix>) -> Result<GModule, ModError> {
        let dim = gens.first().map(|g| g.rows()).ok_or(ModError::ZeroDimension)?;
        if dim == 0 {
            return Err(ModError::ZeroDimension);
        }
        for (i, g) in gens.iter().enumerate() {
            if g.field() != field {
                return Err(GfError::FieldMismatch(field.p(), g.field().p()).into());
            }
            if g.rows() != dim || g.cols() != dim {
                return Err(GfError::DimensionMismatch { op: "module generator", left: (dim, dim), right: (g.rows(), g.cols()) }.into());
            }
            if crate::gfmat::rank(g) != dim {
                return Err(ModError::Singular(i));
            }
        }
        Ok(GModule { field, dim, gens, provenance: Provenance::None })
    }

    pub(crate) fn from_parts_unchecked(field: PrimeField, dim: usize, gens: Vec<GFMatrix>) -> GModule {
        GModule { field, dim, gens, provenance: Provenance::None }
    }

    /// The trivial one-dimensional module for a group with `ngens` generators.
    pub fn trivial(field: PrimeField, ngens: usize) -> GModule {
        GModule::from_parts_unchecked(field, 1, vec![GFMatrix::identity(field, 1); ngens])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gens(&self) -> &[GFMatrix] {
        &self.gens
    }
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Dimension one with every generator acting as 1.
    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.gens.iter().all(|g| g.get(0, 0) == 1)
    }

    /// Whether [`GModule::act_of_element`] is available.
    pub fn has_element_action(&self) -> bool {
        !matches!(self.provenance, Provenance::None)
    }

    /// Matrix of an arbitrary element of the acting group.
    pub fn act_of_element(&self, g: &Permutation) -> Result<GFMatrix, ModError> {
        Ok(self.act_of_elements(std::slice::from_ref(g))?.pop().unwrap())
    }

    /// Matrices of several elements, sharing the set-up cost.
    pub fn act_of_elements(&self, elements: &[Permutation]) -> Result<Vec<GFMatrix>, ModError> {
        match &self.provenance {
            Provenance::None => Err(ModError::NoProvenance),
            Provenance::Permutation(act) => elements
                .iter()
                .map(|g| {
                    let pi = act.coset_perm(g).ok_or(ModError::NotInGroup)?;
                    Ok(GFMatrix::permutation(self.field, pi.images()))
                })
                .collect(),
            Provenance::Subquotient { action, basis, kernel } => {
                let solver = rref(basis);
                let pivots = &solver.pivot_cols;
                elements
                    .iter()
                    .map(|g| {
                        let pi = action.coset_perm(g).ok_or(ModError::NotInGroup)?;
                        let moved = basis.permute_cols(pi.images());
                        let mut coords = GFMatrix::zeros(self.field, self.dim, self.dim);
                        for i in 0..self.dim {
                            let v = kernel.reduce(moved.row(i));
                            for (k, &pc) in pivots.iter().enumerate() {
                                coords.set(i, k, v[pc]);
                            }
                        }
                        // coords holds v restricted to pivots, i.e. v = coords * R = coords * T * basis
                        Ok(coords.mul(&solver.transform)?)
                    })
                    .collect()
            }
        }
    }

    /// Direct sum; generator lists must align.
    pub fn direct_sum(&self, other: &GModule) -> Result<GModule, ModError> {
        self.check_compatible(other)?;
        let n = self.dim + other.dim;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                GFMatrix::from_fn(self.field, n, n, |i, j| match (i < self.dim, j < self.dim) {
                    (true, true) => a.get(i, j),
                    (false, false) => b.get(i - self.dim, j - self.dim),
                    _ => 0,
                })
            })
            .collect();
        Ok(GModule::from_parts_unchecked(self.field, n, gens))
    }

    /// Dual module: `g -> (g^-1)^T`.
    pub fn dual(&self) -> GModule {
        let gens = self.gens.iter().map(|g| crate::gfmat::inverse(g).expect("generators are invertible").transpose()).collect();
        GModule::from_parts_unchecked(self.field, self.dim, gens)
    }

    fn check_compatible(&self, other: &GModule) -> Result<(), ModError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.p(), other.field.p()).into());
        }
        if self.gens.len() != other.gens.len() {
            return Err(ModError::GeneratorMismatch(self.gens.len(), other.gens.len()));
        }
        Ok(())
    }

    /// Submodule spanned by the rows of `sub` (RREF with the given pivots),
    /// and the quotient by it, with generator matrices in the induced bases.
    pub(crate) fn split_by(&self, sub: &GFMatrix, pivots: &[usize]) -> (GModule, GModule, Vec<usize>) {
        let f = self.field;
        let d = self.dim;
        let s = sub.rows();
        let mut is_piv = vec![false; d];
        for &c in pivots {
            is_piv[c] = true;
        }
        let free: Vec<usize> = (0..d).filter(|&j| !is_piv[j]).collect();
        let mut sub_gens = Vec::with_capacity(self.gens.len());
        let mut quo_gens = Vec::with_capacity(self.gens.len());
        let p = f.p();
        for g in &self.gens {
            let img = sub.mul_unchecked(g);
            sub_gens.push(img.select_cols(pivots));
            let mut q = GFMatrix::zeros(f, d - s, d - s);
            for (qi, &row) in free.iter().enumerate() {
                let mut v = crate::gfmat::LazyRow::from_row(f, g.row(row));
                for (k, &pc) in pivots.iter().enumerate() {
                    let c = v.get(pc);
                    if c != 0 {
                        v.add_scaled(p - c, sub.row(k));
                    }
                }
                let v = v.into_reduced();
                for (qj, &col) in free.iter().enumerate() {
                    q.set(qi, qj, v[col]);
                }
            }
            quo_gens.push(q);
        }
        (GModule::from_parts_unchecked(f, s, sub_gens), GModule::from_parts_unchecked(f, d - s, quo_gens), free)
    }

    pub(crate) fn with_subquotient(mut self, action: Arc<CosetAction>, basis: GFMatrix, kernel: Arc<SemiEchelon>) -> GModule {
        self.provenance = Provenance::Subquotient { action, basis, kernel };
        self
    }

    pub(crate) fn permutation_action(&self) -> Option<&Arc<CosetAction>> {
        match &self.provenance {
            Provenance::Permutation(a) | Provenance::Subquotient { action: a, .. } => Some(a),
            Provenance::None => None,
        }
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &GModule) -> bool {
        self.field == other.field && self.dim == other.dim && self.gens == other.gens
    }
}

/// The permutation module `k[G/H]` over GF(p), with generator matrices for
/// the generators of `G` and element action for all of `G`.
pub fn induced_permutation_module(act: Arc<CosetAction>, field: PrimeField) -> GModule {
    let gens = act.generator_images().iter().map(|pi| GFMatrix::permutation(field, pi.images())).collect();
    GModule { field, dim: act.index(), gens, provenance: Provenance::Permutation(act) }
}

/// A subquotient `W / W'` of a parent module, in the parent's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientBasis {
    /// RREF basis of `W`.
    pub sub_basis: GFMatrix,
    /// RREF basis of `W'`, if nonzero.
    pub quot_of: Option<GFMatrix>,
}

/// Common fixed space of the given matrices: `{ v : v * a = v }`.
pub fn fixed_space_of_matrices(field: PrimeField, dim: usize, mats: &[GFMatrix]) -> Result<GFMatrix, ModError> {
    if mats.is_empty() {
        return Ok(GFMatrix::identity(field, dim));
    }
    let mut stacked: Option<GFMatrix> = None;
    for a in mats {
        let t = a.add_identity_scaled(field.p() - 1)?.transpose();
        stacked = Some(match stacked {
            None => t,
            Some(s) => s.vstack(&t)?,
        });
    }
    Ok(nullspace(&stacked.unwrap()))
}

/// Fixed space of the given group elements on `m`.
pub fn fixed_space(m: &GModule, elements: &[Permutation]) -> Result<(usize, GFMatrix), ModError> {
    let mats = m.act_of_elements(elements)?;
    let basis = fixed_space_of_matrices(m.field, m.dim, &mats)?;
    Ok((basis.rows(), basis))
}

/// Tensor product with generator matrices `a_i (x) b_i`.
pub fn tensor_product(a: &GModule, b: &GModule) -> Result<GModule, ModError> {
    a.check_compatible(b)?;
    let gens = a.gens.iter().zip(&b.gens).map(|(x, y)| x.kron(y)).collect::<Result<Vec<_>, _>>()?;
    Ok(GModule::from_parts_unchecked(a.field, a.dim * b.dim, gens))
}

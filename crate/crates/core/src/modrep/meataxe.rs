use std::sync::Arc;
use std::time::Instant;

use super::iso::iso_with_certificate;
use super::spin::spin_echelon;
use super::{GModule, ModError, SubquotientBasis};
use crate::gfmat::{char_poly, left_nullspace, low_degree_factors, nullspace, GFMatrix, GFPoly, SemiEchelon};
use crate::rng::XorShift64;

const MAX_WORD_LEN: usize = 6;
const POOL_SIZE: usize = 12;
const TERMS: usize = 3;
const FACTORS_PER_ELEMENT: usize = 3;
/// Above this dimension only factors of degree at most `LARGE_DIM_MAX_DEGREE`
/// of the characteristic polynomial are extracted.
const SMALL_DIM: usize = 256;
const LARGE_DIM_MAX_DEGREE: usize = 16;

/// A linear combination of words in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub terms: Vec<(u32, Vec<usize>)>,
}

impl AlgebraElement {
    /// Matrix of the element under the given generator matrices.
    pub fn evaluate(&self, gens: &[GFMatrix]) -> GFMatrix {
        let f = gens[0].field();
        let d = gens[0].rows();
        let mut out = GFMatrix::zeros(f, d, d);
        for (c, word) in &self.terms {
            let w = word_matrix(gens, word);
            out.add_scaled_assign(*c, &w).expect("shapes agree");
        }
        out
    }
}

fn word_matrix(gens: &[GFMatrix], word: &[usize]) -> GFMatrix {
    let mut it = word.iter();
    let mut m = gens[*it.next().expect("words are nonempty")].clone();
    for &g in it {
        m = m.mul_unchecked(&gens[g]);
    }
    m
}

/// Evidence that a module is irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Dimension one needs no argument.
    OneDimensional,
    /// `f(theta)` has nullity `deg f` with `f` irreducible; a kernel vector
    /// spins to the whole space and a kernel vector of the transpose spins to
    /// the whole dual space.
    Norton {
        theta: AlgebraElement,
        factor: GFPoly,
        nullity: usize,
        kernel_vector: Vec<u32>,
        dual_kernel_vector: Vec<u32>,
        spin_dim: usize,
        dual_spin_dim: usize,
        attempts: usize,
    },
}

/// Outcome of one MeatAxe run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    Irreducible(Certificate),
    /// A proper nonzero submodule, RREF rows with their pivot columns.
    Proper { sub: GFMatrix, pivots: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct ChopOptions {
    /// Random algebra elements tried per split before giving up.
    pub budget: usize,
    pub deadline: Option<Instant>,
}

impl Default for ChopOptions {
    fn default() -> Self {
        ChopOptions { budget: 200, deadline: None }
    }
}

struct WordPool {
    mats: Vec<GFMatrix>,
    words: Vec<Vec<usize>>,
}

impl WordPool {
    fn new(gens: &[GFMatrix]) -> Self {
        WordPool { mats: gens.to_vec(), words: (0..gens.len()).map(|i| vec![i]).collect() }
    }

    fn grow(&mut self, gens: &[GFMatrix], rng: &mut XorShift64) {
        if self.mats.len() >= POOL_SIZE {
            return;
        }
        let i = rng.index(self.mats.len());
        let j = rng.index(gens.len());
        if self.words[i].len() >= MAX_WORD_LEN {
            return;
        }
        let m = self.mats[i].mul_unchecked(&gens[j]);
        let mut w = self.words[i].clone();
        w.push(j);
        self.mats.push(m);
        self.words.push(w);
    }

    fn random_element(&self, rng: &mut XorShift64, p: u32) -> (AlgebraElement, GFMatrix) {
        let f = self.mats[0].field();
        let d = self.mats[0].rows();
        let mut out = GFMatrix::zeros(f, d, d);
        let mut terms = Vec::with_capacity(TERMS);
        for _ in 0..TERMS {
            let i = rng.index(self.mats.len());
            let c = 1 + rng.below(p as u64 - 1) as u32;
            out.add_scaled_assign(c, &self.mats[i]).expect("shapes agree");
            terms.push((c, self.words[i].clone()));
        }
        (AlgebraElement { terms }, out)
    }
}

fn pivots_of(m: &GFMatrix) -> Vec<usize> {
    m.row_iter().map(|r| r.iter().position(|&x| x != 0).expect("rref rows are nonzero")).collect()
}

/// One MeatAxe split attempt sequence: find a proper submodule or prove
/// irreducibility.
pub(crate) fn split(m: &GModule, rng: &mut XorShift64, opts: &ChopOptions) -> Result<Split, ModError> {
    let d = m.dim();
    if d == 1 {
        return Ok(Split::Irreducible(Certificate::OneDimensional));
    }
    let p = m.field().p();
    let gens = m.gens();
    let max_deg = if d <= SMALL_DIM { d } else { LARGE_DIM_MAX_DEGREE };
    let mut pool = WordPool::new(gens);
    let mut transposed: Option<Vec<GFMatrix>> = None;
    for attempt in 0..opts.budget {
        if opts.deadline.is_some_and(|t| Instant::now() > t) {
            return Err(ModError::Timeout);
        }
        pool.grow(gens, rng);
        let (theta_rec, theta) = pool.random_element(rng, p);
        let cp = char_poly(&theta)?;
        let mut factors = low_degree_factors(&cp, max_deg)?;
        factors.sort_by_key(|(f, _)| f.degree());
        for (f, _) in factors.into_iter().take(FACTORS_PER_ELEMENT) {
            let ft = f.eval_matrix(&theta)?;
            let kernel = left_nullspace(&ft);
            let v = kernel.row(0).to_vec();
            let seed = GFMatrix::from_row_vecs(m.field(), d, vec![v.clone()]);
            let ech = spin_echelon(gens, &seed, None);
            if ech.rank() < d {
                let (sub, pivots) = ech.to_rref();
                return Ok(Split::Proper { sub, pivots });
            }
            let deg = f.degree().unwrap();
            if kernel.rows() != deg {
                continue;
            }
            let dual_kernel = nullspace(&ft);
            let w = dual_kernel.row(0).to_vec();
            let gt = transposed.get_or_insert_with(|| gens.iter().map(|g| g.transpose()).collect());
            let dual = spin_echelon(gt, &GFMatrix::from_row_vecs(m.field(), d, vec![w.clone()]), None);
            if dual.rank() < d {
                let (u, _) = dual.to_rref();
                let sub = nullspace(&u);
                let pivots = pivots_of(&sub);
                return Ok(Split::Proper { sub, pivots });
            }
            return Ok(Split::Irreducible(Certificate::Norton {
                theta: theta_rec,
                factor: f,
                nullity: kernel.rows(),
                kernel_vector: v,
                dual_kernel_vector: w,
                spin_dim: ech.rank(),
                dual_spin_dim: dual.rank(),
                attempts: attempt + 1,
            }));
        }
    }
    Err(ModError::BudgetExceeded(opts.budget))
}

/// A singular element of an irreducible module whose kernel has at most
/// `max_points` projective points, for use in isomorphism tests.
pub(crate) fn small_kernel_element(
    m: &GModule,
    rng: &mut XorShift64,
    max_points: u64,
    budget: usize,
) -> Result<Option<(AlgebraElement, GFPoly, usize, Vec<u32>)>, ModError> {
    let d = m.dim();
    let p = m.field().p();
    let gens = m.gens();
    let max_deg = if d <= SMALL_DIM { d } else { LARGE_DIM_MAX_DEGREE };
    let mut pool = WordPool::new(gens);
    for _ in 0..budget {
        pool.grow(gens, rng);
        let (theta_rec, theta) = pool.random_element(rng, p);
        let mut factors = low_degree_factors(&char_poly(&theta)?, max_deg)?;
        factors.sort_by_key(|(f, _)| f.degree());
        for (f, _) in factors.into_iter().take(FACTORS_PER_ELEMENT) {
            let kernel = left_nullspace(&f.eval_matrix(&theta)?);
            let points = (p as u64).checked_pow(kernel.rows() as u32).map(|x| (x - 1) / (p as u64 - 1));
            if points.is_some_and(|x| x <= max_points) {
                return Ok(Some((theta_rec, f, kernel.rows(), kernel.row(0).to_vec())));
            }
        }
    }
    Ok(None)
}

/// Irreducibility test. Returns `(true, Irreducible(cert))` or
/// `(false, Proper { .. })` with an invariant subspace as witness.
pub fn is_irreducible(m: &GModule, seed: u64) -> Result<(bool, Split), ModError> {
    let mut rng = XorShift64::new(seed);
    let s = split(m, &mut rng, &ChopOptions::default())?;
    Ok((matches!(s, Split::Irreducible(_)), s))
}

/// One isomorphism class of composition factors.
#[derive(Clone, Debug)]
pub struct FactorEntry {
    pub factor: GModule,
    pub multiplicity: usize,
    pub certificate: Certificate,
    /// Basis of the first occurrence in the chopped module's coordinates,
    /// reduced modulo `kernel`.
    lift: GFMatrix,
    kernel: Arc<SemiEchelon>,
}

impl FactorEntry {
    /// Subquotient `W / W'` of the chopped module realising this factor.
    pub fn witness(&self) -> SubquotientBasis {
        let mut w = (*self.kernel).clone();
        for r in self.lift.row_iter() {
            w.add_vector(r);
        }
        let quot_of = (self.kernel.rank() > 0).then(|| self.kernel.to_rref().0);
        SubquotientBasis { sub_basis: w.to_rref().0, quot_of }
    }
}

/// Composition factors with multiplicities.
#[derive(Clone, Debug)]
pub struct FactorList {
    pub entries: Vec<FactorEntry>,
    pub parent_dim: usize,
}

impl FactorList {
    /// `(dim, multiplicity)` pairs in discovery order.
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|e| (e.factor.dim(), e.multiplicity)).collect()
    }

    /// Sorted multiset of factor dimensions.
    pub fn dim_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.entries.iter().flat_map(|e| std::iter::repeat_n(e.factor.dim(), e.multiplicity)).collect();
        v.sort_unstable();
        v
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|e| e.factor.dim() * e.multiplicity).sum()
    }
}

struct Piece {
    module: GModule,
    lift: GFMatrix,
    kernel: Arc<SemiEchelon>,
}

/// Composition factors of `m` with the default options.
pub fn chop(m: &GModule, seed: u64) -> Result<FactorList, ModError> {
    chop_with(m, seed, &ChopOptions::default())
}

/// Composition factors of `m`. Factors inherit element action from `m` when
/// `m` is a permutation module.
pub fn chop_with(m: &GModule, seed: u64, opts: &ChopOptions) -> Result<FactorList, ModError> {
    let f = m.field();
    let n = m.dim();
    let mut rng = XorShift64::new(seed);
    let action = m.permutation_action().cloned();
    let root_is_perm = matches!(m.provenance, super::Provenance::Permutation(_));
    let mut stack = vec![Piece {
        module: GModule::from_parts_unchecked(f, n, m.gens().to_vec()),
        lift: GFMatrix::identity(f, n),
        kernel: Arc::new(SemiEchelon::new(f, n)),
    }];
    let mut entries: Vec<FactorEntry> = Vec::new();
    while let Some(piece) = stack.pop() {
        match split(&piece.module, &mut rng, opts)? {
            Split::Proper { sub, pivots } => {
                let (sub_mod, quo_mod, free) = piece.module.split_by(&sub, &pivots);
                let sub_lift = sub.mul_unchecked(&piece.lift);
                let mut kernel = (*piece.kernel).clone();
                for r in sub_lift.row_iter() {
                    kernel.add_vector(r);
                }
                let quo_rows: Vec<Vec<u32>> = free.iter().map(|&i| kernel.reduce(piece.lift.row(i))).collect();
                let quo_lift = GFMatrix::from_row_vecs(f, n, quo_rows);
                stack.push(Piece { module: quo_mod, lift: quo_lift, kernel: Arc::new(kernel) });
                stack.push(Piece { module: sub_mod, lift: sub_lift, kernel: piece.kernel });
            }
            Split::Irreducible(cert) => {
                let mut module = piece.module;
                if let (Some(act), true) = (&action, root_is_perm) {
                    module = module.with_subquotient(act.clone(), piece.lift.clone(), piece.kernel.clone());
                }
                let mut merged = false;
                for e in entries.iter_mut().filter(|e| e.factor.dim() == module.dim()) {
                    if iso_with_certificate(&e.factor, &e.certificate, &module)?.is_some() {
                        e.multiplicity += 1;
                        merged = true;
                        break;
                    }
                }
                if !merged {
                    entries.push(FactorEntry { factor: module, multiplicity: 1, certificate: cert, lift: piece.lift, kernel: piece.kernel });
                }
            }
        }
        if opts.deadline.is_some_and(|t| Instant::now() > t) {
            return Err(ModError::Timeout);
        }
    }
    Ok(FactorList { entries, parent_dim: n })
}

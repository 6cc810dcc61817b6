use super::meataxe::{is_irreducible, small_kernel_element, AlgebraElement, Certificate, Split};
use super::spin::SpinTranscript;
use super::{GModule, ModError};
use crate::gfmat::{inverse, left_nullspace, GFMatrix, GFPoly};
use crate::rng::XorShift64;

/// Largest number of kernel vectors (up to scalars) tried as images of the
/// standard-basis seed.
const MAX_CANDIDATES: u64 = 1 << 16;
/// Certificates with more kernel points than this trigger a search for a
/// better element first.
const PREFERRED_CANDIDATES: u64 = 256;
const ISO_SEARCH_SEED: u64 = 0x1505;
const ISO_SEARCH_BUDGET: usize = 200;

/// Isomorphism test for irreducible modules. Returns `T` with
/// `T * a_i * T^-1 == b_i` for every generator, or `None`.
pub fn iso(a: &GModule, b: &GModule, seed: u64) -> Result<Option<GFMatrix>, ModError> {
    let (irr_a, cert) = is_irreducible(a, seed)?;
    let (irr_b, _) = is_irreducible(b, seed)?;
    if !irr_a || !irr_b {
        return Err(ModError::NotIrreducible);
    }
    let Split::Irreducible(cert) = cert else { unreachable!() };
    iso_with_certificate(a, &cert, b)
}

/// As [`iso`], reusing an irreducibility certificate of `a`.
pub fn iso_with_certificate(a: &GModule, cert: &Certificate, b: &GModule) -> Result<Option<GFMatrix>, ModError> {
    if a.field() != b.field() || a.dim() != b.dim() {
        return Ok(None);
    }
    if a.num_gens() != b.num_gens() {
        return Err(ModError::GeneratorMismatch(a.num_gens(), b.num_gens()));
    }
    let f = a.field();
    let d = a.dim();
    match cert {
        Certificate::OneDimensional => {
            let same = a.gens().iter().zip(b.gens()).all(|(x, y)| x.get(0, 0) == y.get(0, 0));
            Ok(same.then(|| GFMatrix::identity(f, 1)))
        }
        Certificate::Norton { theta, factor, nullity, kernel_vector, .. } => {
            let p = f.p() as u64;
            if points(p, *nullity) <= PREFERRED_CANDIDATES {
                return iso_by_element(a, b, theta, factor, *nullity, kernel_vector);
            }
            // look for an element with a smaller kernel than the certificate's
            let mut rng = XorShift64::new(ISO_SEARCH_SEED ^ d as u64);
            match small_kernel_element(a, &mut rng, PREFERRED_CANDIDATES, ISO_SEARCH_BUDGET)? {
                Some((theta, factor, nullity, v)) => iso_by_element(a, b, &theta, &factor, nullity, &v),
                None => iso_by_element(a, b, theta, factor, *nullity, kernel_vector),
            }
        }
    }
}

/// Number of projective points of GF(p)^e, saturating.
fn points(p: u64, e: usize) -> u64 {
    p.checked_pow(e as u32).map_or(u64::MAX, |x| (x - 1) / (p - 1))
}

/// Any isomorphism maps the kernel of `factor(theta)` on `a` onto the one
/// on `b`, so the image of `kernel_vector` is found by trying each kernel
/// vector of `b` up to scalars.
fn iso_by_element(
    a: &GModule,
    b: &GModule,
    theta: &AlgebraElement,
    factor: &GFPoly,
    nullity: usize,
    kernel_vector: &[u32],
) -> Result<Option<GFMatrix>, ModError> {
    let f = a.field();
    let d = a.dim();
    let theta_b = theta.evaluate(b.gens());
    let kb = left_nullspace(&factor.eval_matrix(&theta_b)?);
    if kb.rows() != nullity {
        return Ok(None);
    }
    let (transcript, sa) = SpinTranscript::record(a.gens(), kernel_vector);
    debug_assert_eq!(sa.rows(), d, "an irreducible module is spun by any nonzero vector");
    let sa_inv = inverse(&sa).expect("standard basis is a basis");
    let e = kb.rows();
    let p = f.p() as u64;
    let count = points(p, e);
    if count > MAX_CANDIDATES {
        return Err(ModError::BudgetExceeded(MAX_CANDIDATES as usize));
    }
    for idx in 0..count {
        let coeffs = projective_point(idx, e, p);
        let mut v = vec![0u32; d];
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(kb.row(k)) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
        }
        let sb = transcript.replay(b.gens(), &v);
        let Some(sb_inv) = inverse(&sb) else { continue };
        // x = sa^-1 sb intertwines: a_i x = x b_i
        let x = sa_inv.mul(&sb)?;
        let ok = a.gens().iter().zip(b.gens()).all(|(ai, bi)| ai.mul_unchecked(&x) == x.mul_unchecked(bi));
        if ok {
            return Ok(Some(sb_inv.mul(&sa)?));
        }
    }
    Ok(None)
}

/// The `idx`-th point of projective space over GF(p) in dimension `e`:
/// coefficient vectors whose first nonzero entry is 1.
fn projective_point(mut idx: u64, e: usize, p: u64) -> Vec<u32> {
    let mut out = vec![0u32; e];
    // points with leading 1 at position k: p^(e-1-k) of them
    for k in 0..e {
        let block = p.pow((e - 1 - k) as u32);
        if idx < block {
            out[k] = 1;
            for slot in out.iter_mut().skip(k + 1).rev() {
                *slot = (idx % p) as u32;
                idx /= p;
            }
            return out;
        }
        idx -= block;
    }
    unreachable!("index below the point count")
}

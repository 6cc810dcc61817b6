use std::cmp::Ordering;
use std::fmt;

use super::{GFMatrix, GfError, PrimeField};
use crate::rng::XorShift64;

/// Univariate polynomial over GF(p), coefficients lowest degree first, with
/// no trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GFPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl fmt::Debug for GFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl GFPoly {
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let p = field.p();
        let mut poly = GFPoly { field, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        poly.trim();
        poly
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        GFPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        GFPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        GFPoly::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        GFPoly::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: PrimeField) -> Self {
        GFPoly::new(field, vec![0, 1])
    }

    /// `x - a`.
    pub fn linear(field: PrimeField, a: u32) -> Self {
        GFPoly::new(field, vec![field.neg(a % field.p()), 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn monic(&self) -> GFPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    pub fn scale(&self, c: u32) -> GFPoly {
        let f = self.field;
        GFPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, o: &GFPoly) -> GFPoly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        GFPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &GFPoly) -> GFPoly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        GFPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &GFPoly) -> GFPoly {
        if self.is_zero() || o.is_zero() {
            return GFPoly::zero(self.field);
        }
        let f = self.field;
        let p = f.p() as u64;
        let budget = f.lazy_terms();
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let mut acc = vec![0u64; n];
        let mut pending = 0u64;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if pending >= budget {
                acc.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
            super::matrix::axpy_lazy(&mut acc[i..i + o.coeffs.len()], a, &o.coeffs);
            pending += 1;
        }
        GFPoly::new(f, acc.into_iter().map(|x| (x % p) as u32).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &GFPoly) -> (GFPoly, GFPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (GFPoly::zero(f), self.clone());
        }
        let inv = f.inv(d.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            let nc = f.neg(c);
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.add(r[k], f.mul(nc, dj));
            }
        }
        r.truncate(dd);
        (GFPoly::new(f, q), GFPoly::new(f, r))
    }

    pub fn rem(&self, d: &GFPoly) -> GFPoly {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &GFPoly) -> GFPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> GFPoly {
        let f = self.field;
        GFPoly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, (i as u64 % f.p() as u64) as u32)).collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &GFPoly) -> GFPoly {
        let mut base = self.rem(m);
        let mut r = GFPoly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        r
    }

    /// `f(m)` for a square matrix (Horner).
    pub fn eval_matrix(&self, m: &GFMatrix) -> Result<GFMatrix, GfError> {
        if !m.is_square() {
            return Err(GfError::NotSquare(m.rows(), m.cols()));
        }
        let f = self.field;
        let n = m.rows();
        let Some(d) = self.degree() else {
            return Ok(GFMatrix::zeros(f, n, n));
        };
        let mut acc = GFMatrix::identity(f, n).scale(self.coeffs[d]);
        for i in (0..d).rev() {
            acc = acc.mul_unchecked(m).add_identity_scaled(self.coeffs[i])?;
        }
        Ok(acc)
    }

    /// Companion matrix (row convention: `x` acts on `1, x, ..., x^{d-1}`).
    pub fn companion(&self) -> GFMatrix {
        let f = self.field;
        let me = self.monic();
        let d = me.degree().unwrap_or(0);
        let mut c = GFMatrix::zeros(f, d, d);
        for i in 0..d.saturating_sub(1) {
            c.set(i, i + 1, 1);
        }
        if d > 0 {
            for j in 0..d {
                c.set(d - 1, j, f.neg(me.coeffs[j]));
            }
        }
        c
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> GFPoly {
        let p = self.field.p() as usize;
        GFPoly::new(self.field, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Canonical ordering used for factor lists: by degree, then coefficients
    /// from the top down.
    pub fn canonical_cmp(&self, o: &GFPoly) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(o.coeffs.iter().rev()))
    }
}

/// Square-free decomposition of a monic polynomial: `(g, i)` with `g`
/// square-free, pairwise coprime, and `f = prod g^i`.
pub fn squarefree_decomposition(f: &GFPoly) -> Vec<(GFPoly, usize)> {
    let field = f.field();
    let p = field.p() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    if fp.is_zero() {
        for (g, i) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, i * p));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if !c.is_one() {
        for (g, j) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, j * p));
        }
    }
    out
}

/// Distinct-degree factorisation of a monic square-free polynomial, stopping
/// after degree `max_deg`. Returns `(product of all irreducible factors of
/// degree d, d)` and the unsplit remainder (whose factors all have degree
/// `> max_deg`).
pub fn distinct_degree(f: &GFPoly, max_deg: usize) -> (Vec<(GFPoly, usize)>, GFPoly) {
    let field = f.field();
    let p = field.p() as u128;
    let x = GFPoly::x(field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while d < max_deg {
        let deg = rest.degree().unwrap_or(0);
        if deg < 2 * (d + 1) {
            if deg > 0 && deg <= max_deg {
                out.push((rest.clone(), deg));
                rest = GFPoly::one(field);
            }
            break;
        }
        d += 1;
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    (out, rest)
}

/// Split a product of distinct irreducibles of degree `d` (Cantor-Zassenhaus).
pub fn equal_degree(f: &GFPoly, d: usize, rng: &mut XorShift64) -> Vec<GFPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let p = field.p() as u128;
    loop {
        let r = GFPoly::new(field, (0..n).map(|_| rng.below(field.p() as u64) as u32).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let t = if p == 2 {
            // trace map r + r^2 + ... + r^(2^(d-1))
            let mut acc = r.rem(f);
            let mut cur = acc.clone();
            for _ in 1..d {
                cur = cur.mul(&cur).rem(f);
                acc = acc.add(&cur);
            }
            acc
        } else {
            // r^((p^d - 1)/2) = (r^(1 + p + ... + p^(d-1)))^((p-1)/2)
            let mut cur = r.rem(f);
            let mut norm = cur.clone();
            for _ in 1..d {
                cur = cur.pow_mod(p, f);
                norm = norm.mul(&cur).rem(f);
            }
            norm.pow_mod((p - 1) / 2, f).sub(&GFPoly::one(field))
        };
        let g = f.gcd(&t);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div_rem(&g).0, d, rng));
            return out;
        }
    }
}

/// Irreducible factors of `f` with degree at most `max_deg`, with
/// multiplicities, sorted canonically. Factors of higher degree are dropped.
pub fn low_degree_factors(f: &GFPoly, max_deg: usize) -> Result<Vec<(GFPoly, usize)>, GfError> {
    if f.is_zero() {
        return Err(GfError::ZeroPolynomial);
    }
    let mut rng = XorShift64::new(0x5eed_f00d_u64 ^ f.field().p() as u64);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(&f.monic()) {
        let (parts, _rest) = distinct_degree(&g, max_deg);
        for (prod, d) in parts {
            for irr in equal_degree(&prod, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Complete factorisation into monic irreducibles with multiplicities; the
/// leading coefficient of `f` is dropped. Sorted canonically.
pub fn poly_factor(f: &GFPoly) -> Result<Vec<(GFPoly, usize)>, GfError> {
    let deg = f.degree().ok_or(GfError::ZeroPolynomial)?;
    low_degree_factors(f, deg.max(1))
}

/// Rabin-style irreducibility: `f` of degree `n` is irreducible iff
/// `x^(p^n) = x mod f` and `gcd(f, x^(p^(n/r)) - x) = 1` for every prime
/// `r | n`.
pub fn is_irreducible(f: &GFPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let field = f.field();
    let p = field.p() as u128;
    let f = f.monic();
    let x = GFPoly::x(field);
    let frob = |k: usize| {
        let mut h = x.clone();
        for _ in 0..k {
            h = h.pow_mod(p, &f);
        }
        h
    };
    if frob(n).sub(&x).rem(&f).is_zero() {
        let mut m = n;
        let mut r = 2;
        let mut primes = Vec::new();
        while r * r <= m {
            if m % r == 0 {
                primes.push(r);
                while m % r == 0 {
                    m /= r;
                }
            }
            r += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        primes.into_iter().all(|r| f.gcd(&frob(n / r).sub(&x)).is_one())
    } else {
        false
    }
}

use std::fmt;

use super::{GfError, PrimeField};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GFMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for GFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GFMatrix<GF({})> {}x{}", self.field.p(), self.rows, self.cols)?;
        if self.rows <= 16 && self.cols <= 32 {
            for r in 0..self.rows {
                writeln!(f, "  {:?}", self.row(r))?;
            }
        }
        Ok(())
    }
}

/// `acc += c * row`, with `acc` holding unreduced 64-bit sums.
#[inline]
pub(crate) fn axpy_lazy(acc: &mut [u64], c: u32, row: &[u32]) {
    let c = c as u64;
    for (a, &r) in acc.iter_mut().zip(row) {
        *a += c * r as u64;
    }
}

/// Accumulates scaled rows in 64 bits and reduces only when the overflow
/// budget of the field runs out.
pub(crate) struct LazyRow {
    pub(crate) acc: Vec<u64>,
    pending: u64,
    budget: u64,
    p: u64,
}

impl LazyRow {
    pub(crate) fn zeros(field: PrimeField, len: usize) -> Self {
        LazyRow {
            acc: vec![0; len],
            pending: 0,
            budget: field.lazy_terms(),
            p: field.p() as u64,
        }
    }

    pub(crate) fn from_row(field: PrimeField, row: &[u32]) -> Self {
        LazyRow {
            acc: row.iter().map(|&x| x as u64).collect(),
            pending: 0,
            budget: field.lazy_terms(),
            p: field.p() as u64,
        }
    }

    #[inline]
    pub(crate) fn add_scaled(&mut self, c: u32, row: &[u32]) {
        if c == 0 {
            return;
        }
        if self.pending >= self.budget {
            self.reduce_all();
        }
        axpy_lazy(&mut self.acc, c, row);
        self.pending += 1;
    }

    /// Reduced value at one position (also stores it back).
    #[inline]
    pub(crate) fn get(&mut self, i: usize) -> u32 {
        let v = self.acc[i] % self.p;
        self.acc[i] = v;
        v as u32
    }

    pub(crate) fn reduce_all(&mut self) {
        let p = self.p;
        for a in self.acc.iter_mut() {
            *a %= p;
        }
        self.pending = 0;
    }

    pub(crate) fn into_reduced(mut self) -> Vec<u32> {
        self.reduce_all();
        self.acc.into_iter().map(|x| x as u32).collect()
    }
}

const K_BLOCK: usize = 256;
const J_BLOCK: usize = 512;

impl GFMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        GFMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major residues; entries are reduced mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, GfError> {
        if data.len() != rows * cols {
            return Err(GfError::DimensionMismatch {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        let p = field.p();
        let data = data.into_iter().map(|x| x % p).collect();
        Ok(GFMatrix { field, rows, cols, data })
    }

    /// Build from signed integer rows (convenient in tests and examples).
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self, GfError> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(GfError::DimensionMismatch { op: "from_rows", left: (rows.len(), cols), right: (1, r.len()) });
            }
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Ok(GFMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let p = field.p();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p);
            }
        }
        GFMatrix { field, rows, cols, data }
    }

    /// Matrix of the permutation `i -> images[i]` acting on row vectors:
    /// `e_i * M = e_{images[i]}`.
    pub fn permutation(field: PrimeField, images: &[u32]) -> Self {
        let n = images.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &j) in images.iter().enumerate() {
            m.data[i * n + j as usize] = 1;
        }
        m
    }

    pub(crate) fn from_row_vecs(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(&r);
        }
        GFMatrix { field, rows: n, cols, data }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact panics on zero width
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    fn check_same(&self, other: &GFMatrix, op: &'static str) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GfError::DimensionMismatch { op, left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        Ok(())
    }

    pub fn add(&self, other: &GFMatrix) -> Result<GFMatrix, GfError> {
        self.check_same(other, "add")?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &GFMatrix) -> Result<GFMatrix, GfError> {
        self.check_same(other, "sub")?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(self.with_data(data))
    }

    /// `self += c * other`.
    pub fn add_scaled_assign(&mut self, c: u32, other: &GFMatrix) -> Result<(), GfError> {
        self.check_same(other, "add_scaled")?;
        let f = self.field;
        let c = c % f.p();
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
        Ok(())
    }

    pub fn scale(&self, c: u32) -> GFMatrix {
        let f = self.field;
        let c = c % f.p();
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        self.with_data(data)
    }

    /// `self + c * I`.
    pub fn add_identity_scaled(&self, c: u32) -> Result<GFMatrix, GfError> {
        if !self.is_square() {
            return Err(GfError::NotSquare(self.rows, self.cols));
        }
        let mut m = self.clone();
        let f = self.field;
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.data[i * self.cols + i] = f.add(v, c % f.p());
        }
        Ok(m)
    }

    fn with_data(&self, data: Vec<u32>) -> GFMatrix {
        GFMatrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> GFMatrix {
        let mut t = GFMatrix::zeros(self.field, self.cols, self.rows);
        const B: usize = 64;
        for ib in (0..self.rows).step_by(B) {
            for jb in (0..self.cols).step_by(B) {
                for i in ib..(ib + B).min(self.rows) {
                    for j in jb..(jb + B).min(self.cols) {
                        t.data[j * self.rows + i] = self.data[i * self.cols + j];
                    }
                }
            }
        }
        t
    }

    /// Matrix product reduced mod p.
    pub fn mul(&self, other: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.cols != other.rows {
            return Err(GfError::DimensionMismatch { op: "mul", left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GFMatrix) -> GFMatrix {
        let (n, kk, m) = (self.rows, self.cols, other.cols);
        let field = self.field;
        let p = field.p() as u64;
        let budget = field.lazy_terms().max(1) as usize;
        let mut acc = vec![0u64; n * m];
        let k_step = K_BLOCK.min(budget);
        let mut pending = 0usize;
        for kb in (0..kk).step_by(k_step) {
            let ke = (kb + k_step).min(kk);
            if pending + (ke - kb) > budget {
                for a in acc.iter_mut() {
                    *a %= p;
                }
                pending = 0;
            }
            for jb in (0..m).step_by(J_BLOCK) {
                let je = (jb + J_BLOCK).min(m);
                for i in 0..n {
                    let arow = &self.data[i * kk..(i + 1) * kk];
                    let out = &mut acc[i * m + jb..i * m + je];
                    for k in kb..ke {
                        let a = arow[k];
                        if a != 0 {
                            axpy_lazy(out, a, &other.data[k * m + jb..k * m + je]);
                        }
                    }
                }
            }
            pending += ke - kb;
        }
        let data = acc.into_iter().map(|x| (x % p) as u32).collect();
        GFMatrix { field, rows: n, cols: m, data }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        let mut acc = LazyRow::zeros(self.field, self.cols);
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                acc.add_scaled(c, self.row(k));
            }
        }
        acc.into_reduced()
    }

    pub fn pow(&self, mut e: u64) -> Result<GFMatrix, GfError> {
        if !self.is_square() {
            return Err(GfError::NotSquare(self.rows, self.cols));
        }
        let mut base = self.clone();
        let mut r = GFMatrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(r)
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.p(), other.field.p()));
        }
        let f = self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = GFMatrix::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = f.mul(a, other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(GfError::DimensionMismatch { op: "vstack", left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GFMatrix { field: self.field, rows: self.rows + other.rows, cols, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> GFMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        GFMatrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> GFMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(idx.iter().map(|&j| r[j]));
        }
        GFMatrix { field: self.field, rows: self.rows, cols: idx.len(), data }
    }

    /// Apply a permutation of coordinates to every row: entry `j` moves to
    /// position `images[j]`. This is right multiplication by the
    /// corresponding permutation matrix, at linear cost.
    pub fn permute_cols(&self, images: &[u32]) -> GFMatrix {
        assert_eq!(images.len(), self.cols);
        let mut out = GFMatrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = &mut out.data[i * self.cols..(i + 1) * self.cols];
            for (j, &x) in src.iter().enumerate() {
                dst[images[j] as usize] = x;
            }
        }
        out
    }

    pub fn trace(&self) -> Result<u32, GfError> {
        if !self.is_square() {
            return Err(GfError::NotSquare(self.rows, self.cols));
        }
        Ok((0..self.rows).fold(0, |t, i| self.field.add(t, self.get(i, i))))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn naive_mul(a: &GFMatrix, b: &GFMatrix) -> GFMatrix {
        let f = a.field();
        GFMatrix::from_fn(f, a.rows(), b.cols(), |i, j| {
            (0..a.cols()).fold(0u32, |s, k| f.add(s, f.mul(a.get(i, k), b.get(k, j))))
        })
    }

    #[test]
    fn identity_and_zero_products() {
        let f = gf(7);
        let m = GFMatrix::from_rows(f, &[[1, 2, 3], [4, 5, 6], [0, 1, 6]]).unwrap();
        let i3 = GFMatrix::identity(f, 3);
        assert_eq!(i3.mul(&m).unwrap(), m);
        let z = GFMatrix::zeros(f, 3, 3);
        assert!(z.mul(&m).unwrap().is_zero());
    }

    #[test]
    fn unipotent_square_over_gf2() {
        let f = gf(2);
        let m = GFMatrix::from_rows(f, &[[1, 1], [0, 1]]).unwrap();
        assert!(m.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = GFMatrix::zeros(gf(3), 2, 3);
        let b = GFMatrix::zeros(gf(3), 2, 3);
        assert!(matches!(a.mul(&b), Err(GfError::DimensionMismatch { .. })));
        let c = GFMatrix::zeros(gf(5), 3, 3);
        assert!(matches!(a.mul(&c), Err(GfError::FieldMismatch(3, 5))));
    }

    #[test]
    fn blocked_product_matches_naive_for_large_prime() {
        // exercises the periodic reduction path
        let f = gf(2_147_483_647);
        let mut s = 12345u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % f.p() as u64) as u32
        };
        let a = GFMatrix::from_fn(f, 7, 300, |_, _| next());
        let b = GFMatrix::from_fn(f, 300, 5, |_, _| next());
        assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn permutation_matrix_matches_permute_cols() {
        let f = gf(5);
        let images = [2u32, 0, 3, 1];
        let pm = GFMatrix::permutation(f, &images);
        let m = GFMatrix::from_rows(f, &[[1, 2, 3, 4], [0, 4, 1, 2]]).unwrap();
        assert_eq!(m.mul(&pm).unwrap(), m.permute_cols(&images));
    }

    #[test]
    fn kron_dims() {
        let f = gf(3);
        let a = GFMatrix::identity(f, 2);
        let b = GFMatrix::identity(f, 3);
        let k = a.kron(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!(k.is_identity());
    }
}

use super::matrix::LazyRow;
use super::{GFMatrix, PrimeField};

/// A basis kept in semi-echelon form: every row has a leading 1 in its pivot
/// column and a zero in the pivot column of every earlier row. Reducing a
/// vector against the rows in insertion order therefore clears all pivot
/// columns in a single pass.
#[derive(Clone, Debug)]
pub struct SemiEchelon {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
}

impl SemiEchelon {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        SemiEchelon { field, cols, rows: Vec::new(), pivots: Vec::new(), is_pivot: vec![false; cols] }
    }

    pub fn from_matrix(m: &GFMatrix) -> Self {
        let mut e = SemiEchelon::new(m.field(), m.cols());
        for r in m.row_iter() {
            if e.is_full() {
                break;
            }
            e.add_vector(r);
        }
        e
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// Reduce `v` modulo the span; `on_sub(i, c)` is told every time
    /// `c * row_i` is subtracted.
    pub(crate) fn reduce_lazy_with(&self, v: &mut LazyRow, mut on_sub: impl FnMut(usize, u32)) {
        let p = self.field.p();
        for (i, row) in self.rows.iter().enumerate() {
            let c = v.get(self.pivots[i]);
            if c != 0 {
                v.add_scaled(p - c, row);
                on_sub(i, c);
            }
        }
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut lz = LazyRow::from_row(self.field, v);
        self.reduce_lazy_with(&mut lz, |_, _| {});
        lz.into_reduced()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert an already reduced vector. Returns the new row index, or `None`
    /// if it is zero. The scaling factor applied (inverse of the leading
    /// entry) is returned alongside.
    pub(crate) fn insert_reduced(&mut self, mut v: Vec<u32>) -> Option<(usize, u32)> {
        let lead = v.iter().position(|&x| x != 0)?;
        let f = self.field;
        let inv = f.inv(v[lead]);
        if inv != 1 {
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        self.is_pivot[lead] = true;
        self.pivots.push(lead);
        self.rows.push(v);
        Some((self.rows.len() - 1, inv))
    }

    /// Reduce and insert; returns whether the span grew.
    pub fn add_vector(&mut self, v: &[u32]) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r).is_some()
    }

    /// Rows as a matrix, in insertion order.
    pub fn to_matrix(&self) -> GFMatrix {
        GFMatrix::from_row_vecs(self.field, self.cols, self.rows.clone())
    }

    /// Reduced row echelon form of the span, rows sorted by pivot column.
    pub fn to_rref(&self) -> (GFMatrix, Vec<usize>) {
        let (rows, pivots, _) = self.rref_rows(None);
        (GFMatrix::from_row_vecs(self.field, self.cols, rows), pivots)
    }

    /// Back-substitution shared by `to_rref` and `rref`. When `combos` is
    /// given, the same row operations are applied to it.
    fn rref_rows(&self, combos: Option<Vec<Vec<u32>>>) -> (Vec<Vec<u32>>, Vec<usize>, Option<Vec<Vec<u32>>>) {
        let f = self.field;
        let p = f.p();
        let k = self.rows.len();
        let mut rows: Vec<LazyRow> = self.rows.iter().map(|r| LazyRow::from_row(f, r)).collect();
        let mut combos: Option<Vec<LazyRow>> = combos.map(|c| c.iter().map(|r| LazyRow::from_row(f, r)).collect());
        // Row s is already clear of pivots of rows inserted before it; clear
        // the pivots of later rows, latest first.
        for s in (0..k).rev() {
            let srow = rows[s].acc.iter().map(|&x| (x % p as u64) as u32).collect::<Vec<_>>();
            let scombo = combos.as_ref().map(|c| c[s].acc.iter().map(|&x| (x % p as u64) as u32).collect::<Vec<_>>());
            let piv = self.pivots[s];
            for r in 0..s {
                let c = rows[r].get(piv);
                if c != 0 {
                    rows[r].add_scaled(p - c, &srow);
                    if let (Some(cs), Some(sc)) = (combos.as_mut(), scombo.as_ref()) {
                        cs[r].add_scaled(p - c, sc);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Option<LazyRow>> = rows.into_iter().map(Some).collect();
        let out_rows = order.iter().map(|&i| rows[i].take().unwrap().into_reduced()).collect();
        let pivots = order.iter().map(|&i| self.pivots[i]).collect();
        let out_combos = combos.map(|c| {
            let mut c: Vec<Option<LazyRow>> = c.into_iter().map(Some).collect();
            order.iter().map(|&i| c[i].take().unwrap().into_reduced()).collect()
        });
        (out_rows, pivots, out_combos)
    }

    /// Is `pivot column` set?
    pub fn is_pivot_col(&self, j: usize) -> bool {
        self.is_pivot[j]
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: GFMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Invertible, with `transform * m == reduced`.
    pub transform: GFMatrix,
}

/// Reduced row echelon form with the transforming matrix.
pub fn rref(m: &GFMatrix) -> Rref {
    let f = m.field();
    let n = m.rows();
    let p = f.p();
    let mut ech = SemiEchelon::new(f, m.cols());
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut dead: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        let mut v = LazyRow::from_row(f, m.row(i));
        let mut combo = LazyRow::zeros(f, n);
        combo.acc[i] = 1;
        let mut subs = Vec::new();
        ech.reduce_lazy_with(&mut v, |r, c| subs.push((r, c)));
        for (r, c) in subs {
            combo.add_scaled(p - c, &combos[r]);
        }
        let mut combo = combo.into_reduced();
        match ech.insert_reduced(v.into_reduced()) {
            Some((_, inv)) => {
                if inv != 1 {
                    for x in combo.iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                }
                combos.push(combo);
            }
            None => dead.push(combo),
        }
    }
    let rank = ech.rank();
    let (rows, pivots, combos) = ech.rref_rows(Some(combos));
    let mut reduced_rows = rows;
    reduced_rows.extend((rank..n).map(|_| vec![0u32; m.cols()]));
    let mut t_rows = combos.unwrap();
    t_rows.extend(dead);
    Rref {
        reduced: GFMatrix::from_row_vecs(f, m.cols(), reduced_rows),
        rank,
        pivot_cols: pivots,
        transform: GFMatrix::from_row_vecs(f, n, t_rows),
    }
}

pub fn rank(m: &GFMatrix) -> usize {
    SemiEchelon::from_matrix(m).rank()
}

/// Basis (rows, canonical reduced echelon form) of `{v : v * m^T = 0}`.
pub fn nullspace(m: &GFMatrix) -> GFMatrix {
    let f = m.field();
    let ncols = m.cols();
    let (r, pivots) = SemiEchelon::from_matrix(m).to_rref();
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = SemiEchelon::new(f, ncols);
    for free in (0..ncols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(i, free));
        }
        basis.insert_reduced(basis.reduce(&v));
    }
    basis.to_rref().0
}

/// Basis of `{v : v * m = 0}`.
pub fn left_nullspace(m: &GFMatrix) -> GFMatrix {
    nullspace(&m.transpose())
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &GFMatrix) -> Option<GFMatrix> {
    if !m.is_square() {
        return None;
    }
    let r = rref(m);
    (r.rank == m.rows()).then_some(r.transform)
}

/// RREF basis of the row space.
pub fn row_space(m: &GFMatrix) -> GFMatrix {
    SemiEchelon::from_matrix(m).to_rref().0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_is_its_own_rref() {
        let f = gf(5);
        let i = GFMatrix::identity(f, 4);
        let r = rref(&i);
        assert_eq!(r.reduced, i);
        assert_eq!(r.rank, 4);
        assert_eq!(r.pivot_cols, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_matrix_rank_zero() {
        let z = GFMatrix::zeros(gf(3), 3, 4);
        let r = rref(&z);
        assert_eq!(r.rank, 0);
        assert!(r.reduced.is_zero());
        assert_eq!(nullspace(&z).rows(), 4);
    }

    #[test]
    fn dependent_rows_over_gf5() {
        let f = gf(5);
        let m = GFMatrix::from_rows(f, &[[1, 2], [2, 4]]).unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.transform.mul(&m).unwrap(), r.reduced);
    }

    #[test]
    fn sum_map_kernel_over_gf2() {
        let f = gf(2);
        let m = GFMatrix::from_rows(f, &[[1, 1]]).unwrap();
        let k = nullspace(&m);
        assert_eq!(k, GFMatrix::from_rows(f, &[[1, 1]]).unwrap());
        assert_eq!(nullspace(&GFMatrix::identity(f, 3)).rows(), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(7);
        let m = GFMatrix::from_rows(f, &[[2, 1, 0], [0, 3, 1], [1, 0, 5]]).unwrap();
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let sing = GFMatrix::from_rows(f, &[[1, 2], [2, 4]]).unwrap();
        assert!(inverse(&sing).is_none());
    }
}

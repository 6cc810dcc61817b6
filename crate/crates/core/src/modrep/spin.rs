use super::{GModule, SubquotientBasis};
use crate::gfmat::{GFMatrix, SemiEchelon};

const BATCH: usize = 64;

/// Smallest subspace containing `seeds` and closed under every matrix in
/// `gens`, as a semi-echelon basis. Spinning stops early once `stop_at`
/// dimensions are reached.
pub fn spin_echelon(gens: &[GFMatrix], seeds: &GFMatrix, stop_at: Option<usize>) -> SemiEchelon {
    let f = seeds.field();
    let d = seeds.cols();
    let limit = stop_at.unwrap_or(d).min(d);
    let mut ech = SemiEchelon::new(f, d);
    for r in seeds.row_iter() {
        ech.add_vector(r);
    }
    let mut done = 0;
    while done < ech.rank() && ech.rank() < limit {
        let end = (done + BATCH).min(ech.rank());
        let block = GFMatrix::from_row_vecs(f, d, (done..end).map(|i| ech.row(i).to_vec()).collect());
        for g in gens {
            let img = block.mul_unchecked(g);
            for r in img.row_iter() {
                ech.add_vector(r);
                if ech.rank() >= limit {
                    return ech;
                }
            }
        }
        done = end;
    }
    ech
}

/// Submodule generated by the rows of `seeds`, in reduced echelon form.
pub fn spin(m: &GModule, seeds: &GFMatrix) -> SubquotientBasis {
    let (basis, _) = spin_echelon(m.gens(), seeds, None).to_rref();
    SubquotientBasis { sub_basis: basis, quot_of: None }
}

/// Standard basis obtained by spinning one vector: row 0 is the seed and
/// row `k > 0` is `row[from] * gen[g]` for `steps[k-1] = (from, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinTranscript {
    pub steps: Vec<(usize, usize)>,
}

impl SpinTranscript {
    /// Spin `v` and record how each new basis vector arose. Returns the
    /// transcript and the (unreduced) basis vectors.
    pub fn record(gens: &[GFMatrix], v: &[u32]) -> (SpinTranscript, GFMatrix) {
        let f = gens[0].field();
        let d = v.len();
        let mut ech = SemiEchelon::new(f, d);
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut steps = Vec::new();
        if ech.add_vector(v) {
            rows.push(v.to_vec());
        }
        let mut i = 0;
        while i < rows.len() && !ech.is_full() {
            for (g, m) in gens.iter().enumerate() {
                let w = m.vec_mul(&rows[i]);
                if ech.add_vector(&w) {
                    rows.push(w);
                    steps.push((i, g));
                }
            }
            i += 1;
        }
        (SpinTranscript { steps }, GFMatrix::from_row_vecs(f, d, rows))
    }

    /// Rebuild the same words starting from `v` under other matrices.
    pub fn replay(&self, gens: &[GFMatrix], v: &[u32]) -> GFMatrix {
        let f = gens[0].field();
        let mut rows: Vec<Vec<u32>> = vec![v.to_vec()];
        for &(from, g) in &self.steps {
            let w = gens[g].vec_mul(&rows[from]);
            rows.push(w);
        }
        GFMatrix::from_row_vecs(f, v.len(), rows)
    }

    /// Number of basis vectors produced, including the seed.
    pub fn dim(&self) -> usize {
        self.steps.len() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmat::PrimeField;

    #[test]
    fn regular_module_of_c2() {
        let f = PrimeField::new(3).unwrap();
        let m = GModule::new(f, vec![GFMatrix::from_rows(f, &[[0, 1], [1, 0]]).unwrap()]).unwrap();
        let e0 = GFMatrix::from_rows(f, &[[1, 0]]).unwrap();
        assert_eq!(spin(&m, &e0).sub_basis.rows(), 2);
        let ones = GFMatrix::from_rows(f, &[[1, 1]]).unwrap();
        assert_eq!(spin(&m, &ones).sub_basis.rows(), 1);
        let zero = GFMatrix::zeros(f, 1, 2);
        assert_eq!(spin(&m, &zero).sub_basis.rows(), 0);
    }

    #[test]
    fn transcript_replays_on_same_module() {
        let f = PrimeField::new(5).unwrap();
        let g = GFMatrix::permutation(f, &[1, 2, 0]);
        let (t, rows) = SpinTranscript::record(std::slice::from_ref(&g), &[1, 0, 0]);
        assert_eq!(rows.rows(), 3);
        assert_eq!(t.replay(std::slice::from_ref(&g), &[1, 0, 0]), rows);
    }
}

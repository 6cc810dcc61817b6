use super::echelon::SemiEchelon;
use super::matrix::LazyRow;
use super::{GFMatrix, GFPoly, GfError};

/// Characteristic polynomial by cyclic (Krylov) decomposition.
///
/// Vectors are spun under `m` one cyclic block at a time against a growing
/// semi-echelon basis; each block closes with a monic relation which is the
/// characteristic polynomial of `m` on that block's quotient. The product of
/// the block relations is the characteristic polynomial.
pub fn char_poly(m: &GFMatrix) -> Result<GFPoly, GfError> {
    if !m.is_square() {
        return Err(GfError::NotSquare(m.rows(), m.cols()));
    }
    let f = m.field();
    let p = f.p();
    let n = m.rows();
    let mut ech = SemiEchelon::new(f, n);
    let mut result = GFPoly::one(f);
    let mut next_free = 0usize;
    while ech.rank() < n {
        while ech.is_pivot_col(next_free) {
            next_free += 1;
        }
        let block_start = ech.rank();
        let mut seed = vec![0u32; n];
        seed[next_free] = 1;
        ech.insert_reduced(seed);
        // polys[i] expresses block row i as a polynomial in m applied to the seed
        let mut polys: Vec<Vec<u32>> = vec![vec![1]];
        loop {
            let last = ech.rank() - 1;
            let k = last - block_start;
            let z = m.vec_mul(ech.row(last));
            let mut shifted = vec![0u32; k + 2];
            shifted[1..].copy_from_slice(&pad(&polys[k], k + 1));
            let mut poly_z = LazyRow::from_row(f, &shifted);
            let mut zl = LazyRow::from_row(f, &z);
            let mut subs = Vec::new();
            ech.reduce_lazy_with(&mut zl, |i, c| {
                if i >= block_start {
                    subs.push((i - block_start, c));
                }
            });
            for (i, c) in subs {
                poly_z.add_scaled(p - c, &pad(&polys[i], k + 2));
            }
            let poly_z = poly_z.into_reduced();
            match ech.insert_reduced(zl.into_reduced()) {
                None => {
                    result = result.mul(&GFPoly::new(f, poly_z).monic());
                    break;
                }
                Some((_, inv)) => {
                    polys.push(poly_z.iter().map(|&c| f.mul(c, inv)).collect());
                }
            }
        }
    }
    Ok(result)
}

fn pad(v: &[u32], len: usize) -> Vec<u32> {
    let mut out = v.to_vec();
    out.resize(len, 0);
    out
}

/// Characteristic polynomial via reduction to upper Hessenberg form and the
/// standard three-term style recurrence.
pub fn char_poly_hessenberg(m: &GFMatrix) -> Result<GFPoly, GfError> {
    if !m.is_square() {
        return Err(GfError::NotSquare(m.rows(), m.cols()));
    }
    let f = m.field();
    let n = m.rows();
    let mut h: Vec<Vec<u32>> = m.to_rows();
    for col in 0..n.saturating_sub(2) {
        let r = col + 1;
        let Some(piv) = (r..n).find(|&i| h[i][col] != 0) else { continue };
        if piv != r {
            h.swap(piv, r);
            for row in h.iter_mut() {
                row.swap(piv, r);
            }
        }
        let t_inv = f.inv(h[r][col]);
        for i in (r + 1)..n {
            let u = f.mul(h[i][col], t_inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.mul(u, h[r][j]);
                h[i][j] = f.sub(h[i][j], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(u, row[i]);
                row[r] = f.add(row[r], v);
            }
        }
    }
    let mut polys = vec![GFPoly::one(f)];
    for k in 0..n {
        let mut next = GFPoly::new(f, vec![f.neg(h[k][k]), 1]).mul(&polys[k]);
        let mut prod = 1u32;
        for i in (0..k).rev() {
            prod = f.mul(prod, h[i + 1][i]);
            let c = f.mul(h[i][k], prod);
            if c != 0 {
                next = next.sub(&polys[i].scale(c));
            }
        }
        polys.push(next);
    }
    Ok(polys.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmat::PrimeField;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_gives_power_of_x_minus_one() {
        let f = gf(5);
        let cp = char_poly(&GFMatrix::identity(f, 4)).unwrap();
        let lin = GFPoly::linear(f, 1);
        let expect = lin.mul(&lin).mul(&lin).mul(&lin);
        assert_eq!(cp, expect);
        assert_eq!(char_poly_hessenberg(&GFMatrix::identity(f, 4)).unwrap(), expect);
    }

    #[test]
    fn swap_matrix_over_gf3() {
        let f = gf(3);
        let m = GFMatrix::from_rows(f, &[[0, 1], [1, 0]]).unwrap();
        let expect = GFPoly::from_i64(f, &[-1, 0, 1]);
        assert_eq!(char_poly(&m).unwrap(), expect);
        assert_eq!(char_poly_hessenberg(&m).unwrap(), expect);
    }

    #[test]
    fn companion_recovers_polynomial() {
        let f = gf(11);
        let g = GFPoly::from_i64(f, &[4, 0, 7, 1, 1]);
        assert_eq!(char_poly(&g.companion()).unwrap(), g);
        assert_eq!(char_poly_hessenberg(&g.companion()).unwrap(), g);
    }

    #[test]
    fn non_square_is_error() {
        assert!(char_poly(&GFMatrix::zeros(gf(2), 2, 3)).is_err());
    }
}

//! Fraction-free (Bareiss) elimination over the integers, used for exact
//! rational systems.
//!
//! Each rational row is first scaled by the lcm of its denominators, which
//! leaves the solution set unchanged. Pivots are the first nonzero entry in
//! column order, scanning rows top to bottom, so failures are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row-echelon form of an integer matrix produced by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Eliminated rows, in pivot order followed by the zero rows.
    pub rows: Vec<Vec<BigInt>>,
    /// `order[k]` is the original index of `rows[k]`.
    pub order: Vec<usize>,
    /// Pivot column of each of the first `rank` rows.
    pub pivot_cols: Vec<usize>,
    /// `-1` to the number of row swaps.
    pub sign: i8,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Original indices of the rows that were reduced to zero in the first
    /// `pivot_width` columns.
    pub fn dependent_rows(&self) -> &[usize] {
        &self.order[self.rank()..]
    }
}

/// Clears denominators row by row. Returns the integer rows and the scale of each.
pub fn integer_rows(rows: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    rows.iter()
        .map(|row| {
            let scale = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = row.iter().map(|x| (x * Rational::from_integer(scale.clone())).to_integer()).collect();
            (ints, scale)
        })
        .unzip()
}

/// Eliminates `rows`, choosing pivots only among the first `pivot_width`
/// columns (extra columns, such as a right-hand side, are carried along).
pub fn bareiss(mut rows: Vec<Vec<BigInt>>, pivot_width: usize) -> Echelon {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut order: Vec<usize> = (0..m).collect();
    let mut pivot_cols = Vec::new();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    let mut k = 0;

    for col in 0..pivot_width {
        if k == m {
            break;
        }
        let Some(p) = (k..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        if p != k {
            rows.swap(p, k);
            order.swap(p, k);
            sign = -sign;
        }
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..width {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        pivot_cols.push(col);
        k += 1;
    }
    Echelon { rows, order, pivot_cols, sign }
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let (ints, _) = integer_rows(matrix);
    let width = matrix.first().map_or(0, Vec::len);
    bareiss(ints, width).rank()
}

/// Exact determinant of a square rational matrix.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let size = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == size), "determinant needs a square matrix");
    if size == 0 {
        return Rational::one();
    }
    let (ints, scales) = integer_rows(matrix);
    let ech = bareiss(ints, size);
    if ech.rank() < size {
        return Rational::zero();
    }
    // the last Bareiss pivot is the determinant of the permuted integer matrix
    let det_int = &ech.rows[size - 1][size - 1] * BigInt::from(ech.sign);
    let scale: BigInt = scales.iter().product();
    Rational::new(det_int, scale)
}

/// Solves an upper-triangular system left by [`bareiss`] on `[A | b]`.
/// Assumes the first `cols` pivots sit on columns `0..cols`.
pub fn back_substitute(ech: &Echelon, cols: usize) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); cols];
    for k in (0..cols).rev() {
        let row = &ech.rows[k];
        debug_assert_eq!(ech.pivot_cols[k], k);
        let mut acc = Rational::from_integer(row[cols].clone());
        for j in k + 1..cols {
            if !row[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[k] = acc / Rational::from_integer(row[k].clone());
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    // textbook rational Gauss-Jordan, independent of `bareiss`
    fn rank_by_gauss(matrix: &[Vec<Rational>]) -> usize {
        let mut a = matrix.to_vec();
        let (m, w) = (a.len(), a.first().map_or(0, Vec::len));
        let mut r = 0;
        for c in 0..w {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            let inv = a[r][c].recip();
            for i in 0..m {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] * &inv;
                    for j in c..w {
                        let delta = &f * &a[r][j];
                        a[i][j] -= delta;
                    }
                }
            }
            r += 1;
            if r == m {
                break;
            }
        }
        r
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    // cofactor expansion, independent of elimination
    fn det_by_cofactors(a: &[Vec<Rational>]) -> Rational {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<Rational>> =
                    a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &a[0][j] * det_by_cofactors(&minor);
                if j % 2 == 0 { term } else { -term }
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&mat(&[&[1, 12], &[1, 0]])), int(-12));
        assert_eq!(determinant(&mat(&[&[1, 1], &[2, 2]])), int(0));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        let a = vec![vec![frac(1, 24), frac(1, 2)], vec![int(0), int(-1)]];
        assert_eq!(determinant(&a), frac(-1, 24));
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), c), r)
                .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(p, q)| frac(p, q)).collect()).collect())
        })
    }

    proptest! {
        #[test]
        fn bareiss_rank_matches_gauss(a in small_matrix(6)) {
            prop_assert_eq!(rank(&a), rank_by_gauss(&a));
        }

        #[test]
        fn bareiss_rank_of_low_rank_products(
            k in 1usize..=3,
            b in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 6),
            c in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 3),
        ) {
            // (6 x k) * (k x 5) has rank at most k
            let a: Vec<Vec<Rational>> = b
                .iter()
                .map(|row| (0..5).map(|j| int((0..k).map(|t| row[t] * c[t][j]).sum())).collect())
                .collect();
            prop_assert!(rank(&a) <= k);
            prop_assert_eq!(rank(&a), rank_by_gauss(&a));
        }

        #[test]
        fn determinant_matches_cofactors(a in (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=2), n), n)
        })) {
            let a: Vec<Vec<Rational>> = a.into_iter().map(|r| r.into_iter().map(|(p, q)| frac(p, q)).collect()).collect();
            prop_assert_eq!(determinant(&a), det_by_cofactors(&a));
        }
    }
}

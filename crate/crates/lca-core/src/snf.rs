//! Smith normal form diagonal of an integer matrix, used by the trajectory
//! oracle to count subgroup orders exactly.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Returns the diagonal of the Smith normal form of `mat` (entries taken
/// nonnegative, without the divisibility normalization, which the product of
/// the diagonal does not depend on).
///
/// Runs entirely in exact arithmetic; row/column operations are unimodular so
/// the product of the diagonal equals the index of the row lattice whenever
/// the matrix has full column rank.
pub(crate) fn smith_diagonal(mut mat: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);

    for t in 0..steps {
        // move the absolutely smallest nonzero entry of the submatrix to (t, t)
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !mat[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| mat[i][j].abs() < mat[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            diag.push(BigInt::zero());
            continue;
        };
        mat.swap(t, pi);
        for row in mat.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            // clear column t below the pivot by Euclidean row steps
            for i in t + 1..rows {
                while !mat[i][t].is_zero() {
                    let q = &mat[t][t] / &mat[i][t];
                    for j in t..cols {
                        let sub = &q * &mat[i][j];
                        mat[t][j] -= sub;
                    }
                    mat.swap(t, i);
                }
            }
            // clear row t right of the pivot by Euclidean column steps
            for j in t + 1..cols {
                while !mat[t][j].is_zero() {
                    let q = &mat[t][t] / &mat[t][j];
                    for row in mat.iter_mut().skip(t) {
                        let sub = &q * &row[j];
                        row[t] -= sub;
                    }
                    for row in mat.iter_mut().skip(t) {
                        row.swap(t, j);
                    }
                }
            }
            let col_clear = (t + 1..rows).all(|i| mat[i][t].is_zero());
            if col_clear {
                break;
            }
        }
        diag.push(mat[t][t].abs());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn diag_product(diag: &[BigInt]) -> BigInt {
        diag.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    #[test]
    fn identity_matrix() {
        let d = smith_diagonal(big(&[&[1, 0], &[0, 1]]));
        assert_eq!(diag_product(&d), BigInt::one());
    }

    #[test]
    fn known_snf() {
        // diag product must equal |det|; det computed by cofactor expansion
        let d = smith_diagonal(big(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]));
        assert_eq!(diag_product(&d), BigInt::from(624i64));
    }

    #[test]
    fn stacked_modulus_rows() {
        // subgroup of (Z_4)^2 generated by (2, 0): order 2
        // matrix rows: generator then 4*I
        let d = smith_diagonal(big(&[&[2, 0], &[4, 0], &[0, 4]]));
        // order = 4^2 / product
        assert_eq!(diag_product(&d), BigInt::from(8));
    }

    #[test]
    fn rank_deficient_padding() {
        let d = smith_diagonal(big(&[&[3, 6], &[1, 2]]));
        // lattice has rank 1: second diagonal entry is 0
        assert!(d.iter().any(|x| x.is_zero()));
    }

    #[test]
    fn random_matrices_match_determinant() {
        // 3x3: product of SNF diagonal equals |det|; det by cofactor oracle
        let cases: Vec<[[i64; 3]; 3]> = vec![
            [[1, 2, 3], [4, 5, 6], [7, 8, 10]],
            [[2, 0, 1], [0, 3, 0], [5, 1, 4]],
            [[-3, 1, 2], [7, -2, 0], [1, 1, 1]],
        ];
        for m in cases {
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let d = smith_diagonal(big(&rows));
            assert_eq!(diag_product(&d), BigInt::from(det.abs()));
        }
    }
}

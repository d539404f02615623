//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::expr::Rational;

/// Row-major square or rectangular rational matrix.
pub type RatMatrix = Vec<Vec<Rational>>;

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank(m: &RatMatrix) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: RatMatrix = m.clone();
    let mut prev = Rational::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = Rational::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Lowest-index set of columns forming a basis of the column space.
pub fn column_basis(m: &RatMatrix) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..cols {
        let mut trial = chosen.clone();
        trial.push(c);
        let sub: RatMatrix = m
            .iter()
            .map(|row| trial.iter().map(|&j| row[j].clone()).collect())
            .collect();
        if rank(&sub) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Inverse by Gauss-Jordan elimination, `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, piv);
        let inv = Rational::one() / &a[c][c];
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[c][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn submatrix(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> RatMatrix {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    fn mat(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])), 2);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[0, 1], &[1, 0]])), 2);
    }

    #[test]
    fn column_basis_prefers_low_indices() {
        assert_eq!(
            column_basis(&mat(&[&[0, 1, 1], &[0, 1, 1], &[0, 0, 0]])),
            vec![1]
        );
        assert_eq!(
            column_basis(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])),
            vec![0, 1]
        );
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, mat(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }
}

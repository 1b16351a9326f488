//! Exact integer matrix helpers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "square matrix expected");
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Resultant of two binary forms given by coefficient lists
/// `f[0] X^m + f[1] X^(m-1) Y + ... + f[m] Y^m`, via the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in f.iter().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in g.iter().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(mat(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(det(mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det(mat(&[&[0, 2, 1], &[3, 0, 4], &[5, 6, 0]])),
            // cofactor expansion along the first row
            BigInt::from(-2 * (0 - 20) + (18 - 0))
        );
        assert_eq!(det(mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn resultant_of_linear_forms() {
        // (X - 2Y) and (X - 5Y) share no root; Res = 2 - 5 up to sign convention
        let f = [BigInt::from(1), BigInt::from(-2)];
        let g = [BigInt::from(1), BigInt::from(-5)];
        assert_eq!(resultant(&f, &g), BigInt::from(-3));
        let h = [BigInt::from(3), BigInt::from(-6)];
        assert_eq!(resultant(&f, &h), BigInt::zero());
    }
}

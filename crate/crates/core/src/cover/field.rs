//! Dense linear algebra over a prime field `F_q`, elements stored as
//! residues `0..q`.

use crate::{Error, Result};

pub fn check_prime(q: u32) -> Result<()> {
    let prime = q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d));
    if !prime || q > 251 {
        return Err(Error::input(format!("field size must be a prime <= 251, got {q}")));
    }
    Ok(())
}

pub fn inv(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    let (mut base, mut e, mut acc) = (a % q, q - 2, 1u32);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

pub fn sub(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + q - y) % q).collect()
}

pub fn add(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % q).collect()
}

/// `v -= c·row`.
fn axpy(v: &mut [u32], c: u32, row: &[u32], q: u32) {
    if c == 0 {
        return;
    }
    for (x, &r) in v.iter_mut().zip(row) {
        *x = (*x + q - c * r % q) % q;
    }
}

/// Reduced row echelon form with zero rows removed; returns the pivot
/// columns.
pub fn rref(rows: &mut Vec<Vec<u32>>, q: u32) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(p) = (top..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(top, p);
        let iv = inv(rows[top][col], q);
        for x in rows[top].iter_mut() {
            *x = *x * iv % q;
        }
        let pivot_row = rows[top].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != top {
                let c = r[col];
                axpy(r, c, &pivot_row, q);
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    pivots
}

/// Reduces `v` against rows already in reduced echelon form.
pub fn reduce(v: &mut [u32], rows: &[Vec<u32>], pivots: &[usize], q: u32) {
    for (row, &p) in rows.iter().zip(pivots) {
        let c = v[p];
        axpy(v, c, row, q);
    }
}

/// Basis of `{y : A y = 0}` for an `m x n` matrix `A`.
pub fn nullspace(rows: &[Vec<u32>], n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a, q);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut y = vec![0; n];
        y[free] = 1;
        for (row, &p) in a.iter().zip(&pivots) {
            y[p] = (q - row[free]) % q;
        }
        basis.push(y);
    }
    basis
}

/// One solution of `A x = b`, if any.
pub fn solve(rows: &[Vec<u32>], rhs: &[u32], n: usize, q: u32) -> Option<Vec<u32>> {
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut v = r.clone();
            v.push(b);
            v
        })
        .collect();
    let pivots = rref(&mut aug, q);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0; n];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[n];
    }
    Some(x)
}

pub fn dot(a: &[u32], b: &[u32], q: u32) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + x * y) % q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for q in [2, 3, 5, 7, 251] {
            for a in 1..q {
                assert_eq!(a * inv(a, q) % q, 1);
            }
        }
        assert!(check_prime(4).is_err());
        assert!(check_prime(5).is_ok());
    }

    #[test]
    fn nullspace_and_solve() {
        let q = 5;
        let a = vec![vec![1, 2, 3], vec![0, 1, 4]];
        let ns = nullspace(&a, 3, q);
        assert_eq!(ns.len(), 1);
        for r in &a {
            assert_eq!(dot(r, &ns[0], q), 0);
        }
        let x = solve(&a, &[1, 2], 3, q).unwrap();
        assert_eq!(dot(&a[0], &x, q), 1);
        assert_eq!(dot(&a[1], &x, q), 2);
        assert!(solve(&[vec![1, 1], vec![2, 2]], &[1, 3], 2, q).is_none());
    }
}

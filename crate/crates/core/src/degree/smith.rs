use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero Smith invariants `s_1 | s_2 | ...` of an integer matrix, by
/// unimodular row and column elimination.
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in &mut a {
            row.swap(t, pj);
        }
        let p = a[t][t].clone();
        let mut done = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&p);
            if !q.is_zero() {
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
            }
            if !a[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&p);
            if !q.is_zero() {
                for i in t..rows {
                    let v = &a[i][t] * &q;
                    a[i][j] -= v;
                }
            }
            if !a[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p))) {
            // fold the offending row into row t; the next pass finds a
            // smaller pivot
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

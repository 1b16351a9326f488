use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::intmat::det;
use crate::{Error, Result};

/// An antisymmetric nondegenerate `2g x 2g` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<BigInt>>", into = "Vec<Vec<BigInt>>")]
pub struct AlternatingForm {
    m: Vec<Vec<BigInt>>,
}

impl TryFrom<Vec<Vec<BigInt>>> for AlternatingForm {
    type Error = Error;

    fn try_from(m: Vec<Vec<BigInt>>) -> Result<Self> {
        AlternatingForm::new(m)
    }
}

impl From<AlternatingForm> for Vec<Vec<BigInt>> {
    fn from(f: AlternatingForm) -> Self {
        f.m
    }
}

impl AlternatingForm {
    pub fn new(m: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(Error::input("alternating form must be a square matrix"));
        }
        if n == 0 || n % 2 == 1 {
            return Err(Error::input(format!("alternating form of odd or zero size {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != -&m[j][i] {
                    return Err(Error::input(format!("matrix not antisymmetric at ({i},{j})")));
                }
            }
        }
        let form = AlternatingForm { m };
        if form.determinant().is_zero() {
            return Err(Error::input("alternating form is degenerate"));
        }
        Ok(form)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn genus(&self) -> usize {
        self.m.len() / 2
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.m
    }

    pub fn determinant(&self) -> BigInt {
        det(self.m.clone())
    }
}

/// Elementary divisors `d_1 | d_2 | ... | d_g` of an alternating form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<BigInt>", into = "Vec<BigInt>")]
pub struct PolarizationType {
    d: Vec<BigInt>,
}

impl TryFrom<Vec<BigInt>> for PolarizationType {
    type Error = Error;

    fn try_from(d: Vec<BigInt>) -> Result<Self> {
        PolarizationType::new(d)
    }
}

impl From<PolarizationType> for Vec<BigInt> {
    fn from(p: PolarizationType) -> Self {
        p.d
    }
}

impl PolarizationType {
    pub fn new(d: Vec<BigInt>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::input("empty polarization type"));
        }
        if d.iter().any(|x| !x.is_positive()) {
            return Err(Error::input("polarization type entries must be positive"));
        }
        if d.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::input("polarization type must satisfy d_1 | d_2 | ..."));
        }
        Ok(PolarizationType { d })
    }

    pub fn principal(g: usize) -> Self {
        PolarizationType {
            d: vec![BigInt::one(); g],
        }
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn pfaffian(&self) -> BigInt {
        self.d.iter().product()
    }

    pub fn is_principal(&self) -> bool {
        self.d.iter().all(|x| x.is_one())
    }
}

/// `[[0, D], [-D, 0]]`.
pub fn block_form(d: &PolarizationType) -> AlternatingForm {
    let g = d.len();
    let mut m = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
    for (i, di) in d.divisors().iter().enumerate() {
        m[i][g + i] = di.clone();
        m[g + i][i] = -di;
    }
    AlternatingForm { m }
}

/// Normal form with the basis achieving it: `basisᵀ · E · basis` equals
/// `block_form(kind)`, columns of `basis` being the new basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticReduction {
    pub kind: PolarizationType,
    pub basis: Vec<Vec<BigInt>>,
}

pub fn symplectic_normal_form(e: &AlternatingForm) -> Result<PolarizationType> {
    Ok(symplectic_reduction(e)?.kind)
}

struct Work {
    a: Vec<Vec<BigInt>>,
    // columns are basis vectors
    t: Vec<Vec<BigInt>>,
    n: usize,
}

impl Work {
    // Congruence by a permutation: swap basis vectors i and j.
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.t {
            row.swap(i, j);
        }
    }

    // Congruence replacing basis vector j by e_j - q·e_src.
    fn sub_multiple(&mut self, j: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.n {
            let v = &self.a[src][k] * q;
            self.a[j][k] -= v;
        }
        for k in 0..self.n {
            let v = &self.a[k][src] * q;
            self.a[k][j] -= v;
        }
        for k in 0..self.n {
            let v = &self.t[k][src] * q;
            self.t[k][j] -= v;
        }
    }
}

/// Integer symplectic reduction: pivot on the smallest nonzero entry, move
/// it to `(k, k+1)`, clear rows and columns `k, k+1` in pairs, and force the
/// remaining block to be divisible by the pivot by folding an offending
/// row into row `k` (which produces a smaller pivot on the next pass).
pub fn symplectic_reduction(e: &AlternatingForm) -> Result<SymplecticReduction> {
    let n = e.size();
    let mut w = Work {
        a: e.matrix().to_vec(),
        t: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect(),
        n,
    };
    let mut divisors = Vec::with_capacity(n / 2);
    let mut k = 0;
    while k < n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in i + 1..n {
                    if !w.a[i][j].is_zero() && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (i, j) = best.ok_or_else(|| Error::input("alternating form is degenerate"))?;
            w.swap(k, i);
            w.swap(k + 1, j);
            if w.a[k][k + 1].is_negative() {
                w.swap(k, k + 1);
            }
            let p = w.a[k][k + 1].clone();
            let mut clean = true;
            for j in k + 2..n {
                // a[k][j] -= q·a[k][k+1] by modifying e_j with e_{k+1}
                let q = w.a[k][j].div_floor(&p);
                w.sub_multiple(j, k + 1, &q);
                // a[k+1][j] -= q'·a[k+1][k] = a[k+1][j] + q'·p
                let q2 = -w.a[k + 1][j].div_floor(&p);
                w.sub_multiple(j, k, &q2);
                if !w.a[k][j].is_zero() || !w.a[k + 1][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (k + 2..n)
                .flat_map(|i| (k + 2..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[i][j].is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    // e_k += e_i
                    w.sub_multiple(k, i, &BigInt::from(-1));
                }
                None => {
                    divisors.push(p);
                    break;
                }
            }
        }
        k += 2;
    }
    // interleaved pairs (0,1), (2,3), ... -> (0, 2, 4, ..., 1, 3, 5, ...)
    let g = n / 2;
    let order: Vec<usize> = (0..g).map(|i| 2 * i).chain((0..g).map(|i| 2 * i + 1)).collect();
    let basis = (0..n)
        .map(|r| order.iter().map(|&c| w.t[r][c].clone()).collect())
        .collect();
    Ok(SymplecticReduction {
        kind: PolarizationType::new(divisors)?,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transform(e: &AlternatingForm, t: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = e.size();
        let m = e.matrix();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for a in 0..n {
                    for b in 0..n {
                        s += &t[a][i] * &m[a][b] * &t[b][j];
                    }
                }
                out[i][j] = s;
            }
        }
        out
    }

    #[test]
    fn planes() {
        let e = AlternatingForm::from_i64(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(symplectic_normal_form(&e).unwrap().divisors(), &[BigInt::one()]);
        let e = AlternatingForm::from_i64(&[vec![0, -2], vec![2, 0]]).unwrap();
        assert_eq!(symplectic_normal_form(&e).unwrap().divisors(), &[BigInt::from(2)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AlternatingForm::from_i64(&[vec![0, 1], vec![1, 0]]).is_err());
        assert!(AlternatingForm::from_i64(&[vec![0, 0], vec![0, 0]]).is_err());
        assert!(PolarizationType::new(vec![BigInt::from(2), BigInt::from(3)]).is_err());
    }

    #[test]
    fn basis_realizes_block_form() {
        let e = AlternatingForm::from_i64(&[
            vec![0, 4, 6, -2],
            vec![-4, 0, 10, 8],
            vec![-6, -10, 0, 14],
            vec![2, -8, -14, 0],
        ])
        .unwrap();
        let red = symplectic_reduction(&e).unwrap();
        assert_eq!(transform(&e, &red.basis), block_form(&red.kind).matrix());
        let pf = red.kind.pfaffian();
        assert_eq!(&pf * &pf, e.determinant().abs());
    }

    #[test]
    fn block_form_is_a_fixpoint() {
        let d = PolarizationType::new(vec![1.into(), 3.into(), 6.into()]).unwrap();
        assert_eq!(symplectic_normal_form(&block_form(&d)).unwrap(), d);
    }
}

//! Finite-rank groups modelled as integer lattices with a Néron-Tate Gram
//! matrix.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::heights::{canonical_height, nt_pairing, ECPoint, EllipticCurveQ};
use crate::{Error, Result};

/// Eigenvalues below `-PSD_TOL` reject a Gram matrix.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeSource {
    Synthetic,
    CurveDerived,
}

/// Integer coordinates with respect to the lattice generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, n: i64) -> Self {
        LatticeVector(self.0.iter().map(|c| c * n).collect())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Deserialize)]
struct LatticeRepr {
    rank: usize,
    gram: Vec<f64>,
    #[serde(default = "synthetic")]
    source: LatticeSource,
}

fn synthetic() -> LatticeSource {
    LatticeSource::Synthetic
}

/// A rank `r` lattice with row-major `r x r` Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr")]
pub struct MWLattice {
    rank: usize,
    gram: Vec<f64>,
    source: LatticeSource,
}

impl TryFrom<LatticeRepr> for MWLattice {
    type Error = Error;

    fn try_from(r: LatticeRepr) -> Result<Self> {
        MWLattice::new(r.rank, r.gram, r.source)
    }
}

impl MWLattice {
    /// Validates shape, symmetry and positive semidefiniteness.
    pub fn new(rank: usize, gram: Vec<f64>, source: LatticeSource) -> Result<Self> {
        if gram.len() != rank * rank {
            return Err(Error::input(format!(
                "rank {rank} needs {} Gram entries, got {}",
                rank * rank,
                gram.len()
            )));
        }
        if let Some(bad) = gram.iter().find(|x| !x.is_finite()) {
            return Err(Error::input(format!("non-finite Gram entry {bad}")));
        }
        let scale = gram.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..rank {
            for j in 0..i {
                let (a, b) = (gram[i * rank + j], gram[j * rank + i]);
                if (a - b).abs() > PSD_TOL * scale {
                    return Err(Error::input(format!(
                        "Gram matrix not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
            }
        }
        let lat = MWLattice { rank, gram, source };
        let min = lat.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::input(format!(
                "Gram matrix not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        Ok(lat)
    }

    pub fn synthetic(rank: usize, gram: Vec<f64>) -> Result<Self> {
        Self::new(rank, gram, LatticeSource::Synthetic)
    }

    pub fn identity(rank: usize) -> Self {
        let mut gram = vec![0.0; rank * rank];
        for i in 0..rank {
            gram[i * rank + i] = 1.0;
        }
        MWLattice {
            rank,
            gram,
            source: LatticeSource::Synthetic,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.rank + j]
    }

    pub fn source(&self) -> LatticeSource {
        self.source
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rank, self.rank, &self.gram)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.rank == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix().determinant()
    }

    fn check(&self, v: &LatticeVector) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::input(format!(
                "vector {v} has length {}, lattice rank is {}",
                v.len(),
                self.rank
            )));
        }
        Ok(())
    }

    fn pairing_f(&self, v: &[f64], w: &[f64]) -> f64 {
        let r = self.rank;
        let mut s = 0.0;
        for i in 0..r {
            let row = &self.gram[i * r..(i + 1) * r];
            let gw: f64 = row.iter().zip(w).map(|(g, x)| g * x).sum();
            s += v[i] * gw;
        }
        s
    }

    /// `vᵀ G w`.
    pub fn pairing(&self, v: &LatticeVector, w: &LatticeVector) -> Result<f64> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.pairing_f(&as_f64(v), &as_f64(w)))
    }

    /// `vᵀ G v`, the canonical height of the corresponding point.
    pub fn height(&self, v: &LatticeVector) -> Result<f64> {
        self.pairing(v, v)
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<f64> {
        Ok(self.height(v)?.max(0.0).sqrt())
    }

    /// Cosine of the angle between `v` and `w`, clamped to `[-1, 1]`.
    pub fn cosine(&self, v: &LatticeVector, w: &LatticeVector) -> Result<f64> {
        let nv = self.norm(v)?;
        let nw = self.norm(w)?;
        if nv * nw <= 0.0 {
            return Err(Error::input("cosine with a zero-norm vector"));
        }
        Ok((self.pairing(v, w)? / (nv * nw)).clamp(-1.0, 1.0))
    }

    /// Cosine for real coordinate vectors.
    pub fn cosine_f(&self, v: &[f64], w: &[f64]) -> f64 {
        let nv = self.pairing_f(v, v).max(0.0).sqrt();
        let nw = self.pairing_f(w, w).max(0.0).sqrt();
        (self.pairing_f(v, w) / (nv * nw)).clamp(-1.0, 1.0)
    }

    pub fn height_f(&self, v: &[f64]) -> f64 {
        self.pairing_f(v, v)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &MWLattice) -> MWLattice {
        let r = self.rank + other.rank;
        let mut gram = vec![0.0; r * r];
        for i in 0..self.rank {
            for j in 0..self.rank {
                gram[i * r + j] = self.entry(i, j);
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                gram[(self.rank + i) * r + self.rank + j] = other.entry(i, j);
            }
        }
        let source = if self.source == other.source {
            self.source
        } else {
            LatticeSource::Synthetic
        };
        MWLattice { rank: r, gram, source }
    }

    /// Upper-triangular Cholesky factor `R` with `G = RᵀR`, row-major.
    /// Fails for semidefinite Gram matrices.
    pub fn cholesky_upper(&self) -> Result<Vec<f64>> {
        let r = self.rank;
        if r == 0 {
            return Ok(Vec::new());
        }
        let chol = nalgebra::Cholesky::new(self.matrix())
            .ok_or_else(|| Error::input("Gram matrix is not positive definite (unbounded fibres)"))?;
        let l = chol.l();
        let min_pivot = (0..r).map(|i| l[(i, i)]).fold(f64::INFINITY, f64::min);
        let max_pivot = (0..r).map(|i| l[(i, i)]).fold(0.0, f64::max);
        if min_pivot <= max_pivot * 1e-7 {
            return Err(Error::input(format!(
                "Gram matrix is numerically semidefinite (Cholesky pivot {min_pivot:e})"
            )));
        }
        let mut up = vec![0.0; r * r];
        for i in 0..r {
            for j in i..r {
                up[i * r + j] = l[(j, i)];
            }
        }
        Ok(up)
    }

    pub fn enumerate_ball(&self, radius: f64) -> Result<Vec<LatticeVector>> {
        self.enumerate_ball_capped(radius, DEFAULT_ENUMERATION_CAP)
    }

    /// All `v` with `vᵀGv <= radius²` (plus a relative slack of `1e-12`),
    /// sorted lexicographically. Fincke-Pohst: the last coordinate is
    /// bounded first and each earlier coordinate lies in an interval fixed by
    /// the later ones.
    pub fn enumerate_ball_capped(&self, radius: f64, cap: usize) -> Result<Vec<LatticeVector>> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::input(format!("radius must be finite and >= 0, got {radius}")));
        }
        let r = self.rank;
        if r == 0 {
            return Ok(vec![LatticeVector(Vec::new())]);
        }
        let up = self.cholesky_upper()?;
        let bound = radius * radius * (1.0 + 1e-12) + 1e-12;
        let mut out = Vec::new();
        let mut coords = vec![0i64; r];
        let mut state = Enum {
            up: &up,
            r,
            bound,
            cap,
            out: &mut out,
        };
        state.recurse(r, &mut coords, 0.0)?;
        // exact filter on the quadratic form itself
        let filtered: Vec<LatticeVector> = out.into_iter().filter(|v| self.height_f(&as_f64(v)) <= bound).collect();
        let mut filtered = filtered;
        filtered.sort();
        Ok(filtered)
    }
}

/// Default cap on the number of enumerated vectors.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

struct Enum<'a> {
    up: &'a [f64],
    r: usize,
    bound: f64,
    cap: usize,
    out: &'a mut Vec<LatticeVector>,
}

impl Enum<'_> {
    // Coordinates `level..r` are fixed; `partial` is the contribution of
    // those rows of `R v`.
    fn recurse(&mut self, level: usize, coords: &mut [i64], partial: f64) -> Result<()> {
        if level == 0 {
            if self.out.len() >= self.cap {
                return Err(Error::resource(format!(
                    "ball enumeration exceeded {} vectors",
                    self.cap
                )));
            }
            self.out.push(LatticeVector(coords.to_vec()));
            return Ok(());
        }
        let i = level - 1;
        let r = self.r;
        let rii = self.up[i * r + i];
        let shift: f64 = (i + 1..r).map(|j| self.up[i * r + j] * coords[j] as f64).sum::<f64>() / rii;
        let room = (self.bound - partial).max(0.0);
        let half = room.sqrt() / rii + 1e-9;
        let lo = (-shift - half).ceil() as i64;
        let hi = (-shift + half).floor() as i64;
        for c in lo..=hi {
            let t = rii * (c as f64 + shift);
            let p = partial + t * t;
            if p <= self.bound * (1.0 + 1e-12) + 1e-12 {
                coords[i] = c;
                self.recurse(level - 1, coords, p)?;
            }
        }
        coords[i] = 0;
        Ok(())
    }
}

fn as_f64(v: &LatticeVector) -> Vec<f64> {
    v.0.iter().map(|&c| c as f64).collect()
}

/// Gram matrix of the given generators from canonical heights. Entries are
/// `ĥ(γ_i)` on the diagonal and `⟨γ_i, γ_j⟩` off it.
pub fn lattice_from_curve(curve: &EllipticCurveQ, generators: &[ECPoint], tol: f64) -> Result<MWLattice> {
    let r = generators.len();
    let mut gram = vec![0.0; r * r];
    for (i, g) in generators.iter().enumerate() {
        gram[i * r + i] = canonical_height(curve, g, tol)?.value;
    }
    for i in 0..r {
        for j in i + 1..r {
            let p = nt_pairing(curve, &generators[i], &generators[j], tol)?;
            gram[i * r + j] = p;
            gram[j * r + i] = p;
        }
    }
    let lat = MWLattice {
        rank: r,
        gram,
        source: LatticeSource::CurveDerived,
    };
    let min = lat.min_eigenvalue();
    if min < -10.0 * tol {
        log::warn!("curve-derived Gram matrix has eigenvalue {min:e} below -10·tol");
    }
    Ok(lat)
}

/// The point `Σ [n_i] γ_i` for a lattice vector.
pub fn combine(curve: &EllipticCurveQ, generators: &[ECPoint], v: &LatticeVector) -> Result<ECPoint> {
    curve.combination(generators, v.coords())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heights_on_small_forms() {
        let one = MWLattice::synthetic(1, vec![1.0]).unwrap();
        assert_eq!(one.height(&vec![3].into()).unwrap(), 9.0);
        let two = MWLattice::synthetic(2, vec![2.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(two.height(&vec![1, 1].into()).unwrap(), 4.0);
        assert_eq!(two.height(&LatticeVector::zero(2)).unwrap(), 0.0);
        assert!(two.height(&vec![1].into()).is_err());
    }

    #[test]
    fn cosine_cases() {
        let id = MWLattice::identity(2);
        let v: LatticeVector = vec![1, 0].into();
        let w: LatticeVector = vec![0, 1].into();
        assert_eq!(id.cosine(&v, &w).unwrap(), 0.0);
        assert_eq!(id.cosine(&v, &v).unwrap(), 1.0);
        assert!(id.cosine(&v, &LatticeVector::zero(2)).is_err());
    }

    #[test]
    fn rejects_bad_gram() {
        assert!(MWLattice::synthetic(2, vec![1.0, 2.0, 2.0, 1.0]).is_err());
        assert!(MWLattice::synthetic(2, vec![1.0, 0.5, 0.0, 1.0]).is_err());
        assert!(MWLattice::synthetic(2, vec![1.0]).is_err());
        assert!(MWLattice::synthetic(2, vec![1.0, 1.0, 1.0, 1.0]).is_ok());
    }

    #[test]
    fn ball_examples() {
        let one = MWLattice::synthetic(1, vec![1.0]).unwrap();
        let got: Vec<i64> = one.enumerate_ball(2.5).unwrap().iter().map(|v| v.0[0]).collect();
        assert_eq!(got, vec![-2, -1, 0, 1, 2]);
        assert_eq!(one.enumerate_ball(0.0).unwrap(), vec![LatticeVector(vec![0])]);
        let hex = MWLattice::synthetic(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(hex.enumerate_ball(1.5).unwrap().len(), 7);
        let flat = MWLattice::synthetic(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(flat.enumerate_ball(1.0).is_err());
    }

    #[test]
    fn enumeration_cap_is_a_resource_error() {
        let id = MWLattice::identity(3);
        match id.enumerate_ball_capped(10.0, 100) {
            Err(Error::Resource(_)) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serde_validates() {
        let lat: MWLattice = serde_json::from_str(r#"{"rank":1,"gram":[2.0]}"#).unwrap();
        assert_eq!(lat.source(), LatticeSource::Synthetic);
        assert!(serde_json::from_str::<MWLattice>(r#"{"rank":1,"gram":[-2.0]}"#).is_err());
        let s = serde_json::to_string(&lat).unwrap();
        assert_eq!(s, r#"{"rank":1,"gram":[2.0],"source":"synthetic"}"#);
    }
}

//! Cone covers with an angle condition and greedy ball covers, each with a
//! count certificate.

use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeVector, MWLattice};
use crate::{Error, Result};

/// `floor((1 + sqrt(8 c4))^rank)`, saturating.
pub fn cone_count_bound(rank: usize, c4: f64) -> u128 {
    (1.0 + (8.0 * c4).sqrt()).powi(rank as i32).floor() as u128
}

/// `floor((1 + 2R/r)^rank)`, saturating.
pub fn ball_count_bound(rank: usize, big_r: f64, r: f64) -> u128 {
    (1.0 + 2.0 * big_r / r).powi(rank as i32).floor() as u128
}

/// Minimum cosine between a vector and its cone axis. Two vectors within
/// angle `θ` of one axis are within `2θ` of each other, and
/// `cos 2θ = 2cos²θ - 1 = 1 - 1/c4`.
pub fn axis_threshold(c4: f64) -> f64 {
    (1.0 - 1.0 / (2.0 * c4)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConeCoverConfig {
    /// Hard cap on axes, independent of the certified bound.
    pub max_axes: usize,
}

impl Default for ConeCoverConfig {
    fn default() -> Self {
        ConeCoverConfig { max_axes: 2_000_000 }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(usize),
    Split {
        dim: usize,
        mid: f64,
        left: usize,
        right: usize,
    },
}

/// A finite family of cones covering `Γ ⊗ R`.
///
/// Built in Euclidean coordinates `y = R v` (with `G = RᵀR`): the surface of
/// the cube `[-1, 1]^rank` is split into its `2·rank` facets and each facet
/// is bisected along its longest edge until every box fits inside one
/// angular cap around the normalized box centre. A cap of half-angle `< 90°`
/// is a convex cone, so checking the box corners suffices.
#[derive(Clone, Debug)]
pub struct ConeCover {
    ambient_rank: usize,
    c4: f64,
    threshold: f64,
    axes: Vec<Vec<f64>>,
    axes_euclid: Vec<Vec<f64>>,
    bound: u128,
    chol: Vec<f64>,
    nodes: Vec<Node>,
    // root node per (facet, sign) pair, in order (0,+), (0,-), (1,+), ...
    roots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCoverCertificate {
    pub ambient_rank: usize,
    pub c4: f64,
    pub axis_threshold: f64,
    pub pairwise_threshold: f64,
    pub axis_count: usize,
    pub bound: u128,
    pub axes: Vec<Vec<f64>>,
}

pub fn build_cone_cover(lat: &MWLattice, c4: f64) -> Result<ConeCover> {
    build_cone_cover_with(lat, c4, &ConeCoverConfig::default())
}

pub fn build_cone_cover_with(lat: &MWLattice, c4: f64, cfg: &ConeCoverConfig) -> Result<ConeCover> {
    if !(c4 > 1.0) || !c4.is_finite() {
        return Err(Error::input(format!("c4 must be a finite number > 1, got {c4}")));
    }
    let rank = lat.rank();
    let chol = lat.cholesky_upper()?;
    let threshold = axis_threshold(c4);
    let bound = cone_count_bound(rank, c4);
    let mut b = Builder {
        rank,
        threshold,
        bound,
        max_axes: cfg.max_axes,
        nodes: Vec::new(),
        axes_euclid: Vec::new(),
    };
    let mut roots = Vec::new();
    for facet in 0..rank {
        for sign in [1.0, -1.0] {
            let lo = vec![-1.0; rank - 1];
            let hi = vec![1.0; rank - 1];
            roots.push(b.build(facet, sign, lo, hi)?);
        }
    }
    let axes = b.axes_euclid.iter().map(|y| back_substitute(&chol, rank, y)).collect();
    Ok(ConeCover {
        ambient_rank: rank,
        c4,
        threshold,
        axes,
        axes_euclid: b.axes_euclid,
        bound,
        chol,
        nodes: b.nodes,
        roots,
    })
}

struct Builder {
    rank: usize,
    threshold: f64,
    bound: u128,
    max_axes: usize,
    nodes: Vec<Node>,
    axes_euclid: Vec<Vec<f64>>,
}

fn embed(facet: usize, sign: f64, x: &[f64]) -> Vec<f64> {
    let mut y = Vec::with_capacity(x.len() + 1);
    y.extend_from_slice(&x[..facet]);
    y.push(sign);
    y.extend_from_slice(&x[facet..]);
    y
}

fn unit(mut y: Vec<f64>) -> Vec<f64> {
    let n = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    y.iter_mut().for_each(|a| *a /= n);
    y
}

fn cos_euclid(a: &[f64], unit_b: &[f64]) -> f64 {
    let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    a.iter().zip(unit_b).map(|(x, y)| x * y).sum::<f64>() / n
}

impl Builder {
    fn build(&mut self, facet: usize, sign: f64, lo: Vec<f64>, hi: Vec<f64>) -> Result<usize> {
        let centre: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
        let axis = unit(embed(facet, sign, &centre));
        if self.corners_inside(facet, sign, &lo, &hi, &axis) {
            let count = self.axes_euclid.len() + 1;
            if count as u128 > self.bound {
                return Err(Error::certificate(format!(
                    "cone cover needs more than {} axes (the count bound)",
                    self.bound
                )));
            }
            if count > self.max_axes {
                return Err(Error::resource(format!("cone cover exceeded {} axes", self.max_axes)));
            }
            self.axes_euclid.push(axis);
            self.nodes.push(Node::Leaf(count - 1));
            return Ok(self.nodes.len() - 1);
        }
        // longest edge, lowest index on ties
        let dim = (0..lo.len())
            .max_by(|&i, &j| (hi[i] - lo[i]).total_cmp(&(hi[j] - lo[j])).then(j.cmp(&i)))
            .expect("rank >= 2 when a facet box is split");
        let mid = (lo[dim] + hi[dim]) / 2.0;
        let mut left_hi = hi.clone();
        left_hi[dim] = mid;
        let mut right_lo = lo.clone();
        right_lo[dim] = mid;
        let left = self.build(facet, sign, lo, left_hi)?;
        let right = self.build(facet, sign, right_lo, hi)?;
        self.nodes.push(Node::Split { dim, mid, left, right });
        Ok(self.nodes.len() - 1)
    }

    fn corners_inside(&self, facet: usize, sign: f64, lo: &[f64], hi: &[f64], axis: &[f64]) -> bool {
        let k = lo.len();
        let mut corner = vec![0.0; k];
        for mask in 0u64..(1u64 << k) {
            for i in 0..k {
                corner[i] = if mask >> i & 1 == 1 { hi[i] } else { lo[i] };
            }
            if cos_euclid(&embed(facet, sign, &corner), axis) < self.threshold + 1e-12 {
                return false;
            }
        }
        debug_assert!(self.rank >= 1);
        true
    }
}

// Solves R v = y for upper-triangular row-major R.
fn back_substitute(r: &[f64], n: usize, y: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| r[i * n + j] * v[j]).sum();
        v[i] = (y[i] - s) / r[i * n + i];
    }
    v
}

impl ConeCover {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn c4(&self) -> f64 {
        self.c4
    }

    /// Minimum cosine between a member vector and its axis.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Axes in lattice coordinates, each of Néron-Tate norm 1.
    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn bound(&self) -> u128 {
        self.bound
    }

    fn euclid(&self, v: &[f64]) -> Vec<f64> {
        let n = self.ambient_rank;
        (0..n)
            .map(|i| (i..n).map(|j| self.chol[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Cone index for a real coordinate vector.
    pub fn assign_f(&self, v: &[f64]) -> Result<usize> {
        let n = self.ambient_rank;
        if v.len() != n {
            return Err(Error::input(format!(
                "vector of length {} for a rank {n} cover",
                v.len()
            )));
        }
        let y = self.euclid(v);
        let facet = (0..n)
            .max_by(|&i, &j| y[i].abs().total_cmp(&y[j].abs()).then(j.cmp(&i)))
            .ok_or_else(|| Error::input("rank 0 cover has no cones"))?;
        let m = y[facet].abs();
        if m == 0.0 {
            return Err(Error::input("zero vector has no cone"));
        }
        let sign = if y[facet] > 0.0 { 0 } else { 1 };
        let x: Vec<f64> = y
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != facet)
            .map(|(_, a)| a / m)
            .collect();
        let mut node = self.roots[2 * facet + sign];
        let leaf = loop {
            match &self.nodes[node] {
                Node::Leaf(i) => break *i,
                Node::Split { dim, mid, left, right } => node = if x[*dim] <= *mid { *left } else { *right },
            }
        };
        let slack = 1e-9;
        if cos_euclid(&y, &self.axes_euclid[leaf]) >= self.threshold - slack {
            return Ok(leaf);
        }
        // rounding at a cell boundary: take the lowest admissible index
        self.axes_euclid
            .iter()
            .position(|a| cos_euclid(&y, a) >= self.threshold - slack)
            .ok_or_else(|| Error::certificate(format!("no cone admits direction {v:?}")))
    }

    /// Index of a cone whose angle condition `v` satisfies.
    pub fn assign_to_cone(&self, v: &LatticeVector) -> Result<usize> {
        if v.is_zero() {
            return Err(Error::input("zero vector has no cone"));
        }
        let f: Vec<f64> = v.coords().iter().map(|&c| c as f64).collect();
        self.assign_f(&f)
    }

    pub fn certificate(&self) -> ConeCoverCertificate {
        ConeCoverCertificate {
            ambient_rank: self.ambient_rank,
            c4: self.c4,
            axis_threshold: self.threshold,
            pairwise_threshold: 1.0 - 1.0 / self.c4,
            axis_count: self.axes.len(),
            bound: self.bound,
            axes: self.axes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallCoverCertificate {
    pub rank: usize,
    pub centers: Vec<LatticeVector>,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: f64,
    pub bound: u128,
    /// Index into `centers` covering each input point.
    pub assignment: Vec<usize>,
}

/// Greedy cover of `points` by balls of radius `r` centred at input points.
/// Points are scanned in order; an uncovered point becomes a new centre, so
/// centres are pairwise more than `r` apart and the balls of radius `r/2`
/// around them are disjoint inside the ball of radius `R + r/2`.
pub fn greedy_ball_cover(
    lat: &MWLattice,
    points: &[LatticeVector],
    center: &LatticeVector,
    big_r: f64,
    r: f64,
) -> Result<BallCoverCertificate> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::input(format!("covering radius must be positive, got {r}")));
    }
    if !(big_r >= 0.0) || !big_r.is_finite() {
        return Err(Error::input(format!("enclosing radius must be >= 0, got {big_r}")));
    }
    for p in points {
        let d = lat.norm(&p.sub(center))?;
        if d > big_r * (1.0 + 1e-9) + 1e-9 {
            return Err(Error::input(format!(
                "point {p} lies at distance {d} > R = {big_r} from the centre"
            )));
        }
    }
    let mut centers: Vec<LatticeVector> = Vec::new();
    let mut assignment = Vec::with_capacity(points.len());
    for p in points {
        let mut hit = None;
        for (i, c) in centers.iter().enumerate() {
            if lat.norm(&p.sub(c))? <= r {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => assignment.push(i),
            None => {
                assignment.push(centers.len());
                centers.push(p.clone());
            }
        }
    }
    let bound = ball_count_bound(lat.rank(), big_r, r);
    if centers.len() as u128 > bound {
        return Err(Error::certificate(format!(
            "greedy cover used {} centres, bound is {bound}",
            centers.len()
        )));
    }
    Ok(BallCoverCertificate {
        rank: lat.rank(),
        centers,
        big_r,
        r,
        bound,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(cone_count_bound(2, 2.0), 25);
        assert_eq!(cone_count_bound(0, 2.0), 1);
        assert_eq!(ball_count_bound(3, 1.5, 1.5), 27);
    }

    #[test]
    fn rank_one_and_zero() {
        let lat = MWLattice::synthetic(1, vec![1.0]).unwrap();
        let cover = build_cone_cover(&lat, 2.0).unwrap();
        assert_eq!(cover.len(), 2);
        let minus = cover.assign_to_cone(&vec![-5].into()).unwrap();
        assert!(cover.axes()[minus][0] < 0.0);
        let plus = cover.assign_to_cone(&vec![3].into()).unwrap();
        assert_ne!(plus, minus);
        let zero = build_cone_cover(&MWLattice::identity(0), 2.0).unwrap();
        assert!(zero.is_empty());
    }

    #[test]
    fn rejects_small_c4() {
        assert!(build_cone_cover(&MWLattice::identity(2), 1.0).is_err());
    }

    #[test]
    fn axes_have_unit_norm_and_parallel_vectors_land_on_them() {
        let lat = MWLattice::synthetic(3, vec![2.0, 0.5, 0.1, 0.5, 1.5, -0.3, 0.1, -0.3, 1.0]).unwrap();
        let cover = build_cone_cover(&lat, 3.0).unwrap();
        assert!(cover.len() as u128 <= cover.bound());
        for a in cover.axes() {
            assert!((lat.height_f(a) - 1.0).abs() < 1e-9);
            let j = cover.assign_f(a).unwrap();
            assert!(lat.cosine_f(a, &cover.axes()[j]) >= cover.threshold() - 1e-9);
        }
    }

    #[test]
    fn greedy_line_example() {
        let lat = MWLattice::synthetic(1, vec![1.0]).unwrap();
        let pts: Vec<LatticeVector> = vec![vec![-2].into(), vec![0].into(), vec![2].into()];
        let cert = greedy_ball_cover(&lat, &pts, &LatticeVector::zero(1), 2.0, 0.5).unwrap();
        assert_eq!(cert.centers.len(), 3);
        assert_eq!(cert.bound, 9);
        let cert = greedy_ball_cover(&lat, &pts, &LatticeVector::zero(1), 2.0, 4.0).unwrap();
        assert_eq!(cert.centers.len(), 1);
        assert!(greedy_ball_cover(&lat, &pts, &LatticeVector::zero(1), 1.0, 0.5).is_err());
    }
}

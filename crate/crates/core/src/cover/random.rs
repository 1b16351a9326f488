//! Seeded random instances of the linear model.

use rand::seq::SliceRandom;
use rand::Rng;

use super::model::{AffineSubspace, LinearVarietyModel, SubspaceFamily};
use crate::Result;

const PRIMES: [u32; 3] = [2, 3, 5];

fn random_vec<R: Rng>(rng: &mut R, q: u32, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..q)).collect()
}

/// A random affine subspace of dimension exactly `dim` inside `F_q^n`.
pub fn random_subspace<R: Rng>(rng: &mut R, q: u32, n: usize, dim: usize) -> Result<AffineSubspace> {
    let dim = dim.min(n);
    loop {
        let rows = (0..dim).map(|_| random_vec(rng, q, n)).collect();
        let s = AffineSubspace::new(q, random_vec(rng, q, n), rows)?;
        if s.dim() == dim {
            return Ok(s);
        }
    }
}

/// A random subspace of `inside` with the given dimension.
pub fn random_subspace_of<R: Rng>(rng: &mut R, inside: &AffineSubspace, dim: usize) -> Result<AffineSubspace> {
    let q = inside.q();
    let dim = dim.min(inside.dim());
    let combo = |rng: &mut R| -> Vec<u32> {
        let mut v = vec![0; inside.ambient()];
        for row in inside.basis() {
            let c = rng.gen_range(0..q);
            for (x, &r) in v.iter_mut().zip(row) {
                *x = (*x + c * r) % q;
            }
        }
        v
    };
    loop {
        let off = combo(rng);
        let base = super::field::add(inside.base(), &off, q);
        let rows = (0..dim).map(|_| combo(rng)).collect();
        let s = AffineSubspace::new(q, base, rows)?;
        if s.dim() == dim {
            return Ok(s);
        }
    }
}

/// Instance of the covering procedure.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub x: AffineSubspace,
    pub m: usize,
    pub z: LinearVarietyModel,
}

/// `q` in {2,3,5}, `n <= 3`, `M <= 3`, `|X^M| <= max_power_points`; `Z` a
/// union of one to four proper subspaces of `X^M`, resampled until it is a
/// proper subset.
pub fn random_cover_instance<R: Rng>(rng: &mut R, max_power_points: usize) -> Result<CoverInstance> {
    loop {
        let q = *PRIMES.choose(rng).expect("nonempty");
        let n = rng.gen_range(1..=3);
        let dim = rng.gen_range(1..=n);
        let m = rng.gen_range(1..=3);
        let size = (q as usize).pow((dim * m) as u32);
        if size > max_power_points || q.pow(dim as u32) > 200 {
            continue;
        }
        let x = random_subspace(rng, q, n, dim)?;
        let xm = x.power(m);
        let k = rng.gen_range(1..=4);
        let comps = (0..k)
            .map(|_| {
                let d = rng.gen_range(0..xm.dim());
                random_subspace_of(rng, &xm, d)
            })
            .collect::<Result<Vec<_>>>()?;
        let z = LinearVarietyModel::new(q, n * m, comps)?;
        if z.points()?.len() < size {
            return Ok(CoverInstance { x, m, z });
        }
    }
}

/// A family of distinct subspaces of one dimension in `F_q^n`.
pub fn random_family<R: Rng>(rng: &mut R, max_members: usize) -> Result<SubspaceFamily> {
    let q = *PRIMES.choose(rng).expect("nonempty");
    let n = rng.gen_range(1..=3);
    let dim = rng.gen_range(0..n);
    let want = rng.gen_range(1..=max_members.max(1));
    let mut members: Vec<AffineSubspace> = Vec::new();
    for _ in 0..want * 4 {
        if members.len() == want {
            break;
        }
        let s = random_subspace(rng, q, n, dim)?;
        if !members.contains(&s) {
            members.push(s);
        }
    }
    SubspaceFamily::new(q, n, members)
}

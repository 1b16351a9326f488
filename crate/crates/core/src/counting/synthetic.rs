use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use super::predicates::{HeightedPointSet, IsolationOracle};
use crate::lattice::{LatticeVector, MWLattice};
use crate::rational::rational_from_f64;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapSequenceConfig {
    pub c4: f64,
    pub n_prime: u64,
    pub length: usize,
    /// Smallest multiplier; raised to `10·c4·N'` when a violation is
    /// requested.
    pub start: i64,
    /// Force `|P_{v+N'}| <= (1+1/c4)|P_v|` at this index.
    pub violate_at: Option<usize>,
    /// Direction of the sequence; the first basis vector if absent.
    pub direction: Option<LatticeVector>,
}

impl Default for GapSequenceConfig {
    fn default() -> Self {
        GapSequenceConfig {
            c4: 2.0,
            n_prime: 1,
            length: 8,
            start: 1,
            violate_at: None,
            direction: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GapSequence {
    pub set: HeightedPointSet,
    /// `P_j = multipliers[j]·direction`.
    pub multipliers: Vec<i64>,
}

/// Points `m_j·u` on one ray with `m_{j+N'} > (1+1/c4) m_j` decided in exact
/// rational arithmetic, except around `violate_at`, where the multipliers
/// advance by one for `N'` steps.
pub fn gap_sequence(lat: &MWLattice, cfg: &GapSequenceConfig) -> Result<GapSequence> {
    if !(cfg.c4 > 1.0) {
        return Err(Error::input(format!("c4 must exceed 1, got {}", cfg.c4)));
    }
    if cfg.n_prime == 0 || cfg.start < 1 {
        return Err(Error::input("N' and the start multiplier must be positive"));
    }
    let dir = match &cfg.direction {
        Some(u) => u.clone(),
        None if lat.rank() > 0 => LatticeVector::unit(lat.rank(), 0),
        None => return Err(Error::input("rank-0 lattice has no rays")),
    };
    if dir.len() != lat.rank() || dir.is_zero() {
        return Err(Error::input("direction must be a nonzero vector of the lattice rank"));
    }
    let c4 = rational_from_f64(cfg.c4)?;
    let (p, q) = (c4.numer().clone(), c4.denom().clone());
    let np = cfg.n_prime as usize;
    let mut start = BigInt::from(cfg.start);
    if cfg.violate_at.is_some() {
        let floor = (BigInt::from(10u64 * cfg.n_prime) * &p) / &q + 1;
        start = start.max(floor);
    }
    let mut ms: Vec<BigInt> = Vec::with_capacity(cfg.length);
    let plateau = |i: usize| matches!(cfg.violate_at, Some(v) if i > v && i <= v + np);
    for i in 0..cfg.length {
        let m = if i == 0 {
            start.clone()
        } else if i < np || plateau(i) {
            &ms[i - 1] + 1
        } else {
            // smallest m with m·p > (p+q)·m_{i-N'}
            let need: BigInt = (&p + &q) * &ms[i - np] / &p + 1;
            need.max(&ms[i - 1] + 1)
        };
        ms.push(m);
    }
    if let Some(v) = cfg.violate_at {
        if v + np >= cfg.length {
            return Err(Error::input(format!("violation index {v} needs length > {}", v + np)));
        }
        if &ms[v + np] * &p > (&p + &q) * &ms[v] {
            return Err(Error::input("could not place the requested violation"));
        }
    }
    let mut multipliers = Vec::with_capacity(ms.len());
    let mut points = Vec::with_capacity(ms.len());
    for m in &ms {
        let m = m.to_i64().ok_or_else(|| Error::resource("multiplier overflows i64"))?;
        let coords = dir
            .coords()
            .iter()
            .map(|&c| c.checked_mul(m))
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| Error::resource("coordinate overflows i64"))?;
        multipliers.push(m);
        points.push(LatticeVector(coords));
    }
    let set = HeightedPointSet::new(lat.clone(), points, IsolationOracle::AlwaysTrue)?;
    Ok(GapSequence { set, multipliers })
}

/// `count` distinct lattice points with coordinates in `[-bound, bound]`,
/// drawn from a seeded stream.
pub fn random_point_set(lat: &MWLattice, count: usize, bound: i64, seed: u64) -> Result<HeightedPointSet> {
    if bound < 0 {
        return Err(Error::input("coordinate bound must be >= 0"));
    }
    let side = BigInt::from(2 * bound as i128 + 1);
    let total = num_traits::pow(side, lat.rank());
    if BigInt::from(count) > total {
        return Err(Error::input(format!(
            "only {total} points fit in the box, asked for {count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let v: Vec<i64> = (0..lat.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
        if seen.insert(v.clone()) {
            points.push(LatticeVector(v));
        }
    }
    HeightedPointSet::new(lat.clone(), points, IsolationOracle::AlwaysTrue)
}

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ledger::gap_exponent;
use crate::lattice::{LatticeVector, MWLattice};
use crate::{Error, Result};

/// Relative slack for the non-strict geometric inequalities.
pub const PREDICATE_SLACK: f64 = 1e-9;

fn geq(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - PREDICATE_SLACK * rhs.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolationEntry {
    pub tuple: Vec<usize>,
    pub isolated: bool,
}

/// Answers whether a tuple of points is isolated in its fibre. Tuples are
/// ordered: the first index is the base point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsolationOracle {
    /// Distinct points are isolated; the modelling choice for curves.
    #[default]
    AlwaysTrue,
    AlwaysFalse,
    Table(Vec<IsolationEntry>),
}

impl IsolationOracle {
    pub fn query(&self, tuple: &[usize]) -> Result<bool> {
        match self {
            IsolationOracle::AlwaysTrue => Ok(true),
            IsolationOracle::AlwaysFalse => Ok(false),
            IsolationOracle::Table(t) => t
                .iter()
                .find(|e| e.tuple == tuple)
                .map(|e| e.isolated)
                .ok_or_else(|| Error::input(format!("isolation oracle has no answer for {tuple:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr")]
pub struct HeightedPointSet {
    lattice: MWLattice,
    points: Vec<LatticeVector>,
    #[serde(default)]
    isolation: IsolationOracle,
}

#[derive(Deserialize)]
struct PointSetRepr {
    lattice: MWLattice,
    points: Vec<LatticeVector>,
    #[serde(default)]
    isolation: IsolationOracle,
}

impl TryFrom<PointSetRepr> for HeightedPointSet {
    type Error = Error;
    fn try_from(r: PointSetRepr) -> Result<Self> {
        HeightedPointSet::new(r.lattice, r.points, r.isolation)
    }
}

impl HeightedPointSet {
    pub fn new(lattice: MWLattice, points: Vec<LatticeVector>, isolation: IsolationOracle) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if p.len() != lattice.rank() {
                return Err(Error::input(format!(
                    "point {i} has {} coordinates, lattice rank is {}",
                    p.len(),
                    lattice.rank()
                )));
            }
            if !seen.insert(p.coords().to_vec()) {
                return Err(Error::input(format!("point {p} occurs twice")));
            }
        }
        Ok(HeightedPointSet {
            lattice,
            points,
            isolation,
        })
    }

    pub fn lattice(&self) -> &MWLattice {
        &self.lattice
    }

    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    pub fn isolation(&self) -> &IsolationOracle {
        &self.isolation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Result<&LatticeVector> {
        self.points
            .get(i)
            .ok_or_else(|| Error::input(format!("point index {i} out of range ({} points)", self.points.len())))
    }

    pub fn norm(&self, i: usize) -> Result<f64> {
        self.lattice.norm(self.point(i)?)
    }

    fn pairing(&self, i: usize, j: usize) -> Result<f64> {
        self.lattice.pairing(self.point(i)?, self.point(j)?)
    }

    /// `<P_i, P_j> >= (1 - 1/c4)|P_i||P_j|`.
    pub fn close_angle(&self, i: usize, j: usize, c4: f64) -> Result<bool> {
        let rhs = (1.0 - 1.0 / c4) * self.norm(i)? * self.norm(j)?;
        Ok(geq(self.pairing(i, j)?, rhs))
    }
}

fn check_c4(c4: f64) -> Result<()> {
    if !(c4 > 1.0) || !c4.is_finite() {
        return Err(Error::input(format!("c4 must be a finite number > 1, got {c4}")));
    }
    Ok(())
}

/// Consecutive points make a small angle and grow in norm by a factor
/// `c4`.
pub fn vojta_hypotheses(set: &HeightedPointSet, indices: &[usize], c4: f64) -> Result<bool> {
    check_c4(c4)?;
    for &i in indices {
        set.point(i)?;
    }
    for w in indices.windows(2) {
        let (i, j) = (w[0], w[1]);
        if !set.close_angle(i, j, c4)? || !geq(set.norm(j)?, c4 * set.norm(i)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every other point makes a small angle with `P_{i0}` and has nearly the
/// same norm, and the oracle reports the tuple isolated.
pub fn mumford_hypotheses(set: &HeightedPointSet, i0: usize, others: &[usize], c4: f64) -> Result<bool> {
    check_c4(c4)?;
    let n0 = set.norm(i0)?;
    for &i in others {
        set.point(i)?;
    }
    let mut tuple = vec![i0];
    tuple.extend_from_slice(others);
    let isolated = set.isolation.query(&tuple)?;
    for &i in others {
        if !set.close_angle(i0, i, c4)? {
            return Ok(false);
        }
        if !geq(n0 / c4, (n0 - set.norm(i)?).abs()) {
            return Ok(false);
        }
    }
    Ok(isolated)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapAudit {
    pub m: u64,
    pub n_prime: u64,
    /// Number of audited points minus one.
    pub n: usize,
    /// `g·M·N'`; a run inside one cone has `n` strictly below it.
    pub claimed_max_run: BigInt,
    pub within_bound: bool,
    /// Indices `j` (into `cone_points`) where `|P_{j+N'}| > (1+1/c4)|P_j|`
    /// fails.
    pub violations: Vec<usize>,
}

/// Audits one cone's points, sorted by norm, against the growth
/// `|P_{j+N'}| > (1+1/c4)|P_j|`.
pub fn gap_sequence_audit(
    set: &HeightedPointSet,
    cone_points: &[usize],
    c4: f64,
    n_prime: u64,
    g: u64,
) -> Result<GapAudit> {
    check_c4(c4)?;
    if n_prime == 0 {
        return Err(Error::input("N' must be positive"));
    }
    let norms = cone_points.iter().map(|&i| set.norm(i)).collect::<Result<Vec<_>>>()?;
    for (k, w) in norms.windows(2).enumerate() {
        if !geq(w[1], w[0]) {
            return Err(Error::input(format!(
                "cone points not sorted by norm at position {}: {} > {}",
                k + 1,
                w[0],
                w[1]
            )));
        }
    }
    for (a, &i) in cone_points.iter().enumerate() {
        for &j in &cone_points[a + 1..] {
            if !set.close_angle(i, j, c4)? {
                return Err(Error::input(format!("points {i} and {j} are not in one cone")));
            }
        }
    }
    let m = gap_exponent(c4)?;
    let step = n_prime as usize;
    let violations = (0..norms.len().saturating_sub(step))
        // ties within the slack count as violations: growth must be strict
        .filter(|&j| geq((1.0 + 1.0 / c4) * norms[j], norms[j + step]))
        .collect();
    let claimed_max_run = BigInt::from(g) * m * n_prime;
    let n = cone_points.len().saturating_sub(1);
    Ok(GapAudit {
        m,
        n_prime,
        n,
        within_bound: BigInt::from(n) < claimed_max_run,
        claimed_max_run,
        violations,
    })
}

/// Groups point indices by an assignment, keeping first-seen group order.
pub(crate) fn group_by(assign: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut order = Vec::new();
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &a) in assign.iter().enumerate() {
        groups
            .entry(a)
            .or_insert_with(|| {
                order.push(a);
                Vec::new()
            })
            .push(i);
    }
    order
        .into_iter()
        .map(|a| (a, groups.remove(&a).unwrap_or_default()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(ms: &[i64], oracle: IsolationOracle) -> HeightedPointSet {
        let pts = ms.iter().map(|&m| LatticeVector(vec![m])).collect();
        HeightedPointSet::new(MWLattice::identity(1), pts, oracle).unwrap()
    }

    #[test]
    fn vojta_examples() {
        let s = line(&[1, 4, 16, 2, -4], IsolationOracle::AlwaysTrue);
        assert!(vojta_hypotheses(&s, &[0, 1, 2], 4.0).unwrap());
        assert!(!vojta_hypotheses(&s, &[0, 3], 4.0).unwrap());
        assert!(!vojta_hypotheses(&s, &[0, 4], 4.0).unwrap());
        assert!(vojta_hypotheses(&s, &[0, 9], 4.0).is_err());
    }

    #[test]
    fn mumford_examples() {
        let s = line(&[4, 5, 6, -4], IsolationOracle::AlwaysTrue);
        assert!(mumford_hypotheses(&s, 0, &[1], 4.0).unwrap());
        assert!(!mumford_hypotheses(&s, 0, &[2], 4.0).unwrap());
        assert!(!mumford_hypotheses(&s, 0, &[3], 4.0).unwrap());
        let s = line(&[4, 5], IsolationOracle::AlwaysFalse);
        assert!(!mumford_hypotheses(&s, 0, &[1], 4.0).unwrap());
        let t = IsolationOracle::Table(vec![IsolationEntry {
            tuple: vec![0, 1],
            isolated: true,
        }]);
        let s = line(&[4, 5], t);
        assert!(mumford_hypotheses(&s, 0, &[1], 4.0).unwrap());
        assert!(mumford_hypotheses(&s, 1, &[0], 4.0).is_err());
    }

    #[test]
    fn rejects_duplicates_and_unsorted() {
        let pts = vec![LatticeVector(vec![1]), LatticeVector(vec![1])];
        assert!(HeightedPointSet::new(MWLattice::identity(1), pts, IsolationOracle::AlwaysTrue).is_err());
        let s = line(&[3, 1], IsolationOracle::AlwaysTrue);
        assert!(gap_sequence_audit(&s, &[0, 1], 2.0, 1, 1).is_err());
        let s = line(&[1, -1], IsolationOracle::AlwaysTrue);
        assert!(gap_sequence_audit(&s, &[0, 1], 2.0, 1, 1).is_err());
    }

    #[test]
    fn audit_counts_violations() {
        let s = line(&[2, 3, 4, 5, 8], IsolationOracle::AlwaysTrue);
        let a = gap_sequence_audit(&s, &[0, 1, 2, 3, 4], 2.0, 1, 2).unwrap();
        assert_eq!(a.m, 2);
        assert_eq!(a.claimed_max_run, BigInt::from(4));
        assert_eq!(a.violations, vec![0, 1, 2]);
        assert_eq!(a.n, 4);
        assert!(!a.within_bound);
    }
}

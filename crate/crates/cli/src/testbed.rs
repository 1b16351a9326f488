use std::collections::{BTreeMap, BTreeSet};

use ntbench::counting::{
    pipeline_report, ConstantLedger, HeightedPointSet, IsolationOracle, LedgerInputs, LedgerValue, PipelineOptions,
    StepRecord, Verdict,
};
use ntbench::heights::{ECPoint, EllipticCurveQ};
use ntbench::lattice::{combine, LatticeVector, MWLattice};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::config::{CosetRelation, CurveSpec, TestbedInvariants, WorkbenchConfig};
use crate::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestbedCurve {
    pub label: String,
    pub a4: String,
    pub a6: String,
    pub generators: Vec<ECPoint>,
    pub torsion: Vec<ECPoint>,
}

/// One point `(P, Q)` of the equal-x curve, `P = t1 + Σ v_i g_i` and
/// `Q = t2 + Σ w_j h_j` with `coords = (v, w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestbedPair {
    pub p: ECPoint,
    pub q: ECPoint,
    pub coords: LatticeVector,
    /// Indices into `[O] ++ torsion` of each curve.
    pub torsion: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset: Option<CosetRelation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestbedResult {
    pub curves: [TestbedCurve; 2],
    pub height_bound: f64,
    pub combinations: usize,
    pub invariants: TestbedInvariants,
    pub notes: Vec<String>,
    /// Every pair in the box, including those on excluded cosets.
    pub pairs: Vec<TestbedPair>,
    pub excluded: usize,
    pub empirical_count: usize,
    pub certified_bound: LedgerValue,
    pub verdict: Verdict,
    pub lattice: MWLattice,
    pub ledger: ConstantLedger,
    pub pipeline_steps: Vec<StepRecord>,
}

struct Element {
    v: LatticeVector,
    t: usize,
    point: ECPoint,
}

fn testbed_curve(c: &CurveSpec) -> TestbedCurve {
    TestbedCurve {
        label: c.label.clone(),
        a4: c.a4.clone(),
        a6: c.a6.clone(),
        generators: c.generators.clone(),
        torsion: c.torsion.clone(),
    }
}

fn torsion_list(c: &CurveSpec) -> Vec<ECPoint> {
    std::iter::once(ECPoint::Infinity)
        .chain(c.torsion.iter().cloned())
        .collect()
}

fn elements(e: &EllipticCurveQ, c: &CurveSpec, ball: &[LatticeVector]) -> CliResult<Vec<Element>> {
    let tors = torsion_list(c);
    let mut out = Vec::with_capacity(ball.len() * tors.len());
    for v in ball {
        let base = combine(e, &c.generators, v)?;
        for (t, tp) in tors.iter().enumerate() {
            out.push(Element {
                v: v.clone(),
                t,
                point: e.add(tp, &base)?,
            });
        }
    }
    Ok(out)
}

fn x_key(p: &ECPoint) -> Option<BigRational> {
    p.x().cloned()
}

/// Lists the points of `{x(P) = x(Q)} ⊂ E1 × E2` whose factors lie in the
/// height box, removes declared cosets, and runs the counting pipeline on
/// the rest.
pub fn enumerate_testbed(cfg: &WorkbenchConfig) -> CliResult<TestbedResult> {
    let tb = cfg
        .testbed
        .as_ref()
        .ok_or_else(|| CliError::Config("config has no [testbed] section".into()))?;
    let (c1, c2) = (cfg.curve(&tb.pair[0])?, cfg.curve(&tb.pair[1])?);
    let (e1, e2) = (c1.curve()?, c2.curve()?);
    if !tb.exclude.is_empty() && e1 != e2 {
        return Err(CliError::Config(
            "diagonal and antidiagonal exclusions need the two curves to coincide".into(),
        ));
    }
    let (l1, l2) = (cfg.curve_lattice(&c1.label)?, cfg.curve_lattice(&c2.label)?);
    let lattice = l1.direct_sum(&l2);
    let min_eig = lattice.min_eigenvalue();
    // Gram entries are accurate to about tol, so smaller eigenvalues are noise
    let scale = lattice.gram().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if !(min_eig > 1e3 * cfg.tol * scale) {
        return Err(ntbench::Error::Input(format!(
            "Gram matrix of the testbed generators is only semidefinite (smallest eigenvalue {min_eig:e})"
        ))
        .into());
    }
    let radius = tb.height_bound.sqrt();
    let (b1, b2) = (l1.enumerate_ball(radius)?, l2.enumerate_ball(radius)?);
    let n1 = b1.len() * torsion_list(c1).len();
    let n2 = b2.len() * torsion_list(c2).len();
    let combinations = n1.saturating_mul(n2);
    if combinations > tb.max_combinations {
        return Err(ntbench::Error::Resource(format!(
            "height box gives {combinations} combinations, limit {}",
            tb.max_combinations
        ))
        .into());
    }
    let el1 = elements(&e1, c1, &b1)?;
    let el2 = elements(&e2, c2, &b2)?;
    let mut by_x: BTreeMap<Option<BigRational>, Vec<usize>> = BTreeMap::new();
    for (i, el) in el2.iter().enumerate() {
        by_x.entry(x_key(&el.point)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for a in &el1 {
        let Some(matches) = by_x.get(&x_key(&a.point)) else {
            continue;
        };
        for &j in matches {
            let b = &el2[j];
            let coset = tb.exclude.iter().copied().find(|rel| match rel {
                CosetRelation::Diagonal => a.point == b.point,
                CosetRelation::Antidiagonal => a.point == e2.neg(&b.point),
            });
            let mut coords = a.v.0.clone();
            coords.extend_from_slice(&b.v.0);
            pairs.push(TestbedPair {
                p: a.point.clone(),
                q: b.point.clone(),
                coords: LatticeVector(coords),
                torsion: [a.t, b.t],
                coset,
            });
        }
    }
    let kept: Vec<&TestbedPair> = pairs.iter().filter(|p| p.coset.is_none()).collect();
    let vectors: BTreeSet<LatticeVector> = kept.iter().map(|p| p.coords.clone()).collect();
    let set = HeightedPointSet::new(
        lattice.clone(),
        vectors.into_iter().collect(),
        IsolationOracle::AlwaysTrue,
    )?;
    let inv = &tb.invariants;
    let inputs = LedgerInputs {
        g: inv.g,
        r: inv.r,
        d: inv.d,
        l: inv.l,
        rank: lattice.rank() as u64,
        ..cfg.constants.clone()
    };
    let opts = PipelineOptions {
        reading: cfg.pipeline.reading,
        cone: cfg.pipeline.cone,
    };
    let report = pipeline_report(&set, &inputs, &opts)?;
    let empirical_count = kept.len();
    let within = empirical_count as f64 <= report.certified_bound.to_f64();
    let verdict = if report.verdict == Verdict::Certified && within {
        Verdict::Certified
    } else {
        Verdict::Violated
    };
    let mut notes = vec![
        "points at infinity on both factors count as a point of the curve".to_string(),
        "torsion translates of one lattice vector are counted as separate pairs".to_string(),
    ];
    if inv.d_is_placeholder {
        notes.push(format!(
            "degree d = {} is a placeholder, not derived from the embedding",
            inv.d
        ));
    }
    Ok(TestbedResult {
        curves: [testbed_curve(c1), testbed_curve(c2)],
        height_bound: tb.height_bound,
        combinations,
        invariants: inv.clone(),
        notes,
        excluded: pairs.len() - empirical_count,
        pairs,
        empirical_count,
        certified_bound: report.certified_bound.clone(),
        verdict,
        lattice,
        ledger: report.ledger,
        pipeline_steps: report.per_step,
    })
}

/// Rechecks every pair from its serialized coordinates: both points on
/// their curves, equal x exactly, and each point equal to the combination
/// its lattice coordinates name.
pub fn recheck_pairs(result: &TestbedResult) -> CliResult<()> {
    let curves = result
        .curves
        .iter()
        .map(|c| EllipticCurveQ::parse(&c.a4, &c.a6))
        .collect::<ntbench::Result<Vec<_>>>()?;
    let rank1 = result.curves[0].generators.len();
    for pair in &result.pairs {
        for (k, pt) in [&pair.p, &pair.q].into_iter().enumerate() {
            let c = &result.curves[k];
            let e = &curves[k];
            e.validate(pt)?;
            let coords = if k == 0 {
                &pair.coords.0[..rank1]
            } else {
                &pair.coords.0[rank1..]
            };
            let base = e.combination(&c.generators, coords)?;
            let t = if pair.torsion[k] == 0 {
                ECPoint::Infinity
            } else {
                c.torsion
                    .get(pair.torsion[k] - 1)
                    .cloned()
                    .ok_or_else(|| ntbench::Error::Input("torsion index out of range".into()))?
            };
            if &e.add(&t, &base)? != pt {
                return Err(ntbench::Error::Certificate(format!("{pt} is not the combination {:?}", coords)).into());
            }
        }
        if pair.p.x() != pair.q.x() {
            return Err(ntbench::Error::Certificate(format!("{} and {} have different x", pair.p, pair.q)).into());
        }
    }
    Ok(())
}

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::ledger::{build_ledger, ConstantLedger, LedgerInputs};
use super::predicates::{gap_sequence_audit, group_by, HeightedPointSet};
use super::value::{LedgerValue, Num};
use crate::lattice::LatticeVector;
use crate::packing::{build_cone_cover_with, greedy_ball_cover, ConeCoverConfig};
use crate::{Error, Result};

/// Which set the packing hypothesis bounds for a centre `P0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypPackReading {
    /// `P` ranges over `X - P0` and `P - P0` is small: data points `x` with
    /// `|x - 2 P0| <= R0`.
    #[default]
    Appendix,
    /// `P` ranges over `X` and `P - P0` is small: `|x - P0| <= R0`.
    Body,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineOptions {
    pub reading: HypPackReading,
    pub cone: ConeCoverConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub name: String,
    pub empirical: LedgerValue,
    pub bound: LedgerValue,
    pub tag: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub inputs: LedgerInputs,
    pub reading: HypPackReading,
    pub ledger: ConstantLedger,
    pub per_step: Vec<StepRecord>,
    pub empirical_count: usize,
    pub certified_bound: LedgerValue,
    pub verdict: Verdict,
}

impl PipelineReport {
    pub fn failed_steps(&self) -> Vec<&StepRecord> {
        self.per_step.iter().filter(|s| !s.ok).collect()
    }

    /// The report itself, or a certificate error naming the failed steps.
    pub fn certify(self) -> Result<Self> {
        if self.verdict == Verdict::Certified {
            return Ok(self);
        }
        let names: Vec<String> = self
            .failed_steps()
            .iter()
            .map(|s| format!("{} ({} > {})", s.name, s.empirical, s.bound))
            .collect();
        Err(Error::certificate(format!(
            "pipeline bounds violated: {}",
            names.join("; ")
        )))
    }
}

struct Log(Vec<StepRecord>);

impl Log {
    /// Records `empirical <= bound` (or `<` when `strict`).
    fn check(&mut self, name: &str, empirical: Num, bound: Num, strict: bool, tag: &str, note: Option<String>) {
        let ord = empirical.cmp_num(&bound);
        let ok = if strict {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        self.0.push(StepRecord {
            name: name.to_string(),
            empirical: empirical.value(),
            bound: bound.value(),
            tag: tag.to_string(),
            ok,
            note,
        });
    }

    fn count(&mut self, name: &str, empirical: usize, bound: Num, tag: &str, note: Option<String>) {
        self.check(name, Num::int(empirical as i64), bound, false, tag, note);
    }
}

/// Runs the four counting steps over `set` without failing on a violated
/// bound; see [`run_pipeline`].
pub fn pipeline_report(
    set: &HeightedPointSet,
    inputs: &LedgerInputs,
    opts: &PipelineOptions,
) -> Result<PipelineReport> {
    let lat = set.lattice();
    if inputs.rank as usize != lat.rank() {
        return Err(Error::input(format!(
            "ledger rank {} differs from lattice rank {}",
            inputs.rank,
            lat.rank()
        )));
    }
    let heights = set
        .points()
        .iter()
        .map(|p| lat.height(p))
        .collect::<Result<Vec<f64>>>()?;
    let mut inputs = inputs.clone();
    if inputs.h_x.is_none() && inputs.max_point_height.is_none() {
        inputs.max_point_height = Some(heights.iter().copied().fold(0.0, f64::max));
    }
    let ledger = build_ledger(&inputs)?;
    let mut log = Log(Vec::new());
    let n = set.len();

    // Step 1: large points, cone by cone.
    let threshold = ledger.num("large height threshold")?.f();
    let large: Vec<usize> = (0..n).filter(|&i| heights[i] >= threshold).collect();
    let run_bound = ledger.num("run bound")?;
    let n_prime = ledger.integer("N'")?;
    let n_prime = u64::try_from(n_prime).map_err(|_| Error::ledger("N' does not fit in u64"))?;
    let mut max_cone = 0;
    let mut violations = 0;
    let mut cones_used = 0;
    if !large.is_empty() {
        let cover = build_cone_cover_with(lat, inputs.c4, &opts.cone)?;
        let assign = large
            .iter()
            .map(|&i| cover.assign_to_cone(&set.points()[i]))
            .collect::<Result<Vec<_>>>()?;
        let groups = group_by(&assign);
        cones_used = groups.len();
        for (_, members) in groups {
            let mut idx: Vec<usize> = members.iter().map(|&k| large[k]).collect();
            idx.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]).then(a.cmp(&b)));
            let audit = gap_sequence_audit(set, &idx, inputs.c4, n_prime, inputs.g)?;
            max_cone = max_cone.max(idx.len());
            violations += audit.violations.len();
        }
        log.count(
            "step 1: cones used",
            cones_used,
            ledger.num("cone count")?,
            "step 1: cone count",
            None,
        );
    }
    log.check(
        "step 1: large points per cone",
        Num::int(max_cone as i64),
        run_bound.clone(),
        true,
        "step 1: large points per cone < g·M·N'",
        Some(format!("{} large points in {cones_used} cones", large.len())),
    );
    log.count(
        "step 1: growth violations",
        violations,
        Num::int(0),
        "step 1: |P_{j+N'}| > (1+1/c4)|P_j| inside a cone",
        None,
    );
    let per_cone_total = ledger.num("cone count")?.mul(&run_bound);
    log.count(
        "step 1: large points",
        large.len(),
        ledger.num("large point bound")?.min(&per_cone_total),
        "step 1: (1+sqrt(8 c4))^rank·g·M·N'",
        None,
    );

    // Step 2: the height of X is removed once N''+1 points exist.
    let n_dd = ledger.num("N''")?;
    let enough = Num::int(n as i64).cmp_num(&n_dd).is_gt();
    log.0.push(StepRecord {
        name: "step 2: points available".into(),
        empirical: LedgerValue::integer(n),
        bound: n_dd.add(&Num::int(1)).value(),
        tag: "step 2: needs N''+1 distinct points".into(),
        ok: true,
        note: Some(if enough {
            "applies".into()
        } else {
            "fewer than N''+1 points; case (i) holds".into()
        }),
    });

    // Step 3: the alternative.
    let case_i = ledger.num("step 3 case (i) bound")?;
    let r2 = ledger.num("R^2")?;
    let far = ledger.num("far point bound")?;
    let in_case_i = Num::int(n as i64).cmp_num(&case_i) != Ordering::Greater;
    if in_case_i {
        log.count(
            "step 3: case (i)",
            n,
            case_i,
            "step 3 case (i): N''(8c8+1)^rank + c10^(rank+1)",
            None,
        );
    } else {
        let k = far.f().floor() as usize;
        let (q, c12) = minimal_radius_center(set, k)?;
        let qv = set.points()[q].clone();
        log.check(
            "step 3: c12^2",
            Num::Approx(c12 * c12),
            r2.clone(),
            false,
            "step 3 case (ii): c12^2 <= 2 c9 max{1,hFal}",
            Some(format!("Q = point {q}")),
        );
        let d2: Vec<f64> = set
            .points()
            .iter()
            .map(|p| lat.height(&p.sub(&qv)))
            .collect::<Result<_>>()?;
        let outside = d2.iter().filter(|&&x| x >= r2.f()).count();
        log.count(
            "step 3: far from Q",
            outside,
            far.clone(),
            "step 3 case (ii): at most c10^(rank+1)",
            None,
        );

        // Step 4: pack the ball around Q.
        let big_r = r2.f().sqrt();
        let r0 = ledger.num("R0^2")?.f().sqrt();
        let inner: Vec<LatticeVector> = set
            .points()
            .iter()
            .zip(&d2)
            .filter(|(_, &x)| x <= r2.f())
            .map(|(p, _)| p.clone())
            .collect();
        let cover = greedy_ball_cover(lat, &inner, &qv, big_r, r0)?;
        log.count(
            "step 4: balls",
            cover.centers.len(),
            ledger.num("ball count")?,
            "step 4: (1+2R/R0)^rank balls",
            None,
        );
        let per_ball = ledger.num("points per ball")?;
        let mut worst = 0;
        for c in &cover.centers {
            worst = worst.max(hyp_pack_count(set, c, r0, opts.reading)?);
        }
        log.count(
            "step 4: packing hypothesis",
            worst,
            per_ball,
            "step 4: at most c0^(rank+1) points per centre",
            Some(format!("{:?} reading", opts.reading).to_lowercase()),
        );
        log.count(
            "step 4: near Q",
            inner.len(),
            ledger.num("step 4 case (ii) bound")?.sub(&far),
            "step 4: c0(1+2 sqrt(2 c9 c0))^rank",
            None,
        );
        log.count(
            "step 4: case (ii)",
            n,
            ledger.num("step 4 case (ii) bound")?,
            "step 4: c0(1+2 sqrt(2 c9 c0))^rank + c10^(rank+1)",
            None,
        );
    }
    let bound = ledger.num("final bound")?;
    log.count("final count", n, bound.clone(), "final: c^(rank+1)", None);
    let verdict = if log.0.iter().all(|s| s.ok) {
        Verdict::Certified
    } else {
        Verdict::Violated
    };
    Ok(PipelineReport {
        inputs,
        reading: opts.reading,
        ledger,
        per_step: log.0,
        empirical_count: n,
        certified_bound: bound.value(),
        verdict,
    })
}

/// Runs the four counting steps, failing with a certificate error when any
/// empirical count exceeds its bound.
pub fn run_pipeline(set: &HeightedPointSet, inputs: &LedgerInputs, opts: &PipelineOptions) -> Result<PipelineReport> {
    pipeline_report(set, inputs, opts)?.certify()
}

/// The point `Q` minimising the radius `c12` outside of which at most `k`
/// points lie, together with that radius (the `(k+1)`-th largest distance
/// from `Q`, or 0 when there are at most `k` points). Ties go to the lower
/// index.
pub fn minimal_radius_center(set: &HeightedPointSet, k: usize) -> Result<(usize, f64)> {
    let lat = set.lattice();
    let n = set.len();
    if n == 0 {
        return Err(Error::input("no points"));
    }
    let mut best = (0, f64::INFINITY);
    let mut dist = vec![0.0; n];
    for q in 0..n {
        let qv = &set.points()[q];
        for (i, p) in set.points().iter().enumerate() {
            dist[i] = lat.height(&p.sub(qv))?.max(0.0).sqrt();
        }
        let c = if k >= n {
            0.0
        } else {
            dist.sort_by(|a, b| b.total_cmp(a));
            dist[k]
        };
        if c < best.1 {
            best = (q, c);
        }
    }
    Ok(best)
}

/// Size of the set the packing hypothesis bounds for centre `p0`.
pub fn hyp_pack_count(set: &HeightedPointSet, p0: &LatticeVector, r0: f64, reading: HypPackReading) -> Result<usize> {
    let lat = set.lattice();
    let target = match reading {
        HypPackReading::Appendix => p0.scale(2),
        HypPackReading::Body => p0.clone(),
    };
    let r0_2 = r0 * r0 * (1.0 + 1e-12);
    let mut count = 0;
    for p in set.points() {
        if lat.height(&p.sub(&target))? <= r0_2 {
            count += 1;
        }
    }
    Ok(count)
}

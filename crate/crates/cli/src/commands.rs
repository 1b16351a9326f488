use ntbench::counting::{
    build_ledger, final_count_certificate, pipeline_report, random_point_set, ConstantLedger, FinalCount,
    HeightedPointSet, IsolationOracle, LedgerInputs, PipelineOptions, PipelineReport, Verdict,
};
use ntbench::cover::{brute_force_minimal_cover, nogaalon_cover, random_cover_instance, ModelRepr, SubspaceRepr};
use ntbench::degree::{
    degree_ledger, generated_subvariety_bound, generated_subvariety_chain_bound, pfaffian_identities, DegreeEntry,
    PfaffianIdentities, PolarizationType, VarietyInvariants,
};
use ntbench::heights::{canonical_height, is_torsion, torsion_order, ECPoint, EllipticCurveQ};
use ntbench::lattice::MWLattice;
use ntbench::packing::{build_cone_cover, greedy_ball_cover, BallCoverCertificate, ConeCoverCertificate};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::WorkbenchConfig;
use crate::testbed::{enumerate_testbed, recheck_pairs, TestbedResult};
use crate::{CliError, CliResult, Command};

/// A finished command: pretty JSON, an optional CSV table and the exit
/// status (3 when a certificate was violated).
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub json: String,
    pub csv: Option<String>,
    pub status: i32,
}

fn output<T: Serialize>(report: &T, csv: Option<String>, ok: bool) -> CliResult<CommandOutput> {
    let mut json = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    Ok(CommandOutput {
        json,
        csv,
        status: if ok { 0 } else { 3 },
    })
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn split_pair(s: &str, what: &str) -> CliResult<(String, String)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::Config(format!(
            "{what} must be two comma-separated rationals, got {s:?}"
        ))),
    }
}

/// Runs one subcommand against a loaded config. `seed` overrides the
/// config's seed.
pub fn run(cfg: &WorkbenchConfig, seed: Option<u64>, cmd: &Command) -> CliResult<CommandOutput> {
    let seed = seed.unwrap_or(cfg.seed);
    match cmd {
        Command::Height {
            curve,
            label,
            point,
            tol,
        } => cmd_height(cfg, curve.as_deref(), label.as_deref(), point, tol.unwrap_or(cfg.tol)),
        Command::Lattice { curves } => cmd_lattice(cfg, curves),
        Command::Pack { c4, radius, sub_radius } => cmd_pack(
            cfg,
            c4.unwrap_or(cfg.pack.c4),
            radius.unwrap_or(cfg.pack.radius),
            sub_radius.unwrap_or(cfg.pack.sub_radius),
        ),
        Command::Degrees { g, r, d, l, kind } => {
            let c = &cfg.constants;
            let inv = VarietyInvariants::new(g.unwrap_or(c.g), r.unwrap_or(c.r), d.unwrap_or(c.d), l.unwrap_or(c.l))?;
            cmd_degrees(&inv, kind.as_deref())
        }
        Command::Ledger => cmd_ledger(&cfg.constants),
        Command::Pipeline => cmd_pipeline(cfg, seed),
        Command::Cover { instances } => cmd_cover(cfg, seed, instances.unwrap_or(cfg.cover.instances)),
        Command::Testbed => cmd_testbed(cfg),
    }
}

#[derive(Serialize)]
struct HeightReport {
    a4: String,
    a6: String,
    point: ECPoint,
    tol: f64,
    height: f64,
    error_bound: f64,
    torsion: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsion_order: Option<u32>,
}

pub fn cmd_height(
    cfg: &WorkbenchConfig,
    curve: Option<&str>,
    label: Option<&str>,
    point: &str,
    tol: f64,
) -> CliResult<CommandOutput> {
    let (a4, a6) = match (curve, label) {
        (Some(c), _) => split_pair(c, "--curve")?,
        (None, Some(l)) => {
            let c = cfg.curve(l)?;
            (c.a4.clone(), c.a6.clone())
        }
        (None, None) => return Err(CliError::Config("height needs --curve or --label".into())),
    };
    let e = EllipticCurveQ::parse(&a4, &a6)?;
    let p = if point.trim() == "O" {
        ECPoint::Infinity
    } else {
        let (x, y) = split_pair(point, "--point")?;
        ECPoint::parse(&x, &y)?
    };
    e.validate(&p)?;
    let h = canonical_height(&e, &p, tol)?;
    let torsion = is_torsion(&e, &p)?;
    let report = HeightReport {
        torsion_order: if torsion { torsion_order(&e, &p, 16)? } else { None },
        a4,
        a6,
        point: p,
        tol,
        height: h.value,
        error_bound: h.error_bound,
        torsion,
    };
    output(&report, None, true)
}

#[derive(Serialize)]
struct LatticeReport {
    lattice: MWLattice,
    determinant: f64,
    eigenvalues: Vec<f64>,
    min_eigenvalue: f64,
}

pub fn cmd_lattice(cfg: &WorkbenchConfig, curves: &[String]) -> CliResult<CommandOutput> {
    let lat = if curves.is_empty() {
        cfg.build_lattice()?
    } else {
        let mut acc: Option<MWLattice> = None;
        for c in curves {
            let l = cfg.curve_lattice(c)?;
            acc = Some(match acc {
                None => l,
                Some(a) => a.direct_sum(&l),
            });
        }
        acc.expect("nonempty")
    };
    let r = lat.rank();
    let rows = (0..r).map(|i| (0..r).map(|j| format!("{:.15e}", lat.entry(i, j))).collect());
    let header: Vec<String> = (0..r).map(|j| format!("col{j}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv = table(&header, rows)?;
    let report = LatticeReport {
        determinant: lat.determinant(),
        eigenvalues: lat.eigenvalues(),
        min_eigenvalue: lat.min_eigenvalue(),
        lattice: lat,
    };
    output(&report, Some(csv), true)
}

#[derive(Serialize)]
struct PackReport {
    rank: usize,
    radius: f64,
    points: usize,
    cones: ConeCoverCertificate,
    points_per_cone: Vec<usize>,
    balls: BallCoverCertificate,
}

pub fn cmd_pack(cfg: &WorkbenchConfig, c4: f64, radius: f64, sub_radius: f64) -> CliResult<CommandOutput> {
    let lat = cfg.build_lattice()?;
    let pts = lat.enumerate_ball(radius)?;
    let cones = build_cone_cover(&lat, c4)?;
    let mut per_cone = vec![0usize; cones.len()];
    let mut cone_of = Vec::with_capacity(pts.len());
    for p in &pts {
        if p.is_zero() {
            cone_of.push(None);
        } else {
            let k = cones.assign_to_cone(p)?;
            per_cone[k] += 1;
            cone_of.push(Some(k));
        }
    }
    let zero = ntbench::lattice::LatticeVector::zero(lat.rank());
    let balls = greedy_ball_cover(&lat, &pts, &zero, radius, sub_radius)?;
    let rows = pts.iter().enumerate().map(|(i, p)| {
        vec![
            p.to_string(),
            format!("{:.12}", lat.height(p).unwrap_or(f64::NAN)),
            cone_of[i].map_or(String::new(), |k| k.to_string()),
            balls.assignment[i].to_string(),
        ]
    });
    let csv = table(&["point", "height", "cone", "ball"], rows)?;
    let report = PackReport {
        rank: lat.rank(),
        radius,
        points: pts.len(),
        cones: cones.certificate(),
        points_per_cone: per_cone,
        balls,
    };
    output(&report, Some(csv), true)
}

#[derive(Serialize)]
struct ChainComparison {
    k: u64,
    closed_form: String,
    iterated: String,
}

#[derive(Serialize)]
struct PfaffianReport {
    pf: String,
    h0_dim: String,
    deg_a: String,
}

impl From<PfaffianIdentities> for PfaffianReport {
    fn from(p: PfaffianIdentities) -> Self {
        PfaffianReport {
            pf: p.pf.to_string(),
            h0_dim: p.h0_dim.to_string(),
            deg_a: p.deg_a.to_string(),
        }
    }
}

#[derive(Serialize)]
struct DegreesReport {
    invariants: VarietyInvariants,
    entries: Vec<DegreeEntry>,
    closed_form_vs_iterated: Vec<ChainComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pfaffian: Option<PfaffianReport>,
}

pub fn cmd_degrees(inv: &VarietyInvariants, kind: Option<&str>) -> CliResult<CommandOutput> {
    let entries = degree_ledger(inv)?;
    let mut chain = Vec::new();
    if inv.r >= 1 {
        for k in 1..=inv.g {
            chain.push(ChainComparison {
                k,
                closed_form: generated_subvariety_bound(inv.g, inv.r, inv.d, k)?.to_string(),
                iterated: generated_subvariety_chain_bound(inv.g, inv.r, inv.d, k)?.to_string(),
            });
        }
    }
    let pfaffian = match kind {
        None => None,
        Some(s) => {
            let d = s
                .split(',')
                .map(|t| t.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("--type: {e}")))?;
            Some(pfaffian_identities(inv.g, &PolarizationType::new(d)?)?.into())
        }
    };
    let csv = table(
        &["name", "value", "tag"],
        entries
            .iter()
            .map(|e| vec![e.name.clone(), e.value.clone(), e.lemma_tag.clone()]),
    )?;
    let report = DegreesReport {
        invariants: *inv,
        entries,
        closed_form_vs_iterated: chain,
        pfaffian,
    };
    output(&report, Some(csv), true)
}

#[derive(Serialize)]
struct LedgerReport {
    inputs: LedgerInputs,
    ledger: ConstantLedger,
    final_count: FinalCount,
}

fn ledger_csv(ledger: &ConstantLedger) -> CliResult<String> {
    table(
        &["name", "value", "tag", "deps"],
        ledger
            .entries
            .iter()
            .map(|e| vec![e.name.clone(), e.value.to_string(), e.tag.clone(), e.deps.join(" ")]),
    )
}

pub fn cmd_ledger(inputs: &LedgerInputs) -> CliResult<CommandOutput> {
    let ledger = build_ledger(inputs)?;
    let final_count = final_count_certificate(&ledger)?;
    let csv = ledger_csv(&ledger)?;
    let report = LedgerReport {
        inputs: inputs.clone(),
        ledger,
        final_count,
    };
    output(&report, Some(csv), true)
}

/// The pipeline report for the config's lattice and points, with the rank
/// taken from the lattice.
pub fn pipeline_for(cfg: &WorkbenchConfig, seed: u64) -> CliResult<PipelineReport> {
    let lat = cfg.build_lattice()?;
    let spec = &cfg.pipeline;
    let set = if spec.points.is_empty() {
        random_point_set(&lat, spec.random_count, spec.random_bound, seed)?
    } else {
        HeightedPointSet::new(lat.clone(), spec.points.clone(), IsolationOracle::AlwaysTrue)?
    };
    let inputs = LedgerInputs {
        rank: lat.rank() as u64,
        ..cfg.constants.clone()
    };
    let opts = PipelineOptions {
        reading: spec.reading,
        cone: spec.cone,
    };
    Ok(pipeline_report(&set, &inputs, &opts)?)
}

pub fn cmd_pipeline(cfg: &WorkbenchConfig, seed: u64) -> CliResult<CommandOutput> {
    let report = pipeline_for(cfg, seed)?;
    let csv = table(
        &["step", "empirical", "bound", "ok", "tag"],
        report.per_step.iter().map(|s| {
            vec![
                s.name.clone(),
                s.empirical.to_string(),
                s.bound.to_string(),
                s.ok.to_string(),
                s.tag.clone(),
            ]
        }),
    )?;
    output(&report, Some(csv), report.verdict == Verdict::Certified)
}

#[derive(Serialize)]
struct SigmaReport {
    sigma_size: usize,
    cover: ModelRepr,
    cover_degree: usize,
    degree_bound: String,
    covers_all_rational_points: bool,
    depth: usize,
}

#[derive(Serialize)]
struct CoverInstanceReport {
    q: u32,
    m: usize,
    x: SubspaceRepr,
    z: ModelRepr,
    maximal_sets: usize,
    results: Vec<SigmaReport>,
}

#[derive(Serialize)]
struct CoverReport {
    seed: u64,
    instances: Vec<CoverInstanceReport>,
}

pub fn cmd_cover(cfg: &WorkbenchConfig, seed: u64, count: usize) -> CliResult<CommandOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(count);
    let mut rows = Vec::new();
    for i in 0..count {
        let inst = random_cover_instance(&mut rng, cfg.cover.max_power_points)?;
        let brute = brute_force_minimal_cover(&inst.x, inst.m, &inst.z, cfg.cover.node_budget)?;
        let mut results = Vec::with_capacity(brute.maximal.len());
        for sigma in &brute.maximal {
            let c = nogaalon_cover(&inst.x, inst.m, &inst.z, sigma)?;
            rows.push(vec![
                i.to_string(),
                sigma.len().to_string(),
                c.cover.degree().to_string(),
                c.degree_bound.to_string(),
                c.covers_all_rational_points.to_string(),
            ]);
            results.push(SigmaReport {
                sigma_size: sigma.len(),
                cover_degree: c.cover.degree(),
                cover: ModelRepr::from(c.cover.clone()),
                degree_bound: c.degree_bound.to_string(),
                covers_all_rational_points: c.covers_all_rational_points,
                depth: c.depth(),
            });
        }
        instances.push(CoverInstanceReport {
            q: inst.x.q(),
            m: inst.m,
            x: inst.x.repr(),
            z: ModelRepr::from(inst.z.clone()),
            maximal_sets: brute.maximal.len(),
            results,
        });
    }
    let csv = table(
        &[
            "instance",
            "sigma_size",
            "cover_degree",
            "degree_bound",
            "covers_all_rational_points",
        ],
        rows,
    )?;
    output(&CoverReport { seed, instances }, Some(csv), true)
}

/// Enumerates the testbed and rechecks every pair after a JSON round trip.
pub fn testbed_report(cfg: &WorkbenchConfig) -> CliResult<TestbedResult> {
    let result = enumerate_testbed(cfg)?;
    let text = serde_json::to_string(&result).map_err(|e| CliError::Io(e.to_string()))?;
    let back: TestbedResult = serde_json::from_str(&text).map_err(|e| CliError::Io(e.to_string()))?;
    recheck_pairs(&back)?;
    Ok(result)
}

pub fn cmd_testbed(cfg: &WorkbenchConfig) -> CliResult<CommandOutput> {
    let result = testbed_report(cfg)?;
    let csv = table(
        &["p", "q", "coords", "coset"],
        result.pairs.iter().map(|p| {
            vec![
                p.p.to_string(),
                p.q.to_string(),
                p.coords.to_string(),
                p.coset.map_or(String::new(), |c| format!("{c:?}").to_lowercase()),
            ]
        }),
    )?;
    output(&result, Some(csv), result.verdict == Verdict::Certified)
}

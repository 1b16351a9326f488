use std::collections::BTreeSet;
use std::path::Path;

use ntbench::counting::{HypPackReading, LedgerInputs};
use ntbench::heights::{is_torsion, ECPoint, EllipticCurveQ};
use ntbench::lattice::{lattice_from_curve, LatticeVector, MWLattice};
use ntbench::packing::ConeCoverConfig;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkbenchConfig {
    /// Seed for generated test data; `--seed` overrides it.
    pub seed: u64,
    /// Target accuracy of every canonical height.
    pub tol: f64,
    pub curves: Vec<CurveSpec>,
    pub constants: LedgerInputs,
    pub lattice: Option<LatticeSpec>,
    pub pack: PackSpec,
    pub pipeline: PipelineSpec,
    pub cover: CoverSpec,
    pub testbed: Option<TestbedSpec>,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig {
            seed: 0,
            tol: 1e-10,
            curves: Vec::new(),
            constants: LedgerInputs::default(),
            lattice: None,
            pack: PackSpec::default(),
            pipeline: PipelineSpec::default(),
            cover: CoverSpec::default(),
            testbed: None,
        }
    }
}

/// `y^2 = x^3 + a4 x + a6` with coefficients written as rationals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub label: String,
    pub a4: String,
    pub a6: String,
    #[serde(default)]
    pub generators: Vec<ECPoint>,
    #[serde(default)]
    pub torsion: Vec<ECPoint>,
}

impl CurveSpec {
    pub fn curve(&self) -> CliResult<EllipticCurveQ> {
        Ok(EllipticCurveQ::parse(&self.a4, &self.a6)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LatticeSpec {
    /// Direct sum of the generator lattices of the listed curves.
    Curves {
        curves: Vec<String>,
    },
    /// Row-major Gram matrix.
    Gram {
        rank: usize,
        gram: Vec<f64>,
    },
    Identity {
        rank: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PackSpec {
    pub c4: f64,
    /// Points are the lattice vectors of norm at most `radius`.
    pub radius: f64,
    pub sub_radius: f64,
}

impl Default for PackSpec {
    fn default() -> Self {
        PackSpec {
            c4: 2.0,
            radius: 4.0,
            sub_radius: 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineSpec {
    pub reading: HypPackReading,
    pub cone: ConeCoverConfig,
    /// Explicit points; when empty, `random_count` seeded points are drawn
    /// from the box `[-random_bound, random_bound]^rank`.
    pub points: Vec<LatticeVector>,
    pub random_count: usize,
    pub random_bound: i64,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        PipelineSpec {
            reading: HypPackReading::default(),
            cone: ConeCoverConfig::default(),
            points: Vec::new(),
            random_count: 30,
            random_bound: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverSpec {
    pub instances: usize,
    pub max_power_points: usize,
    pub node_budget: usize,
}

impl Default for CoverSpec {
    fn default() -> Self {
        CoverSpec {
            instances: 3,
            max_power_points: 2000,
            node_budget: 200_000,
        }
    }
}

/// Subgroup translates inside the equal-x curve that are removed from the
/// count. Both need the two curves to coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CosetRelation {
    /// `P = Q`.
    Diagonal,
    /// `P = -Q`.
    Antidiagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestbedInvariants {
    pub g: u64,
    pub r: u64,
    pub d: u64,
    pub l: u64,
    /// Set while `d` is not derived from the embedding.
    pub d_is_placeholder: bool,
}

impl Default for TestbedInvariants {
    fn default() -> Self {
        TestbedInvariants {
            g: 2,
            r: 1,
            d: 12,
            l: 18,
            d_is_placeholder: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestbedSpec {
    pub pair: [String; 2],
    /// Bound `B` on `ĥ` of each factor.
    pub height_bound: f64,
    #[serde(default = "default_max_combinations")]
    pub max_combinations: usize,
    #[serde(default)]
    pub exclude: Vec<CosetRelation>,
    #[serde(default)]
    pub invariants: TestbedInvariants,
}

fn default_max_combinations() -> usize {
    10_000
}

impl WorkbenchConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let cfg = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Curves nonsingular, generators on their curves, torsion entries of
    /// finite order, labels unique and references resolvable.
    pub fn validate(&self) -> CliResult<()> {
        if !(self.tol > 0.0) {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        let mut labels = BTreeSet::new();
        for c in &self.curves {
            if !labels.insert(c.label.as_str()) {
                return Err(CliError::Config(format!("duplicate curve label {:?}", c.label)));
            }
            let e = c.curve()?;
            for p in &c.generators {
                e.validate(p)?;
            }
            for (i, t) in c.torsion.iter().enumerate() {
                if t.is_infinity() || c.torsion[..i].contains(t) {
                    return Err(CliError::Config(format!(
                        "torsion list of {} must hold distinct points other than O",
                        c.label
                    )));
                }
                if !is_torsion(&e, t)? {
                    return Err(CliError::Config(format!("{t} is not a torsion point of {}", c.label)));
                }
            }
        }
        if let Some(LatticeSpec::Curves { curves }) = &self.lattice {
            for l in curves {
                self.curve(l)?;
            }
        }
        if let Some(tb) = &self.testbed {
            for l in &tb.pair {
                let c = self.curve(l)?;
                if c.generators.is_empty() {
                    return Err(CliError::Config(format!("testbed curve {l} has no generators")));
                }
            }
            if !(tb.height_bound >= 0.0) {
                return Err(CliError::Config("testbed height_bound must be >= 0".into()));
            }
        }
        Ok(())
    }

    pub fn curve(&self, label: &str) -> CliResult<&CurveSpec> {
        self.curves
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| CliError::Config(format!("unknown curve {label:?}")))
    }

    /// Lattice named by the config, defaulting to `Z^rank` for the
    /// configured rank.
    pub fn build_lattice(&self) -> CliResult<MWLattice> {
        match &self.lattice {
            None => Ok(MWLattice::identity(self.constants.rank as usize)),
            Some(LatticeSpec::Identity { rank }) => Ok(MWLattice::identity(*rank)),
            Some(LatticeSpec::Gram { rank, gram }) => Ok(MWLattice::synthetic(*rank, gram.clone())?),
            Some(LatticeSpec::Curves { curves }) => {
                let mut acc: Option<MWLattice> = None;
                for l in curves {
                    let lat = self.curve_lattice(l)?;
                    acc = Some(match acc {
                        None => lat,
                        Some(a) => a.direct_sum(&lat),
                    });
                }
                acc.ok_or_else(|| CliError::Config("lattice lists no curves".into()))
            }
        }
    }

    pub fn curve_lattice(&self, label: &str) -> CliResult<MWLattice> {
        let c = self.curve(label)?;
        Ok(lattice_from_curve(&c.curve()?, &c.generators, self.tol)?)
    }
}

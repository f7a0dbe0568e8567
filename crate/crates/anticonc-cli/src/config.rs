use anticonc::lattice::CurveSweep;
use anticonc::mc::{Binning, SampleOptions};
use anticonc::pop::PopOptions;
use anticonc::rmps::{choose_bond_exponent, sweep_spec, LadderRate, PhysicalNoise, RmpsSpec, SweepOptions, VariantKind};
use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level experiment file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub model: Model,
    #[serde(default)]
    pub pop: PopOptions,
    #[serde(default)]
    pub binning: Binning,
    /// Moments reported by sampling commands.
    #[serde(default = "default_k_max")]
    pub k_max: usize,
}

fn default_k_max() -> usize {
    4
}

fn default_d() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    RmpsPhysical(RmpsConfig),
    RmpsLadder(RmpsConfig),
    Brickwall(BrickwallConfig),
    HaarGlobal(HaarConfig),
}

/// A staircase RMPS. Give the bond exponent `r` (χ = d^r) or a target `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RmpsConfig {
    pub n: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub eta: f64,
    #[serde(default)]
    pub ladder_rate: LadderRate,
    #[serde(default)]
    pub physical_noise: PhysicalNoise,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SampleOptions>,
    /// Sizes for `rmps-exact` convergence tables; defaults to `[n]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrickwallConfig {
    pub sweep: CurveSweep,
    /// Realizations per (N, t) for `brickwall-sim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuits: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarConfig {
    pub qubits: usize,
    pub eps_glob: f64,
    pub states: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        ensure!(cfg.schema == SCHEMA_VERSION, "unsupported schema {} (expected {SCHEMA_VERSION})", cfg.schema);
        ensure!((1..=6).contains(&cfg.k_max), "k_max must be in 1..=6, got {}", cfg.k_max);
        Ok(cfg)
    }
}

impl RmpsConfig {
    pub fn kind(model: &Model) -> Option<(VariantKind, &RmpsConfig)> {
        match model {
            Model::RmpsPhysical(c) => Some((VariantKind::Physical, c)),
            Model::RmpsLadder(c) => Some((VariantKind::Ladder, c)),
            _ => None,
        }
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions { d: self.d, ladder_rate: self.ladder_rate, physical_noise: self.physical_noise }
    }

    pub fn bond_exponent(&self, n: usize) -> Result<u32> {
        match (self.r, self.x) {
            (Some(r), None) => Ok(r),
            (None, Some(x)) => Ok(choose_bond_exponent(n, self.d, x)?),
            _ => bail!("give exactly one of `r` and `x`"),
        }
    }

    pub fn spec(&self, kind: VariantKind) -> Result<RmpsSpec> {
        let r = self.bond_exponent(self.n)?;
        Ok(sweep_spec(kind, self.n, r, self.eta, &self.sweep_options())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LADDER: &str = r#"{
        "schema": 1,
        "seed": 3,
        "model": {"kind": "rmps_ladder", "n": 16, "r": 3, "eta": 2.0,
                  "sampling": {"n_circuits": 2, "n_bitstrings": 5}}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::parse(LADDER).unwrap();
        let (kind, rmps) = RmpsConfig::kind(&cfg.model).unwrap();
        assert_eq!(kind, VariantKind::Ladder);
        assert_eq!(rmps.spec(kind).unwrap().chi(), 8);
        let again = ExperimentConfig::parse(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_keys_and_schemas_are_rejected() {
        assert!(ExperimentConfig::parse(&LADDER.replace("\"eta\"", "\"etta\": 1, \"eta\"")).is_err());
        assert!(ExperimentConfig::parse(&LADDER.replace("\"seed\"", "\"sed\"")).is_err());
        assert!(ExperimentConfig::parse(&LADDER.replace("\"schema\": 1", "\"schema\": 2")).is_err());
    }

    #[test]
    fn bond_needs_exactly_one_of_r_and_x() {
        let cfg = ExperimentConfig::parse(&LADDER.replace("\"r\": 3", "\"r\": 3, \"x\": 1.0")).unwrap();
        let (kind, rmps) = RmpsConfig::kind(&cfg.model).unwrap();
        assert!(rmps.spec(kind).is_err());
    }

    #[test]
    fn shipped_configs_parse() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        let mut seen = 0;
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "json") {
                ExperimentConfig::load(&path).unwrap();
                seen += 1;
            }
        }
        assert!(seen >= 5);
    }
}

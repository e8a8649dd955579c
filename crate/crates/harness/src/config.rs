//! Experiment configurations: one JSON document per run, schema-checked
//! with unknown keys rejected by name.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lab_charges::ChargeFixture;
use lab_jld::Scene;
use lab_kpr::ScheduleSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialConfig {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    #[serde(default = "default_kind")]
    pub kind: String,
}

fn default_kind() -> String {
    "log".into()
}

impl Default for RadialConfig {
    fn default() -> Self {
        Self {
            count: 2048,
            min: 1e-4,
            max: 1e2,
            kind: "log".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub axis: [f64; 3],
    /// Half-angle in degrees.
    pub opening_deg: f64,
    #[serde(default = "default_band")]
    pub band_limit: u32,
}

fn default_band() -> u32 {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeProfileConfig {
    pub q: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeFamilyConfig {
    pub count: usize,
    pub radius: f64,
    pub width: f64,
    /// Probes are placed at polar angles ≥ this (degrees from the cone axis).
    pub min_polar_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaConfig {
    pub ell: u32,
    pub m: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    pub n: usize,
    pub h: f64,
    pub n_sigma: usize,
    /// Mass and width of the hyperboloid-chord fixture.
    #[serde(default = "default_mass")]
    pub mass: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    /// Halving levels for the residual-order study.
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_mass() -> f64 {
    1.5
}
fn default_width() -> f64 {
    0.6
}
fn default_levels() -> usize {
    3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceConfig {
    /// Wedge lightlike generators and offset.
    pub k_plus: Vec<f64>,
    pub k_minus: Vec<f64>,
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
    #[serde(default)]
    pub tilde: bool,
    #[serde(default = "default_cap")]
    pub iteration_cap: usize,
}

fn default_cap() -> usize {
    16
}

/// The top-level experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub radial: RadialConfig,
    #[serde(default = "default_ell_max")]
    pub ell_max: u32,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub charge: Option<ChargeFixture>,
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default)]
    pub cone: Option<ConeConfig>,
    #[serde(default)]
    pub profile: Option<ChargeProfileConfig>,
    #[serde(default)]
    pub probes: Option<ProbeFamilyConfig>,
    #[serde(default)]
    pub eta: Option<EtaConfig>,
    #[serde(default)]
    pub shell_range: Option<(usize, usize)>,
    #[serde(default)]
    pub scene: Option<Scene>,
    #[serde(default)]
    pub reduce: Option<ReduceConfig>,
    #[serde(default)]
    pub transform: Option<TransformConfig>,
    /// Per-experiment tolerances; defaults match the laboratory contract.
    #[serde(default)]
    pub tolerances: std::collections::BTreeMap<String, f64>,
}

fn default_ell_max() -> u32 {
    12
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> anyhow::Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(json)?;
        Ok(cfg)
    }

    /// Canonical serialization used for hashing and embedding.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

//! Experiment reports: config-stamped metadata, CSV tables and a JSON
//! verdict block, serialized deterministically for golden-file regression.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub experiment: String,
    pub config_hash: String,
    pub version: String,
    /// The embedded config (hash is recomputable from it).
    pub config: Value,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    /// Named CSV payloads with fixed column order.
    pub tables: BTreeMap<String, String>,
    /// Verdicts and quantitative claims, each carrying its tolerance.
    pub verdicts: Value,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, tolerances: BTreeMap<String, f64>) -> Self {
        Self {
            metadata: ReportMetadata {
                experiment: config.experiment.clone(),
                config_hash: config.hash(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                config: serde_json::to_value(config).expect("config is JSON"),
                tolerances,
            },
            tables: BTreeMap::new(),
            verdicts: Value::Null,
        }
    }

    pub fn add_table(&mut self, name: &str, csv: String) {
        self.tables.insert(name.to_string(), csv);
    }

    pub fn set_verdicts(&mut self, verdicts: Value) {
        self.verdicts = verdicts;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Write report.json plus each table as a CSV file into `dir`.
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        for (name, csv) in &self.tables {
            std::fs::write(dir.join(format!("{name}.csv")), csv)?;
        }
        std::fs::write(
            dir.join("verdicts.json"),
            serde_json::to_string_pretty(&self.verdicts)?,
        )?;
        Ok(())
    }

    pub fn from_json(json: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    /// Recompute the config hash from the embedded config.
    pub fn recomputed_hash(&self) -> anyhow::Result<String> {
        let cfg: ExperimentConfig = serde_json::from_value(self.metadata.config.clone())?;
        Ok(cfg.hash())
    }
}

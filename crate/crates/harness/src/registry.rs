//! The experiment registry: every pipeline lives behind the `Experiment`
//! trait and is selected by its id at runtime from the config.

use std::collections::BTreeMap;

use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;

pub trait Experiment: Send + Sync {
    /// The id the config's `experiment` field selects.
    fn id(&self) -> &'static str;
    /// One-line description for `lab run --list`-style output.
    fn describe(&self) -> &'static str;
    fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport>;
}

pub struct Registry {
    experiments: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            experiments: BTreeMap::new(),
        }
    }

    /// The standard laboratory registry with every pipeline registered.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(crate::experiments::ScalingLimit));
        r.register(Box::new(crate::experiments::KprValidate));
        r.register(Box::new(crate::experiments::ConvergenceProbe));
        r.register(Box::new(crate::experiments::Localize));
        r.register(Box::new(crate::experiments::OppositeCone));
        r.register(Box::new(crate::experiments::JldReduce));
        r.register(Box::new(crate::experiments::JldCorrespondence));
        r
    }

    pub fn register(&mut self, exp: Box<dyn Experiment>) {
        self.experiments.insert(exp.id(), exp);
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.experiments.keys().copied().collect()
    }

    pub fn get(&self, id: &str) -> Option<&dyn Experiment> {
        self.experiments.get(id).map(|b| b.as_ref())
    }

    pub fn run(&self, config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        let exp = self.get(&config.experiment).ok_or_else(|| {
            anyhow::anyhow!(
                "unknown experiment id '{}'; known: {}",
                config.experiment,
                self.ids().join(", ")
            )
        })?;
        exp.run(config)
    }
}

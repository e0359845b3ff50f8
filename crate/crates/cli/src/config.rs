//! Run configuration files (TOML or JSON).

use std::path::{Path, PathBuf};

use gpfewshot::continuous::{ContinuousInstance, KernelKind, KernelSpec};
use gpfewshot::gp::{Covariance, ProblemInstance};
use gpfewshot::policy::{Policy, PolicyKind, TieBreak};
use gpfewshot::seeds;
use gpfewshot::sim::{InstanceSource, SimConfig};
use nalgebra::DMatrix;
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceSection,
    pub policy: PolicySection,
    pub simulation: SimulationSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Iid,
    Spike,
    RandomPsd,
    KernelGrid,
    Continuous,
    Explicit,
}

impl InstanceKind {
    fn name(self) -> &'static str {
        match self {
            InstanceKind::Iid => "iid",
            InstanceKind::Spike => "spike",
            InstanceKind::RandomPsd => "random_psd",
            InstanceKind::KernelGrid => "kernel_grid",
            InstanceKind::Continuous => "continuous",
            InstanceKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSection {
    pub kind: InstanceKind,
    pub n_arms: Option<usize>,
    pub horizon: Option<usize>,
    /// Spike arm; when absent the spike goes to the arm the policy visits
    /// least under the zero prior.
    pub spike_index: Option<usize>,
    pub spike_variance: Option<f64>,
    pub seed: Option<u64>,
    pub kernel: Option<KernelKind>,
    pub length_scale: Option<f64>,
    pub variance: Option<f64>,
    pub dim: Option<u32>,
    pub sides: Option<usize>,
    pub mean: Option<Vec<f64>>,
    /// Full covariance, one inner array per row.
    pub covariance: Option<Vec<Vec<f64>>>,
    /// Diagonal covariance.
    pub diagonal: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub kind: PolicyKind,
    #[serde(default)]
    pub tie_break: TieBreak,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub episodes: u64,
    pub master_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub report: Option<PathBuf>,
    pub trajectories: Option<PathBuf>,
}

/// What `simulate` should run.
pub enum Plan {
    Experiment(SimConfig),
    /// Spike placed after a zero-prior calibration pass.
    AdversarialSpike { n_arms: usize, horizon: usize, policy: PolicyKind, episodes: u64, seed: u64 },
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Failure> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Failure::config(format!("config key `{}`: {}", e.path(), e.inner())))
    }

    pub fn from_toml(text: &str) -> Result<Self, Failure> {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let msg = e.inner().message().trim().to_string();
            Failure::config(format!("config key `{}`: {msg}", e.path()))
        })
    }

    /// Resolves the configuration into a runnable plan. `seed` overrides
    /// `simulation.master_seed`.
    pub fn plan(&self, seed: Option<u64>) -> Result<Plan, Failure> {
        let sim = &self.simulation;
        if sim.episodes == 0 {
            return Err(Failure::config("config key `simulation.episodes`: must be at least 1"));
        }
        let master_seed = seed.or(sim.master_seed).unwrap_or(0);
        let inst = &self.instance;
        let kind_name = inst.kind.name();
        let need = |v: Option<usize>, key: &str| {
            v.ok_or_else(|| Failure::config(format!("config key `instance.{key}`: required for kind {kind_name}")))
        };
        let kernel = || -> Result<KernelSpec, Failure> {
            let ls = inst
                .length_scale
                .ok_or_else(|| Failure::config(format!("config key `instance.length_scale`: required for kind {kind_name}")))?;
            KernelSpec::new(
                inst.kernel.unwrap_or(KernelKind::SquaredExponential),
                ls,
                inst.variance.unwrap_or(1.0),
                inst.dim.unwrap_or(1),
            )
            .map_err(Failure::from)
        };
        let source = match inst.kind {
            InstanceKind::Iid => InstanceSource::Iid { n_arms: need(inst.n_arms, "n_arms")?, horizon: need(inst.horizon, "horizon")? },
            InstanceKind::Spike => {
                let n_arms = need(inst.n_arms, "n_arms")?;
                let horizon = need(inst.horizon, "horizon")?;
                let spike_variance = inst.spike_variance.unwrap_or(1.0);
                match inst.spike_index {
                    Some(spike_index) => InstanceSource::Spike { n_arms, horizon, spike_index, spike_variance },
                    None => {
                        if spike_variance != 1.0 {
                            return Err(Failure::config(
                                "config key `instance.spike_variance`: the calibrated spike has unit variance; set spike_index to choose another variance",
                            ));
                        }
                        return Ok(Plan::AdversarialSpike {
                            n_arms,
                            horizon,
                            policy: self.policy.kind,
                            episodes: sim.episodes,
                            seed: master_seed,
                        });
                    }
                }
            }
            InstanceKind::RandomPsd => InstanceSource::RandomPsd {
                n_arms: need(inst.n_arms, "n_arms")?,
                horizon: need(inst.horizon, "horizon")?,
                seed: inst.seed.unwrap_or_else(|| seeds::derive_master(master_seed, "random-psd-instance")),
            },
            InstanceKind::KernelGrid => InstanceSource::KernelGrid {
                kernel: kernel()?,
                sides: need(inst.sides, "sides")?,
                horizon: need(inst.horizon, "horizon")?,
            },
            InstanceKind::Continuous => {
                let horizon = need(inst.horizon, "horizon")?;
                InstanceSource::Continuous(ContinuousInstance::new(kernel()?, horizon as u64)?)
            }
            InstanceKind::Explicit => {
                let mean = inst
                    .mean
                    .clone()
                    .ok_or_else(|| Failure::config("config key `instance.mean`: required for kind explicit"))?;
                let n = mean.len();
                let cov = match (&inst.covariance, &inst.diagonal) {
                    (Some(rows), None) => {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(Failure::config(
                                "config key `instance.covariance`: must be an N×N array of rows with N = len(instance.mean)",
                            ));
                        }
                        Covariance::Dense(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
                    }
                    (None, Some(d)) => Covariance::Diagonal(d.clone()),
                    _ => {
                        return Err(Failure::config(
                            "config key `instance`: exactly one of covariance and diagonal is required for kind explicit",
                        ))
                    }
                };
                InstanceSource::Explicit(ProblemInstance::new(mean, cov, need(inst.horizon, "horizon")?)?)
            }
        };
        let mut cfg = SimConfig::new(
            source,
            Policy::with_tie_break(self.policy.kind, self.policy.tie_break),
            sim.episodes,
            master_seed,
        );
        cfg.keep_trajectories = self.output.trajectories.is_some();
        Ok(Plan::Experiment(cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOML: &str = r#"
[instance]
kind = "iid"
n_arms = 20
horizon = 5

[policy]
kind = "ei2"

[simulation]
episodes = 10
master_seed = 3
"#;

    #[test]
    fn toml_and_json_agree() {
        let a = RunConfig::from_toml(TOML).unwrap();
        let b = RunConfig::from_json(
            r#"{"instance": {"kind": "iid", "n_arms": 20, "horizon": 5}, "policy": {"kind": "ei2"}, "simulation": {"episodes": 10, "master_seed": 3}}"#,
        )
        .unwrap();
        let (Plan::Experiment(a), Plan::Experiment(b)) = (a.plan(None).unwrap(), b.plan(None).unwrap()) else {
            panic!("expected experiments");
        };
        assert_eq!(a, b);
        assert_eq!(a.master_seed, 3);
    }

    #[test]
    fn unknown_key_names_its_path() {
        let bad = TOML.replace("n_arms = 20", "n_arms = 20\nn_armz = 3");
        let err = RunConfig::from_toml(&bad).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("instance.n_armz"), "{}", err.message);
        let err = RunConfig::from_json(r#"{"instance": {"kind": "iid"}, "policy": {"kind": "ei2", "x": 1}, "simulation": {"episodes": 1}}"#)
            .unwrap_err();
        assert!(err.message.contains("policy.x"), "{}", err.message);
    }

    #[test]
    fn missing_required_key() {
        let cfg = RunConfig::from_toml(&TOML.replace("horizon = 5", "")).unwrap();
        let err = cfg.plan(None).err().unwrap();
        assert!(err.message.contains("instance.horizon"));
    }

    #[test]
    fn seed_flag_overrides_config() {
        let cfg = RunConfig::from_toml(TOML).unwrap();
        let Plan::Experiment(c) = cfg.plan(Some(99)).unwrap() else { panic!() };
        assert_eq!(c.master_seed, 99);
    }
}

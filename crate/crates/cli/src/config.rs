//! Run configuration: TOML schema and conversion to model specs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use majorana_core::model::{InteractionSpec, ModelSpec, QuarticTerm};
use majorana_core::spectral::DEFAULT_CLUSTER_TOL;
use majorana_core::zero_modes::{Gauge, DEFAULT_KERNEL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    GapSweep,
    ZeroModeSeries,
    ZeroModeKernel,
    Locality,
    LadderIndex,
    CheckSolvable,
    TildeCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Spectrum,
        Experiment::GapSweep,
        Experiment::ZeroModeSeries,
        Experiment::ZeroModeKernel,
        Experiment::Locality,
        Experiment::LadderIndex,
        Experiment::CheckSolvable,
        Experiment::TildeCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::GapSweep => "gap-sweep",
            Experiment::ZeroModeSeries => "zero-mode-series",
            Experiment::ZeroModeKernel => "zero-mode-kernel",
            Experiment::Locality => "locality",
            Experiment::LadderIndex => "ladder-index",
            Experiment::CheckSolvable => "check-solvable",
            Experiment::TildeCheck => "tilde-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    None,
    Explicit,
    EvenSitesOnly,
    BTriple,
    BPairHc,
    InterchainEdge,
    C1c2c3c4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSource {
    Exact,
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub legs: usize,
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leg_kappas: Option<Vec<f64>>,
    #[serde(default)]
    pub g: f64,
    #[serde(default = "no_interaction")]
    pub interaction: InteractionKind,
    /// Explicit quartic terms `[i, j, k, l, K]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(usize, usize, usize, usize, f64)>>,
    /// Strength of the even-sites family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    /// Leg pairs of the interchain family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
}

fn one() -> usize {
    1
}

fn no_interaction() -> InteractionKind {
    InteractionKind::None
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSource>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    pub model: ModelConfig,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl FromStr for RunConfig {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Schema checks that do not need any computation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let spec = self.model_spec()?;
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;
        let p = &self.params;
        for (name, tol) in [("cluster_tol", p.cluster_tol), ("kernel_tol", p.kernel_tol)] {
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return Err(ConfigError(format!("params.{name} must be positive")));
                }
            }
        }
        if let Some(grid) = &p.g_grid {
            if grid.is_empty() || grid.iter().any(|g| !g.is_finite()) {
                return Err(ConfigError("params.g_grid must be a nonempty list of finite numbers".into()));
            }
        }
        self.gauge()?;
        match self.experiment {
            Experiment::GapSweep if p.g_grid.is_none() => {
                Err(ConfigError("gap-sweep requires params.g_grid".into()))
            }
            Experiment::ZeroModeSeries if p.order.is_none() => {
                Err(ConfigError("zero-mode-series requires params.order".into()))
            }
            Experiment::LadderIndex if self.model.legs < 2 && self.model.interaction == InteractionKind::InterchainEdge => {
                Err(ConfigError("ladder-index with interchain_edge needs legs >= 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn cluster_tol(&self) -> f64 {
        self.params.cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL)
    }

    pub fn kernel_tol(&self) -> f64 {
        self.params.kernel_tol.unwrap_or(DEFAULT_KERNEL_TOL)
    }

    pub fn gauge(&self) -> Result<Gauge, ConfigError> {
        match &self.params.gauge {
            None => Ok(Gauge::MinNorm),
            Some(s) => s.parse().map_err(|e: majorana_core::MajoranaError| ConfigError(e.to_string())),
        }
    }

    pub fn model_spec(&self) -> Result<ModelSpec, ConfigError> {
        let m = &self.model;
        let require_absent = |present: bool, key: &str| {
            if present {
                Err(ConfigError(format!("model.{key} is not used by interaction {:?}", m.interaction)))
            } else {
                Ok(())
            }
        };
        let kind = m.interaction;
        if kind != InteractionKind::Explicit {
            require_absent(m.terms.is_some(), "terms")?;
        }
        if kind != InteractionKind::EvenSitesOnly {
            require_absent(m.coupling.is_some(), "coupling")?;
        }
        if kind != InteractionKind::InterchainEdge {
            require_absent(m.pairs.is_some(), "pairs")?;
        }
        let interaction = match kind {
            InteractionKind::None => InteractionSpec::None,
            InteractionKind::Explicit => {
                let terms = m
                    .terms
                    .as_ref()
                    .ok_or_else(|| ConfigError("explicit interaction requires model.terms".into()))?;
                InteractionSpec::Explicit(
                    terms
                        .iter()
                        .map(|&(i, j, k, l, strength)| QuarticTerm {
                            sites: [i, j, k, l],
                            strength,
                        })
                        .collect(),
                )
            }
            InteractionKind::EvenSitesOnly => InteractionSpec::EvenSitesOnly {
                coupling: m.coupling.unwrap_or(1.0),
            },
            InteractionKind::BTriple => InteractionSpec::BTriple,
            InteractionKind::BPairHc => InteractionSpec::BPairHc,
            InteractionKind::InterchainEdge => InteractionSpec::InterchainEdge { pairs: m.pairs.clone() },
            InteractionKind::C1c2c3c4 => InteractionSpec::C1C2C3C4,
        };
        let mut spec = ModelSpec::ladder(m.n, m.legs, m.kappa).with_interaction(interaction, m.g);
        spec.leg_kappas = m.leg_kappas.clone();
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
experiment = "spectrum"

[model]
n = 4
kappa = 0.5
"#;

    #[test]
    fn minimal_config() {
        let cfg: RunConfig = BASIC.parse().unwrap();
        assert_eq!(cfg.experiment, Experiment::Spectrum);
        assert_eq!(cfg.model.legs, 1);
        assert_eq!(cfg.model.interaction, InteractionKind::None);
        assert_eq!(cfg.cluster_tol(), DEFAULT_CLUSTER_TOL);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = format!("{BASIC}kapa = 0.3\n");
        assert!(bad.parse::<RunConfig>().is_err());
        let bad = BASIC.replace("experiment", "experimnt");
        assert!(bad.parse::<RunConfig>().is_err());
    }

    #[test]
    fn explicit_terms() {
        let text = r#"
experiment = "check-solvable"
[model]
n = 4
kappa = 0.5
interaction = "explicit"
terms = [[1, 2, 3, 5, 0.25]]
"#;
        let cfg: RunConfig = text.parse().unwrap();
        match cfg.model_spec().unwrap().interaction {
            InteractionSpec::Explicit(t) => assert_eq!(t[0].sites, [1, 2, 3, 5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_model_is_config_error() {
        let text = BASIC.replace("kappa = 0.5", "kappa = 1.5");
        assert!(text.parse::<RunConfig>().is_err());
        let text = format!("{BASIC}terms = [[1, 2, 3, 4, 1.0]]\n");
        assert!(text.parse::<RunConfig>().is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"
experiment = "zero-mode-series"
[model]
n = 5
kappa = 0.3
interaction = "c1c2c3c4"
[params]
order = 1
gauge = "paper_lambda(0)"
g_grid = [0.02, 0.04]
"#;
        let cfg: RunConfig = text.parse().unwrap();
        let back: RunConfig = cfg.to_toml().parse().unwrap();
        assert_eq!(back, cfg);
    }
}

//! Experiment configuration files (JSON).

use std::path::PathBuf;

use hypskew::distortion::{Placement, DEFAULT_CIRCLE_SAMPLES, DEFAULT_QS_REFINE};
use hypskew::zoo::MapSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifyLemmas,
    SkewScan,
    HrhoScan,
    QsScan,
    GrowthFit,
    ChainDemo,
    QuotientDemo,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::VerifyLemmas => "verify-lemmas",
            ExperimentKind::SkewScan => "skew-scan",
            ExperimentKind::HrhoScan => "hrho-scan",
            ExperimentKind::QsScan => "qs-scan",
            ExperimentKind::GrowthFit => "growth-fit",
            ExperimentKind::ChainDemo => "chain-demo",
            ExperimentKind::QuotientDemo => "quotient-demo",
        }
    }

    fn needs_map(self) -> bool {
        matches!(
            self,
            ExperimentKind::SkewScan | ExperimentKind::HrhoScan | ExperimentKind::QsScan | ExperimentKind::GrowthFit
        )
    }
}

/// Triangle and target of a chain demo. The triangle of side `side` is
/// centred at `centre`; the target lies at hyperbolic distance
/// `target_distance` from that centre in direction `target_angle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub side: f64,
    pub target_distance: f64,
    #[serde(default)]
    pub target_angle: f64,
    #[serde(default)]
    pub centre: [f64; 2],
    #[serde(default)]
    pub orientation: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            side: 0.5,
            target_distance: 2.0,
            target_angle: 0.0,
            centre: [0.0, 0.0],
            orientation: 0.0,
        }
    }
}

/// Annulus `H / <w -> factor w>` and the lift `w -> |w|^(k-1) w`, which
/// descends to the annulus of factor `factor^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientConfig {
    pub factor: f64,
    pub k: f64,
    pub max_side: f64,
}

impl Default for QuotientConfig {
    fn default() -> Self {
        QuotientConfig {
            factor: 3.0,
            k: 2.0,
            max_side: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub map: Option<MapSpec>,
    #[serde(default)]
    pub seed: u64,
    /// Placements per side length, centres per radius, triples, pairs or
    /// triangles, depending on the experiment.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_grid")]
    pub r_grid: Vec<f64>,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub orientation_samples: Option<usize>,
    #[serde(default = "default_circle_samples")]
    pub circle_samples: usize,
    #[serde(default = "default_refine")]
    pub refine: usize,
    #[serde(default)]
    pub chain: ChainConfig,
    #[serde(default)]
    pub quotient: QuotientConfig,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub render: bool,
}

fn default_samples() -> usize {
    1000
}

fn default_grid() -> Vec<f64> {
    vec![0.1, 0.25, 0.5, 1.0]
}

fn default_circle_samples() -> usize {
    DEFAULT_CIRCLE_SAMPLES
}

fn default_refine() -> usize {
    DEFAULT_QS_REFINE
}

fn default_out() -> PathBuf {
    PathBuf::from("hypskew-out")
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            map: None,
            seed: 0,
            samples: default_samples(),
            r_grid: default_grid(),
            placement: Placement::default(),
            orientation_samples: None,
            circle_samples: default_circle_samples(),
            refine: default_refine(),
            chain: ChainConfig::default(),
            quotient: QuotientConfig::default(),
            out: default_out(),
            render: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Checks that do not need any numerics. Parameter errors inside the map
    /// spec surface when the map is built, also as validation errors.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.experiment.needs_map() && self.map.is_none() {
            return bad(format!("{} needs a `map`", self.experiment.name()));
        }
        if self.samples == 0 {
            return bad("`samples` must be positive".into());
        }
        let uses_grid = matches!(self.experiment, ExperimentKind::SkewScan | ExperimentKind::HrhoScan);
        if uses_grid && self.r_grid.is_empty() {
            return bad("`r_grid` is empty".into());
        }
        if let Some(r) = self.r_grid.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return bad(format!("`r_grid` entry {r} is not a positive number"));
        }
        if self.circle_samples < 8 {
            return bad(format!("`circle_samples` must be at least 8, got {}", self.circle_samples));
        }
        if matches!(self.orientation_samples, Some(n) if n < 3) {
            return bad("`orientation_samples` must be at least 3".into());
        }
        let c = &self.chain;
        if !(c.side > 0.0 && c.side <= 1.0) {
            return bad(format!("chain side {} is outside (0, 1]", c.side));
        }
        if !(c.target_distance >= 0.0 && c.target_distance <= 30.0) {
            return bad(format!("chain target distance {} is outside [0, 30]", c.target_distance));
        }
        if !(c.centre[0].hypot(c.centre[1]) < 1.0) || !c.orientation.is_finite() || !c.target_angle.is_finite() {
            return bad("chain centre must lie in the disk and angles must be finite".into());
        }
        let q = &self.quotient;
        if !(q.factor > 1.0 && q.factor.is_finite()) || !(q.k >= 1.0 && q.k.is_finite()) {
            return bad(format!("quotient needs factor > 1 and k >= 1, got {} and {}", q.factor, q.k));
        }
        if !(q.max_side > 0.0 && q.max_side < q.factor.ln() / 2.0) {
            return bad(format!("quotient max_side {} must lie in (0, {})", q.max_side, q.factor.ln() / 2.0));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "chain-demo"}"#).unwrap();
        assert_eq!(c, ExperimentConfig::new(ExperimentKind::ChainDemo));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        for text in [
            r#"{"experiment": "chain-demo", "sead": 3}"#,
            r#"{"experiment": "chain-demo", "chain": {"side": 0.5, "target_distance": 1, "colour": 1}}"#,
            r#"{"experiment": "skew-scan", "map": {"kind": "mobius", "param": []}}"#,
            r#"{"experiment": "bogus"}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn scans_need_a_map() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "qs-scan"}"#).unwrap_err();
        assert!(err.to_string().contains("map"));
    }

    #[test]
    fn round_trips() {
        let mut c = ExperimentConfig::new(ExperimentKind::SkewScan);
        c.map = Some(MapSpec::new(hypskew::zoo::MapKind::BoundaryTwist, vec![0.3]));
        c.placement = Placement::Ring { modulus: 0.9 };
        c.orientation_samples = Some(16);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn range_checks() {
        let mut c = ExperimentConfig::new(ExperimentKind::QuotientDemo);
        c.quotient.max_side = 1.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::ChainDemo);
        c.chain.side = 1.5;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::VerifyLemmas);
        c.r_grid = vec![0.5, -1.0];
        assert!(c.validate().is_err());
    }
}

//! Experiment configuration: one TOML file, sections per command, unknown
//! keys rejected, rationals written as `"p/q"`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgroup::DEFAULT_ENUMERATION_CAP;
use crate::glue::{GlueLevel, TowerSystem};
use crate::rational::{parse_q, to_f64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyFinite,
    VerifyChain,
    Axioms,
    BuildTower,
    Survey,
    Calibrate,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::VerifyFinite,
        Command::VerifyChain,
        Command::Axioms,
        Command::BuildTower,
        Command::Survey,
        Command::Calibrate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyFinite => "verify-finite",
            Command::VerifyChain => "verify-chain",
            Command::Axioms => "axioms",
            Command::BuildTower => "build-tower",
            Command::Survey => "survey",
            Command::Calibrate => "calibrate",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub seed: u64,
    pub workers: usize,
    pub lookahead: usize,
    pub finite: FiniteConfig,
    pub chain: ChainConfig,
    pub axioms: AxiomsConfig,
    pub tower: TowerConfig,
    pub survey: SurveyConfig,
    pub glued: GluedConfig,
    pub calibrate: CalibrateConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            seed: 1,
            workers: 1,
            lookahead: 64,
            finite: FiniteConfig::default(),
            chain: ChainConfig::default(),
            axioms: AxiomsConfig::default(),
            tower: TowerConfig::default(),
            survey: SurveyConfig::default(),
            glued: GluedConfig::default(),
            calibrate: CalibrateConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiniteConfig {
    pub systems: usize,
    pub max_states: usize,
    pub n_max: usize,
    pub cap: usize,
}

impl Default for FiniteConfig {
    fn default() -> Self {
        Self {
            systems: 50,
            max_states: 10,
            n_max: 5,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainConfig {
    pub lo: i64,
    pub hi: i64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { lo: -15, hi: -2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AxiomsConfig {
    pub samples: u64,
}

impl Default for AxiomsConfig {
    fn default() -> Self {
        Self { samples: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TowerConfig {
    pub k: Option<usize>,
    pub kappa: Vec<String>,
    pub m: Vec<u64>,
    /// Points for the sampled invertibility check.
    pub samples: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        Self {
            k: None,
            kappa: vec!["1/64".into(); 4],
            m: vec![8; 4],
            samples: 2000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyMode {
    Maximal,
    Glued,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurveyConfig {
    pub mode: SurveyMode,
    pub eps: String,
    pub n_max: u32,
    pub points: usize,
    pub walks: usize,
    pub depth_strata: u32,
    /// Anchor offset `m`: walks are scored against the exact slice `f̃_{-2m}`.
    pub anchor: u32,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        Self {
            mode: SurveyMode::Maximal,
            eps: "1/5".into(),
            n_max: 12,
            points: 200,
            walks: 2000,
            depth_strata: 8,
            anchor: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GluedConfig {
    pub kappa: String,
    pub m_candidates: Vec<u64>,
    pub eps: String,
    /// Half-width `N` of the delayed window `[2M − 2N, 2M + 2N]`.
    pub n: u32,
    pub mixing_walks: usize,
    pub threshold: String,
    pub required_fraction: String,
    pub coupling_n: u32,
}

impl Default for GluedConfig {
    fn default() -> Self {
        Self {
            kappa: "1/64".into(),
            m_candidates: vec![128, 256, 384],
            eps: "3/10".into(),
            n: 1,
            mixing_walks: 8000,
            threshold: "3/5".into(),
            required_fraction: "3/5".into(),
            coupling_n: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateConfig {
    pub trials: usize,
    pub walks: usize,
    pub n_max: usize,
    pub required: usize,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            walks: 4000,
            n_max: 5,
            required: 95,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn rational(field: &str, s: &str) -> Result<Q> {
    parse_q(s).map_err(|_| invalid(format!("{field} = {s:?} is not a rational \"p/q\"")))
}

fn positive<T: PartialOrd + Default + fmt::Display>(field: &str, v: T) -> Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(invalid(format!("{field} must be positive, got {v}")))
    }
}

fn unit_interval(field: &str, s: &str) -> Result<f64> {
    let x = rational(field, s)?;
    if x <= Q::zero() || x > Q::one() {
        return Err(invalid(format!("{field} = {s} must lie in (0, 1]")));
    }
    Ok(to_f64(&x))
}

/// The glued experiment with every parameter checked.
#[derive(Clone, Debug)]
pub struct GluedPlan {
    pub kappa: Q,
    pub m_candidates: Vec<u64>,
    pub eps: f64,
    pub threshold: f64,
    pub required_fraction: f64,
}

/// Parameters of the selected command, all checked before any computation.
#[derive(Clone, Debug)]
pub enum Plan {
    VerifyFinite,
    VerifyChain,
    Axioms,
    BuildTower(Vec<GlueLevel>),
    SurveyMaximal { eps: f64 },
    SurveyGlued(GluedPlan),
    Calibrate,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is serializable")
    }

    /// Validates the parameters `command` needs; a `command` in the file must
    /// agree with the one requested.
    pub fn plan(&self, command: Command) -> Result<Plan> {
        if let Some(c) = self.command {
            if c != command {
                return Err(invalid(format!("config is for {c}, but {command} was requested")));
            }
        }
        positive("workers", self.workers)?;
        positive("lookahead", self.lookahead)?;
        match command {
            Command::VerifyFinite => {
                let f = &self.finite;
                positive("finite.systems", f.systems)?;
                positive("finite.max_states", f.max_states)?;
                positive("finite.n_max", f.n_max)?;
                if 2 * f.n_max + 1 > f.cap || f.cap > DEFAULT_ENUMERATION_CAP {
                    return Err(invalid(format!(
                        "finite.cap = {} must cover radius {} and not exceed {DEFAULT_ENUMERATION_CAP}",
                        f.cap,
                        2 * f.n_max + 1
                    )));
                }
                Ok(Plan::VerifyFinite)
            }
            Command::VerifyChain => {
                let c = &self.chain;
                if c.lo > c.hi || c.hi > -2 || c.lo < -40 {
                    return Err(invalid(format!(
                        "chain range {}..={} must lie within -40..=-2",
                        c.lo, c.hi
                    )));
                }
                Ok(Plan::VerifyChain)
            }
            Command::Axioms => {
                positive("axioms.samples", self.axioms.samples)?;
                Ok(Plan::Axioms)
            }
            Command::BuildTower => Ok(Plan::BuildTower(self.tower_levels()?)),
            Command::Survey => {
                let s = &self.survey;
                positive("survey.points", s.points)?;
                positive("survey.walks", s.walks)?;
                positive("survey.anchor", s.anchor)?;
                if s.anchor > 6 {
                    return Err(invalid("survey.anchor must be at most 6"));
                }
                match s.mode {
                    SurveyMode::Maximal => Ok(Plan::SurveyMaximal {
                        eps: unit_interval("survey.eps", &s.eps)?,
                    }),
                    SurveyMode::Glued => Ok(Plan::SurveyGlued(self.glued_plan()?)),
                }
            }
            Command::Calibrate => {
                let c = &self.calibrate;
                positive("calibrate.trials", c.trials)?;
                positive("calibrate.walks", c.walks)?;
                if c.n_max == 0 || c.n_max > DEFAULT_ENUMERATION_CAP {
                    return Err(invalid(format!(
                        "calibrate.n_max must lie in 1..={DEFAULT_ENUMERATION_CAP}"
                    )));
                }
                if c.required > c.trials {
                    return Err(invalid("calibrate.required exceeds calibrate.trials"));
                }
                Ok(Plan::Calibrate)
            }
        }
    }

    fn tower_levels(&self) -> Result<Vec<GlueLevel>> {
        let t = &self.tower;
        if t.kappa.len() != t.m.len() {
            return Err(invalid(format!(
                "tower.kappa has {} entries but tower.m has {}",
                t.kappa.len(),
                t.m.len()
            )));
        }
        if let Some(k) = t.k {
            if k != t.kappa.len() {
                return Err(invalid(format!(
                    "tower.k = {k} but {} levels are listed",
                    t.kappa.len()
                )));
            }
        }
        let levels = t
            .kappa
            .iter()
            .zip(&t.m)
            .map(|(k, &m)| {
                let kappa = rational("tower.kappa", k)?;
                GlueLevel::new(kappa, m).map_err(|e| invalid(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        TowerSystem::new(levels.clone(), self.lookahead).map_err(|e| invalid(e.to_string()))?;
        Ok(levels)
    }

    fn glued_plan(&self) -> Result<GluedPlan> {
        let g = &self.glued;
        let kappa = rational("glued.kappa", &g.kappa)?;
        GlueLevel::new(kappa.clone(), 1).map_err(|e| invalid(e.to_string()))?;
        if g.m_candidates.is_empty() || g.m_candidates.contains(&0) {
            return Err(invalid(
                "glued.m_candidates must be a non-empty list of positive delays",
            ));
        }
        positive("glued.mixing_walks", g.mixing_walks)?;
        Ok(GluedPlan {
            kappa,
            m_candidates: g.m_candidates.clone(),
            eps: unit_interval("glued.eps", &g.eps)?,
            threshold: to_f64(&rational("glued.threshold", &g.threshold)?),
            required_fraction: unit_interval("glued.required_fraction", &g.required_fraction)?,
        })
    }
}

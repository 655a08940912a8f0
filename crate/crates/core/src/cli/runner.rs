//! The six pipelines behind the command line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::One;
use serde::Serialize;

use super::config::{Command, ExperimentConfig, GluedPlan, Plan};
use super::report::{cell, emit, Table};
use crate::ball::chain::ChainReport;
use crate::ball::{axiom_survey, calibrate, verify_chain, AncientChain, AxiomReport, Calibration};
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::estimator::profile::{ChainEvaluator, ComponentFilter, TimeWindow};
use crate::estimator::survey::{
    choose_window, coupling_deviation, mixing_diagnostic, population_survey, CouplingReport, Criterion, MixingReport,
    Statistic, SurveyParams, SurveyReport, WindowChoice,
};
use crate::estimator::{coverage_trials, CoverageReport};
use crate::fgroup::Letter;
use crate::finite_system::{verify_finite, FiniteReport};
use crate::glue::{alpha_recursion, tower_build, GlueLevel, LevelReport, TowerSystem};
use crate::prf::{purpose, stream_rng};
use crate::rational::{format_q, to_f64};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG_INVALID: u8 = 2;
pub const EXIT_INFRASTRUCTURE: u8 = 3;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: Command,
    pub pass: bool,
    /// The deterministic report files, JSON first.
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(o) => o.exit_code(),
        Err(Error::Config(_) | Error::Parse { .. }) => EXIT_CONFIG_INVALID,
        Err(Error::Check(_)) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_INFRASTRUCTURE,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainResult {
    pub calibration: Calibration,
    pub chain: Option<ChainReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaEntry {
    pub level: usize,
    pub alpha: String,
    pub decimal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerResult {
    pub levels: Vec<LevelReport>,
    pub alphas: Vec<AlphaEntry>,
    pub recursion_exact: bool,
    pub strictly_decreasing: bool,
    pub norms_match: bool,
    pub samples: u64,
    pub invertibility_violations: u64,
    pub pass: bool,
}

/// `(N, fraction, CI)`: the chosen window and the lower end of the interval
/// for the pass fraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Achieved {
    pub n: Option<u32>,
    pub raw_fraction: f64,
    pub pass_fraction: f64,
    pub allowance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalResult {
    pub eps: f64,
    pub achieved: Achieved,
    pub choice: WindowChoice,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GluedResult {
    pub kappa: String,
    pub alphas: Vec<AlphaEntry>,
    pub mixing: MixingReport,
    /// The delay used for the survey: the selected one, or the best if none passed.
    pub m: u64,
    pub survey: SurveyReport,
    pub coupling: CouplingReport,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrateResult {
    pub slot: Calibration,
    pub coverage: CoverageReport,
}

/// Runs `command` and writes its report to `out`. Configuration errors
/// surface before any computation.
pub fn run(command: Command, config: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let plan = config.plan(command)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?;
    let start = Instant::now();
    let (pass, files) = pool.install(|| -> Result<(bool, Vec<PathBuf>)> {
        macro_rules! finish {
            ($pass:expr, $result:expr, $tables:expr) => {{
                let pass = $pass;
                let files = emit(out, command, config, pass, &$result, &$tables, start.elapsed())?;
                Ok((pass, files))
            }};
        }
        match plan {
            Plan::VerifyFinite => {
                let f = &config.finite;
                let r = verify_finite(f.systems, f.max_states, f.n_max, f.cap, config.seed)?;
                let t = finite_table(&r);
                finish!(r.pass, r, [t])
            }
            Plan::VerifyChain => {
                let r = chain_result(config)?;
                let pass = r.chain.as_ref().is_some_and(|c| c.pass);
                finish!(pass, r, [])
            }
            Plan::Axioms => {
                let r: AxiomReport = axiom_survey(config.axioms.samples, config.seed, config.lookahead)?;
                finish!(r.pass, r, [])
            }
            Plan::BuildTower(levels) => {
                let r = tower_result(config, levels)?;
                let t = tower_table(&r);
                finish!(r.pass, r, [t])
            }
            Plan::SurveyMaximal { eps } => {
                let r = maximal_result(config, eps)?;
                let t = survey_table("survey", &r.choice.report);
                finish!(
                    r.choice.chosen.is_some() && r.choice.report.unsupported_passes == 0,
                    r,
                    [t]
                )
            }
            Plan::SurveyGlued(g) => {
                let r = glued_result(config, &g)?;
                let tables = [mixing_table(&r.mixing), survey_table("survey", &r.survey)];
                finish!(r.pass, r, tables)
            }
            Plan::Calibrate => {
                let r = calibrate_result(config)?;
                let pass = r.slot.selected.is_some() && r.coverage.pass;
                let t = coverage_table(&r.coverage);
                finish!(pass, r, [t])
            }
        }
    })?;
    Ok(Outcome { command, pass, files })
}

fn chain_result(config: &ExperimentConfig) -> Result<ChainResult> {
    let calibration = calibrate(config.chain.lo, config.chain.hi)?;
    let chain = match calibration.selected {
        Some(rule) => Some(verify_chain(
            &AncientChain::with_rule(rule),
            config.chain.lo,
            config.chain.hi,
        )?),
        None => None,
    };
    Ok(ChainResult { calibration, chain })
}

fn alpha_entries(alphas: &[crate::rational::Q]) -> Vec<AlphaEntry> {
    alphas
        .iter()
        .enumerate()
        .map(|(level, a)| AlphaEntry {
            level,
            alpha: format_q(a),
            decimal: to_f64(a),
        })
        .collect()
}

fn tower_result(config: &ExperimentConfig, levels: Vec<GlueLevel>) -> Result<TowerResult> {
    let chain = AncientChain::calibrated()?;
    let tower = tower_build(chain, levels, config.lookahead)?;
    let alphas = tower.alphas();
    let mut recursion_exact = alphas[0].is_one();
    for w in alphas.windows(2) {
        recursion_exact &= alpha_recursion(&w[0])? == w[1];
    }
    let strictly_decreasing = alphas.windows(2).all(|w| w[1] < w[0]);
    let samples = config.tower.samples;
    let invertibility_violations = invertibility(&tower.system, samples, config.seed)?;
    let norms_match = tower.norms_match();
    Ok(TowerResult {
        levels: tower.reports.clone(),
        alphas: alpha_entries(alphas),
        recursion_exact,
        strictly_decreasing,
        norms_match,
        samples,
        invertibility_violations,
        pass: recursion_exact && strictly_decreasing && norms_match && invertibility_violations == 0,
    })
}

/// Sampled points where `T_{s⁻¹} T_s x ≠ x` for some generator.
fn invertibility(system: &TowerSystem, samples: u64, seed: u64) -> Result<u64> {
    let mut rng = stream_rng(seed, purpose::POINTS, 0);
    let mut violations = 0;
    for _ in 0..samples {
        let x = system.sample_point(&mut rng);
        for s in Letter::ALL {
            let mut y = x.clone();
            system.shift(&mut y, s)?;
            system.shift(&mut y, s.inverse())?;
            violations += u64::from(y != x);
        }
    }
    Ok(violations)
}

fn survey_params(config: &ExperimentConfig, walks: usize) -> SurveyParams {
    SurveyParams {
        points: config.survey.points,
        walks,
        depth_strata: config.survey.depth_strata,
        seed: config.seed,
        copy: None,
    }
}

fn maximal_result(config: &ExperimentConfig, eps: f64) -> Result<MaximalResult> {
    let system = TowerSystem::new(Vec::new(), config.lookahead)?;
    let tower = tower_build(AncientChain::calibrated()?, Vec::new(), config.lookahead)?;
    let eval = ChainEvaluator::new(&system, &tower.density, config.survey.anchor, ComponentFilter::All)?;
    let params = survey_params(config, config.survey.walks);
    let choice = choose_window(&eval, &system, &params, eps, config.survey.n_max)?;
    Ok(MaximalResult {
        eps,
        achieved: Achieved {
            n: choice.chosen,
            raw_fraction: choice.report.raw_fraction,
            pass_fraction: choice.report.pass_fraction,
            allowance: choice.report.allowance,
        },
        choice,
    })
}

fn glued_result(config: &ExperimentConfig, g: &GluedPlan) -> Result<GluedResult> {
    let chain = AncientChain::calibrated()?;
    let anchor = config.survey.anchor;
    let cfg = &config.glued;
    let level = |m| GlueLevel::new(g.kappa.clone(), m);

    // The copy-1 component does not depend on M.
    let probe = tower_build(chain, vec![level(g.m_candidates[0])?], config.lookahead)?;
    let mixing = mixing_diagnostic(
        &probe,
        0,
        &g.m_candidates,
        cfg.n,
        &survey_params(config, cfg.mixing_walks),
        g.eps,
        anchor,
    )?;
    let m = mixing.selected.unwrap_or(mixing.best);

    let tower = tower_build(chain, vec![level(m)?], config.lookahead)?;
    let eval = ChainEvaluator::new(&tower.system, &tower.density, anchor, ComponentFilter::All)?;
    let params = SurveyParams {
        copy: Some((0, 2)),
        ..survey_params(config, config.survey.walks)
    };
    let criterion = Criterion {
        statistic: Statistic::Sup,
        threshold: g.threshold,
        required_fraction: g.required_fraction,
    };
    let window = TimeWindow::around(2 * m as i64, cfg.n)?;
    let survey = population_survey(&eval, &tower.system, window, &params, criterion)?;
    let coupling = coupling_deviation(
        &tower,
        TimeWindow::around(0, cfg.coupling_n)?,
        &survey_params(config, config.survey.walks),
        anchor,
        g.eps / 3.0,
    )?;
    let pass = mixing.selected.is_some() && survey.pass && survey.unsupported_passes == 0 && coupling.pass;
    Ok(GluedResult {
        kappa: format_q(&g.kappa),
        alphas: alpha_entries(tower.alphas()),
        mixing,
        m,
        survey,
        coupling,
        pass,
    })
}

fn calibrate_result(config: &ExperimentConfig) -> Result<CalibrateResult> {
    let slot = calibrate(config.chain.lo, config.chain.hi)?;
    let chain = AncientChain::with_rule(
        slot.selected
            .ok_or_else(|| Error::Check("no slot rule selected".into()))?,
    );
    let c = &config.calibrate;
    let coverage = coverage_trials(c.trials, c.walks, c.n_max, c.required, config.seed, &chain)?;
    Ok(CalibrateResult { slot, coverage })
}

fn finite_table(r: &FiniteReport) -> Table {
    let mut t = Table::new("finite", &["system", "states", "mismatches", "pass"]);
    for c in &r.systems {
        let mismatches: Vec<String> = c.mismatches.iter().map(|n| n.to_string()).collect();
        t.push(vec![
            c.system.to_string(),
            c.states.to_string(),
            mismatches.join(" "),
            c.pass.to_string(),
        ]);
    }
    t
}

fn tower_table(r: &TowerResult) -> Table {
    let mut t = Table::new(
        "tower",
        &[
            "level",
            "kappa",
            "m",
            "alpha",
            "alpha_decimal",
            "norm_ratio",
            "norm_matches",
            "support_constant",
        ],
    );
    for l in &r.levels {
        t.push(vec![
            l.level.to_string(),
            l.kappa.clone(),
            l.m.to_string(),
            l.alpha.clone(),
            cell(l.alpha_decimal),
            l.norm_ratio.clone(),
            l.norm_matches.to_string(),
            l.support_constant.clone(),
        ]);
    }
    t
}

/// One row per sampled point: id, stratum, copies, the per-time estimates
/// and the window statistic.
fn survey_table(name: &str, r: &SurveyReport) -> Table {
    let mut header: Vec<String> = ["id", "stratum", "copies"].iter().map(|s| s.to_string()).collect();
    header.extend(r.window.times().map(|t| format!("t={t}")));
    header.extend(
        ["statistic", "pass", "underpowered", "flip_frequency"]
            .iter()
            .map(|s| s.to_string()),
    );
    let mut t = Table {
        name: name.to_string(),
        header,
        rows: Vec::new(),
    };
    for p in &r.records {
        let mut row = vec![p.id.to_string(), p.stratum.clone(), p.copies.to_string()];
        row.extend(p.estimates.iter().map(|&x| cell(x)));
        row.extend([
            cell(p.statistic),
            p.pass.to_string(),
            p.underpowered.to_string(),
            cell(p.flip_frequency),
        ]);
        t.push(row);
    }
    t
}

fn mixing_table(r: &MixingReport) -> Table {
    let mut t = Table::new(
        "mixing",
        &[
            "m",
            "window_lo",
            "window_hi",
            "mean_inf",
            "raw_fraction",
            "pass_fraction",
            "pass",
        ],
    );
    for c in &r.candidates {
        t.push(vec![
            c.m.to_string(),
            c.window.lo.to_string(),
            c.window.hi.to_string(),
            cell(c.mean_inf),
            cell(c.raw_fraction),
            cell(c.pass_fraction),
            c.pass.to_string(),
        ]);
    }
    t
}

fn coverage_table(r: &CoverageReport) -> Table {
    let mut t = Table::new(
        "calibration",
        &["trial", "n", "depth", "k", "exact", "mean", "lo", "hi", "covered"],
    );
    for x in &r.trials {
        t.push(vec![
            x.trial.to_string(),
            x.n.to_string(),
            x.depth.to_string(),
            x.k.to_string(),
            x.exact.clone(),
            cell(x.mean),
            cell(x.lo),
            cell(x.hi),
            x.covered.to_string(),
        ]);
    }
    t
}

//! Smallest window N for which sup_{|n| ≤ N} π_* f̃_{2n} ≥ 1 − ε on most of the ball.

use f2_ergodic::ball::AncientChain;
use f2_ergodic::estimator::{choose_window, ChainEvaluator, ComponentFilter, SurveyParams};
use f2_ergodic::glue::{DelayedDensity, TowerSystem};

fn main() -> f2_ergodic::Result<()> {
    let system = TowerSystem::base();
    let density = DelayedDensity::base(AncientChain::calibrated()?);
    let eval = ChainEvaluator::new(&system, &density, 1, ComponentFilter::All)?;
    let params = SurveyParams {
        points: 200,
        walks: 1000,
        depth_strata: 8,
        seed: 1,
        copy: None,
    };
    let choice = choose_window(&eval, &system, &params, 0.2, 6)?;
    for c in &choice.candidates {
        println!(
            "N = {}: fraction {:.4} (raw {:.4})",
            c.n, c.pass_fraction, c.raw_fraction
        );
    }
    println!("chosen N = {:?}", choice.chosen);
    for s in &choice.report.strata {
        println!("  {:>4}: {}/{} pass", s.label, s.passed, s.points);
    }
    Ok(())
}

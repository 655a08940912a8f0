//! One gluing: how much of copy 1 has crossed to copy 2 after 2M steps, and
//! how far the coupling moves copy-1 profiles.

use f2_ergodic::ball::AncientChain;
use f2_ergodic::estimator::{coupling_deviation, mixing_diagnostic, SurveyParams, TimeWindow};
use f2_ergodic::glue::{tower_build, GlueLevel};
use f2_ergodic::rational::q;

fn main() -> f2_ergodic::Result<()> {
    let tower = tower_build(AncientChain::calibrated()?, vec![GlueLevel::new(q(1, 64), 64)?], 64)?;
    let params = SurveyParams {
        points: 60,
        walks: 2000,
        depth_strata: 6,
        seed: 2,
        copy: None,
    };
    let mixing = mixing_diagnostic(&tower, 0, &[32, 128, 256], 1, &params, 0.3, 1)?;
    println!("floor α/2 − ε/3 = {:.3}", mixing.floor);
    for c in &mixing.candidates {
        println!(
            "M = {:>3}: mean inf {:.3}, fraction {:.3}",
            c.m, c.mean_inf, c.pass_fraction
        );
    }
    let coupling = coupling_deviation(&tower, TimeWindow::around(0, 2)?, &params, 1, 0.1)?;
    println!(
        "coupling deviation {:.4} (flip frequency {:.4}, within envelope {})",
        coupling.mean_deviation, coupling.mean_flip_frequency, coupling.within_envelope
    );
    Ok(())
}

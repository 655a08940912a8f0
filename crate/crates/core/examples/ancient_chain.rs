//! Slot calibration and the exact ancient chain f̃_n on the infinite ball.

use f2_ergodic::ball::{calibrate, verify_chain, AncientChain};

fn main() -> f2_ergodic::Result<()> {
    let cal = calibrate(-15, -2)?;
    for c in &cal.candidates {
        println!(
            "{:>14}: norms exact {}, chain exact {}{}",
            c.rule.name(),
            c.norms_exact,
            c.chain_exact,
            c.first_failure.as_ref().map(|f| format!(" ({f})")).unwrap_or_default()
        );
    }
    let chain = AncientChain::calibrated()?;
    let report = verify_chain(&chain, -10, -1)?;
    for s in &report.steps {
        println!(
            "n = {:>3}: ||f||_1 = {}, support {}, P f_n = f_(n+1): {:?}",
            s.n, s.norm, s.support_mass, s.push_exact
        );
    }
    println!("chain verified: {}", report.pass);
    Ok(())
}

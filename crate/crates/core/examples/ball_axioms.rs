//! The ball system: strata, shifts and a sampled check of the good-system axioms.

use f2_ergodic::ball::{axiom_survey, BallPoint, Stratum, DEFAULT_LOOKAHEAD};
use f2_ergodic::prf::stream_rng;
use f2_ergodic::Letter;

fn main() -> f2_ergodic::Result<()> {
    let mut rng = stream_rng(3, 0, 0);
    let mut p = BallPoint::sample_in(Stratum::Interior(2), &mut rng);
    println!("start {p}");
    for s in [Letter::A, Letter::B, Letter::A_INV, Letter::B, Letter::B] {
        p.shift(s, DEFAULT_LOOKAHEAD)?;
        println!("  T_{s} -> {p}");
    }

    let r = axiom_survey(50_000, 1, DEFAULT_LOOKAHEAD)?;
    println!(
        "{} points: {} violations, masses interior {:.4}, X_a {:.4}, X_b {:.4}; pass {}",
        r.samples,
        r.violations.total(),
        r.masses.interior,
        r.masses.boundary_a,
        r.masses.boundary_b,
        r.pass
    );
    Ok(())
}

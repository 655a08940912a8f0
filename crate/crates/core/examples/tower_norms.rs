//! A four-level glued tower: the α recursion against exact chain norms.

use f2_ergodic::ball::AncientChain;
use f2_ergodic::glue::{tower_build, GlueLevel};
use f2_ergodic::rational::q;

fn main() -> f2_ergodic::Result<()> {
    let levels = (0..4)
        .map(|_| GlueLevel::new(q(1, 64), 8))
        .collect::<Result<Vec<_>, _>>()?;
    let tower = tower_build(AncientChain::calibrated()?, levels, 64)?;
    for r in &tower.reports {
        println!(
            "level {}: alpha = {} ({}), norm ratio {}, match {}, support constant {}",
            r.level, r.alpha, r.alpha_decimal, r.norm_ratio, r.norm_matches, r.support_constant
        );
    }
    println!("components of the top density: {}", tower.density.components().len());
    Ok(())
}

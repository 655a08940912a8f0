//! The identity 𝒜_n = π_* Pⁿ π* on a random finite system, in exact arithmetic.

use f2_ergodic::finite_system::{Density, FiniteSystem};
use f2_ergodic::prf::stream_rng;
use f2_ergodic::rational::format_q;

fn main() -> f2_ergodic::Result<()> {
    let mut rng = stream_rng(7, 0, 0);
    let sys = FiniteSystem::random(6, &mut rng);
    let f = Density::random(6, &mut rng);
    println!("f = [{}]", f.0.iter().map(format_q).collect::<Vec<_>>().join(", "));
    for n in 1..=5 {
        let by_sphere = sys.avg_operator(&f, n, 12)?;
        let by_markov = sys.markov_avg(&f, n)?;
        println!(
            "n = {n}: A_n f(0) = {}, equal on all states: {}",
            format_q(&by_sphere.0[0]),
            by_sphere == by_markov
        );
    }

    let swap = FiniteSystem::two_point_swap();
    for n in 1..=4 {
        let a = swap.avg_operator(&Density::indicator(2, 0), n, 12)?;
        println!(
            "two-point swap, A_{n} 1_0 = ({}, {})",
            format_q(&a.0[0]),
            format_q(&a.0[1])
        );
    }
    Ok(())
}

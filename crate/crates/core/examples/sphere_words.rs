//! Reduced words, spheres of F₂ and the non-backtracking walk.

use f2_ergodic::fgroup::{enumerate_sphere, sample_uniform_sphere, sphere_size, DEFAULT_ENUMERATION_CAP};
use f2_ergodic::prf::stream_rng;
use f2_ergodic::ReducedWord;

fn main() -> f2_ergodic::Result<()> {
    let g: ReducedWord = "abAb".parse()?;
    let h: ReducedWord = "BaB".parse()?;
    println!("g = {g}, g⁻¹ = {}, g·h = {}", g.invert(), g.reduce_concat(&h));

    for n in 0..=4 {
        let words: Vec<String> = enumerate_sphere(n, DEFAULT_ENUMERATION_CAP)?
            .map(|w| w.to_string())
            .collect();
        let shown = words.iter().take(6).cloned().collect::<Vec<_>>().join(" ");
        println!("|S_{n}| = {} (enumerated {}): {shown} …", sphere_size(n), words.len());
    }

    let mut rng = stream_rng(1, 0, 0);
    let walk: Vec<String> = (0..5)
        .map(|_| sample_uniform_sphere(8, &mut rng).map(|w| w.to_string()))
        .collect::<Result<_, _>>()?;
    println!("uniform samples from S_8: {}", walk.join(", "));
    Ok(())
}

//! Empirical coverage of the Monte Carlo intervals against exact sphere sums
//! on the ball.

use serde::Serialize;

use super::avg::{exact_avg_small, mc_avg};
use super::ci::CiRule;
use crate::ball::{AncientChain, BallPoint, BallSystem, ProjectedCylinder, Stratum};
use crate::error::{Error, Result};
use crate::fgroup::DEFAULT_ENUMERATION_CAP;
use crate::prf::{purpose, stream_rng};
use crate::rational::{format_q, to_f64};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageTrial {
    pub trial: usize,
    pub n: usize,
    pub depth: u32,
    /// The density is `f̃_{-k}`.
    pub k: u32,
    pub exact: String,
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub rule: CiRule,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub seed: u64,
    pub walks: usize,
    pub n_max: usize,
    pub covered: usize,
    pub nonzero: usize,
    pub required: usize,
    pub trials: Vec<CoverageTrial>,
    pub pass: bool,
}

/// Trial `i` draws `x ∈ Y_d` with `d = 1 + i mod 4`, radius `n = 1 + i mod
/// n_max`, and a chain slice `f̃_{-k}` whose depth `k ≡ d + n (mod 2)` is
/// reachable in `n` steps, so most exact values are non-zero.
pub fn coverage_trials(
    trials: usize,
    walks: usize,
    n_max: usize,
    required: usize,
    seed: u64,
    chain: &AncientChain,
) -> Result<CoverageReport> {
    if n_max == 0 || n_max > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Domain(format!(
            "n_max {n_max} outside 1..={DEFAULT_ENUMERATION_CAP}"
        )));
    }
    let sys = BallSystem::default();
    let mut rows = Vec::with_capacity(trials);
    for i in 0..trials {
        let mut rng = stream_rng(seed, purpose::TRIALS, i as u64);
        let n = 1 + i % n_max;
        let depth = 1 + (i % 4) as u32;
        let reach = [depth + n as u32, depth.abs_diff(n as u32)];
        let k = match reach[(i / 4) % 2] {
            0 => 2,
            k => k,
        };
        let f = ProjectedCylinder::new(chain.density(-(k as i64))?);
        let p = BallPoint::sample_in(Stratum::Interior(depth), &mut rng);
        let exact = exact_avg_small(&sys, &f, &p, n, DEFAULT_ENUMERATION_CAP)?;
        let e = mc_avg(&sys, &f, &p, n, walks, &mut rng)?;
        let x = to_f64(&exact);
        rows.push(CoverageTrial {
            trial: i,
            n,
            depth,
            k,
            exact: format_q(&exact),
            mean: e.mean,
            lo: e.lo,
            hi: e.hi,
            rule: e.rule,
            covered: e.contains(x),
        });
    }
    let covered = rows.iter().filter(|r| r.covered).count();
    Ok(CoverageReport {
        seed,
        walks,
        n_max,
        covered,
        nonzero: rows.iter().filter(|r| r.exact != "0/1").count(),
        required,
        pass: covered >= required,
        trials: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_covers_and_is_mostly_nonzero() {
        let chain = AncientChain::calibrated().unwrap();
        let r = coverage_trials(24, 1500, 5, 22, 3, &chain).unwrap();
        assert!(r.pass, "{}/24", r.covered);
        assert!(r.nonzero >= 12, "{}", r.nonzero);
        assert!(coverage_trials(1, 10, 0, 1, 3, &chain).is_err());
    }
}

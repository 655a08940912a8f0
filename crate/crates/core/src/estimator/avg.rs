//! Spherical averages `𝒜_n f(x)`: exact by enumeration, or by sampling
//! non-backtracking walks.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::ci::{interval, Accumulator, CiRule, Interval, CONFIDENCE};
use crate::dynamics::{Dynamics, PointFunction};
use crate::error::{Error, Result};
use crate::fgroup::{enumerate_sphere, nbw_step, sphere_size, uniform_letter};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AvgEstimate {
    /// Radius, or time for chain profiles.
    pub n: i64,
    pub mean: f64,
    pub half_width: f64,
    pub lo: f64,
    pub hi: f64,
    pub rule: CiRule,
    pub walks: u64,
    pub hits: u64,
}

impl AvgEstimate {
    pub fn exact(n: i64, value: f64) -> Self {
        Self::from_interval(n, Interval::exact(value), 0, 0)
    }

    pub fn from_interval(n: i64, i: Interval, walks: u64, hits: u64) -> Self {
        Self {
            n,
            mean: i.mean,
            half_width: i.half_width,
            lo: i.lo,
            hi: i.hi,
            rule: i.rule,
            walks,
            hits,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * x.abs().max(1.0);
        self.lo - slack <= x && x <= self.hi + slack
    }
}

/// `T_{g⁻¹} p` for `g` uniform on the sphere of radius `n`.
pub fn random_translate<D: Dynamics, R: Rng + ?Sized>(
    sys: &D,
    p: &D::Point,
    n: usize,
    rng: &mut R,
) -> Result<D::Point> {
    let mut x = p.clone();
    if n == 0 {
        return Ok(x);
    }
    let mut s = uniform_letter(rng);
    sys.shift(&mut x, s.inverse())?;
    for _ in 1..n {
        s = nbw_step(s, rng);
        sys.shift(&mut x, s.inverse())?;
    }
    Ok(x)
}

/// Monte Carlo estimate of `𝒜_n f(p)` from `walks` samples.
pub fn mc_avg<D, F, R>(sys: &D, f: &F, p: &D::Point, n: usize, walks: usize, rng: &mut R) -> Result<AvgEstimate>
where
    D: Dynamics,
    F: PointFunction<D::Point>,
    R: Rng + ?Sized,
{
    if walks == 0 {
        return Err(Error::Domain("at least one walk is needed".into()));
    }
    if n == 0 {
        return Ok(AvgEstimate::exact(0, f.approx(p)));
    }
    let mut acc = Accumulator::new();
    for _ in 0..walks {
        acc.push(f.approx(&random_translate(sys, p, n, rng)?));
    }
    let i = interval(&acc, f.bounds(), CONFIDENCE)?;
    Ok(AvgEstimate::from_interval(n as i64, i, walks as u64, acc.hits()))
}

/// Exact `𝒜_n f(p)` by enumerating the sphere.
pub fn exact_avg_small<D, F>(sys: &D, f: &F, p: &D::Point, n: usize, cap: usize) -> Result<Q>
where
    D: Dynamics,
    F: PointFunction<D::Point>,
{
    if n == 0 {
        return Ok(f.exact(p));
    }
    let mut total = Q::zero();
    for g in enumerate_sphere(n, cap)? {
        total += f.exact(&sys.apply_word(p, &g.invert())?);
    }
    Ok(total / Q::from_integer(sphere_size(n).into()))
}

/// `𝒜_t f(p)` at every even `t ≥ 0` in `lo..=hi`, and their maximum.
pub fn maximal_profile<D, F, R>(
    sys: &D,
    f: &F,
    p: &D::Point,
    lo: usize,
    hi: usize,
    walks: usize,
    rng: &mut R,
) -> Result<(Vec<AvgEstimate>, f64)>
where
    D: Dynamics,
    F: PointFunction<D::Point>,
    R: Rng + ?Sized,
{
    if !lo.is_multiple_of(2) || !hi.is_multiple_of(2) || lo > hi {
        return Err(Error::Domain(format!("window {lo}..={hi} must have even endpoints")));
    }
    let profile = (lo..=hi)
        .step_by(2)
        .map(|n| mc_avg(sys, f, p, n, walks, rng))
        .collect::<Result<Vec<_>>>()?;
    let sup = profile.iter().map(|e| e.mean).fold(f64::NEG_INFINITY, f64::max);
    Ok((profile, sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{ancient_density, BallPoint, BallSystem, ProjectedCylinder, Stratum};
    use crate::dynamics::Constant;
    use crate::fgroup::{Letter, DEFAULT_ENUMERATION_CAP};
    use crate::finite_system::{Density, FiniteSystem};
    use crate::prf::stream_rng;
    use crate::rational::{q, qi};

    #[test]
    fn constant_is_exact() {
        let mut rng = stream_rng(1, 0, 0);
        let sys = BallSystem::default();
        let p = BallPoint::sample(&mut rng);
        let e = mc_avg(&sys, &Constant(q(7, 2)), &p, 4, 50, &mut rng).unwrap();
        assert_eq!(e.mean, 3.5);
        assert_eq!(e.half_width, 0.0);
    }

    #[test]
    fn parity_on_two_points() {
        let sys = FiniteSystem::two_point_swap();
        let f = Density::indicator(2, 0);
        let mut rng = stream_rng(2, 0, 0);
        for n in [2, 4, 6] {
            assert_eq!(mc_avg(&sys, &f, &0, n, 100, &mut rng).unwrap().mean, 1.0);
            assert_eq!(exact_avg_small(&sys, &f, &0, n, 12).unwrap(), qi(1));
        }
        assert_eq!(mc_avg(&sys, &f, &0, 3, 100, &mut rng).unwrap().mean, 0.0);
    }

    #[test]
    fn enumeration_matches_operator_on_finite_systems() {
        let mut rng = stream_rng(3, 0, 0);
        for _ in 0..50 {
            let states = rng.random_range(1..=10);
            let sys = FiniteSystem::random(states, &mut rng);
            let f = Density::random(states, &mut rng);
            for n in 1..=4 {
                let op = sys.avg_operator(&f, n, DEFAULT_ENUMERATION_CAP).unwrap();
                for x in 0..states {
                    assert_eq!(
                        exact_avg_small(&sys, &f, &x, n, DEFAULT_ENUMERATION_CAP).unwrap(),
                        op.0[x]
                    );
                }
            }
        }
    }

    #[test]
    fn radius_one_is_four_endpoints() {
        let mut rng = stream_rng(4, 0, 0);
        let sys = BallSystem::default();
        let f = ProjectedCylinder::new(ancient_density(-2).unwrap());
        for _ in 0..50 {
            let p = BallPoint::sample_in(Stratum::Interior(rng.random_range(1..=3)), &mut rng);
            let by_hand: Q = Letter::ALL
                .iter()
                .map(|&s| {
                    let mut x = p.clone();
                    x.shift(s, 64).unwrap();
                    f.exact(&x)
                })
                .sum::<Q>()
                / qi(4);
            assert_eq!(exact_avg_small(&sys, &f, &p, 1, 12).unwrap(), by_hand);
        }
    }

    #[test]
    fn hand_counted_radius_two() {
        // p = ℓ ℓ' … ∈ Y_2: only g = ℓ c with c ∉ {ℓ⁻¹, ℓ'} steps out and back
        // into Y_2, so 2 of the 12 words score 9.
        let mut rng = stream_rng(5, 0, 0);
        let sys = BallSystem::default();
        let f = ProjectedCylinder::new(ancient_density(-2).unwrap());
        for _ in 0..20 {
            let p = BallPoint::sample_in(Stratum::Interior(2), &mut rng);
            assert_eq!(exact_avg_small(&sys, &f, &p, 2, 12).unwrap(), q(3, 2));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let sys = FiniteSystem::two_point_swap();
        assert!(exact_avg_small(&sys, &Density::indicator(2, 0), &0, 13, 12).is_err());
    }

    #[test]
    fn monte_carlo_tracks_enumeration() {
        let mut rng = stream_rng(6, 0, 0);
        let sys = BallSystem::default();
        let f = ProjectedCylinder::new(ancient_density(-2).unwrap());
        let mut inside = 0;
        for trial in 0..40 {
            let n = 1 + trial % 5;
            let p = BallPoint::sample_in(Stratum::Interior(1 + (trial % 4) as u32), &mut rng);
            let exact = crate::rational::to_f64(&exact_avg_small(&sys, &f, &p, n, 12).unwrap());
            let e = mc_avg(&sys, &f, &p, n, 2000, &mut rng).unwrap();
            if e.contains(exact) {
                inside += 1;
            }
        }
        assert!(inside >= 37, "{inside}/40");
    }

    #[test]
    fn maximal_profile_sup_dominates() {
        let mut rng = stream_rng(7, 0, 0);
        let sys = BallSystem::default();
        let f = ProjectedCylinder::new(ancient_density(-2).unwrap());
        let p = BallPoint::sample_in(Stratum::Interior(2), &mut rng);
        let (profile, sup) = maximal_profile(&sys, &f, &p, 0, 6, 500, &mut rng).unwrap();
        assert_eq!(profile.len(), 4);
        assert!(profile.iter().all(|e| e.mean <= sup));
        assert_eq!(profile[0].mean, 9.0);
        assert!(maximal_profile(&sys, &f, &p, 1, 6, 10, &mut rng).is_err());
    }
}

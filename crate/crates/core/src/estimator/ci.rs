//! Confidence intervals for Monte Carlo means.

use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Two-sided level used throughout.
pub const CONFIDENCE: f64 = 0.99;

/// Standard normal quantile for a two-sided interval at `confidence`.
pub fn z_value(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiRule {
    /// No sampling error: the value was computed exactly.
    Exact,
    Normal,
    /// Zero sample variance; range-based bound.
    Hoeffding,
    /// Samples take two values `{0, V}`; exact binomial interval scaled by `V`.
    ClopperPearson,
}

/// Running moments plus enough bookkeeping to spot two-point samples.
#[derive(Clone, Debug, Default)]
pub struct Accumulator {
    n: u64,
    sum: f64,
    sumsq: f64,
    nonzero: u64,
    atom: Option<f64>,
    two_point: bool,
}

impl Accumulator {
    pub fn new() -> Self {
        Self {
            two_point: true,
            ..Self::default()
        }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
        if x != 0.0 {
            self.nonzero += 1;
            match self.atom {
                None => self.atom = Some(x),
                Some(v) if v != x => self.two_point = false,
                _ => {}
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    /// Number of non-zero samples.
    pub fn hits(&self) -> u64 {
        self.nonzero
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let m = self.mean();
        ((self.sumsq - self.n as f64 * m * m) / (self.n - 1) as f64).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub half_width: f64,
    pub rule: CiRule,
}

impl Interval {
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            lo: value,
            hi: value,
            half_width: 0.0,
            rule: CiRule::Exact,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * x.abs().max(1.0);
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn shifted(self, offset: f64) -> Self {
        Self {
            mean: self.mean + offset,
            lo: self.lo + offset,
            hi: self.hi + offset,
            ..self
        }
    }
}

/// Interval for the mean of samples known to lie in `bounds`.
pub fn interval(acc: &Accumulator, bounds: (f64, f64), confidence: f64) -> Result<Interval> {
    if acc.n == 0 {
        return Err(Error::Domain("no samples".into()));
    }
    let mean = acc.mean();
    if bounds.0 == bounds.1 {
        return Ok(Interval::exact(mean));
    }
    let n = acc.n as f64;
    let delta = 1.0 - confidence;
    let var = acc.sample_variance();
    if var == 0.0 {
        let half_width = (bounds.1 - bounds.0) * ((2.0 / delta).ln() / (2.0 * n)).sqrt();
        return Ok(Interval {
            mean,
            lo: (mean - half_width).max(bounds.0),
            hi: (mean + half_width).min(bounds.1),
            half_width,
            rule: CiRule::Hoeffding,
        });
    }
    if acc.two_point {
        let v = acc.atom.expect("variance > 0 needs a non-zero sample");
        let (p_lo, p_hi) = clopper_pearson(acc.nonzero, acc.n, delta);
        let (lo, hi) = if v > 0.0 {
            (v * p_lo, v * p_hi)
        } else {
            (v * p_hi, v * p_lo)
        };
        return Ok(Interval {
            mean,
            lo,
            hi,
            half_width: (hi - lo) / 2.0,
            rule: CiRule::ClopperPearson,
        });
    }
    let half_width = z_value(confidence) * (var / n).sqrt();
    Ok(Interval {
        mean,
        lo: mean - half_width,
        hi: mean + half_width,
        half_width,
        rule: CiRule::Normal,
    })
}

/// Exact binomial interval for `k` successes in `n` trials at level `1 − delta`.
pub fn clopper_pearson(k: u64, n: u64, delta: f64) -> (f64, f64) {
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0)
            .expect("positive shape")
            .inverse_cdf(delta / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf)
            .expect("positive shape")
            .inverse_cdf(1.0 - delta / 2.0)
    };
    (lo, hi)
}

//! Time profiles `t ↦ π_* f̃'_t(x)` of a tower density over a window of even
//! times.
//!
//! Each component of the density is exact as a cylinder function up to its
//! anchor time `delay − 2m`; later values are `E[f̃_{-2m}(X_L, S_L)]` along the
//! lifted walk started at `x`. One walk of length `L` feeds every time bin at
//! once: at step `L` it scores the component of the copy it currently sits on.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::avg::AvgEstimate;
use super::ci::{interval, Accumulator, CONFIDENCE};
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::fgroup::{nbw_step, uniform_letter, Letter};
use crate::glue::{DelayedDensity, TowerPoint, TowerSystem};
use crate::rational::to_f64;

/// Bins with fewer non-zero walk scores than this are flagged.
pub const MIN_HITS: u64 = 10;

/// Even times `lo, lo + 2, …, hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TimeWindow {
    pub lo: i64,
    pub hi: i64,
}

impl TimeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo % 2 != 0 || hi % 2 != 0 || lo > hi {
            return Err(Error::Domain(format!("window {lo}..={hi} must have even endpoints")));
        }
        Ok(Self { lo, hi })
    }

    /// `[center − 2n, center + 2n]`.
    pub fn around(center: i64, n: u32) -> Result<Self> {
        Self::new(center - 2 * n as i64, center + 2 * n as i64)
    }

    pub fn times(&self) -> impl Iterator<Item = i64> {
        (self.lo..=self.hi).step_by(2)
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / 2 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &TimeWindow) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    fn index(&self, t: i64) -> usize {
        ((t - self.lo) / 2) as usize
    }
}

/// Which components of the density are scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentFilter {
    All,
    /// Components living on the given copy (1 or 2) of `level`.
    LevelCopy {
        level: usize,
        copy: u8,
    },
}

impl ComponentFilter {
    fn admits(&self, copies: u32) -> bool {
        match *self {
            ComponentFilter::All => true,
            ComponentFilter::LevelCopy { level, copy } => 1 + ((copies >> level) & 1) as u8 == copy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    pub window: TimeWindow,
    pub estimates: Vec<AvgEstimate>,
    pub walks: u64,
    /// Walks that changed copy at some level.
    pub flipped_walks: u64,
}

impl Profile {
    pub fn sup(&self) -> f64 {
        self.sup_over(&self.window)
    }

    pub fn inf(&self) -> f64 {
        self.inf_over(&self.window)
    }

    fn slice(&self, w: &TimeWindow) -> &[AvgEstimate] {
        assert!(self.window.contains(w), "{w:?} outside {:?}", self.window);
        &self.estimates[self.window.index(w.lo)..=self.window.index(w.hi)]
    }

    pub fn sup_over(&self, w: &TimeWindow) -> f64 {
        self.slice(w).iter().map(|e| e.mean).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf_over(&self, w: &TimeWindow) -> f64 {
        self.slice(w).iter().map(|e| e.mean).fold(f64::INFINITY, f64::min)
    }

    /// Times whose estimate rests on fewer than [`MIN_HITS`] scoring walks.
    pub fn underpowered(&self) -> Vec<i64> {
        self.estimates
            .iter()
            .filter(|e| e.walks > 0 && e.hits < MIN_HITS)
            .map(|e| e.n)
            .collect()
    }

    pub fn flip_frequency(&self) -> f64 {
        if self.walks == 0 {
            0.0
        } else {
            self.flipped_walks as f64 / self.walks as f64
        }
    }
}

/// Anything that yields a time profile at a tower point.
pub trait ProfileSource: Sync {
    fn profile(&self, p: &TowerPoint, window: TimeWindow, walks: usize, rng: &mut ChaCha8Rng) -> Result<Profile>;
}

/// The constant density `c`.
#[derive(Clone, Copy, Debug)]
pub struct ConstantProfile(pub f64);

impl ProfileSource for ConstantProfile {
    fn profile(&self, _: &TowerPoint, window: TimeWindow, _: usize, _: &mut ChaCha8Rng) -> Result<Profile> {
        Ok(Profile {
            window,
            estimates: window.times().map(|t| AvgEstimate::exact(t, self.0)).collect(),
            walks: 0,
            flipped_walks: 0,
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Anchor {
    scale: f64,
    time: i64,
}

/// Evaluates `π_* f̃'_t` for a tower density, anchoring each component at
/// the exact slice `f̃_{-2m}`.
#[derive(Clone, Debug)]
pub struct ChainEvaluator<'a> {
    system: &'a TowerSystem,
    density: &'a DelayedDensity,
    m: u32,
    filter: ComponentFilter,
    anchors: Vec<Option<Anchor>>,
    bound: f64,
}

impl<'a> ChainEvaluator<'a> {
    pub fn new(system: &'a TowerSystem, density: &'a DelayedDensity, m: u32, filter: ComponentFilter) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("anchor offset m must be at least 1".into()));
        }
        if density.levels() != system.depth() {
            return Err(Error::InvalidSystem(format!(
                "density has {} levels but the system has {}",
                density.levels(),
                system.depth()
            )));
        }
        let anchors: Vec<Option<Anchor>> = density
            .components()
            .iter()
            .map(|c| {
                filter.admits(c.copies).then(|| Anchor {
                    scale: to_f64(&c.scale),
                    time: c.delay - 2 * m as i64,
                })
            })
            .collect();
        let peak = 4.0 * 9f64.powi(m as i32);
        let bound = anchors.iter().flatten().map(|a| a.scale * peak).sum();
        Ok(Self {
            system,
            density,
            m,
            filter,
            anchors,
            bound,
        })
    }

    pub fn filter(&self) -> ComponentFilter {
        self.filter
    }

    /// Largest score a single walk can contribute to one bin.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn exact_term(&self, p: &TowerPoint, t: i64) -> f64 {
        let c = self.density.component(p.copies);
        let scale = to_f64(&c.scale);
        let total: f64 = Letter::ALL
            .iter()
            .map(|&s| self.density.chain().value(&p.base, s, t - c.delay))
            .sum();
        scale * total / 4.0
    }
}

impl ProfileSource for ChainEvaluator<'_> {
    fn profile(&self, p: &TowerPoint, window: TimeWindow, walks: usize, rng: &mut ChaCha8Rng) -> Result<Profile> {
        if walks == 0 {
            return Err(Error::Domain("at least one walk is needed".into()));
        }
        let nbins = window.len();
        let mut exact = vec![0.0; nbins];
        let mut sampled = vec![false; nbins];
        for (b, t) in window.times().enumerate() {
            for (copies, anchor) in self.anchors.iter().enumerate() {
                let Some(a) = anchor else { continue };
                if t <= a.time {
                    if copies as u32 == p.copies {
                        exact[b] += self.exact_term(p, t);
                    }
                } else {
                    sampled[b] = true;
                }
            }
        }
        let min_anchor = self.anchors.iter().flatten().map(|a| a.time).min();
        let steps = match min_anchor {
            Some(a) if window.hi > a => (window.hi - a) as usize,
            _ => 0,
        };
        if steps == 0 || !sampled.contains(&true) {
            let estimates = window
                .times()
                .zip(&exact)
                .map(|(t, &v)| AvgEstimate::exact(t, v))
                .collect();
            return Ok(Profile {
                window,
                estimates,
                walks: 0,
                flipped_walks: 0,
            });
        }

        let anchor_depth = 2 * self.m as i64;
        let mut acc = vec![Accumulator::new(); nbins];
        let mut score = vec![0.0; nbins];
        let mut flipped_walks = 0;
        for _ in 0..walks {
            score.iter_mut().for_each(|v| *v = 0.0);
            let mut x = p.clone();
            let mut s = uniform_letter(rng);
            let mut flipped = false;
            for l in 1..=steps as i64 {
                let before = x.copies;
                self.system.shift(&mut x, s.inverse())?;
                flipped |= x.copies != before;
                s = nbw_step(s, rng);
                if l % 2 != 0 || x.base.depth() != Some(anchor_depth as u32) {
                    continue;
                }
                if let Some(a) = self.anchors[x.copies as usize] {
                    let t = l + a.time;
                    if t >= window.lo && t <= window.hi {
                        let v = self.density.chain().value(&x.base, s, -anchor_depth);
                        score[window.index(t)] += a.scale * v;
                    }
                }
            }
            flipped_walks += flipped as u64;
            for b in (0..nbins).filter(|&b| sampled[b]) {
                acc[b].push(score[b]);
            }
        }

        let mut estimates = Vec::with_capacity(nbins);
        for (b, t) in window.times().enumerate() {
            if sampled[b] {
                let i = interval(&acc[b], (0.0, self.bound), CONFIDENCE)?.shifted(exact[b]);
                estimates.push(AvgEstimate::from_interval(t, i, walks as u64, acc[b].hits()));
            } else {
                estimates.push(AvgEstimate::exact(t, exact[b]));
            }
        }
        Ok(Profile {
            window,
            estimates,
            walks: walks as u64,
            flipped_walks,
        })
    }
}

//! Towers of glued copies of the ball. Each level doubles the space and swaps
//! copies on a small coupling set `E ⊂ X_b` under the `b`-shift.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::ball::chain::AncientChain;
use crate::ball::cylinder::CylinderFunction;
use crate::ball::digits::{TernaryThreshold, DEFAULT_LOOKAHEAD};
use crate::ball::point::{BallPoint, Stratum};
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::fgroup::Letter;
use crate::rational::{format_q, pow3, q, qi, to_f64, Q};

/// One gluing: coupling mass `kappa` and half-delay `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlueLevel {
    pub kappa: Q,
    pub m: u64,
}

impl GlueLevel {
    pub fn new(kappa: Q, m: u64) -> Result<Self> {
        if kappa < Q::zero() || kappa >= q(1, 4) {
            return Err(Error::InvalidSystem(format!(
                "coupling mass {} must lie in [0, 1/4)",
                format_q(&kappa)
            )));
        }
        Ok(Self { kappa, m })
    }

    pub fn delay(&self) -> i64 {
        2 * self.m as i64
    }
}

/// `E_j = {x ∈ X_b : lo ≤ digit value of x < lo + 4κ}`.
#[derive(Clone, Debug)]
struct Window {
    lo: TernaryThreshold,
    hi: TernaryThreshold,
}

#[derive(Clone, Debug)]
pub struct TowerSystem {
    levels: Vec<GlueLevel>,
    windows: Vec<Window>,
    lookahead: usize,
}

impl TowerSystem {
    /// Windows for successive levels are laid end to end in the digit value,
    /// so they are disjoint; this needs `Σ κ ≤ 1/4`.
    pub fn new(levels: Vec<GlueLevel>, lookahead: usize) -> Result<Self> {
        if levels.len() > 16 {
            return Err(Error::InvalidSystem(format!(
                "{} levels exceed the limit of 16",
                levels.len()
            )));
        }
        let total: Q = levels.iter().map(|l| l.kappa.clone()).sum();
        if total > q(1, 4) {
            return Err(Error::InvalidSystem(format!(
                "coupling masses sum to {}, more than 1/4",
                format_q(&total)
            )));
        }
        let mut lo = Q::zero();
        let mut windows = Vec::with_capacity(levels.len());
        for l in &levels {
            let hi = &lo + qi(4) * &l.kappa;
            windows.push(Window {
                lo: TernaryThreshold::new(&lo, lookahead),
                hi: TernaryThreshold::new(&hi, lookahead),
            });
            lo = hi;
        }
        Ok(Self {
            levels,
            windows,
            lookahead,
        })
    }

    /// The unglued ball.
    pub fn base() -> Self {
        Self::new(Vec::new(), DEFAULT_LOOKAHEAD).expect("no levels")
    }

    pub fn levels(&self) -> &[GlueLevel] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn lookahead(&self) -> usize {
        self.lookahead
    }

    /// `μ'(X') = 2^depth`.
    pub fn total_measure(&self) -> Q {
        qi(1i64 << self.depth())
    }

    /// Whether `x ∈ E_level`. Points outside `X_b` are never in `E`.
    pub fn in_coupling_set(&self, level: usize, x: &BallPoint) -> Result<bool> {
        if x.stratum() != Stratum::BoundaryB {
            return Ok(false);
        }
        let w = &self.windows[level];
        let digits = x.word().digits();
        Ok(digits.value_below(&w.hi, self.lookahead)? && !digits.value_below(&w.lo, self.lookahead)?)
    }

    /// Bit mask of the levels whose coupling set contains `x`.
    fn flip_mask(&self, x: &BallPoint) -> Result<u32> {
        let mut mask = 0;
        if x.stratum() == Stratum::BoundaryB {
            for j in 0..self.depth() {
                if self.in_coupling_set(j, x)? {
                    mask |= 1 << j;
                }
            }
        }
        Ok(mask)
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> TowerPoint {
        let base = BallPoint::sample(rng);
        let copies = rng.random::<u32>() & self.full_mask();
        TowerPoint { base, copies }
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.depth()) - 1) as u32
    }
}

/// A base point together with its copy at every level. Bit `j` of `copies`
/// is clear for copy 1 and set for copy 2 of level `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerPoint {
    pub base: BallPoint,
    pub copies: u32,
}

impl TowerPoint {
    pub fn new(base: BallPoint, copies: u32) -> Self {
        Self { base, copies }
    }

    /// The copy index, 1 or 2, at `level`.
    pub fn copy(&self, level: usize) -> u8 {
        1 + ((self.copies >> level) & 1) as u8
    }
}

impl Dynamics for TowerSystem {
    type Point = TowerPoint;

    /// `a`-steps are the trivial lift. `b` flips the levels whose `E` contains
    /// the current base point; `b⁻¹` flips by membership of the image.
    fn shift(&self, p: &mut TowerPoint, s: Letter) -> Result<()> {
        match s {
            Letter::B => {
                let flips = self.flip_mask(&p.base)?;
                p.base.shift(s, self.lookahead)?;
                p.copies ^= flips;
            }
            Letter::B_INV => {
                p.base.shift(s, self.lookahead)?;
                p.copies ^= self.flip_mask(&p.base)?;
            }
            _ => p.base.shift(s, self.lookahead)?,
        }
        Ok(())
    }
}

/// `α ↦ α(1 − α/4)`.
pub fn alpha_recursion(alpha: &Q) -> Result<Q> {
    if *alpha < Q::zero() || *alpha > Q::one() {
        return Err(Error::Domain(format!("α = {} outside [0, 1]", format_q(alpha))));
    }
    Ok(alpha * (Q::one() - alpha / qi(4)))
}

/// One summand of a tower density: the base chain, delayed and scaled, on a
/// single combination of copies.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub copies: u32,
    pub scale: Q,
    pub delay: i64,
}

/// The level-`j` density: copy 2 of each level carries the previous level's
/// density delayed by `2M` and scaled by `1 − α/2`.
#[derive(Clone, Debug)]
pub struct DelayedDensity {
    chain: AncientChain,
    alphas: Vec<Q>,
    delays: Vec<i64>,
    components: Vec<Component>,
}

impl DelayedDensity {
    pub fn base(chain: AncientChain) -> Self {
        Self {
            chain,
            alphas: vec![Q::one()],
            delays: Vec::new(),
            components: vec![Component {
                copies: 0,
                scale: Q::one(),
                delay: 0,
            }],
        }
    }

    pub fn chain(&self) -> &AncientChain {
        &self.chain
    }

    pub fn levels(&self) -> usize {
        self.delays.len()
    }

    /// `α_0 = 1, …, α_levels`.
    pub fn alphas(&self) -> &[Q] {
        &self.alphas
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, copies: u32) -> &Component {
        &self.components[copies as usize]
    }

    /// The cylinder form of the slice on `copies` at time `t`, valid while the
    /// delayed base time is negative.
    pub fn slice(&self, copies: u32, t: i64) -> Result<(Q, CylinderFunction)> {
        let c = self.component(copies);
        let f = self.chain.density(t - c.delay)?;
        Ok((c.scale.clone(), f))
    }

    /// Exact `‖f̃'_t‖₁` from the atom masses of every slice.
    pub fn l1_norm(&self, t: i64) -> Result<Q> {
        let mut total = Q::zero();
        for c in &self.components {
            let (scale, f) = self.slice(c.copies, t)?;
            total += scale * f.l1_norm();
        }
        Ok(total)
    }

    pub fn support_mass(&self, t: i64) -> Result<Q> {
        let mut total = Q::zero();
        for c in &self.components {
            total += self.slice(c.copies, t)?.1.support_mass();
        }
        Ok(total)
    }

    /// `A'` with `support_mass(t) = A' · 3^t · μ'(X')`.
    pub fn support_constant(&self) -> Q {
        let total: Q = self.components.iter().map(|c| pow3(-c.delay) / qi(4)).sum();
        total / qi(1i64 << self.levels())
    }

    /// `f̃'_t(x, s)` on copy combination `copies` when the slice is exact.
    #[inline]
    pub fn value(&self, p: &TowerPoint, s: Letter, t: i64) -> f64 {
        let c = &self.components[p.copies as usize];
        to_f64(&c.scale) * self.chain.value(&p.base, s, t - c.delay)
    }
}

/// Glues two copies of the system carrying `prev`, with delay `2M` on copy 2.
pub fn lift_density(prev: &DelayedDensity, level: &GlueLevel, alpha: &Q) -> Result<DelayedDensity> {
    if *alpha <= Q::zero() || *alpha > Q::one() {
        return Err(Error::Domain(format!("α = {} outside (0, 1]", format_q(alpha))));
    }
    let bit = 1u32 << prev.levels();
    let attenuation = Q::one() - alpha / qi(2);
    let mut components = prev.components.clone();
    components.extend(prev.components.iter().map(|c| Component {
        copies: c.copies | bit,
        scale: &c.scale * &attenuation,
        delay: c.delay + level.delay(),
    }));
    let mut alphas = prev.alphas.clone();
    alphas.push(alpha_recursion(alpha)?);
    let mut delays = prev.delays.clone();
    delays.push(level.delay());
    Ok(DelayedDensity {
        chain: prev.chain,
        alphas,
        delays,
        components,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub kappa: String,
    pub m: u64,
    pub alpha: String,
    pub alpha_decimal: f64,
    /// `‖f̃'_{-1}‖₁ / μ'(X')` from atom masses.
    pub norm_ratio: String,
    pub norm_matches: bool,
    pub support_constant: String,
    pub support_constant_decimal: f64,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub system: TowerSystem,
    pub density: DelayedDensity,
    pub reports: Vec<LevelReport>,
}

impl Tower {
    pub fn alphas(&self) -> &[Q] {
        self.density.alphas()
    }

    pub fn norms_match(&self) -> bool {
        self.reports.iter().all(|r| r.norm_matches)
    }
}

/// Builds `levels.len()` gluings on top of the calibrated ball and checks each
/// level's `α` against the exact chain norm.
pub fn tower_build(chain: AncientChain, levels: Vec<GlueLevel>, lookahead: usize) -> Result<Tower> {
    let mut density = DelayedDensity::base(chain);
    let mut reports = vec![level_report(&density, 0, None)?];
    for (j, level) in levels.iter().enumerate() {
        let alpha = density.alphas()[j].clone();
        density = lift_density(&density, level, &alpha)?;
        reports.push(level_report(&density, j + 1, Some(level))?);
    }
    let system = TowerSystem::new(levels, lookahead)?;
    Ok(Tower {
        system,
        density,
        reports,
    })
}

fn level_report(density: &DelayedDensity, level: usize, glue: Option<&GlueLevel>) -> Result<LevelReport> {
    let truncated = truncate(density, level);
    let alpha = density.alphas()[level].clone();
    let ratio = truncated.l1_norm(-1)? / qi(1i64 << level);
    let a = truncated.support_constant();
    Ok(LevelReport {
        level,
        kappa: glue.map(|g| format_q(&g.kappa)).unwrap_or_else(|| "0/1".into()),
        m: glue.map_or(0, |g| g.m),
        alpha_decimal: to_f64(&alpha),
        norm_matches: ratio == alpha,
        alpha: format_q(&alpha),
        norm_ratio: format_q(&ratio),
        support_constant_decimal: to_f64(&a),
        support_constant: format_q(&a),
    })
}

/// The density as it stood after `levels` gluings.
fn truncate(density: &DelayedDensity, levels: usize) -> DelayedDensity {
    DelayedDensity {
        chain: density.chain,
        alphas: density.alphas[..=levels].to_vec(),
        delays: density.delays[..levels].to_vec(),
        components: density.components[..1 << levels].to_vec(),
    }
}

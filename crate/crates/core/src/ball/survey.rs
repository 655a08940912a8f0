//! Pointwise checks of the good-system axioms on random points of the ball.

use serde::Serialize;

use super::point::{BallPoint, Stratum};
use crate::error::Result;
use crate::fgroup::Letter;
use crate::prf::{purpose, stream_rng};

/// Deepest interior stratum tracked separately in the measure-preservation check.
const TRACKED_DEPTH: u32 = 4;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Violations {
    /// `x ∈ X_a` but `T_a^{±1} x ∉ X_a`.
    pub xa_invariance: u64,
    /// `x ∈ X_b` but `T_b^{±1} x ∉ X_b`.
    pub xb_invariance: u64,
    /// `x ∈ X_b` but `T_a x ∉ T_b X_a ∪ T_b⁻¹ X_a`.
    pub a_of_xb_in_b_of_xa: u64,
    /// `x ∈ X_a` but `T_b^{±1} x ∉ X_0`.
    pub b_of_xa_in_interior: u64,
    /// `x ∈ X_b` but `T_a x ∉ Y_1`.
    pub a_of_xb_in_y1: u64,
    /// `T_{s⁻¹} T_s x ≠ x`.
    pub invertibility: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.xa_invariance
            + self.xb_invariance
            + self.a_of_xb_in_b_of_xa
            + self.b_of_xa_in_interior
            + self.a_of_xb_in_y1
            + self.invertibility
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumMasses {
    pub interior: f64,
    pub boundary_a: f64,
    pub boundary_b: f64,
    pub y1: f64,
}

/// Stratum histogram of `T_s x` compared with the law of `μ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardCheck {
    pub letter: String,
    /// Labels `Y1..Y4`, `Y5+`, `Xa`, `Xb`.
    pub cells: Vec<String>,
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub samples: u64,
    pub seed: u64,
    pub violations: Violations,
    pub masses: StratumMasses,
    pub mass_tolerance: f64,
    pub pushforward: Vec<PushforwardCheck>,
    pub z_limit: f64,
    pub pass: bool,
}

fn cell(stratum: Stratum) -> usize {
    match stratum {
        Stratum::Interior(n) => (n.min(TRACKED_DEPTH + 1) - 1) as usize,
        Stratum::BoundaryA => TRACKED_DEPTH as usize + 1,
        Stratum::BoundaryB => TRACKED_DEPTH as usize + 2,
    }
}

fn cell_probabilities() -> Vec<f64> {
    let mut p: Vec<f64> = (1..=TRACKED_DEPTH).map(|n| 3f64.powi(-(n as i32))).collect();
    p.push(0.5 * 3f64.powi(-(TRACKED_DEPTH as i32)));
    p.extend([0.25, 0.25]);
    p
}

fn cell_labels() -> Vec<String> {
    let mut l: Vec<String> = (1..=TRACKED_DEPTH).map(|n| format!("Y{n}")).collect();
    l.push(format!("Y{}+", TRACKED_DEPTH + 1));
    l.extend(["Xa".to_string(), "Xb".to_string()]);
    l
}

/// Checks every pointwise axiom clause on `samples` points drawn from `μ`.
pub fn axiom_survey(samples: u64, seed: u64, lookahead: usize) -> Result<AxiomReport> {
    let mut rng = stream_rng(seed, purpose::AXIOMS, 0);
    let mut v = Violations::default();
    let mut counts = [0u64; 4];
    let ncells = TRACKED_DEPTH as usize + 3;
    let mut images = vec![vec![0u64; ncells]; 4];

    let moved = |p: &BallPoint, s: Letter| -> Result<BallPoint> {
        let mut q = p.clone();
        q.shift(s, lookahead)?;
        Ok(q)
    };

    for _ in 0..samples {
        let x = BallPoint::sample(&mut rng);
        match x.stratum() {
            Stratum::BoundaryA => {
                counts[1] += 1;
                for s in [Letter::A, Letter::A_INV] {
                    if moved(&x, s)?.stratum() != Stratum::BoundaryA {
                        v.xa_invariance += 1;
                    }
                }
                for s in [Letter::B, Letter::B_INV] {
                    if !moved(&x, s)?.stratum().is_interior() {
                        v.b_of_xa_in_interior += 1;
                    }
                }
            }
            Stratum::BoundaryB => {
                counts[2] += 1;
                for s in [Letter::B, Letter::B_INV] {
                    if moved(&x, s)?.stratum() != Stratum::BoundaryB {
                        v.xb_invariance += 1;
                    }
                }
                let y = moved(&x, Letter::A)?;
                if y.stratum() != Stratum::Interior(1) {
                    v.a_of_xb_in_y1 += 1;
                }
                // y ∈ T_b X_a ∪ T_b⁻¹ X_a iff T_b⁻¹ y or T_b y lies in X_a
                let in_image = [Letter::B_INV, Letter::B]
                    .into_iter()
                    .map(|s| moved(&y, s).map(|z| z.stratum() == Stratum::BoundaryA))
                    .collect::<Result<Vec<_>>>()?;
                if !in_image.contains(&true) {
                    v.a_of_xb_in_b_of_xa += 1;
                }
            }
            Stratum::Interior(n) => {
                counts[0] += 1;
                if n == 1 {
                    counts[3] += 1;
                }
            }
        }
        for s in Letter::ALL {
            let y = moved(&x, s)?;
            images[s.code() as usize][cell(y.stratum())] += 1;
            if moved(&y, s.inverse())? != x {
                v.invertibility += 1;
            }
        }
    }

    let n = samples.max(1) as f64;
    let masses = StratumMasses {
        interior: counts[0] as f64 / n,
        boundary_a: counts[1] as f64 / n,
        boundary_b: counts[2] as f64 / n,
        y1: counts[3] as f64 / n,
    };
    let probs = cell_probabilities();
    let pushforward: Vec<PushforwardCheck> = Letter::ALL
        .into_iter()
        .map(|s| {
            let z_scores: Vec<f64> = images[s.code() as usize]
                .iter()
                .zip(&probs)
                .map(|(&c, &p)| (c as f64 / n - p) / (p * (1.0 - p) / n).sqrt())
                .collect();
            let max_abs_z = z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
            PushforwardCheck {
                letter: s.to_string(),
                cells: cell_labels(),
                z_scores,
                max_abs_z,
            }
        })
        .collect();

    let mass_tolerance = 0.005;
    let z_limit = 4.0;
    let pass = v.total() == 0
        && (masses.interior - 0.5).abs() <= mass_tolerance
        && (masses.boundary_a - 0.25).abs() <= mass_tolerance
        && (masses.boundary_b - 0.25).abs() <= mass_tolerance
        && pushforward.iter().all(|c| c.max_abs_z <= z_limit);
    Ok(AxiomReport {
        samples,
        seed,
        violations: v,
        masses,
        mass_tolerance,
        pushforward,
        z_limit,
        pass,
    })
}

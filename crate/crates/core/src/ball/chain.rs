//! The ancient density chain `f̃_n`, `n < 0`, and the oracle that fixes which
//! slot each point carries.

use std::sync::OnceLock;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cylinder::{Atom, CylinderFunction};
use super::point::{BallPoint, Stratum};
use crate::error::{Error, Result};
use crate::fgroup::{Letter, ReducedWord};
use crate::rational::{format_q, pow3, qi, Q};

/// Range of times over which a slot rule must reproduce the chain exactly.
pub const CALIBRATION_RANGE: (i64, i64) = (-15, -2);

/// Which slots `s` carry `f̃_n(x, s)` for `x ∈ Y_{-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotRule {
    /// `s` is the first letter of `x`.
    FirstLetter,
    /// The three `s` with `S_s x ∈ Y_{-n-1}`, i.e. `s ≠ first⁻¹`.
    InwardTriple,
    /// `s` is the inverse of the first letter.
    InverseFirst,
}

impl SlotRule {
    pub const CANDIDATES: [SlotRule; 3] = [SlotRule::FirstLetter, SlotRule::InwardTriple, SlotRule::InverseFirst];

    #[inline]
    pub fn selects(self, first: Letter, slot: Letter) -> bool {
        match self {
            SlotRule::FirstLetter => slot == first,
            SlotRule::InwardTriple => slot != first.inverse(),
            SlotRule::InverseFirst => slot == first.inverse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SlotRule::FirstLetter => "first-letter",
            SlotRule::InwardTriple => "inward-triple",
            SlotRule::InverseFirst => "inverse-first",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    pub rule: SlotRule,
    pub norms_exact: bool,
    pub chain_exact: bool,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub range: (i64, i64),
    pub candidates: Vec<CandidateReport>,
    pub selected: Option<SlotRule>,
}

/// Runs every candidate rule against `‖f̃_n‖₁ = 1` and `P f̃_n = f̃_{n+1}`
/// for `n ∈ lo..=hi`; selects the rule iff it is the only one passing.
pub fn calibrate(lo: i64, hi: i64) -> Result<Calibration> {
    if hi > -2 || lo > hi {
        return Err(Error::Domain(format!(
            "calibration range {lo}..={hi} must lie in ..=-2"
        )));
    }
    let mut candidates = Vec::new();
    for rule in SlotRule::CANDIDATES {
        let chain = AncientChain::with_rule(rule);
        let mut report = CandidateReport {
            rule,
            norms_exact: true,
            chain_exact: true,
            first_failure: None,
        };
        for n in lo..=hi {
            let f = chain.density(n)?;
            let norm = f.l1_norm();
            if !norm.is_one() {
                report.norms_exact = false;
                report
                    .first_failure
                    .get_or_insert(format!("norm at n = {n} is {}", format_q(&norm)));
            }
            if f.push_p_exact()? != chain.density(n + 1)? {
                report.chain_exact = false;
                report
                    .first_failure
                    .get_or_insert(format!("P f(n) differs from f(n+1) at n = {n}"));
            }
        }
        candidates.push(report);
    }
    let passing: Vec<SlotRule> = candidates
        .iter()
        .filter(|c| c.norms_exact && c.chain_exact)
        .map(|c| c.rule)
        .collect();
    let selected = (passing.len() == 1).then(|| passing[0]);
    Ok(Calibration {
        range: (lo, hi),
        candidates,
        selected,
    })
}

/// The calibration over the default range, computed once per process.
pub fn default_calibration() -> &'static Calibration {
    static CELL: OnceLock<Calibration> = OnceLock::new();
    CELL.get_or_init(|| calibrate(CALIBRATION_RANGE.0, CALIBRATION_RANGE.1).expect("range is interior"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AncientChain {
    rule: SlotRule,
}

impl AncientChain {
    pub fn with_rule(rule: SlotRule) -> Self {
        Self { rule }
    }

    /// The chain with the slot rule selected by the calibration oracle.
    pub fn calibrated() -> Result<Self> {
        let cal = default_calibration();
        cal.selected.map(Self::with_rule).ok_or_else(|| {
            Error::Check(format!(
                "slot calibration did not single out a rule: {:?}",
                cal.candidates
                    .iter()
                    .filter(|c| c.first_failure.is_none())
                    .map(|c| c.rule)
                    .collect::<Vec<_>>()
            ))
        })
    }

    pub fn rule(&self) -> SlotRule {
        self.rule
    }

    /// Exact `f̃_n` for `n < 0`.
    pub fn density(&self, n: i64) -> Result<CylinderFunction> {
        if n >= 0 {
            return Err(Error::Domain(format!(
                "the ancient chain is defined for n < 0, got {n}"
            )));
        }
        let depth = (-n) as u32;
        let value = qi(4) * pow3(-n);
        let atoms = Letter::ALL.into_iter().flat_map(|first| {
            let value = value.clone();
            Letter::ALL
                .into_iter()
                .filter(move |&s| self.rule.selects(first, s))
                .map(move |slot| Atom {
                    depth,
                    prefix: ReducedWord::new(vec![first]).expect("single letter"),
                    slot,
                    value: value.clone(),
                })
        });
        Ok(CylinderFunction::from_atoms(atoms)?.canonical())
    }

    /// `f̃_n(x, s)` as a float, without building the cylinder function.
    #[inline]
    pub fn value(&self, p: &BallPoint, s: Letter, n: i64) -> f64 {
        match p.stratum() {
            Stratum::Interior(d) if n < 0 && d as i64 == -n && self.rule.selects(p.word().first(), s) => {
                4.0 * 3f64.powi(d as i32)
            }
            _ => 0.0,
        }
    }
}

/// `f̃_n` under the calibrated slot rule.
pub fn ancient_density(n: i64) -> Result<CylinderFunction> {
    AncientChain::calibrated()?.density(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep {
    pub n: i64,
    pub norm: String,
    pub support_mass: String,
    /// `support_mass ≤ 3ⁿ/4`.
    pub support_bound_holds: bool,
    pub interior_only: bool,
    /// `P f̃_n = f̃_{n+1}`, checked for `n ≤ -2`.
    pub push_exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub rule: SlotRule,
    pub steps: Vec<ChainStep>,
    pub pass: bool,
}

/// Exact checks of norm, support size and the Markov relation for `n ∈ lo..=hi`.
pub fn verify_chain(chain: &AncientChain, lo: i64, hi: i64) -> Result<ChainReport> {
    if hi >= 0 || lo > hi {
        return Err(Error::Domain(format!("chain range {lo}..={hi} must be negative")));
    }
    let mut steps = Vec::new();
    for n in lo..=hi {
        let f = chain.density(n)?;
        let support: Q = f.support_mass();
        let push_exact = if n <= -2 {
            Some(f.push_p_exact()? == chain.density(n + 1)?)
        } else {
            None
        };
        steps.push(ChainStep {
            n,
            norm: format_q(&f.l1_norm()),
            support_bound_holds: support <= pow3(n) / qi(4),
            support_mass: format_q(&support),
            interior_only: f.min_depth().is_some_and(|d| d >= 1),
            push_exact,
        });
    }
    let pass = steps
        .iter()
        .all(|s| s.norm == "1/1" && s.support_bound_holds && s.interior_only && s.push_exact != Some(false));
    Ok(ChainReport {
        rule: chain.rule(),
        steps,
        pass,
    })
}

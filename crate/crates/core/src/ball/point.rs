use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::digits::{Direction, DEFAULT_LOOKAHEAD};
use super::word::LazyWord;
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::fgroup::{uniform_letter, Letter};
use crate::rational::{pow3, q, Q};

/// Where a point of the ball lives: the sphere of radius `n` in the interior,
/// or one of the two boundary components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stratum {
    Interior(u32),
    BoundaryA,
    BoundaryB,
}

impl Stratum {
    pub fn measure(self) -> Q {
        match self {
            Stratum::Interior(n) => pow3(-(n as i64)),
            Stratum::BoundaryA | Stratum::BoundaryB => q(1, 4),
        }
    }

    pub fn depth(self) -> Option<u32> {
        match self {
            Stratum::Interior(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_interior(self) -> bool {
        matches!(self, Stratum::Interior(_))
    }

    /// Draws from `μ`: interior depth `n` with probability `3⁻ⁿ`, each boundary with `1/4`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Stratum {
        let u: f64 = rng.random();
        if u < 0.25 {
            return Stratum::BoundaryA;
        }
        if u < 0.5 {
            return Stratum::BoundaryB;
        }
        let mut n = 1;
        while rng.random::<f64>() >= 2.0 / 3.0 {
            n += 1;
        }
        Stratum::Interior(n)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::Interior(n) => write!(f, "Y{n}"),
            Stratum::BoundaryA => write!(f, "Xa"),
            Stratum::BoundaryB => write!(f, "Xb"),
        }
    }
}

/// A point of the ball. Boundary points store the representative of their
/// reflection class that starts with `b` (in `X_a`) or `a` (in `X_b`).
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    stratum: Stratum,
    word: LazyWord,
}

impl BallPoint {
    pub fn new(stratum: Stratum, word: LazyWord) -> Result<Self> {
        let ok = match stratum {
            Stratum::Interior(n) => n >= 1,
            Stratum::BoundaryA => word.first() == Letter::B,
            Stratum::BoundaryB => word.first() == Letter::A,
        };
        if !ok {
            return Err(Error::Domain(format!("{word} is not a canonical {stratum} word")));
        }
        Ok(Self { stratum, word })
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let stratum = Stratum::sample(rng);
        Self::sample_in(stratum, rng)
    }

    pub fn sample_in<R: Rng + ?Sized>(stratum: Stratum, rng: &mut R) -> Self {
        let first = match stratum {
            Stratum::Interior(_) => uniform_letter(rng),
            Stratum::BoundaryA => Letter::B,
            Stratum::BoundaryB => Letter::A,
        };
        Self {
            stratum,
            word: LazyWord::random(first, rng),
        }
    }

    pub fn stratum(&self) -> Stratum {
        self.stratum
    }

    pub fn word(&self) -> &LazyWord {
        &self.word
    }

    pub fn depth(&self) -> Option<u32> {
        self.stratum.depth()
    }

    /// Replaces `x` with `T_s x`.
    pub fn shift(&mut self, s: Letter, lookahead: usize) -> Result<()> {
        match self.stratum {
            Stratum::Interior(n) => {
                if s == self.word.first().inverse() {
                    self.word.drop_first();
                    self.stratum = Stratum::Interior(n + 1);
                } else if n > 1 {
                    self.word.prepend(s);
                    self.stratum = Stratum::Interior(n - 1);
                } else {
                    self.word.prepend(s);
                    if s.code() & 2 != 0 {
                        self.word.reflect();
                    }
                    self.stratum = if s.is_a_generator() {
                        Stratum::BoundaryB
                    } else {
                        Stratum::BoundaryA
                    };
                }
            }
            Stratum::BoundaryB => match s {
                Letter::A => self.leave_boundary(true),
                Letter::A_INV => self.leave_boundary(false),
                _ => {}
            },
            Stratum::BoundaryA => match s {
                Letter::B => self.leave_boundary(true),
                Letter::B_INV => self.leave_boundary(false),
                Letter::A => self.word.digits_mut().odometer_step(Direction::Forward, lookahead)?,
                _ => self.word.digits_mut().odometer_step(Direction::Backward, lookahead)?,
            },
        }
        Ok(())
    }

    /// Lifts to the representative starting with `s⁻¹` and cancels into `Y_1`.
    fn leave_boundary(&mut self, reflect: bool) {
        if reflect {
            self.word.reflect();
        }
        self.word.drop_first();
        self.stratum = Stratum::Interior(1);
    }
}

impl fmt::Display for BallPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.stratum, self.word)
    }
}

/// The ball as an F₂-system.
#[derive(Clone, Copy, Debug)]
pub struct BallSystem {
    pub lookahead: usize,
}

impl Default for BallSystem {
    fn default() -> Self {
        Self {
            lookahead: DEFAULT_LOOKAHEAD,
        }
    }
}

impl Dynamics for BallSystem {
    type Point = BallPoint;

    fn shift(&self, p: &mut BallPoint, s: Letter) -> Result<()> {
        p.shift(s, self.lookahead)
    }
}

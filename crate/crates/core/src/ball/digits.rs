//! Base-3 digit view of half-infinite reduced words.
//!
//! Digit `i` of a word is the label of letter `i+1` relative to letter `i`
//! under `successor(ℓ, d) = ℓ XOR [0, 1, 3][d]`: keep the letter, switch to
//! the other generator with the same sign, or with the opposite sign. The
//! labeling commutes with inversion, so a word and its letterwise inverse
//! share one digit stream.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fgroup::Letter;
use crate::prf::ternary_digit;
use crate::rational::Q;

/// Digits scanned before a carry or a threshold comparison gives up.
pub const DEFAULT_LOOKAHEAD: usize = 64;

const LABEL_MASKS: [u8; 3] = [0, 1, 3];

#[inline]
pub fn successor(prev: Letter, digit: u8) -> Letter {
    Letter::from_code(prev.code() ^ LABEL_MASKS[digit as usize])
}

/// `None` when `next = prev⁻¹`.
#[inline]
pub fn digit_between(prev: Letter, next: Letter) -> Option<u8> {
    match prev.code() ^ next.code() {
        0 => Some(0),
        1 => Some(1),
        3 => Some(2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug)]
enum Tail {
    Constant(u8),
    Keyed { key: u64, next: u64 },
}

/// A half-infinite digit sequence: an explicit head followed by a tail that is
/// either constant or a pure function of `(key, index)`.
#[derive(Clone, Debug)]
pub struct DigitStream {
    head: VecDeque<u8>,
    tail: Tail,
}

impl DigitStream {
    pub fn keyed(key: u64) -> Self {
        Self {
            head: VecDeque::new(),
            tail: Tail::Keyed { key, next: 0 },
        }
    }

    pub fn with_constant_tail(prefix: &[u8], fill: u8) -> Self {
        assert!(prefix.iter().chain([&fill]).all(|&d| d < 3));
        Self {
            head: prefix.iter().copied().collect(),
            tail: Tail::Constant(fill),
        }
    }

    #[inline]
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.head.len() {
            return self.head[i];
        }
        match self.tail {
            Tail::Constant(d) => d,
            Tail::Keyed { key, next } => ternary_digit(key, next + (i - self.head.len()) as u64),
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.digit(i)).collect()
    }

    /// Number of digits held explicitly.
    pub fn materialized(&self) -> usize {
        self.head.len()
    }

    fn materialize(&mut self, len: usize) {
        while self.head.len() < len {
            let d = match &mut self.tail {
                Tail::Constant(d) => *d,
                Tail::Keyed { key, next } => {
                    let d = ternary_digit(*key, *next);
                    *next += 1;
                    d
                }
            };
            self.head.push_back(d);
        }
    }

    #[inline]
    pub fn push_front(&mut self, d: u8) {
        debug_assert!(d < 3);
        self.head.push_front(d);
    }

    #[inline]
    pub fn pop_front(&mut self) -> u8 {
        self.materialize(1);
        self.head.pop_front().expect("materialized")
    }

    /// Adds (or subtracts) one at digit 0 with carry. The carry stops at the
    /// first digit that is not 2 (resp. not 0); if that takes more than
    /// `bound` digits the stream is left untouched and an error is returned.
    pub fn odometer_step(&mut self, direction: Direction, bound: usize) -> Result<()> {
        let saturated = match direction {
            Direction::Forward => 2,
            Direction::Backward => 0,
        };
        let stop = (0..bound)
            .find(|&i| self.digit(i) != saturated)
            .ok_or(Error::LookaheadExceeded { bound })?;
        self.materialize(stop + 1);
        for i in 0..stop {
            self.head[i] = 2 - saturated;
        }
        match direction {
            Direction::Forward => self.head[stop] += 1,
            Direction::Backward => self.head[stop] -= 1,
        }
        Ok(())
    }

    /// Whether `Σ dᵢ 3^{-(i+1)}` lies below `threshold`.
    pub fn value_below(&self, threshold: &TernaryThreshold, bound: usize) -> Result<bool> {
        match threshold {
            TernaryThreshold::Zero => Ok(false),
            TernaryThreshold::AtLeastOne => Ok(true),
            TernaryThreshold::Digits { digits, terminates } => {
                for i in 0..bound {
                    if *terminates && i >= digits.len() {
                        // the rest of the threshold is zeros, so x >= t
                        return Ok(false);
                    }
                    let e = digits.get(i).copied().unwrap_or(0);
                    let d = self.digit(i);
                    if d != e {
                        return Ok(d < e);
                    }
                }
                Err(Error::LookaheadExceeded { bound })
            }
        }
    }
}

impl PartialEq for DigitStream {
    /// Equal as infinite sequences. Keyed tails compare by key and alignment.
    fn eq(&self, other: &Self) -> bool {
        let aligned = match (&self.tail, &other.tail) {
            (Tail::Constant(a), Tail::Constant(b)) => a == b,
            (Tail::Keyed { key: k1, next: n1 }, Tail::Keyed { key: k2, next: n2 }) => {
                k1 == k2 && (*n1 as i128 - self.head.len() as i128) == (*n2 as i128 - other.head.len() as i128)
            }
            _ => false,
        };
        aligned && {
            let n = self.head.len().max(other.head.len());
            (0..n).all(|i| self.digit(i) == other.digit(i))
        }
    }
}

/// Base-3 expansion of a threshold `t` for lazy comparisons `x < t`.
#[derive(Clone, Debug, PartialEq)]
pub enum TernaryThreshold {
    Zero,
    AtLeastOne,
    /// Leading digits of `t ∈ (0, 1)`; if `terminates`, every later digit is 0.
    Digits {
        digits: Vec<u8>,
        terminates: bool,
    },
}

impl TernaryThreshold {
    /// Expands `t` to `bound` digits (`t ≤ 0` and `t ≥ 1` are special-cased).
    pub fn new(t: &Q, bound: usize) -> Self {
        if *t <= Q::zero() {
            return TernaryThreshold::Zero;
        }
        if *t >= Q::one() {
            return TernaryThreshold::AtLeastOne;
        }
        let three = BigInt::from(3u8);
        let mut numer = t.numer().clone();
        let denom = t.denom().clone();
        let mut digits = Vec::with_capacity(bound);
        while digits.len() < bound {
            if numer.is_zero() {
                return TernaryThreshold::Digits {
                    digits,
                    terminates: true,
                };
            }
            numer *= &three;
            let (d, r) = numer.div_rem(&denom);
            digits.push(d.to_u8().expect("digit < 3"));
            numer = r;
        }
        TernaryThreshold::Digits {
            digits,
            terminates: numer.is_zero(),
        }
    }
}

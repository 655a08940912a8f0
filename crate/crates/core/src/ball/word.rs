use std::fmt;

use rand::Rng;

use super::digits::{digit_between, successor, DigitStream};
use crate::fgroup::{Letter, ReducedWord};

/// A half-infinite reduced word, stored as its first letter plus the digit
/// stream of the remaining letters. Reflection (the letterwise inverse) only
/// touches the first letter.
#[derive(Clone, Debug, PartialEq)]
pub struct LazyWord {
    first: Letter,
    digits: DigitStream,
}

impl LazyWord {
    pub fn new(first: Letter, digits: DigitStream) -> Self {
        Self { first, digits }
    }

    /// A word starting with `first` whose later letters are uniform
    /// non-backtracking choices keyed by `key`.
    pub fn keyed(first: Letter, key: u64) -> Self {
        Self::new(first, DigitStream::keyed(key))
    }

    pub fn random<R: Rng + ?Sized>(first: Letter, rng: &mut R) -> Self {
        Self::keyed(first, rng.random())
    }

    /// A word beginning with `prefix` (non-empty) and continuing with a keyed tail.
    pub fn with_prefix(prefix: &ReducedWord, key: u64) -> Self {
        let letters = prefix.letters();
        let mut digits = DigitStream::keyed(key);
        for pair in letters.windows(2).rev() {
            digits.push_front(digit_between(pair[0], pair[1]).expect("reduced"));
        }
        Self::new(letters[0], digits)
    }

    #[inline]
    pub fn first(&self) -> Letter {
        self.first
    }

    pub fn digits(&self) -> &DigitStream {
        &self.digits
    }

    pub fn digits_mut(&mut self) -> &mut DigitStream {
        &mut self.digits
    }

    /// The first `n` letters.
    pub fn letters(&self, n: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(n);
        let mut l = self.first;
        for i in 0..n {
            if i > 0 {
                l = successor(l, self.digits.digit(i - 1));
            }
            out.push(l);
        }
        out
    }

    pub fn starts_with(&self, prefix: &[Letter]) -> bool {
        let mut l = self.first;
        for (i, &p) in prefix.iter().enumerate() {
            if i > 0 {
                l = successor(l, self.digits.digit(i - 1));
            }
            if l != p {
                return false;
            }
        }
        true
    }

    /// `s·w` for `s ≠ first⁻¹`.
    #[inline]
    pub fn prepend(&mut self, s: Letter) {
        let d = digit_between(s, self.first).expect("prepend must not cancel");
        self.digits.push_front(d);
        self.first = s;
    }

    /// Removes the first letter.
    #[inline]
    pub fn drop_first(&mut self) {
        let d = self.digits.pop_front();
        self.first = successor(self.first, d);
    }

    #[inline]
    pub fn reflect(&mut self) {
        self.first = self.first.inverse();
    }

    pub fn reflected(&self) -> Self {
        let mut w = self.clone();
        w.reflect();
        w
    }
}

impl fmt::Display for LazyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters(12) {
            write!(f, "{l}")?;
        }
        write!(f, "…")
    }
}

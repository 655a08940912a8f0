//! Reduced-word arithmetic in the free group on `a`, `b`.
//!
//! Letters carry a 2-bit code `a=0, b=1, a⁻¹=2, b⁻¹=3`, so inversion is
//! `code ^ 2` and the code order is the global letter order `a < b < a⁻¹ < b⁻¹`.
//! Words print over `{a, b, A, B}` with capitals for inverses.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest radius for which whole spheres are enumerated (`4·3¹¹ ≈ 708k` words).
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const B: Letter = Letter(1);
    pub const A_INV: Letter = Letter(2);
    pub const B_INV: Letter = Letter(3);
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::A_INV, Letter::B_INV];

    #[inline]
    pub fn from_code(code: u8) -> Letter {
        Letter(code & 3)
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 2)
    }

    /// True for `a` and `a⁻¹`.
    #[inline]
    pub fn is_a_generator(self) -> bool {
        self.0 & 1 == 0
    }

    /// The three letters that may follow `self` in a reduced word, in letter order.
    #[inline]
    pub fn successors(self) -> [Letter; 3] {
        let banned = self.0 ^ 2;
        let mut out = [Letter(0); 3];
        let mut i = 0;
        for c in 0..4u8 {
            if c != banned {
                out[i] = Letter(c);
                i += 1;
            }
        }
        out
    }

    pub fn to_char(self) -> char {
        ['a', 'b', 'A', 'B'][self.0 as usize]
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::A_INV),
            'B' => Some(Letter::B_INV),
            _ => None,
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A group element as its unique reduced word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Fails if two adjacent letters cancel.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.windows(2).any(|w| w[1] == w[0].inverse()) {
            let s: String = letters.iter().map(|l| l.to_char()).collect();
            return Err(Error::parse("reduced word", s));
        }
        Ok(Self { letters })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push_reduce(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Right-multiplies by one letter, cancelling if needed.
    pub fn push_reduce(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    /// The reduced form of the product `self · other`.
    pub fn reduce_concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push_reduce(l);
        }
        out
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    /// Parses a reduced word over `{a, b, A, B}`; non-reduced input is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::parse("reduced word", s)))
            .collect::<Result<Vec<_>>>()?;
        ReducedWord::new(letters)
    }
}

/// Number of reduced words of length `n`: `1` for `n = 0`, else `4·3^(n−1)`.
pub fn sphere_size(n: usize) -> u128 {
    if n == 0 {
        1
    } else {
        4 * 3u128.pow(n as u32 - 1)
    }
}

/// Depth-first lexicographic enumeration of the sphere of radius `n`.
pub fn enumerate_sphere(n: usize, cap: usize) -> Result<SphereIter> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(SphereIter {
        choices: vec![0; n],
        done: false,
    })
}

/// Iterator over one sphere; the state is a mixed-radix counter whose first
/// digit has radix 4 and the rest radix 3 (index into [`Letter::successors`]).
pub struct SphereIter {
    choices: Vec<u8>,
    done: bool,
}

impl SphereIter {
    fn current(&self) -> ReducedWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(self.choices.len());
        for (i, &c) in self.choices.iter().enumerate() {
            let l = if i == 0 {
                Letter::from_code(c)
            } else {
                letters[i - 1].successors()[c as usize]
            };
            letters.push(l);
        }
        ReducedWord { letters }
    }

    fn advance(&mut self) {
        for i in (0..self.choices.len()).rev() {
            let radix = if i == 0 { 4 } else { 3 };
            self.choices[i] += 1;
            if self.choices[i] < radix {
                return;
            }
            self.choices[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for SphereIter {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        if self.done {
            return None;
        }
        let w = self.current();
        self.advance();
        Some(w)
    }
}

pub fn uniform_letter<R: Rng + ?Sized>(rng: &mut R) -> Letter {
    Letter::from_code(rng.random_range(0..4u8))
}

/// One non-backtracking step: uniform over the three letters other than `last⁻¹`.
#[inline]
pub fn nbw_step<R: Rng + ?Sized>(last: Letter, rng: &mut R) -> Letter {
    last.successors()[rng.random_range(0..3usize)]
}

/// Uniform element of the sphere of radius `n ≥ 1`.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ReducedWord> {
    if n == 0 {
        return Err(Error::Domain("sphere sampling needs n >= 1".into()));
    }
    let mut letters = Vec::with_capacity(n);
    let mut last = uniform_letter(rng);
    letters.push(last);
    for _ in 1..n {
        last = nbw_step(last, rng);
        letters.push(last);
    }
    Ok(ReducedWord { letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn chi2_999(dof: usize) -> f64 {
        ChiSquared::new(dof as f64).unwrap().inverse_cdf(0.999)
    }

    fn chi2_stat(counts: &HashMap<ReducedWord, usize>, cells: usize, total: usize) -> f64 {
        let e = total as f64 / cells as f64;
        assert_eq!(counts.len(), cells);
        counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum()
    }

    #[test]
    fn inverse_is_an_involution() {
        for l in Letter::ALL {
            assert_eq!(l.inverse().inverse(), l);
            assert_ne!(l.inverse(), l);
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("a").reduce_concat(&w("A")), ReducedWord::identity());
        let p = w("ab").reduce_concat(&w("Ba"));
        assert_eq!(p, w("aa"));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ReducedWord::identity().invert(), ReducedWord::identity());
        assert_eq!(w("ab").invert(), w("BA"));
    }

    #[test]
    fn parse_rejects_unreduced_and_foreign() {
        assert!("aA".parse::<ReducedWord>().is_err());
        assert!("abx".parse::<ReducedWord>().is_err());
        assert_eq!(w("abA").to_string(), "abA");
    }

    #[test]
    fn sphere_sizes() {
        assert_eq!(sphere_size(0), 1);
        assert_eq!(sphere_size(1), 4);
        assert_eq!(sphere_size(2), 12);
        assert_eq!(sphere_size(5), 324);
    }

    #[test]
    fn radius_one_and_two() {
        let s1: Vec<_> = enumerate_sphere(1, 12).unwrap().collect();
        assert_eq!(s1, vec![w("a"), w("b"), w("A"), w("B")]);

        // oracle: all 16 two-letter strings minus the four cancelling pairs
        let mut filtered = Vec::new();
        for x in Letter::ALL {
            for y in Letter::ALL {
                if y != x.inverse() {
                    filtered.push(ReducedWord::new(vec![x, y]).unwrap());
                }
            }
        }
        let s2: Vec<_> = enumerate_sphere(2, 12).unwrap().collect();
        assert_eq!(s2.len(), 12);
        assert_eq!(s2, filtered, "depth-first lexicographic order");
    }

    #[test]
    fn sphere_cardinalities_match_formula() {
        for n in 0..=8 {
            let words: Vec<_> = enumerate_sphere(n, 12).unwrap().collect();
            assert_eq!(words.len() as u128, sphere_size(n));
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), words.len());
            assert!(words.iter().all(|g| g.len() == n));
        }
        assert_eq!(enumerate_sphere(5, 12).unwrap().count(), 324);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_sphere(13, DEFAULT_ENUMERATION_CAP),
            Err(Error::CapExceeded { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn uniform_radius_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut counts = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sample_uniform_sphere(1, &mut rng).unwrap()).or_insert(0) += 1;
        }
        for c in counts.values() {
            assert!((*c as f64 / draws as f64 - 0.25).abs() < 0.01);
        }
        assert!(chi2_stat(&counts, 4, draws) < chi2_999(3));
    }

    #[test]
    fn uniform_radius_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let draws = 100_000;
        let mut counts = HashMap::new();
        for _ in 0..draws {
            let g = sample_uniform_sphere(3, &mut rng).unwrap();
            assert_eq!(g.len(), 3);
            *counts.entry(g).or_insert(0) += 1;
        }
        let p = 1.0 / 36.0;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        for c in counts.values() {
            assert!((*c as f64 / draws as f64 - p).abs() < 3.0 * sigma + 1e-4);
        }
        assert!(chi2_stat(&counts, 36, draws) < chi2_999(35));
    }

    #[test]
    fn nbw_step_never_backtracks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_ne!(nbw_step(Letter::A, &mut rng), Letter::A_INV);
        }
        let mut counts = [0usize; 4];
        let steps = 100_000;
        for _ in 0..steps {
            counts[nbw_step(Letter::B, &mut rng).code() as usize] += 1;
        }
        assert_eq!(counts[Letter::B_INV.code() as usize], 0);
        for l in Letter::B.successors() {
            let f = counts[l.code() as usize] as f64 / steps as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn chained_steps_reproduce_the_sphere_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 72_000;
        let mut counts = HashMap::new();
        for _ in 0..draws {
            let mut letters = vec![uniform_letter(&mut rng)];
            for _ in 1..3 {
                let next = nbw_step(*letters.last().unwrap(), &mut rng);
                letters.push(next);
            }
            *counts.entry(ReducedWord::new(letters).unwrap()).or_insert(0) += 1;
        }
        assert!(chi2_stat(&counts, 36, draws) < chi2_999(35));
    }

    fn arb_word() -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec(0u8..4, 0..12)
            .prop_map(|codes| ReducedWord::reduce(codes.into_iter().map(Letter::from_code)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2_000))]

        #[test]
        fn concat_length_parity_and_bound(u in arb_word(), v in arb_word()) {
            let uv = u.reduce_concat(&v);
            prop_assert_eq!(uv.len() % 2, (u.len() + v.len()) % 2);
            prop_assert!(uv.len() <= u.len() + v.len());
            prop_assert!(ReducedWord::new(uv.letters().to_vec()).is_ok());
        }

        #[test]
        fn concat_is_associative(u in arb_word(), v in arb_word(), x in arb_word()) {
            prop_assert_eq!(u.reduce_concat(&v).reduce_concat(&x), u.reduce_concat(&v.reduce_concat(&x)));
        }

        #[test]
        fn inverse_cancels_both_sides(u in arb_word()) {
            prop_assert!(u.reduce_concat(&u.invert()).is_empty());
            prop_assert!(u.invert().reduce_concat(&u).is_empty());
        }

        #[test]
        fn text_form_round_trips(u in arb_word()) {
            prop_assert_eq!(u.to_string().parse::<ReducedWord>().unwrap(), u);
        }
    }

    #[test]
    fn ten_thousand_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let n = rng.random_range(1..10);
            let m = rng.random_range(1..10);
            let u = sample_uniform_sphere(n, &mut rng).unwrap();
            let v = sample_uniform_sphere(m, &mut rng).unwrap();
            let uv = u.reduce_concat(&v);
            assert_eq!(uv.len() % 2, (n + m) % 2);
            assert!(uv.len() <= n + m);
            assert!(u.invert().reduce_concat(&u).is_empty());
        }
    }
}

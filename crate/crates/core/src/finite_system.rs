//! Finite F₂-systems with exact rational weights.
//!
//! Everything here is closed over `BigRational`: spherical averages by direct
//! sphere enumeration, the four-fold lift, the non-backtracking Markov operator
//! `P`, and the identity `𝒜_n = π_* Pⁿ π*` checked with exact equality.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Dynamics, PointFunction};
use crate::error::{Error, Result};
use crate::fgroup::{enumerate_sphere, sphere_size, Letter, ReducedWord};
use crate::rational::{format_q, parse_q, q, to_f64, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSystem {
    perm_a: Vec<usize>,
    perm_b: Vec<usize>,
    inv_a: Vec<usize>,
    inv_b: Vec<usize>,
    weights: Vec<Q>,
}

/// A function on the states.
#[derive(Clone, Debug, PartialEq)]
pub struct Density(pub Vec<Q>);

/// A function on `states × letters`, stored at `4·x + code(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedDensity(pub Vec<Q>);

impl LiftedDensity {
    pub fn get(&self, x: usize, s: Letter) -> &Q {
        &self.0[4 * x + s.code() as usize]
    }
}

fn invert_perm(p: &[usize]) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &j) in p.iter().enumerate() {
        if j >= p.len() || inv[j] != usize::MAX {
            return Err(Error::InvalidSystem(format!("{p:?} is not a permutation")));
        }
        inv[j] = i;
    }
    Ok(inv)
}

impl FiniteSystem {
    /// Weights must be positive and constant along every `a`- and `b`-orbit,
    /// which is exactly measure preservation on atoms.
    pub fn new(perm_a: Vec<usize>, perm_b: Vec<usize>, weights: Vec<Q>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || perm_a.len() != n || perm_b.len() != n {
            return Err(Error::InvalidSystem(format!(
                "need matching non-empty sizes, got {}/{}/{}",
                perm_a.len(),
                perm_b.len(),
                n
            )));
        }
        let inv_a = invert_perm(&perm_a)?;
        let inv_b = invert_perm(&perm_b)?;
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidSystem(format!("weight {w} is not positive")));
        }
        for x in 0..n {
            if weights[perm_a[x]] != weights[x] || weights[perm_b[x]] != weights[x] {
                return Err(Error::InvalidSystem(format!(
                    "weight of state {x} is not constant along its orbits"
                )));
            }
        }
        Ok(Self {
            perm_a,
            perm_b,
            inv_a,
            inv_b,
            weights,
        })
    }

    /// `X = {0, 1}` with uniform weights and both generators swapping the points.
    pub fn two_point_swap() -> Self {
        Self::new(vec![1, 0], vec![1, 0], vec![q(1, 2), q(1, 2)]).expect("valid")
    }

    /// Random permutations; each connected component gets one random weight.
    pub fn random<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Self {
        let mut perm_a: Vec<usize> = (0..states).collect();
        let mut perm_b = perm_a.clone();
        perm_a.shuffle(rng);
        perm_b.shuffle(rng);

        let mut parent: Vec<usize> = (0..states).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..states {
            for y in [perm_a[x], perm_b[x]] {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
            }
        }
        let mut component_weight = vec![None; states];
        let weights = (0..states)
            .map(|x| {
                let r = find(&mut parent, x);
                component_weight[r]
                    .get_or_insert_with(|| q(rng.random_range(1..10), rng.random_range(1..10)))
                    .clone()
            })
            .collect();
        Self::new(perm_a, perm_b, weights).expect("weights are constant on components")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn total_measure(&self) -> Q {
        self.weights.iter().sum()
    }

    #[inline]
    pub fn step(&self, x: usize, s: Letter) -> usize {
        match s {
            Letter::A => self.perm_a[x],
            Letter::B => self.perm_b[x],
            Letter::A_INV => self.inv_a[x],
            _ => self.inv_b[x],
        }
    }

    /// `T_w x`.
    pub fn apply_group(&self, w: &ReducedWord, x: usize) -> usize {
        w.letters().iter().rev().fold(x, |y, &l| self.step(y, l))
    }

    pub fn integral(&self, f: &Density) -> Q {
        f.0.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Integral against the lifted measure `weight(x)/4` on each `(x, s)`.
    pub fn lifted_integral(&self, g: &LiftedDensity) -> Q {
        let quarter = q(1, 4);
        g.0.iter()
            .enumerate()
            .map(|(i, v)| v * &self.weights[i / 4] * &quarter)
            .sum()
    }

    fn check_len(&self, len: usize, per_state: usize) -> Result<()> {
        if len != self.len() * per_state {
            return Err(Error::Domain(format!(
                "density has {len} entries, system needs {}",
                self.len() * per_state
            )));
        }
        Ok(())
    }

    /// `(𝒜_n f)(x) = |S_n|⁻¹ Σ_{|g|=n} f(T_{g⁻¹} x)` by enumerating the sphere.
    pub fn avg_operator(&self, f: &Density, n: usize, cap: usize) -> Result<Density> {
        self.check_len(f.0.len(), 1)?;
        if n == 0 {
            return Err(Error::Domain("averaging radius must be >= 1".into()));
        }
        let mut acc = vec![Q::zero(); self.len()];
        for g in enumerate_sphere(n, cap)? {
            let g_inv = g.invert();
            for (x, slot) in acc.iter_mut().enumerate() {
                *slot += &f.0[self.apply_group(&g_inv, x)];
            }
        }
        let size = Q::from_integer(sphere_size(n).into());
        Ok(Density(acc.into_iter().map(|v| v / &size).collect()))
    }

    /// `π* f(x, s) = f(x)`.
    pub fn pullback(&self, f: &Density) -> LiftedDensity {
        LiftedDensity(f.0.iter().flat_map(|v| std::iter::repeat_n(v.clone(), 4)).collect())
    }

    /// `π_* g(x) = ¼ Σ_s g(x, s)`.
    pub fn pushforward(&self, g: &LiftedDensity) -> Result<Density> {
        self.check_len(g.0.len(), 4)?;
        let quarter = q(1, 4);
        Ok(Density(g.0.chunks(4).map(|c| c.iter().sum::<Q>() * &quarter).collect()))
    }

    /// `(P g)(x, s) = ⅓ Σ_{s' ≠ s⁻¹} g(T_s⁻¹ x, s')`.
    pub fn markov_p(&self, g: &LiftedDensity) -> Result<LiftedDensity> {
        self.check_len(g.0.len(), 4)?;
        let third = q(1, 3);
        let mut out = Vec::with_capacity(g.0.len());
        for x in 0..self.len() {
            for s in Letter::ALL {
                let y = self.step(x, s.inverse());
                let sum: Q = s.successors().iter().map(|&t| g.get(y, t)).sum();
                out.push(sum * &third);
            }
        }
        Ok(LiftedDensity(out))
    }

    /// `π_* Pⁿ π* f`, the Markov route to `𝒜_n f`.
    pub fn markov_avg(&self, f: &Density, n: usize) -> Result<Density> {
        self.check_len(f.0.len(), 1)?;
        let mut g = self.pullback(f);
        for _ in 0..n {
            g = self.markov_p(&g)?;
        }
        self.pushforward(&g)
    }

    /// Exact comparison of the enumeration and Markov routes.
    pub fn check_identity(&self, f: &Density, n: usize, cap: usize) -> Result<bool> {
        Ok(self.avg_operator(f, n, cap)? == self.markov_avg(f, n)?)
    }

    /// Pointwise `max_{1 ≤ k ≤ n_max} 𝒜_{2k} f`.
    pub fn maximal_function(&self, f: &Density, n_max: usize, cap: usize) -> Result<Density> {
        if 2 * n_max > cap {
            return Err(Error::CapExceeded { n: 2 * n_max, cap });
        }
        if n_max == 0 {
            return Err(Error::Domain("maximal function needs n_max >= 1".into()));
        }
        let mut best = self.avg_operator(f, 2, cap)?;
        for k in 2..=n_max {
            let a = self.avg_operator(f, 2 * k, cap)?;
            for (b, v) in best.0.iter_mut().zip(a.0) {
                if v > *b {
                    *b = v;
                }
            }
        }
        Ok(best)
    }

    pub fn to_document(&self) -> FiniteSystemDoc {
        FiniteSystemDoc {
            states: self.len(),
            perm_a: self.perm_a.clone(),
            perm_b: self.perm_b.clone(),
            weights: self.weights.iter().map(format_q).collect(),
        }
    }

    pub fn from_document(doc: &FiniteSystemDoc) -> Result<Self> {
        if doc.states != doc.weights.len() {
            return Err(Error::InvalidSystem(format!(
                "state count {} does not match {} weights",
                doc.states,
                doc.weights.len()
            )));
        }
        let weights = doc.weights.iter().map(|w| parse_q(w)).collect::<Result<_>>()?;
        Self::new(doc.perm_a.clone(), doc.perm_b.clone(), weights)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

/// Text form of a [`FiniteSystem`]: permutations as index arrays, weights as `"p/q"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FiniteSystemDoc {
    pub states: usize,
    pub perm_a: Vec<usize>,
    pub perm_b: Vec<usize>,
    pub weights: Vec<String>,
}

impl Dynamics for FiniteSystem {
    type Point = usize;

    fn shift(&self, p: &mut usize, s: Letter) -> Result<()> {
        *p = self.step(*p, s);
        Ok(())
    }
}

impl PointFunction<usize> for Density {
    fn exact(&self, p: &usize) -> Q {
        self.0[*p].clone()
    }

    fn bounds(&self) -> (f64, f64) {
        let vals = self.0.iter().map(to_f64);
        let lo = vals.clone().fold(f64::INFINITY, f64::min);
        let hi = vals.fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

impl Density {
    pub fn indicator(states: usize, x: usize) -> Self {
        Density((0..states).map(|y| if y == x { Q::one() } else { Q::zero() }).collect())
    }

    pub fn constant(states: usize, c: Q) -> Self {
        Density(vec![c; states])
    }

    /// Non-negative random rationals `p/q` with `p < 21`, `q < 13`.
    pub fn random<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Self {
        Density(
            (0..states)
                .map(|_| q(rng.random_range(0..21), rng.random_range(1..13)))
                .collect(),
        )
    }

    pub fn sup(&self) -> Q {
        self.0.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl LiftedDensity {
    pub fn random<R: Rng + ?Sized>(states: usize, rng: &mut R) -> Self {
        LiftedDensity(
            (0..4 * states)
                .map(|_| q(rng.random_range(0..21), rng.random_range(1..13)))
                .collect(),
        )
    }

    pub fn constant(states: usize, c: Q) -> Self {
        LiftedDensity(vec![c; 4 * states])
    }

    pub fn sup(&self) -> Q {
        self.0.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub system: usize,
    pub states: usize,
    /// `n` for which the two routes disagree.
    pub mismatches: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityCheck {
    pub n: usize,
    pub value_at_0: String,
    pub value_at_1: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteReport {
    pub seed: u64,
    pub n_max: usize,
    pub systems: Vec<IdentityCheck>,
    pub passed: usize,
    pub total: usize,
    pub parity: Vec<ParityCheck>,
    pub pass: bool,
}

/// `𝒜_n f = π_* Pⁿ π* f` for `n ∈ 1..=n_max` on random systems with at most
/// `max_states` states, and the parity pattern of `𝟙₀` on the two-point swap.
pub fn verify_finite(systems: usize, max_states: usize, n_max: usize, cap: usize, seed: u64) -> Result<FiniteReport> {
    if max_states == 0 {
        return Err(Error::Domain("systems need at least one state".into()));
    }
    let checks = (0..systems)
        .map(|i| {
            let mut rng = crate::prf::stream_rng(seed, crate::prf::purpose::SYSTEMS, i as u64);
            let states = rng.random_range(1..=max_states);
            let sys = FiniteSystem::random(states, &mut rng);
            let f = Density::random(states, &mut rng);
            let mut mismatches = Vec::new();
            for n in 1..=n_max {
                if !sys.check_identity(&f, n, cap)? {
                    mismatches.push(n);
                }
            }
            Ok(IdentityCheck {
                system: i,
                states,
                pass: mismatches.is_empty(),
                mismatches,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let swap = FiniteSystem::two_point_swap();
    let e0 = Density::indicator(2, 0);
    let parity = (1..=2 * n_max + 1)
        .map(|n| {
            let a = swap.avg_operator(&e0, n, cap)?;
            let expected = Density::indicator(2, n % 2);
            Ok(ParityCheck {
                n,
                value_at_0: format_q(&a.0[0]),
                value_at_1: format_q(&a.0[1]),
                pass: a == expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(FiniteReport {
        seed,
        n_max,
        passed,
        total: checks.len(),
        pass: passed == checks.len() && parity.iter().all(|p| p.pass),
        systems: checks,
        parity,
    })
}

//! Finite combinations of cylinder indicators on the lifted ball
//! `X̃_0 = X_0 × {a, b, a⁻¹, b⁻¹}` with exact rational values.

use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::point::{BallPoint, Stratum};
use crate::dynamics::PointFunction;
use crate::error::{Error, Result};
use crate::fgroup::{Letter, ReducedWord};
use crate::rational::{format_q, parse_q, pow3, q, qi, to_f64, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    depth: u32,
    slot: Letter,
    prefix: Vec<Letter>,
}

impl Key {
    fn children(&self) -> Vec<Key> {
        let next: Vec<Letter> = match self.prefix.last() {
            None => Letter::ALL.to_vec(),
            Some(l) => l.successors().to_vec(),
        };
        next.into_iter()
            .map(|c| {
                let mut prefix = self.prefix.clone();
                prefix.push(c);
                Key {
                    depth: self.depth,
                    slot: self.slot,
                    prefix,
                }
            })
            .collect()
    }

    fn is_ancestor_of(&self, other: &Key) -> bool {
        self.depth == other.depth
            && self.slot == other.slot
            && other.prefix.len() > self.prefix.len()
            && other.prefix.starts_with(&self.prefix)
    }
}

/// `{(x, s) : x ∈ Y_depth, x starts with prefix, s = slot}` carrying `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub depth: u32,
    pub prefix: ReducedWord,
    pub slot: Letter,
    pub value: Q,
}

impl Atom {
    /// `μ̃`-mass of the underlying set.
    pub fn set_mass(&self) -> Q {
        set_mass(self.depth, self.prefix.len())
    }
}

fn cylprob(len: usize) -> Q {
    if len == 0 {
        Q::one()
    } else {
        q(1, 4) * pow3(-(len as i64 - 1))
    }
}

fn set_mass(depth: u32, prefix_len: usize) -> Q {
    pow3(-(depth as i64)) * cylprob(prefix_len) * q(1, 4)
}

/// Text form: one record per atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderRecord {
    pub depth: u32,
    pub prefix: String,
    pub slot: String,
    pub value: String,
}

#[derive(Clone, Debug, Default)]
pub struct CylinderFunction {
    atoms: BTreeMap<Key, Q>,
}

impl CylinderFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a function from pairwise disjoint atoms.
    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut f = Self::new();
        for atom in atoms {
            if atom.depth == 0 {
                return Err(Error::Domain("atoms live at depth ≥ 1".into()));
            }
            if atom.value < Q::zero() {
                return Err(Error::Domain(format!("negative atom value {}", format_q(&atom.value))));
            }
            let key = Key {
                depth: atom.depth,
                slot: atom.slot,
                prefix: atom.prefix.letters().to_vec(),
            };
            if f.overlaps(&key) {
                return Err(Error::Domain(format!(
                    "atom ({}, {}, {}) overlaps another atom",
                    atom.depth, atom.prefix, atom.slot
                )));
            }
            f.atoms.insert(key, atom.value);
        }
        Ok(f)
    }

    fn overlaps(&self, key: &Key) -> bool {
        self.atoms.contains_key(key) || self.ancestor(key).is_some() || self.has_descendants(key)
    }

    fn ancestor(&self, key: &Key) -> Option<Key> {
        (0..key.prefix.len())
            .map(|len| Key {
                depth: key.depth,
                slot: key.slot,
                prefix: key.prefix[..len].to_vec(),
            })
            .find(|k| self.atoms.contains_key(k))
    }

    fn has_descendants(&self, key: &Key) -> bool {
        self.atoms
            .range((Bound::Excluded(key), Bound::Unbounded))
            .next()
            .is_some_and(|(k, _)| key.is_ancestor_of(k))
    }

    /// Adds `value` on the set of `key`, refining atoms so they stay disjoint.
    fn add(&mut self, key: Key, value: Q) {
        if value.is_zero() {
            return;
        }
        while let Some(anc) = self.ancestor(&key) {
            let v = self.atoms.remove(&anc).expect("present");
            for child in anc.children() {
                self.atoms.insert(child, v.clone());
            }
        }
        if self.has_descendants(&key) {
            for child in key.children() {
                self.add(child, value.clone());
            }
            return;
        }
        *self.atoms.entry(key).or_insert_with(Q::zero) += value;
    }

    pub fn atoms(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .map(|(k, v)| Atom {
                depth: k.depth,
                prefix: ReducedWord::new(k.prefix.clone()).expect("reduced"),
                slot: k.slot,
                value: v.clone(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn l1_norm(&self) -> Q {
        self.atoms
            .iter()
            .map(|(k, v)| set_mass(k.depth, k.prefix.len()) * v)
            .sum()
    }

    /// `μ̃`-mass of the set where the function is non-zero.
    pub fn support_mass(&self) -> Q {
        self.atoms
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| set_mass(k.depth, k.prefix.len()))
            .sum()
    }

    pub fn max_value(&self) -> Q {
        self.atoms.values().cloned().max().unwrap_or_else(Q::zero)
    }

    pub fn min_depth(&self) -> Option<u32> {
        self.atoms.keys().map(|k| k.depth).min()
    }

    pub fn max_depth(&self) -> Option<u32> {
        self.atoms.keys().map(|k| k.depth).max()
    }

    /// `(Pf)(x, s) = ⅓ Σ_{s' ≠ s⁻¹} f(T_s⁻¹ x, s')`, computed atom by atom.
    pub fn push_p_exact(&self) -> Result<Self> {
        if let Some(depth) = self.min_depth().filter(|&d| d <= 1) {
            return Err(Error::BoundaryContact { depth });
        }
        let mut out = Self::new();
        for (key, value) in &self.atoms {
            let v = value / qi(3);
            let pieces = if key.prefix.is_empty() {
                key.children()
            } else {
                vec![key.clone()]
            };
            for piece in pieces {
                let w0 = piece.prefix[0];
                for s in Letter::ALL.into_iter().filter(|&s| s != key.slot.inverse()) {
                    if s != w0.inverse() {
                        let mut prefix = Vec::with_capacity(piece.prefix.len() + 1);
                        prefix.push(s);
                        prefix.extend_from_slice(&piece.prefix);
                        out.add(
                            Key {
                                depth: piece.depth - 1,
                                slot: s,
                                prefix,
                            },
                            v.clone(),
                        );
                    } else if piece.prefix.len() >= 2 {
                        let prefix = piece.prefix[1..].to_vec();
                        out.add(
                            Key {
                                depth: piece.depth + 1,
                                slot: s,
                                prefix,
                            },
                            v.clone(),
                        );
                    } else {
                        for c in w0.successors() {
                            out.add(
                                Key {
                                    depth: piece.depth + 1,
                                    slot: s,
                                    prefix: vec![c],
                                },
                                v.clone(),
                            );
                        }
                    }
                }
            }
        }
        Ok(out.canonical())
    }

    /// The coarsest representation: zero atoms dropped and complete sibling
    /// families with equal values merged into their parent.
    pub fn canonical(&self) -> Self {
        let mut atoms: BTreeMap<Key, Q> = self
            .atoms
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        loop {
            let mut families: BTreeMap<Key, Vec<Q>> = BTreeMap::new();
            for (k, v) in atoms.iter().filter(|(k, _)| !k.prefix.is_empty()) {
                let parent = Key {
                    depth: k.depth,
                    slot: k.slot,
                    prefix: k.prefix[..k.prefix.len() - 1].to_vec(),
                };
                families.entry(parent).or_default().push(v.clone());
            }
            let mut merged = false;
            for (parent, values) in families {
                let complete = values.len() == if parent.prefix.is_empty() { 4 } else { 3 };
                if complete && values.iter().all(|v| *v == values[0]) {
                    for child in parent.children() {
                        atoms.remove(&child);
                    }
                    atoms.insert(parent, values[0].clone());
                    merged = true;
                }
            }
            if !merged {
                break;
            }
        }
        Self { atoms }
    }

    pub fn eval(&self, p: &BallPoint, s: Letter) -> Q {
        let Stratum::Interior(depth) = p.stratum() else {
            return Q::zero();
        };
        let max_len = self
            .atoms
            .keys()
            .filter(|k| k.depth == depth && k.slot == s)
            .map(|k| k.prefix.len())
            .max();
        let Some(max_len) = max_len else {
            return Q::zero();
        };
        let letters = p.word().letters(max_len);
        (0..=max_len)
            .find_map(|len| {
                self.atoms.get(&Key {
                    depth,
                    slot: s,
                    prefix: letters[..len].to_vec(),
                })
            })
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn to_records(&self) -> Vec<CylinderRecord> {
        self.atoms
            .iter()
            .map(|(k, v)| CylinderRecord {
                depth: k.depth,
                prefix: k.prefix.iter().map(|l| l.to_char()).collect(),
                slot: k.slot.to_char().to_string(),
                value: format_q(v),
            })
            .collect()
    }

    pub fn from_records(records: &[CylinderRecord]) -> Result<Self> {
        let atoms = records
            .iter()
            .map(|r| {
                let mut chars = r.slot.chars();
                let slot = match (chars.next().and_then(Letter::from_char), chars.next()) {
                    (Some(l), None) => l,
                    _ => return Err(Error::parse("slot letter", r.slot.clone())),
                };
                Ok(Atom {
                    depth: r.depth,
                    prefix: r.prefix.parse()?,
                    slot,
                    value: parse_q(&r.value)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_atoms(atoms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_records())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let records: Vec<CylinderRecord> = serde_json::from_str(s)?;
        Self::from_records(&records)
    }
}

impl PartialEq for CylinderFunction {
    /// Equality as functions.
    fn eq(&self, other: &Self) -> bool {
        self.canonical().atoms == other.canonical().atoms
    }
}

/// `π_* f(x) = ¼ Σ_s f(x, s)` as a function on the ball.
#[derive(Clone, Debug)]
pub struct ProjectedCylinder {
    f: CylinderFunction,
    upper: f64,
}

impl ProjectedCylinder {
    pub fn new(f: CylinderFunction) -> Self {
        let upper = to_f64(&f.max_value());
        Self { f, upper }
    }

    pub fn inner(&self) -> &CylinderFunction {
        &self.f
    }
}

impl PointFunction<BallPoint> for ProjectedCylinder {
    fn exact(&self, p: &BallPoint) -> Q {
        Letter::ALL.iter().map(|&s| self.f.eval(p, s)).sum::<Q>() / qi(4)
    }

    fn bounds(&self) -> (f64, f64) {
        (0.0, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::word::LazyWord;
    use crate::prf::stream_rng;
    use crate::rational::q;
    use rand::Rng;

    fn atom(depth: u32, prefix: &str, slot: Letter, value: Q) -> Atom {
        Atom {
            depth,
            prefix: prefix.parse().unwrap(),
            slot,
            value,
        }
    }

    fn spread(depth: u32, value: Q) -> CylinderFunction {
        CylinderFunction::from_atoms(Letter::ALL.map(|s| atom(depth, "", s, value.clone()))).unwrap()
    }

    #[test]
    fn masses() {
        assert_eq!(atom(2, "", Letter::A, qi(1)).set_mass(), q(1, 36));
        assert_eq!(atom(1, "ab", Letter::A, qi(1)).set_mass(), q(1, 144));
        assert_eq!(spread(3, qi(27)).l1_norm(), qi(1));
    }

    #[test]
    fn overlapping_atoms_are_rejected() {
        let r = CylinderFunction::from_atoms([atom(2, "a", Letter::A, qi(1)), atom(2, "ab", Letter::A, qi(1))]);
        assert!(r.is_err());
        let r = CylinderFunction::from_atoms([
            atom(2, "a", Letter::A, qi(1)),
            atom(2, "ab", Letter::B, qi(1)),
            atom(3, "ab", Letter::A, qi(1)),
        ]);
        assert!(r.is_ok());
    }

    #[test]
    fn refinement_keeps_function_values() {
        let mut f = CylinderFunction::from_atoms([atom(2, "a", Letter::A, qi(3))]).unwrap();
        f.add(
            Key {
                depth: 2,
                slot: Letter::A,
                prefix: vec![Letter::A, Letter::B],
            },
            qi(1),
        );
        assert_eq!(f.len(), 3);
        assert_eq!(f.l1_norm(), set_mass(2, 1) * qi(3) + set_mass(2, 2));
        let mut g = CylinderFunction::from_atoms([atom(2, "ab", Letter::A, qi(1))]).unwrap();
        g.add(
            Key {
                depth: 2,
                slot: Letter::A,
                prefix: vec![Letter::A],
            },
            qi(3),
        );
        assert_eq!(f, g);
    }

    #[test]
    fn canonical_merges_complete_families() {
        let f = CylinderFunction::from_atoms(["aa", "ab", "aB"].map(|p| atom(4, p, Letter::B, q(1, 2)))).unwrap();
        let c = f.canonical();
        assert_eq!(c.len(), 1);
        assert_eq!(c.atoms()[0].prefix.to_string(), "a");
        assert_eq!(f, c);
    }

    #[test]
    fn push_preserves_mass() {
        let f = CylinderFunction::from_atoms([
            atom(12, "abA", Letter::B, q(5, 7)),
            atom(12, "B", Letter::A, qi(2)),
            atom(13, "", Letter::A_INV, q(1, 3)),
        ])
        .unwrap();
        let mut g = f.clone();
        for _ in 0..10 {
            let next = g.push_p_exact().unwrap();
            assert_eq!(next.l1_norm(), f.l1_norm());
            g = next;
        }
    }

    #[test]
    fn push_at_depth_one_is_refused() {
        let f = spread(1, qi(1));
        assert!(matches!(f.push_p_exact(), Err(Error::BoundaryContact { depth: 1 })));
    }

    #[test]
    fn push_matches_pointwise_definition() {
        // (Pf)(x,s) = ⅓ Σ_{s' ≠ s⁻¹} f(T_s⁻¹ x, s')
        let f = CylinderFunction::from_atoms([
            atom(4, "ab", Letter::B, qi(9)),
            atom(5, "A", Letter::A, qi(3)),
            atom(3, "BA", Letter::B_INV, qi(1)),
        ])
        .unwrap();
        let pf = f.push_p_exact().unwrap();
        let mut rng = stream_rng(10, 0, 0);
        for _ in 0..4000 {
            let depth = rng.random_range(2..=6);
            let p = BallPoint::sample_in(Stratum::Interior(depth), &mut rng);
            for s in Letter::ALL {
                let mut y = p.clone();
                y.shift(s.inverse(), 64).unwrap();
                let direct: Q = s.successors().iter().map(|&t| f.eval(&y, t)).sum::<Q>() / qi(3);
                assert_eq!(pf.eval(&p, s), direct, "{p} {s}");
            }
        }
    }

    #[test]
    fn evaluation() {
        let f = CylinderFunction::from_atoms([atom(3, "ab", Letter::A, qi(108))]).unwrap();
        let w = LazyWord::with_prefix(&"abA".parse().unwrap(), 0);
        let inside = BallPoint::new(Stratum::Interior(3), w.clone()).unwrap();
        assert_eq!(f.eval(&inside, Letter::A), qi(108));
        assert_eq!(f.eval(&inside, Letter::B), qi(0));
        let deeper = BallPoint::new(Stratum::Interior(4), w).unwrap();
        assert_eq!(f.eval(&deeper, Letter::A), qi(0));
        let proj = ProjectedCylinder::new(f);
        assert_eq!(proj.exact(&inside), qi(27));
    }

    #[test]
    fn monte_carlo_integral() {
        let f = CylinderFunction::from_atoms([atom(1, "a", Letter::A, qi(8)), atom(2, "", Letter::B, qi(4))]).unwrap();
        let exact = to_f64(&f.l1_norm());
        let proj = ProjectedCylinder::new(f);
        let mut rng = stream_rng(11, 0, 0);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| proj.approx(&BallPoint::sample(&mut rng))).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(
            (mean - exact).abs() < 4.0 * (var / n as f64).sqrt(),
            "{mean} vs {exact}"
        );
    }

    #[test]
    fn record_round_trip() {
        let f = CylinderFunction::from_atoms([atom(3, "ab", Letter::A, q(4, 3)), atom(2, "", Letter::B_INV, qi(2))])
            .unwrap();
        let json = f.to_json().unwrap();
        assert!(json.contains("\"4/3\""));
        let g = CylinderFunction::from_json(&json).unwrap();
        assert_eq!(f, g);
        assert!(CylinderFunction::from_records(&[CylinderRecord {
            depth: 1,
            prefix: "aA".into(),
            slot: "a".into(),
            value: "1".into(),
        }])
        .is_err());
    }
}

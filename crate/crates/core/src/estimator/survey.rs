//! Population surveys over stratified samples of the ball: the fraction of
//! points whose maximal (or minimal) profile value clears a threshold.

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::avg::AvgEstimate;
use super::ci::{z_value, CONFIDENCE};
use super::profile::{ChainEvaluator, ComponentFilter, Profile, ProfileSource, TimeWindow, MIN_HITS};
use crate::ball::{BallPoint, Stratum};
use crate::error::{Error, Result};
use crate::glue::{GlueLevel, Tower, TowerPoint, TowerSystem};
use crate::prf::{purpose, stream_rng};
use crate::rational::{format_q, to_f64, Q};

/// A stratum of the sampling design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cell {
    Stratum(Stratum),
    /// Interior points deeper than the given depth.
    DeeperThan(u32),
}

impl Cell {
    pub fn label(&self) -> String {
        match self {
            Cell::Stratum(s) => s.to_string(),
            Cell::DeeperThan(d) => format!("Y{}+", d + 1),
        }
    }

    pub fn weight(&self) -> f64 {
        match *self {
            Cell::Stratum(s) => to_f64(&s.measure()),
            Cell::DeeperThan(d) => 0.5 * 3f64.powi(-(d as i32)),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BallPoint {
        match *self {
            Cell::Stratum(s) => BallPoint::sample_in(s, rng),
            Cell::DeeperThan(d) => {
                let mut n = d + 1;
                while rng.random::<f64>() < 1.0 / 3.0 {
                    n += 1;
                }
                BallPoint::sample_in(Stratum::Interior(n), rng)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Allocation {
    pub label: String,
    pub cell: Cell,
    pub weight: f64,
    pub points: usize,
}

/// Proportional allocation of `points` over `X_a`, `X_b`, `Y_1..Y_depth` and
/// the deeper tail, rounding by largest remainder.
pub fn allocate(points: usize, depth_strata: u32) -> Vec<Allocation> {
    let mut cells = vec![Cell::Stratum(Stratum::BoundaryA), Cell::Stratum(Stratum::BoundaryB)];
    cells.extend((1..=depth_strata).map(|n| Cell::Stratum(Stratum::Interior(n))));
    cells.push(Cell::DeeperThan(depth_strata));
    let quotas: Vec<f64> = cells.iter().map(|c| c.weight() * points as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (quotas[i] - quotas[i].floor(), quotas[j] - quotas[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    let missing = points - counts.iter().sum::<usize>();
    for &i in order.iter().take(missing) {
        counts[i] += 1;
    }
    cells
        .into_iter()
        .zip(counts)
        .map(|(cell, points)| Allocation {
            label: cell.label(),
            weight: cell.weight(),
            cell,
            points,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurveyParams {
    pub points: usize,
    pub walks: usize,
    pub depth_strata: u32,
    pub seed: u64,
    /// Restrict points to copy 1 or 2 of a level.
    pub copy: Option<(usize, u8)>,
}

#[derive(Clone, Debug)]
pub struct SampledPoint {
    pub id: usize,
    pub cell: usize,
    pub point: TowerPoint,
}

/// The stratified sample. Point `i` is a pure function of `(seed, i)`.
pub fn sample_points(system: &TowerSystem, params: &SurveyParams) -> (Vec<Allocation>, Vec<SampledPoint>) {
    let alloc = allocate(params.points, params.depth_strata);
    let mut out = Vec::with_capacity(params.points);
    for (h, a) in alloc.iter().enumerate() {
        for _ in 0..a.points {
            let id = out.len();
            let mut rng = stream_rng(params.seed, purpose::POINTS, id as u64);
            let base = a.cell.sample(&mut rng);
            let mut copies = rng.random::<u32>() & system.full_mask();
            if let Some((level, copy)) = params.copy {
                copies = (copies & !(1 << level)) | (u32::from(copy == 2) << level);
            }
            out.push(SampledPoint {
                id,
                cell: h,
                point: TowerPoint::new(base, copies),
            });
        }
    }
    (alloc, out)
}

/// Profiles every sampled point, in parallel and in point order.
pub fn profile_points<S: ProfileSource>(
    source: &S,
    points: &[SampledPoint],
    window: TimeWindow,
    walks: usize,
    seed: u64,
) -> Result<Vec<Profile>> {
    points
        .par_iter()
        .map(|p| {
            let mut rng = stream_rng(seed, purpose::WALKS, p.id as u64);
            source.profile(&p.point, window, walks, &mut rng)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Sup,
    Inf,
}

/// A point passes when its statistic over the window reaches `threshold`;
/// the survey passes when the pass fraction reaches `required_fraction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub statistic: Statistic,
    pub threshold: f64,
    pub required_fraction: f64,
}

impl Criterion {
    /// `sup ≥ 1 − ε` on a fraction `≥ 1 − ε`.
    pub fn maximal(eps: f64) -> Self {
        Self {
            statistic: Statistic::Sup,
            threshold: 1.0 - eps,
            required_fraction: 1.0 - eps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRecord {
    pub id: usize,
    pub stratum: String,
    pub copies: u32,
    pub times: Vec<i64>,
    pub estimates: Vec<f64>,
    pub half_widths: Vec<f64>,
    pub statistic: f64,
    pub pass: bool,
    /// The statistic rests on exact values or on bins with enough scoring walks.
    pub supported: bool,
    pub underpowered: usize,
    pub flip_frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumSummary {
    pub label: String,
    pub weight: f64,
    pub points: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyReport {
    pub window: TimeWindow,
    pub criterion: Criterion,
    pub points: usize,
    pub walks: usize,
    /// `Σ_h w_h p̂_h`.
    pub raw_fraction: f64,
    /// `z · sqrt(Σ_h w_h² p̃_h (1 − p̃_h) / n_h)` with `p̃_h = (k_h + 1)/(n_h + 2)`,
    /// so strata that all pass or all fail still carry uncertainty.
    pub allowance: f64,
    /// Weight of strata without sampled points, counted as failing.
    pub unsampled_weight: f64,
    pub pass_fraction: f64,
    pub pass: bool,
    pub underpowered_bins: usize,
    /// Passing points whose statistic rests on an under-powered bin.
    pub unsupported_passes: usize,
    pub strata: Vec<StratumSummary>,
    pub records: Vec<PointRecord>,
}

fn powered(e: &AvgEstimate) -> bool {
    e.walks == 0 || e.hits >= MIN_HITS
}

/// Scores already computed profiles on a sub-window.
pub fn evaluate(
    alloc: &[Allocation],
    points: &[SampledPoint],
    profiles: &[Profile],
    window: TimeWindow,
    criterion: Criterion,
    walks: usize,
) -> SurveyReport {
    let mut passed = vec![0usize; alloc.len()];
    let mut records = Vec::with_capacity(points.len());
    let mut underpowered_bins = 0;
    let mut unsupported_passes = 0;
    for (p, prof) in points.iter().zip(profiles) {
        let statistic = match criterion.statistic {
            Statistic::Sup => prof.sup_over(&window),
            Statistic::Inf => prof.inf_over(&window),
        };
        let pass = statistic >= criterion.threshold;
        passed[p.cell] += pass as usize;
        let inside: Vec<_> = prof
            .estimates
            .iter()
            .filter(|e| e.n >= window.lo && e.n <= window.hi)
            .collect();
        let underpowered = inside.iter().filter(|e| !powered(e)).count();
        underpowered_bins += underpowered;
        let supported = match criterion.statistic {
            Statistic::Sup => inside.iter().filter(|e| e.mean == statistic).any(|e| powered(e)),
            Statistic::Inf => underpowered == 0,
        };
        unsupported_passes += (pass && !supported) as usize;
        records.push(PointRecord {
            id: p.id,
            stratum: alloc[p.cell].label.clone(),
            copies: p.point.copies,
            times: inside.iter().map(|e| e.n).collect(),
            estimates: inside.iter().map(|e| e.mean).collect(),
            half_widths: inside.iter().map(|e| e.half_width).collect(),
            statistic,
            pass,
            supported,
            underpowered,
            flip_frequency: prof.flip_frequency(),
        });
    }
    let mut raw = 0.0;
    let mut var = 0.0;
    let mut unsampled = 0.0;
    for (a, &k) in alloc.iter().zip(&passed) {
        if a.points == 0 {
            unsampled += a.weight;
            continue;
        }
        let n = a.points as f64;
        raw += a.weight * k as f64 / n;
        let smoothed = (k as f64 + 1.0) / (n + 2.0);
        var += a.weight * a.weight * smoothed * (1.0 - smoothed) / n;
    }
    let allowance = z_value(CONFIDENCE) * var.sqrt();
    let pass_fraction = (raw - allowance).max(0.0);
    SurveyReport {
        window,
        criterion,
        points: points.len(),
        walks,
        raw_fraction: raw,
        allowance,
        unsampled_weight: unsampled,
        pass_fraction,
        pass: pass_fraction >= criterion.required_fraction,
        underpowered_bins,
        unsupported_passes,
        strata: alloc
            .iter()
            .zip(&passed)
            .map(|(a, &k)| StratumSummary {
                label: a.label.clone(),
                weight: a.weight,
                points: a.points,
                passed: k,
            })
            .collect(),
        records,
    }
}

pub fn population_survey<S: ProfileSource>(
    source: &S,
    system: &TowerSystem,
    window: TimeWindow,
    params: &SurveyParams,
    criterion: Criterion,
) -> Result<SurveyReport> {
    let (alloc, points) = sample_points(system, params);
    let profiles = profile_points(source, &points, window, params.walks, params.seed)?;
    Ok(evaluate(&alloc, &points, &profiles, window, criterion, params.walks))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowCandidate {
    pub n: u32,
    pub raw_fraction: f64,
    pub pass_fraction: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowChoice {
    pub eps: f64,
    pub n_max: u32,
    pub candidates: Vec<WindowCandidate>,
    /// Pass fractions never decrease as the window grows.
    pub monotone: bool,
    pub chosen: Option<u32>,
    pub best_fraction: f64,
    /// The survey at the chosen window, or at `n_max` if none passed.
    pub report: SurveyReport,
}

/// Smallest `N ≤ n_max` for which `sup_{|t| ≤ 2N}` passes the survey at level
/// `eps`. Profiles are computed once on the widest window.
pub fn choose_window<S: ProfileSource>(
    source: &S,
    system: &TowerSystem,
    params: &SurveyParams,
    eps: f64,
    n_max: u32,
) -> Result<WindowChoice> {
    let (alloc, points) = sample_points(system, params);
    let widest = TimeWindow::around(0, n_max)?;
    let profiles = profile_points(source, &points, widest, params.walks, params.seed)?;
    let criterion = Criterion::maximal(eps);
    let mut candidates = Vec::new();
    let mut reports = Vec::new();
    for n in 0..=n_max {
        let r = evaluate(
            &alloc,
            &points,
            &profiles,
            TimeWindow::around(0, n)?,
            criterion,
            params.walks,
        );
        candidates.push(WindowCandidate {
            n,
            raw_fraction: r.raw_fraction,
            pass_fraction: r.pass_fraction,
            pass: r.pass,
        });
        reports.push(r);
    }
    let monotone = candidates.windows(2).all(|w| w[1].raw_fraction >= w[0].raw_fraction);
    let chosen = candidates.iter().find(|c| c.pass).map(|c| c.n);
    let best_fraction = candidates.iter().map(|c| c.pass_fraction).fold(0.0, f64::max);
    let report = reports.swap_remove(chosen.unwrap_or(n_max) as usize);
    Ok(WindowChoice {
        eps,
        n_max,
        candidates,
        monotone,
        chosen,
        best_fraction,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCandidate {
    pub m: u64,
    pub window: TimeWindow,
    pub mean_inf: f64,
    pub raw_fraction: f64,
    pub pass_fraction: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    pub level: usize,
    pub alpha: String,
    pub floor: f64,
    pub n: u32,
    pub eps: f64,
    pub points: usize,
    pub walks: usize,
    pub candidates: Vec<MixingCandidate>,
    pub selected: Option<u64>,
    /// The candidate with the highest pass fraction.
    pub best: u64,
}

/// For copy-2 points of `level`, the infimum over `[2M − 2N, 2M + 2N]` of the
/// copy-1 component, against the floor `α/2 − ε/3`. The copy-1 component
/// does not depend on `M`, so one set of walks serves every candidate.
pub fn mixing_diagnostic(
    tower: &Tower,
    level: usize,
    ms: &[u64],
    n: u32,
    params: &SurveyParams,
    eps: f64,
    anchor: u32,
) -> Result<MixingReport> {
    if level >= tower.system.depth() {
        return Err(Error::Domain(format!("level {level} is not glued")));
    }
    let (&m_lo, &m_hi) = match (ms.iter().min(), ms.iter().max()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Domain("no candidate delays".into())),
    };
    let alpha = &tower.alphas()[level];
    let floor = to_f64(alpha) / 2.0 - eps / 3.0;
    let eval = ChainEvaluator::new(
        &tower.system,
        &tower.density,
        anchor,
        ComponentFilter::LevelCopy { level, copy: 1 },
    )?;
    let params = SurveyParams {
        copy: Some((level, 2)),
        ..*params
    };
    let (alloc, points) = sample_points(&tower.system, &params);
    let widest = TimeWindow::new(2 * m_lo as i64 - 2 * n as i64, 2 * m_hi as i64 + 2 * n as i64)?;
    let profiles = profile_points(&eval, &points, widest, params.walks, params.seed)?;
    let criterion = Criterion {
        statistic: Statistic::Inf,
        threshold: floor,
        required_fraction: 1.0 - eps,
    };
    let mut sorted = ms.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let candidates: Vec<MixingCandidate> = sorted
        .iter()
        .map(|&m| {
            let window = TimeWindow::around(2 * m as i64, n)?;
            let r = evaluate(&alloc, &points, &profiles, window, criterion, params.walks);
            let mean_inf = weighted_mean(&alloc, &r.records);
            Ok(MixingCandidate {
                m,
                window,
                mean_inf,
                raw_fraction: r.raw_fraction,
                pass_fraction: r.pass_fraction,
                pass: r.pass,
            })
        })
        .collect::<Result<_>>()?;
    let selected = candidates.iter().find(|c| c.pass).map(|c| c.m);
    let best = candidates
        .iter()
        .max_by(|a, b| a.pass_fraction.total_cmp(&b.pass_fraction).then(b.m.cmp(&a.m)))
        .expect("non-empty")
        .m;
    Ok(MixingReport {
        level,
        alpha: format_q(alpha),
        floor,
        n,
        eps,
        points: params.points,
        walks: params.walks,
        candidates,
        selected,
        best,
    })
}

fn weighted_mean(alloc: &[Allocation], records: &[PointRecord]) -> f64 {
    let mut total = 0.0;
    let mut weight = 0.0;
    for a in alloc.iter().filter(|a| a.points > 0) {
        let rs: Vec<_> = records.iter().filter(|r| r.stratum == a.label).collect();
        let mean = rs.iter().map(|r| r.statistic).sum::<f64>() / rs.len() as f64;
        total += a.weight * mean;
        weight += a.weight;
    }
    total / weight
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingReport {
    pub level: usize,
    pub kappa: String,
    pub window: TimeWindow,
    pub points: usize,
    pub walks: usize,
    pub mean_deviation: f64,
    pub max_deviation: f64,
    pub mean_flip_frequency: f64,
    /// Every point's deviation is at most its flip frequency times the
    /// largest per-walk score difference.
    pub within_envelope: bool,
    pub target: f64,
    pub pass: bool,
}

/// Mean `|sup_glued − sup_unglued|` over copy-1 points of the top level, with
/// the two systems driven by identical walks.
pub fn coupling_deviation(
    tower: &Tower,
    window: TimeWindow,
    params: &SurveyParams,
    anchor: u32,
    target: f64,
) -> Result<CouplingReport> {
    let depth = tower.system.depth();
    let level = depth
        .checked_sub(1)
        .ok_or_else(|| Error::Domain("coupling needs at least one glued level".into()))?;
    let mut levels: Vec<GlueLevel> = tower.system.levels().to_vec();
    let kappa = format_q(&levels[level].kappa);
    levels[level].kappa = Q::zero();
    let unglued = TowerSystem::new(levels, tower.system.lookahead())?;
    let glued_eval = ChainEvaluator::new(&tower.system, &tower.density, anchor, ComponentFilter::All)?;
    let plain_eval = ChainEvaluator::new(&unglued, &tower.density, anchor, ComponentFilter::All)?;
    let envelope_scale = glued_eval.bound() + plain_eval.bound();
    let params = SurveyParams {
        copy: Some((level, 1)),
        ..*params
    };
    let (alloc, points) = sample_points(&tower.system, &params);
    let pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|p| {
            let mut rng = stream_rng(params.seed, purpose::WALKS, p.id as u64);
            let mut twin = rng.clone();
            let glued = glued_eval.profile(&p.point, window, params.walks, &mut rng)?;
            let plain = plain_eval.profile(&p.point, window, params.walks, &mut twin)?;
            Ok(((glued.sup() - plain.sup()).abs(), glued.flip_frequency()))
        })
        .collect::<Result<_>>()?;
    let mut mean = 0.0;
    let mut flips = 0.0;
    let mut weight = 0.0;
    for (h, a) in alloc.iter().enumerate().filter(|(_, a)| a.points > 0) {
        let rows: Vec<_> = points
            .iter()
            .zip(&pairs)
            .filter(|(p, _)| p.cell == h)
            .map(|(_, r)| *r)
            .collect();
        mean += a.weight * rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64;
        flips += a.weight * rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
        weight += a.weight;
    }
    let (mean, flips) = (mean / weight, flips / weight);
    let max_deviation = pairs.iter().map(|r| r.0).fold(0.0, f64::max);
    let within_envelope = pairs.iter().all(|&(d, f)| d <= f * envelope_scale + 1e-9);
    Ok(CouplingReport {
        level,
        kappa,
        window,
        points: params.points,
        walks: params.walks,
        mean_deviation: mean,
        max_deviation,
        mean_flip_frequency: flips,
        within_envelope,
        target,
        pass: within_envelope && mean < target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::AncientChain;
    use crate::estimator::profile::ConstantProfile;
    use crate::glue::{tower_build, DelayedDensity};
    use crate::rational::q;

    fn params(points: usize, walks: usize) -> SurveyParams {
        SurveyParams {
            points,
            walks,
            depth_strata: 6,
            seed: 11,
            copy: None,
        }
    }

    #[test]
    fn allocation_is_proportional() {
        let a = allocate(200, 6);
        assert_eq!(a.iter().map(|a| a.points).sum::<usize>(), 200);
        assert_eq!(a[0].points, 50);
        assert_eq!(a[1].points, 50);
        assert_eq!(a[2].label, "Y1");
        assert!((a[2].points as i64 - 67).abs() <= 1);
        let total: f64 = a.iter().map(|a| a.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_respects_cells_and_copies() {
        let sys = TowerSystem::new(vec![GlueLevel::new(q(1, 64), 2).unwrap()], 64).unwrap();
        let p = SurveyParams {
            copy: Some((0, 2)),
            ..params(100, 1)
        };
        let (alloc, pts) = sample_points(&sys, &p);
        for s in &pts {
            assert_eq!(s.point.copy(0), 2);
            match alloc[s.cell].cell {
                Cell::Stratum(st) => assert_eq!(s.point.base.stratum(), st),
                Cell::DeeperThan(d) => assert!(s.point.base.depth().unwrap() > d),
            }
        }
    }

    #[test]
    fn constant_density_always_passes() {
        let sys = TowerSystem::base();
        let r = population_survey(
            &ConstantProfile(1.0),
            &sys,
            TimeWindow::around(0, 2).unwrap(),
            &params(50, 1),
            Criterion::maximal(0.2),
        )
        .unwrap();
        assert!(r.unsampled_weight > 0.0);
        assert!((r.raw_fraction + r.unsampled_weight - 1.0).abs() < 1e-12);
        assert!(r.allowance > 0.0 && r.pass_fraction < r.raw_fraction);
        assert!(r.pass);
        let c = choose_window(&ConstantProfile(1.0), &sys, &params(50, 1), 0.2, 4).unwrap();
        assert_eq!(c.chosen, Some(0));
    }

    #[test]
    fn eps_one_always_passes() {
        let sys = TowerSystem::base();
        let r = population_survey(
            &ConstantProfile(0.0),
            &sys,
            TimeWindow::around(0, 1).unwrap(),
            &params(20, 1),
            Criterion::maximal(1.0),
        )
        .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn window_choice_is_monotone_and_deterministic() {
        let sys = TowerSystem::base();
        let density = DelayedDensity::base(AncientChain::calibrated().unwrap());
        let eval = ChainEvaluator::new(&sys, &density, 1, ComponentFilter::All).unwrap();
        let a = choose_window(&eval, &sys, &params(60, 400), 0.2, 4).unwrap();
        assert!(a.monotone);
        let b = choose_window(&eval, &sys, &params(60, 400), 0.2, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coupling_vanishes_without_coupling() {
        let chain = AncientChain::calibrated().unwrap();
        let tower = tower_build(chain, vec![GlueLevel::new(q(0, 1), 3).unwrap()], 64).unwrap();
        let r = coupling_deviation(&tower, TimeWindow::around(0, 3).unwrap(), &params(30, 200), 1, 0.1).unwrap();
        assert_eq!(r.mean_deviation, 0.0);
        assert_eq!(r.mean_flip_frequency, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn smaller_coupling_deviates_less() {
        let chain = AncientChain::calibrated().unwrap();
        let w = TimeWindow::around(0, 4).unwrap();
        let dev = |kappa| {
            let tower = tower_build(chain, vec![GlueLevel::new(kappa, 3).unwrap()], 64).unwrap();
            coupling_deviation(&tower, w, &params(40, 300), 1, 0.1).unwrap()
        };
        let small = dev(q(1, 10_000));
        let large = dev(q(1, 10));
        assert!(small.within_envelope && large.within_envelope);
        assert!(
            small.mean_deviation < large.mean_deviation,
            "{} vs {}",
            small.mean_deviation,
            large.mean_deviation
        );
    }

    proptest::proptest! {
        #[test]
        fn allocation_is_exhaustive_and_proportional(points in 0usize..2000, depth in 1u32..12) {
            let a = allocate(points, depth);
            proptest::prop_assert_eq!(a.iter().map(|c| c.points).sum::<usize>(), points);
            let total: f64 = a.iter().map(|c| c.weight).sum();
            proptest::prop_assert!((total - 1.0).abs() < 1e-12);
            for c in &a {
                proptest::prop_assert!((c.points as f64 - c.weight * points as f64).abs() < 1.0);
            }
        }
    }
}

//! Plan generators for the four search strategies.
//!
//! * Cyclic doubling with one robot: stage `i` walks path `i mod w` out to
//!   `radius_f(w, i)` and back.
//! * The deterministic team strategy: robots `1..lambda-1` are pinned to
//!   paths `1..lambda-1` and only ever advance; robot `lambda` runs the
//!   one-robot strategy on the remaining `w' = w - lambda + 1` paths
//!   `{0, lambda, ..., w-1}` and, in every round, drags the pinned robots
//!   along while it crosses the window `[f(w', i-w'), f(w', i+1-w')]`.
//! * The randomized one-robot strategy: random path order, random phase
//!   `eps`, radii `r^(eps+j)` with `r = r_w`.
//! * The randomized team strategy: random assignment of pinned paths, with
//!   the roaming robot always walking `v` times as far as each pinned robot.
//!
//! With `lambda = w` every strategy degenerates to one robot per path
//! walking straight out, emitted as doubling parallel groups.

use serde::{Deserialize, Serialize};

use crate::analytic::{radius_f, solve_rw, speed_v, DEFAULT_RW_TOL};
use crate::error::{domain, Error, Result};
use crate::model::{ExplorationPlan, PlanMeta, Segment, StrategyKind};
use crate::rng::RandomSource;

fn check_instance(w: usize, lambda: usize, horizon: usize) -> Result<()> {
    if w < 2 {
        return domain(format!("need at least two paths, got w = {w}"));
    }
    if lambda < 1 || lambda > w {
        return domain(format!("lambda must lie in [1, {w}], got {lambda}"));
    }
    if horizon < 1 {
        return domain("horizon must be at least 1");
    }
    Ok(())
}

fn finite(value: f64, stage: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { stage })
    }
}

/// Path assignment for `lambda = w`: robot `k < lambda` on `paths[k]`, the
/// last robot on `paths[0]`.
fn straight_walk_segments(lambda: usize, paths: &[usize], horizon: usize) -> Result<Vec<Segment>> {
    let mut segments = Vec::with_capacity(horizon * lambda);
    let mut from = 0.0;
    for k in 0..horizon {
        let to = finite(if k == 0 { 1.0 } else { 2f64.powi(k as i32) }, k)?;
        for robot in 1..=lambda {
            let path = paths[robot % lambda];
            segments.push(Segment::grouped(robot, path, from, to, k as u64));
        }
        from = to;
    }
    Ok(segments)
}

/// Cyclic doubling with a single robot.
pub fn det_single_plan(w: usize, horizon: usize) -> Result<ExplorationPlan> {
    det_multi_plan(w, 1, horizon)
}

/// The deterministic team strategy; `horizon` counts rounds.
pub fn det_multi_plan(w: usize, lambda: usize, horizon: usize) -> Result<ExplorationPlan> {
    check_instance(w, lambda, horizon)?;
    if lambda == w {
        let paths: Vec<usize> = (0..w).collect();
        let segments = straight_walk_segments(lambda, &paths, horizon)?;
        return ExplorationPlan::new(w, lambda, horizon, segments, PlanMeta::new(StrategyKind::StraightWalk));
    }

    let roaming = w - lambda + 1;
    let cycle: Vec<usize> = std::iter::once(0).chain(lambda..w).collect();
    let offset = roaming as i64;
    let mut segments = Vec::new();
    for i in 0..horizon {
        let round = i as i64;
        let path = cycle[i % roaming];
        let window_start = finite(radius_f(roaming, round - offset)?, i)?;
        let window_end = finite(radius_f(roaming, round + 1 - offset)?, i)?;
        let turn = finite(radius_f(roaming, round)?, i)?;

        if lambda == 1 {
            segments.push(Segment::solo(1, path, 0.0, turn));
            segments.push(Segment::solo(1, path, turn, 0.0));
            continue;
        }
        if window_start > 0.0 {
            segments.push(Segment::solo(lambda, path, 0.0, window_start));
        }
        if window_end > window_start {
            for robot in 1..lambda {
                segments.push(Segment::grouped(robot, robot, window_start, window_end, i as u64));
            }
            segments.push(Segment::grouped(lambda, path, window_start, window_end, i as u64));
        }
        if turn > window_end {
            segments.push(Segment::solo(lambda, path, window_end, turn));
        }
        segments.push(Segment::solo(lambda, path, turn, 0.0));
    }
    let mut meta = PlanMeta::new(StrategyKind::Deterministic);
    meta.rate = Some(roaming as f64 / (roaming as f64 - 1.0));
    ExplorationPlan::new(w, lambda, horizon, segments, meta)
}

/// Smallest round count after which the deterministic strategy has searched
/// every path to at least `n`.
pub fn det_horizon_for(w: usize, lambda: usize, n: f64) -> usize {
    let n = n.max(1.0);
    if lambda >= w {
        return n.log2().ceil() as usize + 2;
    }
    let roaming = w - lambda + 1;
    let q = roaming as f64 / (roaming as f64 - 1.0);
    (n.ln() / q.ln()).ceil() as usize + roaming + 1
}

/// Knobs for the randomized strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomizedOptions {
    /// Longest distance the roaming robot covers inside one parallel group;
    /// longer legs are split. `None` keeps one group per leg.
    pub max_group_len: Option<f64>,
    /// Tolerance used when solving for the growth rate.
    pub rate_tol: f64,
}

impl Default for RandomizedOptions {
    fn default() -> Self {
        Self { max_group_len: None, rate_tol: DEFAULT_RW_TOL }
    }
}

/// The randomized team strategy with its growth rate and speed ratio
/// resolved once, so many plans can be drawn cheaply.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedStrategy {
    w: usize,
    lambda: usize,
    rate: Option<f64>,
    speed: f64,
    options: RandomizedOptions,
}

impl RandomizedStrategy {
    pub fn new(w: usize, lambda: usize, options: RandomizedOptions) -> Result<Self> {
        check_instance(w, lambda, 1)?;
        if let Some(len) = options.max_group_len {
            if !(len > 0.0) || !len.is_finite() {
                return domain(format!("max group length must be positive, got {len}"));
            }
        }
        let roaming = w - lambda + 1;
        let rate = if roaming >= 2 { Some(solve_rw(roaming, options.rate_tol)?) } else { None };
        Ok(Self { w, lambda, rate, speed: speed_v(w, lambda)?, options })
    }

    pub fn rate(&self) -> Option<f64> {
        self.rate
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Draws the path permutation, then the phase, from `source`.
    pub fn plan(&self, source: &RandomSource, horizon: usize) -> Result<ExplorationPlan> {
        let mut rng = source.generator();
        let permutation = rng.permutation(self.w);
        let phase = rng.unit();
        self.plan_with(permutation, phase, horizon)
    }

    /// Builds the plan for fixed random choices.
    ///
    /// Robot `k < lambda` walks `permutation[k]`; the roaming robot cycles
    /// through `permutation[0], permutation[lambda..]` in that order.
    pub fn plan_with(&self, permutation: Vec<usize>, phase: f64, horizon: usize) -> Result<ExplorationPlan> {
        let (w, lambda) = (self.w, self.lambda);
        check_instance(w, lambda, horizon)?;
        let mut sorted = permutation.clone();
        sorted.sort_unstable();
        if sorted != (0..w).collect::<Vec<_>>() {
            return domain(format!("{permutation:?} is not a permutation of 0..{w}"));
        }
        if !(0.0..1.0).contains(&phase) {
            return domain(format!("phase must lie in [0, 1), got {phase}"));
        }

        let mut meta = PlanMeta::new(StrategyKind::Randomized);
        meta.permutation = Some(permutation.clone());
        meta.phase = Some(phase);
        meta.rate = self.rate;
        meta.speed = Some(self.speed);

        let Some(rate) = self.rate else {
            let segments = straight_walk_segments(lambda, &permutation, horizon)?;
            return ExplorationPlan::new(w, lambda, horizon, segments, meta);
        };

        let order: Vec<usize> = std::iter::once(permutation[0]).chain(permutation[lambda..].iter().copied()).collect();
        let start = rate.powf(phase);
        let mut pinned = vec![0.0; lambda - 1];
        let mut group = 0u64;
        let mut segments = Vec::new();
        for stage in 0..horizon {
            let path = order[stage % order.len()];
            let radius = finite(start * rate.powi(stage as i32), stage)?;
            for (from, to) in [(0.0, radius), (radius, 0.0)] {
                if lambda == 1 {
                    segments.push(Segment::solo(lambda, path, from, to));
                    continue;
                }
                let pieces = match self.options.max_group_len {
                    Some(len) => (radius / len).ceil().max(1.0) as usize,
                    None => 1,
                };
                for piece in 0..pieces {
                    let at = |k: usize| {
                        if k == pieces {
                            to
                        } else {
                            from + (to - from) * k as f64 / pieces as f64
                        }
                    };
                    let (a, b) = (at(piece), at(piece + 1));
                    let advance = (b - a).abs() / self.speed;
                    for (k, pos) in pinned.iter_mut().enumerate() {
                        let next = *pos + advance;
                        segments.push(Segment::grouped(k + 1, permutation[k + 1], *pos, next, group));
                        *pos = next;
                    }
                    segments.push(Segment::grouped(lambda, path, a, b, group));
                    group += 1;
                }
            }
        }
        ExplorationPlan::new(w, lambda, horizon, segments, meta)
    }

    /// A stage count after which every path has been searched to at least
    /// `n`, whatever the random draws.
    pub fn horizon_for(&self, n: f64) -> usize {
        let n = n.max(1.0);
        let Some(rate) = self.rate else {
            return n.log2().ceil() as usize + 2;
        };
        let roaming = self.w - self.lambda + 1;
        let roaming_reach = (n.ln() / rate.ln()).ceil() as usize + roaming;
        // Pinned robots move 1/v per unit of roaming travel; after J stages
        // the roaming robot has walked at least 2 r^(J-1).
        let pinned_reach = ((self.speed * n).ln() / rate.ln()).ceil().max(0.0) as usize + 1;
        roaming_reach.max(pinned_reach) + 1
    }
}

/// The randomized one-robot strategy.
pub fn rand_single_plan(w: usize, source: &RandomSource, horizon: usize) -> Result<ExplorationPlan> {
    RandomizedStrategy::new(w, 1, RandomizedOptions::default())?.plan(source, horizon)
}

/// The randomized team strategy with default options.
pub fn rand_multi_plan(w: usize, lambda: usize, source: &RandomSource, horizon: usize) -> Result<ExplorationPlan> {
    RandomizedStrategy::new(w, lambda, RandomizedOptions::default())?.plan(source, horizon)
}

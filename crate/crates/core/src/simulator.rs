//! Running plans against goals: exact single runs, the deterministic
//! adversary, and seeded Monte Carlo for the randomized strategies.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{truncate_at_goal, CostLedger, ExplorationPlan, GoalPlacement};
use crate::rng::RandomSource;
use crate::strategies::{det_horizon_for, det_multi_plan, RandomizedOptions, RandomizedStrategy};

/// Horizon doubling stops here; geometric radii overflow long before.
pub const MAX_HORIZON: usize = 1 << 16;

/// Distance past a turn point at which the adversary hides the goal.
pub const ADVERSARY_OFFSET: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub goal: GoalPlacement,
    pub ledger: CostLedger,
    pub ratio: f64,
}

/// Executes `plan` until the goal is found.
pub fn run(plan: &ExplorationPlan, goal: GoalPlacement) -> Result<SimResult> {
    let (_, ledger) = truncate_at_goal(plan, goal)?;
    let ratio = ledger.total / goal.distance;
    Ok(SimResult { goal, ledger, ratio })
}

/// Something that can emit plans of any horizon.
pub trait PlanSource {
    fn plan(&self, horizon: usize) -> Result<ExplorationPlan>;

    /// A horizon expected to reach distance `n` on every path.
    fn horizon_for(&self, n: f64) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deterministic {
    pub w: usize,
    pub lambda: usize,
}

impl PlanSource for Deterministic {
    fn plan(&self, horizon: usize) -> Result<ExplorationPlan> {
        det_multi_plan(self.w, self.lambda, horizon)
    }

    fn horizon_for(&self, n: f64) -> usize {
        det_horizon_for(self.w, self.lambda, n)
    }
}

/// A randomized strategy bound to one random source.
#[derive(Debug, Clone, Copy)]
pub struct Seeded<'a> {
    pub strategy: &'a RandomizedStrategy,
    pub source: RandomSource,
}

impl PlanSource for Seeded<'_> {
    fn plan(&self, horizon: usize) -> Result<ExplorationPlan> {
        self.strategy.plan(&self.source, horizon)
    }

    fn horizon_for(&self, n: f64) -> usize {
        self.strategy.horizon_for(n)
    }
}

/// Runs with a horizon sized from the goal distance, doubling it up to
/// [`MAX_HORIZON`] while the goal stays out of reach.
pub fn run_auto(source: &impl PlanSource, goal: GoalPlacement) -> Result<SimResult> {
    let mut horizon = source.horizon_for(goal.distance).max(1);
    loop {
        match run(&source.plan(horizon)?, goal) {
            Err(Error::GoalUnreachable { .. }) if horizon < MAX_HORIZON => horizon = (horizon * 2).min(MAX_HORIZON),
            other => return other,
        }
    }
}

/// Every adversarial goal the deterministic strategy can be charged with up
/// to `n_max`: `offset` past each outward extent (turn points and pinned
/// frontiers) of the plan, with the exact run for each.
pub fn adversary_candidates(w: usize, lambda: usize, n_max: f64, offset: f64) -> Result<Vec<SimResult>> {
    if !(n_max >= 2.0) || !n_max.is_finite() {
        return domain(format!("n_max must be a finite value >= 2, got {n_max}"));
    }
    if !(offset > 0.0) {
        return domain(format!("offset must be positive, got {offset}"));
    }
    let source = Deterministic { w, lambda };
    let plan = source.plan(source.horizon_for(n_max))?;

    let mut goals: Vec<(usize, f64)> = plan
        .segments()
        .iter()
        .filter(|s| s.is_outward())
        .map(|s| (s.path, s.to_pos + offset))
        .filter(|&(_, d)| (1.0..=n_max).contains(&d))
        .collect();
    goals.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    goals.dedup();

    goals.into_iter().map(|(path, distance)| run(&plan, GoalPlacement::new(path, distance)?)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub sup_ratio: f64,
    pub goal: GoalPlacement,
    pub candidates: usize,
}

/// Largest ratio the adversary can force on the deterministic strategy
/// with goals no further than `n_max`.
pub fn worst_case_ratio_det(w: usize, lambda: usize, n_max: f64) -> Result<WorstCase> {
    worst_case_ratio_det_offset(w, lambda, n_max, ADVERSARY_OFFSET)
}

pub fn worst_case_ratio_det_offset(w: usize, lambda: usize, n_max: f64, offset: f64) -> Result<WorstCase> {
    let results = adversary_candidates(w, lambda, n_max, offset)?;
    let candidates = results.len();
    let worst = results
        .into_iter()
        .reduce(|best, r| if r.ratio > best.ratio { r } else { best })
        .ok_or_else(|| Error::Domain(format!("no adversarial goal fits below n_max = {n_max}")))?;
    Ok(WorstCase { sup_ratio: worst.ratio, goal: worst.goal, candidates })
}

/// Monte Carlo estimate with a 95% normal-approximation interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub std_dev: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Sum with pairwise splitting; the order of additions depends only on the
/// slice length, so results do not depend on how the values were computed.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

impl RatioEstimate {
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return domain("need at least one sample");
        }
        let n = samples.len() as f64;
        let point = pairwise_sum(samples) / n;
        let std_dev = if samples.len() > 1 {
            let squares: Vec<f64> = samples.iter().map(|x| (x - point) * (x - point)).collect();
            (pairwise_sum(&squares) / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let half = 1.959_963_984_540_054 * std_dev / n.sqrt();
        Ok(Self { point, ci_low: point - half, ci_high: point + half, std_dev, trials: samples.len(), seed })
    }
}

fn map_trials<F>(trials: usize, f: F) -> Vec<Result<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials as u64).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials as u64).map(f).collect()
    }
}

/// Mean competitive ratio of the randomized team strategy against a fixed
/// goal. Trial `i` draws from stream `i` of `seed`.
pub fn expected_ratio_mc(
    w: usize,
    lambda: usize,
    goal: GoalPlacement,
    trials: usize,
    seed: u64,
) -> Result<RatioEstimate> {
    if trials < 1 {
        return domain("need at least one trial");
    }
    goal.check_paths(w)?;
    let strategy = RandomizedStrategy::new(w, lambda, RandomizedOptions::default())?;
    let master = RandomSource::new(seed);
    let samples = map_trials(trials, |i| {
        let source = Seeded { strategy: &strategy, source: master.split(i) };
        Ok(run_auto(&source, goal)?.ratio)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    RatioEstimate::from_samples(&samples, seed)
}

/// Strategy family whose empirical competitive ratio is fitted over a grid
/// of goal distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FitStrategy {
    /// Worst case over adversarial goals up to each grid value.
    Deterministic { w: usize, lambda: usize },
    /// Monte Carlo mean against a goal on path 0 at each grid value.
    Randomized { w: usize, lambda: usize, trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub n: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub points: Vec<FitPoint>,
    pub sup: f64,
}

/// Empirical competitive ratio: the supremum over the grid.
pub fn competitive_fit(strategy: FitStrategy, grid: &[f64]) -> Result<FitReport> {
    if grid.is_empty() {
        return domain("goal grid is empty");
    }
    let points = grid
        .iter()
        .map(|&n| {
            let ratio = match strategy {
                FitStrategy::Deterministic { w, lambda } => worst_case_ratio_det(w, lambda, n)?.sup_ratio,
                FitStrategy::Randomized { w, lambda, trials, seed } => {
                    expected_ratio_mc(w, lambda, GoalPlacement::new(0, n)?, trials, seed)?.point
                }
            };
            Ok(FitPoint { n, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(FitReport { points, sup })
}

/// `base^lo, base^(lo+1), ..., base^hi`.
pub fn geometric_grid(base: f64, lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| base.powi(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{det_ratio, rand_multi_bound};
    use crate::strategies::det_single_plan;

    #[test]
    fn doubling_goal_past_turn() {
        let r = run(&det_single_plan(2, 6).unwrap(), GoalPlacement::new(1, 3.0).unwrap()).unwrap();
        assert_eq!(r.ledger.total, 17.0);
        assert!((r.ratio - 17.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn team_goal_on_pinned_path() {
        let r = run(&det_multi_plan(3, 2, 4).unwrap(), GoalPlacement::new(1, 2.0).unwrap()).unwrap();
        assert_eq!(r.ledger.total, 10.0);
        assert_eq!(r.ratio, 5.0);
    }

    #[test]
    fn straight_walk_ratio_is_team_size() {
        for w in 2..6 {
            for (p, n) in [(0, 1.0), (w - 1, 3.7), (1, 1000.0)] {
                let r = run_auto(&Deterministic { w, lambda: w }, GoalPlacement::new(p, n).unwrap()).unwrap();
                assert!((r.ledger.total - w as f64 * n).abs() < 1e-12 * n);
                assert!((r.ratio - w as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn run_auto_extends_short_horizons() {
        struct Stingy;
        impl PlanSource for Stingy {
            fn plan(&self, horizon: usize) -> Result<ExplorationPlan> {
                det_single_plan(2, horizon)
            }
            fn horizon_for(&self, _: f64) -> usize {
                1
            }
        }
        let r = run_auto(&Stingy, GoalPlacement::new(1, 100.0).unwrap()).unwrap();
        assert!(r.ratio > 1.0);
    }

    #[test]
    fn doubling_adversary_closed_form() {
        // Goal at 2^i + 1 costs 9 * 2^i - 1.
        let wc = worst_case_ratio_det(2, 1, 1024.0).unwrap();
        let expected = (9.0 * 512.0 - 1.0) / 513.0;
        assert!((wc.sup_ratio - expected).abs() < 1e-12, "{}", wc.sup_ratio);
        assert_eq!(wc.goal.distance, 513.0);
    }

    #[test]
    fn adversary_approaches_team_optimum() {
        let n_max = crate::analytic::radius_f(2, 12).unwrap() + 1.0;
        let wc = worst_case_ratio_det(3, 2, n_max).unwrap();
        assert!((wc.sup_ratio - 10.0).abs() < 0.1);
        assert!(wc.sup_ratio < 10.0);
    }

    #[test]
    fn adversary_against_full_team_is_exact() {
        for w in 2..5 {
            let wc = worst_case_ratio_det(w, w, 500.0).unwrap();
            assert_eq!(wc.sup_ratio, w as f64);
        }
    }

    #[test]
    fn adversary_never_beats_upper_bound() {
        for (w, lambda) in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3), (6, 2)] {
            let bound = det_ratio(w, lambda).unwrap();
            for offset in [1.0, 1e-6] {
                for r in adversary_candidates(w, lambda, 1e4, offset).unwrap() {
                    assert!(r.ratio <= bound + 1e-9, "({w},{lambda}) {:?} {}", r.goal, r.ratio);
                }
            }
        }
    }

    #[test]
    fn adversary_monotone_in_range() {
        let mut prev = 0.0;
        for k in 2..14 {
            let wc = worst_case_ratio_det(4, 2, 2f64.powi(k)).unwrap();
            assert!(wc.sup_ratio >= prev);
            prev = wc.sup_ratio;
        }
    }

    #[test]
    fn adversary_rejects_small_range() {
        assert!(worst_case_ratio_det(2, 1, 1.5).is_err());
        assert!(worst_case_ratio_det_offset(2, 1, 100.0, 0.0).is_err());
    }

    #[test]
    fn tiny_offset_has_same_limit() {
        let unit = worst_case_ratio_det(3, 1, 1e4).unwrap().sup_ratio;
        let tiny = worst_case_ratio_det_offset(3, 1, 1e4, 1e-6).unwrap().sup_ratio;
        assert!((unit - 14.5).abs() / 14.5 < 0.01);
        assert!((tiny - 14.5).abs() / 14.5 < 0.01);
        assert!(tiny >= unit);
    }

    #[test]
    fn full_team_mc_has_no_variance() {
        let est = expected_ratio_mc(2, 2, GoalPlacement::new(0, 123.0).unwrap(), 50, 1).unwrap();
        assert_eq!(est.point, 2.0);
        assert_eq!(est.std_dev, 0.0);
        assert_eq!((est.ci_low, est.ci_high), (2.0, 2.0));
    }

    #[test]
    fn mc_is_seed_stable() {
        let goal = GoalPlacement::new(1, 1e3).unwrap();
        let a = expected_ratio_mc(3, 2, goal, 500, 99).unwrap();
        let b = expected_ratio_mc(3, 2, goal, 500, 99).unwrap();
        assert_eq!(a.point.to_bits(), b.point.to_bits());
        assert_eq!(a, b);
        assert!(a.ci_low <= a.point && a.point <= a.ci_high);
    }

    #[test]
    fn mc_interval_shrinks_with_trials() {
        let goal = GoalPlacement::new(0, 1e4).unwrap();
        let small = expected_ratio_mc(2, 1, goal, 1_000, 5).unwrap();
        let large = expected_ratio_mc(2, 1, goal, 16_000, 5).unwrap();
        let ratio = (small.ci_high - small.ci_low) / (large.ci_high - large.ci_low);
        // sqrt(16) = 4, allowing for sampling noise in the spread estimate.
        assert!((3.0..5.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn mc_near_analytic_bound() {
        let goal = GoalPlacement::new(2, 1e4).unwrap();
        let est = expected_ratio_mc(3, 2, goal, 20_000, 17).unwrap();
        let bound = rand_multi_bound(3, 2).unwrap();
        assert!(est.point <= bound + 0.15, "{} vs {bound}", est.point);
    }

    #[test]
    fn single_trial_collapses_interval() {
        let est = RatioEstimate::from_samples(&[3.5], 0).unwrap();
        assert_eq!((est.ci_low, est.point, est.ci_high), (3.5, 3.5, 3.5));
        assert!(RatioEstimate::from_samples(&[], 0).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_for_small_integers() {
        let xs: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }

    #[test]
    fn fit_examples() {
        let fit = competitive_fit(FitStrategy::Deterministic { w: 2, lambda: 1 }, &geometric_grid(2.0, 1, 12)).unwrap();
        assert!(fit.sup < 9.0 && fit.sup > 8.99);
        let fit = competitive_fit(FitStrategy::Deterministic { w: 3, lambda: 3 }, &[2.0, 50.0, 900.0]).unwrap();
        assert!(fit.points.iter().all(|p| p.ratio == 3.0));
        let fit = competitive_fit(FitStrategy::Deterministic { w: 3, lambda: 1 }, &geometric_grid(10.0, 1, 4)).unwrap();
        assert!((fit.sup - 14.5).abs() / 14.5 < 0.01);
        let fit =
            competitive_fit(FitStrategy::Randomized { w: 2, lambda: 2, trials: 10, seed: 3 }, &[5.0, 10.0]).unwrap();
        assert_eq!(fit.sup, 2.0);
        assert!(competitive_fit(FitStrategy::Deterministic { w: 2, lambda: 1 }, &[]).is_err());
    }
}

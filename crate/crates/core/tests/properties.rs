use proptest::prelude::*;

use raysearch::analytic::amgm_chain;
use raysearch::model::{searched_extent, total_cost, truncate_at_goal};
use raysearch::schedule::export_schedule;
use raysearch::sequences::{cyclic_convert, WSequence, WitnessFinder};
use raysearch::strategies::{det_multi_plan, rand_multi_plan};
use raysearch::{Error, ExplorationPlan, GoalPlacement, RandomSource, Segment, Trace};

/// One robot move: which robot, a path to take if it is at the origin, and a
/// target position expressed in quarter units.
type Move = (usize, usize, u32);

/// Replays moves into a valid trace, starting from the given robot states.
fn build(w: usize, lambda: usize, state: &mut [(usize, f64)], moves: &[Move]) -> Vec<Segment> {
    let mut segments = Vec::new();
    for &(robot, path, quarters) in moves {
        let robot = robot % lambda;
        let (cur_path, pos) = state[robot];
        let path = if pos == 0.0 { path % w } else { cur_path };
        let to = quarters as f64 / 4.0;
        segments.push(Segment::solo(robot + 1, path, pos, to));
        state[robot] = (path, to);
    }
    segments
}

fn moves() -> impl Strategy<Value = Vec<Move>> {
    prop::collection::vec((0usize..4, 0usize..5, prop_oneof![Just(0u32), 0u32..40]), 0..30)
}

proptest! {
    #[test]
    fn cost_is_additive(w in 2usize..5, lambda in 1usize..4, a in moves(), b in moves()) {
        let lambda = lambda.min(w);
        let mut state = vec![(0, 0.0); lambda];
        let mut segs = build(w, lambda, &mut state, &a);
        // Bring everyone home so the second trace can start from the origin.
        for (robot, (path, pos)) in state.iter().enumerate() {
            if *pos > 0.0 {
                segs.push(Segment::solo(robot + 1, *path, *pos, 0.0));
            }
        }
        let first = Trace::new(w, lambda, segs).unwrap();
        let mut state = vec![(0, 0.0); lambda];
        let second = Trace::new(w, lambda, build(w, lambda, &mut state, &b)).unwrap();
        let joined = first.concat(&second).unwrap();
        let sum = total_cost(&first) + total_cost(&second);
        prop_assert!((total_cost(&joined) - sum).abs() <= 1e-9 * sum.max(1.0));
    }

    #[test]
    fn extent_grows_with_prefix(w in 2usize..5, lambda in 1usize..4, a in moves(), cut in 0usize..30) {
        let lambda = lambda.min(w);
        let mut state = vec![(0, 0.0); lambda];
        let segs = build(w, lambda, &mut state, &a);
        let cut = cut.min(segs.len());
        let full = Trace::new(w, lambda, segs.clone()).unwrap();
        let prefix = Trace::new(w, lambda, segs[..cut].to_vec()).unwrap();
        for path in 0..w {
            prop_assert!(searched_extent(&prefix, path).unwrap() <= searched_extent(&full, path).unwrap());
        }
    }

    #[test]
    fn truncation_stops_on_goal(w in 2usize..6, lambda in 1usize..6, path in 0usize..6, d in 1.0f64..500.0) {
        let lambda = lambda.min(w);
        let path = path % w;
        let plan = det_multi_plan(w, lambda, 60).unwrap();
        let (trace, ledger) = truncate_at_goal(&plan, GoalPlacement::new(path, d).unwrap()).unwrap();
        prop_assert!(ledger.total <= total_cost(&plan.to_trace()));
        prop_assert_eq!(searched_extent(&trace, path).unwrap(), d);
        prop_assert_eq!(ledger.discovery.unwrap().position, d);
        prop_assert!(ledger.total >= d);
    }

    #[test]
    fn randomized_plans_are_valid(w in 2usize..7, lambda in 1usize..7, seed in any::<u64>(), d in 1.0f64..1e4) {
        let lambda = lambda.min(w);
        let plan = rand_multi_plan(w, lambda, &RandomSource::new(seed), 40).unwrap();
        // Revalidate through the public constructor.
        let again = ExplorationPlan::new(w, lambda, 40, plan.segments().to_vec(), plan.meta().clone());
        prop_assert!(again.is_ok());
        let phase = plan.meta().phase.unwrap();
        prop_assert!((0.0..1.0).contains(&phase));
        match truncate_at_goal(&plan, GoalPlacement::new(0, d).unwrap()) {
            Ok((_, ledger)) => prop_assert!(ledger.total >= d),
            Err(Error::GoalUnreachable { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn schedules_conserve_work(w in 2usize..6, lambda in 1usize..6, seed in any::<u64>(), randomized in any::<bool>()) {
        let lambda = lambda.min(w);
        let plan = if randomized {
            rand_multi_plan(w, lambda, &RandomSource::new(seed), 25).unwrap()
        } else {
            det_multi_plan(w, lambda, 25).unwrap()
        };
        let schedule = export_schedule(&plan).unwrap();
        let forward: f64 = plan.segments().iter().filter(|s| s.is_outward()).map(|s| s.length()).sum();
        prop_assert!((schedule.computation - forward).abs() <= 1e-9 * forward.max(1.0));
        prop_assert!(schedule.computation <= schedule.robot_distance * (1.0 + 1e-12));
        prop_assert!(schedule.events.iter().all(|e| e.computation() > 0.0 && e.slot >= 1 && e.slot <= lambda));
    }

    #[test]
    fn amgm_holds(eps in 1e-3f64..2.0, xs in prop::collection::vec(1e-3f64..1e3, 2..12)) {
        let (lhs, rhs) = amgm_chain(eps, &xs).unwrap();
        prop_assert!(lhs >= rhs * (1.0 - 1e-12), "{lhs} < {rhs}");
    }

    #[test]
    fn sorting_dominates_prefix_sums(w in 2usize..5, h in prop::collection::vec(1e-2f64..1e3, 1..60)) {
        let a: Vec<usize> = (0..h.len()).map(|i| i % w).collect();
        let seq = WSequence::new(w, h.clone(), a).unwrap();
        let sorted = cyclic_convert(&seq).values;
        let mut original = h.clone();
        original.sort_by(f64::total_cmp);
        prop_assert_eq!(&sorted, &original);
        let (mut x, mut y) = (0.0, 0.0);
        for (s, t) in sorted.iter().zip(&h) {
            x += s;
            y += t;
            prop_assert!(x <= y * (1.0 + 1e-12));
        }
    }

    #[test]
    fn witnesses_exist(
        w in 2usize..5,
        h in prop::collection::vec(1e-2f64..1e4, 40..120),
        labels in prop::collection::vec(0usize..4, 120),
    ) {
        // Labels drawn from 0..w, then every label forced to appear near the end
        // so the prefix looks like a w-sequence.
        let n = h.len();
        let mut a: Vec<usize> = labels[..n].iter().map(|l| l % w).collect();
        for k in 0..w {
            a[n - 1 - k] = k;
            a[n - 1 - w - k] = k;
        }
        let seq = WSequence::new(w, h, a).unwrap();
        let finder = WitnessFinder::new(&seq);
        for j in 1..=n + 1 - w {
            match finder.find(j) {
                Ok(wit) => prop_assert!(wit.holds(), "j = {j}: {wit:?}"),
                Err(Error::InsufficientHorizon(_)) => {}
                Err(e) => prop_assert!(false, "j = {j}: {e}"),
            }
        }
    }

    #[test]
    fn plans_round_trip_through_json(w in 2usize..5, lambda in 1usize..5, seed in any::<u64>()) {
        let lambda = lambda.min(w);
        let plan = rand_multi_plan(w, lambda, &RandomSource::new(seed), 12).unwrap();
        let json = serde_json::to_string(&plan).unwrap();
        let back: ExplorationPlan = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, plan);
    }
}

//! Paths, robots, goals and motion traces.
//!
//! `w` paths meet at an origin; `lambda` robots (numbered from 1) start there.
//! A robot moves along one path at a time and may switch paths only while
//! standing at the origin. Cost is the total distance walked by all robots.
//!
//! Segments run one after another in list order, except that a maximal run of
//! consecutive segments carrying the same `parallel_group` tag executes
//! simultaneously: every member starts and finishes the group together, each
//! moving at its own constant speed. Members with equal lengths therefore move
//! at equal speed, and at any instant inside the group every member has
//! covered the same fraction of its segment.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// The adversary's hidden goal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoalPlacement {
    pub path: usize,
    pub distance: f64,
}

impl GoalPlacement {
    /// Goals closer than 1 are rejected: the competitive ratio is an
    /// asymptotic statement in the goal distance.
    pub fn new(path: usize, distance: f64) -> Result<Self> {
        if !distance.is_finite() || distance < 1.0 {
            return domain(format!("goal distance must be finite and >= 1, got {distance}"));
        }
        Ok(Self { path, distance })
    }

    pub(crate) fn check_paths(&self, w: usize) -> Result<()> {
        if self.path >= w {
            return domain(format!("goal path {} out of range for w = {w}", self.path));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub robot: usize,
    pub path: usize,
    pub from_pos: f64,
    pub to_pos: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallel_group: Option<u64>,
}

impl Segment {
    pub fn solo(robot: usize, path: usize, from_pos: f64, to_pos: f64) -> Self {
        Self { robot, path, from_pos, to_pos, parallel_group: None }
    }

    pub fn grouped(robot: usize, path: usize, from_pos: f64, to_pos: f64, group: u64) -> Self {
        Self { robot, path, from_pos, to_pos, parallel_group: Some(group) }
    }

    pub fn length(&self) -> f64 {
        (self.to_pos - self.from_pos).abs()
    }

    pub fn is_outward(&self) -> bool {
        self.to_pos > self.from_pos
    }
}

/// Splits a segment list into execution steps: a solo segment, or a maximal
/// run of consecutive segments sharing a group tag.
pub fn steps(segments: &[Segment]) -> impl Iterator<Item = Range<usize>> + '_ {
    let mut start = 0;
    std::iter::from_fn(move || {
        if start >= segments.len() {
            return None;
        }
        let mut end = start + 1;
        if let Some(tag) = segments[start].parallel_group {
            while end < segments.len() && segments[end].parallel_group == Some(tag) {
                end += 1;
            }
        }
        let range = start..end;
        start = end;
        Some(range)
    })
}

fn check_dims(w: usize, lambda: usize) -> Result<()> {
    if w < 2 {
        return domain(format!("need at least two paths, got w = {w}"));
    }
    if lambda < 1 || lambda > w {
        return domain(format!("lambda must lie in [1, {w}], got {lambda}"));
    }
    Ok(())
}

pub(crate) fn validate_segments(w: usize, lambda: usize, segments: &[Segment]) -> Result<()> {
    check_dims(w, lambda)?;
    let invalid = |index: usize, reason: String| Err(Error::InvalidTrace { index, reason });
    // (position, current path) per robot; robots start at the origin on no path.
    let mut state: Vec<(f64, Option<usize>)> = vec![(0.0, None); lambda];
    for step in steps(segments) {
        let mut seen = vec![false; lambda];
        for index in step {
            let seg = &segments[index];
            if seg.robot < 1 || seg.robot > lambda {
                return invalid(index, format!("robot {} not in [1, {lambda}]", seg.robot));
            }
            if seg.path >= w {
                return invalid(index, format!("path {} not below w = {w}", seg.path));
            }
            for pos in [seg.from_pos, seg.to_pos] {
                if !pos.is_finite() || pos < 0.0 {
                    return invalid(index, format!("position {pos} is not a finite non-negative real"));
                }
            }
            let slot = seg.robot - 1;
            if seen[slot] {
                return invalid(index, format!("robot {} appears twice in one parallel group", seg.robot));
            }
            seen[slot] = true;
            let (pos, path) = state[slot];
            if seg.from_pos != pos {
                return invalid(index, format!("robot {} starts at {} but stands at {pos}", seg.robot, seg.from_pos));
            }
            if path != Some(seg.path) && pos != 0.0 {
                return invalid(
                    index,
                    format!("robot {} switches to path {} away from the origin", seg.robot, seg.path),
                );
            }
            state[slot] = (seg.to_pos, Some(seg.path));
        }
    }
    Ok(())
}

/// An executed, validated sequence of motion segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrace")]
pub struct Trace {
    w: usize,
    lambda: usize,
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawTrace {
    w: usize,
    lambda: usize,
    segments: Vec<Segment>,
}

impl TryFrom<RawTrace> for Trace {
    type Error = Error;

    fn try_from(raw: RawTrace) -> Result<Self> {
        Trace::new(raw.w, raw.lambda, raw.segments)
    }
}

impl Trace {
    pub fn new(w: usize, lambda: usize, segments: Vec<Segment>) -> Result<Self> {
        validate_segments(w, lambda, &segments)?;
        Ok(Self { w, lambda, segments })
    }

    pub fn empty(w: usize, lambda: usize) -> Result<Self> {
        Self::new(w, lambda, Vec::new())
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Appends `other`, which must continue from where this trace leaves
    /// every robot.
    pub fn concat(&self, other: &Trace) -> Result<Trace> {
        if self.w != other.w || self.lambda != other.lambda {
            return domain("cannot concatenate traces with different (w, lambda)");
        }
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Trace::new(self.w, self.lambda, segments)
    }
}

/// Distance bookkeeping for an executed trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    pub per_robot_distance: Vec<f64>,
    pub total: f64,
    pub discovery: Option<Discovery>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discovery {
    pub segment_index: usize,
    pub position: f64,
}

impl CostLedger {
    pub fn from_trace(trace: &Trace) -> Self {
        let mut per_robot_distance = vec![0.0; trace.lambda];
        for seg in &trace.segments {
            per_robot_distance[seg.robot - 1] += seg.length();
        }
        let total = per_robot_distance.iter().sum();
        Self { per_robot_distance, total, discovery: None }
    }
}

/// Total distance walked over the whole trace.
pub fn total_cost(trace: &Trace) -> f64 {
    trace.segments.iter().map(Segment::length).sum()
}

/// Furthest position any robot reached on `path`; 0 if it was never visited.
pub fn searched_extent(trace: &Trace, path: usize) -> Result<f64> {
    if path >= trace.w {
        return domain(format!("path {path} out of range for w = {}", trace.w));
    }
    Ok(trace.segments.iter().filter(|s| s.path == path).map(|s| s.from_pos.max(s.to_pos)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Deterministic,
    Randomized,
    StraightWalk,
}

/// Strategy name and the parameters that produced a plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanMeta {
    pub strategy: StrategyKind,
    /// Path order drawn by a randomized strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    /// Random phase in [0, 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// Growth rate of the turn radii.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    /// Distance ratio between the roaming robot and each pinned robot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
}

impl PlanMeta {
    pub fn new(strategy: StrategyKind) -> Self {
        Self { strategy, permutation: None, phase: None, rate: None, speed: None }
    }
}

/// A finite prefix of a strategy's motion, generated up to `horizon`
/// stages (or rounds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPlan")]
pub struct ExplorationPlan {
    w: usize,
    lambda: usize,
    horizon: usize,
    segments: Vec<Segment>,
    meta: PlanMeta,
}

#[derive(Deserialize)]
struct RawPlan {
    w: usize,
    lambda: usize,
    horizon: usize,
    segments: Vec<Segment>,
    meta: PlanMeta,
}

impl TryFrom<RawPlan> for ExplorationPlan {
    type Error = Error;

    fn try_from(raw: RawPlan) -> Result<Self> {
        ExplorationPlan::new(raw.w, raw.lambda, raw.horizon, raw.segments, raw.meta)
    }
}

impl ExplorationPlan {
    pub fn new(w: usize, lambda: usize, horizon: usize, segments: Vec<Segment>, meta: PlanMeta) -> Result<Self> {
        validate_segments(w, lambda, &segments)?;
        Ok(Self { w, lambda, horizon, segments, meta })
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn meta(&self) -> &PlanMeta {
        &self.meta
    }

    /// The full plan as an executed trace.
    pub fn to_trace(&self) -> Trace {
        Trace { w: self.w, lambda: self.lambda, segments: self.segments.clone() }
    }
}

/// Runs `plan` until some robot first stands on the goal.
///
/// Returns the executed prefix, with the discovering step cut at the
/// instant of discovery, and its cost ledger.
pub fn truncate_at_goal(plan: &ExplorationPlan, goal: GoalPlacement) -> Result<(Trace, CostLedger)> {
    goal.check_paths(plan.w)?;
    let segments = &plan.segments;
    let target = goal.distance;
    for step in steps(segments) {
        // Earliest fraction of the step at which a member reaches the goal.
        let mut hit: Option<(usize, f64)> = None;
        for index in step.clone() {
            let seg = &segments[index];
            if seg.path == goal.path && seg.from_pos < target && target <= seg.to_pos {
                let fraction = (target - seg.from_pos) / (seg.to_pos - seg.from_pos);
                if hit.is_none_or(|(_, best)| fraction < best) {
                    hit = Some((index, fraction));
                }
            }
        }
        let Some((finder, fraction)) = hit else { continue };

        let finder_seg = segments[finder];
        let finder_advance = target - finder_seg.from_pos;
        let mut kept = segments[..step.start].to_vec();
        for index in step {
            let mut seg = segments[index];
            if index == finder {
                seg.to_pos = target;
            } else if seg.length() == finder_seg.length() {
                seg.to_pos = seg.from_pos + finder_advance.copysign(seg.to_pos - seg.from_pos);
            } else {
                seg.to_pos = seg.from_pos + fraction * (seg.to_pos - seg.from_pos);
            }
            kept.push(seg);
        }
        // Every original index up to the end of the step survives truncation.
        let segment_index = finder;
        let trace = Trace { w: plan.w, lambda: plan.lambda, segments: kept };
        let mut ledger = CostLedger::from_trace(&trace);
        ledger.discovery = Some(Discovery { segment_index, position: target });
        return Ok((trace, ledger));
    }
    Err(Error::GoalUnreachable { horizon: plan.horizon })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd21_truncated() -> Trace {
        Trace::new(
            2,
            1,
            vec![
                Segment::solo(1, 0, 0.0, 1.0),
                Segment::solo(1, 0, 1.0, 0.0),
                Segment::solo(1, 1, 0.0, 2.0),
                Segment::solo(1, 1, 2.0, 0.0),
                Segment::solo(1, 0, 0.0, 4.0),
                Segment::solo(1, 0, 4.0, 0.0),
                Segment::solo(1, 1, 0.0, 3.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_trace_costs_nothing() {
        let t = Trace::empty(2, 1).unwrap();
        assert_eq!(total_cost(&t), 0.0);
        assert_eq!(searched_extent(&t, 0).unwrap(), 0.0);
    }

    #[test]
    fn out_and_back_doubles() {
        let t = Trace::new(2, 1, vec![Segment::solo(1, 0, 0.0, 1.0), Segment::solo(1, 0, 1.0, 0.0)]).unwrap();
        assert_eq!(total_cost(&t), 2.0);
    }

    #[test]
    fn hand_traced_doubling_prefix() {
        let t = dd21_truncated();
        assert_eq!(total_cost(&t), 17.0);
        assert_eq!(searched_extent(&t, 0).unwrap(), 4.0);
        assert_eq!(searched_extent(&t, 1).unwrap(), 3.0);
        assert!(matches!(searched_extent(&t, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_discontinuity() {
        let err = Trace::new(2, 1, vec![Segment::solo(1, 0, 0.0, 1.0), Segment::solo(1, 0, 0.5, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidTrace { index: 1, .. }));
    }

    #[test]
    fn rejects_path_switch_away_from_origin() {
        let err = Trace::new(2, 1, vec![Segment::solo(1, 0, 0.0, 1.0), Segment::solo(1, 1, 1.0, 2.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidTrace { index: 1, .. }));
    }

    #[test]
    fn rejects_robot_twice_in_group() {
        let err = Trace::new(3, 2, vec![Segment::grouped(1, 1, 0.0, 1.0, 0), Segment::grouped(1, 1, 1.0, 2.0, 0)])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidTrace { index: 1, .. }));
    }

    #[test]
    fn rejects_bad_dimensions_and_positions() {
        assert!(Trace::empty(1, 1).is_err());
        assert!(Trace::empty(3, 4).is_err());
        assert!(Trace::new(2, 1, vec![Segment::solo(2, 0, 0.0, 1.0)]).is_err());
        assert!(Trace::new(2, 1, vec![Segment::solo(1, 0, 0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn goal_needs_unit_distance() {
        assert!(GoalPlacement::new(0, 0.5).is_err());
        assert!(GoalPlacement::new(0, f64::NAN).is_err());
        assert!(GoalPlacement::new(0, 1.0).is_ok());
    }

    #[test]
    fn walking_forever_finds_goal_at_distance() {
        let segs = (0..10).map(|k| Segment::solo(1, 0, k as f64, (k + 1) as f64)).collect();
        let plan = ExplorationPlan::new(2, 1, 10, segs, PlanMeta::new(StrategyKind::StraightWalk)).unwrap();
        let (trace, ledger) = truncate_at_goal(&plan, GoalPlacement::new(0, 5.0).unwrap()).unwrap();
        assert_eq!(ledger.total, 5.0);
        assert_eq!(trace.segments().len(), 5);
        assert_eq!(ledger.discovery, Some(Discovery { segment_index: 4, position: 5.0 }));
    }

    #[test]
    fn unreachable_goal_reports_horizon() {
        let plan = ExplorationPlan::new(
            2,
            1,
            1,
            vec![Segment::solo(1, 0, 0.0, 2.0)],
            PlanMeta::new(StrategyKind::StraightWalk),
        )
        .unwrap();
        let err = truncate_at_goal(&plan, GoalPlacement::new(0, 3.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::GoalUnreachable { horizon: 1 });
        let err = truncate_at_goal(&plan, GoalPlacement::new(1, 1.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::GoalUnreachable { horizon: 1 });
    }

    #[test]
    fn group_members_stop_together() {
        // Robot 2 moves three times as far as robot 1 within the group.
        let plan = ExplorationPlan::new(
            3,
            2,
            1,
            vec![Segment::grouped(1, 1, 0.0, 2.0, 7), Segment::grouped(2, 0, 0.0, 6.0, 7)],
            PlanMeta::new(StrategyKind::Randomized),
        )
        .unwrap();
        let (trace, ledger) = truncate_at_goal(&plan, GoalPlacement::new(1, 1.5).unwrap()).unwrap();
        assert_eq!(ledger.per_robot_distance, vec![1.5, 4.5]);
        assert_eq!(trace.segments()[0].to_pos, 1.5);
        let (_, ledger) = truncate_at_goal(&plan, GoalPlacement::new(0, 3.0).unwrap()).unwrap();
        assert_eq!(ledger.per_robot_distance, vec![1.0, 3.0]);
        assert_eq!(ledger.discovery.unwrap().segment_index, 1);
    }

    #[test]
    fn inward_motion_never_discovers() {
        let plan = ExplorationPlan::new(
            2,
            1,
            1,
            vec![Segment::solo(1, 0, 0.0, 1.0), Segment::solo(1, 0, 1.0, 0.0)],
            PlanMeta::new(StrategyKind::Deterministic),
        )
        .unwrap();
        assert!(truncate_at_goal(&plan, GoalPlacement::new(0, 1.0).unwrap()).is_ok());
        assert!(truncate_at_goal(&plan, GoalPlacement::new(0, 1.5).unwrap()).is_err());
    }

    #[test]
    fn trace_json_shape() {
        let t = Trace::new(2, 1, vec![Segment::solo(1, 0, 0.0, 1.0)]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"w":2,"lambda":1,"segments":[{"robot":1,"path":0,"from_pos":0.0,"to_pos":1.0}]}"#);
        let back: Trace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"w":2,"lambda":1,"segments":[{"robot":1,"path":0,"from_pos":1.0,"to_pos":2.0}]}"#;
        assert!(serde_json::from_str::<Trace>(bad).is_err());
    }
}

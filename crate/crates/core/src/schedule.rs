//! Reading a search plan as a hybrid algorithm.
//!
//! Paths become basic algorithms and robots become memory slots. Outward
//! motion from `p` to `q` is `q - p` steps of computation on that algorithm.
//! Work beyond the furthest point any slot has reached on the algorithm is new
//! (`run_amount`); work below it repeats earlier computation (`replayed`).
//! Returning to the origin has no computational counterpart and emits nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{total_cost, ExplorationPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchMode {
    /// The slot continues from where the algorithm's computation stands.
    Resume,
    /// The slot repeats computation already done before reaching new ground.
    FreshReplay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchEvent {
    pub slot: usize,
    pub algorithm: usize,
    pub mode: SwitchMode,
    pub replayed: f64,
    pub run_amount: f64,
}

impl SwitchEvent {
    pub fn computation(&self) -> f64 {
        self.replayed + self.run_amount
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchSchedule {
    pub algorithms: usize,
    pub slots: usize,
    pub events: Vec<SwitchEvent>,
    /// Sum of `replayed + run_amount` over all events.
    pub computation: f64,
    /// Total robot distance of the plan, returns included.
    pub robot_distance: f64,
}

impl SwitchSchedule {
    pub fn events_for(&self, slot: usize) -> impl Iterator<Item = &SwitchEvent> {
        self.events.iter().filter(move |e| e.slot == slot)
    }
}

#[derive(Clone, Copy)]
struct SlotState {
    algorithm: Option<usize>,
    /// Event this slot is currently extending, cleared once it moves inward.
    open_event: Option<usize>,
}

/// Maps every outward segment to computation on one slot. Consecutive
/// outward motion of a slot on the same algorithm merges into one event.
pub fn export_schedule(plan: &ExplorationPlan) -> Result<SwitchSchedule> {
    let (w, lambda) = (plan.w(), plan.lambda());
    let mut slots = vec![SlotState { algorithm: None, open_event: None }; lambda];
    let mut frontier = vec![0.0f64; w];
    let mut events: Vec<SwitchEvent> = Vec::new();

    for (index, seg) in plan.segments().iter().enumerate() {
        let state = &mut slots[seg.robot - 1];
        if seg.to_pos < seg.from_pos {
            state.open_event = None;
            state.algorithm = Some(seg.path);
            continue;
        }
        if seg.to_pos == seg.from_pos {
            continue;
        }
        if seg.from_pos > 0.0 && state.algorithm != Some(seg.path) {
            return Err(Error::InvalidTrace {
                index,
                reason: format!("slot {} continues algorithm {} it does not hold", seg.robot, seg.path),
            });
        }
        let reached = &mut frontier[seg.path];
        let run_amount = (seg.to_pos - seg.from_pos.max(*reached)).max(0.0);
        let replayed = seg.length() - run_amount;
        *reached = reached.max(seg.to_pos);
        let mode = if replayed > 0.0 { SwitchMode::FreshReplay } else { SwitchMode::Resume };

        let merge = match state.open_event {
            Some(k) if mode == SwitchMode::Resume && events[k].algorithm == seg.path => Some(k),
            _ => None,
        };
        match merge {
            Some(k) => events[k].run_amount += run_amount,
            None => {
                state.open_event = Some(events.len());
                events.push(SwitchEvent { slot: seg.robot, algorithm: seg.path, mode, replayed, run_amount });
            }
        }
        state.algorithm = Some(seg.path);
    }

    let computation = events.iter().map(SwitchEvent::computation).sum();
    Ok(SwitchSchedule {
        algorithms: w,
        slots: lambda,
        events,
        computation,
        robot_distance: total_cost(&plan.to_trace()),
    })
}

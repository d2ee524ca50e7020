//! Browser bindings: three JSON-returning operations for the demo page in
//! `www/`. Each has a plain Rust twin so it can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use raysearch::analytic::{det_ratio, phi, rand_multi_bound, solve_rw, AnalyticReport, DEFAULT_RW_TOL};
use raysearch::model::{truncate_at_goal, CostLedger};
use raysearch::simulator::{PlanSource, Seeded};
use raysearch::strategies::{det_horizon_for, det_multi_plan, RandomizedOptions, RandomizedStrategy};
use raysearch::{GoalPlacement, RandomSource, Segment};

type Json = Result<String, String>;

fn to_json(value: &impl Serialize) -> Json {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct RatioPoint {
    lambda: usize,
    det_ratio: f64,
    rand_bound: f64,
}

#[derive(Serialize)]
struct Ratios {
    report: AnalyticReport,
    by_lambda: Vec<RatioPoint>,
}

/// Closed-form ratios for `(w, lambda)` plus both curves over all team sizes.
pub fn ratios(w: usize, lambda: usize) -> Json {
    let report = AnalyticReport::compute(w, lambda).map_err(|e| e.to_string())?;
    let by_lambda = (1..=w)
        .map(|l| Ok(RatioPoint { lambda: l, det_ratio: det_ratio(w, l)?, rand_bound: rand_multi_bound(w, l)? }))
        .collect::<raysearch::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    to_json(&Ratios { report, by_lambda })
}

#[derive(Serialize)]
struct TraceView {
    segments: Vec<Segment>,
    ledger: CostLedger,
    ratio: f64,
}

/// The motion of every robot until the goal is found. `seed` selects the
/// randomized strategy; without it the deterministic one runs.
pub fn trace(w: usize, lambda: usize, seed: Option<u64>, path: usize, distance: f64) -> Json {
    let run = || -> raysearch::Result<TraceView> {
        let goal = GoalPlacement::new(path, distance)?;
        let plan = match seed {
            None => det_multi_plan(w, lambda, det_horizon_for(w, lambda, distance))?,
            Some(seed) => {
                let strategy = RandomizedStrategy::new(w, lambda, RandomizedOptions::default())?;
                let source = Seeded { strategy: &strategy, source: RandomSource::new(seed) };
                source.plan(source.horizon_for(distance))?
            }
        };
        let (trace, ledger) = truncate_at_goal(&plan, goal)?;
        Ok(TraceView { segments: trace.segments().to_vec(), ratio: ledger.total / distance, ledger })
    };
    to_json(&run().map_err(|e| e.to_string())?)
}

#[derive(Serialize)]
struct PhiCurve {
    rates: Vec<f64>,
    values: Vec<f64>,
    r_w: f64,
    c_w: f64,
}

/// Samples of the randomized cost factor over rates in `(1, r_max]`, with
/// its minimizer marked.
pub fn phi_curve(w: usize, r_max: f64, samples: usize) -> Json {
    if r_max.is_nan() || r_max <= 1.0 || samples < 2 {
        return Err(format!("need r_max > 1 and at least 2 samples, got {r_max} and {samples}"));
    }
    let r_w = solve_rw(w, DEFAULT_RW_TOL).map_err(|e| e.to_string())?;
    let rates: Vec<f64> = (1..=samples).map(|k| 1.0 + (r_max - 1.0) * k as f64 / samples as f64).collect();
    let values = rates.iter().map(|&r| phi(w, r)).collect();
    to_json(&PhiCurve { rates, values, r_w, c_w: phi(w, r_w) })
}

#[wasm_bindgen(js_name = ratios)]
pub fn ratios_js(w: usize, lambda: usize) -> Result<String, JsError> {
    ratios(w, lambda).map_err(|e| JsError::new(&e))
}

/// `seed < 0` selects the deterministic strategy.
#[wasm_bindgen(js_name = trace)]
pub fn trace_js(w: usize, lambda: usize, seed: f64, path: usize, distance: f64) -> Result<String, JsError> {
    let seed = (seed >= 0.0).then_some(seed as u64);
    trace(w, lambda, seed, path, distance).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = phiCurve)]
pub fn phi_curve_js(w: usize, r_max: f64, samples: usize) -> Result<String, JsError> {
    phi_curve(w, r_max, samples).map_err(|e| JsError::new(&e))
}

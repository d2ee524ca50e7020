use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use raysearch::analytic::{c_w, g_functional, AnalyticReport, GeometricSequenceSpec};
use raysearch::schedule::export_schedule;
use raysearch::sequences::{
    cyclic_convert, limit_gap, ratio_h, ratio_s, CyclicSequence, RatioTable, WSequence, Witness, WitnessFinder,
};
use raysearch::simulator::{expected_ratio_mc, run, run_auto, worst_case_ratio_det_offset, Deterministic, Seeded};
use raysearch::strategies::{det_multi_plan, RandomizedOptions, RandomizedStrategy};
use raysearch::{Error, ExplorationPlan, GoalPlacement, RandomSource};

use crate::args::*;
use crate::report::{num, opt, Body, Report, Table};

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { kind: "usage", message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let kind = match err {
            Error::Domain(_) => "domain",
            Error::InvalidTrace { .. } => "invalid-trace",
            Error::GoalUnreachable { .. } => "goal-unreachable",
            Error::Overflow { .. } => "overflow",
            Error::InsufficientHorizon(_) => "insufficient-horizon",
            Error::WitnessNotFound { .. } => "witness-not-found",
        };
        Self { kind, message: err.to_string() }
    }
}

type Outcome = Result<Report, CliError>;

fn need_seed(seed: Option<u64>, strategy: StrategyArg) -> Result<Option<u64>, CliError> {
    match (strategy, seed) {
        (StrategyArg::Rand, None) => Err(CliError::usage("--seed is required for the randomized strategy")),
        _ => Ok(seed),
    }
}

fn build_plan(args: &PlanArgs) -> Result<ExplorationPlan, CliError> {
    let Instance { w, lambda } = args.instance;
    Ok(match need_seed(args.seed, args.strategy)? {
        Some(seed) if args.strategy == StrategyArg::Rand => {
            RandomizedStrategy::new(w, lambda, RandomizedOptions::default())?
                .plan(&RandomSource::new(seed), args.horizon)?
        }
        _ => det_multi_plan(w, lambda, args.horizon)?,
    })
}

pub fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Ratio(args) => ratio(args),
        Command::Plan(args) => plan(args),
        Command::Simulate(args) => simulate(args),
        Command::Adversary(args) => adversary(args),
        Command::Mc(args) => mc(args),
        Command::Seq(args) => seq(args),
        Command::Gfun(args) => gfun(args),
        Command::Schedule(args) => schedule(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn ratio(args: &Instance) -> Outcome {
    let report = AnalyticReport::compute(args.w, args.lambda)?;
    let mut table =
        Table::new(vec!["w", "lambda", "det_ratio", "r_w_prime", "rand_single", "rand_multi_bound", "speed_v", "c_w"]);
    table.push(vec![
        report.w.to_string(),
        report.lambda.to_string(),
        num(report.det_ratio),
        opt(report.r_w_prime),
        num(report.rand_single),
        num(report.rand_multi_bound),
        num(report.speed_v),
        num(report.c_w),
    ]);
    Ok(Report::object("ratio", &report, table))
}

fn plan(args: &PlanArgs) -> Outcome {
    let plan = build_plan(args)?;
    let mut table = Table::new(vec!["robot", "path", "from_pos", "to_pos", "parallel_group"]);
    for s in plan.segments() {
        table.push(vec![
            s.robot.to_string(),
            s.path.to_string(),
            num(s.from_pos),
            num(s.to_pos),
            opt(s.parallel_group),
        ]);
    }
    Ok(Report::object("plan", &plan, table))
}

fn simulate(args: &SimulateArgs) -> Outcome {
    let Instance { w, lambda } = args.instance;
    let goal = GoalPlacement::new(args.path, args.distance)?;
    let seed = need_seed(args.seed, args.strategy)?;
    let result = match (args.strategy, args.horizon) {
        (_, Some(horizon)) => {
            run(&build_plan(&PlanArgs { instance: args.instance, strategy: args.strategy, horizon, seed })?, goal)?
        }
        (StrategyArg::Det, None) => run_auto(&Deterministic { w, lambda }, goal)?,
        (StrategyArg::Rand, None) => {
            let strategy = RandomizedStrategy::new(w, lambda, RandomizedOptions::default())?;
            let source = RandomSource::new(seed.expect("checked above"));
            run_auto(&Seeded { strategy: &strategy, source }, goal)?
        }
    };
    let mut table = Table::new(vec!["w", "lambda", "goal_path", "goal_distance", "cost", "ratio"]);
    table.push(vec![
        w.to_string(),
        lambda.to_string(),
        args.path.to_string(),
        num(args.distance),
        num(result.ledger.total),
        num(result.ratio),
    ]);
    Ok(Report::object("simulate", &result, table))
}

fn adversary(args: &AdversaryArgs) -> Outcome {
    let Instance { w, lambda } = args.instance;
    let worst = worst_case_ratio_det_offset(w, lambda, args.n_max, args.offset)?;
    let mut table = Table::new(vec!["w", "lambda", "n_max", "sup_ratio", "goal_path", "goal_distance", "candidates"]);
    table.push(vec![
        w.to_string(),
        lambda.to_string(),
        num(args.n_max),
        num(worst.sup_ratio),
        worst.goal.path.to_string(),
        num(worst.goal.distance),
        worst.candidates.to_string(),
    ]);
    #[derive(Serialize)]
    struct Out<'a> {
        w: usize,
        lambda: usize,
        n_max: f64,
        #[serde(flatten)]
        worst: &'a raysearch::simulator::WorstCase,
    }
    Ok(Report::object("adversary", &Out { w, lambda, n_max: args.n_max, worst: &worst }, table))
}

fn mc(args: &McArgs) -> Outcome {
    let Instance { w, lambda } = args.instance;
    let seed = need_seed(args.seed, StrategyArg::Rand)?.expect("checked above");
    let est = expected_ratio_mc(w, lambda, GoalPlacement::new(args.path, args.n)?, args.trials, seed)?;
    let mut table = Table::new(vec!["w", "lambda", "n", "ratio", "ci_low", "ci_high", "std_dev", "trials", "seed"]);
    table.push(vec![
        w.to_string(),
        lambda.to_string(),
        num(args.n),
        num(est.point),
        num(est.ci_low),
        num(est.ci_high),
        num(est.std_dev),
        est.trials.to_string(),
        seed.to_string(),
    ]);
    #[derive(Serialize)]
    struct Out<'a> {
        w: usize,
        lambda: usize,
        n: f64,
        path: usize,
        #[serde(flatten)]
        estimate: &'a raysearch::simulator::RatioEstimate,
    }
    Ok(Report::object("mc", &Out { w, lambda, n: args.n, path: args.path, estimate: &est }, table))
}

fn seq(args: &SeqArgs) -> Outcome {
    let values = match (&args.values, args.rate, args.len) {
        (Some(values), None, _) => values.clone(),
        (None, Some(rate), Some(len)) => CyclicSequence::geometric(args.w, rate, len)?.values,
        _ => return Err(CliError::usage("give either --values or --rate with --len")),
    };

    let mut table = Table::new(vec!["i", "kind", "value"]);
    let mut push_ratios = |kind: &str, t: &RatioTable| {
        for &(i, v) in &t.values {
            table.push(vec![i.to_string(), kind.to_string(), num(v)]);
        }
    };

    let result = match &args.labels {
        None => {
            let cyclic = CyclicSequence::new(args.w, values)?;
            let s = ratio_s(&cyclic)?;
            push_ratios("S", &s);
            let gap = limit_gap(&cyclic, args.window).ok();
            json!({ "w": args.w, "s": s, "gap": gap, "window": args.window })
        }
        Some(labels) => {
            let wseq = WSequence::new(args.w, values, labels.clone())?;
            let h = ratio_h(&wseq)?;
            let cyclic = cyclic_convert(&wseq);
            let s = ratio_s(&cyclic)?;
            push_ratios("H", &h);
            push_ratios("S", &s);
            let finder = WitnessFinder::new(&wseq);
            let mut witnesses: Vec<Witness> = Vec::new();
            let mut undecided: Vec<usize> = Vec::new();
            for j in 1..=wseq.len() + 1 - args.w.min(wseq.len()) {
                match finder.find(j) {
                    Ok(witness) => witnesses.push(witness),
                    Err(Error::InsufficientHorizon(_)) => undecided.push(j),
                    Err(err) => return Err(err.into()),
                }
            }
            let counterexamples = witnesses.iter().filter(|x| !x.holds()).count();
            json!({
                "w": args.w,
                "h": h,
                "sorted": cyclic.values,
                "s": s,
                "witnesses": witnesses,
                "undecided": undecided,
                "counterexamples": counterexamples,
            })
        }
    };
    Ok(Report::object("seq", &result, table))
}

fn gfun(args: &GfunArgs) -> Outcome {
    let spec = match &args.prefix {
        None => GeometricSequenceSpec::Geometric { rate: args.rate },
        Some(prefix) => GeometricSequenceSpec::PrefixWithTail { prefix: prefix.clone(), rate: args.rate },
    };
    let value = g_functional(args.w, args.epsilon, &spec, args.trunc_tol)?;
    let c = c_w(args.w)?;
    let mut table = Table::new(vec!["w", "epsilon", "rate", "g", "c_w"]);
    table.push(vec![args.w.to_string(), num(args.epsilon), num(args.rate), num(value), num(c)]);
    let result = json!({ "w": args.w, "epsilon": args.epsilon, "sequence": spec, "g": value, "c_w": c });
    Ok(Report::object("gfun", &result, table))
}

fn schedule(args: &PlanArgs) -> Outcome {
    let schedule = export_schedule(&build_plan(args)?)?;
    let mut table = Table::new(vec!["slot", "algorithm", "mode", "replayed", "run_amount"]);
    for e in &schedule.events {
        let mode = serde_json::to_value(e.mode).expect("mode serializes");
        table.push(vec![
            e.slot.to_string(),
            e.algorithm.to_string(),
            mode.as_str().unwrap_or_default().to_string(),
            num(e.replayed),
            num(e.run_amount),
        ]);
    }
    Ok(Report::object("schedule", &schedule, table))
}

#[derive(Debug, Serialize)]
struct SweepRow {
    w: usize,
    lambda: usize,
    n: f64,
    ratio: f64,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    seed: Option<u64>,
}

fn sweep(args: &SweepArgs) -> Outcome {
    let seed = need_seed(args.seed, args.strategy)?;
    let mut grid = Vec::new();
    for &w in &args.w {
        for &lambda in &args.lambda {
            if lambda > w {
                continue;
            }
            for &n in &args.n {
                grid.push((w, lambda, n));
            }
        }
    }
    if grid.is_empty() {
        return Err(CliError::usage("the grid has no cell with lambda <= w"));
    }
    let mut rows = grid
        .par_iter()
        .map(|&(w, lambda, n)| -> Result<SweepRow, Error> {
            Ok(match (args.strategy, seed) {
                (StrategyArg::Rand, Some(seed)) => {
                    let est = expected_ratio_mc(w, lambda, GoalPlacement::new(0, n)?, args.trials, seed)?;
                    SweepRow {
                        w,
                        lambda,
                        n,
                        ratio: est.point,
                        ci_low: Some(est.ci_low),
                        ci_high: Some(est.ci_high),
                        seed: Some(seed),
                    }
                }
                _ => {
                    let ratio =
                        worst_case_ratio_det_offset(w, lambda, n, raysearch::simulator::ADVERSARY_OFFSET)?.sup_ratio;
                    SweepRow { w, lambda, n, ratio, ci_low: None, ci_high: None, seed: None }
                }
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    rows.sort_by(|a, b| (a.w, a.lambda).cmp(&(b.w, b.lambda)).then(a.n.total_cmp(&b.n)));

    let mut table = Table::new(vec!["w", "lambda", "n", "ratio", "ci_low", "ci_high", "seed"]);
    for r in &rows {
        table.push(vec![
            r.w.to_string(),
            r.lambda.to_string(),
            num(r.n),
            num(r.ratio),
            opt(r.ci_low),
            opt(r.ci_high),
            opt(r.seed),
        ]);
    }
    let records = rows.iter().map(|r| serde_json::to_value(r).expect("rows serialize")).collect();
    Ok(Report { command: "sweep", body: Body::Lines(records), table })
}

//! Benchmark sweep drivers shared by the command-line front end and the
//! acceptance suite: voting reproduction, bridge endplays over seeded
//! instances, and the fixed counterexample verdict table.

use crate::bench::{
    self, deal_bridge, gen_bridge, gen_bridge_absentminded, gen_voting, voting_phi1, voting_phi2,
    VotingInstance,
};
use crate::exact::{self, ExactError, ExactOptions, VerdictError};
use crate::fixpoint::{self, EvalOptions};
use crate::icgs::{Model, StateId};
use crate::logic::{self, Formula, StrategyKind};
use crate::report::{ExactOutcome, ExperimentReport, ExperimentRow};
use rayon::prelude::*;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub eval: EvalOptions,
    pub exact: ExactOptions,
    /// Also run the brute-force checker per instance where feasible.
    pub run_exact: bool,
    /// Worker threads for instance sweeps (0 = rayon default).
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            eval: EvalOptions::default(),
            exact: ExactOptions::default(),
            run_exact: false,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VotingFormula {
    Phi1,
    Phi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeVariant {
    Standard,
    AbsentMinded,
}

/// Which lower bound a sweep evaluates: the general translation, or the
/// reachability-only fixpoints kept for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerKind {
    Translated,
    Tr2,
    Tr3,
}

fn exact_outcome(
    model: &Model,
    state: StateId,
    formula: &Formula,
    opts: &ExactOptions,
) -> (ExactOutcome, u64) {
    let t = Instant::now();
    let outcome = match exact::check_ir(model, formula, opts) {
        Ok(set) => {
            if set.contains(state) {
                ExactOutcome::True
            } else {
                ExactOutcome::False
            }
        }
        Err(ExactError::BudgetExceeded { .. }) => ExactOutcome::Budget,
        Err(e) => panic!("exact check failed: {e}"),
    };
    (outcome, t.elapsed().as_micros() as u64)
}

/// One voting row: generation plus both bounds at the initial state.
pub fn run_voting(
    k: usize,
    which: VotingFormula,
    opts: &SweepOptions,
) -> Result<ExperimentRow, VerdictError> {
    let inst = VotingInstance::new(k);
    let t = Instant::now();
    let model = gen_voting(&inst);
    let gen_us = t.elapsed().as_micros() as u64;
    let formula = match which {
        VotingFormula::Phi1 => voting_phi1(&inst),
        VotingFormula::Phi2 => voting_phi2(&inst),
    };
    let initial = model.first_state();
    let v = exact::verdict(&model, initial, &formula, &opts.eval)?;
    let (exact_res, exact_us) = if opts.run_exact {
        exact_outcome(&model, initial, &formula, &opts.exact)
    } else {
        (ExactOutcome::NotRun, 0)
    };
    Ok(ExperimentRow {
        family: "voting".into(),
        instance: format!("k={k}"),
        index: 0,
        seed: 0,
        states: model.num_states(),
        lower: v.lower,
        lower_rounds: v.lower_rounds,
        upper: v.upper,
        upper_rounds: v.upper_rounds,
        matched: v.lower == v.upper,
        exact: exact_res,
        gen_us,
        lower_us: v.lower_time.as_micros() as u64,
        upper_us: v.upper_time.as_micros() as u64,
        exact_us,
    })
}

/// Bridge sweep over seeded instances; rows are ordered by instance index
/// regardless of scheduling.
pub fn run_bridge(
    n: u8,
    k: u8,
    seeds: &[u64],
    variant: BridgeVariant,
    lower_kind: LowerKind,
    opts: &SweepOptions,
) -> Result<ExperimentReport, VerdictError> {
    let run = |(index, seed): (usize, u64)| -> Result<ExperimentRow, VerdictError> {
        let inst = deal_bridge(n, k, seed);
        let t = Instant::now();
        let bm = match variant {
            BridgeVariant::Standard => gen_bridge(&inst),
            BridgeVariant::AbsentMinded => gen_bridge_absentminded(&inst),
        };
        let gen_us = t.elapsed().as_micros() as u64;
        let formula = Formula::eventually(&["S"], StrategyKind::ImperfectInfo, Formula::atom("win"));

        let lower_formula = match lower_kind {
            LowerKind::Translated => logic::lower(&formula)?,
            LowerKind::Tr2 => logic::tr2(&["S"], &Formula::atom("win")),
            LowerKind::Tr3 => logic::tr3(&["S"], &Formula::atom("win")),
        };
        let t = Instant::now();
        let (lower_set, stats) = fixpoint::eval_closed(&bm.model, &lower_formula, &opts.eval)?;
        let lower_us = t.elapsed().as_micros() as u64;
        let lower = lower_set.contains(bm.initial);
        let lower_rounds = stats.outer_rounds();

        let upper_formula = logic::upper(&formula)?;
        let t = Instant::now();
        let (upper_set, upper_rounds) =
            exact::check_perfect_info_rounds(&bm.model, &upper_formula)?;
        let upper_us = t.elapsed().as_micros() as u64;
        let upper = upper_set.contains(bm.initial);

        let (exact_res, exact_us) = if opts.run_exact {
            exact_outcome(&bm.model, bm.initial, &formula, &opts.exact)
        } else {
            (ExactOutcome::NotRun, 0)
        };
        Ok(ExperimentRow {
            family: match variant {
                BridgeVariant::Standard => "bridge".into(),
                BridgeVariant::AbsentMinded => "bridge-am".into(),
            },
            instance: format!("n={n} k={k}"),
            index,
            seed,
            states: bm.model.num_states(),
            lower,
            lower_rounds,
            upper,
            upper_rounds,
            matched: lower == upper,
            exact: exact_res,
            gen_us,
            lower_us,
            upper_us,
            exact_us,
        })
    };

    let indexed: Vec<(usize, u64)> = seeds.iter().copied().enumerate().collect();
    let rows: Result<Vec<ExperimentRow>, VerdictError> = if opts.jobs == 1 {
        indexed.into_iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| indexed.into_par_iter().map(run).collect())
    };
    Ok(ExperimentReport { rows: rows? })
}

/// Fixed verdict table for the counterexample structures, all for the
/// reachability goal `<<A>> F p` at `q0`.
#[derive(Debug, Clone)]
pub struct CounterexampleRow {
    pub model: &'static str,
    pub coalition: Vec<String>,
    pub tr1: bool,
    pub tr2: bool,
    pub tr3: bool,
    pub lower: bool,
    pub upper: bool,
    pub exact: bool,
}

pub fn run_counterexamples(opts: &SweepOptions) -> Result<Vec<CounterexampleRow>, VerdictError> {
    let cases: Vec<(&'static str, Model, Vec<&str>)> = vec![
        ("m0", bench::m0(), vec!["1"]),
        ("m1", bench::m1(), vec!["1", "2"]),
        ("m2", bench::m2(), vec!["1"]),
        ("m3", bench::m3(), vec!["1"]),
    ];
    let mut rows = Vec::new();
    for (name, model, coalition) in cases {
        let q0 = model.state_id("q0").expect("figure models start at q0");
        let p = Formula::atom("p");
        let goal = Formula::eventually(&coalition, StrategyKind::ImperfectInfo, p.clone());
        let at = |f: &Formula| -> Result<bool, VerdictError> {
            let (set, _) = fixpoint::eval_closed(&model, f, &opts.eval)?;
            Ok(set.contains(q0))
        };
        let tr1 = at(&logic::tr1(&coalition, &p))?;
        let tr2 = at(&logic::tr2(&coalition, &p))?;
        let tr3 = at(&logic::tr3(&coalition, &p))?;
        let lower = at(&logic::lower(&goal)?)?;
        let upper = exact::check_perfect_info(&model, &logic::upper(&goal)?)?.contains(q0);
        let exact_set = exact::check_ir(&model, &goal, &opts.exact)?;
        rows.push(CounterexampleRow {
            model: name,
            coalition: coalition.iter().map(|s| s.to_string()).collect(),
            tr1,
            tr2,
            tr3,
            lower,
            upper,
            exact: exact_set.contains(q0),
        });
    }
    Ok(rows)
}

pub fn counterexample_table(rows: &[CounterexampleRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<6} {:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
        "model", "coalition", "tr1", "tr2", "tr3", "lower", "exact", "upper"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<6} {:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
            r.model,
            format!("{{{}}}", r.coalition.join(",")),
            r.tr1,
            r.tr2,
            r.tr3,
            r.lower,
            r.exact,
            r.upper
        ));
    }
    out
}

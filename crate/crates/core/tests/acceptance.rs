//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line (run with `-- --nocapture` to see them on
//! success).

use atl_approx::bench::{
    self, gen_random, gen_random_lockstep, random_flat_formula, RandomModelParams,
};
use atl_approx::exact::{self, ExactOptions};
use atl_approx::experiments::{
    run_bridge, run_counterexamples, run_voting, BridgeVariant, LowerKind, SweepOptions,
    VotingFormula,
};
use atl_approx::fixpoint::{self, EvalOptions};
use atl_approx::icgs::{Model, StateId, StateSet};
use atl_approx::logic::{self, Formula, Neighborhood};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(criterion: &str) {
    println!("criterion {criterion}: PASS");
}

/// Deterministic corpus of small random models with their formula seeds.
/// Sizes stay within the stated bounds (<= 8 states, <= 2 agents, <= 3
/// actions) and keep the brute-force strategy space within budget.
fn corpus(count: usize) -> Vec<RandomModelParams> {
    (0..count)
        .map(|i| {
            let num_agents = 1 + i % 2;
            let num_actions = 1 + (i / 2) % 3;
            let mut num_states = 3 + (i / 6) % 6;
            let epistemic_block_size = 1 + (i / 36) % 3;
            if epistemic_block_size == 1 && num_agents == 2 && num_actions == 3 {
                num_states = num_states.min(6);
            }
            RandomModelParams {
                num_states,
                num_agents,
                num_actions,
                epistemic_block_size,
                seed: 0x5eed + i as u64,
            }
        })
        .collect()
}

fn agent_names(model: &Model) -> Vec<String> {
    model.agent_names().to_vec()
}

fn atom_names(model: &Model) -> Vec<String> {
    model.atom_names().to_vec()
}

#[test]
fn criterion_1_counterexample_verdicts() {
    let t = Instant::now();
    let opts = SweepOptions {
        run_exact: true,
        ..Default::default()
    };
    let rows = run_counterexamples(&opts).expect("counterexample sweep");
    let get = |name: &str| rows.iter().find(|r| r.model == name).unwrap();

    // m0: the naive fixpoint holds at q0, exact ability does not.
    let m0 = get("m0");
    assert!(m0.tr1, "m0: tr1 should contain q0");
    assert!(!m0.exact, "m0: exact ability must exclude q0");

    // m1: the epistemic fixpoint holds for the pair coalition, exact
    // ability does not, and the upper bound is true.
    let m1 = get("m1");
    assert!(m1.tr2, "m1: tr2 should contain q0");
    assert!(!m1.exact, "m1: exact ability must exclude q0");
    assert!(m1.upper, "m1: upper bound should hold at q0");

    // m2: tr2 misses the ability that tr3 captures; exact confirms it.
    let m2 = get("m2");
    assert!(!m2.tr2, "m2: tr2 should exclude q0");
    assert!(m2.tr3, "m2: tr3 should contain q0");
    assert!(m2.exact, "m2: exact ability holds at q0");

    // m3: the ability holds exactly but the steadfast fixpoint misses it.
    let m3 = get("m3");
    assert!(m3.exact, "m3: exact ability holds at q0");
    assert!(!m3.tr3, "m3: tr3 should exclude q0");

    let elapsed = t.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "counterexample table took {elapsed:?}, budget is 1 s"
    );
    pass("1 (counterexample verdict table, < 1 s)");
}

#[test]
fn criterion_2_soundness_sandwich() {
    let t = Instant::now();
    let eval_opts = EvalOptions::default();
    let exact_opts = ExactOptions::default();
    let params = corpus(500);
    let mut checked = 0usize;
    for p in &params {
        let model = gen_random(p);
        assert!(model.validate().is_ok());
        let agents = agent_names(&model);
        let atoms = atom_names(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0xf0f0);
        for _ in 0..3 {
            let phi = random_flat_formula(&mut rng, &agents, &atoms, 2);
            let lower = logic::lower(&phi).expect("flat formulas translate");
            let upper = logic::upper(&phi).expect("flat formulas translate");
            let (lower_set, _) =
                fixpoint::eval_closed(&model, &lower, &eval_opts).expect("lower eval");
            let exact_set = exact::check_ir(&model, &phi, &exact_opts).expect("within budget");
            let (upper_set, _) =
                exact::check_perfect_info_rounds(&model, &upper).expect("upper eval");
            assert!(
                lower_set.is_subset(&exact_set),
                "lower ⊄ exact for {phi} on seed {}",
                p.seed
            );
            assert!(
                exact_set.is_subset(&upper_set),
                "exact ⊄ upper for {phi} on seed {}",
                p.seed
            );
            checked += 1;
        }
    }
    let elapsed = t.elapsed();
    assert!(checked >= 1500);
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "sandwich sweep took {elapsed:?}, budget is 5 min"
    );
    pass(&format!(
        "2 (soundness sandwich, {} models / {} formulas, zero violations, {:.1} s)",
        params.len(),
        checked,
        elapsed.as_secs_f64()
    ));
}

#[test]
fn criterion_3_singleton_monotonicity() {
    let eval_opts = EvalOptions::default();
    let mut strict = 0usize;
    for p in corpus(200) {
        let model = gen_random(&p);
        let atoms = atom_names(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0xabcd);
        let goal = random_flat_formula(&mut rng, &[], &atoms, 0);
        // Take the body of the generated formula as a plain boolean goal.
        let goal = match goal {
            Formula::Strategic(_, _, logic::Goal::Next(g))
            | Formula::Strategic(_, _, logic::Goal::Always(g))
            | Formula::Strategic(_, _, logic::Goal::Eventually(g)) => *g,
            Formula::Strategic(_, _, logic::Goal::Until(_, g)) => *g,
            other => other,
        };
        for agent in model.agent_names() {
            let tr2 = logic::tr2(&[agent], &goal);
            let tr3 = logic::tr3(&[agent], &goal);
            let (s2, _) = fixpoint::eval_closed(&model, &tr2, &eval_opts).unwrap();
            let (s3, _) = fixpoint::eval_closed(&model, &tr3, &eval_opts).unwrap();
            assert!(
                s2.is_subset(&s3),
                "tr2 ⊄ tr3 for agent {agent} on seed {}",
                p.seed
            );
            if s2 != s3 {
                strict += 1;
            }
        }
    }
    // The chase structure witnesses strictness even if the corpus happens
    // not to.
    let m2 = bench::m2();
    let p = Formula::atom("p");
    let (s2, _) = fixpoint::eval_closed(&m2, &logic::tr2(&["1"], &p), &eval_opts).unwrap();
    let (s3, _) = fixpoint::eval_closed(&m2, &logic::tr3(&["1"], &p), &eval_opts).unwrap();
    assert!(s2.is_subset(&s3) && s2 != s3, "m2 must witness strictness");
    strict += 1;
    assert!(strict > 0);
    pass(&format!(
        "3 (singleton tr2 ⊆ tr3 on corpus, {strict} strict instances)"
    ));
}

#[test]
fn criterion_4_lockstep_coincidence() {
    let eval_opts = EvalOptions::default();
    let mut count = 0usize;
    for p in corpus(120) {
        if p.num_states < 2 {
            continue;
        }
        let model = gen_random_lockstep(&p, 0);
        assert!(model.validate().is_ok());
        let agent = model.agent_names()[0].clone();
        assert!(model.is_lockstep_for(model.agent_id(&agent).unwrap(), false));
        let goal = Formula::atom("p");
        let (s2, _) =
            fixpoint::eval_closed(&model, &logic::tr2(&[&agent], &goal), &eval_opts).unwrap();
        let (s3, _) =
            fixpoint::eval_closed(&model, &logic::tr3(&[&agent], &goal), &eval_opts).unwrap();
        assert_eq!(s2, s3, "lockstep coincidence failed on seed {}", p.seed);
        count += 1;
    }
    assert!(count >= 100);
    pass(&format!("4 (lockstep tr2 = tr3 on {count} models)"));
}

#[test]
fn criterion_5_empty_coalition_exactness() {
    let eval_opts = EvalOptions::default();
    let exact_opts = ExactOptions::default();
    for p in corpus(200) {
        let model = gen_random(&p);
        let goal = Formula::atom("p");
        let tr2 = logic::tr2(&[], &goal);
        let (fix_set, _) = fixpoint::eval_closed(&model, &tr2, &eval_opts).unwrap();
        let phi = Formula::eventually(&[], logic::StrategyKind::ImperfectInfo, goal);
        let exact_set = exact::check_ir(&model, &phi, &exact_opts).unwrap();
        assert_eq!(fix_set, exact_set, "empty-coalition mismatch on seed {}", p.seed);
    }
    pass("5 (empty-coalition reachability exact on corpus)");
}

#[test]
fn criterion_6_voting_reproduction() {
    let opts = SweepOptions::default();
    let expected_states = [15usize, 225, 3375];
    let t_all = Instant::now();
    let mut k3_time = 0.0f64;
    for (i, k) in (1..=3usize).enumerate() {
        let t = Instant::now();
        let phi1 = run_voting(k, VotingFormula::Phi1, &opts).expect("phi1 sweep");
        let phi2 = run_voting(k, VotingFormula::Phi2, &opts).expect("phi2 sweep");
        let elapsed = t.elapsed().as_secs_f64();
        if k == 3 {
            k3_time = elapsed;
        }
        assert_eq!(phi1.states, expected_states[i], "state count at k={k}");
        assert_eq!(phi2.states, expected_states[i]);
        // phi1 is certified by the lower bound, phi2 refuted by the upper.
        assert!(phi1.lower && phi1.upper && phi1.matched, "phi1 at k={k}");
        assert!(!phi2.lower && !phi2.upper && phi2.matched, "phi2 at k={k}");
    }
    assert!(
        k3_time < 60.0,
        "k=3 took {k3_time:.1} s, budget is 60 s"
    );
    pass(&format!(
        "6 (voting k=1..3: 15/225/3375 states, phi1 True, phi2 False, 100% match, k=3 in {:.1} s, total {:.1} s)",
        k3_time,
        t_all.elapsed().as_secs_f64()
    ));
}

#[test]
fn criterion_7_bridge_reproduction() {
    let seeds: Vec<u64> = (0..20).collect();
    let opts = SweepOptions {
        run_exact: true,
        ..Default::default()
    };
    let small = run_bridge(1, 1, &seeds, BridgeVariant::Standard, LowerKind::Translated, &opts)
        .expect("bridge 1,1");
    assert!(small.rows.iter().all(|r| r.matched), "(1,1) must match on every instance");
    for r in &small.rows {
        let exact = match r.exact {
            atl_approx::report::ExactOutcome::True => true,
            atl_approx::report::ExactOutcome::False => false,
            other => panic!("exact outcome missing on (1,1): {other:?}"),
        };
        assert_eq!(exact, r.lower, "(1,1) exact must agree with the matched verdict");
    }

    let opts = SweepOptions::default();
    let big = run_bridge(2, 2, &seeds, BridgeVariant::Standard, LowerKind::Translated, &opts)
        .expect("bridge 2,2");
    assert!(big.rows.iter().all(|r| r.matched), "(2,2) must match on every instance");
    let pct_true = big.pct_true_lower();
    assert!(
        (0.35..=0.85).contains(&pct_true),
        "(2,2) %true {pct_true} outside 60% ± 25pp"
    );

    // State counts are calibration targets: log the deltas, never fail.
    let mean_small: f64 =
        small.rows.iter().map(|r| r.states as f64).sum::<f64>() / small.rows.len() as f64;
    let mean_big: f64 =
        big.rows.iter().map(|r| r.states as f64).sum::<f64>() / big.rows.len() as f64;
    println!(
        "calibration: (1,1) mean states {mean_small:.1} (reference 11, delta {:+.1}); (2,2) mean states {mean_big:.1} (reference 310, delta {:+.1})",
        mean_small - 11.0,
        mean_big - 310.0
    );
    pass(&format!(
        "7 (bridge (1,1)+(2,2): 100% match, exact agrees on (1,1), (2,2) lower true {:.0}%)",
        pct_true * 100.0
    ));
}

#[test]
fn criterion_8_absent_minded_improvement() {
    let seeds: Vec<u64> = (0..20).collect();
    let opts = SweepOptions::default();
    let tr2 = run_bridge(2, 2, &seeds, BridgeVariant::AbsentMinded, LowerKind::Tr2, &opts)
        .expect("bridge-am tr2");
    let tr3 = run_bridge(2, 2, &seeds, BridgeVariant::AbsentMinded, LowerKind::Tr3, &opts)
        .expect("bridge-am tr3");
    assert_eq!(
        tr2.pct_true_lower(),
        0.0,
        "plain epistemic fixpoint should never certify the absent-minded declarer"
    );
    assert!(
        tr3.pct_true_lower() > 0.0,
        "steadfast fixpoint should certify some instances"
    );
    assert!(
        tr3.match_rate() >= 0.80,
        "tr3 match rate {:.2} below 0.80",
        tr3.match_rate()
    );
    pass(&format!(
        "8 (absent-minded (2,2): tr2 0% true, tr3 {:.0}% true, tr3 match {:.0}%)",
        tr3.pct_true_lower() * 100.0,
        tr3.match_rate() * 100.0
    ));
}

#[test]
fn criterion_9_engine_sanity() {
    let eval_opts = EvalOptions::default();
    let mut queries = 0usize;
    for p in corpus(120) {
        let model = gen_random(&p);
        let n = model.num_states() as u32;
        let atoms = atom_names(&model);
        let agents = agent_names(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0x9999);
        let phi = random_flat_formula(&mut rng, &agents, &atoms, 2);
        let lower = logic::lower(&phi).unwrap();
        let (_, stats) = fixpoint::eval_closed(&model, &lower, &eval_opts).unwrap();
        for rounds in &stats.fixpoint_rounds {
            assert!(
                *rounds <= n + 1,
                "fixpoint took {rounds} rounds on {n} states (seed {})",
                p.seed
            );
        }

        // Monotonicity in the target, plus block-constancy of every
        // steadfast result.
        let coalition = model
            .resolve_coalition(&agents[..agents.len().min(2)].to_vec())
            .unwrap();
        let small = model.atom_set("p").unwrap().clone();
        let big = small.union(model.atom_set("r").unwrap());
        let d_small = fixpoint::diamond(&model, &coalition, &small, &eval_opts).unwrap();
        let d_big = fixpoint::diamond(&model, &coalition, &big, &eval_opts).unwrap();
        assert!(d_small.is_subset(&d_big), "diamond not monotone on seed {}", p.seed);
        for target in [&small, &big] {
            let s =
                fixpoint::steadfast(&model, &coalition, target, Neighborhood::Common, &eval_opts)
                    .unwrap();
            for q in s.iter() {
                assert!(
                    model.common_class(&coalition, q).is_subset(&s),
                    "steadfast result not block-constant on seed {}",
                    p.seed
                );
            }
            queries += 1;
        }
        let s_small =
            fixpoint::steadfast(&model, &coalition, &small, Neighborhood::Common, &eval_opts)
                .unwrap();
        let s_big =
            fixpoint::steadfast(&model, &coalition, &big, Neighborhood::Common, &eval_opts)
                .unwrap();
        assert!(s_small.is_subset(&s_big), "steadfast not monotone on seed {}", p.seed);
    }
    // Full-universe targets terminate in one productive round.
    let m = bench::m_vote();
    let full = StateSet::full(m.num_states());
    let c = m.resolve_coalition(&["c".to_string()]).unwrap();
    assert_eq!(
        fixpoint::steadfast(&m, &c, &full, Neighborhood::Common, &eval_opts).unwrap(),
        full
    );
    let _ = StateId(0);
    pass(&format!(
        "9 (engine sanity: round bounds, monotonicity, block-constancy over {queries} steadfast queries)"
    ));
}

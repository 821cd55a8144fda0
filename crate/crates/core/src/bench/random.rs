//! Seeded random model generation for property testing, plus the lockstep
//! post-processing used to exercise the coincidence of the plain and
//! steadfast next-step operators.

use crate::icgs::{ActionId, Model, ModelParts, StateSet};
use crate::logic::{Formula, StrategyKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct RandomModelParams {
    pub num_states: usize,
    pub num_agents: usize,
    pub num_actions: usize,
    pub epistemic_block_size: usize,
    pub seed: u64,
}

struct RawRandom {
    protocol: Vec<Vec<Vec<ActionId>>>,
    successors: Vec<Vec<u32>>,
    epistemic_keys: Vec<Vec<u64>>,
    atoms: Vec<(String, StateSet)>,
    num_states: usize,
    num_agents: usize,
    num_actions: usize,
}

fn raw_random(params: &RandomModelParams) -> RawRandom {
    let RandomModelParams {
        num_states: n,
        num_agents,
        num_actions,
        epistemic_block_size,
        seed,
    } = *params;
    assert!(n >= 1 && num_agents >= 1 && num_actions >= 1 && epistemic_block_size >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random equivalence partitions: shuffle and chunk.
    let mut epistemic_keys: Vec<Vec<u64>> = Vec::with_capacity(num_agents);
    for _ in 0..num_agents {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut keys = vec![0u64; n];
        for (block, chunk) in order.chunks(epistemic_block_size).enumerate() {
            for &q in chunk {
                keys[q] = block as u64;
            }
        }
        epistemic_keys.push(keys);
    }

    // Random protocols, then uniformity repair: intersect across each
    // block, falling back to the first member's choice set when the
    // intersection is empty.
    let mut protocol: Vec<Vec<Vec<ActionId>>> = Vec::with_capacity(num_agents);
    for keys in &epistemic_keys {
        let mut per_state: Vec<Vec<ActionId>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=num_actions);
                let mut acts: Vec<usize> = (0..num_actions).collect();
                acts.shuffle(&mut rng);
                let mut chosen: Vec<ActionId> =
                    acts.into_iter().take(size).map(ActionId).collect();
                chosen.sort();
                chosen
            })
            .collect();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for q in 0..n {
            let b = keys[q] as usize;
            while blocks.len() <= b {
                blocks.push(Vec::new());
            }
            blocks[b].push(q);
        }
        for members in blocks.iter().filter(|m| !m.is_empty()) {
            let mut common = per_state[members[0]].clone();
            for &q in &members[1..] {
                common.retain(|a| per_state[q].contains(a));
            }
            if common.is_empty() {
                common = per_state[members[0]].clone();
            }
            for &q in members {
                per_state[q] = common.clone();
            }
        }
        protocol.push(per_state);
    }

    // Total transition function over exactly the allowed joints.
    let mut successors: Vec<Vec<u32>> = Vec::with_capacity(n);
    for q in 0..n {
        let total: usize = protocol.iter().map(|p| p[q].len()).product();
        successors.push((0..total).map(|_| rng.gen_range(0..n) as u32).collect());
    }

    // Two atoms with random labelings.
    let mut atoms = Vec::new();
    for name in ["p", "r"] {
        let mut set = StateSet::empty(n);
        for q in 0..n {
            if rng.gen_bool(0.5) {
                set.insert(crate::icgs::StateId(q));
            }
        }
        atoms.push((name.to_string(), set));
    }

    RawRandom {
        protocol,
        successors,
        epistemic_keys,
        atoms,
        num_states: n,
        num_agents,
        num_actions,
    }
}

fn assemble(raw: RawRandom) -> Model {
    Model::from_parts(ModelParts {
        agent_names: (1..=raw.num_agents).map(|i| i.to_string()).collect(),
        state_names: (0..raw.num_states).map(|q| format!("q{q}")).collect(),
        action_names: (0..raw.num_actions).map(|a| format!("act{a}")).collect(),
        atoms: raw.atoms,
        protocol: raw.protocol,
        successors: raw.successors,
        epistemic_keys: raw.epistemic_keys,
    })
}

/// Seeded, deterministic random model; always passes validation.
pub fn gen_random(params: &RandomModelParams) -> Model {
    assemble(raw_random(params))
}

/// Random model post-processed to be lockstep for the given agent (by
/// 0-based index): self-loops are retargeted and the agent's partition is
/// refined until no transition stays inside a block. Refinement keeps the
/// protocols uniform since blocks only shrink.
pub fn gen_random_lockstep(params: &RandomModelParams, agent: usize) -> Model {
    let mut raw = raw_random(params);
    let n = raw.num_states;
    assert!(n >= 2, "lockstep models need at least two states");
    assert!(agent < raw.num_agents);
    for (q, row) in raw.successors.iter_mut().enumerate() {
        for t in row.iter_mut() {
            if *t as usize == q {
                *t = ((q + 1) % n) as u32;
            }
        }
    }
    let mut fresh = n as u64;
    loop {
        let mut violation = None;
        'scan: for (q, row) in raw.successors.iter().enumerate() {
            for &t in row {
                if raw.epistemic_keys[agent][q] == raw.epistemic_keys[agent][t as usize] {
                    violation = Some(t as usize);
                    break 'scan;
                }
            }
        }
        match violation {
            Some(t) => {
                raw.epistemic_keys[agent][t] = fresh;
                fresh += 1;
            }
            None => break,
        }
    }
    assemble(raw)
}

/// A flat strategic formula: a random temporal goal over boolean
/// combinations of the given atoms, with a random coalition of at most
/// `max_coalition` agents.
pub fn random_flat_formula(
    rng: &mut ChaCha8Rng,
    agents: &[String],
    atoms: &[String],
    max_coalition: usize,
) -> Formula {
    let size = rng.gen_range(0..=max_coalition.min(agents.len()));
    let mut pool: Vec<&String> = agents.iter().collect();
    pool.shuffle(rng);
    let coalition: Vec<&str> = pool.into_iter().take(size).map(|s| s.as_str()).collect();
    let body = random_bool(rng, atoms);
    match rng.gen_range(0..4) {
        0 => Formula::next(&coalition, StrategyKind::ImperfectInfo, body),
        1 => Formula::always(&coalition, StrategyKind::ImperfectInfo, body),
        2 => Formula::eventually(&coalition, StrategyKind::ImperfectInfo, body),
        _ => {
            let rhs = random_bool(rng, atoms);
            Formula::until(&coalition, StrategyKind::ImperfectInfo, body, rhs)
        }
    }
}

fn random_literal(rng: &mut ChaCha8Rng, atoms: &[String]) -> Formula {
    let atom = Formula::atom(&atoms[rng.gen_range(0..atoms.len())]);
    if rng.gen_bool(0.4) {
        Formula::not(atom)
    } else {
        atom
    }
}

fn random_bool(rng: &mut ChaCha8Rng, atoms: &[String]) -> Formula {
    match rng.gen_range(0..4) {
        0 => random_literal(rng, atoms),
        1 => Formula::and(random_literal(rng, atoms), random_literal(rng, atoms)),
        2 => Formula::or(random_literal(rng, atoms), random_literal(rng, atoms)),
        _ => random_literal(rng, atoms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64) -> RandomModelParams {
        RandomModelParams {
            num_states: 7,
            num_agents: 2,
            num_actions: 3,
            epistemic_block_size: 2,
            seed,
        }
    }

    #[test]
    fn generated_models_validate() {
        for seed in 0..30 {
            let m = gen_random(&params(seed));
            let report = m.validate();
            assert!(report.is_ok(), "seed {seed}: {report}");
        }
    }

    #[test]
    fn same_seed_same_model() {
        let a = crate::textfmt::serialize_model(&gen_random(&params(5)));
        let b = crate::textfmt::serialize_model(&gen_random(&params(5)));
        assert_eq!(a, b);
    }

    #[test]
    fn lockstep_postprocessing_holds_literally() {
        for seed in 0..20 {
            let m = gen_random_lockstep(&params(seed), 0);
            assert!(m.validate().is_ok());
            let a = m.agent_id("1").unwrap();
            assert!(m.is_lockstep_for(a, false), "seed {seed}");
        }
    }
}

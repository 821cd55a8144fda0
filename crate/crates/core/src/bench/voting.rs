//! Scalable voting scenario: an unconstrained product of k voter modules
//! (15 states each, with a `wait` action keeping the product uniform) and a
//! single coercer whose punish/no-punish decisions fire at each voter's
//! post-decision states. The coercer confuses states that differ only in
//! votes it has not seen, lifted componentwise from the figure model; each
//! voter observes exactly its own module.

use crate::icgs::{ActionId, Model, ModelParts, StateSet};
use crate::logic::{Formula, StrategyKind};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy)]
pub struct VotingInstance {
    /// Number of voters; the model has 15^k states.
    pub k: usize,
    /// 1-based voter index the formulas talk about.
    pub voter: usize,
}

impl VotingInstance {
    pub fn new(k: usize) -> Self {
        VotingInstance { k, voter: 1 }
    }
}

const MODULE_STATES: usize = 15;

/// Voter actions by module state (wait is always allowed up to the decision
/// point; afterwards the voter only waits).
fn voter_protocol(m: usize) -> &'static [&'static str] {
    match m {
        0 => &["vote1", "vote2", "wait"],
        1 | 2 => &["give", "ng", "wait"],
        _ => &["wait"],
    }
}

fn voter_step(m: usize, action: &str) -> usize {
    match (m, action) {
        (0, "vote1") => 1,
        (0, "vote2") => 2,
        (1, "give") => 3,
        (1, "ng") => 4,
        (2, "give") => 6,
        (2, "ng") => 5,
        (_, "wait") => m,
        _ => unreachable!("action not in module protocol"),
    }
}

/// Module states where the coercer must decide between punishing or not.
fn awaiting(m: usize) -> bool {
    (3..=6).contains(&m)
}

fn coercer_step(m: usize, punish: bool) -> usize {
    match (m, punish) {
        (3, false) => 7,
        (3, true) => 8,
        (4, false) => 9,
        (4, true) => 10,
        (5, false) => 12,
        (5, true) => 11,
        (6, false) => 14,
        (6, true) => 13,
        _ => unreachable!("no coercer decision pending"),
    }
}

/// Coercer view of a module state: proof-in-hand branches are observed,
/// no-proof branches of the two candidates are confused.
fn coercer_class(m: usize) -> u64 {
    match m {
        1 | 2 => 100,
        4 | 5 => 101,
        9 | 12 => 102,
        10 | 11 => 103,
        other => other as u64,
    }
}

fn module_labels(m: usize) -> (u8, bool, bool) {
    // (candidate voted: 0 none / 1 / 2, finished, punished)
    let candidate = match m {
        1 | 3 | 4 | 7 | 8 | 9 | 10 => 1,
        2 | 5 | 6 | 11 | 12 | 13 | 14 => 2,
        _ => 0,
    };
    let finished = m >= 7;
    let punished = matches!(m, 8 | 10 | 11 | 13);
    (candidate, finished, punished)
}

fn decode(mut idx: usize, k: usize) -> Vec<usize> {
    let mut parts = vec![0usize; k];
    for i in (0..k).rev() {
        parts[i] = idx % MODULE_STATES;
        idx /= MODULE_STATES;
    }
    parts
}

/// Generates the k-voter model. State count is exactly 15^k.
pub fn gen_voting(inst: &VotingInstance) -> Model {
    let k = inst.k;
    assert!(k >= 1, "at least one voter");
    let n = MODULE_STATES.pow(k as u32);

    let mut agent_names: Vec<String> = (1..=k).map(|i| format!("v{i}")).collect();
    agent_names.push("c".to_string());

    // Action table: the shared voter actions, then every coercer decision
    // tuple (one trit per voter: absent / np / pun), skipping the all-absent
    // combination which is plain `wait`.
    let mut action_names: Vec<String> =
        ["vote1", "vote2", "give", "ng", "wait"].iter().map(|s| s.to_string()).collect();
    // decision_id[(awaiting bitmask, pun bitmask)] -> ActionId
    let mut decision_id: HashMap<(u32, u32), ActionId> = HashMap::new();
    // decision_of[action][voter] = Some(punish?) when the action decides for
    // that voter.
    let mut decision_of: Vec<Vec<Option<bool>>> = vec![Vec::new(); action_names.len()];
    let mut trits = vec![0u8; k];
    loop {
        if trits.iter().any(|t| *t != 0) {
            let mut name = String::from("d");
            let mut mask = 0u32;
            let mut puns = 0u32;
            let mut per_voter = vec![None; k];
            for (i, t) in trits.iter().enumerate() {
                match t {
                    0 => {}
                    1 => {
                        name.push_str(&format!("{}np", i + 1));
                        mask |= 1 << i;
                        per_voter[i] = Some(false);
                    }
                    2 => {
                        name.push_str(&format!("{}pun", i + 1));
                        mask |= 1 << i;
                        puns |= 1 << i;
                        per_voter[i] = Some(true);
                    }
                    _ => unreachable!(),
                }
            }
            decision_id.insert((mask, puns), ActionId(action_names.len()));
            action_names.push(name);
            decision_of.push(per_voter);
        }
        // Next trit vector, last voter fastest.
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            trits[i] += 1;
            if trits[i] < 3 {
                break;
            }
            trits[i] = 0;
        }
        if trits.iter().all(|t| *t == 0) {
            break;
        }
    }
    let action_id: HashMap<&str, ActionId> = ["vote1", "vote2", "give", "ng", "wait"]
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, ActionId(i)))
        .collect();
    let wait = action_id["wait"];

    let mut state_names = Vec::with_capacity(n);
    let mut protocol: Vec<Vec<Vec<ActionId>>> = vec![Vec::with_capacity(n); k + 1];
    let mut successors: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut coercer_keys = Vec::with_capacity(n);
    let mut voter_keys: Vec<Vec<u64>> = vec![Vec::with_capacity(n); k];
    let mut vote1_sets: Vec<StateSet> = (0..k).map(|_| StateSet::empty(n)).collect();
    let mut vote2_sets: Vec<StateSet> = (0..k).map(|_| StateSet::empty(n)).collect();
    let mut finish_sets: Vec<StateSet> = (0..k).map(|_| StateSet::empty(n)).collect();
    let mut pun_sets: Vec<StateSet> = (0..k).map(|_| StateSet::empty(n)).collect();

    for idx in 0..n {
        let parts = decode(idx, k);
        let name = format!(
            "q{}",
            parts.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("_")
        );
        state_names.push(name);

        let mut awaiting_mask = 0u32;
        for (i, &m) in parts.iter().enumerate() {
            let q = crate::icgs::StateId(idx);
            let (candidate, finished, punished) = module_labels(m);
            match candidate {
                1 => vote1_sets[i].insert(q),
                2 => vote2_sets[i].insert(q),
                _ => {}
            }
            if finished {
                finish_sets[i].insert(q);
            }
            if punished {
                pun_sets[i].insert(q);
            }
            protocol[i].push(voter_protocol(m).iter().map(|a| action_id[a]).collect());
            voter_keys[i].push(m as u64);
            if awaiting(m) {
                awaiting_mask |= 1 << i;
            }
        }
        coercer_keys.push(parts.iter().fold(0u64, |acc, &m| acc * 200 + coercer_class(m)));

        let coercer_actions: Vec<ActionId> = if awaiting_mask == 0 {
            vec![wait]
        } else {
            // All punish subsets of the awaiting set, binary order.
            let voters: Vec<usize> = (0..k).filter(|i| awaiting_mask >> i & 1 == 1).collect();
            (0..1u32 << voters.len())
                .map(|combo| {
                    let mut puns = 0u32;
                    for (j, &i) in voters.iter().enumerate() {
                        if combo >> j & 1 == 1 {
                            puns |= 1 << i;
                        }
                    }
                    decision_id[&(awaiting_mask, puns)]
                })
                .collect()
        };
        protocol[k].push(coercer_actions);

        // Dense successor table, agent 0 most significant.
        let radices: Vec<usize> = (0..=k).map(|a| protocol[a][idx].len()).collect();
        let total: usize = radices.iter().product();
        let mut row = Vec::with_capacity(total);
        let mut pos = vec![0usize; k + 1];
        loop {
            let coercer_act = protocol[k][idx][pos[k]];
            let decisions = &decision_of[coercer_act.0];
            let mut next = 0usize;
            for i in 0..k {
                let m = parts[i];
                let act = protocol[i][idx][pos[i]];
                let stepped = if awaiting(m) {
                    let punish = decisions
                        .get(i)
                        .copied()
                        .flatten()
                        .expect("decision covers awaiting voter");
                    coercer_step(m, punish)
                } else {
                    voter_step(m, action_name_of(act, &action_names))
                };
                next = next * MODULE_STATES + stepped;
            }
            row.push(next as u32);
            let mut a = k + 1;
            loop {
                if a == 0 {
                    break;
                }
                a -= 1;
                pos[a] += 1;
                if pos[a] < radices[a] {
                    break;
                }
                pos[a] = 0;
            }
            if pos.iter().all(|p| *p == 0) {
                break;
            }
        }
        successors.push(row);
    }

    let mut atoms = Vec::new();
    for i in 0..k {
        atoms.push((format!("vote{}_1", i + 1), vote1_sets[i].clone()));
        atoms.push((format!("vote{}_2", i + 1), vote2_sets[i].clone()));
        atoms.push((format!("finish{}", i + 1), finish_sets[i].clone()));
        atoms.push((format!("pun{}", i + 1), pun_sets[i].clone()));
    }

    let mut epistemic_keys = voter_keys;
    epistemic_keys.push(coercer_keys);

    Model::from_parts(ModelParts {
        agent_names,
        state_names,
        action_names,
        atoms,
        protocol,
        successors,
        epistemic_keys,
    })
}

fn action_name_of(act: ActionId, names: &[String]) -> &str {
    &names[act.0]
}

/// The coercer can keep every finished-unpunished outcome of voter i a vote
/// for candidate 1; holds in the scenario.
pub fn voting_phi1(inst: &VotingInstance) -> Formula {
    let i = inst.voter;
    Formula::always(
        &["c"],
        StrategyKind::ImperfectInfo,
        Formula::implies(
            Formula::and(
                Formula::atom(&format!("finish{i}")),
                Formula::not(Formula::atom(&format!("pun{i}"))),
            ),
            Formula::atom(&format!("vote{i}_1")),
        ),
    )
}

/// Voter i can finish unpunished without voting for candidate 1; false in
/// the scenario.
pub fn voting_phi2(inst: &VotingInstance) -> Formula {
    let i = inst.voter;
    Formula::eventually(
        &[&format!("v{i}")],
        StrategyKind::ImperfectInfo,
        Formula::and(
            Formula::atom(&format!("finish{i}")),
            Formula::and(
                Formula::not(Formula::atom(&format!("pun{i}"))),
                Formula::not(Formula::atom(&format!("vote{i}_1"))),
            ),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_counts_match_product() {
        assert_eq!(gen_voting(&VotingInstance::new(1)).num_states(), 15);
        assert_eq!(gen_voting(&VotingInstance::new(2)).num_states(), 225);
    }

    #[test]
    fn generated_models_validate() {
        for k in 1..=2 {
            let m = gen_voting(&VotingInstance::new(k));
            let report = m.validate();
            assert!(report.is_ok(), "k={k}: {report}");
        }
    }

    #[test]
    fn coercer_confuses_unseen_votes() {
        let m = gen_voting(&VotingInstance::new(1));
        let c = m.agent_id("c").unwrap();
        // q1 (voted 1) and q2 (voted 2) are indistinguishable to the coercer.
        let q1 = m.state_id("q1").unwrap();
        let q2 = m.state_id("q2").unwrap();
        assert!(m.epistemic_class(c, q1).contains(q2));
        // Proof-in-hand leaves are observed.
        let q7 = m.state_id("q7").unwrap();
        assert_eq!(m.epistemic_class(c, q7).len(), 1);
        // No-proof leaves of the two candidates are confused.
        let q9 = m.state_id("q9").unwrap();
        let q12 = m.state_id("q12").unwrap();
        assert!(m.epistemic_class(c, q9).contains(q12));
    }

    #[test]
    fn determinism() {
        let a = crate::textfmt::serialize_model(&gen_voting(&VotingInstance::new(1)));
        let b = crate::textfmt::serialize_model(&gen_voting(&VotingInstance::new(1)));
        assert_eq!(a, b);
    }
}

//! Uniform partial strategies and their deterministic enumeration.

use super::{ActionId, AgentId, IcgsError, Model, StateId, StateSet};
use std::collections::BTreeMap;

/// A partial memoryless strategy for a coalition, constant on each member's
/// epistemic classes and respecting the protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformAssignment {
    coalition: Vec<AgentId>,
    choice: BTreeMap<(AgentId, StateId), ActionId>,
}

impl UniformAssignment {
    pub fn empty(coalition: Vec<AgentId>) -> Self {
        UniformAssignment {
            coalition,
            choice: BTreeMap::new(),
        }
    }

    pub fn coalition(&self) -> &[AgentId] {
        &self.coalition
    }

    pub fn get(&self, agent: AgentId, state: StateId) -> Option<ActionId> {
        self.choice.get(&(agent, state)).copied()
    }

    pub fn set(&mut self, agent: AgentId, state: StateId, action: ActionId) {
        self.choice.insert((agent, state), action);
    }

    pub fn domain(&self, model: &Model) -> StateSet {
        StateSet::from_states(model.num_states(), self.choice.keys().map(|(_, q)| *q))
    }

    /// Checks the two assignment invariants against a model: block-constant
    /// choices and protocol membership.
    pub fn check(&self, model: &Model) -> Result<(), String> {
        for (&(a, q), &act) in &self.choice {
            if !model.protocol_actions(a, q).contains(&act) {
                return Err(format!(
                    "action `{}` not allowed for agent `{}` at `{}`",
                    model.action_name(act),
                    model.agent_name(a),
                    model.state_name(q)
                ));
            }
            for r in model.epistemic_class(a, q).iter() {
                if let Some(other) = self.get(a, r) {
                    if other != act {
                        return Err(format!(
                            "agent `{}` chooses differently at indistinguishable states `{}` and `{}`",
                            model.agent_name(a),
                            model.state_name(q),
                            model.state_name(r)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One choice point of an enumeration: an agent together with the states of
/// one of its blocks (restricted to the relevant set) and the actions open
/// to it there.
#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub agent: AgentId,
    pub states: Vec<StateId>,
    pub options: Vec<ActionId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SlotMode {
    /// Every member block must lie entirely inside the given set.
    WithinDomain,
    /// Blocks merely intersecting the set participate; choices are recorded
    /// only for the intersection.
    Intersecting,
}

#[derive(Debug, Clone)]
pub(crate) struct ChoiceSlots {
    pub slots: Vec<Slot>,
}

impl ChoiceSlots {
    pub fn count(&self) -> u128 {
        self.slots
            .iter()
            .map(|s| s.options.len() as u128)
            .product()
    }

    /// Runs `f` on every combination of per-slot option indices, in
    /// odometer order (last slot fastest). Stops early when `f` returns true
    /// and reports whether that happened.
    pub fn any_combination(&self, mut f: impl FnMut(&[usize]) -> bool) -> bool {
        let mut pos = vec![0usize; self.slots.len()];
        if self.slots.iter().any(|s| s.options.is_empty()) {
            return false;
        }
        loop {
            if f(&pos) {
                return true;
            }
            let mut i = self.slots.len();
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                pos[i] += 1;
                if pos[i] < self.slots[i].options.len() {
                    break;
                }
                pos[i] = 0;
            }
        }
    }
}

/// Builds the choice slots for a coalition over a set of states: agents in
/// model order, blocks ordered by their first state, actions in declaration
/// order.
pub(crate) fn slots_for(
    model: &Model,
    coalition: &[AgentId],
    states: &StateSet,
    mode: SlotMode,
) -> Result<ChoiceSlots, IcgsError> {
    let mut slots = Vec::new();
    for &a in coalition {
        let mut seen_blocks = Vec::new();
        for q in states.iter() {
            let bi = model.epistemic_partition(a).block_index(q);
            if seen_blocks.contains(&bi) {
                continue;
            }
            seen_blocks.push(bi);
            let block = model.epistemic_partition(a).block(q);
            if mode == SlotMode::WithinDomain && !block.is_subset(states) {
                return Err(IcgsError::DomainNotBlockClosed {
                    agent: model.agent_name(a).to_string(),
                    state: model.state_name(q).to_string(),
                });
            }
            let members: Vec<StateId> = block.iter().filter(|r| states.contains(*r)).collect();
            let options = model.protocol_actions(a, q).to_vec();
            slots.push(Slot {
                agent: a,
                states: members,
                options,
            });
        }
    }
    Ok(slots.into())
}

impl From<Vec<Slot>> for ChoiceSlots {
    fn from(slots: Vec<Slot>) -> Self {
        ChoiceSlots { slots }
    }
}

/// Protocol positions pinning each coalition member whose slot covers `q`
/// to its chosen action. Positions are resolved per state since declaration
/// orders may differ across a block.
pub(crate) fn pin_for(
    model: &Model,
    slots: &ChoiceSlots,
    pos: &[usize],
    q: StateId,
) -> Vec<(AgentId, usize)> {
    let mut pinned = Vec::new();
    for (slot, &p) in slots.slots.iter().zip(pos) {
        if slot.states.contains(&q) {
            let action = slot.options[p];
            if let Some(idx) = model
                .protocol_actions(slot.agent, q)
                .iter()
                .position(|x| *x == action)
            {
                pinned.push((slot.agent, idx));
            }
        }
    }
    pinned
}

/// True when `q` has at least one successor under the pinned choices and
/// every such successor lies in `set`.
pub(crate) fn all_successors_in(
    model: &Model,
    q: StateId,
    pinned: &[(AgentId, usize)],
    set: &StateSet,
) -> bool {
    let mut ok = true;
    let mut any = false;
    model.for_each_successor(q, pinned, |t| {
        any = true;
        if !set.contains(t) {
            ok = false;
        }
    });
    ok && any
}

/// Total number of uniform assignments with the given exact domain.
pub fn assignment_count(
    model: &Model,
    coalition: &[AgentId],
    domain: &StateSet,
) -> Result<u128, IcgsError> {
    Ok(slots_for(model, coalition, domain, SlotMode::WithinDomain)?.count())
}

/// Streams every uniform assignment whose domain is exactly `domain`, each
/// exactly once, in a deterministic order.
pub fn enumerate_assignments(
    model: &Model,
    coalition: &[AgentId],
    domain: &StateSet,
) -> Result<AssignmentIter, IcgsError> {
    let slots = slots_for(model, coalition, domain, SlotMode::WithinDomain)?;
    Ok(AssignmentIter {
        coalition: coalition.to_vec(),
        pos: vec![0; slots.slots.len()],
        slots,
        done: false,
    })
}

pub struct AssignmentIter {
    coalition: Vec<AgentId>,
    slots: ChoiceSlots,
    pos: Vec<usize>,
    done: bool,
}

impl Iterator for AssignmentIter {
    type Item = UniformAssignment;

    fn next(&mut self) -> Option<UniformAssignment> {
        if self.done || self.slots.slots.iter().any(|s| s.options.is_empty()) {
            return None;
        }
        let mut asg = UniformAssignment::empty(self.coalition.clone());
        for (slot, &p) in self.slots.slots.iter().zip(&self.pos) {
            for &q in &slot.states {
                asg.set(slot.agent, q, slot.options[p]);
            }
        }
        // Advance the odometer, last slot fastest.
        let mut i = self.slots.slots.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.pos[i] += 1;
            if self.pos[i] < self.slots.slots[i].options.len() {
                break;
            }
            self.pos[i] = 0;
        }
        Some(asg)
    }
}

/// One-step successor relation of the model restricted by an assignment:
/// coalition members play their assigned action where the assignment is
/// defined, everything else stays free.
pub fn restrict(model: &Model, assignment: &UniformAssignment) -> Vec<Vec<StateId>> {
    let all: Vec<StateId> = (0..model.num_states()).map(StateId).collect();
    restrict_states(model, assignment, &all)
}

/// Restricted successors computed only for the listed states, in order.
pub fn restrict_states(
    model: &Model,
    assignment: &UniformAssignment,
    states: &[StateId],
) -> Vec<Vec<StateId>> {
    states
        .iter()
        .map(|&q| {
            let mut pinned = Vec::new();
            for &a in assignment.coalition() {
                if let Some(act) = assignment.get(a, q) {
                    if let Some(p) = model.protocol_actions(a, q).iter().position(|x| *x == act) {
                        pinned.push((a, p));
                    }
                }
            }
            let mut succ = Vec::new();
            model.for_each_successor(q, &pinned, |t| succ.push(t));
            succ.sort();
            succ.dedup();
            succ
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icgs::ModelBuilder;

    fn model_with_blocks() -> Model {
        // Two agents, four states; agent 1 blocks {q0,q1},{q2,q3} with two
        // actions, agent 2 blocks {q0},{q1,q2},{q3} with two actions.
        let mut b = ModelBuilder::new();
        b.agents(["1", "2"]);
        for q in ["q0", "q1", "q2", "q3"] {
            b.state(q, &[]);
        }
        b.actions(["a", "b", "x", "y"]);
        for q in ["q0", "q1", "q2", "q3"] {
            b.protocol("1", q, &["a", "b"]);
            b.protocol("2", q, &["x", "y"]);
            for j in [["a", "x"], ["a", "y"], ["b", "x"], ["b", "y"]] {
                b.transition(q, &j, "q0");
            }
        }
        b.epistemic_pair("1", "q0", "q1")
            .epistemic_pair("1", "q2", "q3")
            .epistemic_pair("2", "q1", "q2");
        b.build().unwrap()
    }

    #[test]
    fn enumeration_count_matches_block_product() {
        let m = model_with_blocks();
        let coalition = m.resolve_coalition(&["1".into(), "2".into()]).unwrap();
        let domain = StateSet::full(4);
        // Agent 1: 2 blocks x 2 actions, agent 2: 3 blocks x 2 actions.
        assert_eq!(assignment_count(&m, &coalition, &domain).unwrap(), 32);
        let all: Vec<_> = enumerate_assignments(&m, &coalition, &domain)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 32);
        for asg in &all {
            asg.check(&m).unwrap();
        }
        // Pairwise distinct.
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn one_block_one_action_single_assignment() {
        let mut b = ModelBuilder::new();
        b.agent("1")
            .state("q0", &[])
            .state("q1", &[])
            .action("a")
            .protocol("1", "q0", &["a"])
            .protocol("1", "q1", &["a"])
            .transition("q0", &["a"], "q1")
            .transition("q1", &["a"], "q0")
            .epistemic_pair("1", "q0", "q1");
        let m = b.build().unwrap();
        let coalition = vec![m.agent_id("1").unwrap()];
        let domain = StateSet::full(2);
        let all: Vec<_> = enumerate_assignments(&m, &coalition, &domain)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn empty_coalition_yields_one_empty_assignment() {
        let m = model_with_blocks();
        let domain = StateSet::full(4);
        let all: Vec<_> = enumerate_assignments(&m, &[], &domain).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].domain(&m).is_empty());
    }

    #[test]
    fn non_closed_domain_rejected() {
        let m = model_with_blocks();
        let coalition = vec![m.agent_id("1").unwrap()];
        let domain = StateSet::singleton(4, m.state_id("q0").unwrap());
        assert!(matches!(
            enumerate_assignments(&m, &coalition, &domain),
            Err(IcgsError::DomainNotBlockClosed { .. })
        ));
    }

    #[test]
    fn restrict_outside_domain_keeps_all_successors() {
        let m = model_with_blocks();
        let coalition = vec![m.agent_id("1").unwrap()];
        let asg = UniformAssignment::empty(coalition);
        let succ = restrict(&m, &asg);
        assert_eq!(succ[0], vec![m.state_id("q0").unwrap()]);
    }
}

//! Concurrent epistemic game structures: the model data type, validation,
//! epistemic neighborhoods, and uniform strategy-restriction machinery.
//!
//! A model consists of agents, states, actions, per-agent protocols, a
//! deterministic transition function over allowed joint actions, per-agent
//! epistemic equivalence partitions, and an atomic labeling. Identifiers are
//! interned to dense integers at construction; all sets are index-based and
//! every iteration order is a declaration order, so downstream computations
//! are reproducible bit for bit.

mod assignments;
mod state_set;

pub use assignments::{
    assignment_count, enumerate_assignments, restrict, restrict_states, AssignmentIter,
    UniformAssignment,
};
pub(crate) use assignments::{all_successors_in, pin_for, slots_for, ChoiceSlots, SlotMode};
pub use state_set::StateSet;

use std::collections::HashMap;
use thiserror::Error;

/// Sentinel for an undefined transition cell.
pub(crate) const MISSING: u32 = u32::MAX;

/// Index of an agent in the model's agent list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AgentId(pub usize);

/// Index of a state in the model's state list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(pub usize);

/// Index of an action in the model's action list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActionId(pub usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IcgsError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("assignment domain is not closed under agent `{agent}`'s relation at state `{state}`")]
    DomainNotBlockClosed { agent: String, state: String },
    #[error("model has no states")]
    EmptyModel,
}

/// A single invariant violation found by [`validate`](Model::validate).
/// Violations are data, not failures: a report lists all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyProtocol { agent: String, state: String },
    MissingTransition { state: String, joint: Vec<String> },
    DuplicateTransition { state: String, joint: Vec<String> },
    DisallowedTransition { state: String, joint: Vec<String> },
    NonUniformProtocol { agent: String, state_a: String, state_b: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptyProtocol { agent, state } => {
                write!(f, "protocol of agent `{agent}` at state `{state}` is empty")
            }
            Violation::MissingTransition { state, joint } => {
                write!(f, "no transition from `{state}` for joint action ({})", joint.join(","))
            }
            Violation::DuplicateTransition { state, joint } => {
                write!(f, "duplicate transition from `{state}` for joint action ({})", joint.join(","))
            }
            Violation::DisallowedTransition { state, joint } => {
                write!(
                    f,
                    "transition from `{state}` uses joint action ({}) not allowed by the protocol",
                    joint.join(",")
                )
            }
            Violation::NonUniformProtocol { agent, state_a, state_b } => {
                write!(
                    f,
                    "agent `{agent}` has different protocols at indistinguishable states `{state_a}` and `{state_b}`"
                )
            }
        }
    }
}

/// Result of validating a model: empty means the model satisfies every
/// structural invariant and is usable by all other operations.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// An equivalence partition of the state space.
#[derive(Debug, Clone)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<StateSet>,
}

impl Partition {
    /// Builds the finest partition consistent with the given linked pairs.
    fn from_pairs(num_states: usize, pairs: &[(StateId, StateId)]) -> Partition {
        let mut parent: Vec<usize> = (0..num_states).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for &(a, b) in pairs {
            let ra = find(&mut parent, a.0);
            let rb = find(&mut parent, b.0);
            if ra != rb {
                // Lower index becomes the root so block order follows state order.
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut block_ids: HashMap<usize, usize> = HashMap::new();
        let mut block_of = vec![0usize; num_states];
        let mut members: Vec<Vec<StateId>> = Vec::new();
        for q in 0..num_states {
            let root = find(&mut parent, q);
            let id = *block_ids.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            block_of[q] = id;
            members[id].push(StateId(q));
        }
        let blocks = members
            .into_iter()
            .map(|m| StateSet::from_states(num_states, m))
            .collect();
        Partition { block_of, blocks }
    }

    fn identity(num_states: usize) -> Partition {
        Partition {
            block_of: (0..num_states).collect(),
            blocks: (0..num_states)
                .map(|q| StateSet::singleton(num_states, StateId(q)))
                .collect(),
        }
    }

    /// Builds a partition from arbitrary per-state block keys; block ids are
    /// normalized to first-occurrence order.
    pub(crate) fn from_keys(keys: &[u64]) -> Partition {
        let n = keys.len();
        let mut id_of: HashMap<u64, usize> = HashMap::new();
        let mut block_of = vec![0usize; n];
        let mut members: Vec<Vec<StateId>> = Vec::new();
        for (q, key) in keys.iter().enumerate() {
            let id = *id_of.entry(*key).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            block_of[q] = id;
            members[id].push(StateId(q));
        }
        let blocks = members
            .into_iter()
            .map(|m| StateSet::from_states(n, m))
            .collect();
        Partition { block_of, blocks }
    }

    pub fn block_index(&self, q: StateId) -> usize {
        self.block_of[q.0]
    }

    pub fn block(&self, q: StateId) -> &StateSet {
        &self.blocks[self.block_of[q.0]]
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }
}

/// Raw model description consumed by [`ModelBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct ModelBuilder {
    agents: Vec<String>,
    states: Vec<String>,
    actions: Vec<String>,
    labels: Vec<(String, String)>,                  // (atom, state)
    protocol: Vec<(String, String, Vec<String>)>,   // (agent, state, actions)
    transitions: Vec<(String, Vec<String>, String)>, // (state, joint, target)
    epistemic_pairs: Vec<(String, String, String)>, // (agent, state, state)
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn agent(&mut self, name: &str) -> &mut Self {
        self.agents.push(name.to_string());
        self
    }

    pub fn agents<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> &mut Self {
        for n in names {
            self.agent(n);
        }
        self
    }

    pub fn state(&mut self, name: &str, labels: &[&str]) -> &mut Self {
        self.states.push(name.to_string());
        for l in labels {
            self.labels.push((l.to_string(), name.to_string()));
        }
        self
    }

    pub fn action(&mut self, name: &str) -> &mut Self {
        self.actions.push(name.to_string());
        self
    }

    pub fn actions<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> &mut Self {
        for n in names {
            self.action(n);
        }
        self
    }

    pub fn protocol(&mut self, agent: &str, state: &str, actions: &[&str]) -> &mut Self {
        self.protocol.push((
            agent.to_string(),
            state.to_string(),
            actions.iter().map(|a| a.to_string()).collect(),
        ));
        self
    }

    pub fn transition(&mut self, from: &str, joint: &[&str], to: &str) -> &mut Self {
        self.transitions.push((
            from.to_string(),
            joint.iter().map(|a| a.to_string()).collect(),
            to.to_string(),
        ));
        self
    }

    /// Links two states as indistinguishable for an agent. Pair lists are
    /// closed to equivalences at build time.
    pub fn epistemic_pair(&mut self, agent: &str, a: &str, b: &str) -> &mut Self {
        self.epistemic_pairs
            .push((agent.to_string(), a.to_string(), b.to_string()));
        self
    }

    pub fn epistemic_block(&mut self, agent: &str, states: &[&str]) -> &mut Self {
        for w in states.windows(2) {
            self.epistemic_pair(agent, w[0], w[1]);
        }
        self
    }

    pub fn build(&self) -> Result<Model, IcgsError> {
        Model::from_builder(self)
    }
}

/// Interned model description for generator fast paths.
pub(crate) struct ModelParts {
    pub agent_names: Vec<String>,
    pub state_names: Vec<String>,
    pub action_names: Vec<String>,
    pub atoms: Vec<(String, StateSet)>,
    pub protocol: Vec<Vec<Vec<ActionId>>>,
    /// Dense per-state successor tables, `MISSING` for gaps.
    pub successors: Vec<Vec<u32>>,
    /// Per agent: an arbitrary block key per state; equal keys share a block.
    pub epistemic_keys: Vec<Vec<u64>>,
}

/// A concurrent epistemic game structure, immutable after construction and
/// safely shareable across concurrent evaluators.
#[derive(Debug, Clone)]
pub struct Model {
    agent_names: Vec<String>,
    state_names: Vec<String>,
    action_names: Vec<String>,
    atom_names: Vec<String>,
    labeling: Vec<StateSet>,
    /// `protocol[agent][state]`: allowed actions in declaration order.
    protocol: Vec<Vec<Vec<ActionId>>>,
    /// `successors[state][joint_index]` over the mixed-radix product of the
    /// state's protocols; `MISSING` marks a totality gap.
    successors: Vec<Vec<u32>>,
    epistemic: Vec<Partition>,
    agent_index: HashMap<String, AgentId>,
    state_index: HashMap<String, StateId>,
    action_index: HashMap<String, ActionId>,
    atom_index: HashMap<String, usize>,
    /// Structural anomalies recorded while interning the raw description
    /// (duplicate or protocol-disallowed transitions), surfaced by validate().
    build_anomalies: Vec<Violation>,
}

impl Model {
    fn from_builder(b: &ModelBuilder) -> Result<Model, IcgsError> {
        fn intern<T: Copy>(
            kind: &'static str,
            names: &[String],
            mk: impl Fn(usize) -> T,
        ) -> Result<(Vec<String>, HashMap<String, T>), IcgsError> {
            let mut map = HashMap::new();
            for (i, n) in names.iter().enumerate() {
                if map.insert(n.clone(), mk(i)).is_some() {
                    return Err(IcgsError::DuplicateName { kind, name: n.clone() });
                }
            }
            Ok((names.to_vec(), map))
        }
        if b.states.is_empty() {
            return Err(IcgsError::EmptyModel);
        }
        let (agent_names, agent_index) = intern("agent", &b.agents, AgentId)?;
        let (state_names, state_index) = intern("state", &b.states, StateId)?;
        let (action_names, action_index) = intern("action", &b.actions, ActionId)?;
        let n = state_names.len();

        let mut atom_names: Vec<String> = Vec::new();
        let mut atom_index: HashMap<String, usize> = HashMap::new();
        let mut labeling: Vec<StateSet> = Vec::new();
        for (atom, state) in &b.labels {
            let q = *state_index
                .get(state)
                .ok_or_else(|| IcgsError::UnknownState(state.clone()))?;
            let idx = *atom_index.entry(atom.clone()).or_insert_with(|| {
                atom_names.push(atom.clone());
                labeling.push(StateSet::empty(n));
                atom_names.len() - 1
            });
            labeling[idx].insert(q);
        }

        let mut protocol = vec![vec![Vec::new(); n]; agent_names.len()];
        for (agent, state, actions) in &b.protocol {
            let a = *agent_index
                .get(agent)
                .ok_or_else(|| IcgsError::UnknownAgent(agent.clone()))?;
            let q = *state_index
                .get(state)
                .ok_or_else(|| IcgsError::UnknownState(state.clone()))?;
            let entry: &mut Vec<ActionId> = &mut protocol[a.0][q.0];
            for act in actions {
                let id = *action_index
                    .get(act)
                    .ok_or_else(|| IcgsError::UnknownAction(act.clone()))?;
                if !entry.contains(&id) {
                    entry.push(id);
                }
            }
        }

        let mut build_anomalies = Vec::new();
        let mut successors: Vec<Vec<u32>> = (0..n)
            .map(|q| {
                let size: usize = protocol
                    .iter()
                    .map(|per_agent| per_agent[q].len())
                    .product();
                vec![MISSING; size]
            })
            .collect();
        for (from, joint, to) in &b.transitions {
            let q = *state_index
                .get(from)
                .ok_or_else(|| IcgsError::UnknownState(from.clone()))?;
            let target = *state_index
                .get(to)
                .ok_or_else(|| IcgsError::UnknownState(to.clone()))?;
            if joint.len() != agent_names.len() {
                build_anomalies.push(Violation::DisallowedTransition {
                    state: from.clone(),
                    joint: joint.clone(),
                });
                continue;
            }
            let mut index = 0usize;
            let mut ok = true;
            for (a, act) in joint.iter().enumerate() {
                let id = *action_index
                    .get(act)
                    .ok_or_else(|| IcgsError::UnknownAction(act.clone()))?;
                match protocol[a][q.0].iter().position(|x| *x == id) {
                    Some(pos) => index = index * protocol[a][q.0].len() + pos,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                build_anomalies.push(Violation::DisallowedTransition {
                    state: from.clone(),
                    joint: joint.clone(),
                });
                continue;
            }
            if successors[q.0][index] != MISSING {
                build_anomalies.push(Violation::DuplicateTransition {
                    state: from.clone(),
                    joint: joint.clone(),
                });
            }
            successors[q.0][index] = target.0 as u32;
        }

        let mut epistemic = Vec::with_capacity(agent_names.len());
        for a in 0..agent_names.len() {
            let mut pairs = Vec::new();
            for (agent, s, t) in &b.epistemic_pairs {
                if *agent_index
                    .get(agent)
                    .ok_or_else(|| IcgsError::UnknownAgent(agent.clone()))?
                    == AgentId(a)
                {
                    let qs = *state_index
                        .get(s)
                        .ok_or_else(|| IcgsError::UnknownState(s.clone()))?;
                    let qt = *state_index
                        .get(t)
                        .ok_or_else(|| IcgsError::UnknownState(t.clone()))?;
                    pairs.push((qs, qt));
                }
            }
            epistemic.push(Partition::from_pairs(n, &pairs));
        }

        Ok(Model {
            agent_names,
            state_names,
            action_names,
            atom_names,
            labeling,
            protocol,
            successors,
            epistemic,
            agent_index,
            state_index,
            action_index,
            atom_index,
            build_anomalies,
        })
    }

    /// Direct constructor for generators that already work with interned
    /// indices. `successors[q]` must be dense over the mixed-radix product
    /// of `q`'s protocols (agent 0 most significant).
    pub(crate) fn from_parts(parts: ModelParts) -> Model {
        let ModelParts {
            agent_names,
            state_names,
            action_names,
            atoms,
            protocol,
            successors,
            epistemic_keys,
        } = parts;
        let agent_index = agent_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), AgentId(i)))
            .collect();
        let state_index = state_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), StateId(i)))
            .collect();
        let action_index = action_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ActionId(i)))
            .collect();
        let mut atom_names = Vec::with_capacity(atoms.len());
        let mut labeling = Vec::with_capacity(atoms.len());
        let mut atom_index = HashMap::new();
        for (i, (name, set)) in atoms.into_iter().enumerate() {
            atom_index.insert(name.clone(), i);
            atom_names.push(name);
            labeling.push(set);
        }
        let epistemic = epistemic_keys.iter().map(|k| Partition::from_keys(k)).collect();
        Model {
            agent_names,
            state_names,
            action_names,
            atom_names,
            labeling,
            protocol,
            successors,
            epistemic,
            agent_index,
            state_index,
            action_index,
            atom_index,
            build_anomalies: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_agents(&self) -> usize {
        self.agent_names.len()
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agent_names
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn agent_id(&self, name: &str) -> Result<AgentId, IcgsError> {
        self.agent_index
            .get(name)
            .copied()
            .ok_or_else(|| IcgsError::UnknownAgent(name.to_string()))
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, IcgsError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| IcgsError::UnknownState(name.to_string()))
    }

    pub fn action_id(&self, name: &str) -> Result<ActionId, IcgsError> {
        self.action_index
            .get(name)
            .copied()
            .ok_or_else(|| IcgsError::UnknownAction(name.to_string()))
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agent_names[a.0]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn action_name(&self, act: ActionId) -> &str {
        &self.action_names[act.0]
    }

    /// First declared state; the default evaluation point for queries.
    pub fn first_state(&self) -> StateId {
        StateId(0)
    }

    pub fn atom_set(&self, atom: &str) -> Result<&StateSet, IcgsError> {
        self.atom_index
            .get(atom)
            .map(|i| &self.labeling[*i])
            .ok_or_else(|| IcgsError::UnknownAtom(atom.to_string()))
    }

    /// Resolves agent names to a sorted, deduplicated coalition.
    pub fn resolve_coalition(&self, names: &[String]) -> Result<Vec<AgentId>, IcgsError> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            ids.push(self.agent_id(n)?);
        }
        ids.sort();
        ids.dedup();
        Ok(ids)
    }

    pub fn protocol_actions(&self, a: AgentId, q: StateId) -> &[ActionId] {
        &self.protocol[a.0][q.0]
    }

    /// Successor under a fully specified joint action, if the transition is
    /// defined (a validated model has no gaps).
    pub fn successor(&self, q: StateId, joint: &[ActionId]) -> Option<StateId> {
        let mut index = 0usize;
        for (a, act) in joint.iter().enumerate() {
            let pos = self.protocol[a][q.0].iter().position(|x| x == act)?;
            index = index * self.protocol[a][q.0].len() + pos;
        }
        match self.successors[q.0].get(index).copied() {
            Some(t) if t != MISSING => Some(StateId(t as usize)),
            _ => None,
        }
    }

    /// Invokes `f` with each defined successor of `q`, with the listed agents
    /// pinned to the given protocol positions and all other agents free.
    pub(crate) fn for_each_successor(
        &self,
        q: StateId,
        pinned: &[(AgentId, usize)],
        mut f: impl FnMut(StateId),
    ) {
        let radices: Vec<usize> = (0..self.num_agents())
            .map(|a| self.protocol[a][q.0].len())
            .collect();
        if radices.iter().any(|r| *r == 0) {
            return;
        }
        let mut pos = vec![0usize; radices.len()];
        let mut fixed = vec![false; radices.len()];
        for (a, p) in pinned {
            pos[a.0] = *p;
            fixed[a.0] = true;
        }
        loop {
            let mut index = 0usize;
            for a in 0..radices.len() {
                index = index * radices[a] + pos[a];
            }
            let t = self.successors[q.0][index];
            if t != MISSING {
                f(StateId(t as usize));
            }
            // Odometer over the free agents, last agent fastest.
            let mut a = radices.len();
            loop {
                if a == 0 {
                    return;
                }
                a -= 1;
                if fixed[a] {
                    continue;
                }
                pos[a] += 1;
                if pos[a] < radices[a] {
                    break;
                }
                pos[a] = 0;
            }
        }
    }

    /// Every defined transition out of `q` as (joint action, target), in
    /// joint-index order.
    pub fn joint_transitions(&self, q: StateId) -> Vec<(Vec<ActionId>, StateId)> {
        let radices: Vec<usize> = (0..self.num_agents())
            .map(|a| self.protocol[a][q.0].len())
            .collect();
        let mut out = Vec::new();
        for (index, succ) in self.successors[q.0].iter().enumerate() {
            if *succ == MISSING {
                continue;
            }
            let target = StateId(*succ as usize);
            let mut rest = index;
            let mut positions = vec![0usize; radices.len()];
            for a in (0..radices.len()).rev() {
                positions[a] = rest % radices[a];
                rest /= radices[a];
            }
            let joint = positions
                .iter()
                .enumerate()
                .map(|(a, pos)| self.protocol[a][q.0][*pos])
                .collect();
            out.push((joint, target));
        }
        out
    }

    /// All one-step successors of `q` under any allowed joint action.
    pub fn successors_of(&self, q: StateId) -> Vec<StateId> {
        let mut out = Vec::new();
        self.for_each_successor(q, &[], |t| out.push(t));
        out.sort();
        out.dedup();
        out
    }

    pub fn epistemic_partition(&self, a: AgentId) -> &Partition {
        &self.epistemic[a.0]
    }

    /// The `~_a` block containing `state`; always contains `state` itself.
    pub fn epistemic_class(&self, agent: AgentId, state: StateId) -> &StateSet {
        self.epistemic[agent.0].block(state)
    }

    /// Image of `state` under the everybody-knows relation of the coalition:
    /// the union of the members' blocks. The empty coalition yields the
    /// singleton (minimal reflexive relation).
    pub fn everybody_class(&self, coalition: &[AgentId], state: StateId) -> StateSet {
        let mut out = StateSet::singleton(self.num_states(), state);
        for &a in coalition {
            out.union_with(self.epistemic_class(a, state));
        }
        out
    }

    /// The common-knowledge block of `state`: transitive closure of the
    /// everybody-knows relation. Constant across all of its members.
    pub fn common_class(&self, coalition: &[AgentId], state: StateId) -> StateSet {
        let mut out = StateSet::singleton(self.num_states(), state);
        let mut frontier = vec![state];
        while let Some(q) = frontier.pop() {
            for &a in coalition {
                for r in self.epistemic_class(a, q).iter() {
                    if !out.contains(r) {
                        out.insert(r);
                        frontier.push(r);
                    }
                }
            }
        }
        out
    }

    /// Partition of the whole state space into common-knowledge blocks of
    /// the coalition. For the empty coalition this is the identity partition.
    pub fn common_partition(&self, coalition: &[AgentId]) -> Partition {
        if coalition.is_empty() {
            return Partition::identity(self.num_states());
        }
        let mut pairs = Vec::new();
        for &a in coalition {
            for block in self.epistemic[a.0].blocks() {
                let mut it = block.iter();
                if let Some(first) = it.next() {
                    for q in it {
                        pairs.push((first, q));
                    }
                }
            }
        }
        Partition::from_pairs(self.num_states(), &pairs)
    }

    /// True when every transition leaves the agent's epistemic block, i.e.
    /// the agent always observes that a step occurred. With
    /// `ignore_self_loops`, transitions `q -> q` are exempted.
    pub fn is_lockstep_for(&self, agent: AgentId, ignore_self_loops: bool) -> bool {
        let part = &self.epistemic[agent.0];
        for q in 0..self.num_states() {
            let q = StateId(q);
            let mut ok = true;
            self.for_each_successor(q, &[], |t| {
                if part.block_index(t) == part.block_index(q) && (t != q || !ignore_self_loops) {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// Checks every model invariant and returns all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = self.build_anomalies.clone();
        let n = self.num_states();
        for a in 0..self.num_agents() {
            for q in 0..n {
                if self.protocol[a][q].is_empty() {
                    violations.push(Violation::EmptyProtocol {
                        agent: self.agent_names[a].clone(),
                        state: self.state_names[q].clone(),
                    });
                }
            }
        }
        for q in 0..n {
            let radices: Vec<usize> = (0..self.num_agents())
                .map(|a| self.protocol[a][q].len())
                .collect();
            if radices.iter().any(|r| *r == 0) {
                continue; // already reported as empty protocol
            }
            for (index, succ) in self.successors[q].iter().enumerate() {
                if *succ == MISSING {
                    violations.push(Violation::MissingTransition {
                        state: self.state_names[q].clone(),
                        joint: self.decode_joint(q, index, &radices),
                    });
                }
            }
        }
        for a in 0..self.num_agents() {
            for block in self.epistemic[a].blocks() {
                let mut it = block.iter();
                let first = it.next().expect("blocks are nonempty");
                let reference = as_sorted(&self.protocol[a][first.0]);
                for q in it {
                    if as_sorted(&self.protocol[a][q.0]) != reference {
                        violations.push(Violation::NonUniformProtocol {
                            agent: self.agent_names[a].clone(),
                            state_a: self.state_names[first.0].clone(),
                            state_b: self.state_names[q.0].clone(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    fn decode_joint(&self, q: usize, mut index: usize, radices: &[usize]) -> Vec<String> {
        let mut positions = vec![0usize; radices.len()];
        for a in (0..radices.len()).rev() {
            positions[a] = index % radices[a];
            index /= radices[a];
        }
        positions
            .iter()
            .enumerate()
            .map(|(a, pos)| self.action_names[self.protocol[a][q][*pos].0].clone())
            .collect()
    }
}

fn as_sorted(actions: &[ActionId]) -> Vec<ActionId> {
    let mut v = actions.to_vec();
    v.sort();
    v
}

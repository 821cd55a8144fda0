//! Denotational evaluation of alternation-free epistemic mu-calculus over a
//! model: knowledge operators, Kleene fixpoints, the imperfect-information
//! next-step operator, the Reach auxiliary, and the steadfast next-step
//! operator in its common-knowledge and everybody-knows variants.
//! Perfect-information strategic modalities evaluate by controllable
//! predecessors, so upper-approximation formulas run through the same
//! entry point.

use crate::icgs::{
    all_successors_in, pin_for, restrict, slots_for, AgentId, ChoiceSlots, IcgsError, Model,
    Partition, SlotMode, StateId, StateSet, UniformAssignment,
};
use crate::logic::{
    check_alternation_free, check_z_positive, Formula, Goal, Neighborhood, StrategyKind,
};
use std::collections::HashMap;
use thiserror::Error;

/// Assignment of denotations to free fixpoint variables.
pub type Valuation = HashMap<String, StateSet>;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Model(#[from] IcgsError),
    #[error("unbound fixpoint variable `{0}`")]
    UnboundVariable(String),
    #[error("formula is not alternation-free")]
    NotAlternationFree,
    #[error("formula is not positive in its fixpoint variables: {0}")]
    NotPositive(String),
    #[error("imperfect-information strategic modalities have no denotational semantics; translate them first")]
    IrStrategic,
    #[error("search budget exceeded: {required} assignments needed, budget {budget}")]
    SearchBudgetExceeded { required: u128, budget: u128 },
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Ceiling on uniform assignments tried per neighborhood in the
    /// steadfast and next-step operators. Exceeding it aborts the query.
    pub assignment_budget: u128,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { assignment_budget: 1 << 20 }
    }
}

/// Counters describing one evaluation run.
#[derive(Debug, Clone, Default)]
pub struct EvalStats {
    /// Kleene rounds of every fixpoint computation, in completion order;
    /// the outermost fixpoint of the formula finishes last.
    pub fixpoint_rounds: Vec<u32>,
    pub steadfast_checks: u64,
    pub steadfast_memo_hits: u64,
}

impl EvalStats {
    /// Rounds of the outermost fixpoint, the number reported by experiment
    /// tables; zero when the formula has no fixpoint.
    pub fn outer_rounds(&self) -> u32 {
        self.fixpoint_rounds.last().copied().unwrap_or(0)
    }
}

/// Evaluates a formula to the set of states satisfying it.
///
/// The formula must be alternation-free and positive in its bound
/// variables; free variables are looked up in the valuation.
pub fn eval(
    model: &Model,
    formula: &Formula,
    valuation: &Valuation,
    opts: &EvalOptions,
) -> Result<(StateSet, EvalStats), EvalError> {
    check_z_positive(formula).map_err(EvalError::NotPositive)?;
    if !check_alternation_free(formula) {
        return Err(EvalError::NotAlternationFree);
    }
    let mut cx = Evaluator {
        model,
        opts,
        stats: EvalStats::default(),
        common_parts: HashMap::new(),
        steadfast_memo: HashMap::new(),
    };
    let mut env: Vec<(String, StateSet)> = valuation
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    env.sort_by(|a, b| a.0.cmp(&b.0));
    let set = cx.eval(formula, &mut env)?;
    Ok((set, cx.stats))
}

/// Evaluates a closed formula (no free variables).
pub fn eval_closed(
    model: &Model,
    formula: &Formula,
    opts: &EvalOptions,
) -> Result<(StateSet, EvalStats), EvalError> {
    eval(model, formula, &Valuation::new(), opts)
}

/// The set of states where some uniform assignment on the everybody-knows
/// neighborhood sends every one-step successor of the whole neighborhood
/// into `target`.
pub fn diamond(
    model: &Model,
    coalition: &[AgentId],
    target: &StateSet,
    opts: &EvalOptions,
) -> Result<StateSet, EvalError> {
    let mut cx = Evaluator {
        model,
        opts,
        stats: EvalStats::default(),
        common_parts: HashMap::new(),
        steadfast_memo: HashMap::new(),
    };
    cx.diamond_op(coalition, target)
}

/// The steadfast next-step operator over the chosen neighborhood.
pub fn steadfast(
    model: &Model,
    coalition: &[AgentId],
    target: &StateSet,
    neighborhood: Neighborhood,
    opts: &EvalOptions,
) -> Result<StateSet, EvalError> {
    let mut cx = Evaluator {
        model,
        opts,
        stats: EvalStats::default(),
        common_parts: HashMap::new(),
        steadfast_memo: HashMap::new(),
    };
    cx.steadfast_op(coalition, neighborhood, target)
}

/// The subset of `region` from which every path under the restricted
/// successor relation reaches `target`, with all strictly earlier states
/// remaining inside `region`. States already in `region ∩ target` qualify
/// immediately.
pub fn reach(
    model: &Model,
    assignment: &UniformAssignment,
    region: &StateSet,
    target: &StateSet,
) -> StateSet {
    let succ = restrict(model, assignment);
    let states: Vec<StateId> = region.iter().collect();
    let local: Vec<Vec<StateId>> = states.iter().map(|q| succ[q.0].clone()).collect();
    reach_on(&states, &local, region, target, model.num_states())
}

/// Backward least-fixpoint computation of Reach over precomputed restricted
/// successors (`succ[i]` lists the successors of `states[i]`).
fn reach_on(
    states: &[StateId],
    succ: &[Vec<StateId>],
    region: &StateSet,
    target: &StateSet,
    universe: usize,
) -> StateSet {
    let mut result = StateSet::empty(universe);
    for &q in states {
        if target.contains(q) {
            result.insert(q);
        }
    }
    loop {
        let mut changed = false;
        for (i, &q) in states.iter().enumerate() {
            if result.contains(q) {
                continue;
            }
            debug_assert!(region.contains(q));
            let ok = !succ[i].is_empty()
                && succ[i]
                    .iter()
                    .all(|t| target.contains(*t) || result.contains(*t));
            if ok {
                result.insert(q);
                changed = true;
            }
        }
        if !changed {
            return result;
        }
    }
}

struct Evaluator<'m, 'o> {
    model: &'m Model,
    opts: &'o EvalOptions,
    stats: EvalStats,
    common_parts: HashMap<Vec<AgentId>, Partition>,
    steadfast_memo: HashMap<(Vec<AgentId>, Neighborhood, StateSet, StateSet), bool>,
}

impl<'m, 'o> Evaluator<'m, 'o> {
    fn universe(&self) -> usize {
        self.model.num_states()
    }

    fn eval(
        &mut self,
        f: &Formula,
        env: &mut Vec<(String, StateSet)>,
    ) -> Result<StateSet, EvalError> {
        use Formula::*;
        Ok(match f {
            True => StateSet::full(self.universe()),
            False => StateSet::empty(self.universe()),
            Atom(p) => self.model.atom_set(p)?.clone(),
            Var(z) => env
                .iter()
                .rev()
                .find(|(name, _)| name == z)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| EvalError::UnboundVariable(z.clone()))?,
            Not(g) => self.eval(g, env)?.complement(),
            And(a, b) => self.eval(a, env)?.intersection(&self.eval(b, env)?),
            Or(a, b) => self.eval(a, env)?.union(&self.eval(b, env)?),
            Implies(a, b) => self.eval(a, env)?.complement().union(&self.eval(b, env)?),
            Know(agent, g) => {
                let a = self.model.agent_id(agent)?;
                let s = self.eval(g, env)?;
                self.knows(a, &s)
            }
            Everybody(names, g) => {
                let coalition = self.model.resolve_coalition(names)?;
                let s = self.eval(g, env)?;
                if coalition.is_empty() {
                    s
                } else {
                    let mut out = StateSet::full(self.universe());
                    for a in coalition {
                        out.intersect_with(&self.knows(a, &s));
                    }
                    out
                }
            }
            Common(names, g) => {
                let coalition = self.model.resolve_coalition(names)?;
                let s = self.eval(g, env)?;
                let part = self.common_partition(&coalition);
                let mut out = StateSet::empty(self.universe());
                for block in part.blocks() {
                    if block.is_subset(&s) {
                        out.union_with(block);
                    }
                }
                out
            }
            Mu(z, body) => self.fixpoint(z, body, env, StateSet::empty(self.universe()))?,
            Nu(z, body) => self.fixpoint(z, body, env, StateSet::full(self.universe()))?,
            Diamond(names, g) => {
                let coalition = self.model.resolve_coalition(names)?;
                let target = self.eval(g, env)?;
                self.diamond_op(&coalition, &target)?
            }
            Steadfast(names, nb, g) => {
                let coalition = self.model.resolve_coalition(names)?;
                let target = self.eval(g, env)?;
                self.steadfast_op(&coalition, *nb, &target)?
            }
            Strategic(names, StrategyKind::PerfectInfo, goal) => {
                let coalition = self.model.resolve_coalition(names)?;
                match goal {
                    Goal::Next(g) => {
                        let target = self.eval(g, env)?;
                        self.pre_perfect(&coalition, &target)
                    }
                    Goal::Always(g) => {
                        let body = self.eval(g, env)?;
                        let mut cur = StateSet::full(self.universe());
                        let mut rounds = 0u32;
                        loop {
                            rounds += 1;
                            let next = body.intersection(&self.pre_perfect(&coalition, &cur));
                            if next == cur {
                                break;
                            }
                            cur = next;
                        }
                        self.stats.fixpoint_rounds.push(rounds);
                        cur
                    }
                    Goal::Until(lhs, rhs) => {
                        let hold = self.eval(lhs, env)?;
                        let goal_set = self.eval(rhs, env)?;
                        self.until_perfect(&coalition, &hold, &goal_set)
                    }
                    Goal::Eventually(g) => {
                        let goal_set = self.eval(g, env)?;
                        let hold = StateSet::full(self.universe());
                        self.until_perfect(&coalition, &hold, &goal_set)
                    }
                }
            }
            Strategic(_, StrategyKind::ImperfectInfo, _) => return Err(EvalError::IrStrategic),
        })
    }

    fn fixpoint(
        &mut self,
        z: &str,
        body: &Formula,
        env: &mut Vec<(String, StateSet)>,
        init: StateSet,
    ) -> Result<StateSet, EvalError> {
        env.push((z.to_string(), init));
        let mut rounds = 0u32;
        let result = loop {
            rounds += 1;
            let next = self.eval(body, env)?;
            let cur = &env.last().expect("binder frame").1;
            if next == *cur {
                break next;
            }
            env.last_mut().expect("binder frame").1 = next;
        };
        env.pop();
        self.stats.fixpoint_rounds.push(rounds);
        Ok(result)
    }

    fn knows(&self, a: AgentId, s: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.universe());
        for block in self.model.epistemic_partition(a).blocks() {
            if block.is_subset(s) {
                out.union_with(block);
            }
        }
        out
    }

    fn common_partition(&mut self, coalition: &[AgentId]) -> Partition {
        if let Some(p) = self.common_parts.get(coalition) {
            return p.clone();
        }
        let p = self.model.common_partition(coalition);
        self.common_parts.insert(coalition.to_vec(), p.clone());
        p
    }

    /// ⟨A⟩: some uniform assignment on the everybody-knows image of q sends
    /// all one-step successors of the image into the target.
    fn diamond_op(
        &mut self,
        coalition: &[AgentId],
        target: &StateSet,
    ) -> Result<StateSet, EvalError> {
        let n = self.universe();
        let mut out = StateSet::empty(n);
        if coalition.is_empty() {
            for q in 0..n {
                let q = StateId(q);
                if self.all_successors_in(q, &[], target) {
                    out.insert(q);
                }
            }
            return Ok(out);
        }
        let mut image_cache: HashMap<StateSet, bool> = HashMap::new();
        for q in 0..n {
            let q = StateId(q);
            let image = self.model.everybody_class(coalition, q);
            let ok = match image_cache.get(&image) {
                Some(v) => *v,
                None => {
                    let v = self.exists_one_step_cover(coalition, &image, target)?;
                    image_cache.insert(image.clone(), v);
                    v
                }
            };
            if ok {
                out.insert(q);
            }
        }
        Ok(out)
    }

    fn exists_one_step_cover(
        &mut self,
        coalition: &[AgentId],
        image: &StateSet,
        target: &StateSet,
    ) -> Result<bool, EvalError> {
        let slots = slots_for(self.model, coalition, image, SlotMode::Intersecting)?;
        self.check_budget(&slots)?;
        let states: Vec<StateId> = image.iter().collect();
        let model = self.model;
        Ok(slots.any_combination(|pos| {
            states.iter().all(|&q| {
                let pinned = pin_for(model, &slots, pos, q);
                all_successors_in(model, q, &pinned, target)
            })
        }))
    }

    /// ⟨A⟩• over the chosen neighborhood.
    fn steadfast_op(
        &mut self,
        coalition: &[AgentId],
        neighborhood: Neighborhood,
        target: &StateSet,
    ) -> Result<StateSet, EvalError> {
        let n = self.universe();
        let mut out = StateSet::empty(n);
        match neighborhood {
            Neighborhood::Common => {
                let part = self.common_partition(coalition);
                for block in part.blocks() {
                    if self.steadfast_region(coalition, neighborhood, block, block, target)? {
                        out.union_with(block);
                    }
                }
            }
            Neighborhood::Everybody => {
                for q in 0..n {
                    let q = StateId(q);
                    let image = self.model.everybody_class(coalition, q);
                    // Assignments live on the block closure of the image
                    // (the union of common-knowledge blocks meeting it);
                    // Reach is still computed over the image itself.
                    let part = self.common_partition(coalition);
                    let mut closure = StateSet::empty(n);
                    for r in image.iter() {
                        closure.union_with(part.block(r));
                    }
                    if self.steadfast_region(coalition, neighborhood, &image, &closure, target)? {
                        out.insert(q);
                    }
                }
            }
        }
        Ok(out)
    }

    fn steadfast_region(
        &mut self,
        coalition: &[AgentId],
        neighborhood: Neighborhood,
        region: &StateSet,
        domain: &StateSet,
        target: &StateSet,
    ) -> Result<bool, EvalError> {
        let key = (
            coalition.to_vec(),
            neighborhood,
            region.clone(),
            target.clone(),
        );
        if let Some(v) = self.steadfast_memo.get(&key) {
            self.stats.steadfast_memo_hits += 1;
            return Ok(*v);
        }
        self.stats.steadfast_checks += 1;
        let ok = if region.is_subset(target) {
            // Reach includes region ∩ target immediately, so any assignment
            // witnesses the condition.
            true
        } else {
            let slots = slots_for(self.model, coalition, domain, SlotMode::WithinDomain)?;
            self.check_budget(&slots)?;
            let states: Vec<StateId> = region.iter().collect();
            let model = self.model;
            let universe = self.universe();
            slots.any_combination(|pos| {
                let succ: Vec<Vec<StateId>> = states
                    .iter()
                    .map(|&q| {
                        let pinned = pin_for(model, &slots, pos, q);
                        let mut s = Vec::new();
                        model.for_each_successor(q, &pinned, |t| s.push(t));
                        s.sort();
                        s.dedup();
                        s
                    })
                    .collect();
                let reached = reach_on(&states, &succ, region, target, universe);
                states.iter().all(|q| reached.contains(*q))
            })
        };
        self.steadfast_memo.insert(key, ok);
        Ok(ok)
    }

    fn check_budget(&self, slots: &ChoiceSlots) -> Result<(), EvalError> {
        let required = slots.count();
        if required > self.opts.assignment_budget {
            return Err(EvalError::SearchBudgetExceeded {
                required,
                budget: self.opts.assignment_budget,
            });
        }
        Ok(())
    }

    fn all_successors_in(&self, q: StateId, pinned: &[(AgentId, usize)], set: &StateSet) -> bool {
        all_successors_in(self.model, q, pinned, set)
    }

    /// Perfect-information controllable predecessor: some joint coalition
    /// action at q forces every completion into the target.
    fn pre_perfect(&mut self, coalition: &[AgentId], target: &StateSet) -> StateSet {
        let n = self.universe();
        let mut out = StateSet::empty(n);
        for q in 0..n {
            let q = StateId(q);
            if self.exists_joint_cover(coalition, q, target) {
                out.insert(q);
            }
        }
        out
    }

    fn exists_joint_cover(&self, coalition: &[AgentId], q: StateId, target: &StateSet) -> bool {
        // Odometer over the coalition's per-state action choices.
        let radices: Vec<usize> = coalition
            .iter()
            .map(|a| self.model.protocol_actions(*a, q).len())
            .collect();
        if radices.iter().any(|r| *r == 0) {
            return false;
        }
        let mut pos = vec![0usize; coalition.len()];
        loop {
            let pinned: Vec<(AgentId, usize)> = coalition
                .iter()
                .zip(&pos)
                .map(|(a, p)| (*a, *p))
                .collect();
            if self.all_successors_in(q, &pinned, target) {
                return true;
            }
            let mut i = coalition.len();
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                pos[i] += 1;
                if pos[i] < radices[i] {
                    break;
                }
                pos[i] = 0;
            }
        }
    }

    fn until_perfect(
        &mut self,
        coalition: &[AgentId],
        hold: &StateSet,
        goal: &StateSet,
    ) -> StateSet {
        let mut cur = StateSet::empty(self.universe());
        let mut rounds = 0u32;
        loop {
            rounds += 1;
            let mut next = goal.clone();
            next.union_with(&hold.intersection(&self.pre_perfect(coalition, &cur)));
            if next == cur {
                break;
            }
            cur = next;
        }
        self.stats.fixpoint_rounds.push(rounds);
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{m0, m1, m2, m3, m_vote};
    use crate::logic::{self, Formula};

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    fn set_of(model: &Model, names: &[&str]) -> StateSet {
        StateSet::from_states(
            model.num_states(),
            names.iter().map(|n| model.state_id(n).unwrap()),
        )
    }

    #[test]
    fn naive_reachability_holds_at_q0_on_m0() {
        let m = m0();
        let f = logic::tr1(&["1"], &Formula::atom("p"));
        let (set, stats) = eval_closed(&m, &f, &opts()).unwrap();
        assert!(set.contains(m.state_id("q0").unwrap()));
        assert!(stats.outer_rounds() <= m.num_states() as u32 + 1);
    }

    #[test]
    fn diamond_on_m0_is_empty_for_q0_target() {
        let m = m0();
        let coalition = m.resolve_coalition(&["1".into()]).unwrap();
        let target = set_of(&m, &["q0"]);
        let got = diamond(&m, &coalition, &target, &opts()).unwrap();
        assert!(got.is_empty());
        // Full target: any assignment works everywhere.
        let full = StateSet::full(m.num_states());
        assert_eq!(diamond(&m, &coalition, &full, &opts()).unwrap(), full);
    }

    #[test]
    fn naive_fixpoint_on_voting_returns_all_states() {
        let m = m_vote();
        // mu Z . ((!pun -> vote1) | <c> Z)
        let body = Formula::implies(
            Formula::not(Formula::atom("pun")),
            Formula::atom("vote1"),
        );
        let f = logic::tr1(&["c"], &body);
        let (set, _) = eval_closed(&m, &f, &opts()).unwrap();
        assert_eq!(set, StateSet::full(m.num_states()));
    }

    #[test]
    fn reach_examples() {
        let m = m2();
        let a = m.agent_id("1").unwrap();
        let act = m.action_id("a").unwrap();
        let mut asg = UniformAssignment::empty(vec![a]);
        asg.set(a, m.state_id("q0").unwrap(), act);
        asg.set(a, m.state_id("q1").unwrap(), act);
        let region = set_of(&m, &["q0", "q1"]);
        let target = set_of(&m, &["q2"]);
        assert_eq!(reach(&m, &asg, &region, &target), region);

        let m = m3();
        let a = m.agent_id("1").unwrap();
        let act = m.action_id("a").unwrap();
        let mut asg = UniformAssignment::empty(vec![a]);
        asg.set(a, m.state_id("q0").unwrap(), act);
        asg.set(a, m.state_id("q1").unwrap(), act);
        let region = set_of(&m, &["q0", "q1"]);
        let target = set_of(&m, &["q2"]);
        assert_eq!(reach(&m, &asg, &region, &target), set_of(&m, &["q0"]));

        // Empty region.
        let empty = StateSet::empty(m.num_states());
        assert_eq!(reach(&m, &asg, &empty, &target), empty);
    }

    #[test]
    fn steadfast_examples() {
        let m = m2();
        let coalition = m.resolve_coalition(&["1".into()]).unwrap();
        let target = set_of(&m, &["q2"]);
        let got = steadfast(&m, &coalition, &target, Neighborhood::Common, &opts()).unwrap();
        // The {q0,q1} block reaches the target; the singleton {q2} sits in
        // the target already.
        assert_eq!(got, set_of(&m, &["q0", "q1", "q2"]));

        let m = m3();
        let coalition = m.resolve_coalition(&["1".into()]).unwrap();
        let target = set_of(&m, &["q2"]);
        let got = steadfast(&m, &coalition, &target, Neighborhood::Common, &opts()).unwrap();
        // q1 loops forever, so its whole block drops out.
        assert_eq!(got, set_of(&m, &["q2"]));

        // Full target covers every block.
        let full = StateSet::full(m.num_states());
        assert_eq!(
            steadfast(&m, &coalition, &full, Neighborhood::Common, &opts()).unwrap(),
            full
        );
    }

    #[test]
    fn tr2_vs_tr3_on_m2_and_m3() {
        let p = Formula::atom("p");
        let m = m2();
        let q0 = m.state_id("q0").unwrap();
        let (tr2_set, _) = eval_closed(&m, &logic::tr2(&["1"], &p), &opts()).unwrap();
        assert!(!tr2_set.contains(q0));
        let (tr3_set, _) = eval_closed(&m, &logic::tr3(&["1"], &p), &opts()).unwrap();
        assert!(tr3_set.contains(q0));
        assert!(tr2_set.is_subset(&tr3_set));

        let m = m3();
        let q0 = m.state_id("q0").unwrap();
        let (tr3_set, _) = eval_closed(&m, &logic::tr3(&["1"], &p), &opts()).unwrap();
        assert!(!tr3_set.contains(q0));
    }

    #[test]
    fn tr2_holds_at_q0_on_m1_for_the_pair_coalition() {
        let m = m1();
        let f = logic::tr2(&["1", "2"], &Formula::atom("p"));
        let (set, _) = eval_closed(&m, &f, &opts()).unwrap();
        assert!(set.contains(m.state_id("q0").unwrap()));
    }

    #[test]
    fn steadfast_common_results_are_block_constant() {
        let m = m2();
        let coalition = m.resolve_coalition(&["1".into()]).unwrap();
        for target in [set_of(&m, &["q2"]), set_of(&m, &["q0"]), set_of(&m, &["q1", "q2"])] {
            let got = steadfast(&m, &coalition, &target, Neighborhood::Common, &opts()).unwrap();
            for q in got.iter() {
                assert!(m.common_class(&coalition, q).is_subset(&got));
            }
        }
    }

    #[test]
    fn diamond_and_steadfast_are_monotone_in_target() {
        let m = m1();
        let coalition = m.resolve_coalition(&["1".into(), "2".into()]).unwrap();
        let small = set_of(&m, &["qp"]);
        let big = set_of(&m, &["qp", "q1", "q2"]);
        let d_small = diamond(&m, &coalition, &small, &opts()).unwrap();
        let d_big = diamond(&m, &coalition, &big, &opts()).unwrap();
        assert!(d_small.is_subset(&d_big));
        let s_small = steadfast(&m, &coalition, &small, Neighborhood::Common, &opts()).unwrap();
        let s_big = steadfast(&m, &coalition, &big, Neighborhood::Common, &opts()).unwrap();
        assert!(s_small.is_subset(&s_big));
    }

    #[test]
    fn valuation_binds_free_variables() {
        let m = m0();
        let mut valuation = Valuation::new();
        valuation.insert("Z".to_string(), set_of(&m, &["q1"]));
        let (set, _) = eval(&m, &Formula::var("Z"), &valuation, &opts()).unwrap();
        assert_eq!(set, set_of(&m, &["q1"]));
        assert!(matches!(
            eval(&m, &Formula::var("Y"), &valuation, &opts()),
            Err(EvalError::UnboundVariable(_))
        ));
    }

    #[test]
    fn singleton_everybody_equals_knowledge() {
        let m = m2();
        let f1 = Formula::everybody(&["1"], Formula::atom("p"));
        let f2 = Formula::know("1", Formula::atom("p"));
        let (a, _) = eval_closed(&m, &f1, &opts()).unwrap();
        let (b, _) = eval_closed(&m, &f2, &opts()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_coalition_diamond_is_universal_next() {
        let m = m_vote();
        let target = set_of(&m, &["q3", "q4"]);
        let got = diamond(&m, &[], &target, &opts()).unwrap();
        // q1 has successors q3 and q4 only.
        assert!(got.contains(m.state_id("q1").unwrap()));
        assert!(!got.contains(m.state_id("q0").unwrap()));
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let m = m1();
        let coalition = m.resolve_coalition(&["1".into(), "2".into()]).unwrap();
        let tight = EvalOptions { assignment_budget: 1 };
        let err = steadfast(&m, &coalition, &set_of(&m, &["qp"]), Neighborhood::Common, &tight);
        assert!(matches!(err, Err(EvalError::SearchBudgetExceeded { .. })));
    }

    #[test]
    fn perfect_info_modalities_evaluate_inside_formulas() {
        let m = m1();
        // E {1,2} <<1,2>>_IR true U p holds at q0 under perfect information.
        let f = Formula::everybody(
            &["1", "2"],
            Formula::until(
                &["1", "2"],
                crate::logic::StrategyKind::PerfectInfo,
                Formula::True,
                Formula::atom("p"),
            ),
        );
        let (set, _) = eval_closed(&m, &f, &opts()).unwrap();
        assert!(set.contains(m.state_id("q0").unwrap()));
        assert!(!set.contains(m.state_id("sink").unwrap()));
    }
}

//! Deterministic generators for every benchmark model: the four
//! counterexample structures, the voting/coercion scenario (fixed and
//! scalable), bridge endplays (standard and absent-minded declarer), and a
//! seeded random-model generator for property testing.

mod bridge;
mod random;
mod voting;

pub use bridge::{deal_bridge, gen_bridge, gen_bridge_absentminded, BridgeInstance, BridgeModel};
pub use random::{gen_random, gen_random_lockstep, random_flat_formula, RandomModelParams};
pub use voting::{gen_voting, voting_phi1, voting_phi2, VotingInstance};

use crate::icgs::{Model, ModelBuilder};

/// Two states in one epistemic block, both self-looping, `p` only at `q0`.
/// The naive reachability fixpoint holds at `q0` although no uniform
/// strategy wins from the whole block.
pub fn m0() -> Model {
    let mut b = ModelBuilder::new();
    b.agent("1")
        .action("a")
        .state("q0", &["p"])
        .state("q1", &[])
        .protocol("1", "q0", &["a"])
        .protocol("1", "q1", &["a"])
        .transition("q0", &["a"], "q0")
        .transition("q1", &["a"], "q1")
        .epistemic_pair("1", "q0", "q1");
    b.build().expect("m0 is well-formed")
}

/// Ten states: an agent-1 clique on the top row feeding a middle row
/// `q1..q4` where coordinated two-agent choices either hit the `p` state or
/// fall to the sink. The epistemic reachability fixpoint holds at `q0`, but
/// the coalition has no uniform strategy that wins from the whole top row.
pub fn m1() -> Model {
    let mut b = ModelBuilder::new();
    b.agents(["1", "2"]);
    b.actions(["a", "b", "x", "y"]);
    for (name, labels) in [
        ("q0", &[][..]),
        ("t1", &[]),
        ("t2", &[]),
        ("t3", &[]),
        ("q1", &[]),
        ("q2", &[]),
        ("q3", &[]),
        ("q4", &[]),
        ("qp", &["p"]),
        ("sink", &[]),
    ] {
        b.state(name, labels);
    }
    for q in ["q0", "t1", "t2", "t3", "qp", "sink"] {
        b.protocol("1", q, &["a"]);
        b.protocol("2", q, &["x"]);
    }
    for q in ["q1", "q2", "q3", "q4"] {
        b.protocol("1", q, &["a", "b"]);
        b.protocol("2", q, &["x", "y"]);
    }
    b.transition("q0", &["a", "x"], "q1")
        .transition("t2", &["a", "x"], "q2")
        .transition("t3", &["a", "x"], "q3")
        .transition("t1", &["a", "x"], "q4")
        .transition("qp", &["a", "x"], "qp")
        .transition("sink", &["a", "x"], "sink");
    let wins: [(&str, &[(&str, &str)]); 4] = [
        ("q1", &[("a", "x")]),
        ("q2", &[("a", "x"), ("b", "y")]),
        ("q3", &[("a", "x"), ("b", "y")]),
        ("q4", &[("b", "y")]),
    ];
    for (q, winning) in wins {
        for a1 in ["a", "b"] {
            for a2 in ["x", "y"] {
                let target = if winning.contains(&(a1, a2)) { "qp" } else { "sink" };
                b.transition(q, &[a1, a2], target);
            }
        }
    }
    b.epistemic_block("1", &["q0", "t1", "t2", "t3"])
        .epistemic_pair("1", "q1", "q2")
        .epistemic_pair("1", "q3", "q4")
        .epistemic_pair("2", "q2", "q3");
    b.build().expect("m1 is well-formed")
}

/// Three states, single agent, single action: `q1 -> q0 -> q2(p)` with
/// `q0 ~ q1`. The sole strategy reaches `p` from the whole block, but in a
/// different number of steps per state, which defeats the plain next-step
/// operator and motivates the steadfast one.
pub fn m2() -> Model {
    let mut b = ModelBuilder::new();
    b.agent("1")
        .action("a")
        .state("q0", &[])
        .state("q1", &[])
        .state("q2", &["p"])
        .protocol("1", "q0", &["a"])
        .protocol("1", "q1", &["a"])
        .protocol("1", "q2", &["a"])
        .transition("q0", &["a"], "q2")
        .transition("q1", &["a"], "q0")
        .transition("q2", &["a"], "q2")
        .epistemic_pair("1", "q0", "q1");
    b.build().expect("m2 is well-formed")
}

/// Like [`m2`] but `q1` is a `p`-labeled self-loop: ability holds exactly
/// (the `q1` path satisfies `p` immediately) while the steadfast fixpoint
/// stays false at `q0`, showing the lower bound is not tight.
pub fn m3() -> Model {
    let mut b = ModelBuilder::new();
    b.agent("1")
        .action("a")
        .state("q0", &[])
        .state("q1", &["p"])
        .state("q2", &["p"])
        .protocol("1", "q0", &["a"])
        .protocol("1", "q1", &["a"])
        .protocol("1", "q2", &["a"])
        .transition("q0", &["a"], "q2")
        .transition("q1", &["a"], "q1")
        .transition("q2", &["a"], "q2")
        .epistemic_pair("1", "q0", "q1");
    b.build().expect("m3 is well-formed")
}

/// The eleven-state voting/coercion scenario with two candidates: the voter
/// casts a vote, may hand in a proof, and the coercer decides on
/// punishment. Dotted coercer uncertainty links states differing only in
/// the unseen vote.
pub fn m_vote() -> Model {
    let mut b = ModelBuilder::new();
    b.agents(["v", "c"]);
    b.actions(["vote1", "vote2", "give", "ng", "pun", "np", "idle"]);
    let labels: [(&str, &[&str]); 11] = [
        ("q0", &[]),
        ("q1", &["vote1"]),
        ("q2", &["vote2"]),
        ("q3", &["vote1"]),
        ("q4", &["vote1"]),
        ("q5", &["vote2"]),
        ("q6", &["vote2"]),
        ("q7", &["vote1", "pun"]),
        ("q8", &["vote1", "pun"]),
        ("q9", &["vote2", "pun"]),
        ("q10", &["vote2", "pun"]),
    ];
    for (name, l) in labels {
        b.state(name, l);
    }
    b.protocol("v", "q0", &["vote1", "vote2"]);
    b.protocol("c", "q0", &["idle"]);
    for q in ["q1", "q2"] {
        b.protocol("v", q, &["give", "ng"]);
        b.protocol("c", q, &["idle"]);
    }
    for q in ["q3", "q4", "q5", "q6"] {
        b.protocol("v", q, &["idle"]);
        b.protocol("c", q, &["pun", "np"]);
    }
    for q in ["q7", "q8", "q9", "q10"] {
        b.protocol("v", q, &["idle"]);
        b.protocol("c", q, &["idle"]);
    }
    b.transition("q0", &["vote1", "idle"], "q1")
        .transition("q0", &["vote2", "idle"], "q2")
        .transition("q1", &["give", "idle"], "q3")
        .transition("q1", &["ng", "idle"], "q4")
        .transition("q2", &["give", "idle"], "q6")
        .transition("q2", &["ng", "idle"], "q5");
    for (q, pun_target) in [("q3", "q7"), ("q4", "q8"), ("q5", "q9"), ("q6", "q10")] {
        b.transition(q, &["idle", "np"], q)
            .transition(q, &["idle", "pun"], pun_target);
    }
    for q in ["q7", "q8", "q9", "q10"] {
        b.transition(q, &["idle", "idle"], q);
    }
    b.epistemic_pair("c", "q1", "q2")
        .epistemic_pair("c", "q4", "q5")
        .epistemic_pair("c", "q8", "q9");
    b.build().expect("voting figure model is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icgs::{assignment_count, StateSet, UniformAssignment};

    #[test]
    fn figure_models_validate() {
        for m in [m0(), m1(), m2(), m3(), m_vote()] {
            assert!(m.validate().is_ok(), "{}", m.validate());
        }
    }

    #[test]
    fn m0_shape() {
        let m = m0();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.num_agents(), 1);
        assert_eq!(m.atom_set("p").unwrap().len(), 1);
        let a = m.agent_id("1").unwrap();
        let q0 = m.state_id("q0").unwrap();
        let class = m.epistemic_class(a, q0);
        assert_eq!(class.len(), 2);
    }

    #[test]
    fn m1_shape_and_classes() {
        let m = m1();
        assert_eq!(m.num_states(), 10);
        let a1 = m.agent_id("1").unwrap();
        let q1 = m.state_id("q1").unwrap();
        let q2 = m.state_id("q2").unwrap();
        let class = m.epistemic_class(a1, q1);
        assert_eq!(class.len(), 2);
        assert!(class.contains(q2));

        let coalition = m.resolve_coalition(&["1".into(), "2".into()]).unwrap();
        let everybody = m.everybody_class(&coalition, q2);
        let expected = StateSet::from_states(
            10,
            ["q1", "q2", "q3"].iter().map(|s| m.state_id(s).unwrap()),
        );
        assert_eq!(everybody, expected);

        let common = m.common_class(&coalition, q1);
        let expected = StateSet::from_states(
            10,
            ["q1", "q2", "q3", "q4"].iter().map(|s| m.state_id(s).unwrap()),
        );
        assert_eq!(common, expected);
        // Everybody image is contained in the common block everywhere.
        for q in 0..10 {
            let q = crate::icgs::StateId(q);
            assert!(m
                .everybody_class(&coalition, q)
                .is_subset(&m.common_class(&coalition, q)));
        }
    }

    #[test]
    fn m1_assignment_enumeration_count() {
        let m = m1();
        let coalition = m.resolve_coalition(&["1".into(), "2".into()]).unwrap();
        let domain = StateSet::from_states(
            10,
            ["q1", "q2", "q3", "q4"].iter().map(|s| m.state_id(s).unwrap()),
        );
        assert_eq!(assignment_count(&m, &coalition, &domain).unwrap(), 32);
    }

    #[test]
    fn m1_restrict_example() {
        let m = m1();
        let a1 = m.agent_id("1").unwrap();
        let a2 = m.agent_id("2").unwrap();
        let q2 = m.state_id("q2").unwrap();
        let mut asg = UniformAssignment::empty(vec![a1, a2]);
        asg.set(a1, q2, m.action_id("a").unwrap());
        asg.set(a2, q2, m.action_id("x").unwrap());
        let succ = crate::icgs::restrict(&m, &asg);
        assert_eq!(succ[q2.0], vec![m.state_id("qp").unwrap()]);
    }

    #[test]
    fn m2_restrict_example() {
        let m = m2();
        let a = m.agent_id("1").unwrap();
        let act = m.action_id("a").unwrap();
        let mut asg = UniformAssignment::empty(vec![a]);
        for q in 0..3 {
            asg.set(a, crate::icgs::StateId(q), act);
        }
        asg.check(&m).unwrap();
        let succ = crate::icgs::restrict(&m, &asg);
        let q0 = m.state_id("q0").unwrap();
        assert_eq!(succ[q0.0], vec![m.state_id("q2").unwrap()]);
    }

    #[test]
    fn m_vote_shape() {
        let m = m_vote();
        assert_eq!(m.num_states(), 11);
        assert_eq!(m.num_agents(), 2);
        let c = m.agent_id("c").unwrap();
        assert_eq!(m.epistemic_class(c, m.state_id("q4").unwrap()).len(), 2);
        let v = m.agent_id("v").unwrap();
        assert_eq!(m.epistemic_class(v, m.state_id("q4").unwrap()).len(), 1);
    }
}

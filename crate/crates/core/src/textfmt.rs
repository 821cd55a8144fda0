//! Plain-text model format: hand-writable, diff-friendly, round-trippable.
//!
//! ```text
//! # lines starting with # are comments; blank lines are ignored
//! agents: v c
//! actions: vote1 vote2 give ng pun np idle
//! states:
//! q0
//! q1 label: vote1
//! protocol:
//! v q0: vote1 vote2
//! c q0: idle
//! transitions:
//! q0 (vote1 idle) -> q1
//! epistemic:
//! c: {q1 q2} {q4 q5}
//! ```
//!
//! `agents:`/`actions:` lists may continue over following lines. States are
//! one per line with an optional `label:` suffix. Epistemic blocks close to
//! equivalences; unlisted states are singletons.

use crate::icgs::{IcgsError, Model, ModelBuilder};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Build(#[from] IcgsError),
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Agents,
    States,
    Actions,
    Protocol,
    Transitions,
    Epistemic,
}

fn syntax(line: usize, message: impl Into<String>) -> TextError {
    TextError::Syntax { line, message: message.into() }
}

/// Parses the text format into a model. Structural invariants are not
/// checked here; run [`Model::validate`] on the result.
pub fn parse_model(text: &str) -> Result<Model, TextError> {
    let mut b = ModelBuilder::new();
    let mut section = Section::None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (line, switched) = match line.split_once(':') {
            Some((head, rest)) => match head.trim() {
                "agents" => {
                    section = Section::Agents;
                    (rest.trim(), true)
                }
                "states" => {
                    section = Section::States;
                    (rest.trim(), true)
                }
                "actions" => {
                    section = Section::Actions;
                    (rest.trim(), true)
                }
                "protocol" => {
                    section = Section::Protocol;
                    (rest.trim(), true)
                }
                "transitions" => {
                    section = Section::Transitions;
                    (rest.trim(), true)
                }
                "epistemic" => {
                    section = Section::Epistemic;
                    (rest.trim(), true)
                }
                _ => (line, false),
            },
            None => (line, false),
        };
        if line.is_empty() {
            continue;
        }
        match section {
            Section::None => return Err(syntax(lineno, "content before any section header")),
            Section::Agents => {
                for name in line.split_whitespace() {
                    b.agent(name);
                }
            }
            Section::Actions => {
                for name in line.split_whitespace() {
                    b.action(name);
                }
            }
            Section::States => {
                if switched {
                    // `states:` followed by content on the same line is only
                    // accepted for label-free state lists.
                    for name in line.split_whitespace() {
                        b.state(name, &[]);
                    }
                    continue;
                }
                let (name, labels) = match line.split_once("label:") {
                    Some((name, l)) => (name.trim(), l.trim()),
                    None => (line, ""),
                };
                if name.split_whitespace().count() != 1 {
                    return Err(syntax(lineno, "expected one state per line"));
                }
                let labels: Vec<&str> = labels.split_whitespace().collect();
                b.state(name, &labels);
            }
            Section::Protocol => {
                let (head, actions) = line
                    .split_once(':')
                    .ok_or_else(|| syntax(lineno, "expected `agent state: actions`"))?;
                let mut it = head.split_whitespace();
                let (Some(agent), Some(state), None) = (it.next(), it.next(), it.next()) else {
                    return Err(syntax(lineno, "expected `agent state: actions`"));
                };
                let acts: Vec<&str> = actions.split_whitespace().collect();
                b.protocol(agent, state, &acts);
            }
            Section::Transitions => {
                let (lhs, target) = line
                    .split_once("->")
                    .ok_or_else(|| syntax(lineno, "expected `state (actions) -> state`"))?;
                let target = target.trim();
                let open = lhs
                    .find('(')
                    .ok_or_else(|| syntax(lineno, "missing `(` in joint action"))?;
                let close = lhs
                    .rfind(')')
                    .ok_or_else(|| syntax(lineno, "missing `)` in joint action"))?;
                let state = lhs[..open].trim();
                let joint: Vec<&str> = lhs[open + 1..close]
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .collect();
                if state.is_empty() || target.is_empty() {
                    return Err(syntax(lineno, "expected `state (actions) -> state`"));
                }
                b.transition(state, &joint, target);
            }
            Section::Epistemic => {
                let (agent, blocks) = line
                    .split_once(':')
                    .ok_or_else(|| syntax(lineno, "expected `agent: {q1 q2} ...`"))?;
                let agent = agent.trim();
                let mut rest = blocks.trim();
                while !rest.is_empty() {
                    if !rest.starts_with('{') {
                        return Err(syntax(lineno, "expected `{` starting a block"));
                    }
                    let close = rest
                        .find('}')
                        .ok_or_else(|| syntax(lineno, "unclosed `{` in epistemic block"))?;
                    let members: Vec<&str> = rest[1..close]
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .collect();
                    b.epistemic_block(agent, &members);
                    rest = rest[close + 1..].trim_start();
                }
            }
        }
    }
    Ok(b.build()?)
}

/// Serializes a model to the text format; parsing the output reproduces the
/// model.
pub fn serialize_model(model: &Model) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "agents: {}", model.agent_names().join(" ")).unwrap();
    writeln!(out, "actions: {}", model.action_names().join(" ")).unwrap();
    writeln!(out, "states:").unwrap();
    for q in 0..model.num_states() {
        let q = crate::icgs::StateId(q);
        let labels: Vec<&str> = model
            .atom_names()
            .iter()
            .filter(|atom| model.atom_set(atom).map(|s| s.contains(q)).unwrap_or(false))
            .map(|s| s.as_str())
            .collect();
        if labels.is_empty() {
            writeln!(out, "{}", model.state_name(q)).unwrap();
        } else {
            writeln!(out, "{} label: {}", model.state_name(q), labels.join(" ")).unwrap();
        }
    }
    writeln!(out, "protocol:").unwrap();
    for a in 0..model.num_agents() {
        let a = crate::icgs::AgentId(a);
        for q in 0..model.num_states() {
            let q = crate::icgs::StateId(q);
            let acts: Vec<&str> = model
                .protocol_actions(a, q)
                .iter()
                .map(|id| model.action_name(*id))
                .collect();
            if !acts.is_empty() {
                writeln!(
                    out,
                    "{} {}: {}",
                    model.agent_name(a),
                    model.state_name(q),
                    acts.join(" ")
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "transitions:").unwrap();
    for q in 0..model.num_states() {
        let q = crate::icgs::StateId(q);
        for (joint, target) in model.joint_transitions(q) {
            let acts: Vec<&str> = joint.iter().map(|id| model.action_name(*id)).collect();
            writeln!(
                out,
                "{} ({}) -> {}",
                model.state_name(q),
                acts.join(" "),
                model.state_name(target)
            )
            .unwrap();
        }
    }
    writeln!(out, "epistemic:").unwrap();
    for a in 0..model.num_agents() {
        let a = crate::icgs::AgentId(a);
        let blocks: Vec<String> = model
            .epistemic_partition(a)
            .blocks()
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|q| model.state_name(q)).collect();
                format!("{{{}}}", names.join(" "))
            })
            .collect();
        if !blocks.is_empty() {
            writeln!(out, "{}: {}", model.agent_name(a), blocks.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# a two-state single-agent loop
agents: 1
actions: a b
states:
q0 label: p
q1
protocol:
1 q0: a b
1 q1: a b
transitions:
q0 (a) -> q0
q0 (b) -> q1
q1 (a) -> q1
q1 (b) -> q0
epistemic:
1: {q0 q1}
"#;

    #[test]
    fn parses_and_validates() {
        let m = parse_model(SAMPLE).unwrap();
        assert!(m.validate().is_ok());
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.atom_set("p").unwrap().len(), 1);
        let a = m.agent_id("1").unwrap();
        assert_eq!(m.epistemic_class(a, m.state_id("q0").unwrap()).len(), 2);
    }

    #[test]
    fn serialize_round_trips() {
        let m = parse_model(SAMPLE).unwrap();
        let text = serialize_model(&m);
        let m2 = parse_model(&text).unwrap();
        assert_eq!(serialize_model(&m2), text);
        assert!(m2.validate().is_ok());
    }

    #[test]
    fn rejects_malformed_transition() {
        let bad = "agents: 1\nactions: a\nstates:\nq0\nprotocol:\n1 q0: a\ntransitions:\nq0 a -> q0\n";
        assert!(parse_model(bad).is_err());
    }
}

//! Formula AST, concrete-syntax parser, well-formedness checks, and the
//! formula-to-formula translations producing lower and upper bounds.

mod parse;
mod translate;

pub use parse::{parse, ParseError};
pub use translate::{lower, tr1, tr2, tr3, upper, TranslateError};

use std::fmt;

/// Which neighborhood a steadfast operator ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neighborhood {
    /// Everybody-knows image (union of members' blocks); experimental.
    Everybody,
    /// Common-knowledge block (transitive closure); the default.
    Common,
}

/// Strategy semantics of a strategic modality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Uniform memoryless strategies, subjective outcome sets.
    ImperfectInfo,
    /// Arbitrary memoryless strategies with full observation.
    PerfectInfo,
}

/// Temporal goal under a strategic modality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Goal {
    Next(Box<Formula>),
    Always(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `K a φ` — the agent knows φ.
    Know(String, Box<Formula>),
    /// `E {a,b} φ` — everybody in the coalition knows φ.
    Everybody(Vec<String>, Box<Formula>),
    /// `C {a,b} φ` — φ is common knowledge in the coalition.
    Common(Vec<String>, Box<Formula>),
    Var(String),
    Mu(String, Box<Formula>),
    Nu(String, Box<Formula>),
    /// `<a,b> φ` — the coalition can enforce φ in one step (uniform,
    /// subjective).
    Diamond(Vec<String>, Box<Formula>),
    /// `<a,b>* φ` (common) / `<a,b>~ φ` (everybody) — the steadfast
    /// next-step operator: some uniform assignment drives every state of the
    /// neighborhood to φ without leaving it except possibly at the last step.
    Steadfast(Vec<String>, Neighborhood, Box<Formula>),
    /// `<<a,b>> γ` / `<<a,b>>_IR γ` — long-term strategic ability.
    Strategic(Vec<String>, StrategyKind, Goal),
}

pub(crate) fn normalize_coalition(mut names: Vec<String>) -> Vec<String> {
    names.sort();
    names.dedup();
    names
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn know(agent: &str, f: Formula) -> Formula {
        Formula::Know(agent.to_string(), Box::new(f))
    }

    pub fn everybody(coalition: &[&str], f: Formula) -> Formula {
        Formula::Everybody(
            normalize_coalition(coalition.iter().map(|s| s.to_string()).collect()),
            Box::new(f),
        )
    }

    pub fn common(coalition: &[&str], f: Formula) -> Formula {
        Formula::Common(
            normalize_coalition(coalition.iter().map(|s| s.to_string()).collect()),
            Box::new(f),
        )
    }

    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn mu(var: &str, body: Formula) -> Formula {
        Formula::Mu(var.to_string(), Box::new(body))
    }

    pub fn nu(var: &str, body: Formula) -> Formula {
        Formula::Nu(var.to_string(), Box::new(body))
    }

    pub fn diamond(coalition: &[&str], f: Formula) -> Formula {
        Formula::Diamond(
            normalize_coalition(coalition.iter().map(|s| s.to_string()).collect()),
            Box::new(f),
        )
    }

    pub fn steadfast(coalition: &[&str], nb: Neighborhood, f: Formula) -> Formula {
        Formula::Steadfast(
            normalize_coalition(coalition.iter().map(|s| s.to_string()).collect()),
            nb,
            Box::new(f),
        )
    }

    pub fn strategic(coalition: &[&str], kind: StrategyKind, goal: Goal) -> Formula {
        Formula::Strategic(
            normalize_coalition(coalition.iter().map(|s| s.to_string()).collect()),
            kind,
            goal,
        )
    }

    pub fn next(coalition: &[&str], kind: StrategyKind, f: Formula) -> Formula {
        Formula::strategic(coalition, kind, Goal::Next(Box::new(f)))
    }

    pub fn always(coalition: &[&str], kind: StrategyKind, f: Formula) -> Formula {
        Formula::strategic(coalition, kind, Goal::Always(Box::new(f)))
    }

    pub fn until(coalition: &[&str], kind: StrategyKind, lhs: Formula, rhs: Formula) -> Formula {
        Formula::strategic(coalition, kind, Goal::Until(Box::new(lhs), Box::new(rhs)))
    }

    pub fn eventually(coalition: &[&str], kind: StrategyKind, f: Formula) -> Formula {
        Formula::strategic(coalition, kind, Goal::Eventually(Box::new(f)))
    }

    /// True when the formula lies in the ATL fragment with only
    /// imperfect-information strategic modalities (knowledge operators and
    /// booleans allowed, fixpoints and perfect-information modalities not).
    pub fn is_atl_ir(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_atl_ir(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_atl_ir() && b.is_atl_ir()
            }
            Formula::Know(_, f) | Formula::Everybody(_, f) | Formula::Common(_, f) => f.is_atl_ir(),
            Formula::Strategic(_, StrategyKind::ImperfectInfo, goal) => match goal {
                Goal::Next(f) | Goal::Always(f) | Goal::Eventually(f) => f.is_atl_ir(),
                Goal::Until(a, b) => a.is_atl_ir() && b.is_atl_ir(),
            },
            _ => false,
        }
    }

    fn collect_var_names<'f>(&'f self, out: &mut Vec<&'f str>) {
        match self {
            Formula::Var(z) => out.push(z),
            Formula::Mu(z, f) | Formula::Nu(z, f) => {
                out.push(z);
                f.collect_var_names(out);
            }
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::Everybody(_, f)
            | Formula::Common(_, f)
            | Formula::Diamond(_, f)
            | Formula::Steadfast(_, _, f) => f.collect_var_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_var_names(out);
                b.collect_var_names(out);
            }
            Formula::Strategic(_, _, goal) => match goal {
                Goal::Next(f) | Goal::Always(f) | Goal::Eventually(f) => f.collect_var_names(out),
                Goal::Until(a, b) => {
                    a.collect_var_names(out);
                    b.collect_var_names(out);
                }
            },
            _ => {}
        }
    }
}

/// A fixpoint variable name of the form `Z0`, `Z1`, ... not occurring in any
/// of the given formulas.
pub fn fresh_var(avoid: &[&Formula]) -> String {
    let mut used = Vec::new();
    for f in avoid {
        f.collect_var_names(&mut used);
    }
    let mut i = 0usize;
    loop {
        let cand = format!("Z{i}");
        if !used.iter().any(|u| *u == cand) {
            return cand;
        }
        i += 1;
    }
}

/// Checks that every bound fixpoint variable occurs under an even number of
/// negations relative to its binder (the left side of an implication counts
/// as one).
pub fn check_z_positive(f: &Formula) -> Result<(), String> {
    fn walk(f: &Formula, odd: bool, bound: &mut Vec<(String, bool)>) -> Result<(), String> {
        match f {
            Formula::Var(z) => {
                match bound.iter().rev().find(|(b, _)| b == z) {
                    Some((_, at_binder)) if *at_binder != odd => Err(format!(
                        "variable {z} occurs under an odd number of negations"
                    )),
                    _ => Ok(()),
                }
            }
            Formula::Not(g) => walk(g, !odd, bound),
            Formula::Implies(a, b) => {
                walk(a, !odd, bound)?;
                walk(b, odd, bound)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                walk(a, odd, bound)?;
                walk(b, odd, bound)
            }
            Formula::Mu(z, g) | Formula::Nu(z, g) => {
                bound.push((z.clone(), odd));
                let r = walk(g, odd, bound);
                bound.pop();
                r
            }
            Formula::Know(_, g)
            | Formula::Everybody(_, g)
            | Formula::Common(_, g)
            | Formula::Diamond(_, g)
            | Formula::Steadfast(_, _, g) => walk(g, odd, bound),
            Formula::Strategic(_, _, goal) => match goal {
                Goal::Next(g) | Goal::Always(g) | Goal::Eventually(g) => walk(g, odd, bound),
                Goal::Until(a, b) => {
                    walk(a, odd, bound)?;
                    walk(b, odd, bound)
                }
            },
            _ => Ok(()),
        }
    }
    walk(f, false, &mut Vec::new())
}

/// Alternation-freeness: in negation normal form, no syntactic path from a
/// µZ binder (resp. νZ) to a bound occurrence of Z crosses a ν (resp. µ).
/// Negation parity determines each binder's effective kind, which is how the
/// normal form is consulted without materializing it.
pub fn check_alternation_free(f: &Formula) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Mu,
        Nu,
    }
    fn walk(f: &Formula, odd: bool, stack: &mut Vec<(String, Kind)>) -> bool {
        match f {
            Formula::Var(z) => {
                if let Some(pos) = stack.iter().rposition(|(name, _)| name == z) {
                    let binder = stack[pos].1;
                    stack[pos + 1..].iter().all(|(_, k)| *k == binder)
                } else {
                    true
                }
            }
            Formula::Not(g) => walk(g, !odd, stack),
            Formula::Implies(a, b) => walk(a, !odd, stack) && walk(b, odd, stack),
            Formula::And(a, b) | Formula::Or(a, b) => walk(a, odd, stack) && walk(b, odd, stack),
            Formula::Mu(z, g) | Formula::Nu(z, g) => {
                let mut kind = if matches!(f, Formula::Mu(..)) { Kind::Mu } else { Kind::Nu };
                if odd {
                    kind = if kind == Kind::Mu { Kind::Nu } else { Kind::Mu };
                }
                stack.push((z.clone(), kind));
                let r = walk(g, odd, stack);
                stack.pop();
                r
            }
            Formula::Know(_, g)
            | Formula::Everybody(_, g)
            | Formula::Common(_, g)
            | Formula::Diamond(_, g)
            | Formula::Steadfast(_, _, g) => walk(g, odd, stack),
            Formula::Strategic(_, _, goal) => match goal {
                Goal::Next(g) | Goal::Always(g) | Goal::Eventually(g) => walk(g, odd, stack),
                Goal::Until(a, b) => walk(a, odd, stack) && walk(b, odd, stack),
            },
            _ => true,
        }
    }
    walk(f, false, &mut Vec::new())
}

/// Structural equality up to renaming of bound fixpoint variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
        use Formula::*;
        match (a, b) {
            (True, True) | (False, False) => true,
            (Atom(x), Atom(y)) => x == y,
            (Var(x), Var(y)) => {
                match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y, // both free
                }
            }
            (Not(x), Not(y)) => go(x, y, env),
            (And(x1, x2), And(y1, y2))
            | (Or(x1, x2), Or(y1, y2))
            | (Implies(x1, x2), Implies(y1, y2)) => go(x1, y1, env) && go(x2, y2, env),
            (Know(ax, x), Know(ay, y)) => ax == ay && go(x, y, env),
            (Everybody(ca, x), Everybody(cb, y)) | (Common(ca, x), Common(cb, y)) => {
                ca == cb && go(x, y, env)
            }
            (Mu(za, x), Mu(zb, y)) | (Nu(za, x), Nu(zb, y)) => {
                env.push((za.clone(), zb.clone()));
                let r = go(x, y, env);
                env.pop();
                r
            }
            (Diamond(ca, x), Diamond(cb, y)) => ca == cb && go(x, y, env),
            (Steadfast(ca, na, x), Steadfast(cb, nb, y)) => {
                ca == cb && na == nb && go(x, y, env)
            }
            (Strategic(ca, ka, ga), Strategic(cb, kb, gb)) => {
                ca == cb
                    && ka == kb
                    && match (ga, gb) {
                        (Goal::Next(x), Goal::Next(y))
                        | (Goal::Always(x), Goal::Always(y))
                        | (Goal::Eventually(x), Goal::Eventually(y)) => go(x, y, env),
                        (Goal::Until(x1, x2), Goal::Until(y1, y2)) => {
                            go(x1, y1, env) && go(x2, y2, env)
                        }
                        _ => false,
                    }
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

const PREC_IMPLIES: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNARY: u8 = 3;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => PREC_IMPLIES,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Var(_) => 4,
            _ => PREC_UNARY,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Var(z) => write!(f, "{z}"),
            Formula::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, PREC_AND)?;
                write!(f, " & ")?;
                b.fmt_prec(f, PREC_AND + 1)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, PREC_OR)?;
                write!(f, " | ")?;
                b.fmt_prec(f, PREC_OR + 1)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, PREC_IMPLIES + 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, PREC_IMPLIES)
            }
            Formula::Know(a, g) => {
                write!(f, "K {a} ")?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Everybody(c, g) => {
                write!(f, "E {{{}}} ", c.join(","))?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Common(c, g) => {
                write!(f, "C {{{}}} ", c.join(","))?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Mu(z, g) => {
                write!(f, "mu {z} . ")?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Nu(z, g) => {
                write!(f, "nu {z} . ")?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Diamond(c, g) => {
                write!(f, "<{}> ", c.join(","))?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Steadfast(c, nb, g) => {
                let mark = match nb {
                    Neighborhood::Common => "*",
                    Neighborhood::Everybody => "~",
                };
                write!(f, "<{}>{mark} ", c.join(","))?;
                g.fmt_prec(f, PREC_UNARY)
            }
            Formula::Strategic(c, kind, goal) => {
                write!(f, "<<{}>>", c.join(","))?;
                if *kind == StrategyKind::PerfectInfo {
                    write!(f, "_IR")?;
                }
                write!(f, " ")?;
                match goal {
                    Goal::Next(g) => {
                        write!(f, "X ")?;
                        g.fmt_prec(f, PREC_UNARY)
                    }
                    Goal::Always(g) => {
                        write!(f, "G ")?;
                        g.fmt_prec(f, PREC_UNARY)
                    }
                    Goal::Eventually(g) => {
                        write!(f, "F ")?;
                        g.fmt_prec(f, PREC_UNARY)
                    }
                    Goal::Until(a, b) => {
                        a.fmt_prec(f, 4)?;
                        write!(f, " U ")?;
                        b.fmt_prec(f, 4)
                    }
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternation_free_examples() {
        // Single fixpoint.
        let f = Formula::mu("Z", Formula::or(Formula::atom("p"), Formula::diamond(&["1"], Formula::var("Z"))));
        assert!(check_alternation_free(&f));
        // nu over Z with a mu on the path: alternating.
        let g = Formula::mu(
            "Z",
            Formula::nu("Y", Formula::and(Formula::var("Z"), Formula::var("Y"))),
        );
        assert!(!check_alternation_free(&g));
        // The inner mu depends on the outer nu variable: also alternating.
        let h = Formula::nu(
            "Y",
            Formula::mu(
                "Z",
                Formula::or(
                    Formula::and(Formula::atom("p"), Formula::var("Y")),
                    Formula::diamond(&["1"], Formula::var("Z")),
                ),
            ),
        );
        assert!(!check_alternation_free(&h));
        // Side-by-side closed fixpoints of different kinds are fine.
        let i = Formula::nu(
            "Y",
            Formula::and(
                Formula::mu("Z", Formula::or(Formula::atom("p"), Formula::diamond(&["1"], Formula::var("Z")))),
                Formula::var("Y"),
            ),
        );
        assert!(check_alternation_free(&i));
        // Negation flips the effective kind.
        let j = Formula::mu(
            "Z",
            Formula::or(
                Formula::atom("p"),
                Formula::not(Formula::mu("Y", Formula::not(Formula::or(Formula::var("Z"), Formula::var("Y"))))),
            ),
        );
        // Effective kind of Y's binder under one negation is nu, and Z's
        // occurrence sits inside it.
        assert!(!check_alternation_free(&j));
    }

    #[test]
    fn z_positivity() {
        let ok = Formula::mu("Z", Formula::or(Formula::atom("p"), Formula::var("Z")));
        assert!(check_z_positive(&ok).is_ok());
        let bad = Formula::mu("Z", Formula::not(Formula::var("Z")));
        assert!(check_z_positive(&bad).is_err());
        let impl_lhs = Formula::mu("Z", Formula::implies(Formula::var("Z"), Formula::atom("p")));
        assert!(check_z_positive(&impl_lhs).is_err());
        let double = Formula::mu("Z", Formula::not(Formula::not(Formula::var("Z"))));
        assert!(check_z_positive(&double).is_ok());
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::mu("Z", Formula::or(Formula::atom("p"), Formula::var("Z")));
        let b = Formula::mu("Y", Formula::or(Formula::atom("p"), Formula::var("Y")));
        assert!(alpha_eq(&a, &b));
        let c = Formula::mu("Y", Formula::or(Formula::atom("q"), Formula::var("Y")));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn fresh_var_avoids_used_names() {
        let f = Formula::mu("Z0", Formula::or(Formula::var("Z1"), Formula::var("Z0")));
        assert_eq!(fresh_var(&[&f]), "Z2");
    }
}

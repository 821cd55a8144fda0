//! Formula translations: the reachability-only fixpoint attempts `tr1`,
//! `tr2`, `tr3`, and the mutually recursive lower/upper approximations
//! `lower` (tr) and `upper` (TR) for the full ATL fragment.

use super::{fresh_var, Formula, Goal, Neighborhood, StrategyKind};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("not an ATL ir formula: contains {0}")]
    NotAtlIr(&'static str),
}

fn coalition(names: &[&str]) -> Vec<String> {
    super::normalize_coalition(names.iter().map(|s| s.to_string()).collect())
}

/// Naive reachability fixpoint: `mu Z . (goal | <A> Z)`. Provides neither a
/// lower nor an upper bound in general; kept for the comparison experiments.
pub fn tr1(coalition_names: &[&str], goal: &Formula) -> Formula {
    let z = fresh_var(&[goal]);
    Formula::Mu(
        z.clone(),
        Box::new(Formula::Or(
            Box::new(goal.clone()),
            Box::new(Formula::Diamond(coalition(coalition_names), Box::new(Formula::Var(z)))),
        )),
    )
}

/// Epistemic reachability fixpoint: `mu Z . (E A goal | <A> Z)`. A lower
/// bound for singleton coalitions only.
pub fn tr2(coalition_names: &[&str], goal: &Formula) -> Formula {
    let z = fresh_var(&[goal]);
    Formula::Mu(
        z.clone(),
        Box::new(Formula::Or(
            Box::new(Formula::Everybody(coalition(coalition_names), Box::new(goal.clone()))),
            Box::new(Formula::Diamond(coalition(coalition_names), Box::new(Formula::Var(z)))),
        )),
    )
}

/// Steadfast reachability fixpoint: `mu Z . (E A goal | <A>* Z)`. A sound
/// lower bound for every coalition.
pub fn tr3(coalition_names: &[&str], goal: &Formula) -> Formula {
    let z = fresh_var(&[goal]);
    Formula::Mu(
        z.clone(),
        Box::new(Formula::Or(
            Box::new(Formula::Everybody(coalition(coalition_names), Box::new(goal.clone()))),
            Box::new(Formula::Steadfast(
                coalition(coalition_names),
                Neighborhood::Common,
                Box::new(Formula::Var(z)),
            )),
        )),
    )
}

struct Translator {
    next_var: usize,
}

impl Translator {
    fn fresh(&mut self) -> String {
        let z = format!("Z{}", self.next_var);
        self.next_var += 1;
        z
    }

    fn lower(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        use Formula::*;
        Ok(match f {
            True => True,
            False => False,
            Atom(p) => Atom(p.clone()),
            Not(g) => Formula::not(self.upper(g)?),
            And(a, b) => Formula::And(Box::new(self.lower(a)?), Box::new(self.lower(b)?)),
            Or(a, b) => Formula::Or(Box::new(self.lower(a)?), Box::new(self.lower(b)?)),
            // The antecedent is in negative position, so it takes the upper
            // translation.
            Implies(a, b) => Formula::Implies(Box::new(self.upper(a)?), Box::new(self.lower(b)?)),
            Know(a, g) => Know(a.clone(), Box::new(self.lower(g)?)),
            Everybody(c, g) => Everybody(c.clone(), Box::new(self.lower(g)?)),
            Common(c, g) => Common(c.clone(), Box::new(self.lower(g)?)),
            Strategic(c, StrategyKind::ImperfectInfo, goal) => match goal {
                Goal::Next(g) => Diamond(c.clone(), Box::new(self.lower(g)?)),
                Goal::Always(g) => {
                    let z = self.fresh();
                    Formula::Nu(
                        z.clone(),
                        Box::new(Formula::And(
                            Box::new(Common(c.clone(), Box::new(self.lower(g)?))),
                            Box::new(Steadfast(c.clone(), Neighborhood::Common, Box::new(Var(z)))),
                        )),
                    )
                }
                Goal::Until(lhs, rhs) => self.lower_until(c, lhs, rhs)?,
                Goal::Eventually(g) => self.lower_until(c, &Formula::True, g)?,
            },
            Strategic(_, StrategyKind::PerfectInfo, _) => {
                return Err(TranslateError::NotAtlIr("a perfect-information modality"))
            }
            Var(_) => return Err(TranslateError::NotAtlIr("a fixpoint variable")),
            Mu(..) | Nu(..) => return Err(TranslateError::NotAtlIr("a fixpoint operator")),
            Diamond(..) => return Err(TranslateError::NotAtlIr("a next-step operator")),
            Steadfast(..) => return Err(TranslateError::NotAtlIr("a steadfast operator")),
        })
    }

    fn lower_until(
        &mut self,
        c: &[String],
        lhs: &Formula,
        rhs: &Formula,
    ) -> Result<Formula, TranslateError> {
        let z = self.fresh();
        Ok(Formula::Mu(
            z.clone(),
            Box::new(Formula::Or(
                Box::new(Formula::Everybody(c.to_vec(), Box::new(self.lower(rhs)?))),
                Box::new(Formula::And(
                    Box::new(Formula::Common(c.to_vec(), Box::new(self.lower(lhs)?))),
                    Box::new(Formula::Steadfast(
                        c.to_vec(),
                        Neighborhood::Common,
                        Box::new(Formula::Var(z)),
                    )),
                )),
            )),
        ))
    }

    fn upper(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        use Formula::*;
        Ok(match f {
            True => True,
            False => False,
            Atom(p) => Atom(p.clone()),
            Not(g) => Formula::not(self.lower(g)?),
            And(a, b) => Formula::And(Box::new(self.upper(a)?), Box::new(self.upper(b)?)),
            Or(a, b) => Formula::Or(Box::new(self.upper(a)?), Box::new(self.upper(b)?)),
            Implies(a, b) => Formula::Implies(Box::new(self.lower(a)?), Box::new(self.upper(b)?)),
            Know(a, g) => Know(a.clone(), Box::new(self.upper(g)?)),
            Everybody(c, g) => Everybody(c.clone(), Box::new(self.upper(g)?)),
            Common(c, g) => Common(c.clone(), Box::new(self.upper(g)?)),
            Strategic(c, StrategyKind::ImperfectInfo, goal) => {
                let inner = match goal {
                    Goal::Next(g) => Goal::Next(Box::new(self.upper(g)?)),
                    Goal::Always(g) => Goal::Always(Box::new(self.upper(g)?)),
                    Goal::Until(lhs, rhs) => {
                        Goal::Until(Box::new(self.upper(lhs)?), Box::new(self.upper(rhs)?))
                    }
                    Goal::Eventually(g) => {
                        Goal::Until(Box::new(Formula::True), Box::new(self.upper(g)?))
                    }
                };
                Everybody(
                    c.clone(),
                    Box::new(Strategic(c.clone(), StrategyKind::PerfectInfo, inner)),
                )
            }
            Strategic(_, StrategyKind::PerfectInfo, _) => {
                return Err(TranslateError::NotAtlIr("a perfect-information modality"))
            }
            Var(_) => return Err(TranslateError::NotAtlIr("a fixpoint variable")),
            Mu(..) | Nu(..) => return Err(TranslateError::NotAtlIr("a fixpoint operator")),
            Diamond(..) => return Err(TranslateError::NotAtlIr("a next-step operator")),
            Steadfast(..) => return Err(TranslateError::NotAtlIr("a steadfast operator")),
        })
    }
}

/// Lower approximation: a formula whose truth implies the input's.
pub fn lower(f: &Formula) -> Result<Formula, TranslateError> {
    Translator { next_var: 0 }.lower(f)
}

/// Upper approximation: a formula implied by the input.
pub fn upper(f: &Formula) -> Result<Formula, TranslateError> {
    Translator { next_var: 0 }.upper(f)
}

//! Recursive-descent parser for the concrete formula grammar.
//!
//! Precedence: unary operators (`!`, `K`, `E`, `C`, `mu`/`nu`, `<..>`,
//! `<..>*`, `<..>~`, `<<..>>` with temporal prefixes) bind tighter than `&`,
//! which binds tighter than `|`, which binds tighter than the
//! right-associative `->`. The operands of an infix `U` under `<<..>>` are
//! unary-level, so compound operands need parentheses.

use super::{Formula, Goal, Neighborhood, StrategyKind};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    LtLt,
    GtGt,
    Lt,
    Gt,
    Star,
    Tilde,
    PerfectSuffix,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(0), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek(0) else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                b'!' => {
                    self.bump();
                    Tok::Not
                }
                b'&' => {
                    self.bump();
                    Tok::And
                }
                b'|' => {
                    self.bump();
                    Tok::Or
                }
                b'-' => {
                    self.bump();
                    if self.peek(0) == Some(b'>') {
                        self.bump();
                        Tok::Implies
                    } else {
                        return Err(ParseError { line, col, message: "expected `->`".into() });
                    }
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'~' => {
                    self.bump();
                    Tok::Tilde
                }
                b'<' => {
                    self.bump();
                    if self.peek(0) == Some(b'<') {
                        self.bump();
                        Tok::LtLt
                    } else {
                        Tok::Lt
                    }
                }
                b'>' => {
                    self.bump();
                    if self.peek(0) == Some(b'>') {
                        self.bump();
                        Tok::GtGt
                    } else {
                        Tok::Gt
                    }
                }
                b'_' => {
                    if self.peek(1) == Some(b'I') && self.peek(2) == Some(b'R') {
                        self.bump();
                        self.bump();
                        self.bump();
                        Tok::PerfectSuffix
                    } else {
                        return Err(ParseError {
                            line,
                            col,
                            message: "expected `_IR`".into(),
                        });
                    }
                }
                c if c.is_ascii_alphanumeric() => {
                    let mut name = String::new();
                    while matches!(self.peek(0), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                        name.push(self.bump().unwrap() as char);
                    }
                    Tok::Ident(name)
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (_, line, col) = &self.toks[self.pos];
        ParseError { line: *line, col: *col, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_expr()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and_expr()?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn coalition_until(&mut self, closing: Tok, what: &str) -> Result<Vec<String>, ParseError> {
        let mut names = Vec::new();
        loop {
            match self.peek().clone() {
                t if t == closing => {
                    self.bump();
                    break;
                }
                Tok::Comma => {
                    self.bump();
                }
                Tok::Ident(name) => {
                    self.bump();
                    names.push(name);
                }
                _ => return Err(self.err(format!("expected agent name or `{what}`"))),
            }
        }
        Ok(super::normalize_coalition(names))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::LtLt => {
                self.bump();
                let coalition = self.coalition_until(Tok::GtGt, ">>")?;
                let kind = if *self.peek() == Tok::PerfectSuffix {
                    self.bump();
                    StrategyKind::PerfectInfo
                } else {
                    StrategyKind::ImperfectInfo
                };
                let goal = self.strategic_goal()?;
                Ok(Formula::Strategic(coalition, kind, goal))
            }
            Tok::Lt => {
                self.bump();
                let coalition = self.coalition_until(Tok::Gt, ">")?;
                let op = match self.peek() {
                    Tok::Star => {
                        self.bump();
                        Some(Neighborhood::Common)
                    }
                    Tok::Tilde => {
                        self.bump();
                        Some(Neighborhood::Everybody)
                    }
                    _ => None,
                };
                let body = self.unary()?;
                Ok(match op {
                    Some(nb) => Formula::Steadfast(coalition, nb, Box::new(body)),
                    None => Formula::Diamond(coalition, Box::new(body)),
                })
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "K" => {
                        let agent = self.ident("agent name after `K`")?;
                        Ok(Formula::Know(agent, Box::new(self.unary()?)))
                    }
                    "E" | "C" => {
                        self.expect(Tok::LBrace, "`{`")?;
                        let coalition = self.coalition_until(Tok::RBrace, "}")?;
                        let body = Box::new(self.unary()?);
                        Ok(if name == "E" {
                            Formula::Everybody(coalition, body)
                        } else {
                            Formula::Common(coalition, body)
                        })
                    }
                    "mu" | "nu" => {
                        let var = self.ident("fixpoint variable")?;
                        self.expect(Tok::Dot, "`.`")?;
                        let body = Box::new(self.unary()?);
                        Ok(if name == "mu" {
                            Formula::Mu(var, body)
                        } else {
                            Formula::Nu(var, body)
                        })
                    }
                    "X" | "G" | "F" | "U" => {
                        Err(self.err(format!("`{name}` is only valid inside `<<..>>`")))
                    }
                    _ => Ok(Formula::Atom(name)),
                }
            }
            _ => Err(self.err("expected a formula")),
        }
    }

    fn strategic_goal(&mut self) -> Result<Goal, ParseError> {
        if let Tok::Ident(name) = self.peek().clone() {
            match name.as_str() {
                "X" => {
                    self.bump();
                    return Ok(Goal::Next(Box::new(self.unary()?)));
                }
                "G" => {
                    self.bump();
                    return Ok(Goal::Always(Box::new(self.unary()?)));
                }
                "F" => {
                    self.bump();
                    return Ok(Goal::Eventually(Box::new(self.unary()?)));
                }
                _ => {}
            }
        }
        let lhs = self.unary()?;
        match self.peek().clone() {
            Tok::Ident(name) if name == "U" => {
                self.bump();
                let rhs = self.unary()?;
                Ok(Goal::Until(Box::new(lhs), Box::new(rhs)))
            }
            _ => Err(self.err("expected `X`, `G`, `F` or an until goal `φ U ψ`")),
        }
    }
}

/// Parses the concrete grammar into a formula. Unknown agents in coalitions
/// are deferred to evaluation time; unbound identifiers parse as atoms.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    // Variable occurrences are only distinguishable from atoms through their
    // binders; rewrite bound names after the fact.
    Ok(mark_bound_vars(f, &mut Vec::new()))
}

fn mark_bound_vars(f: Formula, bound: &mut Vec<String>) -> Formula {
    use Formula::*;
    match f {
        Atom(name) if bound.iter().any(|b| *b == name) => Var(name),
        Mu(z, body) => {
            bound.push(z.clone());
            let body = mark_bound_vars(*body, bound);
            bound.pop();
            Mu(z, Box::new(body))
        }
        Nu(z, body) => {
            bound.push(z.clone());
            let body = mark_bound_vars(*body, bound);
            bound.pop();
            Nu(z, Box::new(body))
        }
        Not(g) => Not(Box::new(mark_bound_vars(*g, bound))),
        And(a, b) => And(
            Box::new(mark_bound_vars(*a, bound)),
            Box::new(mark_bound_vars(*b, bound)),
        ),
        Or(a, b) => Or(
            Box::new(mark_bound_vars(*a, bound)),
            Box::new(mark_bound_vars(*b, bound)),
        ),
        Implies(a, b) => Implies(
            Box::new(mark_bound_vars(*a, bound)),
            Box::new(mark_bound_vars(*b, bound)),
        ),
        Know(a, g) => Know(a, Box::new(mark_bound_vars(*g, bound))),
        Everybody(c, g) => Everybody(c, Box::new(mark_bound_vars(*g, bound))),
        Common(c, g) => Common(c, Box::new(mark_bound_vars(*g, bound))),
        Diamond(c, g) => Diamond(c, Box::new(mark_bound_vars(*g, bound))),
        Steadfast(c, nb, g) => Steadfast(c, nb, Box::new(mark_bound_vars(*g, bound))),
        Strategic(c, k, goal) => {
            let goal = match goal {
                Goal::Next(g) => Goal::Next(Box::new(mark_bound_vars(*g, bound))),
                Goal::Always(g) => Goal::Always(Box::new(mark_bound_vars(*g, bound))),
                Goal::Eventually(g) => Goal::Eventually(Box::new(mark_bound_vars(*g, bound))),
                Goal::Until(a, b) => Goal::Until(
                    Box::new(mark_bound_vars(*a, bound)),
                    Box::new(mark_bound_vars(*b, bound)),
                ),
            };
            Strategic(c, k, goal)
        }
        other => other,
    }
}

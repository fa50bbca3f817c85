//! Formulas of the bimodal intuitionistic language with `∧ ∨ → □ ◇ ⊥ ⊤`.
//!
//! Concrete syntax (tightest first): `box`/`[]`, `dia`/`<>`, `~`; `&`; `|`;
//! `->` (right associative); `<->` (non-associative). `T` and `F` are the
//! constants. `~a` and `a <-> b` are desugared while parsing, so the tree only
//! ever contains the seven primitive connectives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(Arc<str>),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
}

impl Formula {
    /// Panics if `name` is not a valid identifier; use [`parse`] for untrusted input.
    pub fn var(name: &str) -> Formula {
        assert!(is_identifier(name), "invalid variable name {name:?}");
        Formula::Var(Arc::from(name))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }

    pub fn negation(f: Formula) -> Formula {
        Formula::implies(f, Formula::Bot)
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    /// Variables in ascending name order.
    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Box(c) | Formula::Dia(c) => c.collect_vars(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => 1 + l.size() + r.size(),
            Formula::Box(c) | Formula::Dia(c) => 1 + c.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => 1 + l.depth().max(r.depth()),
            Formula::Box(c) | Formula::Dia(c) => 1 + c.depth(),
        }
    }

    /// Simultaneous substitution. Variables outside the map's domain stay put.
    pub fn substitute(&self, s: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => s.get(&**v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Bot | Formula::Top => self.clone(),
            Formula::And(l, r) => Formula::and(l.substitute(s), r.substitute(s)),
            Formula::Or(l, r) => Formula::or(l.substitute(s), r.substitute(s)),
            Formula::Implies(l, r) => Formula::implies(l.substitute(s), r.substitute(s)),
            Formula::Box(c) => Formula::boxed(c.substitute(s)),
            Formula::Dia(c) => Formula::dia(c.substitute(s)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Box(_) | Formula::Dia(_) => 4,
            Formula::Var(_) | Formula::Bot | Formula::Top => 5,
        }
    }

    /// Prints with the fewest parentheses that still re-parse to the same tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        fn child(out: &mut String, f: &Formula, parens: bool) {
            if parens {
                out.push('(');
                f.render_into(out);
                out.push(')');
            } else {
                f.render_into(out);
            }
        }
        let p = self.precedence();
        match self {
            Formula::Var(v) => out.push_str(v),
            Formula::Bot => out.push('F'),
            Formula::Top => out.push('T'),
            // & and | associate to the left in the grammar
            Formula::And(l, r) | Formula::Or(l, r) => {
                let op = if matches!(self, Formula::And(..)) { " & " } else { " | " };
                child(out, l, l.precedence() < p);
                out.push_str(op);
                child(out, r, r.precedence() <= p);
            }
            Formula::Implies(l, r) => {
                child(out, l, l.precedence() <= p);
                out.push_str(" -> ");
                child(out, r, r.precedence() < p);
            }
            Formula::Box(c) | Formula::Dia(c) => {
                out.push_str(if matches!(self, Formula::Box(_)) {
                    "box "
                } else {
                    "dia "
                });
                child(out, c, c.precedence() < p);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Bot => f.write_str("Bot"),
            Formula::Top => f.write_str("Top"),
            Formula::And(l, r) => write!(f, "And({l:?}, {r:?})"),
            Formula::Or(l, r) => write!(f, "Or({l:?}, {r:?})"),
            Formula::Implies(l, r) => write!(f, "Implies({l:?}, {r:?})"),
            Formula::Box(c) => write!(f, "Box({c:?})"),
            Formula::Dia(c) => write!(f, "Dia({c:?})"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "T" | "F" | "box" | "dia")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {position}: found {found}, expected one of {}", expected.join(", "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Box,
    Dia,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Box => "`box`".into(),
            Tok::Dia => "`dia`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const ATOM_START: &[&str] = &["identifier", "T", "F", "(", "box", "[]", "dia", "<>", "~"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_alphabetic() {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..len];
            let tok = match word {
                "T" => Tok::Top,
                "F" => Tok::Bot,
                "box" => Tok::Box,
                "dia" => Tok::Dia,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else if rest.starts_with("<>") {
            (Tok::Dia, 2)
        } else {
            let tok = match c {
                b'~' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(ParseError {
                        position: start,
                        found: format!("character {ch:?}"),
                        expected: ATOM_START.to_vec(),
                    });
                }
            };
            (tok, 1)
        };
        toks.push((start, tok));
        i += len;
    }
    toks.push((text.len(), Tok::Eof));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            found: tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            if *self.peek() == Tok::Iff {
                return Err(self.error(&["`)`", "end of input"]));
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(Formula::dia(self.unary()?))
            }
            Tok::Not => {
                self.bump();
                Ok(Formula::negation(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(Arc::from(name.as_str())))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`&`", "`|`", "`->`", "`<->`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}

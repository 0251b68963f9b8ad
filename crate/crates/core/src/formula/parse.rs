use std::collections::BTreeSet;

use thiserror::Error;

use super::{Agent, Formula, Group, GroupOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found {found}")]
    Expected {
        expected: &'static str,
        found: String,
    },
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("empty group")]
    EmptyGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Not => "'~'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(ch),
                    position: i,
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'u> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    universe: Option<&'u BTreeSet<Agent>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.offset(),
        }
    }

    fn expected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(t) => self.err(ParseErrorKind::Expected {
                expected,
                found: t.describe(),
            }),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.expected(what))
        }
    }

    // iff < implies < or < and < unary
    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                let next_is_brace = matches!(self.toks.get(self.pos + 1), Some((Tok::LBrace, _)));
                let op = match name.as_str() {
                    "K" => Some(None),
                    "E" => Some(Some(GroupOp::Everyone)),
                    "C" => Some(Some(GroupOp::Common)),
                    "D" => Some(Some(GroupOp::Distributed)),
                    "M" => Some(Some(GroupOp::Mutual)),
                    _ => None,
                };
                match op {
                    Some(kind) if next_is_brace => {
                        self.pos += 1;
                        let group = self.group()?;
                        let body = self.unary()?;
                        Ok(match kind {
                            Some(op) => Formula::group_op(op, group, body),
                            None => {
                                // K takes exactly one agent; `K{a,b}` is everyone's knowledge
                                // only by accident of notation, so reject it.
                                match group.as_singleton() {
                                    Some(a) => Formula::know(a.clone(), body),
                                    None => {
                                        return Err(ParseError {
                                            kind: ParseErrorKind::Expected {
                                                expected: "a single agent after K",
                                                found: group.to_string(),
                                            },
                                            position: self.toks[self.pos - 1].1,
                                        })
                                    }
                                }
                            }
                        })
                    }
                    _ => {
                        self.pos += 1;
                        Ok(match name.as_str() {
                            "true" => Formula::top(),
                            "false" => Formula::bot(),
                            _ => Formula::Prop(name),
                        })
                    }
                }
            }
            _ => Err(self.expected("a formula")),
        }
    }

    fn group(&mut self) -> Result<Group, ParseError> {
        let open = self.offset();
        self.expect(Tok::LBrace, "'{'")?;
        if self.peek() == Some(&Tok::RBrace) {
            return Err(ParseError {
                kind: ParseErrorKind::EmptyGroup,
                position: open,
            });
        }
        let mut members = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(id)) => {
                    let agent = Agent::new(id.clone());
                    if let Some(u) = self.universe {
                        if !u.contains(&agent) {
                            return Err(self.err(ParseErrorKind::UnknownAgent(id)));
                        }
                    }
                    self.pos += 1;
                    members.push(agent);
                }
                _ => return Err(self.expected("an agent name")),
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RBrace, "',' or '}'")?;
            break;
        }
        Ok(Group::new(members).expect("nonempty by construction"))
    }
}

fn run(text: &str, universe: Option<&BTreeSet<Agent>>) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        universe,
    };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(p.expected("end of input"));
    }
    Ok(f)
}

/// Parses a formula, rejecting agents outside `universe`.
pub fn parse(text: &str, universe: &BTreeSet<Agent>) -> Result<Formula, ParseError> {
    run(text, Some(universe))
}

/// Parses a formula over whatever agents it mentions.
pub fn parse_open(text: &str) -> Result<Formula, ParseError> {
    run(text, None)
}

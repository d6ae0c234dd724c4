use super::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Bottom,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Bottom => "`_|_`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '~' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '¬' => (Tok::Not, c.len_utf8()),
            '∧' => (Tok::And, c.len_utf8()),
            '∨' => (Tok::Or, c.len_utf8()),
            '→' => (Tok::Arrow, c.len_utf8()),
            '⊥' => (Tok::Bottom, c.len_utf8()),
            '-' if rest.starts_with("->") => (Tok::Arrow, 2),
            '_' if rest.starts_with("_|_") => (Tok::Bottom, 3),
            c if c.is_ascii_alphabetic() => {
                let len = bytes[i..]
                    .iter()
                    .position(|b| !(b.is_ascii_alphanumeric() || *b == b'_'))
                    .unwrap_or(bytes.len() - i);
                (Tok::Ident(&text[i..i + len]), len)
            }
            other => return Err(syntax(i, format!("unexpected character `{other}`"))),
        };
        out.push((i, tok));
        i += len;
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> (usize, Tok<'a>) {
        self.toks[self.pos]
    }

    fn bump(&mut self) -> (usize, Tok<'a>) {
        let t = self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.binary()?;
        if let (_, Tok::Arrow) = self.peek() {
            self.bump();
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        let mut chain: Option<Tok<'a>> = None;
        loop {
            let (offset, tok) = self.peek();
            if !matches!(tok, Tok::And | Tok::Or) {
                return Ok(lhs);
            }
            match chain {
                Some(prev) if prev != tok => {
                    return Err(syntax(
                        offset,
                        format!(
                            "{} after {} needs parentheses (they bind equally tight)",
                            tok.describe(),
                            prev.describe()
                        ),
                    ))
                }
                _ => chain = Some(tok),
            }
            self.bump();
            let rhs = self.unary()?;
            lhs = if tok == Tok::And { lhs.and(rhs) } else { lhs.or(rhs) };
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.bump() {
            (_, Tok::Not) => Ok(self.unary()?.neg()),
            (_, Tok::Bottom) => Ok(Formula::Bottom),
            (_, Tok::Ident(name)) => Ok(Formula::var(name)),
            (_, Tok::LParen) => {
                let inner = self.implication()?;
                match self.bump() {
                    (_, Tok::RParen) => Ok(inner),
                    (offset, tok) => Err(syntax(offset, format!("expected `)`, found {}", tok.describe()))),
                }
            }
            (offset, tok) => Err(syntax(offset, format!("expected a formula, found {}", tok.describe()))),
        }
    }
}

/// Parses the concrete syntax described in the module docs.
pub fn parse(text: &str) -> Result<Formula> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = parser.implication()?;
    match parser.peek() {
        (_, Tok::Eof) => Ok(f),
        (offset, tok) => Err(syntax(offset, format!("unexpected {}", tok.describe()))),
    }
}

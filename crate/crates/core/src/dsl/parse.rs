//! Recursive-descent parser for ring expressions over varieties.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'L' ['^' ['-'] INT] | atom | '(' expr ')'
//! atom   := 'point' | 'P' INT | 'curve' '(' INT ')'
//!         | 'blowup' '(' atom ',' atom ',' INT ')' | 'prod' '(' atom ',' atom ')' | IDENT
//! ```
//!
//! `P3` and `P 3` are both accepted. Identifiers of the form `C_<g>` denote
//! the built-in genus-`g` curve.

use std::fmt;

use thiserror::Error;

use crate::registry::{curve_symbol_genus, Registry};
use crate::ring::MotivicClass;
use crate::variety::{VarietyError, VarietyExpr};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{loc}: syntax error: expected {}, found {found}", .expected.join(" | "))]
    Syntax { loc: Loc, expected: Vec<String>, found: String },
    #[error("{loc}: integer literal out of range")]
    IntegerRange { loc: Loc },
    #[error("{loc}: {source}")]
    Constraint { loc: Loc, source: VarietyError },
}

impl DslError {
    pub fn loc(&self) -> Loc {
        match self {
            DslError::Syntax { loc, .. } | DslError::IntegerRange { loc } | DslError::Constraint { loc, .. } => *loc,
        }
    }
}

/// A parsed, checked ring expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Int(i64),
    Lefschetz(i64),
    Variety(VarietyExpr),
    Neg(Box<RingExpr>),
    Add(Box<RingExpr>, Box<RingExpr>),
    Sub(Box<RingExpr>, Box<RingExpr>),
    Mul(Box<RingExpr>, Box<RingExpr>),
}

impl RingExpr {
    pub fn evaluate(&self, registry: &Registry) -> Result<MotivicClass, VarietyError> {
        Ok(match self {
            RingExpr::Int(n) => MotivicClass::integer(*n),
            RingExpr::Lefschetz(k) => MotivicClass::lefschetz_pow(*k),
            RingExpr::Variety(v) => MotivicClass::from_variety(v, registry)?,
            RingExpr::Neg(x) => -&x.evaluate(registry)?,
            RingExpr::Add(a, b) => &a.evaluate(registry)? + &b.evaluate(registry)?,
            RingExpr::Sub(a, b) => &a.evaluate(registry)? - &b.evaluate(registry)?,
            RingExpr::Mul(a, b) => &a.evaluate(registry)? * &b.evaluate(registry)?,
        })
    }

    /// The variety if the whole expression is a single generator.
    pub fn as_variety(&self) -> Option<&VarietyExpr> {
        match self {
            RingExpr::Variety(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Int(n) => write!(f, "{n}"),
            RingExpr::Lefschetz(1) => f.write_str("L"),
            RingExpr::Lefschetz(k) => write!(f, "L^{k}"),
            RingExpr::Variety(v) => write!(f, "{v}"),
            RingExpr::Neg(x) => write!(f, "-({x})"),
            RingExpr::Add(a, b) => write!(f, "({a} + {b})"),
            RingExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            RingExpr::Mul(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// Parses and checks `text`; references and blow-up dimensions are resolved
/// against `registry`.
pub fn parse(text: &str, registry: &Registry) -> Result<RingExpr, DslError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let node = parser.expr()?;
    parser.expect_end()?;
    lower(&node, registry)
}

/// Parses `text` and reduces it to its normal form.
pub fn normalize(text: &str, registry: &Registry) -> Result<MotivicClass, DslError> {
    let expr = parse(text, registry)?;
    // checked during lowering; a failure here carries no better location
    expr.evaluate(registry).map_err(|source| DslError::Constraint { loc: Loc { line: 1, col: 1 }, source })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Loc)>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                col += 1;
            }
            let value = digits.parse::<u64>().map_err(|_| DslError::IntegerRange { loc })?;
            out.push((Tok::Int(value), loc));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                ident.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(ident), loc));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => {
                return Err(DslError::Syntax { loc, expected: vec!["expression".into()], found: format!("`{other}`") })
            }
        };
        chars.next();
        col += 1;
        out.push((tok, loc));
    }
    out.push((Tok::Eof, Loc { line, col }));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Int(u64, Loc),
    Lefschetz(i128, Loc),
    Atom(Atom),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug)]
enum Atom {
    Point,
    ProjSpace(u64, Loc),
    Curve(u64, Loc),
    Blowup(Box<Atom>, Box<Atom>, u64, Loc),
    Prod(Box<Atom>, Box<Atom>),
    Ident(String, Loc),
}

const FACTOR_START: [&str; 9] =
    ["integer", "`L`", "`point`", "`P<n>`", "`curve`", "`blowup`", "`prod`", "identifier", "`(`"];
const ATOM_START: [&str; 6] = ["`point`", "`P<n>`", "`curve`", "`blowup`", "`prod`", "identifier"];

struct Parser {
    tokens: Vec<(Tok, Loc)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn loc(&self) -> Loc {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Loc) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Syntax {
            loc: self.loc(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Loc, DslError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            let name = tok.to_string();
            self.error(&[&name])
        }
    }

    fn expect_int(&mut self) -> Result<(u64, Loc), DslError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                Ok((n, self.bump().1))
            }
            _ => self.error(&["integer"]),
        }
    }

    fn expect_end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.error(&["`+`", "`-`", "`*`", "end of input"]),
        }
    }

    fn expr(&mut self) -> Result<Node, DslError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            Node::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Node::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Node::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Node, DslError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = Node::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Node, DslError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let (_, loc) = self.bump();
                Ok(Node::Int(n, loc))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "L" => {
                let (_, loc) = self.bump();
                if *self.peek() != Tok::Caret {
                    return Ok(Node::Lefschetz(1, loc));
                }
                self.bump();
                let negative = *self.peek() == Tok::Minus;
                if negative {
                    self.bump();
                }
                let (k, _) = self.expect_int()?;
                let k = i128::from(k);
                Ok(Node::Lefschetz(if negative { -k } else { k }, loc))
            }
            Tok::Ident(_) => Ok(Node::Atom(self.atom()?)),
            _ => self.error(&FACTOR_START),
        }
    }

    fn atom(&mut self) -> Result<Atom, DslError> {
        let name = match self.peek() {
            Tok::Ident(name) if name != "L" => name.clone(),
            _ => return self.error(&ATOM_START),
        };
        let (_, loc) = self.bump();
        match name.as_str() {
            "point" => Ok(Atom::Point),
            "P" => {
                let (n, _) = self.expect_int()?;
                Ok(Atom::ProjSpace(n, loc))
            }
            "curve" => {
                self.expect(Tok::LParen)?;
                let (g, _) = self.expect_int()?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Curve(g, loc))
            }
            "blowup" => {
                self.expect(Tok::LParen)?;
                let ambient = self.atom()?;
                self.expect(Tok::Comma)?;
                let center = self.atom()?;
                self.expect(Tok::Comma)?;
                let (c, _) = self.expect_int()?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Blowup(Box::new(ambient), Box::new(center), c, loc))
            }
            "prod" => {
                self.expect(Tok::LParen)?;
                let left = self.atom()?;
                self.expect(Tok::Comma)?;
                let right = self.atom()?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Prod(Box::new(left), Box::new(right)))
            }
            _ => match name.strip_prefix('P').map(str::parse::<u64>) {
                Some(Ok(n)) if name[1..].bytes().all(|b| b.is_ascii_digit()) => Ok(Atom::ProjSpace(n, loc)),
                Some(_) if name[1..].bytes().all(|b| b.is_ascii_digit()) => Err(DslError::IntegerRange { loc }),
                _ => Ok(Atom::Ident(name, loc)),
            },
        }
    }
}

fn small(n: u64, loc: Loc) -> Result<u32, DslError> {
    u32::try_from(n).map_err(|_| DslError::IntegerRange { loc })
}

fn lower(node: &Node, registry: &Registry) -> Result<RingExpr, DslError> {
    let pair = |a: &Node, b: &Node| -> Result<(Box<RingExpr>, Box<RingExpr>), DslError> {
        Ok((Box::new(lower(a, registry)?), Box::new(lower(b, registry)?)))
    };
    Ok(match node {
        Node::Int(n, loc) => RingExpr::Int(i64::try_from(*n).map_err(|_| DslError::IntegerRange { loc: *loc })?),
        Node::Lefschetz(k, loc) => {
            RingExpr::Lefschetz(i64::try_from(*k).map_err(|_| DslError::IntegerRange { loc: *loc })?)
        }
        Node::Atom(a) => RingExpr::Variety(lower_atom(a, registry)?.0),
        Node::Neg(x) => RingExpr::Neg(Box::new(lower(x, registry)?)),
        Node::Add(a, b) => {
            let (a, b) = pair(a, b)?;
            RingExpr::Add(a, b)
        }
        Node::Sub(a, b) => {
            let (a, b) = pair(a, b)?;
            RingExpr::Sub(a, b)
        }
        Node::Mul(a, b) => {
            let (a, b) = pair(a, b)?;
            RingExpr::Mul(a, b)
        }
    })
}

/// Lowers an atom and returns it with its dimension.
fn lower_atom(atom: &Atom, registry: &Registry) -> Result<(VarietyExpr, u32), DslError> {
    Ok(match atom {
        Atom::Point => (VarietyExpr::Point, 0),
        Atom::ProjSpace(n, loc) => {
            let n = small(*n, *loc)?;
            (VarietyExpr::ProjSpace(n), n)
        }
        Atom::Curve(g, loc) => (VarietyExpr::Curve(small(*g, *loc)?), 1),
        Atom::Ident(name, loc) => match curve_symbol_genus(name) {
            Some(g) => (VarietyExpr::Curve(g), 1),
            None => {
                let table = registry.require(name).map_err(|source| DslError::Constraint { loc: *loc, source })?;
                (VarietyExpr::Ref(name.clone()), table.dim())
            }
        },
        Atom::Prod(l, r) => {
            let (l, dl) = lower_atom(l, registry)?;
            let (r, dr) = lower_atom(r, registry)?;
            (VarietyExpr::prod(l, r), dl + dr)
        }
        Atom::Blowup(ambient, center, codim, loc) => {
            let (ambient, ambient_dim) = lower_atom(ambient, registry)?;
            let (center, center_dim) = lower_atom(center, registry)?;
            let codim = small(*codim, *loc)?;
            let err = |source| DslError::Constraint { loc: *loc, source };
            if codim < 2 {
                return Err(err(VarietyError::CodimTooSmall { codim }));
            }
            if center_dim + codim != ambient_dim {
                return Err(err(VarietyError::DimensionMismatch { center_dim, codim, ambient_dim }));
            }
            let expr = VarietyExpr::Blowup { ambient: Box::new(ambient), center: Box::new(center), codim };
            (expr, ambient_dim)
        }
    })
}

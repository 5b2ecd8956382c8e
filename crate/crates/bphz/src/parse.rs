//! Text syntax for multi-indices, diagrams and forests.
//!
//! ```text
//! expr     := "1" | item (" . " item)*
//! item     := monomial | diagram | "[" diagram "]"
//! monomial := factor (" " factor)*        factor := "z" INT ("^" INT)?
//! diagram  := "n=" INT ";" "e=" edge ("," edge)*   edge := INT "-" INT
//! ```
//!
//! Diagram vertices are numbered from 1. Whitespace around tokens is free.
//! The forms accepted are exactly the ones the library prints.

use std::fmt;

use bphz_core::{CanonDiagram, DiagForest, Diagram, MIForest, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    MultiIndex(MultiIndex),
    MIForest(MIForest),
    Diagram(Diagram),
    DiagForest(DiagForest),
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: at, message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err(start, "expected a number");
        }
        self.pos += digits;
        self.src[start..self.pos].parse().or_else(|_| self.err(start, "number too large"))
    }

    fn monomial(&mut self) -> Result<MultiIndex, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut entries: Vec<(u32, u32)> = Vec::new();
        while self.peek() == Some('z') {
            let at = self.pos;
            self.pos += 1;
            let k = self.int()?;
            let n = if self.eat('^') { self.int()? } else { 1 };
            if k == 0 {
                return self.err(at + 1, "arity must be positive");
            }
            if n == 0 {
                return self.err(at, "exponent must be positive");
            }
            entries.push((k, n));
            self.skip_ws();
        }
        if entries.is_empty() {
            return self.err(start, "expected 'z'");
        }
        let mut merged = std::collections::BTreeMap::new();
        for (k, n) in entries {
            *merged.entry(k).or_insert(0) += n;
        }
        MultiIndex::new(merged).or_else(|e| self.err(start, e.to_string()))
    }

    fn diagram(&mut self) -> Result<Diagram, ParseError> {
        self.skip_ws();
        let start = self.pos;
        self.expect('n')?;
        self.expect('=')?;
        let n = self.int()?;
        self.expect(';')?;
        self.expect('e')?;
        self.expect('=')?;
        let mut edges = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            let u = self.int()?;
            self.expect('-')?;
            let v = self.int()?;
            if u == 0 || v == 0 || u > n || v > n {
                return self.err(at, format!("vertices are numbered 1..={n}"));
            }
            edges.push((u - 1, v - 1));
            if !self.eat(',') {
                break;
            }
        }
        Diagram::new(n, &edges).or_else(|e| self.err(start, e.to_string()))
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('z') => self.monomial().map(Item::M),
            Some('n') => self.diagram().map(Item::F),
            Some('[') => {
                self.pos += 1;
                let d = self.diagram()?;
                self.expect(']')?;
                Ok(Item::F(d))
            }
            _ => self.err(self.pos, "expected a monomial, a diagram or '1'"),
        }
    }
}

enum Item {
    M(MultiIndex),
    F(Diagram),
}

/// Parse any expression. A single item is returned bare; "1" and
/// products with " . " are forests.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    if c.rest().trim_end() == "1" {
        return Ok(Expr::MIForest(MIForest::unit()));
    }
    let mut items = vec![(c.pos, c.item()?)];
    while c.eat('.') {
        c.skip_ws();
        items.push((c.pos, c.item()?));
    }
    if !c.at_end() {
        return c.err(c.pos, "unexpected trailing input");
    }
    let single = items.len() == 1;
    let mut ms = Vec::new();
    let mut ds = Vec::new();
    for (at, item) in items {
        match item {
            Item::M(m) if ds.is_empty() => ms.push(m),
            Item::F(d) if ms.is_empty() => ds.push(d),
            _ => return c.err(at, "cannot mix monomials and diagrams in one forest"),
        }
    }
    Ok(match (single, ms.is_empty()) {
        (true, false) => Expr::MultiIndex(ms.pop().unwrap()),
        (true, true) => Expr::Diagram(ds.pop().unwrap()),
        (false, false) => Expr::MIForest(MIForest::new(ms)),
        (false, true) => Expr::DiagForest(DiagForest::new(ds.iter().map(Diagram::canonicalize).collect())),
    })
}

pub fn parse_multi_index(text: &str) -> Result<MultiIndex, ParseError> {
    match parse_expression(text)? {
        Expr::MultiIndex(m) => Ok(m),
        _ => Err(ParseError { offset: 0, message: "expected a single monomial".into() }),
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram, ParseError> {
    match parse_expression(text)? {
        Expr::Diagram(d) => Ok(d),
        _ => Err(ParseError { offset: 0, message: "expected a single diagram".into() }),
    }
}

pub fn parse_mi_forest(text: &str) -> Result<MIForest, ParseError> {
    match parse_expression(text)? {
        Expr::MultiIndex(m) => Ok(MIForest::single(m)),
        Expr::MIForest(f) => Ok(f),
        _ => Err(ParseError { offset: 0, message: "expected a forest of monomials".into() }),
    }
}

pub fn parse_diag_forest(text: &str) -> Result<DiagForest, ParseError> {
    match parse_expression(text)? {
        Expr::Diagram(d) => Ok(DiagForest::single(d.canonicalize())),
        Expr::DiagForest(f) => Ok(f),
        Expr::MIForest(f) if f.is_unit() => Ok(DiagForest::unit()),
        _ => Err(ParseError { offset: 0, message: "expected a forest of diagrams".into() }),
    }
}

pub fn parse_canon(text: &str) -> Result<CanonDiagram, ParseError> {
    parse_diagram(text).map(|d| d.canonicalize())
}

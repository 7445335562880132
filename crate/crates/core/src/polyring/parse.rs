//! The shared expression grammar (version 1).
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' (integer | primary))*
//! primary := integer | 'x'<i> | 'h' | 'dx'<i> | 'D[' slot ('|' slot)* ']' | '(' expr ')'
//! slot    := [<i> (',' <i>)*]
//! ```
//!
//! `^` followed by an integer literal is a power; anything else makes it a
//! wedge of polyvectors. `/` divides by a nonzero rational constant only.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Ambient, Poly};
use crate::dpoly::{MultiIndex, PolyDiffOp};
use crate::error::{Error, Result};
use crate::series::{Linear, Series};
use crate::tpoly::{merge, PolyVec};
use crate::Q;

/// Which graded space a parsed value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Fun,
    Vec,
    Op,
}

/// A parsed `h`-series in one of the three value spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Fun(Series<Poly>),
    Vec(Series<PolyVec>),
    Op(Series<PolyDiffOp>),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Fun(_) => Kind::Fun,
            Value::Vec(_) => Kind::Vec,
            Value::Op(_) => Kind::Op,
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Value::Fun(_) => -1,
            Value::Vec(s) => s.coeff(0).degree(),
            Value::Op(s) => s.coeff(0).degree(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Fun(s) => write!(f, "{s}"),
            Value::Vec(s) => write!(f, "{s}"),
            Value::Op(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    H,
    Dx(usize),
    DOpen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    RBracket,
    Pipe,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, nvars: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let digits_at = |start: usize| {
        let mut j = start;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ']' => Some(Tok::RBracket),
            '|' => Some(Tok::Pipe),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let j = digits_at(i);
            let s: String = chars[i..j].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digit run")),
                line: l0,
                col: c0,
            });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if word == "h" {
                Tok::H
            } else if word == "D" && chars.get(j) == Some(&'[') {
                j += 1;
                Tok::DOpen
            } else if let Some(idx) = indexed(&word, "dx") {
                check_index(idx, nvars, l0, c0)?;
                Tok::Dx(idx - 1)
            } else if let Some(idx) = indexed(&word, "x") {
                if idx == 0 || idx > nvars {
                    return Err(Error::UnknownVariable {
                        name: word,
                        line: l0,
                        column: c0,
                    });
                }
                Tok::Var(idx - 1)
            } else {
                return Err(Error::UnknownVariable {
                    name: word,
                    line: l0,
                    column: c0,
                });
            };
            out.push(Token { tok, line: l0, col: c0 });
            col += j - i;
            i = j;
            continue;
        }
        return Err(syntax(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

fn indexed(word: &str, prefix: &str) -> Option<usize> {
    let rest = word.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn check_index(idx: usize, nvars: usize, line: usize, column: usize) -> Result<()> {
    if idx == 0 || idx > nvars {
        return Err(Error::IndexOutOfRange {
            index: idx,
            max: nvars,
            line,
            column,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    One,
    Wedge(Vec<usize>),
    Slots(Vec<MultiIndex>),
}

impl Atom {
    fn signature(&self) -> (Kind, i32) {
        match self {
            Atom::One => (Kind::Fun, -1),
            Atom::Wedge(v) => (Kind::Vec, v.len() as i32 - 1),
            Atom::Slots(s) => (Kind::Op, s.len() as i32 - 1),
        }
    }
}

/// Intermediate value: `Σ h^j · f · atom`, truncated at the ambient order.
#[derive(Debug, Clone)]
struct Val {
    terms: BTreeMap<(usize, Atom), Poly>,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    amb: &'a Ambient,
}

impl Val {
    fn empty() -> Self {
        Val { terms: BTreeMap::new() }
    }

    fn single(hpow: usize, atom: Atom, coeff: Poly, order: usize) -> Self {
        let mut v = Val::empty();
        if hpow <= order {
            v.push(hpow, atom, coeff);
        }
        v
    }

    fn push(&mut self, hpow: usize, atom: Atom, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let key = (hpow, atom);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn signature(&self) -> Option<(Kind, i32)> {
        self.terms.keys().next().map(|(_, a)| a.signature())
    }

    fn as_constant(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let ((h, a), c) = self.terms.iter().next().unwrap();
        if *h != 0 || *a != Atom::One {
            return None;
        }
        c.as_constant()
    }

    fn scale(&self, c: &Q) -> Val {
        let mut out = Val::empty();
        for ((h, a), f) in &self.terms {
            out.push(*h, a.clone(), f.scale(c));
        }
        out
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok != tok {
            return Err(syntax(t.line, t.col, format!("expected {what}")));
        }
        Ok(t)
    }

    fn add(&self, a: Val, b: Val, negate: bool, at: &Token) -> Result<Val> {
        if let (Some(sa), Some(sb)) = (a.signature(), b.signature()) {
            if sa != sb {
                return Err(syntax(at.line, at.col, "terms of different kinds or degrees are added"));
            }
        }
        let mut out = a;
        for ((h, atom), c) in b.terms {
            out.push(h, atom, if negate { -&c } else { c });
        }
        Ok(out)
    }

    fn mul(&self, a: &Val, b: &Val, at: &Token) -> Result<Val> {
        let mut out = Val::empty();
        for ((ha, aa), fa) in &a.terms {
            for ((hb, ab), fb) in &b.terms {
                let h = ha + hb;
                if h > self.amb.order {
                    continue;
                }
                let atom = match (aa, ab) {
                    (Atom::One, x) | (x, Atom::One) => x.clone(),
                    _ => {
                        return Err(syntax(
                            at.line,
                            at.col,
                            "`*` multiplies by functions only; use `^` to wedge polyvectors",
                        ))
                    }
                };
                out.push(h, atom, fa * fb);
            }
        }
        Ok(out)
    }

    fn wedge(&self, a: &Val, b: &Val, at: &Token) -> Result<Val> {
        let mut out = Val::empty();
        for ((ha, aa), fa) in &a.terms {
            for ((hb, ab), fb) in &b.terms {
                let (Atom::Wedge(ia), Atom::Wedge(ib)) = (aa, ab) else {
                    return Err(syntax(at.line, at.col, "wedge needs polyvectors of degree >= 0 on both sides"));
                };
                let h = ha + hb;
                if h > self.amb.order {
                    continue;
                }
                if let Some((odd, idx)) = merge(ia, ib) {
                    let c = fa * fb;
                    out.push(h, Atom::Wedge(idx), if odd { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = Val::empty();
        let mut first = true;
        loop {
            let t = self.peek().clone();
            let negate = match t.tok {
                Tok::Plus => {
                    self.next();
                    false
                }
                Tok::Minus => {
                    self.next();
                    true
                }
                _ if first => false,
                _ => break,
            };
            let term = self.term()?;
            acc = self.add(acc, term, negate, &t)?;
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.factor()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Star => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = self.mul(&acc, &rhs, &t)?;
                }
                Tok::Slash => {
                    self.next();
                    let rhs = self.factor()?;
                    match rhs.as_constant() {
                        Some(c) if !Zero::is_zero(&c) => acc = acc.scale(&(Q::one() / c)),
                        Some(_) => return Err(syntax(t.line, t.col, "division by zero")),
                        None => return Err(syntax(t.line, t.col, "division only by a rational constant")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Val> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(self.factor()?.scale(&-Q::one()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val> {
        let mut acc = self.primary()?;
        while self.peek().tok == Tok::Caret {
            let caret = self.next();
            if let Tok::Int(n) = &self.peek().tok {
                let n: u32 = n
                    .try_into()
                    .map_err(|_| syntax(caret.line, caret.col, "exponent too large"))?;
                self.next();
                if let Some((kind, _)) = acc.signature() {
                    if kind != Kind::Fun {
                        return Err(syntax(caret.line, caret.col, "only functions can be raised to a power"));
                    }
                }
                let mut p = Val::single(0, Atom::One, Poly::one(self.amb.nvars), self.amb.order);
                for _ in 0..n {
                    p = self.mul(&p, &acc, &caret)?;
                }
                acc = p;
            } else {
                let rhs = self.primary()?;
                acc = self.wedge(&acc, &rhs, &caret)?;
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Val> {
        let t = self.next();
        let (n, order) = (self.amb.nvars, self.amb.order);
        Ok(match t.tok {
            Tok::Int(v) => Val::single(0, Atom::One, Poly::constant(n, Q::from_integer(v)), order),
            Tok::Var(i) => Val::single(0, Atom::One, Poly::var(n, i), order),
            Tok::H => Val::single(1, Atom::One, Poly::one(n), order),
            Tok::Dx(i) => Val::single(0, Atom::Wedge(vec![i]), Poly::one(n), order),
            Tok::DOpen => {
                let slots = self.slots()?;
                Val::single(0, Atom::Slots(slots), Poly::one(n), order)
            }
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                v
            }
            Tok::End => return Err(syntax(t.line, t.col, "unexpected end of input")),
            _ => return Err(syntax(t.line, t.col, "expected a number, variable, `h`, `dx<i>`, `D[` or `(`")),
        })
    }

    fn slots(&mut self) -> Result<Vec<MultiIndex>> {
        let n = self.amb.nvars;
        let mut slots = vec![vec![0u32; n]];
        loop {
            let t = self.next();
            match t.tok {
                Tok::RBracket => return Ok(slots),
                Tok::Pipe => slots.push(vec![0; n]),
                Tok::Int(v) => {
                    let idx: usize = (&v).try_into().unwrap_or(usize::MAX);
                    check_index(idx, n, t.line, t.col)?;
                    slots.last_mut().unwrap()[idx - 1] += 1;
                    match self.peek().tok {
                        Tok::Comma => {
                            self.next();
                            if !matches!(self.peek().tok, Tok::Int(_)) {
                                let p = self.peek();
                                return Err(syntax(p.line, p.col, "expected a variable index after `,`"));
                            }
                        }
                        Tok::Pipe | Tok::RBracket => {}
                        _ => {
                            let p = self.peek();
                            return Err(syntax(p.line, p.col, "expected `,`, `|` or `]` in operator slot"));
                        }
                    }
                }
                _ => return Err(syntax(t.line, t.col, "expected a variable index, `|` or `]`")),
            }
        }
    }
}

fn parse_val(text: &str, amb: &Ambient) -> Result<Val> {
    let toks = lex(text, amb.nvars)?;
    let mut p = Parser { toks, pos: 0, amb };
    if p.peek().tok == Tok::End {
        let t = p.peek();
        return Err(syntax(t.line, t.col, "empty expression"));
    }
    let v = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.line, t.col, "unexpected trailing input"));
    }
    Ok(v)
}

fn build(v: Val, amb: &Ambient, kind: Kind, degree: i32) -> Value {
    let n = amb.nvars;
    let mut levels: Vec<Vec<(Atom, Poly)>> = vec![Vec::new(); amb.order + 1];
    for ((h, a), c) in v.terms {
        levels[h].push((a, c));
    }
    match kind {
        Kind::Fun => Value::Fun(Series::new(
            levels
                .into_iter()
                .map(|l| l.into_iter().fold(Poly::zero(n), |acc, (_, c)| &acc + &c))
                .collect(),
        )),
        Kind::Vec => Value::Vec(Series::new(
            levels
                .into_iter()
                .map(|l| {
                    PolyVec::from_terms(
                        n,
                        degree,
                        l.into_iter().map(|(a, c)| match a {
                            Atom::Wedge(idx) => (idx, c),
                            _ => (Vec::new(), c),
                        }),
                    )
                })
                .collect(),
        )),
        Kind::Op => Value::Op(Series::new(
            levels
                .into_iter()
                .map(|l| {
                    PolyDiffOp::from_terms(
                        n,
                        degree,
                        l.into_iter().map(|(a, c)| match a {
                            Atom::Slots(s) => (s, c),
                            _ => (Vec::new(), c),
                        }),
                    )
                })
                .collect(),
        )),
    }
}

/// Parse with the kind inferred from the atoms; constants and `0` are functions.
pub fn parse_expr(text: &str, amb: &Ambient) -> Result<Value> {
    let v = parse_val(text, amb)?;
    let (kind, degree) = v.signature().unwrap_or((Kind::Fun, -1));
    Ok(build(v, amb, kind, degree))
}

fn parse_as(text: &str, amb: &Ambient, kind: Kind, degree: i32) -> Result<Value> {
    let v = parse_val(text, amb)?;
    match v.signature() {
        None => {}
        // functions double as degree -1 polyvectors and cochains
        Some((Kind::Fun, -1)) if degree == -1 => {}
        Some((k, d)) if k == kind && d == degree => {}
        Some((k, d)) => {
            let what = |k: Kind, d: i32| match k {
                Kind::Fun => "a function".to_string(),
                Kind::Vec => format!("a polyvector of degree {d}"),
                Kind::Op => format!("an operator of degree {d}"),
            };
            return Err(syntax(1, 1, format!("expected {}, found {}", what(kind, degree), what(k, d))));
        }
    }
    Ok(build(v, amb, kind, degree))
}

pub fn parse_fun(text: &str, amb: &Ambient) -> Result<Series<Poly>> {
    match parse_as(text, amb, Kind::Fun, -1)? {
        Value::Fun(s) => Ok(s),
        _ => unreachable!(),
    }
}

pub fn parse_vec(text: &str, amb: &Ambient, degree: i32) -> Result<Series<PolyVec>> {
    match parse_as(text, amb, Kind::Vec, degree)? {
        Value::Vec(s) => Ok(s),
        _ => unreachable!(),
    }
}

pub fn parse_op(text: &str, amb: &Ambient, degree: i32) -> Result<Series<PolyDiffOp>> {
    match parse_as(text, amb, Kind::Op, degree)? {
        Value::Op(s) => Ok(s),
        _ => unreachable!(),
    }
}

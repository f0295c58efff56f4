//! Text format for polynomials and formula files.
//!
//! ```text
//! # comment
//! [name] expr ;
//! [name] lhs = rhs ;      stored as lhs - rhs
//! ```
//!
//! `expr := ['+'|'-'] term (('+'|'-') term)*`,
//! `term := factor (('*'|'/') factor)*`,
//! `factor := integer | symbol | '(' expr ')'`, each optionally followed by `^ integer`.
//! Symbols: `u1..`, `lam0..`, `x`, `y`, `z`, `w`, `xi`, `np1..` (power sums),
//! `p[i,j,...]`, `Q[i,j,...]`, the last two optionally suffixed `{u}` or `{v}`.
//! Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::rational::Rational;
use crate::algebra::{AbelianSymbol, Point, Poly, Registry, SymbolKind, Var, VariableRegistry, WeightScheme};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn parse_err(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: col,
        message: message.into(),
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn new(src: &str, line: usize, col: usize) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line,
            col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> BigInt {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s.parse().expect("digits")
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let (line, col) = (self.line, self.col);
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(parse_err(line, col, format!("expected {what}")));
        }
        self.number()
            .to_u32()
            .ok_or_else(|| parse_err(line, col, format!("{what} too large")))
    }

    fn symbol(&mut self, kind: SymbolKind, line: usize, col: usize) -> Result<Var> {
        self.skip_ws();
        if self.bump() != Some('[') {
            return Err(parse_err(line, col, "expected '[' after symbol head"));
        }
        let mut indices = Vec::new();
        loop {
            self.skip_ws();
            let i = self.small_int("symbol index")?;
            let i = u8::try_from(i).map_err(|_| parse_err(line, col, "symbol index too large"))?;
            indices.push(i);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(']') => break,
                _ => return Err(parse_err(self.line, self.col, "expected ',' or ']' in symbol")),
            }
        }
        let mut point = Point::Base;
        if self.peek() == Some('{') {
            self.bump();
            point = match self.bump() {
                Some('u') => Point::U,
                Some('v') => Point::V,
                _ => return Err(parse_err(self.line, self.col, "point tag must be {u} or {v}")),
            };
            if self.bump() != Some('}') {
                return Err(parse_err(self.line, self.col, "expected '}'"));
            }
        }
        AbelianSymbol::new(kind, indices, point)
            .map(Var::Sym)
            .map_err(|e| parse_err(line, col, e.to_string()))
    }

    fn ident(&mut self, line: usize, col: usize) -> Result<Var> {
        let mut name = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            name.push(c);
            self.bump();
        }
        let idx = |lx: &mut Self| -> Result<u32> { lx.small_int("variable index") };
        let var = match name.as_str() {
            "p" => return self.symbol(SymbolKind::P, line, col),
            "Q" => return self.symbol(SymbolKind::Q, line, col),
            "x" => Var::X,
            "y" => Var::Y,
            "z" => Var::Z,
            "w" => Var::W,
            "xi" => Var::Xi,
            "u" => {
                let i = idx(self)?;
                if i == 0 || i > 255 {
                    return Err(parse_err(line, col, "u-index out of range"));
                }
                Var::U(i as u8)
            }
            "lam" => {
                let j = idx(self)?;
                if j > 255 {
                    return Err(parse_err(line, col, "lambda index out of range"));
                }
                Var::Lam(j as u8)
            }
            "np" => {
                let k = idx(self)?;
                if k == 0 || k > u16::MAX as u32 {
                    return Err(parse_err(line, col, "power-sum index out of range"));
                }
                Var::Newton(k as u16)
            }
            _ => return Err(parse_err(line, col, format!("unknown variable '{name}'"))),
        };
        if self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            return Err(parse_err(line, col, format!("unknown variable starting '{name}'")));
        }
        Ok(var)
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '0'..='9' => Tok::Num(self.number()),
                'a'..='z' | 'A'..='Z' => Tok::Var(self.ident(line, col)?),
                _ => {
                    self.bump();
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '=' => Tok::Eq,
                        _ => return Err(parse_err(line, col, format!("unexpected character '{c}'"))),
                    }
                }
            };
            out.push(Token { tok, line, col });
        }
        Ok(out)
    }
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    reg: Registry,
    end: (usize, usize),
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(&self.reg);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let (line, col) = self.here();
                    let f = self.power()?;
                    if !f.is_constant() || f.is_zero() {
                        return Err(parse_err(line, col, "division only by nonzero constants"));
                    }
                    acc = acc.scale(&(Rational::from_integer(1.into()) / f.constant_term()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.factor()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let (line, col) = self.here();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n
                        .to_u32()
                        .filter(|&e| e <= u16::MAX as u32)
                        .ok_or_else(|| parse_err(line, col, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(parse_err(line, col, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(&self.reg, Rational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Poly::var(&self.reg, &v)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    let (l, c) = self.here();
                    return Err(parse_err(l, c, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(t) => Err(parse_err(line, col, format!("unexpected token {t:?}"))),
            None => Err(parse_err(line, col, "unexpected end of input")),
        }
    }
}

fn parse_tokens(toks: &[Token], scheme: Option<&WeightScheme>, end: (usize, usize)) -> Result<Poly> {
    let vars: Vec<Var> = toks
        .iter()
        .filter_map(|t| match &t.tok {
            Tok::Var(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    let reg = VariableRegistry::new(vars, scheme);
    let mut p = Parser {
        toks,
        pos: 0,
        reg,
        end,
    };
    let lhs = p.expr()?;
    let value = if p.peek() == Some(&Tok::Eq) {
        p.pos += 1;
        let rhs = p.expr()?;
        &lhs - &rhs
    } else {
        lhs
    };
    if p.pos != toks.len() {
        let (line, col) = p.here();
        return Err(parse_err(line, col, "trailing input after expression"));
    }
    Ok(value.compact())
}

/// Parse one expression (optionally `lhs = rhs`) into a polynomial over the
/// registry of the variables it uses.
pub fn parse_formula(text: &str, scheme: Option<&WeightScheme>) -> Result<Poly> {
    let toks = Lexer::new(text, 1, 1).tokens()?;
    if toks.is_empty() {
        return Err(parse_err(1, 1, "empty expression"));
    }
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    parse_tokens(&toks, scheme, end)
}

/// Canonical text of a polynomial.
pub fn serialize(p: &Poly) -> String {
    p.to_string()
}

/// A named formula from a data file.
#[derive(Clone, Debug)]
pub struct NamedFormula {
    pub name: String,
    pub line: usize,
    pub poly: Poly,
}

/// Parse a formula file of `[name] expr ;` blocks.
pub fn parse_file(text: &str, scheme: Option<&WeightScheme>) -> Result<Vec<NamedFormula>> {
    let mut out: Vec<NamedFormula> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    loop {
        // skip whitespace and comments
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                advance(c, &mut line, &mut col);
                i += 1;
            } else if c == '#' {
                while i < chars.len() && chars[i] != '\n' {
                    advance(chars[i], &mut line, &mut col);
                    i += 1;
                }
            } else {
                break;
            }
        }
        if i >= chars.len() {
            break;
        }
        if chars[i] != '[' {
            return Err(parse_err(line, col, "expected '[name]' to start a block"));
        }
        let (bline, bcol) = (line, col);
        advance('[', &mut line, &mut col);
        i += 1;
        let mut name = String::new();
        while i < chars.len() && chars[i] != ']' {
            if chars[i] == '\n' {
                return Err(parse_err(bline, bcol, "unterminated block name"));
            }
            name.push(chars[i]);
            advance(chars[i], &mut line, &mut col);
            i += 1;
        }
        if i >= chars.len() {
            return Err(parse_err(bline, bcol, "unterminated block name"));
        }
        advance(']', &mut line, &mut col);
        i += 1;
        let name = name.trim().to_string();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
            return Err(parse_err(bline, bcol, format!("invalid block name '{name}'")));
        }
        if out.iter().any(|f| f.name == name) {
            return Err(parse_err(bline, bcol, format!("duplicate block name '{name}'")));
        }
        let (eline, ecol) = (line, col);
        let start = i;
        while i < chars.len() && chars[i] != ';' {
            if chars[i] == '[' && chars[start..i].iter().all(|c| c.is_whitespace()) {
                break;
            }
            i += 1;
        }
        if i >= chars.len() || chars[i] != ';' {
            return Err(parse_err(bline, bcol, format!("block '{name}' is missing its ';'")));
        }
        let body: String = chars[start..i].iter().collect();
        let toks = Lexer::new(&body, eline, ecol).tokens()?;
        for c in body.chars() {
            advance(c, &mut line, &mut col);
        }
        advance(';', &mut line, &mut col);
        i += 1;
        if toks.is_empty() {
            return Err(parse_err(eline, ecol, format!("block '{name}' is empty")));
        }
        let poly = parse_tokens(&toks, scheme, (line, col))?;
        out.push(NamedFormula {
            name,
            line: bline,
            poly,
        });
    }
    Ok(out)
}

/// Canonical file text for named formulas.
pub fn serialize_file(formulas: &[NamedFormula]) -> String {
    let mut s = String::new();
    for f in formulas {
        s.push_str(&format!("[{}] {} ;\n", f.name, serialize(&f.poly)));
    }
    s
}

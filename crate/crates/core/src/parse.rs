//! Problem files and polynomial expressions.
//!
//! A problem file has one `key: value` entry per line (`#` starts a
//! comment); a ` / ` followed by a key also separates entries, so a problem
//! fits on one line:
//!
//! ```text
//! char: 0 / vars: x0 x1 / b: x0^3 + x0*x1 + x1^5
//! ```
//!
//! Expressions use `+ - * / ^`, integer literals and parentheses. Exponents
//! may be negative; `/` is exact division and the parsed value is a [`Frac`].

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Frac, Poly, Ring};
use crate::scalar::FieldSpec;

const KEYS: [&str; 5] = ["char", "vars", "b", "max_depth", "series_order"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub b_text: String,
    pub max_depth: Option<usize>,
    pub series_order: Option<usize>,
}

impl ProblemSpec {
    pub fn ring(&self) -> Arc<Ring> {
        Ring::new(self.field, self.vars.clone())
    }

    pub fn polynomial(&self) -> Poly {
        parse_poly(&self.ring(), &self.b_text).expect("validated at parse time")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    Int(BigInt),
    Var(String, usize),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::parse(
                line,
                col,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    Ok(out)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c @ ('+' | '-'))) => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c @ ('*' | '/'))) => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let e: i64 = n
                        .try_into()
                        .map_err(|_| self.err("exponent out of range"))?;
                    self.pos += 1;
                    return Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => return Err(self.err("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Ast::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Ast::Var(s, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn parse_ast(text: &str, line: usize, col0: usize) -> Result<Ast> {
    let toks = tokenize(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col,
    };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

fn eval(ast: &Ast, ring: &Arc<Ring>, line: usize) -> Result<Frac> {
    Ok(match ast {
        Ast::Int(n) => Frac::from_poly(Poly::constant(ring, ring.field().from_bigint(n))),
        Ast::Var(name, col) => match ring.index_of(name) {
            Some(i) => Frac::from_poly(Poly::var(ring, i)),
            None => {
                return Err(Error::parse(
                    line,
                    *col,
                    format!("unknown variable `{name}`"),
                ))
            }
        },
        Ast::Neg(a) => eval(a, ring, line)?.neg(),
        Ast::Pow(a, e) => eval(a, ring, line)?.powi(*e)?,
        Ast::Bin(op, a, b) => {
            let (x, y) = (eval(a, ring, line)?, eval(b, ring, line)?);
            match op {
                '+' => x.add(&y),
                '-' => x.sub(&y),
                '*' => x.mul(&y),
                _ => x.div(&y)?,
            }
        }
    })
}

/// Parses a rational expression over `ring`.
pub fn parse_frac(ring: &Arc<Ring>, text: &str) -> Result<Frac> {
    eval(&parse_ast(text, 1, 1)?, ring, 1)
}

/// Parses an expression that must simplify to a (Laurent) polynomial.
pub fn parse_poly(ring: &Arc<Ring>, text: &str) -> Result<Poly> {
    parse_frac(ring, text)?
        .into_poly()
        .ok_or_else(|| Error::parse(1, 1, "expression is not a polynomial"))
}

/// Splits a physical line into `(column, entry)` pieces on ` / key:`.
fn split_entries(line: &str) -> Vec<(usize, &str)> {
    let mut cuts = vec![0];
    for (i, _) in line.match_indices('/') {
        let rest = line[i + 1..].trim_start();
        let is_key = KEYS.iter().any(|k| {
            rest.strip_prefix(k)
                .is_some_and(|r| r.trim_start().starts_with(':'))
        });
        if is_key {
            cuts.push(i);
        }
    }
    cuts.push(line.len());
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let start = if w[0] == 0 { 0 } else { w[0] + 1 };
        let piece = &line[start..w[1]];
        let lead = piece.len() - piece.trim_start().len();
        out.push((line[..start + lead].chars().count() + 1, piece.trim()));
    }
    out
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut b: Option<(String, usize, usize)> = None;
    let mut max_depth = None;
    let mut series_order = None;
    let mut b_ast = None;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        for (col, entry) in split_entries(line) {
            let Some((key, value)) = entry.split_once(':') else {
                return Err(Error::parse(line_no, col, "expected `key: value`"));
            };
            let key = key.trim();
            let vcol = col + key.len() + 1 + (value.len() - value.trim_start().len());
            let value = value.trim();
            match key {
                "char" => {
                    let c: u64 = value.parse().map_err(|_| {
                        Error::parse(line_no, vcol, "characteristic must be an integer")
                    })?;
                    field = Some(FieldSpec::new(c)?);
                }
                "vars" => {
                    let names: Vec<String> = value
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                    let mut seen = HashSet::new();
                    for n in &names {
                        let ok = n
                            .chars()
                            .next()
                            .is_some_and(|c| c.is_alphabetic() || c == '_')
                            && n.chars().all(|c| c.is_alphanumeric() || c == '_');
                        if !ok {
                            return Err(Error::parse(
                                line_no,
                                vcol,
                                format!("bad variable name `{n}`"),
                            ));
                        }
                        if !seen.insert(n.clone()) {
                            return Err(Error::parse(
                                line_no,
                                vcol,
                                format!("duplicate variable `{n}`"),
                            ));
                        }
                    }
                    if names.is_empty() {
                        return Err(Error::parse(line_no, vcol, "no variables declared"));
                    }
                    vars = Some(names);
                }
                "b" => {
                    b_ast = Some(parse_ast(value, line_no, vcol)?);
                    b = Some((value.to_string(), line_no, vcol));
                }
                "max_depth" | "series_order" => {
                    let n: usize = value.parse().map_err(|_| {
                        Error::parse(line_no, vcol, "expected a non-negative integer")
                    })?;
                    if key == "max_depth" {
                        max_depth = Some(n);
                    } else {
                        series_order = Some(n);
                    }
                }
                other => {
                    return Err(Error::parse(line_no, col, format!("unknown key `{other}`")));
                }
            }
        }
    }

    let (b_text, b_line, b_col) = b.ok_or_else(|| Error::Invalid("missing `b:` entry".into()))?;
    let vars = vars.ok_or_else(|| Error::Invalid("missing `vars:` entry".into()))?;
    let field = field.unwrap_or(FieldSpec::RATIONALS);
    let ring = Ring::new(field, vars.clone());
    let value = eval(b_ast.as_ref().expect("set with b"), &ring, b_line)?;
    let poly = value
        .into_poly()
        .ok_or_else(|| Error::parse(b_line, b_col, "b must be a polynomial"))?;
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !poly.is_laurent_free() {
        return Err(Error::parse(b_line, b_col, "b has negative exponents"));
    }
    Ok(ProblemSpec {
        field,
        vars,
        b_text,
        max_depth,
        series_order,
    })
}

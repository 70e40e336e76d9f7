//! The algebra description language.
//!
//! ```text
//! algebra s2
//! field cyclotomic 4
//! param a ; a := 4
//! gens x, y
//! w = x*x*y*y + a*x*y*y*x + a^2*y*y*x*x - a*y*x*x*y ;
//! ```
//!
//! A file declares either `w = <poly> ;` or `rels = <poly> ; <poly> ; ... ;`.
//! Polynomials are built from integers, `/`, `^` (integer, or `{p/q}` for
//! coefficients), generators, parameters, and the root of unity `z`
//! (`zeta` when `z` is a generator). `#` starts a comment.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coeff, Context, FreeElement, Word};
use crate::error::{Error, Result};
use crate::scalars::{Scalar, UnitScalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Assign,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line_no, col) = (li + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                Tok::Int(s.parse().expect("digits"))
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else if c == ':' && chars.get(i + 1) == Some(&'=') {
                i += 2;
                Tok::Assign
            } else if "+-*/^(){},;=".contains(c) {
                i += 1;
                Tok::Sym(c)
            } else {
                return Err(Error::Syntax { line: line_no, col, msg: format!("unexpected character `{c}`") });
            };
            out.push(Token { tok, line: line_no, col });
        }
    }
    let line = text.lines().count().max(1);
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(BigInt),
    Ident(String, usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize, usize),
    Pow(Box<Expr>, BigRational, usize, usize),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Tok::Sym('/') {
                let (l, c) = self.here();
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), l, c);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            let (l, c) = self.here();
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e, l, c));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<BigRational> {
        let close = if self.eat('{') {
            Some('}')
        } else if self.eat('(') {
            Some(')')
        } else {
            None
        };
        let neg = self.eat('-');
        let num = self.int()?;
        let mut r = BigRational::from_integer(num);
        if close.is_some() && self.eat('/') {
            let den = self.int()?;
            if den.is_zero() {
                return self.err("zero denominator in exponent");
            }
            r /= BigRational::from_integer(den);
        }
        if let Some(c) = close {
            self.expect(c)?;
        }
        Ok(if neg { -r } else { r })
    }

    fn atom(&mut self) -> Result<Expr> {
        let (l, c) = self.here();
        match self.bump() {
            Tok::Int(v) => Ok(Expr::Num(v)),
            Tok::Ident(s) => Ok(Expr::Ident(s, l, c)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(Error::Syntax { line: l, col: c, msg: "expected a term".into() }),
        }
    }
}

fn constant_part<C: Coeff>(e: &FreeElement<C>) -> Option<Option<C>> {
    if e.is_zero() {
        return Some(None);
    }
    if e.len() == 1 {
        if let Some(c) = e.coeff(&Word::empty()) {
            return Some(Some(c.clone()));
        }
    }
    None
}

fn eval<C: Coeff>(e: &Expr, ctx: &Arc<Context>) -> Result<FreeElement<C>> {
    Ok(match e {
        Expr::Num(v) => match C::from_rational(&BigRational::from_integer(v.clone()))? {
            Some(c) => FreeElement::constant(ctx, c),
            None => FreeElement::zero(ctx),
        },
        Expr::Ident(name, line, col) => {
            if let Some(i) = ctx.gen_index(name) {
                FreeElement::generator(ctx, i)?
            } else if let Some(j) = ctx.params().iter().position(|p| p == name) {
                FreeElement::constant(ctx, C::param(ctx, j)?)
            } else if name == ctx.root_name() {
                FreeElement::constant(ctx, C::root(ctx, &BigRational::one())?)
            } else {
                return Err(Error::Syntax { line: *line, col: *col, msg: format!("unknown identifier `{name}`") });
            }
        }
        Expr::Neg(a) => eval::<C>(a, ctx)?.neg(),
        Expr::Add(a, b) => eval::<C>(a, ctx)?.add(&eval(b, ctx)?)?,
        Expr::Sub(a, b) => eval::<C>(a, ctx)?.sub(&eval(b, ctx)?)?,
        Expr::Mul(a, b) => eval::<C>(a, ctx)?.mul(&eval(b, ctx)?)?,
        Expr::Div(a, b, line, col) => {
            let d = eval::<C>(b, ctx)?;
            match constant_part(&d) {
                Some(Some(c)) => eval::<C>(a, ctx)?.scale(&c.inv()?)?,
                Some(None) => return Err(Error::DivisionByZero),
                None => {
                    return Err(Error::Syntax { line: *line, col: *col, msg: "can only divide by a scalar".into() })
                }
            }
        }
        Expr::Pow(a, r, line, col) => {
            // z^k means ζ_N^k, with rational k allowed
            if let Expr::Ident(name, _, _) = a.as_ref() {
                if name == ctx.root_name() && ctx.gen_index(name).is_none() {
                    return Ok(FreeElement::constant(ctx, C::root(ctx, r)?));
                }
            }
            let base = eval::<C>(a, ctx)?;
            match constant_part(&base) {
                Some(Some(c)) => FreeElement::constant(ctx, c.pow_rational(ctx, r)?),
                Some(None) if r.is_positive() => FreeElement::zero(ctx),
                Some(None) => return Err(Error::DivisionByZero),
                None => {
                    let k = if r.is_integer() && !r.is_negative() { r.to_integer().to_u32() } else { None };
                    let Some(k) = k else {
                        return Err(Error::Syntax {
                            line: *line,
                            col: *col,
                            msg: "polynomials take nonnegative integer powers only".into(),
                        });
                    };
                    let mut acc = FreeElement::one(ctx);
                    for _ in 0..k {
                        acc = acc.mul(&base)?;
                    }
                    acc
                }
            }
        }
    })
}

/// Parses one polynomial in the given context.
pub fn parse_poly<C: Coeff>(text: &str, ctx: &Arc<Context>) -> Result<FreeElement<C>> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    p.eat(';');
    if *p.peek() != Tok::Eof {
        return p.err("unexpected trailing input");
    }
    eval(&e, ctx)
}

/// Parses a scalar expression such as `alpha^(-1/2)` or `-zeta^2`.
pub fn parse_scalar<C: Coeff>(text: &str, ctx: &Arc<Context>) -> Result<C> {
    let f = parse_poly::<C>(text, ctx)?;
    match constant_part(&f) {
        Some(Some(c)) => Ok(c),
        Some(None) => Err(Error::Invalid(format!("`{}` is zero", text.trim()))),
        None => Err(Error::Invalid(format!("`{}` is not a scalar", text.trim()))),
    }
}

/// Parses a comma-separated tuple of scalars, optionally wrapped in
/// parentheses; commas inside brackets do not split.
pub fn parse_tuple<C: Coeff>(text: &str, ctx: &Arc<Context>) -> Result<Vec<C>> {
    let mut text = text.trim();
    if text.starts_with('(') && matching_close(text) == Some(text.len() - 1) {
        text = &text[1..text.len() - 1];
    }
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts.iter().map(|s| parse_scalar(s, ctx)).collect()
}

fn matching_close(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// A parsed algebra file. Polynomials are kept as expressions so they can be
/// evaluated either with symbolic-unit or with field coefficients.
#[derive(Debug, Clone)]
pub struct AlgebraFile {
    pub name: String,
    /// Context with the file's parameter assignments applied.
    pub ctx: Arc<Context>,
    w: Option<Expr>,
    rels: Vec<Expr>,
}

const KEYWORDS: [&str; 6] = ["algebra", "field", "param", "gens", "w", "rels"];

impl AlgebraFile {
    pub fn has_w(&self) -> bool {
        self.w.is_some()
    }

    pub fn has_rels(&self) -> bool {
        !self.rels.is_empty()
    }

    pub fn w<C: Coeff>(&self, ctx: &Arc<Context>) -> Result<Option<FreeElement<C>>> {
        self.w.as_ref().map(|e| eval(e, ctx)).transpose()
    }

    pub fn rels<C: Coeff>(&self, ctx: &Arc<Context>) -> Result<Vec<FreeElement<C>>> {
        self.rels.iter().map(|e| eval(e, ctx)).collect()
    }

    pub fn w_unit(&self) -> Result<Option<FreeElement<UnitScalar>>> {
        self.w(&self.ctx)
    }

    pub fn w_field(&self, ctx: &Arc<Context>) -> Result<Option<FreeElement<Scalar>>> {
        self.w(ctx)
    }
}

/// Parses a whole algebra file.
pub fn parse_file(text: &str) -> Result<AlgebraFile> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut name = String::from("unnamed");
    let mut conductor: u32 = 1;
    let mut params: Vec<String> = Vec::new();
    let mut assigns: Vec<(String, Expr)> = Vec::new();
    let mut gens: Vec<String> = Vec::new();
    let mut w = None;
    let mut rels = Vec::new();
    loop {
        let (line, col) = p.here();
        let kw = match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) => s,
            _ => return p.err("expected a declaration"),
        };
        if *p.peek_at(1) == Tok::Assign {
            p.bump();
            p.bump();
            assigns.push((kw, p.expr()?));
            p.eat(';');
            continue;
        }
        p.bump();
        match kw.as_str() {
            "algebra" => name = p.ident()?,
            "field" => match p.ident()?.as_str() {
                "cyclotomic" => {
                    conductor = p.int()?.to_u32().filter(|&n| n > 0).ok_or(Error::Syntax {
                        line,
                        col,
                        msg: "conductor must be a positive integer".into(),
                    })?;
                }
                "rational" => conductor = 1,
                other => return p.err(format!("unknown field `{other}`")),
            },
            "param" => {
                params.push(p.ident()?);
                while p.eat(',') {
                    params.push(p.ident()?);
                }
                while *p.peek() == Tok::Sym(';') && *p.peek_at(2) == Tok::Assign {
                    p.bump();
                    let id = p.ident()?;
                    p.bump();
                    assigns.push((id, p.expr()?));
                }
            }
            "gens" => {
                gens.push(p.ident()?);
                while p.eat(',') {
                    gens.push(p.ident()?);
                }
            }
            "w" => {
                p.expect('=')?;
                w = Some(p.expr()?);
                p.expect(';')?;
            }
            "rels" => {
                p.expect('=')?;
                loop {
                    rels.push(p.expr()?);
                    if !p.eat(';') {
                        break;
                    }
                    let next_is_decl = match p.peek() {
                        Tok::Eof => true,
                        Tok::Ident(s) => {
                            matches!(p.peek_at(1), Tok::Sym('=') | Tok::Assign)
                                || (KEYWORDS.contains(&s.as_str()) && !gens.contains(s))
                        }
                        _ => false,
                    };
                    if next_is_decl {
                        break;
                    }
                }
            }
            other => return Err(Error::Syntax { line, col, msg: format!("unknown declaration `{other}`") }),
        }
    }
    if gens.is_empty() {
        return Err(Error::Invalid("no generators declared".into()));
    }
    let mut ctx = Context::from_parts(gens, conductor, params)?;
    for (id, e) in &assigns {
        let v = eval::<Scalar>(e, &ctx)?;
        let c = match constant_part(&v) {
            Some(Some(c)) => c,
            _ => return Err(Error::Invalid(format!("assignment to `{id}` is not a nonzero scalar"))),
        };
        ctx = ctx.assign(id, c)?;
    }
    if w.is_none() && rels.is_empty() {
        return Err(Error::Invalid("file declares neither `w` nor `rels`".into()));
    }
    Ok(AlgebraFile { name, ctx, w, rels })
}

//! Concrete syntax for polynomials, operators and Weyl-algebra elements.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := atom ("^" NAT)?
//! atom     := RATIONAL | "i" | VAR | "(" expr ")" | "-" factor
//! VAR      := ("x" | "dx" | "y" | "dy") NAT
//! RATIONAL := INT ("/" NAT)?
//! ```
//!
//! Juxtaposition is not multiplication. Products are read left to right as
//! compositions, so `dx1*x1` is `x1*dx1 + 1` while `x1*dx1` is itself.
//! Variables `y1..yN` / `dy1..dyN` live after `x1..xn` in extended rings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::diffop::DiffOp;
use crate::field::{FieldSpec, Scalar};
use crate::poly::{ExponentVector, Polynomial};
use crate::reduction::{LinearForm, PowerSumDecomposition};
use crate::weyl::WeylElement;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 256;
/// Largest nesting depth of parentheses and unary minus.
pub const MAX_DEPTH: usize = 128;
/// Largest total degree of any intermediate value while lowering.
pub const MAX_DEGREE: i64 = 512;
/// Largest number of term-by-term products in a single multiplication.
pub const MAX_WORK: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("`{0}` must be followed by a variable index")]
    MissingIndex(String),
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    #[error("variable index must be at least 1")]
    ZeroIndex,
    #[error("variable {0} out of range")]
    IndexOutOfRange(String),
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentTooLarge,
    #[error("nesting deeper than {MAX_DEPTH}")]
    TooDeep,
    #[error("expression too large to expand")]
    TooLarge,
    #[error("`i` is only available over qi")]
    ImaginaryOutsideGaussian,
    #[error("division by zero in literal")]
    DivisionByZero,
    #[error("expected a polynomial in x")]
    ExpectedPolynomial,
    #[error("expected an operator in dx")]
    ExpectedOperator,
    #[error("expected a product of linear forms in dx")]
    ExpectedLinearFactors,
}

/// A rejection, with the byte offset it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { offset, kind }
    }
}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    X,
    Dx,
    Y,
    Dy,
}

impl VarKind {
    fn prefix(self) -> &'static str {
        match self {
            VarKind::X => "x",
            VarKind::Dx => "dx",
            VarKind::Y => "y",
            VarKind::Dy => "dy",
        }
    }

    fn is_derivation(self) -> bool {
        matches!(self, VarKind::Dx | VarKind::Dy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpressionAst {
    Rational {
        numer: BigInt,
        denom: BigInt,
        offset: usize,
    },
    ImaginaryUnit {
        offset: usize,
    },
    Var {
        kind: VarKind,
        index: usize,
        offset: usize,
    },
    Neg(Box<ExpressionAst>),
    Add(Box<ExpressionAst>, Box<ExpressionAst>),
    Sub(Box<ExpressionAst>, Box<ExpressionAst>),
    Mul(Box<ExpressionAst>, Box<ExpressionAst>),
    Pow(Box<ExpressionAst>, u32),
}

impl ExpressionAst {
    fn visit_vars(&self, f: &mut impl FnMut(VarKind, usize)) {
        match self {
            ExpressionAst::Var { kind, index, .. } => f(*kind, *index),
            ExpressionAst::Rational { .. } | ExpressionAst::ImaginaryUnit { .. } => {}
            ExpressionAst::Neg(a) | ExpressionAst::Pow(a, _) => a.visit_vars(f),
            ExpressionAst::Add(a, b) | ExpressionAst::Sub(a, b) | ExpressionAst::Mul(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Whether any `x`/`y` and any `dx`/`dy` variables occur.
    pub fn variable_kinds(&self) -> (bool, bool) {
        let (mut coords, mut derivations) = (false, false);
        self.visit_vars(&mut |kind, _| {
            if kind.is_derivation() {
                derivations = true;
            } else {
                coords = true;
            }
        });
        (coords, derivations)
    }

    /// Largest `x`/`dx` index and largest `y`/`dy` index used (1-based, 0 if none).
    pub fn max_indices(&self) -> (usize, usize) {
        let (mut n, mut big_n) = (0, 0);
        self.visit_vars(&mut |kind, index| match kind {
            VarKind::X | VarKind::Dx => n = n.max(index),
            VarKind::Y | VarKind::Dy => big_n = big_n.max(index),
        });
        (n, big_n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(VarKind, usize),
    Imag,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("number {v}"),
            Tok::Var(k, i) => format!("variable {}{i}", k.prefix()),
            Tok::Imag => "`i`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> PResult<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let digits_end = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                pos = digits_end(pos);
                out.push((Tok::Int(text[start..pos].parse().unwrap()), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
                    pos += 1;
                }
                let word = &text[start..pos];
                let kind = match word {
                    "i" => {
                        out.push((Tok::Imag, start));
                        continue;
                    }
                    "x" => VarKind::X,
                    "dx" => VarKind::Dx,
                    "y" => VarKind::Y,
                    "dy" => VarKind::Dy,
                    _ => {
                        let c = word.chars().next().unwrap();
                        return Err(ParseError::new(start, ParseErrorKind::UnexpectedChar(c)));
                    }
                };
                let end = digits_end(pos);
                if end == pos {
                    return Err(ParseError::new(
                        start,
                        ParseErrorKind::MissingIndex(word.into()),
                    ));
                }
                let index: usize = text[pos..end].parse().map_err(|_| {
                    ParseError::new(
                        pos,
                        ParseErrorKind::IndexOutOfRange(text[start..end].into()),
                    )
                })?;
                if index == 0 {
                    return Err(ParseError::new(pos, ParseErrorKind::ZeroIndex));
                }
                pos = end;
                out.push((Tok::Var(kind, index), start));
                continue;
            }
            _ => {
                let c = text[start..].chars().next().unwrap();
                return Err(ParseError::new(start, ParseErrorKind::UnexpectedChar(c)));
            }
        };
        pos += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &'static str) -> PResult<T> {
        Err(ParseError::new(
            self.offset(),
            ParseErrorKind::UnexpectedToken {
                found: self.peek().describe(),
                expected,
            },
        ))
    }

    fn expr(&mut self) -> PResult<ExpressionAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExpressionAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExpressionAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<ExpressionAst> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = ExpressionAst::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<ExpressionAst> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        match self.bump().0 {
            Tok::Int(v) => {
                let exp = u32::try_from(&v)
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| ParseError::new(offset, ParseErrorKind::ExponentTooLarge))?;
                Ok(ExpressionAst::Pow(Box::new(base), exp))
            }
            _ => {
                self.pos -= 1;
                self.unexpected("a natural-number exponent")
            }
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        if self.depth >= MAX_DEPTH {
            return Err(ParseError::new(self.offset(), ParseErrorKind::TooDeep));
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn atom(&mut self) -> PResult<ExpressionAst> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Int(numer) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(ExpressionAst::Rational {
                        numer,
                        denom: BigInt::from(1),
                        offset,
                    });
                }
                self.bump();
                match self.peek().clone() {
                    Tok::Int(denom) => {
                        self.bump();
                        Ok(ExpressionAst::Rational {
                            numer,
                            denom,
                            offset,
                        })
                    }
                    _ => self.unexpected("a denominator"),
                }
            }
            Tok::Imag => {
                self.bump();
                Ok(ExpressionAst::ImaginaryUnit { offset })
            }
            Tok::Var(kind, index) => {
                self.bump();
                Ok(ExpressionAst::Var {
                    kind,
                    index,
                    offset,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.nested(|p| p.expr())?;
                if *self.peek() != Tok::RParen {
                    return self.unexpected("`)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Minus => {
                self.bump();
                let inner = self.nested(|p| p.factor())?;
                Ok(ExpressionAst::Neg(Box::new(inner)))
            }
            _ => self.unexpected("a number, `i`, a variable, `(` or `-`"),
        }
    }
}

/// Parses text into an AST without interpreting it.
pub fn parse_ast(text: &str) -> PResult<ExpressionAst> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    let ast = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.unexpected("an operator or end of input");
    }
    Ok(ast)
}

/// Ring in which expressions are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseContext {
    pub field: FieldSpec,
    /// Number of `x` variables.
    pub n: usize,
    /// Number of `y` variables, placed after the `x` variables.
    pub big_n: usize,
}

impl ParseContext {
    pub fn new(field: FieldSpec, n: usize) -> Self {
        ParseContext { field, n, big_n: 0 }
    }

    pub fn extended(field: FieldSpec, n: usize, big_n: usize) -> Self {
        ParseContext { field, n, big_n }
    }

    pub fn dim(&self) -> usize {
        self.n + self.big_n
    }

    pub fn layout(&self) -> VarLayout {
        VarLayout::extended(self.n)
    }
}

/// The result of lowering, typed by which variables occur syntactically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Polynomial(Polynomial),
    DiffOp(DiffOp),
    Weyl(WeylElement),
}

impl Value {
    pub fn format(&self, layout: &VarLayout) -> String {
        match self {
            Value::Polynomial(p) => format_polynomial(p, layout),
            Value::DiffOp(op) => format_diffop(op, layout),
            Value::Weyl(w) => format_weyl(w, layout),
        }
    }
}

struct Lowerer<'a> {
    ctx: &'a ParseContext,
}

impl Lowerer<'_> {
    fn check_size(&self, e: &WeylElement, offset: usize) -> PResult<()> {
        if e.total_degree() > MAX_DEGREE {
            return Err(ParseError::new(offset, ParseErrorKind::TooLarge));
        }
        Ok(())
    }

    fn mul(&self, a: &WeylElement, b: &WeylElement, offset: usize) -> PResult<WeylElement> {
        if a.num_terms().saturating_mul(b.num_terms()) > MAX_WORK
            || a.total_degree() + b.total_degree() > MAX_DEGREE
        {
            return Err(ParseError::new(offset, ParseErrorKind::TooLarge));
        }
        let out = a * b;
        self.check_size(&out, offset)?;
        Ok(out)
    }

    fn lower(&self, ast: &ExpressionAst) -> PResult<WeylElement> {
        let (dim, field) = (self.ctx.dim(), self.ctx.field);
        Ok(match ast {
            ExpressionAst::Rational {
                numer,
                denom,
                offset,
            } => {
                if denom.is_zero() {
                    return Err(ParseError::new(*offset, ParseErrorKind::DivisionByZero));
                }
                let c = Scalar::from_ratio(field, numer, denom)
                    .map_err(|_| ParseError::new(*offset, ParseErrorKind::DivisionByZero))?;
                WeylElement::constant(dim, c)
            }
            ExpressionAst::ImaginaryUnit { offset } => {
                let i = Scalar::imaginary_unit(field).ok_or_else(|| {
                    ParseError::new(*offset, ParseErrorKind::ImaginaryOutsideGaussian)
                })?;
                WeylElement::constant(dim, i)
            }
            ExpressionAst::Var {
                kind,
                index,
                offset,
            } => {
                let (limit, base) = match kind {
                    VarKind::X | VarKind::Dx => (self.ctx.n, 0),
                    VarKind::Y | VarKind::Dy => (self.ctx.big_n, self.ctx.n),
                };
                if *index > limit {
                    return Err(ParseError::new(
                        *offset,
                        ParseErrorKind::IndexOutOfRange(format!("{}{index}", kind.prefix())),
                    ));
                }
                let var = base + index - 1;
                if kind.is_derivation() {
                    WeylElement::d(dim, field, var).unwrap()
                } else {
                    WeylElement::x(dim, field, var).unwrap()
                }
            }
            ExpressionAst::Neg(a) => -&self.lower(a)?,
            ExpressionAst::Add(a, b) => &self.lower(a)? + &self.lower(b)?,
            ExpressionAst::Sub(a, b) => &self.lower(a)? - &self.lower(b)?,
            ExpressionAst::Mul(a, b) => {
                let (l, r) = (self.lower(a)?, self.lower(b)?);
                self.mul(&l, &r, first_offset(b))?
            }
            ExpressionAst::Pow(a, exp) => {
                let base = self.lower(a)?;
                let offset = first_offset(a);
                if base.total_degree().max(0) * i64::from(*exp) > MAX_DEGREE {
                    return Err(ParseError::new(offset, ParseErrorKind::TooLarge));
                }
                let mut acc = WeylElement::one(dim, field);
                for _ in 0..*exp {
                    acc = self.mul(&acc, &base, offset)?;
                }
                acc
            }
        })
    }
}

fn first_offset(ast: &ExpressionAst) -> usize {
    match ast {
        ExpressionAst::Rational { offset, .. }
        | ExpressionAst::ImaginaryUnit { offset }
        | ExpressionAst::Var { offset, .. } => *offset,
        ExpressionAst::Neg(a) | ExpressionAst::Pow(a, _) => first_offset(a).saturating_sub(1),
        ExpressionAst::Add(a, _) | ExpressionAst::Sub(a, _) | ExpressionAst::Mul(a, _) => {
            first_offset(a)
        }
    }
}

/// Interprets an AST. Only `x`/`y` variables (or none) give a polynomial, only
/// `dx`/`dy` variables an operator, and a mixture a Weyl element in normal form.
pub fn lower(ast: &ExpressionAst, ctx: &ParseContext) -> PResult<Value> {
    let element = Lowerer { ctx }.lower(ast)?;
    Ok(match ast.variable_kinds() {
        (_, false) => Value::Polynomial(element.to_polynomial().expect("x-only expression")),
        (false, true) => Value::DiffOp(element.to_diffop().expect("dx-only expression")),
        (true, true) => Value::Weyl(element),
    })
}

pub fn parse(text: &str, ctx: &ParseContext) -> PResult<Value> {
    lower(&parse_ast(text)?, ctx)
}

pub fn parse_polynomial(text: &str, ctx: &ParseContext) -> PResult<Polynomial> {
    match parse(text, ctx)? {
        Value::Polynomial(p) => Ok(p),
        _ => Err(ParseError::new(0, ParseErrorKind::ExpectedPolynomial)),
    }
}

/// Accepts operators and bare constants.
pub fn parse_diffop(text: &str, ctx: &ParseContext) -> PResult<DiffOp> {
    match parse(text, ctx)? {
        Value::DiffOp(op) => Ok(op),
        Value::Polynomial(p) if p.total_degree() <= 0 => Ok(DiffOp::from_symbol(p)),
        _ => Err(ParseError::new(0, ParseErrorKind::ExpectedOperator)),
    }
}

/// Accepts anything, normal-ordering the result.
pub fn parse_weyl(text: &str, ctx: &ParseContext) -> PResult<WeylElement> {
    Ok(match parse(text, ctx)? {
        Value::Polynomial(p) => WeylElement::from_polynomial(&p),
        Value::DiffOp(op) => WeylElement::from_diffop(&op),
        Value::Weyl(w) => w,
    })
}

/// Reads a product such as `(dx1 - dx2)*(dx1 + dx2)` or `dx1^2*dx2` as its
/// list of linear factors, in order. Constant factors are absorbed into the
/// first linear factor.
pub fn parse_linear_factors(text: &str, ctx: &ParseContext) -> PResult<Vec<LinearForm>> {
    let ast = parse_ast(text)?;
    let mut factors = Vec::new();
    if !flatten_product(&ast, &mut factors) {
        return Err(ParseError::new(0, ParseErrorKind::TooLarge));
    }
    let mut scale = Scalar::one(ctx.field);
    let mut forms = Vec::new();
    for factor in factors {
        let offset = first_offset(factor);
        let op = match lower(factor, ctx)? {
            Value::DiffOp(op) => op,
            Value::Polynomial(p) if p.total_degree() == 0 => {
                scale = &scale * &p.constant_term();
                continue;
            }
            _ => {
                return Err(ParseError::new(
                    offset,
                    ParseErrorKind::ExpectedLinearFactors,
                ))
            }
        };
        let form = LinearForm::from_diffop(&op)
            .ok()
            .filter(|f| !f.is_zero())
            .ok_or_else(|| ParseError::new(offset, ParseErrorKind::ExpectedLinearFactors))?;
        forms.push(form);
    }
    if forms.is_empty() || scale.is_zero() {
        return Err(ParseError::new(0, ParseErrorKind::ExpectedLinearFactors));
    }
    let first = &forms[0];
    let scaled: Vec<Scalar> = first.coeffs().iter().map(|c| c * &scale).collect();
    forms[0] = LinearForm::new(ctx.field, scaled).unwrap();
    Ok(forms)
}

/// False once more than `MAX_DEGREE` factors would be produced.
fn flatten_product<'a>(ast: &'a ExpressionAst, out: &mut Vec<&'a ExpressionAst>) -> bool {
    match ast {
        ExpressionAst::Mul(a, b) => flatten_product(a, out) && flatten_product(b, out),
        ExpressionAst::Pow(a, exp) => (0..*exp).all(|_| flatten_product(a, out)),
        other => {
            out.push(other);
            out.len() as i64 <= MAX_DEGREE
        }
    }
}

/// Parses a comma-separated multi-index such as `1,1,0`.
pub fn parse_exponents(text: &str) -> PResult<ExponentVector> {
    let mut exps = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let trimmed = part.trim();
        let e = trimmed
            .parse::<u32>()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| {
                ParseError::new(
                    offset + (part.len() - part.trim_start().len()),
                    ParseErrorKind::UnexpectedToken {
                        found: format!("{trimmed:?}"),
                        expected: "a natural number",
                    },
                )
            })?;
        exps.push(e);
        offset += part.len() + 1;
    }
    Ok(ExponentVector::new(exps))
}

/// How variable indices are named when formatting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarLayout {
    x_count: usize,
}

impl VarLayout {
    /// Every variable is an `x`.
    pub fn plain() -> Self {
        VarLayout {
            x_count: usize::MAX,
        }
    }

    /// The first `n` variables are `x`, the rest `y`.
    pub fn extended(n: usize) -> Self {
        VarLayout { x_count: n }
    }

    fn name(&self, var: usize, derivation: bool) -> String {
        let d = if derivation { "d" } else { "" };
        if var < self.x_count {
            format!("{d}x{}", var + 1)
        } else {
            format!("{d}y{}", var - self.x_count + 1)
        }
    }

    fn push_monomial(&self, e: &ExponentVector, derivation: bool, out: &mut Vec<String>) {
        for (var, &k) in e.as_slice().iter().enumerate() {
            match k {
                0 => {}
                1 => out.push(self.name(var, derivation)),
                _ => out.push(format!("{}^{k}", self.name(var, derivation))),
            }
        }
    }
}

fn format_terms<'a>(terms: impl Iterator<Item = (Vec<String>, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (factors, c) in terms {
        let (negative, abs) = c.split_sign();
        let body = if factors.is_empty() {
            abs.to_string()
        } else if abs.is_one() {
            factors.join("*")
        } else {
            format!("{abs}*{}", factors.join("*"))
        };
        match (out.is_empty(), negative) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        let _ = write!(out, "{body}");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_polynomial(p: &Polynomial, layout: &VarLayout) -> String {
    format_terms(p.terms().map(|(e, c)| {
        let mut factors = Vec::new();
        layout.push_monomial(e, false, &mut factors);
        (factors, c)
    }))
}

pub fn format_diffop(op: &DiffOp, layout: &VarLayout) -> String {
    format_terms(op.terms().map(|(e, c)| {
        let mut factors = Vec::new();
        layout.push_monomial(e, true, &mut factors);
        (factors, c)
    }))
}

pub fn format_weyl(w: &WeylElement, layout: &VarLayout) -> String {
    format_terms(w.terms().map(|(x, d, c)| {
        let mut factors = Vec::new();
        layout.push_monomial(&x, false, &mut factors);
        layout.push_monomial(&d, true, &mut factors);
        (factors, c)
    }))
}

pub fn format_linear_form(form: &LinearForm, layout: &VarLayout) -> String {
    format_diffop(&form.to_diffop(), layout)
}

/// `c_1*(l_1)^d_1 + ...`; parses back to the reconstructed operator.
pub fn format_power_sum(psd: &PowerSumDecomposition, layout: &VarLayout) -> String {
    format_terms(psd.summands.iter().map(|s| {
        let base = format_linear_form(&s.form, layout);
        let base = if base.contains([' ', '*', '-']) {
            format!("({base})")
        } else {
            base
        };
        let factor = match s.degree {
            0 => Vec::new(),
            1 => vec![base],
            d => vec![format!("{base}^{d}")],
        };
        (factor, &s.coeff)
    }))
}

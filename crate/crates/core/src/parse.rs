//! Expression language for algebra elements.
//!
//! The grammar is documented in `docs/dsl.md`. Every construct evaluates
//! straight into normal form, so the parser doubles as a convenient way of
//! writing products that need reordering.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{KernelError, Presentation, Result};
use crate::coeff::{Coefficient, GaussianRational};
use crate::poly::NcPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigRational),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, start));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Number(parse_decimal(&text[start..i], start)?), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else {
            return Err(KernelError::Syntax { pos: start, message: format!("unexpected character `{c}`") });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn parse_decimal(s: &str, pos: usize) -> Result<BigRational> {
    let bad = || KernelError::Syntax { pos, message: format!("malformed number `{s}`") };
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    pres: &'a Presentation,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, message: String) -> KernelError {
        KernelError::Syntax { pos: self.pos(), message }
    }

    fn starts_factor(t: &Tok) -> bool {
        matches!(t, Tok::Ident(_) | Tok::Number(_) | Tok::LParen | Tok::LBracket | Tok::LBrace)
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.pres.mul(&acc, &rhs)?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .as_constant()
                        .and_then(|c| c.inverse())
                        .ok_or(KernelError::Syntax { pos, message: "division by a non-invertible element".into() })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<NcPoly> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    // Postfix `*` (involution) binds tighter than anything else; a `*` is
    // postfix exactly when no factor follows it.
    fn postfix(&mut self) -> Result<NcPoly> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Star && !Self::starts_factor(&self.toks[self.at + 1].0) {
            self.bump();
            e = self.pres.star(&e)?;
        }
        Ok(e)
    }

    fn power(&mut self) -> Result<NcPoly> {
        let base = self.postfix()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        let n = match self.bump() {
            Tok::Number(q) if q.is_integer() => q.to_integer(),
            _ => return Err(KernelError::Syntax { pos, message: "exponent must be an integer literal".into() }),
        };
        let n: u32 = n.try_into().map_err(|_| KernelError::Syntax { pos, message: "exponent out of range".into() })?;
        if negative {
            let inv = base
                .as_constant()
                .and_then(|c| c.inverse())
                .ok_or(KernelError::Syntax { pos, message: "negative power of a non-invertible element".into() })?;
            Ok(NcPoly::constant(inv.pow(n)))
        } else {
            self.pres.pow(&base, n)
        }
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let pos = self.pos();
        match self.bump() {
            Tok::Number(q) => Ok(NcPoly::constant(Coefficient::scalar(GaussianRational::from_rational(q)))),
            Tok::Ident(name) => self.name(&name, pos),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LBracket => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                self.pres.supercommutator(&a, &b)
            }
            Tok::LBrace => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RBrace, "`}`")?;
                self.pres.quantum_pb(&a, &b)
            }
            Tok::End => Err(KernelError::Syntax { pos, message: "unexpected end of input".into() }),
            t => Err(KernelError::Syntax { pos, message: format!("unexpected token {t:?}") }),
        }
    }

    fn name(&self, name: &str, pos: usize) -> Result<NcPoly> {
        if name == "i" {
            return Ok(NcPoly::constant(Coefficient::i()));
        }
        if name == "I" {
            return Ok(NcPoly::one());
        }
        if let Some(g) = self.pres.gen_id(name) {
            return Ok(NcPoly::generator(g));
        }
        if let Some(p) = self.pres.param_id(name) {
            return Ok(NcPoly::constant(Coefficient::param(p)));
        }
        Err(KernelError::UnknownName { name: name.to_string(), pos })
    }
}

impl Presentation {
    /// Parse an expression and return its normal form.
    pub fn parse(&self, text: &str) -> Result<NcPoly> {
        self.parse_raw(text)
    }

    pub(crate) fn parse_raw(&self, text: &str) -> Result<NcPoly> {
        let mut p = Parser { toks: tokenize(text)?, at: 0, pres: self };
        let e = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(p.error("trailing input".into()));
        }
        Ok(e)
    }
}

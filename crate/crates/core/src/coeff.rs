//! Exact scalars for the symbolic kernel.
//!
//! A [`Coefficient`] is a Laurent polynomial in commuting, real, formal
//! parameters (ħ, m, t, and whatever a presentation declares) whose
//! coefficients are Gaussian rationals. Every value is kept in a canonical
//! form: zero terms are dropped and exponent vectors carry no trailing
//! zeros, so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Index of a formal parameter inside a presentation's parameter list.
pub type ParamId = usize;

/// `re + i·im` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::new(q, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "*i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&self.re, f)?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                fmt_rational(&self.im, f)?;
                write!(f, "*i)")
            }
        }
    }
}

/// Exponent vector over the parameter list, trailing zeros trimmed.
pub type Exponents = Vec<i32>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exponents(a: &[i32], b: &[i32]) -> Exponents {
    let n = a.len().max(b.len());
    let v = (0..n).map(|k| a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0)).collect();
    trim(v)
}

/// Laurent polynomial in formal parameters over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Coefficient {
    terms: BTreeMap<Exponents, GaussianRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn i() -> Self {
        Self::scalar(GaussianRational::i())
    }

    pub fn integer(n: i64) -> Self {
        Self::scalar(GaussianRational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::scalar(GaussianRational::from_ratio(num, den))
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    /// `c · Π p_k^{e_k}`.
    pub fn monomial(exponents: Exponents, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exponents), c);
        }
        Self { terms }
    }

    /// The parameter itself, to the first power.
    pub fn param(id: ParamId) -> Self {
        Self::param_pow(id, 1)
    }

    pub fn param_pow(id: ParamId, power: i32) -> Self {
        let mut e = vec![0; id + 1];
        e[id] = power;
        Self::monomial(e, GaussianRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(GaussianRational::is_one)
    }

    /// The value when no parameter appears.
    pub fn as_scalar(&self) -> Option<&GaussianRational> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&Vec::new()),
            _ => None,
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.is_zero() || self.as_scalar().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Complex conjugation. Parameters are real.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Multiplicative inverse; only single-term Laurent monomials are units.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let e: Exponents = e.iter().map(|k| -k).collect();
        Some(Self::monomial(e, c.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to one parameter.
    pub fn derivative(&self, id: ParamId) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(id).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[id] -= 1;
            out.add_term(trim(e2), c * &GaussianRational::from_integer(k as i64));
        }
        out
    }

    /// Replace a parameter by a coefficient. Fails when the parameter occurs
    /// with a negative power and the replacement is not invertible.
    pub fn substitute(&self, id: ParamId, value: &Coefficient) -> Option<Self> {
        let inv = value.inverse();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(id).copied().unwrap_or(0);
            let mut rest = e.clone();
            if id < rest.len() {
                rest[id] = 0;
            }
            let base = Self::monomial(rest, c.clone());
            let factor = if k >= 0 { value.pow(k as u32) } else { inv.as_ref()?.pow((-k) as u32) };
            out += &(&base * &factor);
        }
        Some(out)
    }

    /// Numerical value for the given parameter values.
    pub fn evaluate(&self, params: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let w: f64 =
                    e.iter().enumerate().map(|(k, &p)| params.get(k).copied().unwrap_or(f64::NAN).powi(p)).product();
                c.to_complex() * w
            })
            .sum()
    }

    /// Highest power of `id` appearing in any term (0 if absent).
    pub fn max_power(&self, id: ParamId) -> i32 {
        self.terms.keys().map(|e| e.get(id).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponents, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Render with parameter names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> CoefficientDisplay<'a> {
        CoefficientDisplay { coeff: self, names }
    }
}

impl From<GaussianRational> for Coefficient {
    fn from(c: GaussianRational) -> Self {
        Self::scalar(c)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Self) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Self) -> Coefficient {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Self) -> Coefficient {
        let mut out = Coefficient::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exponents(ea, eb), ca * cb);
            }
        }
        out
    }
}

pub struct CoefficientDisplay<'a> {
    coeff: &'a Coefficient,
    names: &'a [String],
}

impl fmt::Display for CoefficientDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.coeff.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let has_params = e.iter().any(|&k| k != 0);
            if !has_params || !c.is_one() {
                write!(f, "{c}")?;
                if has_params {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (k, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = self.names.get(k).map(String::as_str).unwrap_or("?");
                if p == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

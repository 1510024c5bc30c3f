//! Presentations of *-superalgebras and the normal-ordering engine.
//!
//! A presentation fixes a totally ordered list of generators (each even or
//! odd, each with a star image) and, for every out-of-order pair `g_a > g_b`,
//! the value of the supercommutator `[g_a, g_b]`. Only Lie-type tables are
//! admitted: each value is a combination of single generators and the unit.
//! Under that restriction PBW-style rewriting
//!
//! ```text
//! ... g_a g_b ...  ->  (-1)^{|a||b|} ... g_b g_a ... + ... [g_a, g_b] ...
//! ... g_a g_a ...  ->  1/2 ... [g_a, g_a] ...          (g_a odd)
//! ```
//!
//! terminates, and confluence reduces to the overlap check on words of
//! length three, which [`PresentationBuilder::build`] runs before handing out
//! a presentation.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::coeff::{Coefficient, GaussianRational, ParamId};
use crate::poly::{GenId, NcPoly, Word};

pub const HBAR: ParamId = 0;
pub const MASS: ParamId = 1;
pub const TIME: ParamId = 2;

/// Parameters every presentation starts with, in this order.
pub const BUILTIN_PARAMS: [&str; 3] = ["hbar", "m", "t"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown name `{name}` at {pos}")]
    UnknownName { name: String, pos: usize },
    #[error("relation table has no entry for the pair ({0}, {1})")]
    MissingRelation(String, String),
    #[error("generator index {0} is not part of this presentation")]
    UnknownGenerator(GenId),
    #[error("relation [{0}, {1}] is not of Lie type (degree >= 2)")]
    NotLieType(String, String),
    #[error("relation [{0}, {1}] has the wrong parity")]
    ParityMismatch(String, String),
    #[error("relation table is not closed under the involution at [{0}, {1}]")]
    StarClosure(String, String),
    #[error("rewriting is not confluent on the word {0}")]
    NotConfluent(String),
    #[error("division by a non-invertible scalar")]
    NotInvertible,
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("adjoint series did not terminate within {0} terms")]
    SeriesDiverges(usize),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, KernelError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^{|a||b|}` as an integer.
    pub fn sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    /// Index of `g*`; equal to the generator's own index when hermitian.
    pub star: GenId,
}

/// Order in which descents are rewritten. Both must give the same normal
/// form on a valid presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// What to do with out-of-order pairs the builder was not told about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MissingPairs {
    /// Unlisted pairs supercommute.
    #[default]
    Supercommute,
    /// Unlisted pairs are left undefined; rewriting through them errors.
    Undefined,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    params: Vec<String>,
    gens: Vec<Generator>,
    // relations[a][b], b <= a: value of [g_a, g_b].
    relations: Vec<Vec<Option<NcPoly>>>,
}

#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    name: String,
    params: Vec<String>,
    gens: Vec<(String, Parity, Option<String>)>,
    rels: Vec<(String, String, RelationValue)>,
    missing: MissingPairs,
    order: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
enum RelationValue {
    Poly(NcPoly),
    Text(String),
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), params: BUILTIN_PARAMS.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn param(mut self, name: impl Into<String>) -> Self {
        let name = name.into();
        if !self.params.contains(&name) {
            self.params.push(name);
        }
        self
    }

    /// A hermitian generator.
    pub fn generator(mut self, name: impl Into<String>, parity: Parity) -> Self {
        self.gens.push((name.into(), parity, None));
        self
    }

    /// A generator whose adjoint is the generator called `star`.
    pub fn generator_with_star(mut self, name: impl Into<String>, parity: Parity, star: impl Into<String>) -> Self {
        self.gens.push((name.into(), parity, Some(star.into())));
        self
    }

    pub fn missing_pairs(mut self, m: MissingPairs) -> Self {
        self.missing = m;
        self
    }

    /// Override the declaration order of generators.
    pub fn order(mut self, names: Vec<String>) -> Self {
        self.order = Some(names);
        self
    }

    /// `[a, b] = value`, value given in the expression language.
    pub fn relation(mut self, a: &str, b: &str, value: &str) -> Self {
        self.rels.push((a.to_string(), b.to_string(), RelationValue::Text(value.to_string())));
        self
    }

    pub fn relation_poly(mut self, a: &str, b: &str, value: NcPoly) -> Self {
        self.rels.push((a.to_string(), b.to_string(), RelationValue::Poly(value)));
        self
    }

    pub fn build(self) -> Result<Presentation> {
        let mut decl = self.gens.clone();
        if let Some(order) = &self.order {
            if order.len() != decl.len() {
                return Err(KernelError::Invalid("order line must list every generator exactly once".into()));
            }
            let mut sorted = Vec::with_capacity(decl.len());
            for n in order {
                let pos = decl
                    .iter()
                    .position(|g| &g.0 == n)
                    .ok_or_else(|| KernelError::Invalid(format!("order names unknown generator `{n}`")))?;
                sorted.push(decl[pos].clone());
            }
            decl = sorted;
        }
        let mut seen = std::collections::HashSet::new();
        for (n, _, _) in &decl {
            if !seen.insert(n.clone()) {
                return Err(KernelError::Invalid(format!("duplicate generator `{n}`")));
            }
            if self.params.contains(n) || n == "i" || n == "I" {
                return Err(KernelError::Invalid(format!("generator name `{n}` is reserved")));
            }
        }
        let index = |n: &str| decl.iter().position(|g| g.0 == n);
        let mut gens = Vec::with_capacity(decl.len());
        for (k, (name, parity, star)) in decl.iter().enumerate() {
            let star = match star {
                None => k,
                Some(s) => index(s)
                    .ok_or_else(|| KernelError::Invalid(format!("star partner `{s}` of `{name}` is undeclared")))?,
            };
            gens.push(Generator { name: name.clone(), parity: *parity, star: star as GenId });
        }
        for (k, g) in gens.iter().enumerate() {
            let partner = &gens[g.star as usize];
            if partner.star as usize != k || partner.parity != g.parity {
                return Err(KernelError::Invalid(format!("star partners of `{}` are inconsistent", g.name)));
            }
        }
        let n = gens.len();
        let mut pres = Presentation {
            name: self.name,
            params: self.params,
            gens,
            relations: (0..n).map(|a| vec![None; a + 1]).collect(),
        };
        for (a, b, value) in &self.rels {
            let ia = pres.gen_id(a).ok_or_else(|| KernelError::UnknownName { name: a.clone(), pos: 0 })?;
            let ib = pres.gen_id(b).ok_or_else(|| KernelError::UnknownName { name: b.clone(), pos: 0 })?;
            let value = match value {
                RelationValue::Poly(p) => p.clone(),
                RelationValue::Text(t) => pres.parse_raw(t)?,
            };
            pres.set_relation(ia, ib, value)?;
        }
        for a in 0..n {
            for b in 0..=a {
                let needed = a != b || pres.gens[a].parity.is_odd();
                if needed && pres.relations[a][b].is_none() {
                    if self.missing == MissingPairs::Supercommute {
                        pres.relations[a][b] = Some(NcPoly::zero());
                    }
                } else if !needed {
                    pres.relations[a][b] = Some(NcPoly::zero());
                }
            }
        }
        pres.validate()?;
        Ok(pres)
    }
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// The same presentation with one more formal parameter appended.
    pub fn with_param(&self, name: &str) -> Presentation {
        let mut p = self.clone();
        if p.param_id(name).is_none() {
            p.params.push(name.to_string());
        }
        p
    }

    pub fn param_id(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p == name)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_id(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g.name == name).map(|k| k as GenId)
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.gens[g as usize].name
    }

    pub fn parity(&self, g: GenId) -> Parity {
        self.gens[g as usize].parity
    }

    pub fn word_parity(&self, w: &Word) -> Parity {
        w.letters().iter().fold(Parity::Even, |acc, &g| acc.combine(self.parity(g)))
    }

    /// Generator by name as a polynomial. Panics on unknown names, which is
    /// what callers building fixed expressions want.
    pub fn gen(&self, name: &str) -> NcPoly {
        NcPoly::generator(self.gen_id(name).unwrap_or_else(|| panic!("no generator `{name}` in {}", self.name)))
    }

    pub fn param(&self, name: &str) -> Coefficient {
        Coefficient::param(self.param_id(name).unwrap_or_else(|| panic!("no parameter `{name}` in {}", self.name)))
    }

    /// The stored value of `[g_a, g_b]` for `a >= b`.
    pub fn relation(&self, a: GenId, b: GenId) -> Option<&NcPoly> {
        let (a, b) = (a as usize, b as usize);
        if b > a {
            return None;
        }
        self.relations.get(a).and_then(|row| row[b].as_ref())
    }

    fn set_relation(&mut self, a: GenId, b: GenId, value: NcPoly) -> Result<()> {
        let pa = self.parity(a);
        let pb = self.parity(b);
        let (hi, lo, value) = if a > b {
            (a, b, value)
        } else if a < b {
            // [b, a] = -(-1)^{|a||b|} [a, b]
            let s = -pa.sign(pb);
            (b, a, value.scale_scalar(&GaussianRational::from_integer(s)))
        } else {
            if !pa.is_odd() && !value.is_zero() {
                return Err(KernelError::Invalid(format!(
                    "[{0}, {0}] vanishes for an even generator",
                    self.gen_name(a)
                )));
            }
            (a, b, value)
        };
        self.relations[hi as usize][lo as usize] = Some(value);
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let n = self.gens.len();
        for a in 0..n {
            for b in 0..=a {
                let Some(v) = &self.relations[a][b] else { continue };
                let (na, nb) = (self.gens[a].name.clone(), self.gens[b].name.clone());
                if v.degree().unwrap_or(0) > 1 {
                    return Err(KernelError::NotLieType(na, nb));
                }
                let want = self.gens[a].parity.combine(self.gens[b].parity);
                if v.terms().any(|(w, _)| self.word_parity(w) != want) {
                    return Err(KernelError::ParityMismatch(na, nb));
                }
            }
        }
        // [a, b]* = -(-1)^{|a||b|} [a*, b*]
        for a in 0..n {
            for b in 0..=a {
                let Some(v) = &self.relations[a][b] else { continue };
                let (ga, gb) = (a as GenId, b as GenId);
                let lhs = self.star(v)?;
                let sa = self.gens[a].star;
                let sb = self.gens[b].star;
                let rhs = self.generator_bracket(sa, sb)?;
                let s = -self.parity(ga).sign(self.parity(gb));
                let rhs = rhs.scale_scalar(&GaussianRational::from_integer(s));
                if lhs != rhs {
                    return Err(KernelError::StarClosure(self.gens[a].name.clone(), self.gens[b].name.clone()));
                }
            }
        }
        // Overlap ambiguities: every length-3 word must reduce identically
        // under both strategies.
        for a in 0..n as GenId {
            for b in 0..n as GenId {
                for c in 0..n as GenId {
                    let w = NcPoly::term(Word(vec![a, b, c]), Coefficient::one());
                    let left = match self.normal_form_with(&w, Strategy::Leftmost) {
                        Err(KernelError::MissingRelation(..)) => continue,
                        r => r?,
                    };
                    let right = self.normal_form_with(&w, Strategy::Rightmost)?;
                    if left != right {
                        return Err(KernelError::NotConfluent(self.word_string(&Word(vec![a, b, c]))));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[g_a, g_b]` for any ordered pair, from the table.
    fn generator_bracket(&self, a: GenId, b: GenId) -> Result<NcPoly> {
        if a >= b {
            self.relation(a, b).cloned().ok_or_else(|| self.missing(a, b))
        } else {
            let s = -self.parity(a).sign(self.parity(b));
            Ok(self.relation(b, a).ok_or_else(|| self.missing(b, a))?.scale_scalar(&GaussianRational::from_integer(s)))
        }
    }

    fn missing(&self, a: GenId, b: GenId) -> KernelError {
        KernelError::MissingRelation(self.gen_name(a).to_string(), self.gen_name(b).to_string())
    }

    fn check_generators(&self, p: &NcPoly) -> Result<()> {
        match p.generators_used().find(|&g| g as usize >= self.gens.len()) {
            Some(g) => Err(KernelError::UnknownGenerator(g)),
            None => Ok(()),
        }
    }

    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        self.normal_form_with(p, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, p: &NcPoly, strategy: Strategy) -> Result<NcPoly> {
        self.check_generators(p)?;
        let mut cache = HashMap::new();
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let r = self.reduce_word(w.letters(), strategy, &mut cache)?;
            out += &r.scale(c);
        }
        Ok(out)
    }

    pub fn is_normal(&self, p: &NcPoly) -> bool {
        p.terms().all(|(w, _)| self.descent(w.letters(), Strategy::Leftmost).is_none())
    }

    fn descent(&self, w: &[GenId], strategy: Strategy) -> Option<usize> {
        let is_descent = |i: usize| {
            let (a, b) = (w[i], w[i + 1]);
            a > b || (a == b && self.parity(a).is_odd())
        };
        let n = w.len().saturating_sub(1);
        match strategy {
            Strategy::Leftmost => (0..n).find(|&i| is_descent(i)),
            Strategy::Rightmost => (0..n).rev().find(|&i| is_descent(i)),
        }
    }

    fn reduce_word(&self, w: &[GenId], strategy: Strategy, cache: &mut HashMap<Vec<GenId>, NcPoly>) -> Result<NcPoly> {
        if let Some(r) = cache.get(w) {
            return Ok(r.clone());
        }
        let Some(i) = self.descent(w, strategy) else {
            return Ok(NcPoly::term(Word(w.to_vec()), Coefficient::one()));
        };
        let (a, b) = (w[i], w[i + 1]);
        let rel = self.relation(a, b).ok_or_else(|| self.missing(a, b))?.clone();
        let splice = |middle: &[GenId]| {
            let mut v = Vec::with_capacity(w.len());
            v.extend_from_slice(&w[..i]);
            v.extend_from_slice(middle);
            v.extend_from_slice(&w[i + 2..]);
            v
        };
        let mut out = NcPoly::zero();
        let rel_weight = if a == b {
            // g^2 = 1/2 [g, g] for odd g
            GaussianRational::from_ratio(1, 2)
        } else {
            let s = self.parity(a).sign(self.parity(b));
            let swapped = self.reduce_word(&splice(&[b, a]), strategy, cache)?;
            out += &swapped.scale_scalar(&GaussianRational::from_integer(s));
            GaussianRational::one()
        };
        for (u, c) in rel.terms() {
            let r = self.reduce_word(&splice(u.letters()), strategy, cache)?;
            out += &r.scale(&c.scale(&rel_weight));
        }
        cache.insert(w.to_vec(), out.clone());
        Ok(out)
    }

    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        self.check_generators(a)?;
        self.check_generators(b)?;
        let mut cache = HashMap::new();
        let mut out = NcPoly::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let w = wa.concat(wb);
                let r = self.reduce_word(w.letters(), Strategy::Leftmost, &mut cache)?;
                out += &r.scale(&(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[&NcPoly]) -> Result<NcPoly> {
        let mut acc = NcPoly::one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &NcPoly, n: u32) -> Result<NcPoly> {
        let mut acc = NcPoly::one();
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Split into (even part, odd part).
    pub fn homogeneous_parts(&self, a: &NcPoly) -> (NcPoly, NcPoly) {
        let mut even = NcPoly::zero();
        let mut odd = NcPoly::zero();
        for (w, c) in a.terms() {
            match self.word_parity(w) {
                Parity::Even => even.add_term(w.clone(), c.clone()),
                Parity::Odd => odd.add_term(w.clone(), c.clone()),
            }
        }
        (even, odd)
    }

    /// Parity of a homogeneous element; `None` for mixed ones. Zero is even.
    pub fn parity_of(&self, a: &NcPoly) -> Option<Parity> {
        let (even, odd) = self.homogeneous_parts(a);
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// `[a, b] = ab - (-1)^{|a||b|} ba`, extended bilinearly over the
    /// homogeneous parts of mixed inputs.
    pub fn supercommutator(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        let (ae, ao) = self.homogeneous_parts(a);
        let (be, bo) = self.homogeneous_parts(b);
        let mut out = NcPoly::zero();
        for (x, px) in [(&ae, Parity::Even), (&ao, Parity::Odd)] {
            if x.is_zero() {
                continue;
            }
            for (y, py) in [(&be, Parity::Even), (&bo, Parity::Odd)] {
                if y.is_zero() {
                    continue;
                }
                let xy = self.mul(x, y)?;
                let yx = self.mul(y, x)?;
                let s = GaussianRational::from_integer(px.sign(py));
                out += &(&xy - &yx.scale_scalar(&s));
            }
        }
        Ok(out)
    }

    /// `(-i hbar)^{-1}` as a coefficient, i.e. `i / hbar`.
    pub fn inverse_minus_i_hbar(&self) -> Coefficient {
        &Coefficient::i() * &Coefficient::param_pow(HBAR, -1)
    }

    /// Quantum Poisson bracket `{a, b} = (-i hbar)^{-1} [a, b]`.
    pub fn quantum_pb(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        Ok(self.supercommutator(a, b)?.scale(&self.inverse_minus_i_hbar()))
    }

    /// The involution: antilinear, reverses words, maps each generator to
    /// its star partner, then re-normal-orders.
    pub fn star(&self, a: &NcPoly) -> Result<NcPoly> {
        self.check_generators(a)?;
        let mut raw = NcPoly::zero();
        for (w, c) in a.terms() {
            let rev: Vec<GenId> = w.letters().iter().rev().map(|&g| self.gens[g as usize].star).collect();
            raw.add_term(Word(rev), c.conj());
        }
        self.normal_form(&raw)
    }

    /// Replace a generator by a polynomial everywhere and re-normal-order.
    pub fn substitute_generator(&self, a: &NcPoly, g: GenId, value: &NcPoly) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in a.terms() {
            let mut acc = NcPoly::constant(c.clone());
            for &x in w.letters() {
                let f = if x == g { value.clone() } else { NcPoly::generator(x) };
                acc = self.mul(&acc, &f)?;
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Partial derivative of all coefficients with respect to a parameter.
    pub fn param_derivative(&self, a: &NcPoly, id: ParamId) -> NcPoly {
        a.map_coefficients(|c| c.derivative(id))
    }

    /// Substitute a parameter in all coefficients.
    pub fn substitute_param(&self, a: &NcPoly, id: ParamId, value: &Coefficient) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in a.terms() {
            let c = c.substitute(id, value).ok_or(KernelError::NotInvertible)?;
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "I".into();
        }
        w.letters().iter().map(|&g| self.gen_name(g)).collect::<Vec<_>>().join("*")
    }

    /// Render in the expression language; the output parses back to the
    /// same polynomial.
    pub fn display(&self, a: &NcPoly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (w, c)) in a.terms().enumerate() {
            if n > 0 {
                s.push_str(" + ");
            }
            let cs = c.display(&self.params).to_string();
            let cs = if c.len() > 1 { format!("({cs})") } else { cs };
            if w.is_empty() {
                s.push_str(&cs);
            } else if c.is_one() {
                s.push_str(&self.word_string(w));
            } else {
                let _ = write!(s, "{cs}*{}", self.word_string(w));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ccr1() -> Presentation {
        PresentationBuilder::new("ccr1")
            .generator("X", Parity::Even)
            .generator("P", Parity::Even)
            .relation("X", "P", "i*hbar")
            .build()
            .unwrap()
    }

    #[test]
    fn px_reorders_with_central_term() {
        let p = ccr1();
        let px = p.mul(&p.gen("P"), &p.gen("X")).unwrap();
        let expected = &p.mul(&p.gen("X"), &p.gen("P")).unwrap()
            - &NcPoly::constant(&Coefficient::i() * &Coefficient::param(HBAR));
        assert_eq!(px, expected);
    }

    #[test]
    fn non_lie_relation_rejected() {
        let r = PresentationBuilder::new("bad")
            .generator("A", Parity::Even)
            .generator("B", Parity::Even)
            .relation("A", "B", "A*A")
            .build();
        assert!(matches!(r, Err(KernelError::NotLieType(..))));
    }

    #[test]
    fn star_closure_enforced() {
        // [X, P] = hbar breaks hermiticity: [X,P]* must equal -[X,P].
        let r = PresentationBuilder::new("bad")
            .generator("X", Parity::Even)
            .generator("P", Parity::Even)
            .relation("X", "P", "hbar")
            .build();
        assert!(matches!(r, Err(KernelError::StarClosure(..))));
    }

    #[test]
    fn non_jacobi_table_is_not_confluent() {
        // [A,B]=iC, [B,C]=iB, [C,A]=0 violates Jacobi.
        let r = PresentationBuilder::new("bad")
            .generator("A", Parity::Even)
            .generator("B", Parity::Even)
            .generator("C", Parity::Even)
            .relation("A", "B", "i*C")
            .relation("B", "C", "i*B")
            .build();
        assert!(matches!(r, Err(KernelError::NotConfluent(_))));
    }

    #[test]
    fn undefined_pairs_error_during_rewriting() {
        let p = PresentationBuilder::new("partial")
            .generator("A", Parity::Even)
            .generator("B", Parity::Even)
            .missing_pairs(MissingPairs::Undefined)
            .build()
            .unwrap();
        let ba = NcPoly::term(Word(vec![1, 0]), Coefficient::one());
        assert!(matches!(p.normal_form(&ba), Err(KernelError::MissingRelation(..))));
        let ab = NcPoly::term(Word(vec![0, 1]), Coefficient::one());
        assert_eq!(p.normal_form(&ab).unwrap(), ab);
    }

    #[test]
    fn odd_generator_squares_to_half_bracket() {
        let p =
            PresentationBuilder::new("clifford").generator("e", Parity::Odd).relation("e", "e", "2").build().unwrap();
        let e = p.gen("e");
        assert_eq!(p.mul(&e, &e).unwrap(), NcPoly::one());
    }
}

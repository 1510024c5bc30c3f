//! Noncommutative polynomials: finite sums of generator words with
//! [`Coefficient`] weights.
//!
//! An [`NcPoly`] is only a container. Whether its words are in normal form
//! is a property relative to an [`crate::algebra::Presentation`], which owns
//! all operations that need the relation table.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub};

use crate::coeff::{Coefficient, GaussianRational};

/// Index of a generator in its presentation's total order.
pub type GenId = u16;

/// A product of generators, read left to right. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<GenId>);

impl Word {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn letter(g: GenId) -> Self {
        Self(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

// Graded order: shorter words first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Coefficient>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn generator(g: GenId) -> Self {
        Self::term(Word::letter(g), Coefficient::one())
    }

    pub fn term(w: Word, c: Coefficient) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Coefficient {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Longest word length; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// The scalar part if the polynomial is a multiple of the unit.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn scale_scalar(&self, c: &GaussianRational) -> Self {
        self.scale(&Coefficient::scalar(c.clone()))
    }

    /// Apply a map to every coefficient, dropping terms that vanish.
    pub fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), f(v));
        }
        out
    }

    pub fn generators_used(&self) -> impl Iterator<Item = GenId> + '_ {
        self.terms.keys().flat_map(|w| w.0.iter().copied())
    }
}

impl From<Coefficient> for NcPoly {
    fn from(c: Coefficient) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: Self) -> NcPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: Self) -> NcPoly {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_word_order() {
        let a = Word(vec![5]);
        let b = Word(vec![0, 1]);
        assert!(a < b);
        assert!(Word::unit() < a);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = NcPoly::generator(3);
        assert!((&p - &p).is_zero());
        assert_eq!((&p + &p).coefficient(&Word::letter(3)), Coefficient::integer(2));
    }
}

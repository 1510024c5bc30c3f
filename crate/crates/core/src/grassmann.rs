//! Berezin integration on the Grassmann algebra `G_n` and the check of
//! compatible completeness for finite families of observables and states.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{KernelError, Presentation};
use crate::coeff::{Coefficient, GaussianRational};
use crate::poly::{NcPoly, Word};
use crate::presentations;

/// Largest `n` for which the state space is solved exhaustively.
pub const MAX_ENUMERATION: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrassmannError {
    #[error("element uses generators beyond G_{n}")]
    Mismatch { n: usize },
    #[error("coefficients must be numbers, not parameter polynomials")]
    Symbolic,
    #[error("n = {0} exceeds the exhaustive limit {MAX_ENUMERATION}")]
    TooLarge(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type GrassmannResult<T> = Result<T, GrassmannError>;

/// `G_n` with its basis of ordered monomials `th_{i1} .. th_{ik}`,
/// `i1 < .. < ik`, indexed by bitmask.
#[derive(Clone, Debug)]
pub struct Grassmann {
    n: usize,
    pres: Presentation,
}

impl Grassmann {
    pub fn new(n: usize) -> Self {
        Self { n, pres: presentations::grassmann(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn monomial(&self, mask: usize) -> NcPoly {
        let letters = (0..self.n).filter(|k| mask & (1 << k) != 0).map(|k| k as u16).collect();
        NcPoly::term(Word(letters), Coefficient::one())
    }

    /// `th_n .. th_1`.
    pub fn top(&self) -> NcPoly {
        let letters = (0..self.n as u16).rev().collect();
        self.pres.normal_form(&NcPoly::term(Word(letters), Coefficient::one())).expect("generators in range")
    }

    fn mask_of(&self, w: &Word) -> GrassmannResult<usize> {
        w.letters().iter().try_fold(0usize, |m, &g| {
            if (g as usize) < self.n {
                Ok(m | 1 << g)
            } else {
                Err(GrassmannError::Mismatch { n: self.n })
            }
        })
    }

    /// Normal-form coordinates in the monomial basis.
    pub fn coordinates(&self, f: &NcPoly) -> GrassmannResult<Vec<GaussianRational>> {
        let nf = self.pres.normal_form(f).map_err(|e| match e {
            KernelError::UnknownGenerator(_) => GrassmannError::Mismatch { n: self.n },
            other => other.into(),
        })?;
        let mut out = vec![GaussianRational::zero(); self.dim()];
        for (w, c) in nf.terms() {
            out[self.mask_of(w)?] = c.as_scalar().ok_or(GrassmannError::Symbolic)?.clone();
        }
        Ok(out)
    }

    pub fn from_coordinates(&self, coords: &[GaussianRational]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (mask, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out += &self.monomial(mask).scale(&Coefficient::scalar(c.clone()));
            }
        }
        out
    }

    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> GrassmannResult<NcPoly> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.pres.mul(a, b)?)
    }

    pub fn star(&self, a: &NcPoly) -> GrassmannResult<NcPoly> {
        self.check(a)?;
        Ok(self.pres.star(a)?)
    }

    fn check(&self, a: &NcPoly) -> GrassmannResult<()> {
        for (w, _) in a.terms() {
            self.mask_of(w)?;
        }
        Ok(())
    }

    /// Coefficient of `th_n .. th_1` in `f`.
    pub fn top_coefficient(&self, f: &NcPoly) -> GrassmannResult<GaussianRational> {
        let coords = self.coordinates(f)?;
        let sign = if (self.n * self.n.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
        Ok(&coords[self.dim() - 1] * &GaussianRational::from_integer(sign))
    }

    /// `phi(f) = int f rho dth_n .. dth_1`, normalised so that the density
    /// `th_n .. th_1` integrates to one.
    pub fn berezin_expectation(&self, f: &NcPoly, rho: &NcPoly) -> GrassmannResult<GaussianRational> {
        self.top_coefficient(&self.mul(f, rho)?)
    }

    pub fn is_even_hermitian(&self, f: &NcPoly) -> GrassmannResult<bool> {
        let even = f.terms().all(|(w, _)| w.len() % 2 == 0);
        let diff = &self.star(f)? - &self.pres.normal_form(f)?;
        Ok(even && diff.is_zero())
    }
}

/// Density `rho` on `G_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannState {
    pub n: usize,
    pub density: NcPoly,
}

impl GrassmannState {
    pub fn expectation(&self, g: &Grassmann, f: &NcPoly) -> GrassmannResult<GaussianRational> {
        if g.n() != self.n {
            return Err(GrassmannError::Mismatch { n: g.n() });
        }
        g.berezin_expectation(f, &self.density)
    }
}

// Affine forms `a . x + k` over the real unknowns, stored as `[a.., k]`.
type Form = Vec<BigRational>;

#[derive(Clone, Copy)]
struct ComplexForm<'a> {
    re: &'a Form,
    im: &'a Form,
}

/// Reduced row-echelon system of equations `form = 0`.
#[derive(Clone, Debug, Default)]
struct Echelon {
    vars: usize,
    rows: Vec<(usize, Form)>,
    inconsistent: bool,
}

impl Echelon {
    fn new(vars: usize) -> Self {
        Self { vars, ..Self::default() }
    }

    fn reduce(&self, f: &Form) -> Form {
        let mut f = f.clone();
        for (p, row) in &self.rows {
            if !f[*p].is_zero() {
                let c = f[*p].clone();
                for (x, r) in f.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        f
    }

    fn vanishes(&self, f: &Form) -> bool {
        self.reduce(f).iter().all(Zero::is_zero)
    }

    /// Adds `f = 0`; returns whether the solution set shrank.
    fn push(&mut self, f: &Form) -> bool {
        let mut f = self.reduce(f);
        let Some(p) = (0..self.vars).find(|&j| !f[j].is_zero()) else {
            if !f[self.vars].is_zero() {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = f[p].recip();
        for x in f.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&f) {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((p, f));
        true
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Particular solution with all free unknowns zero.
    fn particular(&self) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); self.vars];
        for (p, row) in &self.rows {
            x[*p] = -row[self.vars].clone();
        }
        x
    }

    /// One direction per free unknown.
    fn directions(&self) -> Vec<Vec<BigRational>> {
        let pivots = self.pivots();
        (0..self.vars)
            .filter(|j| !pivots.contains(j))
            .map(|j| {
                let mut x = vec![BigRational::zero(); self.vars];
                x[j] = BigRational::one();
                for (p, row) in &self.rows {
                    x[*p] = -row[j].clone();
                }
                x
            })
            .collect()
    }
}

/// Solution set of the state conditions on `G_n`: `particular + span(free)`.
#[derive(Clone, Debug)]
pub struct StateFamily {
    pub n: usize,
    pub feasible: bool,
    pub particular: NcPoly,
    /// Real directions; the family is `particular + sum t_k free[k]`.
    pub free: Vec<NcPoly>,
    /// Basis monomials whose Gram row was forced to vanish by a zero diagonal.
    pub forced_rows: Vec<usize>,
    pub equations: usize,
}

impl StateFamily {
    pub fn is_singleton(&self) -> bool {
        self.feasible && self.free.is_empty()
    }

    pub fn state(&self) -> Option<GrassmannState> {
        self.is_singleton().then(|| GrassmannState { n: self.n, density: self.particular.clone() })
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solve normalisation, hermiticity and positivity of the Gram matrix
/// `phi(b_U* b_V)` for the density `rho = sum (r_U + i s_U) b_U`.
///
/// Positivity is resolved by the rule that a vanishing diagonal entry of a
/// positive semidefinite matrix forces its row to vanish, iterated to a
/// fixpoint; the remaining family is then checked to be a single state.
pub fn enumerate_states(n: usize) -> GrassmannResult<StateFamily> {
    if n > MAX_ENUMERATION {
        return Err(GrassmannError::TooLarge(n));
    }
    let g = Grassmann::new(n);
    let d = g.dim();
    let vars = 2 * d;
    let basis: Vec<NcPoly> = (0..d).map(|m| g.monomial(m)).collect();
    // pairing[x][w] = int b_x b_w
    let mut pairing = vec![vec![GaussianRational::zero(); d]; d];
    for x in 0..d {
        for w in 0..d {
            pairing[x][w] = g.berezin_expectation(&basis[x], &basis[w])?;
        }
    }
    // phi(f) as complex affine form in (r, s)
    let functional = |f: &NcPoly| -> GrassmannResult<(Form, Form)> {
        let coords = g.coordinates(f)?;
        let mut re = vec![BigRational::zero(); vars + 1];
        let mut im = vec![BigRational::zero(); vars + 1];
        for (x, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for w in 0..d {
                let beta = c * &pairing[x][w];
                // beta (r_w + i s_w)
                re[w] += beta.re();
                re[d + w] -= beta.im();
                im[w] += beta.im();
                im[d + w] += beta.re();
            }
        }
        Ok((re, im))
    };
    let stars: Vec<NcPoly> = basis.iter().map(|b| g.star(b)).collect::<GrassmannResult<_>>()?;
    let mut gram = Vec::with_capacity(d);
    for u in 0..d {
        let mut row = Vec::with_capacity(d);
        for v in 0..d {
            row.push(functional(&g.mul(&stars[u], &basis[v])?)?);
        }
        gram.push(row);
    }
    let entry = |u: usize, v: usize| ComplexForm { re: &gram[u][v].0, im: &gram[u][v].1 };

    let mut sys = Echelon::new(vars);
    let mut equations = 0;
    let mut add = |sys: &mut Echelon, f: Form| {
        equations += 1;
        sys.push(&f);
    };
    let (one_re, one_im) = functional(&NcPoly::one())?;
    let mut norm = one_re;
    norm[vars] -= q(1);
    add(&mut sys, norm);
    add(&mut sys, one_im);
    for u in 0..d {
        for v in u..d {
            let (a, b) = (entry(u, v), entry(v, u));
            add(&mut sys, a.re.iter().zip(b.re).map(|(x, y)| x - y).collect());
            add(&mut sys, a.im.iter().zip(b.im).map(|(x, y)| x + y).collect());
        }
    }
    let mut forced_rows = Vec::new();
    loop {
        let newly: Vec<usize> = (0..d).filter(|u| !forced_rows.contains(u) && sys.vanishes(entry(*u, *u).re)).collect();
        if newly.is_empty() {
            break;
        }
        for &u in &newly {
            for v in 0..d {
                add(&mut sys, entry(u, v).re.clone());
                add(&mut sys, entry(u, v).im.clone());
            }
        }
        forced_rows.extend(newly);
    }
    forced_rows.sort_unstable();
    let to_poly = |x: &[BigRational]| {
        let coords: Vec<GaussianRational> =
            (0..d).map(|w| GaussianRational::new(x[w].clone(), x[d + w].clone())).collect();
        g.from_coordinates(&coords)
    };
    Ok(StateFamily {
        n,
        feasible: !sys.inconsistent,
        particular: to_poly(&sys.particular()),
        free: sys.directions().iter().map(|x| to_poly(x)).collect(),
        forced_rows,
        equations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CcVerdict {
    Pass,
    /// Two distinct observables no listed pure state tells apart.
    Observables {
        first: usize,
        second: usize,
    },
    /// Two distinct states no listed observable tells apart.
    States {
        first: usize,
        second: usize,
    },
}

impl CcVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, CcVerdict::Pass)
    }
}

impl fmt::Display for CcVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CcVerdict::Pass => write!(f, "pass"),
            CcVerdict::Observables { first, second } => write!(f, "observables {first} and {second} are not separated"),
            CcVerdict::States { first, second } => write!(f, "states {first} and {second} are not separated"),
        }
    }
}

/// Expectation values above this difference separate.
pub const SEPARATION_TOL: f64 = 1e-9;

/// Compatible completeness of finite families, from the table of
/// expectations `table[a][s]` and equality tests on observables and states.
pub fn cc_check(
    table: &[Vec<Complex64>],
    same_observable: impl Fn(usize, usize) -> bool,
    same_state: impl Fn(usize, usize) -> bool,
) -> CcVerdict {
    let obs = table.len();
    let states = table.first().map_or(0, Vec::len);
    let separated = |x: Complex64, y: Complex64| (x - y).norm() > SEPARATION_TOL;
    for a in 0..obs {
        for b in a + 1..obs {
            if !same_observable(a, b) && !(0..states).any(|s| separated(table[a][s], table[b][s])) {
                return CcVerdict::Observables { first: a, second: b };
            }
        }
    }
    for s in 0..states {
        for t in s + 1..states {
            if !same_state(s, t) && !(0..obs).any(|a| separated(table[a][s], table[a][t])) {
                return CcVerdict::States { first: s, second: t };
            }
        }
    }
    CcVerdict::Pass
}

/// CC check on `G_n` with exact expectations.
pub fn grassmann_cc(g: &Grassmann, observables: &[NcPoly], states: &[GrassmannState]) -> GrassmannResult<CcVerdict> {
    let mut table = Vec::with_capacity(observables.len());
    for f in observables {
        let row =
            states.iter().map(|s| s.expectation(g, f).map(|v| v.to_complex())).collect::<GrassmannResult<Vec<_>>>()?;
        table.push(row);
    }
    let forms: Vec<NcPoly> = observables.iter().map(|f| g.pres.normal_form(f)).collect::<Result<_, _>>()?;
    let dens: Vec<NcPoly> = states.iter().map(|s| g.pres.normal_form(&s.density)).collect::<Result<_, _>>()?;
    Ok(cc_check(&table, |a, b| forms[a] == forms[b], |s, t| dens[s] == dens[t]))
}

/// `1 + i b th1 th2`: even, hermitian, and with expectation 1 in every
/// state of `G_n`, `n >= 2`.
pub fn witness_observable(g: &Grassmann, b: i64) -> NcPoly {
    let coeff = Coefficient::scalar(&GaussianRational::i() * &GaussianRational::from_integer(b));
    &NcPoly::one() + &g.monomial(0b11).scale(&coeff)
}

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// `I, sigma_x, sigma_y, sigma_z`.
pub fn pauli_basis() -> Vec<CMat> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    vec![
        CMat::identity(2, 2),
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ]
}

/// Unit vectors with components uniform in the complex unit square.
pub fn random_rays(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<CVec> {
    (0..count)
        .map(|_| {
            CVec::from_fn(dim, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .normalize()
        })
        .collect()
}

/// CC check for Hermitian matrices against vector states.
pub fn matrix_cc(observables: &[CMat], rays: &[CVec]) -> CcVerdict {
    let table: Vec<Vec<Complex64>> =
        observables.iter().map(|a| rays.iter().map(|psi| psi.dotc(&(a * psi))).collect()).collect();
    cc_check(
        &table,
        |a, b| (&observables[a] - &observables[b]).norm() <= SEPARATION_TOL,
        |s, t| (1.0 - rays[s].dotc(&rays[t]).norm_sqr()).abs() <= SEPARATION_TOL,
    )
}

/// The M_2 instance: Pauli observables and `count` seeded random rays.
pub fn matrix_cc_random(count: usize, seed: u64) -> CcVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    matrix_cc(&pauli_basis(), &random_rays(&mut rng, 2, count))
}

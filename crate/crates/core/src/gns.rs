//! Finite-dimensional *-algebras, states and the GNS construction.
//!
//! An algebra is given by its structure constants in a basis `b_1..b_d`,
//! the matrix of the involution on that basis and the coordinates of the
//! unit. Elements are coordinate vectors; a state is the vector of its
//! values `phi(b_i)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative singular-value cut for null spaces and ranks.
pub const RANK_TOL: f64 = 1e-10;
/// Gram eigenvalues down to `-PSD_TOL * trace` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance for structural identities of the algebra itself.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GnsError {
    #[error("dimension mismatch: got {got}, expected {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("structure constants are not associative (residual {0:.3e})")]
    NotAssociative(f64),
    #[error("unit is not a two-sided identity (residual {0:.3e})")]
    NotUnital(f64),
    #[error("involution: {0}")]
    BadStar(String),
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("element lies in the null ideal (phi(B*B) = {0:.3e})")]
    InNullIdeal(f64),
    #[error("empty list of states")]
    EmptyStateList,
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("algebra has no matrix-block structure")]
    NoBlocks,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

pub type GnsResult<T> = Result<T, GnsError>;

fn frob(m: &CMat) -> f64 {
    m.norm()
}

fn mat_scale(m: &CMat) -> f64 {
    frob(m).max(1.0)
}

/// Orthonormal basis of the null space of `m`, as columns. Singular values
/// up to `rel_tol * max(sigma_max, scale)` count as zero.
pub fn null_space(m: &CMat, rel_tol: f64, scale: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let padded = if m.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else if m.nrows() > 2 * cols {
        // same singular values and right vectors, much cheaper SVD
        m.clone().qr().r()
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().fold(scale, |a, s| a.max(*s));
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= rel_tol * smax).collect();
    let mut out = CMat::zeros(cols, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for r in 0..cols {
            out[(r, c)] = v_t[(i, r)].conj();
        }
    }
    out
}

pub fn rank(m: &CMat, rel_tol: f64, scale: f64) -> usize {
    m.ncols() - null_space(m, rel_tol, scale).ncols()
}

fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebra {
    name: String,
    labels: Vec<String>,
    // left[i] is the matrix of x -> b_i x
    left: Vec<CMat>,
    // column i holds the coordinates of b_i*
    star: CMat,
    unit: CVec,
    blocks: Option<Vec<usize>>,
}

impl FiniteAlgebra {
    /// `structure[i][j]` holds the coordinates of `b_i b_j`.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        structure: Vec<Vec<CVec>>,
        star: CMat,
        unit: CVec,
    ) -> GnsResult<Self> {
        let d = labels.len();
        if structure.len() != d || structure.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) {
            return Err(GnsError::DimensionMismatch { got: structure.len(), want: d });
        }
        if star.nrows() != d || star.ncols() != d || unit.len() != d {
            return Err(GnsError::DimensionMismatch { got: star.nrows(), want: d });
        }
        let left = (0..d)
            .map(|i| {
                let mut m = CMat::zeros(d, d);
                for j in 0..d {
                    m.set_column(j, &structure[i][j]);
                }
                m
            })
            .collect();
        let alg = Self { name: name.into(), labels, left, star, unit, blocks: None };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> GnsResult<()> {
        let d = self.dim();
        let scale = self.left.iter().map(mat_scale).fold(1.0, f64::max);
        let mut assoc = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let prod = self.left[i].column(j).into_owned();
                let lhs = &self.left[i] * &self.left[j];
                assoc = assoc.max(frob(&(lhs - self.left_matrix(&prod))));
            }
        }
        if assoc > STRUCTURE_TOL * scale * scale {
            return Err(GnsError::NotAssociative(assoc));
        }
        let lu = self.left_matrix(&self.unit);
        let mut unital = frob(&(lu - CMat::identity(d, d)));
        for j in 0..d {
            let e = self.basis(j);
            unital = unital.max((self.mul(&e, &self.unit) - e).norm());
        }
        if unital > STRUCTURE_TOL * scale {
            return Err(GnsError::NotUnital(unital));
        }
        let inv = frob(&(&self.star * self.star.map(|z| z.conj()) - CMat::identity(d, d)));
        if inv > STRUCTURE_TOL * mat_scale(&self.star).powi(2) {
            return Err(GnsError::BadStar(format!("not involutive (residual {inv:.3e})")));
        }
        let mut anti = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let (bi, bj) = (self.basis(i), self.basis(j));
                let lhs = self.star_of(&self.mul(&bi, &bj));
                let rhs = self.mul(&self.star_of(&bj), &self.star_of(&bi));
                anti = anti.max((lhs - rhs).norm());
            }
        }
        if anti > STRUCTURE_TOL * scale * mat_scale(&self.star).powi(2) {
            return Err(GnsError::BadStar(format!("not anti-multiplicative (residual {anti:.3e})")));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sizes of the matrix blocks for direct sums of full matrix algebras.
    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    pub fn basis(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[i] = ONE;
        v
    }

    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_matrix(&self, x: &CVec) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (i, c) in x.iter().enumerate() {
            if *c != ZERO {
                m += &self.left[i] * *c;
            }
        }
        m
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        self.left_matrix(x) * y
    }

    pub fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    /// Direct sum of full matrix algebras `M_{n_1} + ... + M_{n_k}`, with
    /// basis the matrix units of each block.
    pub fn matrix_sum(sizes: &[usize]) -> GnsResult<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(GnsError::UnknownAlgebra(format!("block sizes {sizes:?}")));
        }
        let multi = sizes.len() > 1;
        let mut units = Vec::new();
        for (b, &n) in sizes.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    units.push((b, i, j));
                }
            }
        }
        let d = units.len();
        let index = |b: usize, i: usize, j: usize| {
            let off: usize = sizes[..b].iter().map(|n| n * n).sum();
            off + i * sizes[b] + j
        };
        let label = |&(b, i, j): &(usize, usize, usize)| {
            let n = sizes[b];
            let core = if n < 10 { format!("e{}{}", i + 1, j + 1) } else { format!("e{},{}", i + 1, j + 1) };
            if multi {
                format!("{}:{core}", b + 1)
            } else {
                core
            }
        };
        let mut structure = vec![vec![CVec::zeros(d); d]; d];
        let mut star = CMat::zeros(d, d);
        let mut unit = CVec::zeros(d);
        for (x, &(b, i, j)) in units.iter().enumerate() {
            star[(index(b, j, i), x)] = ONE;
            if i == j {
                unit[x] = ONE;
            }
            for (y, &(c, k, l)) in units.iter().enumerate() {
                if b == c && j == k {
                    structure[x][y][index(b, i, l)] = ONE;
                }
            }
        }
        let name = if multi {
            format!("sumn:{}", sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
        } else {
            format!("matn:{}", sizes[0])
        };
        let mut alg = Self::new(name, units.iter().map(label).collect(), structure, star, unit)?;
        alg.blocks = Some(sizes.to_vec());
        Ok(alg)
    }

    pub fn matrix(n: usize) -> GnsResult<Self> {
        Self::matrix_sum(&[n])
    }

    /// The Grassmann algebra on `n` hermitian odd generators as an
    /// associative *-algebra; basis the ordered monomials, with
    /// `(t_{i1} .. t_{ik})* = t_{ik} .. t_{i1}`.
    pub fn grassmann(n: usize) -> GnsResult<Self> {
        if n > 6 {
            return Err(GnsError::UnknownAlgebra(format!("grassmann:{n} is too large")));
        }
        let d = 1usize << n;
        let label = |s: usize| {
            if s == 0 {
                return "1".to_string();
            }
            (0..n).filter(|k| s & (1 << k) != 0).map(|k| format!("th{}", k + 1)).collect::<Vec<_>>().join("*")
        };
        // sign of reordering the concatenation of two increasing monomials
        let sign = |a: usize, b: usize| -> f64 {
            let mut swaps = 0;
            for k in 0..n {
                if b & (1 << k) != 0 {
                    swaps += (a >> (k + 1)).count_ones();
                }
            }
            if swaps % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let mut structure = vec![vec![CVec::zeros(d); d]; d];
        let mut star = CMat::zeros(d, d);
        for a in 0..d {
            let k = a.count_ones() as usize;
            star[(a, a)] =
                Complex64::new(if (k * k.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
            for b in 0..d {
                if a & b == 0 {
                    structure[a][b][a | b] = Complex64::new(sign(a, b), 0.0);
                }
            }
        }
        let mut unit = CVec::zeros(d);
        unit[0] = ONE;
        Self::new(format!("grassmann:{n}"), (0..d).map(label).collect(), structure, star, unit)
    }

    /// `matn:<n>` (or `mat:<n>`), `sumn:<n1>,<n2>,...`, `grassmann:<n>`.
    pub fn builtin(spec: &str) -> GnsResult<Self> {
        let bad = || GnsError::UnknownAlgebra(spec.to_string());
        let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> =
            arg.split(',').map(|s| s.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        match (kind, nums.as_slice()) {
            ("matn" | "mat", [n]) if (1..=8).contains(n) => Self::matrix(*n),
            ("sumn" | "sum", ns) if !ns.is_empty() && ns.iter().all(|n| (1..=6).contains(n)) => Self::matrix_sum(ns),
            ("grassmann", [n]) => Self::grassmann(*n),
            _ => Err(bad()),
        }
    }

    /// Parse the structure-constant text format:
    ///
    /// ```text
    /// name  <name>
    /// basis <label> <label> ...
    /// unit  <combination>
    /// star  <label> = <combination>
    /// mul   <label> <label> = <combination>
    /// ```
    ///
    /// Combinations are sums of terms `[coefficient [*]] label` with real,
    /// imaginary (`2i`, `i`) or parenthesised complex coefficients.
    /// Products not listed vanish; `#` starts a comment.
    pub fn from_text(text: &str) -> GnsResult<Self> {
        let mut name = "custom".to_string();
        let mut labels: Option<Vec<String>> = None;
        let mut unit = None;
        let mut stars = Vec::new();
        let mut muls = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GnsError::Format { line: line_no, message };
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "name" => name = rest.to_string(),
                "basis" => {
                    let ls: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    if ls.is_empty() {
                        return Err(err("empty basis".into()));
                    }
                    labels = Some(ls);
                }
                "unit" => unit = Some((line_no, rest.to_string())),
                "star" => {
                    let (l, r) = rest.split_once('=').ok_or_else(|| err("expected `star a = ...`".into()))?;
                    stars.push((line_no, l.trim().to_string(), r.trim().to_string()));
                }
                "mul" => {
                    let (l, r) = rest.split_once('=').ok_or_else(|| err("expected `mul a b = ...`".into()))?;
                    let ab: Vec<&str> = l.split_whitespace().collect();
                    if ab.len() != 2 {
                        return Err(err("expected two factors".into()));
                    }
                    muls.push((line_no, ab[0].to_string(), ab[1].to_string(), r.trim().to_string()));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let labels = labels.ok_or(GnsError::Format { line: 0, message: "missing `basis`".into() })?;
        let d = labels.len();
        let idx = |line: usize, l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or(GnsError::Format { line, message: format!("unknown basis element `{l}`") })
        };
        let (uline, utext) = unit.ok_or(GnsError::Format { line: 0, message: "missing `unit`".into() })?;
        let unit = parse_combination(&utext, &labels).map_err(|m| GnsError::Format { line: uline, message: m })?;
        let mut star = CMat::zeros(d, d);
        let mut seen = vec![false; d];
        for (line, l, r) in stars {
            let i = idx(line, &l)?;
            let v = parse_combination(&r, &labels).map_err(|m| GnsError::Format { line, message: m })?;
            star.set_column(i, &v);
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GnsError::Format { line: 0, message: format!("no `star` for `{}`", labels[i]) });
        }
        let mut structure = vec![vec![CVec::zeros(d); d]; d];
        for (line, a, b, r) in muls {
            let (i, j) = (idx(line, &a)?, idx(line, &b)?);
            structure[i][j] = parse_combination(&r, &labels).map_err(|m| GnsError::Format { line, message: m })?;
        }
        Self::new(name, labels, structure, star, unit)
    }
}

fn parse_scalar(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        // a+bi or a-bi
        let inner = inner.replace(' ', "");
        let split = inner[1..].rfind(['+', '-']).map(|p| p + 1);
        return match split {
            Some(p) => {
                let re = inner[..p].parse::<f64>().ok()?;
                let im = parse_scalar(&inner[p..])?;
                if im.re != 0.0 {
                    return None;
                }
                Some(Complex64::new(re, im.im))
            }
            None => parse_scalar(&inner),
        };
    }
    if let Some(num) = s.strip_suffix('i') {
        let v = match num {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => num.parse::<f64>().ok()?,
        };
        return Some(Complex64::new(0.0, v));
    }
    s.parse::<f64>().ok().map(|v| Complex64::new(v, 0.0))
}

fn parse_combination(text: &str, labels: &[String]) -> Result<CVec, String> {
    let mut out = CVec::zeros(labels.len());
    let text = text.trim();
    if text == "0" {
        return Ok(out);
    }
    // split at top-level + and - signs
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (k, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && k > start && !text[..k].trim_end().ends_with(['*', 'e', 'E']) => {
                terms.push(&text[start..k]);
                start = k;
            }
            _ => {}
        }
    }
    terms.push(&text[start..]);
    for term in terms {
        let t = term.trim();
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1.0, b.trim()),
            None => (1.0, t.strip_prefix('+').unwrap_or(t).trim()),
        };
        let (coef, label) = match body.rsplit_once(|c: char| c == '*' || c.is_whitespace()) {
            Some((c, l)) => {
                (parse_scalar(c.trim().trim_end_matches('*')).ok_or(format!("bad coefficient `{c}`"))?, l.trim())
            }
            None => (ONE, body),
        };
        let i = labels.iter().position(|l| l == label).ok_or(format!("unknown basis element `{label}`"))?;
        out[i] += coef * sign;
    }
    Ok(out)
}

/// `phi(b_i)` for each basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFunctional {
    values: CVec,
}

impl StateFunctional {
    pub fn new(values: CVec) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &CVec {
        &self.values
    }

    pub fn eval(&self, x: &CVec) -> Complex64 {
        self.values.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    /// The coordinate functional of one basis element, e.g. `A -> A_11`.
    pub fn coordinate(alg: &FiniteAlgebra, label: &str) -> GnsResult<Self> {
        let i = alg.index_of(label).ok_or_else(|| GnsError::UnknownState(label.to_string()))?;
        Ok(Self::new(alg.basis(i)))
    }

    /// `phi(A) = sum_b w_b Tr(rho_b A_b)` on a direct sum of matrix blocks.
    pub fn from_densities(alg: &FiniteAlgebra, blocks: &[(f64, CMat)]) -> GnsResult<Self> {
        let sizes = alg.blocks().ok_or(GnsError::NoBlocks)?;
        if blocks.len() != sizes.len() {
            return Err(GnsError::DimensionMismatch { got: blocks.len(), want: sizes.len() });
        }
        let mut v = Vec::with_capacity(alg.dim());
        for ((w, rho), &n) in blocks.iter().zip(sizes) {
            if rho.nrows() != n || rho.ncols() != n {
                return Err(GnsError::DimensionMismatch { got: rho.nrows(), want: n });
            }
            for i in 0..n {
                for j in 0..n {
                    // phi(e_ij) = Tr(rho e_ij) = rho_ji
                    v.push(rho[(j, i)] * *w);
                }
            }
        }
        Ok(Self::new(CVec::from_vec(v)))
    }

    /// Normalised trace of the block algebra.
    pub fn trace(alg: &FiniteAlgebra) -> GnsResult<Self> {
        let sizes = alg.blocks().ok_or(GnsError::NoBlocks)?;
        let total: usize = sizes.iter().sum();
        let blocks: Vec<(f64, CMat)> = sizes
            .iter()
            .map(|&n| (n as f64 / total as f64, CMat::identity(n, n) / Complex64::new(n as f64, 0.0)))
            .collect();
        Self::from_densities(alg, &blocks)
    }

    /// `trace`, a basis label, or comma-separated values `phi(b_i)`.
    pub fn parse(alg: &FiniteAlgebra, spec: &str) -> GnsResult<Self> {
        let s = spec.trim();
        if s == "trace" || s == "tr" {
            return Self::trace(alg);
        }
        if alg.index_of(s).is_some() {
            return Self::coordinate(alg, s);
        }
        let vals: Option<Vec<Complex64>> = s.split(',').map(parse_scalar).collect();
        match vals {
            Some(v) if v.len() == alg.dim() => Ok(Self::new(CVec::from_vec(v))),
            _ => Err(GnsError::UnknownState(spec.to_string())),
        }
    }
}

/// Random density matrix of the given rank (entries uniform in the unit
/// square before `G G^*`).
pub fn random_density(rng: &mut impl Rng, n: usize, rank: usize) -> CMat {
    let g =
        CMat::from_fn(n, rank.max(1), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Random state on a block algebra; pure states are a random ray in one
/// random block, mixed states weight every block with full-rank densities.
pub fn random_state(alg: &FiniteAlgebra, rng: &mut impl Rng, pure: bool) -> GnsResult<StateFunctional> {
    let sizes = alg.blocks().ok_or(GnsError::NoBlocks)?.to_vec();
    let blocks: Vec<(f64, CMat)> = if pure {
        let pick = rng.random_range(0..sizes.len());
        sizes
            .iter()
            .enumerate()
            .map(|(b, &n)| if b == pick { (1.0, random_density(rng, n, 1)) } else { (0.0, CMat::zeros(n, n)) })
            .collect()
    } else {
        let w: Vec<f64> = sizes.iter().map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = w.iter().sum();
        sizes.iter().zip(&w).map(|(&n, wi)| (wi / total, random_density(rng, n, n))).collect()
    };
    StateFunctional::from_densities(alg, &blocks)
}

/// `G_ij = phi(b_i* b_j)`.
pub fn gram(alg: &FiniteAlgebra, phi: &StateFunctional) -> GnsResult<CMat> {
    let d = alg.dim();
    if phi.values.len() != d {
        return Err(GnsError::DimensionMismatch { got: phi.values.len(), want: d });
    }
    let stars: Vec<CVec> = (0..d).map(|i| alg.star_of(&alg.basis(i))).collect();
    Ok(CMat::from_fn(d, d, |i, j| phi.eval(&alg.mul(&stars[i], &alg.basis(j)))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateCheck {
    pub normalization_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub psd_threshold: f64,
    pub valid: bool,
}

pub fn check_state(alg: &FiniteAlgebra, phi: &StateFunctional) -> GnsResult<StateCheck> {
    let g = gram(alg, phi)?;
    let normalization_error = (phi.eval(alg.unit()) - ONE).norm();
    let hermiticity_error = frob(&(&g - g.adjoint()));
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.iter().fold(f64::INFINITY, |a, v| a.min(*v));
    let psd_threshold = -PSD_TOL * h.trace().re.abs().max(f64::MIN_POSITIVE);
    let scale = frob(&g).max(1.0);
    let valid = normalization_error <= 1e-12 && hermiticity_error <= 1e-12 * scale && min_eigenvalue >= psd_threshold;
    Ok(StateCheck { normalization_error, hermiticity_error, min_eigenvalue, psd_threshold, valid })
}

/// Matrices `pi(b_i)` of a finite-dimensional representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub dim: usize,
    pub matrices: Vec<CMat>,
}

impl Representation {
    /// Largest Frobenius norm among the generators.
    pub fn scale(&self) -> f64 {
        self.matrices.iter().map(frob).fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (c, p) in x.iter().zip(&self.matrices) {
            if *c != ZERO {
                m += p * *c;
            }
        }
        m
    }

    /// `max ||pi(b_i b_j) - pi(b_i) pi(b_j)||` and `max ||pi(b_i*) - pi(b_i)^*||`.
    pub fn homomorphism_residuals(&self, alg: &FiniteAlgebra) -> (f64, f64) {
        let d = alg.dim();
        let mut hom = 0.0f64;
        let mut star = 0.0f64;
        for i in 0..d {
            let bi = alg.basis(i);
            for j in 0..d {
                let prod = alg.mul(&bi, &alg.basis(j));
                hom = hom.max(frob(&(self.apply(&prod) - &self.matrices[i] * &self.matrices[j])));
            }
            star = star.max(frob(&(self.apply(&alg.star_of(&bi)) - self.matrices[i].adjoint())));
        }
        (hom, star)
    }

    /// Dimension of `{C : C pi(b_i) = pi(b_i) C for all i}`.
    ///
    /// The image of a *-representation is a semisimple algebra, generated by
    /// two generic elements and their adjoints; larger families are reduced
    /// to such a pair.
    pub fn commutant_dim(&self) -> usize {
        let r = self.dim;
        if r == 0 {
            return 0;
        }
        let gens: Vec<CMat> = if self.matrices.len() > 4 {
            let coeffs = generic_coefficients(2 * self.matrices.len());
            let (cx, cy) = coeffs.split_at(self.matrices.len());
            let x = self.apply(&CVec::from_column_slice(cx));
            let y = self.apply(&CVec::from_column_slice(cy));
            vec![x.adjoint(), y.adjoint(), x, y]
        } else {
            self.matrices.clone()
        };
        let scale = gens.iter().map(frob).fold(0.0, f64::max);
        let id = CMat::identity(r, r);
        let blocks: Vec<CMat> = gens.iter().map(|m| m.transpose().kronecker(&id) - id.kronecker(m)).collect();
        null_space(&stack(&blocks, r * r), RANK_TOL, scale).ncols()
    }

    pub fn block_sum(reps: &[&Representation]) -> Representation {
        let dim: usize = reps.iter().map(|r| r.dim).sum();
        let count = reps.first().map_or(0, |r| r.matrices.len());
        let matrices = (0..count)
            .map(|i| {
                let mut m = CMat::zeros(dim, dim);
                let mut off = 0;
                for r in reps {
                    m.view_mut((off, off), (r.dim, r.dim)).copy_from(&r.matrices[i]);
                    off += r.dim;
                }
                m
            })
            .collect();
        Representation { dim, matrices }
    }

    /// Dimension of `{x : pi(x) = 0}`.
    pub fn kernel_dim(&self) -> usize {
        let d = self.matrices.len();
        let mut a = CMat::zeros(self.dim * self.dim, d);
        for (i, m) in self.matrices.iter().enumerate() {
            a.set_column(i, &vec_of(m));
        }
        if self.dim == 0 {
            return d;
        }
        null_space(&a, RANK_TOL, self.scale()).ncols()
    }
}

fn stack(blocks: &[CMat], cols: usize) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, 0), (b.nrows(), cols)).copy_from(b);
        off += b.nrows();
    }
    out
}

#[derive(Clone, Debug)]
pub struct GnsRep {
    pub rep: Representation,
    /// Cyclic vector `[I]`.
    pub cyclic: CVec,
    /// Columns span the null ideal `{A : phi(A*A) = 0}`.
    pub null_basis: CMat,
    pub commutant_dim: usize,
    /// `max_i |phi(b_i) - (chi, pi(b_i) chi)|`.
    pub reconstruction_residual: f64,
}

impl GnsRep {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn is_irreducible(&self) -> bool {
        self.commutant_dim == 1
    }
}

pub fn gns(alg: &FiniteAlgebra, phi: &StateFunctional) -> GnsResult<GnsRep> {
    let check = check_state(alg, phi)?;
    if !check.valid {
        return Err(GnsError::NotAState(format!(
            "normalization error {:.3e}, min Gram eigenvalue {:.3e}",
            check.normalization_error, check.min_eigenvalue
        )));
    }
    let d = alg.dim();
    let g = gram(alg, phi)?;
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(*v));
    let kept: Vec<usize> = (0..d).filter(|&k| eig.eigenvalues[k] > RANK_TOL * lmax).collect();
    let null: Vec<usize> = (0..d).filter(|k| !kept.contains(k)).collect();
    let r = kept.len();
    // J = L^{1/2} V^*: [a] -> C^r is isometric for (x, y) = x^* G y
    let mut j = CMat::zeros(r, d);
    let mut j_inv = CMat::zeros(d, r);
    for (row, &k) in kept.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        let v = eig.eigenvectors.column(k);
        for c in 0..d {
            j[(row, c)] = v[c].conj() * s;
            j_inv[(c, row)] = v[c] / s;
        }
    }
    let mut null_basis = CMat::zeros(d, null.len());
    for (c, &k) in null.iter().enumerate() {
        null_basis.set_column(c, &eig.eigenvectors.column(k));
    }
    let matrices: Vec<CMat> = (0..d).map(|i| &j * alg.left_matrix(&alg.basis(i)) * &j_inv).collect();
    let rep = Representation { dim: r, matrices };
    let cyclic = &j * alg.unit();
    let reconstruction_residual = (0..d)
        .map(|i| (phi.values[i] - (cyclic.adjoint() * &rep.matrices[i] * &cyclic)[(0, 0)]).norm())
        .fold(0.0, f64::max);
    let commutant_dim = rep.commutant_dim();
    Ok(GnsRep { rep, cyclic, null_basis, commutant_dim, reconstruction_residual })
}

pub fn is_pure(alg: &FiniteAlgebra, phi: &StateFunctional) -> GnsResult<bool> {
    Ok(gns(alg, phi)?.is_irreducible())
}

/// `phi_B(A) = phi(B* A B) / phi(B* B)`.
pub fn state_from_vector(alg: &FiniteAlgebra, phi: &StateFunctional, b: &CVec) -> GnsResult<StateFunctional> {
    if b.len() != alg.dim() {
        return Err(GnsError::DimensionMismatch { got: b.len(), want: alg.dim() });
    }
    let bs = alg.star_of(b);
    let norm = phi.eval(&alg.mul(&bs, b));
    let scale = b.norm().powi(2).max(f64::MIN_POSITIVE);
    if norm.norm() <= 1e-12 * scale {
        return Err(GnsError::InNullIdeal(norm.norm()));
    }
    let values = (0..alg.dim()).map(|i| phi.eval(&alg.mul(&alg.mul(&bs, &alg.basis(i)), b)) / norm).collect();
    Ok(StateFunctional::new(CVec::from_vec(values)))
}

fn generic_coefficients(n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..n).map(|_| Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5))).collect()
}

#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub unitary: CMat,
    /// `max_i ||U pi_1(b_i) - pi_2(b_i) U||`.
    pub residual: f64,
}

pub const INTERTWINER_TOL: f64 = 1e-10;

/// A unitary `U` with `U pi_1(b_i) U^* = pi_2(b_i)`, if one exists.
pub fn find_intertwiner(rep1: &Representation, rep2: &Representation) -> Option<Intertwiner> {
    let (r1, r2) = (rep1.dim, rep2.dim);
    if r1 != r2 || rep1.matrices.len() != rep2.matrices.len() || r1 == 0 {
        return None;
    }
    let i1 = CMat::identity(r1, r1);
    let i2 = CMat::identity(r2, r2);
    let blocks: Vec<CMat> =
        rep1.matrices.iter().zip(&rep2.matrices).map(|(a, b)| a.transpose().kronecker(&i2) - i1.kronecker(b)).collect();
    let ns = null_space(&stack(&blocks, r1 * r2), RANK_TOL, rep1.scale().max(rep2.scale()));
    if ns.ncols() == 0 {
        return None;
    }
    let coeffs = generic_coefficients(ns.ncols());
    let mut v = CVec::zeros(r1 * r2);
    for (c, k) in coeffs.iter().zip(0..ns.ncols()) {
        v += ns.column(k) * *c;
    }
    let u = CMat::from_column_slice(r2, r1, v.as_slice());
    let svd = u.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-8 * smax {
        return None;
    }
    let w = svd.u.expect("requested") * svd.v_t.expect("requested");
    let residual = rep1.matrices.iter().zip(&rep2.matrices).map(|(a, b)| frob(&(&w * a - b * &w))).fold(0.0, f64::max);
    (residual <= INTERTWINER_TOL).then_some(Intertwiner { unitary: w, residual })
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub rep: Representation,
    pub block_dims: Vec<usize>,
    pub kernel_dim: usize,
}

impl DirectSum {
    pub fn is_faithful(&self) -> bool {
        self.kernel_dim == 0
    }
}

/// Block sum of the GNS representations of the given states.
pub fn direct_sum_faithful(alg: &FiniteAlgebra, states: &[StateFunctional]) -> GnsResult<DirectSum> {
    if states.is_empty() {
        return Err(GnsError::EmptyStateList);
    }
    let reps: Vec<GnsRep> = states.iter().map(|s| gns(alg, s)).collect::<GnsResult<_>>()?;
    let refs: Vec<&Representation> = reps.iter().map(|g| &g.rep).collect();
    let rep = Representation::block_sum(&refs);
    let kernel_dim = rep.kernel_dim();
    Ok(DirectSum { block_dims: reps.iter().map(|g| g.dim()).collect(), rep, kernel_dim })
}

#[derive(Clone, Debug)]
pub struct Sector {
    pub dim: usize,
    pub projection: CMat,
    /// First basis index `i` with `P pi(b_i) != 0`.
    pub first_index: usize,
}

#[derive(Clone, Debug)]
pub struct Superselection {
    pub center_dim: usize,
    pub sectors: Vec<Sector>,
    /// `max ||[P_a, pi(b_i)]||`.
    pub commutator_residual: f64,
    /// `||sum P_a - I||`.
    pub sum_residual: f64,
    /// `max ||P_a P_b - delta_ab P_a||`.
    pub orthogonality_residual: f64,
}

impl Superselection {
    pub fn dims(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.dim).collect()
    }

    /// `Q = sum_a a_a P_a`.
    pub fn operator(&self, values: &[f64]) -> CMat {
        let n = self.sectors.first().map_or(0, |s| s.projection.nrows());
        let mut q = CMat::zeros(n, n);
        for (s, a) in self.sectors.iter().zip(values) {
            q += &s.projection * Complex64::new(*a, 0.0);
        }
        q
    }
}

// Entries within this distance of an integer are rounded to it, so that
// projections aligned with the representation basis come out exact.
const SNAP: f64 = 1e-12;

fn snap(z: Complex64) -> Complex64 {
    let f = |v: f64| if (v - v.round()).abs() < SNAP { v.round() } else { v };
    Complex64::new(f(z.re), f(z.im))
}

/// Minimal central projections of the image algebra of `rep`.
pub fn superselection_decompose(rep: &Representation) -> Superselection {
    let n = rep.dim;
    let d = rep.matrices.len();
    let mut a = CMat::zeros(n * n, d);
    for (i, m) in rep.matrices.iter().enumerate() {
        a.set_column(i, &vec_of(m));
    }
    // orthonormal basis of the image
    let svd = a.clone().svd(true, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |x, s| x.max(*s));
    let u = svd.u.expect("requested");
    let image: Vec<CMat> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > RANK_TOL * smax)
        .map(|k| CMat::from_column_slice(n, n, u.column(k).as_slice()))
        .collect();
    let m = image.len();
    // z with [sum z_k E_k, E_l] = 0 for all l
    let mut blocks = Vec::with_capacity(m);
    for el in &image {
        let mut b = CMat::zeros(n * n, m);
        for (k, ek) in image.iter().enumerate() {
            b.set_column(k, &vec_of(&(ek * el - el * ek)));
        }
        blocks.push(b);
    }
    let center = null_space(&stack(&blocks, m), RANK_TOL, 1.0);
    let center_dim = center.ncols();
    let mut hermitian = Vec::new();
    for c in 0..center_dim {
        let mut z = CMat::zeros(n, n);
        for (k, ek) in image.iter().enumerate() {
            z += ek * center[(k, c)];
        }
        hermitian.push((&z + z.adjoint()) * Complex64::new(0.5, 0.0));
        hermitian.push((&z - z.adjoint()) * Complex64::new(0.0, -0.5));
    }
    let coeffs = generic_coefficients(hermitian.len());
    let mut h = CMat::zeros(n, n);
    for (z, c) in hermitian.iter().zip(&coeffs) {
        h += z * Complex64::new(c.re, 0.0);
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let spread = eig.eigenvalues.iter().fold(0.0f64, |x, v| x.max(v.abs())).max(1.0);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(g) if (eig.eigenvalues[k] - eig.eigenvalues[*g.last().expect("nonempty")]).abs() <= 1e-8 * spread => {
                g.push(k)
            }
            _ => groups.push(vec![k]),
        }
    }
    let mut sectors: Vec<Sector> = groups
        .iter()
        .map(|g| {
            let mut p = CMat::zeros(n, n);
            for &k in g {
                let v = eig.eigenvectors.column(k);
                p += v * v.adjoint();
            }
            let p = p.map(snap);
            let first_index = rep.matrices.iter().position(|m| frob(&(&p * m)) > RANK_TOL).unwrap_or(d);
            Sector { dim: g.len(), projection: p, first_index }
        })
        .collect();
    sectors.sort_by(|x, y| y.dim.cmp(&x.dim).then(x.first_index.cmp(&y.first_index)));
    let mut commutator_residual = 0.0f64;
    let mut orthogonality_residual = 0.0f64;
    let mut sum = CMat::zeros(n, n);
    for (i, s) in sectors.iter().enumerate() {
        for m in &rep.matrices {
            commutator_residual = commutator_residual.max(frob(&(&s.projection * m - m * &s.projection)));
        }
        for (j, t) in sectors.iter().enumerate() {
            let want = if i == j { s.projection.clone() } else { CMat::zeros(n, n) };
            orthogonality_residual = orthogonality_residual.max(frob(&(&s.projection * &t.projection - want)));
        }
        sum += &s.projection;
    }
    let sum_residual = frob(&(sum - CMat::identity(n, n)));
    Superselection { center_dim, sectors, commutator_residual, sum_residual, orthogonality_residual }
}

#[derive(Clone, Debug)]
pub struct Povm {
    /// Orthonormal basis whose first vector is the second state's ray.
    pub basis: Vec<CVec>,
    /// `Tr(rho_1 nu({1}))`.
    pub probability: f64,
    /// `||sum_r |chi_r><chi_r| - I||`.
    pub completeness_residual: f64,
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub probability: f64,
    pub povm: Option<Povm>,
}

pub const DENSITY_TOL: f64 = 1e-10;

fn check_density(rho: &CMat) -> GnsResult<()> {
    if rho.nrows() != rho.ncols() {
        return Err(GnsError::NotDensity("not square".into()));
    }
    if frob(&(rho - rho.adjoint())) > DENSITY_TOL {
        return Err(GnsError::NotDensity("not hermitian".into()));
    }
    if (rho.trace() - ONE).norm() > DENSITY_TOL {
        return Err(GnsError::NotDensity(format!("trace {}", rho.trace())));
    }
    let min = rho.clone().symmetric_eigen().eigenvalues.min();
    if min < -DENSITY_TOL {
        return Err(GnsError::NotDensity(format!("eigenvalue {min:.3e}")));
    }
    Ok(())
}

fn pure_ray(rho: &CMat) -> Option<CVec> {
    let purity = (rho * rho).trace().re;
    if (purity - 1.0).abs() > DENSITY_TOL {
        return None;
    }
    let eig = rho.clone().symmetric_eigen();
    let k = eig.eigenvalues.imax();
    Some(eig.eigenvectors.column(k).into_owned())
}

/// Gram-Schmidt completion of `first` to an orthonormal basis.
fn complete_basis(first: &CVec) -> Vec<CVec> {
    let n = first.len();
    let mut basis = vec![first.normalize()];
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = CVec::zeros(n);
        v[e] = ONE;
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        if v.norm() > 1e-8 {
            basis.push(v.normalize());
        }
    }
    basis
}

/// `w = Tr(rho_1 rho_2)`; for pure inputs also the measurement realising it.
pub fn transition_probability(rho1: &CMat, rho2: &CMat) -> GnsResult<Transition> {
    check_density(rho1)?;
    check_density(rho2)?;
    if rho1.nrows() != rho2.nrows() {
        return Err(GnsError::DimensionMismatch { got: rho2.nrows(), want: rho1.nrows() });
    }
    let probability = (rho1 * rho2).trace().re;
    let povm = match (pure_ray(rho1), pure_ray(rho2)) {
        (Some(_), Some(psi2)) => {
            let basis = complete_basis(&psi2);
            let n = rho1.nrows();
            let chi = &basis[0];
            let nu1 = chi * chi.adjoint();
            let p = (rho1 * nu1).trace().re;
            let mut total = CMat::zeros(n, n);
            for b in &basis {
                total += b * b.adjoint();
            }
            Some(Povm { probability: p, completeness_residual: frob(&(total - CMat::identity(n, n))), basis })
        }
        _ => None,
    };
    Ok(Transition { probability, povm })
}

/// `|psi><psi|` for a normalised copy of `psi`.
pub fn ray_density(psi: &CVec) -> CMat {
    let v = psi.normalize();
    &v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> FiniteAlgebra {
        FiniteAlgebra::matrix(2).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn builtins_validate() {
        for spec in ["matn:1", "matn:3", "mat:2", "sumn:2,3", "sumn:1,1", "grassmann:3"] {
            let a = FiniteAlgebra::builtin(spec).unwrap();
            assert!(a.dim() > 0);
        }
        assert_eq!(FiniteAlgebra::builtin("sumn:2,3").unwrap().dim(), 13);
        assert_eq!(FiniteAlgebra::builtin("grassmann:3").unwrap().dim(), 8);
        assert!(FiniteAlgebra::builtin("foo:2").is_err());
    }

    #[test]
    fn broken_structure_rejected() {
        let labels = vec!["1".to_string(), "a".to_string()];
        let e = |v: [f64; 2]| CVec::from_vec(vec![c(v[0]), c(v[1])]);
        // a^2 = 1 + a is associative; a^2 = 1 with a* = i a is not an involution
        let structure = vec![vec![e([1.0, 0.0]), e([0.0, 1.0])], vec![e([0.0, 1.0]), e([1.0, 0.0])]];
        let mut star = CMat::identity(2, 2);
        star[(1, 1)] = Complex64::new(0.0, 1.0);
        let err = FiniteAlgebra::new("x", labels.clone(), structure.clone(), star, e([1.0, 0.0])).unwrap_err();
        assert!(matches!(err, GnsError::BadStar(_)));
        let err = FiniteAlgebra::new("x", labels, structure, CMat::identity(2, 2), e([0.0, 1.0])).unwrap_err();
        assert!(matches!(err, GnsError::NotUnital(_)));
    }

    #[test]
    fn state_checks() {
        let a = m2();
        assert!(check_state(&a, &StateFunctional::coordinate(&a, "e11").unwrap()).unwrap().valid);
        assert!(!check_state(&a, &StateFunctional::coordinate(&a, "e12").unwrap()).unwrap().valid);
        let tr = StateFunctional::trace(&a).unwrap();
        assert!(check_state(&a, &tr).unwrap().valid);
        let g = gram(&a, &tr).unwrap();
        assert!(frob(&(g - CMat::identity(4, 4) * c(0.5))) < 1e-15);
    }

    #[test]
    fn gns_examples() {
        let a = m2();
        let e11 = gns(&a, &StateFunctional::coordinate(&a, "e11").unwrap()).unwrap();
        assert_eq!((e11.dim(), e11.commutant_dim), (2, 1));
        assert!(e11.reconstruction_residual < 1e-12);
        let tr = gns(&a, &StateFunctional::trace(&a).unwrap()).unwrap();
        assert_eq!((tr.dim(), tr.commutant_dim), (4, 4));
        let (hom, star) = tr.rep.homomorphism_residuals(&a);
        assert!(hom < 1e-12 && star < 1e-12);
        let c1 = FiniteAlgebra::matrix(1).unwrap();
        let one = gns(&c1, &StateFunctional::coordinate(&c1, "e11").unwrap()).unwrap();
        assert_eq!(one.dim(), 1);
        let cc = FiniteAlgebra::builtin("sumn:1,1").unwrap();
        assert!(is_pure(&cc, &StateFunctional::coordinate(&cc, "1:e11").unwrap()).unwrap());
    }

    #[test]
    fn vector_states() {
        let a = m2();
        let phi = StateFunctional::coordinate(&a, "e11").unwrap();
        let e21 = a.basis(a.index_of("e21").unwrap());
        let phib = state_from_vector(&a, &phi, &e21).unwrap();
        assert_eq!(phib, StateFunctional::coordinate(&a, "e22").unwrap());
        assert!(is_pure(&a, &phib).unwrap());
        let two = a.unit() * c(2.0);
        assert_eq!(state_from_vector(&a, &phi, &two).unwrap(), phi);
        // e12 lies in the null ideal of A -> A_11
        let e12 = a.basis(a.index_of("e12").unwrap());
        assert!(state_from_vector(&a, &phi, &e12).is_err());
        // phi_{B + K} = phi_B for K in the null ideal
        let shifted = state_from_vector(&a, &phi, &(&e21 + &e12 * c(3.0))).unwrap();
        assert!((shifted.values() - phib.values()).norm() < 1e-14);
    }

    #[test]
    fn intertwiners() {
        let a = m2();
        let r11 = gns(&a, &StateFunctional::coordinate(&a, "e11").unwrap()).unwrap();
        let r22 = gns(&a, &StateFunctional::coordinate(&a, "e22").unwrap()).unwrap();
        let u = find_intertwiner(&r11.rep, &r22.rep).unwrap();
        assert!(u.residual < 1e-12);
        let uu = &u.unitary * u.unitary.adjoint();
        assert!(frob(&(uu - CMat::identity(2, 2))) < 1e-12);
        assert!(find_intertwiner(&r11.rep, &r11.rep).is_some());
        let s = FiniteAlgebra::builtin("sumn:2,3").unwrap();
        let p2 = gns(&s, &StateFunctional::coordinate(&s, "1:e11").unwrap()).unwrap();
        let p3 = gns(&s, &StateFunctional::coordinate(&s, "2:e11").unwrap()).unwrap();
        assert!(find_intertwiner(&p2.rep, &p3.rep).is_none());
    }

    #[test]
    fn faithfulness() {
        let a = m2();
        let s11 = StateFunctional::coordinate(&a, "e11").unwrap();
        let s22 = StateFunctional::coordinate(&a, "e22").unwrap();
        assert!(direct_sum_faithful(&a, &[s11.clone(), s22]).unwrap().is_faithful());
        assert!(direct_sum_faithful(&a, &[s11]).unwrap().is_faithful());
        let cc = FiniteAlgebra::builtin("sumn:1,1").unwrap();
        let first = StateFunctional::coordinate(&cc, "1:e11").unwrap();
        let ds = direct_sum_faithful(&cc, &[first]).unwrap();
        assert_eq!(ds.kernel_dim, 1);
        assert!(direct_sum_faithful(&a, &[]).is_err());
    }

    #[test]
    fn sectors() {
        let s = FiniteAlgebra::builtin("sumn:2,3").unwrap();
        let states =
            [StateFunctional::coordinate(&s, "2:e22").unwrap(), StateFunctional::coordinate(&s, "1:e11").unwrap()];
        let ds = direct_sum_faithful(&s, &states).unwrap();
        assert!(ds.is_faithful());
        let sel = superselection_decompose(&ds.rep);
        assert_eq!(sel.dims(), vec![3, 2]);
        assert_eq!(sel.center_dim, 2);
        assert!(sel.commutator_residual <= 1e-12);
        assert_eq!(sel.sum_residual, 0.0);
        let q = sel.operator(&[1.0, -2.0]);
        for m in &ds.rep.matrices {
            assert!(frob(&(&q * m - m * &q)) < 1e-12);
        }
        let a = m2();
        let irr = gns(&a, &StateFunctional::coordinate(&a, "e11").unwrap()).unwrap();
        assert_eq!(superselection_decompose(&irr.rep).sectors.len(), 1);
        let cc = FiniteAlgebra::builtin("sumn:1,1").unwrap();
        let both =
            [StateFunctional::coordinate(&cc, "1:e11").unwrap(), StateFunctional::coordinate(&cc, "2:e11").unwrap()];
        let sel = superselection_decompose(&direct_sum_faithful(&cc, &both).unwrap().rep);
        assert_eq!(sel.dims(), vec![1, 1]);
    }

    #[test]
    fn random_states_purity_matches_density_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = FiniteAlgebra::builtin("sumn:2,3").unwrap();
        for k in 0..20 {
            let pure = k % 2 == 0;
            let phi = random_state(&s, &mut rng, pure).unwrap();
            let g = gns(&s, &phi).unwrap();
            assert_eq!(g.is_irreducible(), pure);
            assert!(g.reconstruction_residual < 1e-12);
        }
    }

    #[test]
    fn transition_examples() {
        let psi1 = CVec::from_vec(vec![c(1.0), c(0.0)]);
        let psi2 = CVec::from_vec(vec![c(1.0), c(1.0)]);
        let t = transition_probability(&ray_density(&psi1), &ray_density(&psi2)).unwrap();
        assert!((t.probability - 0.5).abs() < 1e-15);
        let povm = t.povm.unwrap();
        assert!((povm.probability - 0.5).abs() < 1e-15);
        assert!(povm.completeness_residual < 1e-15);
        let same = transition_probability(&ray_density(&psi2), &ray_density(&psi2)).unwrap();
        assert!((same.probability - 1.0).abs() < 1e-15);
        let orth = CVec::from_vec(vec![c(0.0), c(1.0)]);
        let o = transition_probability(&ray_density(&psi1), &ray_density(&orth)).unwrap();
        assert!(o.probability.abs() < 1e-15);
        assert!(transition_probability(&(CMat::identity(2, 2) * c(2.0)), &ray_density(&psi1)).is_err());
    }

    #[test]
    fn text_format() {
        let text = "\
name c2
basis 1 u   # u^2 = 1
unit 1
star 1 = 1
star u = u
mul 1 1 = 1
mul 1 u = u
mul u 1 = u
mul u u = 1
";
        let a = FiniteAlgebra::from_text(text).unwrap();
        assert_eq!(a.dim(), 2);
        let half = StateFunctional::new(CVec::from_vec(vec![c(1.0), c(0.0)]));
        let g = gns(&a, &half).unwrap();
        assert_eq!((g.dim(), g.commutant_dim), (2, 2));
        let bad = "basis 1 u\nunit 1\nstar 1 = 1\nstar u = u\nmul u u = w\n";
        assert!(matches!(FiniteAlgebra::from_text(bad), Err(GnsError::Format { line: 5, .. })));
        let v = parse_combination("2*a - (1+2i) b + i c", &["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(v[0], c(2.0));
        assert_eq!(v[1], Complex64::new(-1.0, -2.0));
        assert_eq!(v[2], Complex64::new(0.0, 1.0));
    }
}

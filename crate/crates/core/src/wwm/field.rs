//! Complex fields sampled on the phase-space grid and their derivatives.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::grid::{fft, ifft, GridError, GridResult, PhaseGrid};

/// How partial derivatives of a field are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivatives {
    /// Nine-point finite differences, exact on polynomials of degree <= 8
    /// and one-sided near the box edges. Suited to polynomial symbols.
    Stencil,
    /// Fourier differentiation, for fields that are negligible at the box
    /// edges.
    Spectral,
}

pub const STENCIL_POINTS: usize = 9;

/// Samples `f(x_j, p_m)` stored row-major in `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolField {
    grid: PhaseGrid,
    data: Vec<Complex64>,
    derivatives: Derivatives,
}

impl SymbolField {
    pub fn from_values(grid: PhaseGrid, data: Vec<Complex64>, derivatives: Derivatives) -> GridResult<Self> {
        let want = grid.n() * grid.n();
        if data.len() != want {
            return Err(GridError::LengthMismatch { got: data.len(), want });
        }
        Ok(Self { grid, data, derivatives })
    }

    /// Smooth, localised field; spectral derivatives.
    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        Self::sample(grid, Derivatives::Spectral, f)
    }

    pub fn from_real_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::sample(grid, Derivatives::Spectral, |x, p| Complex64::new(f(x, p), 0.0))
    }

    /// Polynomial symbol; stencil derivatives.
    pub fn polynomial(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::sample(grid, Derivatives::Stencil, |x, p| Complex64::new(f(x, p), 0.0))
    }

    pub fn constant(grid: PhaseGrid, c: f64) -> Self {
        Self::polynomial(grid, |_, _| c)
    }

    fn sample(grid: PhaseGrid, derivatives: Derivatives, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let xs = grid.xs();
        let ps = grid.ps();
        let mut data = Vec::with_capacity(n * n);
        for &x in &xs {
            for &p in &ps {
                data.push(f(x, p));
            }
        }
        Self { grid, data, derivatives }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn derivatives(&self) -> Derivatives {
        self.derivatives
    }

    pub fn with_derivatives(mut self, d: Derivatives) -> Self {
        self.derivatives = d;
        self
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, j: usize, m: usize) -> Complex64 {
        self.data[j * self.grid.n() + m]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, data: self.data.iter().map(|&z| f(z)).collect(), derivatives: self.derivatives }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            derivatives: self.derivatives,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation over the points with `|x| <= x_max`, `|p| <= p_max`.
    pub fn max_abs_in(&self, x_max: f64, p_max: f64) -> f64 {
        let n = self.grid.n();
        let mut out = 0.0f64;
        for j in 0..n {
            if self.grid.x(j).abs() > x_max {
                continue;
            }
            for m in 0..n {
                if self.grid.p(m).abs() <= p_max {
                    out = out.max(self.data[j * n + m].norm());
                }
            }
        }
        out
    }

    /// `sum f dx dp`.
    pub fn integrate(&self) -> Complex64 {
        self.data.iter().sum::<Complex64>() * self.grid.dx() * self.grid.dp()
    }

    /// `sum |f| dx dp`.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum::<f64>() * self.grid.dx() * self.grid.dp()
    }

    /// `d^a/dx^a d^b/dp^b f` with this field's derivative scheme.
    pub fn derivative(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        if a > 0 {
            out.data = self.derive_axis(&out.data, Axis::X, a);
        }
        if b > 0 {
            out.data = self.derive_axis(&out.data, Axis::P, b);
        }
        out
    }

    fn derive_axis(&self, data: &[Complex64], axis: Axis, order: usize) -> Vec<Complex64> {
        let n = self.grid.n();
        let h = match axis {
            Axis::X => self.grid.dx(),
            Axis::P => self.grid.dp(),
        };
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            for (i, z) in line.iter_mut().enumerate() {
                *z = data[axis.index(n, r, i)];
            }
            let d = match self.derivatives {
                Derivatives::Stencil => stencil_derivative(&line, h, order),
                Derivatives::Spectral => spectral_derivative(&line, h, order),
            };
            for (i, z) in d.into_iter().enumerate() {
                out[axis.index(n, r, i)] = z;
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    P,
}

impl Axis {
    // Flat index of element `i` along this axis in line `r`.
    fn index(self, n: usize, r: usize, i: usize) -> usize {
        match self {
            Axis::X => i * n + r,
            Axis::P => r * n + i,
        }
    }
}

/// Fornberg's recursion: weights `w[d][k]` for the `d`-th derivative at `z`
/// from values at `nodes`, for `d <= max_order`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

// Unit-spacing stencil weights, indexed by derivative order and by the
// position of the evaluation point inside the nine-point window.
fn stencil_table() -> &'static HashMap<(usize, usize), Vec<f64>> {
    static TABLE: OnceLock<HashMap<(usize, usize), Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let nodes: Vec<f64> = (0..STENCIL_POINTS).map(|k| k as f64).collect();
        let mut t = HashMap::new();
        for pos in 0..STENCIL_POINTS {
            let w = fornberg_weights(pos as f64, &nodes, STENCIL_POINTS - 1);
            for (d, row) in w.into_iter().enumerate() {
                t.insert((d, pos), row);
            }
        }
        t
    })
}

pub fn stencil_derivative(line: &[Complex64], h: f64, order: usize) -> Vec<Complex64> {
    let n = line.len();
    if order == 0 {
        return line.to_vec();
    }
    if order >= STENCIL_POINTS || n < STENCIL_POINTS {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    let table = stencil_table();
    let half = STENCIL_POINTS / 2;
    let scale = h.powi(-(order as i32));
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - STENCIL_POINTS);
            let w = &table[&(order, i - start)];
            w.iter().zip(&line[start..start + STENCIL_POINTS]).map(|(c, z)| z * *c).sum::<Complex64>() * scale
        })
        .collect()
}

pub fn spectral_derivative(line: &[Complex64], h: f64, order: usize) -> Vec<Complex64> {
    let n = line.len();
    if order == 0 {
        return line.to_vec();
    }
    let mut buf = line.to_vec();
    fft(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        if j == n / 2 && order % 2 == 1 {
            *z = Complex64::new(0.0, 0.0);
            continue;
        }
        let k = PhaseGrid::wavenumber(n, h, j);
        *z *= Complex64::new(0.0, k).powu(order as u32);
    }
    ifft(&mut buf);
    buf
}

/// Evaluate the trigonometric interpolant of periodic samples at arbitrary
/// points. `spacing` and `origin` describe the sample lattice along each
/// axis; points outside the box wrap around.
pub struct PeriodicInterpolant {
    n: usize,
    coeffs: Vec<Complex64>,
    origin: (f64, f64),
    k: (Vec<f64>, Vec<f64>),
}

impl PeriodicInterpolant {
    pub fn new(f: &SymbolField) -> Self {
        let g = *f.grid();
        let n = g.n();
        let mut c = f.values().to_vec();
        fft2(&mut c, n);
        let s = 1.0 / (n * n) as f64;
        c.iter_mut().for_each(|z| *z *= s);
        let kx: Vec<f64> = (0..n).map(|j| PhaseGrid::wavenumber(n, g.dx(), j)).collect();
        let kp: Vec<f64> = (0..n).map(|j| PhaseGrid::wavenumber(n, g.dp(), j)).collect();
        Self { n, coeffs: c, origin: (g.x(0), g.p(0)), k: (kx, kp) }
    }

    pub fn eval(&self, x: f64, p: f64) -> Complex64 {
        let n = self.n;
        let half = n / 2;
        let basis = |k: &[f64], t: f64| -> Vec<Complex64> {
            (0..n)
                .map(|j| {
                    if j == half {
                        // cos(k_N t): average of the +k_N and -k_N modes
                        Complex64::new((k[j] * t).cos(), 0.0)
                    } else {
                        Complex64::from_polar(1.0, k[j] * t)
                    }
                })
                .collect()
        };
        let ex = basis(&self.k.0, x - self.origin.0);
        let ep = basis(&self.k.1, p - self.origin.1);
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, exq) in ex.iter().enumerate() {
            let row = &self.coeffs[q * n..(q + 1) * n];
            let inner: Complex64 = row.iter().zip(&ep).map(|(c, e)| c * e).sum();
            acc += exq * inner;
        }
        acc
    }
}

/// In-place 2D forward transform of an `n x n` row-major array.
pub(crate) fn fft2(data: &mut [Complex64], n: usize) {
    for row in data.chunks_mut(n) {
        fft(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        fft(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

/// In-place normalised 2D inverse transform.
pub(crate) fn ifft2(data: &mut [Complex64], n: usize) {
    for row in data.chunks_mut(n) {
        ifft(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        ifft(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

/// Normalised two-dimensional Gaussian bump in phase space.
pub fn phase_gaussian(grid: PhaseGrid, x0: f64, p0: f64, sx: f64, sp: f64) -> SymbolField {
    let norm = 1.0 / (2.0 * PI * sx * sp);
    SymbolField::from_real_fn(grid, |x, p| {
        norm * (-(x - x0).powi(2) / (2.0 * sx * sx) - (p - p0).powi(2) / (2.0 * sp * sp)).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PhaseGrid {
        PhaseGrid::with_spans(64, 16.0, 16.0).unwrap()
    }

    #[test]
    fn stencil_exact_on_polynomials() {
        let g = grid();
        let f = SymbolField::polynomial(g, |x, p| x.powi(5) * p * p - 3.0 * x * p.powi(3));
        let d = f.derivative(2, 1);
        let want = SymbolField::polynomial(g, |x, p| 40.0 * x.powi(3) * p);
        let err = d.sub(&want).max_abs() / want.max_abs();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn fornberg_central_second_derivative() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let g = PhaseGrid::with_spans(64, 20.0, 24.0).unwrap();
        let f = phase_gaussian(g, 0.5, -0.3, 1.0, 1.2);
        let d = f.derivative(1, 2);
        let want = f.zip_with(
            &SymbolField::from_real_fn(g, |x, p| {
                let u = -(x - 0.5);
                let v = (p + 0.3) / 1.44;
                u * (v * v - 1.0 / 1.44)
            }),
            |a, b| a * b,
        );
        assert!(d.sub(&want).max_abs() < 1e-10 * want.max_abs().max(1.0));
    }

    #[test]
    fn interpolant_reproduces_samples_and_smooth_values() {
        let g = grid();
        let f = phase_gaussian(g, 0.2, 0.1, 1.0, 1.3);
        let it = PeriodicInterpolant::new(&f);
        assert!((it.eval(g.x(10), g.p(40)) - f.get(10, 40)).norm() < 1e-14);
        let want =
            1.0 / (2.0 * PI * 1.3) * (-(0.33f64 - 0.2).powi(2) / 2.0 - (-0.77f64 - 0.1).powi(2) / (2.0 * 1.69)).exp();
        assert!((it.eval(0.33, -0.77).re - want).abs() < 1e-12);
    }

    #[test]
    fn fft2_round_trip() {
        let g = grid();
        let f = phase_gaussian(g, 0.0, 0.0, 1.0, 1.0);
        let mut d = f.values().to_vec();
        fft2(&mut d, 64);
        ifft2(&mut d, 64);
        let err = d.iter().zip(f.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-15);
    }
}

//! Uniform periodic grids in one spatial dimension and sampled wave
//! functions.
//!
//! Positions are cell centred, `x_j = -L/2 + (j + 1/2) dx`, and momenta sit
//! on the discrete Fourier lattice, `p_m = (m - N/2) dp` with
//! `dp = 2 pi hbar / L`, so that `N dx dp = 2 pi hbar`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("point count {0} is not a power of two >= 4")]
    NotPowerOfTwo(usize),
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("set boundary {0} is not on a cell edge")]
    NotCellAligned(f64),
    #[error("field length {got} does not match the grid ({want})")]
    LengthMismatch { got: usize, want: usize },
    #[error("non-finite value after step {step}")]
    NonFinite { step: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type GridResult<T> = Result<T, GridError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    n: usize,
    length: f64,
    hbar: f64,
}

fn positive(v: f64, what: &'static str) -> GridResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(GridError::NonPositive(what))
    }
}

impl PhaseGrid {
    pub fn new(n: usize, length: f64, hbar: f64) -> GridResult<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        Ok(Self { n, length: positive(length, "box length")?, hbar: positive(hbar, "hbar")? })
    }

    /// A grid fixed by its position and momentum spans. Its `hbar` is the
    /// one the spans imply; phase-space-only work may use any other value.
    pub fn with_spans(n: usize, x_span: f64, p_span: f64) -> GridResult<Self> {
        let x_span = positive(x_span, "x span")?;
        let p_span = positive(p_span, "p span")?;
        Self::new(n, x_span, x_span * p_span / (2.0 * PI * n as f64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar / self.length
    }

    pub fn p_span(&self) -> f64 {
        self.dp() * self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + (j as f64 + 0.5) * self.dx()
    }

    pub fn p(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.dp()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.p(m)).collect()
    }

    /// Angular wave number of FFT bin `j` for a sequence of spacing `h`;
    /// the Nyquist bin is assigned the negative frequency.
    pub fn wavenumber(n: usize, h: f64, j: usize) -> f64 {
        let q = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
        2.0 * PI * q / (n as f64 * h)
    }

    /// Momentum `hbar k` of FFT bin `j` of a position-space sequence.
    pub fn momentum_of_bin(&self, j: usize) -> f64 {
        self.hbar * Self::wavenumber(self.n, self.dx(), j)
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Normalised inverse transform.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
    let s = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|z| *z *= s);
}

/// Apply a Fourier multiplier to a periodic sequence.
pub(crate) fn apply_multiplier(buf: &mut [Complex64], mult: impl Fn(usize) -> Complex64) {
    fft(buf);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= mult(j);
    }
    ifft(buf);
}

/// Samples `psi(x_j)` with the inner product `sum conj(a) b dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveField {
    grid: PhaseGrid,
    psi: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: PhaseGrid, psi: Vec<Complex64>) -> GridResult<Self> {
        if psi.len() != grid.n() {
            return Err(GridError::LengthMismatch { got: psi.len(), want: grid.n() });
        }
        Ok(Self { grid, psi })
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let psi = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self { grid, psi }
    }

    /// Normalised Gaussian `|psi|^2 ~ N(x0, sigma^2)` with mean momentum `p0`.
    pub fn gaussian(grid: PhaseGrid, x0: f64, p0: f64, sigma: f64) -> Self {
        let hbar = grid.hbar();
        let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
        Self::from_fn(grid, |x| {
            let g = norm * (-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp();
            Complex64::from_polar(g, p0 * x / hbar)
        })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.psi
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.psi
    }

    pub fn inner(&self, other: &WaveField) -> Complex64 {
        self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        self.psi.iter_mut().for_each(|z| *z /= n);
        self
    }

    /// `|<self|other>|^2` for normalised fields.
    pub fn fidelity(&self, other: &WaveField) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Probability mass in the first and last `cells` cells; a check that a
    /// state is unaffected by the periodic identification.
    pub fn boundary_mass(&self, cells: usize) -> f64 {
        let n = self.psi.len();
        let c = cells.min(n / 2);
        let edge = self.psi[..c].iter().chain(&self.psi[n - c..]);
        edge.map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn mean_x(&self) -> f64 {
        let dx = self.grid.dx();
        self.psi.iter().enumerate().map(|(j, z)| z.norm_sqr() * self.grid.x(j)).sum::<f64>() * dx
    }

    /// Position variance.
    pub fn variance_x(&self) -> f64 {
        let dx = self.grid.dx();
        let m = self.mean_x();
        self.psi.iter().enumerate().map(|(j, z)| z.norm_sqr() * (self.grid.x(j) - m).powi(2)).sum::<f64>() * dx
    }

    /// `P psi` with `P = -i hbar d/dx` applied spectrally.
    pub fn momentum_apply(&self) -> WaveField {
        let mut out = self.psi.clone();
        let g = self.grid;
        apply_multiplier(&mut out, |j| Complex64::new(g.momentum_of_bin(j), 0.0));
        WaveField { grid: g, psi: out }
    }

    /// Momentum-space density `|psi^(p_m)|^2` on the grid momenta,
    /// normalised so that `sum |psi^|^2 dp = 1` for a unit vector.
    pub fn momentum_density(&self) -> Vec<f64> {
        let n = self.grid.n();
        let mut buf = self.psi.clone();
        fft(&mut buf);
        let scale = self.grid.dx() * self.grid.dx() / (2.0 * PI * self.grid.hbar());
        (0..n)
            .map(|m| {
                // p_m = (m - N/2) dp lives in FFT bin (m + N/2) mod N
                let bin = (m + n / 2) % n;
                buf[bin].norm_sqr() * scale
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_spacings() {
        let g = PhaseGrid::new(64, 10.0, 0.7).unwrap();
        assert!((g.n() as f64 * g.dx() * g.dp() - 2.0 * PI * 0.7).abs() < 1e-12);
        assert!((g.x(0) + 5.0 - g.dx() / 2.0).abs() < 1e-12);
        assert!((g.p(32)).abs() < 1e-15);
        assert!(PhaseGrid::new(48, 1.0, 1.0).is_err());
        assert!(PhaseGrid::new(64, -1.0, 1.0).is_err());
    }

    #[test]
    fn spans_grid() {
        let g = PhaseGrid::with_spans(64, 24.0, 16.0).unwrap();
        assert!((g.p_span() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_is_normalised_with_both_densities() {
        let g = PhaseGrid::new(256, 30.0, 1.0).unwrap();
        let psi = WaveField::gaussian(g, 1.0, 0.5, 1.2);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let dp = g.dp();
        let total: f64 = psi.momentum_density().iter().sum::<f64>() * dp;
        assert!((total - 1.0).abs() < 1e-12);
        assert!((psi.mean_x() - 1.0).abs() < 1e-10);
        assert!((psi.variance_x() - 1.44).abs() < 1e-10);
    }
}

//! Moyal star product and bracket of phase-space symbols.
//!
//! Conventions: `f * g = fg - (i hbar / 2) {f, g} + O(hbar^2)` with the
//! classical bracket `{f, g} = f_p g_x - f_x g_p`, so `x * p - p * x = i hbar`
//! and `{p, x} = 1`. The Moyal bracket is `(f * g - g * f) / (-i hbar)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::weyl::loglog_fit;
use crate::grid::PhaseGrid;
use crate::wwm::field::{fft2, ifft2, SymbolField};
use crate::wwm::{WwmError, WwmResult};

pub const MAX_SERIES_ORDER: usize = 8;
pub const DEFAULT_SERIES_ORDER: usize = 4;
pub const MAX_QUADRATURE_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarMethod {
    /// Truncated bidifferential expansion through `hbar^order`.
    Series(usize),
    /// Exact product of the trigonometric interpolants, computed mode by
    /// mode. Cost `O(N^4)`.
    Quadrature,
}

impl Default for StarMethod {
    fn default() -> Self {
        StarMethod::Series(DEFAULT_SERIES_ORDER)
    }
}

fn check_pair(f: &SymbolField, g: &SymbolField) -> WwmResult<()> {
    if f.grid() != g.grid() {
        return Err(WwmError::GridMismatch);
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

// All mixed partials up to total order `order`, indexed `[a][b]`.
fn partials(f: &SymbolField, order: usize) -> Vec<Vec<SymbolField>> {
    (0..=order)
        .map(|a| {
            let fa = f.derivative(a, 0);
            (0..=order - a).map(|b| fa.derivative(0, b)).collect()
        })
        .collect()
}

// sum over n <= order (odd n only if asked) of c_n sum_k C(n,k) (-1)^k (d_x^{n-k} d_p^k f)(d_x^k d_p^{n-k} g)
fn bidifferential(f: &SymbolField, g: &SymbolField, hbar: f64, order: usize, odd_only: bool) -> SymbolField {
    let df = partials(f, order);
    let dg = partials(g, order);
    let mut acc =
        SymbolField::from_values(*f.grid(), vec![Complex64::new(0.0, 0.0); f.values().len()], f.derivatives())
            .expect("same shape");
    let half = Complex64::new(0.0, hbar / 2.0);
    for n in 0..=order {
        if odd_only && n % 2 == 0 {
            continue;
        }
        let cn = half.powu(n as u32) / factorial(n);
        for k in 0..=n {
            let c = cn * binomial(n, k) * if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = df[n - k][k].mul(&dg[k][n - k]);
            acc = acc.zip_with(&term, |a, t| a + c * t);
        }
    }
    acc
}

pub fn star_product(f: &SymbolField, g: &SymbolField, hbar: f64, method: StarMethod) -> WwmResult<SymbolField> {
    check_pair(f, g)?;
    match method {
        StarMethod::Series(order) => {
            if order > MAX_SERIES_ORDER {
                return Err(WwmError::OrderOutOfRange(order));
            }
            Ok(bidifferential(f, g, hbar, order, false))
        }
        StarMethod::Quadrature => quadrature(f, g, hbar),
    }
}

fn quadrature(f: &SymbolField, g: &SymbolField, hbar: f64) -> WwmResult<SymbolField> {
    let grid = *f.grid();
    let n = grid.n();
    if n > MAX_QUADRATURE_N {
        return Err(WwmError::GridTooLarge { n, max: MAX_QUADRATURE_N });
    }
    let spectrum = |s: &SymbolField| {
        let mut c = s.values().to_vec();
        fft2(&mut c, n);
        let norm = 1.0 / (n * n) as f64;
        c.iter_mut().for_each(|z| *z *= norm);
        c
    };
    let fc = spectrum(f);
    let gc = spectrum(g);
    let kx: Vec<f64> = (0..n).map(|j| PhaseGrid::wavenumber(n, grid.dx(), j)).collect();
    let kp: Vec<f64> = (0..n).map(|j| PhaseGrid::wavenumber(n, grid.dp(), j)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for i1 in 0..n {
        for (j2, z) in a.iter_mut().enumerate() {
            *z = Complex64::from_polar(1.0, -0.5 * hbar * kx[i1] * kp[j2]);
        }
        for j1 in 0..n {
            let f1 = fc[i1 * n + j1];
            if f1 == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (i2, z) in b.iter_mut().enumerate() {
                *z = f1 * Complex64::from_polar(1.0, 0.5 * hbar * kp[j1] * kx[i2]);
            }
            for i2 in 0..n {
                let row = ((i1 + i2) % n) * n;
                let gb = b[i2];
                let grow = &gc[i2 * n..(i2 + 1) * n];
                for j2 in 0..n {
                    out[row + (j1 + j2) % n] += gb * grow[j2] * a[j2];
                }
            }
        }
    }
    ifft2(&mut out, n);
    let scale = (n * n) as f64;
    out.iter_mut().for_each(|z| *z *= scale);
    SymbolField::from_values(grid, out, f.derivatives()).map_err(WwmError::from)
}

/// `(f * g - g * f) / (-i hbar)`.
pub fn moyal_bracket(f: &SymbolField, g: &SymbolField, hbar: f64, method: StarMethod) -> WwmResult<SymbolField> {
    check_pair(f, g)?;
    let c = Complex64::new(0.0, 1.0 / hbar);
    match method {
        StarMethod::Series(order) => {
            if order > MAX_SERIES_ORDER {
                return Err(WwmError::OrderOutOfRange(order));
            }
            // only odd orders survive the antisymmetrisation
            Ok(bidifferential(f, g, hbar, order, true).scale(2.0 * c))
        }
        StarMethod::Quadrature => {
            let fg = quadrature(f, g, hbar)?;
            let gf = quadrature(g, f, hbar)?;
            Ok(fg.sub(&gf).scale(c))
        }
    }
}

/// `f_p g_x - f_x g_p`.
pub fn classical_bracket(f: &SymbolField, g: &SymbolField) -> WwmResult<SymbolField> {
    check_pair(f, g)?;
    Ok(f.derivative(0, 1).mul(&g.derivative(1, 0)).sub(&f.derivative(1, 0).mul(&g.derivative(0, 1))))
}

/// `f * g - fg + (i hbar / 2) {f, g}`.
pub fn semiclassical_remainder(
    f: &SymbolField,
    g: &SymbolField,
    hbar: f64,
    method: StarMethod,
) -> WwmResult<SymbolField> {
    let star = star_product(f, g, hbar, method)?;
    let pb = classical_bracket(f, g)?;
    Ok(star.sub(&f.mul(g)).add(&pb.scale(Complex64::new(0.0, hbar / 2.0))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub hbar: Vec<f64>,
    pub remainder: Vec<f64>,
    /// Values of `hbar` whose remainder sat at the rounding floor.
    pub excluded: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Fit residuals in `ln R`.
    pub residuals: Vec<f64>,
}

/// Remainder floor relative to `max |fg|`.
pub const REMAINDER_FLOOR: f64 = 1e-13;

/// Log-log slope of `max |f * g - fg + (i hbar/2){f,g}|` against `hbar`.
pub fn semiclassical_scaling(
    f: &SymbolField,
    g: &SymbolField,
    hbars: &[f64],
    method: StarMethod,
) -> WwmResult<ScalingFit> {
    let scale = f.mul(g).max_abs().max(f64::MIN_POSITIVE);
    let mut remainder = Vec::with_capacity(hbars.len());
    for &h in hbars {
        remainder.push(semiclassical_remainder(f, g, h, method)?.max_abs());
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for (&h, &r) in hbars.iter().zip(&remainder) {
        if r > REMAINDER_FLOOR * scale {
            xs.push(h);
            ys.push(r);
        } else {
            excluded.push(h);
        }
    }
    if xs.len() < 2 {
        return Err(WwmError::Degenerate(format!("{} usable remainder values", xs.len())));
    }
    let (slope, intercept, residuals) = loglog_fit(&xs, &ys);
    Ok(ScalingFit { hbar: hbars.to_vec(), remainder, excluded, slope, intercept, residuals })
}

//! Moyal evolution of Wigner fields against classical Liouville transport.
//!
//! For `H = p^2/2m + V(x)` with polynomial `V`, the Moyal bracket truncates:
//!
//! `dW/dt = -(p/m) W_x + sum_{n odd} (i hbar/2)^{n-1} / n! V^(n)(x) d_p^n W`,
//!
//! whose `n = 1` part is the Liouville equation. The method of lines uses
//! spectral derivatives and classical RK4 in time.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::weyl::loglog_fit;
use crate::grid::{fft, ifft, PhaseGrid};
use crate::wwm::field::{PeriodicInterpolant, SymbolField};
use crate::wwm::wigner::WignerField;
use crate::wwm::{WwmError, WwmResult};

/// `p^2 / 2m + sum_k c_k x^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MechanicalHamiltonian {
    pub mass: f64,
    pub potential: Vec<f64>,
}

impl MechanicalHamiltonian {
    pub fn new(mass: f64, potential: Vec<f64>) -> WwmResult<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(WwmError::Invalid(format!("mass {mass} must be positive")));
        }
        if potential.iter().any(|c| !c.is_finite()) {
            return Err(WwmError::Invalid("potential coefficients must be finite".into()));
        }
        Ok(Self { mass, potential })
    }

    pub fn free(mass: f64) -> WwmResult<Self> {
        Self::new(mass, vec![])
    }

    pub fn harmonic(mass: f64, omega: f64) -> WwmResult<Self> {
        Self::new(mass, vec![0.0, 0.0, 0.5 * mass * omega * omega])
    }

    /// `V = lambda x^4`.
    pub fn quartic(mass: f64, lambda: f64) -> WwmResult<Self> {
        Self::new(mass, vec![0.0, 0.0, 0.0, 0.0, lambda])
    }

    pub fn degree(&self) -> usize {
        self.potential.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    /// `V^(n)(x)`.
    pub fn potential_derivative(&self, n: usize, x: f64) -> f64 {
        self.potential
            .iter()
            .enumerate()
            .skip(n)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + c * (k - n + 1..=k).fold(1.0, |a, i| a * i as f64))
    }

    pub fn v(&self, x: f64) -> f64 {
        self.potential_derivative(0, x)
    }

    pub fn energy(&self, x: f64, p: f64) -> f64 {
        p * p / (2.0 * self.mass) + self.v(x)
    }

    pub fn symbol(&self, grid: PhaseGrid) -> SymbolField {
        SymbolField::polynomial(grid, |x, p| self.energy(x, p))
    }
}

fn spectral_factor(k: f64, n: usize) -> Complex64 {
    Complex64::new(0.0, k).powu(n as u32)
}

/// Right-hand side of the truncated Moyal equation on a fixed grid.
struct MoyalGenerator {
    n: usize,
    // i k_x per FFT bin, Nyquist zeroed
    dx_mult: Vec<Complex64>,
    // -(p_m / m)
    drift: Vec<f64>,
    // per row j: sum_n c_n V^(n)(x_j) (i k_p)^n
    p_mult: Vec<Complex64>,
    lambda_max: f64,
}

impl MoyalGenerator {
    fn new(grid: &PhaseGrid, h: &MechanicalHamiltonian, hbar: f64) -> Self {
        let n = grid.n();
        let kx: Vec<f64> = (0..n).map(|q| PhaseGrid::wavenumber(n, grid.dx(), q)).collect();
        let kp: Vec<f64> = (0..n).map(|q| PhaseGrid::wavenumber(n, grid.dp(), q)).collect();
        let nyq = n / 2;
        let dx_mult =
            (0..n).map(|q| if q == nyq { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, kx[q]) }).collect();
        let drift = grid.ps().into_iter().map(|p| -p / h.mass).collect();
        let orders: Vec<usize> = (1..=h.degree()).filter(|k| k % 2 == 1).collect();
        let coeff = |order: usize| -> f64 {
            // (i hbar / 2)^(n-1) / n! is real for odd n
            let m = (order - 1) / 2;
            (-(hbar * hbar) / 4.0).powi(m as i32) / (1..=order).fold(1.0, |a, i| a * i as f64)
        };
        let mut p_mult = vec![Complex64::new(0.0, 0.0); n * n];
        let kp_max = kp.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        let mut v_bound = 0.0;
        for &o in &orders {
            let c = coeff(o);
            let mut vmax = 0.0f64;
            for j in 0..n {
                let v = h.potential_derivative(o, grid.x(j));
                vmax = vmax.max(v.abs());
                for q in 0..n {
                    if q != nyq {
                        p_mult[j * n + q] += c * v * spectral_factor(kp[q], o);
                    }
                }
            }
            v_bound += c.abs() * kp_max.powi(o as i32) * vmax;
        }
        let kx_max = kx.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        let p_max = grid.ps().iter().fold(0.0f64, |a, p| a.max(p.abs()));
        Self { n, dx_mult, drift, p_mult, lambda_max: kx_max * p_max / h.mass + v_bound }
    }

    fn apply(&self, w: &[f64], out: &mut [f64], line: &mut [Complex64]) {
        let n = self.n;
        out.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..n {
            for j in 0..n {
                line[j] = Complex64::new(w[j * n + m], 0.0);
            }
            fft(line);
            line.iter_mut().zip(&self.dx_mult).for_each(|(z, k)| *z *= k);
            ifft(line);
            let d = self.drift[m];
            for j in 0..n {
                out[j * n + m] += d * line[j].re;
            }
        }
        for j in 0..n {
            for m in 0..n {
                line[m] = Complex64::new(w[j * n + m], 0.0);
            }
            fft(line);
            line.iter_mut().zip(&self.p_mult[j * n..(j + 1) * n]).for_each(|(z, k)| *z *= k);
            ifft(line);
            for m in 0..n {
                out[j * n + m] += line[m].re;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoyalRun {
    pub field: WignerField,
    pub steps: usize,
    pub refinements: usize,
}

fn rk4(generator: &MoyalGenerator, w0: &[f64], t: f64, steps: usize) -> Option<Vec<f64>> {
    let len = w0.len();
    let dt = t / steps as f64;
    let bound = 100.0 * w0.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut w = w0.to_vec();
    let mut line = vec![Complex64::new(0.0, 0.0); generator.n];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut tmp = vec![0.0; len];
    for _ in 0..steps {
        generator.apply(&w, &mut k1, &mut line);
        tmp.iter_mut().zip(&w).zip(&k1).for_each(|((t, w), k)| *t = w + 0.5 * dt * k);
        generator.apply(&tmp, &mut k2, &mut line);
        tmp.iter_mut().zip(&w).zip(&k2).for_each(|((t, w), k)| *t = w + 0.5 * dt * k);
        generator.apply(&tmp, &mut k3, &mut line);
        tmp.iter_mut().zip(&w).zip(&k3).for_each(|((t, w), k)| *t = w + dt * k);
        generator.apply(&tmp, &mut k4, &mut line);
        for i in 0..len {
            w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if w.iter().any(|v| !v.is_finite() || v.abs() > bound) {
            return None;
        }
    }
    Some(w)
}

/// Number of refinements tried after an unstable run.
pub const MAX_REFINEMENTS: usize = 3;

/// Integrate `dW/dt = {W, H}_M` for time `t`. The step count is raised to
/// the RK4 stability bound of the discretised generator and doubled on
/// blow-up.
pub fn moyal_evolve(
    h: &MechanicalHamiltonian,
    w0: &WignerField,
    hbar: f64,
    t: f64,
    steps: usize,
) -> WwmResult<MoyalRun> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(WwmError::Invalid(format!("time {t} must be non-negative")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(WwmError::Invalid(format!("hbar {hbar} must be positive")));
    }
    let grid = *w0.grid();
    let generator = MoyalGenerator::new(&grid, h, hbar);
    let mut steps = steps.max(1).max((t * generator.lambda_max / 2.0).ceil() as usize);
    for refinements in 0..=MAX_REFINEMENTS {
        if let Some(w) = rk4(&generator, w0.values(), t, steps) {
            return Ok(MoyalRun { field: WignerField::from_values(grid, w)?, steps, refinements });
        }
        steps *= 2;
    }
    Err(WwmError::Unstable { steps: steps / 2 })
}

/// `(x, p)` flowed for time `t` (negative for the past) under Hamilton's
/// equations with `substeps` RK4 steps.
pub fn hamilton_flow(h: &MechanicalHamiltonian, x: f64, p: f64, t: f64, substeps: usize) -> (f64, f64) {
    let dt = t / substeps.max(1) as f64;
    let f = |x: f64, p: f64| (p / h.mass, -h.potential_derivative(1, x));
    let (mut x, mut p) = (x, p);
    for _ in 0..substeps.max(1) {
        let (a1, b1) = f(x, p);
        let (a2, b2) = f(x + 0.5 * dt * a1, p + 0.5 * dt * b1);
        let (a3, b3) = f(x + 0.5 * dt * a2, p + 0.5 * dt * b2);
        let (a4, b4) = f(x + dt * a3, p + dt * b3);
        x += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        p += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    (x, p)
}

/// `rho(x, p, t) = W0(flow_{-t}(x, p))`, with `W0` evaluated through its
/// trigonometric interpolant inside the box and taken as zero outside.
pub fn classical_transport(h: &MechanicalHamiltonian, w0: &WignerField, t: f64, substeps: usize) -> WignerField {
    let grid = *w0.grid();
    let n = grid.n();
    let interp = PeriodicInterpolant::new(&w0.to_symbol());
    let (x_edge, p_edge) = (0.5 * grid.length(), 0.5 * grid.p_span());
    let mut data = Vec::with_capacity(n * n);
    for j in 0..n {
        for m in 0..n {
            let (x0, p0) = hamilton_flow(h, grid.x(j), grid.p(m), -t, substeps);
            // the initial field vanishes outside the box
            let inside = x0.abs() <= x_edge && (p0 + 0.5 * grid.dp()).abs() <= p_edge;
            data.push(if inside { interp.eval(x0, p0).re } else { 0.0 });
        }
    }
    WignerField::from_values(grid, data).expect("grid-sized")
}

/// `int A W dx dp` for `A` in `{x, p, x^2}`.
pub fn moments(w: &WignerField) -> [f64; 3] {
    let g = w.grid();
    let n = g.n();
    let cell = g.dx() * g.dp();
    let mut out = [0.0; 3];
    for j in 0..n {
        let x = g.x(j);
        for m in 0..n {
            let v = w.get(j, m) * cell;
            out[0] += x * v;
            out[1] += g.p(m) * v;
            out[2] += x * x * v;
        }
    }
    out
}

pub fn l1_distance(a: &WignerField, b: &WignerField) -> f64 {
    let g = a.grid();
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum::<f64>() * g.dx() * g.dp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalLimit {
    pub hbar: f64,
    pub time: f64,
    pub steps: usize,
    pub l1_gap: f64,
    pub quantum_moments: [f64; 3],
    pub classical_moments: [f64; 3],
    /// `|<A>_W - <A>_cl|` for `A` in `{x, p, x^2}`.
    pub moment_gaps: [f64; 3],
}

fn compare(hbar: f64, t: f64, run: &MoyalRun, rho: &WignerField) -> ClassicalLimit {
    let q = moments(&run.field);
    let c = moments(rho);
    ClassicalLimit {
        hbar,
        time: t,
        steps: run.steps,
        l1_gap: l1_distance(&run.field, rho),
        quantum_moments: q,
        classical_moments: c,
        moment_gaps: [(q[0] - c[0]).abs(), (q[1] - c[1]).abs(), (q[2] - c[2]).abs()],
    }
}

pub fn classical_limit_compare(
    h: &MechanicalHamiltonian,
    w0: &WignerField,
    hbar: f64,
    t: f64,
    steps: usize,
) -> WwmResult<ClassicalLimit> {
    classical_limit_fields(h, w0, hbar, t, steps).map(|(c, _, _)| c)
}

/// As [`classical_limit_compare`], also returning the quantum and the
/// classical field at time `t`.
pub fn classical_limit_fields(
    h: &MechanicalHamiltonian,
    w0: &WignerField,
    hbar: f64,
    t: f64,
    steps: usize,
) -> WwmResult<(ClassicalLimit, WignerField, WignerField)> {
    let run = moyal_evolve(h, w0, hbar, t, steps)?;
    let rho = classical_transport(h, w0, t, run.steps);
    Ok((compare(hbar, t, &run, &rho), run.field, rho))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HbarSweep {
    pub runs: Vec<ClassicalLimit>,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Quantum-classical `L1` gap for each `hbar` with the initial field and
/// the grid held fixed, and its log-log slope.
pub fn hbar_sweep(
    h: &MechanicalHamiltonian,
    w0: &WignerField,
    hbars: &[f64],
    t: f64,
    steps: usize,
) -> WwmResult<HbarSweep> {
    if hbars.len() < 2 {
        return Err(WwmError::Degenerate("a sweep needs at least two values".into()));
    }
    let mut runs = Vec::with_capacity(hbars.len());
    let mut rho: Option<WignerField> = None;
    for &hb in hbars {
        let run = moyal_evolve(h, w0, hb, t, steps)?;
        let r = rho.get_or_insert_with(|| classical_transport(h, w0, t, run.steps.max(steps)));
        runs.push(compare(hb, t, &run, r));
    }
    let gaps: Vec<f64> = runs.iter().map(|r| r.l1_gap).collect();
    let (slope, intercept, residuals) = loglog_fit(hbars, &gaps);
    Ok(HbarSweep { runs, slope, intercept, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wwm::field::phase_gaussian;

    fn gaussian(grid: PhaseGrid, x0: f64, p0: f64) -> WignerField {
        WignerField::from_symbol(&phase_gaussian(grid, x0, p0, 0.8, 0.9))
    }

    #[test]
    fn potential_derivatives() {
        let h = MechanicalHamiltonian::new(2.0, vec![1.0, -1.0, 0.5, 0.0, 3.0]).unwrap();
        assert_eq!(h.degree(), 4);
        let x = 0.7f64;
        assert!((h.v(x) - (1.0 - x + 0.5 * x * x + 3.0 * x.powi(4))).abs() < 1e-14);
        assert!((h.potential_derivative(1, x) - (-1.0 + x + 12.0 * x.powi(3))).abs() < 1e-14);
        assert!((h.potential_derivative(3, x) - 72.0 * x).abs() < 1e-13);
        assert_eq!(h.potential_derivative(5, x), 0.0);
        assert!(MechanicalHamiltonian::new(0.0, vec![]).is_err());
    }

    #[test]
    fn free_motion_ehrenfest() {
        let g = PhaseGrid::with_spans(64, 24.0, 16.0).unwrap();
        let w0 = gaussian(g, -1.0, 0.8);
        let h = MechanicalHamiltonian::free(2.0).unwrap();
        let t = 1.5;
        let r = classical_limit_compare(&h, &w0, 1.0, t, 400).unwrap();
        let m0 = moments(&w0);
        let want = m0[0] + m0[1] * t / 2.0;
        assert!((want + 0.4).abs() < 1e-9);
        assert!((r.quantum_moments[0] - want).abs() < 1e-9);
        assert!((r.classical_moments[0] - want).abs() < 1e-9);
        assert!(r.l1_gap < 1e-8, "{}", r.l1_gap);
    }

    #[test]
    fn harmonic_quarter_period() {
        let g = PhaseGrid::with_spans(64, 20.0, 20.0).unwrap();
        let w0 = gaussian(g, 1.5, 0.0);
        let h = MechanicalHamiltonian::harmonic(1.0, 1.0).unwrap();
        let t = std::f64::consts::FRAC_PI_2;
        let r = classical_limit_compare(&h, &w0, 0.5, t, 1).unwrap();
        // (x, p) = (1.5, 0) rotates to (0, -1.5)
        assert!(r.quantum_moments[0].abs() < 1e-8);
        assert!((r.quantum_moments[1] + 1.5).abs() < 1e-8);
        assert!(r.l1_gap < 1e-7, "{}", r.l1_gap);
    }

    #[test]
    fn quartic_gap_grows_with_hbar() {
        let g = PhaseGrid::with_spans(64, 12.0, 16.0).unwrap();
        let w0 = gaussian(g, 0.5, 0.0);
        let h = MechanicalHamiltonian::quartic(1.0, 0.1).unwrap();
        let s = hbar_sweep(&h, &w0, &[0.4, 0.2, 0.1], 0.5, 1).unwrap();
        assert!((s.slope - 2.0).abs() < 0.1, "{:?}", s);
    }

    #[test]
    fn negative_time_rejected() {
        let g = PhaseGrid::with_spans(32, 12.0, 12.0).unwrap();
        let h = MechanicalHamiltonian::free(1.0).unwrap();
        assert!(moyal_evolve(&h, &gaussian(g, 0.0, 0.0), 1.0, -1.0, 4).is_err());
    }
}

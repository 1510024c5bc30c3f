use std::f64::consts::PI;

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use supmech_core::anchors;
use supmech_core::grid::{PhaseGrid, WaveField};
use supmech_core::wwm::wigner::{hamiltonian_operator, identity_operator, momentum_operator, position_operator};
use supmech_core::wwm::{
    born_pairing, classical_limit_fields, hbar_sweep, semiclassical_scaling, star_product, weyl_symbol, wigner,
    MechanicalHamiltonian, StarMethod, SymbolField, WwmError,
};
use supmech_core::VerificationReport;

use super::{fill, finite, get, positive, power_of_two, SuiteOutput};
use crate::error::{CliError, CliResult};

// The quadrature evaluator costs O(N^4).
const MAX_PHASE_GRID: usize = 512;

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct WignerParams {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Mass and frequency of the harmonic Hamiltonian in the Born check.
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl WignerParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 128);
        fill(&mut self.length, 20.0);
        fill(&mut self.hbar, 1.0);
        fill(&mut self.x0, -0.8);
        fill(&mut self.p0, 0.5);
        fill(&mut self.sigma, 1.1);
        fill(&mut self.mass, 1.0);
        fill(&mut self.omega, 1.0);
        fill(&mut self.tol, 1e-8);
        power_of_two("n", self.n, 8, MAX_PHASE_GRID)?;
        for (k, v) in [
            ("length", self.length),
            ("hbar", self.hbar),
            ("sigma", self.sigma),
            ("mass", self.mass),
            ("tol", self.tol),
        ] {
            positive(k, v)?;
        }
        for (k, v) in [("x0", self.x0), ("p0", self.p0), ("omega", self.omega)] {
            finite(k, v)?;
        }
        PhaseGrid::new(get(&self.n), get(&self.length), get(&self.hbar))
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok(())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e| CliError::suite("wigner", e);
        let g = PhaseGrid::new(get(&self.n), get(&self.length), get(&self.hbar)).map_err(fail)?;
        let tol = get(&self.tol);
        let psi = WaveField::gaussian(g, get(&self.x0), get(&self.p0), get(&self.sigma));
        let w = wigner(&psi);
        let mut report = VerificationReport::new("wigner");
        report.record("wigner", "normalization", anchors::WIGNER, (w.total() - 1.0).abs(), tol);
        let dens: Vec<f64> = psi.values().iter().map(|z| z.norm_sqr()).collect();
        let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        report.record("wigner", "x-marginal", anchors::WIGNER, gap(&w.x_marginal(), &dens), tol);
        report.record("wigner", "p-marginal", anchors::WIGNER, gap(&w.p_marginal(), &psi.momentum_density()), tol);
        let bound = 1.0 / (2.0 * PI * g.hbar());
        report.record("wigner", "purity", anchors::WIGNER, (w.purity_integral() - bound).abs() / bound, tol);
        let x_sym = weyl_symbol(&g, &position_operator(&g)).map_err(fail)?;
        let p_sym = weyl_symbol(&g, &momentum_operator(&g)).map_err(fail)?;
        let n = g.n();
        let mut sym_gap = 0.0f64;
        for j in 0..n {
            for m in 0..n {
                let (x, p) = (g.x(j), g.p(m));
                sym_gap = sym_gap.max((x_sym.get(j, m) - x).norm()).max((p_sym.get(j, m) - p).norm());
            }
        }
        report.record("symbols", "X and P", anchors::WEYL_SYMBOL, sym_gap, tol);
        let (mass, omega) = (get(&self.mass), get(&self.omega));
        let ops = [
            ("I", identity_operator(&g)),
            ("X", position_operator(&g)),
            ("P", momentum_operator(&g)),
            ("H", hamiltonian_operator(&g, mass, |x| 0.5 * mass * omega * omega * x * x)),
        ];
        let mut pairs = Vec::new();
        for (name, op) in &ops {
            let (direct, phase_space) = born_pairing(&psi, op).map_err(fail)?;
            report.record("born", *name, anchors::BORN_PAIRING, (direct - phase_space).norm(), tol);
            pairs.push(json!({"operator": name, "direct": [direct.re, direct.im], "phase_space": [phase_space.re, phase_space.im]}));
        }
        let data = json!({
            "total": w.total(),
            "purity_integral": w.purity_integral(),
            "purity_bound": bound,
            "born": pairs,
        });
        let mut output = SuiteOutput::new(report, data);
        output.csv.push(("wigner.csv".into(), w.to_csv()));
        Ok(output)
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct StarParams {
    /// Values of hbar for the series calibration.
    #[arg(long, value_delimiter = ',')]
    pub hbar: Vec<f64>,
    /// Series truncation order for the calibration.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Run the quadrature calibration on a 64-point grid (default true).
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub quadrature: Option<bool>,
    #[arg(long)]
    pub quadrature_tol: Option<f64>,
    /// Values of hbar for the semiclassical remainder fit.
    #[arg(long, value_delimiter = ',')]
    pub scaling_hbar: Vec<f64>,
    /// Allowed deviation of the remainder order from 2.
    #[arg(long)]
    pub slope_tol: Option<f64>,
}

impl StarParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        if self.hbar.is_empty() {
            self.hbar = vec![1.0, 0.3, 0.05];
        }
        if self.scaling_hbar.is_empty() {
            self.scaling_hbar = vec![0.1, 0.05, 0.025, 0.0125];
        }
        fill(&mut self.order, 8);
        fill(&mut self.tol, 1e-8);
        fill(&mut self.quadrature, true);
        fill(&mut self.quadrature_tol, 1e-6);
        fill(&mut self.slope_tol, 0.2);
        for (k, v) in [("tol", self.tol), ("quadrature_tol", self.quadrature_tol), ("slope_tol", self.slope_tol)] {
            positive(k, v)?;
        }
        if self.hbar.iter().chain(&self.scaling_hbar).any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(CliError::config("hbar values must be positive"));
        }
        if self.scaling_hbar.len() < 2 {
            return Err(CliError::config("`scaling_hbar` needs at least two values"));
        }
        if !(1..=8).contains(&get(&self.order)) {
            return Err(CliError::config("`order` must be in 1..=8"));
        }
        Ok(())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e: WwmError| CliError::suite("star", e);
        let mut report = VerificationReport::new("star");
        let g = PhaseGrid::with_spans(32, 8.0, 8.0).map_err(|e| CliError::suite("star", e))?;
        let x = SymbolField::polynomial(g, |x, _| x);
        let p = SymbolField::polynomial(g, |_, p| p);
        let method = StarMethod::Series(get(&self.order));
        for &hbar in &self.hbar {
            let c = star_product(&x, &p, hbar, method)
                .map_err(fail)?
                .sub(&star_product(&p, &x, hbar, method).map_err(fail)?);
            let i_hbar = Complex64::new(0.0, hbar);
            let rel = c.values().iter().map(|z| (z - i_hbar).norm() / hbar).fold(0.0, f64::max);
            report.record("calibration", format!("series hbar={hbar}"), anchors::STAR_CALIBRATION, rel, get(&self.tol));
        }
        let mut data = json!({});
        if get(&self.quadrature) {
            // x and p are not periodic: Gaussian-windowed copies centred on a
            // node, where the window changes the commutator by 3 hbar^2/(8 s^4)
            let q = PhaseGrid::with_spans(64, 20.0, 20.0).map_err(|e| CliError::suite("star", e))?;
            let (x0, p0, s) = (q.x(32), q.p(32), 1.6f64);
            let win = move |u: f64| (-(u * u) / (2.0 * s * s)).exp();
            let xw = SymbolField::from_real_fn(q, move |x, _| (x - x0) * win(x - x0));
            let pw = SymbolField::from_real_fn(q, move |_, p| (p - p0) * win(p - p0));
            let hbar = 1e-3;
            let c = star_product(&xw, &pw, hbar, StarMethod::Quadrature)
                .map_err(fail)?
                .sub(&star_product(&pw, &xw, hbar, StarMethod::Quadrature).map_err(fail)?)
                .get(32, 32);
            let rel = (c / Complex64::new(0.0, hbar) - 1.0).norm();
            report.record("calibration", "quadrature N=64", anchors::STAR_CALIBRATION, rel, get(&self.quadrature_tol));
        }
        let s = PhaseGrid::with_spans(64, 16.0, 16.0).map_err(|e| CliError::suite("star", e))?;
        let f = SymbolField::from_real_fn(s, |x, p| (-(x - 0.5).powi(2) / 2.0 - p * p / 3.0).exp());
        let h = SymbolField::from_real_fn(s, |x, p| (-(x * x) / 3.0 - (p + 0.4).powi(2) / 2.0).exp());
        let fit = semiclassical_scaling(&f, &h, &self.scaling_hbar, StarMethod::Series(4)).map_err(fail)?;
        let c = report.record(
            "semiclassical",
            "remainder order",
            anchors::SEMICLASSICAL,
            (fit.slope - 2.0).abs(),
            get(&self.slope_tol),
        );
        c.detail = Some(format!("log-log slope {:.4}", fit.slope));
        data["semiclassical"] = serde_json::to_value(&fit).unwrap_or_default();
        Ok(SuiteOutput::new(report, data))
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassicalLimitParams {
    #[arg(long)]
    pub n: Option<usize>,
    /// Box length; defaults to `sqrt(2 pi n hbar)` so that x and p spans agree.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Harmonic frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Quartic coupling `lambda x^4` added to the potential.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Evolution time; defaults to one harmonic period.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// L1 tolerance for quadratic Hamiltonians, where the two flows coincide.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Values of hbar for a quantum-classical gap sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<f64>,
}

impl ClassicalLimitParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 128);
        fill(&mut self.hbar, 1.0);
        positive("hbar", self.hbar)?;
        fill(&mut self.length, (2.0 * PI * get(&self.n) as f64 * get(&self.hbar)).sqrt());
        fill(&mut self.mass, 1.0);
        fill(&mut self.omega, 1.0);
        fill(&mut self.lambda, 0.0);
        fill(&mut self.x0, 1.5);
        fill(&mut self.p0, 0.5);
        fill(&mut self.sigma, 0.5f64.sqrt());
        let omega = get(&self.omega);
        fill(&mut self.t, if omega > 0.0 { 2.0 * PI / omega } else { 1.0 });
        fill(&mut self.steps, 1500);
        fill(&mut self.tol, 1e-6);
        power_of_two("n", self.n, 8, MAX_PHASE_GRID)?;
        for (k, v) in [("length", self.length), ("mass", self.mass), ("sigma", self.sigma), ("tol", self.tol)] {
            positive(k, v)?;
        }
        for (k, v) in [("omega", self.omega), ("lambda", self.lambda), ("x0", self.x0), ("p0", self.p0), ("t", self.t)]
        {
            finite(k, v)?;
        }
        if get(&self.t) < 0.0 {
            return Err(CliError::config("`t` must be non-negative"));
        }
        if !self.sweep.is_empty() && (self.sweep.len() < 2 || self.sweep.iter().any(|h| !(h.is_finite() && *h > 0.0))) {
            return Err(CliError::config("`sweep` needs at least two positive hbar values"));
        }
        PhaseGrid::new(get(&self.n), get(&self.length), get(&self.hbar))
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok(())
    }

    fn hamiltonian(&self) -> CliResult<MechanicalHamiltonian> {
        let (mass, omega) = (get(&self.mass), get(&self.omega));
        MechanicalHamiltonian::new(mass, vec![0.0, 0.0, 0.5 * mass * omega * omega, 0.0, get(&self.lambda)])
            .map_err(|e| CliError::config(e.to_string()))
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e: WwmError| CliError::suite("classical-limit", e);
        let g = PhaseGrid::new(get(&self.n), get(&self.length), get(&self.hbar))
            .map_err(|e| CliError::suite("classical-limit", e))?;
        let h = self.hamiltonian()?;
        let w0 = wigner(&WaveField::gaussian(g, get(&self.x0), get(&self.p0), get(&self.sigma)));
        let (t, steps) = (get(&self.t), get(&self.steps));
        let (cmp, quantum, classical) = classical_limit_fields(&h, &w0, g.hbar(), t, steps).map_err(fail)?;
        let mut report = VerificationReport::new("classical-limit");
        let mut data = json!({ "comparison": cmp, "potential_degree": h.degree() });
        if h.degree() <= 2 {
            let c = report.record("liouville", "l1-gap", anchors::CLASSICAL_LIMIT, cmp.l1_gap, get(&self.tol));
            c.detail = Some(format!("{} steps", cmp.steps));
        }
        let moment_gap = cmp.moment_gaps.iter().fold(0.0f64, |a, v| a.max(*v));
        data["max_moment_gap"] = json!(moment_gap);
        if !self.sweep.is_empty() {
            let sweep = hbar_sweep(&h, &w0, &self.sweep, t, steps).map_err(fail)?;
            let mut runs: Vec<_> = sweep.runs.iter().map(|r| (r.hbar, r.l1_gap)).collect();
            runs.sort_by(|a, b| b.0.total_cmp(&a.0));
            let rise = runs.windows(2).fold(0.0f64, |a, w| a.max(w[1].1 - w[0].1));
            let c = report.record("sweep", "gap-shrinks-with-hbar", anchors::CLASSICAL_LIMIT, rise, get(&self.tol));
            c.detail = Some(format!("log-log slope {:.3}", sweep.slope));
            data["sweep"] = serde_json::to_value(&sweep).unwrap_or_default();
        }
        let mut output = SuiteOutput::new(report, data);
        output.csv.push(("quantum.csv".into(), quantum.to_csv()));
        output.csv.push(("classical.csv".into(), classical.to_csv()));
        Ok(output)
    }
}

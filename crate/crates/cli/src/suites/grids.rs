use std::f64::consts::PI;
use std::fmt::Write;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use statrs::function::erf::erf;
use supmech_core::anchors;
use supmech_core::dynamics::pobvm::{translate, CellSet, Localization};
use supmech_core::dynamics::schrodinger::{free_gaussian_variance, Schrodinger};
use supmech_core::dynamics::weyl::{generator_errors, loglog_slope, weyl_relations_check};
use supmech_core::grid::{PhaseGrid, WaveField};
use supmech_core::VerificationReport;

use super::{fill, finite, get, positive, power_of_two, SuiteOutput};
use crate::error::{CliError, CliResult};

const MAX_GRID: usize = 1 << 16;
const NORM_TOL: f64 = 1e-12;
// Cells at each edge summed for the boundary-mass indicator.
const EDGE_CELLS: usize = 8;

fn grid(n: Option<usize>, length: Option<f64>, hbar: Option<f64>) -> CliResult<PhaseGrid> {
    PhaseGrid::new(get(&n), get(&length), get(&hbar)).map_err(|e| CliError::config(e.to_string()))
}

fn wave_csv(psi: &WaveField) -> String {
    let g = psi.grid();
    let mut out = String::from("x,re,im,density\n");
    for (j, z) in psi.values().iter().enumerate() {
        let _ = writeln!(out, "{:.12e},{:.12e},{:.12e},{:.12e}", g.x(j), z.re, z.im, z.norm_sqr());
    }
    out
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveParams {
    /// Grid points (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Box length.
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Harmonic frequency; 0 for a free particle.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Initial Gaussian centre, momentum and width.
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Final time.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Relative tolerance for the width law and the energy drift.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Tolerance on `1 - fidelity` after whole periods.
    #[arg(long)]
    pub fidelity_tol: Option<f64>,
}

impl EvolveParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 512);
        fill(&mut self.length, 40.0);
        fill(&mut self.hbar, 1.0);
        fill(&mut self.mass, 1.0);
        fill(&mut self.omega, 0.0);
        fill(&mut self.x0, 0.0);
        fill(&mut self.p0, 0.0);
        fill(&mut self.sigma, 1.0);
        fill(&mut self.t, 1.0);
        fill(&mut self.steps, 1000);
        fill(&mut self.tol, 1e-6);
        fill(&mut self.fidelity_tol, 1e-8);
        power_of_two("n", self.n, 8, MAX_GRID)?;
        for (k, v) in [
            ("length", self.length),
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("sigma", self.sigma),
            ("tol", self.tol),
            ("fidelity_tol", self.fidelity_tol),
        ] {
            positive(k, v)?;
        }
        for (k, v) in [("omega", self.omega), ("x0", self.x0), ("p0", self.p0), ("t", self.t)] {
            finite(k, v)?;
        }
        if get(&self.steps) == 0 {
            return Err(CliError::config("`steps` must be positive"));
        }
        grid(self.n, self.length, self.hbar).map(|_| ())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let g = grid(self.n, self.length, self.hbar)?;
        let (mass, omega, t, tol) = (get(&self.mass), get(&self.omega), get(&self.t), get(&self.tol));
        let sigma = get(&self.sigma);
        let psi = WaveField::gaussian(g, get(&self.x0), get(&self.p0), sigma);
        let h = Schrodinger::harmonic(&g, mass, omega);
        let out = h.evolve(&psi, t, get(&self.steps)).map_err(|e| CliError::suite("evolve", e))?;
        let mut report = VerificationReport::new("evolve");
        report.record("unitarity", "norm", anchors::SCHRODINGER, (out.norm() - 1.0).abs(), NORM_TOL);
        let (e0, e1) = (h.energy(&psi), h.energy(&out));
        report.record(
            "unitarity",
            "energy-drift",
            anchors::SCHRODINGER,
            (e1 - e0).abs() / e0.abs().max(f64::MIN_POSITIVE),
            tol,
        );
        let mut data = json!({
            "energy": [e0, e1],
            "mean_x": out.mean_x(),
            "variance_x": out.variance_x(),
            "boundary_mass": [psi.boundary_mass(EDGE_CELLS), out.boundary_mass(EDGE_CELLS)],
        });
        if omega == 0.0 {
            let want = free_gaussian_variance(sigma, g.hbar(), mass, t);
            let c = report.record(
                "closed-form",
                "free-width",
                anchors::SCHRODINGER,
                (out.variance_x() - want).abs() / want,
                tol,
            );
            c.detail = Some(format!("variance {:.12} vs {:.12}", out.variance_x(), want));
            data["closed_form_variance"] = json!(want);
        } else {
            let periods = t * omega / (2.0 * PI);
            if periods.round() >= 1.0 && (periods - periods.round()).abs() < 1e-12 * periods {
                let f = out.fidelity(&psi);
                report.record("closed-form", "return-fidelity", anchors::SCHRODINGER, 1.0 - f, get(&self.fidelity_tol));
                data["fidelity"] = json!(f);
            }
        }
        let mut output = SuiteOutput::new(report, data);
        output.csv.push(("evolve.csv".into(), wave_csv(&out)));
        Ok(output)
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizeParams {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Interval `[a, b)`; an omitted end extends to the box edge. Ends lie on cell edges.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Integer cell shifts for the covariance check.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shifts: Vec<isize>,
    /// Tolerance against the error-function oracle.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl LocalizeParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 8192);
        fill(&mut self.length, 20.0);
        fill(&mut self.hbar, 1.0);
        fill(&mut self.x0, 0.37);
        fill(&mut self.p0, 0.0);
        fill(&mut self.sigma, 1.0);
        fill(&mut self.tol, 1e-6);
        if self.a.is_none() && self.b.is_none() {
            self.b = Some(0.0);
        }
        if self.shifts.is_empty() {
            self.shifts = vec![-7, 13, 300];
        }
        power_of_two("n", self.n, 8, MAX_GRID)?;
        for (k, v) in [("length", self.length), ("hbar", self.hbar), ("sigma", self.sigma), ("tol", self.tol)] {
            positive(k, v)?;
        }
        for (k, v) in [("x0", self.x0), ("p0", self.p0), ("a", self.a), ("b", self.b)] {
            finite(k, v)?;
        }
        let g = grid(self.n, self.length, self.hbar)?;
        let d = CellSet::interval(&g, self.a, self.b).map_err(|e| CliError::config(e.to_string()))?;
        if d.len() < 2 {
            return Err(CliError::config("the interval must cover at least two cells"));
        }
        Ok(())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e| CliError::suite("localize", e);
        let g = grid(self.n, self.length, self.hbar)?;
        let n = g.n();
        let (x0, sigma) = (get(&self.x0), get(&self.sigma));
        let psi = WaveField::gaussian(g, x0, get(&self.p0), sigma);
        let loc = Localization::new(g);
        let d = CellSet::interval(&g, self.a, self.b).map_err(fail)?;
        let cells: Vec<usize> = d.iter().collect();
        let (lo, hi) = cells.split_at(cells.len() / 2);
        let (d1, d2) = (
            CellSet::from_cells(n, lo.iter().copied()).map_err(fail)?,
            CellSet::from_cells(n, hi.iter().copied()).map_err(fail)?,
        );
        let mut report = VerificationReport::new("localize");
        let whole = loc.probability_exact(&psi, &d).map_err(fail)?;
        let parts = loc.probability_exact(&psi, &d1).map_err(fail)? + loc.probability_exact(&psi, &d2).map_err(fail)?;
        report.record_flag(
            "measure",
            "additivity",
            anchors::LOCALIZATION,
            whole == parts,
            Some("P(D1 u D2) != P(D1) + P(D2)".into()),
        );
        let empty = loc.probability(&psi, &CellSet::empty(n)).map_err(fail)?;
        report.record("measure", "empty-set", anchors::LOCALIZATION, empty.abs(), 0.0);
        let all = loc.probability(&psi, &CellSet::all(n)).map_err(fail)?;
        report.record("measure", "whole-line", anchors::LOCALIZATION, (all - psi.norm().powi(2)).abs(), NORM_TOL);
        for &s in &self.shifts {
            let moved = loc.probability_exact(&translate(&psi, s), &d).map_err(fail)?;
            let back = loc.probability_exact(&psi, &d.translate(-s)).map_err(fail)?;
            report.record_flag("covariance", format!("shift {s}"), anchors::COVARIANCE, moved == back, None);
        }
        let p = loc.probability(&psi, &d).map_err(fail)?;
        let z = |v: Option<f64>, inf: f64| v.map_or(inf, |v| erf((v - x0) / (sigma * 2f64.sqrt())));
        let want = 0.5 * (z(self.b, 1.0) - z(self.a, -1.0));
        let c = report.record("oracle", "gaussian-interval", anchors::LOCALIZATION, (p - want).abs(), get(&self.tol));
        c.detail = Some(format!("P = {p:.12}, erf oracle {want:.12}"));
        let data = json!({
            "cells": d.len(),
            "probability": p,
            "oracle": want,
            "boundary_mass": psi.boundary_mass(EDGE_CELLS),
        });
        Ok(SuiteOutput::new(report, data))
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylCheckParams {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Shift `a` in cells (`a = cells * dx`).
    #[arg(long, allow_hyphen_values = true)]
    pub cells: Option<i64>,
    /// Boost `b` in Fourier modes (`b = modes * 2 pi / L`).
    #[arg(long, allow_hyphen_values = true)]
    pub modes: Option<i64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Step sizes for the infinitesimal-generator check.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Allowed deviation of the generator convergence order from 1.
    #[arg(long)]
    pub order_tol: Option<f64>,
}

impl WeylCheckParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 256);
        fill(&mut self.length, 20.0);
        fill(&mut self.hbar, 1.0);
        fill(&mut self.cells, 16);
        fill(&mut self.modes, 8);
        fill(&mut self.tol, 1e-10);
        fill(&mut self.order_tol, 0.1);
        if self.eps.is_empty() {
            self.eps = vec![1e-2, 5e-3, 2.5e-3, 1.25e-3];
        }
        power_of_two("n", self.n, 8, MAX_GRID)?;
        for (k, v) in [("length", self.length), ("hbar", self.hbar), ("tol", self.tol), ("order_tol", self.order_tol)] {
            positive(k, v)?;
        }
        if self.eps.len() < 2 || self.eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CliError::config("`eps` needs at least two positive step sizes"));
        }
        if get(&self.cells) % 2 != 0 {
            return Err(CliError::config("`cells` must be even so that a/2 is a whole number of cells"));
        }
        grid(self.n, self.length, self.hbar).map(|_| ())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let g = grid(self.n, self.length, self.hbar)?;
        let a = get(&self.cells) as f64 * g.dx();
        let b = get(&self.modes) as f64 * 2.0 * PI / g.length();
        let mut report =
            weyl_relations_check(&g, a, b, get(&self.tol)).map_err(|e| CliError::suite("weyl-check", e))?;
        report.suite = "weyl-check".into();
        let psi = WaveField::gaussian(g, 0.4, 0.8, g.length() / 20.0);
        let errs = generator_errors(&psi, &self.eps);
        let (slope, _) = loglog_slope(&self.eps, &errs);
        let c =
            report.record("generator", "first-order", anchors::GENERATOR, (slope - 1.0).abs(), get(&self.order_tol));
        c.detail = Some(format!("convergence order {slope:.4}"));
        let data = json!({ "a": a, "b": b, "generator_errors": errs, "generator_order": slope });
        Ok(SuiteOutput::new(report, data))
    }
}

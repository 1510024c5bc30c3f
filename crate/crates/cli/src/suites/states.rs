use std::path::Path;

use clap::Args;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use supmech_core::anchors;
use supmech_core::gns::{
    check_state, direct_sum_faithful, find_intertwiner, gns, is_pure, random_state, state_from_vector,
    superselection_decompose, CVec, FiniteAlgebra, StateFunctional,
};
use supmech_core::grassmann::{
    enumerate_states, grassmann_cc, witness_observable, CcVerdict, Grassmann, MAX_ENUMERATION,
};
use supmech_core::{GaussianRational, NcPoly, VerificationReport};

use super::{fill, get, SuiteOutput};
use crate::error::{CliError, CliResult};

const HOMOMORPHISM_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-12;
const CENTRAL_TOL: f64 = 1e-12;
const INTERTWINER_TOL: f64 = 1e-10;
const DENSITY_RANK_TOL: f64 = 1e-9;

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct GnsParams {
    /// `matn:<n>`, `sumn:<n1>,<n2>,..`, `grassmann:<n>` or a structure-constant file.
    #[arg(long)]
    pub algebra: Option<String>,
    /// State: `trace`, a basis label such as `e11`, or comma-separated values on the basis.
    #[arg(long = "state")]
    pub states: Vec<String>,
    /// Number of additional random states (needs a seed).
    #[arg(long)]
    pub random: Option<usize>,
    /// Draw the random states pure.
    #[arg(long)]
    pub pure: bool,
    /// Number of random vector states `phi(B* . B)` built from the first state (needs a seed).
    #[arg(long)]
    pub vectors: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn load_algebra(spec: &str) -> CliResult<FiniteAlgebra> {
    match FiniteAlgebra::builtin(spec) {
        Ok(a) => Ok(a),
        Err(builtin_err) => {
            let path = Path::new(spec);
            if !path.is_file() {
                return Err(CliError::config(format!("algebra `{spec}`: {builtin_err}")));
            }
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            FiniteAlgebra::from_text(&text).map_err(|e| CliError::config(format!("{spec}: {e}")))
        }
    }
}

// Independent purity test on block algebras: one block carries all the
// weight with a rank-one density.
fn pure_by_density(alg: &FiniteAlgebra, phi: &StateFunctional) -> Option<bool> {
    let sizes = alg.blocks()?;
    let mut off = 0;
    let mut rank = 0;
    for &n in sizes {
        let rho = DMatrix::from_fn(n, n, |j, i| phi.values()[off + i * n + j]);
        off += n * n;
        rank += rho.symmetric_eigen().eigenvalues.iter().filter(|v| **v > DENSITY_RANK_TOL).count();
    }
    Some(rank == 1)
}

impl GnsParams {
    pub(super) fn resolve(&mut self, seed: Option<u64>) -> CliResult<()> {
        fill(&mut self.algebra, "matn:2".to_string());
        fill(&mut self.random, 0);
        fill(&mut self.vectors, 0);
        if self.seed.is_none() {
            self.seed = seed;
        }
        if self.states.is_empty() && get(&self.random) == 0 {
            self.states.push("e11".to_string());
        }
        if (get(&self.random) > 0 || get(&self.vectors) > 0) && self.seed.is_none() {
            return Err(CliError::config("`seed` is required for random or vector states"));
        }
        let alg = load_algebra(self.algebra.as_deref().unwrap_or_default())?;
        for s in &self.states {
            StateFunctional::parse(&alg, s).map_err(|e| CliError::config(e.to_string()))?;
        }
        if get(&self.random) > 0 && alg.blocks().is_none() {
            return Err(CliError::config("random states need a block algebra (`matn`, `sumn`)"));
        }
        Ok(())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e| CliError::suite("gns", e);
        let alg = load_algebra(self.algebra.as_deref().unwrap_or_default())?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
        let mut labelled: Vec<(String, StateFunctional)> = Vec::new();
        for s in &self.states {
            labelled.push((s.clone(), StateFunctional::parse(&alg, s).map_err(fail)?));
        }
        for k in 0..get(&self.random) {
            labelled.push((format!("random-{k}"), random_state(&alg, &mut rng, self.pure).map_err(fail)?));
        }
        let mut report = VerificationReport::new("gns");
        let mut states = Vec::new();
        for (label, phi) in &labelled {
            let check = check_state(&alg, phi).map_err(fail)?;
            let detail = format!(
                "min Gram eigenvalue {:.3e}, normalization error {:.3e}",
                check.min_eigenvalue, check.normalization_error
            );
            report.record_flag(label, "state", anchors::STATE, check.valid, Some(detail));
            if !check.valid {
                states.push(json!({"state": label, "valid": false}));
                continue;
            }
            let rep = gns(&alg, phi).map_err(fail)?;
            report.record(
                label,
                "reconstruction",
                anchors::GNS_RECONSTRUCTION,
                rep.reconstruction_residual,
                RECONSTRUCTION_TOL,
            );
            let (hom, star) = rep.rep.homomorphism_residuals(&alg);
            report.record(label, "homomorphism", anchors::GNS_HOMOMORPHISM, hom, HOMOMORPHISM_TOL);
            report.record(label, "star", anchors::GNS_HOMOMORPHISM, star, HOMOMORPHISM_TOL);
            let oracle = pure_by_density(&alg, phi);
            if let Some(pure) = oracle {
                let ok = pure == rep.is_irreducible();
                let detail = format!("commutant dimension {}, density oracle says pure = {pure}", rep.commutant_dim);
                report.record_flag(label, "purity", anchors::PURITY, ok, Some(detail));
            }
            states.push(json!({
                "state": label,
                "valid": true,
                "dim": rep.dim(),
                "null_dim": rep.null_basis.ncols(),
                "commutant_dim": rep.commutant_dim,
                "irreducible": rep.is_irreducible(),
                "reconstruction_residual": rep.reconstruction_residual,
            }));
        }
        let mut data = json!({ "algebra": alg.name(), "algebra_dim": alg.dim(), "states": states });
        if labelled.len() > 1 {
            data["superselection"] = self.superselection(&alg, &labelled, &mut report)?;
        }
        if get(&self.vectors) > 0 {
            data["vector_states"] = self.vector_states(&alg, &labelled[0].1, &mut rng, &mut report)?;
        }
        Ok(SuiteOutput::new(report, data))
    }

    fn superselection(
        &self,
        alg: &FiniteAlgebra,
        labelled: &[(String, StateFunctional)],
        report: &mut VerificationReport,
    ) -> CliResult<Value> {
        let phis: Vec<StateFunctional> = labelled.iter().map(|(_, p)| p.clone()).collect();
        let ds = direct_sum_faithful(alg, &phis).map_err(|e| CliError::suite("gns", e))?;
        let sel = superselection_decompose(&ds.rep);
        let group = "direct-sum";
        report.record(group, "central-commutator", anchors::SUPERSELECTION, sel.commutator_residual, CENTRAL_TOL);
        report.record(group, "projection-sum", anchors::SUPERSELECTION, sel.sum_residual, CENTRAL_TOL);
        report.record(
            group,
            "projection-orthogonality",
            anchors::SUPERSELECTION,
            sel.orthogonality_residual,
            CENTRAL_TOL,
        );
        Ok(json!({
            "dim": ds.rep.dim,
            "block_dims": ds.block_dims,
            "kernel_dim": ds.kernel_dim,
            "faithful": ds.is_faithful(),
            "center_dim": sel.center_dim,
            "sectors": sel.dims(),
        }))
    }

    fn vector_states(
        &self,
        alg: &FiniteAlgebra,
        phi: &StateFunctional,
        rng: &mut ChaCha8Rng,
        report: &mut VerificationReport,
    ) -> CliResult<Value> {
        let fail = |e| CliError::suite("gns", e);
        let base = gns(alg, phi).map_err(fail)?;
        let base_pure = base.is_irreducible();
        let mut worst = 0.0f64;
        let mut found = 0;
        for k in 0..get(&self.vectors) {
            let group = format!("vector-{k}");
            let b = CVec::from_fn(alg.dim(), |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let phib = state_from_vector(alg, phi, &b).map_err(fail)?;
            report.record_flag(
                &group,
                "state",
                anchors::VECTOR_STATE,
                check_state(alg, &phib).map_err(fail)?.valid,
                None,
            );
            if !base_pure {
                continue;
            }
            report.record_flag(&group, "pure", anchors::VECTOR_STATE, is_pure(alg, &phib).map_err(fail)?, None);
            let other = gns(alg, &phib).map_err(fail)?;
            match find_intertwiner(&base.rep, &other.rep) {
                Some(u) => {
                    found += 1;
                    worst = worst.max(u.residual);
                    report.record(&group, "intertwiner", anchors::UNITARY_EQUIVALENCE, u.residual, INTERTWINER_TOL);
                }
                None => report.record_flag(
                    &group,
                    "intertwiner",
                    anchors::UNITARY_EQUIVALENCE,
                    false,
                    Some("no unitary found".into()),
                ),
            }
        }
        Ok(json!({
            "count": get(&self.vectors),
            "base_pure": base_pure,
            "intertwiners_found": found,
            "worst_intertwiner_residual": worst,
        }))
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrassmannCcParams {
    /// Number of odd generators.
    #[arg(long)]
    pub n: Option<usize>,
    /// Values `b` of the witness observables `1 + i b th1 th2`.
    #[arg(long, value_delimiter = ',')]
    pub witness: Vec<i64>,
}

// Test functions for positivity: every basis monomial, and sums
// `b_U + b_V`, `b_U + i b_V` over pairs.
fn positivity_probes(g: &Grassmann) -> Vec<NcPoly> {
    let d = g.dim();
    let mut out: Vec<NcPoly> = (0..d).map(|u| g.monomial(u)).collect();
    for u in 0..d {
        for v in u + 1..d {
            for c in [GaussianRational::one(), GaussianRational::i()] {
                let mut coords = vec![GaussianRational::zero(); d];
                coords[u] = GaussianRational::one();
                coords[v] = c;
                out.push(g.from_coordinates(&coords));
            }
        }
    }
    out
}

impl GrassmannCcParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.n, 3);
        let n = get(&self.n);
        if n == 0 || n > MAX_ENUMERATION {
            return Err(CliError::config(format!("`n` must be in 1..={MAX_ENUMERATION}, got {n}")));
        }
        if self.witness.is_empty() && n >= 2 {
            self.witness = vec![1, 2];
        }
        if !self.witness.is_empty() && n < 2 {
            return Err(CliError::config("witness observables need n >= 2"));
        }
        Ok(())
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let fail = |e| CliError::suite("grassmann-cc", e);
        let n = get(&self.n);
        let g = Grassmann::new(n);
        let p = g.presentation();
        let family = enumerate_states(n).map_err(fail)?;
        let mut report = VerificationReport::new("grassmann-cc");
        report.record_flag(
            "state",
            "feasible",
            anchors::GRASSMANN_STATE,
            family.feasible,
            Some("no state satisfies the constraints".into()),
        );
        let mut data = json!({
            "n": n,
            "dim": g.dim(),
            "family": {
                "feasible": family.feasible,
                "unique": family.is_singleton(),
                "particular": p.display(&family.particular),
                "free": family.free.iter().map(|f| p.display(f)).collect::<Vec<_>>(),
                "forced_rows": family.forced_rows.iter().map(|&u| p.display(&g.monomial(u))).collect::<Vec<_>>(),
                "equations": family.equations,
            },
        });
        let Some(state) = family.state() else {
            data["verdict"] = Value::Null;
            return Ok(SuiteOutput::new(report, data));
        };
        let mut worst = 0.0f64;
        let mut imaginary = 0.0f64;
        for f in positivity_probes(&g) {
            let ff = g.mul(&f, &g.star(&f).map_err(fail)?).map_err(fail)?;
            let v = state.expectation(&g, &ff).map_err(fail)?.to_complex();
            worst = worst.max(-v.re);
            imaginary = imaginary.max(v.im.abs());
        }
        report.record("state", "positivity", anchors::GRASSMANN_STATE, worst.max(imaginary).max(0.0), 1e-12);
        if !self.witness.is_empty() {
            let obs: Vec<NcPoly> = self.witness.iter().map(|&b| witness_observable(&g, b)).collect();
            let verdict = grassmann_cc(&g, &obs, &[state]).map_err(fail)?;
            let witnessed = matches!(verdict, CcVerdict::Observables { .. });
            report.record_flag(
                "cc",
                "indistinguishable-observables",
                anchors::CC_CONDITION,
                witnessed,
                Some(verdict.to_string()),
            );
            data["witness"] = json!(obs.iter().map(|f| p.display(f)).collect::<Vec<_>>());
            data["verdict"] = serde_json::to_value(&verdict).unwrap_or(Value::Null);
        }
        Ok(SuiteOutput::new(report, data))
    }
}

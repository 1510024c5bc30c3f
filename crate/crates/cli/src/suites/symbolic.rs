use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use supmech_core::dynamics::heisenberg::free_particle_noether;
use supmech_core::presentations::{by_name, casimir_check, consistency_check, derived_observables, verify_pb_table};
use supmech_core::{Presentation, VerificationReport};

use super::{fill, SuiteOutput};
use crate::error::{CliError, CliResult};

const GALILEI: [&str; 2] = ["galilei", "galilei-extended"];

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyAlgebraParams {
    /// Built-in presentation: `galilei`, `ccr-spin` or `grassmann:<n>`.
    #[arg(long)]
    pub preset: Option<String>,
    /// Presentation file; takes precedence over `--preset`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    /// Galilei only: also check position, spin and internal energy.
    #[arg(long)]
    pub derived: bool,
    /// Galilei only: also run the generic consistency checks.
    #[arg(long)]
    pub consistency: bool,
}

impl VerifyAlgebraParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        if self.file.is_none() {
            fill(&mut self.preset, "galilei".to_string());
        }
        self.presentation().map(|_| ())
    }

    fn is_galilei(&self) -> bool {
        self.file.is_none() && self.preset.as_deref().is_some_and(|p| GALILEI.contains(&p))
    }

    fn presentation(&self) -> CliResult<Presentation> {
        match (&self.file, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Presentation::from_text(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
            }
            (None, Some(name)) => by_name(name).map_err(|e| CliError::config(e.to_string())),
            (None, None) => Err(CliError::config("no presentation given")),
        }
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let p = self.presentation()?;
        let fail = |e| CliError::suite("verify-algebra", e);
        let mut report = VerificationReport::new("verify-algebra");
        if self.is_galilei() {
            report.extend(verify_pb_table(&p).map_err(fail)?);
            report.extend(casimir_check(&p).map_err(fail)?);
            if self.derived {
                report.extend(derived_observables(&p).map_err(fail)?);
            }
        }
        if !self.is_galilei() || self.consistency {
            report.extend(consistency_check(&p).map_err(fail)?);
        }
        let mut groups: Vec<(String, usize)> = Vec::new();
        for c in &report.checks {
            match groups.iter_mut().find(|(g, _)| *g == c.group) {
                Some((_, n)) => *n += 1,
                None => groups.push((c.group.clone(), 1)),
            }
        }
        let data = json!({
            "presentation": p.name(),
            "generators": p.generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            "groups": groups.into_iter().map(|(g, n)| json!({"group": g, "entries": n})).collect::<Vec<_>>(),
        });
        Ok(SuiteOutput::new(report, data))
    }
}

#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoetherParams {
    /// Presentation with generators `X1..X3`, `P1..P3`.
    #[arg(long)]
    pub preset: Option<String>,
}

impl NoetherParams {
    pub(super) fn resolve(&mut self) -> CliResult<()> {
        fill(&mut self.preset, "ccr-spin".to_string());
        self.presentation().map(|_| ())
    }

    fn presentation(&self) -> CliResult<Presentation> {
        let name = self.preset.as_deref().unwrap_or("ccr-spin");
        let p = by_name(name).map_err(|e| CliError::config(e.to_string()))?;
        for g in ["X1", "X2", "X3", "P1", "P2", "P3"] {
            if p.gen_id(g).is_none() {
                return Err(CliError::config(format!("preset `{name}` has no generator {g}")));
            }
        }
        Ok(p)
    }

    pub(super) fn run(&self) -> CliResult<SuiteOutput> {
        let p = self.presentation()?;
        let report = free_particle_noether(&p).map_err(|e| CliError::suite("noether", e))?;
        let data = json!({
            "presentation": p.name(),
            "hamiltonian": "P^2/2m",
            "invariants": report.checks.iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
        });
        Ok(SuiteOutput::new(report, data))
    }
}

//! Named verification suites. Each suite has one parameter struct that
//! serves both as its command-line arguments and as its scenario table.

mod grids;
mod phase;
mod states;
mod symbolic;

use clap::Subcommand;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use supmech_core::VerificationReport;

use crate::error::{CliError, CliResult};

pub use grids::{EvolveParams, LocalizeParams, WeylCheckParams};
pub use phase::{ClassicalLimitParams, StarParams, WignerParams};
pub use states::{GnsParams, GrassmannCcParams};
pub use symbolic::{NoetherParams, VerifyAlgebraParams};

/// Result of one suite run.
#[derive(Debug)]
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub data: Value,
    /// `(file name, contents)` of plot grids.
    pub csv: Vec<(String, String)>,
}

impl SuiteOutput {
    fn new(report: VerificationReport, data: Value) -> Self {
        Self { report, data, csv: Vec::new() }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, Subcommand)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum SuiteSpec {
    /// Bracket table, Casimirs and consistency of a presentation
    VerifyAlgebra(VerifyAlgebraParams),
    /// GNS construction, purity and superselection for finite algebras
    Gns(GnsParams),
    /// Berezin states and compatible completeness on a Grassmann algebra
    GrassmannCc(GrassmannCcParams),
    /// Conserved quantities of the free particle
    Noether(NoetherParams),
    /// Split-step Schrodinger evolution of a Gaussian packet
    Evolve(EvolveParams),
    /// Position localization measure on a grid
    Localize(LocalizeParams),
    /// Weyl relations and generator orders on a periodic grid
    WeylCheck(WeylCheckParams),
    /// Wigner function marginals, purity and Born pairing
    Wigner(WignerParams),
    /// Moyal star product calibration and semiclassical scaling
    Star(StarParams),
    /// Moyal versus Liouville transport of a Wigner function
    ClassicalLimit(ClassicalLimitParams),
}

impl SuiteSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteSpec::VerifyAlgebra(_) => "verify-algebra",
            SuiteSpec::Gns(_) => "gns",
            SuiteSpec::GrassmannCc(_) => "grassmann-cc",
            SuiteSpec::Noether(_) => "noether",
            SuiteSpec::Evolve(_) => "evolve",
            SuiteSpec::Localize(_) => "localize",
            SuiteSpec::WeylCheck(_) => "weyl-check",
            SuiteSpec::Wigner(_) => "wigner",
            SuiteSpec::Star(_) => "star",
            SuiteSpec::ClassicalLimit(_) => "classical-limit",
        }
    }

    /// Fill defaults and validate. `seed` is the scenario-wide seed.
    pub fn resolve(&mut self, seed: Option<u64>) -> CliResult<()> {
        let name = self.name();
        let wrap = |e: CliError| match e {
            CliError::Config(m) => CliError::Config(format!("{name}: {m}")),
            other => other,
        };
        match self {
            SuiteSpec::VerifyAlgebra(p) => p.resolve(),
            SuiteSpec::Gns(p) => p.resolve(seed),
            SuiteSpec::GrassmannCc(p) => p.resolve(),
            SuiteSpec::Noether(p) => p.resolve(),
            SuiteSpec::Evolve(p) => p.resolve(),
            SuiteSpec::Localize(p) => p.resolve(),
            SuiteSpec::WeylCheck(p) => p.resolve(),
            SuiteSpec::Wigner(p) => p.resolve(),
            SuiteSpec::Star(p) => p.resolve(),
            SuiteSpec::ClassicalLimit(p) => p.resolve(),
        }
        .map_err(wrap)
    }

    /// The resolved parameters, for the report.
    pub fn parameters(&self) -> Value {
        let v = match self {
            SuiteSpec::VerifyAlgebra(p) => serde_json::to_value(p),
            SuiteSpec::Gns(p) => serde_json::to_value(p),
            SuiteSpec::GrassmannCc(p) => serde_json::to_value(p),
            SuiteSpec::Noether(p) => serde_json::to_value(p),
            SuiteSpec::Evolve(p) => serde_json::to_value(p),
            SuiteSpec::Localize(p) => serde_json::to_value(p),
            SuiteSpec::WeylCheck(p) => serde_json::to_value(p),
            SuiteSpec::Wigner(p) => serde_json::to_value(p),
            SuiteSpec::Star(p) => serde_json::to_value(p),
            SuiteSpec::ClassicalLimit(p) => serde_json::to_value(p),
        };
        v.unwrap_or(Value::Null)
    }

    pub fn run(&self) -> CliResult<SuiteOutput> {
        match self {
            SuiteSpec::VerifyAlgebra(p) => p.run(),
            SuiteSpec::Gns(p) => p.run(),
            SuiteSpec::GrassmannCc(p) => p.run(),
            SuiteSpec::Noether(p) => p.run(),
            SuiteSpec::Evolve(p) => p.run(),
            SuiteSpec::Localize(p) => p.run(),
            SuiteSpec::WeylCheck(p) => p.run(),
            SuiteSpec::Wigner(p) => p.run(),
            SuiteSpec::Star(p) => p.run(),
            SuiteSpec::ClassicalLimit(p) => p.run(),
        }
    }
}

fn fill<T>(slot: &mut Option<T>, default: T) {
    if slot.is_none() {
        *slot = Some(default);
    }
}

fn get<T: Copy>(slot: &Option<T>) -> T {
    slot.expect("parameters resolved before running")
}

fn positive(name: &str, v: Option<f64>) -> CliResult<()> {
    match v {
        Some(x) if x.is_finite() && x > 0.0 => Ok(()),
        Some(x) => Err(CliError::config(format!("`{name}` must be positive, got {x}"))),
        None => Ok(()),
    }
}

fn finite(name: &str, v: Option<f64>) -> CliResult<()> {
    match v {
        Some(x) if !x.is_finite() => Err(CliError::config(format!("`{name}` must be finite, got {x}"))),
        _ => Ok(()),
    }
}

fn power_of_two(name: &str, v: Option<usize>, min: usize, max: usize) -> CliResult<()> {
    match v {
        Some(n) if !n.is_power_of_two() || n < min || n > max => {
            Err(CliError::config(format!("`{name}` must be a power of two in [{min}, {max}], got {n}")))
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(toml_text: &str) -> CliResult<SuiteSpec> {
        let mut s: SuiteSpec = toml::from_str(toml_text).map_err(|e| CliError::config(e.to_string()))?;
        s.resolve(None)?;
        Ok(s)
    }

    #[test]
    fn every_suite_resolves_its_defaults() {
        for name in [
            "verify-algebra",
            "gns",
            "grassmann-cc",
            "noether",
            "evolve",
            "localize",
            "weyl-check",
            "wigner",
            "star",
            "classical-limit",
        ] {
            let s = spec(&format!("suite = \"{name}\"")).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name(), name);
            let params = s.parameters();
            assert!(params.as_object().is_some_and(|m| !m.is_empty()), "{name}");
        }
    }

    #[test]
    fn resolved_parameters_round_trip() {
        let s = spec("suite = \"evolve\"\nomega = 2.0").unwrap();
        let mut back: SuiteSpec = serde_json::from_value({
            let mut v = s.parameters();
            v["suite"] = "evolve".into();
            v
        })
        .unwrap();
        back.resolve(None).unwrap();
        assert_eq!(back.parameters(), s.parameters());
    }

    #[test]
    fn invalid_parameters_name_the_suite() {
        for (text, needle) in [
            ("suite = \"wigner\"\nn = 48", "wigner"),
            ("suite = \"star\"\norder = 0", "star"),
            ("suite = \"evolve\"\nhbar = -1.0", "evolve"),
            ("suite = \"grassmann-cc\"\nn = 9", "grassmann-cc"),
            ("suite = \"weyl-check\"\ncells = 3", "weyl-check"),
            ("suite = \"classical-limit\"\nsweep = [1.0]", "classical-limit"),
        ] {
            match spec(text) {
                Err(CliError::Config(m)) => assert!(m.starts_with(needle), "{m}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}

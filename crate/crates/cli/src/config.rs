//! Scenario files: TOML (or JSON) with optional `name` and `seed` and one
//! `[[run]]` table per suite, selected by its `suite` key.
//!
//! ```toml
//! name = "states"
//! seed = 7
//!
//! [[run]]
//! suite = "gns"
//! algebra = "sumn:2,3"
//! states = ["1:e11", "2:e11"]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::suites::SuiteSpec;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub run: Vec<SuiteSpec>,
}

impl Scenario {
    pub fn parse(text: &str, json: bool) -> CliResult<Self> {
        let scenario: Scenario = if json {
            serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?
        };
        if scenario.run.is_empty() {
            return Err(CliError::config(
                "scenario has no [[run]] tables; each needs a `suite` key naming one of the suites",
            ));
        }
        Ok(scenario)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_is_rejected() {
        assert!(matches!(Scenario::parse("", false), Err(CliError::Config(_))));
        assert!(matches!(Scenario::parse("{}", true), Err(CliError::Config(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = "[[run]]\nsuite = \"gns\"\nalgebr = \"matn:2\"\n";
        let err = Scenario::parse(bad, false).unwrap_err().to_string();
        assert!(err.contains("algebr"), "{err}");
        assert!(Scenario::parse("colour = 1\n[[run]]\nsuite = \"noether\"\n", false).is_err());
        assert!(Scenario::parse("[[run]]\nsuite = \"nope\"\n", false).is_err());
    }

    #[test]
    fn toml_and_json_agree() {
        let t = Scenario::parse("seed = 3\n[[run]]\nsuite = \"grassmann-cc\"\nn = 2\n", false).unwrap();
        let j = Scenario::parse(r#"{"seed": 3, "run": [{"suite": "grassmann-cc", "n": 2}]}"#, true).unwrap();
        assert_eq!(t.seed, j.seed);
        assert_eq!(t.run[0].parameters(), j.run[0].parameters());
        assert_eq!(t.run[0].name(), "grassmann-cc");
    }
}

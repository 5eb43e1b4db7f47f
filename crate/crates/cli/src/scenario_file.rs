//! Scenario files: a JSON object naming a structure and an enumeration rule.
//!
//! ```json
//! {"name": "Q_in_R", "big": "dlo[field=qsqrt2]", "small": "rationals", "seed": 7}
//! ```

use std::path::Path;

use anyhow::{Context, Result};
use orbitlab_core::transfer::{scenario, Scenario, SmallSet};
use orbitlab_core::StructureSpec;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    /// A spec literal.
    pub big: String,
    /// An enumeration rule such as `rationals` or `sum(rationals, star, rationals)`.
    pub small: String,
    #[serde(default)]
    pub expected_fail: bool,
    #[serde(default)]
    pub description: String,
    /// Default sampling seed when none is given on the command line.
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<(Scenario, Option<u64>)> {
        let big: StructureSpec = self.big.parse()?;
        let small: SmallSet = self.small.parse()?;
        let s = Scenario::new(&self.name, big, small, self.expected_fail, &self.description)?;
        Ok((s, self.seed))
    }
}

/// A catalogue name, or the path of a scenario file.
pub fn load(arg: &str) -> Result<(Scenario, Option<u64>)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let file: ScenarioFile = serde_json::from_str(&text).with_context(|| format!("parsing scenario file {arg}"))?;
        return file.into_scenario();
    }
    Ok((scenario(arg)?, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn files_build_scenarios() {
        let f: ScenarioFile = serde_json::from_str(r#"{"name": "q", "big": "sum(dlo[field=qsqrt2], star, dlo)", "small": "sum(rationals, star, rationals)"}"#).unwrap();
        let (s, seed) = f.into_scenario().unwrap();
        assert_eq!(s.name, "q");
        assert_eq!(seed, None);
        let bad: ScenarioFile = serde_json::from_str(r#"{"name": "q", "big": "eq", "small": "rationals"}"#).unwrap();
        assert!(bad.into_scenario().is_err());
        assert!(serde_json::from_str::<ScenarioFile>(r#"{"name": "q", "big": "eq", "small": "all", "bounds": 3}"#).is_err());
    }

    #[test]
    fn names_resolve() {
        assert_eq!(load("FFM").unwrap().0.name, "FFM");
        assert!(load("nope").is_err());
    }
}

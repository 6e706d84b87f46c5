//! Problem files: a JSON object with the system and an optional objective.
//!
//! ```json
//! {
//!   "m": 1, "n": 2,
//!   "a_plus":  [[0.5, 0.9]],
//!   "a_minus": [[0.0, 0.3]],
//!   "b": [0.5],
//!   "tnorm": { "name": "product" },
//!   "objective": { "name": "linear", "params": { "c": [1, -1] } }
//! }
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use bipolar_fre::{objective_catalog, BipolarSystem, MonotoneObjective, ObjectiveParams, TNorm};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TNormSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    pub name: String,
    #[serde(default)]
    pub params: ObjectiveParams,
    /// Overrides the catalog's non-decreasing coordinates (0-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_plus: Option<BTreeSet<usize>>,
    /// Overrides the catalog's non-increasing coordinates (0-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_minus: Option<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub m: usize,
    pub n: usize,
    pub a_plus: Vec<Vec<f64>>,
    pub a_minus: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub tnorm: TNormSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSpec>,
}

#[derive(Debug)]
pub struct Problem {
    pub system: BipolarSystem,
    pub objective: Option<MonotoneObjective>,
}

/// Reads, parses and validates a problem file.
pub fn parse_problem(path: &Path) -> Result<Problem, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_problem_str(&text).map_err(|e| match e {
        CliError::Parse { source, .. } => CliError::Parse { origin: path.display().to_string(), source },
        other => other,
    })
}

pub fn parse_problem_str(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|source| CliError::Parse { origin: "<input>".into(), source })?;
    file.into_problem()
}

impl ProblemFile {
    /// Every shape or range problem in the file, one message each.
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.m == 0 || self.n == 0 {
            errors.push(format!("m = {} and n = {} must both be positive", self.m, self.n));
        }
        if self.b.len() != self.m {
            errors.push(format!("b has {} entries, expected m = {}", self.b.len(), self.m));
        }
        for (name, matrix) in [("a_plus", &self.a_plus), ("a_minus", &self.a_minus)] {
            if matrix.len() != self.m {
                errors.push(format!("{name} has {} rows, expected m = {}", matrix.len(), self.m));
            }
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != self.n {
                    errors.push(format!("{name}[{i}] has {} entries, expected n = {}", row.len(), self.n));
                }
                for (j, v) in row.iter().enumerate() {
                    if !(0.0..=1.0).contains(v) {
                        errors.push(format!("{name}[{i}][{j}] = {v} lies outside [0, 1]"));
                    }
                }
            }
        }
        for (i, v) in self.b.iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                errors.push(format!("b[{i}] = {v} lies outside [0, 1]"));
            }
        }
        errors
    }

    pub fn into_problem(self) -> Result<Problem, CliError> {
        let errors = self.validation_errors();
        if !errors.is_empty() {
            return Err(CliError::Invalid(errors));
        }
        let tnorm = TNorm::from_name(&self.tnorm.name, self.tnorm.param)
            .map_err(|source| CliError::Field { field: "tnorm", source })?;
        let system = BipolarSystem::new(self.a_plus, self.a_minus, self.b, tnorm)?;
        let objective = self
            .objective
            .map(|spec| spec.build(self.n).map_err(|source| CliError::Field { field: "objective", source }))
            .transpose()?;
        Ok(Problem { system, objective })
    }

    /// The file describing `system`, with an optional objective spec.
    pub fn from_system(system: &BipolarSystem, objective: Option<ObjectiveSpec>) -> Self {
        let tnorm = system.tnorm();
        ProblemFile {
            m: system.rows(),
            n: system.cols(),
            a_plus: system.a_plus().to_vec(),
            a_minus: system.a_minus().to_vec(),
            b: system.b().to_vec(),
            tnorm: TNormSpec { name: tnorm.kind().name().to_string(), param: tnorm.param() },
            objective,
        }
    }
}

impl ObjectiveSpec {
    pub fn build(&self, n: usize) -> bipolar_fre::Result<MonotoneObjective> {
        let obj = objective_catalog(&self.name, &self.params, n)?;
        match (&self.j_plus, &self.j_minus) {
            (None, None) => Ok(obj),
            (plus, minus) => {
                let plus = plus.clone().unwrap_or_else(|| {
                    (0..n).filter(|j| !minus.as_ref().is_some_and(|m| m.contains(j))).collect()
                });
                let minus = minus.clone().unwrap_or_else(|| (0..n).filter(|j| !plus.contains(j)).collect());
                obj.with_directions(plus, minus)
            }
        }
    }
}

/// Pretty JSON for a problem file; numbers keep full precision.
pub fn emit(file: &ProblemFile) -> String {
    serde_json::to_string_pretty(file).expect("problem files always serialize")
}

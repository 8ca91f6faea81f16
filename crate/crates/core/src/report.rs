//! Residual reports shared by every equation suite.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
    pub tol: f64,
}

impl Report {
    pub fn new(tol: f64) -> Self {
        Report { checks: Vec::new(), seed: None, tol }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records a residual; NaN never passes.
    pub fn push(&mut self, name: impl Into<String>, residual: f64) {
        let pass = residual <= self.tol;
        self.checks.push(Check { name: name.into(), residual, pass });
    }

    pub fn push_flag(&mut self, name: impl Into<String>, residual: f64, pass: bool) {
        self.checks.push(Check { name: name.into(), residual, pass });
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: &Report) {
        for c in &other.checks {
            self.checks.push(Check {
                name: format!("{prefix}.{}", c.name),
                residual: c.residual,
                pass: c.pass,
            });
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.get(name).map(|c| c.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Names of passing checks, in order.
    pub fn pass_set(&self) -> Vec<(String, bool)> {
        self.checks.iter().map(|c| (c.name.clone(), c.pass)).collect()
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<40} {:>12.3e}  {}",
                c.name,
                c.residual,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

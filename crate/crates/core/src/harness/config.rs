//! Experiment configuration: a flat TOML file with a versioned schema.
//!
//! ```toml
//! schema = 1
//! experiment = "counting"
//! n = [12]
//! k = [3]
//! density = "ratio"
//! grid = [2.5]
//! instances = 10000
//! seed = 7
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::BudgetPolicy;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Good-variable counts of planted formulas.
    GoodFraction,
    /// Single-run Simple-PPZ success rates on planted formulas.
    PpzSuccess,
    /// Oracle model counts of `R(n,k,m)` against the closed-form mean.
    Counting,
    /// The dispatch solver on `R⁺(n,k,m)`.
    EndToEnd,
}

impl ExperimentKind {
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::GoodFraction => "good-fraction",
            ExperimentKind::PpzSuccess => "ppz-success",
            ExperimentKind::Counting => "counting",
            ExperimentKind::EndToEnd => "end-to-end",
        }
    }
}

/// How a `grid` value turns into a clause count `m` at a given `(n, k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Density {
    /// `m = ⌈g·n⌉`.
    #[default]
    Ratio,
    /// `m = ⌈g·2^k·n⌉`.
    Pow2k,
    /// `m = ⌈g^k·n⌉`.
    TPower,
    /// `m = g`, which must be a non-negative integer.
    Clauses,
}

/// Ceiling that forgives float noise on exact integers such as `3^6·200`.
fn ceil_clean(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

impl Density {
    pub fn clauses(self, n: usize, k: usize, g: f64) -> Result<usize> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::Config(format!(
                "grid value {g} must be finite and >= 0"
            )));
        }
        let nf = n as f64;
        let m = match self {
            Density::Ratio => g * nf,
            Density::Pow2k => g * (k as f64).exp2() * nf,
            Density::TPower => g.powi(k as i32) * nf,
            Density::Clauses => {
                if g.fract() != 0.0 {
                    return Err(Error::Config(format!("clause count {g} is not an integer")));
                }
                g
            }
        };
        Ok(ceil_clean(m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub experiment: ExperimentKind,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    #[serde(default)]
    pub density: Density,
    pub grid: Vec<f64>,
    /// Instances sampled per grid point.
    pub instances: u64,
    /// Solver trials per instance (ppz-success only).
    #[serde(default = "one")]
    pub trials: u64,
    /// Master seed; TOML integers are signed, so at most `i64::MAX`.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Fill the `elapsed_ms` column. Off by default so repeated runs are byte-identical.
    #[serde(default)]
    pub timing: bool,
}

fn one() -> u64 {
    1
}

/// One `(n, k, m)` cell of the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub grid_value: f64,
}

impl ExperimentConfig {
    pub fn new(
        experiment: ExperimentKind,
        n: usize,
        k: usize,
        m: usize,
        instances: u64,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            experiment,
            n: vec![n],
            k: vec![k],
            density: Density::Clauses,
            grid: vec![m as f64],
            instances,
            trials: 1,
            seed,
            gamma: None,
            poly_factor: None,
            cap: None,
            sampling_slack: None,
            output: None,
            timing: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn policy(&self) -> BudgetPolicy {
        let d = BudgetPolicy::default();
        BudgetPolicy {
            gamma: self.gamma.unwrap_or(d.gamma),
            poly_factor: self.poly_factor.unwrap_or(d.poly_factor),
            cap: self.cap.unwrap_or(d.cap),
            sampling_slack: self.sampling_slack.unwrap_or(d.sampling_slack),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.n.is_empty() || self.k.is_empty() || self.grid.is_empty() {
            return Err(Error::Config("n, k and grid must be non-empty".into()));
        }
        if self.instances == 0 || self.trials == 0 {
            return Err(Error::Config(
                "instances and trials must be at least 1".into(),
            ));
        }
        for &n in &self.n {
            for &k in &self.k {
                if k == 0 || k > n {
                    return Err(Error::Config(format!("need 1 <= k <= n, got n={n} k={k}")));
                }
            }
        }
        self.policy()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.points().map(|_| ())
    }

    /// Grid cells in `n`-major, then `k`, then `grid` order.
    pub fn points(&self) -> Result<Vec<GridPoint>> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &g in &self.grid {
                    let m = self.density.clauses(n, k, g)?;
                    out.push(GridPoint {
                        index: out.len(),
                        n,
                        k,
                        m,
                        grid_value: g,
                    });
                }
            }
        }
        Ok(out)
    }
}

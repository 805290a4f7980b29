use serde::{Deserialize, Serialize};

use crate::analysis::{expected_solutions_log2, regime_params};
use crate::error::{Error, Result};

/// Trial-count knobs. The asymptotic statements hide their constants; `gamma` and
/// `poly_factor` stand in for them and are meant to be tuned by pilot runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetPolicy {
    /// Constant in front of every asymptotic good-fraction estimate.
    pub gamma: f64,
    /// Budgets are multiplied by `n^poly_factor`.
    pub poly_factor: f64,
    /// Absolute ceiling on trials.
    pub cap: u64,
    /// `c` in the sampling budget's `2^{c·n·k/2^k}` slack factor.
    pub sampling_slack: f64,
}

impl Default for BudgetPolicy {
    fn default() -> Self {
        BudgetPolicy {
            gamma: 0.1,
            poly_factor: 1.0,
            cap: 1 << 36,
            sampling_slack: 1.0,
        }
    }
}

impl BudgetPolicy {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.gamma) || !positive(self.poly_factor) || !positive(self.sampling_slack) {
            return Err(Error::InvalidParameter(format!(
                "budget policy fields must be positive: {self:?}"
            )));
        }
        if self.cap == 0 {
            return Err(Error::InvalidParameter(
                "budget cap must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn log2_cap(&self) -> f64 {
        (self.cap as f64).log2()
    }

    fn budget(&self, log2_trials: f64, good_fraction: f64) -> TrialBudget {
        let log2_trials = log2_trials.max(0.0);
        if log2_trials > self.log2_cap() {
            return TrialBudget {
                log2_trials,
                trials: self.cap,
                capped: true,
                good_fraction,
            };
        }
        TrialBudget {
            log2_trials,
            trials: (log2_trials.exp2().ceil() as u64).clamp(1, self.cap),
            capped: false,
            good_fraction,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialBudget {
    pub log2_trials: f64,
    /// `ceil(2^log2_trials)`, clamped to `[1, cap]`.
    pub trials: u64,
    /// The uncapped budget exceeded the policy cap.
    pub capped: bool,
    /// Predicted good fraction behind the budget (0 for the sampling budget).
    pub good_fraction: f64,
}

/// Predicted good-variable fraction for planted `(n, k, m)`: the largest of
/// `γ·ln k/k`, `γ·z'` (once `m/n ≥ 2^k`) and `(1 − 2/t)(1 − 2/k)` (once `t > 2`).
pub fn planted_good_fraction(n: usize, k: usize, m: usize, policy: &BudgetPolicy) -> f64 {
    let r = regime_params(n, k, m);
    let kf = k as f64;
    let mut g = policy.gamma * kf.ln() / kf;
    if let Some(zp) = r.z_prime {
        g = g.max(policy.gamma * zp);
    }
    if r.t > 2.0 {
        g = g.max((1.0 - 2.0 / r.t) * (1.0 - 2.0 / kf));
    }
    g.clamp(0.0, 1.0)
}

/// `ceil(n^poly · 2^{n(1−g)})` with `g` from [`planted_good_fraction`], capped at
/// `policy.cap`.
pub fn planted_trial_budget(
    n: usize,
    k: usize,
    m: usize,
    policy: &BudgetPolicy,
) -> Result<TrialBudget> {
    policy.validate()?;
    if m < 1 {
        return Err(Error::InvalidParameter(
            "planted budget needs m >= 1".into(),
        ));
    }
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and k >= 1".into()));
    }
    let g = planted_good_fraction(n, k, m, policy);
    let log2 = policy.poly_factor * (n as f64).log2() + n as f64 * (1.0 - g);
    Ok(policy.budget(log2, g))
}

/// `ceil(n^poly · 2^n · 2^{c·n·k/2^k} / E[Z])` with `E[Z] = 2^n (1 − 2^{-k})^m`.
pub fn sampling_trial_budget(
    n: usize,
    k: usize,
    m: usize,
    policy: &BudgetPolicy,
) -> Result<TrialBudget> {
    policy.validate()?;
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and k >= 1".into()));
    }
    let (nf, kf) = (n as f64, k as f64);
    let log2 = policy.poly_factor * nf.log2() + nf + policy.sampling_slack * nf * kf / kf.exp2()
        - expected_solutions_log2(n, k, m);
    Ok(policy.budget(log2, 0.0))
}

use std::f64::consts::LN_2;

use super::{
    planted_trial_budget, ppz_repeat, sampling_trial_budget, uniform_sampling_solver, BudgetPolicy,
    SolveOutcome, TrialBudget,
};
use crate::error::{Error, Result};
use crate::formula::{satisfies_all, Formula};
use crate::stream::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    UniformSampling,
    Ppz,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::UniformSampling => "sampling",
            Strategy::Ppz => "ppz",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DispatchOutcome {
    pub strategy: Strategy,
    pub budget: TrialBudget,
    pub outcome: SolveOutcome,
}

/// Density below which uniform sampling is used: `(2^k ln 2 − k)·n·(1 − g/2)`.
pub(crate) fn sampling_threshold(n: usize, k: usize, good_fraction: f64) -> f64 {
    let kf = k as f64;
    (kf.exp2() * LN_2 - kf) * n as f64 * (1.0 - good_fraction / 2.0)
}

/// Chooses the solver for a random k-SAT instance.
pub fn choose_strategy(n: usize, k: usize, m: usize, policy: &BudgetPolicy) -> Strategy {
    let g = super::planted_good_fraction(n, k, m.max(1), policy);
    if (m as f64) < sampling_threshold(n, k, g) {
        Strategy::UniformSampling
    } else {
        Strategy::Ppz
    }
}

/// Solves a formula drawn from (something like) `R⁺(n,k,m)`: uniform sampling below
/// the `(2^k ln 2 − k)·n·(1 − g/2)` crossover, repeated Simple-PPZ with the planted
/// budget above it. A budget beyond `policy.cap` is an error, never a silent `NotFound`.
pub fn solve_random_ksat(
    formula: &Formula,
    policy: &BudgetPolicy,
    stream: &RandomStream,
) -> Result<DispatchOutcome> {
    let k = formula
        .width()
        .ok_or_else(|| Error::InvalidParameter("dispatch needs a width-k formula".into()))?;
    let (n, m) = (formula.num_vars(), formula.num_clauses());
    let strategy = choose_strategy(n, k, m, policy);
    let budget = match strategy {
        Strategy::UniformSampling => sampling_trial_budget(n, k, m, policy)?,
        Strategy::Ppz => planted_trial_budget(n, k, m, policy)?,
    };
    if budget.capped {
        return Err(Error::cap(
            "trial budget",
            budget.log2_trials,
            (policy.cap as f64).log2(),
        ));
    }
    let outcome = match strategy {
        Strategy::UniformSampling => uniform_sampling_solver(formula, budget.trials, stream)?,
        Strategy::Ppz => ppz_repeat(formula, budget.trials, stream)?,
    };
    if let Some(a) = outcome.result.assignment() {
        assert!(satisfies_all(formula, a), "solver returned a non-model");
    }
    Ok(DispatchOutcome {
        strategy,
        budget,
        outcome,
    })
}

//! Simple-PPZ, the uniform-sampling solver, trial budgets and the random k-SAT dispatcher.

mod budget;
mod dispatch;
mod ppz;
mod sampling;

use std::time::Duration;

use rayon::prelude::*;

pub use budget::{
    planted_good_fraction, planted_trial_budget, sampling_trial_budget, BudgetPolicy, TrialBudget,
};
pub use dispatch::{choose_strategy, solve_random_ksat, DispatchOutcome, Strategy};
pub use ppz::{
    ppz_repeat, ppz_success_counts, simple_ppz_run, PpzOptions, PpzPlan, PpzState, SuccessCounts,
};
pub use sampling::uniform_sampling_solver;

use crate::formula::Assignment;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Found(Assignment),
    NotFound,
}

impl SolveResult {
    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            SolveResult::Found(a) => Some(a),
            SolveResult::NotFound => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SolveResult::Found(_))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub result: SolveResult,
    pub trials_used: u64,
    pub elapsed: Duration,
}

const TRIAL_CHUNK: u64 = 1024;

/// Runs `trial(state, t)` for `t = 0, 1, ...` until one returns `Some`, fanning chunks
/// of trials across the rayon pool. The lowest successful trial index always wins, so
/// the result does not depend on scheduling.
fn first_success<S, T, I, F>(trials: u64, init: I, trial: F) -> Option<(u64, T)>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> Option<T> + Sync + Send,
{
    let mut start = 0;
    while start < trials {
        let end = (start + TRIAL_CHUNK).min(trials);
        let hit = (start..end)
            .into_par_iter()
            .map_init(&init, |s, t| trial(s, t).map(|v| (t, v)))
            .find_map_first(|x| x);
        if hit.is_some() {
            return hit;
        }
        start = end;
    }
    None
}

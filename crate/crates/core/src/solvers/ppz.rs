//! Simple-PPZ: one pass over the variables in index order, obeying unit clauses first
//! and flipping a fair coin otherwise.
//!
//! Clause states are tracked incrementally (satisfied flag, falsified-literal count and
//! a bitset of unit clauses) so a pass costs one visit per literal occurrence instead of
//! a full clause rescan per step. When several clauses are unit, the first in clause
//! order is obeyed.

use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;

use super::{first_success, SolveOutcome, SolveResult};
use crate::error::{Error, Result};
use crate::formula::{validate_formula, Assignment, Formula, Lit, PartialAssignment};
use crate::stream::{CoinFlips, RandomStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpzOptions {
    /// Stop a pass as soon as some clause is falsified. The final check would fail
    /// anyway, so this changes only the running time.
    pub early_abort: bool,
}

impl Default for PpzOptions {
    fn default() -> Self {
        PpzOptions { early_abort: true }
    }
}

/// Formula-derived tables shared (read-only) by every pass.
#[derive(Debug)]
pub struct PpzPlan<'f> {
    formula: &'f Formula,
    /// `occ[occ_start[v-1]..occ_start[v]]`: `(clause, literal)` occurrences of `v`.
    occ_start: Vec<usize>,
    occ: Vec<(u32, Lit)>,
    widths: Vec<u32>,
    initial_units: Vec<u64>,
    initial_unit_count: usize,
    initially_falsified: bool,
}

/// Mutable per-pass state; one per worker.
#[derive(Clone, Debug)]
pub struct PpzState {
    values: PartialAssignment,
    satisfied: Vec<bool>,
    false_count: Vec<u32>,
    units: Vec<u64>,
    unit_count: usize,
    falsified: bool,
}

impl<'f> PpzPlan<'f> {
    pub fn new(formula: &'f Formula) -> Result<Self> {
        validate_formula(formula)?;
        let n = formula.num_vars();
        let m = formula.num_clauses();
        if u32::try_from(m).is_err() {
            return Err(Error::InvalidParameter("too many clauses".into()));
        }
        let mut degree = vec![0usize; n];
        for c in formula.clauses() {
            for l in c {
                degree[l.index()] += 1;
            }
        }
        let mut occ_start = Vec::with_capacity(n + 1);
        occ_start.push(0);
        for d in &degree {
            occ_start.push(occ_start.last().unwrap() + d);
        }
        let mut fill = occ_start[..n].to_vec();
        let mut occ = vec![(0u32, Lit::positive(1)); *occ_start.last().unwrap()];
        let mut widths = Vec::with_capacity(m);
        let mut initial_units = vec![0u64; m.div_ceil(64)];
        let mut initial_unit_count = 0;
        let mut initially_falsified = false;
        for (ci, c) in formula.clauses().enumerate() {
            widths.push(c.len() as u32);
            match c.len() {
                0 => initially_falsified = true,
                1 => {
                    initial_units[ci / 64] |= 1 << (ci % 64);
                    initial_unit_count += 1;
                }
                _ => {}
            }
            for &l in c {
                occ[fill[l.index()]] = (ci as u32, l);
                fill[l.index()] += 1;
            }
        }
        Ok(PpzPlan {
            formula,
            occ_start,
            occ,
            widths,
            initial_units,
            initial_unit_count,
            initially_falsified,
        })
    }

    pub fn formula(&self) -> &'f Formula {
        self.formula
    }

    pub fn new_state(&self) -> PpzState {
        let m = self.formula.num_clauses();
        PpzState {
            values: PartialAssignment::new(self.formula.num_vars()),
            satisfied: vec![false; m],
            false_count: vec![0; m],
            units: self.initial_units.clone(),
            unit_count: self.initial_unit_count,
            falsified: self.initially_falsified,
        }
    }

    fn reset(&self, s: &mut PpzState) {
        s.values.clear();
        s.satisfied.fill(false);
        s.false_count.fill(0);
        s.units.copy_from_slice(&self.initial_units);
        s.unit_count = self.initial_unit_count;
        s.falsified = self.initially_falsified;
    }

    fn assign(&self, s: &mut PpzState, var: usize, value: bool) {
        s.values.assign(var, value);
        for &(ci, lit) in &self.occ[self.occ_start[var - 1]..self.occ_start[var]] {
            let ci = ci as usize;
            if s.satisfied[ci] {
                continue;
            }
            let (word, bit) = (ci / 64, 1u64 << (ci % 64));
            let was_unit = s.units[word] & bit != 0;
            if lit.satisfied_by(value) {
                s.satisfied[ci] = true;
                if was_unit {
                    s.units[word] &= !bit;
                    s.unit_count -= 1;
                }
                continue;
            }
            s.false_count[ci] += 1;
            let width = self.widths[ci];
            if s.false_count[ci] == width {
                s.falsified = true;
                if was_unit {
                    s.units[word] &= !bit;
                    s.unit_count -= 1;
                }
            } else if s.false_count[ci] + 1 == width {
                s.units[word] |= bit;
                s.unit_count += 1;
            }
        }
    }

    fn first_unit(&self, s: &PpzState) -> Lit {
        let (w, word) = s
            .units
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .expect("unit_count > 0");
        let ci = w * 64 + word.trailing_zeros() as usize;
        *self
            .formula
            .clause(ci)
            .iter()
            .find(|l| !s.values.is_set(l.var()))
            .expect("unit clause has an unset literal")
    }

    /// One Simple-PPZ pass. Coin flips come LSB-first from successive `u64` draws.
    pub fn run<R: RngCore>(
        &self,
        state: &mut PpzState,
        rng: &mut R,
        options: PpzOptions,
    ) -> Option<Assignment> {
        self.reset(state);
        let n = self.formula.num_vars();
        let mut coins = CoinFlips::new(rng);
        let mut i = 1;
        while i <= n {
            if options.early_abort && state.falsified {
                return None;
            }
            if state.unit_count > 0 {
                let lit = self.first_unit(state);
                self.assign(state, lit.var(), lit.is_positive());
            } else {
                if !state.values.is_set(i) {
                    let v = coins.flip();
                    self.assign(state, i, v);
                }
                i += 1;
            }
        }
        if state.falsified {
            None
        } else {
            state.values.to_assignment()
        }
    }
}

/// A single Simple-PPZ pass over `formula`.
pub fn simple_ppz_run<R: RngCore>(formula: &Formula, rng: &mut R) -> Result<Option<Assignment>> {
    let plan = PpzPlan::new(formula)?;
    let mut state = plan.new_state();
    Ok(plan.run(&mut state, rng, PpzOptions::default()))
}

/// Up to `trials` Simple-PPZ passes; trial `t` draws from `stream.derive(t)`. Returns the
/// first success by trial index.
pub fn ppz_repeat(formula: &Formula, trials: u64, stream: &RandomStream) -> Result<SolveOutcome> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let plan = PpzPlan::new(formula)?;
    let hit = first_success(
        trials,
        || plan.new_state(),
        |state, t| plan.run(state, &mut stream.derive(t).rng(), PpzOptions::default()),
    );
    let (result, trials_used) = match hit {
        Some((t, a)) => (SolveResult::Found(a), t + 1),
        None => (SolveResult::NotFound, trials),
    };
    Ok(SolveOutcome {
        result,
        trials_used,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuccessCounts {
    pub trials: u64,
    /// Passes that returned some satisfying assignment.
    pub found: u64,
    /// Passes that returned exactly the target assignment.
    pub found_target: u64,
}

/// Runs all `trials` passes (no early stop) and tallies outcomes; trial `t` uses
/// `stream.derive(t)` exactly as [`ppz_repeat`] does.
pub fn ppz_success_counts(
    plan: &PpzPlan<'_>,
    trials: u64,
    stream: &RandomStream,
    target: Option<&Assignment>,
    options: PpzOptions,
) -> SuccessCounts {
    let (found, found_target) = (0..trials)
        .into_par_iter()
        .map_init(
            || plan.new_state(),
            |state, t| match plan.run(state, &mut stream.derive(t).rng(), options) {
                Some(a) => (1u64, u64::from(target == Some(&a))),
                None => (0, 0),
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SuccessCounts {
        trials,
        found,
        found_target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::eval_formula;
    use std::collections::HashMap;

    #[test]
    fn unit_chain_forces_solution() {
        let f = Formula::from_dimacs(2, None, &[&[1], &[-1, 2]]);
        for seed in 0..200 {
            let a = simple_ppz_run(&f, &mut RandomStream::new(seed, 0).rng())
                .unwrap()
                .unwrap();
            assert_eq!(a, Assignment::from_bools(&[true, true]));
        }
    }

    #[test]
    fn empty_formula_is_pure_coin_flips() {
        let f = Formula::new(2, 2);
        let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
        let runs = 20_000;
        for seed in 0..runs {
            let a = simple_ppz_run(&f, &mut RandomStream::new(seed, 1).rng())
                .unwrap()
                .unwrap();
            *counts.entry(a.to_bools()).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        for c in counts.values() {
            assert!((*c as f64 / runs as f64 - 0.25).abs() < 0.02);
        }
    }

    #[test]
    fn contradiction_never_found() {
        let f = Formula::from_dimacs(1, Some(1), &[&[1], &[-1]]);
        for seed in 0..100 {
            assert_eq!(
                simple_ppz_run(&f, &mut RandomStream::new(seed, 0).rng()).unwrap(),
                None
            );
        }
        let out = ppz_repeat(&f, 50, &RandomStream::new(1, 2)).unwrap();
        assert_eq!(out.result, SolveResult::NotFound);
        assert_eq!(out.trials_used, 50);
    }

    #[test]
    fn rejects_malformed_formula() {
        let f = Formula::from_dimacs(2, Some(2), &[&[1, -1]]);
        assert!(matches!(
            simple_ppz_run(&f, &mut RandomStream::new(0, 0).rng()),
            Err(Error::Formula(_))
        ));
        assert!(ppz_repeat(&Formula::new(2, 2), 0, &RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn single_trial_matches_single_run() {
        let f = Formula::from_dimacs(4, Some(2), &[&[1, 2], &[-2, 3], &[-3, -4], &[1, 4]]);
        for seed in 0..50 {
            let stream = RandomStream::new(seed, 9);
            let single = simple_ppz_run(&f, &mut stream.derive(0).rng()).unwrap();
            let rep = ppz_repeat(&f, 1, &stream).unwrap();
            assert_eq!(rep.result.assignment(), single.as_ref());
            assert_eq!(rep.trials_used, 1);
        }
    }

    #[test]
    fn found_assignments_verify() {
        let f = Formula::from_dimacs(
            5,
            Some(3),
            &[
                &[1, 2, 3],
                &[-1, -2, 4],
                &[2, -4, 5],
                &[-3, -5, 1],
                &[-2, 3, -5],
            ],
        );
        let out = ppz_repeat(&f, 10_000, &RandomStream::new(3, 3)).unwrap();
        let a = out.result.assignment().expect("satisfiable");
        assert!(eval_formula(&f, a).unwrap());
    }
}

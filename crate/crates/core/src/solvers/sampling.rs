use std::time::Instant;

use super::{first_success, SolveOutcome, SolveResult};
use crate::distributions::sample_assignment;
use crate::error::{Error, Result};
use crate::formula::{satisfies_all, Formula};
use crate::stream::RandomStream;

/// Tests up to `trials` i.i.d. uniform assignments; trial `t` draws from
/// `stream.derive(t)`. The first satisfying one by trial index wins.
pub fn uniform_sampling_solver(
    formula: &Formula,
    trials: u64,
    stream: &RandomStream,
) -> Result<SolveOutcome> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let n = formula.num_vars();
    let hit = first_success(
        trials,
        || (),
        |_, t| {
            let a = sample_assignment(n, &mut stream.derive(t).rng());
            satisfies_all(formula, &a).then_some(a)
        },
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_formula_first_sample() {
        let out =
            uniform_sampling_solver(&Formula::new(6, 3), 10, &RandomStream::new(1, 1)).unwrap();
        assert!(out.result.is_found());
        assert_eq!(out.trials_used, 1);
    }

    #[test]
    fn unsatisfiable_exhausts() {
        let f = Formula::from_dimacs(2, Some(1), &[&[2], &[-2]]);
        let out = uniform_sampling_solver(&f, 3000, &RandomStream::new(1, 1)).unwrap();
        assert_eq!(out.result, SolveResult::NotFound);
        assert_eq!(out.trials_used, 3000);
    }
}

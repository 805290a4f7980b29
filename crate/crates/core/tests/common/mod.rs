#![allow(dead_code)]

use ksat_core::distributions::sample_assignment;
use ksat_core::stream::CoinFlips;
use ksat_core::{clause_status, Assignment, ClauseStatus, Formula, Lit, PartialAssignment};
use rand::{Rng, RngCore};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square p-value of `observed` against cell probabilities `probs`.
pub fn chi2_pvalue(observed: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = (observed.len() - 1) as f64;
    ChiSquared::new(df).unwrap().sf(stat)
}

/// Simple-PPZ written directly from its definition: rescan every clause each step.
/// Consumes coins exactly like the library solver.
pub fn reference_ppz<R: RngCore>(f: &Formula, rng: &mut R) -> Option<Assignment> {
    let n = f.num_vars();
    let mut a = PartialAssignment::new(n);
    let mut coins = CoinFlips::new(rng);
    let mut i = 1;
    loop {
        let mut unit = None;
        for c in f.clauses() {
            match clause_status(c, &a) {
                ClauseStatus::Falsified => return None,
                ClauseStatus::Unit(l) if unit.is_none() => unit = Some(l),
                _ => {}
            }
        }
        if let Some(l) = unit {
            a.assign(l.var(), l.is_positive());
            continue;
        }
        if i > n {
            break;
        }
        if !a.is_set(i) {
            a.assign(i, coins.flip());
        }
        i += 1;
    }
    a.to_assignment()
}

/// A formula in which every variable is good for a uniformly drawn `sigma`: variable
/// `i` gets a critical clause over itself and up to two smaller variables, plus `noise`
/// further clauses satisfied by `sigma`.
pub fn chain_formula<R: Rng>(n: usize, noise: usize, rng: &mut R) -> (Formula, Assignment) {
    let sigma = sample_assignment(n, rng);
    let agree = |v: usize| Lit::new(v, sigma.get(v));
    let mut f = Formula::mixed(n);
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    for i in 1..=n {
        let extra = rng.random_range(0..=(i - 1).min(2));
        let mut lits = vec![agree(i)];
        while lits.len() < extra + 1 {
            let v = rng.random_range(1..i);
            if lits.iter().all(|l| l.var() != v) {
                lits.push(agree(v).negate());
            }
        }
        clauses.push(lits);
    }
    for _ in 0..noise {
        let w = rng.random_range(1..=n.min(3));
        let mut lits: Vec<Lit> = Vec::new();
        while lits.len() < w {
            let v = rng.random_range(1..=n);
            if lits.iter().all(|l| l.var() != v) {
                lits.push(Lit::new(v, rng.random()));
            }
        }
        if !lits.iter().any(|&l| sigma.satisfies(l)) {
            lits[0] = lits[0].negate();
        }
        clauses.push(lits);
    }
    // Shuffle so clause order carries no information.
    for j in (1..clauses.len()).rev() {
        clauses.swap(j, rng.random_range(0..=j));
    }
    for c in &clauses {
        f.push(c);
    }
    (f, sigma)
}

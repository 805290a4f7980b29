//! Exact samplers for the random, planted and satisfiable-random k-SAT distributions.
//!
//! Every clause draw consumes its rng in a fixed order: first the `k` variables (a
//! partial Fisher-Yates over `1..=n`, one `random_range` per position), then the signs
//! (one `u64` per attempt; bit `j` set makes the literal on the `j`-th drawn variable
//! positive). Golden-seed tests depend on this order.

use rand::Rng;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, Formula, Lit};
use crate::oracle;
use crate::stream::CoinFlips;

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1000;

/// Largest clause width the samplers accept (one sign word per draw).
pub const MAX_SAMPLED_WIDTH: usize = 64;

/// A formula together with the assignment it was planted on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub formula: Formula,
    pub sigma: Assignment,
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "clause width must be at least 1".into(),
        ));
    }
    if k > n {
        return Err(Error::WidthExceedsVariables { n, k });
    }
    if k > MAX_SAMPLED_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "clause width {k} exceeds sampler limit {MAX_SAMPLED_WIDTH}"
        )));
    }
    Ok(())
}

fn check_sigma(n: usize, sigma: &Assignment) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::AssignmentLength {
            expected: n,
            got: sigma.len(),
        });
    }
    Ok(())
}

/// Draws `k` distinct 1-based variables uniformly without replacement, in draw order.
fn draw_variables<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R, out: &mut Vec<usize>) {
    // Sparse Fisher-Yates: only displaced positions are stored.
    let mut displaced: Vec<(usize, usize)> = Vec::with_capacity(k);
    let lookup = |d: &[(usize, usize)], pos: usize| {
        d.iter()
            .rev()
            .find(|&&(p, _)| p == pos)
            .map_or(pos, |&(_, v)| v)
    };
    out.clear();
    for j in 0..k {
        let r = rng.random_range(j..n);
        let at_r = lookup(&displaced, r);
        if r != j {
            let at_j = lookup(&displaced, j);
            displaced.push((r, at_j));
        }
        out.push(at_r + 1);
    }
}

#[inline]
fn sign_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn build_clause(vars: &[usize], signs: u64, out: &mut Vec<Lit>) {
    out.clear();
    out.extend(
        vars.iter()
            .enumerate()
            .map(|(j, &v)| Lit::new(v, signs >> j & 1 == 1)),
    );
}

fn fill_uniform<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
    vars: &mut Vec<usize>,
    out: &mut Vec<Lit>,
) {
    draw_variables(n, k, rng, vars);
    let signs = rng.next_u64() & sign_mask(k);
    build_clause(vars, signs, out);
}

fn fill_satisfying<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    sigma: &Assignment,
    rng: &mut R,
    vars: &mut Vec<usize>,
    out: &mut Vec<Lit>,
) {
    draw_variables(n, k, rng, vars);
    // The one pattern that disagrees with sigma everywhere is rejected.
    let disagree = vars
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &v)| acc | (u64::from(!sigma.get(v)) << j));
    let signs = loop {
        let s = rng.next_u64() & sign_mask(k);
        if s != disagree {
            break s;
        }
    };
    build_clause(vars, signs, out);
}

/// Uniform over the `C(n,k)·2^k` width-`k` clauses on distinct variables.
pub fn sample_uniform_clause<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Clause> {
    check_shape(n, k)?;
    let (mut vars, mut lits) = (Vec::with_capacity(k), Vec::with_capacity(k));
    fill_uniform(n, k, rng, &mut vars, &mut lits);
    Ok(Clause::new(lits))
}

/// Uniform over the `C(n,k)·(2^k−1)` width-`k` clauses satisfied by `sigma`.
pub fn sample_satisfying_clause<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    sigma: &Assignment,
    rng: &mut R,
) -> Result<Clause> {
    check_shape(n, k)?;
    check_sigma(n, sigma)?;
    let (mut vars, mut lits) = (Vec::with_capacity(k), Vec::with_capacity(k));
    fill_satisfying(n, k, sigma, rng, &mut vars, &mut lits);
    Ok(Clause::new(lits))
}

/// `R(n,k,m)`: `m` i.i.d. uniform clauses in draw order.
pub fn sample_r<R: Rng + ?Sized>(n: usize, k: usize, m: usize, rng: &mut R) -> Result<Formula> {
    check_shape(n, k)?;
    let mut f = Formula::with_capacity(n, k, m);
    let (mut vars, mut lits) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for _ in 0..m {
        fill_uniform(n, k, rng, &mut vars, &mut lits);
        f.push(&lits);
    }
    Ok(f)
}

/// `P(n,k,m,σ)`: `m` i.i.d. clauses, each uniform among those satisfied by `sigma`.
pub fn sample_p_sigma<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    sigma: &Assignment,
    rng: &mut R,
) -> Result<Formula> {
    check_shape(n, k)?;
    check_sigma(n, sigma)?;
    let mut f = Formula::with_capacity(n, k, m);
    let (mut vars, mut lits) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for _ in 0..m {
        fill_satisfying(n, k, sigma, rng, &mut vars, &mut lits);
        f.push(&lits);
    }
    Ok(f)
}

/// Uniform assignment on `n` variables, drawn LSB-first from `u64` words.
pub fn sample_assignment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Assignment {
    let mut coins = CoinFlips::new(rng);
    let mut a = Assignment::all_false(n);
    for v in 1..=n {
        a.set(v, coins.flip());
    }
    a
}

/// `P(n,k,m)`: a uniform `σ`, then a formula from `P(n,k,m,σ)`.
pub fn sample_p<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
) -> Result<PlantedInstance> {
    check_shape(n, k)?;
    let sigma = sample_assignment(n, rng);
    let formula = sample_p_sigma(n, k, m, &sigma, rng)?;
    Ok(PlantedInstance { formula, sigma })
}

/// `R⁺(n,k,m)` by rejection: draws from `R(n,k,m)` until `is_satisfiable` accepts.
///
/// Fails with [`Error::AttemptsExhausted`] after `max_attempts` unsatisfiable draws,
/// which is expected deep above the satisfiability threshold.
pub fn sample_r_plus<R, O>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
    mut is_satisfiable: O,
    max_attempts: u64,
) -> Result<Formula>
where
    R: Rng + ?Sized,
    O: FnMut(&Formula) -> Result<bool>,
{
    if max_attempts == 0 {
        return Err(Error::InvalidParameter(
            "max_attempts must be at least 1".into(),
        ));
    }
    for _ in 0..max_attempts {
        let f = sample_r(n, k, m, rng)?;
        if is_satisfiable(&f)? {
            return Ok(f);
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: max_attempts,
    })
}

/// [`sample_r_plus`] with the exhaustive oracle (`n ≤ 30`).
pub fn sample_r_plus_exhaustive<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Formula> {
    sample_r_plus(n, k, m, rng, oracle::is_satisfiable, max_attempts)
}

/// `R⁺(n,k,m)` by reweighting planted draws.
///
/// A planted draw `F` appears with probability proportional to its solution count `Z(F)`;
/// accepting it with probability `1/Z(F)` leaves every satisfiable formula equally likely,
/// which is exactly `R⁺`. The acceptance rate is `1/E[Z | sat]`, so this stays cheap above
/// the threshold where plain rejection from `R` almost never sees a satisfiable draw.
/// Requires an exact model count, hence `n ≤ 30`.
pub fn sample_r_plus_via_planted<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Formula> {
    if max_attempts == 0 {
        return Err(Error::InvalidParameter(
            "max_attempts must be at least 1".into(),
        ));
    }
    for _ in 0..max_attempts {
        let planted = sample_p(n, k, m, rng)?;
        let z = oracle::count_solutions(&planted.formula)?.solutions;
        debug_assert!(z >= 1);
        if rng.random_range(0..z) == 0 {
            return Ok(planted.formula);
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: max_attempts,
    })
}

/// Exact `R⁺` for desk-sized `n`: plain rejection first, then planted reweighting if
/// `max_attempts` rejection draws were all unsatisfiable.
pub fn sample_r_plus_with_fallback<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Formula> {
    match sample_r_plus_exhaustive(n, k, m, rng, max_attempts) {
        Err(Error::AttemptsExhausted { .. }) => {
            sample_r_plus_via_planted(n, k, m, rng, max_attempts)
        }
        other => other,
    }
}

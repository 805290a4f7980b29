//! Good and critical variables, plus the closed-form quantities that predict them.
//!
//! Count-like quantities are returned in log2; probabilities are linear.

mod entropy;

pub use entropy::{
    binary_entropy, expected_planted_solutions_log2, ez_upper_bound_log2, f_critical_points, f_p,
    f_p_prime, CriticalPoints, EzBound, GRID_POINTS,
};

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Lit};

/// The variable `clause` is critical for under `sigma`: the sole variable whose literal
/// `sigma` satisfies. `None` when zero or several literals are satisfied.
pub fn critical_variable(clause: &[Lit], sigma: &Assignment) -> Option<usize> {
    let mut found = None;
    for &lit in clause {
        if sigma.satisfies(lit) {
            if found.is_some() {
                return None;
            }
            found = Some(lit.var());
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodVariableReport {
    /// `witness[v - 1]` is the first clause (in formula order) making `v` good.
    witness: Vec<Option<usize>>,
    count: usize,
}

impl GoodVariableReport {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn num_vars(&self) -> usize {
        self.witness.len()
    }

    pub fn fraction(&self) -> f64 {
        if self.witness.is_empty() {
            0.0
        } else {
            self.count as f64 / self.witness.len() as f64
        }
    }

    pub fn is_good(&self, var: usize) -> bool {
        self.witness[var - 1].is_some()
    }

    pub fn witness(&self, var: usize) -> Option<usize> {
        self.witness[var - 1]
    }

    /// Good variables in increasing index order.
    pub fn good_set(&self) -> Vec<usize> {
        self.witnesses().map(|(v, _)| v).collect()
    }

    /// `(variable, witness clause index)` pairs in increasing variable order.
    pub fn witnesses(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.witness
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.map(|c| (i + 1, c)))
    }
}

/// `x_i` is good iff some clause is critical for `x_i` under `sigma` and `i` is the
/// largest variable index in that clause.
pub fn good_variables(formula: &Formula, sigma: &Assignment) -> GoodVariableReport {
    let mut witness = vec![None; formula.num_vars()];
    let mut count = 0;
    for (ci, clause) in formula.clauses().enumerate() {
        let Some(&last) = clause.last() else {
            continue;
        };
        // literals are sorted, so the largest index sits last
        if critical_variable(clause, sigma) == Some(last.var()) {
            let slot = &mut witness[last.index()];
            if slot.is_none() {
                *slot = Some(ci);
                count += 1;
            }
        }
    }
    GoodVariableReport { witness, count }
}

/// `log2 E[#solutions]` for `R(n,k,m)`: `n + m·log2(1 − 2^{-k})`.
pub fn expected_solutions_log2(n: usize, k: usize, m: usize) -> f64 {
    let miss = (-(0.5f64).powi(k as i32)).ln_1p() / LN_2;
    n as f64 + m as f64 * miss
}

#[inline]
fn pow_one_minus(p: f64, e: f64) -> f64 {
    (e * (-p).ln_1p()).exp()
}

/// The planted-count bound's per-clause miss probability `(1 − (1 − i/n)^k)/(2^k − 1)`
/// for an assignment at Hamming distance `i` from `σ`.
///
/// This treats the clause's variables as drawn with replacement. Without replacement
/// the probability is [`clause_miss_prob_exact`], which is never smaller, so bounds
/// built from this value stay valid upper bounds.
///
/// # Panics
/// If `i > n` or `n == 0`.
pub fn clause_miss_prob(i: usize, n: usize, k: usize) -> f64 {
    assert!(n > 0 && i <= n, "need 0 <= i <= n");
    let frac = i as f64 / n as f64;
    (1.0 - pow_one_minus(frac, k as f64)) / ((2f64).powi(k as i32) - 1.0)
}

/// Exact probability that a uniform `σ`-satisfying width-`k` clause is falsified by an
/// assignment at Hamming distance `i` from `σ`: `(1 − C(n−i,k)/C(n,k))/(2^k − 1)`.
///
/// # Panics
/// If `i > n` or `k > n`.
pub fn clause_miss_prob_exact(i: usize, n: usize, k: usize) -> f64 {
    assert!(k <= n && i <= n, "need 0 <= i <= n and k <= n");
    // C(n−i,k)/C(n,k) = Π_{j<k} (n−i−j)/(n−j)
    let untouched = (0..k).fold(1.0, |acc, j| {
        if n - i < j + 1 {
            0.0
        } else {
            acc * (n - i - j) as f64 / (n - j) as f64
        }
    });
    (1.0 - untouched) / ((2f64).powi(k as i32) - 1.0)
}

/// Probability that a uniform `σ`-satisfying clause is critical for `x_i` with `i` its
/// largest index: `C(i−1, k−1) / (C(n,k)·(2^k − 1))`.
pub fn prob_clause_makes_good(i: usize, n: usize, k: usize) -> Result<f64> {
    if k == 0 || i < k || i > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= i <= n, got i={i} n={n} k={k}"
        )));
    }
    // C(i-1,k-1)/C(n,k) = (k/n)·Π_{j=1}^{k-1} (i-j)/(n-j)
    let ratio = (1..k).fold(k as f64 / n as f64, |acc, j| {
        acc * (i - j) as f64 / (n - j) as f64
    });
    Ok(ratio / ((2f64).powi(k as i32) - 1.0))
}

/// Exact `E[#good variables]` under `P(n,k,m,σ)`: `Σ_i 1 − (1 − q_i)^m` with
/// `q_i = prob_clause_makes_good(i,n,k)`. The events "clause makes `x_i` good" are
/// disjoint across `i`, so each variable's chance of staying bad is `(1 − q_i)^m`.
pub fn expected_good_count(n: usize, k: usize, m: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::WidthExceedsVariables { n, k });
    }
    let terms = (k..=n).map(|i| {
        let q = prob_clause_makes_good(i, n, k).expect("k <= i <= n");
        -((m as f64) * (-q).ln_1p()).exp_m1()
    });
    Ok(kahan_sum(terms))
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Default threshold-density estimate `2^k ln 2 − 1`.
pub fn default_alpha_sat(k: usize) -> f64 {
    (2f64).powi(k as i32) * LN_2 - 1.0
}

/// Density parameterisations of an `(n, k, m)` instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub alpha_sat_est: f64,
    /// `2^k ln 2 − k`
    pub alpha_d: f64,
    /// `(ln(m/n) − k ln 2)/k`, only defined once `m ≥ n·2^k`.
    pub z: Option<f64>,
    /// `z + ln k / k`
    pub z_prime: Option<f64>,
    /// `(m/n)^{1/k}`
    pub t: f64,
}

impl RegimeParams {
    pub fn density(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

pub fn regime_params(n: usize, k: usize, m: usize) -> RegimeParams {
    regime_params_with(n, k, m, default_alpha_sat(k))
}

pub fn regime_params_with(n: usize, k: usize, m: usize, alpha_sat_est: f64) -> RegimeParams {
    let kf = k as f64;
    let density = m as f64 / n as f64;
    let pow2k = (2f64).powi(k as i32);
    let z = (density >= pow2k).then(|| (density.ln() - kf * LN_2) / kf);
    RegimeParams {
        n,
        k,
        m,
        alpha_sat_est,
        alpha_d: pow2k * LN_2 - kf,
        z,
        z_prime: z.map(|z| z + kf.ln() / kf),
        t: density.powf(1.0 / kf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sigma(bits: &[u8]) -> Assignment {
        Assignment::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn critical_examples() {
        let c = Formula::from_dimacs(2, Some(2), &[&[1, 2]]);
        assert_eq!(critical_variable(c.clause(0), &sigma(&[1, 0])), Some(1));
        assert_eq!(critical_variable(c.clause(0), &sigma(&[1, 1])), None);
        assert_eq!(critical_variable(c.clause(0), &sigma(&[0, 0])), None);
    }

    #[test]
    fn good_examples() {
        let f = Formula::from_dimacs(2, None, &[&[1], &[-1, 2]]);
        let r = good_variables(&f, &sigma(&[1, 1]));
        assert_eq!(r.good_set(), vec![1, 2]);
        assert_eq!(r.witness(1), Some(0));
        assert_eq!(r.witness(2), Some(1));
        assert_eq!(r.count(), 2);

        let g = Formula::from_dimacs(2, Some(2), &[&[1, 2]]);
        let r = good_variables(&g, &sigma(&[1, 0]));
        assert!(r.good_set().is_empty());
        assert_eq!(r.fraction(), 0.0);
    }

    #[test]
    fn expected_solutions_examples() {
        assert_relative_eq!(expected_solutions_log2(2, 1, 1), 1.0, epsilon = 1e-12);
        assert_relative_eq!(expected_solutions_log2(9, 4, 0), 9.0);
        let e = expected_solutions_log2(12, 3, 30);
        assert_relative_eq!(e, 12.0 + 30.0 * (7.0f64 / 8.0).log2(), epsilon = 1e-12);
        assert_relative_eq!(e.exp2(), 74.6, max_relative = 1e-3);
    }

    #[test]
    fn miss_prob_examples() {
        assert_relative_eq!(clause_miss_prob(7, 7, 3), 1.0 / 7.0, epsilon = 1e-15);
        assert_eq!(clause_miss_prob(0, 7, 3), 0.0);
        assert_relative_eq!(clause_miss_prob(3, 6, 2), 0.25, epsilon = 1e-15);
        // Without replacement: 1 − C(3,2)/C(6,2) = 4/5 of patterns, over 3.
        assert_relative_eq!(clause_miss_prob_exact(3, 6, 2), 4.0 / 15.0, epsilon = 1e-15);
        assert_relative_eq!(clause_miss_prob_exact(6, 6, 2), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(clause_miss_prob_exact(0, 6, 2), 0.0);
        for i in 0..=9 {
            assert!(clause_miss_prob_exact(i, 9, 3) >= clause_miss_prob(i, 9, 3) - 1e-15);
        }
    }

    #[test]
    fn makes_good_examples() {
        assert_relative_eq!(
            prob_clause_makes_good(3, 3, 2).unwrap(),
            2.0 / 9.0,
            epsilon = 1e-15
        );
        for (n, k) in [(3, 3), (5, 5), (8, 8)] {
            let expected = k as f64 / (n as f64 * ((1u64 << k) - 1) as f64);
            assert_relative_eq!(
                prob_clause_makes_good(n, n, k).unwrap(),
                expected,
                epsilon = 1e-15
            );
        }
        assert!(prob_clause_makes_good(2, 5, 3).is_err());
    }

    #[test]
    fn regime_examples() {
        let r = regime_params(100, 4, 1600);
        assert_relative_eq!(r.z.unwrap(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.z_prime.unwrap(), 4f64.ln() / 4.0, epsilon = 1e-12);
        assert_relative_eq!(r.t, 2.0, epsilon = 1e-12);

        let r = regime_params(1, 5, 4usize.pow(5));
        assert_relative_eq!(r.t, 4.0, epsilon = 1e-12);

        let k = 5usize;
        let n = 1000usize;
        let m = (n as f64 * 32.0 * (0.1 * k as f64).exp()).round() as usize;
        assert_relative_eq!(regime_params(n, k, m).z.unwrap(), 0.1, epsilon = 1e-4);

        let below = regime_params(100, 3, 400);
        assert!(below.z.is_none() && below.z_prime.is_none());
        assert_relative_eq!(below.alpha_d, 8.0 * LN_2 - 3.0);
        assert_relative_eq!(below.alpha_sat_est, 8.0 * LN_2 - 1.0);
    }

    #[test]
    fn expected_good_count_small_case() {
        // n=k=1, m=1: the lone unit clause always makes x1 good.
        assert_relative_eq!(expected_good_count(1, 1, 1).unwrap(), 1.0, epsilon = 1e-15);
        // n=3,k=2,m=1: q_2 = 1/9, q_3 = 2/9
        assert_relative_eq!(
            expected_good_count(3, 2, 1).unwrap(),
            3.0 / 9.0,
            epsilon = 1e-15
        );
    }
}

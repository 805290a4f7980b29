use std::f64::consts::LN_2;

use super::{clause_miss_prob_exact, default_alpha_sat};
use crate::error::{Error, Result};

/// Points in the log-spaced bracketing grid for `f'`.
pub const GRID_POINTS: usize = 10_000;
// 10^{-2k} underflows past k ≈ 150; the smallest root is ~2^{-k}, far above this.
const GRID_FLOOR: f64 = 1e-300;

/// `H(p) = −p log2 p − (1−p) log2(1−p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

#[inline]
fn one_minus_pow(p: f64, e: f64) -> f64 {
    (e * (-p).ln_1p()).exp()
}

/// `f(p) = H(p) − 1 + (1 − p)^k`.
pub fn f_p(p: f64, k: usize) -> f64 {
    binary_entropy(p) - 1.0 + one_minus_pow(p, k as f64)
}

/// `f'(p) = log2((1−p)/p) − k(1−p)^{k−1}` for `0 < p < 1`.
pub fn f_p_prime(p: f64, k: usize) -> f64 {
    assert!(p > 0.0 && p < 1.0, "f' needs 0 < p < 1");
    ((1.0 - p) / p).log2() - k as f64 * one_minus_pow(p, k as f64 - 1.0)
}

/// `f'(1/2 − δ)`, evaluated without forming `1/2 − δ` (which rounds to `1/2` once `δ`
/// drops below `2^{-54}`, as the top root does for large `k`).
fn f_p_prime_near_half(delta: f64, k: usize) -> f64 {
    2.0 * (2.0 * delta).atanh() / LN_2 - k as f64 * ((k as f64 - 1.0) * (0.5 + delta).ln()).exp()
}

/// `f(1/2 − δ)`, likewise.
fn f_p_near_half(delta: f64, k: usize) -> f64 {
    let h_minus_one =
        -((0.5 - delta) * (-2.0 * delta).ln_1p() + (0.5 + delta) * (2.0 * delta).ln_1p()) / LN_2;
    h_minus_one + (k as f64 * (0.5 + delta).ln()).exp()
}

/// Log-spaced points from `max(10^{-2k}, 1e-300)` up to `hi`.
fn log_grid(k: usize, hi: f64) -> Vec<f64> {
    let lo = (10f64.powi(-2 * k as i32)).max(GRID_FLOOR).ln();
    let hi = hi.ln();
    (0..GRID_POINTS)
        .map(|i| (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect()
}

/// Bisects a sign change of `g` on `[a, b]` down to adjacent floats.
fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    loop {
        let mid = a + (b - a) / 2.0;
        if mid <= a || mid >= b {
            return mid;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
}

fn sign_changes(grid: &[f64], g: impl Fn(f64) -> f64 + Copy) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev = (grid[0], g(grid[0]));
    for &x in &grid[1..] {
        let v = g(x);
        if v == 0.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && (v > 0.0) != (prev.1 > 0.0) {
            roots.push(bisect(g, prev.0, x));
        }
        prev = (x, v);
    }
    roots
}

/// Roots of `f'` in `(0, 1/2)` as `(p, 1/2 − p)` pairs, increasing in `p`.
///
/// `(0, 1/4]` is scanned in `p` and `(0, 1/4)` in `δ = 1/2 − p`, both on log grids, so
/// roots hugging either end are bracketed. `f' < 0` on `[1/2, 1)`.
fn derivative_roots(k: usize) -> Vec<(f64, f64)> {
    let low = sign_changes(&log_grid(k, 0.25), |p| f_p_prime(p, k));
    let mut high: Vec<f64> = sign_changes(&log_grid(k, 0.25), |d| f_p_prime_near_half(d, k))
        .into_iter()
        .filter(|&d| d < 0.25)
        .collect();
    high.reverse();
    low.into_iter()
        .map(|p| (p, 0.5 - p))
        .chain(high.into_iter().map(|d| (0.5 - d, d)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoints {
    /// Increasing roots of `f'` in `(0, 1/2)`, rounded to `f64`.
    pub roots: [f64; 3],
    /// `1/2 − root`, exact to relative precision even where the root rounds to `1/2`.
    pub gaps: [f64; 3],
    /// `f` at each root.
    pub values: [f64; 3],
}

/// The three critical points of `f` for large `k`: near `2^{-k}`, near `log k / k` and
/// just below `1/2`.
pub fn f_critical_points(k: usize) -> Result<CriticalPoints> {
    let found = derivative_roots(k);
    let pairs: [(f64, f64); 3] = found
        .as_slice()
        .try_into()
        .map_err(|_| Error::RootsNotFound { found: found.len() })?;
    Ok(CriticalPoints {
        roots: pairs.map(|(p, _)| p),
        gaps: pairs.map(|(_, d)| d),
        values: pairs.map(|(p, d)| {
            if p <= 0.25 {
                f_p(p, k)
            } else {
                f_p_near_half(d, k)
            }
        }),
    })
}

/// Finite-parameter evaluation of the planted solution-count bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EzBound {
    /// Upper bound on `log2 E[Z]` for `P(n,k,m)` (and hence `R⁺(n,k,m)`).
    pub log2_bound: f64,
    /// `max_p n·f(p)` over the candidate points.
    pub max_exponent: f64,
    pub argmax: f64,
    /// `log2(n+1)` for sum-to-max plus the density slack term.
    pub correction_log2: f64,
    pub grid_points: usize,
}

/// Upper bound on `log2 E[Z]` for planted formulas above the threshold.
///
/// Follows the chain `E[Z] = Σ_i C(n,i)(1−q_i)^m ≤ Σ_i C(n,i)e^{−m q_i}`, splits
/// `e^{−m q_i}` into `2^{−n(1−(1−i/n)^k)}` times a slack factor at most
/// `2^{max(0,(2^k−1)n ln2 − m)/((2^k−1) ln 2)}`, bounds `C(n,i) ≤ 2^{nH(i/n)}`, and
/// replaces the sum of `n+1` terms by `(n+1)` times the maximum of `2^{n f(p)}`. The
/// maximum is taken over the bracketing grid, the roots of `f'`, the endpoints and every
/// `i/n`, so the result is a valid bound even when fewer than three roots exist.
pub fn ez_upper_bound_log2(n: usize, k: usize, m: usize) -> Result<EzBound> {
    ez_upper_bound_log2_with(n, k, m, default_alpha_sat(k))
}

pub fn ez_upper_bound_log2_with(
    n: usize,
    k: usize,
    m: usize,
    alpha_sat_est: f64,
) -> Result<EzBound> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and k >= 1".into()));
    }
    let floor = (alpha_sat_est - 1.0) * n as f64;
    if (m as f64) < floor {
        return Err(Error::InvalidParameter(format!(
            "bound needs m >= (alpha_sat - 1)·n = {floor:.2}, got m = {m}"
        )));
    }
    let grid = log_grid(k, 0.5);
    let candidates = grid
        .iter()
        .copied()
        .chain(derivative_roots(k).into_iter().map(|(p, _)| p))
        .chain([0.0, 1.0])
        .chain((0..=n).map(|i| i as f64 / n as f64));
    let (argmax, max_f) =
        candidates
            .map(|p| (p, f_p(p, k)))
            .fold((0.0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
    let clause_scale = (2f64).powi(k as i32) - 1.0;
    let slack = (clause_scale * LN_2 * n as f64 - m as f64).max(0.0) / (clause_scale * LN_2);
    let correction_log2 = ((n + 1) as f64).log2() + slack;
    let max_exponent = n as f64 * max_f;
    Ok(EzBound {
        log2_bound: max_exponent + correction_log2,
        max_exponent,
        argmax,
        correction_log2,
        grid_points: grid.len(),
    })
}

/// Exact `log2 E[Z]` under `P(n,k,m)`: `log2 Σ_{i=0}^n C(n,i)(1 − q_i)^m` with `q_i`
/// from [`clause_miss_prob_exact`](super::clause_miss_prob_exact).
pub fn expected_planted_solutions_log2(n: usize, k: usize, m: usize) -> f64 {
    // log-sum-exp over terms in natural log
    let ln_binom = |i: usize| ln_gamma(n + 1) - ln_gamma(i + 1) - ln_gamma(n - i + 1);
    let terms: Vec<f64> = (0..=n)
        .map(|i| ln_binom(i) + m as f64 * (-clause_miss_prob_exact(i, n, k)).ln_1p())
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = super::kahan_sum(terms.iter().map(|t| (t - top).exp()));
    (top + sum.ln()) / LN_2
}

fn ln_gamma(x: usize) -> f64 {
    // ln((x-1)!) by direct summation; n stays small wherever this is used.
    (2..x).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        // 2 - (3/4)·log2 3
        assert_relative_eq!(
            binary_entropy(0.25),
            0.811_278_124_459_132_8,
            epsilon = 1e-15
        );
    }

    #[test]
    fn f_endpoints() {
        for k in [3, 10, 40] {
            assert_relative_eq!(f_p(0.5, k), 0.5f64.powi(k as i32), epsilon = 1e-15);
            assert_eq!(f_p(0.0, k), 0.0);
        }
    }

    #[test]
    fn small_k_lacks_three_roots() {
        assert!(matches!(
            f_critical_points(3),
            Err(Error::RootsNotFound { .. })
        ));
    }

    #[test]
    fn k100_roots_in_bands() {
        let cp = f_critical_points(100).unwrap();
        let [r1, r2, r3] = cp.roots;
        assert!(r1 > 2f64.powi(-110) && r1 < 2f64.powi(-90), "r1 = {r1:e}");
        assert!(r2 > 0.01 && r2 < 0.2, "r2 = {r2}");
        assert!(r3 > 0.4 && r3 <= 0.5, "r3 = {r3}");
        // The top root sits ~1e-28 below 1/2, below f64 resolution there.
        assert!(
            cp.gaps[2] > 0.0 && cp.gaps[2] < 0.1,
            "gap = {:e}",
            cp.gaps[2]
        );
        let worst = cp.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 100.0 * 2f64.powi(-100));
    }

    #[test]
    fn exact_planted_expectation_small() {
        // n=1, k=1, m=1: σ always satisfies; the complement never does.
        assert_relative_eq!(
            expected_planted_solutions_log2(1, 1, 1),
            0.0,
            epsilon = 1e-12
        );
        // m = 0: every assignment counts.
        assert_relative_eq!(
            expected_planted_solutions_log2(6, 3, 0),
            6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn bound_dominates_exact_expectation() {
        for (n, k, m) in [(12, 3, 120), (20, 3, 80), (30, 4, 400), (16, 5, 600)] {
            let b = ez_upper_bound_log2(n, k, m).unwrap();
            assert!(b.log2_bound >= 0.0);
            assert!(b.log2_bound >= expected_planted_solutions_log2(n, k, m));
        }
    }

    #[test]
    fn bound_rejects_sparse_formulas() {
        assert!(ez_upper_bound_log2(12, 3, 10).is_err());
    }
}

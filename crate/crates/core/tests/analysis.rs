use ksat_core::analysis::{
    clause_miss_prob_exact, expected_good_count, expected_planted_solutions_log2,
    expected_solutions_log2, f_critical_points, f_p, f_p_prime, good_variables,
    prob_clause_makes_good,
};
use ksat_core::distributions::{sample_p, sample_r, sample_satisfying_clause};
use ksat_core::oracle::{all_clauses, count_solutions, enumerate_all_formulas, exact_planted_prob};
use ksat_core::{Assignment, Clause, Formula, RandomStream};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Good variables straight from the definition: for each variable, scan every clause.
fn brute_good(f: &Formula, sigma: &Assignment) -> Vec<usize> {
    (1..=f.num_vars())
        .filter(|&v| {
            f.clauses().any(|c| {
                let sat: Vec<_> = c.iter().filter(|&&l| sigma.satisfies(l)).collect();
                sat.len() == 1 && sat[0].var() == v && c.iter().all(|l| l.var() <= v)
            })
        })
        .collect()
}

#[test]
fn good_variables_match_definition() {
    let mut rng = RandomStream::new(30, 0).rng();
    for (n, k, m) in [
        (5, 2, 8),
        (12, 3, 40),
        (20, 3, 90),
        (30, 4, 300),
        (30, 5, 200),
    ] {
        for _ in 0..20 {
            let inst = sample_p(n, k, m, &mut rng).unwrap();
            let report = good_variables(&inst.formula, &inst.sigma);
            assert_eq!(report.good_set(), brute_good(&inst.formula, &inst.sigma));
            // Arbitrary sigma on an unplanted formula too.
            let f = sample_r(n, k, m, &mut rng).unwrap();
            assert_eq!(
                good_variables(&f, &inst.sigma).good_set(),
                brute_good(&f, &inst.sigma)
            );
        }
    }
}

fn satisfying_clauses(n: usize, k: usize, sigma: &Assignment) -> Vec<Clause> {
    all_clauses(n, k)
        .into_iter()
        .filter(|c| c.iter().any(|&l| sigma.satisfies(l)))
        .collect()
}

fn critical_with_max(c: &Clause, sigma: &Assignment) -> Option<usize> {
    let sat: Vec<_> = c.iter().filter(|&&l| sigma.satisfies(l)).collect();
    let top = c.iter().map(|l| l.var()).max().unwrap();
    (sat.len() == 1 && sat[0].var() == top).then_some(top)
}

#[test]
fn makes_good_probabilities_by_enumeration() {
    let (n, k) = (6, 3);
    let sigma = Assignment::from_bools(&[true, false, false, true, true, false]);
    let allowed = satisfying_clauses(n, k, &sigma);
    assert_eq!(allowed.len(), 20 * 7);
    let mut total = 0.0;
    for i in k..=n {
        let hits = allowed
            .iter()
            .filter(|c| critical_with_max(c, &sigma) == Some(i))
            .count();
        let p = prob_clause_makes_good(i, n, k).unwrap();
        assert!(
            (p - hits as f64 / allowed.len() as f64).abs() < 1e-15,
            "i = {i}"
        );
        total += p;
    }
    let critical = allowed
        .iter()
        .filter(|c| critical_with_max(c, &sigma).is_some())
        .count();
    assert!((total - critical as f64 / allowed.len() as f64).abs() < 1e-15);
    // One of the 2^k − 1 sign patterns per variable set.
    assert!((total - 1.0 / 7.0).abs() < 1e-15);
}

#[test]
fn makes_good_probability_monte_carlo() {
    let (n, k, i) = (6, 3, 6);
    let sigma = Assignment::from_bools(&[true, true, false, false, true, false]);
    let mut rng = RandomStream::new(31, 0).rng();
    let draws = 1_000_000;
    let hits = (0..draws)
        .filter(|_| {
            let c = sample_satisfying_clause(n, k, &sigma, &mut rng).unwrap();
            critical_with_max(&c, &sigma) == Some(i)
        })
        .count();
    let p = prob_clause_makes_good(i, n, k).unwrap();
    let sd = (p * (1.0 - p) / draws as f64).sqrt();
    assert!((hits as f64 / draws as f64 - p).abs() < 3.0 * sd);
}

#[test]
fn miss_probability_by_enumeration() {
    for (n, k) in [(6, 2), (7, 3), (5, 5)] {
        let sigma = Assignment::all_false(n);
        let allowed = satisfying_clauses(n, k, &sigma);
        for i in 0..=n {
            let mut x = sigma.clone();
            for v in 1..=i {
                x.set(v, true);
            }
            let miss = allowed
                .iter()
                .filter(|c| !c.iter().any(|&l| x.satisfies(l)))
                .count();
            let want = miss as f64 / allowed.len() as f64;
            assert!(
                (clause_miss_prob_exact(i, n, k) - want).abs() < 1e-15,
                "n={n} k={k} i={i}"
            );
        }
    }
}

#[test]
fn expected_good_count_by_enumeration() {
    for (n, k, m) in [(3, 2, 2), (4, 2, 2), (4, 3, 3)] {
        let sigma = Assignment::from_bools(&vec![true; n]);
        let allowed = satisfying_clauses(n, k, &sigma);
        let mut total = 0usize;
        let mut count = 0usize;
        let mut digits = vec![0usize; m];
        loop {
            let f = Formula::from_clauses(n, k, digits.iter().map(|&d| &allowed[d]));
            total += good_variables(&f, &sigma).count();
            count += 1;
            let mut j = 0;
            while j < m {
                digits[j] += 1;
                if digits[j] < allowed.len() {
                    break;
                }
                digits[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
        let exact = total as f64 / count as f64;
        let formula = expected_good_count(n, k, m).unwrap();
        assert!(
            (formula - exact).abs() < 1e-12,
            "({n},{k},{m}): {formula} vs {exact}"
        );
    }
}

#[test]
fn expected_random_count_by_enumeration() {
    let (n, k, m) = (3, 2, 2);
    let mut sum = BigRational::zero();
    let mut formulas = 0u64;
    for (f, mult) in enumerate_all_formulas(n, k, m).unwrap() {
        sum +=
            BigRational::from_integer(BigInt::from(count_solutions(&f).unwrap().solutions * mult));
        formulas += mult;
    }
    let avg = sum / BigRational::from_integer(BigInt::from(formulas));
    assert_eq!(avg, BigRational::new(BigInt::from(9), BigInt::from(2)));
    assert!((expected_solutions_log2(n, k, m).exp2() - 4.5).abs() < 1e-12);
}

#[test]
fn expected_planted_count_by_enumeration() {
    for (n, k, m) in [(3, 2, 2), (3, 1, 3), (4, 2, 2)] {
        let mut sum = BigRational::zero();
        for (f, _) in enumerate_all_formulas(n, k, m).unwrap() {
            let p = exact_planted_prob(&f).unwrap();
            sum +=
                p * BigRational::from_integer(BigInt::from(count_solutions(&f).unwrap().solutions));
        }
        let exact = sum.to_f64().unwrap().log2();
        let formula = expected_planted_solutions_log2(n, k, m);
        assert!(
            (formula - exact).abs() < 1e-12,
            "({n},{k},{m}): {formula} vs {exact}"
        );
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for k in [3, 5, 10, 20, 50, 100] {
        for j in 1..200 {
            let p = j as f64 / 200.0;
            let h = 1e-6 * p.min(1.0 - p);
            let fd = (f_p(p + h, k) - f_p(p - h, k)) / (2.0 * h);
            let exact = f_p_prime(p, k);
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "k={k} p={p}: {fd} vs {exact}"
            );
        }
    }
}

#[test]
fn middle_root_decreases_with_k() {
    let mut prev = f64::INFINITY;
    for k in 30..=200 {
        let cp = f_critical_points(k).unwrap();
        assert!(cp.roots[0] < cp.roots[1] && cp.roots[1] <= cp.roots[2]);
        assert!(cp.roots[1] < prev, "k = {k}");
        prev = cp.roots[1];
    }
}

#[test]
fn three_roots_from_k_twenty() {
    for k in [20, 25, 64, 150, 300] {
        let cp = f_critical_points(k).unwrap();
        let worst = cp.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 100.0 * (-(k as f64)).exp2(), "k = {k}: {worst:e}");
    }
}

//! Exhaustive ground truth for small instances: SAT decision, model counting, full
//! formula enumeration and exact planted probabilities.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, Formula, FormulaViolation, Lit, ViolationKind};

/// Hard cap on variables for exhaustive scans.
pub const MAX_ORACLE_VARS: usize = 30;
/// Cap on variables for exact planted probabilities.
pub const MAX_EXACT_VARS: usize = 20;
/// Cap on the number of ordered clause tuples [`enumerate_all_formulas`] will produce.
pub const MAX_ENUMERATED_FORMULAS: u64 = 10_000_000;

const PARALLEL_CHUNK_BITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatAnswer {
    Satisfiable(Assignment),
    Unsatisfiable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCount {
    pub solutions: u64,
    pub n_enumerated: u64,
}

/// Clauses as bit masks over an assignment word: a clause is satisfied by `x` iff
/// `x & pos | !x & neg != 0`.
struct MaskedFormula {
    n: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl MaskedFormula {
    fn compile(formula: &Formula, cap: usize) -> Result<MaskedFormula> {
        let n = formula.num_vars();
        if n > cap {
            return Err(Error::cap("exhaustive enumeration", n as f64, cap as f64));
        }
        let mut pos = Vec::with_capacity(formula.num_clauses());
        let mut neg = Vec::with_capacity(formula.num_clauses());
        for (i, c) in formula.clauses().enumerate() {
            let (mut p, mut q) = (0u64, 0u64);
            for lit in c {
                if lit.var() > n {
                    return Err(FormulaViolation {
                        clause: i,
                        kind: ViolationKind::VariableOutOfRange { var: lit.var() },
                    }
                    .into());
                }
                if lit.is_positive() {
                    p |= 1 << lit.index();
                } else {
                    q |= 1 << lit.index();
                }
            }
            pos.push(p);
            neg.push(q);
        }
        Ok(MaskedFormula { n, pos, neg })
    }

    #[inline]
    fn satisfied_by(&self, x: u64) -> bool {
        let nx = !x;
        self.pos
            .iter()
            .zip(&self.neg)
            .all(|(&p, &q)| (x & p) | (nx & q) != 0)
    }

    fn count_range(&self, lo: u64, hi: u64) -> u64 {
        (lo..hi).filter(|&x| self.satisfied_by(x)).count() as u64
    }

    fn count(&self) -> u64 {
        let total = 1u64 << self.n;
        if self.n <= PARALLEL_CHUNK_BITS {
            return self.count_range(0, total);
        }
        let chunk = 1u64 << PARALLEL_CHUNK_BITS;
        (0..total / chunk)
            .into_par_iter()
            .map(|c| self.count_range(c * chunk, (c + 1) * chunk))
            .sum()
    }
}

/// Scans assignments in lexicographic order (variable `i` is bit `i-1` of a counter
/// running from all-false upward) and returns the first model.
pub fn brute_force_sat(formula: &Formula) -> Result<SatAnswer> {
    let masked = MaskedFormula::compile(formula, MAX_ORACLE_VARS)?;
    let total = 1u64 << masked.n;
    let first = if masked.n <= PARALLEL_CHUNK_BITS {
        (0..total).find(|&x| masked.satisfied_by(x))
    } else {
        let chunk = 1u64 << PARALLEL_CHUNK_BITS;
        (0..total / chunk)
            .into_par_iter()
            .find_map_first(|c| (c * chunk..(c + 1) * chunk).find(|&x| masked.satisfied_by(x)))
    };
    Ok(match first {
        Some(bits) => SatAnswer::Satisfiable(Assignment::from_bits(masked.n, bits)),
        None => SatAnswer::Unsatisfiable,
    })
}

pub fn is_satisfiable(formula: &Formula) -> Result<bool> {
    Ok(matches!(
        brute_force_sat(formula)?,
        SatAnswer::Satisfiable(_)
    ))
}

pub fn count_solutions(formula: &Formula) -> Result<ExactCount> {
    let masked = MaskedFormula::compile(formula, MAX_ORACLE_VARS)?;
    Ok(ExactCount {
        solutions: masked.count(),
        n_enumerated: 1u64 << masked.n,
    })
}

/// Every width-`k` clause on distinct variables of `1..=n`: variable sets in
/// lexicographic order, and for each set the `2^k` sign patterns counted in binary
/// (bit `j` negates the `j`-th smallest variable).
pub fn all_clauses(n: usize, k: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut combo: Vec<usize> = (1..=k).collect();
    loop {
        for pattern in 0u64..(1u64 << k) {
            out.push(Clause::new(
                combo
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| Lit::new(v, pattern >> j & 1 == 0))
                    .collect(),
            ));
        }
        // next combination
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - (k - 1 - i)) else {
            break;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    out
}

/// Streams every ordered `m`-tuple of width-`k` clauses exactly once, odometer-style
/// over [`all_clauses`] (last position fastest). Formulas are ordered tuples, so each
/// carries multiplicity 1.
pub struct FormulaEnumeration {
    n: usize,
    k: usize,
    clauses: Vec<Clause>,
    digits: Vec<usize>,
    done: bool,
    total: u64,
}

impl FormulaEnumeration {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn clause_alphabet(&self) -> &[Clause] {
        &self.clauses
    }
}

impl Iterator for FormulaEnumeration {
    type Item = (Formula, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let f = Formula::from_clauses(
            self.n,
            self.k,
            self.digits.iter().map(|&d| &self.clauses[d]),
        );
        let base = self.clauses.len();
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < base {
                break;
            }
            self.digits[pos] = 0;
        }
        Some((f, 1))
    }
}

pub fn enumerate_all_formulas(n: usize, k: usize, m: usize) -> Result<FormulaEnumeration> {
    if k == 0 || k > n {
        return Err(Error::WidthExceedsVariables { n, k });
    }
    let clauses = all_clauses(n, k);
    let base = clauses.len() as u64;
    let total = u32::try_from(m)
        .ok()
        .and_then(|m| base.checked_pow(m))
        .filter(|&t| t <= MAX_ENUMERATED_FORMULAS);
    let Some(total) = total else {
        return Err(Error::cap(
            "formula enumeration",
            m as f64 * (base as f64).log2(),
            (MAX_ENUMERATED_FORMULAS as f64).log2(),
        ));
    };
    Ok(FormulaEnumeration {
        n,
        k,
        clauses,
        digits: vec![0; m],
        done: false,
        total,
    })
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `1 / p` for the planted-probability constant `p = 2^{-n}·(C(n,k)(2^k−1))^{-m}`.
pub fn planted_denominator(n: usize, k: usize, m: usize) -> BigUint {
    let per_clause = binomial(n, k) * ((BigUint::one() << k) - BigUint::one());
    (BigUint::one() << n) * num_traits::pow(per_clause, m)
}

/// Exact probability that `P(n,k,m)` produces `formula`: `Z(F)·2^{-n}·(C(n,k)(2^k−1))^{-m}`.
pub fn exact_planted_prob(formula: &Formula) -> Result<BigRational> {
    let n = formula.num_vars();
    let k = formula.width().ok_or_else(|| {
        Error::InvalidParameter("exact planted probability needs a width-k formula".into())
    })?;
    if n > MAX_EXACT_VARS {
        return Err(Error::cap(
            "exact planted probability",
            n as f64,
            MAX_EXACT_VARS as f64,
        ));
    }
    let z = count_solutions(formula)?.solutions;
    let denom = planted_denominator(n, k, formula.num_clauses());
    Ok(BigRational::new(BigUint::from(z).into(), denom.into()))
}

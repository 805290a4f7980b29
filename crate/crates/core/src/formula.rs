//! CNF representation and the evaluation primitives everything else consumes.
//!
//! Variables are 1-based at every public boundary (DIMACS convention). Internally a
//! literal is packed as `(var - 1) << 1 | negated`, so sorting literals sorts by
//! variable index.

use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    /// Literal on 1-based variable `var`, satisfied when the variable equals `positive`.
    pub fn new(var: usize, positive: bool) -> Lit {
        assert!(var >= 1, "variables are 1-based");
        let code = ((var - 1) << 1) | usize::from(!positive);
        Lit(u32::try_from(code).expect("variable index out of range"))
    }

    pub fn positive(var: usize) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: usize) -> Lit {
        Lit::new(var, false)
    }

    /// Parses a signed DIMACS literal; `0` is the clause terminator, not a literal.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        let var = usize::try_from(value.unsigned_abs()).ok()?;
        Some(Lit::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let var = self.var() as i64;
        if self.is_positive() {
            var
        } else {
            -var
        }
    }

    #[inline]
    pub fn var(self) -> usize {
        self.index() + 1
    }

    /// 0-based variable index.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var())
        } else {
            write!(f, "¬x{}", self.var())
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// An owned clause with literals sorted by variable index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort_unstable();
        Clause(lits)
    }

    pub fn from_dimacs(values: &[i64]) -> Clause {
        Clause::new(values.iter().filter_map(|&v| Lit::from_dimacs(v)).collect())
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn into_lits(self) -> Vec<Lit> {
        self.0
    }
}

impl AsRef<[Lit]> for Clause {
    fn as_ref(&self) -> &[Lit] {
        &self.0
    }
}

impl std::ops::Deref for Clause {
    type Target = [Lit];

    fn deref(&self) -> &[Lit] {
        &self.0
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{lit:?}")?;
        }
        write!(f, ")")
    }
}

/// A CNF formula over variables `1..=n`.
///
/// Clauses are stored flat in draw order; each clause's literals are sorted. A formula
/// normally carries a width contract `k`; formulas built with [`Formula::mixed`] have
/// none and may hold clauses of any width.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    width: Option<usize>,
    lits: Vec<Lit>,
    ends: Vec<usize>,
}

impl Formula {
    pub fn new(n: usize, k: usize) -> Formula {
        Formula {
            n,
            width: Some(k),
            lits: Vec::new(),
            ends: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, k: usize, m: usize) -> Formula {
        Formula {
            n,
            width: Some(k),
            lits: Vec::with_capacity(m * k),
            ends: Vec::with_capacity(m),
        }
    }

    /// A formula without a width contract.
    pub fn mixed(n: usize) -> Formula {
        Formula {
            n,
            width: None,
            lits: Vec::new(),
            ends: Vec::new(),
        }
    }

    pub fn from_clauses<I>(n: usize, k: usize, clauses: I) -> Formula
    where
        I: IntoIterator,
        I::Item: AsRef<[Lit]>,
    {
        let mut f = Formula::new(n, k);
        for c in clauses {
            f.push(c.as_ref());
        }
        f
    }

    /// Builds a formula from DIMACS-style signed clauses. `width` of `None` yields a
    /// mixed-width formula.
    pub fn from_dimacs(n: usize, width: Option<usize>, clauses: &[&[i64]]) -> Formula {
        let mut f = Formula {
            n,
            width,
            lits: Vec::new(),
            ends: Vec::new(),
        };
        for c in clauses {
            f.push(Clause::from_dimacs(c).lits());
        }
        f
    }

    /// Appends a clause (sorted on insertion). No invariant is checked here; see
    /// [`validate_formula`].
    pub fn push(&mut self, lits: &[Lit]) {
        let start = self.lits.len();
        self.lits.extend_from_slice(lits);
        self.lits[start..].sort_unstable();
        self.ends.push(self.lits.len());
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> Option<usize> {
        self.width
    }

    pub fn num_clauses(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn clause(&self, i: usize) -> &[Lit] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] };
        &self.lits[start..self.ends[i]]
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &[Lit]> + '_ {
        (0..self.ends.len()).map(move |i| self.clause(i))
    }

    /// Renames every variable `v` to `perm[v - 1]` (a 1-based permutation of `1..=n`).
    pub fn permute_variables(&self, perm: &[usize]) -> Formula {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut out = Formula {
            n: self.n,
            width: self.width,
            lits: Vec::with_capacity(self.lits.len()),
            ends: Vec::with_capacity(self.ends.len()),
        };
        let mut buf = Vec::new();
        for c in self.clauses() {
            buf.clear();
            buf.extend(c.iter().map(|l| Lit::new(perm[l.index()], l.is_positive())));
            out.push(&buf);
        }
        out
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula(n={}, k={:?}) [", self.n, self.width)?;
        for (i, c) in self.clauses().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{:?}", Clause(c.to_vec()))?;
        }
        write!(f, "]")
    }
}

/// Anything that maps 1-based variables to an optional truth value.
pub trait Valuation {
    fn num_vars(&self) -> usize;
    fn value(&self, var: usize) -> Option<bool>;
}

/// A total assignment, packed one bit per variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: usize,
    words: Vec<u64>,
}

impl Assignment {
    pub fn all_false(n: usize) -> Assignment {
        Assignment {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_bools(values: &[bool]) -> Assignment {
        let mut a = Assignment::all_false(values.len());
        for (i, &v) in values.iter().enumerate() {
            a.set(i + 1, v);
        }
        a
    }

    /// Bit `i` of `bits` is the value of variable `i + 1`.
    pub fn from_bits(n: usize, bits: u64) -> Assignment {
        assert!(n <= 64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut a = Assignment::all_false(n);
        if n > 0 {
            a.words[0] = bits & mask;
        }
        a
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        debug_assert!(var >= 1 && var <= self.n);
        let i = var - 1;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, var: usize, value: bool) {
        debug_assert!(var >= 1 && var <= self.n);
        let i = var - 1;
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (1..=self.n).map(|v| self.get(v)).collect()
    }

    /// Low 64 variables as a bit word (variable `i + 1` at bit `i`).
    pub fn low_bits(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        lit.satisfied_by(self.get(lit.var()))
    }

    /// Signed DIMACS literals, one per variable.
    pub fn to_dimacs(&self) -> Vec<i64> {
        (1..=self.n)
            .map(|v| if self.get(v) { v as i64 } else { -(v as i64) })
            .collect()
    }

    pub fn hamming_distance(&self, other: &Assignment) -> usize {
        assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

impl Valuation for Assignment {
    fn num_vars(&self) -> usize {
        self.n
    }

    #[inline]
    fn value(&self, var: usize) -> Option<bool> {
        Some(self.get(var))
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment(")?;
        for v in 1..=self.n {
            write!(f, "{}", u8::from(self.get(v)))?;
        }
        write!(f, ")")
    }
}

/// Tri-state assignment used during a single PPZ pass. A variable, once set, stays set.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    n: usize,
    values: Vec<u64>,
    assigned: Vec<u64>,
    unset: usize,
}

impl PartialAssignment {
    pub fn new(n: usize) -> PartialAssignment {
        PartialAssignment {
            n,
            values: vec![0; n.div_ceil(64)],
            assigned: vec![0; n.div_ceil(64)],
            unset: n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, var: usize) -> Option<bool> {
        let i = var - 1;
        let bit = 1u64 << (i % 64);
        if self.assigned[i / 64] & bit == 0 {
            None
        } else {
            Some(self.values[i / 64] & bit != 0)
        }
    }

    #[inline]
    pub fn is_set(&self, var: usize) -> bool {
        let i = var - 1;
        self.assigned[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets an unset variable.
    ///
    /// # Panics
    /// If `var` is already set.
    #[inline]
    pub fn assign(&mut self, var: usize, value: bool) {
        let i = var - 1;
        let bit = 1u64 << (i % 64);
        assert!(self.assigned[i / 64] & bit == 0, "x{var} reassigned");
        self.assigned[i / 64] |= bit;
        if value {
            self.values[i / 64] |= bit;
        }
        self.unset -= 1;
    }

    pub fn num_unset(&self) -> usize {
        self.unset
    }

    pub fn is_total(&self) -> bool {
        self.unset == 0
    }

    pub fn clear(&mut self) {
        self.values.fill(0);
        self.assigned.fill(0);
        self.unset = self.n;
    }

    pub fn to_assignment(&self) -> Option<Assignment> {
        self.is_total().then(|| Assignment {
            n: self.n,
            words: self.values.clone(),
        })
    }
}

impl From<&Assignment> for PartialAssignment {
    fn from(a: &Assignment) -> Self {
        PartialAssignment {
            n: a.n,
            values: a.words.clone(),
            assigned: (0..a.words.len())
                .map(|w| {
                    let rem = a.n - w * 64;
                    if rem >= 64 {
                        u64::MAX
                    } else {
                        (1u64 << rem) - 1
                    }
                })
                .collect(),
            unset: 0,
        }
    }
}

impl Valuation for PartialAssignment {
    fn num_vars(&self) -> usize {
        self.n
    }

    #[inline]
    fn value(&self, var: usize) -> Option<bool> {
        self.get(var)
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialAssignment(")?;
        for v in 1..=self.n {
            let c = match self.get(v) {
                Some(true) => '1',
                Some(false) => '0',
                None => '*',
            };
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Falsified,
    /// Exactly one literal is unset and every other literal is falsified.
    Unit(Lit),
    Unresolved,
}

pub fn clause_status<V: Valuation + ?Sized>(clause: &[Lit], valuation: &V) -> ClauseStatus {
    let mut open = None;
    let mut open_count = 0usize;
    for &lit in clause {
        match valuation.value(lit.var()) {
            Some(v) if lit.satisfied_by(v) => return ClauseStatus::Satisfied,
            Some(_) => {}
            None => {
                open_count += 1;
                open = Some(lit);
            }
        }
    }
    match (open_count, open) {
        (0, _) => ClauseStatus::Falsified,
        (1, Some(lit)) => ClauseStatus::Unit(lit),
        _ => ClauseStatus::Unresolved,
    }
}

/// True iff every clause has a satisfied literal. Rejects valuations that are not total
/// over the formula's variables.
pub fn eval_formula<V: Valuation + ?Sized>(formula: &Formula, valuation: &V) -> Result<bool> {
    if valuation.num_vars() != formula.num_vars() {
        return Err(Error::AssignmentLength {
            expected: formula.num_vars(),
            got: valuation.num_vars(),
        });
    }
    if let Some(var) = (1..=formula.num_vars()).find(|&v| valuation.value(v).is_none()) {
        return Err(Error::NonTotalAssignment(var));
    }
    Ok(formula
        .clauses()
        .all(|c| clause_status(c, valuation) == ClauseStatus::Satisfied))
}

/// Fast path for total assignments.
pub(crate) fn satisfies_all(formula: &Formula, a: &Assignment) -> bool {
    formula.clauses().all(|c| c.iter().any(|&l| a.satisfies(l)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    VariableOutOfRange { var: usize },
    RepeatedVariable { var: usize },
    WrongWidth { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("clause {clause}: {}", describe(.kind))]
pub struct FormulaViolation {
    pub clause: usize,
    pub kind: ViolationKind,
}

fn describe(kind: &ViolationKind) -> String {
    match kind {
        ViolationKind::VariableOutOfRange { var } => format!("variable x{var} out of range"),
        ViolationKind::RepeatedVariable { var } => format!("repeated variable x{var}"),
        ViolationKind::WrongWidth { expected, got } => {
            format!("wrong width {got}, expected {expected}")
        }
    }
}

/// Checks every clause invariant and reports the first violation found.
pub fn validate_formula(formula: &Formula) -> Result<(), FormulaViolation> {
    for (i, clause) in formula.clauses().enumerate() {
        let fail = |kind| Err(FormulaViolation { clause: i, kind });
        if let Some(k) = formula.width() {
            if clause.len() != k {
                return fail(ViolationKind::WrongWidth {
                    expected: k,
                    got: clause.len(),
                });
            }
        }
        for (j, lit) in clause.iter().enumerate() {
            if lit.var() > formula.num_vars() {
                return fail(ViolationKind::VariableOutOfRange { var: lit.var() });
            }
            // sorted, so repeats are adjacent
            if j > 0 && clause[j - 1].var() == lit.var() {
                return fail(ViolationKind::RepeatedVariable { var: lit.var() });
            }
        }
    }
    Ok(())
}

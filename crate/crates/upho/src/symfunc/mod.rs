//! Truncated Ehrenborg symmetric functions, Schur-basis expansion, and the
//! exact total-positivity criterion.
//!
//! For a graded poset with unique minimum, the degree-n Ehrenborg function
//! collects multichain weights `x_1^{a_1} x_2^{a_2} ...` over multichains
//! from the minimum whose top sits on rank n (last step strict). For upho
//! posets this is the symmetric function `F_P(x_1) F_P(x_2) ...` in each
//! degree, so positivity questions reduce to exact linear algebra over the
//! Kostka matrix.

mod sturm;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{RankedPoset, Vertex};
use crate::series::IntSeries;

pub use sturm::davydov_check;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymFuncError {
    #[error("series has {len} coefficients, need more than {needed}")]
    InsufficientSeries { len: usize, needed: usize },
    #[error("poset depth {depth} is too small for degree {degree}")]
    InsufficientDepth { depth: usize, degree: usize },
    #[error("need at least {degree} variables for degree {degree}, got {num_vars}")]
    TooFewVariables { num_vars: usize, degree: usize },
    #[error("partitions have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("partition parts must be positive and weakly decreasing")]
    InvalidPartition,
    #[error("poset has no unique minimum")]
    NoUniqueMinimum,
    #[error(
        "chain weights are not symmetric: exponent vectors {0:?} and {1:?} carry {2} and {3}"
    )]
    NotSymmetric(Vec<usize>, Vec<usize>, BigInt, BigInt),
}

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, SymFuncError> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SymFuncError::InvalidPartition);
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Dominance order: true iff every prefix sum of self is at least the
    /// corresponding prefix sum of `other` (both partitions of the same n).
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.sum() != other.sum() {
            return false;
        }
        let mut acc_self = 0usize;
        let mut acc_other = 0usize;
        for i in 0..self.parts.len().max(other.parts.len()) {
            acc_self += self.parts.get(i).copied().unwrap_or(0);
            acc_other += other.parts.get(i).copied().unwrap_or(0);
            if acc_self < acc_other {
                return false;
            }
        }
        true
    }

    /// All partitions of n in reverse lexicographic order, from (n) down to
    /// (1, ..., 1). This order refines dominance, which is what makes the
    /// Kostka back-substitution well-defined.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for part in (1..=remaining.min(max_part)).rev() {
                prefix.push(part);
                rec(remaining - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Monomial,
    Schur,
}

/// A degree-n symmetric function as a partition-indexed coefficient map,
/// tagged with its basis. Zero coefficients are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFunctionDeg {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, BigInt>,
}

// Serializes as {"degree", "basis", "terms": [{"partition": [..],
// "coefficient": "<decimal>"}, ..]} in reverse-lexicographic order;
// coefficients are decimal strings for magnitude safety.
impl Serialize for SymmetricFunctionDeg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Term<'a> {
            partition: &'a Partition,
            coefficient: String,
        }
        let terms: Vec<Term> = self
            .iter()
            .map(|(p, c)| Term {
                partition: p,
                coefficient: c.to_string(),
            })
            .collect();
        let mut state = s.serialize_struct("SymmetricFunctionDeg", 3)?;
        state.serialize_field("degree", &self.degree)?;
        state.serialize_field("basis", &self.basis)?;
        state.serialize_field("terms", &terms)?;
        state.end()
    }
}

impl SymmetricFunctionDeg {
    pub fn new(degree: usize, basis: Basis, coeffs: BTreeMap<Partition, BigInt>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SymmetricFunctionDeg {
            degree,
            basis,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, p: &Partition) -> BigInt {
        self.coeffs.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero coefficients in reverse lexicographic partition order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.coeffs.iter().rev()
    }

    /// Formatted one per line, e.g. `4 · s[2,1]`, reverse-lexicographically.
    pub fn lines(&self) -> Vec<String> {
        let tag = match self.basis {
            Basis::Monomial => "m",
            Basis::Schur => "s",
        };
        self.iter()
            .map(|(p, c)| format!("{c} · {tag}{p}"))
            .collect()
    }
}

impl fmt::Display for SymmetricFunctionDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.lines().join(" + "))
    }
}

/// Degree-n Ehrenborg function of a series in the monomial basis: the
/// coefficient of m_mu in `f(x_1) f(x_2) ...` is the product of the series
/// coefficients over the parts of mu.
pub fn ehrenborg_monomial(
    r: &IntSeries,
    n: usize,
) -> Result<SymmetricFunctionDeg, SymFuncError> {
    if r.coeffs().len() <= n {
        return Err(SymFuncError::InsufficientSeries {
            len: r.coeffs().len(),
            needed: n,
        });
    }
    let mut coeffs = BTreeMap::new();
    for mu in Partition::all_of(n) {
        let mut c = BigInt::from(1);
        for &part in mu.parts() {
            c *= r.coeff(part);
        }
        coeffs.insert(mu, c);
    }
    Ok(SymmetricFunctionDeg::new(n, Basis::Monomial, coeffs))
}

/// Degree-n Ehrenborg function computed directly from multichains of the
/// poset, in `num_vars` variables.
///
/// Enumerates every multichain `min = t_0 <= t_1 <= ... <= t_{k-1} < t_k`
/// with k <= num_vars and the top on rank n, accumulating the monomial
/// `x_1^{d_1} ... x_k^{d_k}` of rank jumps. The accumulated weights must be
/// constant across each monomial orbit (that is the executable proof that
/// the function is symmetric, which holds for upho posets); they are then
/// collapsed to partition-indexed coefficients.
pub fn ehrenborg_by_chains(
    p: &RankedPoset,
    num_vars: usize,
    n: usize,
) -> Result<SymmetricFunctionDeg, SymFuncError> {
    if p.depth() <= n {
        return Err(SymFuncError::InsufficientDepth {
            depth: p.depth(),
            degree: n,
        });
    }
    if num_vars < n {
        return Err(SymFuncError::TooFewVariables {
            num_vars,
            degree: n,
        });
    }
    let root = p.root().ok_or(SymFuncError::NoUniqueMinimum)?;
    if n == 0 {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Partition::empty(), BigInt::from(1));
        return Ok(SymmetricFunctionDeg::new(0, Basis::Monomial, coeffs));
    }

    // order filters restricted to ranks <= n, per vertex
    let mut filters: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for rank in 0..=n {
        for &v in &p.ranks()[rank] {
            let ups = p
                .up_set(v)
                .into_iter()
                .filter(|&u| p.rank_of(u).unwrap() <= n)
                .collect();
            filters.insert(v, ups);
        }
    }

    let mut acc: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    let mut exps: Vec<usize> = Vec::new();
    fn dfs(
        p: &RankedPoset,
        filters: &BTreeMap<Vertex, Vec<Vertex>>,
        t: Vertex,
        n: usize,
        num_vars: usize,
        exps: &mut Vec<usize>,
        acc: &mut BTreeMap<Vec<usize>, BigInt>,
    ) {
        if exps.len() == num_vars {
            return;
        }
        let rank_t = p.rank_of(t).unwrap();
        for &u in &filters[&t] {
            let jump = p.rank_of(u).unwrap() - rank_t;
            if rank_t + jump == n {
                if jump >= 1 {
                    let mut key = exps.clone();
                    key.push(jump);
                    key.resize(num_vars, 0);
                    *acc.entry(key).or_insert_with(BigInt::zero) += 1;
                }
            } else {
                exps.push(jump);
                dfs(p, filters, u, n, num_vars, exps, acc);
                exps.pop();
            }
        }
    }
    dfs(p, &filters, root, n, num_vars, &mut exps, &mut acc);

    // symmetry check and collapse: all monomials of the same exponent shape
    // must carry the same weight
    let mut coeffs: BTreeMap<Partition, BigInt> = BTreeMap::new();
    let mut shape_witness: BTreeMap<Partition, Vec<usize>> = BTreeMap::new();
    let mut shape_seen: BTreeMap<Partition, usize> = BTreeMap::new();
    for (vec, coeff) in &acc {
        let mut parts: Vec<usize> = vec.iter().copied().filter(|&e| e > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let shape = Partition::new(parts).expect("sorted positive parts");
        match coeffs.get(&shape) {
            None => {
                coeffs.insert(shape.clone(), coeff.clone());
                shape_witness.insert(shape.clone(), vec.clone());
            }
            Some(existing) if existing != coeff => {
                return Err(SymFuncError::NotSymmetric(
                    shape_witness[&shape].clone(),
                    vec.clone(),
                    existing.clone(),
                    coeff.clone(),
                ));
            }
            _ => {}
        }
        *shape_seen.entry(shape).or_insert(0) += 1;
    }
    // every monomial of a shape with nonzero weight must be present
    for (shape, &seen) in &shape_seen {
        let expected = distinct_permutations(shape, num_vars);
        if seen != expected {
            let witness = shape_witness[&shape].clone();
            return Err(SymFuncError::NotSymmetric(
                witness,
                Vec::new(),
                coeffs[shape].clone(),
                BigInt::zero(),
            ));
        }
    }
    Ok(SymmetricFunctionDeg::new(n, Basis::Monomial, coeffs))
}

// number of distinct arrangements of the parts of `shape` padded with
// zeros to num_vars slots
fn distinct_permutations(shape: &Partition, num_vars: usize) -> usize {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in shape.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    *mult.entry(0).or_insert(0) += num_vars - shape.len();
    let mut numer: u128 = 1;
    for i in 1..=num_vars as u128 {
        numer *= i;
    }
    let mut denom: u128 = 1;
    for &m in mult.values() {
        for i in 1..=m as u128 {
            denom *= i;
        }
    }
    (numer / denom) as usize
}

/// Kostka number K_{lambda,mu}: the number of semistandard Young tableaux
/// of shape lambda and content mu, by row-by-row enumeration with
/// column-strictness pruning.
pub fn kostka(lambda: &Partition, mu: &Partition) -> Result<BigInt, SymFuncError> {
    if lambda.sum() != mu.sum() {
        return Err(SymFuncError::SizeMismatch(lambda.sum(), mu.sum()));
    }
    if lambda.is_empty() {
        return Ok(BigInt::from(1));
    }
    let shape = lambda.parts();
    let mut remaining: Vec<usize> = mu.parts().to_vec();
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();

    fn fill(
        shape: &[usize],
        rows: &mut Vec<Vec<usize>>,
        remaining: &mut Vec<usize>,
        row: usize,
        col: usize,
        count: &mut BigInt,
    ) {
        if row == shape.len() {
            *count += 1;
            return;
        }
        let (next_row, next_col) = if col + 1 == shape[row] {
            (row + 1, 0)
        } else {
            (row, col + 1)
        };
        let min_left = if col > 0 { rows[row][col - 1] } else { 1 };
        let min_above = if row > 0 && col < shape[row - 1] {
            rows[row - 1][col] + 1
        } else {
            1
        };
        let lo = min_left.max(min_above);
        for value in lo..=remaining.len() {
            if remaining[value - 1] == 0 {
                continue;
            }
            remaining[value - 1] -= 1;
            rows[row][col] = value;
            fill(shape, rows, remaining, next_row, next_col, count);
            remaining[value - 1] += 1;
        }
    }

    let mut count = BigInt::zero();
    fill(shape, &mut rows, &mut remaining, 0, 0, &mut count);
    Ok(count)
}

/// Expands a monomial-basis symmetric function in the Schur basis by
/// back-substitution over the Kostka matrix: `c_mu = sum_lambda d_lambda
/// K_{lambda,mu}` is solved for d following the reverse-lexicographic
/// partition order, using unitriangularity (`K_{lambda,lambda} = 1` and
/// `K_{lambda,mu} = 0` unless lambda dominates mu).
pub fn schur_expand(f: &SymmetricFunctionDeg) -> SymmetricFunctionDeg {
    assert!(
        f.basis() == Basis::Monomial,
        "schur_expand takes a monomial-basis input"
    );
    let order = Partition::all_of(f.degree());
    let mut d: Vec<(Partition, BigInt)> = Vec::with_capacity(order.len());
    for mu in &order {
        let mut value = f.coeff(mu);
        for (lambda, coeff) in &d {
            if coeff.is_zero() || !lambda.dominates(mu) {
                continue;
            }
            value -= coeff * kostka(lambda, mu).expect("equal-size partitions");
        }
        d.push((mu.clone(), value));
    }
    SymmetricFunctionDeg::new(f.degree(), Basis::Schur, d.into_iter().collect())
}

/// Re-expansion of a Schur-basis function into the monomial basis through
/// the Kostka matrix; the exact inverse of [`schur_expand`].
pub fn schur_to_monomial(f: &SymmetricFunctionDeg) -> SymmetricFunctionDeg {
    assert!(
        f.basis() == Basis::Schur,
        "schur_to_monomial takes a Schur-basis input"
    );
    let mut coeffs: BTreeMap<Partition, BigInt> = BTreeMap::new();
    for mu in Partition::all_of(f.degree()) {
        let mut value = BigInt::zero();
        for (lambda, d) in f.coeffs.iter() {
            if !lambda.dominates(&mu) {
                continue;
            }
            value += d * kostka(lambda, &mu).expect("equal-size partitions");
        }
        coeffs.insert(mu, value);
    }
    SymmetricFunctionDeg::new(f.degree(), Basis::Monomial, coeffs)
}

/// First negative Schur coefficient found, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeWitness {
    pub degree: usize,
    pub partition: Partition,
    pub coefficient: BigInt,
}

impl Serialize for NegativeWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = s.serialize_struct("NegativeWitness", 3)?;
        state.serialize_field("degree", &self.degree)?;
        state.serialize_field("partition", &self.partition)?;
        state.serialize_field("coefficient", &self.coefficient.to_string())?;
        state.end()
    }
}

/// Outcome of a truncated Schur-positivity scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurPositivity {
    pub positive: bool,
    pub witness: Option<NegativeWitness>,
    /// Schur expansion per degree, 0..=max_degree.
    pub expansions: Vec<SymmetricFunctionDeg>,
}

/// Checks Schur positivity of the Ehrenborg functions of a series through
/// `max_degree`: every degree is expanded in the Schur basis and all
/// coefficients must be nonnegative. The first negative coefficient (lowest
/// degree, then reverse-lexicographically first partition) is reported.
pub fn is_schur_positive(
    r: &IntSeries,
    max_degree: usize,
) -> Result<SchurPositivity, SymFuncError> {
    let mut witness = None;
    let mut expansions = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let schur = schur_expand(&ehrenborg_monomial(r, n)?);
        if witness.is_none() {
            for (partition, coeff) in schur.iter() {
                if coeff < &BigInt::zero() {
                    witness = Some(NegativeWitness {
                        degree: n,
                        partition: partition.clone(),
                        coefficient: coeff.clone(),
                    });
                    break;
                }
            }
        }
        expansions.push(schur);
    }
    Ok(SchurPositivity {
        positive: witness.is_none(),
        witness,
        expansions,
    })
}

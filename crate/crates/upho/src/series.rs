//! Exact integer power series and rational functions.
//!
//! Rank sizes of the posets in this crate grow like `b^n`, so every
//! coefficient is an unbounded [`BigInt`]; there is no floating point
//! anywhere in this module.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poset::RankedPoset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// The denominator's constant term is neither 1 nor -1, so the series
    /// expansion is not defined over the integers.
    #[error("denominator constant term is {0}, expected 1 or -1")]
    NonUnitConstantTerm(BigInt),
    #[error("cannot parse polynomial expression: {0}")]
    Parse(String),
}

/// A polynomial with integer coefficients, constant term first.
///
/// Trailing zero coefficients are trimmed, so `degree() == coeffs().len() - 1`
/// for nonzero polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^k, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Parses expressions like `(1+x)(1+2x)`, `1-3x+x^2+x^3` or `2*x^2 - x`.
    pub fn parse(input: &str) -> Result<Self, SeriesError> {
        let mut parser = Parser::new(input);
        let poly = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.bytes.len() {
            return Err(SeriesError::Parse(format!(
                "unexpected trailing input at byte {}",
                parser.pos
            )));
        }
        Ok(poly)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Truncated power series with exact integer coefficients.
///
/// A series of order N stores the N+1 coefficients of x^0 through x^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least one coefficient");
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Truncation order N; the series stores N+1 coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn truncate(&self, order: usize) -> IntSeries {
        let end = (order + 1).min(self.coeffs.len());
        IntSeries::new(self.coeffs[..end].to_vec())
    }

    /// Pointwise product of two series, truncated to `order`.
    pub fn convolve(&self, other: &IntSeries, order: usize) -> IntSeries {
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|t| self.coeff(t) * other.coeff(k - t)).sum())
            .collect();
        IntSeries::new(coeffs)
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

// Series and polynomials serialize as arrays of decimal strings so that
// arbitrarily large coefficients survive JSON consumers with 64-bit numbers.
fn serialize_bigints<S: Serializer>(coeffs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(coeffs.iter().map(|c| c.to_string()))
}

fn deserialize_bigints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw: Vec<String> = Vec::deserialize(d)?;
    raw.iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}")))
        })
        .collect()
}

impl Serialize for IntSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigints(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = deserialize_bigints(d)?;
        if coeffs.is_empty() {
            return Err(D::Error::custom("empty series"));
        }
        Ok(IntSeries::new(coeffs))
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigints(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(IntPolynomial::new(deserialize_bigints(d)?))
    }
}

/// A quotient of integer polynomials, normalized so the denominator has
/// constant term 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    numerator: IntPolynomial,
    denominator: IntPolynomial,
}

impl RationalFunction {
    /// Builds `numerator / denominator`. A denominator with constant term -1
    /// is normalized by negating both polynomials; any other constant term
    /// is rejected.
    pub fn new(
        numerator: IntPolynomial,
        denominator: IntPolynomial,
    ) -> Result<Self, SeriesError> {
        let c = denominator.constant_term();
        if c.is_one() {
            Ok(RationalFunction {
                numerator,
                denominator,
            })
        } else if (-&c).is_one() {
            Ok(RationalFunction {
                numerator: numerator.neg(),
                denominator: denominator.neg(),
            })
        } else {
            Err(SeriesError::NonUnitConstantTerm(c))
        }
    }

    /// Parses `"num/den"`, e.g. `"(1+x)(1+2x)/(1-x)"`. A missing `/den`
    /// means denominator 1.
    pub fn parse(input: &str) -> Result<Self, SeriesError> {
        let mut depth = 0usize;
        let mut split = None;
        for (i, ch) in input.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        SeriesError::Parse("unbalanced parentheses".into())
                    })?
                }
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(SeriesError::Parse("more than one '/'".into()));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        match split {
            Some(i) => {
                let num = IntPolynomial::parse(&input[..i])?;
                let den = IntPolynomial::parse(&input[i + 1..])?;
                RationalFunction::new(num, den)
            }
            None => RationalFunction::new(IntPolynomial::parse(input)?, IntPolynomial::one()),
        }
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.denominator
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// Expands a rational function into its power series through `order`.
///
/// With denominator `1 + d_1 x + d_2 x^2 + ...` the coefficients satisfy the
/// linear recurrence `c_k = num_k - sum_{j>=1} d_j c_{k-j}`, so the result is
/// exact and `denominator * result = numerator` through the truncation.
pub fn expand_rational(f: &RationalFunction, order: usize) -> IntSeries {
    let den = f.denominator().coeffs();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut c = f.numerator().coeff(k);
        for j in 1..den.len().min(k + 1) {
            c -= &den[j] * &coeffs[k - j];
        }
        coeffs.push(c);
    }
    IntSeries::new(coeffs)
}

/// Rank-generating function of a poset truncation: coefficient k is the
/// number of vertices on rank k.
pub fn rgf(p: &RankedPoset) -> IntSeries {
    IntSeries::new(p.rank_sizes().iter().map(|&n| BigInt::from(n)).collect())
}

/// True iff `f` expands to exactly the coefficients of `s`.
pub fn match_rational(s: &IntSeries, f: &RationalFunction) -> bool {
    expand_rational(f, s.order()) == *s
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPolynomial, SeriesError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPolynomial, SeriesError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // Juxtaposition, as in (1+x)(1+2x) or 2x.
                Some(b'(') | Some(b'x') => acc = acc.mul(&self.factor()?),
                Some(c) if c.is_ascii_digit() => acc = acc.mul(&self.factor()?),
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntPolynomial, SeriesError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.integer()?;
            let exp: usize = exp
                .try_into()
                .map_err(|_| SeriesError::Parse("exponent too large".into()))?;
            let mut acc = IntPolynomial::one();
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<IntPolynomial, SeriesError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(SeriesError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(IntPolynomial::new(vec![BigInt::zero(), BigInt::one()]))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(IntPolynomial::new(vec![BigInt::from(n)]))
            }
            other => Err(SeriesError::Parse(format!(
                "unexpected input {:?} at byte {}",
                other.map(|b| b as char),
                self.pos
            ))),
        }
    }

    fn integer(&mut self) -> Result<u64, SeriesError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(SeriesError::Parse(format!(
                "expected integer at byte {start}"
            )));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| SeriesError::Parse("integer too large".into()))
    }
}

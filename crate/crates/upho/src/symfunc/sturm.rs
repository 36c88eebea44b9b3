//! Exact decision of the total-positivity criterion: a series
//! `g(x)/h(x)` in `1 + x Z[[x]]` is totally positive (all its Ehrenborg
//! functions are Schur positive) iff all complex roots of g are negative
//! reals and all complex roots of h are positive reals. Root locations are
//! decided by Sturm sequences over exact rationals after a square-free
//! reduction; no floating point enters the decision path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::series::{IntPolynomial, RationalFunction};

/// True iff every complex root of the numerator is a negative real number
/// and every complex root of the denominator is a positive real number.
/// Requires the series to lie in `1 + x Z[[x]]`, so a numerator whose
/// constant term is not 1 fails outright (the denominator is normalized by
/// construction).
pub fn davydov_check(f: &RationalFunction) -> bool {
    if !f.numerator().constant_term().is_one() {
        return false;
    }
    all_distinct_roots_in(f.numerator(), Side::Negative)
        && all_distinct_roots_in(f.denominator(), Side::Positive)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Negative,
    Positive,
}

// Multiplicities do not affect root locations, so the check runs on the
// square-free part: all roots of p lie on the requested side iff the
// square-free part has exactly its degree many distinct real roots there.
fn all_distinct_roots_in(p: &IntPolynomial, side: Side) -> bool {
    let p = RatPoly::from_int(p);
    if p.degree() == 0 {
        return true;
    }
    let reduced = p.square_free();
    let chain = sturm_chain(&reduced);
    let at_zero = variations(chain.iter().map(|q| q.sign_at_zero()));
    let count = match side {
        Side::Negative => {
            let at_neg_inf = variations(chain.iter().map(|q| q.sign_at_neg_inf()));
            at_neg_inf - at_zero
        }
        Side::Positive => {
            let at_pos_inf = variations(chain.iter().map(|q| q.sign_at_pos_inf()));
            at_zero - at_pos_inf
        }
    };
    count == reduced.degree()
}

// Dense univariate polynomial over exact rationals, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    fn from_int(p: &IntPolynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    // positive rescaling keeps every Sturm sign query intact
    fn scaled_by_leading(&self) -> RatPoly {
        let scale = self.leading().abs();
        RatPoly::new(self.coeffs.iter().map(|c| c / &scale).collect())
    }

    fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dlen = divisor.coeffs.len();
        if rem.len() < dlen {
            return (RatPoly::new(Vec::new()), RatPoly::new(rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dlen - 1] / divisor.leading();
            if factor.is_zero() {
                continue;
            }
            quot[k] = factor.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let term = d * &factor;
                rem[k + j] -= term;
            }
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scaled_by_leading()
        }
    }

    fn square_free(&self) -> RatPoly {
        let deriv = self.derivative();
        if deriv.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&deriv);
        if g.degree() == 0 {
            return self.clone();
        }
        let (quot, rem) = self.div_rem(&g);
        debug_assert!(rem.is_zero());
        quot
    }

    fn sign_at_zero(&self) -> i8 {
        self.coeffs.first().map_or(0, sign_of)
    }

    fn sign_at_pos_inf(&self) -> i8 {
        if self.is_zero() {
            0
        } else {
            sign_of(self.leading())
        }
    }

    fn sign_at_neg_inf(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let lead = sign_of(self.leading());
        if self.degree() % 2 == 0 {
            lead
        } else {
            -lead
        }
    }
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.scaled_by_leading()];
    let deriv = p.derivative();
    if deriv.is_zero() {
        return chain;
    }
    chain.push(deriv.scaled_by_leading());
    loop {
        let n = chain.len();
        let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
        if rem.is_zero() {
            return chain;
        }
        let neg = RatPoly::new(rem.coeffs.iter().map(|c| -c).collect());
        chain.push(neg.scaled_by_leading());
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let nonzero: Vec<i8> = signs.filter(|&s| s != 0).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    #[test]
    fn accepted_shapes() {
        assert!(davydov_check(&rf("(1+x)(1+2x)/(1-x)")));
        assert!(davydov_check(&rf("(1+3x)/((1-x)(1-2x))")));
        assert!(davydov_check(&rf("1/(1-5x)")));
        assert!(davydov_check(&rf("1/1")));
        assert!(davydov_check(&rf("(1+x)(1+x)(1+2x)/((1-x)(1-3x))")));
    }

    #[test]
    fn rejected_shapes() {
        // complex denominator roots: discriminant 1 - 4 < 0
        assert!(!davydov_check(&rf("1/(1-x+x^2)")));
        // positive root in the numerator
        assert!(!davydov_check(&rf("(1-x)/1")));
        // negative root in the denominator
        assert!(!davydov_check(&rf("1/(1+x)")));
        // complex numerator roots
        assert!(!davydov_check(&rf("(1+x+x^2)/(1-x)")));
        // constant term not 1: outside 1 + xZ[[x]] after normalization
        assert!(!davydov_check(&rf("(2+x)/(1-x)")));
    }

    #[test]
    fn repeated_roots_are_fine() {
        assert!(davydov_check(&rf("(1+x)^3/(1-x)^2")));
        assert!(!davydov_check(&rf("(1-x)^2/(1-2x)")));
    }

    #[test]
    fn sturm_counts_directly() {
        // (1+x)(1+2x): two distinct negative roots
        let p = RatPoly::from_int(&IntPolynomial::from_i64(&[1, 3, 2]));
        let chain = sturm_chain(&p.square_free());
        let neg = variations(chain.iter().map(|q| q.sign_at_neg_inf()))
            - variations(chain.iter().map(|q| q.sign_at_zero()));
        assert_eq!(neg, 2);
        let pos = variations(chain.iter().map(|q| q.sign_at_zero()))
            - variations(chain.iter().map(|q| q.sign_at_pos_inf()));
        assert_eq!(pos, 0);
    }

    #[test]
    fn square_free_reduction() {
        // (1+x)^2 (1-2x) -> (1+x)(1-2x) up to scaling
        let p = RatPoly::from_int(&IntPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(p.square_free().degree(), 1);
        let q = RatPoly::from_int(&IntPolynomial::from_i64(&[1, 0, -1]));
        assert_eq!(q.square_free().degree(), 2);
    }
}

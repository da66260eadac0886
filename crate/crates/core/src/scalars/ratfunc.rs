//! Rational functions over ℚ in the generic parameters, kept reduced with a
//! monic denominator so that structural equality is mathematical equality.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, fmt_rational, MPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        RatFunc { num: MPoly::constant(q), den: MPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: MPoly::one() }
    }

    pub fn param(v: usize) -> Self {
        RatFunc::from_poly(MPoly::var(v))
    }

    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFunc { num: num.scale(&c.recip()), den: MPoly::one() };
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn both_constant(&self, other: &RatFunc) -> Option<(BigRational, BigRational)> {
        Some((self.as_rational()?, other.as_rational()?))
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if let Some((a, b)) = self.both_constant(other) {
            return RatFunc::from_rational(a + b);
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if let Some((a, b)) = self.both_constant(other) {
            return RatFunc::from_rational(a * b);
        }
        if let Some(c) = self.as_rational() {
            return RatFunc { num: other.num.scale(&c), den: other.den.clone() };
        }
        if let Some(c) = other.as_rational() {
            return RatFunc { num: self.num.scale(&c), den: self.den.clone() };
        }
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Some(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.den.is_constant() {
            return self.num.fmt_with(names);
        }
        format!("({})/({})", self.num.fmt_with(names), self.den.fmt_with(names))
    }

    /// True when the numerator has a single term and the denominator is 1.
    pub fn is_monomial(&self) -> bool {
        self.den.is_constant() && self.num.terms().count() <= 1
    }

    pub fn display_rational(q: &BigRational) -> String {
        fmt_rational(q)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("p{v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::poly::rational;

    #[test]
    fn reduces_to_lowest_terms() {
        let h = MPoly::var(0);
        let one = MPoly::one();
        // (h^2 - 1)/(h - 1) = h + 1
        let f = RatFunc::new(h.mul(&h).sub(&one), h.sub(&one));
        assert_eq!(f, RatFunc::from_poly(h.add(&one)));
    }

    #[test]
    fn field_identities() {
        let h = RatFunc::param(0);
        let g = RatFunc::param(1);
        let a = h.add(&RatFunc::from_rational(rational(1, 2)));
        let b = g.mul(&h).sub(&RatFunc::one());
        let q = a.mul(&b.inv().unwrap());
        assert_eq!(q.mul(&b), a);
        assert_eq!(a.sub(&a), RatFunc::zero());
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }
}

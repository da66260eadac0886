//! Exact coefficients.
//!
//! A [`Scalar`] is a finite sum `Σ c_u · exp(u)` where each `u` is a ℚ-linear
//! form in the declared exponent symbols and each `c_u` lies in
//! `ℚ(params)[ζ_N]/Φ_N`. Declared symbols are treated as generic, so
//! `exp(u) = 1` only when `u = 0` and distinct forms are linearly independent
//! over the coefficient field.
//!
//! Sums of distinct exponentials are not units; dividing by one reports
//! [`ScalarError::NotInvertible`]. Code that eliminates over scalars uses
//! fraction-free steps for that reason.

pub mod cyclo;
pub mod poly;
pub mod ratfunc;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use poly::{rational, MPoly};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible (sum of distinct exponential units)")]
    NotInvertible(String),
}

/// Declared parameters: generic symbols plus an optional cyclotomic order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTable {
    pub generic: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclotomic_order: Option<u32>,
}

impl ParamTable {
    pub fn new(generic: &[&str], cyclotomic_order: Option<u32>) -> Self {
        ParamTable {
            generic: generic.iter().map(|s| s.to_string()).collect(),
            cyclotomic_order,
        }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.generic.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> String {
        self.generic.get(i).cloned().unwrap_or_else(|| format!("p{i}"))
    }

    pub fn order(&self) -> u32 {
        self.cyclotomic_order.unwrap_or(1)
    }
}

/// ℚ-linear form in the exponent symbols (no constant term).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpForm(BTreeMap<usize, BigRational>);

impl ExpForm {
    pub fn zero() -> Self {
        ExpForm(BTreeMap::new())
    }

    pub fn symbol(v: usize, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(v, c);
        }
        ExpForm(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.0.iter().map(|(v, c)| (*v, c))
    }

    pub fn coeff(&self, v: usize) -> BigRational {
        self.0.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &ExpForm) -> ExpForm {
        let mut out = self.0.clone();
        for (v, c) in &other.0 {
            let e = out.entry(*v).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.remove(v);
            }
        }
        ExpForm(out)
    }

    pub fn scale(&self, c: &BigRational) -> ExpForm {
        if c.is_zero() {
            return ExpForm::zero();
        }
        ExpForm(self.0.iter().map(|(v, a)| (*v, a * c)).collect())
    }

    pub fn neg(&self) -> ExpForm {
        self.scale(&-BigRational::one())
    }

    /// Interpret a polynomial of degree ≤ 1 without constant term as a form.
    pub fn from_linear_poly(p: &MPoly) -> Option<ExpForm> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            if m.total_degree() != 1 {
                return None;
            }
            let v = m.exps().iter().position(|&e| e == 1)?;
            out.insert(v, c.clone());
        }
        Some(ExpForm(out))
    }

    pub fn fmt_with(&self, params: &ParamTable) -> String {
        let p = MPoly::zero();
        let poly = self
            .0
            .iter()
            .fold(p, |acc, (v, c)| acc.add(&MPoly::var(*v).scale(c)));
        poly.fmt_with(&|v| params.name(v))
    }
}

/// `exp(exponent) · ζ_order^root`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpUnit {
    pub exponent: ExpForm,
    pub root: i64,
    pub order: u32,
}

impl ExpUnit {
    pub fn one() -> Self {
        ExpUnit { exponent: ExpForm::zero(), root: 0, order: 1 }
    }

    pub fn exp(form: ExpForm) -> Self {
        ExpUnit { exponent: form, root: 0, order: 1 }
    }

    pub fn root_of_unity(order: u32, k: i64) -> Self {
        ExpUnit { exponent: ExpForm::zero(), root: k.rem_euclid(order as i64), order }
    }

    fn normalized(mut self) -> Self {
        self.root = self.root.rem_euclid(self.order as i64);
        self
    }

    pub fn mul(&self, other: &ExpUnit) -> ExpUnit {
        let order = cyclo::lcm_order(self.order, other.order);
        let root = self.root * (order / self.order) as i64 + other.root * (order / other.order) as i64;
        ExpUnit { exponent: self.exponent.add(&other.exponent), root, order }.normalized()
    }

    pub fn pow(&self, n: i64) -> ExpUnit {
        ExpUnit {
            exponent: self.exponent.scale(&BigRational::from_integer(n.into())),
            root: self.root * n,
            order: self.order,
        }
        .normalized()
    }

    pub fn inv(&self) -> ExpUnit {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero() && self.root.rem_euclid(self.order as i64) == 0
    }

    pub fn to_scalar(&self) -> Scalar {
        let coeff = cyclo::root_power(self.order, self.root);
        let mut terms = BTreeMap::new();
        terms.insert(self.exponent.clone(), coeff);
        Scalar { order: self.order, terms }.canonical()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    order: u32,
    terms: BTreeMap<ExpForm, Vec<RatFunc>>,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { order: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_ratfunc(RatFunc::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_ratfunc(RatFunc::from_int(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::from_ratfunc(RatFunc::from_rational(q))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(rational(n, d))
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(ExpForm::zero(), vec![r]);
        }
        Scalar { order: 1, terms }
    }

    pub fn param(v: usize) -> Self {
        Scalar::from_ratfunc(RatFunc::param(v))
    }

    pub fn exp(form: ExpForm) -> Self {
        ExpUnit::exp(form).to_scalar()
    }

    pub fn zeta(order: u32, k: i64) -> Self {
        ExpUnit::root_of_unity(order, k).to_scalar()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn canonical(mut self) -> Self {
        self.terms.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        if self.terms.is_empty() {
            self.order = 1;
            return self;
        }
        if self.order > 1 {
            // Descend to the smallest cyclotomic field containing every coefficient.
            let mut order = 1;
            for c in self.terms.values() {
                order = cyclo::lcm_order(order, cyclo::descend(c, self.order).0);
                if order == self.order {
                    return self;
                }
            }
            let from = self.order;
            self.order = order;
            for c in self.terms.values_mut() {
                let (d, v) = cyclo::descend(c, from);
                *c = cyclo::lift(&v, d, order);
            }
        }
        self
    }

    fn lifted(&self, order: u32) -> BTreeMap<ExpForm, Vec<RatFunc>> {
        if order == self.order {
            return self.terms.clone();
        }
        self.terms
            .iter()
            .map(|(k, c)| (k.clone(), cyclo::lift(c, self.order, order)))
            .collect()
    }

    fn lifted_cow(&self, order: u32) -> Cow<'_, BTreeMap<ExpForm, Vec<RatFunc>>> {
        if order == self.order {
            Cow::Borrowed(&self.terms)
        } else {
            Cow::Owned(self.lifted(order))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
            && self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(k, c)| k.is_zero() && c.len() == 1 && c[0].is_one())
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let order = cyclo::lcm_order(self.order, other.order);
        let mut terms = self.lifted(order);
        let b = other.lifted_cow(order);
        for (k, c) in b.iter() {
            match terms.get_mut(k) {
                Some(acc) => {
                    for (a, b) in acc.iter_mut().zip(c.iter()) {
                        *a = a.add(b);
                    }
                }
                None => {
                    terms.insert(k.clone(), c.clone());
                }
            }
        }
        Scalar { order, terms }.canonical()
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.iter().map(RatFunc::neg).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let order = cyclo::lcm_order(self.order, other.order);
        let (a, b) = (self.lifted_cow(order), other.lifted_cow(order));
        let mut terms: BTreeMap<ExpForm, Vec<RatFunc>> = BTreeMap::new();
        for (ka, ca) in a.iter() {
            for (kb, cb) in b.iter() {
                let k = ka.add(kb);
                let c = cyclo::mul(ca, cb, order);
                match terms.get_mut(&k) {
                    Some(acc) => {
                        for (x, y) in acc.iter_mut().zip(c.iter()) {
                            *x = x.add(y);
                        }
                    }
                    None => {
                        terms.insert(k, c);
                    }
                }
            }
        }
        Scalar { order, terms }.canonical()
    }

    pub fn scale_rational(&self, q: &BigRational) -> Scalar {
        self.mul(&Scalar::from_rational(q.clone()))
    }

    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.terms.len() != 1 {
            return Err(ScalarError::NotInvertible(self.to_string()));
        }
        let (k, c) = self.terms.iter().next().expect("one term");
        let inv = cyclo::inverse(c, self.order).ok_or(ScalarError::DivisionByZero)?;
        let mut terms = BTreeMap::new();
        terms.insert(k.neg(), inv);
        Ok(Scalar { order: self.order, terms }.canonical())
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Scalar, ScalarError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut b = base;
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// The scalar as an element of ℚ(params) when it has no exponential or
    /// cyclotomic part.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(RatFunc::zero());
        }
        let c = self.terms.get(&ExpForm::zero())?;
        if self.terms.len() != 1 || c[1..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(c[0].clone())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_ratfunc()?.as_rational()
    }

    /// Recognize `exp(form) · ζ^k` exactly.
    pub fn as_unit(&self) -> Option<ExpUnit> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        // The roots of unity in ℚ(ζ_n) are the 2n-th roots when n is odd.
        let n = self.order;
        let big = if n % 2 == 1 { 2 * n } else { n };
        let c = cyclo::lift(c, n, big);
        let r = (0..big as i64).find(|&r| cyclo::root_power(big, r) == c)?;
        let g = num_integer::gcd(r, big as i64).max(1);
        Some(ExpUnit { exponent: k.clone(), root: r / g, order: (big as i64 / g) as u32 })
    }

    /// Multiply by `exp(form)`.
    pub fn mul_exp(&self, form: &ExpForm) -> Scalar {
        if form.is_zero() {
            return self.clone();
        }
        Scalar {
            order: self.order,
            terms: self.terms.iter().map(|(k, c)| (k.add(form), c.clone())).collect(),
        }
    }

    pub fn exp_forms(&self) -> impl Iterator<Item = &ExpForm> {
        self.terms.keys()
    }

    /// Interpret a rational-function scalar of degree ≤ 1 without constant
    /// term as an exponent form.
    pub fn as_exp_form(&self) -> Option<ExpForm> {
        let r = self.as_ratfunc()?;
        if !r.is_polynomial() {
            return None;
        }
        ExpForm::from_linear_poly(r.numer())
    }

    pub fn fmt_with(&self, params: &ParamTable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        // "zeta" always denotes the declared primitive root ζ_N.
        let n = params.order();
        if n != self.order {
            if n % self.order != 0 {
                return self.fmt_order(params, &format!("zeta{}", self.order));
            }
            let lifted = Scalar { order: n, terms: self.lifted(n) };
            return lifted.fmt_order(params, "zeta");
        }
        self.fmt_order(params, "zeta")
    }

    fn fmt_order(&self, params: &ParamTable, zeta: &str) -> String {
        if let Some(u) = self.as_unit().filter(|u| self.order % u.order == 0) {
            let root = u.root * (self.order / u.order) as i64;
            if root != 0 {
                let mut s = match root {
                    1 => zeta.to_string(),
                    r => format!("{zeta}^{r}"),
                };
                if !u.exponent.is_zero() {
                    s = format!("{s}*exp({})", u.exponent.fmt_with(params));
                }
                return s;
            }
        }
        let names = |v: usize| params.name(v);
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let coeff = fmt_cyc(c, &names, zeta);
            if k.is_zero() {
                parts.push(coeff);
            } else {
                let e = format!("exp({})", k.fmt_with(params));
                if coeff == "1" {
                    parts.push(e);
                } else if coeff == "-1" {
                    parts.push(format!("-{e}"));
                } else if c.iter().filter(|x| !x.is_zero()).count() == 1 && c[0].is_monomial() {
                    parts.push(format!("{coeff}*{e}"));
                } else {
                    parts.push(format!("({coeff})*{e}"));
                }
            }
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    /// Numeric evaluation with parameters, exponentials and ζ substituted
    /// (used only as a sanity check in tests and never in exact paths).
    pub fn eval_f64(&self, params: &[f64]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in &self.terms {
            let e: f64 = k.coeffs().map(|(v, q)| to_f64(q) * params.get(v).copied().unwrap_or(0.0)).sum();
            let scale = e.exp();
            for (i, r) in c.iter().enumerate() {
                let num = r.numer().terms().map(|(m, q)| {
                    to_f64(q)
                        * m.exps()
                            .iter()
                            .enumerate()
                            .map(|(v, &p)| params.get(v).copied().unwrap_or(0.0).powi(p as i32))
                            .product::<f64>()
                });
                let den = r.denom().terms().map(|(m, q)| {
                    to_f64(q)
                        * m.exps()
                            .iter()
                            .enumerate()
                            .map(|(v, &p)| params.get(v).copied().unwrap_or(0.0).powi(p as i32))
                            .product::<f64>()
                });
                let val = num.sum::<f64>() / den.sum::<f64>();
                let angle = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
                re += scale * val * angle.cos();
                im += scale * val * angle.sin();
            }
        }
        (re, im)
    }
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn fmt_cyc(c: &[RatFunc], names: &dyn Fn(usize) -> String, zeta: &str) -> String {
    let nonzero: Vec<(usize, &RatFunc)> = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    let mut parts = Vec::new();
    for (i, x) in &nonzero {
        let coeff = x.fmt_with(names);
        let basis = match i {
            0 => String::new(),
            1 => zeta.to_string(),
            k => format!("{zeta}^{k}"),
        };
        if basis.is_empty() {
            parts.push(coeff);
        } else if coeff == "1" {
            parts.push(basis);
        } else if coeff == "-1" {
            parts.push(format!("-{basis}"));
        } else if x.is_monomial() {
            parts.push(format!("{coeff}*{basis}"));
        } else {
            parts.push(format!("({coeff})*{basis}"));
        }
    }
    if parts.len() == 1 {
        return parts.remove(0);
    }
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&ParamTable::default()))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }
}

/// Falling factorial `a (a-1) ⋯ (a-n+1)` of an integer.
pub fn falling_factorial(a: i64, n: u32) -> BigInt {
    (0..n as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn is_negative_rational(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> ExpForm {
        ExpForm::symbol(0, BigRational::one())
    }

    #[test]
    fn unit_group_law() {
        let e = Scalar::exp(t());
        assert_eq!(e.mul(&e), Scalar::exp(t().scale(&rational(2, 1))));
        assert_eq!(Scalar::ratio(1, 2).add(&Scalar::ratio(1, 2)), Scalar::one());
    }

    #[test]
    fn zeta_cubed_is_one() {
        let z = Scalar::zeta(3, 1);
        assert_eq!(z.mul(&Scalar::zeta(3, 2)), Scalar::one());
        assert!(ExpUnit::root_of_unity(3, 1).pow(3).is_one());
    }

    #[test]
    fn unit_pow_inverse_round_trip() {
        // exp(t)·ζ_4 to the power -1 is exp(-t)·ζ_4^3.
        let u = ExpUnit::exp(t()).mul(&ExpUnit::root_of_unity(4, 1));
        let v = u.pow(-1);
        assert_eq!(v, ExpUnit { exponent: t().neg(), root: 3, order: 4 });
        assert!(u.mul(&v).is_one());
        assert_eq!(u.to_scalar().mul(&v.to_scalar()), Scalar::one());
    }

    #[test]
    fn generic_exponentials_are_never_one() {
        let u = ExpUnit::exp(t().scale(&rational(2, 1)));
        assert!(!u.is_one());
        assert!(ExpUnit::one().is_one());
    }

    #[test]
    fn sums_of_units_are_not_invertible() {
        let s = Scalar::exp(t()).sub(&Scalar::one());
        assert!(matches!(s.inv(), Err(ScalarError::NotInvertible(_))));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_orders_lift() {
        let a = Scalar::zeta(2, 1);
        assert_eq!(a, Scalar::from_int(-1));
        let z3 = Scalar::zeta(3, 1);
        let z4 = Scalar::zeta(4, 1);
        let p = z3.mul(&z4);
        assert_eq!(p.as_unit().unwrap(), ExpUnit::root_of_unity(12, 7));
    }

    #[test]
    fn display_is_readable() {
        let params = ParamTable::new(&["h"], Some(6));
        let s = Scalar::exp(ExpForm::symbol(0, rational(1, 2)));
        assert_eq!(s.fmt_with(&params), "exp(1/2*h)");
        assert_eq!(Scalar::zeta(6, 2).fmt_with(&params), "zeta^2");
        assert_eq!(Scalar::ratio(-1, 2).fmt_with(&params), "-1/2");
    }
}

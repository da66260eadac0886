//! Sparse multivariate polynomials over ℚ in the declared parameters.
//!
//! Variables are identified by their index in the parameter table. Exponent
//! vectors carry no trailing zeros, so a polynomial is meaningful without
//! knowing how many parameters exist.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a parameter monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PMono(Vec<u32>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn var(v: usize, e: u32) -> Self {
        let mut exps = vec![0; v + 1];
        exps[v] = e;
        PMono(exps).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &PMono) -> PMono {
        let n = self.0.len().max(other.0.len());
        PMono((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &PMono) -> Option<PMono> {
        if other.0.len() > self.0.len() && other.0[self.0.len()..].iter().any(|&e| e > 0) {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for (i, &e) in self.0.iter().enumerate() {
            let d = other.exp(i);
            if d > e {
                return None;
            }
            out.push(e - d);
        }
        Some(PMono(out).trimmed())
    }

    fn with_exp(&self, v: usize, e: u32) -> PMono {
        let mut exps = self.0.clone();
        if exps.len() <= v {
            exps.resize(v + 1, 0);
        }
        exps[v] = e;
        PMono(exps).trimmed()
    }
}

// Lex order with the highest-index variable most significant.
impl Ord for PMono {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: BTreeMap<PMono, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(PMono::one(), c);
        }
        MPoly { terms }
    }

    pub fn var(v: usize) -> Self {
        MPoly::monomial(PMono::var(v, 1), BigRational::one())
    }

    pub fn monomial(m: PMono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMono, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(PMono::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.get(&PMono::one()).cloned();
        }
        None
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&PMono::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(PMono::total_degree).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.0.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    fn leading(&self) -> Option<(&PMono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: PMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, m: &PMono, c: &BigRational) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        assert!(!divisor.is_zero(), "exact division by the zero polynomial");
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients as a polynomial in variable `v` (index = power of `v`).
    fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    fn from_coeffs_in(v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(v, d as u32), a.clone());
            }
        }
        out
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => MPoly::zero(),
        }
    }

    fn content_in(&self, v: usize) -> MPoly {
        self.coeffs_in(v)
            .iter()
            .filter(|c| !c.is_zero())
            .fold(MPoly::zero(), |acc, c| gcd(&acc, c))
    }

    /// Evaluate with all parameters replaced by rationals.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        acc
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = fmt_pmono(m, names);
            if mono.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&a), mono));
            }
        }
        out
    }
}

fn fmt_pmono(m: &PMono, names: &dyn Fn(usize) -> String) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { names(v) } else { format!("{}^{}", names(v), e) })
        .collect();
    parts.join("*")
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn pseudo_rem(p: &MPoly, q: &MPoly, v: usize) -> MPoly {
    let dq = q.degree_in(v);
    let qc = q.coeffs_in(v);
    let lc = qc[dq as usize].clone();
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let rc = r.coeffs_in(v);
        let lr = rc[dr as usize].clone();
        let shift = MPoly::from_coeffs_in(v, &{
            let mut c = vec![MPoly::zero(); (dr - dq) as usize + 1];
            c[(dr - dq) as usize] = lr;
            c
        });
        r = r.mul(&lc).sub(&q.mul(&shift));
    }
    r
}

fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    let c = p.content_in(v);
    if c.is_zero() {
        return MPoly::zero();
    }
    p.div_exact(&c).expect("content divides its polynomial")
}

/// Monic greatest common divisor (primitive remainder sequences, recursive
/// on the highest variable).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant polynomial has a variable");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd(a, &b.content_in(v));
    }
    if db == 0 {
        return gcd(&a.content_in(v), b);
    }
    let content = gcd(&a.content_in(v), &b.content_in(v));
    let (mut p, mut q) = (primitive_part(a, v), primitive_part(b, v));
    if da < db {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
    content.mul(&primitive_part(&p, v)).monic()
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("p{v}")))
    }
}

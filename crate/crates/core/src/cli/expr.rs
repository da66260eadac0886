//! The expression grammar embedded in document strings:
//! integers, rationals `p/q`, names, `exp(…)`, `+ - * ^`, parentheses.
//! Exponents are integer literals; `q^1/2` is rejected as ambiguous.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::hopf::{Element, GroupData, Monomial};
use crate::scalars::{ParamTable, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown name `{name}`")]
    UnknownName { offset: usize, name: String },
    #[error("{message}")]
    Invalid { offset: usize, message: String },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::UnknownName { offset, .. } | ExprError::Invalid { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = s[..pos].chars().count();
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |c| c.0);
            out.push((col, Tok::Int(s[pos..end].parse().expect("digits"))));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |c| c.0);
            out.push((col, Tok::Name(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^()·".contains(c) {
            out.push((col, Tok::Op(if c == '·' { '*' } else { c })));
            i += 1;
        } else {
            return Err(ExprError::Syntax { offset: col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// A commutative polynomial in named symbols with Laurent exponents.
pub type NamePoly = BTreeMap<BTreeMap<String, i64>, Scalar>;

fn constant(c: Scalar) -> NamePoly {
    let mut p = NamePoly::new();
    if !c.is_zero() {
        p.insert(BTreeMap::new(), c);
    }
    p
}

fn add(a: &NamePoly, b: &NamePoly, sign: i64) -> NamePoly {
    let mut out = a.clone();
    for (m, c) in b {
        let c = if sign < 0 { c.neg() } else { c.clone() };
        let e = out.entry(m.clone()).or_insert_with(Scalar::zero);
        *e = e.add(&c);
        if e.is_zero() {
            out.remove(m);
        }
    }
    out
}

fn mul(a: &NamePoly, b: &NamePoly) -> NamePoly {
    let mut out = NamePoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            for (n, e) in mb {
                *m.entry(n.clone()).or_insert(0) += e;
            }
            m.retain(|_, e| *e != 0);
            let e = out.entry(m.clone()).or_insert_with(Scalar::zero);
            *e = e.add(&ca.mul(cb));
            if e.is_zero() {
                out.remove(&m);
            }
        }
    }
    out
}

fn as_constant(p: &NamePoly) -> Option<Scalar> {
    match p.len() {
        0 => Some(Scalar::zero()),
        1 => p.get(&BTreeMap::new()).cloned(),
        _ => None,
    }
}

/// Names an expression may use besides parameters, `zeta` and `exp`.
pub struct Scope<'a> {
    pub params: &'a ParamTable,
    pub symbols: &'a [String],
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    scope: &'a Scope<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NamePoly, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(&acc, &self.term()?, 1);
            } else if self.eat('-') {
                acc = add(&acc, &self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NamePoly, ExprError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = mul(&acc, &self.unary()?);
        }
        if self.peek() == Some(&Tok::Op('/')) {
            return self.syntax("division is only allowed between integer literals");
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NamePoly, ExprError> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(add(&NamePoly::new(), &v, -1));
        }
        self.power()
    }

    fn small_int(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let n: i64 = n.try_into().map_err(|_| ExprError::Syntax { offset: self.offset(), message: "exponent too large".into() })?;
                Ok(if neg { -n } else { n })
            }
            _ => self.syntax("exponent must be an integer literal"),
        }
    }

    fn power(&mut self) -> Result<NamePoly, ExprError> {
        let start = self.offset();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let n = if self.eat('(') {
            let n = self.small_int()?;
            if !self.eat(')') {
                return self.syntax("exponent must be an integer literal");
            }
            n
        } else {
            let n = self.small_int()?;
            if self.peek() == Some(&Tok::Op('/')) {
                return self.syntax("ambiguous exponent followed by `/`; use parentheses");
            }
            n
        };
        pow(&base, n).ok_or(ExprError::Invalid { offset: start, message: "negative power of a non-monomial".into() })
    }

    fn atom(&mut self) -> Result<NamePoly, ExprError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = num_rational::BigRational::from_integer(n);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != 0.into() => {
                            self.pos += 1;
                            q /= num_rational::BigRational::from_integer(d);
                        }
                        _ => return self.syntax("expected a nonzero integer denominator"),
                    }
                }
                Ok(constant(Scalar::from_rational(q)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.syntax("expected `)`");
                }
                Ok(v)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if name == "exp" {
                    if !self.eat('(') {
                        return self.syntax("expected `(` after exp");
                    }
                    let v = self.expr()?;
                    if !self.eat(')') {
                        return self.syntax("expected `)`");
                    }
                    let form = as_constant(&v).and_then(|c| c.as_exp_form()).ok_or(ExprError::Invalid {
                        offset,
                        message: "exp(…) needs a linear form in the parameters".into(),
                    })?;
                    return Ok(constant(Scalar::exp(form)));
                }
                if let Some(i) = self.scope.params.index(&name) {
                    return Ok(constant(Scalar::param(i)));
                }
                if name == "zeta" {
                    if let Some(n) = self.scope.params.cyclotomic_order {
                        return Ok(constant(Scalar::zeta(n, 1)));
                    }
                }
                if self.scope.symbols.contains(&name) {
                    let mut m = BTreeMap::new();
                    m.insert(name, 1);
                    let mut p = NamePoly::new();
                    p.insert(m, Scalar::one());
                    return Ok(p);
                }
                Err(ExprError::UnknownName { offset, name })
            }
            _ => self.syntax("expected a number, a name or `(`"),
        }
    }
}

fn pow(base: &NamePoly, n: i64) -> Option<NamePoly> {
    if n >= 0 {
        let mut acc = constant(Scalar::one());
        for _ in 0..n {
            acc = mul(&acc, base);
        }
        return Some(acc);
    }
    if base.len() != 1 {
        return None;
    }
    let (m, c) = base.iter().next()?;
    let c = c.pow(n).ok()?;
    let m: BTreeMap<String, i64> = m.iter().map(|(k, e)| (k.clone(), e * n)).collect();
    let mut out = NamePoly::new();
    out.insert(m, c);
    Some(out)
}

pub fn parse(text: &str, scope: &Scope<'_>) -> Result<NamePoly, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), scope };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_scalar(text: &str, params: &ParamTable) -> Result<Scalar, ExprError> {
    let v = parse(text, &Scope { params, symbols: &[] })?;
    Ok(as_constant(&v).expect("no symbols in scope"))
}

pub fn parse_element(text: &str, g: &GroupData, params: &ParamTable) -> Result<Element, ExprError> {
    let names = g.generator_names();
    let v = parse(text, &Scope { params, symbols: &names })?;
    let (k, m) = (g.k(), g.m());
    let mut out = Element::zero();
    for (mono, c) in &v {
        let mut w = Monomial::one(k, m);
        for (name, &e) in mono {
            let i = names.iter().position(|n| n == name).expect("in scope");
            if i < k {
                w.torus[i] = e as i32;
            } else if e < 0 {
                return Err(ExprError::Invalid { offset: 0, message: format!("negative power of {name}") });
            } else {
                w.filt[i - k] = e as u32;
            }
        }
        out.add_term(w, c.clone());
    }
    Ok(out)
}

/// Coordinates of a linear combination of `basis` names.
pub fn parse_linear(text: &str, basis: &[String], params: &ParamTable) -> Result<Vec<Scalar>, ExprError> {
    let v = parse(text, &Scope { params, symbols: basis })?;
    let mut out = vec![Scalar::zero(); basis.len()];
    for (mono, c) in &v {
        let mut it = mono.iter();
        match (it.next(), it.next()) {
            (Some((name, 1)), None) => {
                let i = basis.iter().position(|n| n == name).expect("in scope");
                out[i] = c.clone();
            }
            _ => return Err(ExprError::Invalid { offset: 0, message: "expected a linear combination".into() }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::heisenberg_group;

    #[test]
    fn numbers_and_params() {
        let p = ParamTable::new(&["h"], None);
        let s = parse_scalar("1/2*h - 3", &p).unwrap();
        assert_eq!(s, Scalar::ratio(1, 2).mul(&Scalar::param(0)).sub(&Scalar::from_int(3)));
        assert_eq!(parse_scalar("(h+1)^2", &p).unwrap(), parse_scalar("h*h + 2*h + 1", &p).unwrap());
        let e = parse_scalar("exp(2*h)", &p).unwrap();
        assert!(e.as_unit().is_some());
        let z = parse_scalar("zeta^2", &ParamTable::new(&[], Some(3))).unwrap();
        assert_eq!(z, Scalar::zeta(3, 2));
    }

    #[test]
    fn ambiguous_exponent() {
        let p = ParamTable::new(&["q"], None);
        let err = parse_scalar("q^1/2", &p).unwrap_err();
        assert!(matches!(err, ExprError::Syntax { offset: 3, .. }), "{err:?}");
        assert!(err.to_string().contains("parentheses"));
        assert!(matches!(parse_scalar("q/2", &p), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_scalar("q^(1/2)", &p), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn unknown_names() {
        let p = ParamTable::default();
        let err = parse_scalar("1 + w", &p).unwrap_err();
        assert_eq!(err, ExprError::UnknownName { offset: 4, name: "w".into() });
    }

    #[test]
    fn elements() {
        let g = heisenberg_group();
        let p = ParamTable::default();
        let e = parse_element("x·y - 2*z^2", &g, &p).unwrap();
        assert_eq!(e.len(), 2);
        assert!(parse_element("z^-1", &g, &p).is_err());
        let b = crate::models::borel_group();
        let e = parse_element("x^-1 * y", &b, &p).unwrap();
        assert_eq!(e.keys().next().unwrap().torus, vec![-1]);
    }

    #[test]
    fn linear() {
        let basis: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
        let p = ParamTable::new(&["h"], None);
        let v = parse_linear("h*Y + Z", &basis, &p).unwrap();
        assert_eq!(v, vec![Scalar::zero(), Scalar::param(0), Scalar::one()]);
        assert!(parse_linear("Y*Z", &basis, &p).is_err());
    }
}

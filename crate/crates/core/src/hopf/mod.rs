//! O(G) = O(T) ⊗ O(U): grouplike torus variables `x_i`, filtered variables
//! `z_j` with `Δ(z_j) = z_j⊗1 + 1⊗z_j + Z_j`.

mod lincomb;
mod monomial;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

pub use lincomb::LinComb;
pub use monomial::Monomial;

use crate::scalars::{ParamTable, Scalar};

pub type Element = LinComb<Monomial>;
pub type Tensor2 = LinComb<(Monomial, Monomial)>;
pub type TensorN = LinComb<Vec<Monomial>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `Z_j` uses only `z_1..z_{j-1}`; the structure theorems apply.
    Strict,
    /// `Z_j` may also use torus variables (e.g. the Borel subgroup).
    Extended,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilteredVar {
    pub name: String,
    pub degree: u32,
    /// `Z_j` as a list of `(P', P'')`.
    pub correction: Vec<(Element, Element)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupData {
    pub mode: Mode,
    pub torus: Vec<String>,
    pub filtered: Vec<FilteredVar>,
}

impl GroupData {
    pub fn k(&self) -> usize {
        self.torus.len()
    }

    pub fn m(&self) -> usize {
        self.filtered.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.filtered.iter().map(|f| f.degree).collect()
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.k(), self.m())
    }

    pub fn one(&self) -> Element {
        Element::basis(self.one_monomial())
    }

    pub fn x(&self, i: usize, e: i32) -> Monomial {
        Monomial::torus_var(self.k(), self.m(), i, e)
    }

    pub fn z(&self, j: usize) -> Monomial {
        Monomial::filt_var(self.k(), self.m(), j, 1)
    }

    /// Generators in declared order: torus first, then filtered.
    pub fn generators(&self) -> Vec<Monomial> {
        (0..self.k()).map(|i| self.x(i, 1)).chain((0..self.m()).map(|j| self.z(j))).collect()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.torus.iter().chain(self.filtered.iter().map(|f| &f.name)).cloned().collect()
    }

    pub fn variable(&self, name: &str) -> Option<Monomial> {
        if let Some(i) = self.torus.iter().position(|n| n == name) {
            return Some(self.x(i, 1));
        }
        self.filtered.iter().position(|f| f.name == name).map(|j| self.z(j))
    }

    pub fn wdeg(&self, m: &Monomial) -> u32 {
        m.filt.iter().zip(&self.filtered).map(|(b, f)| b * f.degree).sum()
    }

    pub fn element_wdeg(&self, e: &Element) -> u32 {
        e.keys().map(|m| self.wdeg(m)).max().unwrap_or(0)
    }

    pub fn counit_monomial(m: &Monomial) -> Scalar {
        if m.is_torus() {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }

    pub fn counit(&self, f: &Element) -> Scalar {
        f.iter()
            .filter(|(m, _)| m.is_torus())
            .fold(Scalar::zero(), |acc, (_, c)| acc.add(c))
    }

    pub fn mul(&self, f: &Element, g: &Element) -> Element {
        let mut out = Element::zero();
        for (a, c) in f.iter() {
            for (b, d) in g.iter() {
                out.add_term(a.mul(b), c.mul(d));
            }
        }
        out
    }

    pub fn pow(&self, f: &Element, n: u32) -> Element {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, f))
    }

    /// Δ(z_j) as a tensor.
    pub fn generator_coproduct(&self, j: usize) -> Tensor2 {
        let one = self.one_monomial();
        let z = self.z(j);
        let mut out = Tensor2::zero();
        out.add_term((z.clone(), one.clone()), Scalar::one());
        out.add_term((one, z), Scalar::one());
        for (p, q) in &self.filtered[j].correction {
            out.add_scaled(&tensor(p, q), &Scalar::one());
        }
        out
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &a) in m.torus.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(self.torus[i].clone()),
                a => parts.push(format!("{}^{}", self.torus[i], a)),
            }
        }
        for (j, &b) in m.filt.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(self.filtered[j].name.clone()),
                b => parts.push(format!("{}^{}", self.filtered[j].name, b)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Leading monomial first.
    pub fn fmt_element(&self, e: &Element, params: &ParamTable) -> String {
        fmt_lincomb(e.iter().rev().map(|(m, c)| (self.fmt_monomial(m), c)), params)
    }

    pub fn fmt_tensor(&self, t: &Tensor2, params: &ParamTable) -> String {
        fmt_lincomb(
            t.iter().rev().map(|((a, b), c)| {
                (format!("{}⊗{}", self.fmt_monomial(a), self.fmt_monomial(b)), c)
            }),
            params,
        )
    }
}

pub fn tensor(p: &Element, q: &Element) -> Tensor2 {
    let mut out = Tensor2::zero();
    for (a, c) in p.iter() {
        for (b, d) in q.iter() {
            out.add_term((a.clone(), b.clone()), c.mul(d));
        }
    }
    out
}

pub fn tensor_mul(s: &Tensor2, t: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::zero();
    for ((a1, a2), c) in s.iter() {
        for ((b1, b2), d) in t.iter() {
            out.add_term((a1.mul(b1), a2.mul(b2)), c.mul(d));
        }
    }
    out
}

/// Render `Σ c·basis` as text; `basis == "1"` prints the bare coefficient.
pub fn fmt_lincomb<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>, params: &ParamTable) -> String {
    let mut out = String::new();
    for (basis, c) in terms {
        let cs = c.fmt_with(params);
        let (neg, body) = match cs.strip_prefix('-') {
            Some(rest) if !needs_parens(rest) => (true, rest.to_string()),
            _ => (false, cs.clone()),
        };
        let body = if needs_parens(&body) { format!("({body})") } else { body };
        let term = if basis == "1" {
            body
        } else if body == "1" {
            basis
        } else {
            format!("{body}*{basis}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn needs_parens(s: &str) -> bool {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return true,
            '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

/// Memoized coproduct of monomials. Confined to one task.
pub struct CoproductCtx<'a> {
    group: &'a GroupData,
    generators: Vec<Tensor2>,
    memo: RefCell<HashMap<Monomial, Rc<Tensor2>>>,
}

impl<'a> CoproductCtx<'a> {
    pub fn new(group: &'a GroupData) -> Self {
        CoproductCtx {
            group,
            generators: (0..group.m()).map(|j| group.generator_coproduct(j)).collect(),
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &'a GroupData {
        self.group
    }

    pub fn monomial(&self, m: &Monomial) -> Rc<Tensor2> {
        if let Some(t) = self.memo.borrow().get(m) {
            return t.clone();
        }
        let out = match (0..m.filt.len()).rev().find(|&j| m.filt[j] > 0) {
            None => Tensor2::basis((m.clone(), m.clone())),
            Some(j) => {
                let rest = m.lower_filt(j).expect("positive exponent");
                tensor_mul(&self.monomial(&rest), &self.generators[j])
            }
        };
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(m.clone(), out.clone());
        out
    }

    pub fn element(&self, f: &Element) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (m, c) in f.iter() {
            out.add_scaled(&self.monomial(m), c);
        }
        out
    }

    /// n-fold coproduct, obtained by repeatedly splitting the last leg.
    pub fn iterated(&self, f: &Element, n: usize) -> TensorN {
        assert!(n >= 1, "iterated coproduct needs n ≥ 1");
        let mut cur: TensorN = f.iter().map(|(m, c)| (vec![m.clone()], c.clone())).collect();
        for _ in 1..n {
            let mut next = TensorN::zero();
            for (legs, c) in cur.iter() {
                let (last, init) = legs.split_last().expect("non-empty legs");
                for ((a, b), d) in self.monomial(last).iter() {
                    let mut v = init.to_vec();
                    v.push(a.clone());
                    v.push(b.clone());
                    next.add_term(v, c.mul(d));
                }
            }
            cur = next;
        }
        cur
    }

    /// Iterated coproduct splitting the first leg instead (for coassociativity checks).
    pub fn iterated_left(&self, f: &Element, n: usize) -> TensorN {
        let mut cur: TensorN = f.iter().map(|(m, c)| (vec![m.clone()], c.clone())).collect();
        for _ in 1..n {
            let mut next = TensorN::zero();
            for (legs, c) in cur.iter() {
                let (first, tail) = legs.split_first().expect("non-empty legs");
                for ((a, b), d) in self.monomial(first).iter() {
                    let mut v = vec![a.clone(), b.clone()];
                    v.extend_from_slice(tail);
                    next.add_term(v, c.mul(d));
                }
            }
            cur = next;
        }
        cur
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Counit,
    Coassociativity,
    Augmentation,
    Filtration,
    Degrees,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub generator: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<AxiomFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn vars_used(e: &Element) -> (bool, Vec<usize>) {
    let mut torus = false;
    let mut filt = Vec::new();
    for m in e.keys() {
        torus |= m.uses_torus();
        for (j, &b) in m.filt.iter().enumerate() {
            if b > 0 && !filt.contains(&j) {
                filt.push(j);
            }
        }
    }
    (torus, filt)
}

pub fn validate_hopf(g: &GroupData, params: &ParamTable) -> ValidationReport {
    let mut failures = Vec::new();
    let mut fail = |axiom, generator: &str, witness: String| {
        failures.push(AxiomFailure { axiom, generator: generator.to_string(), witness })
    };
    let ctx = CoproductCtx::new(g);
    let degrees = g.degrees();
    if g.mode == Mode::Strict {
        if let Some(f) = g.filtered.first() {
            if f.degree != 1 {
                fail(Axiom::Degrees, &f.name, format!("deg({}) = {}", f.name, f.degree));
            }
        }
        if let Some(f) = g.filtered.get(1) {
            if f.degree != 1 {
                fail(Axiom::Degrees, &f.name, format!("deg({}) = {}", f.name, f.degree));
            }
        }
    }
    for w in degrees.windows(2).enumerate() {
        let (j, pair) = w;
        if pair[0] > pair[1] {
            let n = &g.filtered[j + 1].name;
            fail(Axiom::Degrees, n, format!("degrees decrease at {n}"));
        }
    }
    for (j, f) in g.filtered.iter().enumerate() {
        let z = Element::basis(g.z(j));
        let dz = ctx.element(&z);
        // (ε⊗id)Δ and (id⊗ε)Δ
        let mut left = Element::zero();
        let mut right = Element::zero();
        for ((a, b), c) in dz.iter() {
            left.add_term(b.clone(), c.mul(&GroupData::counit_monomial(a)));
            right.add_term(a.clone(), c.mul(&GroupData::counit_monomial(b)));
        }
        for side in [left, right] {
            let diff = side.sub(&z);
            if !diff.is_zero() {
                fail(Axiom::Counit, &f.name, g.fmt_element(&diff, params));
            }
        }
        let lhs = ctx.iterated(&z, 3);
        let rhs = ctx.iterated_left(&z, 3);
        let diff = lhs.sub(&rhs);
        if let Some((legs, _)) = diff.leading() {
            let w: Vec<String> = legs.iter().map(|m| g.fmt_monomial(m)).collect();
            fail(Axiom::Coassociativity, &f.name, w.join("⊗"));
        }
        if g.mode == Mode::Strict && j < 2 && g.m() >= 2 && !f.correction.is_empty() {
            fail(Axiom::Filtration, &f.name, format!("Z_{} must vanish", j + 1));
        }
        for (p, q) in &f.correction {
            for leg in [p, q] {
                let e = g.counit(leg);
                if !e.is_zero() {
                    fail(
                        Axiom::Augmentation,
                        &f.name,
                        format!("ε({}) = {}", g.fmt_element(leg, params), e.fmt_with(params)),
                    );
                }
            }
            let (pt, pf) = vars_used(p);
            let (qt, qf) = vars_used(q);
            let (dp, dq) = (g.element_wdeg(p), g.element_wdeg(q));
            let shown = format!("{}⊗{}", g.fmt_element(p, params), g.fmt_element(q, params));
            let legal = match g.mode {
                Mode::Strict => {
                    !pt && !qt
                        && pf.iter().chain(&qf).all(|&i| i < j)
                        && dp + dq <= f.degree
                }
                // One leg may carry torus variables and a lower-degree factor, the
                // other may reach z_j itself; either orientation is allowed.
                Mode::Extended => {
                    let oriented = |af: &[usize], bt: bool, bf: &[usize], da: u32| {
                        !bt && af.iter().all(|&i| i < j) && bf.iter().all(|&i| i <= j) && da < f.degree
                    };
                    oriented(&pf, qt, &qf, dp) || oriented(&qf, pt, &pf, dq)
                }
            };
            if !legal {
                fail(Axiom::Filtration, &f.name, shown);
            }
        }
    }
    ValidationReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heisenberg(correction_right_is_one: bool) -> GroupData {
        let k = 0;
        let m = 3;
        let x = Element::basis(Monomial::filt_var(k, m, 0, 1));
        let y = Element::basis(Monomial::filt_var(k, m, 1, 1));
        let one = Element::basis(Monomial::one(k, m));
        let right = if correction_right_is_one { one } else { y };
        GroupData {
            mode: Mode::Strict,
            torus: vec![],
            filtered: vec![
                FilteredVar { name: "x".into(), degree: 1, correction: vec![] },
                FilteredVar { name: "y".into(), degree: 1, correction: vec![] },
                FilteredVar { name: "z".into(), degree: 2, correction: vec![(x, right)] },
            ],
        }
    }

    #[test]
    fn heisenberg_is_valid_and_corruption_is_caught() {
        let p = ParamTable::default();
        assert!(validate_hopf(&heisenberg(false), &p).is_valid());
        let bad = validate_hopf(&heisenberg(true), &p);
        assert!(bad.failures.iter().any(|f| f.axiom == Axiom::Counit));
        assert!(bad.failures.iter().any(|f| f.axiom == Axiom::Augmentation));
    }

    #[test]
    fn square_of_heisenberg_z() {
        let g = heisenberg(false);
        let ctx = CoproductCtx::new(&g);
        let z = Element::basis(g.z(2));
        let z2 = g.mul(&z, &z);
        // Oracle: square the three-term coproduct by hand.
        let dz = ctx.element(&z);
        assert_eq!(ctx.element(&z2), tensor_mul(&dz, &dz));
        assert_eq!(ctx.element(&z2).len(), 6);
        let shown = g.fmt_tensor(&ctx.element(&z2), &ParamTable::default());
        assert_eq!(shown, "x^2⊗y^2 + 2*x*z⊗y + z^2⊗1 + 2*x⊗y*z + 2*z⊗z + 1⊗z^2");
    }

    #[test]
    fn iterated_coproduct_is_order_independent() {
        let g = heisenberg(false);
        let ctx = CoproductCtx::new(&g);
        let z = Element::basis(g.z(2));
        let a = ctx.iterated(&z, 3);
        assert_eq!(a, ctx.iterated_left(&z, 3));
        // z in one of three legs, or x⊗y in two of three.
        assert_eq!(a.len(), 6);
        let b = ctx.iterated(&z, 4);
        assert_eq!(b, ctx.iterated_left(&z, 4));
        assert_eq!(b.len(), 10);
        assert_eq!(ctx.iterated(&z, 1), z.iter().map(|(m, c)| (vec![m.clone()], c.clone())).collect());
    }
}

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use super::{TwistError, Twister};
use crate::cocycle::{Cocycle, Evaluator};
use crate::hopf::{fmt_lincomb, Element, GroupData, LinComb, Mode, Monomial};
use crate::scalars::{ParamTable, Scalar};

/// Linear combination of normal-form words. The word `Monomial{α, β}` stands
/// for the ordered twisted product `x_1^α1 ⋯ x_k^αk · z_1^β1 ⋯ z_m^βm`.
pub type TwistedElement = LinComb<Monomial>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Torus { index: usize, inverse: bool },
    Filt(usize),
}

impl Letter {
    pub fn word(self, k: usize, m: usize) -> Monomial {
        match self {
            Letter::Torus { index, inverse } => Monomial::torus_var(k, m, index, if inverse { -1 } else { 1 }),
            Letter::Filt(j) => Monomial::filt_var(k, m, j, 1),
        }
    }
}

/// Letters of a normal-form word, left to right.
pub fn letters(w: &Monomial) -> Vec<Letter> {
    let mut out = Vec::new();
    for (i, &a) in w.torus.iter().enumerate() {
        let l = Letter::Torus { index: i, inverse: a < 0 };
        out.extend(std::iter::repeat_n(l, a.unsigned_abs() as usize));
    }
    for (j, &b) in w.filt.iter().enumerate() {
        out.extend(std::iter::repeat_n(Letter::Filt(j), b as usize));
    }
    out
}

fn last_filt(w: &Monomial) -> Option<usize> {
    (0..w.filt.len()).rev().find(|&j| w.filt[j] > 0)
}

/// Maps normal-form words to the commutative basis by iterated twisted
/// products, and back by a triangular solve.
pub struct Expander<'a> {
    tw: Twister<'a>,
    inverses: Vec<Element>,
    memo: RefCell<HashMap<Monomial, Rc<Element>>>,
}

impl<'a> Expander<'a> {
    pub fn new(group: &'a GroupData, cocycle: &Cocycle) -> Result<Self, TwistError> {
        let tw = Twister::new(group, cocycle)?;
        let inverses = (0..group.k())
            .map(|i| {
                let (x, xi) = (group.x(i, 1), group.x(i, -1));
                let c = tw.cocycle().eval_monomials(&x, &xi)?;
                let inv = c.inv().map_err(|_| TwistError::NonUnitLeading(group.fmt_monomial(&x)))?;
                Ok(Element::term(xi, inv))
            })
            .collect::<Result<_, TwistError>>()?;
        Ok(Expander { tw, inverses, memo: RefCell::new(HashMap::new()) })
    }

    pub fn twister(&self) -> &Twister<'a> {
        &self.tw
    }

    pub fn group(&self) -> &'a GroupData {
        self.tw.group()
    }

    /// The letter as an element of `O(G)_J`; `x_i^{-1}` is the twisted inverse.
    pub fn letter_element(&self, l: Letter) -> Element {
        let g = self.group();
        match l {
            Letter::Torus { index, inverse: true } => self.inverses[index].clone(),
            _ => Element::basis(l.word(g.k(), g.m())),
        }
    }

    pub fn expand_word(&self, w: &Monomial) -> Result<Rc<Element>, TwistError> {
        if let Some(v) = self.memo.borrow().get(w) {
            return Ok(v.clone());
        }
        let g = self.group();
        let out = if w.is_one() {
            g.one()
        } else {
            let (prev, letter) = match last_filt(w) {
                Some(j) => (w.lower_filt(j).expect("positive"), Letter::Filt(j)),
                None => {
                    let i = (0..w.torus.len()).rev().find(|&i| w.torus[i] != 0).expect("non-trivial word");
                    let mut prev = w.clone();
                    let inverse = w.torus[i] < 0;
                    prev.torus[i] += if inverse { 1 } else { -1 };
                    (prev, Letter::Torus { index: i, inverse })
                }
            };
            self.tw.product(&*self.expand_word(&prev)?, &self.letter_element(letter))?
        };
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(w.clone(), out.clone());
        Ok(out)
    }

    pub fn expand(&self, t: &TwistedElement) -> Result<Element, TwistError> {
        let mut out = Element::zero();
        for (w, c) in t.iter() {
            out.add_scaled(&*self.expand_word(w)?, c);
        }
        Ok(out)
    }

    /// Twisted product of the letters taken left to right, in the commutative basis.
    pub fn product_of_letters(&self, ls: &[Letter]) -> Result<Element, TwistError> {
        let mut acc = self.group().one();
        for &l in ls {
            acc = self.tw.product(&acc, &self.letter_element(l))?;
        }
        Ok(acc)
    }

    /// Normal form of a commutative-basis element. Each word expands to a unit
    /// multiple of itself plus terms of lower weighted degree, so peeling off
    /// top-degree monomials terminates.
    pub fn to_nf(&self, f: &Element) -> Result<TwistedElement, TwistError> {
        let g = self.group();
        let mut rest = f.clone();
        let mut out = TwistedElement::zero();
        while let Some(top) = rest.keys().max_by_key(|m| (g.wdeg(m), (*m).clone())).cloned() {
            let c = rest.coeff(&top);
            let e = self.expand_word(&top)?;
            let u = e.coeff(&top);
            let q = c.div(&u).map_err(|_| TwistError::NonUnitLeading(g.fmt_monomial(&top)))?;
            out.add_term(top.clone(), q.clone());
            rest.add_scaled(&e, &q.neg());
            if !rest.coeff(&top).is_zero() {
                return Err(TwistError::NonUnitLeading(g.fmt_monomial(&top)));
            }
        }
        Ok(out)
    }
}

/// Commutation relations of `O(G)_J` in normal-form words.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub group: GroupData,
    /// `λ_ij = R^J(x_i, x_j)`, so `x_i·x_j = λ_ij x_j·x_i`.
    pub lambda: Vec<Vec<Scalar>>,
    /// `x_i^{-1}·z_j·x_i`, giving `z_j·x_i = x_i·(…)`.
    pub conj_plus: Vec<Vec<TwistedElement>>,
    /// `x_i·z_j·x_i^{-1} = z_j + p_ij`.
    pub conj_minus: Vec<Vec<TwistedElement>>,
    /// `p_ij` in the commutative basis.
    pub p: Vec<Vec<Element>>,
    /// `C_lj = z_l·z_j − z_j·z_l` for `l > j`, indexed `[l][j]`; empty for `l ≤ j`.
    pub comm: Vec<Vec<TwistedElement>>,
    /// Whether the closed formulas for `C` and `p` in terms of `Q` agree with
    /// the values computed from twisted products.
    pub commutator_formula_holds: bool,
    pub conjugation_formula_holds: bool,
}

impl Presentation {
    pub fn derive(group: &GroupData, cocycle: &Cocycle) -> Result<Self, TwistError> {
        let ex = Expander::new(group, cocycle)?;
        Self::from_expander(&ex, cocycle)
    }

    pub fn from_expander(ex: &Expander<'_>, cocycle: &Cocycle) -> Result<Self, TwistError> {
        let g = ex.group();
        let (k, m) = (g.k(), g.m());
        let tw = ex.twister();
        let rj = Evaluator::with_context(g, tw.cocycle().coproducts().clone(), &cocycle.r_form());
        let mut lambda = vec![vec![Scalar::one(); k]; k];
        for (i, row) in lambda.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = rj.eval_monomials(&g.x(i, 1), &g.x(j, 1))?;
            }
        }
        let z = |j: usize| Element::basis(g.z(j));
        let mut conj_plus = vec![vec![]; k];
        let mut conj_minus = vec![vec![]; k];
        let mut p = vec![vec![]; k];
        let mut conjugation_formula_holds = true;
        for i in 0..k {
            let x = ex.letter_element(Letter::Torus { index: i, inverse: false });
            let xi = ex.letter_element(Letter::Torus { index: i, inverse: true });
            for j in 0..m {
                let plus = tw.product(&tw.product(&xi, &z(j))?, &x)?;
                let minus = tw.product(&tw.product(&x, &z(j))?, &xi)?;
                let pij = minus.sub(&z(j));
                let xm = Element::basis(g.x(i, 1));
                let mut formula = g.one().scale(&tw.cocycle().q(&xm, &z(j))?);
                for (a, b) in &g.filtered[j].correction {
                    formula.add_scaled(a, &tw.cocycle().q(&xm, b)?);
                }
                conjugation_formula_holds &= formula == pij;
                conj_plus[i].push(ex.to_nf(&plus)?);
                conj_minus[i].push(ex.to_nf(&minus)?);
                p[i].push(pij);
            }
        }
        let mut comm = vec![vec![]; m];
        let mut commutator_formula_holds = true;
        let q = |a: &Element, b: &Element| tw.cocycle().q(a, b);
        for l in 0..m {
            for j in 0..l {
                let c = tw.product(&z(l), &z(j))?.sub(&tw.product(&z(j), &z(l))?);
                let mut formula = g.one().scale(&q(&z(l), &z(j))?);
                let (zl, zj) = (&g.filtered[l].correction, &g.filtered[j].correction);
                for (a, b) in zl {
                    formula.add_scaled(a, &q(b, &z(j))?);
                }
                for (a, b) in zj {
                    formula.add_scaled(a, &q(&z(l), b)?);
                }
                for (a, b) in zl {
                    for (a2, b2) in zj {
                        formula.add_scaled(&g.mul(a, a2), &q(b, b2)?);
                    }
                }
                commutator_formula_holds &= formula == c;
                let nf = ex.to_nf(&c)?;
                if g.mode == Mode::Strict && nf.keys().any(|w| w.uses_torus() || w.filt[l..].iter().any(|&e| e > 0)) {
                    return Err(TwistError::FiltrationViolation {
                        left: g.filtered[l].name.clone(),
                        right: g.filtered[j].name.clone(),
                        value: g.fmt_element(&c, &ParamTable::default()),
                    });
                }
                comm[l].push(nf);
            }
        }
        Ok(Presentation {
            group: g.clone(),
            lambda,
            conj_plus,
            conj_minus,
            p,
            comm,
            commutator_formula_holds,
            conjugation_formula_holds,
        })
    }

    pub fn k(&self) -> usize {
        self.group.k()
    }

    pub fn m(&self) -> usize {
        self.group.m()
    }

    /// Letters of the algebra: `x_i`, `x_i^{-1}`, `z_j`.
    pub fn generator_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for i in 0..self.k() {
            out.push(Letter::Torus { index: i, inverse: false });
            out.push(Letter::Torus { index: i, inverse: true });
        }
        out.extend((0..self.m()).map(Letter::Filt));
        out
    }

    pub fn fmt_word(&self, w: &Monomial) -> String {
        let g = &self.group;
        let mut parts = Vec::new();
        for (i, &a) in w.torus.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(g.torus[i].clone()),
                _ => parts.push(format!("{}^{}", g.torus[i], a)),
            }
        }
        for (j, &b) in w.filt.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(g.filtered[j].name.clone()),
                _ => parts.push(format!("{}^{}", g.filtered[j].name, b)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }

    /// Leading word first.
    pub fn fmt(&self, t: &TwistedElement, params: &ParamTable) -> String {
        fmt_lincomb(t.iter().rev().map(|(w, c)| (self.fmt_word(w), c)), params)
    }
}

/// Rewriting with the relations of a [`Presentation`]. Memo tables are local
/// to one rewriter.
pub struct Rewriter<'p> {
    pres: &'p Presentation,
    memo: RefCell<HashMap<(Monomial, Letter), Rc<TwistedElement>>>,
    steps: Cell<usize>,
    limit: usize,
}

impl<'p> Rewriter<'p> {
    pub fn new(pres: &'p Presentation) -> Self {
        Rewriter { pres, memo: RefCell::new(HashMap::new()), steps: Cell::new(0), limit: 2_000_000 }
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.pres
    }

    fn tick(&self) -> Result<(), TwistError> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.limit {
            return Err(TwistError::RewriteLimit(self.limit));
        }
        Ok(())
    }

    /// `w · letter` in normal form.
    pub fn mul_letter(&self, w: &Monomial, l: Letter) -> Result<Rc<TwistedElement>, TwistError> {
        let key = (w.clone(), l);
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        self.tick()?;
        let p = self.pres;
        let out = match l {
            Letter::Torus { index: i, inverse } => match last_filt(w) {
                None => {
                    let e: i64 = if inverse { -1 } else { 1 };
                    let mut c = Scalar::one();
                    for l in i + 1..p.k() {
                        let n = w.torus[l] as i64 * e;
                        if n != 0 {
                            c = c.mul(&p.lambda[l][i].pow(n)?);
                        }
                    }
                    let mut nw = w.clone();
                    nw.torus[i] += e as i32;
                    TwistedElement::term(nw, c)
                }
                Some(lz) => {
                    let prev = w.lower_filt(lz).expect("positive");
                    let moved = self.mul_letter(&prev, l)?;
                    let psi = if inverse { &p.conj_minus[i][lz] } else { &p.conj_plus[i][lz] };
                    self.mul(&moved, psi)?
                }
            },
            Letter::Filt(j) => match last_filt(w).filter(|&lz| lz > j) {
                None => {
                    let mut nw = w.clone();
                    nw.filt[j] += 1;
                    TwistedElement::basis(nw)
                }
                Some(lz) => {
                    let prev = w.lower_filt(lz).expect("positive");
                    let a = self.mul_letter(&prev, l)?;
                    let a = self.mul_element_letter(&a, Letter::Filt(lz))?;
                    let b = self.mul(&TwistedElement::basis(prev), &p.comm[lz][j])?;
                    a.add(&b)
                }
            },
        };
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn mul_element_letter(&self, a: &TwistedElement, l: Letter) -> Result<TwistedElement, TwistError> {
        let mut out = TwistedElement::zero();
        for (w, c) in a.iter() {
            out.add_scaled(&*self.mul_letter(w, l)?, c);
        }
        Ok(out)
    }

    pub fn mul(&self, a: &TwistedElement, b: &TwistedElement) -> Result<TwistedElement, TwistError> {
        let mut out = TwistedElement::zero();
        for (w, c) in b.iter() {
            let mut cur = a.clone();
            for l in letters(w) {
                cur = self.mul_element_letter(&cur, l)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    pub fn normal_form(&self, ls: &[Letter]) -> Result<TwistedElement, TwistError> {
        let g = &self.pres.group;
        let mut cur = TwistedElement::basis(g.one_monomial());
        for &l in ls {
            cur = self.mul_element_letter(&cur, l)?;
        }
        Ok(cur)
    }

    pub fn commutator(&self, a: &TwistedElement, b: &TwistedElement) -> Result<TwistedElement, TwistError> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?))
    }
}

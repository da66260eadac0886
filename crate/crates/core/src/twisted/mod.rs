//! One-sided twisted algebras `O(G)_J` and `_{J^{-1}}O(G)`, the two-sided
//! twist `m^J`, and the normal-form engine.

mod nf;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

pub use nf::{letters, Expander, Letter, Presentation, Rewriter, TwistedElement};

use crate::cocycle::{Cocycle, CocycleError, Evaluator};
use crate::hopf::{CoproductCtx, Element, GroupData, Monomial};
use crate::scalars::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("commutator [{left}, {right}] = {value} leaves the subalgebra generated by earlier variables")]
    FiltrationViolation { left: String, right: String, value: String },
    #[error("leading coefficient of {0} is not a unit")]
    NonUnitLeading(String),
    #[error("rewriting did not terminate within {0} steps")]
    RewriteLimit(usize),
}

/// Products on `O(G)` twisted by a fixed cocycle, memoized on monomial pairs.
pub struct Twister<'a> {
    group: &'a GroupData,
    cop: Rc<CoproductCtx<'a>>,
    j: Evaluator<'a>,
    jinv: Evaluator<'a>,
    right: RefCell<HashMap<(Monomial, Monomial), Rc<Element>>>,
}

impl<'a> Twister<'a> {
    pub fn new(group: &'a GroupData, cocycle: &Cocycle) -> Result<Self, TwistError> {
        cocycle.validate(group)?;
        let cop = Rc::new(CoproductCtx::new(group));
        Ok(Twister {
            group,
            j: Evaluator::with_context(group, cop.clone(), cocycle),
            jinv: Evaluator::with_context(group, cop.clone(), &cocycle.inverse()),
            cop,
            right: RefCell::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &'a GroupData {
        self.group
    }

    pub fn cocycle(&self) -> &Evaluator<'a> {
        &self.j
    }

    pub fn inverse_cocycle(&self) -> &Evaluator<'a> {
        &self.jinv
    }

    /// `m_J(a ⊗ b) = Σ a1 b1 J(a2, b2)` on monomials.
    pub fn product_monomials(&self, a: &Monomial, b: &Monomial) -> Result<Rc<Element>, TwistError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.right.borrow().get(&key) {
            return Ok(v.clone());
        }
        let (da, db) = (self.cop.monomial(a), self.cop.monomial(b));
        let mut out = Element::zero();
        for ((a1, a2), x) in da.iter() {
            for ((b1, b2), y) in db.iter() {
                let v = self.j.eval_monomials(a2, b2)?;
                if !v.is_zero() {
                    out.add_term(a1.mul(b1), x.mul(y).mul(&v));
                }
            }
        }
        let out = Rc::new(out);
        self.right.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// Twisted-on-the-right product, expressed in the commutative basis.
    pub fn product(&self, f: &Element, g: &Element) -> Result<Element, TwistError> {
        let mut out = Element::zero();
        for (a, x) in f.iter() {
            for (b, y) in g.iter() {
                out.add_scaled(&*self.product_monomials(a, b)?, &x.mul(y));
            }
        }
        Ok(out)
    }

    /// `_{J^{-1}}m(a ⊗ b) = Σ J^{-1}(a1, b1) a2 b2`.
    pub fn left_product(&self, f: &Element, g: &Element) -> Result<Element, TwistError> {
        let (df, dg) = (self.cop.element(f), self.cop.element(g));
        let mut out = Element::zero();
        for ((a1, a2), x) in df.iter() {
            for ((b1, b2), y) in dg.iter() {
                let v = self.jinv.eval_monomials(a1, b1)?;
                if !v.is_zero() {
                    out.add_term(a2.mul(b2), x.mul(y).mul(&v));
                }
            }
        }
        Ok(out)
    }

    /// `m^J(a ⊗ b) = Σ J^{-1}(a1, b1) a2 b2 J(a3, b3)`.
    pub fn hopf_product(&self, f: &Element, g: &Element) -> Result<Element, TwistError> {
        let (df, dg) = (self.cop.iterated(f, 3), self.cop.iterated(g, 3));
        let mut out = Element::zero();
        for (a, x) in df.iter() {
            for (b, y) in dg.iter() {
                let u = self.jinv.eval_monomials(&a[0], &b[0])?;
                if u.is_zero() {
                    continue;
                }
                let v = self.j.eval_monomials(&a[2], &b[2])?;
                if !v.is_zero() {
                    out.add_term(a[1].mul(&b[1]), x.mul(y).mul(&u).mul(&v));
                }
            }
        }
        Ok(out)
    }

    /// `Σ (f·g)_1 ⊗ (f·g)_2` minus `Σ f1·g1 ⊗ f2·g2` for the two-sided product;
    /// zero exactly when Δ is multiplicative on this pair.
    pub fn hopf_coproduct_defect(&self, f: &Element, g: &Element) -> Result<crate::hopf::Tensor2, TwistError> {
        let lhs = self.cop.element(&self.hopf_product(f, g)?);
        let (df, dg) = (self.cop.element(f), self.cop.element(g));
        let mut rhs = crate::hopf::Tensor2::zero();
        for ((a1, a2), x) in df.iter() {
            for ((b1, b2), y) in dg.iter() {
                let p = self.hopf_product(&Element::basis(a1.clone()), &Element::basis(b1.clone()))?;
                let q = self.hopf_product(&Element::basis(a2.clone()), &Element::basis(b2.clone()))?;
                let t = crate::hopf::tensor(&p, &q);
                rhs.add_scaled(&t, &x.mul(y));
            }
        }
        Ok(lhs.sub(&rhs))
    }
}

#[cfg(test)]
mod tests;

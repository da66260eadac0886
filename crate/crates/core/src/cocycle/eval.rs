use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_rational::BigRational;

use super::{Cocycle, CocycleError, ExplicitSeries, FamilyKind, OperatorFamily, Side};
use crate::hopf::{CoproductCtx, Element, GroupData, Monomial, Tensor2};
use crate::lie::{Bivector, Derivation, DerivationTag};
use crate::scalars::{factorial, ExpUnit, Scalar};

struct PreparedExp {
    scale: Scalar,
    derivations: Vec<Derivation>,
    eigen: Vec<Option<Vec<BigRational>>>,
    /// Toral–toral entries of r, exponentiated in closed form.
    toral_pairs: Vec<(usize, usize, Scalar)>,
    /// Remaining entries, already multiplied by the scale.
    rest: Vec<(usize, usize, Scalar)>,
    toral_memo: RefCell<HashMap<(Monomial, Monomial), Scalar>>,
}

enum Node<'a> {
    Trivial,
    Bichar(Vec<Vec<ExpUnit>>),
    Exp(PreparedExp),
    Series(ExplicitSeries),
    Conv(Box<Evaluator<'a>>, Box<Evaluator<'a>>),
    Inverse(Box<Evaluator<'a>>),
    Transposed(Box<Evaluator<'a>>),
}

/// Evaluation context for one cocycle with a per-pair memo table. Not shared
/// between tasks; build one per task.
pub struct Evaluator<'a> {
    group: &'a GroupData,
    cop: Rc<CoproductCtx<'a>>,
    node: Node<'a>,
    memo: RefCell<HashMap<(Monomial, Monomial), Scalar>>,
}

impl<'a> Evaluator<'a> {
    /// Evaluator using closed forms for inverses and transposes where known.
    pub fn new(group: &'a GroupData, cocycle: &Cocycle) -> Result<Self, CocycleError> {
        cocycle.validate(group)?;
        Ok(Self::build(group, Rc::new(CoproductCtx::new(group)), &cocycle.simplify()))
    }

    /// Evaluator that takes the cocycle literally: inverses by the triangular
    /// recursion, transposes by swapping, convolutions by Sweedler sums.
    pub fn literal(group: &'a GroupData, cocycle: &Cocycle) -> Result<Self, CocycleError> {
        cocycle.validate(group)?;
        Ok(Self::build(group, Rc::new(CoproductCtx::new(group)), cocycle))
    }

    pub fn with_context(group: &'a GroupData, cop: Rc<CoproductCtx<'a>>, cocycle: &Cocycle) -> Self {
        Self::build(group, cop, &cocycle.simplify())
    }

    fn build(group: &'a GroupData, cop: Rc<CoproductCtx<'a>>, c: &Cocycle) -> Self {
        let child = |c: &Cocycle| Box::new(Self::build(group, cop.clone(), c));
        let node = match c {
            Cocycle::Trivial => Node::Trivial,
            Cocycle::Bicharacter(m) => Node::Bichar(m.clone()),
            Cocycle::ExpBivector(e) => Node::Exp(prepare_exp(group, &e.scale, &e.r, &e.derivations)),
            Cocycle::Series(s) => Node::Series(s.clone()),
            Cocycle::Convolution(fs) => match fs.len() {
                0 => Node::Trivial,
                1 => return Self::build(group, cop, &fs[0]),
                _ => Node::Conv(child(&fs[0]), child(&Cocycle::Convolution(fs[1..].to_vec()))),
            },
            Cocycle::Inverse(inner) => Node::Inverse(child(inner)),
            Cocycle::Transposed(inner) => Node::Transposed(child(inner)),
        };
        Evaluator { group, cop, node, memo: RefCell::new(HashMap::new()) }
    }

    pub fn group(&self) -> &'a GroupData {
        self.group
    }

    pub fn coproducts(&self) -> &Rc<CoproductCtx<'a>> {
        &self.cop
    }

    /// `J(m1, m2)` on monomials.
    pub fn eval_monomials(&self, m1: &Monomial, m2: &Monomial) -> Result<Scalar, CocycleError> {
        let key = (m1.clone(), m2.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = match &self.node {
            Node::Trivial => GroupData::counit_monomial(m1).mul(&GroupData::counit_monomial(m2)),
            Node::Bichar(m) => eval_bichar(m, m1, m2),
            Node::Exp(p) => self.eval_exp(p, m1, m2)?,
            Node::Series(s) => self.eval_series(s, m1, m2)?,
            Node::Conv(a, b) => {
                let (d1, d2) = (self.cop.monomial(m1), self.cop.monomial(m2));
                let mut acc = Scalar::zero();
                for ((a1, a2), c) in d1.iter() {
                    for ((b1, b2), d) in d2.iter() {
                        let x = a.eval_monomials(a1, b1)?;
                        if x.is_zero() {
                            continue;
                        }
                        let y = b.eval_monomials(a2, b2)?;
                        acc = acc.add(&c.mul(d).mul(&x).mul(&y));
                    }
                }
                acc
            }
            Node::Inverse(inner) => self.eval_inverse(inner, m1, m2)?,
            Node::Transposed(inner) => inner.eval_monomials(m2, m1)?,
        };
        self.memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// Bilinear extension to elements.
    pub fn eval(&self, f: &Element, g: &Element) -> Result<Scalar, CocycleError> {
        let mut acc = Scalar::zero();
        for (m1, c) in f.iter() {
            for (m2, d) in g.iter() {
                acc = acc.add(&c.mul(d).mul(&self.eval_monomials(m1, m2)?));
            }
        }
        Ok(acc)
    }

    /// `Q(f, g) = J(f, g) − J(g, f)`.
    pub fn q(&self, f: &Element, g: &Element) -> Result<Scalar, CocycleError> {
        Ok(self.eval(f, g)?.sub(&self.eval(g, f)?))
    }

    /// Triangular solve of `Σ J^{-1}(a1, b1) J(a2, b2) = ε(a)ε(b)`. The only
    /// term with `a1 = a, b1 = b` pairs them with the torus parts; every
    /// other term has smaller weighted degree.
    fn eval_inverse(&self, inner: &Evaluator<'a>, m1: &Monomial, m2: &Monomial) -> Result<Scalar, CocycleError> {
        let g = self.group;
        let (mut t1, mut t2) = (None, None);
        let total = g.wdeg(m1) + g.wdeg(m2);
        let mut acc = GroupData::counit_monomial(m1).mul(&GroupData::counit_monomial(m2));
        let (d1, d2) = (self.cop.monomial(m1), self.cop.monomial(m2));
        for ((a1, a2), c) in d1.iter() {
            for ((b1, b2), d) in d2.iter() {
                if a1 == m1 && b1 == m2 {
                    if t1.is_some() || !a2.is_torus() || !b2.is_torus() || !c.mul(d).is_one() {
                        return Err(CocycleError::InverseNotFound(format!(
                            "leading coproduct term of ({}, {}) is not grouplike",
                            g.fmt_monomial(m1),
                            g.fmt_monomial(m2)
                        )));
                    }
                    t1 = Some(a2.clone());
                    t2 = Some(b2.clone());
                    continue;
                }
                let j = inner.eval_monomials(a2, b2)?;
                if j.is_zero() {
                    continue;
                }
                if g.wdeg(a1) + g.wdeg(b1) >= total {
                    return Err(CocycleError::InverseNotFound("coproduct is not filtered".into()));
                }
                acc = acc.sub(&c.mul(d).mul(&self.eval_monomials(a1, b1)?).mul(&j));
            }
        }
        let (Some(t1), Some(t2)) = (t1, t2) else {
            return Err(CocycleError::InverseNotFound(format!(
                "coproduct of ({}, {}) has no leading term",
                g.fmt_monomial(m1),
                g.fmt_monomial(m2)
            )));
        };
        let lead = inner.eval_monomials(&t1, &t2)?;
        acc.div(&lead).map_err(|e| {
            CocycleError::InverseNotFound(format!(
                "J({}, {}) = {} is not invertible: {e}",
                g.fmt_monomial(&t1),
                g.fmt_monomial(&t2),
                lead
            ))
        })
    }

    fn eval_exp(&self, p: &PreparedExp, m1: &Monomial, m2: &Monomial) -> Result<Scalar, CocycleError> {
        let g = self.group;
        let bound = g.wdeg(m1) + g.wdeg(m2);
        let mut term = Tensor2::basis((m1.clone(), m2.clone()));
        let mut sum = term.clone();
        let mut n = 0u32;
        while !term.is_zero() {
            n += 1;
            if n > bound + 1 {
                return Err(CocycleError::NonTerminatingSeries {
                    left: g.fmt_monomial(m1),
                    right: g.fmt_monomial(m2),
                    bound: bound + 1,
                });
            }
            let mut next = Tensor2::zero();
            let inv_n = Scalar::ratio(1, n as i64);
            for ((a, b), c) in term.iter() {
                let mut left: HashMap<usize, Element> = HashMap::new();
                let mut right: HashMap<usize, Element> = HashMap::new();
                let c = c.mul(&inv_n);
                for (da, db, r) in &p.rest {
                    let la = left.entry(*da).or_insert_with(|| p.derivations[*da].apply_monomial(g, a));
                    if la.is_zero() {
                        continue;
                    }
                    let rb = right.entry(*db).or_insert_with(|| p.derivations[*db].apply_monomial(g, b));
                    if rb.is_zero() {
                        continue;
                    }
                    let coeff = c.mul(r);
                    for (x, cx) in la.iter() {
                        let cxc = coeff.mul(cx);
                        for (y, cy) in rb.iter() {
                            next.add_term((x.clone(), y.clone()), cxc.mul(cy));
                        }
                    }
                }
            }
            term = next;
            sum.add_scaled(&term, &Scalar::one());
        }
        let mut acc = Scalar::zero();
        for ((a, b), c) in sum.iter() {
            if !a.is_torus() || !b.is_torus() {
                continue;
            }
            acc = acc.add(&c.mul(&self.toral_factor(p, a, b)?));
        }
        Ok(acc)
    }

    fn toral_factor(&self, p: &PreparedExp, a: &Monomial, b: &Monomial) -> Result<Scalar, CocycleError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = p.toral_memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.toral_factor_uncached(p, a, b)?;
        p.toral_memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn toral_factor_uncached(&self, p: &PreparedExp, a: &Monomial, b: &Monomial) -> Result<Scalar, CocycleError> {
        let k = self.group.k();
        let mut lambda = Scalar::zero();
        for (da, db, r) in &p.toral_pairs {
            let (ea, eb) = (p.eigen[*da].as_ref(), p.eigen[*db].as_ref());
            let (Some(ea), Some(eb)) = (ea, eb) else { continue };
            let chi = Derivation::character(ea, k, a) * Derivation::character(eb, k, b);
            lambda = lambda.add(&r.scale_rational(&chi));
        }
        if lambda.is_zero() {
            return Ok(Scalar::one());
        }
        let exponent = lambda.mul(&p.scale);
        let form = exponent.as_exp_form().ok_or_else(|| CocycleError::NotExponentiable(exponent.to_string()))?;
        Ok(Scalar::exp(form))
    }

    fn eval_series(&self, s: &ExplicitSeries, m1: &Monomial, m2: &Monomial) -> Result<Scalar, CocycleError> {
        let g = self.group;
        let bound = match s.terminates {
            Side::Left => g.wdeg(m1),
            Side::Right => g.wdeg(m2),
        };
        let left = family_values(g, &s.left, m1, bound + 1);
        let right = family_values(g, &s.right, m2, bound + 1);
        let tail = match s.terminates {
            Side::Left => &left[bound as usize + 1],
            Side::Right => &right[bound as usize + 1],
        };
        if !tail.is_zero() {
            return Err(CocycleError::NonTerminatingSeries {
                left: g.fmt_monomial(m1),
                right: g.fmt_monomial(m2),
                bound: bound + 1,
            });
        }
        let mut acc = Scalar::zero();
        let mut cpow = Scalar::one();
        for n in 0..=bound as usize {
            let e = g.counit(&left[n]).mul(&g.counit(&right[n]));
            if !e.is_zero() {
                let inv_fact = Scalar::from_rational(BigRational::new(1.into(), factorial(n as u32)));
                acc = acc.add(&e.mul(&cpow).mul(&inv_fact));
            }
            cpow = cpow.mul(&s.coefficient);
        }
        Ok(acc)
    }
}

/// `[F_0 m, F_1 m, …, F_n m]` for an operator family.
fn family_values(g: &GroupData, f: &OperatorFamily, m: &Monomial, n: u32) -> Vec<Element> {
    let mut out = vec![Element::basis(m.clone())];
    for i in 0..n {
        let prev = out.last().expect("non-empty");
        let mut next = f.derivation.apply(g, prev);
        if f.kind == FamilyKind::Falling && i > 0 {
            next = next.sub(&prev.scale(&Scalar::from_int(i as i64)));
        }
        out.push(next);
    }
    out
}

fn eval_bichar(m: &[Vec<ExpUnit>], m1: &Monomial, m2: &Monomial) -> Scalar {
    if !m1.is_torus() || !m2.is_torus() {
        return Scalar::zero();
    }
    let mut u = ExpUnit::one();
    for (i, &a) in m1.torus.iter().enumerate() {
        for (j, &b) in m2.torus.iter().enumerate() {
            let e = a as i64 * b as i64;
            if e != 0 {
                u = u.mul(&m[i][j].pow(e));
            }
        }
    }
    u.to_scalar()
}

fn prepare_exp(g: &GroupData, scale: &BigRational, r: &Bivector, derivations: &[Derivation]) -> PreparedExp {
    let scale = Scalar::from_rational(scale.clone());
    let eigen: Vec<Option<Vec<BigRational>>> = derivations
        .iter()
        .map(|d| (d.tag == DerivationTag::Toral).then(|| d.eigenvalues(g)).flatten())
        .collect();
    let mut toral_pairs = Vec::new();
    let mut rest = Vec::new();
    for a in 0..r.dim() {
        for b in 0..r.dim() {
            let c = &r.matrix[a][b];
            if c.is_zero() {
                continue;
            }
            if eigen[a].is_some() && eigen[b].is_some() {
                toral_pairs.push((a, b, c.clone()));
            } else {
                rest.push((a, b, c.mul(&scale)));
            }
        }
    }
    PreparedExp { scale, derivations: derivations.to_vec(), eigen, toral_pairs, rest, toral_memo: RefCell::new(HashMap::new()) }
}

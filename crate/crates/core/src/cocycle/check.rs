use std::rc::Rc;

use super::{Cocycle, CocycleError, Evaluator};
use crate::hopf::{CoproductCtx, GroupData, Monomial};
use crate::par::{self, Exec};
use crate::scalars::Scalar;

/// Finite set of monomials: torus exponents in `[-torus_box, torus_box]`
/// (or `[0, torus_box]` when `nonnegative`), filtered part of weighted degree
/// at most `filtered_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleBounds {
    pub torus_box: i32,
    pub filtered_degree: u32,
    pub nonnegative: bool,
    /// Optional cap on `Σ|α_i|` plus the weighted filtered degree.
    pub total_degree: Option<u32>,
}

impl TripleBounds {
    pub fn new(torus_box: i32, filtered_degree: u32) -> Self {
        TripleBounds { torus_box, filtered_degree, nonnegative: false, total_degree: None }
    }

    /// Monomials of total degree at most `d`.
    pub fn total(d: u32) -> Self {
        TripleBounds { total_degree: Some(d), ..Self::new(d as i32, d) }
    }

    pub fn monomials(&self, g: &GroupData) -> Vec<Monomial> {
        let lo = if self.nonnegative { 0 } else { -self.torus_box };
        let mut tori: Vec<Vec<i32>> = vec![vec![]];
        for _ in 0..g.k() {
            tori = tori
                .into_iter()
                .flat_map(|t| {
                    (lo..=self.torus_box).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        let degrees = g.degrees();
        let mut filts: Vec<Vec<u32>> = vec![vec![]];
        for &d in &degrees {
            filts = filts
                .into_iter()
                .flat_map(|f| {
                    let used: u32 = f.iter().zip(&degrees).map(|(e, d)| e * d).sum();
                    let room = (self.filtered_degree - used) / d.max(1);
                    (0..=room).map(move |e| {
                        let mut f = f.clone();
                        f.push(e);
                        f
                    })
                })
                .collect();
        }
        let mut out: Vec<Monomial> =
            tori.iter().flat_map(|t| filts.iter().map(move |f| Monomial::new(t.clone(), f.clone()))).collect();
        if let Some(d) = self.total_degree {
            out.retain(|m| m.torus_total() + m.weighted_degree(&degrees) <= d);
        }
        out.sort();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    LeftNormalization,
    RightNormalization,
    Cocycle,
    LeftInverse,
    RightInverse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomViolation {
    pub kind: ViolationKind,
    pub arguments: Vec<Monomial>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn evaluator<'a>(g: &'a GroupData, c: &Cocycle) -> Evaluator<'a> {
    Evaluator::with_context(g, Rc::new(CoproductCtx::new(g)), c)
}

/// Checks `J(a, 1) = ε(a) = J(1, a)` and
/// `Σ J(a1 b1, c) J(a2, b2) = Σ J(a, b1 c1) J(b2, c2)` on every triple of
/// monomials in the bounds.
pub fn axiom_check(g: &GroupData, c: &Cocycle, bounds: &TripleBounds, exec: Exec) -> Result<AxiomReport, CocycleError> {
    c.validate(g)?;
    let ms = bounds.monomials(g);
    let one = g.one_monomial();
    let mut violations = Vec::new();
    let ev = evaluator(g, c);
    for a in &ms {
        let e = GroupData::counit_monomial(a);
        let r = ev.eval_monomials(a, &one)?;
        if r != e {
            violations.push(AxiomViolation {
                kind: ViolationKind::RightNormalization,
                arguments: vec![a.clone(), one.clone()],
                lhs: r,
                rhs: e.clone(),
            });
        }
        let l = ev.eval_monomials(&one, a)?;
        if l != e {
            violations.push(AxiomViolation {
                kind: ViolationKind::LeftNormalization,
                arguments: vec![one.clone(), a.clone()],
                lhs: l,
                rhs: e,
            });
        }
    }
    let n = ms.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
    let results = par::map_init(
        exec,
        &triples,
        || evaluator(g, c),
        |ev, &(i, j, k)| -> Result<Option<AxiomViolation>, CocycleError> {
            let (a, b, cc) = (&ms[i], &ms[j], &ms[k]);
            let cop = ev.coproducts().clone();
            let (da, db, dc) = (cop.monomial(a), cop.monomial(b), cop.monomial(cc));
            let mut lhs = Scalar::zero();
            for ((a1, a2), x) in da.iter() {
                for ((b1, b2), y) in db.iter() {
                    let v = ev.eval_monomials(a2, b2)?;
                    if v.is_zero() {
                        continue;
                    }
                    lhs = lhs.add(&x.mul(y).mul(&v).mul(&ev.eval_monomials(&a1.mul(b1), cc)?));
                }
            }
            let mut rhs = Scalar::zero();
            for ((b1, b2), x) in db.iter() {
                for ((c1, c2), y) in dc.iter() {
                    let v = ev.eval_monomials(b2, c2)?;
                    if v.is_zero() {
                        continue;
                    }
                    rhs = rhs.add(&x.mul(y).mul(&v).mul(&ev.eval_monomials(a, &b1.mul(c1))?));
                }
            }
            Ok((lhs != rhs).then(|| AxiomViolation {
                kind: ViolationKind::Cocycle,
                arguments: vec![a.clone(), b.clone(), cc.clone()],
                lhs,
                rhs,
            }))
        },
    );
    for r in results {
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok(AxiomReport { checked: ms.len() * 2 + triples.len(), violations })
}

/// Checks `J^{-1} * J = ε⊗ε = J * J^{-1}` on every pair in the bounds, with
/// `J^{-1}` computed by the triangular recursion.
pub fn inverse_check(g: &GroupData, c: &Cocycle, bounds: &TripleBounds, exec: Exec) -> Result<AxiomReport, CocycleError> {
    c.validate(g)?;
    let ms = bounds.monomials(g);
    let n = ms.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let inv = c.inverse();
    let init = || {
        let cop = Rc::new(CoproductCtx::new(g));
        let j = Evaluator::with_context(g, cop.clone(), c);
        let ji = Evaluator::literal(g, &inv).expect("validated");
        (cop, j, ji)
    };
    let results = par::map_init(exec, &pairs, init, |(cop, j, ji), &(p, q)| -> Result<Vec<AxiomViolation>, CocycleError> {
        let (a, b) = (&ms[p], &ms[q]);
        let (da, db) = (cop.monomial(a), cop.monomial(b));
        let e = GroupData::counit_monomial(a).mul(&GroupData::counit_monomial(b));
        let (mut left, mut right) = (Scalar::zero(), Scalar::zero());
        for ((a1, a2), x) in da.iter() {
            for ((b1, b2), y) in db.iter() {
                let w = x.mul(y);
                left = left.add(&w.mul(&ji.eval_monomials(a1, b1)?).mul(&j.eval_monomials(a2, b2)?));
                right = right.add(&w.mul(&j.eval_monomials(a1, b1)?).mul(&ji.eval_monomials(a2, b2)?));
            }
        }
        let mut out = Vec::new();
        for (kind, v) in [(ViolationKind::LeftInverse, left), (ViolationKind::RightInverse, right)] {
            if v != e {
                out.push(AxiomViolation { kind, arguments: vec![a.clone(), b.clone()], lhs: v, rhs: e.clone() });
            }
        }
        Ok(out)
    });
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok(AxiomReport { checked: pairs.len(), violations })
}

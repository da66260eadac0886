use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LieAlgebra, LieError};
use crate::hopf::{CoproductCtx, Element, GroupData, Monomial, Tensor2};
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivationTag {
    /// Every generator is an eigenvector with rational eigenvalue.
    Toral,
    /// Kills torus generators and strictly lowers the weighted degree of
    /// every filtered generator.
    Nilpotent,
}

impl DerivationTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DerivationTag::Toral => "toral",
            DerivationTag::Nilpotent => "nilpotent",
        }
    }
}

/// A derivation of O(G) given by its values on the generators (torus first).
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub name: String,
    pub tag: DerivationTag,
    pub images: Vec<Element>,
}

impl Derivation {
    pub fn apply_monomial(&self, g: &GroupData, m: &Monomial) -> Element {
        let k = g.k();
        let mut out = Element::zero();
        for (i, &a) in m.torus.iter().enumerate() {
            if a == 0 || self.images[i].is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.torus[i] -= 1;
            let t = g.mul(&Element::basis(rest), &self.images[i]);
            out.add_scaled(&t, &Scalar::from_int(a as i64));
        }
        for (j, &b) in m.filt.iter().enumerate() {
            if b == 0 || self.images[k + j].is_zero() {
                continue;
            }
            let rest = m.lower_filt(j).expect("positive exponent");
            let t = g.mul(&Element::basis(rest), &self.images[k + j]);
            out.add_scaled(&t, &Scalar::from_int(b as i64));
        }
        out
    }

    pub fn apply(&self, g: &GroupData, f: &Element) -> Element {
        f.map_linear(|m| self.apply_monomial(g, m))
    }

    /// Eigenvalues on the generators; `None` unless every generator is an
    /// eigenvector with rational eigenvalue.
    pub fn eigenvalues(&self, g: &GroupData) -> Option<Vec<BigRational>> {
        g.generators()
            .iter()
            .zip(&self.images)
            .map(|(gen, img)| {
                if img.is_zero() {
                    return Some(BigRational::zero());
                }
                if img.len() != 1 {
                    return None;
                }
                let (m, c) = img.iter().next()?;
                (m == gen).then(|| c.as_rational()).flatten()
            })
            .collect()
    }

    /// Eigenvalue on a monomial (toral derivations only).
    pub fn character(eigen: &[BigRational], k: usize, m: &Monomial) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &a) in m.torus.iter().enumerate() {
            acc += &eigen[i] * BigRational::from_integer(a.into());
        }
        for (j, &b) in m.filt.iter().enumerate() {
            acc += &eigen[k + j] * BigRational::from_integer(b.into());
        }
        acc
    }

    pub fn verify_tag(&self, g: &GroupData) -> Result<(), LieError> {
        let names = g.generator_names();
        let violation = |i: usize| LieError::TagViolation {
            derivation: self.name.clone(),
            tag: self.tag.as_str().into(),
            generator: names[i].clone(),
        };
        if self.images.len() != names.len() {
            return Err(LieError::DimensionMismatch { expected: names.len(), got: self.images.len() });
        }
        match self.tag {
            DerivationTag::Toral => {
                if self.eigenvalues(g).is_none() {
                    let gens = g.generators();
                    let bad = (0..names.len())
                        .find(|&i| {
                            let img = &self.images[i];
                            !(img.is_zero()
                                || (img.len() == 1
                                    && img.iter().next().is_some_and(|(m, c)| *m == gens[i] && c.as_rational().is_some())))
                        })
                        .unwrap_or(0);
                    return Err(violation(bad));
                }
            }
            DerivationTag::Nilpotent => {
                for i in 0..g.k() {
                    if !self.images[i].is_zero() {
                        return Err(violation(i));
                    }
                }
                for (j, f) in g.filtered.iter().enumerate() {
                    let img = &self.images[g.k() + j];
                    if !img.is_zero() && g.element_wdeg(img) >= f.degree {
                        return Err(violation(g.k() + j));
                    }
                }
            }
        }
        Ok(())
    }

    /// First generator where `Δ∘D ≠ (id⊗D)∘Δ`, if any.
    pub fn left_invariance_violation(&self, g: &GroupData) -> Option<String> {
        let ctx = CoproductCtx::new(g);
        let names = g.generator_names();
        for (i, gen) in g.generators().iter().enumerate() {
            let lhs = ctx.element(&self.apply_monomial(g, gen));
            let mut rhs = Tensor2::zero();
            for ((a, b), c) in ctx.monomial(gen).iter() {
                for (m, d) in self.apply_monomial(g, b).iter() {
                    rhs.add_term((a.clone(), m.clone()), c.mul(d));
                }
            }
            if lhs != rhs {
                return Some(names[i].clone());
            }
        }
        None
    }

    pub fn check_left_invariant(&self, g: &GroupData) -> bool {
        self.left_invariance_violation(g).is_none()
    }
}

/// `[D_a, D_b]` evaluated on each generator.
pub fn commutator_on_generators(g: &GroupData, a: &Derivation, b: &Derivation) -> Vec<Element> {
    g.generators()
        .iter()
        .map(|gen| {
            let ab = a.apply(g, &b.apply_monomial(g, gen));
            let ba = b.apply(g, &a.apply_monomial(g, gen));
            ab.sub(&ba)
        })
        .collect()
}

/// First `(a, b)` where the derivation commutator disagrees with the structure constants.
pub fn realization_violation(l: &LieAlgebra, real: &[Derivation], g: &GroupData) -> Result<Option<(usize, usize)>, LieError> {
    if real.len() != l.dim() {
        return Err(LieError::DimensionMismatch { expected: l.dim(), got: real.len() });
    }
    for a in 0..l.dim() {
        for b in (a + 1)..l.dim() {
            let lhs = commutator_on_generators(g, &real[a], &real[b]);
            let mut rhs = vec![Element::zero(); lhs.len()];
            for (e, c) in l.bracket_basis(a, b).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (slot, img) in rhs.iter_mut().zip(&real[e].images) {
                    slot.add_scaled(img, c);
                }
            }
            if lhs != rhs {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn check_realization(l: &LieAlgebra, real: &[Derivation], g: &GroupData) -> Result<bool, LieError> {
    Ok(realization_violation(l, real, g)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{FilteredVar, Mode};

    fn heisenberg() -> GroupData {
        let (k, m) = (0, 3);
        GroupData {
            mode: Mode::Strict,
            torus: vec![],
            filtered: vec![
                FilteredVar { name: "x".into(), degree: 1, correction: vec![] },
                FilteredVar { name: "y".into(), degree: 1, correction: vec![] },
                FilteredVar {
                    name: "z".into(),
                    degree: 2,
                    correction: vec![(
                        Element::basis(Monomial::filt_var(k, m, 0, 1)),
                        Element::basis(Monomial::filt_var(k, m, 1, 1)),
                    )],
                },
            ],
        }
    }

    fn borel() -> GroupData {
        let (k, m) = (1, 1);
        let x = Monomial::torus_var(k, m, 0, 1);
        let one = Monomial::one(k, m);
        let y = Monomial::filt_var(k, m, 0, 1);
        GroupData {
            mode: Mode::Extended,
            torus: vec!["x".into()],
            filtered: vec![FilteredVar {
                name: "y".into(),
                degree: 1,
                correction: vec![(
                    [(x, Scalar::one()), (one, Scalar::from_int(-1))].into_iter().collect(),
                    Element::basis(y),
                )],
            }],
        }
    }

    fn der(name: &str, tag: DerivationTag, images: Vec<Element>) -> Derivation {
        Derivation { name: name.into(), tag, images }
    }

    #[test]
    fn heisenberg_left_invariance() {
        let g = heisenberg();
        let x = g.z(0);
        let one = g.one();
        let zero = Element::zero();
        let dz = der("Z", DerivationTag::Nilpotent, vec![zero.clone(), zero.clone(), one.clone()]);
        let dy = der("Y", DerivationTag::Nilpotent, vec![zero.clone(), one.clone(), Element::basis(x.clone())]);
        let bad = der("Y0", DerivationTag::Nilpotent, vec![zero.clone(), one.clone(), zero.clone()]);
        assert!(dz.check_left_invariant(&g));
        assert!(dy.check_left_invariant(&g));
        // Oracle: (id⊗∂y)Δz = x⊗1 while Δ(∂y z) = 0.
        assert_eq!(bad.left_invariance_violation(&g).as_deref(), Some("z"));
    }

    #[test]
    fn borel_realization() {
        let g = borel();
        let x = Element::basis(g.x(0, 1));
        let dx = der("X", DerivationTag::Toral, vec![x.clone(), Element::zero()]);
        let dy = der("Y", DerivationTag::Nilpotent, vec![Element::zero(), x.clone()]);
        dx.verify_tag(&g).unwrap();
        dy.verify_tag(&g).unwrap();
        assert!(dx.check_left_invariant(&g) && dy.check_left_invariant(&g));
        let mut l = LieAlgebra::abelian(&["X", "Y"]);
        let real = [dx.clone(), dy.clone()];
        assert!(!check_realization(&l, &real, &g).unwrap());
        l.set_bracket(0, 1, vec![Scalar::zero(), Scalar::one()]);
        assert!(check_realization(&l, &real, &g).unwrap());
        // A nilpotent tag on X is rejected.
        let wrong = der("X", DerivationTag::Nilpotent, dx.images.clone());
        assert!(wrong.verify_tag(&g).is_err());
    }
}

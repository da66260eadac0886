//! Hopf 2-cocycles `J : O(G) ⊗ O(G) → Scalar`.

mod check;
mod eval;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use check::{axiom_check, inverse_check, AxiomReport, AxiomViolation, TripleBounds, ViolationKind};
pub use eval::Evaluator;

use crate::hopf::GroupData;
use crate::lie::{commutator_on_generators, Bivector, Derivation, DerivationTag, LieError};
use crate::scalars::{ExpUnit, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("series does not terminate on ({left}, {right}) within {bound} terms")]
    NonTerminatingSeries { left: String, right: String, bound: u32 },
    #[error("convolution inverse not found: {0}")]
    InverseNotFound(String),
    #[error("toral pairing {0} is not a linear form in the exponent symbols")]
    NotExponentiable(String),
    #[error("derivations {0} and {1} in the support of r do not commute")]
    NonAbelianSupport(String, String),
    #[error("invalid cocycle data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `D^n`
    Power,
    /// `D(D-1)⋯(D-n+1)`
    Falling,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily {
    pub derivation: Derivation,
    pub kind: FamilyKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `J = Σ_n (c^n / n!) L_n ⊗ R_n`, followed by `ε ⊗ ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitSeries {
    pub coefficient: crate::scalars::Scalar,
    pub left: OperatorFamily,
    pub right: OperatorFamily,
    /// The side whose family is locally nilpotent and bounds the sum.
    pub terminates: Side,
}

/// `J = (ε⊗ε) ∘ exp(scale · r)` for r realized by pairwise commuting derivations.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpBivector {
    pub scale: BigRational,
    pub r: Bivector,
    pub derivations: Vec<Derivation>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cocycle {
    /// `ε ⊗ ε`
    Trivial,
    /// `J(x^α z^β, x^γ z^δ) = Π J_ij^{α_i γ_j} ε(z^β) ε(z^δ)`.
    Bicharacter(Vec<Vec<ExpUnit>>),
    ExpBivector(ExpBivector),
    Series(ExplicitSeries),
    /// `J_1 * J_2 * ⋯` under convolution.
    Convolution(Vec<Cocycle>),
    /// Convolution inverse.
    Inverse(Box<Cocycle>),
    /// `J_21(f, g) = J(g, f)`.
    Transposed(Box<Cocycle>),
}

impl Cocycle {
    pub fn inverse(&self) -> Cocycle {
        Cocycle::Inverse(Box::new(self.clone()))
    }

    pub fn transposed(&self) -> Cocycle {
        Cocycle::Transposed(Box::new(self.clone()))
    }

    pub fn convolve(&self, other: &Cocycle) -> Cocycle {
        Cocycle::Convolution(vec![self.clone(), other.clone()])
    }

    /// `R^J = J_21^{-1} * J`.
    pub fn r_form(&self) -> Cocycle {
        Cocycle::Convolution(vec![self.transposed().inverse(), self.clone()])
    }

    /// Push inverses and transposes into closed forms where possible and
    /// merge convolutions of like factors.
    pub fn simplify(&self) -> Cocycle {
        match self {
            Cocycle::Trivial | Cocycle::Bicharacter(_) | Cocycle::ExpBivector(_) | Cocycle::Series(_) => self.clone(),
            Cocycle::Inverse(inner) => invert(&inner.simplify()),
            Cocycle::Transposed(inner) => transpose(&inner.simplify()),
            Cocycle::Convolution(factors) => {
                let mut flat = Vec::new();
                for f in factors {
                    match f.simplify() {
                        Cocycle::Trivial => {}
                        Cocycle::Convolution(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                let mut merged: Vec<Cocycle> = Vec::new();
                for f in flat {
                    match (merged.last_mut(), &f) {
                        (Some(Cocycle::Bicharacter(a)), Cocycle::Bicharacter(b)) => {
                            for (ra, rb) in a.iter_mut().zip(b) {
                                for (x, y) in ra.iter_mut().zip(rb) {
                                    *x = x.mul(y);
                                }
                            }
                        }
                        (Some(Cocycle::ExpBivector(a)), Cocycle::ExpBivector(b))
                            if a.r == b.r && a.derivations == b.derivations =>
                        {
                            a.scale = &a.scale + &b.scale;
                        }
                        _ => merged.push(f),
                    }
                }
                merged.retain(|c| !c.is_trivially_trivial());
                match merged.len() {
                    0 => Cocycle::Trivial,
                    1 => merged.pop().expect("one factor"),
                    _ => Cocycle::Convolution(merged),
                }
            }
        }
    }

    fn is_trivially_trivial(&self) -> bool {
        match self {
            Cocycle::Trivial => true,
            Cocycle::Bicharacter(m) => m.iter().flatten().all(ExpUnit::is_one),
            Cocycle::ExpBivector(e) => e.scale.is_zero() || e.r.is_zero(),
            _ => false,
        }
    }

    /// Structural checks that do not need evaluation.
    pub fn validate(&self, g: &GroupData) -> Result<(), CocycleError> {
        match self {
            Cocycle::Trivial => Ok(()),
            Cocycle::Bicharacter(m) => {
                if m.len() != g.k() || m.iter().any(|r| r.len() != g.k()) {
                    return Err(CocycleError::Invalid(format!("bicharacter must be {0}×{0}", g.k())));
                }
                Ok(())
            }
            Cocycle::ExpBivector(e) => {
                let n = e.derivations.len();
                if e.r.dim() != n {
                    return Err(LieError::DimensionMismatch { expected: n, got: e.r.dim() }.into());
                }
                if !e.r.is_antisymmetric() {
                    return Err(CocycleError::Invalid("r is not antisymmetric".into()));
                }
                for d in &e.derivations {
                    d.verify_tag(g)?;
                }
                let support = e.r.support_indices();
                for (i, &a) in support.iter().enumerate() {
                    for &b in &support[i + 1..] {
                        let c = commutator_on_generators(g, &e.derivations[a], &e.derivations[b]);
                        if c.iter().any(|x| !x.is_zero()) {
                            return Err(CocycleError::NonAbelianSupport(
                                e.derivations[a].name.clone(),
                                e.derivations[b].name.clone(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            Cocycle::Series(s) => {
                s.left.derivation.verify_tag(g)?;
                s.right.derivation.verify_tag(g)?;
                let term = match s.terminates {
                    Side::Left => &s.left,
                    Side::Right => &s.right,
                };
                if term.derivation.tag != DerivationTag::Nilpotent || term.kind != FamilyKind::Power {
                    return Err(CocycleError::Invalid(format!(
                        "termination side family {} must be a power of a nilpotent derivation",
                        term.derivation.name
                    )));
                }
                Ok(())
            }
            Cocycle::Convolution(fs) => fs.iter().try_for_each(|f| f.validate(g)),
            Cocycle::Inverse(c) | Cocycle::Transposed(c) => c.validate(g),
        }
    }
}

fn invert(c: &Cocycle) -> Cocycle {
    match c {
        Cocycle::Trivial => Cocycle::Trivial,
        Cocycle::Bicharacter(m) => {
            Cocycle::Bicharacter(m.iter().map(|r| r.iter().map(ExpUnit::inv).collect()).collect())
        }
        Cocycle::ExpBivector(e) => Cocycle::ExpBivector(ExpBivector { scale: -&e.scale, ..e.clone() }),
        Cocycle::Convolution(fs) => Cocycle::Convolution(fs.iter().rev().map(invert).collect()).simplify(),
        Cocycle::Inverse(inner) => (**inner).clone(),
        Cocycle::Transposed(inner) => transpose(&invert(inner)),
        Cocycle::Series(_) => Cocycle::Inverse(Box::new(c.clone())),
    }
}

fn transpose(c: &Cocycle) -> Cocycle {
    match c {
        Cocycle::Trivial => Cocycle::Trivial,
        Cocycle::Bicharacter(m) => {
            let k = m.len();
            Cocycle::Bicharacter((0..k).map(|i| (0..k).map(|j| m[j][i].clone()).collect()).collect())
        }
        // r_21 = -r.
        Cocycle::ExpBivector(e) => Cocycle::ExpBivector(ExpBivector { scale: -&e.scale, ..e.clone() }),
        Cocycle::Series(s) => Cocycle::Series(ExplicitSeries {
            coefficient: s.coefficient.clone(),
            left: s.right.clone(),
            right: s.left.clone(),
            terminates: match s.terminates {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
        }),
        Cocycle::Convolution(fs) => Cocycle::Convolution(fs.iter().map(transpose).collect()),
        Cocycle::Transposed(inner) => (**inner).clone(),
        Cocycle::Inverse(inner) => match transpose(inner) {
            t @ Cocycle::Series(_) => Cocycle::Inverse(Box::new(t)),
            t => invert(&t),
        },
    }
}

/// Default scale for an exponential cocycle `exp(r/2)`.
pub fn half() -> BigRational {
    BigRational::one() / BigRational::from_integer(2.into())
}

#[cfg(test)]
mod tests;

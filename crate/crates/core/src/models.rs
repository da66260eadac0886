//! Built-in groups, Lie data and cocycles.

use num_rational::BigRational;
use num_traits::One;

use crate::cocycle::{half, Cocycle, ExpBivector, ExplicitSeries, FamilyKind, OperatorFamily, Side};
use crate::hopf::{Element, FilteredVar, GroupData, Mode, Monomial};
use crate::lie::{Bivector, Derivation, DerivationTag, LieAlgebra};
use crate::scalars::{ExpForm, ExpUnit, ParamTable, Scalar};

/// Everything a command needs: parameters, the group, an optional Lie
/// algebra realized by derivations, an optional bivector, and the cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub params: ParamTable,
    pub group: GroupData,
    pub lie: Option<LieAlgebra>,
    /// Realization of the Lie basis, in basis order.
    pub derivations: Vec<Derivation>,
    pub r: Option<Bivector>,
    pub cocycle: Cocycle,
}

impl Model {
    pub fn toral_indices(&self) -> Vec<usize> {
        (0..self.derivations.len()).filter(|&i| self.derivations[i].tag == DerivationTag::Toral).collect()
    }
}

pub const BUILTIN_NAMES: [&str; 6] =
    ["quantum-torus", "quantum-torus-root3", "moyal", "heisenberg", "mixed-nilpotent", "borel"];

pub fn builtin(name: &str) -> Option<Model> {
    Some(match name {
        "quantum-torus" => quantum_torus(),
        "quantum-torus-root3" => quantum_torus_root(3),
        "moyal" => moyal(),
        "heisenberg" => heisenberg(),
        "mixed-nilpotent" => mixed_nilpotent(),
        "borel" => borel(),
        _ => return None,
    })
}

fn var(name: &str, degree: u32) -> FilteredVar {
    FilteredVar { name: name.into(), degree, correction: vec![] }
}

fn der(name: &str, tag: DerivationTag, images: Vec<Element>) -> Derivation {
    Derivation { name: name.into(), tag, images }
}

fn gen(g: &GroupData, i: usize) -> Element {
    Element::basis(g.generators()[i].clone())
}

/// `x ∂/∂x` on the i-th generator.
fn euler(g: &GroupData, name: &str, i: usize) -> Derivation {
    let n = g.k() + g.m();
    let images = (0..n).map(|j| if j == i { gen(g, i) } else { Element::zero() }).collect();
    der(name, DerivationTag::Toral, images)
}

/// `∂/∂z` on the i-th generator.
fn partial(g: &GroupData, name: &str, i: usize) -> Derivation {
    let n = g.k() + g.m();
    let images = (0..n).map(|j| if j == i { g.one() } else { Element::zero() }).collect();
    der(name, DerivationTag::Nilpotent, images)
}

pub fn torus_group(names: &[&str]) -> GroupData {
    GroupData { mode: Mode::Strict, torus: names.iter().map(|s| s.to_string()).collect(), filtered: vec![] }
}

pub fn additive_group(names: &[&str]) -> GroupData {
    GroupData { mode: Mode::Strict, torus: vec![], filtered: names.iter().map(|s| var(s, 1)).collect() }
}

/// `G_m × G_m` with `J = exp(t · X∧Y)`, so `R^J(x, y) = exp(2t)`.
pub fn quantum_torus() -> Model {
    let group = torus_group(&["x", "y"]);
    let params = ParamTable::new(&["t"], None);
    let derivations = vec![euler(&group, "X", 0), euler(&group, "Y", 1)];
    let r = Bivector::from_wedges(2, &[(0, 1, Scalar::param(0))]);
    let cocycle = Cocycle::ExpBivector(ExpBivector {
        scale: BigRational::one(),
        r: r.clone(),
        derivations: derivations.clone(),
    });
    Model {
        name: "quantum-torus".into(),
        params,
        lie: Some(LieAlgebra::abelian(&["X", "Y"])),
        derivations,
        r: Some(r),
        cocycle,
        group,
    }
}

/// `G_m × G_m` with the bicharacter `J(x, y) = ζ_n`, all other entries 1.
pub fn quantum_torus_root(n: u32) -> Model {
    let group = torus_group(&["x", "y"]);
    let mut m = vec![vec![ExpUnit::one(); 2]; 2];
    m[0][1] = ExpUnit::root_of_unity(n, 1);
    Model {
        name: format!("quantum-torus-root{n}"),
        params: ParamTable::new(&[], Some(n)),
        derivations: vec![euler(&group, "X", 0), euler(&group, "Y", 1)],
        lie: Some(LieAlgebra::abelian(&["X", "Y"])),
        r: None,
        cocycle: Cocycle::Bicharacter(m),
        group,
    }
}

/// `G_a × G_a` with `J = exp(r/2)`, `r = X∧Y`.
pub fn moyal() -> Model {
    let group = additive_group(&["x", "y"]);
    let derivations = vec![partial(&group, "X", 0), partial(&group, "Y", 1)];
    let r = Bivector::from_wedges(2, &[(0, 1, Scalar::one())]);
    Model {
        name: "moyal".into(),
        params: ParamTable::default(),
        lie: Some(LieAlgebra::abelian(&["X", "Y"])),
        cocycle: Cocycle::ExpBivector(ExpBivector { scale: half(), r: r.clone(), derivations: derivations.clone() }),
        derivations,
        r: Some(r),
        group,
    }
}

/// Heisenberg group with `Δ(z) = z⊗1 + 1⊗z + x⊗y`.
pub fn heisenberg_group() -> GroupData {
    let mut g = additive_group(&["x", "y"]);
    g.filtered.push(var("z", 2));
    let (x, y) = (Element::basis(g.z(0)), Element::basis(g.z(1)));
    g.filtered[2].correction = vec![(x, y)];
    g
}

/// Heisenberg group with the bad correction `Z = x⊗1`.
pub fn corrupted_heisenberg_group() -> GroupData {
    let mut g = heisenberg_group();
    g.filtered[2].correction = vec![(Element::basis(g.z(0)), g.one())];
    g
}

pub fn heisenberg_lie() -> LieAlgebra {
    let mut l = LieAlgebra::abelian(&["X", "Y", "Z"]);
    l.set_bracket(0, 1, vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    l
}

/// Left-invariant fields `X = ∂x`, `Y = ∂y + x∂z`, `Z = ∂z`.
pub fn heisenberg_derivations(g: &GroupData) -> Vec<Derivation> {
    let x = Element::basis(g.z(0));
    let (zero, one) = (Element::zero(), g.one());
    vec![
        der("X", DerivationTag::Nilpotent, vec![one.clone(), zero.clone(), zero.clone()]),
        der("Y", DerivationTag::Nilpotent, vec![zero.clone(), one.clone(), x]),
        der("Z", DerivationTag::Nilpotent, vec![zero.clone(), zero, one]),
    ]
}

/// Heisenberg group with `J = exp(r/2)`, `r = Z∧Y`, supported on `exp(span{Y, Z})`.
pub fn heisenberg() -> Model {
    let group = heisenberg_group();
    let derivations = heisenberg_derivations(&group);
    let r = Bivector::from_wedges(3, &[(2, 1, Scalar::one())]);
    Model {
        name: "heisenberg".into(),
        params: ParamTable::default(),
        lie: Some(heisenberg_lie()),
        cocycle: Cocycle::ExpBivector(ExpBivector { scale: half(), r: r.clone(), derivations: derivations.clone() }),
        derivations,
        r: Some(r),
        group,
    }
}

/// `G_m × G_m × G_a` with `J = exp(r/2)`, `r = h X∧Y + X∧Z`.
pub fn mixed_nilpotent() -> Model {
    let group = GroupData { mode: Mode::Strict, torus: vec!["x".into(), "y".into()], filtered: vec![var("z", 1)] };
    let derivations = vec![euler(&group, "X", 0), euler(&group, "Y", 1), partial(&group, "Z", 2)];
    let r = Bivector::from_wedges(3, &[(0, 1, Scalar::param(0)), (0, 2, Scalar::one())]);
    Model {
        name: "mixed-nilpotent".into(),
        params: ParamTable::new(&["h"], None),
        lie: Some(LieAlgebra::abelian(&["X", "Y", "Z"])),
        cocycle: Cocycle::ExpBivector(ExpBivector { scale: half(), r: r.clone(), derivations: derivations.clone() }),
        derivations,
        r: Some(r),
        group,
    }
}

/// `{(a b; 0 1)}` with coordinates `x = a`, `y = b`, using the opposite
/// group law so that `Δ(y) = y⊗1 + 1⊗y + y⊗(x − 1)`.
pub fn borel_group() -> GroupData {
    let (k, m) = (1, 1);
    let x = Monomial::torus_var(k, m, 0, 1);
    let mut xm1 = Element::basis(x);
    xm1.add_term(Monomial::one(k, m), Scalar::from_int(-1));
    GroupData {
        mode: Mode::Extended,
        torus: vec!["x".into()],
        filtered: vec![FilteredVar {
            name: "y".into(),
            degree: 1,
            correction: vec![(Element::basis(Monomial::filt_var(k, m, 0, 1)), xm1)],
        }],
    }
}

/// `X = x∂x`, `Y = x∂y`, with `[X, Y] = Y`.
pub fn borel_derivations(g: &GroupData) -> Vec<Derivation> {
    let x = Element::basis(g.x(0, 1));
    vec![
        der("X", DerivationTag::Toral, vec![x.clone(), Element::zero()]),
        der("Y", DerivationTag::Nilpotent, vec![Element::zero(), x]),
    ]
}

pub fn borel_lie() -> LieAlgebra {
    let mut l = LieAlgebra::abelian(&["X", "Y"]);
    l.set_bracket(0, 1, vec![Scalar::zero(), Scalar::one()]);
    l
}

/// `J(h) = Σ_n (h^n/n!) X(X−1)⋯(X−n+1) ⊗ Y^n`.
pub fn borel_cocycle(g: &GroupData, h: Scalar) -> Cocycle {
    let ds = borel_derivations(g);
    Cocycle::Series(ExplicitSeries {
        coefficient: h,
        left: OperatorFamily { derivation: ds[0].clone(), kind: FamilyKind::Falling },
        right: OperatorFamily { derivation: ds[1].clone(), kind: FamilyKind::Power },
        terminates: Side::Right,
    })
}

pub fn borel() -> Model {
    let group = borel_group();
    let derivations = borel_derivations(&group);
    Model {
        name: "borel".into(),
        params: ParamTable::new(&["h"], None),
        lie: Some(borel_lie()),
        cocycle: borel_cocycle(&group, Scalar::param(0)),
        derivations,
        r: None,
        group,
    }
}

/// `exp(c · symbol)` as a scalar.
pub fn exp_param(v: usize, c: i64) -> Scalar {
    Scalar::exp(ExpForm::symbol(v, BigRational::from_integer(c.into())))
}

//! Supports, centers and structure verdicts for `O(G)_J`.

pub mod snf;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hopf::{Element, GroupData, Mode, Monomial};
use crate::lie::{invert_bivector, Bivector, LieError, SkewForm};
use crate::linalg::{self, Matrix};
use crate::models::Model;
use crate::par::{self, Exec};
use crate::scalars::{ExpUnit, ParamTable, Scalar, ScalarError};
use crate::twisted::{letters, Expander, Letter, Presentation, Rewriter, TwistError, TwistedElement};

use snf::{lattice_basis, lattice_kernel, quotient_factors, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("λ_{0}{1} = {2} is not of the form exp(form)·ζ")]
    NotAUnit(usize, usize, String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `Γ = {γ ∈ ℤ^k : Π_j λ_ji^{γ_j} = 1 for all i}` and `ℤ^k/Γ = X(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSupport {
    pub units: Vec<Vec<ExpUnit>>,
    /// Echelon basis of Γ.
    pub gamma: IntMatrix,
    /// Invariant factors of `ℤ^k/Γ` other than 1, `0` for a free summand.
    pub factors: Vec<BigInt>,
}

impl TorusSupport {
    pub fn k(&self) -> usize {
        self.units.len()
    }

    pub fn gamma_rank(&self) -> usize {
        self.gamma.len()
    }

    /// `dim S = k − rank Γ`.
    pub fn dim_s(&self) -> usize {
        self.k() - self.gamma_rank()
    }

    /// Order of `S/S⁰`, the product of the nonzero factors.
    pub fn component_order(&self) -> BigInt {
        self.factors.iter().filter(|f| !f.is_zero()).fold(BigInt::one(), |a, f| a * f)
    }

    pub fn contains(&self, alpha: &[i32]) -> bool {
        (0..self.k()).all(|i| {
            let mut acc = ExpUnit::one();
            for (j, &a) in alpha.iter().enumerate() {
                acc = acc.mul(&self.units[j][i].pow(a as i64));
            }
            acc.is_one()
        })
    }
}

fn lcm_all(xs: impl Iterator<Item = BigInt>) -> BigInt {
    xs.fold(BigInt::one(), |a, b| a.lcm(&b))
}

pub fn torus_support(lambda: &[Vec<Scalar>]) -> Result<TorusSupport, AnalysisError> {
    let k = lambda.len();
    let mut units = vec![Vec::with_capacity(k); k];
    for (j, row) in lambda.iter().enumerate() {
        for (i, l) in row.iter().enumerate() {
            let u = l.as_unit().ok_or_else(|| AnalysisError::NotAUnit(j, i, l.fmt_with(&ParamTable::default())))?;
            units[j].push(u);
        }
    }
    let order = units.iter().flatten().fold(1u32, |a, u| crate::scalars::cyclo::lcm_order(a, u.order));
    // Unknowns: γ_1..γ_k, then one slack t_i per congruence when order > 1.
    let slack = if order > 1 { k } else { 0 };
    let cols = k + slack;
    let mut rows: IntMatrix = Vec::new();
    let symbols: std::collections::BTreeSet<usize> =
        units.iter().flatten().flat_map(|u| u.exponent.coeffs().map(|(v, _)| v).collect::<Vec<_>>()).collect();
    for i in 0..k {
        for &v in &symbols {
            let cs: Vec<_> = (0..k).map(|j| units[j][i].exponent.coeff(v)).collect();
            let den = lcm_all(cs.iter().map(|c| c.denom().clone()));
            let mut row = vec![BigInt::zero(); cols];
            for (j, c) in cs.iter().enumerate() {
                row[j] = (c * num_rational::BigRational::from_integer(den.clone())).to_integer();
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
        if order > 1 {
            let mut row = vec![BigInt::zero(); cols];
            for (j, r) in row.iter_mut().take(k).enumerate() {
                let u = &units[j][i];
                *r = BigInt::from(u.root) * BigInt::from(order / u.order);
            }
            row[k + i] = -BigInt::from(order);
            rows.push(row);
        }
    }
    let gens: IntMatrix = if rows.is_empty() {
        snf::int_identity(k)
    } else {
        lattice_kernel(&rows, cols).into_iter().map(|v| v[..k].to_vec()).collect()
    };
    let gamma = lattice_basis(&gens, k);
    let factors = quotient_factors(&gamma, k);
    Ok(TorusSupport { units, gamma, factors })
}

/// Unipotent part of the support: `𝔳 = 𝔥 ∩ 𝔲` with `𝔥 = span(r) + Lie(S)`,
/// together with the block `r_𝔲𝔲` (the restriction of the cocycle to `U`).
#[derive(Clone, Debug, PartialEq)]
pub struct UnipotentSupport {
    /// Basis of `𝔳` in Lie coordinates.
    pub basis: Matrix,
    pub dim: usize,
    /// `rank r_𝔲𝔲`, the support dimension of the restriction to `U`.
    pub restricted_rank: usize,
    /// `r_𝔲𝔲` spans all of `𝔳` (so ω below is defined on `𝔳`).
    pub nondegenerate: bool,
    pub omega: Option<SkewForm>,
}

impl UnipotentSupport {
    pub fn even(&self) -> bool {
        self.dim % 2 == 0
    }
}

/// Support span of a bivector restricted to the indices `nil`.
pub fn unipotent_support(r: &Bivector, nil: &[usize]) -> Result<UnipotentSupport, AnalysisError> {
    let n = r.dim();
    let mut ruu = Bivector::zero(n);
    for &a in nil {
        for &b in nil {
            ruu.matrix[a][b] = r.matrix[a][b].clone();
        }
    }
    let (basis, _) = ruu.support_basis()?;
    let omega = invert_bivector(&ruu)?;
    let dim = basis.len();
    Ok(UnipotentSupport { dim, restricted_rank: dim, nondegenerate: true, omega: Some(omega), basis })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportReport {
    pub mode: Mode,
    pub torus: TorusSupport,
    pub unipotent: UnipotentSupport,
    /// `dim 𝔥`, `𝔥 = span(r) + Lie(S)`.
    pub dim_h: usize,
    pub dim_g: usize,
    pub m: usize,
}

/// Vectors of `span(r)` in Lie coordinates.
fn r_span(model: &Model) -> Result<Matrix, AnalysisError> {
    Ok(match &model.r {
        Some(r) => r.support_basis()?.0,
        None => Vec::new(),
    })
}

pub fn support_report(model: &Model, p: &Presentation) -> Result<SupportReport, AnalysisError> {
    let g = &model.group;
    let torus = torus_support(&p.lambda)?;
    let n = model.derivations.len();
    let toral: Vec<usize> = model.toral_indices();
    let nil: Vec<usize> = (0..n).filter(|a| !toral.contains(a)).collect();
    let span = r_span(model)?;
    // Lie(S): toral combinations annihilated by every γ ∈ Γ.
    let mut lie_s: Matrix = Vec::new();
    if n > 0 {
        let eig: Vec<Vec<Scalar>> = toral
            .iter()
            .map(|&a| {
                let e = model.derivations[a].eigenvalues(g).unwrap_or_default();
                (0..g.k()).map(|i| e.get(i).cloned().map(Scalar::from_rational).unwrap_or_else(Scalar::zero)).collect()
            })
            .collect();
        let pairing: Matrix = torus
            .gamma
            .iter()
            .map(|gm| {
                eig.iter()
                    .map(|e| {
                        gm.iter().zip(e).fold(Scalar::zero(), |acc, (c, x)| {
                            acc.add(&x.mul(&Scalar::from_int(c.to_i64().unwrap_or(0))))
                        })
                    })
                    .collect()
            })
            .collect();
        for c in linalg::nullspace(&pairing, toral.len()) {
            let mut v = vec![Scalar::zero(); n];
            for (&a, x) in toral.iter().zip(c) {
                v[a] = x;
            }
            lie_s.push(v);
        }
    }
    let mut h: Matrix = span.clone();
    h.extend(lie_s);
    let dim_h = if n == 0 { torus.dim_s() } else { linalg::rank(&h, n) };
    // 𝔥 ∩ 𝔲: echelon with toral columns first, keep rows pivoting on 𝔲.
    let order: Vec<usize> = toral.iter().chain(&nil).copied().collect();
    let permuted: Matrix = h.iter().map(|v| order.iter().map(|&a| v[a].clone()).collect()).collect();
    let e = linalg::echelon(&permuted, n);
    let basis: Matrix = e
        .rows
        .iter()
        .zip(&e.pivots)
        .filter(|(_, &piv)| piv >= toral.len())
        .map(|(row, _)| {
            let mut v = vec![Scalar::zero(); n];
            for (pos, &a) in order.iter().enumerate() {
                v[a] = row[pos].clone();
            }
            v
        })
        .collect();
    let restricted = match &model.r {
        Some(r) => unipotent_support(r, &nil)?,
        None => unipotent_support(&Bivector::zero(n), &nil)?,
    };
    let dim = basis.len();
    let nondegenerate = restricted.dim == dim;
    let unipotent = UnipotentSupport {
        dim,
        restricted_rank: restricted.dim,
        nondegenerate,
        omega: if nondegenerate { restricted.omega } else { None },
        basis,
    };
    Ok(SupportReport { mode: g.mode, torus, unipotent, dim_h, dim_g: g.k() + g.m(), m: g.m() })
}

/// Words `x^α z^β` with `|α_i| ≤ torus_box` and weighted degree of `z^β` at most `degree`.
pub fn box_words(g: &GroupData, degree: u32, torus_box: i32) -> Vec<Monomial> {
    crate::cocycle::TripleBounds::new(torus_box, degree).monomials(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterBasis {
    pub degree: u32,
    pub torus_box: i32,
    pub elements: Vec<TwistedElement>,
    /// Number of candidate words.
    pub searched: usize,
}

fn sort_key(g: &GroupData, t: &TwistedElement) -> (u32, u32, Monomial) {
    let w = t
        .keys()
        .max_by_key(|w| (g.wdeg(w), w.torus_total(), (*w).clone()))
        .cloned()
        .unwrap_or_else(|| g.one_monomial());
    (g.wdeg(&w), w.torus_total(), w)
}

/// Exact center of the span of box words: one nullspace per torus degree in
/// strict mode, a single system otherwise.
pub fn center_upto(p: &Presentation, degree: u32, torus_box: i32, exec: Exec) -> Result<CenterBasis, AnalysisError> {
    let g = &p.group;
    let words = box_words(g, degree, torus_box);
    let mut blocks: BTreeMap<Vec<i32>, Vec<Monomial>> = BTreeMap::new();
    for w in &words {
        let key = if g.mode == Mode::Strict { w.torus.clone() } else { Vec::new() };
        blocks.entry(key).or_default().push(w.clone());
    }
    let blocks: Vec<Vec<Monomial>> = blocks.into_values().collect();
    let gens = p.generator_letters();
    let results = par::map_init(
        exec,
        &blocks,
        || Rewriter::new(p),
        |rw, block| -> Result<Vec<TwistedElement>, AnalysisError> {
            let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
            let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
            for (col, w) in block.iter().enumerate() {
                for (gi, &l) in gens.iter().enumerate() {
                    let c = commutator_word_letter(rw, w, l)?;
                    for (u, x) in c.iter() {
                        let n = row_index.len();
                        let r = *row_index.entry((gi, u.clone())).or_insert(n);
                        entries.push((r, col, x.clone()));
                    }
                }
            }
            let mut a = linalg::zeros(row_index.len(), block.len());
            for (r, c, x) in entries {
                a[r][c] = a[r][c].add(&x);
            }
            let mut out = Vec::new();
            for v in linalg::nullspace(&a, block.len()) {
                let t = TwistedElement::from_terms(block.iter().cloned().zip(v));
                out.push(normalize(g, t));
            }
            Ok(out)
        },
    );
    let mut elements = Vec::new();
    for r in results {
        elements.extend(r?);
    }
    elements.sort_by_key(|t| sort_key(g, t));
    Ok(CenterBasis { degree, torus_box, elements, searched: words.len() })
}

fn commutator_word_letter(rw: &Rewriter<'_>, w: &Monomial, l: Letter) -> Result<TwistedElement, TwistError> {
    let right = rw.mul_letter(w, l)?;
    let mut ls = vec![l];
    ls.extend(letters(w));
    let left = rw.normal_form(&ls)?;
    Ok(right.sub(&left))
}

/// Scale so the coefficient of the leading word is 1 when it is a unit.
fn normalize(g: &GroupData, t: TwistedElement) -> TwistedElement {
    let (_, _, w) = sort_key(g, &t);
    let c = t.coeff(&w);
    match c.inv() {
        Ok(inv) if !c.is_one() => t.scale(&inv),
        _ => t,
    }
}

/// Generators `x_i`, `x_i^{-1}`, `z_j` whose commutator with `t`, computed
/// with twisted products in the commutative basis, is nonzero.
pub fn verify_center(
    g: &GroupData,
    cocycle: &crate::cocycle::Cocycle,
    elements: &[TwistedElement],
) -> Result<Vec<(usize, String)>, AnalysisError> {
    let ex = Expander::new(g, cocycle)?;
    let tw = ex.twister();
    let gens: Vec<(String, Element)> = (0..g.k())
        .flat_map(|i| {
            [
                (g.torus[i].clone(), ex.letter_element(Letter::Torus { index: i, inverse: false })),
                (format!("{}^-1", g.torus[i]), ex.letter_element(Letter::Torus { index: i, inverse: true })),
            ]
        })
        .chain((0..g.m()).map(|j| (g.filtered[j].name.clone(), Element::basis(g.z(j)))))
        .collect();
    let mut bad = Vec::new();
    for (idx, t) in elements.iter().enumerate() {
        let e = ex.expand(t)?;
        for (name, x) in &gens {
            let c = tw.product(&e, x)?.sub(&tw.product(x, &e)?);
            if !c.is_zero() {
                bad.push((idx, name.clone()));
            }
        }
    }
    Ok(bad)
}

/// Size of `O(G/H)` inside the box: `x^α p(z)` with `α ∈ Γ` killed by every
/// derivation in `span(r)`. `None` outside strict mode.
pub fn predicted_center_count(model: &Model, support: &SupportReport, degree: u32, torus_box: i32) -> Result<Option<usize>, AnalysisError> {
    let g = &model.group;
    if g.mode != Mode::Strict {
        return Ok(None);
    }
    let span = r_span(model)?;
    if !span.is_empty() && model.derivations.is_empty() {
        return Ok(None);
    }
    let words = box_words(g, degree, torus_box);
    let mut blocks: BTreeMap<Vec<i32>, Vec<Monomial>> = BTreeMap::new();
    for w in words {
        if support.torus.contains(&w.torus) {
            blocks.entry(w.torus.clone()).or_default().push(w);
        }
    }
    let mut count = 0;
    for block in blocks.values() {
        if span.is_empty() {
            count += block.len();
            continue;
        }
        let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        let mut entries = Vec::new();
        for (col, w) in block.iter().enumerate() {
            for (vi, v) in span.iter().enumerate() {
                let mut img = Element::zero();
                for (a, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        img.add_scaled(&model.derivations[a].apply_monomial(g, w), c);
                    }
                }
                for (u, x) in img.iter() {
                    let n = row_index.len();
                    let r = *row_index.entry((vi, u.clone())).or_insert(n);
                    entries.push((r, col, x.clone()));
                }
            }
        }
        let mut a = linalg::zeros(row_index.len(), block.len());
        for (r, c, x) in entries {
            a[r][c] = a[r][c].add(&x);
        }
        count += block.len() - linalg::rank(&a, block.len());
    }
    Ok(Some(count))
}

/// True when some basis vector of Γ lies outside the box, so the box cannot
/// show every generator of the predicted center.
pub fn box_too_small(support: &SupportReport, torus_box: i32) -> bool {
    support.torus.gamma.iter().any(|v| v.iter().any(|c| c.abs() > BigInt::from(torus_box)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Simple,
    NotSimple,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Simple => "simple",
            Verdict::NotSimple => "not-simple",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicityReport {
    pub verdict: Verdict,
    pub gamma_rank: usize,
    pub dim_v: usize,
    pub center_box: Vec<TwistedElement>,
    pub justification: Vec<String>,
}

/// Simple iff `Γ = 0` and `𝔥 ∩ 𝔲 = 𝔲`; only asserted in strict mode.
pub fn simplicity_verdict(support: &SupportReport, center: &CenterBasis) -> SimplicityReport {
    let t = &support.torus;
    let u = &support.unipotent;
    let mut justification = vec![
        format!("rank Γ = {}", t.gamma_rank()),
        format!("dim V = {} of dim U = {}", u.dim, support.m),
        format!("center words in box: {}", center.elements.len()),
    ];
    let verdict = if support.mode != Mode::Strict {
        justification.push("extended mode: structure results not asserted".into());
        Verdict::Undetermined
    } else if t.gamma_rank() == 0 && u.dim == support.m {
        Verdict::Simple
    } else {
        Verdict::NotSimple
    };
    let nontrivial = center.elements.iter().any(|e| e.keys().any(|w| !w.is_one()));
    if verdict == Verdict::Simple && nontrivial {
        justification.push("box center is not trivial".into());
    }
    SimplicityReport {
        verdict,
        gamma_rank: t.gamma_rank(),
        dim_v: u.dim,
        center_box: center.elements.clone(),
        justification,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StructureKind {
    QuantumTorus { lambda: Vec<Vec<Scalar>> },
    /// `W(pairs) ⊗ ℂ[center_vars]`.
    WeylTensorPoly { pairs: usize, center_vars: Vec<String> },
    /// `(O(U/V) ⊗ W(pairs)) #_J ℂ[X(T)]`.
    CrossedProduct { pairs: usize, quotient_dim: usize },
    Undetermined { reason: String },
}

impl StructureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            StructureKind::QuantumTorus { .. } => "quantum-torus",
            StructureKind::WeylTensorPoly { .. } => "weyl-tensor-poly",
            StructureKind::CrossedProduct { .. } => "crossed-product",
            StructureKind::Undetermined { .. } => "undetermined",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StructureKind::QuantumTorus { .. } => "E(λ)".into(),
            StructureKind::WeylTensorPoly { pairs, center_vars } if center_vars.is_empty() => format!("W({pairs})"),
            StructureKind::WeylTensorPoly { pairs, center_vars } => {
                format!("W({pairs})⊗poly[{}]", center_vars.join(","))
            }
            StructureKind::CrossedProduct { pairs, quotient_dim } => {
                format!("(O(U/V)⊗W({pairs}))#_J ℂ[X(T)], dim U/V = {quotient_dim}")
            }
            StructureKind::Undetermined { reason } => format!("undetermined ({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub kind: StructureKind,
    pub simplicity: SimplicityReport,
}

/// Weyl pairs and central coordinates when every `C_lj` is a constant.
fn weyl_model(p: &Presentation, params: &ParamTable) -> Option<(usize, Vec<String>)> {
    let m = p.m();
    let one = p.group.one_monomial();
    let mut omega = linalg::zeros(m, m);
    for l in 0..m {
        for j in 0..l {
            let c = &p.comm[l][j];
            if c.keys().any(|w| *w != one) {
                return None;
            }
            let v = c.coeff(&one);
            omega[l][j] = v.clone();
            omega[j][l] = v.neg();
        }
    }
    let rank = linalg::rank(&omega, m);
    let vars = linalg::nullspace(&omega, m)
        .into_iter()
        .map(|v| {
            let t = crate::hopf::LinComb::from_terms(
                v.into_iter().enumerate().map(|(j, c)| (p.group.filtered[j].name.clone(), c)),
            );
            crate::hopf::fmt_lincomb(t.iter().map(|(n, c)| (n.clone(), c)), params)
        })
        .collect();
    Some((rank / 2, vars))
}

pub fn structure_report(
    p: &Presentation,
    params: &ParamTable,
    support: &SupportReport,
    center: &CenterBasis,
) -> StructureReport {
    let simplicity = simplicity_verdict(support, center);
    let (k, m) = (p.k(), p.m());
    let kind = if support.mode != Mode::Strict {
        StructureKind::Undetermined { reason: "extended mode".into() }
    } else if m == 0 {
        StructureKind::QuantumTorus { lambda: p.lambda.clone() }
    } else if k == 0 {
        match weyl_model(p, params) {
            Some((pairs, vars)) if 2 * pairs == support.unipotent.dim && vars.len() == m - 2 * pairs => {
                StructureKind::WeylTensorPoly { pairs, center_vars: vars }
            }
            Some(_) => StructureKind::Undetermined { reason: "commutator rank disagrees with dim V".into() },
            None => StructureKind::Undetermined { reason: "commutators are not constant".into() },
        }
    } else {
        let r = support.unipotent.restricted_rank;
        StructureKind::CrossedProduct { pairs: r / 2, quotient_dim: m - r }
    };
    StructureReport { kind, simplicity }
}

#[cfg(test)]
mod tests;

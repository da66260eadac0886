use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::models::{self, builtin};
use crate::scalars::ExpForm;

fn ints(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn presentation(name: &str) -> (Model, Presentation) {
    let m = builtin(name).unwrap();
    let p = Presentation::derive(&m.group, &m.cocycle).unwrap();
    (m, p)
}

fn exp_sym(v: usize, c: i64) -> Scalar {
    Scalar::exp(ExpForm::symbol(v, BigRational::from_integer(c.into())))
}

#[test]
fn root_of_unity_lattice() {
    let (_, p) = presentation("quantum-torus-root3");
    let t = torus_support(&p.lambda).unwrap();
    assert_eq!(t.gamma, ints(&[&[3, 0], &[0, 3]]));
    assert_eq!(t.factors, vec![BigInt::from(3), BigInt::from(3)]);
    assert_eq!(t.component_order(), BigInt::from(9));
    assert_eq!(t.dim_s(), 0);
}

#[test]
fn generic_lattices() {
    let (_, p) = presentation("quantum-torus");
    let t = torus_support(&p.lambda).unwrap();
    assert_eq!(t.gamma_rank(), 0);
    assert_eq!(t.factors, vec![BigInt::from(0), BigInt::from(0)]);

    let one = vec![vec![Scalar::one(); 3]; 3];
    let t = torus_support(&one).unwrap();
    assert_eq!(t.gamma, snf::int_identity(3));
    assert!(t.factors.is_empty());

    // Three independent pairings on ℤ³.
    let mut l = vec![vec![Scalar::one(); 3]; 3];
    for (i, j, v) in [(0, 1, 0), (0, 2, 1), (1, 2, 2)] {
        l[i][j] = exp_sym(v, 1);
        l[j][i] = exp_sym(v, -1);
    }
    assert_eq!(torus_support(&l).unwrap().gamma_rank(), 0);

    // exp(a)^2 paired against x_3 only: Γ = ℤ e_2 + ... brute force below.
    let mut l = vec![vec![Scalar::one(); 3]; 3];
    l[0][2] = exp_sym(0, 2);
    l[2][0] = exp_sym(0, -2);
    l[1][2] = exp_sym(0, 3);
    l[2][1] = exp_sym(0, -3);
    let t = torus_support(&l).unwrap();
    assert_eq!(t.gamma_rank(), 1);
    assert_eq!(t.gamma, ints(&[&[3, -2, 0]]));
}

/// Lattice points of the span of `basis` inside the box, by enumerating
/// small coefficient vectors.
fn span_points(basis: &IntMatrix, k: usize, b: i64) -> std::collections::BTreeSet<Vec<i64>> {
    let mut out = std::collections::BTreeSet::new();
    let n = basis.len();
    let range = 4 * b + 1;
    let total = (2 * range + 1).pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut v = vec![0i64; k];
        for row in basis {
            let c = (rest % (2 * range + 1)) - range;
            rest /= 2 * range + 1;
            for (x, y) in v.iter_mut().zip(row) {
                *x += c * i64::try_from(y).unwrap();
            }
        }
        if v.iter().all(|x| x.abs() <= b) {
            out.insert(v);
        }
    }
    out
}

#[test]
fn lattice_matches_membership() {
    let cases: Vec<Vec<Vec<Scalar>>> = vec![
        {
            let mut l = vec![vec![Scalar::one(); 2]; 2];
            l[0][1] = Scalar::zeta(6, 1);
            l[1][0] = Scalar::zeta(6, 5);
            l
        },
        {
            let mut l = vec![vec![Scalar::one(); 3]; 3];
            l[0][1] = Scalar::zeta(4, 1);
            l[1][0] = Scalar::zeta(4, 3);
            l[1][2] = Scalar::zeta(4, 2).mul(&exp_sym(0, 1));
            l[2][1] = Scalar::zeta(4, 2).mul(&exp_sym(0, -1));
            l
        },
    ];
    for l in cases {
        let t = torus_support(&l).unwrap();
        let k = l.len();
        let b = 6;
        let points = span_points(&t.gamma, k, b);
        let mut direct = std::collections::BTreeSet::new();
        let mut v = vec![-b; k];
        loop {
            let a: Vec<i32> = v.iter().map(|&x| x as i32).collect();
            if t.contains(&a) {
                direct.insert(v.clone());
            }
            let mut i = 0;
            while i < k && v[i] == b {
                v[i] = -b;
                i += 1;
            }
            if i == k {
                break;
            }
            v[i] += 1;
        }
        assert_eq!(points, direct);
    }
}

#[test]
fn unipotent_supports() {
    let (m, p) = presentation("moyal");
    let s = support_report(&m, &p).unwrap();
    assert_eq!(s.unipotent.dim, 2);
    assert!(s.unipotent.nondegenerate && s.unipotent.even());
    assert!(s.unipotent.omega.is_some());
    assert_eq!(s.dim_h, 2);

    let (m, p) = presentation("heisenberg");
    let s = support_report(&m, &p).unwrap();
    assert_eq!(s.unipotent.dim, 2);
    assert_eq!(s.dim_g - s.dim_h, 1);

    let z = unipotent_support(&Bivector::zero(3), &[0, 1, 2]).unwrap();
    assert_eq!(z.dim, 0);
}

#[test]
fn mixed_support_is_everything() {
    let (m, p) = presentation("mixed-nilpotent");
    let s = support_report(&m, &p).unwrap();
    assert_eq!(s.torus.gamma_rank(), 0);
    assert_eq!(s.unipotent.dim, 1);
    assert_eq!(s.unipotent.restricted_rank, 0);
    assert_eq!(s.dim_h, 3);
}

fn center(name: &str, d: u32, b: i32) -> (Model, Presentation, CenterBasis) {
    let (m, p) = presentation(name);
    let c = center_upto(&p, d, b, Exec::Parallel).unwrap();
    (m, p, c)
}

fn words(p: &Presentation, c: &CenterBasis) -> Vec<String> {
    c.elements.iter().map(|e| p.fmt(e, &ParamTable::default())).collect()
}

#[test]
fn centers_of_builtins() {
    let (_, p, c) = center("moyal", 6, 0);
    assert_eq!(words(&p, &c), vec!["1"]);
    let (_, p, c) = center("heisenberg", 4, 0);
    assert_eq!(words(&p, &c), vec!["1", "x", "x^2", "x^3", "x^4"]);
    let (_, p, c) = center("quantum-torus-root3", 3, 3);
    let mut w = words(&p, &c);
    w.sort();
    let mut expect = vec![];
    for a in [-3, 0, 3] {
        for b in [-3, 0, 3] {
            let mut v = vec![];
            if a != 0 {
                v.push(if a == 1 { "x".to_string() } else { format!("x^{a}") });
            }
            if b != 0 {
                v.push(format!("y^{b}"));
            }
            expect.push(if v.is_empty() { "1".into() } else { v.join("·") });
        }
    }
    expect.sort();
    assert_eq!(w, expect);
    let (_, p, c) = center("quantum-torus", 0, 4);
    assert_eq!(words(&p, &c), vec!["1"]);
    let (_, p, c) = center("mixed-nilpotent", 2, 2);
    assert_eq!(words(&p, &c), vec!["1"]);
}

#[test]
fn sequential_center_agrees() {
    let (_, p) = presentation("heisenberg");
    let a = center_upto(&p, 4, 0, Exec::Parallel).unwrap();
    let b = center_upto(&p, 4, 0, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn centers_verify_and_match_prediction() {
    for (name, d, b) in [
        ("moyal", 4, 0),
        ("heisenberg", 4, 0),
        ("quantum-torus-root3", 3, 3),
        ("quantum-torus", 0, 3),
        ("mixed-nilpotent", 2, 2),
    ] {
        let (m, p, c) = center(name, d, b);
        assert!(verify_center(&m.group, &m.cocycle, &c.elements).unwrap().is_empty(), "{name}");
        let s = support_report(&m, &p).unwrap();
        assert_eq!(predicted_center_count(&m, &s, d, b).unwrap(), Some(c.elements.len()), "{name}");
    }
}

#[test]
fn verification_catches_noncentral() {
    let m = models::moyal();
    let x = TwistedElement::basis(m.group.z(0));
    assert_eq!(verify_center(&m.group, &m.cocycle, &[x]).unwrap().len(), 1);
}

#[test]
fn box_warning() {
    let (m, p) = presentation("quantum-torus-root3");
    let s = support_report(&m, &p).unwrap();
    assert!(box_too_small(&s, 2));
    assert!(!box_too_small(&s, 3));
}

fn structure(name: &str, d: u32, b: i32) -> StructureReport {
    let (m, p, c) = center(name, d, b);
    let s = support_report(&m, &p).unwrap();
    structure_report(&p, &m.params, &s, &c)
}

#[test]
fn verdicts() {
    let r = structure("moyal", 2, 0);
    assert_eq!(r.kind.describe(), "W(1)");
    assert_eq!(r.simplicity.verdict, Verdict::Simple);

    let r = structure("heisenberg", 2, 0);
    assert_eq!(r.kind.describe(), "W(1)⊗poly[x]");
    assert_eq!(r.simplicity.verdict, Verdict::NotSimple);
    assert_eq!(r.simplicity.dim_v, 2);

    let r = structure("quantum-torus", 0, 2);
    assert_eq!(r.kind.tag(), "quantum-torus");
    assert_eq!(r.simplicity.verdict, Verdict::Simple);

    let r = structure("quantum-torus-root3", 0, 3);
    assert_eq!(r.simplicity.verdict, Verdict::NotSimple);
    assert_eq!(r.simplicity.gamma_rank, 2);

    let r = structure("mixed-nilpotent", 1, 1);
    assert_eq!(r.kind, StructureKind::CrossedProduct { pairs: 0, quotient_dim: 1 });
    assert_eq!(r.simplicity.verdict, Verdict::Simple);

    let r = structure("borel", 1, 1);
    assert_eq!(r.simplicity.verdict, Verdict::Undetermined);
    assert_eq!(r.kind.tag(), "undetermined");
}


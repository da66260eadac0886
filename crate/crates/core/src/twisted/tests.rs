use super::*;
use crate::models;
use crate::scalars::{ExpForm, Scalar};
use num_rational::BigRational;

fn e(g: &GroupData, name: &str) -> Element {
    Element::basis(g.variable(name).unwrap())
}

fn exp_sym(v: usize, c: i64) -> Scalar {
    Scalar::exp(ExpForm::symbol(v, BigRational::from_integer(c.into())))
}

#[test]
fn moyal_products() {
    let m = models::moyal();
    let g = &m.group;
    let tw = Twister::new(g, &m.cocycle).unwrap();
    let (x, y) = (e(g, "x"), e(g, "y"));
    let xy = g.mul(&x, &y);
    let half = g.one().scale(&Scalar::ratio(1, 2));
    assert_eq!(tw.product(&x, &y).unwrap(), xy.add(&half));
    assert_eq!(tw.product(&y, &x).unwrap(), xy.sub(&half));
    assert_eq!(tw.left_product(&x, &y).unwrap(), xy.sub(&half));
    assert_eq!(tw.hopf_product(&x, &y).unwrap(), xy);
    assert_eq!(tw.product(&x, &g.one()).unwrap(), x);
}

#[test]
fn quantum_torus_products() {
    let m = models::quantum_torus();
    let g = &m.group;
    let tw = Twister::new(g, &m.cocycle).unwrap();
    let (x, y) = (e(g, "x"), e(g, "y"));
    let xy = g.mul(&x, &y);
    assert_eq!(tw.product(&x, &y).unwrap(), xy.scale(&exp_sym(0, 1)));
    assert_eq!(tw.product(&x, &y).unwrap(), tw.product(&y, &x).unwrap().scale(&exp_sym(0, 2)));
    assert_eq!(tw.left_product(&x, &y).unwrap(), xy.scale(&exp_sym(0, -1)));
    assert_eq!(tw.hopf_product(&x, &y).unwrap(), xy);
}

#[test]
fn moyal_presentation() {
    let m = models::moyal();
    let p = Presentation::derive(&m.group, &m.cocycle).unwrap();
    let rw = Rewriter::new(&p);
    let nf = rw.normal_form(&[Letter::Filt(1), Letter::Filt(0)]).unwrap();
    let xy = Monomial::new(vec![], vec![1, 1]);
    let one = Monomial::one(0, 2);
    assert_eq!(nf, TwistedElement::from_terms([(xy, Scalar::one()), (one.clone(), Scalar::from_int(-1))]));
    assert_eq!(p.comm[1][0], TwistedElement::term(one, Scalar::from_int(-1)));
    assert!(p.commutator_formula_holds);
}

#[test]
fn heisenberg_presentation() {
    let m = models::heisenberg();
    let p = Presentation::derive(&m.group, &m.cocycle).unwrap();
    let one = m.group.one_monomial();
    assert_eq!(p.comm[2][1], TwistedElement::basis(one));
    assert!(p.comm[2][0].is_zero());
    assert!(p.comm[1][0].is_zero());
    assert!(p.commutator_formula_holds);
}

#[test]
fn mixed_presentation() {
    let m = models::mixed_nilpotent();
    let g = &m.group;
    let p = Presentation::derive(g, &m.cocycle).unwrap();
    assert_eq!(p.lambda[0][1], exp_sym(0, 1));
    let z = g.z(0);
    let one = g.one_monomial();
    assert_eq!(p.conj_minus[0][0], TwistedElement::from_terms([(z, Scalar::one()), (one, Scalar::one())]));
    assert!(p.conj_minus[1][0] == TwistedElement::basis(g.z(0)));
    assert!(p.conjugation_formula_holds);
    let rw = Rewriter::new(&p);
    let zx = rw.normal_form(&[Letter::Filt(0), Letter::Torus { index: 0, inverse: false }]).unwrap();
    let xz = Monomial::new(vec![1, 0], vec![1]);
    assert_eq!(zx, TwistedElement::from_terms([(xz, Scalar::one()), (g.x(0, 1), Scalar::from_int(-1))]));
    let xxi = rw
        .normal_form(&[Letter::Torus { index: 0, inverse: false }, Letter::Torus { index: 0, inverse: true }])
        .unwrap();
    assert_eq!(xxi, TwistedElement::basis(g.one_monomial()));
}

fn all_words(p: &Presentation, len: usize) -> Vec<Vec<Letter>> {
    let gens = p.generator_letters();
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| {
                gens.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn rewriting_matches_twisted_products() {
    for name in models::BUILTIN_NAMES {
        let m = models::builtin(name).unwrap();
        let ex = Expander::new(&m.group, &m.cocycle).unwrap();
        let p = Presentation::from_expander(&ex, &m.cocycle).unwrap();
        let rw = Rewriter::new(&p);
        for w in all_words(&p, 3) {
            let nf = rw.normal_form(&w).unwrap();
            let direct = ex.product_of_letters(&w).unwrap();
            assert_eq!(ex.expand(&nf).unwrap(), direct, "{name}: {w:?}");
            assert_eq!(ex.to_nf(&direct).unwrap(), nf, "{name}: {w:?}");
        }
    }
}

#[test]
fn borel_relations() {
    let m = models::borel();
    let g = &m.group;
    let p = Presentation::derive(g, &m.cocycle).unwrap();
    let rw = Rewriter::new(&p);
    // y·x in normal form: x·y + h·x (torus letter first).
    let yx = rw.normal_form(&[Letter::Filt(0), Letter::Torus { index: 0, inverse: false }]).unwrap();
    let ex = Expander::new(g, &m.cocycle).unwrap();
    let direct = ex.product_of_letters(&[Letter::Filt(0), Letter::Torus { index: 0, inverse: false }]).unwrap();
    assert_eq!(ex.expand(&yx).unwrap(), direct);
}

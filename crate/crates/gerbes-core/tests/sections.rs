mod common;

use std::collections::BTreeMap;

use common::*;
use gerbes_core::fixtures;
use gerbes_core::gerbe::GerbeDatum;
use gerbes_core::monomial::MonomialMatrix;
use gerbes_core::morphism::{clock_shift_section, TwistedBundleMorphism};
use gerbes_core::product::ProductComplex;
use gerbes_core::reduction::{cup_product_gerbe, torsion_line};
use gerbes_core::sections::*;
use gerbes_core::{Cochain, Q, Ring, SimplicialComplex};

fn cup_gerbe() -> (ProductComplex, GerbeDatum) {
    let prod = fixtures::rp2xs1();
    let line = torsion_line(&prod.base, 2).unwrap();
    let g = cup_product_gerbe(&line, &prod).unwrap();
    (prod, g)
}

fn flat_line(k: &SimplicialComplex, phi: Q) -> TwistedBundleMorphism {
    let transition = k
        .simplices(1)
        .iter()
        .map(|e| (e.clone(), MonomialMatrix::scalar(1, if *e == vec![0, 3] { phi } else { Q::from_integer(0) })))
        .collect();
    TwistedBundleMorphism::new(k, GerbeDatum::zero(), GerbeDatum::zero(), 1, BTreeMap::new(), transition).unwrap()
}

#[test]
fn obstruction_reports() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let zero = sections_obstruction(k, &GerbeDatum::zero()).unwrap();
    assert!(!zero.certified_empty);
    assert_eq!(zero.order, Some(1));
    assert_eq!(zero.known_sections[0].rank(), 1);

    let cup = sections_obstruction(k, &g).unwrap();
    assert!(!cup.certified_empty);
    assert_eq!((cup.order, cup.rank_step), (Some(2), Some(2)));
    let s = &cup.known_sections[0];
    assert_eq!(s.rank(), 2);
    assert!(s.check(k).is_valid());

    let s3 = fixtures::sphere3();
    let mut gen = Cochain::zero(3, Ring::Int);
    gen.set(vec![0, 1, 2, 3], Q::from_integer(1));
    let mut r = rng(31);
    let rep = sections_obstruction(&s3, &random_gerbe(&mut r, &s3, &gen)).unwrap();
    assert!(rep.certified_empty);
    assert_eq!(rep.rational_image, vec![1]);
    assert!(rep.known_sections.is_empty() && rep.order.is_none());
}

#[test]
fn inner_products_of_the_clock_shift_section() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let s = clock_shift_section(k, &g, 2).unwrap();
    let ss = s.direct_sum(&s).unwrap();
    assert_eq!(inner_product(k, &s, &s).unwrap().dimension, 1);
    assert_eq!(inner_product(k, &s, &ss).unwrap().dimension, 2);
    assert_eq!(inner_product(k, &ss, &ss).unwrap().dimension, 4);
    let two = hilbert_action(k, &s, 2).unwrap();
    assert_eq!(two.rank(), 4);
    assert_eq!(inner_product(k, &two, &s).unwrap().dimension, 2);
    let one = hilbert_action(k, &s, 1).unwrap();
    assert_eq!(inner_product(k, &one, &s).unwrap().dimension, 1);
    let none = hilbert_action(k, &s, 0).unwrap();
    assert_eq!(none.rank(), 0);
    assert_eq!(inner_product(k, &none, &s).unwrap().dimension, 0);
    assert!(inner_product(k, &s, &TwistedBundleMorphism::trivial_bundle(k, 1)).is_err());
}

#[test]
fn holonomy_decides_the_inner_product() {
    let k = graphs().remove(0);
    let a = flat_line(&k, Q::new(1, 3));
    let b = flat_line(&k, Q::new(1, 3));
    let c = flat_line(&k, Q::new(2, 3));
    assert_eq!(inner_product(&k, &a, &b).unwrap().dimension, 1);
    assert_eq!(inner_product(&k, &a, &c).unwrap().dimension, 0);
    let ip = inner_product(&k, &a, &b).unwrap();
    let psi = &ip.basis[0];
    let norm = intertwiner_inner(psi, psi).unwrap();
    assert_eq!(norm, gerbes_core::Cyclo::one());
    assert!(ip.conjugate_basis()[0].violations(&k).is_empty());
}

#[test]
fn two_hilbert_axioms_hold_on_samples() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let s = clock_shift_section(k, &g, 2).unwrap();
    let ss = s.direct_sum(&s).unwrap();
    let rep = check_2hilbert_axioms(k, &[s.clone(), ss]).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.failures);
    assert!(rep.nondegenerate && rep.additive);
    assert_eq!(rep.pairs.iter().map(|p| p.dimension).collect::<Vec<_>>(), vec![1, 2, 2, 4]);

    let sq = graphs().remove(0);
    let mut r = rng(32);
    let samples: Vec<_> = (0..3).map(|i| random_graph_bundle(&mut r, &sq, 1 + i % 2, 2)).collect();
    let rep = check_2hilbert_axioms(&sq, &samples).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.failures);
}

#[test]
fn nonflat_hom_entries_are_flagged() {
    // a section of the trivial gerbe with curving dα, against a flat bundle
    // that ignores the curving
    let k = fixtures::sphere2();
    let mut alpha = Cochain::zero(1, Ring::Rat);
    alpha.set(vec![0, 1], Q::new(1, 3));
    let g = GerbeDatum::trivial(&k, &alpha.coboundary(&k)).unwrap();
    assert!(g.is_cocycle(&k));
    let conn = k
        .vertices()
        .iter()
        .map(|v| (*v, vec![alpha.restrict(|t| k.in_star(&[*v], t))]))
        .collect();
    let transition = k.simplices(1).iter().map(|e| (e.clone(), MonomialMatrix::identity(1))).collect();
    let s = TwistedBundleMorphism::new(&k, GerbeDatum::zero(), g.clone(), 1, conn, transition).unwrap();
    let rep = s.check(&k);
    assert!(rep.is_valid() && rep.fake_curvature);
    let flat = TwistedBundleMorphism::trivial_bundle(&k, 1).with_gerbes(GerbeDatum::zero(), g);
    assert!(!flat.check(&k).fake_curvature);
    let ip = inner_product(&k, &flat, &s).unwrap();
    assert_eq!(ip.dimension, 0);
    assert!(!ip.nonflat.is_empty());
    assert!(ip.nonflat.iter().all(|(v, r, j)| *r == 0 && *j == 0 && k.vertices().contains(v)));
    assert!(inner_product(&k, &s, &s).unwrap().nonflat.is_empty());
}

mod common;

use std::collections::BTreeMap;

use common::*;
use gerbes_core::fixtures;
use gerbes_core::gerbe::GerbeDatum;
use gerbes_core::monomial::{CycloMatrix, MonomialMatrix};
use gerbes_core::morphism::*;
use gerbes_core::product::ProductComplex;
use gerbes_core::reduction::{cup_product_gerbe, torsion_line};
use gerbes_core::{Cochain, Cyclo, SimplicialComplex, Q};
use proptest::prelude::*;

fn cup_gerbe() -> (ProductComplex, GerbeDatum) {
    let prod = fixtures::rp2xs1();
    let line = torsion_line(&prod.base, 2).unwrap();
    let g = cup_product_gerbe(&line, &prod).unwrap();
    (prod, g)
}

fn square() -> SimplicialComplex {
    graphs().remove(0)
}

/// Rank-one flat line on the 4-gon with all holonomy on edge `[0, 3]`.
fn line_with_holonomy(k: &SimplicialComplex, phi: Q) -> TwistedBundleMorphism {
    let transition = k
        .simplices(1)
        .iter()
        .map(|e| (e.clone(), MonomialMatrix::scalar(1, if *e == vec![0, 3] { -phi } else { Q::from_integer(0) })))
        .collect();
    TwistedBundleMorphism::new(k, GerbeDatum::zero(), GerbeDatum::zero(), 1, BTreeMap::new(), transition).unwrap()
}

/// Phase of the rank-one transport around `0 → 1 → 2 → 3 → 0`.
fn loop_phase(e: &TwistedBundleMorphism) -> Q {
    let ph = |a: u32, b: u32| e.transition(&[a, b]).phases()[0];
    gerbes_core::arith::frac(ph(0, 1) + ph(1, 2) + ph(2, 3) - ph(0, 3))
}

#[test]
fn perturbed_transition_names_its_triangles() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let s = clock_shift_section(k, &g, 2).unwrap();
    assert!(s.check(k).is_valid());
    let e = k.simplices(1)[0].clone();
    let mut bad = s.clone();
    bad.set_transition(e.clone(), s.transition(&e).times_phase(Q::new(1, 5))).unwrap();
    let v = bad.check(k).violations;
    assert!(!v.is_empty());
    for x in &v {
        assert_eq!(x.equation, "twisted cocycle");
        assert!(e.iter().all(|w| x.location.contains(w)));
    }
    let cofaces = k.simplices(2).iter().filter(|t| e.iter().all(|w| t.contains(w))).count();
    assert_eq!(v.len(), cofaces);
}

#[test]
fn rank_one_compositions_add_phases() {
    let k = square();
    let (a, b) = (line_with_holonomy(&k, Q::new(1, 3)), line_with_holonomy(&k, Q::new(1, 4)));
    let c = a.compose(&b).unwrap();
    assert_eq!(c.rank(), 1);
    assert_eq!(loop_phase(&c), Q::new(7, 12));
    assert_eq!(loop_phase(&a.tensor(&b)), Q::new(7, 12));
    assert_eq!(loop_phase(&a.adjoint()), Q::new(2, 3));
}

#[test]
fn pairing_holonomy_is_the_difference() {
    let k = square();
    let (e, f) = (line_with_holonomy(&k, Q::new(1, 5)), line_with_holonomy(&k, Q::new(1, 2)));
    let hom = TwistedBundleMorphism::pairing(&e, &f).unwrap();
    assert_eq!(loop_phase(&hom), Q::new(3, 10));
    assert_eq!(intertwiner_space(&k, &e, &f, true).unwrap().dimension, 0);
    assert_eq!(intertwiner_space(&k, &e, &e, true).unwrap().dimension, 1);
    let one = TwistedBundleMorphism::trivial_bundle(&k, 1);
    assert_eq!(intertwiner_space(&k, &one, &hom, true).unwrap().dimension, 0);
    let self_hom = TwistedBundleMorphism::pairing(&e, &e).unwrap();
    assert_eq!(intertwiner_space(&k, &one, &self_hom, true).unwrap().dimension, 1);
}

#[test]
fn adjoint_composite_of_the_clock_shift_section() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let s = clock_shift_section(k, &g, 2).unwrap();
    let end = s.adjoint().compose(&s).unwrap();
    assert_eq!(end.rank(), 4);
    assert!(end.check(k).is_valid());
    let one = TwistedBundleMorphism::trivial_bundle(k, 1).with_gerbes(end.source().clone(), end.target().clone());
    assert_eq!(intertwiner_space(k, &one, &end, true).unwrap().dimension, 1);
    let hom = TwistedBundleMorphism::pairing(&s, &s).unwrap();
    assert_eq!(hom.rank(), 4);
    let one = TwistedBundleMorphism::trivial_bundle(k, 1);
    assert_eq!(intertwiner_space(k, &one, &hom, true).unwrap().dimension, 1);
    assert_eq!(intertwiner_space(k, &s, &s, true).unwrap().dimension, 1);
}

#[test]
fn determinant_and_riesz_dual_of_the_section() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let s = clock_shift_section(k, &g, 2).unwrap();
    let det = s.determinant();
    assert_eq!(det.rank(), 1);
    assert!(det.check(k).is_valid());
    assert_eq!(*det.target(), g.power(2));
    let dual = s.riesz_dual();
    assert!(dual.check(k).is_valid());
    assert_eq!(*dual.target(), g.dual());
    let (rho, h) = frame_trivialization(k, &det).unwrap();
    let rebuilt = det.source().tensor(&GerbeDatum::trivial(k, &rho).unwrap().gauge_transform(k, &h));
    assert_eq!(rebuilt, *det.target());
}

#[test]
fn identity_frame_has_zero_rho() {
    let (prod, g) = cup_gerbe();
    let k = &prod.total;
    let (rho, _) = frame_trivialization(k, &TwistedBundleMorphism::identity(k, &g)).unwrap();
    assert!(rho.is_zero());
    let s = clock_shift_section(k, &g, 2).unwrap();
    assert!(frame_trivialization(k, &s).is_err());
}

fn zero_intertwiner(k: &SimplicialComplex, e: &TwistedBundleMorphism) -> Intertwiner {
    let comps = k.vertices().iter().map(|v| (*v, CycloMatrix::zeros(e.rank(), e.rank()))).collect();
    Intertwiner::new(k, e.clone(), e.clone(), comps).unwrap()
}

#[test]
fn kernels_of_coordinate_intertwiners() {
    let k = square();
    let mut r = rng(21);
    let e = random_graph_bundle(&mut r, &k, 2, 4);
    let f = random_graph_bundle(&mut r, &k, 1, 4);
    // ψ = 0 keeps everything
    let (ker, inc) = kernel_of_intertwiner(&k, &zero_intertwiner(&k, &e)).unwrap();
    assert_eq!(ker, e);
    assert_eq!(inc, Intertwiner::identity(&e));
    // projection onto the first summand kills the second
    let sum = direct_sum_structure(&e, &f).unwrap();
    let (ker, inc) = kernel_of_intertwiner(&k, &sum.project_first).unwrap();
    assert_eq!(ker, f);
    assert!(inc.violations(&k).is_empty());
    let phi = factor_through_kernel(&inc, &sum.include_second).unwrap();
    assert_eq!(inc.compose(&phi).unwrap(), sum.include_second);
    // id ⊕ 0 as an endomorphism of the sum
    let idz = sum.include_first.compose(&sum.project_first).unwrap();
    let (ker, _) = kernel_of_intertwiner(&k, &idz).unwrap();
    assert_eq!(ker.rank(), 1);
    assert!(factor_through_kernel(&inc, &sum.include_first).is_err());
}

#[test]
fn connection_lists_must_match_the_rank() {
    let k = square();
    let mut c = Cochain::zero(1, gerbes_core::Ring::Rat);
    c.set(vec![0, 1], Q::new(1, 2));
    let conn: BTreeMap<u32, Vec<Cochain>> = [(0, vec![c.clone(), Cochain::zero(1, gerbes_core::Ring::Rat)]), (1, vec![c])].into_iter().collect();
    let transition = k.simplices(1).iter().map(|e| (e.clone(), MonomialMatrix::identity(2))).collect();
    let e = TwistedBundleMorphism::new(&k, GerbeDatum::zero(), GerbeDatum::zero(), 2, conn, transition);
    // the connection on vertex 1 has the wrong length
    assert!(e.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn intertwiner_dimension_matches_the_float_oracle(seed in 0u64..10_000, g in 0usize..4, n in 1usize..4, m in 1usize..4) {
        let k = &graphs()[g];
        let mut r = rng(seed);
        let e = random_graph_bundle(&mut r, k, n, 3);
        let f = random_graph_bundle(&mut r, k, m, 3);
        let space = intertwiner_space(k, &e, &f, false).unwrap();
        prop_assert_eq!(space.dimension, float_intertwiner_dim(k, &e, &f, false));
        for psi in &space.basis {
            prop_assert!(psi.violations(k).is_empty());
        }
    }

    #[test]
    fn horizontal_composition_obeys_interchange(seed in 0u64..10_000, g in 0usize..4) {
        let k = &graphs()[g];
        let mut r = rng(seed);
        let e = random_graph_bundle(&mut r, k, 2, 2);
        let f = random_graph_bundle(&mut r, k, 2, 2);
        let (ee, ff) = (e.direct_sum(&e).unwrap(), f.direct_sum(&f).unwrap());
        let psi = direct_sum_structure(&e, &e).unwrap().include_first;
        let psi2 = direct_sum_structure(&e, &e).unwrap().project_second;
        let phi = direct_sum_structure(&f, &f).unwrap().include_second;
        let phi2 = direct_sum_structure(&f, &f).unwrap().project_second;
        let h = psi.horizontal(&phi).unwrap();
        prop_assert!(h.violations(k).is_empty());
        prop_assert_eq!(h.source(), &e.compose(&f).unwrap());
        prop_assert_eq!(h.target(), &ee.compose(&ff).unwrap());
        let lhs = psi2.compose(&psi).unwrap().horizontal(&phi2.compose(&phi).unwrap()).unwrap();
        let rhs = psi2.horizontal(&phi2).unwrap().compose(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
        let t = psi.tensor(&phi);
        prop_assert!(t.violations(k).is_empty());
        prop_assert_eq!(Intertwiner::identity(&e).tensor(&Intertwiner::identity(&f)), Intertwiner::identity(&e.tensor(&f)));
    }

    #[test]
    fn monomial_algebra(seed in 0u64..10_000, n in 1usize..5) {
        let mut r = rng(seed);
        let (a, b, c) = (random_monomial(&mut r, n, 6), random_monomial(&mut r, n, 6), random_monomial(&mut r, n, 6));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&a.inverse()), MonomialMatrix::identity(n));
        prop_assert_eq!(a.compose(&b).to_dense(), a.to_dense().mul(&b.to_dense()));
        prop_assert_eq!(a.to_dense().det(), leibniz_det(&a.to_dense()));
        prop_assert_eq!(Cyclo::root(a.det_phase()), a.to_dense().det());
        prop_assert_eq!(a.compose(&b).det_phase(), gerbes_core::arith::frac(a.det_phase() + b.det_phase()));
        prop_assert_eq!(a.trace(), a.to_dense().trace());
        let (cd, d) = (a.conj().to_dense(), a.to_dense());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(cd.get(i, j).clone(), d.get(i, j).conj());
            }
        }
        prop_assert_eq!(a.inverse().to_dense(), d.adjoint());
        prop_assert_eq!(a.kron(&b).to_dense(), a.to_dense().kron(&b.to_dense()));
    }

    #[test]
    fn tensor_and_sum_ranks_on_graphs(seed in 0u64..10_000, g in 0usize..4) {
        let k = &graphs()[g];
        let mut r = rng(seed);
        let e = random_graph_bundle(&mut r, k, 2, 4);
        let f = random_graph_bundle(&mut r, k, 1, 4);
        let h = random_graph_bundle(&mut r, k, 2, 4);
        let dim = |x: &TwistedBundleMorphism, y: &TwistedBundleMorphism| intertwiner_space(k, x, y, true).unwrap().dimension;
        let sum = e.direct_sum(&f).unwrap();
        prop_assert_eq!(dim(&sum, &h), dim(&e, &h) + dim(&f, &h));
        prop_assert_eq!(dim(&h, &sum), dim(&h, &e) + dim(&h, &f));
        prop_assert_eq!(dim(&e, &h), dim(&h, &e));
        let hom = TwistedBundleMorphism::pairing(&e, &h).unwrap();
        let one = TwistedBundleMorphism::trivial_bundle(k, 1);
        prop_assert_eq!(dim(&one, &hom), dim(&e, &h));
    }
}

mod common;

use common::*;
use gerbes_core::cohomology::{cohomology, fundamental_cycle, IntegralCohomology};
use gerbes_core::fixtures;
use gerbes_core::product::{circle_cycle, circle_generator, cup, ProductComplex};
use gerbes_core::{Chain, Cochain, Ring, Q};
use proptest::prelude::*;

fn torus() -> ProductComplex {
    ProductComplex::new(&fixtures::circle(3).unwrap(), 3).unwrap()
}

#[test]
fn circle_and_torus_groups() {
    let c4 = fixtures::circle(4).unwrap();
    assert_eq!(cohomology(&c4, 1, Ring::Int).unwrap().free_rank, 1);
    assert_eq!(circle_generator(4).evaluate(&circle_cycle(4)).unwrap(), Q::from_integer(1));
    let t = torus();
    assert_eq!(t.total.euler_characteristic(), 0);
    assert_eq!(cohomology(&t.total, 1, Ring::Int).unwrap().free_rank, 2);
    let h2 = cohomology(&t.total, 2, Ring::Int).unwrap();
    assert_eq!((h2.free_rank, h2.torsion), (1, vec![]));
}

#[test]
fn constant_one_is_a_cup_unit() {
    let k = fixtures::sphere3();
    let one = Cochain::constant(&k, 0, Ring::Int, Q::from_integer(1));
    let mut r = rng(4);
    for q in 0..=3 {
        let a = random_cochain(&mut r, &k, q);
        assert_eq!(cup(&k, &one, &a).unwrap(), a);
        assert_eq!(cup(&k, &a, &one).unwrap(), a);
    }
}

#[test]
fn torus_generators_cup_to_a_unit() {
    let t = torus();
    let a = t.pull_base(&circle_generator(3));
    let b = t.pull_circle(&circle_generator(3));
    let z = fundamental_cycle(&t.total).unwrap();
    let ab = cup(&t.total, &a, &b).unwrap().evaluate(&z).unwrap();
    let ba = cup(&t.total, &b, &a).unwrap().evaluate(&z).unwrap();
    assert!(ab == Q::from_integer(1) || ab == Q::from_integer(-1));
    // graded commutativity in cohomology
    assert_eq!(ab, -ba);
    assert!(cup(&t.total, &a, &a).unwrap().evaluate(&z).unwrap() == Q::from_integer(0));
}

#[test]
fn cross_with_the_fiber_has_order_two() {
    let p = fixtures::rp2xs1();
    let base = IntegralCohomology::new(&p.base, 2).unwrap();
    let (d, c, _) = base.torsion_generators(&p.base).remove(0);
    assert_eq!(d, 2);
    let x = p.cross(&c, &circle_generator(3)).unwrap();
    assert!(x.coboundary(&p.total).is_zero());
    let h3 = IntegralCohomology::new(&p.total, 3).unwrap();
    assert_eq!(h3.coordinates(&p.total, &x).unwrap().order(), Some(2));
    // the fiber integral recovers the base class
    let back = p.fiber_integrate(&x).unwrap();
    let coords = base.coordinates(&p.base, &back).unwrap();
    assert_eq!(coords.order(), Some(2));
}

#[test]
fn fiber_integration_rejects_degree_zero() {
    let p = torus();
    assert!(p.fiber_integrate(&Cochain::zero(0, Ring::Int)).is_err());
}

fn random_chain(r: &mut rand_chacha::ChaCha8Rng, k: &gerbes_core::SimplicialComplex, q: usize) -> Chain {
    let v: Vec<i128> = (0..k.count(q)).map(|_| rand::Rng::gen_range(r, -2..=2)).collect();
    Chain::from_vector(k, q, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cup_satisfies_leibniz(seed in 0u64..10_000, p in 0usize..3, q in 0usize..2) {
        let k = fixtures::sphere3();
        let mut r = rng(seed);
        let a = random_cochain(&mut r, &k, p);
        let b = random_cochain(&mut r, &k, q);
        let lhs = cup(&k, &a, &b).unwrap().coboundary(&k);
        let sign = if p % 2 == 0 { Q::from_integer(1) } else { Q::from_integer(-1) };
        let rhs = cup(&k, &a.coboundary(&k), &b).unwrap().add(&cup(&k, &a, &b.coboundary(&k)).unwrap().scale(sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_is_associative(seed in 0u64..10_000) {
        let k = fixtures::sphere3();
        let mut r = rng(seed);
        let (a, b, c) = (random_cochain(&mut r, &k, 1), random_cochain(&mut r, &k, 1), random_cochain(&mut r, &k, 1));
        let left = cup(&k, &cup(&k, &a, &b).unwrap(), &c).unwrap();
        let right = cup(&k, &a, &cup(&k, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn fiber_integral_is_the_prism_pairing(seed in 0u64..10_000, q in 0usize..3) {
        let p = fixtures::rp2xs1();
        let mut r = rng(seed);
        let c = random_cochain(&mut r, &p.total, q + 1);
        let z = random_chain(&mut r, &p.base, q);
        let lhs = p.fiber_integrate(&c).unwrap().evaluate(&z).unwrap();
        prop_assert_eq!(lhs, c.evaluate(&p.prism_chain(&z)).unwrap());
    }

    #[test]
    fn fiber_integral_commutes_with_the_coboundary(seed in 0u64..10_000, q in 1usize..3) {
        let p = fixtures::rp2xs1();
        let mut r = rng(seed);
        let c = random_cochain(&mut r, &p.total, q);
        let lhs = p.fiber_integrate(&c.coboundary(&p.total)).unwrap();
        let rhs = p.fiber_integrate(&c).unwrap().coboundary(&p.base);
        prop_assert_eq!(lhs, rhs);
    }
}

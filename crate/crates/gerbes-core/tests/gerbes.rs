mod common;

use std::collections::BTreeMap;

use common::*;
use gerbes_core::cohomology::fundamental_cycle;
use gerbes_core::deligne::{class_equal, DifferentialCocycle};
use gerbes_core::fixtures;
use gerbes_core::gerbe::{ClosedDomain, GerbeDatum};
use gerbes_core::{Cochain, Ring, Q};
use proptest::prelude::*;

fn top_generator(k: &gerbes_core::SimplicialComplex, m: i128) -> Cochain {
    let mut c = Cochain::zero(3, Ring::Int);
    c.set(k.simplices(3)[0].clone(), Q::from_integer(m));
    c
}

#[test]
fn trivial_gerbe_holonomy_is_the_integral_of_rho() {
    let s2 = fixtures::sphere2();
    let z = fundamental_cycle(&s2).unwrap();
    let mut rho = Cochain::zero(2, Ring::Rat);
    for (s, sg) in &z.terms {
        rho.set(s.clone(), Q::new(*sg, 8));
    }
    let g = GerbeDatum::trivial(&s2, &rho).unwrap();
    assert!(g.is_cocycle(&s2));
    assert!(g.is_combinatorial(&s2));
    let dom = ClosedDomain::new(s2.clone()).unwrap();
    let id = identity_map(&s2);
    assert_eq!(g.surface_holonomy(&s2, &dom, &id, None).unwrap(), Q::new(1, 2));
    assert!(GerbeDatum::trivial(&s2, &Cochain::zero(1, Ring::Rat)).is_err());
}

#[test]
fn dixmier_douady_class_on_the_three_sphere() {
    let k = fixtures::sphere3();
    let mut r = rng(11);
    for m in [-2i128, 0, 1, 3] {
        let g = random_gerbe(&mut r, &k, &top_generator(&k, m));
        assert!(g.is_cocycle(&k));
        let dd = g.dd_class(&k).unwrap();
        assert_eq!(dd.free, vec![m]);
        assert_eq!(g.tensor(&g).dd_class(&k).unwrap().free, vec![2 * m]);
        assert_eq!(g.dual().dd_class(&k).unwrap().free, vec![-m]);
        assert_eq!(g.normalize(&k).is_ok(), m == 0);
    }
}

#[test]
fn pullback_along_identity_and_constant_maps() {
    let k = fixtures::sphere3();
    let mut r = rng(12);
    let g = random_gerbe(&mut r, &k, &top_generator(&k, 1));
    assert_eq!(g.pullback(&k, &k, &identity_map(&k)).unwrap(), g);
    let constant: BTreeMap<u32, u32> = k.vertices().iter().map(|v| (*v, 2)).collect();
    let c = g.pullback(&k, &k, &constant).unwrap();
    assert!(c.is_cocycle(&k));
    assert!(c.dd_class(&k).unwrap().is_zero());
    // not simplicial: the top simplex lands on a non-face of ∂Δ³
    let s2 = fixtures::sphere2();
    let fold: BTreeMap<u32, u32> = k.vertices().iter().map(|v| (*v, v % 4)).collect();
    assert!(GerbeDatum::zero().pullback(&k, &s2, &fold).is_err());
}

#[test]
fn section_pullback_of_a_torsion_gerbe_is_flat_on_the_base() {
    let p = fixtures::rp2xs1();
    let mut r = rng(13);
    let h3 = gerbes_core::cohomology::IntegralCohomology::new(&p.total, 3).unwrap();
    let (_, c, _) = h3.torsion_generators(&p.total).remove(0);
    let g = random_gerbe(&mut r, &p.total, &c);
    let s = g.pullback(&p.base, &p.total, &p.section_map(0)).unwrap();
    assert!(s.is_cocycle(&p.base));
    let x = s.collate(&p.base).unwrap();
    assert!(x.c.is_zero());
}

#[test]
fn gauge_transforms_preserve_the_class() {
    let k = fixtures::rp2_6();
    let k3 = fixtures::sphere3();
    let mut r = rng(14);
    for _ in 0..5 {
        let g = random_gerbe(&mut r, &k3, &top_generator(&k3, 2));
        let h = random_gauge(&mut r, &k3);
        let g2 = g.gauge_transform(&k3, &h);
        assert!(g2.is_cocycle(&k3));
        assert!(class_equal(&k3, &g.collate(&k3).unwrap(), &g2.collate(&k3).unwrap()).unwrap());
        assert_eq!(g2.dd_class(&k3).unwrap(), g.dd_class(&k3).unwrap());
    }
    let g = random_gerbe(&mut r, &k, &Cochain::zero(3, Ring::Int));
    let h = random_gauge(&mut r, &k);
    assert_eq!(g.gauge_transform(&k, &h).curvature(&k).unwrap(), g.curvature(&k).unwrap());
}

#[test]
fn normalize_gives_constant_transitions() {
    let p = fixtures::rp2xs1();
    let mut r = rng(15);
    let h3 = gerbes_core::cohomology::IntegralCohomology::new(&p.total, 3).unwrap();
    let (_, c, _) = h3.torsion_generators(&p.total).remove(0);
    let g = random_gerbe(&mut r, &p.total, &c);
    assert!(!g.is_combinatorial(&p.total));
    let (n, gauge) = g.normalize(&p.total).unwrap();
    assert!(n.is_combinatorial(&p.total));
    assert_eq!(n, g.gauge_transform(&p.total, &gauge));
    assert_eq!(n.dd_class(&p.total).unwrap().order(), Some(2));
}

#[test]
fn perturbed_curvature_names_the_failed_equation() {
    let k = fixtures::sphere2();
    let mut r = rng(16);
    let mut x = random_cocycle(&mut r, &k, 2, &Cochain::zero(2, Ring::Int));
    assert!(x.violations(&k).is_empty());
    let t = vec![0, 1, 2];
    x.omega.add_at(&t, Q::new(1, 5));
    let v = x.violations(&k);
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].equation.as_str(), v[0].location.clone()), ("ω − c = δh", t));
    assert!(DifferentialCocycle::new(2, x.c.clone(), x.omega.clone(), x.omega.clone()).is_err());
}

#[test]
fn perturbed_gerbe_datum_is_reported() {
    let k = fixtures::sphere3();
    let mut r = rng(17);
    let mut g = random_gerbe(&mut r, &k, &top_generator(&k, 1));
    let e = vec![0, 1];
    let mut a = g.connection(&e);
    a.add_at(&[0, 1], Q::new(1, 7));
    g.set_form(1, e.clone(), a);
    let v = g.violations(&k);
    assert!(!v.is_empty());
    assert!(v.iter().any(|x| x.location == e));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn holonomy_is_natural_under_pullback(seed in 0u64..10_000) {
        let k = fixtures::sphere3();
        let s2 = fixtures::sphere2();
        let mut r = rng(seed);
        let g = random_gerbe(&mut r, &k, &top_generator(&k, 1));
        let map = random_vertex_map(&mut r, &s2, &k);
        let dom = ClosedDomain::new(s2.clone()).unwrap();
        let direct = g.surface_holonomy(&k, &dom, &map, None).unwrap();
        let pulled = g.pullback(&s2, &k, &map).unwrap();
        prop_assert!(pulled.is_cocycle(&s2));
        prop_assert_eq!(direct, pulled.surface_holonomy(&s2, &dom, &identity_map(&s2), None).unwrap());
    }

    #[test]
    fn holonomy_is_gauge_invariant(seed in 0u64..10_000) {
        let k = fixtures::sphere3();
        let s2 = fixtures::sphere2();
        let mut r = rng(seed);
        let g = random_gerbe(&mut r, &k, &top_generator(&k, 1));
        let h = random_gauge(&mut r, &k);
        let map = random_vertex_map(&mut r, &s2, &k);
        let dom = ClosedDomain::new(s2).unwrap();
        let a = g.surface_holonomy(&k, &dom, &map, None).unwrap();
        let b = g.gauge_transform(&k, &h).surface_holonomy(&k, &dom, &map, None).unwrap();
        prop_assert_eq!(a, b);
    }
}

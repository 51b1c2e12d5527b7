//! Decomposable gerbes on `X × S¹` and dimensional reduction along the
//! circle factor.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;


use crate::arith::{Cyclo, Q};
use crate::cochain::{Chain, Cochain, Ring};
use crate::cohomology::{ClassCoordinates, IntegralCohomology};
use crate::complex::{Simplex, SimplicialComplex};
use crate::deligne::{class_equal, holonomy, DifferentialCocycle};
use crate::error::{validation, Error, Result};
use crate::gerbe::{GerbeDatum, LineDatum};
use crate::linalg::integer_kernel;
use crate::monomial::MonomialMatrix;
use crate::morphism::{clock_shift_section, frame_trivialization, TwistedBundleMorphism};
use crate::product::{circle_edges, circle_generator, cup, ProductComplex};
use crate::sections::inner_product;

/// The angle of the circle as a degree-1 differential cocycle: integral
/// jump on the closing edge, uniform flat form, and the fiber coordinate
/// `j/m` as `h`.
pub fn circle_angle(m: usize) -> DifferentialCocycle {
    let c = circle_generator(m);
    let mut h = Cochain::zero(0, Ring::Rat);
    for j in 1..m {
        h.set(vec![j as u32], Q::new(j as i128, m as i128));
    }
    let mut omega = Cochain::zero(1, Ring::Rat);
    for (u, w, eps) in circle_edges(m) {
        omega.set(vec![u, w], Q::new(eps, m as i128));
    }
    DifferentialCocycle { n: 1, c, h, omega }
}

/// Product of differential cocycles pulled back to the total space:
/// `(c₁⌣c₂, h₁⌣c₂ + (−1)^{n₁} ω₁⌣h₂, ω₁⌣ω₂)`.
fn product_cocycle(p: &ProductComplex, x: &DifferentialCocycle, y: &DifferentialCocycle) -> Result<DifferentialCocycle> {
    let k = &p.total;
    let (c1, h1, w1) = (p.pull_base(&x.c), p.pull_base(&x.h), p.pull_base(&x.omega));
    let (c2, h2, w2) = (p.pull_circle(&y.c), p.pull_circle(&y.h), p.pull_circle(&y.omega));
    let sg = Q::from_integer(crate::arith::sign(x.n));
    let c = cup(k, &c1, &c2)?;
    let h = cup(k, &h1, &c2)?.add(&cup(k, &w1, &h2)?.scale(sg));
    let omega = cup(k, &w1, &w2)?;
    DifferentialCocycle::new(x.n + y.n, c, h, omega)
}

/// Gerbe on `X × S¹` whose class is the product of the line's class with
/// the circle angle. The curving is the line's curvature times the fiber
/// coordinate. The data is normalized to constant transition lifts when
/// the Dixmier–Douady class is torsion.
pub fn cup_product_gerbe(line: &LineDatum, p: &ProductComplex) -> Result<GerbeDatum> {
    let j = line.collate(&p.base)?;
    let x = product_cocycle(p, &j, &circle_angle(p.circle_size))?;
    let g = GerbeDatum::localize(&p.total, &x)?;
    match g.normalize(&p.total) {
        Ok((n, _)) => Ok(n),
        Err(Error::Obstruction { .. }) => Ok(g),
        Err(e) => Err(e),
    }
}

/// Slant product of a differential cocycle with the fiber cycle.
pub fn reduce_cocycle(p: &ProductComplex, x: &DifferentialCocycle) -> Result<DifferentialCocycle> {
    if x.n < 2 {
        return validation("reduction needs degree at least 2");
    }
    DifferentialCocycle::new(x.n - 1, p.fiber_integrate(&x.c)?, p.fiber_integrate(&x.h)?, p.fiber_integrate(&x.omega)?)
}

/// Dimensional reduction of a gerbe on `X × S¹` to a line bundle on `X`.
pub fn reduce_gerbe(k: &SimplicialComplex, g: &GerbeDatum, p: &ProductComplex) -> Result<LineDatum> {
    p.check_total(k)?;
    let x = reduce_cocycle(p, &g.collate(k)?)?;
    LineDatum::localize(&p.base, &x)
}

/// Transition phases of the reduced line bundle read off from constant
/// gerbe data: minus the fiber integral of the transition constants.
pub fn reduced_transitions(k: &SimplicialComplex, g: &GerbeDatum, p: &ProductComplex) -> Result<Cochain> {
    p.check_total(k)?;
    let mut kappa = Cochain::zero(2, Ring::Rat);
    for t in k.simplices(2) {
        let c = g
            .transition_constant(k, t)
            .ok_or_else(|| Error::Validation(format!("transition lift on {t:?} is not constant")))?;
        kappa.set(t.clone(), c);
    }
    Ok(p.fiber_integrate(&kappa)?.neg())
}

/// Line datum with transitions [`reduced_transitions`] whose collation is
/// exactly the reduction of the gerbe's differential cocycle.
pub fn wilson_line_datum(k: &SimplicialComplex, g: &GerbeDatum, p: &ProductComplex) -> Result<LineDatum> {
    let phi = reduced_transitions(k, g, p)?;
    let x = reduce_cocycle(p, &g.collate(k)?)?;
    let base = &p.base;
    let global = x.h.sub(&phi);
    let mut forms = vec![BTreeMap::new(), BTreeMap::new()];
    for v in base.vertices() {
        let s = vec![*v];
        forms[0].insert(s.clone(), global.restrict(|t| base.in_star(&s, t)));
    }
    for e in base.simplices(1) {
        let mut c = Cochain::zero(0, Ring::Rat);
        for w in base.star_simplices(e, 0) {
            c.set(w, phi.get(e));
        }
        forms[1].insert(e.clone(), c);
    }
    let m = phi.coboundary(base);
    let mut winding = BTreeMap::new();
    for (t, val) in m.values() {
        if !val.is_integer() {
            return validation("fiber integral of the transition constants is not a cocycle mod 1");
        }
        winding.insert(t.clone(), val.to_integer());
    }
    let out = LineDatum::new(base, forms, winding)?;
    if out.collate(base)? != x {
        return Err(Error::Validation("reduced line datum does not collate to the reduced cocycle".into()));
    }
    Ok(out)
}

/// Fiber holonomy over `x` at `(x, 0)`: the inverse of the transport
/// `α_{m−1,0} ∘ ⋯ ∘ α_{01}` once around the fiber. The inverse matches the
/// convention that a section `w` of a line datum obeys `w_y = e(f_xy) w_x`.
pub fn fiber_holonomy(s: &TwistedBundleMorphism, p: &ProductComplex, x: u32) -> MonomialMatrix {
    let m = p.circle_size as u32;
    let mut h = MonomialMatrix::identity(s.rank());
    for j in 0..m - 1 {
        h = s.transition(&[p.vertex(x, j), p.vertex(x, j + 1)]).compose(&h);
    }
    s.transition(&[p.vertex(x, 0), p.vertex(x, m - 1)]).inverse().compose(&h).inverse()
}

/// Wilson traces of a section over each base vertex, with the reduced
/// transition phases they must satisfy: `w_y = e(φ_xy) · w_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSection {
    pub values: BTreeMap<u32, Cyclo>,
    pub transitions: Cochain,
    /// Edges where `w_y = e(φ_xy) · w_x` fails.
    pub failures: Vec<Simplex>,
    /// Edges where the holonomies over the two endpoints are not
    /// conjugate up to `e(φ_xy)` by the transition along the base edge.
    pub conjugation_failures: Vec<Simplex>,
    /// Set when every trace vanishes and the result is the zero section.
    pub warning: Option<String>,
}

impl ReducedSection {
    /// All traces vanish: no fixed cycle in any fiber holonomy.
    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn relations_hold(&self) -> bool {
        self.failures.is_empty() && self.conjugation_failures.is_empty()
    }
}

/// Reduces a section `I₀ → G` of a combinatorial gerbe on `X × S¹` to
/// Wilson-trace values on `X`.
pub fn reduce_section(k: &SimplicialComplex, s: &TwistedBundleMorphism, p: &ProductComplex) -> Result<ReducedSection> {
    p.check_total(k)?;
    let report = s.check(k);
    if !report.is_valid() {
        return Err(crate::deligne::report_error("section", &report.violations));
    }
    if *s.source() != GerbeDatum::zero() {
        return validation("reduction of sections needs a morphism out of the trivial gerbe");
    }
    let phi = reduced_transitions(k, s.target(), p)?;
    let mut hol = BTreeMap::new();
    let mut values = BTreeMap::new();
    for x in p.base.vertices() {
        let h = fiber_holonomy(s, p, *x);
        values.insert(*x, h.trace());
        hol.insert(*x, h);
    }
    let mut failures = Vec::new();
    let mut conjugation_failures = Vec::new();
    for e in p.base.simplices(1) {
        let (x, y) = (e[0], e[1]);
        let ph = phi.get(e);
        if values[&y] != values[&x].rotate(ph) {
            failures.push(e.clone());
        }
        let t = s.transition(&[p.vertex(x, 0), p.vertex(y, 0)]);
        if hol[&y].compose(t) != t.compose(&hol[&x]).times_phase(ph) {
            conjugation_failures.push(e.clone());
        }
    }
    let warning = values
        .values()
        .all(|v| v.is_zero())
        .then(|| "fiber holonomies have no fixed cycle; the reduced section is zero".into());
    Ok(ReducedSection { values, transitions: phi, failures, conjugation_failures, warning })
}

/// Named pass/fail checks of the decomposable-gerbe pipeline.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub order: usize,
    pub base: SimplicialComplex,
    pub checks: Vec<(String, bool)>,
    pub dd_class: ClassCoordinates,
    pub dd_order: Option<i128>,
    pub gerbe: GerbeDatum,
    pub reduced: LineDatum,
    pub line: LineDatum,
    pub section: Option<TwistedBundleMorphism>,
    pub reduced_section: Option<ReducedSection>,
    pub determinant_section: Option<ReducedSection>,
}

impl ReductionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn record(&mut self, name: &str, ok: bool) {
        self.checks.push((name.into(), ok));
    }
}

/// Flat line bundle on `base` whose Chern class is an order-`p` torsion
/// generator of `H²(base; ℤ)`, or the trivial line for `p = 1`.
pub fn torsion_line(base: &SimplicialComplex, p: usize) -> Result<LineDatum> {
    if p == 1 {
        return Ok(LineDatum::zero());
    }
    let hc = IntegralCohomology::new(base, 2)?;
    let (d, c, b) = hc
        .torsion_generators(base)
        .into_iter()
        .find(|(d, _, _)| *d == p as i128)
        .ok_or_else(|| Error::Validation(format!("base has no ℤ_{p} summand in degree-2 cohomology")))?;
    let x = DifferentialCocycle { n: 2, c, h: b.scale(Q::new(-1, d)), omega: Cochain::zero(2, Ring::Rat) };
    LineDatum::localize(base, &x)
}

/// Integral 1-cycles spanning all cycles of the complex.
pub fn cycle_basis(k: &SimplicialComplex) -> Result<Vec<Chain>> {
    let b = k.boundary_matrix(1)?;
    Ok(integer_kernel(&b).into_iter().map(|v| Chain::from_vector(k, 1, &v)).collect())
}

/// End-to-end run on `base × S¹` (the six-vertex projective plane unless
/// given): torsion line, cup gerbe, clock-shift section, determinant,
/// reductions. With `square`, the gerbe is replaced by its tensor square.
pub fn verify_decomposable_demo(p: usize, base: Option<&SimplicialComplex>, square: bool) -> Result<ReductionReport> {
    let default_base;
    let base = match base {
        Some(b) => b,
        None => {
            default_base = crate::fixtures::rp2_6();
            &default_base
        }
    };
    let prod = ProductComplex::new(base, 3)?;
    let k = &prod.total;
    let line = torsion_line(base, p)?;
    let mut g = cup_product_gerbe(&line, &prod)?;
    let mut expected_line = line.clone();
    if square {
        g = g.tensor(&g);
        expected_line = line.tensor(&line);
    }
    let dd_class = g.dd_class(k)?;
    let dd_order = dd_class.order();
    let expected_order = if square { (p as i128) / crate::arith::gcd(p as i128, 2) } else { p as i128 };
    let reduced = reduce_gerbe(k, &g, &prod)?;
    let mut report = ReductionReport {
        order: p,
        base: base.clone(),
        checks: Vec::new(),
        dd_class: dd_class.clone(),
        dd_order,
        gerbe: g.clone(),
        reduced: reduced.clone(),
        line: expected_line.clone(),
        section: None,
        reduced_section: None,
        determinant_section: None,
    };
    report.record("gerbe is a cocycle", g.is_cocycle(k));
    report.record("gerbe has constant transition lifts", g.is_combinatorial(k));
    report.record("Dixmier–Douady order", dd_order == Some(expected_order));
    let curv_ok = reduced.curvature(base)? == prod.fiber_integrate(&g.curvature(k)?)?;
    report.record("reduced curvature equals fiber integral", curv_ok);
    let jx = expected_line.collate(base)?;
    let rx = reduced.collate(base)?;
    report.record("reduced class equals line class", class_equal(base, &rx, &jx)?);
    report.record(
        "reduced characteristic class",
        reduced.chern_class(base)? == expected_line.chern_class(base)?,
    );
    let mut hol_ok = true;
    for z in cycle_basis(base)? {
        hol_ok &= holonomy(&rx, &z)? == holonomy(&jx, &z)?;
    }
    report.record("holonomies agree on a cycle basis", hol_ok);
    let wl = wilson_line_datum(k, &g, &prod)?;
    report.record("Wilson line datum collates to the reduction", wl.collate(base)? == rx);

    let order = dd_order.unwrap_or(0) as usize;
    if order >= 1 {
        let s = clock_shift_section(k, &g, order)?;
        let check = s.check(k);
        report.record("clock-shift section passes the morphism check", check.is_valid());
        let ip = inner_product(k, &s, &s)?;
        report.record("self inner product is one-dimensional", ip.dimension == 1);
        let det = s.determinant();
        report.record("determinant passes the morphism check", det.check(k).is_valid());
        let gp = g.power(order as i128);
        let (rho, _) = frame_trivialization(k, &det)?;
        report.record(
            "determinant trivializes the tensor power",
            class_equal(k, &gp.collate(k)?, &DifferentialCocycle::from_form(k, &rho))?
                && class_equal(k, &gp.collate(k)?, &DifferentialCocycle::zero(3))?,
        );
        let rs = reduce_section(k, &s, &prod)?;
        report.record("reduced section satisfies the reduced transitions", rs.relations_hold());
        let rd = reduce_section(k, &det, &prod)?;
        report.record("reduced determinant satisfies the reduced transitions", rd.relations_hold());
        report.record("reduced determinant is nowhere zero", rd.values.values().all(|v| !v.is_zero()));
        report.section = Some(s);
        report.reduced_section = Some(rs);
        report.determinant_section = Some(rd);
    }
    Ok(report)
}

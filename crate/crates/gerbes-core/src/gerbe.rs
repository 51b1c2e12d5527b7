//! Local data of gerbes and line bundles with connection over the
//! vertex-star cover.
//!
//! A [`Datum<N>`] holds, for `p = 0..N`, a rational form of degree
//! `N − 1 − p` on the closed star of every `p`-simplex, plus an integer on
//! every `N`-simplex. For gerbes (`N = 3`) these are the curving, the
//! connection 1-forms on double overlaps, a rational lift of the transition
//! function on triple overlaps, and its integral Čech coboundary. The
//! cocycle conditions read `δ̌u_p = d u_{p+1}` with `d` the inclusion of
//! constants at the last step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{frac, sign, Q};
use crate::cochain::{Chain, Cochain, Ring};
use crate::cohomology::{fundamental_cycle, ClassCoordinates};
use crate::complex::{face, sort_with_sign, Simplex, SimplicialComplex};
use crate::deligne::{self, cech_contract, report_error, DeligneCochain, DifferentialCocycle, Entry, Violation};
use crate::error::{validation, Error, Result};
use crate::linalg::QMatrix;

/// `(−1)^{p(p−1)/2}`: the sign relating datum components to Deligne
/// entries.
fn component_sign(p: usize) -> i128 {
    if (p * p.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Local data of degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Datum<const N: usize> {
    forms: Vec<BTreeMap<Simplex, Cochain>>,
    winding: BTreeMap<Simplex, i128>,
}

/// Bundle gerbe with connection: curving, connection, transition lift,
/// integral jumps.
pub type GerbeDatum = Datum<3>;

/// Line bundle with connection: connection, transition lift, integral jumps.
pub type LineDatum = Datum<2>;

impl<const N: usize> Default for Datum<N> {
    fn default() -> Self {
        Datum { forms: vec![BTreeMap::new(); N], winding: BTreeMap::new() }
    }
}

impl<const N: usize> Datum<N> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validates shapes: each form has degree `N − 1 − p`, lives in the star
    /// of its simplex, and is rational.
    pub fn new(
        k: &SimplicialComplex,
        forms: Vec<BTreeMap<Simplex, Cochain>>,
        winding: BTreeMap<Simplex, i128>,
    ) -> Result<Self> {
        if forms.len() != N {
            return validation(format!("expected {N} form levels, got {}", forms.len()));
        }
        let mut out = Self::zero();
        for (p, level) in forms.into_iter().enumerate() {
            for (s, c) in level {
                k.require(&s)?;
                if s.len() != p + 1 {
                    return validation(format!("{s:?} listed among {p}-simplices"));
                }
                if c.degree() != N - 1 - p {
                    return Err(Error::Degree(format!("form at {s:?} has degree {}, expected {}", c.degree(), N - 1 - p)));
                }
                if c.ring() == Ring::RatMod1 {
                    return validation(format!("form at {s:?} must be rational"));
                }
                if let Some((t, _)) = c.values().find(|(t, _)| !k.in_star(&s, t)) {
                    return validation(format!("form at {s:?} is supported on {t:?}, outside the star"));
                }
                out.set_form(p, s, c);
            }
        }
        for (s, m) in winding {
            k.require(&s)?;
            if s.len() != N + 1 {
                return validation(format!("integer entry on {s:?} needs an {N}-simplex"));
            }
            out.set_winding(s, m);
        }
        Ok(out)
    }

    /// Trivial datum with top form `ρ` restricted to each vertex star.
    pub fn trivial(k: &SimplicialComplex, rho: &Cochain) -> Result<Self> {
        if rho.degree() != N - 1 {
            return Err(Error::Degree(format!("trivial datum needs a degree-{} cochain", N - 1)));
        }
        let mut out = Self::zero();
        for v in k.vertices() {
            let s = vec![*v];
            out.set_form(0, s.clone(), rho.restrict(|t| k.in_star(&s, t)).retag(Ring::Rat));
        }
        Ok(out)
    }

    pub fn form(&self, p: usize, s: &[u32]) -> Cochain {
        self.forms[p].get(s).cloned().unwrap_or_else(|| Cochain::zero(N - 1 - p, Ring::Rat))
    }

    pub fn forms(&self, p: usize) -> impl Iterator<Item = (&Simplex, &Cochain)> {
        self.forms[p].iter()
    }

    pub fn winding(&self, s: &[u32]) -> i128 {
        self.winding.get(s).copied().unwrap_or(0)
    }

    pub fn windings(&self) -> impl Iterator<Item = (&Simplex, &i128)> {
        self.winding.iter()
    }

    pub fn set_form(&mut self, p: usize, s: Simplex, c: Cochain) {
        if c.is_zero() {
            self.forms[p].remove(&s);
        } else {
            self.forms[p].insert(s, c.retag(Ring::Rat));
        }
    }

    pub fn set_winding(&mut self, s: Simplex, m: i128) {
        if m == 0 {
            self.winding.remove(&s);
        } else {
            self.winding.insert(s, m);
        }
    }

    pub fn to_deligne(&self) -> DeligneCochain {
        let mut x = DeligneCochain::zero(N, N);
        for (p, level) in self.forms.iter().enumerate() {
            let sg = Q::from_integer(component_sign(p));
            for (s, c) in level {
                x.set_form(s.clone(), c.scale(sg));
            }
        }
        let sg = component_sign(N);
        for (s, m) in &self.winding {
            x.set_const(s.clone(), sg * m);
        }
        x
    }

    pub fn from_deligne(x: &DeligneCochain) -> Result<Self> {
        if x.n() != N || x.degree() != N {
            return validation(format!("expected a degree-{N} Deligne cochain"));
        }
        let mut out = Self::zero();
        for (s, e) in x.entries() {
            let p = s.len() - 1;
            match e {
                Entry::Const(m) => out.set_winding(s.clone(), component_sign(N) * m),
                Entry::Form(c) => out.set_form(p, s.clone(), c.scale(Q::from_integer(component_sign(p)))),
            }
        }
        Ok(out)
    }

    /// Empty iff all cocycle conditions hold.
    pub fn violations(&self, k: &SimplicialComplex) -> Vec<Violation> {
        self.to_deligne().violations(k)
    }

    pub fn is_cocycle(&self, k: &SimplicialComplex) -> bool {
        self.violations(k).is_empty()
    }

    /// Global differential cocycle `(c, h, ω)` of the datum.
    pub fn collate(&self, k: &SimplicialComplex) -> Result<DifferentialCocycle> {
        deligne::collate(k, &self.to_deligne())
    }

    /// Local data of a differential cocycle.
    pub fn localize(k: &SimplicialComplex, x: &DifferentialCocycle) -> Result<Self> {
        if x.n != N {
            return validation(format!("expected a degree-{N} differential cocycle, got {}", x.n));
        }
        Self::from_deligne(&deligne::localize(k, x)?)
    }

    /// Class of `c` in `H^N(K; ℤ)`.
    pub fn characteristic_class(&self, k: &SimplicialComplex) -> Result<ClassCoordinates> {
        deligne::characteristic_class(k, &self.collate(k)?)
    }

    /// The global closed `N`-form restricting to `d u₀` on every star.
    pub fn curvature(&self, k: &SimplicialComplex) -> Result<Cochain> {
        Ok(self.collate(k)?.omega)
    }

    /// Componentwise sum.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for p in 0..N {
            for (s, c) in &other.forms[p] {
                let sum = out.form(p, s).add(c);
                out.set_form(p, s.clone(), sum);
            }
        }
        for (s, m) in &other.winding {
            let v = out.winding(s) + m;
            out.set_winding(s.clone(), v);
        }
        out
    }

    /// Componentwise negation.
    pub fn dual(&self) -> Self {
        self.power(-1)
    }

    /// `m`-th tensor power; `m = −1` is the dual.
    pub fn power(&self, m: i128) -> Self {
        let mut out = Self::zero();
        let mq = Q::from_integer(m);
        for p in 0..N {
            for (s, c) in &self.forms[p] {
                out.set_form(p, s.clone(), c.scale(mq));
            }
        }
        for (s, w) in &self.winding {
            out.set_winding(s.clone(), w * m);
        }
        out
    }

    /// Pullback along a simplicial vertex map `source → target`.
    pub fn pullback(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        map: &BTreeMap<u32, u32>,
    ) -> Result<Self> {
        source.check_simplicial_map(target, map)?;
        let mut out = Self::zero();
        for p in 0..=N {
            for s in source.simplices(p) {
                let img: Vec<u32> = s.iter().map(|v| map[v]).collect();
                let Some((t, sg)) = sort_with_sign(&img) else { continue };
                if p == N {
                    out.set_winding(s.clone(), sg * self.winding(&t));
                    continue;
                }
                let f = self.form(p, &t);
                if f.is_zero() {
                    continue;
                }
                let pulled = f.pullback(source, map).restrict(|r| source.in_star(s, r)).scale(Q::from_integer(sg));
                out.set_form(p, s.clone(), pulled);
            }
        }
        Ok(out)
    }

    /// Adds the coboundary of a datum one degree lower:
    /// `u'_p = u_p + δ̌h_{p−1} + d h_p`.
    fn gauge_raw(&self, k: &SimplicialComplex, h_forms: &[BTreeMap<Simplex, Cochain>], h_winding: &BTreeMap<Simplex, i128>) -> Self {
        let mut out = self.clone();
        // Čech part of the forms
        for (pm1, level) in h_forms.iter().enumerate() {
            for (s, c) in level {
                for (t, sg) in k.cofaces(s) {
                    let add = c.restrict(|r| k.in_star(t, r)).scale(Q::from_integer(sg));
                    let sum = out.form(pm1 + 1, t).add(&add);
                    out.set_form(pm1 + 1, t.clone(), sum);
                }
                // de Rham part
                let dc = c.coboundary(k).restrict(|r| k.in_star(s, r));
                let sum = out.form(pm1, s).add(&dc);
                out.set_form(pm1, s.clone(), sum);
            }
        }
        // integers: inclusion of constants and Čech coboundary
        for (s, l) in h_winding {
            let mut c = Cochain::zero(0, Ring::Rat);
            for v in k.star_simplices(s, 0) {
                c.set(v, Q::from_integer(*l));
            }
            let sum = out.form(N - 1, s).add(&c);
            out.set_form(N - 1, s.clone(), sum);
            for (t, sg) in k.cofaces(s) {
                let v = out.winding(t) + sg * l;
                out.set_winding(t.clone(), v);
            }
        }
        out
    }

    /// Holonomy around a closed oriented domain of dimension `N − 1` mapped
    /// into the complex, assembled from local data along flags of faces.
    ///
    /// `assignment` picks for every domain simplex a vertex whose star
    /// contains its image; `None` uses the smallest image vertex.
    pub fn holonomy(
        &self,
        k: &SimplicialComplex,
        domain: &ClosedDomain,
        map: &BTreeMap<u32, u32>,
        assignment: Option<&BTreeMap<Simplex, u32>>,
    ) -> Result<Q> {
        if domain.cycle.degree != N - 1 {
            return validation(format!("holonomy of degree {N} needs a closed {}-dimensional domain", N - 1));
        }
        domain.complex.check_simplicial_map(k, map)?;
        let default;
        let assign = match assignment {
            Some(a) => a,
            None => {
                default = default_assignment(&domain.complex, map);
                &default
            }
        };
        let mut total = Q::zero();
        for (top, eps) in &domain.cycle.terms {
            let mut flags: Vec<(Vec<Simplex>, i128)> = vec![(vec![top.clone()], 1)];
            while let Some((flag, inc)) = flags.pop() {
                let j = flag.len() - 1;
                let patches: Vec<u32> = flag.iter().map(|s| {
                    assign.get(s).copied().ok_or_else(|| Error::Validation(format!("no patch assigned to {s:?}")))
                }).collect::<Result<_>>()?;
                let last = &flag[j];
                let img: Vec<u32> = last.iter().map(|v| map[v]).collect();
                for a in &patches {
                    let mut need: Vec<u32> = img.clone();
                    need.extend(patches.iter().copied());
                    need.push(*a);
                    need.sort();
                    need.dedup();
                    if !k.contains(&need) {
                        return validation(format!("patch assignment along {flag:?} leaves the star"));
                    }
                }
                if let (Some((cech, s1)), Some((simp, s2))) = (sort_with_sign(&patches), sort_with_sign(&img)) {
                    let val = self.form(j, &cech).get(&simp);
                    if !val.is_zero() {
                        total += val * Q::from_integer(eps * inc * s1 * s2 * component_sign(j));
                    }
                }
                if j + 1 < N {
                    for i in 0..last.len() {
                        let mut next = flag.clone();
                        next.push(face(last, i));
                        flags.push((next, inc * sign(i)));
                    }
                }
            }
        }
        Ok(frac(total))
    }
}

/// Smallest image vertex for every simplex of the domain.
pub fn default_assignment(domain: &SimplicialComplex, map: &BTreeMap<u32, u32>) -> BTreeMap<Simplex, u32> {
    let mut out = BTreeMap::new();
    for d in 0..=domain.dim() {
        for s in domain.simplices(d) {
            let v = s.iter().map(|v| map[v]).min().expect("nonempty");
            out.insert(s.clone(), v);
        }
    }
    out
}

/// A closed oriented pseudomanifold with its fundamental cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedDomain {
    pub complex: SimplicialComplex,
    pub cycle: Chain,
}

impl ClosedDomain {
    /// Uses the generator of top-dimensional integral cycles.
    pub fn new(complex: SimplicialComplex) -> Result<Self> {
        let cycle = fundamental_cycle(&complex)
            .ok_or_else(|| Error::Validation("domain is not a closed orientable pseudomanifold".into()))?;
        Ok(ClosedDomain { complex, cycle })
    }

    pub fn with_cycle(complex: SimplicialComplex, cycle: Chain) -> Result<Self> {
        if cycle.degree != complex.dim() || !cycle.boundary().is_zero() {
            return validation("domain cycle must be a top-dimensional cycle");
        }
        for s in cycle.terms.keys() {
            complex.require(s)?;
        }
        Ok(ClosedDomain { complex, cycle })
    }
}

impl Datum<3> {
    /// Curving 2-form on the star of vertex `a`.
    pub fn curving(&self, a: u32) -> Cochain {
        self.form(0, &[a])
    }

    /// Connection 1-form on the star of edge `ab`.
    pub fn connection(&self, edge: &[u32]) -> Cochain {
        self.form(1, edge)
    }

    /// Rational lift of the transition function on triangle `abc`.
    pub fn transition(&self, tri: &[u32]) -> Cochain {
        self.form(2, tri)
    }

    /// `G + D(h)` for a gauge parameter one degree lower.
    pub fn gauge_transform(&self, k: &SimplicialComplex, h: &Datum<2>) -> Self {
        self.gauge_raw(k, &h.forms, &h.winding)
    }

    /// Dixmier–Douady class.
    pub fn dd_class(&self, k: &SimplicialComplex) -> Result<ClassCoordinates> {
        self.characteristic_class(k)
    }

    /// Constant value of the transition lift on a triangle, if constant.
    pub fn transition_constant(&self, k: &SimplicialComplex, tri: &[u32]) -> Option<Q> {
        let f = self.transition(tri);
        let verts = k.star_simplices(tri, 0);
        let first = f.get(&verts[0]);
        verts.iter().all(|v| f.get(v) == first).then_some(first)
    }

    /// True iff every transition lift is constant on its star.
    pub fn is_combinatorial(&self, k: &SimplicialComplex) -> bool {
        k.simplices(2).iter().all(|t| self.transition_constant(k, t).is_some())
    }

    /// Gauge to constant transition lifts. Returns the new datum and the
    /// gauge parameter used. Fails exactly when the Dixmier–Douady class
    /// has nonzero rational image.
    pub fn normalize(&self, k: &SimplicialComplex) -> Result<(Self, Datum<2>)> {
        let v = self.violations(k);
        if !v.is_empty() {
            return Err(report_error("not a gerbe cocycle", &v));
        }
        let mut kappa = Cochain::zero(2, Ring::Rat);
        for t in k.simplices(2) {
            kappa.set(t.clone(), self.transition(t).get(&t[..1]));
        }
        // δλ = m − δκ₀ over ℚ
        let mut m = Cochain::zero(3, Ring::Rat);
        for (s, w) in &self.winding {
            m.set(s.clone(), Q::from_integer(*w));
        }
        let rhs = m.sub(&kappa.coboundary(k));
        if !rhs.is_zero() {
            let delta = QMatrix::from_int(&k.coboundary_matrix(2)?);
            let Some(lambda) = delta.solve(&rhs.to_vector(k)) else {
                return Err(Error::Obstruction {
                    coords: self.dd_class(k)?,
                    reason: "Dixmier–Douady class has nonzero rational image".into(),
                });
            };
            kappa = kappa.add(&Cochain::from_vector(k, 2, Ring::Rat, &lambda));
        }
        // k = K(ικ − f)
        let mut y = BTreeMap::new();
        for t in k.simplices(2) {
            let mut c = Cochain::zero(0, Ring::Rat);
            for v in k.star_simplices(t, 0) {
                c.set(v, kappa.get(t));
            }
            let d = c.sub(&self.transition(t));
            if !d.is_zero() {
                y.insert(t.clone(), d);
            }
        }
        let mut gauge = Datum::<2>::zero();
        for (e, c) in cech_contract(&y) {
            gauge.set_form(1, e, c);
        }
        let out = self.gauge_transform(k, &gauge);
        debug_assert!(out.is_combinatorial(k));
        Ok((out, gauge))
    }

    /// Surface holonomy; see [`Datum::holonomy`].
    pub fn surface_holonomy(
        &self,
        k: &SimplicialComplex,
        surface: &ClosedDomain,
        map: &BTreeMap<u32, u32>,
        assignment: Option<&BTreeMap<Simplex, u32>>,
    ) -> Result<Q> {
        self.holonomy(k, surface, map, assignment)
    }
}

impl Datum<2> {
    /// Connection 1-form on the star of vertex `a`.
    pub fn connection(&self, a: u32) -> Cochain {
        self.form(0, &[a])
    }

    /// Rational lift of the transition function on edge `ab`.
    pub fn transition(&self, edge: &[u32]) -> Cochain {
        self.form(1, edge)
    }

    pub fn gauge_transform(&self, k: &SimplicialComplex, h: &Datum<1>) -> Self {
        self.gauge_raw(k, &h.forms, &h.winding)
    }

    /// First Chern class. The collated integral cocycle is `−m`, so with the
    /// lift convention `δ̌f = m` this is the class of `−m`.
    pub fn chern_class(&self, k: &SimplicialComplex) -> Result<ClassCoordinates> {
        self.characteristic_class(k)
    }

    /// Holonomy around a loop given as an integral 1-cycle of the complex.
    pub fn loop_holonomy(&self, k: &SimplicialComplex, z: &Chain) -> Result<Q> {
        deligne::holonomy(&self.collate(k)?, z)
    }
}

impl Datum<1> {
    /// Function lift on the star of vertex `a`.
    pub fn function(&self, a: u32) -> Cochain {
        self.form(0, &[a])
    }
}

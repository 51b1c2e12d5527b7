//! Twisted vector bundles between combinatorial gerbes over the same cover,
//! and intertwiners between them.
//!
//! A morphism `E: G₀ → G₁` of rank `n` has diagonal connection 1-forms
//! `𝔄_a` on each vertex star and a constant monomial unitary `α_ab` from
//! the fiber over `a` to the fiber over `b` on each edge, subject to
//!
//! ```text
//! 𝔄_b[π_ab(j)] = 𝔄_a[j] + (A₁ − A₀)_ab        on st̄(ab)
//! α_bc ∘ α_ab   = e((f₁ − f₀)_abc) · α_ac      on every triangle
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{frac, Cyclo, Q};
use crate::cochain::{Cochain, Ring};
use crate::complex::{Simplex, SimplicialComplex};
use crate::deligne::{cech_contract, Violation};
use crate::error::{validation, Error, Result};
use crate::gerbe::{Datum, GerbeDatum};
use crate::linalg::{MixedSystem, QMatrix};
use crate::monomial::{CycloMatrix, MonomialMatrix};
use crate::cohomology::IntegralCohomology;

fn violation(equation: &str, location: Simplex) -> Violation {
    Violation { equation: equation.into(), location, detail: None }
}

/// Rank-`n` twisted vector bundle with monomial transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedBundleMorphism {
    source: GerbeDatum,
    target: GerbeDatum,
    rank: usize,
    connection: BTreeMap<u32, Vec<Cochain>>,
    transition: BTreeMap<Simplex, MonomialMatrix>,
}

/// Outcome of [`TwistedBundleMorphism::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub violations: Vec<Violation>,
    /// `tr(d𝔄_a − (B₁ − B₀)_a) = 0` on every star.
    pub trace_condition: bool,
    /// `d𝔄_a[j] = (B₁ − B₀)_a` for every entry.
    pub fake_curvature: bool,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TwistedBundleMorphism {
    /// Checks shapes only. Missing connection entries are zero; every edge
    /// needs a transition of the right size.
    pub fn new(
        k: &SimplicialComplex,
        source: GerbeDatum,
        target: GerbeDatum,
        rank: usize,
        connection: BTreeMap<u32, Vec<Cochain>>,
        transition: BTreeMap<Simplex, MonomialMatrix>,
    ) -> Result<Self> {
        let mut conn = BTreeMap::new();
        for v in k.vertices() {
            let list = connection.get(v).cloned().unwrap_or_else(|| vec![Cochain::zero(1, Ring::Rat); rank]);
            if list.len() != rank {
                return validation(format!("vertex {v} carries {} connection entries, rank is {rank}", list.len()));
            }
            let s = vec![*v];
            for c in &list {
                if c.degree() != 1 || c.ring() == Ring::RatMod1 {
                    return validation(format!("connection at vertex {v} must be a rational 1-cochain"));
                }
                if let Some((t, _)) = c.values().find(|(t, _)| !k.in_star(&s, t)) {
                    return validation(format!("connection at vertex {v} is supported on {t:?}, outside the star"));
                }
            }
            conn.insert(*v, list.into_iter().map(|c| c.with_ring(Ring::Rat)).collect::<Result<Vec<_>>>()?);
        }
        if let Some(v) = connection.keys().find(|v| !k.contains(&[**v])) {
            return Err(Error::MissingSimplex(vec![*v]));
        }
        for (e, m) in &transition {
            k.require(e)?;
            if e.len() != 2 {
                return validation(format!("transition keyed by {e:?}, expected an edge"));
            }
            if m.size() != rank {
                return validation(format!("transition on {e:?} has size {}, rank is {rank}", m.size()));
            }
        }
        if let Some(e) = k.simplices(1).iter().find(|e| !transition.contains_key(*e)) {
            return validation(format!("no transition on edge {e:?}"));
        }
        Ok(TwistedBundleMorphism { source, target, rank, connection: conn, transition })
    }

    /// Identity 1-morphism of a gerbe.
    pub fn identity(k: &SimplicialComplex, g: &GerbeDatum) -> Self {
        Self::flat_line(k, g.clone(), g.clone(), |_| Q::zero())
    }

    /// Rank-1 morphism between gerbes with equal `A` and zero connection,
    /// with the given phase on each edge.
    pub(crate) fn flat_line(k: &SimplicialComplex, source: GerbeDatum, target: GerbeDatum, phase: impl Fn(&Simplex) -> Q) -> Self {
        let connection = k.vertices().iter().map(|v| (*v, vec![Cochain::zero(1, Ring::Rat)])).collect();
        let transition = k.simplices(1).iter().map(|e| (e.clone(), MonomialMatrix::scalar(1, phase(e)))).collect();
        TwistedBundleMorphism { source, target, rank: 1, connection, transition }
    }

    /// Rank-0 morphism.
    pub fn zero(k: &SimplicialComplex, source: GerbeDatum, target: GerbeDatum) -> Self {
        let connection = k.vertices().iter().map(|v| (*v, Vec::new())).collect();
        let transition = k.simplices(1).iter().map(|e| (e.clone(), MonomialMatrix::identity(0))).collect();
        TwistedBundleMorphism { source, target, rank: 0, connection, transition }
    }

    /// Flat rank-`d` bundle on the trivial gerbe with identity transitions.
    pub fn trivial_bundle(k: &SimplicialComplex, d: usize) -> Self {
        let connection = k.vertices().iter().map(|v| (*v, vec![Cochain::zero(1, Ring::Rat); d])).collect();
        let transition = k.simplices(1).iter().map(|e| (e.clone(), MonomialMatrix::identity(d))).collect();
        TwistedBundleMorphism { source: GerbeDatum::zero(), target: GerbeDatum::zero(), rank: d, connection, transition }
    }

    pub fn source(&self) -> &GerbeDatum {
        &self.source
    }

    pub fn target(&self) -> &GerbeDatum {
        &self.target
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn connection(&self, v: u32) -> &[Cochain] {
        self.connection.get(&v).map_or(&[], |c| c.as_slice())
    }

    pub fn connections(&self) -> impl Iterator<Item = (&u32, &Vec<Cochain>)> {
        self.connection.iter()
    }

    pub fn transition(&self, edge: &[u32]) -> &MonomialMatrix {
        &self.transition[edge]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&Simplex, &MonomialMatrix)> {
        self.transition.iter()
    }

    pub fn set_transition(&mut self, edge: Simplex, m: MonomialMatrix) -> Result<()> {
        if m.size() != self.rank || !self.transition.contains_key(&edge) {
            return validation(format!("cannot place a size-{} transition on {edge:?}", m.size()));
        }
        self.transition.insert(edge, m);
        Ok(())
    }

    pub fn set_connection(&mut self, v: u32, entries: Vec<Cochain>) -> Result<()> {
        if entries.len() != self.rank || !self.connection.contains_key(&v) {
            return validation(format!("cannot place {} connection entries at vertex {v}", entries.len()));
        }
        self.connection.insert(v, entries);
        Ok(())
    }

    /// True iff the morphism is invertible, i.e. has rank one.
    pub fn is_invertible(&self) -> bool {
        self.rank == 1
    }

    /// All defining equations, plus the trace and fake-curvature flags.
    pub fn check(&self, k: &SimplicialComplex) -> MorphismReport {
        let mut out = Vec::new();
        for (name, g) in [("source", &self.source), ("target", &self.target)] {
            if !g.is_cocycle(k) {
                out.push(violation(&format!("{name} gerbe is a cocycle"), Vec::new()));
            }
        }
        for e in k.simplices(1) {
            let Some(alpha) = self.transition.get(e) else {
                out.push(violation("transition present", e.clone()));
                continue;
            };
            let (a, b) = (e[0], e[1]);
            let shift = self.target.connection(e).sub(&self.source.connection(e));
            let ca = self.connection(a);
            let cb = self.connection(b);
            for j in 0..self.rank {
                let lhs = cb[alpha.perm()[j]].restrict(|t| k.in_star(e, t));
                let rhs = ca[j].add(&shift).restrict(|t| k.in_star(e, t));
                if lhs != rhs {
                    out.push(violation("parallel transition", e.clone()));
                    break;
                }
            }
        }
        for t in k.simplices(2) {
            let (Some(fs), Some(ft)) = (self.source.transition_constant(k, t), self.target.transition_constant(k, t)) else {
                out.push(violation("combinatorial gerbe data", t.clone()));
                continue;
            };
            let ab = &self.transition[&t[..2].to_vec()];
            let bc = &self.transition[&t[1..].to_vec()];
            let ac = &self.transition[&vec![t[0], t[2]]];
            if bc.compose(ab) != ac.times_phase(ft - fs) {
                out.push(violation("twisted cocycle", t.clone()));
            }
        }
        let mut trace_condition = true;
        let mut fake_curvature = true;
        for v in k.vertices() {
            let s = vec![*v];
            let db = self.target.curving(*v).sub(&self.source.curving(*v));
            let mut trace = Cochain::zero(2, Ring::Rat);
            for c in self.connection(*v) {
                let defect = c.coboundary(k).restrict(|t| k.in_star(&s, t)).sub(&db);
                fake_curvature &= defect.is_zero();
                trace = trace.add(&defect);
            }
            trace_condition &= trace.is_zero();
        }
        MorphismReport { violations: out, trace_condition, fake_curvature }
    }

    fn combine(
        &self,
        other: &Self,
        source: GerbeDatum,
        target: GerbeDatum,
        conn: impl Fn(&Cochain, &Cochain) -> Cochain,
        trans: impl Fn(&MonomialMatrix, &MonomialMatrix) -> MonomialMatrix,
    ) -> Self {
        let mut connection = BTreeMap::new();
        for (v, ca) in &self.connection {
            let cb = other.connection(*v);
            let mut list = Vec::with_capacity(ca.len() * cb.len());
            for x in ca {
                for y in cb {
                    list.push(conn(x, y));
                }
            }
            connection.insert(*v, list);
        }
        let transition = self.transition.iter().map(|(e, m)| (e.clone(), trans(m, &other.transition[e]))).collect();
        TwistedBundleMorphism { source, target, rank: self.rank * other.rank, connection, transition }
    }

    /// `self ∘ inner` for `inner: G₀ → G₁` and `self: G₁ → G₂`; fiber index
    /// `(i, j)` becomes `i · inner.rank + j`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.source != inner.target {
            return validation("composition: middle gerbes differ");
        }
        Ok(self.combine(inner, inner.source.clone(), self.target.clone(), |x, y| x.add(y), |a, b| a.kron(b)))
    }

    /// Fiberwise tensor product `G₀ ⊗ H₀ → G₁ ⊗ H₁`.
    pub fn tensor(&self, other: &Self) -> Self {
        self.combine(
            other,
            self.source.tensor(&other.source),
            self.target.tensor(&other.target),
            |x, y| x.add(y),
            |a, b| a.kron(b),
        )
    }

    /// Action of a bundle over the base: `other` must go between gerbes
    /// with vanishing `A`, `f` and `m`.
    pub fn tensor_by_function(&self, other: &Self) -> Result<Self> {
        for g in [&other.source, &other.target] {
            if g.forms(1).next().is_some() || g.forms(2).next().is_some() || g.windings().next().is_some() {
                return validation("tensor_by_function needs a bundle between trivial gerbes");
            }
        }
        Ok(self.tensor(other))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return validation("direct sum of morphisms between different gerbes");
        }
        let mut connection = self.connection.clone();
        for (v, list) in connection.iter_mut() {
            list.extend(other.connection(*v).iter().cloned());
        }
        let transition = self.transition.iter().map(|(e, m)| (e.clone(), m.direct_sum(&other.transition[e]))).collect();
        Ok(TwistedBundleMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            rank: self.rank + other.rank,
            connection,
            transition,
        })
    }

    /// Riesz dual `G₀* → G₁*`: negated connections, conjugate transitions.
    pub fn riesz_dual(&self) -> Self {
        let mut out = self.adjoint();
        out.source = self.source.dual();
        out.target = self.target.dual();
        out
    }

    /// Adjoint `G₁ → G₀` on the dual fibers.
    pub fn adjoint(&self) -> Self {
        TwistedBundleMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            rank: self.rank,
            connection: self.connection.iter().map(|(v, l)| (*v, l.iter().map(|c| c.neg()).collect())).collect(),
            transition: self.transition.iter().map(|(e, m)| (e.clone(), m.conj())).collect(),
        }
    }

    /// The bundle `Hom(E, F) = F ⊗ E*` over the base, an endomorphism of
    /// the zero gerbe; index `(i, j)` becomes `i · E.rank + j`.
    pub fn pairing(e: &Self, f: &Self) -> Result<Self> {
        if e.source != f.source || e.target != f.target {
            return validation("pairing of morphisms between different gerbes");
        }
        let adj = e.adjoint();
        Ok(f.combine(&adj, GerbeDatum::zero(), GerbeDatum::zero(), |x, y| x.add(y), |a, b| a.kron(b)))
    }

    /// Rank-one morphism `G₀^{⊗n} → G₁^{⊗n}`.
    pub fn determinant(&self) -> Self {
        let n = self.rank as i128;
        let connection = self
            .connection
            .iter()
            .map(|(v, l)| (*v, vec![l.iter().fold(Cochain::zero(1, Ring::Rat), |a, c| a.add(c))]))
            .collect();
        let transition = self.transition.iter().map(|(e, m)| (e.clone(), MonomialMatrix::scalar(1, m.det_phase()))).collect();
        TwistedBundleMorphism {
            source: self.source.power(n),
            target: self.target.power(n),
            rank: 1,
            connection,
            transition,
        }
    }

    /// Data relabelled by `σ`: fiber coordinate `j` becomes `σ_j`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.rank)?;
        let connection = self
            .connection
            .iter()
            .map(|(v, l)| {
                let mut out = vec![Cochain::zero(1, Ring::Rat); l.len()];
                for (j, c) in l.iter().enumerate() {
                    out[sigma[j]] = c.clone();
                }
                (*v, out)
            })
            .collect();
        let transition = self.transition.iter().map(|(e, m)| (e.clone(), m.conjugate_by(sigma))).collect();
        Ok(TwistedBundleMorphism { source: self.source.clone(), target: self.target.clone(), rank: self.rank, connection, transition })
    }

    /// Same morphism viewed between other gerbes with the same relative
    /// data; used to regard `Hom`-bundles and sections uniformly.
    pub fn with_gerbes(&self, source: GerbeDatum, target: GerbeDatum) -> Self {
        TwistedBundleMorphism { source, target, ..self.clone() }
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return validation(format!("permutation of length {} for rank {n}", sigma.len()));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return validation(format!("{sigma:?} is not a permutation"));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Index permutation taking `F ∘ (E ⊕ E')` to `(F ∘ E) ⊕ (F ∘ E')`, for
/// ranks `outer`, `first`, `second`.
pub fn distributivity_permutation(outer: usize, first: usize, second: usize) -> Vec<usize> {
    let width = first + second;
    let mut sigma = vec![0; outer * width];
    for i in 0..outer {
        for j in 0..width {
            sigma[i * width + j] = if j < first { i * first + j } else { outer * first + i * second + (j - first) };
        }
    }
    sigma
}

/// Index permutation taking `(E ⊕ E') ⊗ H` to `(E ⊗ H) ⊕ (E' ⊗ H)`.
pub fn right_distributivity_permutation(first: usize, second: usize, inner: usize) -> Vec<usize> {
    (0..(first + second) * inner).collect()
}

/// Index permutation taking `A ⊗ B` (index `i·|B| + j`) to `B ⊗ A`.
pub fn swap_permutation(a: usize, b: usize) -> Vec<usize> {
    let mut sigma = vec![0; a * b];
    for i in 0..a {
        for j in 0..b {
            sigma[i * b + j] = j * a + i;
        }
    }
    sigma
}

/// A 2-morphism: one constant matrix per vertex with
/// `ψ_b · α_ab = α'_ab · ψ_a` on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    source: TwistedBundleMorphism,
    target: TwistedBundleMorphism,
    components: BTreeMap<u32, CycloMatrix>,
}

impl Intertwiner {
    pub fn new(
        k: &SimplicialComplex,
        source: TwistedBundleMorphism,
        target: TwistedBundleMorphism,
        components: BTreeMap<u32, CycloMatrix>,
    ) -> Result<Self> {
        for v in k.vertices() {
            let m = components.get(v).ok_or_else(|| Error::Validation(format!("no component at vertex {v}")))?;
            if m.rows() != target.rank || m.cols() != source.rank {
                return validation(format!("component at vertex {v} has shape {}×{}", m.rows(), m.cols()));
            }
        }
        Ok(Intertwiner { source, target, components })
    }

    pub fn identity(e: &TwistedBundleMorphism) -> Self {
        let components = e.connection.keys().map(|v| (*v, CycloMatrix::identity(e.rank))).collect();
        Intertwiner { source: e.clone(), target: e.clone(), components }
    }

    /// Relabelling isomorphism `E ⇒ E.permuted(σ)`.
    pub fn permutation(e: &TwistedBundleMorphism, sigma: &[usize]) -> Result<Self> {
        let target = e.permuted(sigma)?;
        let components = e.connection.keys().map(|v| (*v, CycloMatrix::permutation(sigma))).collect();
        Ok(Intertwiner { source: e.clone(), target, components })
    }

    pub fn source(&self) -> &TwistedBundleMorphism {
        &self.source
    }

    pub fn target(&self) -> &TwistedBundleMorphism {
        &self.target
    }

    pub fn components(&self) -> impl Iterator<Item = (&u32, &CycloMatrix)> {
        self.components.iter()
    }

    pub fn component(&self, v: u32) -> &CycloMatrix {
        &self.components[&v]
    }

    /// Failed compatibility equations; empty for a genuine 2-morphism.
    pub fn violations(&self, k: &SimplicialComplex) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.source.source != self.target.source || self.source.target != self.target.target {
            out.push(violation("same gerbe pair", Vec::new()));
        }
        for e in k.simplices(1) {
            let lhs = self.components[&e[1]].mul_monomial(self.source.transition(e));
            let rhs = CycloMatrix::monomial_mul(self.target.transition(e), &self.components[&e[0]]);
            if lhs != rhs {
                out.push(violation("ψ_b α_ab = α'_ab ψ_a", e.clone()));
            }
        }
        out
    }

    /// Commutes with the connections entrywise.
    pub fn is_parallel(&self, k: &SimplicialComplex) -> bool {
        k.vertices().iter().all(|v| {
            let m = &self.components[v];
            let cs = self.source.connection(*v);
            let ct = self.target.connection(*v);
            (0..m.rows()).all(|r| (0..m.cols()).all(|j| m.get(r, j).is_zero() || ct[r] == cs[j]))
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target != self.source {
            return validation("vertical composition: middle morphisms differ");
        }
        let components = self.components.iter().map(|(v, m)| (*v, m.mul(&inner.components[v]))).collect();
        Ok(Intertwiner { source: inner.source.clone(), target: self.target.clone(), components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return validation("sum of intertwiners with different endpoints");
        }
        let components = self.components.iter().map(|(v, m)| (*v, m.add(&other.components[v]))).collect();
        Ok(Intertwiner { source: self.source.clone(), target: self.target.clone(), components })
    }

    /// Conjugate transpose, an intertwiner `F ⇒ E`.
    pub fn adjoint(&self) -> Self {
        let components = self.components.iter().map(|(v, m)| (*v, m.adjoint())).collect();
        Intertwiner { source: self.target.clone(), target: self.source.clone(), components }
    }

    /// Horizontal composite `ψ ⋆ φ: E ∘ F ⇒ E' ∘ F'` for `ψ: E ⇒ E'` and
    /// `φ: F ⇒ F'`, componentwise Kronecker products.
    pub fn horizontal(&self, inner: &Self) -> Result<Self> {
        let source = self.source.compose(&inner.source)?;
        let target = self.target.compose(&inner.target)?;
        Ok(self.kron_with(inner, source, target))
    }

    /// `ψ ⊗ φ: E ⊗ F ⇒ E' ⊗ F'`.
    pub fn tensor(&self, other: &Self) -> Self {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        self.kron_with(other, source, target)
    }

    fn kron_with(&self, other: &Self, source: TwistedBundleMorphism, target: TwistedBundleMorphism) -> Self {
        let components = self.components.iter().map(|(v, m)| (*v, m.kron(&other.components[v]))).collect();
        Intertwiner { source, target, components }
    }

    /// Transpose, an intertwiner `Θ(F) ⇒ Θ(E)`.
    pub fn riesz_dual(&self) -> Self {
        let components = self.components.iter().map(|(v, m)| (*v, m.adjoint().conj_entries())).collect();
        Intertwiner { source: self.target.riesz_dual(), target: self.source.riesz_dual(), components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|m| m.is_zero())
    }
}

impl CycloMatrix {
    fn conj_entries(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.set(i, j, self.get(i, j).conj());
            }
        }
        out
    }
}

/// Inclusions and projections of a direct sum.
#[derive(Clone, Debug)]
pub struct SumStructure {
    pub sum: TwistedBundleMorphism,
    pub include_first: Intertwiner,
    pub include_second: Intertwiner,
    pub project_first: Intertwiner,
    pub project_second: Intertwiner,
}

pub fn direct_sum_structure(e: &TwistedBundleMorphism, f: &TwistedBundleMorphism) -> Result<SumStructure> {
    let sum = e.direct_sum(f)?;
    let (n, m) = (e.rank, f.rank);
    let mut inc1 = CycloMatrix::zeros(n + m, n);
    let mut inc2 = CycloMatrix::zeros(n + m, m);
    for i in 0..n {
        inc1.set(i, i, Cyclo::one());
    }
    for i in 0..m {
        inc2.set(n + i, i, Cyclo::one());
    }
    let at = |mat: &CycloMatrix| -> BTreeMap<u32, CycloMatrix> { e.connection.keys().map(|v| (*v, mat.clone())).collect() };
    let include_first = Intertwiner { source: e.clone(), target: sum.clone(), components: at(&inc1) };
    let include_second = Intertwiner { source: f.clone(), target: sum.clone(), components: at(&inc2) };
    let project_first = Intertwiner { source: sum.clone(), target: e.clone(), components: at(&inc1.adjoint()) };
    let project_second = Intertwiner { source: sum.clone(), target: f.clone(), components: at(&inc2.adjoint()) };
    Ok(SumStructure { sum, include_first, include_second, project_first, project_second })
}

/// Basis and dimension of a space of intertwiners.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub dimension: usize,
    pub basis: Vec<Intertwiner>,
}

/// Union-find over matrix coordinates `(vertex, row, column)` with phase
/// offsets: `value(x) = e(offset(x)) · value(root(x))`.
struct PhaseUnion {
    parent: Vec<usize>,
    offset: Vec<Q>,
    bad: Vec<bool>,
}

impl PhaseUnion {
    fn new(n: usize) -> Self {
        PhaseUnion { parent: (0..n).collect(), offset: vec![Q::zero(); n], bad: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, Q) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // compress: offsets relative to the root, walking back down
        let mut acc = Q::zero();
        for &y in path.iter().rev() {
            acc = frac(acc + self.offset[y]);
            self.offset[y] = acc;
            self.parent[y] = r;
        }
        (r, if x == r { Q::zero() } else { self.offset[x] })
    }

    /// Imposes `value(y) = e(phase) · value(x)`.
    fn link(&mut self, x: usize, y: usize, phase: Q) {
        let (rx, ox) = self.find(x);
        let (ry, oy) = self.find(y);
        if rx == ry {
            if frac(oy - ox - phase) != Q::zero() {
                self.bad[rx] = true;
            }
            return;
        }
        // value(ry) = e(ox + phase − oy) value(rx)
        self.parent[ry] = rx;
        self.offset[ry] = frac(ox + phase - oy);
        if self.bad[ry] {
            self.bad[rx] = true;
        }
    }
}

/// All intertwiners `E ⇒ F`; with `parallel_only`, only those commuting
/// with the connections. Each coordinate of `ψ` is tied to coordinates
/// over neighbouring vertices by a phase; a class of tied coordinates
/// carries a free parameter iff its phases close up around every cycle.
pub fn intertwiner_space(
    k: &SimplicialComplex,
    e: &TwistedBundleMorphism,
    f: &TwistedBundleMorphism,
    parallel_only: bool,
) -> Result<IntertwinerSpace> {
    if e.source != f.source || e.target != f.target {
        return validation("intertwiners between morphisms of different gerbes");
    }
    let verts = k.vertices();
    let (n, m) = (e.rank, f.rank);
    let cell = n * m;
    let pos: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let node = |v: u32, r: usize, j: usize| pos[&v] * cell + r * n + j;
    let mut uf = PhaseUnion::new(verts.len() * cell);
    for edge in k.simplices(1) {
        let (a, b) = (edge[0], edge[1]);
        let al = e.transition(edge);
        let be = f.transition(edge);
        for r in 0..m {
            for j in 0..n {
                // ψ_b[π'(r)][π(j)] = e(φ'_r − φ_j) ψ_a[r][j]
                let phase = be.phases()[r] - al.phases()[j];
                uf.link(node(a, r, j), node(b, be.perm()[r], al.perm()[j]), phase);
            }
        }
    }
    if parallel_only {
        for v in verts {
            let (cs, ct) = (e.connection(*v), f.connection(*v));
            for r in 0..m {
                for j in 0..n {
                    if ct[r] != cs[j] {
                        let (root, _) = uf.find(node(*v, r, j));
                        uf.bad[root] = true;
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
    for x in 0..verts.len() * cell {
        let (root, off) = uf.find(x);
        if !uf.bad[root] {
            classes.entry(root).or_default().push((x, off));
        }
    }
    let mut basis = Vec::with_capacity(classes.len());
    for members in classes.values() {
        let mut comps: BTreeMap<u32, CycloMatrix> = verts.iter().map(|v| (*v, CycloMatrix::zeros(m, n))).collect();
        for (x, off) in members {
            let v = verts[x / cell];
            let (r, j) = ((x % cell) / n, x % n);
            comps.get_mut(&v).expect("vertex").set(r, j, Cyclo::root(*off));
        }
        basis.push(Intertwiner { source: e.clone(), target: f.clone(), components: comps });
    }
    Ok(IntertwinerSpace { dimension: basis.len(), basis })
}

/// Sub-bundle on the coordinates killed by `ψ`, with its inclusion.
///
/// `ψ` must be parallel with at most one nonzero entry in every row and
/// every column of each component, so that its kernel is a coordinate
/// subspace.
pub fn kernel_of_intertwiner(k: &SimplicialComplex, psi: &Intertwiner) -> Result<(TwistedBundleMorphism, Intertwiner)> {
    if !psi.violations(k).is_empty() || !psi.is_parallel(k) {
        return validation("kernel needs a parallel intertwiner");
    }
    let e = &psi.source;
    let mut coords: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, m) in &psi.components {
        let mut keep = Vec::new();
        let mut rows_used = vec![false; m.rows()];
        for j in 0..m.cols() {
            let nz: Vec<usize> = (0..m.rows()).filter(|&r| !m.get(r, j).is_zero()).collect();
            match nz.as_slice() {
                [] => keep.push(j),
                [r] if !rows_used[*r] => rows_used[*r] = true,
                _ => return Err(Error::Unsupported("kernel of an intertwiner that is not coordinate-supported".into())),
            }
        }
        coords.insert(*v, keep);
    }
    let rank = coords.values().next().map_or(0, |c| c.len());
    if coords.values().any(|c| c.len() != rank) {
        return Err(Error::Unsupported("kernel rank varies between components".into()));
    }
    let mut connection = BTreeMap::new();
    for (v, keep) in &coords {
        connection.insert(*v, keep.iter().map(|&j| e.connection(*v)[j].clone()).collect());
    }
    let mut transition = BTreeMap::new();
    for edge in k.simplices(1) {
        let m = e
            .transition(edge)
            .restrict(&coords[&edge[0]], &coords[&edge[1]])
            .ok_or_else(|| Error::Validation(format!("kernel not preserved along {edge:?}")))?;
        transition.insert(edge.clone(), m);
    }
    let sub = TwistedBundleMorphism { source: e.source.clone(), target: e.target.clone(), rank, connection, transition };
    let mut comps = BTreeMap::new();
    for (v, keep) in &coords {
        let mut inc = CycloMatrix::zeros(e.rank, rank);
        for (i, &j) in keep.iter().enumerate() {
            inc.set(j, i, Cyclo::one());
        }
        comps.insert(*v, inc);
    }
    let inclusion = Intertwiner { source: sub.clone(), target: e.clone(), components: comps };
    Ok((sub, inclusion))
}

/// Factors `φ: H ⇒ E` with `ψ ∘ φ = 0` through the kernel inclusion.
pub fn factor_through_kernel(inclusion: &Intertwiner, phi: &Intertwiner) -> Result<Intertwiner> {
    if phi.target != inclusion.target {
        return validation("factorization: codomains differ");
    }
    let components = phi
        .components
        .iter()
        .map(|(v, m)| (*v, inclusion.components[v].adjoint().mul(m)))
        .collect();
    let out = Intertwiner { source: phi.source.clone(), target: inclusion.source.clone(), components };
    if inclusion.compose(&out)? != *phi {
        return validation("intertwiner does not vanish on the complement of the kernel");
    }
    Ok(out)
}

/// Integral lifts of all classes in `H¹(K; ℤ_p)`: combinations of free
/// integral 1-cocycles and of Bockstein preimages of `p`-torsion in `H²`.
fn mod_p_classes(k: &SimplicialComplex, p: i128, limit: usize) -> Result<Vec<Cochain>> {
    let mut gens: Vec<(Cochain, i128)> = Vec::new();
    for g in IntegralCohomology::new(k, 1)?.free_generators(k) {
        gens.push((g, p));
    }
    if k.dim() >= 2 {
        for (d, _, b) in IntegralCohomology::new(k, 2)?.torsion_generators(k) {
            let g = crate::arith::gcd(d, p);
            if g > 1 {
                gens.push((b.scale(Q::from_integer(p / g)).with_ring(Ring::Int)?, g));
            }
        }
    }
    let total: usize = gens.iter().try_fold(1usize, |acc, (_, o)| acc.checked_mul(*o as usize)).unwrap_or(usize::MAX);
    if total > limit {
        return Err(Error::Unsupported(format!("{total} classes in H¹(K; ℤ_{p}) exceed the search limit")));
    }
    let mut out = vec![Cochain::zero(1, Ring::Int)];
    for (g, ord) in &gens {
        let mut next = Vec::with_capacity(out.len() * *ord as usize);
        for c in &out {
            for t in 0..*ord {
                next.push(c.add(&g.scale(Q::from_integer(t))));
            }
        }
        out = next;
    }
    Ok(out)
}

/// A rank-one morphism `E: G₀ → G₁` exhibits `G₁ ≅ G₀ ⊗ I_ρ` with
/// `ρ = B₁ − B₀ − d𝔄`. Returns `ρ` and the gauge parameter `h` with
/// `G₁ = G₀ ⊗ (I_ρ + D(h))` exactly.
pub fn frame_trivialization(k: &SimplicialComplex, e: &TwistedBundleMorphism) -> Result<(Cochain, Datum<2>)> {
    if e.rank != 1 {
        return validation("trivialization needs a rank-one morphism");
    }
    let report = e.check(k);
    if !report.is_valid() {
        return Err(crate::deligne::report_error("frame", &report.violations));
    }
    let mut rho = Cochain::zero(2, Ring::Rat);
    for t in k.simplices(2) {
        let a = t[0];
        let local = e.target.curving(a).sub(&e.source.curving(a)).sub(&e.connection(a)[0].coboundary(k));
        rho.set(t.clone(), local.get(t));
    }
    let mut h = Datum::<2>::zero();
    for (v, c) in &e.connection {
        h.set_form(0, vec![*v], c[0].clone());
    }
    for (edge, m) in &e.transition {
        let mut c = Cochain::zero(0, Ring::Rat);
        for w in k.star_simplices(edge, 0) {
            c.set(w, m.phases()[0]);
        }
        h.set_form(1, edge.clone(), c);
    }
    let mut phi = Cochain::zero(1, Ring::Rat);
    for (edge, m) in &e.transition {
        phi.set(edge.clone(), m.phases()[0]);
    }
    let dphi = phi.coboundary(k);
    for t in k.simplices(2) {
        let f = e.target.transition_constant(k, t).expect("checked") - e.source.transition_constant(k, t).expect("checked");
        let l = f - dphi.get(t);
        if !l.is_integer() {
            return validation(format!("transition phases do not match the gerbe on {t:?}"));
        }
        h.set_winding(t.clone(), l.to_integer());
    }
    let rebuilt = e.source.tensor(&GerbeDatum::trivial(k, &rho)?.gauge_transform(k, &h));
    if rebuilt != e.target {
        return validation("frame does not reproduce the target gerbe");
    }
    Ok((rho, h))
}

/// Rank-`p` section `I₀ → G` built from clock and shift matrices:
/// `α_ab = e(λ_ab) Z^{v_ab} X^{u_ab}` where `u, v` are `ℤ_p` cocycles and
/// the transition constants satisfy `f = δλ − (v ⌣ u)/p` modulo integers.
pub fn clock_shift_section(k: &SimplicialComplex, g: &GerbeDatum, p: usize) -> Result<TwistedBundleMorphism> {
    if p == 0 {
        return validation("clock-shift sections need p >= 1");
    }
    let dd = g.dd_class(k)?;
    match dd.order() {
        Some(o) if (p as i128) % o == 0 => {}
        _ => {
            return Err(Error::Obstruction {
                coords: dd,
                reason: format!("Dixmier–Douady class has no order dividing {p}"),
            })
        }
    }
    if !g.is_combinatorial(k) {
        return validation("clock-shift sections need combinatorial gerbe data; normalize first");
    }
    let pi = p as i128;
    let mut kappa = Cochain::zero(2, Ring::Rat);
    for t in k.simplices(2) {
        kappa.set(t.clone(), g.transition_constant(k, t).expect("combinatorial"));
    }
    let classes = mod_p_classes(k, pi, 64)?;
    let d1 = k.coboundary_matrix(1)?;
    let eye = crate::linalg::IntMatrix::identity(k.count(2));
    let system = MixedSystem::new(&d1, &eye);
    let mut found = None;
    'search: for u in &classes {
        for v in &classes {
            // κ + (v⌣u)/p = δλ + ℓ
            let vu = crate::product::cup(k, v, u)?;
            let r = kappa.add(&vu.scale(Q::new(1, pi)).with_ring(Ring::Rat)?);
            if let Some(sol) = system.solve(&r.to_vector(k)) {
                found = Some((u.clone(), v.clone(), Cochain::from_vector(k, 1, Ring::Rat, &sol.rational)));
                break 'search;
            }
        }
    }
    let Some((u, v, lambda)) = found else {
        return Err(Error::Obstruction {
            coords: dd,
            reason: format!("no clock-shift cocycle of order {p} matches the transition data"),
        });
    };
    let clock = MonomialMatrix::clock(p);
    let shift = MonomialMatrix::shift(p);
    let mut transition = BTreeMap::new();
    for e in k.simplices(1) {
        let m = clock.pow(v.get(e).to_integer()).compose(&shift.pow(u.get(e).to_integer())).times_phase(lambda.get(e));
        transition.insert(e.clone(), m);
    }
    // connection: β with δ̌β = A, then shifted by a global γ with
    // dγ = B − dβ whenever that is solvable
    let mut family = BTreeMap::new();
    for e in k.simplices(1) {
        let a = g.connection(e);
        if !a.is_zero() {
            family.insert(e.clone(), a);
        }
    }
    let mut beta = cech_contract(&family);
    let mut xi = Cochain::zero(2, Ring::Rat);
    for t in k.simplices(2) {
        let v0 = t[0];
        let local = g.curving(v0).get(t) - beta.get(&vec![v0]).map_or(Q::zero(), |b| b.coboundary(k).get(t));
        xi.set(t.clone(), local);
    }
    if !xi.is_zero() {
        if let Some(gamma) = QMatrix::from_int(&d1).solve(&xi.to_vector(k)) {
            let gamma = Cochain::from_vector(k, 1, Ring::Rat, &gamma);
            for w in k.vertices() {
                let s = vec![*w];
                let cur = beta.get(&s).cloned().unwrap_or_else(|| Cochain::zero(1, Ring::Rat));
                beta.insert(s.clone(), cur.add(&gamma.restrict(|t| k.in_star(&s, t))));
            }
        }
    }
    let connection = k
        .vertices()
        .iter()
        .map(|w| {
            let b = beta.get(&vec![*w]).cloned().unwrap_or_else(|| Cochain::zero(1, Ring::Rat));
            (*w, vec![b; p])
        })
        .collect();
    let out = TwistedBundleMorphism { source: GerbeDatum::zero(), target: g.clone(), rank: p, connection, transition };
    let report = out.check(k);
    if !report.is_valid() {
        return Err(crate::deligne::report_error("clock-shift construction", &report.violations));
    }
    Ok(out)
}

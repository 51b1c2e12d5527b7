//! Sections `I₀ → G` of a gerbe, viewed as objects of a 2-Hilbert space:
//! the inner product of two sections is the space of parallel
//! intertwiners between them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::Cyclo;
use crate::cohomology::ClassCoordinates;
use crate::complex::SimplicialComplex;
use crate::error::{validation, Error, Result};
use crate::gerbe::GerbeDatum;
use crate::morphism::{clock_shift_section, direct_sum_structure, intertwiner_space, Intertwiner, TwistedBundleMorphism};

/// What is known about the sections of a gerbe.
#[derive(Clone, Debug)]
pub struct SectionSpaceReport {
    pub dd_class: ClassCoordinates,
    /// Free coordinates of the class; nonzero means no section exists.
    pub rational_image: Vec<i128>,
    pub order: Option<i128>,
    /// Ranks of sections are multiples of this.
    pub rank_step: Option<i128>,
    pub certified_empty: bool,
    pub known_sections: Vec<TwistedBundleMorphism>,
    pub notes: Vec<String>,
}

/// Rank obstruction and, for torsion classes, a clock-shift section.
///
/// A section of rank `n` forces `n · DD = 0`, so a class with nonzero
/// rational image admits none, and a torsion class of order `p` only
/// admits ranks in `pℤ`.
pub fn sections_obstruction(k: &SimplicialComplex, g: &GerbeDatum) -> Result<SectionSpaceReport> {
    let dd = g.dd_class(k)?;
    let order = dd.order();
    let mut report = SectionSpaceReport {
        rational_image: dd.free.clone(),
        certified_empty: !dd.rationally_trivial(),
        order,
        rank_step: order,
        dd_class: dd,
        known_sections: Vec::new(),
        notes: Vec::new(),
    };
    if report.certified_empty {
        report.notes.push("Dixmier–Douady class has nonzero rational image; no section of any rank".into());
        return Ok(report);
    }
    let p = order.expect("torsion class has an order") as usize;
    let normalized = if g.is_combinatorial(k) { g.clone() } else { g.normalize(k)?.0 };
    match clock_shift_section(k, &normalized, p) {
        Ok(s) => {
            if normalized != *g {
                report.notes.push("section built for the normalized gauge representative".into());
            }
            report.known_sections.push(s);
        }
        Err(Error::Obstruction { reason, .. }) => report.notes.push(reason),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Inner product `⟨s, s'⟩` of two sections.
#[derive(Clone, Debug)]
pub struct InnerProductValue {
    pub dimension: usize,
    pub basis: Vec<Intertwiner>,
    /// Vertex stars and fiber entries `(vertex, row, column)` where the
    /// Hom connection `𝔄'[r] − 𝔄[j]` is not flat. Such entries carry no
    /// parallel intertwiner.
    pub nonflat: Vec<(u32, usize, usize)>,
}

impl InnerProductValue {
    /// Basis of `⟨s', s⟩` obtained by taking adjoints.
    pub fn conjugate_basis(&self) -> Vec<Intertwiner> {
        self.basis.iter().map(Intertwiner::adjoint).collect()
    }
}

/// Parallel intertwiners `s ⇒ s'`.
pub fn inner_product(k: &SimplicialComplex, s: &TwistedBundleMorphism, t: &TwistedBundleMorphism) -> Result<InnerProductValue> {
    if s.source() != t.source() || s.target() != t.target() {
        return validation("inner product of sections of different gerbes");
    }
    let mut nonflat = Vec::new();
    for v in k.vertices() {
        let star = vec![*v];
        let (cs, ct) = (s.connection(*v), t.connection(*v));
        for (r, a) in ct.iter().enumerate() {
            for (j, b) in cs.iter().enumerate() {
                let curv = a.sub(b).coboundary(k).restrict(|x| k.in_star(&star, x));
                if !curv.is_zero() {
                    nonflat.push((*v, r, j));
                }
            }
        }
    }
    let space = intertwiner_space(k, s, t, true)?;
    Ok(InnerProductValue { dimension: space.dimension, basis: space.basis, nonflat })
}

/// `s ⊗ ℂ^d`: the action of a finite-dimensional Hilbert space; `d = 0`
/// gives the zero section.
pub fn hilbert_action(k: &SimplicialComplex, s: &TwistedBundleMorphism, d: usize) -> Result<TwistedBundleMorphism> {
    if d == 0 {
        return Ok(TwistedBundleMorphism::zero(k, s.source().clone(), s.target().clone()));
    }
    s.tensor_by_function(&TwistedBundleMorphism::trivial_bundle(k, d))
}

/// Hilbert-space inner product `tr(ψ† ψ')` of two intertwiners, read at
/// one vertex (the trace is the same at every vertex).
pub fn intertwiner_inner(psi: &Intertwiner, phi: &Intertwiner) -> Result<Cyclo> {
    let Some((v, a)) = psi.components().next() else {
        return Ok(Cyclo::zero());
    };
    Ok(a.adjoint().mul(phi.component(*v)).trace())
}

/// Results of [`check_2hilbert_axioms`] for one ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub dimension: usize,
    /// Dimension agrees with the full parallel intertwiner space.
    pub matches_intertwiners: bool,
    /// `dim ⟨s, t⟩ = dim ⟨t, s⟩` and adjoints of a basis are intertwiners
    /// the other way.
    pub symmetric: bool,
}

#[derive(Clone, Debug)]
pub struct HilbertAxiomReport {
    pub pairs: Vec<PairCheck>,
    /// `⟨s, s⟩ ≠ 0` for every section of positive rank, witnessed by the
    /// identity having positive norm.
    pub nondegenerate: bool,
    /// `dim ⟨s ⊕ t, u⟩ = dim ⟨s, u⟩ + dim ⟨t, u⟩` over all triples.
    pub additive: bool,
    pub failures: Vec<String>,
}

impl HilbertAxiomReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the 2-Hilbert space structure on a list of sections of one gerbe.
pub fn check_2hilbert_axioms(k: &SimplicialComplex, sections: &[TwistedBundleMorphism]) -> Result<HilbertAxiomReport> {
    let mut failures = Vec::new();
    let mut pairs = Vec::new();
    let mut dims = vec![vec![0usize; sections.len()]; sections.len()];
    for (i, s) in sections.iter().enumerate() {
        for (j, t) in sections.iter().enumerate() {
            let ip = inner_product(k, s, t)?;
            let full = intertwiner_space(k, s, t, true)?;
            let back = inner_product(k, t, s)?;
            let adjoints_ok = ip.conjugate_basis().iter().all(|a| a.violations(k).is_empty() && a.is_parallel(k));
            let check = PairCheck {
                first: i,
                second: j,
                dimension: ip.dimension,
                matches_intertwiners: ip.dimension == full.dimension,
                symmetric: ip.dimension == back.dimension && adjoints_ok,
            };
            if !check.matches_intertwiners {
                failures.push(format!("({i}, {j}): dimension differs from the intertwiner space"));
            }
            if !check.symmetric {
                failures.push(format!("({i}, {j}): not conjugate-symmetric"));
            }
            dims[i][j] = ip.dimension;
            pairs.push(check);
        }
    }
    let mut nondegenerate = true;
    for (i, s) in sections.iter().enumerate() {
        if s.rank() == 0 {
            continue;
        }
        let id = Intertwiner::identity(s);
        let norm = intertwiner_inner(&id, &id)?;
        if dims[i][i] == 0 || norm != Cyclo::rational(crate::arith::q(s.rank() as i128)) {
            nondegenerate = false;
            failures.push(format!("{i}: ⟨s, s⟩ is degenerate"));
        }
    }
    let mut additive = true;
    for (i, s) in sections.iter().enumerate() {
        for (j, t) in sections.iter().enumerate() {
            let sum = direct_sum_structure(s, t)?.sum;
            for (l, u) in sections.iter().enumerate() {
                let d = inner_product(k, &sum, u)?.dimension;
                if d != dims[i][l] + dims[j][l] {
                    additive = false;
                    failures.push(format!("({i} ⊕ {j}, {l}): not additive"));
                }
            }
        }
    }
    Ok(HilbertAxiomReport { pairs, nondegenerate, additive, failures })
}

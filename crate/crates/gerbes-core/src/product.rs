//! Products with a circle, cup and cross products, and integration over the
//! circle fiber.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{sign, Q};
use crate::cochain::{Chain, Cochain, Ring};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{degree, validation, Error, Result};

/// The `m`-gon: vertices `0..m`, edges `(j, j+1)` and `(0, m−1)`.
pub fn circle(m: usize) -> Result<SimplicialComplex> {
    if m < 3 {
        return validation(format!("a circle needs at least 3 vertices, got {m}"));
    }
    let m = m as u32;
    let edges: Vec<Vec<u32>> = (0..m).map(|j| alloc::vec![j, (j + 1) % m]).collect();
    SimplicialComplex::build(&edges)
}

/// Oriented circle edges `(u, w)` with `u < w`, and their sign in the
/// fundamental cycle.
pub fn circle_edges(m: usize) -> Vec<(u32, u32, i128)> {
    let m = m as u32;
    let mut out: Vec<(u32, u32, i128)> = (0..m - 1).map(|j| (j, j + 1, 1)).collect();
    out.push((0, m - 1, -1));
    out.sort();
    out
}

/// Fundamental cycle `Σ (j, j+1) − (0, m−1)`.
pub fn circle_cycle(m: usize) -> Chain {
    Chain::from_terms(1, circle_edges(m).into_iter().map(|(u, w, s)| (alloc::vec![u, w], s)))
}

/// Integral 1-cocycle pairing to one with the fundamental cycle.
pub fn circle_generator(m: usize) -> Cochain {
    let mut c = Cochain::zero(1, Ring::Int);
    c.set(alloc::vec![0, m as u32 - 1], Q::from_integer(-1));
    c
}

/// Alexander–Whitney cup product `(a ⌣ b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q})`;
/// zero above the dimension.
pub fn cup(k: &SimplicialComplex, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let (p, q) = (a.degree(), b.degree());
    let ring = match (a.ring(), b.ring()) {
        (Ring::Int, r) | (r, Ring::Int) => r,
        (Ring::Rat, Ring::Rat) => Ring::Rat,
        _ => return validation("cup product of two non-integral cochains with a ℚ/ℤ factor"),
    };
    let mut out = Cochain::zero(p + q, ring);
    for s in k.simplices(p + q) {
        let x = a.get(&s[..=p]);
        if x.is_zero() {
            continue;
        }
        let y = b.get(&s[p..]);
        if !y.is_zero() {
            out.set(s.clone(), x * y);
        }
    }
    Ok(out)
}

/// `X × S¹` triangulated by staircase prisms, base order first.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub base: SimplicialComplex,
    pub circle_size: usize,
    pub circle: SimplicialComplex,
    pub total: SimplicialComplex,
    base_index: BTreeMap<u32, u32>,
    pub proj_base: BTreeMap<u32, u32>,
    pub proj_circle: BTreeMap<u32, u32>,
}

impl ProductComplex {
    pub fn new(base: &SimplicialComplex, m: usize) -> Result<Self> {
        let circle = circle(m)?;
        let base_index: BTreeMap<u32, u32> =
            base.vertices().iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let mm = m as u32;
        let mut proj_base = BTreeMap::new();
        let mut proj_circle = BTreeMap::new();
        for (v, i) in &base_index {
            for j in 0..mm {
                proj_base.insert(i * mm + j, *v);
                proj_circle.insert(i * mm + j, j);
            }
        }
        let mut prisms = Vec::new();
        for s in base.maximal_simplices() {
            for (u, w, _) in circle_edges(m) {
                for k in 0..s.len() {
                    prisms.push(staircase(&base_index, mm, &s, u, w, k));
                }
            }
        }
        let total = SimplicialComplex::build(&prisms)?;
        Ok(ProductComplex { base: base.clone(), circle_size: m, circle, total, base_index, proj_base, proj_circle })
    }

    /// Product vertex `(x, j)`.
    pub fn vertex(&self, x: u32, j: u32) -> u32 {
        self.base_index[&x] * self.circle_size as u32 + j
    }

    /// The fiber cycle `{x} × S¹`.
    pub fn fiber_cycle(&self, x: u32) -> Chain {
        let mut z = Chain::zero(1);
        for (u, w, s) in circle_edges(self.circle_size) {
            z.add_at(alloc::vec![self.vertex(x, u), self.vertex(x, w)], s);
        }
        z
    }

    pub fn fiber_cycles(&self) -> BTreeMap<u32, Chain> {
        self.base.vertices().iter().map(|x| (*x, self.fiber_cycle(*x))).collect()
    }

    /// Pullback along the projection to the base.
    pub fn pull_base(&self, c: &Cochain) -> Cochain {
        c.pullback(&self.total, &self.proj_base)
    }

    /// Pullback along the projection to the circle.
    pub fn pull_circle(&self, c: &Cochain) -> Cochain {
        c.pullback(&self.total, &self.proj_circle)
    }

    /// `cross(a, b) = π_X^* a ⌣ π_S^* b`.
    pub fn cross(&self, a: &Cochain, b: &Cochain) -> Result<Cochain> {
        cup(&self.total, &self.pull_base(a), &self.pull_circle(b))
    }

    /// The section `x ↦ (x, j)` as a vertex map base → total.
    pub fn section_map(&self, j: u32) -> BTreeMap<u32, u32> {
        self.base.vertices().iter().map(|x| (*x, self.vertex(*x, j))).collect()
    }

    /// Slant product with the fiber fundamental cycle:
    /// `(∫c)(σ) = ⟨c, σ × [S¹]⟩`. Commutes with `δ`.
    pub fn fiber_integrate(&self, c: &Cochain) -> Result<Cochain> {
        if c.degree() == 0 {
            return degree("fiber integration of a 0-cochain");
        }
        let q = c.degree() - 1;
        let mm = self.circle_size as u32;
        let mut out = Cochain::zero(q, c.ring());
        for s in self.base.simplices(q) {
            let mut acc = Q::zero();
            for (u, w, eps) in circle_edges(self.circle_size) {
                for k in 0..s.len() {
                    let t = staircase(&self.base_index, mm, s, u, w, k);
                    let v = c.get(&t);
                    if !v.is_zero() {
                        acc += v * Q::from_integer(eps * sign(q - k));
                    }
                }
            }
            out.set(s.clone(), acc);
        }
        Ok(out)
    }

    /// The chain `σ × [S¹]` on the total complex.
    pub fn prism_chain(&self, base_chain: &Chain) -> Chain {
        let q = base_chain.degree;
        let mm = self.circle_size as u32;
        let mut out = Chain::zero(q + 1);
        for (s, n) in &base_chain.terms {
            for (u, w, eps) in circle_edges(self.circle_size) {
                for k in 0..s.len() {
                    out.add_at(staircase(&self.base_index, mm, s, u, w, k), n * eps * sign(q - k));
                }
            }
        }
        out
    }

    pub fn check_total(&self, k: &SimplicialComplex) -> Result<()> {
        if *k != self.total {
            return Err(Error::Validation("complex is not the product total space".into()));
        }
        Ok(())
    }
}

/// `[(x₀,u)…(x_k,u),(x_k,w)…(x_p,w)]`.
fn staircase(index: &BTreeMap<u32, u32>, m: u32, s: &[u32], u: u32, w: u32, k: usize) -> Simplex {
    let mut t = Vec::with_capacity(s.len() + 1);
    for x in &s[..=k] {
        t.push(index[x] * m + u);
    }
    for x in &s[k..] {
        t.push(index[x] * m + w);
    }
    t
}

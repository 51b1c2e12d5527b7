//! Cochains and chains with coefficients in ℤ, ℚ or ℚ/ℤ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{frac, sign, Q};
use crate::complex::{face, sort_with_sign, Simplex, SimplicialComplex};
use crate::error::{degree, validation, Error, Result};

/// Coefficient ring of a cochain. Ordered so that `max` gives the ring of a
/// sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ring {
    Int,
    Rat,
    RatMod1,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Int => "Z",
            Ring::Rat => "Q",
            Ring::RatMod1 => "QmodZ",
        })
    }
}

/// A cochain of fixed degree. Absent simplices carry zero; zero values are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    ring: Ring,
    values: BTreeMap<Simplex, Q>,
}

impl Cochain {
    pub fn zero(degree: usize, ring: Ring) -> Self {
        Cochain { degree, ring, values: BTreeMap::new() }
    }

    /// Validated constructor: every simplex must be in `k` with the right
    /// degree and every value must belong to `ring`.
    pub fn new(
        k: &SimplicialComplex,
        degree: usize,
        ring: Ring,
        values: impl IntoIterator<Item = (Simplex, Q)>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(degree, ring);
        for (s, v) in values {
            if s.len() != degree + 1 {
                return Err(Error::Degree(format!("simplex {s:?} in a degree-{degree} cochain")));
            }
            k.require(&s)?;
            if ring == Ring::Int && !v.is_integer() {
                return validation(format!("non-integer value {v} in integral cochain at {s:?}"));
            }
            if c.values.contains_key(&s) {
                return validation(format!("duplicate simplex {s:?}"));
            }
            c.set(s, v);
        }
        Ok(c)
    }

    /// Constructor without membership checks, for internal use on data the
    /// caller already controls.
    pub(crate) fn from_map(degree: usize, ring: Ring, values: BTreeMap<Simplex, Q>) -> Self {
        let mut c = Cochain::zero(degree, ring);
        for (s, v) in values {
            c.set(s, v);
        }
        c
    }

    /// Cochain with value `v` on every `degree`-simplex of `k`.
    pub fn constant(k: &SimplicialComplex, degree: usize, ring: Ring, v: Q) -> Self {
        let mut c = Cochain::zero(degree, ring);
        for s in k.simplices(degree) {
            c.set(s.clone(), v);
        }
        c
    }

    /// Builds from a coordinate vector in the basis order of `k`.
    pub fn from_vector(k: &SimplicialComplex, degree: usize, ring: Ring, v: &[Q]) -> Self {
        assert_eq!(v.len(), k.count(degree), "vector length");
        let mut c = Cochain::zero(degree, ring);
        for (s, x) in k.simplices(degree).iter().zip(v) {
            c.set(s.clone(), *x);
        }
        c
    }

    pub fn from_int_vector(k: &SimplicialComplex, degree: usize, v: &[i128]) -> Self {
        let q: Vec<Q> = v.iter().map(|x| Q::from_integer(*x)).collect();
        Cochain::from_vector(k, degree, Ring::Int, &q)
    }

    pub fn to_vector(&self, k: &SimplicialComplex) -> Vec<Q> {
        k.simplices(self.degree).iter().map(|s| self.get(s)).collect()
    }

    /// Integer coordinates; panics on a non-integral value.
    pub fn to_int_vector(&self, k: &SimplicialComplex) -> Vec<i128> {
        self.to_vector(k)
            .into_iter()
            .map(|x| {
                assert!(x.is_integer(), "non-integral value");
                x.to_integer()
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn get(&self, s: &[u32]) -> Q {
        self.values.get(s).copied().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, s: Simplex, v: Q) {
        let v = if self.ring == Ring::RatMod1 { frac(v) } else { v };
        if v.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    pub fn add_at(&mut self, s: &[u32], v: Q) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(s);
        self.set(s.to_vec(), cur + v);
    }

    pub fn values(&self) -> impl Iterator<Item = (&Simplex, &Q)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Same values viewed in another ring; reducing into ℚ/ℤ takes
    /// fractional parts.
    pub fn with_ring(&self, ring: Ring) -> Result<Cochain> {
        if ring == Ring::Int && self.values.values().any(|v| !v.is_integer()) {
            return validation("cochain has non-integer values");
        }
        Ok(Cochain::from_map(self.degree, ring, self.values.clone()))
    }

    pub(crate) fn retag(mut self, ring: Ring) -> Cochain {
        if ring == Ring::RatMod1 && self.ring != Ring::RatMod1 {
            return Cochain::from_map(self.degree, ring, self.values);
        }
        self.ring = ring;
        self
    }

    pub fn mod1(&self) -> Cochain {
        Cochain::from_map(self.degree, Ring::RatMod1, self.values.clone())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "degree mismatch in cochain sum");
        let mut out = self.clone().retag(self.ring.max(other.ring));
        for (s, v) in &other.values {
            out.add_at(s, *v);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(-Q::from_integer(1))
    }

    pub fn scale(&self, k: Q) -> Cochain {
        let ring = if self.ring == Ring::Int && !k.is_integer() { Ring::Rat } else { self.ring };
        let mut out = Cochain::zero(self.degree, ring);
        for (s, v) in &self.values {
            out.set(s.clone(), *v * k);
        }
        out
    }

    /// Keeps only the simplices satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Simplex) -> bool) -> Cochain {
        let mut out = Cochain::zero(self.degree, self.ring);
        for (s, v) in &self.values {
            if keep(s) {
                out.values.insert(s.clone(), *v);
            }
        }
        out
    }

    /// Simplicial coboundary `(δc)(τ) = Σᵢ (−1)ⁱ c(∂ᵢτ)`.
    pub fn coboundary(&self, k: &SimplicialComplex) -> Cochain {
        let mut out = Cochain::zero(self.degree + 1, self.ring);
        for (s, v) in &self.values {
            for (t, sg) in k.cofaces(s) {
                out.add_at(t, *v * Q::from_integer(sg));
            }
        }
        out
    }

    /// Pairing with an integral chain; reduced mod 1 for ℚ/ℤ cochains.
    pub fn evaluate(&self, z: &Chain) -> Result<Q> {
        if z.degree != self.degree {
            return degree(format!("pairing degree-{} cochain with degree-{} chain", self.degree, z.degree));
        }
        let mut acc = Q::zero();
        for (s, n) in &z.terms {
            acc += self.get(s) * Q::from_integer(*n);
        }
        Ok(if self.ring == Ring::RatMod1 { frac(acc) } else { acc })
    }

    /// Pullback along a vertex map `source → target`; simplices whose image
    /// degenerates get zero.
    pub fn pullback(&self, source: &SimplicialComplex, map: &BTreeMap<u32, u32>) -> Cochain {
        let mut out = Cochain::zero(self.degree, self.ring);
        for s in source.simplices(self.degree) {
            let img: Vec<u32> = s.iter().map(|v| map[v]).collect();
            if let Some((t, sg)) = sort_with_sign(&img) {
                let v = self.get(&t);
                if !v.is_zero() {
                    out.set(s.clone(), v * Q::from_integer(sg));
                }
            }
        }
        out
    }
}

/// Cone operator towards `apex`: `(Kz)(τ) = (−1)^pos · z(τ ∪ {apex})` where
/// `pos` is the position of `apex` in `τ ∪ {apex}`, and zero when `apex ∈ τ`.
///
/// On a cone with that apex, `δK + Kδ` is the identity in positive degrees.
pub fn cone(apex: u32, z: &Cochain) -> Cochain {
    assert!(z.degree >= 1, "cone of a 0-cochain");
    let mut out = Cochain::zero(z.degree - 1, z.ring);
    for (s, v) in &z.values {
        if let Ok(pos) = s.binary_search(&apex) {
            out.set(face(s, pos), *v * Q::from_integer(sign(pos)));
        }
    }
    out
}

/// Given a closed cochain `z` of degree `≥ 1` on the closed star of
/// `center`, returns `p` on the same star with `δp = z` there.
pub fn cone_contract(k: &SimplicialComplex, center: &[u32], z: &Cochain) -> Result<Cochain> {
    k.require(center)?;
    if z.degree == 0 {
        return degree("cone contraction needs degree at least 1");
    }
    for (s, _) in z.values() {
        if !k.in_star(center, s) {
            return validation(format!("{s:?} is outside the star of {center:?}"));
        }
    }
    let dz = z.coboundary(k);
    if let Some((s, _)) = dz.values().find(|(s, _)| k.in_star(center, s)) {
        return Err(Error::NotClosed(s.clone()));
    }
    Ok(cone(center[0], z))
}

/// An integral chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub terms: BTreeMap<Simplex, i128>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Simplex, i128)>) -> Self {
        let mut c = Chain::zero(degree);
        for (s, n) in terms {
            c.add_at(s, n);
        }
        c
    }

    pub fn from_vector(k: &SimplicialComplex, degree: usize, v: &[i128]) -> Self {
        Chain::from_terms(degree, k.simplices(degree).iter().cloned().zip(v.iter().copied()))
    }

    pub fn add_at(&mut self, s: Simplex, n: i128) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&s);
        }
    }

    /// Adds an arbitrarily ordered vertex tuple, using the orientation
    /// sign; degenerate tuples vanish.
    pub fn add_tuple(&mut self, tuple: &[u32], n: i128) {
        if let Some((s, sg)) = sort_with_sign(tuple) {
            self.add_at(s, sg * n);
        }
    }

    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, n) in &self.terms {
            for i in 0..s.len() {
                out.add_at(face(s, i), sign(i) * n);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image under a vertex map; degenerate images vanish.
    pub fn push_forward(&self, map: &BTreeMap<u32, u32>) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (s, n) in &self.terms {
            let img: Vec<u32> = s.iter().map(|v| map[v]).collect();
            out.add_tuple(&img, *n);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qr};
    use alloc::vec;

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn cone_contract_on_vertex_star() {
        let k = sphere();
        let z = Cochain::new(&k, 1, Ring::Rat, [(vec![0, 1], q(1)), (vec![0, 2], q(1)), (vec![0, 3], q(1))]).unwrap();
        let p = cone_contract(&k, &[0], &z).unwrap();
        let dp = p.coboundary(&k).restrict(|s| k.in_star(&[0], s));
        assert_eq!(dp, z);
    }

    #[test]
    fn cone_contract_rejects_open_input() {
        let k = sphere();
        let z = Cochain::new(&k, 1, Ring::Rat, [(vec![0, 1], q(1)), (vec![0, 2], q(1))]).unwrap();
        assert_eq!(cone_contract(&k, &[0], &z), Err(Error::NotClosed(vec![0, 1, 3])));
    }

    #[test]
    fn mod1_values_wrap() {
        let k = sphere();
        let c = Cochain::new(&k, 0, Ring::RatMod1, [(vec![0], qr(5, 4))]).unwrap();
        assert_eq!(c.get(&[0]), qr(1, 4));
        assert_eq!(c.add(&c).add(&c).add(&c).support_len(), 0);
    }
}

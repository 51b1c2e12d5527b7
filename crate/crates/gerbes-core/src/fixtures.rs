//! Small triangulations used throughout the tests and the CLI.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cochain::Chain;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{validation, Result};
use crate::product::ProductComplex;

pub use crate::product::circle;

/// The full `n`-simplex on vertices `0..=n`.
pub fn simplex(n: u32) -> SimplicialComplex {
    SimplicialComplex::build(&[(0..=n).collect()]).expect("valid")
}

/// Boundary of the `(n+1)`-simplex: a triangulated `n`-sphere.
pub fn sphere(n: u32) -> SimplicialComplex {
    let all: Vec<u32> = (0..=n + 1).collect();
    let facets: Vec<Vec<u32>> = (0..all.len())
        .map(|i| all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect())
        .collect();
    SimplicialComplex::build(&facets).expect("valid")
}

/// `∂Δ³`.
pub fn sphere2() -> SimplicialComplex {
    sphere(2)
}

/// `∂Δ⁴`.
pub fn sphere3() -> SimplicialComplex {
    sphere(3)
}

/// Fundamental cycle of `∂Δ^{n+1}`, normalised to `+1` on `[0,1,…,n]`.
pub fn sphere_cycle(n: u32) -> Chain {
    let mut z = Chain::zero(n as usize);
    let all: Vec<u32> = (0..=n + 1).collect();
    // ∂[0..n+1] = Σ (−1)^i face_i; face_{n+1} = [0..n] carries (−1)^{n+1}.
    let flip = if (n + 1) % 2 == 0 { 1 } else { -1 };
    for i in 0..all.len() {
        let f: Simplex = all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        let s = if i % 2 == 0 { 1 } else { -1 };
        z.add_at(f, s * flip);
    }
    z
}

/// Six-vertex real projective plane (10 triangles).
pub fn rp2_6() -> SimplicialComplex {
    let tris = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];
    let raw: Vec<Vec<u32>> = tris.iter().map(|t| t.to_vec()).collect();
    SimplicialComplex::build(&raw).expect("valid")
}

/// Nine-vertex torus `C₃ × C₃`.
pub fn torus9() -> ProductComplex {
    ProductComplex::new(&circle(3).expect("valid"), 3).expect("valid")
}

/// `ℝP²₆ × S¹` with a 3-gon fiber.
pub fn rp2xs1() -> ProductComplex {
    ProductComplex::new(&rp2_6(), 3).expect("valid")
}

/// The lens space `L(p, 1)`: the barycentric subdivision of the join of two
/// `2p`-gons, divided by the free `ℤ_p` action rotating both circles by two
/// steps.
pub fn lens_space(p: u32) -> Result<SimplicialComplex> {
    if p < 2 {
        return validation(format!("lens space needs p >= 2, got {p}"));
    }
    let n = 2 * p;
    let c1: Vec<Vec<u32>> = (0..n).map(|i| vec![i]).chain((0..n).map(|i| vec![i, (i + 1) % n])).collect();
    let c2: Vec<Vec<u32>> = c1.iter().map(|s| s.iter().map(|v| v + n).collect()).collect();
    let mut join: BTreeSet<Simplex> = BTreeSet::new();
    for a in c1.iter().chain(core::iter::once(&Vec::new())) {
        for b in c2.iter().chain(core::iter::once(&Vec::new())) {
            let mut s: Simplex = a.iter().chain(b).copied().collect();
            s.sort();
            if !s.is_empty() {
                join.insert(s);
            }
        }
    }
    let act = |s: &Simplex| -> Simplex {
        let mut t: Simplex = s.iter().map(|v| if *v < n { (v + 2) % n } else { n + (v - n + 2) % n }).collect();
        t.sort();
        t
    };
    // orbit labels for the subdivision's vertices
    let mut label: BTreeMap<Simplex, u32> = BTreeMap::new();
    let mut next = 0;
    for s in &join {
        if label.contains_key(s) {
            continue;
        }
        let mut t = s.clone();
        for _ in 0..p {
            label.insert(t.clone(), next);
            t = act(&t);
        }
        next += 1;
    }
    let facets: Vec<&Simplex> = join.iter().filter(|s| s.len() == 4).collect();
    let mut quotient: BTreeSet<Simplex> = BTreeSet::new();
    for f in &facets {
        for perm in permutations(4) {
            let flag: Vec<u32> = (1..=4)
                .map(|k| {
                    let mut sub: Simplex = perm[..k].iter().map(|i| f[*i]).collect();
                    sub.sort();
                    label[&sub]
                })
                .collect();
            let mut s = flag.clone();
            s.sort();
            s.dedup();
            if s.len() != 4 {
                return validation("lens quotient collapses a simplex");
            }
            quotient.insert(s);
        }
    }
    if quotient.len() * p as usize != facets.len() * 24 {
        return validation("lens quotient identifies simplices outside one orbit");
    }
    let raw: Vec<Simplex> = quotient.into_iter().collect();
    let k = SimplicialComplex::build(&raw)?;
    // covering check: every face count of the cover is p times the quotient's
    let cover_fv = sd_f_vector(&join);
    if k.f_vector().iter().zip(&cover_fv).any(|(q, c)| q * p as usize != *c) {
        return validation("lens quotient is not a covering");
    }
    Ok(k)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// f-vector of the barycentric subdivision: a `d`-simplex there is a chain
/// of `d+1` nested simplices.
fn sd_f_vector(k: &BTreeSet<Simplex>) -> Vec<usize> {
    let list: Vec<&Simplex> = k.iter().collect();
    let dim = list.iter().map(|s| s.len()).max().unwrap_or(0);
    // chains ending at each simplex, by length
    let mut ending: BTreeMap<&Simplex, Vec<usize>> = BTreeMap::new();
    let mut sorted = list.clone();
    sorted.sort_by_key(|s| s.len());
    for s in &sorted {
        let mut counts = vec![0usize; dim];
        counts[0] = 1;
        for t in &sorted {
            if t.len() < s.len() && t.iter().all(|v| s.contains(v)) {
                let sub = &ending[t];
                for l in 0..dim - 1 {
                    counts[l + 1] += sub[l];
                }
            }
        }
        ending.insert(s, counts);
    }
    let mut fv = vec![0usize; dim];
    for counts in ending.values() {
        for (l, c) in counts.iter().enumerate() {
            fv[l] += c;
        }
    }
    fv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rp2_is_closed_surface() {
        let k = rp2_6();
        assert_eq!(k.f_vector(), vec![6, 15, 10]);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn sphere_cycles_are_cycles() {
        for n in 1..4 {
            let z = sphere_cycle(n);
            assert!(z.boundary().is_zero());
            let top: Vec<u32> = (0..=n).collect();
            assert_eq!(z.terms[&top], 1);
        }
    }

    #[test]
    fn lens_space_is_a_closed_three_manifold() {
        let l = lens_space(2).unwrap();
        assert_eq!(l.euler_characteristic(), 0);
        assert_eq!(l.dim(), 3);
    }
}

//! Simplicial cohomology and explicit class coordinates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{gcd, lcm, Q};
use crate::cochain::{Chain, Cochain, Ring};
use crate::complex::SimplicialComplex;
use crate::error::{degree, Error, Result};
use crate::linalg::{rank, smith, solve_integer, IntMatrix, Smith, Track};

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with
/// `d₁ | d₂ | …`. For ℚ/ℤ coefficients `free_rank` counts ℚ/ℤ summands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupPresentation {
    pub free_rank: usize,
    pub torsion: Vec<i128>,
}

impl GroupPresentation {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

fn check_degree(k: &SimplicialComplex, q: usize) -> Result<()> {
    if q > k.dim() {
        return degree(format!("degree {q} exceeds dimension {}", k.dim()));
    }
    Ok(())
}

/// Matrix of `δ^{q−1}`; an empty matrix for `q = 0`.
pub(crate) fn incoming(k: &SimplicialComplex, q: usize) -> IntMatrix {
    if q == 0 {
        IntMatrix::zeros(k.count(0), 0)
    } else {
        k.coboundary_matrix(q - 1).expect("degree checked")
    }
}

pub fn betti(k: &SimplicialComplex, q: usize) -> usize {
    let out = if q < k.dim() { rank(&k.coboundary_matrix(q).expect("in range")) } else { 0 };
    k.count(q) - out - rank(&incoming(k, q))
}

/// `H^q(K; ring)`.
pub fn cohomology(k: &SimplicialComplex, q: usize, ring: Ring) -> Result<GroupPresentation> {
    check_degree(k, q)?;
    let b = betti(k, q);
    Ok(match ring {
        Ring::Rat => GroupPresentation { free_rank: b, torsion: Vec::new() },
        Ring::Int => GroupPresentation { free_rank: b, torsion: smith(&incoming(k, q), Track::NONE).torsion() },
        Ring::RatMod1 => {
            let torsion = if q < k.dim() {
                smith(&incoming(k, q + 1), Track::NONE).torsion()
            } else {
                Vec::new()
            };
            GroupPresentation { free_rank: b, torsion }
        }
    })
}

/// Coordinates of an integral class: residues against the torsion invariants
/// and evaluations on a basis of free homology cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCoordinates {
    /// `(dᵢ, yᵢ mod dᵢ)`.
    pub torsion: Vec<(i128, i128)>,
    pub free: Vec<i128>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(|(_, y)| *y == 0) && self.free.iter().all(|x| *x == 0)
    }

    /// Whether the image in rational cohomology vanishes.
    pub fn rationally_trivial(&self) -> bool {
        self.free.iter().all(|x| *x == 0)
    }

    /// Order of the class; `None` means infinite order.
    pub fn order(&self) -> Option<i128> {
        if !self.rationally_trivial() {
            return None;
        }
        Some(self.torsion.iter().fold(1, |acc, (d, y)| lcm(acc, d / gcd(*d, *y))))
    }
}

impl fmt::Display for ClassCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "torsion [")?;
        for (i, (d, y)) in self.torsion.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{y} mod {d}")?;
        }
        write!(f, "], free {:?}", self.free)
    }
}

/// Everything needed to name integral classes in one degree.
#[derive(Clone, Debug)]
pub struct IntegralCohomology {
    pub degree: usize,
    pub group: GroupPresentation,
    incoming: Smith,
    /// Basis of free homology in this degree (modulo torsion).
    cycles: Vec<Chain>,
}

impl IntegralCohomology {
    pub fn new(k: &SimplicialComplex, n: usize) -> Result<Self> {
        check_degree(k, n)?;
        let incoming_smith = smith(&incoming(k, n), Track::ALL);
        let cycles = free_cycles(k, n);
        let group = GroupPresentation { free_rank: cycles.len(), torsion: incoming_smith.torsion() };
        Ok(IntegralCohomology { degree: n, group, incoming: incoming_smith, cycles })
    }

    pub fn cycles(&self) -> &[Chain] {
        &self.cycles
    }

    /// Coordinates of the class of an integral cocycle.
    pub fn coordinates(&self, k: &SimplicialComplex, c: &Cochain) -> Result<ClassCoordinates> {
        if c.degree() != self.degree {
            return degree("cochain degree does not match");
        }
        if let Some((s, _)) = c.coboundary(k).values().next() {
            return Err(Error::NotClosed(s.clone()));
        }
        let v = c.to_vector(k);
        if v.iter().any(|x| !x.is_integer()) {
            return Err(Error::Validation("class coordinates need an integral cocycle".into()));
        }
        let y = self.incoming.u.as_ref().expect("tracked").mul_qvec(&v);
        let torsion = self
            .incoming
            .diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > 1)
            .map(|(i, d)| (*d, y[i].to_integer().rem_euclid(*d)))
            .collect();
        let mut free = Vec::with_capacity(self.cycles.len());
        for z in &self.cycles {
            free.push(c.evaluate(z)?.to_integer());
        }
        Ok(ClassCoordinates { torsion, free })
    }

    /// Cocycles generating the torsion summands, each paired with an integral
    /// cochain `b` such that `dᵢ · cᵢ = δb`.
    pub fn torsion_generators(&self, k: &SimplicialComplex) -> Vec<(i128, Cochain, Cochain)> {
        let u_inv = self.incoming.u_inv.as_ref().expect("tracked");
        let v = self.incoming.v.as_ref().expect("tracked");
        let mut out = Vec::new();
        for (i, d) in self.incoming.diagonal.iter().enumerate() {
            if *d <= 1 {
                continue;
            }
            let col: Vec<i128> = (0..u_inv.rows()).map(|r| u_inv.get(r, i)).collect();
            let b: Vec<i128> = (0..v.rows()).map(|r| v.get(r, i)).collect();
            let c = Cochain::from_int_vector(k, self.degree, &col);
            let b = if self.degree == 0 {
                Cochain::zero(0, Ring::Int)
            } else {
                Cochain::from_int_vector(k, self.degree - 1, &b)
            };
            out.push((*d, c, b));
        }
        out
    }

    /// Integral cocycles dual to the free cycle basis.
    pub fn free_generators(&self, k: &SimplicialComplex) -> Vec<Cochain> {
        let n = self.degree;
        let cols = k.count(n);
        let out_rows = if n < k.dim() { k.count(n + 1) } else { 0 };
        let delta = if n < k.dim() { k.coboundary_matrix(n).expect("in range") } else { IntMatrix::zeros(0, cols) };
        let mut pair = IntMatrix::zeros(self.cycles.len(), cols);
        for (j, z) in self.cycles.iter().enumerate() {
            for (s, m) in &z.terms {
                pair.set(j, k.index_of(s).expect("cycle simplex"), *m);
            }
        }
        let system = delta.vstack(&pair);
        (0..self.cycles.len())
            .map(|j| {
                let mut rhs = vec![0; out_rows + self.cycles.len()];
                rhs[out_rows + j] = 1;
                let x = solve_integer(&system, &rhs).expect("cycle basis is dual to a cocycle basis");
                Cochain::from_int_vector(k, n, &x)
            })
            .collect()
    }

    /// Coboundary preimage: integral `b` with `δb = c`, if the class of `c`
    /// vanishes.
    pub fn preimage(&self, k: &SimplicialComplex, c: &Cochain) -> Option<Cochain> {
        let v: Vec<Q> = c.to_vector(k);
        if v.iter().any(|x| !x.is_integer()) {
            return None;
        }
        if self.degree == 0 {
            return if c.is_zero() { Some(Cochain::zero(0, Ring::Int)) } else { None };
        }
        let u = self.incoming.u.as_ref().expect("tracked");
        let vm = self.incoming.v.as_ref().expect("tracked");
        let y = u.mul_qvec(&v);
        let r = self.incoming.rank();
        let mut w = vec![Q::zero(); vm.rows()];
        for (i, yi) in y.iter().enumerate() {
            if i < r {
                let d = Q::from_integer(self.incoming.diagonal[i]);
                let wi = *yi / d;
                if !wi.is_integer() {
                    return None;
                }
                w[i] = wi;
            } else if !yi.is_zero() {
                return None;
            }
        }
        let b = vm.mul_qvec(&w);
        Some(Cochain::from_vector(k, self.degree - 1, Ring::Int, &b))
    }
}

/// A basis of `H_n(K; ℤ)` modulo torsion, as explicit cycles.
pub fn free_cycles(k: &SimplicialComplex, n: usize) -> Vec<Chain> {
    let cn = k.count(n);
    let bd = k.boundary_matrix(n).expect("in range");
    let s = smith(&bd, Track { right: true, right_inverse: true, ..Track::NONE });
    let v = s.v.as_ref().expect("tracked");
    let v_inv = s.v_inv.as_ref().expect("tracked");
    let r = s.rank();
    let kdim = cn - r;
    if kdim == 0 {
        return Vec::new();
    }
    // boundaries B_n in kernel coordinates
    let up = if n < k.dim() { k.boundary_matrix(n + 1).expect("in range") } else { IntMatrix::zeros(cn, 0) };
    let coords_full = v_inv.mul(&up);
    let mut coords = IntMatrix::zeros(kdim, up.cols());
    for i in 0..kdim {
        for j in 0..up.cols() {
            coords.set(i, j, coords_full.get(r + i, j));
        }
    }
    let hs = smith(&coords, Track { left: true, left_inverse: true, ..Track::NONE });
    let u_inv = hs.u_inv.as_ref().expect("tracked");
    let mut out = Vec::new();
    for g in hs.rank()..kdim {
        let mut z = vec![0i128; cn];
        for i in 0..kdim {
            let a = u_inv.get(i, g);
            if a == 0 {
                continue;
            }
            for (row, zr) in z.iter_mut().enumerate() {
                *zr += a * v.get(row, r + i);
            }
        }
        if let Some(first) = z.iter().find(|x| **x != 0) {
            if *first < 0 {
                z.iter_mut().for_each(|x| *x = -*x);
            }
        }
        out.push(Chain::from_vector(k, n, &z));
    }
    out
}

/// Integral fundamental cycle of a closed pseudomanifold of dimension `n`
/// (the generator of `ker ∂_n` when it has rank one).
pub fn fundamental_cycle(k: &SimplicialComplex) -> Option<Chain> {
    let n = k.dim();
    let ker = crate::linalg::integer_kernel(&k.boundary_matrix(n).ok()?);
    if ker.len() != 1 {
        return None;
    }
    Some(Chain::from_vector(k, n, &ker[0]))
}

//! Shared helpers for the integration tests: seeded random data and
//! independent oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gerbes_core::cochain::{Chain, Cochain, Ring};
use gerbes_core::complex::{Simplex, SimplicialComplex};
use gerbes_core::deligne::{DeligneCochain, DifferentialCocycle, Entry};
use gerbes_core::Q;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_q(r: &mut ChaCha8Rng) -> Q {
    Q::new(r.gen_range(-6..=6), r.gen_range(1..=4))
}

/// Random rational cochain, about half the entries nonzero.
pub fn random_cochain(r: &mut ChaCha8Rng, k: &SimplicialComplex, q: usize) -> Cochain {
    let mut c = Cochain::zero(q, Ring::Rat);
    for s in k.simplices(q) {
        if r.gen_bool(0.5) {
            c.set(s.clone(), small_q(r));
        }
    }
    c
}

pub fn random_int_cochain(r: &mut ChaCha8Rng, k: &SimplicialComplex, q: usize) -> Cochain {
    let mut c = Cochain::zero(q, Ring::Int);
    for s in k.simplices(q) {
        c.set(s.clone(), Q::from_integer(r.gen_range(-3..=3)));
    }
    c
}

/// Random Deligne cochain of total degree `t` in the complex truncated at `n`.
pub fn random_deligne(r: &mut ChaCha8Rng, k: &SimplicialComplex, n: usize, t: usize) -> DeligneCochain {
    let mut entries = Vec::new();
    for p in 0..=t.min(k.dim()) {
        let level = t as isize - 1 - p as isize;
        for s in k.simplices(p) {
            if level == -1 {
                entries.push((s.clone(), Entry::Const(r.gen_range(-3..=3))));
            } else if level < n as isize {
                let mut c = Cochain::zero(level as usize, Ring::Rat);
                for tau in k.star_simplices(s, level as usize) {
                    if r.gen_bool(0.4) {
                        c.set(tau, small_q(r));
                    }
                }
                entries.push((s.clone(), Entry::Form(c)));
            }
        }
    }
    DeligneCochain::new(k, n, t, entries).unwrap()
}

/// Random differential cocycle `(c, h, ω)` with `c = δb + (given integral cocycle)`.
pub fn random_cocycle(r: &mut ChaCha8Rng, k: &SimplicialComplex, n: usize, base: &Cochain) -> DifferentialCocycle {
    let b = random_int_cochain(r, k, n - 1);
    let c = base.add(&b.coboundary(k));
    let h = random_cochain(r, k, n - 1);
    let omega = c.add(&h.coboundary(k));
    DifferentialCocycle::new(n, c, h, omega).unwrap()
}

pub fn identity_map(k: &SimplicialComplex) -> BTreeMap<u32, u32> {
    k.vertices().iter().map(|v| (*v, *v)).collect()
}

pub fn chain(degree: usize, terms: &[(Simplex, i128)]) -> Chain {
    Chain::from_terms(degree, terms.iter().cloned())
}

/// Smith normal form diagonal by the textbook algorithm: move a smallest
/// nonzero entry to the pivot, reduce its row and column modulo it, repeat;
/// then restore the divisibility chain with gcd/lcm swaps. Independent of
/// the library routine.
pub fn naive_invariant_factors(rows: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
            else {
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let f = a[i][t] / p;
                if f != 0 {
                    for j in t..n {
                        a[i][j] -= f * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let f = a[t][j] / p;
                if f != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= f * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        if a.get(t).map_or(0, |r| r[t]) == 0 {
            break;
        }
        diag.push(a[t][t].abs());
    }
    // fix divisibility: (a, b) -> (gcd, lcm) until sorted chain
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                let (x, y) = (diag[i], diag[j]);
                let g = gcd(x, y);
                let l = if g == 0 { 0 } else { x / g * y };
                if (g, l) != (x, y) {
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
            }
        }
    }
    diag
}

/// Rank over `𝔽_p` by Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i128>], p: i128) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let inv = |x: i128| -> i128 {
        // Fermat
        let (mut b, mut e, mut out) = (x, p - 2, 1i128);
        while e > 0 {
            if e & 1 == 1 {
                out = out * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        out
    };
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..m).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for j in c..n {
            a[rank][j] = a[rank][j] * iv % p;
        }
        for i in 0..m {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..n {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `(free rank, number of torsion summands divisible by each prime)` from
/// ranks modulo primes; a large prime stands in for ℚ.
pub fn modular_cohomology(k: &SimplicialComplex, q: usize, primes: &[i128]) -> (usize, Vec<usize>) {
    const BIG: i128 = 1_000_000_007;
    let mat = |d: usize| -> Vec<Vec<i128>> {
        if d > k.dim() || k.count(d + 1) == 0 {
            return Vec::new();
        }
        k.coboundary_matrix(d).unwrap().to_rows()
    };
    let out = mat(q);
    let inc = if q == 0 { Vec::new() } else { mat(q - 1) };
    let r_out = rank_mod_p(&out, BIG);
    let r_in = rank_mod_p(&inc, BIG);
    let free = k.count(q) - r_out - r_in;
    let counts = primes.iter().map(|p| r_in - rank_mod_p(&inc, *p)).collect();
    (free, counts)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Integral cohomology (free rank, torsion) from invariant factors of the
/// dense coboundary matrices.
pub fn naive_cohomology(k: &SimplicialComplex, q: usize) -> (usize, Vec<i128>) {
    let mat = |d: usize| -> Vec<Vec<i128>> {
        if d > k.dim() || k.count(d + 1) == 0 {
            return Vec::new();
        }
        let m = k.coboundary_matrix(d).unwrap();
        m.to_rows()
    };
    let out_rank = naive_invariant_factors(&mat(q)).iter().filter(|d| **d != 0).count();
    let incoming = if q == 0 { Vec::new() } else { naive_invariant_factors(&mat(q - 1)) };
    let in_rank = incoming.iter().filter(|d| **d != 0).count();
    let free = k.count(q) - out_rank - in_rank;
    let torsion = incoming.into_iter().filter(|d| *d > 1).collect();
    (free, torsion)
}

/// Rank of a rational matrix by dense Gaussian elimination in f64.
pub fn float_rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    m.rank(1e-9)
}

/// Random monomial unitary with phases in `(1/denom)ℤ`.
pub fn random_monomial(r: &mut ChaCha8Rng, n: usize, denom: i128) -> gerbes_core::monomial::MonomialMatrix {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let phases = (0..n).map(|_| Q::new(r.gen_range(0..denom), denom)).collect();
    gerbes_core::monomial::MonomialMatrix::new(perm, phases).unwrap()
}

/// Random flat bundle on the trivial gerbe over a graph (no triangles, so
/// any transitions are valid).
pub fn random_graph_bundle(
    r: &mut ChaCha8Rng,
    k: &SimplicialComplex,
    n: usize,
    denom: i128,
) -> gerbes_core::morphism::TwistedBundleMorphism {
    use gerbes_core::gerbe::GerbeDatum;
    assert!(k.dim() <= 1);
    let transition = k.simplices(1).iter().map(|e| (e.clone(), random_monomial(r, n, denom))).collect();
    gerbes_core::morphism::TwistedBundleMorphism::new(k, GerbeDatum::zero(), GerbeDatum::zero(), n, BTreeMap::new(), transition)
        .unwrap()
}

/// Small graphs with loops: 4-gon, 5-gon, figure eight, theta.
pub fn graphs() -> Vec<SimplicialComplex> {
    let build = |edges: &[[u32; 2]]| SimplicialComplex::build(&edges.iter().map(|e| e.to_vec()).collect::<Vec<_>>()).unwrap();
    vec![
        build(&[[0, 1], [1, 2], [2, 3], [0, 3]]),
        build(&[[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]),
        build(&[[0, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]]),
        build(&[[0, 1], [1, 3], [0, 2], [2, 3], [0, 3]]),
    ]
}

pub fn phase_to_complex(phase: Q) -> nalgebra::Complex<f64> {
    let t = 2.0 * std::f64::consts::PI * (*phase.numer() as f64) / (*phase.denom() as f64);
    nalgebra::Complex::new(t.cos(), t.sin())
}

pub fn dense(m: &gerbes_core::monomial::MonomialMatrix) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
    let n = m.size();
    let mut out = nalgebra::DMatrix::zeros(n, n);
    for j in 0..n {
        out[(m.perm()[j], j)] = phase_to_complex(m.phases()[j]);
    }
    out
}

/// Dimension of `{ψ : ψ_b α_ab = α'_ab ψ_a}` by floating-point rank, with
/// `ψ_a[r][j] = 0` wherever the connections differ when `parallel`.
pub fn float_intertwiner_dim(
    k: &SimplicialComplex,
    e: &gerbes_core::morphism::TwistedBundleMorphism,
    f: &gerbes_core::morphism::TwistedBundleMorphism,
    parallel: bool,
) -> usize {
    use nalgebra::Complex;
    let (n, m) = (e.rank(), f.rank());
    let verts = k.vertices();
    let pos: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let unknowns = verts.len() * m * n;
    if unknowns == 0 {
        return 0;
    }
    let var = |v: u32, r: usize, j: usize| pos[&v] * m * n + r * n + j;
    let mut rows: Vec<Vec<Complex<f64>>> = Vec::new();
    let zero = Complex::new(0.0, 0.0);
    for edge in k.simplices(1) {
        let (a, b) = (edge[0], edge[1]);
        let al = dense(e.transition(edge));
        let be = dense(f.transition(edge));
        for r in 0..m {
            for j in 0..n {
                let mut row = vec![zero; unknowns];
                for l in 0..n {
                    row[var(b, r, l)] += al[(l, j)];
                }
                for l in 0..m {
                    row[var(a, l, j)] -= be[(r, l)];
                }
                rows.push(row);
            }
        }
    }
    if parallel {
        for v in verts {
            for r in 0..m {
                for j in 0..n {
                    if f.connection(*v)[r] != e.connection(*v)[j] {
                        let mut row = vec![zero; unknowns];
                        row[var(*v, r, j)] = Complex::new(1.0, 0.0);
                        rows.push(row);
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    let mat = nalgebra::DMatrix::from_fn(rows.len(), unknowns, |i, j| rows[i][j]);
    unknowns - mat.rank(1e-9)
}

/// Leibniz determinant over all permutations.
pub fn leibniz_det(a: &gerbes_core::monomial::CycloMatrix) -> gerbes_core::Cyclo {
    use gerbes_core::Cyclo;
    let n = a.rows();
    let mut total = Cyclo::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        let mut term = if inv % 2 == 0 { Cyclo::one() } else { -Cyclo::one() };
        for (i, pi) in p.iter().enumerate() {
            term = &term * a.get(i, *pi);
        }
        total = total.clone() + term;
    });
    total
}

fn permutations(p: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        visit(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, visit);
        p.swap(i, j);
    }
}

/// Random gauge parameter for gerbe data: 1-forms on vertex stars, 0-forms
/// on edge stars, integers on triangles.
pub fn random_gauge(r: &mut ChaCha8Rng, k: &SimplicialComplex) -> gerbes_core::gerbe::LineDatum {
    let mut h = gerbes_core::gerbe::LineDatum::zero();
    for (p, deg) in [(0usize, 1usize), (1, 0)] {
        for s in k.simplices(p) {
            let mut c = Cochain::zero(deg, Ring::Rat);
            for t in k.star_simplices(s, deg) {
                if r.gen_bool(0.5) {
                    c.set(t, small_q(r));
                }
            }
            h.set_form(p, s.clone(), c);
        }
    }
    for t in k.simplices(2) {
        h.set_winding(t.clone(), r.gen_range(-2..=2));
    }
    h
}

/// Random vertex map; simplicial whenever every image of a simplex is a face.
pub fn random_vertex_map(r: &mut ChaCha8Rng, domain: &SimplicialComplex, target: &SimplicialComplex) -> BTreeMap<u32, u32> {
    let tv = target.vertices();
    domain.vertices().iter().map(|v| (*v, tv[r.gen_range(0..tv.len())])).collect()
}

/// Random gerbe with integral class `base` on `k`, as local data.
pub fn random_gerbe(r: &mut ChaCha8Rng, k: &SimplicialComplex, base: &Cochain) -> gerbes_core::gerbe::GerbeDatum {
    gerbes_core::gerbe::GerbeDatum::localize(k, &random_cocycle(r, k, 3, base)).unwrap()
}

//! Dense exact linear algebra over ℤ and ℚ: Smith and Hermite normal forms,
//! integer and mixed integer/rational linear solving.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::Q;

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_to(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_qvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| **a != 0)
                    .fold(Q::zero(), |acc, (a, b)| acc + *b * Q::from_integer(*a))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "dimension mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j);
            if v != 0 {
                self.add_to(dst, j, k * v);
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        if k == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src);
            if v != 0 {
                self.add_to(i, dst, k * v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }
}

/// Which unimodular transforms to record while reducing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub left: bool,
    pub left_inverse: bool,
    pub right: bool,
    pub right_inverse: bool,
}

impl Track {
    pub const NONE: Track = Track { left: false, left_inverse: false, right: false, right_inverse: false };
    pub const ALL: Track = Track { left: true, left_inverse: true, right: true, right_inverse: true };
}

/// Smith decomposition `U · A · V = D` with `D` diagonal, `d₁ | d₂ | …`, all
/// `dᵢ > 0`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<i128>,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors larger than one.
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal.iter().copied().filter(|d| *d > 1).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        self.a.add_row(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, k);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col(src, dst, -k);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        self.a.add_col(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, k);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row(src, dst, -k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }
}

/// Smith normal form. Pivots are chosen by smallest magnitude, ties broken by
/// lexicographic (row, column) position, which makes the result and the
/// transforms deterministic.
pub fn smith(a: &IntMatrix, track: Track) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        a: a.clone(),
        u: track.left.then(|| IntMatrix::identity(m)),
        u_inv: track.left_inverse.then(|| IntMatrix::identity(m)),
        v: track.right.then(|| IntMatrix::identity(n)),
        v_inv: track.right_inverse.then(|| IntMatrix::identity(n)),
    };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest-magnitude pivot in the trailing block
        let mut best: Option<(i128, usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                let x = r.a.get(i, j).abs();
                if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                    best = Some((x, i, j));
                    if x == 1 {
                        break 'search;
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.a.get(t, t);
            for i in t + 1..m {
                let x = r.a.get(i, t);
                if x != 0 {
                    r.add_row(i, t, -x.div_euclid(p));
                }
            }
            for j in t + 1..n {
                let x = r.a.get(t, j);
                if x != 0 {
                    r.add_col(j, t, -x.div_euclid(p));
                }
            }
            // remainders in pivot row/column: re-pivot on the smallest one
            let mut next: Option<(i128, usize, usize)> = None;
            for i in t + 1..m {
                let x = r.a.get(i, t).abs();
                if x != 0 && next.map_or(true, |(b, _, _)| x < b) {
                    next = Some((x, i, t));
                }
            }
            for j in t + 1..n {
                let x = r.a.get(t, j).abs();
                if x != 0 && next.map_or(true, |(b, _, _)| x < b) {
                    next = Some((x, t, j));
                }
            }
            if let Some((_, i, j)) = next {
                r.swap_rows(t, i);
                r.swap_cols(t, j);
                continue;
            }
            // divisibility of the trailing block
            let mut offender = None;
            'scan: for i in (t + 1..m).filter(|_| p.abs() != 1) {
                for j in t + 1..n {
                    if r.a.get(i, j) % p != 0 {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => r.add_row(t, i, 1),
                None => break,
            }
        }
        if r.a.get(t, t) < 0 {
            r.negate_row(t);
        }
        diagonal.push(r.a.get(t, t));
        t += 1;
    }
    Smith { diagonal, u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv, rows: m, cols: n }
}

pub fn rank(a: &IntMatrix) -> usize {
    smith(a, Track::NONE).rank()
}

/// Row-style Hermite normal form `H = U · A`: echelon form with positive
/// pivots and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of the pivot in each nonzero row.
    pub pivots: Vec<usize>,
}

pub fn hermite(a: &IntMatrix) -> Hermite {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer { a: a.clone(), u: Some(IntMatrix::identity(m)), u_inv: None, v: None, v_inv: None };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        // Euclid on the column below `row`
        loop {
            let mut best: Option<(i128, usize)> = None;
            for i in row..m {
                let x = r.a.get(i, col).abs();
                if x != 0 && best.map_or(true, |(b, _)| x < b) {
                    best = Some((x, i));
                }
            }
            let Some((_, bi)) = best else { break };
            r.swap_rows(row, bi);
            let p = r.a.get(row, col);
            let mut done = true;
            for i in row + 1..m {
                let x = r.a.get(i, col);
                if x != 0 {
                    r.add_row(i, row, -x.div_euclid(p));
                    if r.a.get(i, col) != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r.a.get(row, col) == 0 {
            continue;
        }
        if r.a.get(row, col) < 0 {
            r.negate_row(row);
        }
        let p = r.a.get(row, col);
        for i in 0..row {
            let x = r.a.get(i, col);
            r.add_row(i, row, -x.div_euclid(p));
        }
        pivots.push(col);
        row += 1;
    }
    Hermite { h: r.a, u: r.u.expect("tracked"), pivots }
}

/// `A x = b` over the integers, prepared once for many right-hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSystem {
    a: IntMatrix,
    herm: Hermite,
    ut: IntMatrix,
}

impl IntegerSystem {
    pub fn new(a: &IntMatrix) -> Self {
        // U Aᵀ = H  ⇒  A Uᵀ = Hᵀ; solve Hᵀ y = b then x = Uᵀ y.
        let herm = hermite(&a.transpose());
        let ut = herm.u.transpose();
        IntegerSystem { a: a.clone(), herm, ut }
    }

    pub fn solve(&self, b: &[i128]) -> Option<Vec<i128>> {
        assert_eq!(self.a.rows(), b.len(), "dimension mismatch");
        let herm = &self.herm;
        let mut y = vec![0i128; self.a.cols()];
        for (idx, &pc) in herm.pivots.iter().enumerate() {
            let mut rhs = b[pc];
            for (prev, yv) in y.iter().enumerate().take(idx) {
                rhs -= herm.h.get(prev, pc) * yv;
            }
            let piv = herm.h.get(idx, pc);
            if rhs % piv != 0 {
                return None;
            }
            y[idx] = rhs / piv;
        }
        let x = self.ut.mul_vec(&y);
        (self.a.mul_vec(&x) == b).then_some(x)
    }
}

/// Solves `A x = b` over the integers.
pub fn solve_integer(a: &IntMatrix, b: &[i128]) -> Option<Vec<i128>> {
    IntegerSystem::new(a).solve(b)
}

/// Integer basis of the kernel of `A` (columns of the returned vectors).
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<i128>> {
    let s = smith(a, Track { right: true, ..Track::NONE });
    let v = s.v.as_ref().expect("tracked");
    (s.rank()..a.cols())
        .map(|j| {
            let mut col: Vec<i128> = (0..a.cols()).map(|i| v.get(i, j)).collect();
            if let Some(&first) = col.iter().find(|x| **x != 0) {
                if first < 0 {
                    col.iter_mut().for_each(|x| *x = -*x);
                }
            }
            col
        })
        .collect()
}

/// Solution of a mixed system `A_q · y + A_z · z = r` with `y` rational and
/// `z` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSolution {
    pub rational: Vec<Q>,
    pub integral: Vec<i128>,
}

/// The mixed system `A_q · y + A_z · z = r` with `y ∈ ℚ^a`, `z ∈ ℤ^b`,
/// prepared once for many right-hand sides.
///
/// The rational unknowns are eliminated with a Smith decomposition of `A_q`;
/// what remains is an integer system in `z` alone.
#[derive(Clone, Debug)]
pub struct MixedSystem {
    a_q: IntMatrix,
    a_z: IntMatrix,
    smith: Smith,
    uz: IntMatrix,
    lower: Option<IntegerSystem>,
}

impl MixedSystem {
    pub fn new(a_q: &IntMatrix, a_z: &IntMatrix) -> Self {
        assert_eq!(a_q.rows(), a_z.rows(), "dimension mismatch");
        let smith = smith(a_q, Track { left: true, right: true, ..Track::NONE });
        let rows = a_q.rows();
        let rk = smith.rank();
        let uz = smith.u.as_ref().expect("tracked").mul(a_z);
        // rows ≥ rk constrain z alone
        let lower = (a_z.cols() > 0 && rows > rk).then(|| {
            let mut lower = IntMatrix::zeros(rows - rk, a_z.cols());
            for i in rk..rows {
                for j in 0..a_z.cols() {
                    lower.set(i - rk, j, uz.get(i, j));
                }
            }
            IntegerSystem::new(&lower)
        });
        MixedSystem { a_q: a_q.clone(), a_z: a_z.clone(), smith, uz, lower }
    }

    pub fn solve(&self, r: &[Q]) -> Option<MixedSolution> {
        let rows = r.len();
        assert_eq!(self.a_q.rows(), rows, "dimension mismatch");
        let s = &self.smith;
        let rk = s.rank();
        let ur = s.u.as_ref().expect("tracked").mul_qvec(r);
        let mut rhs = Vec::with_capacity(rows - rk);
        for x in &ur[rk..] {
            if !x.is_integer() {
                return None;
            }
            rhs.push(x.to_integer());
        }
        let z = match &self.lower {
            Some(lower) => lower.solve(&rhs)?,
            None if self.a_z.cols() == 0 && rhs.iter().any(|x| *x != 0) => return None,
            None => vec![0; self.a_z.cols()],
        };
        let uzz = self.uz.mul_vec(&z);
        let mut w = vec![Q::zero(); self.a_q.cols()];
        for i in 0..rk {
            w[i] = (ur[i] - Q::from_integer(uzz[i])) / Q::from_integer(s.diagonal[i]);
        }
        let y = s.v.as_ref().expect("tracked").mul_qvec(&w);
        // exact verification
        let lhs_q = self.a_q.mul_qvec(&y);
        let lhs_z = self.a_z.mul_vec(&z);
        for i in 0..rows {
            if lhs_q[i] + Q::from_integer(lhs_z[i]) != r[i] {
                return None;
            }
        }
        Some(MixedSolution { rational: y, integral: z })
    }
}

/// Solves `A_q · y + A_z · z = r` with `y ∈ ℚ^a`, `z ∈ ℤ^b`.
pub fn solve_mixed(a_q: &IntMatrix, a_z: &IntMatrix, r: &[Q]) -> Option<MixedSolution> {
    MixedSystem::new(a_q, a_z).solve(r)
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut out = QMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, Q::from_integer(m.get(i, j)));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(pr) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else { continue };
            for j in 0..a.cols {
                a.data.swap(row * a.cols + j, pr * a.cols + j);
            }
            let inv = Q::one() / a.get(row, col);
            for j in col..a.cols {
                let v = a.get(row, j) * inv;
                a.set(row, j, v);
            }
            for i in 0..a.rows {
                if i == row {
                    continue;
                }
                let f = a.get(i, col);
                if f.is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    let pv = a.get(row, j);
                    if !pv.is_zero() {
                        let v = a.get(i, j) - f * pv;
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Some solution of `A x = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(i, self.cols);
        }
        Some(x)
    }
}

/// Canonical representatives of `ℚ^N / column-span(M)`.
///
/// Reduction zeroes the coordinates at the pivot rows of a reduced column
/// echelon form of `M`, so the lexicographically earliest coordinates are
/// cleared first.
#[derive(Clone, Debug)]
pub struct QuotientReducer {
    /// Reduced column-echelon basis vectors with their pivot row.
    basis: Vec<(usize, Vec<Q>)>,
    /// For each basis vector, coefficients expressing it in columns of `M`.
    coeffs: Vec<Vec<Q>>,
    cols: usize,
}

impl QuotientReducer {
    pub fn new(m: &IntMatrix) -> Self {
        // rref of [Mᵀ | I] gives row-space basis of Mᵀ with transforms.
        let (r, c) = (m.rows(), m.cols());
        let mut aug = QMatrix::zeros(c, r + c);
        for i in 0..r {
            for j in 0..c {
                aug.set(j, i, Q::from_integer(m.get(i, j)));
            }
        }
        for j in 0..c {
            aug.set(j, r + j, Q::one());
        }
        let (red, pivots) = aug.rref();
        let mut basis = Vec::new();
        let mut coeffs = Vec::new();
        for (k, &p) in pivots.iter().enumerate() {
            if p >= r {
                break;
            }
            basis.push((p, (0..r).map(|i| red.get(k, i)).collect()));
            coeffs.push((0..c).map(|j| red.get(k, r + j)).collect());
        }
        QuotientReducer { basis, coeffs, cols: c }
    }

    /// Returns `(ρ, k)` with `ρ = v + M·k` reduced.
    pub fn reduce(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut rho = v.to_vec();
        let mut k = vec![Q::zero(); self.cols];
        for ((p, b), cf) in self.basis.iter().zip(&self.coeffs) {
            let t = rho[*p];
            if t.is_zero() {
                continue;
            }
            for (x, y) in rho.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= t * *y;
                }
            }
            for (x, y) in k.iter_mut().zip(cf) {
                if !y.is_zero() {
                    *x -= t * *y;
                }
            }
        }
        (rho, k)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith(&a, Track::ALL);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        let d = u.mul(&a).mul(v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(d.get(i, j), want);
            }
        }
        assert_eq!(u.mul(s.u_inv.as_ref().unwrap()), IntMatrix::identity(3));
        assert_eq!(v.mul(s.v_inv.as_ref().unwrap()), IntMatrix::identity(3));
    }

    #[test]
    fn hermite_and_integer_solve() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![2, 3]]);
        assert_eq!(solve_integer(&a, &[4, 9, 13]), Some(vec![2, 3]));
        assert_eq!(solve_integer(&a, &[1, 0, 1]), None);
        let h = hermite(&a);
        assert_eq!(h.u.mul(&a), h.h);
    }

    #[test]
    fn mixed_system() {
        // y + 2z = 1/2, z free integer, y rational: solvable
        let aq = IntMatrix::from_rows(&[vec![1]]);
        let az = IntMatrix::from_rows(&[vec![2]]);
        assert!(solve_mixed(&aq, &az, &[Q::new(1, 2)]).is_some());
        // 2z = 1/2 with no rational slack: not solvable
        let aq0 = IntMatrix::zeros(1, 0);
        assert!(solve_mixed(&aq0, &az, &[Q::new(1, 2)]).is_none());
        assert!(solve_mixed(&aq0, &az, &[Q::from_integer(4)]).is_some());
    }

    #[test]
    fn quotient_reduction() {
        let m = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let red = QuotientReducer::new(&m);
        let (rho, k) = red.reduce(&[Q::from_integer(3), Q::from_integer(5)]);
        assert_eq!(rho, vec![Q::zero(), Q::from_integer(2)]);
        assert_eq!(k, vec![Q::from_integer(-3)]);
    }
}

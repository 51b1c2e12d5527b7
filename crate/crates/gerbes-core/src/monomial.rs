//! Monomial unitary matrices with ℚ/ℤ phases, and small dense matrices over
//! cyclotomic numbers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{frac, Cyclo, Q};
use crate::error::{validation, Result};

/// `e_j ↦ e(phase_j) · e_{perm_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    phases: Vec<Q>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<usize>, phases: Vec<Q>) -> Result<Self> {
        let n = perm.len();
        if phases.len() != n {
            return validation(format!("{n} permutation entries but {} phases", phases.len()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return validation(format!("{perm:?} is not a permutation"));
            }
            seen[p] = true;
        }
        Ok(MonomialMatrix { perm, phases: phases.into_iter().map(frac).collect() })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMatrix { perm: (0..n).collect(), phases: vec![Q::zero(); n] }
    }

    /// Scalar `e(phase)` times the identity.
    pub fn scalar(n: usize, phase: Q) -> Self {
        MonomialMatrix { perm: (0..n).collect(), phases: vec![frac(phase); n] }
    }

    /// Clock matrix `diag(e(j/p))`.
    pub fn clock(p: usize) -> Self {
        MonomialMatrix { perm: (0..p).collect(), phases: (0..p).map(|j| Q::new(j as i128, p as i128)).collect() }
    }

    /// Shift matrix `e_j ↦ e_{j+1}`.
    pub fn shift(p: usize) -> Self {
        MonomialMatrix { perm: (0..p).map(|j| (j + 1) % p).collect(), phases: vec![Q::zero(); p] }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[Q] {
        &self.phases
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size(), "size mismatch");
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let phases = other.phases.iter().zip(&other.perm).map(|(ph, &j)| frac(*ph + self.phases[j])).collect();
        MonomialMatrix { perm, phases }
    }

    pub fn pow(&self, k: i128) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.size());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let n = self.size();
        let mut perm = vec![0; n];
        let mut phases = vec![Q::zero(); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = frac(-self.phases[j]);
        }
        MonomialMatrix { perm, phases }
    }

    /// Entrywise complex conjugate; equals the inverse transpose.
    pub fn conj(&self) -> Self {
        MonomialMatrix { perm: self.perm.clone(), phases: self.phases.iter().map(|p| frac(-*p)).collect() }
    }

    pub fn times_phase(&self, phase: Q) -> Self {
        MonomialMatrix { perm: self.perm.clone(), phases: self.phases.iter().map(|p| frac(*p + phase)).collect() }
    }

    /// Kronecker product; index `(i, j)` becomes `i · other.size() + j`.
    pub fn kron(&self, other: &Self) -> Self {
        let m = other.size();
        let mut perm = Vec::with_capacity(self.size() * m);
        let mut phases = Vec::with_capacity(self.size() * m);
        for i in 0..self.size() {
            for j in 0..m {
                perm.push(self.perm[i] * m + other.perm[j]);
                phases.push(frac(self.phases[i] + other.phases[j]));
            }
        }
        MonomialMatrix { perm, phases }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.size();
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|j| j + n));
        let mut phases = self.phases.clone();
        phases.extend(other.phases.iter().copied());
        MonomialMatrix { perm, phases }
    }

    /// `+1` for even permutations.
    pub fn parity_sign(&self) -> i128 {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut s = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    /// Determinant as a phase: `sign(π)·e(Σφ) = e(det_phase)`.
    pub fn det_phase(&self) -> Q {
        let half = if self.parity_sign() < 0 { Q::new(1, 2) } else { Q::zero() };
        frac(self.phases.iter().fold(half, |a, p| a + *p))
    }

    /// Permutation cycles with their total phase.
    pub fn cycles(&self) -> Vec<(Vec<usize>, Q)> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut total = Q::zero();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j);
                total += self.phases[j];
                j = self.perm[j];
            }
            out.push((cyc, frac(total)));
        }
        out
    }

    /// Trace: only fixed points contribute.
    pub fn trace(&self) -> Cyclo {
        let mut t = Cyclo::zero();
        for j in 0..self.size() {
            if self.perm[j] == j {
                t = t + Cyclo::root(self.phases[j]);
            }
        }
        t
    }

    /// Restriction to a set of coordinates mapped onto another, in order.
    pub(crate) fn restrict(&self, from: &[usize], onto: &[usize]) -> Option<Self> {
        let mut perm = Vec::with_capacity(from.len());
        let mut phases = Vec::with_capacity(from.len());
        for &j in from {
            let pos = onto.iter().position(|&k| k == self.perm[j])?;
            perm.push(pos);
            phases.push(self.phases[j]);
        }
        Some(MonomialMatrix { perm, phases })
    }

    pub fn to_dense(&self) -> CycloMatrix {
        let n = self.size();
        let mut m = CycloMatrix::zeros(n, n);
        for j in 0..n {
            m.set(self.perm[j], j, Cyclo::root(self.phases[j]));
        }
        m
    }

    /// Reindexes rows and columns by a permutation `σ`: the result is
    /// `P_σ · self · P_σ⁻¹` with `P_σ e_j = e_{σ_j}`.
    pub fn conjugate_by(&self, sigma: &[usize]) -> Self {
        let n = self.size();
        let mut perm = vec![0; n];
        let mut phases = vec![Q::zero(); n];
        for j in 0..n {
            perm[sigma[j]] = sigma[self.perm[j]];
            phases[sigma[j]] = self.phases[j];
        }
        MonomialMatrix { perm, phases }
    }
}

impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for j in 0..self.size() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}→{} e({})", j, self.perm[j], self.phases[j])?;
        }
        write!(f, "]")
    }
}

/// Dense matrix over the cyclotomic numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclo>,
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycloMatrix { rows, cols, data: vec![Cyclo::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Cyclo::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// `self · m` for a monomial `m`.
    pub fn mul_monomial(&self, m: &MonomialMatrix) -> Self {
        assert_eq!(self.cols, m.size(), "shape mismatch");
        let mut out = Self::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let col = m.perm[j];
            for i in 0..self.rows {
                out.set(i, j, self.get(i, col).rotate(m.phases[j]));
            }
        }
        out
    }

    /// `m · self` for a monomial `m`.
    pub fn monomial_mul(m: &MonomialMatrix, a: &Self) -> Self {
        assert_eq!(m.size(), a.rows, "shape mismatch");
        let mut out = Self::zeros(a.rows, a.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(m.perm[i], j, a.get(i, j).rotate(m.phases[i]));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        CycloMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn trace(&self) -> Cyclo {
        (0..self.rows.min(self.cols)).fold(Cyclo::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Zero-one permutation matrix sending `e_j` to `e_{σ_j}`.
    pub fn permutation(sigma: &[usize]) -> Self {
        let n = sigma.len();
        let mut m = Self::zeros(n, n);
        for (j, &s) in sigma.iter().enumerate() {
            m.set(s, j, Cyclo::one());
        }
        m
    }

    /// Determinant by cofactor expansion (small sizes only).
    pub fn det(&self) -> Cyclo {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> Cyclo {
        if cols.is_empty() {
            return Cyclo::one();
        }
        let mut acc = Cyclo::zero();
        for (pos, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.minor_det(&rest, row + 1);
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Rational scalar if every diagonal entry equals it and all others vanish.
    pub fn as_scalar(&self) -> Option<Cyclo> {
        if self.rows != self.cols {
            return None;
        }
        let d = if self.rows == 0 { Cyclo::one() } else { self.get(0, 0).clone() };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == d } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_relation() {
        let z = MonomialMatrix::clock(3);
        let x = MonomialMatrix::shift(3);
        // Z X = e(1/3) X Z
        assert_eq!(z.compose(&x), x.compose(&z).times_phase(Q::new(1, 3)));
        assert_eq!(x.pow(3), MonomialMatrix::identity(3));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = MonomialMatrix::new(vec![1, 0, 2], vec![Q::new(1, 4), Q::zero(), Q::new(1, 3)]).unwrap();
        assert_eq!(m.compose(&m.inverse()), MonomialMatrix::identity(3));
        assert_eq!(Cyclo::root(m.det_phase()), m.to_dense().det());
        assert!(MonomialMatrix::new(vec![0, 0], vec![Q::zero(); 2]).is_err());
    }
}

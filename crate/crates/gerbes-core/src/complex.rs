//! Finite oriented simplicial complexes.

use core::cmp::Ordering;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::sign;
use crate::error::{validation, Error, Result};
use crate::linalg::IntMatrix;

/// A simplex as its strictly increasing list of vertex ids.
pub type Simplex = Vec<u32>;

/// Removes the `i`-th vertex.
pub fn face(s: &[u32], i: usize) -> Simplex {
    let mut f = s.to_vec();
    f.remove(i);
    f
}

/// Union of two sorted simplices.
pub fn union(a: &[u32], b: &[u32]) -> Simplex {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Inserts `v` into a sorted simplex, returning the new simplex and the
/// position of `v`, or `None` if `v` is already a vertex.
pub fn insert_vertex(s: &[u32], v: u32) -> Option<(Simplex, usize)> {
    match s.binary_search(&v) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = s.to_vec();
            out.insert(pos, v);
            Some((out, pos))
        }
    }
}

/// Sorts a vertex tuple. Returns the sorted simplex and the sign of the
/// sorting permutation, or `None` if a vertex repeats.
pub fn sort_with_sign(tuple: &[u32]) -> Option<(Simplex, i128)> {
    let mut v = tuple.to_vec();
    let mut s = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            s = -s;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, s))
    }
}

/// A finite abstract simplicial complex closed under taking faces.
///
/// Simplices of each dimension are kept in lexicographic order; their
/// position in that order is the basis index used by every matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<u32>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
    /// `cofaces[d][i]`: `(j, sign)` for every `(d+1)`-simplex `j` having
    /// simplex `i` as a face, with its incidence sign.
    cofaces: Vec<Vec<Vec<(usize, i128)>>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of a list of simplices.
    pub fn build(raw: &[Vec<u32>]) -> Result<Self> {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for t in raw {
            if t.is_empty() {
                return validation("empty simplex");
            }
            let Some((s, _)) = sort_with_sign(t) else {
                return validation(format!("repeated vertex in {t:?}"));
            };
            if all.contains(&s) {
                continue;
            }
            // enumerate all nonempty subsets
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Simplex = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                all.insert(sub);
            }
        }
        Ok(Self::from_closed(all))
    }

    fn from_closed(all: BTreeSet<Simplex>) -> Self {
        let dim = all.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); dim];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for layer in &mut by_dim {
            layer.sort();
        }
        let index: Vec<BTreeMap<Simplex, usize>> = by_dim
            .iter()
            .map(|layer| layer.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut cofaces: Vec<Vec<Vec<(usize, i128)>>> =
            by_dim.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for d in 1..by_dim.len() {
            for (j, t) in by_dim[d].iter().enumerate() {
                for i in 0..t.len() {
                    let f = face(t, i);
                    let fi = index[d - 1][&f];
                    cofaces[d - 1][fi].push((j, sign(i)));
                }
            }
        }
        let vertices = by_dim.first().map(|l| l.iter().map(|s| s[0]).collect()).unwrap_or_default();
        SimplicialComplex { vertices, by_dim, index, cofaces }
    }

    /// Maximal simplices, in dimension then lexicographic order.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, layer) in self.by_dim.iter().enumerate() {
            for (i, s) in layer.iter().enumerate() {
                let is_max = self.cofaces[d][i].is_empty();
                if is_max {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Dimension; the empty complex reports 0.
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map_or(&[], |l| l.as_slice())
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|l| l.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, l)| sign(d) as i64 * l.len() as i64).sum()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    pub(crate) fn require(&self, s: &[u32]) -> Result<usize> {
        self.index_of(s).ok_or_else(|| Error::MissingSimplex(s.to_vec()))
    }

    /// `(d+1)`-simplices containing the `d`-simplex `s`, with incidence sign.
    pub fn cofaces(&self, s: &[u32]) -> impl Iterator<Item = (&Simplex, i128)> + '_ {
        let d = s.len().wrapping_sub(1);
        let list: &[(usize, i128)] = match self.index_of(s) {
            Some(i) => &self.cofaces[d][i],
            None => &[],
        };
        list.iter().map(move |(j, sg)| (&self.by_dim[d + 1][*j], *sg))
    }

    /// Matrix of `δ: C^q → C^{q+1}`, rows indexed by `(q+1)`-simplices.
    pub fn coboundary_matrix(&self, q: usize) -> Result<IntMatrix> {
        if q > self.dim() {
            return Err(Error::Degree(format!("coboundary degree {q} exceeds dimension {}", self.dim())));
        }
        let rows = self.count(q + 1);
        let mut m = IntMatrix::zeros(rows, self.count(q));
        for (j, t) in self.simplices(q + 1).iter().enumerate() {
            for i in 0..t.len() {
                let f = face(t, i);
                m.set(j, self.index[q][&f], sign(i));
            }
        }
        Ok(m)
    }

    /// Matrix of `∂: C_q → C_{q−1}` (the transpose of `δ^{q−1}`).
    pub fn boundary_matrix(&self, q: usize) -> Result<IntMatrix> {
        if q == 0 {
            return Ok(IntMatrix::zeros(0, self.count(0)));
        }
        Ok(self.coboundary_matrix(q - 1)?.transpose())
    }

    /// True iff `t` lies in the closed star of `s`.
    pub fn in_star(&self, s: &[u32], t: &[u32]) -> bool {
        self.contains(&union(s, t))
    }

    /// The `q`-simplices of the closed star of `s`.
    pub fn star_simplices(&self, s: &[u32], q: usize) -> Vec<Simplex> {
        let Some(i) = self.index_of(s) else { return Vec::new() };
        // simplices containing s, level by level through the coface table
        let mut level = BTreeSet::from([i]);
        let mut containing = Vec::new();
        let mut d = s.len() - 1;
        while !level.is_empty() {
            containing.extend(level.iter().map(|&j| &self.by_dim[d][j]));
            let next: BTreeSet<usize> = match self.cofaces.get(d) {
                Some(table) => level.iter().flat_map(|&j| table[j].iter().map(|(c, _)| *c)).collect(),
                None => BTreeSet::new(),
            };
            level = next;
            d += 1;
        }
        let mut found = BTreeSet::new();
        for u in containing {
            if u.len() < q + 1 {
                continue;
            }
            for mask in 0u32..(1 << u.len()) {
                if mask.count_ones() as usize == q + 1 {
                    let t: Simplex = (0..u.len()).filter(|b| mask >> b & 1 == 1).map(|b| u[b]).collect();
                    found.insert(self.index[q][&t]);
                }
            }
        }
        found.into_iter().map(|j| self.by_dim[q][j].clone()).collect()
    }

    /// Closed star of `s`: all simplices `t` with `s ∪ t` in the complex.
    pub fn closed_star(&self, s: &[u32]) -> Result<SimplicialComplex> {
        self.require(s)?;
        let mut all = BTreeSet::new();
        for layer in &self.by_dim {
            for t in layer {
                if self.in_star(s, t) {
                    all.insert(t.clone());
                }
            }
        }
        Ok(Self::from_closed(all))
    }

    /// Subcomplex spanned by the given simplices (and their faces).
    pub fn subcomplex(&self, simplices: &[Simplex]) -> Result<SimplicialComplex> {
        for s in simplices {
            self.require(s)?;
        }
        SimplicialComplex::build(simplices)
    }

    /// Checks that a vertex map sends every simplex onto a simplex of
    /// `target` (possibly of lower dimension).
    pub fn check_simplicial_map(&self, target: &SimplicialComplex, map: &BTreeMap<u32, u32>) -> Result<()> {
        for v in &self.vertices {
            if !map.contains_key(v) {
                return validation(format!("vertex map misses vertex {v}"));
            }
        }
        for s in self.maximal_simplices() {
            let img: BTreeSet<u32> = s.iter().map(|v| map[v]).collect();
            let img: Simplex = img.into_iter().collect();
            if !target.contains(&img) {
                return validation(format!("image of {s:?} is not a simplex"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_counts() {
        let k = SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
        assert_eq!(k.euler_characteristic(), 2);
        assert!(SimplicialComplex::build(&[vec![0, 0]]).is_err());
    }

    #[test]
    fn star_of_vertex() {
        let k = SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        let st = k.closed_star(&[0]).unwrap();
        assert_eq!(st.simplices(2), &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]);
        assert!(matches!(k.closed_star(&[7]), Err(Error::MissingSimplex(_))));
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}

//! Finite simplicial complexes: Vietoris–Rips and clique complexes, full
//! subcomplexes, unions and intersections.

use crate::cyclic::Graph;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::number::Rational;
use std::collections::HashMap;

/// Which inequality defines a VR simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `diam(σ) < r`.
    #[default]
    Open,
    /// `diam(σ) ≤ r`.
    Closed,
}

/// A simplicial complex on vertices `0..n`, stored by dimension.
///
/// Simplices are sorted vertex lists; each dimension is sorted lexicographically.
/// Complexes built from graphs hold every simplex up to `exact_through + 1`, so
/// homology is exact in degrees `0..=exact_through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    exact_through: usize,
}

impl SimplicialComplex {
    /// Builds a complex from explicit simplices of dimension `≤ top`, adding all faces.
    pub fn from_simplices(n: usize, simplices: &[Vec<usize>], exact_through: usize) -> Result<Self> {
        let top = exact_through + 1;
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); top + 1];
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.iter().any(|&v| v >= n) {
                return Err(Error::Structural("simplex with a vertex outside the complex".into()));
            }
            for face in subsets(&s) {
                let d = face.len() - 1;
                if d <= top {
                    by_dim[d].insert(face);
                }
            }
        }
        Ok(Self {
            n,
            simplices: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
            exact_through,
        })
    }

    /// Number of vertex slots (vertices may be absent from the complex).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest degree in which homology is exact.
    pub fn exact_through(&self) -> usize {
        self.exact_through
    }

    /// Simplices of dimension `k` (empty above the stored range).
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Highest stored dimension.
    pub fn top_dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// Vertices present in the complex.
    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    /// Number of simplices per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Index of each simplex of dimension `k`.
    pub fn index(&self, k: usize) -> HashMap<&[usize], usize> {
        self.simplices(k).iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect()
    }

    /// True when `s` (sorted) is a simplex.
    pub fn contains(&self, s: &[usize]) -> bool {
        s.len().checked_sub(1).is_some_and(|k| self.simplices(k).binary_search_by(|x| x.as_slice().cmp(s)).is_ok())
    }

    /// True when every simplex of `self` (up to its stored dimension) lies in `other`.
    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.simplices.iter().flatten().all(|s| s.len() > other.simplices.len() || other.contains(s))
    }

    /// The union of two complexes on the same vertex slots.
    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    /// The intersection of two complexes on the same vertex slots.
    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let top = self.top_dim().min(other.top_dim());
        let mut simplices = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut all: Vec<Vec<usize>> =
                self.simplices(k).iter().chain(other.simplices(k)).cloned().collect();
            all.sort();
            all.dedup();
            all.retain(|s| keep(self.contains(s), other.contains(s)));
            simplices.push(all);
        }
        Self { n: self.n.max(other.n), simplices, exact_through: top.saturating_sub(1) }
    }

    /// The subcomplex of simplices with every vertex in `vertices`.
    pub fn full_subcomplex(&self, vertices: &[usize]) -> Self {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let simplices = self
            .simplices
            .iter()
            .map(|dim| dim.iter().filter(|s| s.iter().all(|&v| inside[v])).cloned().collect())
            .collect();
        Self { n: self.n, simplices, exact_through: self.exact_through }
    }

    /// Alternating count of simplices in dimensions `0..=k`.
    pub fn euler_characteristic(&self, k: usize) -> i64 {
        (0..=k.min(self.top_dim()))
            .map(|d| if d % 2 == 0 { 1 } else { -1 } * self.simplices(d).len() as i64)
            .sum()
    }
}

fn subsets(s: &[usize]) -> Vec<Vec<usize>> {
    let m = s.len();
    (1u32..1 << m)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect())
        .collect()
}

/// The clique complex of `g` with simplices up to dimension `maxdim + 1`.
pub fn clique_complex(g: &Graph, maxdim: usize) -> SimplicialComplex {
    let n = g.n();
    let top = maxdim + 1;
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    fn grow(
        clique: &mut Vec<usize>,
        candidates: &[usize],
        nbrs: &[Vec<usize>],
        top: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        out[clique.len() - 1].push(clique.clone());
        if clique.len() > top {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<usize> =
                candidates[i + 1..].iter().copied().filter(|w| nbrs[v].binary_search(w).is_ok()).collect();
            clique.push(v);
            grow(clique, &next, nbrs, top, out);
            clique.pop();
        }
    }
    for v in 0..n {
        let higher: Vec<usize> = nbrs[v].iter().copied().filter(|&w| w > v).collect();
        grow(&mut vec![v], &higher, &nbrs, top, &mut simplices);
    }
    for dim in simplices.iter_mut() {
        dim.sort();
    }
    SimplicialComplex { n, simplices, exact_through: maxdim }
}

/// The Vietoris–Rips complex of `m` at scale `r`, up to dimension `maxdim + 1`.
pub fn vr_complex(m: &DistanceMatrix, r: &Rational, maxdim: usize, convention: Convention) -> SimplicialComplex {
    clique_complex(&vr_graph(m, r, convention), maxdim)
}

/// The 1-skeleton of `VR_r(m)` under the given convention.
pub fn vr_graph(m: &DistanceMatrix, r: &Rational, convention: Convention) -> Graph {
    let n = m.n();
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            let d = m.get(a, b);
            let inside = match convention {
                Convention::Open => d < r,
                Convention::Closed => d <= r,
            };
            if inside {
                g.add_edge(a, b);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::int;

    #[test]
    fn hexagon_at_nine_misses_only_diagonals() {
        let c = vr_complex(&fixtures::hexagon(), &int(9), 1, Convention::Open);
        let edges = c.simplices(1);
        assert_eq!(edges.len(), 12);
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            assert!(!c.contains(&[a, b]));
        }
    }

    #[test]
    fn small_radius_gives_vertices_only() {
        let c = vr_complex(&fixtures::hexagon(), &int(5), 2, Convention::Open);
        assert_eq!(c.counts(), vec![6, 0, 0, 0]);
        let c = vr_complex(&fixtures::hexagon(), &int(5), 2, Convention::Closed);
        assert_eq!(c.counts()[1], 6);
    }

    #[test]
    fn triangle_is_filled() {
        let c = clique_complex(&Graph::complete(3), 2);
        assert_eq!(c.counts(), vec![3, 3, 1, 0]);
        assert_eq!(c.euler_characteristic(3), 1);
    }

    #[test]
    fn set_operations() {
        let a = SimplicialComplex::from_simplices(4, &[vec![0, 1, 2]], 1).unwrap();
        let b = SimplicialComplex::from_simplices(4, &[vec![1, 2, 3]], 1).unwrap();
        let i = a.intersection(&b);
        assert_eq!(i.counts(), vec![2, 1, 0]);
        let u = a.union(&b);
        assert_eq!(u.counts(), vec![4, 5, 2]);
        assert!(i.is_subcomplex_of(&a));
        assert!(a.full_subcomplex(&[0, 1]).is_subcomplex_of(&a));
    }
}

//! Cyclic graphs: orientation against a map `M`, dismantling by dominated-vertex
//! removal, the winding fraction of the terminal circulant and the homotopy type
//! of the clique complex.

use crate::error::{Error, Result};
use crate::metric::{Cycle, DistanceMatrix};
use crate::number::Rational;
use num::BigInt;
use serde::Serialize;
use serde::ser::{SerializeMap, Serializer};
use std::fmt;

/// A simple undirected graph on `0..n` stored as adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words] }
    }

    /// Builds a graph from an edge list (0-based).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// The open threshold graph: `{a, b}` is an edge when `d(a, b) < r`.
    pub fn threshold(m: &DistanceMatrix, r: &Rational) -> Self {
        let n = m.n();
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                if m.get(a, b) < r {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// The circulant `C_n^k`: `i` is adjacent to `i ± 1, …, i ± k` modulo `n`.
    pub fn circulant(n: usize, k: usize) -> Self {
        let mut g = Self::empty(n);
        let cyc = Cycle::new(n);
        for i in 0..n {
            for j in 1..=k {
                let b = cyc.add(i, j);
                if b != i {
                    g.add_edge(i, b);
                }
            }
        }
        g
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds the edge `{a, b}` (loops are ignored).
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.bits[a * self.words + b / 64] |= 1 << (b % 64);
            self.bits[b * self.words + a / 64] |= 1 << (a % 64);
        }
    }

    /// Removes the edge `{a, b}`.
    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] &= !(1 << (b % 64));
        self.bits[b * self.words + a / 64] &= !(1 << (a % 64));
    }

    /// True when `{a, b}` is an edge.
    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    /// Neighbours of `a`, ascending.
    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        (0..self.n).filter(|&b| self.has_edge(a, b)).collect()
    }

    /// Degree of `a`.
    pub fn degree(&self, a: usize) -> usize {
        self.bits[a * self.words..(a + 1) * self.words].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    /// The induced subgraph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// A vertex adjacent to every other vertex, if any.
    pub fn cone_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&a| self.degree(a) + 1 == self.n)
    }

    fn closed_nbhd(&self, a: usize) -> Vec<u64> {
        let mut row = self.bits[a * self.words..(a + 1) * self.words].to_vec();
        row[a / 64] |= 1 << (a % 64);
        row
    }
}

/// Why a graph and a map `M` fail to form a cyclic graph. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientationFailure {
    /// The map has a fixed point `M(a) = a`.
    FixedPoint { a: usize },
    /// `a ≺ b ⪯ M(a)` but not `M(b) ⪯ a ≺ b`, or the symmetric implication fails.
    MapInconsistent { a: usize, b: usize },
    /// Edge `{a, b}` can be oriented both ways, which happens exactly for cones.
    Ambiguous { a: usize, b: usize },
    /// Edge `{a, b}` fits neither orientation.
    Unoriented { a: usize, b: usize },
    /// Edge `a → b` is present but `{a+1, b}` or `{a, b-1}` is missing.
    MissingChord { a: usize, b: usize },
}

impl fmt::Display for OrientationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FixedPoint { a } => write!(f, "M({}) = {}", a + 1, a + 1),
            Self::MapInconsistent { a, b } => {
                write!(f, "map orientation inconsistent at ({}, {})", a + 1, b + 1)
            }
            Self::Ambiguous { a, b } => write!(f, "ambiguous orientation at ({}, {})", a + 1, b + 1),
            Self::Unoriented { a, b } => write!(f, "edge ({}, {}) has no orientation", a + 1, b + 1),
            Self::MissingChord { a, b } => {
                write!(f, "edge ({}, {}) lacks a required neighbour edge", a + 1, b + 1)
            }
        }
    }
}

/// A graph with a cyclic order `0 ≺ 1 ≺ … ≺ n-1` and a compatible map `M`.
#[derive(Clone, Debug)]
pub struct CyclicGraph {
    /// Underlying graph.
    pub graph: Graph,
    /// The orientation map, 0-based.
    pub m: Vec<usize>,
}

/// Checks the three cyclic-graph invariants and orients every edge.
pub fn orient_and_check(g: &Graph, m: &[usize]) -> std::result::Result<CyclicGraph, OrientationFailure> {
    let n = g.n();
    let cyc = Cycle::new(n);
    if let Some(a) = (0..n).find(|&a| m[a] == a) {
        return Err(OrientationFailure::FixedPoint { a });
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if cyc.between_right_closed(a, b, m[a]) && !cyc.chain(&[m[b], a, b], &[false, true]) {
                return Err(OrientationFailure::MapInconsistent { a, b });
            }
            if m[b] != a
                && cyc.between(m[b], a, b)
                && !cyc.between_right_closed(a, b, m[a])
            {
                return Err(OrientationFailure::MapInconsistent { a, b });
            }
        }
    }
    for (x, y) in g.edges() {
        let fwd = cyc.between_right_closed(x, y, m[x]);
        let bwd = cyc.between_right_closed(y, x, m[y]);
        let (a, b) = match (fwd, bwd) {
            (true, true) => return Err(OrientationFailure::Ambiguous { a: x, b: y }),
            (false, false) => return Err(OrientationFailure::Unoriented { a: x, b: y }),
            (true, false) => (x, y),
            (false, true) => (y, x),
        };
        if b != cyc.next(a) && !(g.has_edge(cyc.next(a), b) && g.has_edge(a, cyc.prev(b))) {
            return Err(OrientationFailure::MissingChord { a, b });
        }
    }
    Ok(CyclicGraph { graph: g.clone(), m: m.to_vec() })
}

/// Result of dismantling: the removal sequence and the surviving vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dismantling {
    /// Removed vertices in removal order (original labels).
    pub removed: Vec<usize>,
    /// Surviving vertices, ascending (original labels).
    pub kept: Vec<usize>,
}

/// Repeatedly removes the smallest vertex `v` whose closed neighbourhood is contained
/// in the closed neighbourhood of some other vertex `u` (necessarily adjacent to `v`).
pub fn dismantle(g: &Graph) -> Dismantling {
    let n = g.n();
    let words = g.words;
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    let nbhd: Vec<Vec<u64>> = (0..n).map(|v| g.closed_nbhd(v)).collect();
    let masked = |v: usize, alive: &[u64]| -> Vec<u64> {
        nbhd[v].iter().zip(alive).map(|(a, b)| a & b).collect()
    };
    let is_alive = |v: usize, alive: &[u64]| alive[v / 64] >> (v % 64) & 1 == 1;
    let mut removed = Vec::new();
    loop {
        let mut victim = None;
        'outer: for v in 0..n {
            if !is_alive(v, &alive) {
                continue;
            }
            let nv = masked(v, &alive);
            for u in 0..n {
                if u == v || !is_alive(u, &alive) || !g.has_edge(u, v) {
                    continue;
                }
                let nu = masked(u, &alive);
                if nv.iter().zip(&nu).all(|(a, b)| a & !b == 0) {
                    victim = Some(v);
                    break 'outer;
                }
            }
        }
        match victim {
            Some(v) => {
                alive[v / 64] &= !(1 << (v % 64));
                removed.push(v);
            }
            None => break,
        }
    }
    let kept = (0..n).filter(|&v| is_alive(v, &alive)).collect();
    Dismantling { removed, kept }
}

/// A terminal graph recognised as the circulant `C_{n}^{k}` in the inherited order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Circulant {
    /// Number of vertices `n'`.
    pub n: usize,
    /// Step `k'` (`0` for an edgeless terminal graph).
    pub k: usize,
}

impl Circulant {
    /// Winding fraction `k'/n'`, undefined for a single vertex.
    pub fn winding_fraction(&self) -> Option<Rational> {
        (self.n > 1).then(|| Rational::new(BigInt::from(self.k), BigInt::from(self.n)))
    }
}

/// Recognises `g` (already relabelled in cyclic order) as some `C_n^k` with `2k < n`,
/// or a single vertex.
pub fn recognize_circulant(g: &Graph) -> Option<Circulant> {
    let n = g.n();
    if n <= 1 {
        return Some(Circulant { n, k: 0 });
    }
    let deg = g.degree(0);
    if deg % 2 == 1 || deg >= n - 1 {
        return None;
    }
    let k = deg / 2;
    (*g == Graph::circulant(n, k)).then_some(Circulant { n, k })
}

/// Dismantles `g` and recognises the terminal graph.
pub fn terminal_circulant(g: &Graph) -> Result<(Dismantling, Circulant)> {
    let d = dismantle(g);
    let terminal = g.induced(&d.kept);
    let c = recognize_circulant(&terminal).ok_or_else(|| {
        Error::Internal(format!(
            "dismantled graph on {} vertices is not a circulant",
            d.kept.len()
        ))
    })?;
    Ok((d, c))
}

/// Winding fraction of a cyclic graph, `None` when it dismantles to a vertex.
pub fn winding_fraction(g: &Graph) -> Result<Option<Rational>> {
    let (_, c) = terminal_circulant(g)?;
    Ok(if c.n <= 1 { None } else { c.winding_fraction() })
}

/// Homotopy type of a clique complex (or of a VR complex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyType {
    /// The odd sphere `S^{2l+1}`.
    OddSphere(usize),
    /// A wedge of `count` copies of `S^{2l}`; `l = 0` means `count + 1` points.
    WedgeEvenSpheres(usize, usize),
    /// A point.
    Contractible,
    /// `count` isolated points.
    Discrete(usize),
    /// `base` together with `isolated` extra isolated points.
    DisjointAugmented(Box<HomotopyType>, usize),
}

impl HomotopyType {
    /// Rank of the unreduced homology in degree `k` (any coefficient field).
    pub fn betti(&self, k: usize) -> usize {
        match self {
            Self::OddSphere(l) => usize::from(k == 0 || k == 2 * l + 1),
            Self::WedgeEvenSpheres(0, c) => if k == 0 { c + 1 } else { 0 },
            Self::WedgeEvenSpheres(l, c) => {
                if k == 0 {
                    1
                } else if k == 2 * l {
                    *c
                } else {
                    0
                }
            }
            Self::Contractible => usize::from(k == 0),
            Self::Discrete(c) => if k == 0 { *c } else { 0 },
            Self::DisjointAugmented(base, extra) => base.betti(k) + if k == 0 { *extra } else { 0 },
        }
    }

    /// Betti numbers in degrees `0..=maxdim`.
    pub fn betti_numbers(&self, maxdim: usize) -> Vec<usize> {
        (0..=maxdim).map(|k| self.betti(k)).collect()
    }

    /// Adds `extra` isolated points, folding discrete and contractible bases.
    pub fn with_isolated(self, extra: usize) -> Self {
        match (self, extra) {
            (t, 0) => t,
            (Self::Discrete(c), e) => Self::Discrete(c + e),
            (Self::Contractible, e) => Self::Discrete(1 + e),
            (Self::DisjointAugmented(b, c), e) => Self::DisjointAugmented(b, c + e),
            (t, e) => Self::DisjointAugmented(Box::new(t), e),
        }
    }

    fn parts(&self) -> (&'static str, usize, usize) {
        match self {
            Self::OddSphere(l) => ("sphere", 2 * l + 1, 1),
            Self::WedgeEvenSpheres(l, c) => ("wedge_even_spheres", 2 * l, *c),
            Self::Contractible => ("contractible", 0, 1),
            Self::Discrete(c) => ("discrete", 0, *c),
            Self::DisjointAugmented(..) => ("disjoint_augmented", 0, 0),
        }
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddSphere(l) => write!(f, "S^{}", 2 * l + 1),
            Self::WedgeEvenSpheres(l, 1) => write!(f, "S^{}", 2 * l),
            Self::WedgeEvenSpheres(l, c) => write!(f, "wedge of {c} copies of S^{}", 2 * l),
            Self::Contractible => write!(f, "contractible"),
            Self::Discrete(c) => write!(f, "{c} points"),
            Self::DisjointAugmented(b, e) => write!(f, "({b}) + {e} isolated points"),
        }
    }
}

impl Serialize for HomotopyType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, dim, count) = self.parts();
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("kind", kind)?;
        match self {
            Self::DisjointAugmented(base, extra) => {
                map.serialize_entry("base", base.as_ref())?;
                map.serialize_entry("isolated", extra)?;
            }
            _ => {
                map.serialize_entry("dim", &dim)?;
                map.serialize_entry("count", &count)?;
            }
        }
        map.end()
    }
}

/// Homotopy type of a circulant clique complex `Cl(C_n^k)`, `2k < n`.
pub fn circulant_type(c: Circulant) -> HomotopyType {
    if c.n <= 1 {
        return HomotopyType::Contractible;
    }
    if c.k == 0 {
        return HomotopyType::Discrete(c.n);
    }
    let gap = c.n - 2 * c.k;
    let l = c.k / gap;
    if l * gap == c.k {
        HomotopyType::WedgeEvenSpheres(l, gap - 1)
    } else {
        HomotopyType::OddSphere(l)
    }
}

/// Homotopy type of `Cl(g)` for a cyclic graph `g`, through dismantling.
pub fn classify(g: &Graph) -> Result<HomotopyType> {
    if g.n() == 0 {
        return Ok(HomotopyType::Discrete(0));
    }
    let (_, c) = terminal_circulant(g)?;
    Ok(circulant_type(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::frac;

    #[test]
    fn dismantling_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(dismantle(&k5).kept.len(), 1);
        assert_eq!(recognize_circulant(&Graph::circulant(5, 2)), None);
        let c61 = Graph::circulant(6, 1);
        assert_eq!(dismantle(&c61).kept, (0..6).collect::<Vec<_>>());
        let c72 = Graph::circulant(7, 2);
        assert_eq!(dismantle(&c72).kept.len(), 7);
        assert_eq!(recognize_circulant(&c72), Some(Circulant { n: 7, k: 2 }));
    }

    #[test]
    fn winding_fractions() {
        assert_eq!(winding_fraction(&Graph::circulant(6, 1)).unwrap(), Some(frac(1, 6)));
        assert_eq!(winding_fraction(&Graph::circulant(6, 2)).unwrap(), Some(frac(1, 3)));
        assert_eq!(winding_fraction(&Graph::complete(5)).unwrap(), None);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&Graph::circulant(6, 1)).unwrap(), HomotopyType::OddSphere(0));
        assert_eq!(
            classify(&Graph::circulant(6, 2)).unwrap(),
            HomotopyType::WedgeEvenSpheres(1, 1)
        );
        assert_eq!(classify(&Graph::complete(5)).unwrap(), HomotopyType::Contractible);
        assert_eq!(classify(&Graph::empty(4)).unwrap(), HomotopyType::Discrete(4));
        assert_eq!(classify(&Graph::circulant(7, 2)).unwrap(), HomotopyType::OddSphere(0));
        assert_eq!(classify(&Graph::circulant(9, 3)).unwrap(), HomotopyType::WedgeEvenSpheres(1, 2));
    }

    #[test]
    fn betti_examples() {
        assert_eq!(HomotopyType::OddSphere(1).betti(3), 1);
        assert_eq!(HomotopyType::OddSphere(1).betti(1), 0);
        assert_eq!(HomotopyType::WedgeEvenSpheres(1, 3).betti(2), 3);
        assert_eq!(HomotopyType::Contractible.betti(0), 1);
        assert_eq!(HomotopyType::Contractible.betti(2), 0);
        assert_eq!(HomotopyType::Discrete(3).betti(0), 3);
        let aug = HomotopyType::OddSphere(0).with_isolated(2);
        assert_eq!(aug.betti_numbers(2), vec![3, 1, 0]);
    }

    #[test]
    fn orientation_examples() {
        let c6 = Graph::circulant(6, 1);
        let m: Vec<usize> = (0..6).map(|a| (a + 3) % 6).collect();
        assert!(orient_and_check(&c6, &m).is_ok());
        assert!(matches!(
            orient_and_check(&Graph::complete(6), &m),
            Err(OrientationFailure::Ambiguous { .. })
        ));
        let mut g = Graph::circulant(6, 1);
        g.add_edge(0, 2);
        g.remove_edge(1, 2);
        assert!(matches!(orient_and_check(&g, &m), Err(OrientationFailure::MissingChord { .. })));
    }

    #[test]
    fn homotopy_type_json() {
        let v = serde_json::to_value(HomotopyType::OddSphere(0)).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "sphere", "dim": 1, "count": 1}));
        let v = serde_json::to_value(HomotopyType::WedgeEvenSpheres(1, 3)).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "wedge_even_spheres", "dim": 2, "count": 3}));
    }
}

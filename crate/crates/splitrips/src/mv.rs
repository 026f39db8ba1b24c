//! Homology of `VR_r` for circular decomposable metrics that need not be monotone.
//!
//! The 1-skeleton `G_X` of `V_X = VR_r(X)` splits into the offending edges `E_X`
//! and the cyclic remainder `G_X^c`. With `Y` the vertex set of the closed star of
//! `E_X`, the complex is the union `V_X = V_X^c ∪ V_Y` of the cyclic component
//! `V_X^c = Cl(G_X^c)` and the full subcomplex `V_Y` on `Y`, which meet in the cyclic
//! complex `V_Y' = Cl(G_X^c[Y])`. The Mayer–Vietoris sequence over a field gives
//!
//! `β_k(V_X) = β_k(V_X^c) + β_k(V_Y) − rank φ_k + β_{k−1}(V_Y') − rank φ_{k−1}`
//!
//! where `φ_k = (ι_X, ι_Y): H_k(V_Y') → H_k(V_X^c) ⊕ H_k(V_Y)`. `H_*(V_X^c)` comes
//! from the winding fraction, `H_*(V_Y)` from recursion on `Y`.
//!
//! Every function here expects the metric in its circular order (identity order).
//! Radii use the open convention `d < r` throughout.

use crate::complex::{SimplicialComplex, clique_complex};
use crate::cyclic::{self, Graph, HomotopyType};
use crate::error::Result;
use crate::field::{Field, FieldTag};
use crate::homology::{homology_ranks, induced_matrix};
use crate::linalg::{Vector, rank};
use crate::metric::{Cycle, DistanceMatrix};
use crate::number::{Rational, format_rational};
use crate::with_field;
use serde::Serialize;

/// Default recursion guard for [`mv_homology`].
pub const DEFAULT_MAX_DEPTH: usize = 8;

/// `M_r(a)`: the last `b` in `a+1, …, a-1` such that `d(c, e) < r` for all
/// `a ⪯ c ≺ e ⪯ b`. Returns `a` itself when already `d(a, a+1) ≥ r`.
pub fn m_r(m: &DistanceMatrix, r: &Rational, a: usize) -> usize {
    let n = m.n();
    let cyc = Cycle::new(n);
    let mut best = a;
    for step in 1..n {
        let b = cyc.add(a, step);
        let ok = cyc.arc(a, cyc.prev(b)).all(|c| m.get(c, b) < r);
        if !ok {
            break;
        }
        best = b;
    }
    best
}

/// `M_r` for every point.
pub fn m_r_table(m: &DistanceMatrix, r: &Rational) -> Vec<usize> {
    (0..m.n()).map(|a| m_r(m, r, a)).collect()
}

/// The offending edges `E_X`: pairs `{a, b}` with `d(a, b) < r`, `M_r(a) ≺ b ≺ a`,
/// and some `b ⪯ c ≺ e ⪯ a` with `d(c, e) ≥ r`. Either orientation of the pair may
/// witness membership. Pairs are returned as `(min, max)`, sorted.
pub fn offending_edges(m: &DistanceMatrix, r: &Rational) -> Vec<(usize, usize)> {
    let n = m.n();
    let cyc = Cycle::new(n);
    let mr = m_r_table(m, r);
    let witnessed = |a: usize, b: usize| {
        if !cyc.between(mr[a], b, a) {
            return false;
        }
        let arc: Vec<usize> = cyc.arc(b, a).collect();
        arc.iter()
            .enumerate()
            .any(|(i, &c)| arc[i + 1..].iter().any(|&e| m.get(c, e) >= r))
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if m.get(a, b) < r && (witnessed(a, b) || witnessed(b, a)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// The decomposition `V_X = V_X^c ∪ V_Y` at one radius.
#[derive(Clone, Debug)]
pub struct MvSplit {
    /// The radius.
    pub r: Rational,
    /// `M_r` for every point.
    pub m_r: Vec<usize>,
    /// Offending edges.
    pub e_x: Vec<(usize, usize)>,
    /// Vertices of the closed star of `E_X`, ascending.
    pub y: Vec<usize>,
    /// `G_X`, the 1-skeleton of `V_X`.
    pub g_x: Graph,
    /// `G_X^c = G_X − E_X`.
    pub g_c: Graph,
    /// `V_X`.
    pub v_x: SimplicialComplex,
    /// `V_X^c = Cl(G_X^c)`.
    pub v_c: SimplicialComplex,
    /// `V_Y`, the full subcomplex of `V_X` on `Y`.
    pub v_y: SimplicialComplex,
    /// `V_Y' = V_X^c ∩ V_Y`.
    pub v_y_prime: SimplicialComplex,
    /// Whether `V_X^c ∪ V_Y` reproduces `V_X`.
    pub union_ok: bool,
    /// Outcome of orienting `G_X^c[Y]` with `M_Y(y)` = the last `z ∈ Y` with `y ⪯ z ⪯ M_r(y)`.
    pub y_prime_orientation: std::result::Result<(), String>,
}

impl MvSplit {
    /// True when `Y` is all of `X`, so recursion cannot shrink the space.
    pub fn blocked(&self) -> bool {
        !self.e_x.is_empty() && self.y.len() == self.m_r.len()
    }
}

/// Builds the decomposition at radius `r` with complexes exact through `maxdim`.
pub fn mv_split(m: &DistanceMatrix, r: &Rational, maxdim: usize) -> MvSplit {
    let n = m.n();
    let mr = m_r_table(m, r);
    let e_x = offending_edges(m, r);
    let g_x = Graph::threshold(m, r);
    let mut g_c = g_x.clone();
    for &(a, b) in &e_x {
        g_c.remove_edge(a, b);
    }
    let mut in_y = vec![false; n];
    for &(a, b) in &e_x {
        in_y[a] = true;
        in_y[b] = true;
        for v in 0..n {
            if g_x.has_edge(a, v) && g_x.has_edge(b, v) {
                in_y[v] = true;
            }
        }
    }
    let y: Vec<usize> = (0..n).filter(|&v| in_y[v]).collect();
    let v_x = clique_complex(&g_x, maxdim);
    let v_c = clique_complex(&g_c, maxdim);
    let v_y = v_x.full_subcomplex(&y);
    let v_y_prime = v_c.full_subcomplex(&y);
    let union_ok = v_c.union(&v_y) == v_x;
    let y_prime_orientation = orient_y_prime(&g_c, &y, &mr);
    MvSplit { r: r.clone(), m_r: mr, e_x, y, g_x, g_c, v_x, v_c, v_y, v_y_prime, union_ok, y_prime_orientation }
}

fn orient_y_prime(g_c: &Graph, y: &[usize], mr: &[usize]) -> std::result::Result<(), String> {
    if y.is_empty() {
        return Ok(());
    }
    let n = mr.len();
    let cyc = Cycle::new(n);
    let my: Vec<usize> = y
        .iter()
        .map(|&yi| {
            let last = cyc
                .arc(yi, mr[yi])
                .filter(|z| y.binary_search(z).is_ok())
                .last()
                .unwrap_or(yi);
            y.binary_search(&last).expect("member of Y")
        })
        .collect();
    let sub = g_c.induced(y);
    cyclic::orient_and_check(&sub, &my).map(|_| ()).map_err(|e| e.to_string())
}

/// One node of the derivation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    /// Radius, as `"p/q"`.
    pub r: String,
    /// Number of points at this level.
    pub n: usize,
    /// Winding fraction of `V_Y'` as `"k/n"`, when defined.
    pub wf: Option<String>,
    /// `leaf`, `noncrit-1`, `noncrit-2`, `crit` or `fallback`.
    pub case: String,
    /// Why a fallback fired, or extra detail for the case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marker: Option<String>,
    /// Offending edges (1-based, in this level's labels).
    pub e_x: Vec<(usize, usize)>,
    /// `Y` (1-based, in this level's labels).
    pub y: Vec<usize>,
    /// Betti numbers of `VR_r` at this level.
    pub betti: Vec<usize>,
    /// Dimensions of `ker φ` and `im φ` in the critical degree (critical case only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_image: Option<(usize, usize)>,
    /// Recursive call on `Y`.
    pub children: Vec<TraceNode>,
}

/// Betti numbers with the derivation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvResult {
    /// Betti numbers of `VR_r(X)` in degrees `0..=maxdim`.
    pub betti: Vec<usize>,
    /// Derivation trace.
    pub trace: TraceNode,
}

impl MvResult {
    /// True when some node of the trace fell back to the oracle.
    pub fn has_fallback(&self) -> bool {
        fn walk(t: &TraceNode) -> bool {
            t.case == "fallback" || t.children.iter().any(walk)
        }
        walk(&self.trace)
    }
}

/// Betti numbers of `VR_r(X)` in degrees `0..=maxdim` by Mayer–Vietoris recursion.
pub fn mv_homology(
    m: &DistanceMatrix,
    r: &Rational,
    field: FieldTag,
    maxdim: usize,
    max_depth: usize,
) -> Result<MvResult> {
    let trace = with_field!(field, f => recurse(&f, field, m, r, maxdim, max_depth))?;
    Ok(MvResult { betti: trace.betti.clone(), trace })
}

fn one_based(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    pairs.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
}

fn recurse<F: Field>(
    f: &F,
    tag: FieldTag,
    m: &DistanceMatrix,
    r: &Rational,
    maxdim: usize,
    depth: usize,
) -> Result<TraceNode> {
    let split = mv_split(m, r, maxdim);
    let mut node = TraceNode {
        r: format_rational(r),
        n: m.n(),
        wf: None,
        case: String::new(),
        marker: None,
        e_x: one_based(&split.e_x),
        y: split.y.iter().map(|v| v + 1).collect(),
        betti: Vec::new(),
        kernel_image: None,
        children: Vec::new(),
    };
    let fallback = |mut node: TraceNode, why: &str| {
        node.case = "fallback".into();
        node.marker = Some(why.into());
        node.betti = homology_ranks(&split.v_x, tag);
        node
    };
    if split.e_x.is_empty() {
        return Ok(match cyclic::classify(&split.g_x) {
            Ok(t) => {
                node.case = "leaf".into();
                node.betti = t.betti_numbers(maxdim);
                node
            }
            Err(_) => fallback(node, "cyclic graph did not dismantle to a circulant"),
        });
    }
    if split.blocked() {
        return Ok(fallback(node, "recursion blocked"));
    }
    if depth == 0 {
        return Ok(fallback(node, "depth exhausted"));
    }
    let (Ok(tc), Ok((_, circ))) = (
        cyclic::classify(&split.g_c),
        cyclic::terminal_circulant(&split.g_c.induced(&split.y)),
    ) else {
        return Ok(fallback(node, "cyclic component did not dismantle to a circulant"));
    };
    let ty_prime = cyclic::circulant_type(circ);
    node.wf = circ.winding_fraction().map(|w| format!("{}/{}", w.numer(), w.denom()));
    let child = recurse(f, tag, &m.restrict(&split.y), r, maxdim, depth - 1)?;
    let betti_c = tc.betti_numbers(maxdim);
    let betti_y = child.betti.clone();
    let betti_yp: Vec<usize> = ty_prime.betti_numbers(maxdim);

    let mut phi_rank = vec![0usize; maxdim + 1];
    let mut iota_y_rank = vec![0usize; maxdim + 1];
    for k in 0..=maxdim {
        if betti_yp[k] == 0 {
            continue;
        }
        let ix = induced_matrix(f, &split.v_y_prime, &split.v_c, k)?;
        let iy = induced_matrix(f, &split.v_y_prime, &split.v_y, k)?;
        let stacked: Vec<Vector<F>> =
            ix.iter().zip(&iy).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        phi_rank[k] = rank(f, betti_c[k] + betti_y[k], &stacked);
        iota_y_rank[k] = rank(f, betti_y[k], &iy);
    }
    node.betti = (0..=maxdim)
        .map(|k| {
            let below = if k == 0 { 0 } else { betti_yp[k - 1] - phi_rank[k - 1] };
            betti_c[k] + betti_y[k] - phi_rank[k] + below
        })
        .collect();
    match ty_prime {
        HomotopyType::OddSphere(l) => {
            let j = 2 * l + 1;
            node.case = if j > maxdim || iota_y_rank[j] == betti_yp[j] {
                "noncrit-1".into()
            } else {
                "noncrit-2".into()
            };
        }
        HomotopyType::Contractible => node.case = "noncrit-1".into(),
        HomotopyType::WedgeEvenSpheres(l, _) => {
            node.case = "crit".into();
            let j = 2 * l;
            if j <= maxdim {
                node.kernel_image = Some((betti_yp[j] - phi_rank[j], phi_rank[j]));
            }
        }
        HomotopyType::Discrete(_) => {
            node.case = "crit".into();
            node.kernel_image = Some((betti_yp[0] - phi_rank[0], phi_rank[0]));
        }
        HomotopyType::DisjointAugmented(..) => unreachable!("circulant types are never augmented"),
    }
    node.children.push(child);
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::vr_betti;
    use crate::number::{frac, int};

    #[test]
    fn seven_point_worked_example() {
        let m = fixtures::seven_point();
        let r = frac(25, 2);
        assert_eq!(m_r(&m, &r, 0), 1);
        assert_eq!(offending_edges(&m, &r), vec![(0, 3)]);
        let s = mv_split(&m, &r, 3);
        assert_eq!(s.y, vec![0, 3]);
        assert_eq!(s.v_y.counts()[..2], [2, 1]);
        assert_eq!(s.v_y_prime.counts()[..2], [2, 0]);
        assert!(s.union_ok);
        let res = mv_homology(&m, &r, FieldTag::Q, 3, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(res.betti, vec![1, 2, 0, 0]);
        assert_eq!(res.trace.case, "crit");
        assert_eq!(res.trace.kernel_image, Some((1, 1)));
        assert_eq!(res.betti, vr_betti(&m, &r, 3, FieldTag::Q));
    }

    #[test]
    fn twelve_point_recursion_is_blocked() {
        let m = fixtures::twelve_point();
        let r = int(45);
        let mr = m_r_table(&m, &r);
        for a in 0..12 {
            let expected = if a % 2 == 0 { a + 3 } else { a + 4 };
            assert_eq!(mr[a], expected % 12, "M_r({})", a + 1);
        }
        assert_eq!(offending_edges(&m, &r), vec![(1, 7), (3, 9), (5, 11)]);
        let s = mv_split(&m, &r, 2);
        assert!(s.blocked());
        let res = mv_homology(&m, &r, FieldTag::Q, 2, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(res.trace.case, "fallback");
        assert_eq!(res.trace.marker.as_deref(), Some("recursion blocked"));
        assert_eq!(res.betti, vr_betti(&m, &r, 2, FieldTag::Q));
    }

    #[test]
    fn monotone_hexagon_is_a_leaf() {
        let m = fixtures::hexagon();
        assert!(offending_edges(&m, &int(6)).is_empty());
        let res = mv_homology(&m, &int(6), FieldTag::Q, 3, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(res.betti, vec![1, 1, 0, 0]);
        assert_eq!(res.trace.case, "leaf");
        let s = mv_split(&m, &int(6), 2);
        assert!(s.y.is_empty());
        assert_eq!(s.v_c, s.v_x);
    }

    #[test]
    fn large_radius_reaches_everything() {
        let m = fixtures::hexagon();
        let r = m.diam() + int(1);
        for a in 0..6 {
            assert_eq!(m_r(&m, &r, a), (a + 5) % 6);
        }
    }

    #[test]
    fn seven_point_sweep_matches_oracle() {
        let m = fixtures::seven_point();
        for v in m.distinct_values() {
            for r in [v.clone(), v + frac(1, 2)] {
                for field in [FieldTag::Q, FieldTag::F2] {
                    let res = mv_homology(&m, &r, field, 3, DEFAULT_MAX_DEPTH).unwrap();
                    assert_eq!(res.betti, vr_betti(&m, &r, 3, field), "r = {r}");
                }
            }
        }
    }
}

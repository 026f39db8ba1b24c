//! Block decomposition of VR homology across virtual cut points.
//!
//! A bipartition `{P, Q}` of `X` is a *gluing split* when there is a point `c` of the
//! tight span, not necessarily in `X`, through which every geodesic from `P` to `Q`
//! passes. Its observable shadow is an attachment function `e_c: X → Q≥0` with
//! `d(x, y) = e_c(x) + e_c(y)` for `x ∈ P`, `y ∈ Q`, and `e_c(x) + e_c(x') ≥ d(x, x')`
//! on each side. Compatible gluing splits nest into a tree whose vertices are the
//! *parts* of `X` and whose edges are the cuts.
//!
//! Each part `K` is augmented by one proxy point per incident cut: the point on the far
//! side that is closest to the cut. In positive degrees the homology of `VR_r(X)` is
//! the direct sum of the homology of the augmented parts `VR_r(X̄_K)`, and `H_0`
//! follows by merging components through the shared points.

use crate::circular::{self, CircularDecomposition, RECOGNITION_CAP};
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::homology::vr_betti;
use crate::metric::DistanceMatrix;
use crate::number::{Rational, format_rational, half};
use crate::persistence::{Barcode, Interval, h0_from_edges, persistence};
use crate::split::{
    DEFAULT_SPLIT_CAP, Split, UnionFind, canonical_cmp, enumerate_d_splits, incompatibility_components, residue,
};
use num::bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Value, json};
use std::collections::BTreeSet;
use std::ops::{Add, Sub};

/// Largest `n` for which every bipartition is tested as a gluing split.
pub const EXHAUSTIVE_GLUING_CAP: usize = 20;

/// A virtual cut point: a gluing split with its attachment function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// The two sides; side `A` contains point `0`.
    pub split: Split,
    /// `e_c(x)` for every point `x`.
    pub e: Vec<Rational>,
    /// `[part on side A, part on side B]`.
    pub joins: [usize; 2],
}

/// Parts of `X` nested along compatible gluing splits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingTree {
    n: usize,
    /// Points of each part (a part may be empty when three or more cuts meet).
    pub parts: Vec<Vec<usize>>,
    /// Cuts, each joining two parts.
    pub cuts: Vec<Cut>,
    /// True when candidate splits came from the threshold heuristic instead of
    /// exhaustive enumeration.
    pub heuristic: bool,
    /// Gluing splits dropped because they cross an earlier one.
    pub discarded: usize,
}

impl GluingTree {
    /// The one-part tree.
    pub fn trivial(n: usize) -> Self {
        Self { n, parts: vec![(0..n).collect()], cuts: Vec::new(), heuristic: false, discarded: 0 }
    }

    /// Number of points of `X`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// True when there is a single part.
    pub fn is_trivial(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Cuts incident to `part`.
    pub fn incident_cuts(&self, part: usize) -> Vec<usize> {
        (0..self.cuts.len()).filter(|&c| self.cuts[c].joins.contains(&part)).collect()
    }

    /// Points separated from `part` by `cut`.
    pub fn far_side(&self, cut: usize, part: usize) -> Vec<usize> {
        let c = &self.cuts[cut];
        if c.joins[0] == part { c.split.side_b() } else { c.split.side_a() }
    }

    /// The proxy `x_{K,c}`: the far-side point minimizing `e_c`.
    pub fn proxy(&self, cut: usize, part: usize, tie: TieBreak) -> usize {
        let e = &self.cuts[cut].e;
        let far = self.far_side(cut, part);
        let best = far.iter().map(|&x| &e[x]).min().expect("far side is nonempty");
        let mut ties = far.iter().copied().filter(|&x| &e[x] == best);
        match tie {
            TieBreak::Smallest => ties.next(),
            TieBreak::Largest => ties.next_back(),
        }
        .expect("minimum is attained")
    }

    /// Checks the tree shape, the partition of the points and the additive identity of
    /// every cut.
    pub fn validate(&self, m: &DistanceMatrix) -> Result<()> {
        let mut seen = vec![false; self.n];
        for &x in self.parts.iter().flatten() {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Internal(format!("point {} lies in two parts", x + 1)));
            }
        }
        if seen.iter().any(|s| !s) || self.cuts.len() + 1 != self.parts.len() {
            return Err(Error::Internal("parts do not form a tree partition of X".into()));
        }
        let mut uf = UnionFind::new(self.parts.len());
        for c in &self.cuts {
            if !uf.union(c.joins[0], c.joins[1]) {
                return Err(Error::Internal("cut adjacency has a cycle".into()));
            }
        }
        for (i, c) in self.cuts.iter().enumerate() {
            for &x in &c.split.side_a() {
                for &y in &c.split.side_b() {
                    if m.get(x, y) != &(&c.e[x] + &c.e[y]) {
                        return Err(Error::Internal(format!(
                            "cut {} breaks additivity at ({}, {})",
                            i + 1,
                            x + 1,
                            y + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// JSON form with 1-based points and parts.
    pub fn to_json(&self) -> Value {
        let cuts: Vec<Value> = self
            .cuts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let proxies: serde_json::Map<String, Value> = c
                    .joins
                    .iter()
                    .map(|&k| ((k + 1).to_string(), json!(self.proxy(i, k, TieBreak::Smallest) + 1)))
                    .collect();
                json!({
                    "joins": [c.joins[0] + 1, c.joins[1] + 1],
                    "sides": [one_based(&c.split.side_a()), one_based(&c.split.side_b())],
                    "e": c.e.iter().map(format_rational).collect::<Vec<_>>(),
                    "proxy_per_part": proxies,
                })
            })
            .collect();
        json!({
            "parts": self.parts.iter().map(|p| one_based(p)).collect::<Vec<_>>(),
            "cuts": cuts,
            "heuristic": self.heuristic,
            "discarded": self.discarded,
        })
    }
}

impl Serialize for GluingTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn one_based(points: &[usize]) -> Vec<usize> {
    points.iter().map(|p| p + 1).collect()
}

/// Which of several equally close far-side points becomes the proxy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest index.
    #[default]
    Smallest,
    /// Largest index.
    Largest,
}

enum Scaled {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

impl Scaled {
    fn new(m: &DistanceMatrix) -> Self {
        match m.scaled_i64() {
            Some((_, d)) => Scaled::Small(d),
            None => Scaled::Big(m.scaled_integers().1),
        }
    }

    fn cross_additive(&self, n: usize, p: &[usize], q: &[usize]) -> bool {
        match self {
            Scaled::Small(d) => cross_additive(d, n, p, q),
            Scaled::Big(d) => cross_additive(d, n, p, q),
        }
    }

    fn cross_additive_mask(&self, n: usize, q_mask: u64) -> bool {
        match self {
            Scaled::Small(d) => cross_additive_mask(d, n, q_mask),
            Scaled::Big(d) => cross_additive_mask(d, n, q_mask),
        }
    }

    fn threshold_candidates(&self, n: usize) -> BTreeSet<Vec<usize>> {
        match self {
            Scaled::Small(d) => threshold_candidates(d, n),
            Scaled::Big(d) => threshold_candidates(d, n),
        }
    }
}

/// [`cross_additive`] for the split with side `q_mask` (bit `x` set for `x ∈ Q`,
/// point `0 ∈ P`), without allocating.
fn cross_additive_mask<T>(d: &[T], n: usize, q_mask: u64) -> bool
where
    T: PartialEq,
    for<'x> &'x T: Add<&'x T, Output = T>,
{
    let y0 = q_mask.trailing_zeros() as usize;
    let base = &d[y0];
    (0..n).filter(|&x| q_mask >> x & 1 == 0).all(|x| {
        let dxy0 = &d[x * n + y0];
        (0..n).filter(|&y| q_mask >> y & 1 == 1).all(|y| &d[x * n + y] + base == dxy0 + &d[y])
    })
}

/// `d(x, y) + d(x0, y0) = d(x, y0) + d(x0, y)` for all `x ∈ p`, `y ∈ q`, which is
/// equivalent to the four-point identity over all of `p × q`.
fn cross_additive<T>(d: &[T], n: usize, p: &[usize], q: &[usize]) -> bool
where
    T: PartialEq,
    for<'x> &'x T: Add<&'x T, Output = T>,
{
    let (x0, y0) = (p[0], q[0]);
    let base = &d[x0 * n + y0];
    p.iter().all(|&x| {
        let dxy0 = &d[x * n + y0];
        q.iter().all(|&y| &d[x * n + y] + base == dxy0 + &d[x0 * n + y])
    })
}

/// The attachment function of the gluing split `{p, q}`, or `None` when `{p, q}` is
/// not a gluing split.
///
/// With `(x0, y0)` a closest cross pair, every attachment function has the form
/// `e(x) = d(x, y0) − d(x0, y0) + t` on `p` and `e(y) = d(x0, y) − t` on `q`; the
/// conditions `e(x) + e(x') ≥ d(x, x')` on each side confine `t` to an interval.
/// Inside it `t` is set to the Gromov product `(y0 | y1)_{x0}` minimized over `y1`,
/// clamped into the interval.
pub fn gluing_attachment(m: &DistanceMatrix, p: &[usize], q: &[usize]) -> Option<Vec<Rational>> {
    if p.is_empty() || q.is_empty() {
        return None;
    }
    let d = |a: usize, b: usize| m.get(a, b);
    for &x in p {
        let dx0 = &(d(x, q[0]) - d(p[0], q[0]));
        if q.iter().any(|&y| &(d(x, y) - d(p[0], y)) != dx0) {
            return None;
        }
    }
    let (x0, y0) = p
        .iter()
        .flat_map(|&x| q.iter().map(move |&y| (x, y)))
        .min_by(|a, b| d(a.0, a.1).cmp(d(b.0, b.1)).then(a.cmp(b)))
        .expect("both sides nonempty");
    let h = half();
    let dxy = d(x0, y0);
    let t_lo = p
        .iter()
        .flat_map(|&x| p.iter().map(move |&x2| (x, x2)))
        .map(|(x, x2)| dxy + &h * (d(x, x2) - d(x, y0) - d(x2, y0)))
        .max()
        .expect("p nonempty");
    let t_hi = q
        .iter()
        .flat_map(|&y| q.iter().map(move |&y2| (y, y2)))
        .map(|(y, y2)| &h * (d(x0, y) + d(x0, y2) - d(y, y2)))
        .min()
        .expect("q nonempty");
    if t_lo > t_hi {
        return None;
    }
    let gromov = q
        .iter()
        .filter(|&&y1| y1 != y0)
        .map(|&y1| &h * (dxy + d(x0, y1) - d(y0, y1)))
        .min()
        .unwrap_or_else(|| dxy.clone());
    let t = gromov.clamp(t_lo, t_hi);
    let n = m.n();
    let mut e = vec![Rational::default(); n];
    for &x in p {
        e[x] = d(x, y0) - dxy + &t;
    }
    for &y in q {
        e[y] = d(x0, y) - &t;
    }
    e.iter().all(|v| v >= &Rational::default()).then_some(e)
}

/// Every gluing split with both sides of size at least two, with its attachment
/// function, sorted canonically. The flag is true when candidates came from the
/// threshold heuristic (`n > EXHAUSTIVE_GLUING_CAP`).
pub fn gluing_splits(m: &DistanceMatrix) -> (Vec<(Split, Vec<Rational>)>, bool) {
    let n = m.n();
    if n < 4 {
        return (Vec::new(), false);
    }
    let scaled = Scaled::new(m);
    let heuristic = n > EXHAUSTIVE_GLUING_CAP;
    let candidates: Vec<Vec<usize>> = if heuristic {
        scaled.threshold_candidates(n).into_iter().collect()
    } else {
        (1u64..(1u64 << (n - 1)))
            .into_par_iter()
            .map(|mask| mask << 1)
            .filter(|&q_mask| {
                let size = q_mask.count_ones() as usize;
                size >= 2 && size <= n - 2 && scaled.cross_additive_mask(n, q_mask)
            })
            .map(|q_mask| (1..n).filter(|&x| q_mask >> x & 1 == 1).collect())
            .collect()
    };
    let mut found: Vec<(Split, Vec<Rational>)> = candidates
        .into_par_iter()
        .filter_map(|q| {
            let p: Vec<usize> = (0..n).filter(|x| q.binary_search(x).is_err()).collect();
            if p.len() < 2 || q.len() < 2 || !scaled.cross_additive(n, &p, &q) {
                return None;
            }
            let e = gluing_attachment(m, &p, &q)?;
            Some((Split::from_side(n, &p).expect("nonempty sides"), e))
        })
        .collect();
    found.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    (found, heuristic)
}

/// Candidate sides (not containing point `0`) from thresholds of
/// `g(z) = d(0, z) − d(y0, z)`: on a gluing split separating `0` from `y0`, `g` is at
/// most `e(0) − e(y0)` on the side of `0` and at least that on the other side.
fn threshold_candidates<T>(d: &[T], n: usize) -> BTreeSet<Vec<usize>>
where
    T: Ord,
    for<'x> &'x T: Sub<&'x T, Output = T>,
{
    let mut out = BTreeSet::new();
    for y0 in 1..n {
        let g: Vec<T> = (0..n).map(|z| &d[z] - &d[y0 * n + z]).collect();
        let mut levels: Vec<&T> = g.iter().collect();
        levels.sort();
        levels.dedup();
        for theta in levels {
            let above: Vec<usize> = (0..n).filter(|&z| &g[z] > theta).collect();
            let at_or_above: Vec<usize> = (0..n).filter(|&z| &g[z] >= theta).collect();
            for q in [above, at_or_above] {
                if q.len() >= 2 && q.len() + 2 <= n && !q.contains(&0) {
                    out.insert(q);
                }
            }
        }
    }
    out
}

/// Finds the gluing splits of `m` and nests a maximal compatible family of them
/// (greedily, in canonical order) into a tree of parts.
pub fn detect_gluing_tree(m: &DistanceMatrix) -> Result<GluingTree> {
    let n = m.n();
    if n < 2 {
        return Err(Error::Precondition("gluing detection needs at least two points".into()));
    }
    let (found, heuristic) = gluing_splits(m);
    let mut chosen: Vec<(Split, Vec<Rational>)> = Vec::new();
    let mut discarded = 0;
    for (s, e) in found {
        if chosen.iter().all(|(c, _)| c.compatible(&s)) {
            chosen.push((s, e));
        } else {
            discarded += 1;
        }
    }
    let mut tree = loop {
        let tree = build_tree(n, chosen.clone())?;
        match point_parts(&tree).first() {
            Some(&k) => {
                chosen.remove(tree.incident_cuts(k)[0]);
            }
            None => break tree,
        }
    };
    tree.heuristic = heuristic;
    tree.discarded = discarded;
    Ok(tree)
}

/// Parts made only of points that are themselves cut points of every incident cut.
/// Such a part is the cut point seen from several sides; merging it into a neighbour
/// leaves a coarser tree with the same cut location.
fn point_parts(t: &GluingTree) -> Vec<usize> {
    (0..t.parts.len())
        .filter(|&k| {
            let cuts = t.incident_cuts(k);
            !t.parts[k].is_empty()
                && cuts.len() >= 2
                && t.parts[k].iter().all(|&x| cuts.iter().all(|&c| t.cuts[c].e[x] == Rational::default()))
        })
        .collect()
}

/// Nests pairwise compatible splits into an X-tree.
pub fn build_tree(n: usize, splits: Vec<(Split, Vec<Rational>)>) -> Result<GluingTree> {
    let mut verts: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (ci, (s, _)) in splits.iter().enumerate() {
        let mut placed = false;
        for v in 0..verts.len() {
            let branches = branches(&verts, &edges, v);
            let mono: Option<Vec<bool>> = branches
                .iter()
                .map(|(_, pts)| {
                    let side = s.contains_a(pts[0]);
                    pts.iter().all(|&x| s.contains_a(x) == side).then_some(side)
                })
                .collect();
            let Some(branch_side) = mono else { continue };
            let own_a = verts[v].iter().filter(|&&x| s.contains_a(x)).count();
            let own_b = verts[v].len() - own_a;
            let br_a = branch_side.iter().filter(|&&b| b).count();
            let br_b = branch_side.len() - br_a;
            if (own_a == 0 && br_a <= 1) || (own_b == 0 && br_b <= 1) {
                continue;
            }
            let w = verts.len();
            let (moved, kept): (Vec<usize>, Vec<usize>) = verts[v].iter().partition(|&&x| s.contains_a(x));
            verts[v] = kept;
            verts.push(moved);
            for ((ei, _), &side) in branches.iter().zip(&branch_side) {
                if side {
                    let (a, b) = edges[*ei];
                    edges[*ei] = if a == v { (w, b) } else { (a, w) };
                }
            }
            debug_assert_eq!(edges.len(), ci);
            edges.push((v, w));
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Internal(format!("split {} does not fit the tree", ci + 1)));
        }
    }
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by_key(|&v| (verts[v].is_empty(), verts[v].iter().min().copied(), v));
    let mut rename = vec![0; verts.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let cuts = splits
        .into_iter()
        .zip(&edges)
        .map(|((split, e), &(u, v))| {
            let v_side: Vec<usize> = branches(&verts, &edges, u)
                .into_iter()
                .find(|(ei, _)| edges[*ei] == (u, v))
                .map(|(_, pts)| pts)
                .expect("edge is a branch of its endpoint");
            let joins = if split.contains_a(v_side[0]) { [rename[v], rename[u]] } else { [rename[u], rename[v]] };
            Cut { split, e, joins }
        })
        .collect();
    let parts = order
        .iter()
        .map(|&v| {
            let mut p = verts[v].clone();
            p.sort_unstable();
            p
        })
        .collect();
    Ok(GluingTree { n, parts, cuts, heuristic: false, discarded: 0 })
}

/// For each edge at `v`: its index and the points beyond it.
fn branches(verts: &[Vec<usize>], edges: &[(usize, usize)], v: usize) -> Vec<(usize, Vec<usize>)> {
    let other = |ei: usize, from: usize| {
        let (a, b) = edges[ei];
        if a == from { b } else { a }
    };
    (0..edges.len())
        .filter(|&ei| edges[ei].0 == v || edges[ei].1 == v)
        .map(|ei| {
            let mut pts = Vec::new();
            let mut stack = vec![(other(ei, v), ei)];
            while let Some((u, via)) = stack.pop() {
                pts.extend(&verts[u]);
                for f in 0..edges.len() {
                    if f != via && (edges[f].0 == u || edges[f].1 == u) {
                        stack.push((other(f, u), f));
                    }
                }
            }
            (ei, pts)
        })
        .collect()
}

/// A component of the incompatibility graph of the d-splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncompatibilityBlock {
    /// Sides (containing point `0`) of the splits in the component.
    pub splits: Vec<Vec<usize>>,
    /// Points isolated on a small side by some split of the component.
    pub points: Vec<usize>,
}

/// Blocks of a totally decomposable metric as components of the incompatibility graph
/// of its d-splits.
pub fn blocks_via_incompatibility(m: &DistanceMatrix) -> Result<Vec<IncompatibilityBlock>> {
    let sys = enumerate_d_splits(m, DEFAULT_SPLIT_CAP)?;
    if !residue(m, &sys).is_zero() {
        return Err(Error::Precondition("metric is not totally decomposable".into()));
    }
    let s = sys.splits();
    Ok(incompatibility_components(&sys)
        .into_iter()
        .map(|comp| {
            let mut points = BTreeSet::new();
            for &i in &comp {
                let (a, b) = (s[i].0.side_a(), s[i].0.side_b());
                let small = if a.len() <= b.len() { a } else { b };
                points.extend(small);
            }
            IncompatibilityBlock {
                splits: comp.iter().map(|&i| s[i].0.side_a()).collect(),
                points: points.into_iter().collect(),
            }
        })
        .collect())
}

/// A proxy point added to a part for one incident cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proxy {
    /// The cut.
    pub cut: usize,
    /// The far-side point closest to the cut.
    pub point: usize,
    /// `e_c(point)`.
    pub distance: Rational,
}

/// A part together with its proxies, `X̄_K = X_K ∪ {x_{K,c}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedPart {
    /// Part id.
    pub part: usize,
    /// Points of the part.
    pub base: Vec<usize>,
    /// One proxy per incident cut.
    pub proxies: Vec<Proxy>,
    /// `base` followed by the proxy points: point `i` of `metric` is `points[i]` of `X`.
    pub points: Vec<usize>,
    /// The metric of `X̄_K`.
    pub metric: DistanceMatrix,
}

/// The augmented parts with proxies chosen by smallest index among ties.
pub fn augmented_parts(m: &DistanceMatrix, t: &GluingTree) -> Vec<AugmentedPart> {
    augmented_parts_with(m, t, TieBreak::Smallest)
}

/// The augmented parts with an explicit tie-breaking rule for proxies.
pub fn augmented_parts_with(m: &DistanceMatrix, t: &GluingTree, tie: TieBreak) -> Vec<AugmentedPart> {
    (0..t.parts.len())
        .map(|k| {
            let base = t.parts[k].clone();
            let proxies: Vec<Proxy> = t
                .incident_cuts(k)
                .into_iter()
                .map(|c| {
                    let point = t.proxy(c, k, tie);
                    Proxy { cut: c, point, distance: t.cuts[c].e[point].clone() }
                })
                .collect();
            let points: Vec<usize> = base.iter().copied().chain(proxies.iter().map(|p| p.point)).collect();
            let metric = m.restrict(&points);
            AugmentedPart { part: k, base, proxies, points, metric }
        })
        .collect()
}

/// The block-cut forest at radius `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcForest {
    /// The radius, as `"p/q"`.
    pub r: String,
    /// `(cut, part)` pairs whose proxy distance is below `r`.
    pub edges: Vec<(usize, usize)>,
    /// Cuts with no incident edge, `C_r`.
    pub isolated_cuts: Vec<usize>,
}

/// Edges `(c, K)` with `e_c(x_{K,c}) < r` and the isolated cuts.
pub fn bc_forest(t: &GluingTree, r: &Rational) -> BcForest {
    let mut edges = Vec::new();
    let mut isolated_cuts = Vec::new();
    for (c, cut) in t.cuts.iter().enumerate() {
        let mut degree = 0;
        for &k in &cut.joins {
            let x = t.proxy(c, k, TieBreak::Smallest);
            if &cut.e[x] < r {
                edges.push((c, k));
                degree += 1;
            }
        }
        if degree == 0 {
            isolated_cuts.push(c);
        }
    }
    BcForest { r: format_rational(r), edges, isolated_cuts }
}

/// The parts of a gluing tree prepared for repeated homology queries.
#[derive(Clone, Debug)]
pub struct BlockPlan {
    /// The tree.
    pub tree: GluingTree,
    /// Its augmented parts.
    pub parts: Vec<AugmentedPart>,
    /// A circular decomposition of each part, when recognized.
    pub circular: Vec<Option<CircularDecomposition>>,
    n: usize,
}

/// Homology of `VR_r(X)` assembled from the parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockHomology {
    /// Betti numbers in degrees `0..=maxdim`.
    pub betti: Vec<usize>,
    /// Betti numbers of each augmented part.
    pub part_betti: Vec<Vec<usize>>,
    /// Whether each part used the closed-form circular route.
    pub closed_form: Vec<bool>,
    /// The block-cut forest at `r`.
    pub forest: BcForest,
}

impl BlockPlan {
    /// Detects the gluing tree and prepares the parts.
    pub fn new(m: &DistanceMatrix) -> Result<Self> {
        Ok(Self::with_tree(m, detect_gluing_tree(m)?))
    }

    /// Prepares the parts of a given tree.
    pub fn with_tree(m: &DistanceMatrix, tree: GluingTree) -> Self {
        Self::with_parts(m, tree.clone(), augmented_parts(m, &tree))
    }

    /// Prepares explicitly chosen augmented parts.
    pub fn with_parts(m: &DistanceMatrix, tree: GluingTree, parts: Vec<AugmentedPart>) -> Self {
        let circular = parts
            .par_iter()
            .map(|p| {
                let k = p.metric.n();
                if !(3..=RECOGNITION_CAP).contains(&k) {
                    return None;
                }
                circular::recognize_circular(&p.metric).ok().flatten().map(|(_, cd)| cd)
            })
            .collect();
        Self { tree, parts, circular, n: m.n() }
    }

    /// Sizes of the augmented parts.
    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.points.len()).collect()
    }

    /// Betti numbers of `VR_r(X)` in degrees `0..=maxdim`.
    pub fn homology(&self, r: &Rational, field: FieldTag, maxdim: usize) -> BlockHomology {
        let per: Vec<(Vec<usize>, bool)> = self
            .parts
            .par_iter()
            .zip(&self.circular)
            .map(|(p, cd)| {
                let closed = cd.as_ref().and_then(|cd| circular::monotone_vr_homotopy(cd, r).ok());
                match closed {
                    Some(h) => (h.homotopy.betti_numbers(maxdim), true),
                    None => (vr_betti(&p.metric, r, maxdim, field), false),
                }
            })
            .collect();
        let mut betti = vec![0; maxdim + 1];
        for (b, _) in &per {
            for k in 1..=maxdim {
                betti[k] += b[k];
            }
        }
        let mut uf = UnionFind::new(self.n);
        for p in &self.parts {
            for (i, &x) in p.points.iter().enumerate() {
                for (j, &y) in p.points.iter().enumerate().skip(i + 1) {
                    if p.metric.get(i, j) < r {
                        uf.union(x, y);
                    }
                }
            }
        }
        betti[0] = uf.count();
        let (part_betti, closed_form) = per.into_iter().unzip();
        BlockHomology { betti, part_betti, closed_form, forest: bc_forest(&self.tree, r) }
    }

    /// Persistence barcode: part barcodes in positive degrees, `H_0` from the merge
    /// rule on the union of the part edges.
    pub fn persistence(&self, maxdim: usize, field: FieldTag) -> Result<Barcode> {
        let per: Vec<Barcode> = self
            .parts
            .par_iter()
            .map(|p| persistence(&p.metric, maxdim, field))
            .collect::<Result<_>>()?;
        let mut dims: Vec<Vec<Interval>> = vec![Vec::new(); maxdim + 1];
        for b in per {
            for (k, bars) in b.dims.into_iter().enumerate().skip(1) {
                dims[k].extend(bars);
            }
        }
        let mut edges = BTreeSet::new();
        for p in &self.parts {
            for (i, &x) in p.points.iter().enumerate() {
                for (j, &y) in p.points.iter().enumerate().skip(i + 1) {
                    edges.insert((p.metric.get(i, j).clone(), x.min(y), x.max(y)));
                }
            }
        }
        dims[0] = h0_from_edges(self.n, edges.into_iter().collect());
        Ok(Barcode::new(field, dims))
    }
}

/// Betti numbers of `VR_r(X)` through the block decomposition.
pub fn block_homology(m: &DistanceMatrix, r: &Rational, field: FieldTag, maxdim: usize) -> Result<BlockHomology> {
    Ok(BlockPlan::new(m)?.homology(r, field, maxdim))
}

/// Persistence of the VR filtration through the block decomposition.
pub fn block_persistence(m: &DistanceMatrix, maxdim: usize, field: FieldTag) -> Result<Barcode> {
    BlockPlan::new(m)?.persistence(maxdim, field)
}

/// The metric on `A ⊔ B` with `d(a, b) = ea[a] + eb[b]` across the two sides.
pub fn glue(a: &DistanceMatrix, ea: &[Rational], b: &DistanceMatrix, eb: &[Rational]) -> DistanceMatrix {
    let na = a.n();
    DistanceMatrix::from_fn(na + b.n(), |i, j| match (i < na, j < na) {
        (true, true) => a.get(i, j).clone(),
        (false, false) => b.get(i - na, j - na).clone(),
        (true, false) => &ea[i] + &eb[j - na],
        (false, true) => &eb[i - na] + &ea[j],
    })
}

/// The wedge identifying point `pa` of `a` with point `pb` of `b`. Points of `a` come
/// first, then the points of `b` other than `pb`.
pub fn wedge(a: &DistanceMatrix, pa: usize, b: &DistanceMatrix, pb: usize) -> DistanceMatrix {
    let ea: Vec<Rational> = (0..a.n()).map(|x| a.get(pa, x).clone()).collect();
    let rest: Vec<usize> = (0..b.n()).filter(|&y| y != pb).collect();
    let eb: Vec<Rational> = rest.iter().map(|&y| b.get(pb, y).clone()).collect();
    glue(a, &ea, &b.restrict(&rest), &eb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::{frac, int};

    fn square() -> DistanceMatrix {
        DistanceMatrix::from_integers(&[vec![0, 1, 2, 1], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![1, 2, 1, 0]])
            .unwrap()
    }

    fn path4() -> DistanceMatrix {
        DistanceMatrix::from_fn(4, |i, j| int((i as i64 - j as i64).abs()))
    }

    #[test]
    fn wedge_of_two_squares() {
        let m = wedge(&square(), 0, &square(), 0);
        assert_eq!(m.n(), 7);
        let t = detect_gluing_tree(&m).unwrap();
        t.validate(&m).unwrap();
        assert_eq!(t.parts.len(), 2);
        assert_eq!(t.cuts.len(), 1);
        let e = &t.cuts[0].e;
        for x in 0..7 {
            assert_eq!(&e[x], m.get(0, x));
        }
        let parts = augmented_parts(&m, &t);
        let mut sizes: Vec<usize> = parts.iter().map(|p| p.points.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 5]);
        for p in &parts {
            for q in &p.proxies {
                for &x in &p.base {
                    let c = &t.cuts[q.cut];
                    assert_eq!(m.get(q.point, x), &(&c.e[q.point] + &c.e[x]));
                }
            }
        }
    }

    #[test]
    fn squares_glued_at_a_virtual_point() {
        let s = square();
        let m = glue(&s, &[int(1), int(1), int(2), int(2)], &s, &[int(2), int(2), int(3), int(3)]);
        let t = detect_gluing_tree(&m).unwrap();
        t.validate(&m).unwrap();
        assert_eq!(t.parts.len(), 2);
        let parts = augmented_parts(&m, &t);
        assert!(parts.iter().all(|p| p.points.len() == 5));
        let mut proxy_d: Vec<Rational> = parts.iter().map(|p| p.proxies[0].distance.clone()).collect();
        proxy_d.sort();
        assert!(proxy_d[0] < proxy_d[1]);
        let f = bc_forest(&t, &proxy_d[0]);
        assert!(f.edges.is_empty());
        assert_eq!(f.isolated_cuts, vec![0]);
        let mid = (&proxy_d[0] + &proxy_d[1]) * half();
        let f = bc_forest(&t, &mid);
        assert_eq!(f.edges.len(), 1);
        assert!(f.isolated_cuts.is_empty());
        assert_eq!(bc_forest(&t, &(&proxy_d[1] + int(1))).edges.len(), 2);
    }

    #[test]
    fn generic_and_circular_metrics_have_one_part() {
        for m in [fixtures::hexagon(), fixtures::seven_point(), fixtures::circle_five_points(), fixtures::k23()] {
            let t = detect_gluing_tree(&m).unwrap();
            assert!(t.is_trivial());
            assert_eq!(augmented_parts(&m, &t)[0].metric, m);
        }
    }

    #[test]
    fn four_point_path_has_one_interior_cut() {
        let m = path4();
        let t = detect_gluing_tree(&m).unwrap();
        assert_eq!(t.parts, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(t.cuts[0].e, vec![int(2), int(1), int(0), int(1)]);
    }

    #[test]
    fn star_tree_has_an_empty_centre() {
        let legs = [int(1), int(2), int(3)];
        let m = DistanceMatrix::from_fn(6, |i, j| {
            if i == j {
                int(0)
            } else if i / 2 == j / 2 {
                int(1)
            } else {
                &legs[i / 2] + &legs[j / 2] + int(1)
            }
        });
        let t = detect_gluing_tree(&m).unwrap();
        t.validate(&m).unwrap();
        assert_eq!(t.parts.len(), 4);
        assert!(t.parts[3].is_empty());
        let parts = augmented_parts(&m, &t);
        assert_eq!(parts[3].points.len(), 3);
    }

    #[test]
    fn heuristic_candidates_find_the_chain_cuts() {
        let s = square();
        let mut m = s.clone();
        for _ in 0..6 {
            let last = m.n() - 1;
            m = wedge(&m, last, &s, 0);
        }
        assert!(m.n() > EXHAUSTIVE_GLUING_CAP);
        let t = detect_gluing_tree(&m).unwrap();
        assert!(t.heuristic);
        t.validate(&m).unwrap();
        assert_eq!(t.parts.len(), 7);
    }

    #[test]
    fn incompatibility_blocks() {
        let blocks = blocks_via_incompatibility(&fixtures::hexagon()).unwrap();
        assert_eq!(blocks.iter().filter(|b| b.splits.len() > 1).count(), 1);
        let c4 = DistanceMatrix::from_integers(&[
            vec![0, 2, 3, 1],
            vec![2, 0, 1, 3],
            vec![3, 1, 0, 2],
            vec![1, 3, 2, 0],
        ])
        .unwrap();
        let m = wedge(&c4, 0, &c4, 0);
        let blocks = blocks_via_incompatibility(&m).unwrap();
        let t = detect_gluing_tree(&m).unwrap();
        assert_eq!(blocks.iter().filter(|b| b.splits.len() > 1).count(), 2);
        assert_eq!(t.parts.len(), 2);
        assert!(blocks_via_incompatibility(&fixtures::k23()).is_err());
    }

    #[test]
    fn block_homology_matches_oracle_on_wedges() {
        let h = fixtures::hexagon();
        let h2 = DistanceMatrix::from_fn(6, |i, j| h.get(i, j) * int(2));
        let m = wedge(&h, 0, &h2, 0);
        let plan = BlockPlan::new(&m).unwrap();
        assert_eq!(plan.tree.parts.len(), 3);
        assert_eq!(plan.tree.parts[0], vec![0]);
        let mut radii = m.distinct_values();
        radii.push(int(100));
        for r in &radii {
            for r in [r.clone(), r + frac(1, 3)] {
                assert_eq!(plan.homology(&r, FieldTag::Q, 3).betti, vr_betti(&m, &r, 3, FieldTag::Q), "r = {r}");
            }
        }
        let bars = plan.persistence(2, FieldTag::Q).unwrap();
        assert_eq!(bars, persistence(&m, 2, FieldTag::Q).unwrap());
    }
}

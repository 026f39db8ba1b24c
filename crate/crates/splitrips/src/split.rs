//! Split decomposition of finite metrics: β-coefficients, isolation indices,
//! d-split enumeration, weak compatibility, the split-prime residue and the
//! incompatibility graph.

use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::number::{Rational, half};
use num::bigint::BigInt;
use num::Zero;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::ops::{Add, Sub};

/// Default cap on `n` for exhaustive d-split enumeration (`2^(n-1) - 1` candidates).
pub const DEFAULT_SPLIT_CAP: usize = 16;

/// A bipartition `A | B` of `{0, …, n-1}` with both sides nonempty.
///
/// Stored canonically: side `A` is the side containing point `0`, so `{A, B}` and
/// `{B, A}` compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    in_a: Vec<bool>,
}

impl Split {
    /// Builds the split with one side equal to `side` (either side may be given).
    pub fn from_side(n: usize, side: &[usize]) -> Result<Self> {
        let mut in_a = vec![false; n];
        for &p in side {
            if p >= n {
                return Err(Error::Structural(format!("split point {} outside 1..={n}", p + 1)));
            }
            in_a[p] = true;
        }
        let count = in_a.iter().filter(|&&b| b).count();
        if count == 0 || count == n {
            return Err(Error::Structural("split sides must both be nonempty".into()));
        }
        if !in_a[0] {
            in_a.iter_mut().for_each(|b| *b = !*b);
        }
        Ok(Self { in_a })
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.in_a.len()
    }

    /// Points on the side containing `0`, sorted.
    pub fn side_a(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.in_a[i]).collect()
    }

    /// Points on the other side, sorted.
    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.in_a[i]).collect()
    }

    /// True when `x` lies on the side containing `0`.
    #[inline]
    pub fn contains_a(&self, x: usize) -> bool {
        self.in_a[x]
    }

    /// True when `x` and `y` lie on the same side.
    #[inline]
    pub fn same_side(&self, x: usize, y: usize) -> bool {
        self.in_a[x] == self.in_a[y]
    }

    /// Size of the smaller side.
    pub fn small_side_len(&self) -> usize {
        let a = self.in_a.iter().filter(|&&b| b).count();
        a.min(self.n() - a)
    }

    /// Two splits are compatible when some side of one is disjoint from some side of the other.
    pub fn compatible(&self, other: &Split) -> bool {
        let n = self.n();
        let disjoint = |fa: bool, fb: bool| {
            (0..n).all(|x| !(self.in_a[x] == fa && other.in_a[x] == fb))
        };
        disjoint(true, false) || disjoint(false, true) || disjoint(false, false)
    }
}

/// `δ_{A|B}(x, y)`: `1` when `x` and `y` are separated, else `0`.
pub fn split_metric(s: &Split, x: usize, y: usize) -> u8 {
    u8::from(!s.same_side(x, y))
}

/// A set of distinct splits of `{0, …, n-1}` with positive rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSplitSystem {
    n: usize,
    splits: Vec<(Split, Rational)>,
}

impl WeightedSplitSystem {
    /// Builds a system, rejecting nonpositive weights, duplicates and size mismatches.
    /// Splits are stored in canonical order.
    pub fn new(n: usize, mut splits: Vec<(Split, Rational)>) -> Result<Self> {
        for (s, w) in &splits {
            if s.n() != n {
                return Err(Error::Structural("split on a different ground set".into()));
            }
            if w <= &Rational::zero() {
                return Err(Error::Structural("split weights must be positive".into()));
            }
        }
        splits.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        if splits.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Structural("duplicate split".into()));
        }
        Ok(Self { n, splits })
    }

    /// The empty system on `n` points.
    pub fn empty(n: usize) -> Self {
        Self { n, splits: Vec::new() }
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weighted splits in canonical order.
    pub fn splits(&self) -> &[(Split, Rational)] {
        &self.splits
    }

    /// Number of splits.
    pub fn len(&self) -> usize {
        self.splits.len()
    }

    /// True when the system has no split.
    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    /// Weight of `s`, if present.
    pub fn weight(&self, s: &Split) -> Option<&Rational> {
        self.splits.iter().find(|(t, _)| t == s).map(|(_, w)| w)
    }
}

/// Orders splits by the sorted member list of the side containing `0`.
pub fn canonical_cmp(a: &Split, b: &Split) -> Ordering {
    a.side_a().cmp(&b.side_a())
}

/// `β` coefficient of four (not necessarily distinct) points.
///
/// `max{d(a1,b1)+d(a2,b2), d(a1,b2)+d(a2,b1), d(a1,a2)+d(b1,b2)} − (d(a1,a2)+d(b1,b2))`.
pub fn beta(m: &DistanceMatrix, a1: usize, a2: usize, b1: usize, b2: usize) -> Rational {
    let s1 = m.get(a1, b1) + m.get(a2, b2);
    let s2 = m.get(a1, b2) + m.get(a2, b1);
    let s3 = m.get(a1, a2) + m.get(b1, b2);
    let top = s1.max(s2).max(s3.clone());
    top - s3
}

/// Isolation index of a split: half the minimum of `β` over `a1, a2 ∈ A`, `b1, b2 ∈ B`.
pub fn isolation_index(m: &DistanceMatrix, s: &Split) -> Rational {
    let scaled = ScaledMatrix::new(m);
    scaled.isolation_index(&s.side_a(), &s.side_b())
}

/// Integer copy of a rational matrix, multiplied by the common denominator.
///
/// Isolation indices only add, subtract and compare entries, so the search runs on
/// machine integers whenever the scaled entries fit, and on big integers otherwise.
struct ScaledMatrix {
    n: usize,
    scale: BigInt,
    small: Option<Vec<i64>>,
    big: Vec<BigInt>,
}

impl ScaledMatrix {
    fn new(m: &DistanceMatrix) -> Self {
        let (scale, big) = m.scaled_integers();
        let small = m.scaled_i64().map(|(_, s)| s);
        Self { n: m.n(), scale, small, big }
    }

    fn isolation_index(&self, a: &[usize], b: &[usize]) -> Rational {
        let min = match &self.small {
            Some(d) => BigInt::from(min_beta(d, self.n, a, b, 0i64)),
            None => min_beta(&self.big, self.n, a, b, BigInt::zero()),
        };
        Rational::new(min, self.scale.clone()) * half()
    }
}

fn min_beta<T>(d: &[T], n: usize, a: &[usize], b: &[usize], zero: T) -> T
where
    T: Clone + Ord,
    for<'x> &'x T: Add<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    let mut best: Option<T> = None;
    for &a1 in a {
        for &a2 in a {
            let daa = &d[a1 * n + a2];
            for &b1 in b {
                for &b2 in b {
                    let s1 = &d[a1 * n + b1] + &d[a2 * n + b2];
                    let s2 = &d[a1 * n + b2] + &d[a2 * n + b1];
                    let s3 = daa + &d[b1 * n + b2];
                    let top = if s1 > s2 { s1 } else { s2 };
                    let beta = if top > s3 { &top - &s3 } else { zero.clone() };
                    if beta == zero {
                        return zero;
                    }
                    if best.as_ref().is_none_or(|cur| &beta < cur) {
                        best = Some(beta);
                    }
                }
            }
        }
    }
    best.unwrap_or(zero)
}

/// All splits with positive isolation index, weighted by that index.
///
/// Exhaustive over the `2^(n-1) - 1` candidate splits; `cap` bounds `n`.
pub fn enumerate_d_splits(m: &DistanceMatrix, cap: usize) -> Result<WeightedSplitSystem> {
    let n = m.n();
    if n > cap {
        return Err(Error::Capacity(format!(
            "d-split enumeration is exhaustive and capped at n = {cap} (got n = {n}); \
             use the circular pipeline with a known order for larger inputs"
        )));
    }
    if n < 2 {
        return Ok(WeightedSplitSystem::empty(n));
    }
    let scaled = ScaledMatrix::new(m);
    let candidates: u64 = (1u64 << (n - 1)) - 1;
    let found: Vec<(Split, Rational)> = (1..=candidates)
        .into_par_iter()
        .filter_map(|mask| {
            let b: Vec<usize> = (1..n).filter(|&p| mask >> (p - 1) & 1 == 1).collect();
            let a: Vec<usize> = (0..n).filter(|&p| p == 0 || mask >> (p - 1) & 1 == 0).collect();
            let w = scaled.isolation_index(&a, &b);
            if w > Rational::zero() {
                Some((Split::from_side(n, &a).expect("nonempty sides"), w))
            } else {
                None
            }
        })
        .collect();
    let sys = WeightedSplitSystem::new(n, found)?;
    debug_assert!(is_weakly_compatible(&sys), "d-splits are always weakly compatible");
    Ok(sys)
}

/// `Σ_S α_S δ_S` as a distance matrix.
pub fn synthesize_metric(sys: &WeightedSplitSystem) -> DistanceMatrix {
    let n = sys.n();
    DistanceMatrix::from_fn(n, |i, j| {
        sys.splits()
            .iter()
            .filter(|(s, _)| !s.same_side(i, j))
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    })
}

/// The split-prime part `d₀ = d − Σ α_S δ_S`; symmetric with zero diagonal but not
/// necessarily a metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResidue {
    /// The residue matrix.
    pub d0: DistanceMatrix,
}

impl SplitResidue {
    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        let n = self.d0.n();
        (0..n).all(|i| (0..n).all(|j| self.d0.get(i, j).is_zero()))
    }
}

/// Residue of `m` with respect to a split system.
pub fn residue(m: &DistanceMatrix, sys: &WeightedSplitSystem) -> SplitResidue {
    let synth = synthesize_metric(sys);
    let n = m.n();
    let rows = (0..n).map(|i| (0..n).map(|j| m.get(i, j) - synth.get(i, j)).collect()).collect();
    SplitResidue { d0: DistanceMatrix::from_rows(rows).expect("square") }
}

/// True when the metric equals the sum of its weighted d-splits.
pub fn is_totally_decomposable(m: &DistanceMatrix, cap: usize) -> Result<bool> {
    let sys = enumerate_d_splits(m, cap)?;
    Ok(residue(m, &sys).is_zero())
}

/// Weak compatibility: no three splits `S1, S2, S3` and points `x0..x3` with
/// `S_j(x_i) = S_j(x_0)` exactly when `i = j`.
///
/// For a fixed triple and base point `x0` the three witnesses are independent, so
/// the search costs `O(|S|^3 n^2)` instead of `O(|S|^3 n^4)`.
pub fn is_weakly_compatible(sys: &WeightedSplitSystem) -> bool {
    find_weak_incompatibility(sys).is_none()
}

/// A witness `(i, j, k, [x0, x1, x2, x3])` of weak incompatibility, if any.
pub fn find_weak_incompatibility(
    sys: &WeightedSplitSystem,
) -> Option<(usize, usize, usize, [usize; 4])> {
    let n = sys.n();
    let s: Vec<&Split> = sys.splits().iter().map(|(s, _)| s).collect();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                let trio = [s[i], s[j], s[k]];
                for x0 in 0..n {
                    let mut witness = [x0, 0, 0, 0];
                    let mut ok = true;
                    for (slot, w) in witness.iter_mut().skip(1).enumerate() {
                        let hit = (0..n).find(|&x| {
                            (0..3).all(|t| trio[t].same_side(x, x0) == (t == slot))
                        });
                        match hit {
                            Some(x) => *w = x,
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        return Some((i, j, k, witness));
                    }
                }
            }
        }
    }
    None
}

/// Connected components of the incompatibility graph, as sorted lists of split
/// indices into `sys.splits()`. Components are ordered by their smallest index.
pub fn incompatibility_components(sys: &WeightedSplitSystem) -> Vec<Vec<usize>> {
    let s = sys.splits();
    let mut uf = UnionFind::new(s.len());
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if !s[i].0.compatible(&s[j].0) {
                uf.union(i, j);
            }
        }
    }
    uf.groups()
}

/// Minimal union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    /// `n` singletons.
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    /// Representative of `x`.
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns true when they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes as sorted lists, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort();
        groups
    }

    /// Number of classes.
    pub fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::int;

    fn split(n: usize, side: &[usize]) -> Split {
        Split::from_side(n, side).unwrap()
    }

    #[test]
    fn canonical_side_contains_zero() {
        let s = split(4, &[1, 2]);
        assert_eq!(s.side_a(), vec![0, 3]);
        assert_eq!(s, split(4, &[0, 3]));
        assert!(Split::from_side(3, &[]).is_err());
        assert!(Split::from_side(3, &[0, 1, 2]).is_err());
    }

    #[test]
    fn beta_examples() {
        let two = fixtures::two_points();
        assert_eq!(beta(&two, 0, 0, 1, 1), int(2));
        let h = fixtures::hexagon();
        assert_eq!(beta(&h, 1, 1, 0, 2), int(2));
        assert_eq!(beta(&h, 0, 1, 0, 1), int(0));
    }

    #[test]
    fn isolation_index_examples() {
        assert_eq!(isolation_index(&fixtures::two_points(), &split(2, &[0])), int(1));
        let h = fixtures::hexagon();
        assert_eq!(isolation_index(&h, &split(6, &[1])), int(1));
        let k = fixtures::k23();
        for mask in 1u32..16 {
            let side: Vec<usize> =
                (0..5).filter(|&p| p == 0 || mask >> (p - 1) & 1 == 0).collect();
            if side.len() < 5 {
                assert_eq!(isolation_index(&k, &split(5, &side)), int(0));
            }
        }
    }

    #[test]
    fn prime_examples_have_no_splits() {
        assert!(enumerate_d_splits(&fixtures::k23(), 16).unwrap().is_empty());
        assert!(enumerate_d_splits(&fixtures::hypercube3(), 16).unwrap().is_empty());
        let r = residue(&fixtures::k23(), &WeightedSplitSystem::empty(5));
        assert_eq!(r.d0, fixtures::k23());
    }

    #[test]
    fn hexagon_has_fifteen_unit_splits() {
        let h = fixtures::hexagon();
        let sys = enumerate_d_splits(&h, 16).unwrap();
        assert_eq!(sys.len(), 15);
        assert!(sys.splits().iter().all(|(_, w)| w == &int(1)));
        assert_eq!(synthesize_metric(&sys), h);
        assert!(residue(&h, &sys).is_zero());
        assert!(is_totally_decomposable(&h, 16).unwrap());
        assert!(is_weakly_compatible(&sys));
    }

    #[test]
    fn capacity_error_above_cap() {
        let big = fixtures::circle_points(17);
        assert!(matches!(enumerate_d_splits(&big, 16), Err(Error::Capacity(_))));
    }

    #[test]
    fn three_crossing_splits_are_not_weakly_compatible() {
        let n = 6;
        let sys = WeightedSplitSystem::new(
            n,
            vec![
                (split(n, &[0, 1, 4]), int(1)),
                (split(n, &[0, 2, 4]), int(1)),
                (split(n, &[0, 3, 4]), int(1)),
                (split(n, &[0, 1, 2, 3]), int(1)),
            ],
        )
        .unwrap();
        let (i, j, k, x) = find_weak_incompatibility(&sys).expect("witness");
        let s = sys.splits();
        for (slot, &t) in [i, j, k].iter().enumerate() {
            for w in 1..4 {
                assert_eq!(s[t].0.same_side(x[w], x[0]), slot + 1 == w);
            }
        }
        assert!(is_weakly_compatible(&WeightedSplitSystem::empty(4)));
    }

    #[test]
    fn incompatibility_component_examples() {
        let pent = crate::circular::metric_from_alpha_positional(&fixtures::unit_alpha(5));
        let sys = enumerate_d_splits(&pent, 16).unwrap();
        assert_eq!(sys.len(), 10);
        let comps = incompatibility_components(&sys);
        assert_eq!(comps.len(), 6);
        assert_eq!(comps.iter().filter(|c| c.len() == 5).count(), 1);

        let tree = WeightedSplitSystem::new(
            5,
            vec![(split(5, &[0, 1]), int(1)), (split(5, &[3, 4]), int(2)), (split(5, &[2]), int(1))],
        )
        .unwrap();
        assert_eq!(incompatibility_components(&tree).len(), 3);
    }
}

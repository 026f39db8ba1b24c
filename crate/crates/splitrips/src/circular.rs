//! Circular decomposable metrics.
//!
//! A metric on `n` points is circular decomposable when it is a nonnegative
//! combination of the splits `S_ij = {i, …, j-1} | rest` of a polygon. This module
//! converts between distances and the weight matrix `α`, recognises circular
//! metrics by search, computes the turning function `σ`, the maps `M` and `M̄`,
//! the star property, degenerate-point removal and the closed-form homotopy type
//! of `VR_r` for monotone metrics.
//!
//! All functions taking a [`CircularDecomposition`] work in *positions*: position
//! `i` is the point `order[i]` of the source metric.

use crate::cyclic::{self, Graph, HomotopyType, OrientationFailure};
use crate::error::{Error, Result};
use crate::metric::{Cycle, DistanceMatrix};
use crate::number::{Rational, format_rational, half};
use num::bigint::BigInt;
use num::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::ops::{Add, Sub};

/// Largest `n` accepted by [`recognize_circular`].
pub const RECOGNITION_CAP: usize = 11;

/// A circular order together with the weights of its circular splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircularDecomposition {
    /// `order[i]` is the source point at position `i` (0-based).
    pub order: Vec<usize>,
    /// Symmetric, zero-diagonal, nonnegative weights indexed by position.
    #[serde(with = "crate::number::serde_rational_matrix")]
    pub alpha: Vec<Vec<Rational>>,
}

impl CircularDecomposition {
    /// Validates and wraps an order and a weight matrix.
    pub fn new(order: Vec<usize>, alpha: Vec<Vec<Rational>>) -> Result<Self> {
        let n = order.len();
        check_permutation(&order, n)?;
        if alpha.len() != n || alpha.iter().any(|r| r.len() != n) {
            return Err(Error::Structural(format!("alpha must be {n}×{n}")));
        }
        for i in 0..n {
            if !alpha[i][i].is_zero() {
                return Err(Error::Structural(format!("alpha[{0}][{0}] must be 0", i + 1)));
            }
            for j in 0..n {
                if alpha[i][j] != alpha[j][i] {
                    return Err(Error::Structural(format!(
                        "alpha is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if alpha[i][j].is_negative() {
                    return Err(Error::Structural(format!(
                        "alpha[{}][{}] is negative",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { order, alpha })
    }

    /// Decomposition with the identity order.
    pub fn identity(alpha: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new((0..alpha.len()).collect(), alpha)
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Distances indexed by position.
    pub fn positional_metric(&self) -> DistanceMatrix {
        metric_from_alpha_positional(&self.alpha)
    }
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &p in order {
        if p >= n || seen[p] {
            return Err(Error::Structural("order is not a permutation".into()));
        }
        seen[p] = true;
    }
    if order.len() != n {
        return Err(Error::Structural(format!("order has {} entries, expected {n}", order.len())));
    }
    Ok(())
}

/// Distances of the weight matrix `α` in positional labels:
/// `d(a, b) = Σ_{i ∈ a+1..b} Σ_{j ∈ b+1..a} α_ij` (clockwise arcs).
pub fn metric_from_alpha_positional(alpha: &[Vec<Rational>]) -> DistanceMatrix {
    let n = alpha.len();
    let cyc = Cycle::new(n);
    DistanceMatrix::from_fn(n, |a, b| {
        let mut total = Rational::zero();
        for i in cyc.arc(cyc.next(a), b) {
            for j in cyc.arc(cyc.next(b), a) {
                total += &alpha[i][j];
            }
        }
        total
    })
}

/// Distances of a decomposition in the source labels.
pub fn metric_from_alpha(cd: &CircularDecomposition) -> DistanceMatrix {
    let pos = cd.positional_metric();
    let n = cd.n();
    let mut inverse = vec![0; n];
    for (i, &p) in cd.order.iter().enumerate() {
        inverse[p] = i;
    }
    DistanceMatrix::from_fn(n, |a, b| pos.get(inverse[a], inverse[b]).clone())
}

/// Solves for the circular weights of `m` under `order`, without a sign check.
///
/// `α_ij = ½ (d_ij + d_{i-1,j-1} − d_{i,j-1} − d_{i-1,j})` in positions.
pub fn solve_alpha(m: &DistanceMatrix, order: &[usize]) -> Result<Vec<Vec<Rational>>> {
    let n = m.n();
    check_permutation(order, n)?;
    let d = m.permute(order);
    let cyc = Cycle::new(n);
    let mut alpha = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (ip, jp) = (cyc.prev(i), cyc.prev(j));
            let v = (d.get(i, j) + d.get(ip, jp) - d.get(i, jp) - d.get(ip, j)) * half();
            alpha[i][j] = v.clone();
            alpha[j][i] = v;
        }
    }
    Ok(alpha)
}

/// Recovers the circular decomposition of `m` under `order`.
///
/// Fails with [`Error::NotCircular`] naming the most negative weight, or when the
/// weights do not reproduce `m` (which happens only for non-metrics).
pub fn alpha_from_metric(m: &DistanceMatrix, order: &[usize]) -> Result<CircularDecomposition> {
    let alpha = solve_alpha(m, order)?;
    let n = m.n();
    let mut worst: Option<(usize, usize, &Rational)> = None;
    for i in 0..n {
        for j in i + 1..n {
            if alpha[i][j].is_negative() && worst.is_none_or(|(_, _, w)| &alpha[i][j] < w) {
                worst = Some((i, j, &alpha[i][j]));
            }
        }
    }
    if let Some((i, j, w)) = worst {
        return Err(Error::NotCircular(format!(
            "most negative weight alpha({}, {}) = {} at positions ({}, {})",
            order[i] + 1,
            order[j] + 1,
            format_rational(w),
            i + 1,
            j + 1
        )));
    }
    if metric_from_alpha_positional(&alpha) != m.permute(order) {
        return Err(Error::NotCircular("weights do not reproduce the matrix".into()));
    }
    Ok(CircularDecomposition { order: order.to_vec(), alpha })
}

/// Searches circular orders (point `0` first) for one accepted by
/// [`alpha_from_metric`]. Partial orders are pruned as soon as a weight determined
/// by the placed points is negative.
pub fn recognize_circular(m: &DistanceMatrix) -> Result<Option<(Vec<usize>, CircularDecomposition)>> {
    let n = m.n();
    if n > RECOGNITION_CAP {
        return Err(Error::Capacity(format!(
            "circular recognition searches orders exhaustively and is capped at {RECOGNITION_CAP} points (got {n}); supply an order"
        )));
    }
    if n <= 3 {
        let order: Vec<usize> = (0..n).collect();
        return Ok(alpha_from_metric(m, &order).ok().map(|cd| (order, cd)));
    }
    let found = match m.scaled_i64() {
        Some((_, d)) => search_orders(&d, n, 0i64, m),
        None => search_orders(&m.scaled_integers().1, n, BigInt::zero(), m),
    };
    Ok(found.map(|cd| (cd.order.clone(), cd)))
}

fn search_orders<T>(d: &[T], n: usize, zero: T, m: &DistanceMatrix) -> Option<CircularDecomposition>
where
    T: Clone + Ord,
    for<'x> &'x T: Add<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    let mut order = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    extend(d, n, &zero, m, &mut order, &mut used)
}

fn extend<T>(
    d: &[T],
    n: usize,
    zero: &T,
    m: &DistanceMatrix,
    order: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<CircularDecomposition>
where
    T: Clone + Ord,
    for<'x> &'x T: Add<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    if order.len() == n {
        if order[1] > order[n - 1] {
            return None;
        }
        return alpha_from_metric(m, order).ok();
    }
    for p in 1..n {
        if used[p] {
            continue;
        }
        order.push(p);
        let k = order.len() - 1;
        let ok = (1..k).all(|i| {
            let (a, b, c, e) = (order[i], order[k], order[i - 1], order[k - 1]);
            let pos = &d[a * n + b] + &d[c * n + e];
            let neg = &d[a * n + e] + &d[c * n + b];
            &pos - &neg >= *zero
        });
        if ok {
            used[p] = true;
            if let Some(cd) = extend(d, n, zero, m, order, used) {
                return Some(cd);
            }
            used[p] = false;
        }
        order.pop();
    }
    None
}

/// The turning function `σ` of a decomposition (positions, 0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaTable {
    /// `sigma[c]` is `σ(c)`, or `None` when undefined.
    pub sigma: Vec<Option<usize>>,
    /// Points with undefined `σ`, ascending.
    pub undefined: Vec<usize>,
}

impl SigmaTable {
    /// `σ(c)`, panicking when undefined.
    pub fn get(&self, c: usize) -> usize {
        self.sigma[c].expect("sigma undefined")
    }
}

/// Computes `σ(c)` as the last `a` in `c+1, …, c-1` with
/// `Σ_{i=a+1}^{c} α_ic ≥ Σ_{i=c+1}^{a} α_ic` (circular sums).
pub fn compute_sigma(cd: &CircularDecomposition) -> SigmaTable {
    let n = cd.n();
    let cyc = Cycle::new(n);
    let sigma: Vec<Option<usize>> = (0..n)
        .into_par_iter()
        .map(|c| {
            if n < 2 {
                return None;
            }
            let col = |i: usize| &cd.alpha[i][c];
            let mut left: Rational = (0..n).map(col).sum();
            let mut right = Rational::zero();
            let mut last = None;
            for step in 1..n {
                let a = cyc.add(c, step);
                left -= col(a);
                right += col(a);
                if left >= right {
                    last = Some(a);
                }
            }
            last
        })
        .collect();
    let undefined = (0..n).filter(|&c| sigma[c].is_none()).collect();
    SigmaTable { sigma, undefined }
}

/// `M`, `M̄` and the star property of a decomposition (positions, 0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneCertificate {
    /// `M(a)`: the last `m` in `a+1, …, a-1` with `σ(m) ≺ a ≺ m`.
    pub m: Vec<usize>,
    /// `M̄(a) = M(a)` when `M(M(a)) ⪯ a ≺ M(a)`, else `M(a) - 1`.
    pub mbar: Vec<usize>,
    /// `∀a ∀b: a ≺ b ⪯ σ(a) ⇒ σ(a) ⪯ σ(b) ≺ a`.
    pub star_holds: bool,
}

/// Computes `M`, `M̄` and the star property.
pub fn compute_m(cd: &CircularDecomposition, st: &SigmaTable) -> Result<MonotoneCertificate> {
    let n = cd.n();
    if !st.undefined.is_empty() {
        let pts: Vec<String> = st.undefined.iter().map(|c| (c + 1).to_string()).collect();
        return Err(Error::Precondition(format!(
            "sigma undefined at positions {}; remove degenerate points first",
            pts.join(", ")
        )));
    }
    let cyc = Cycle::new(n);
    let sigma: Vec<usize> = (0..n).map(|c| st.get(c)).collect();
    let mut m = Vec::with_capacity(n);
    for a in 0..n {
        let found = (1..n)
            .map(|s| cyc.add(a, s))
            .filter(|&x| cyc.between(sigma[x], a, x))
            .next_back();
        match found {
            Some(x) => m.push(x),
            None => {
                return Err(Error::Precondition(format!("M({}) is undefined", a + 1)));
            }
        }
    }
    let mbar = (0..n)
        .map(|a| {
            let x = m[a];
            if cyc.between_left_closed(m[x], a, x) { x } else { cyc.prev(x) }
        })
        .collect();
    let star_holds = (0..n).all(|a| {
        (1..n).map(|s| cyc.add(a, s)).all(|b| {
            !cyc.between_right_closed(a, b, sigma[a])
                || cyc.chain(&[sigma[a], sigma[b], a], &[false, true])
        })
    });
    Ok(MonotoneCertificate { m, mbar, star_holds })
}

/// True when the decomposition is monotone (the star property holds).
pub fn is_monotone(cd: &CircularDecomposition) -> Result<bool> {
    Ok(compute_m(cd, &compute_sigma(cd))?.star_holds)
}

/// The first violated monotonicity condition for a candidate map `mm` (positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyViolation {
    /// Which condition failed: 0 fixed point, 1..=4 the inequality families,
    /// 5 and 6 the two non-ambiguity implications.
    pub family: u8,
    /// The witnessing points (0-based positions; unused slots repeat `a`).
    pub points: [usize; 3],
}

/// Checks every monotonicity condition of the map `mm` against positional distances `d`:
///
/// 1. `a ⪯ b ≺ c ⪯ mm(a) ⇒ d(b, c-1) < d(b, c)`
/// 2. `a ⪯ b ≺ c ⪯ mm(a) ⇒ d(b+1, c) ≤ d(b, c)`
/// 3. `mm(a) ≺ b ≺ c ⪯ a ⇒ d(b+1, c) ≤ d(b, c)`
/// 4. `mm(a) ≺ b ≺ c ⪯ a ⇒ d(b, c-1) < d(b, c)`
/// 5. `a ≺ b ⪯ mm(a) ⇒ mm(b) ⪯ a ≺ b`
/// 6. `mm(b) ≺ a ≺ b ⇒ a ≺ b ⪯ mm(a)`
///
/// together with `mm(a) ≠ a`.
pub fn monotone_violation(d: &DistanceMatrix, mm: &[usize]) -> Option<FamilyViolation> {
    let n = d.n();
    let cyc = Cycle::new(n);
    let v = |family, a, b, c| Some(FamilyViolation { family, points: [a, b, c] });
    for a in 0..n {
        if mm[a] == a {
            return v(0, a, a, a);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if b == c {
                    continue;
                }
                let (cm, bp) = (cyc.prev(c), cyc.next(b));
                if cyc.chain(&[a, b, c, mm[a]], &[false, true, false]) {
                    if d.get(b, cm) >= d.get(b, c) {
                        return v(1, a, b, c);
                    }
                    if d.get(bp, c) > d.get(b, c) {
                        return v(2, a, b, c);
                    }
                }
                if cyc.chain(&[mm[a], b, c, a], &[true, true, false]) {
                    if d.get(bp, c) > d.get(b, c) {
                        return v(3, a, b, c);
                    }
                    if d.get(b, cm) >= d.get(b, c) {
                        return v(4, a, b, c);
                    }
                }
            }
            if a == b {
                continue;
            }
            if cyc.between_right_closed(a, b, mm[a]) && !cyc.chain(&[mm[b], a, b], &[false, true]) {
                return v(5, a, b, a);
            }
            if cyc.between(mm[b], a, b) && !cyc.between_right_closed(a, b, mm[a]) {
                return v(6, a, b, a);
            }
        }
    }
    None
}

/// One removed degenerate point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Removal {
    /// The removed point, as a position of the input.
    pub point: usize,
    /// `R_c`: smallest distance from the point to the points remaining after it.
    #[serde(with = "crate::number::serde_rational")]
    pub threshold: Rational,
}

/// Outcome of [`remove_degenerate_points`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateRemoval {
    /// Surviving positions of the input, ascending.
    pub kept: Vec<usize>,
    /// Removed points in removal order.
    pub removals: Vec<Removal>,
    /// The metric restricted to `kept`.
    pub reduced: DistanceMatrix,
}

/// Removes points with undefined `σ` one at a time, recomputing `σ` on the induced
/// circular order after each removal. `m` must be circular decomposable in its
/// identity order. Stops when every `σ` is defined or at most two points remain.
pub fn remove_degenerate_points(m: &DistanceMatrix) -> Result<DegenerateRemoval> {
    if m.n() <= 2 {
        return Err(Error::DegenerateInput(format!(
            "{} point(s): sigma is undefined everywhere",
            m.n()
        )));
    }
    let mut kept: Vec<usize> = (0..m.n()).collect();
    let mut removals = Vec::new();
    while kept.len() > 2 {
        let sub = m.restrict(&kept);
        let cd = alpha_from_metric(&sub, &(0..kept.len()).collect::<Vec<_>>())?;
        let st = compute_sigma(&cd);
        let Some(&c) = st.undefined.first() else { break };
        let point = kept.remove(c);
        let threshold = kept.iter().map(|&x| m.get(point, x)).min().cloned().unwrap_or_default();
        removals.push(Removal { point, threshold });
    }
    let reduced = m.restrict(&kept);
    Ok(DegenerateRemoval { kept, removals, reduced })
}

/// Result of the closed-form computation of `VR_r` for a monotone metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrHomotopy {
    /// Homotopy type of `VR_r(X)`.
    pub homotopy: HomotopyType,
    /// Degenerate points removed before the computation.
    pub removals: Vec<Removal>,
    /// True when `G_r` of the reduced space has a cone vertex.
    pub cone: bool,
    /// Outcome of orienting `G_r` with `M̄`, when it was attempted.
    pub orientation: Option<std::result::Result<(), OrientationFailure>>,
    /// The terminal circulant `(n', k')` after dismantling, when computed.
    pub terminal: Option<cyclic::Circulant>,
}

/// Homotopy type of the open complex `VR_r(X)` (`diam < r`) for a monotone
/// decomposition, through degenerate-point removal, cone detection and the winding
/// fraction of the dismantled graph.
pub fn monotone_vr_homotopy(cd: &CircularDecomposition, r: &Rational) -> Result<VrHomotopy> {
    if !r.is_positive() {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    let d = cd.positional_metric();
    let n = d.n();
    let (reduced, removals) = if n <= 2 {
        (d.clone(), Vec::new())
    } else {
        let red = remove_degenerate_points(&d)?;
        (red.reduced, red.removals)
    };
    let nr = reduced.n();
    let mut orientation = None;
    let mut mbar = None;
    if nr >= 3 {
        let rcd = alpha_from_metric(&reduced, &(0..nr).collect::<Vec<_>>())?;
        let cert = compute_m(&rcd, &compute_sigma(&rcd))?;
        if !cert.star_holds {
            return Err(Error::Precondition(
                "metric is not monotone; use the Mayer-Vietoris recursion".into(),
            ));
        }
        mbar = Some(cert.mbar);
    }
    let g = Graph::threshold(&reduced, r);
    let extra = removals.iter().filter(|rm| r <= &rm.threshold).count();
    let cone = g.cone_vertex().is_some();
    if let Some(mb) = &mbar {
        orientation = Some(cyclic::orient_and_check(&g, mb).map(|_| ()));
    }
    let (base, terminal) = if cone {
        (HomotopyType::Contractible, None)
    } else {
        let (_, c) = cyclic::terminal_circulant(&g)?;
        (cyclic::circulant_type(c), Some(c))
    };
    Ok(VrHomotopy { homotopy: base.with_isolated(extra), removals, cone, orientation, terminal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::{frac, int};

    fn identity(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    /// Independent route: solve `d = Σ α_ij δ_{S_ij}` by Gaussian elimination.
    fn alpha_by_elimination(m: &DistanceMatrix) -> Vec<Vec<Rational>> {
        let n = m.n();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let k = pairs.len();
        let mut rows: Vec<Vec<Rational>> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut row: Vec<Rational> = pairs
                    .iter()
                    .map(|&(i, j)| {
                        let inside = |x: usize| x >= i && x < j;
                        if inside(a) != inside(b) { int(1) } else { int(0) }
                    })
                    .collect();
                row.push(m.get(a, b).clone());
                row
            })
            .collect();
        for col in 0..k {
            let piv = (col..k).find(|&r| !rows[r][col].is_zero()).expect("basis");
            rows.swap(col, piv);
            let p = rows[col][col].clone();
            for x in rows[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..k {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let mut alpha = vec![vec![int(0); n]; n];
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            alpha[i][j] = rows[idx][k].clone();
            alpha[j][i] = rows[idx][k].clone();
        }
        alpha
    }

    #[test]
    fn hexagon_distances() {
        let d = metric_from_alpha_positional(&fixtures::unit_alpha(6));
        assert_eq!(d, fixtures::hexagon());
        assert_eq!(d.get(0, 1), &int(5));
        assert_eq!(d.get(0, 3), &int(9));
    }

    #[test]
    fn seven_and_twelve_point_tables() {
        let d7 = metric_from_alpha_positional(&fixtures::seven_point_alpha());
        assert_eq!(d7, fixtures::seven_point());
        assert_eq!(d7.get(1, 3), &int(13));
        assert_eq!(d7.get(0, 6), &int(8));
        let d12 = metric_from_alpha_positional(&fixtures::twelve_point_alpha());
        assert_eq!(d12, fixtures::twelve_point());
        assert_eq!(d12.get(0, 6), &int(52));
        assert_eq!(d12.get(1, 7), &int(44));
    }

    #[test]
    fn inverse_formula_matches_elimination() {
        for m in [fixtures::hexagon(), fixtures::seven_point(), fixtures::circle_five_points()] {
            let solved = solve_alpha(&m, &identity(m.n())).unwrap();
            assert_eq!(solved, alpha_by_elimination(&m));
        }
        let cd = alpha_from_metric(&fixtures::twelve_point(), &identity(12)).unwrap();
        assert_eq!(cd.alpha, fixtures::twelve_point_alpha());
        let cd = alpha_from_metric(&fixtures::hexagon(), &identity(6)).unwrap();
        assert_eq!(cd.alpha, fixtures::unit_alpha(6));
    }

    #[test]
    fn k23_is_rejected() {
        let m = fixtures::k23();
        assert!(matches!(alpha_from_metric(&m, &identity(5)), Err(Error::NotCircular(_))));
        assert!(recognize_circular(&m).unwrap().is_none());
    }

    #[test]
    fn recognition() {
        let (order, cd) = recognize_circular(&fixtures::hexagon()).unwrap().unwrap();
        assert_eq!(order, identity(6));
        assert_eq!(cd.alpha, fixtures::unit_alpha(6));
        let pi = [3, 0, 5, 1, 4, 2];
        let shuffled = fixtures::hexagon().permute(&pi);
        let (order, cd) = recognize_circular(&shuffled).unwrap().unwrap();
        assert_eq!(metric_from_alpha(&cd), shuffled);
        let relabelled: Vec<usize> = order.iter().map(|&p| pi[p]).collect();
        let start = relabelled.iter().position(|&p| p == 0).unwrap();
        let rotated: Vec<usize> = (0..6).map(|k| relabelled[(start + k) % 6]).collect();
        assert!(rotated == identity(6) || rotated == vec![0, 5, 4, 3, 2, 1]);
        assert!(recognize_circular(&fixtures::hypercube3()).unwrap().is_none());
        let big = fixtures::circle_points(12);
        assert!(matches!(recognize_circular(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn sigma_and_m_on_hexagon() {
        let cd = CircularDecomposition::identity(fixtures::unit_alpha(6)).unwrap();
        let st = compute_sigma(&cd);
        assert!(st.undefined.is_empty());
        for c in 0..6 {
            assert_eq!(st.get(c), (c + 2) % 6);
        }
        let cert = compute_m(&cd, &st).unwrap();
        for a in 0..6 {
            assert_eq!(cert.m[a], (a + 3) % 6);
        }
        assert!(cert.star_holds);
    }

    #[test]
    fn sigma_and_m_on_five_circle_points() {
        let m = fixtures::circle_five_points();
        let cd = alpha_from_metric(&m, &identity(5)).unwrap();
        let st = compute_sigma(&cd);
        let one_based: Vec<usize> = (0..5).map(|c| st.get(c) + 1).collect();
        assert_eq!(one_based, vec![3, 3, 4, 5, 2]);
        let cert = compute_m(&cd, &st).unwrap();
        let m1: Vec<usize> = cert.m.iter().map(|x| x + 1).collect();
        assert_eq!(m1, vec![4, 4, 5, 2, 3]);
        assert_eq!(cert.mbar[0] + 1, 3);
        for a in 1..5 {
            assert_eq!(cert.mbar[a], cert.m[a]);
        }
        assert!(cert.star_holds);
        assert_eq!(monotone_violation(&m, &cert.mbar), None);
    }

    #[test]
    fn seven_point_is_not_monotone() {
        let cd = CircularDecomposition::identity(fixtures::seven_point_alpha()).unwrap();
        assert!(!is_monotone(&cd).unwrap());
        assert!(monotone_violation(&fixtures::seven_point(), &compute_m(&cd, &compute_sigma(&cd)).unwrap().mbar).is_some());
    }

    #[test]
    fn antipodal_circle_points_are_monotone() {
        for k in 2..6 {
            let m = fixtures::circle_points(2 * k);
            let cd = alpha_from_metric(&m, &identity(2 * k)).unwrap();
            let cert = compute_m(&cd, &compute_sigma(&cd)).unwrap();
            assert!(cert.star_holds);
            for a in 0..2 * k {
                assert_eq!(cert.m[a], (a + k) % (2 * k));
            }
        }
    }

    fn dominated_column_instance() -> CircularDecomposition {
        let mut alpha = fixtures::unit_alpha(5);
        alpha[1][0] = int(10);
        alpha[0][1] = int(10);
        CircularDecomposition::identity(alpha).unwrap()
    }

    #[test]
    fn undefined_sigma_and_removal() {
        let cd = dominated_column_instance();
        let st = compute_sigma(&cd);
        assert!(st.undefined.contains(&0));
        assert!(matches!(compute_m(&cd, &st), Err(Error::Precondition(_))));
        let d = cd.positional_metric();
        let red = remove_degenerate_points(&d).unwrap();
        assert_eq!(red.removals[0].point, 0);
        let row_min = (1..5).map(|x| d.get(0, x)).min().unwrap().clone();
        assert_eq!(red.removals[0].threshold, row_min);
        let plain = CircularDecomposition::identity(fixtures::unit_alpha(6)).unwrap();
        let red = remove_degenerate_points(&plain.positional_metric()).unwrap();
        assert!(red.removals.is_empty());
        assert_eq!(red.kept, identity(6));
        assert!(matches!(
            remove_degenerate_points(&fixtures::two_points()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn hexagon_homotopy() {
        let cd = CircularDecomposition::identity(fixtures::unit_alpha(6)).unwrap();
        let h = monotone_vr_homotopy(&cd, &int(6)).unwrap();
        assert_eq!(h.homotopy, HomotopyType::OddSphere(0));
        assert_eq!(h.terminal, Some(cyclic::Circulant { n: 6, k: 1 }));
        assert_eq!(h.orientation, Some(Ok(())));
        let h = monotone_vr_homotopy(&cd, &int(9)).unwrap();
        assert_eq!(h.homotopy, HomotopyType::WedgeEvenSpheres(1, 1));
        let h = monotone_vr_homotopy(&cd, &int(10)).unwrap();
        assert_eq!(h.homotopy, HomotopyType::Contractible);
        assert!(h.cone);
        let h = monotone_vr_homotopy(&cd, &frac(9, 2)).unwrap();
        assert_eq!(h.homotopy, HomotopyType::Discrete(6));
    }

    #[test]
    fn non_monotone_homotopy_is_refused() {
        let cd = CircularDecomposition::identity(fixtures::seven_point_alpha()).unwrap();
        assert!(matches!(monotone_vr_homotopy(&cd, &int(13)), Err(Error::Precondition(_))));
    }
}

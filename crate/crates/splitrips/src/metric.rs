//! Distance matrices, cyclic order arithmetic and circular sums.
//!
//! Library functions index points from `0`. Serialized reports, CSV/JSON files and
//! [`CyclicIndex`] values are 1-based, so point `1` in a table is index `0` here.

use crate::error::{Error, Result};
use crate::number::{Rational, to_f64};
use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A square matrix of rationals, intended to be a (pseudo)metric.
///
/// Construction only checks the shape; [`DistanceMatrix::validate`] reports every
/// violated metric axiom and [`DistanceMatrix::checked`] combines both.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DistanceMatrix(n = {})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| crate::number::format_rational(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One violated metric axiom. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d(i, i) != 0`.
    NonzeroDiagonal { i: usize },
    /// `d(i, j) < 0`.
    Negative { i: usize, j: usize },
    /// `d(i, j) != d(j, i)`; reported once with `i < j`.
    Asymmetric { i: usize, j: usize },
    /// `d(i, j) > d(i, k) + d(k, j)`.
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            Violation::Negative { i, j } => write!(f, "negative entry at ({i},{j})"),
            Violation::Asymmetric { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Violation::Triangle { i, j, k } => {
                write!(f, "triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")
            }
        }
    }
}

/// Outcome of [`DistanceMatrix::validate`]. An empty report means a valid metric.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every violation found, in scan order.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// True when no axiom is violated.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DistanceMatrix {
    /// Builds a matrix from rows, checking only that it is square and nonempty.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Structural("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer rows. Convenient for fixtures.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| crate::number::int(x)).collect()).collect(),
        )
    }

    /// Builds the symmetric matrix whose entry `(i, j)` is `f(i, j)` for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                entries[i * n + j] = v.clone();
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    /// Builds a matrix and rejects it unless it is a valid metric.
    pub fn checked(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        let report = m.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidMetric(format!(
                "{} violation(s), first: {v}",
                report.violations.len()
            )));
        }
        Ok(m)
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    /// Rows as nested vectors.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Lists every violated metric axiom.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut violations = Vec::new();
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                violations.push(Violation::NonzeroDiagonal { i: i + 1 });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j).is_negative() {
                    violations.push(Violation::Negative { i: i + 1, j: j + 1 });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    violations.push(Violation::Asymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if k != i && k != j && self.get(i, j) > &(self.get(i, k) + self.get(k, j)) {
                        violations.push(Violation::Triangle { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// The submatrix on `points`, in the given order.
    pub fn restrict(&self, points: &[usize]) -> Self {
        let m = points.len();
        let mut entries = Vec::with_capacity(m * m);
        for &p in points {
            for &q in points {
                entries.push(self.get(p, q).clone());
            }
        }
        Self { n: m, entries }
    }

    /// Relabels points so that new point `i` is old point `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Self {
        self.restrict(order)
    }

    /// Largest pairwise distance within `subset`.
    pub fn diameter(&self, subset: &[usize]) -> Result<Rational> {
        if subset.is_empty() {
            return Err(Error::Precondition("diameter of an empty set".into()));
        }
        let mut best = Rational::zero();
        for (x, &p) in subset.iter().enumerate() {
            for &q in &subset[x + 1..] {
                if self.get(p, q) > &best {
                    best = self.get(p, q).clone();
                }
            }
        }
        Ok(best)
    }

    /// Smallest, over centers `c` in `subset`, of the largest distance from `c` to `subset`.
    pub fn radius(&self, subset: &[usize]) -> Result<Rational> {
        if subset.is_empty() {
            return Err(Error::Precondition("radius of an empty set".into()));
        }
        subset
            .iter()
            .map(|&c| subset.iter().map(|&q| self.get(c, q)).max().cloned().unwrap_or_default())
            .min()
            .ok_or_else(|| Error::Internal("radius scan produced no value".into()))
    }

    /// Diameter of the whole space.
    pub fn diam(&self) -> Rational {
        self.entries.iter().max().cloned().unwrap_or_default()
    }

    /// Radius of the whole space.
    pub fn rad(&self) -> Rational {
        let all: Vec<usize> = (0..self.n).collect();
        self.radius(&all).unwrap_or_default()
    }

    /// Sorted distinct off-diagonal values.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut vals: Vec<Rational> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Replaces every entry by its rank among the sorted distinct entries.
    ///
    /// Returns the rank matrix (row-major) and the value of each rank. Rank `0` is
    /// always the value `0` when the diagonal is zero. Filtrations only compare
    /// entries, so the rank matrix carries all the information they need.
    pub fn ordinal(&self) -> (Vec<u32>, Vec<Rational>) {
        let mut values: Vec<Rational> = self.entries.clone();
        values.sort();
        values.dedup();
        let ranks = self
            .entries
            .iter()
            .map(|v| values.binary_search(v).expect("value present") as u32)
            .collect();
        (ranks, values)
    }

    /// Lossy conversion to floats, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }

    /// Entries multiplied by the least common denominator, with that denominator.
    pub fn scaled_integers(&self) -> (BigInt, Vec<BigInt>) {
        let scale = self.entries.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints = self.entries.iter().map(|q| q.numer() * (&scale / q.denom())).collect();
        (scale, ints)
    }

    /// Like [`DistanceMatrix::scaled_integers`] but as machine integers, when every
    /// scaled entry is small enough that sums of eight entries cannot overflow.
    pub fn scaled_i64(&self) -> Option<(BigInt, Vec<i64>)> {
        let (scale, ints) = self.scaled_integers();
        let limit = i64::MAX / 8;
        let small: Option<Vec<i64>> = ints
            .iter()
            .map(|v| v.to_i64().filter(|x| x.abs() < limit))
            .collect();
        small.map(|s| (scale, s))
    }

    /// Smallest positive off-diagonal distance, if any.
    pub fn min_positive(&self) -> Option<Rational> {
        self.distinct_values().into_iter().find(|v| v.is_positive())
    }
}

/// Cyclic arithmetic on `0..n` for the order `0 ≺ 1 ≺ … ≺ n-1 ≺ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// Number of points on the cycle.
    pub n: usize,
}

impl Cycle {
    /// Cycle of `n` points.
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `a + k` modulo `n`.
    #[inline]
    pub fn add(&self, a: usize, k: usize) -> usize {
        (a + k) % self.n
    }

    /// `a - k` modulo `n`.
    #[inline]
    pub fn sub(&self, a: usize, k: usize) -> usize {
        (a + self.n - k % self.n) % self.n
    }

    /// Successor `a + 1`.
    #[inline]
    pub fn next(&self, a: usize) -> usize {
        self.add(a, 1)
    }

    /// Predecessor `a - 1`.
    #[inline]
    pub fn prev(&self, a: usize) -> usize {
        self.sub(a, 1)
    }

    /// Clockwise distance from `a` to `b`, in `0..n`.
    #[inline]
    pub fn offset(&self, a: usize, b: usize) -> usize {
        (b + self.n - a) % self.n
    }

    /// `a ≺ b ≺ c`: pairwise distinct and `b` on the clockwise arc from `a` to `c`.
    #[inline]
    pub fn between(&self, a: usize, b: usize, c: usize) -> bool {
        let ob = self.offset(a, b);
        let oc = self.offset(a, c);
        ob > 0 && ob < oc
    }

    /// `a ⪯ b ≺ c`, with `a ≠ c`.
    #[inline]
    pub fn between_left_closed(&self, a: usize, b: usize, c: usize) -> bool {
        a != c && (a == b || self.between(a, b, c))
    }

    /// `a ≺ b ⪯ c`, with `a ≠ c`.
    #[inline]
    pub fn between_right_closed(&self, a: usize, b: usize, c: usize) -> bool {
        a != c && (b == c || self.between(a, b, c))
    }

    /// `a ⪯ b ⪯ c`: `b` on the closed clockwise arc from `a` to `c` (with `a ≠ c`).
    #[inline]
    pub fn between_closed(&self, a: usize, b: usize, c: usize) -> bool {
        a != c && (b == a || b == c || self.between(a, b, c))
    }

    /// Points of the clockwise arc `a, a+1, …, b` (inclusive, wrapping).
    pub fn arc(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let len = self.offset(a, b) + 1;
        (0..len).map(move |k| self.add(a, k))
    }

    /// Checks a chain `x0 R1 x1 R2 x2 …` read clockwise within a single turn.
    ///
    /// `strict[i]` selects `≺` (true) or `⪯` (false) between `xs[i]` and `xs[i+1]`.
    /// The last point may return to `x0` only through a `⪯` link.
    pub fn chain(&self, xs: &[usize], strict: &[bool]) -> bool {
        debug_assert_eq!(xs.len(), strict.len() + 1);
        let x0 = xs[0];
        let mut prev = 0usize;
        for (k, (&x, &s)) in xs[1..].iter().zip(strict).enumerate() {
            let mut off = self.offset(x0, x);
            let last = k + 2 == xs.len();
            if off == 0 && k > 0 {
                off = self.n;
                if !last || s {
                    return false;
                }
            }
            if s { if off <= prev { return false; } } else if off < prev { return false; }
            prev = off;
        }
        true
    }
}

/// A 1-based point on a cycle of `modulus` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicIndex {
    value: usize,
    modulus: usize,
}

impl CyclicIndex {
    /// Creates the index `value` (1-based) on a cycle of `modulus` points.
    pub fn new(value: usize, modulus: usize) -> Result<Self> {
        if modulus == 0 || value == 0 || value > modulus {
            return Err(Error::Precondition(format!(
                "cyclic index {value} out of range 1..={modulus}"
            )));
        }
        Ok(Self { value, modulus })
    }

    /// The 1-based value.
    pub fn value(self) -> usize {
        self.value
    }

    /// The cycle length.
    pub fn modulus(self) -> usize {
        self.modulus
    }

    /// 0-based position.
    pub fn zero_based(self) -> usize {
        self.value - 1
    }

    /// `self + k`, wrapping into `1..=n`.
    pub fn shift(self, k: isize) -> Self {
        let n = self.modulus as isize;
        let v = ((self.value as isize - 1 + k).rem_euclid(n)) + 1;
        Self { value: v as usize, modulus: self.modulus }
    }
}

/// `a ≺ b ≺ c` on a shared cycle. Returns false on coincident points or mismatched moduli.
pub fn cyclic_between(a: CyclicIndex, b: CyclicIndex, c: CyclicIndex) -> bool {
    if a.modulus != b.modulus || b.modulus != c.modulus {
        return false;
    }
    Cycle::new(a.modulus).between(a.zero_based(), b.zero_based(), c.zero_based())
}

/// Circular sum of `f` over the clockwise arc `a ⪯ i ⪯ b` (0-based, wrapping).
///
/// The arc is never empty: `a == b` sums the single term `f(a)`.
pub fn circular_sum(f: &[Rational], a: usize, b: usize) -> Rational {
    let cyc = Cycle::new(f.len());
    cyc.arc(a, b).fold(Rational::zero(), |acc, i| acc + &f[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::int;

    fn ci(v: usize) -> CyclicIndex {
        CyclicIndex::new(v, 6).unwrap()
    }

    #[test]
    fn cyclic_between_examples() {
        assert!(cyclic_between(ci(1), ci(3), ci(5)));
        assert!(cyclic_between(ci(5), ci(1), ci(3)));
        assert!(!cyclic_between(ci(1), ci(5), ci(3)));
        assert!(!cyclic_between(ci(1), ci(1), ci(3)));
    }

    #[test]
    fn circular_sum_examples() {
        let ones = vec![int(1); 6];
        assert_eq!(circular_sum(&ones, 1, 3), int(3));
        assert_eq!(circular_sum(&ones, 4, 1), int(4));
        let ramp: Vec<Rational> = (1..=6).map(int).collect();
        assert_eq!(circular_sum(&ramp, 5, 0), int(7));
    }

    #[test]
    fn validation_examples() {
        let ok = DistanceMatrix::from_integers(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(ok.validate().is_valid());
        let bad = DistanceMatrix::from_integers(&[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(bad.validate().violations, vec![Violation::Asymmetric { i: 1, j: 2 }]);
        assert!(fixtures::hexagon().validate().is_valid());
        assert!(DistanceMatrix::from_integers(&[vec![0, 1, 2]]).is_err());
        let tri = DistanceMatrix::from_integers(&[vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]])
            .unwrap();
        assert!(tri.validate().violations.contains(&Violation::Triangle { i: 1, j: 3, k: 2 }));
    }

    #[test]
    fn diameter_and_radius() {
        let h = fixtures::hexagon();
        assert_eq!(h.diameter(&[2]).unwrap(), int(0));
        assert_eq!(h.radius(&[2]).unwrap(), int(0));
        assert_eq!(h.diameter(&[0, 1, 2]).unwrap(), int(8));
        assert_eq!(h.rad(), int(9));
        assert!(h.diameter(&[]).is_err());
    }

    #[test]
    fn chain_reading() {
        let c = Cycle::new(6);
        assert!(c.chain(&[0, 0, 2, 3], &[false, true, false]));
        assert!(c.chain(&[4, 5, 1, 3], &[true, true, false]));
        assert!(!c.chain(&[0, 3, 2, 4], &[false, true, false]));
        assert!(c.chain(&[3, 4, 5, 3], &[true, true, false]));
        assert!(!c.chain(&[3, 4, 5, 3], &[true, true, true]));
    }

    #[test]
    fn ordinal_ranks() {
        let h = fixtures::hexagon();
        let (ranks, values) = h.ordinal();
        assert_eq!(values, vec![int(0), int(5), int(8), int(9)]);
        assert_eq!(ranks[3], 3);
    }
}

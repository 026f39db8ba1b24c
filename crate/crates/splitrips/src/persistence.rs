//! Persistent homology of the Vietoris–Rips filtration and barcode bookkeeping.
//!
//! Barcodes are stored in the closed convention: a bar `[b, d)` is alive in the
//! complex `{σ : diam σ ≤ t}` for `b ≤ t < d`. The open complex `VR_r` equals the
//! closed complex at the largest distance below `r`, so a bar is alive in `VR_r`
//! exactly when `b < r ≤ d`.
//!
//! The engine works on distance ranks, stops the filtration at the enclosing radius
//! (beyond which the complex is a cone), computes `H_0` by union-find and higher
//! degrees by reducing coboundary columns with clearing.

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::homology::axpy;
use crate::metric::DistanceMatrix;
use crate::number::{Rational, format_rational};
use crate::split::UnionFind;
use crate::with_field;
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;
use std::collections::{HashMap, HashSet};

/// A persistence interval `[birth, death)`; `death = None` means infinite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    /// Birth value (a distance).
    pub birth: Rational,
    /// Death value, `None` for an essential class.
    pub death: Option<Rational>,
}

impl Interval {
    /// True when the bar is alive in the closed complex at `t`.
    pub fn alive_closed(&self, t: &Rational) -> bool {
        &self.birth <= t && self.death.as_ref().is_none_or(|d| t < d)
    }

    /// True when the bar is alive in the open complex `VR_r`.
    pub fn alive_open(&self, r: &Rational) -> bool {
        &self.birth < r && self.death.as_ref().is_none_or(|d| r <= d)
    }
}

/// Persistence intervals per homology degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode {
    /// Coefficient field.
    pub field: FieldTag,
    /// `dims[k]` holds the degree-`k` bars, sorted.
    pub dims: Vec<Vec<Interval>>,
}

impl Barcode {
    /// A barcode from unsorted bars; zero-length bars are dropped.
    pub fn new(field: FieldTag, dims: Vec<Vec<Interval>>) -> Self {
        let dims = dims
            .into_iter()
            .map(|mut bars| {
                bars.retain(|b| b.death.as_ref() != Some(&b.birth));
                bars.sort();
                bars
            })
            .collect();
        Self { field, dims }
    }

    /// Highest degree stored.
    pub fn maxdim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Betti numbers of the open complex `VR_r`.
    pub fn betti_open(&self, r: &Rational) -> Vec<usize> {
        self.dims.iter().map(|bars| bars.iter().filter(|b| b.alive_open(r)).count()).collect()
    }

    /// Betti numbers of the closed complex at `t`.
    pub fn betti_closed(&self, t: &Rational) -> Vec<usize> {
        self.dims.iter().map(|bars| bars.iter().filter(|b| b.alive_closed(t)).count()).collect()
    }
}

impl Serialize for Barcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Bars<'a>(&'a [Interval]);
        impl Serialize for Bars<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for b in self.0 {
                    let death = b.death.as_ref().map_or_else(|| "inf".to_string(), format_rational);
                    seq.serialize_element(&[format_rational(&b.birth), death])?;
                }
                seq.end()
            }
        }
        struct Dims<'a>(&'a [Vec<Interval>]);
        impl Serialize for Dims<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, bars) in self.0.iter().enumerate() {
                    map.serialize_entry(&k.to_string(), &Bars(bars))?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("field", &self.field)?;
        map.serialize_entry("dims", &Dims(&self.dims))?;
        map.end()
    }
}

/// Rebuilds a barcode from Betti numbers of the closed complexes at the sorted
/// critical values `values`. Births and deaths are matched by the elder rule
/// (the youngest living bar dies first).
pub fn barcode_from_betti_curve(field: FieldTag, values: &[Rational], curve: &[Vec<usize>]) -> Barcode {
    let maxdim = curve.first().map_or(0, |c| c.len().saturating_sub(1));
    let mut dims = vec![Vec::new(); maxdim + 1];
    for (k, bars) in dims.iter_mut().enumerate() {
        let mut open: Vec<Rational> = Vec::new();
        for (v, betti) in values.iter().zip(curve) {
            while open.len() > betti[k] {
                let birth = open.pop().expect("open bar");
                bars.push(Interval { birth, death: Some(v.clone()) });
            }
            while open.len() < betti[k] {
                open.push(v.clone());
            }
        }
        bars.extend(open.into_iter().map(|birth| Interval { birth, death: None }));
    }
    Barcode::new(field, dims)
}

const MAX_KEY_VERTICES: usize = 8;

fn pack(simplex: &[u32]) -> u128 {
    simplex.iter().fold(0u128, |acc, &v| acc << 16 | (v as u128 + 1))
}

struct Filtration<'a> {
    n: usize,
    rank: &'a [u32],
    limit: u32,
}

impl Filtration<'_> {
    fn d(&self, a: u32, b: u32) -> u32 {
        self.rank[a as usize * self.n + b as usize]
    }

    /// All `k`-simplices with diameter at most the limit, in filtration order.
    fn simplices(&self, k: usize) -> Vec<(u32, Vec<u32>)> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k + 1);
        self.grow(k + 1, 0, 0, &mut current, &mut out);
        out.sort();
        out
    }

    fn grow(&self, size: usize, start: u32, diam: u32, cur: &mut Vec<u32>, out: &mut Vec<(u32, Vec<u32>)>) {
        if cur.len() == size {
            out.push((diam, cur.clone()));
            return;
        }
        for v in start..self.n as u32 {
            let mut nd = diam;
            let mut ok = true;
            for &u in cur.iter() {
                let d = self.d(u, v);
                if d > self.limit {
                    ok = false;
                    break;
                }
                nd = nd.max(d);
            }
            if ok {
                cur.push(v);
                self.grow(size, v + 1, nd, cur, out);
                cur.pop();
            }
        }
    }
}

/// Persistent homology of the VR filtration of `m` in degrees `0..=maxdim`.
pub fn persistence(m: &DistanceMatrix, maxdim: usize, field: FieldTag) -> Result<Barcode> {
    with_field!(field, f => persistence_with(&f, m, maxdim, field))
}

fn persistence_with<F: Field>(f: &F, m: &DistanceMatrix, maxdim: usize, tag: FieldTag) -> Result<Barcode> {
    let n = m.n();
    if maxdim + 2 > MAX_KEY_VERTICES || n >= u16::MAX as usize {
        return Err(Error::Capacity(format!(
            "persistence supports maxdim <= {} and fewer than {} points",
            MAX_KEY_VERTICES - 2,
            u16::MAX
        )));
    }
    let (rank, values) = m.ordinal();
    let limit = (0..n)
        .map(|x| (0..n).map(|y| rank[x * n + y]).max().unwrap_or(0))
        .min()
        .unwrap_or(0);
    let filt = Filtration { n, rank: &rank, limit };
    let value = |r: u32| values[r as usize].clone();
    let mut dims: Vec<Vec<Interval>> = vec![Vec::new(); maxdim + 1];

    let mut edges = filt.simplices(1);
    let mut uf = UnionFind::new(n);
    let mut cleared: HashSet<u128> = HashSet::new();
    for (d, e) in &edges {
        if uf.union(e[0] as usize, e[1] as usize) {
            dims[0].push(Interval { birth: value(0), death: Some(value(*d)) });
            cleared.insert(pack(e));
        }
    }
    for _ in 0..uf.count() {
        dims[0].push(Interval { birth: value(0), death: None });
    }

    let mut current = std::mem::take(&mut edges);
    for k in 1..=maxdim {
        let cofaces = filt.simplices(k + 1);
        let position: HashMap<u128, usize> =
            cofaces.iter().enumerate().map(|(i, (_, s))| (pack(s), i)).collect();
        let mut pivots: HashMap<usize, Vec<(usize, F::E)>> = HashMap::new();
        let mut next_cleared = HashSet::new();
        for (d, s) in current.iter().rev() {
            if cleared.contains(&pack(s)) {
                continue;
            }
            let mut col = coboundary(f, &filt, s, &position);
            while let Some((low, val)) = col.first().cloned() {
                let Some(pcol) = pivots.get(&low) else { break };
                let factor = f.mul(&val, &f.inv(&pcol[0].1));
                col = axpy(f, &col, pcol, &factor);
            }
            match col.first() {
                Some(&(low, _)) => {
                    let (dd, ref tau) = cofaces[low];
                    dims[k].push(Interval { birth: value(*d), death: Some(value(dd)) });
                    next_cleared.insert(pack(tau));
                    pivots.insert(low, col);
                }
                None => dims[k].push(Interval { birth: value(*d), death: None }),
            }
        }
        cleared = next_cleared;
        current = cofaces;
    }
    Ok(Barcode::new(tag, dims))
}

fn coboundary<F: Field>(
    f: &F,
    filt: &Filtration<'_>,
    s: &[u32],
    position: &HashMap<u128, usize>,
) -> Vec<(usize, F::E)> {
    let mut col = Vec::new();
    let mut tau = Vec::with_capacity(s.len() + 1);
    for v in 0..filt.n as u32 {
        if s.contains(&v) || s.iter().any(|&u| filt.d(u, v) > filt.limit) {
            continue;
        }
        let j = s.iter().filter(|&&u| u < v).count();
        tau.clear();
        tau.extend_from_slice(&s[..j]);
        tau.push(v);
        tau.extend_from_slice(&s[j..]);
        let sign = if j % 2 == 0 { f.one() } else { f.neg(&f.one()) };
        col.push((position[&pack(&tau)], sign));
    }
    col.sort_by_key(|(r, _)| *r);
    col
}

/// `H_0` bars of the single-linkage filtration on weighted edges over `n` points.
pub fn h0_from_edges(n: usize, mut edges: Vec<(Rational, usize, usize)>) -> Vec<Interval> {
    edges.sort();
    let mut uf = UnionFind::new(n);
    let zero = Rational::default();
    let mut bars = Vec::new();
    for (d, a, b) in edges {
        if uf.union(a, b) {
            bars.push(Interval { birth: zero.clone(), death: Some(d) });
        }
    }
    for _ in 0..uf.count() {
        bars.push(Interval { birth: zero.clone(), death: None });
    }
    bars
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::vr_betti;
    use crate::number::{frac, int};

    fn bar(b: Rational, d: Option<Rational>) -> Interval {
        Interval { birth: b, death: d }
    }

    #[test]
    fn two_points() {
        let bc = persistence(&fixtures::two_points(), 1, FieldTag::Q).unwrap();
        assert_eq!(bc.dims[0], vec![bar(int(0), None), bar(int(0), Some(int(1)))]);
        assert!(bc.dims[1].is_empty());
    }

    #[test]
    fn hexagon_bars() {
        let bc = persistence(&fixtures::hexagon(), 2, FieldTag::Q).unwrap();
        assert_eq!(bc.dims[1], vec![bar(int(5), Some(int(8)))]);
        assert_eq!(bc.dims[2], vec![bar(int(8), Some(int(9)))]);
    }

    #[test]
    fn sweep_matches_static_homology() {
        for m in [fixtures::hexagon(), fixtures::seven_point(), fixtures::circle_five_points()] {
            for field in [FieldTag::Q, FieldTag::F2] {
                let bc = persistence(&m, 2, field).unwrap();
                let mut radii = m.distinct_values();
                radii.push(m.diam() + int(1));
                for v in radii {
                    for r in [v.clone(), v + frac(1, 1000)] {
                        assert_eq!(bc.betti_open(&r), vr_betti(&m, &r, 2, field), "r = {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn betti_curve_round_trip() {
        let bc = persistence(&fixtures::hexagon(), 2, FieldTag::Q).unwrap();
        let mut values = vec![int(0)];
        values.extend(fixtures::hexagon().distinct_values());
        let curve: Vec<Vec<usize>> = values.iter().map(|v| bc.betti_closed(v)).collect();
        assert_eq!(barcode_from_betti_curve(FieldTag::Q, &values, &curve), bc);
    }

    #[test]
    fn json_shape() {
        let bc = persistence(&fixtures::two_points(), 0, FieldTag::Q).unwrap();
        let v = serde_json::to_value(&bc).unwrap();
        assert_eq!(v, serde_json::json!({"field": "Q", "dims": {"0": [["0", "inf"], ["0", "1"]]}}));
    }
}

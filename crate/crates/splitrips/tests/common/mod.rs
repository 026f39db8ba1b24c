#![allow(dead_code)]

use rand::{Rng, RngExt};
use splitrips::block::glue;
use splitrips::circular::{CircularDecomposition, compute_m, compute_sigma};
use splitrips::number::{Rational, frac, int};
use splitrips::split::{Split, WeightedSplitSystem};
use splitrips::DistanceMatrix;

/// A symmetric zero-diagonal weight matrix with integer entries in `0..=max`.
pub fn random_alpha(rng: &mut impl Rng, n: usize, max: i64) -> Vec<Vec<Rational>> {
    let mut a = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = int(rng.random_range(0..=max));
            a[i][j] = w.clone();
            a[j][i] = w;
        }
    }
    a
}

/// Random decompositions with every `σ` defined, split by whether the star property holds.
pub fn star_corpus(rng: &mut impl Rng, want_star: usize, want_other: usize) -> (Vec<CircularDecomposition>, Vec<CircularDecomposition>) {
    let mut star = Vec::new();
    let mut other = Vec::new();
    while star.len() < want_star || other.len() < want_other {
        let n = rng.random_range(5..=10);
        let max = rng.random_range(1..=4);
        let mut alpha = random_alpha(rng, n, max);
        if rng.random_bool(0.5) {
            for i in 0..n {
                let j = (i + 1) % n;
                let w = &alpha[i][j] + int(rng.random_range(1..=3));
                alpha[i][j] = w.clone();
                alpha[j][i] = w;
            }
        }
        let cd = CircularDecomposition::identity(alpha).expect("valid weights");
        let st = compute_sigma(&cd);
        if !st.undefined.is_empty() {
            continue;
        }
        let cert = compute_m(&cd, &st).expect("sigma defined");
        if cert.star_holds && star.len() < want_star {
            star.push(cd);
        } else if !cert.star_holds && other.len() < want_other {
            other.push(cd);
        }
    }
    (star, other)
}

/// A random metric on `n` points with integer distances in `lo..=2·lo`.
pub fn random_small_metric(rng: &mut impl Rng, n: usize, lo: i64) -> DistanceMatrix {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(lo..=2 * lo);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    DistanceMatrix::from_integers(&d).expect("square")
}

/// Glues 2 to 4 random parts along a random tree, each new part attached through a
/// pendant of random length at a random point of what has been built so far.
pub fn random_glued_metric(rng: &mut impl Rng, max_points: usize) -> DistanceMatrix {
    let parts = rng.random_range(2..=4);
    let mut sizes: Vec<usize> = (0..parts).map(|_| rng.random_range(2..=5)).collect();
    while sizes.iter().sum::<usize>() > max_points {
        let k = sizes.iter().enumerate().max_by_key(|(_, s)| **s).map(|(k, _)| k).unwrap();
        sizes[k] -= 1;
    }
    let mut built = random_small_metric(rng, sizes[0], 2);
    for &size in &sizes[1..] {
        let next = random_small_metric(rng, size, 2);
        let q = rng.random_range(0..built.n());
        let p = rng.random_range(0..next.n());
        let ha = frac(rng.random_range(0..=2), 2);
        let hb = frac(rng.random_range(0..=2), 2);
        let ea: Vec<Rational> = (0..built.n()).map(|x| built.get(q, x) + &ha).collect();
        let eb: Vec<Rational> = (0..next.n()).map(|y| next.get(p, y) + &hb).collect();
        built = glue(&built, &ea, &next, &eb);
    }
    built
}

/// A random subset of the circular splits of a random order with random positive weights.
pub fn random_circular_system(rng: &mut impl Rng, n: usize) -> WeightedSplitSystem {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut splits: Vec<(Split, Rational)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let side = &order[i..j];
            let s = Split::from_side(n, side).expect("proper split");
            if splits.iter().any(|(t, _)| *t == s) || !rng.random_bool(0.4) {
                continue;
            }
            splits.push((s, frac(rng.random_range(1..=12), rng.random_range(1..=4))));
        }
    }
    WeightedSplitSystem::new(n, splits).expect("valid system")
}

/// Radii probing every critical value from both sides: each distinct value, the
/// midpoint to its successor, and one past the largest.
pub fn probe_radii(values: &[Rational]) -> Vec<Rational> {
    let mut vs: Vec<Rational> = values.to_vec();
    vs.sort();
    vs.dedup();
    let mut out = Vec::new();
    for (k, v) in vs.iter().enumerate() {
        if v > &int(0) {
            out.push(v.clone());
        }
        match vs.get(k + 1) {
            Some(w) => out.push((v + w) / int(2)),
            None => out.push(v + int(1)),
        }
    }
    out.retain(|r| r > &int(0));
    out
}

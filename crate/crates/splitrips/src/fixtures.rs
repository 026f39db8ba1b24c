//! Small reference metrics with known decompositions.
//!
//! These are the worked instances used by the examples and the test suites. Every
//! matrix is written out in full so that tests compare against literal values
//! rather than against output of the code under test.

use crate::metric::DistanceMatrix;
use crate::number::{Rational, frac, int};

fn ints(rows: &[&[i64]]) -> DistanceMatrix {
    DistanceMatrix::from_integers(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        .expect("fixture is square")
}

fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

/// Six points in circular order with every circular split weighted `1`.
pub fn hexagon() -> DistanceMatrix {
    ints(&[
        &[0, 5, 8, 9, 8, 5],
        &[5, 0, 5, 8, 9, 8],
        &[8, 5, 0, 5, 8, 9],
        &[9, 8, 5, 0, 5, 8],
        &[8, 9, 8, 5, 0, 5],
        &[5, 8, 9, 8, 5, 0],
    ])
}

/// The all-ones weight matrix on `n` points (zero diagonal).
pub fn unit_alpha(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { int(0) } else { int(1) }).collect()).collect()
}

/// Points `0, 0.1, 0.3, 0.6, 0.8` on a circle of circumference one, with arc distance.
pub fn circle_five_points() -> DistanceMatrix {
    let t = |k: i64| frac(k, 10);
    DistanceMatrix::from_rows(vec![
        vec![t(0), t(1), t(3), t(4), t(2)],
        vec![t(1), t(0), t(2), t(5), t(3)],
        vec![t(3), t(2), t(0), t(3), t(5)],
        vec![t(4), t(5), t(3), t(0), t(2)],
        vec![t(2), t(3), t(5), t(2), t(0)],
    ])
    .expect("fixture is square")
}

/// Circular weights of a seven-point metric that is circular decomposable but not monotone.
pub fn seven_point_alpha() -> Vec<Vec<Rational>> {
    int_rows(&[
        &[0, 1, 1, 1, 2, 2, 1],
        &[1, 0, 2, 3, 1, 1, 1],
        &[1, 2, 0, 2, 1, 1, 1],
        &[1, 3, 2, 0, 1, 1, 1],
        &[2, 1, 1, 1, 0, 1, 1],
        &[2, 1, 1, 1, 1, 0, 2],
        &[1, 1, 1, 1, 1, 2, 0],
    ])
}

/// Distance matrix produced by [`seven_point_alpha`].
pub fn seven_point() -> DistanceMatrix {
    ints(&[
        &[0, 9, 13, 12, 13, 13, 8],
        &[9, 0, 8, 13, 16, 18, 15],
        &[13, 8, 0, 9, 14, 18, 17],
        &[12, 13, 9, 0, 7, 13, 14],
        &[13, 16, 14, 7, 0, 8, 11],
        &[13, 18, 18, 13, 8, 0, 7],
        &[8, 15, 17, 14, 11, 7, 0],
    ])
}

/// Circular weights on twelve points: all ones except six heavy chords of weight `5`.
pub fn twelve_point_alpha() -> Vec<Vec<Rational>> {
    let heavy = [(1, 4), (2, 11), (3, 6), (5, 8), (7, 10), (9, 12)];
    (1..=12)
        .map(|i| {
            (1..=12)
                .map(|j| {
                    if i == j {
                        int(0)
                    } else if heavy.contains(&(i, j)) || heavy.contains(&(j, i)) {
                        int(5)
                    } else {
                        int(1)
                    }
                })
                .collect()
        })
        .collect()
}

/// Distance matrix produced by [`twelve_point_alpha`].
pub fn twelve_point() -> DistanceMatrix {
    ints(&[
        &[0, 15, 28, 39, 48, 47, 52, 47, 48, 39, 28, 15],
        &[15, 0, 15, 28, 39, 40, 47, 44, 47, 40, 39, 28],
        &[28, 15, 0, 15, 28, 39, 48, 47, 52, 47, 48, 39],
        &[39, 28, 15, 0, 15, 28, 39, 40, 47, 44, 47, 40],
        &[48, 39, 28, 15, 0, 15, 28, 39, 48, 47, 52, 47],
        &[47, 40, 39, 28, 15, 0, 15, 28, 39, 40, 47, 44],
        &[52, 47, 48, 39, 28, 15, 0, 15, 28, 39, 48, 47],
        &[47, 44, 47, 40, 39, 28, 15, 0, 15, 28, 39, 40],
        &[48, 47, 52, 47, 48, 39, 28, 15, 0, 15, 28, 39],
        &[39, 40, 47, 44, 47, 40, 39, 28, 15, 0, 15, 28],
        &[28, 39, 48, 47, 52, 47, 48, 39, 28, 15, 0, 15],
        &[15, 28, 39, 40, 47, 44, 47, 40, 39, 28, 15, 0],
    ])
}

/// Shortest-path metric of the complete bipartite graph `K_{2,3}`.
///
/// Points `1, 2` form the small side, `3, 4, 5` the large side.
pub fn k23() -> DistanceMatrix {
    ints(&[
        &[0, 2, 1, 1, 1],
        &[2, 0, 1, 1, 1],
        &[1, 1, 0, 2, 2],
        &[1, 1, 2, 0, 2],
        &[1, 1, 2, 2, 0],
    ])
}

/// Shortest-path (Hamming) metric of the 3-cube graph.
pub fn hypercube3() -> DistanceMatrix {
    DistanceMatrix::from_fn(8, |i, j| int(((i ^ j) as u32).count_ones() as i64))
}

/// Two points at distance `1`.
pub fn two_points() -> DistanceMatrix {
    ints(&[&[0, 1], &[1, 0]])
}

/// `n` equally spaced points on a circle of circumference `n`, with arc distance.
pub fn circle_points(n: usize) -> DistanceMatrix {
    DistanceMatrix::from_fn(n, |i, j| {
        let k = j - i;
        int(k.min(n - k) as i64)
    })
}

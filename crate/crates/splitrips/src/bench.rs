//! Chained-sphere benchmark metrics and a timing harness comparing direct persistence
//! with the block decomposition.
//!
//! Block `i` (1-based) is a uniform sample from the unit 3-sphere with its Euclidean
//! metric scaled by `i²`. Consecutive blocks are wedged by identifying the last point
//! of one with the first point of the next, and the wedge points are then dropped so
//! that every cut is virtual.

use crate::block::BlockPlan;
use crate::error::Result;
use crate::field::FieldTag;
use crate::metric::DistanceMatrix;
use crate::number::{DEFAULT_EPSILON, Rational, snap_f64};
use crate::persistence::{Barcode, persistence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::time::Instant;

/// `count` points drawn uniformly from the unit sphere `S³ ⊂ R⁴`.
pub fn sample_s3(rng: &mut ChaCha8Rng, count: usize) -> Vec<[f64; 4]> {
    (0..count)
        .map(|_| loop {
            let v: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.map(|x| x / norm);
            }
        })
        .collect()
}

fn euclidean(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The wedged chain before the wedge points are dropped, with the indices of the
/// wedge points. It has `m + (b−1)(m+2) − (b−1)` points.
pub fn benchmark_wedge(b: usize, m_pts: usize, seed: u64) -> (DistanceMatrix, Vec<usize>) {
    assert!(b >= 1 && m_pts >= 2, "benchmark needs b >= 1 and m_pts >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<Vec<Vec<Rational>>> = (1..=b)
        .map(|i| {
            let size = if i == 1 { m_pts } else { m_pts + 2 };
            let pts = sample_s3(&mut rng, size);
            let scale = (i * i) as f64;
            pts.iter()
                .map(|p| pts.iter().map(|q| snap_f64(scale * euclidean(p, q), DEFAULT_EPSILON)).collect())
                .collect()
        })
        .collect();
    // Global point list: (block, local index); the first point of every later block is
    // the last point of the previous one.
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut wedges = Vec::new();
    for (i, blk) in blocks.iter().enumerate() {
        let start = usize::from(i > 0);
        for j in start..blk.len() {
            points.push((i, j));
        }
        if i + 1 < blocks.len() {
            wedges.push(points.len() - 1);
        }
    }
    let last = |i: usize| blocks[i].len() - 1;
    // Distance from point (i, j) to the wedge point entering block k > i, walking the chain.
    let to_right = |i: usize, j: usize, k: usize| -> Rational {
        let mut acc = blocks[i][j][last(i)].clone();
        for h in i + 1..k {
            acc += &blocks[h][0][last(h)];
        }
        acc
    };
    let dm = DistanceMatrix::from_fn(points.len(), |p, q| {
        let ((i, j), (k, l)) = (points[p], points[q]);
        let ((i, j), (k, l)) = if i <= k { ((i, j), (k, l)) } else { ((k, l), (i, j)) };
        if i == k {
            blocks[i][j][l].clone()
        } else if j == last(i) && l == 0 {
            Rational::default()
        } else {
            to_right(i, j, k) + &blocks[k][0][l]
        }
    });
    (dm, wedges)
}

/// The benchmark metric: the wedged chain with the `b − 1` wedge points dropped.
pub fn benchmark_generate(b: usize, m_pts: usize, seed: u64) -> DistanceMatrix {
    let (m, wedges) = benchmark_wedge(b, m_pts, seed);
    let keep: Vec<usize> = (0..m.n()).filter(|p| !wedges.contains(p)).collect();
    m.restrict(&keep)
}

/// One timing row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    /// Number of blocks.
    pub b: usize,
    /// Number of points.
    pub n: usize,
    /// Highest homology degree computed.
    pub dim: usize,
    /// `direct` or `block`.
    pub method: String,
    /// Wall time.
    pub seconds: f64,
    /// Sizes of the augmented parts (block method only).
    pub part_sizes: Vec<usize>,
    /// Whether this method's barcode equals the direct barcode.
    pub matches_direct: bool,
}

/// Times direct persistence against the block decomposition for every block count and
/// degree. Each pair of rows also records whether the two barcodes agree.
pub fn run_benchmark(
    blocks: &[usize],
    m_pts: usize,
    dims: &[usize],
    seed: u64,
    field: FieldTag,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &b in blocks {
        let m = benchmark_generate(b, m_pts, seed);
        for &dim in dims {
            let (direct, t_direct) = timed(|| persistence(&m, dim, field))?;
            let (block, t_block, sizes) = {
                let start = Instant::now();
                let plan = BlockPlan::new(&m)?;
                let bars = plan.persistence(dim, field)?;
                (bars, start.elapsed().as_secs_f64(), plan.part_sizes())
            };
            let same = direct == block;
            rows.push(BenchRow {
                b,
                n: m.n(),
                dim,
                method: "direct".into(),
                seconds: t_direct,
                part_sizes: Vec::new(),
                matches_direct: true,
            });
            rows.push(BenchRow {
                b,
                n: m.n(),
                dim,
                method: "block".into(),
                seconds: t_block,
                part_sizes: sizes,
                matches_direct: same,
            });
        }
    }
    Ok(rows)
}

fn timed(f: impl FnOnce() -> Result<Barcode>) -> Result<(Barcode, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

/// CSV with header `b,n,dim,method,seconds,part_sizes,matches_direct`.
pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["b", "n", "dim", "method", "seconds", "part_sizes", "matches_direct"])?;
    for r in rows {
        let sizes: Vec<String> = r.part_sizes.iter().map(usize::to_string).collect();
        w.write_record([
            r.b.to_string(),
            r.n.to_string(),
            r.dim.to_string(),
            r.method.clone(),
            format!("{:.6}", r.seconds),
            sizes.join(" "),
            r.matches_direct.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::detect_gluing_tree;

    #[test]
    fn point_counts() {
        assert_eq!(benchmark_generate(1, 20, 7).n(), 20);
        let (wedged, wedges) = benchmark_wedge(3, 20, 7);
        assert_eq!(wedged.n(), 62);
        assert_eq!(wedges.len(), 2);
        assert_eq!(benchmark_generate(3, 20, 7).n(), 60);
    }

    #[test]
    fn deterministic_and_metric() {
        let a = benchmark_generate(2, 2, 11);
        assert_eq!(a, benchmark_generate(2, 2, 11));
        assert_eq!(a.n(), 4);
        assert_ne!(benchmark_generate(3, 4, 1), benchmark_generate(3, 4, 2));
        assert!(benchmark_generate(3, 5, 3).validate().is_valid());
    }

    #[test]
    fn chain_is_found_as_gluing_tree() {
        let m = benchmark_generate(3, 5, 5);
        let t = detect_gluing_tree(&m).unwrap();
        t.validate(&m).unwrap();
        assert_eq!(t.cuts.len(), 2);
        let plan = crate::block::BlockPlan::with_tree(&m, t);
        assert_eq!(plan.part_sizes().iter().sum::<usize>(), m.n() + 4);
    }

    #[test]
    fn csv_rows() {
        let rows = run_benchmark(&[2], 4, &[1], 3, FieldTag::F2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.matches_direct));
        let csv = rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with("b,n,dim,method,seconds"));
        assert_eq!(csv.lines().count(), 3);
    }
}

//! Gluing-tree detection on a wedge of two hexagons, the augmented parts, the radius
//! forest and blockwise homology compared with direct homology.
//!
//! Run with `cargo run --example block_decomposition`.

use splitrips::block::{BlockPlan, bc_forest, wedge};
use splitrips::field::FieldTag;
use splitrips::fixtures;
use splitrips::homology::vr_betti;
use splitrips::number::{format_rational, int};
use splitrips::DistanceMatrix;

fn main() -> splitrips::Result<()> {
    let hex = fixtures::hexagon();
    let big = DistanceMatrix::from_fn(6, |i, j| hex.get(i, j) * int(2));
    let m = wedge(&hex, 0, &big, 0);
    let plan = BlockPlan::new(&m)?;
    println!("{} points, {} parts of sizes {:?}", m.n(), plan.tree.parts.len(), plan.part_sizes());
    for part in &plan.parts {
        let base: Vec<usize> = part.base.iter().map(|x| x + 1).collect();
        let proxies: Vec<String> =
            part.proxies.iter().map(|p| format!("cut {} at {}", p.cut + 1, format_rational(&p.distance))).collect();
        println!("  part {}: points {base:?}, proxies {proxies:?}", part.part + 1);
    }
    for r in [int(5), int(6), int(10), int(12), int(19)] {
        let h = plan.homology(&r, FieldTag::Q, 2);
        let forest = bc_forest(&plan.tree, &r);
        println!(
            "r = {:>2}: betti {:?} (direct {:?}), forest edges {}",
            format_rational(&r),
            h.betti,
            vr_betti(&m, &r, 2, FieldTag::Q),
            forest.edges.len()
        );
    }
    let same = plan.persistence(2, FieldTag::Q)? == splitrips::persistence::persistence(&m, 2, FieldTag::Q)?;
    println!("blockwise barcode equals direct barcode: {same}");
    Ok(())
}

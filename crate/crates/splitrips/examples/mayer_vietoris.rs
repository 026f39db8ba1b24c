//! The Mayer-Vietoris recursion on a non-monotone circular metric, with its trace, and a
//! twelve-point metric on which the recursion is blocked.
//!
//! Run with `cargo run --example mayer_vietoris`.

use splitrips::field::FieldTag;
use splitrips::fixtures;
use splitrips::homology::vr_betti;
use splitrips::mv::{DEFAULT_MAX_DEPTH, mv_homology, mv_split};
use splitrips::number::{frac, int};

fn main() -> splitrips::Result<()> {
    let seven = fixtures::seven_point();
    let r = frac(25, 2);
    let res = mv_homology(&seven, &r, FieldTag::Q, 3, DEFAULT_MAX_DEPTH)?;
    println!("seven points, r = 25/2: betti {:?}", res.betti);
    println!("oracle:                  betti {:?}", vr_betti(&seven, &r, 3, FieldTag::Q));
    println!("{}", serde_json::to_string_pretty(&res.trace).expect("trace serializes"));

    let twelve = fixtures::twelve_point();
    let split = mv_split(&twelve, &int(45), 2);
    let edges: Vec<(usize, usize)> = split.e_x.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    println!("twelve points, r = 45: offending edges {edges:?}, blocked = {}", split.blocked());
    let res = mv_homology(&twelve, &int(45), FieldTag::Q, 2, DEFAULT_MAX_DEPTH)?;
    println!("betti {:?}, fell back to the oracle: {}", res.betti, res.has_fallback());
    Ok(())
}

//! Closed-form homotopy types of VR complexes of a monotone circular metric, checked
//! against direct homology at every critical radius.
//!
//! Run with `cargo run --example monotone_homotopy`.

use splitrips::circular::{CircularDecomposition, monotone_vr_homotopy};
use splitrips::field::FieldTag;
use splitrips::fixtures;
use splitrips::homology::vr_betti;
use splitrips::number::{format_rational, int};

fn main() -> splitrips::Result<()> {
    let cd = CircularDecomposition::identity(fixtures::unit_alpha(6))?;
    let d = cd.positional_metric();
    let mut radii = d.distinct_values();
    radii.retain(|v| v > &int(0));
    radii.push(d.diam() + int(1));
    for r in radii {
        let h = monotone_vr_homotopy(&cd, &r)?;
        let betti = h.homotopy.betti_numbers(3);
        let oracle = vr_betti(&d, &r, 3, FieldTag::Q);
        let wf = h.terminal.and_then(|c| c.winding_fraction()).map(|w| format_rational(&w));
        println!(
            "r = {:>3}: {:<14} winding fraction {:<5} betti {betti:?} oracle agrees: {}",
            format_rational(&r),
            h.homotopy.to_string(),
            wf.unwrap_or_else(|| "-".into()),
            betti == oracle
        );
    }
    Ok(())
}

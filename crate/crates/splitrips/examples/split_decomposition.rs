//! d-splits, isolation indices and the split-prime residue of two small metrics.
//!
//! Run with `cargo run --example split_decomposition`.

use splitrips::fixtures;
use splitrips::number::format_rational;
use splitrips::split::{DEFAULT_SPLIT_CAP, enumerate_d_splits, is_weakly_compatible, residue};

fn main() -> splitrips::Result<()> {
    for (name, m) in [("hexagon", fixtures::hexagon()), ("K_{2,3}", fixtures::k23())] {
        let sys = enumerate_d_splits(&m, DEFAULT_SPLIT_CAP)?;
        println!("{name}: {} d-splits, weakly compatible = {}", sys.len(), is_weakly_compatible(&sys));
        for (split, weight) in sys.splits() {
            let side: Vec<usize> = split.side_a().iter().map(|x| x + 1).collect();
            println!("  {side:?} | rest  weight {}", format_rational(weight));
        }
        let res = residue(&m, &sys);
        println!("  split-prime residue is zero: {}", res.is_zero());
    }
    Ok(())
}

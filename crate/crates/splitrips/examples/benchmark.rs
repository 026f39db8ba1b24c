//! Direct against blockwise persistence on chains of scaled 3-sphere samples.
//!
//! Run with `cargo run --release --example benchmark`.

use splitrips::bench::{rows_to_csv, run_benchmark};
use splitrips::field::FieldTag;

fn main() -> splitrips::Result<()> {
    let rows = run_benchmark(&[1, 2, 4, 6], 10, &[1, 2], 0, FieldTag::Q)?;
    print!("{}", rows_to_csv(&rows)?);
    Ok(())
}

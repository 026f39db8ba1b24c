//! Circular order recovery, the weight matrix, the turning function and the direction map.
//!
//! Run with `cargo run --example circular_recognition`.

use splitrips::circular::{compute_m, compute_sigma, recognize_circular};
use splitrips::fixtures;

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn main() -> splitrips::Result<()> {
    for (name, m) in [
        ("five points on a circle", fixtures::circle_five_points()),
        ("hexagon", fixtures::hexagon()),
        ("seven-point metric", fixtures::seven_point()),
    ] {
        let Some((order, cd)) = recognize_circular(&m)? else {
            println!("{name}: not circular decomposable");
            continue;
        };
        let st = compute_sigma(&cd);
        let sigma: Vec<usize> = (0..cd.n()).map(|c| st.get(c) + 1).collect();
        let cert = compute_m(&cd, &st)?;
        println!("{name}");
        println!("  order {:?}", one_based(&order));
        println!("  sigma {sigma:?}");
        println!("  M     {:?}", one_based(&cert.m));
        println!("  M-bar {:?}", one_based(&cert.mbar));
        println!("  star property holds: {}", cert.star_holds);
    }
    println!(
        "K_{{2,3}} circular: {}",
        recognize_circular(&fixtures::k23())?.is_some()
    );
    Ok(())
}

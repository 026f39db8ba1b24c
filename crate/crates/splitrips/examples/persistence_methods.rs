//! The same barcode from every applicable method, chosen automatically or by hand.
//!
//! Run with `cargo run --example persistence_methods`.

use splitrips::field::FieldTag;
use splitrips::fixtures;
use splitrips::number::format_rational;
use splitrips::persistence::Barcode;
use splitrips::pipeline::{Engine, Method, verify};

fn show(bars: &Barcode) {
    for (k, dim) in bars.dims.iter().enumerate() {
        let text: Vec<String> = dim
            .iter()
            .map(|b| {
                let death = b.death.as_ref().map_or_else(|| "inf".to_string(), format_rational);
                format!("[{}, {death})", format_rational(&b.birth))
            })
            .collect();
        let text = if text.is_empty() { "no bars".to_string() } else { text.join(" ") };
        println!("    H{k}: {text}");
    }
}

fn main() -> splitrips::Result<()> {
    for (name, m) in [("hexagon", fixtures::hexagon()), ("seven-point metric", fixtures::seven_point())] {
        println!("{name}");
        for method in [Method::Auto, Method::Oracle, Method::Circular, Method::Mv, Method::Block] {
            match Engine::new(&m, method, FieldTag::Q, 2) {
                Ok(engine) => {
                    verify(&engine, &m)?;
                    println!("  {method} resolves to {} and verifies", engine.method());
                    if method == Method::Auto {
                        show(&engine.persistence()?);
                    }
                }
                Err(e) => println!("  {method}: {e}"),
            }
        }
    }
    Ok(())
}

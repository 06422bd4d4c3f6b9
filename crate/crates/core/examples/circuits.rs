//! Bases, circuits and the largest subdeterminant of a small matrix.
//!
//! Run with `cargo run --example circuits [FILE]`; without a file it uses
//! the one-row instance `2 x1 + x2 + 2 x3 = 4`.

use mipaug::instance::{parse_instance, MipInstance};
use mipaug::linalg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => MipInstance::single_row(&[2, 1], &[2], 4, None)?,
    };
    println!("A =\n{}", inst.to_text());
    for b in linalg::enumerate_bases(&inst) {
        let sys = linalg::BasisSystem::new(&inst, &b);
        println!("basis {b}: B^-1 b = {}, delta = {}", sys.inv_b, sys.delta());
    }
    println!("circuits of the real block:");
    for c in linalg::circuits(&inst) {
        println!("  ±{} on columns {:?}", c.vec, c.support);
    }
    println!("largest subdeterminant of A: {}", linalg::max_subdeterminant(&inst));
    Ok(())
}

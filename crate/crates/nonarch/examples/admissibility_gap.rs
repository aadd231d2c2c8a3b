//! Unbounded inverse: multiplication by `T - (pi(n) U X)_n` on the
//! localized product has geometric elements of arbitrarily large norm whose
//! images have norm exactly 1, so its inverse is unbounded and the map is
//! not admissible.
//!
//! Run with `cargo run --example admissibility_gap`.

use nonarch::lognorm::rational_int;
use nonarch::product::{admissibility_gap, PiSequence};

fn main() {
    let pi = PiSequence::default();
    for target in [2i64, 10, 50] {
        let report = admissibility_gap(&rational_int(target), &pi, &rational_int(1)).unwrap();
        println!("log target {target}:");
        println!(
            "  factor n0 = {}, eps = {}, peak power {}, length {}",
            report.factor, report.epsilon, report.peak_power, report.length
        );
        println!(
            "  input norm 2^({}) > 2^{target}, image norm 2^({}) = 1",
            report.input_lognorm, report.output_lognorm
        );
        match &report.element {
            Some(e) => println!("  element materialized with {} monomials", e.num_terms()),
            None => println!("  element given by its generating rule (too long to expand)"),
        }
    }
    println!("the inverse operator norm exceeds every bound: not admissible.");
}

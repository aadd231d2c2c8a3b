//! Two presentations of the same rational domain with genuinely different
//! section algebras: adjoining `X` leaves `|UX| = r`, adjoining `X` and
//! `UX` bounds it by 1. Sections over the domain depend on the
//! presentation, so the structure presheaf is not well defined.
//!
//! Run with `cargo run --example presentation_gap`.

use nonarch::localize::presentation_nonuniqueness;
use nonarch::lognorm::rational_int;

fn main() {
    for r_log in [1i64, 2] {
        let gap = presentation_nonuniqueness(&rational_int(r_log)).unwrap();
        println!("radius 2^{r_log}, witness element {}:", gap.witness);
        for row in &gap.rows {
            println!(
                "  |{witness}| in {alg:<10} {rel} {lin}",
                witness = gap.witness,
                alg = row.algebra,
                rel = if row.is_upper_bound { "<=" } else { " =" },
                lin = row.linear,
            );
        }
    }
    println!("both presentations cut out the same points; the norms disagree.");
}

//! A series that is Cauchy for the spectral seminorm of the localization
//! while its terms' norms grow without bound: the spectral radius is not a
//! complete norm there, so the localization is not a Banach function
//! algebra.
//!
//! Run with `cargo run --example divergent_series`.

use nonarch::localize::uniformity_witness;
use nonarch::lognorm::rational_int;

fn main() {
    // terms c^(d_i) (UX)^(N i) with c = t (|c| = 1/2), N = 2, r = 2
    let report = uniformity_witness(2, &rational_int(-1), 32, &rational_int(1)).unwrap();
    println!(
        "series terms c^d (UX)^(N i) with N = {}, log|c| = {}:",
        report.big_n, report.c_log
    );
    println!(
        "{:>4} {:>10} {:>6} {:>16} {:>16}",
        "i", "exponent", "d", "spectral", "norm"
    );
    for t in report.terms.iter().take(10) {
        println!(
            "{:>4} {:>10} {:>6} {:>16} {:>16}",
            t.i,
            t.exponent,
            t.d,
            format!("2^({})", t.spectral_lognorm),
            format!("2^({})", t.banach_lognorm),
        );
    }
    let last = report.terms.last().unwrap();
    println!("...");
    println!(
        "at i = {}: spectral 2^({}) (heading to 0), norm 2^({}) (heading to oo)",
        last.i, last.spectral_lognorm, last.banach_lognorm
    );
    println!("verdict: {}", report.verdict);
}

//! The image of `UX` in the localization: spectral radius exactly 1, norms
//! of its powers unbounded — so the bounded subring misses an element of
//! the spectral unit ball and the localized algebra is not uniform.
//!
//! Run with `cargo run --example spectral_radius`.

use nonarch::localize::{monomial_quotient_norm_exact, spectral_radius_seq};
use nonarch::lognorm::rational_int;

fn main() {
    let r_log = rational_int(1);
    let seq = spectral_radius_seq(4096, &r_log);

    println!("n-th root trace |(UX)^n|^(1/n) in log scale, at powers of two:");
    for m in 0..=12u32 {
        let n = 1u64 << m;
        println!(
            "  n = {n:>5}: root 2^({root}), power norm 2^({norm})",
            root = seq[n as usize - 1],
            norm = monomial_quotient_norm_exact(n, n, &r_log).unwrap(),
        );
    }
    println!("the roots fall toward 1 while the norms grow without bound:");
    println!("  spectral radius of UX = 1  (UX lies in the spectral unit ball)");
    println!("  sup_n |(UX)^n| = oo        (UX is not a bounded element)");
}

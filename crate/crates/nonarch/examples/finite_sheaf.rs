//! Positive control: function algebras on finite point sets. Rational
//! domains are clopen, localization is restriction next to an idempotent,
//! sections are presentation-independent, and every covering has an exact
//! complex.
//!
//! Run with `cargo run --example finite_sheaf`.

use nonarch::finite::{
    cech_exactness_finite, localize_finite, presentation_independent, FiniteFunctionAlgebra,
};
use nonarch::lognorm::rational_int;
use nonarch::ValuedScalar;

fn main() {
    let t = || ValuedScalar::var_power(rational_int(1));
    let one = ValuedScalar::one;
    let alg = FiniteFunctionAlgebra::new(["p", "q", "r"]);

    // |f1| <= |f0| pointwise cuts out {p, q}
    let pres_pq = vec![vec![one(), one(), t()], vec![one(), one(), one()]];
    let loc = localize_finite(&alg, &pres_pq).unwrap();
    println!(
        "domain of the first presentation: {:?}, idempotent {:?}",
        loc.algebra.points,
        loc.idempotent
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "restriction surjective: {}, norms preserved: {}",
        loc.restriction_surjective, loc.norm_preserved
    );

    // a different presentation of the same domain gives the same algebra
    let t2 = || &t() * &t();
    let pres_pq_again = vec![vec![one(), one(), t2()], vec![one(), one(), one()]];
    println!(
        "presentation-independent: {}",
        presentation_independent(&alg, &pres_pq, &pres_pq_again).unwrap()
    );

    // an overlapping cover has an exact complex
    let pres_qr = vec![vec![t(), one(), one()], vec![one(), one(), one()]];
    let verdict = cech_exactness_finite(&alg, &[pres_pq, pres_qr]).unwrap();
    println!("cover {{p,q}}, {{q,r}} complex verdict: {verdict:?}");
}

//! Certified quotient norms in the localization bounding `|X| <= 1`: the
//! reducer search meets the exact value `floor(i0) * r_log` from above, and
//! the recurrence certificate refutes any claim below it.
//!
//! Run with `cargo run --example quotient_norm`.

use nonarch::localize::{
    lower_bound_certificate, monomial_quotient_bound, quotient_norm_upper, LocalizationPresentation,
};
use nonarch::lognorm::rational_int;
use nonarch::{Caps, Monomial, TateElement, ValuedScalar};

fn main() {
    let r_log = rational_int(1);

    // U^3 X^5: ambient Gauss norm 2^5, but the coset contracts to 2^2
    let bound = monomial_quotient_bound(3, 5, &r_log, 6).unwrap();
    println!(
        "U^3 X^5 modulo (T - X): upper 2^({u}), lower 2^({l}), exact: {e}",
        u = bound.upper,
        l = bound.lower,
        e = bound.is_exact()
    );
    println!("optimal reducer:");
    for (m, c) in bound.reducer.terms() {
        println!("  {m} * ({c})");
    }
    if let Some(cert) = &bound.certificate {
        println!("refutation of any smaller claim: {cert}");
    }

    // the same machinery on a mixed element
    let pres = LocalizationPresentation::weierstrass_x(r_log.clone()).unwrap();
    let caps = Caps::new(16, 16, 16);
    let f = TateElement::monomial_term(
        pres.base.clone(),
        caps,
        Monomial::ux(0, 3),
        ValuedScalar::one(),
    )
    .unwrap()
    .add(
        &TateElement::monomial_term(
            pres.base.clone(),
            caps,
            Monomial::ux(3, 4),
            ValuedScalar::var_power(rational_int(1)),
        )
        .unwrap(),
    )
    .unwrap();
    let up = quotient_norm_upper(&f, &pres, 8).unwrap();
    println!(
        "\n|X^3 + t U^3 X^4| in the localization: ambient 2^({}), coset 2^({})",
        f.gauss_norm(),
        up.value
    );

    // a hand-made candidate claiming to beat the bound is pinned exactly
    let zero = TateElement::zero(pres.base.clone(), caps);
    let violation = lower_bound_certificate(3, 5, &zero, &zero, &r_log).unwrap();
    println!("\nzero candidate for U^3 X^5: {violation}");
}

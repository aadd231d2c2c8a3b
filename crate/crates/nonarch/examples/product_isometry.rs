//! Localizing a sup-norm product is the product of the localizations,
//! isometrically: the joint reducer search and the per-factor searches give
//! exactly the same quotient bounds.
//!
//! Run with `cargo run --example product_isometry`.

use nonarch::lognorm::rational_int;
use nonarch::product::{product_localization_isometry_check, ProductElement};
use nonarch::{AlgebraDescriptor, Caps, Monomial, TateElement, ValuedScalar};

fn main() {
    let d = AlgebraDescriptor::staircase(rational_int(1)).unwrap();
    let caps = Caps::new(16, 16, 16);
    let mono = |u: u64, x: u64| {
        TateElement::monomial_term(d.clone(), caps, Monomial::ux(u, x), ValuedScalar::one())
            .unwrap()
    };

    let cases = [
        ProductElement::new(vec![mono(3, 5), TateElement::zero(d.clone(), caps)]).unwrap(),
        ProductElement::new(vec![mono(1, 1), mono(3, 3)]).unwrap(),
        ProductElement::new(vec![
            mono(0, 3),
            mono(2, 2).add(&mono(5, 4)).unwrap(),
            mono(4, 3),
        ])
        .unwrap(),
    ];

    for (k, f) in cases.iter().enumerate() {
        let check = product_localization_isometry_check(f, 6).unwrap();
        println!(
            "case {k}: joint bound 2^({joint}), per-factor bounds {per:?} -> max 2^({max})",
            joint = check.joint,
            per = check
                .per_factor
                .iter()
                .map(|v| v.linear_string())
                .collect::<Vec<_>>(),
            max = check.per_factor_max,
        );
        assert!(check.pass);
    }
    println!("joint == per-factor max on every case: the canonical map is an isometry.");
}

//! Weighted Gauss norms on the bidisc and the staircase subalgebra: the
//! support predicate `x >= floor(u)`, the generator table, lattice norms,
//! and adic-closure membership.
//!
//! Run with `cargo run --example gauss_norms`.

use nonarch::lognorm::rational_int;
use nonarch::series::{adic_closure_member, lattice_norm};
use nonarch::staircase;
use nonarch::{AlgebraDescriptor, Caps, LogNorm, Monomial, TateElement, ValuedScalar};

fn main() {
    let r_log = rational_int(1); // |X| <= 2, |U| <= 1
    let stair = AlgebraDescriptor::staircase(r_log.clone()).unwrap();
    let caps = Caps::new(64, 64, 64);

    println!("staircase generators U^i X^(a_i) and their Gauss norms (r = 2):");
    for i in 0..=8u64 {
        let a = staircase::generator_exponent(i);
        let g = TateElement::monomial_term(
            stair.clone(),
            caps,
            Monomial::ux(i, a),
            ValuedScalar::one(),
        )
        .unwrap();
        println!(
            "  i = {i}: a_i = {a}, floor = {f}, |U^{i} X^{a}| = 2^({n})",
            f = staircase::floor(i),
            n = g.gauss_norm()
        );
    }

    // membership in the subalgebra is the support condition
    let full = AlgebraDescriptor::full_bidisc(r_log);
    for (u, x) in [(2u64, 1u64), (2, 2), (0, 0)] {
        let f =
            TateElement::monomial_term(full.clone(), caps, Monomial::ux(u, x), ValuedScalar::one())
                .unwrap();
        println!(
            "U^{u} X^{x} in the staircase subalgebra: {}",
            f.staircase_member().unwrap()
        );
    }

    // the norm associated to the unit-ball lattice recovers the Gauss norm
    let t_half_x = TateElement::monomial_term(
        stair.clone(),
        caps,
        Monomial::ux(0, 1),
        ValuedScalar::var_power(nonarch::lognorm::rational(1, 2)),
    )
    .unwrap();
    println!(
        "lattice norm of t^(1/2) X = 2^({}) = Gauss norm 2^({})",
        lattice_norm(&t_half_x, &stair),
        t_half_x.gauss_norm()
    );

    // adic closure of the scaled-ball family is the closed ball
    let x =
        TateElement::monomial_term(stair.clone(), caps, Monomial::ux(0, 1), ValuedScalar::one())
            .unwrap();
    println!(
        "X in closure of balls of radius 2^1: {}; of radius 2^(1/2): {}",
        adic_closure_member(&x, &LogNorm::finite(1, 1)),
        adic_closure_member(&x, &LogNorm::finite(1, 2)),
    );
}

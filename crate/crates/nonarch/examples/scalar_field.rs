//! The coefficient field: finitely supported series in `t` with rational
//! exponents and `|t| = 1/2`, giving a value group dense in `[0, oo)`.
//!
//! Run with `cargo run --example scalar_field`.

use nonarch::lognorm::{rational, rational_int};
use nonarch::ValuedScalar;

fn main() {
    let t = ValuedScalar::var_power(rational_int(1));
    let one = ValuedScalar::one();

    println!("|t|       -> 2^({})", t.log_norm());
    println!(
        "|t + t^2| -> 2^({})   (smallest exponent wins)",
        (&t + &(&t * &t)).log_norm()
    );
    let minus_t = -&t;
    println!("|t + (-t)| -> {}", (&t + &minus_t).log_norm());

    // rational exponents multiply exactly
    let a = ValuedScalar::var_power(rational(1, 3));
    let b = ValuedScalar::var_power(rational(2, 3));
    println!("t^(1/3) * t^(2/3) = {}", &a * &b);

    // density: between any two norm values there is another
    let lo = rational(1, 3);
    let hi = rational(1, 2);
    let mid = (&lo + &hi) / rational_int(2);
    let witness = ValuedScalar::var_power(-mid);
    println!(
        "strictly between 2^(1/3) and 2^(1/2): 2^({})",
        witness.log_norm()
    );

    // truncated inverse of 1 - t: the geometric series cut at precision 5
    let inv = (&one - &t).inverse_trunc(&rational_int(5)).unwrap();
    println!("(1 - t)^(-1) to precision 5: {}", inv);
    let residual = &(&(&one - &t) * &inv) - &one;
    println!(
        "residual (1-t)*inv - 1 has valuation {}",
        residual.valuation().unwrap()
    );
}

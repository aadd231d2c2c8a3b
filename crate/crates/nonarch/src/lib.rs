//! Exact-arithmetic toolkit for ultrametric Banach-algebra computations:
//! weighted Gauss norms on sparse series, the staircase subalgebra of a
//! weighted bidisc, Weierstrass localizations with certified quotient-norm
//! bounds, sup-norm direct products with a diagonal Cech witness, and a
//! finite-point-set positive control.
//!
//! All norms are exact rationals in base-2 log scale; nothing in this crate
//! touches floating point.

pub mod config;
pub mod error;
pub mod finite;
pub mod localize;
pub mod lognorm;
pub mod product;
pub mod scalar;
pub mod series;
pub mod staircase;
pub mod suite;

pub use error::{Error, Result};
pub use lognorm::LogNorm;
pub use scalar::ValuedScalar;
pub use series::{AlgebraDescriptor, Caps, Monomial, SupportShape, TateElement};

#[cfg(test)]
mod tests {
    // the concurrency contract: every value type is immutable after
    // construction and freely shareable across threads
    fn is_send_sync<T: Send + Sync>() {}

    #[test]
    fn values_are_send_and_sync() {
        is_send_sync::<crate::LogNorm>();
        is_send_sync::<crate::ValuedScalar>();
        is_send_sync::<crate::TateElement>();
        is_send_sync::<crate::AlgebraDescriptor>();
        is_send_sync::<crate::product::ProductElement>();
        is_send_sync::<crate::product::CechWitness>();
        is_send_sync::<crate::finite::FiniteFunctionAlgebra>();
    }
}

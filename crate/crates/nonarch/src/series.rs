//! Sparse elements of weighted Tate algebras: monomials in `U`, `X` and an
//! optional (possibly Laurent) variable `T`, with scalar coefficients from
//! the valued field, a support predicate, and explicit truncation caps.
//!
//! Truncation is a visible effect: any operation that drops a monomial
//! because it exceeds a cap marks its result `truncated`, and exactness
//! claims downstream require the flag to be false.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognorm::{rational_string, LogNorm};
use crate::scalar::ValuedScalar;
use crate::staircase;

/// Exponent vector `U^u X^x T^t`. `t` is 0 whenever `T` is absent and may be
/// negative only in Laurent algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub u: u64,
    pub x: u64,
    pub t: i64,
}

impl Monomial {
    pub fn new(u: u64, x: u64, t: i64) -> Self {
        Monomial { u, x, t }
    }

    pub fn ux(u: u64, x: u64) -> Self {
        Monomial { u, x, t: 0 }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U^{} X^{} T^{}", self.u, self.x, self.t)
    }
}

/// Truncation caps. `t` bounds the absolute value of the `T`-exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub u: u64,
    pub x: u64,
    pub t: u64,
}

impl Caps {
    pub fn new(u: u64, x: u64, t: u64) -> Self {
        Caps { u, x, t }
    }

    pub fn intersect(&self, other: &Caps) -> Caps {
        Caps {
            u: self.u.min(other.u),
            x: self.x.min(other.x),
            t: self.t.min(other.t),
        }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.u <= self.u && m.x <= self.x && m.t.unsigned_abs() <= self.t
    }
}

/// Which monomial supports the algebra allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportShape {
    /// Full polydisc: every `(u, x)` is admissible.
    Full,
    /// Staircase subalgebra: `x >= floor(u)`.
    Staircase,
}

/// Weighted-norm data of an algebra: base-2 log radii per variable, the
/// support predicate, and whether `T` is Laurent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    #[serde(with = "rat_string")]
    pub radius_u: BigRational,
    #[serde(with = "rat_string")]
    pub radius_x: BigRational,
    #[serde(with = "rat_string")]
    pub radius_t: BigRational,
    pub support: SupportShape,
    pub laurent_t: bool,
}

impl AlgebraDescriptor {
    /// Full bidisc with radius 1 on `U` and radius `2^radius_x_log` on `X`.
    pub fn full_bidisc(radius_x_log: BigRational) -> Self {
        AlgebraDescriptor {
            radius_u: BigRational::zero(),
            radius_x: radius_x_log,
            radius_t: BigRational::zero(),
            support: SupportShape::Full,
            laurent_t: false,
        }
    }

    /// The staircase subalgebra of the bidisc with `|U| <= 1`, `|X| <= 2^r_log`.
    /// Requires `r_log > 0`.
    pub fn staircase(r_log: BigRational) -> Result<Self> {
        if !r_log.is_positive() {
            return Err(Error::PreconditionFailed(format!(
                "staircase algebra needs log radius > 0, got {}",
                rational_string(&r_log)
            )));
        }
        Ok(AlgebraDescriptor {
            radius_u: BigRational::zero(),
            radius_x: r_log,
            radius_t: BigRational::zero(),
            support: SupportShape::Staircase,
            laurent_t: false,
        })
    }

    /// Staircase algebra with a polynomial variable `T` adjoined at radius 1.
    pub fn localized(r_log: BigRational) -> Result<Self> {
        Self::staircase(r_log)
    }

    /// Staircase algebra with a Laurent variable `T` at radius 1 in both
    /// directions.
    pub fn localized_laurent(r_log: BigRational) -> Result<Self> {
        let mut d = Self::staircase(r_log)?;
        d.laurent_t = true;
        Ok(d)
    }

    /// Is the monomial allowed by the support predicate (ignoring caps)?
    pub fn admits(&self, m: &Monomial) -> bool {
        if m.t < 0 && !self.laurent_t {
            return false;
        }
        match self.support {
            SupportShape::Full => true,
            SupportShape::Staircase => staircase::admissible(m.u, m.x),
        }
    }

    /// Base-2 log of the Gauss weight `r_u^u r_x^x r_t^|t-part|` of a monomial.
    pub fn weight(&self, m: &Monomial) -> BigRational {
        let u = BigRational::from_integer(m.u.into());
        let x = BigRational::from_integer(m.x.into());
        let t = BigRational::from_integer(m.t.into());
        &self.radius_u * u + &self.radius_x * x + &self.radius_t * t
    }
}

mod rat_string {
    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::lognorm::parse_rational(&s).map_err(D::Error::custom)
    }
}

/// A sparse algebra element: finitely many monomials with nonzero scalar
/// coefficients, all admissible for the descriptor and within the caps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateElement {
    pub algebra: AlgebraDescriptor,
    pub caps: Caps,
    /// Set when some operation dropped a monomial beyond the caps.
    pub truncated: bool,
    terms: BTreeMap<Monomial, ValuedScalar>,
}

// Serialized with the terms as a list of {u, x, t, scalar} records.
#[derive(Serialize, Deserialize)]
struct TermRecord {
    u: u64,
    x: u64,
    t: i64,
    scalar: ValuedScalar,
}

#[derive(Serialize, Deserialize)]
struct TateElementRepr {
    algebra: AlgebraDescriptor,
    caps: Caps,
    truncated: bool,
    terms: Vec<TermRecord>,
}

impl Serialize for TateElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TateElementRepr {
            algebra: self.algebra.clone(),
            caps: self.caps,
            truncated: self.truncated,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    u: m.u,
                    x: m.x,
                    t: m.t,
                    scalar: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for TateElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TateElementRepr::deserialize(d)?;
        let mut out = TateElement::zero(repr.algebra, repr.caps);
        out.truncated = repr.truncated;
        for r in repr.terms {
            out.insert_checked(Monomial::new(r.u, r.x, r.t), r.scalar)
                .map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

impl TateElement {
    pub fn zero(algebra: AlgebraDescriptor, caps: Caps) -> Self {
        TateElement {
            algebra,
            caps,
            truncated: false,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: AlgebraDescriptor, caps: Caps) -> Self {
        let mut e = Self::zero(algebra, caps);
        e.terms.insert(Monomial::ux(0, 0), ValuedScalar::one());
        e
    }

    /// Single-term element; fails if the monomial is inadmissible or beyond
    /// the caps.
    pub fn monomial_term(
        algebra: AlgebraDescriptor,
        caps: Caps,
        m: Monomial,
        c: ValuedScalar,
    ) -> Result<Self> {
        let mut e = Self::zero(algebra, caps);
        e.insert_checked(m, c)?;
        Ok(e)
    }

    pub fn from_terms<I>(algebra: AlgebraDescriptor, caps: Caps, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ValuedScalar)>,
    {
        let mut e = Self::zero(algebra, caps);
        for (m, c) in terms {
            e.insert_checked(m, c)?;
        }
        Ok(e)
    }

    fn insert_checked(&mut self, m: Monomial, c: ValuedScalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !self.algebra.admits(&m) {
            return Err(Error::SupportViolation {
                u: m.u,
                x: m.x,
                t: m.t,
                reason: match self.algebra.support {
                    SupportShape::Staircase => {
                        format!("x < floor(u) = {}", staircase::floor(m.u))
                    }
                    SupportShape::Full => "negative T-exponent in a non-Laurent algebra".into(),
                },
            });
        }
        if !self.caps.admits(&m) {
            return Err(Error::SupportViolation {
                u: m.u,
                x: m.x,
                t: m.t,
                reason: format!("exceeds truncation caps {:?}", self.caps),
            });
        }
        Self::accumulate(&mut self.terms, m, c);
        Ok(())
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, ValuedScalar>, m: Monomial, c: ValuedScalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ValuedScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> ValuedScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(ValuedScalar::zero)
    }

    /// The weighted sup norm: max over the support of
    /// `|coefficient| * weight(monomial)`, `Bottom` for zero.
    pub fn gauss_norm(&self) -> LogNorm {
        let mut best = LogNorm::Bottom;
        for (m, c) in &self.terms {
            let v = &c.log_norm() + &LogNorm::Finite(self.algebra.weight(m));
            best = best.join(&v);
        }
        best
    }

    fn check_descriptor(&self, other: &TateElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::DescriptorMismatch(format!(
                "{:?} vs {:?}",
                self.algebra, other.algebra
            )));
        }
        Ok(())
    }

    /// Coefficient-wise sum. Caps are intersected; monomials beyond the
    /// intersection are dropped and flag the result as truncated.
    pub fn add(&self, other: &TateElement) -> Result<TateElement> {
        self.check_descriptor(other)?;
        let caps = self.caps.intersect(&other.caps);
        let mut out = TateElement::zero(self.algebra.clone(), caps);
        out.truncated = self.truncated || other.truncated;
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if !caps.admits(m) {
                out.truncated = true;
                continue;
            }
            Self::accumulate(&mut out.terms, *m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TateElement {
        TateElement {
            algebra: self.algebra.clone(),
            caps: self.caps,
            truncated: self.truncated,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &TateElement) -> Result<TateElement> {
        self.add(&other.neg())
    }

    /// Convolution product. In a staircase algebra the admissibility of every
    /// product monomial is asserted rather than assumed, so a broken floor
    /// sequence fails loudly.
    pub fn mul(&self, other: &TateElement) -> Result<TateElement> {
        self.check_descriptor(other)?;
        let caps = self.caps.intersect(&other.caps);
        let mut out = TateElement::zero(self.algebra.clone(), caps);
        out.truncated = self.truncated || other.truncated;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial::new(ma.u + mb.u, ma.x + mb.x, ma.t + mb.t);
                assert!(
                    self.algebra.admits(&m),
                    "product monomial {m} escaped the support predicate"
                );
                if !caps.admits(&m) {
                    out.truncated = true;
                    continue;
                }
                Self::accumulate(&mut out.terms, m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &ValuedScalar) -> TateElement {
        if c.is_zero() {
            return TateElement::zero(self.algebra.clone(), self.caps);
        }
        TateElement {
            algebra: self.algebra.clone(),
            caps: self.caps,
            truncated: self.truncated,
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Result<TateElement> {
        let mut acc = TateElement::one(self.algebra.clone(), self.caps);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Does every support monomial of this full-bidisc element satisfy the
    /// staircase predicate `x >= floor(u)`?
    pub fn staircase_member(&self) -> Result<bool> {
        if self.algebra.support != SupportShape::Full {
            return Err(Error::PreconditionFailed(
                "staircase membership is asked of full-bidisc elements".into(),
            ));
        }
        Ok(self.terms.keys().all(|m| staircase::admissible(m.u, m.x)))
    }
}

/// Membership in the scaled unit ball: is `f` in `k(2^rho) * Ball(lattice)`?
/// Over the dense value group this holds iff every support monomial satisfies
/// `|coefficient| * weight <= 2^rho`.
pub fn in_scaled_ball(f: &TateElement, lattice: &AlgebraDescriptor, rho: &BigRational) -> bool {
    f.terms().all(|(m, c)| {
        &c.log_norm() + &LogNorm::Finite(lattice.weight(m)) <= LogNorm::Finite(rho.clone())
    })
}

/// The norm associated to the Gauss unit-ball lattice of `lattice`: the
/// infimum over scalars `c` with `f` in `c * Ball`, which over a dense value
/// group is attained at the largest per-monomial requirement.
///
/// Kept separate from [`TateElement::gauss_norm`] so that the identity of the
/// two routes is a tested fact rather than an assumption.
pub fn lattice_norm(f: &TateElement, lattice: &AlgebraDescriptor) -> LogNorm {
    let mut requirement = LogNorm::Bottom;
    for (m, c) in f.terms() {
        requirement = requirement.join(&(&c.log_norm() + &LogNorm::Finite(lattice.weight(m))));
    }
    if let LogNorm::Finite(rho) = &requirement {
        debug_assert!(in_scaled_ball(f, lattice, rho));
    }
    requirement
}

/// Membership in the adic closure of the scaled-ball family: the closure of
/// `{ k(s) Ball(ball) : s > 1 }` over a dense value group is the closed ball,
/// so membership is the closed inequality `gauss_norm(f) <= ball`.
pub fn adic_closure_member(f: &TateElement, ball: &LogNorm) -> bool {
    f.gauss_norm() <= *ball
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::{rational, rational_int};

    fn stair(r_log: i64) -> AlgebraDescriptor {
        AlgebraDescriptor::staircase(rational_int(r_log)).unwrap()
    }

    fn caps() -> Caps {
        Caps::new(1 << 20, 1 << 20, 1 << 20)
    }

    fn t_scalar() -> ValuedScalar {
        ValuedScalar::var_power(rational_int(1))
    }

    fn term(d: &AlgebraDescriptor, u: u64, x: u64, c: ValuedScalar) -> TateElement {
        TateElement::monomial_term(d.clone(), caps(), Monomial::ux(u, x), c).unwrap()
    }

    #[test]
    fn gauss_norm_of_monomials() {
        let d = stair(1);
        // U^3 X^2 with r = 2: log-norm 0*3 + 1*2 = 2
        let f = term(&d, 3, 2, ValuedScalar::one());
        assert_eq!(f.gauss_norm(), LogNorm::finite(2, 1));
        // t * X: -1 + 1 = 0
        let g = term(&d, 0, 1, t_scalar());
        assert_eq!(g.gauss_norm(), LogNorm::zero());
        // X^2 + t X^2: join of 2 and 1
        let h = term(&d, 0, 2, ValuedScalar::one())
            .add(&term(&d, 0, 2, t_scalar()))
            .unwrap();
        assert_eq!(h.gauss_norm(), LogNorm::finite(2, 1));
        assert_eq!(TateElement::zero(d, caps()).gauss_norm(), LogNorm::Bottom);
    }

    #[test]
    fn staircase_products_stay_admissible() {
        let d = stair(1);
        // (U X^2)(U^2 X^2) = U^3 X^4, admissible since floor(3) = 2 <= 4
        let f = term(&d, 1, 2, ValuedScalar::one());
        let g = term(&d, 2, 2, ValuedScalar::one());
        let p = f.mul(&g).unwrap();
        assert_eq!(p.coefficient(&Monomial::ux(3, 4)), ValuedScalar::one());
        assert_eq!(p.num_terms(), 1);
        assert!(!p.truncated);
        // X * X = X^2
        let x = term(&d, 0, 1, ValuedScalar::one());
        let x2 = x.mul(&x).unwrap();
        assert_eq!(x2.coefficient(&Monomial::ux(0, 2)), ValuedScalar::one());
    }

    #[test]
    fn square_expansion_matches_direct_oracle() {
        // (X + UX)^2 expanded by an independent nested loop
        let d = stair(1);
        let f = term(&d, 0, 1, ValuedScalar::one())
            .add(&term(&d, 1, 1, ValuedScalar::one()))
            .unwrap();
        let square = f.mul(&f).unwrap();

        let mut oracle: BTreeMap<Monomial, ValuedScalar> = BTreeMap::new();
        let monos = [Monomial::ux(0, 1), Monomial::ux(1, 1)];
        for a in &monos {
            for b in &monos {
                let m = Monomial::ux(a.u + b.u, a.x + b.x);
                let prev = oracle.remove(&m).unwrap_or_else(ValuedScalar::zero);
                oracle.insert(m, &prev + &ValuedScalar::one());
            }
        }
        for (m, c) in &oracle {
            assert_eq!(square.coefficient(m), c.clone(), "coefficient at {m}");
            assert!(staircase::admissible(m.u, m.x));
        }
        assert_eq!(square.num_terms(), oracle.len());
    }

    #[test]
    fn inadmissible_monomials_are_rejected() {
        let d = stair(1);
        assert!(matches!(
            TateElement::monomial_term(d, caps(), Monomial::ux(2, 1), ValuedScalar::one()),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn descriptor_mismatch_is_an_error() {
        let f = term(&stair(1), 0, 1, ValuedScalar::one());
        let g = term(&stair(2), 0, 1, ValuedScalar::one());
        assert!(matches!(f.add(&g), Err(Error::DescriptorMismatch(_))));
        assert!(matches!(f.mul(&g), Err(Error::DescriptorMismatch(_))));
    }

    #[test]
    fn truncation_is_flagged() {
        let d = stair(1);
        let small = Caps::new(4, 4, 4);
        let f =
            TateElement::monomial_term(d.clone(), small, Monomial::ux(0, 3), ValuedScalar::one())
                .unwrap();
        let p = f.mul(&f).unwrap();
        assert!(p.truncated, "X^6 exceeds the x-cap 4 and must be dropped");
        assert!(p.is_zero());
        // intersection of caps drops the wide element's high monomial on add
        let wide = term(&d, 0, 6, ValuedScalar::one());
        let sum = f.add(&wide).unwrap();
        assert!(sum.truncated);
        assert_eq!(sum.num_terms(), 1);
    }

    #[test]
    fn staircase_membership_of_full_elements() {
        let d = AlgebraDescriptor::full_bidisc(rational_int(1));
        let mk = |u, x| {
            TateElement::monomial_term(d.clone(), caps(), Monomial::ux(u, x), ValuedScalar::one())
                .unwrap()
        };
        assert!(!mk(2, 1).staircase_member().unwrap());
        assert!(mk(2, 2).staircase_member().unwrap());
        assert!(mk(0, 0).staircase_member().unwrap());
    }

    #[test]
    fn lattice_norm_recovers_gauss_norm() {
        let d = stair(1);
        let x = term(&d, 0, 1, ValuedScalar::one());
        assert_eq!(lattice_norm(&x, &d), LogNorm::finite(1, 1));
        let half = term(&d, 0, 1, ValuedScalar::var_power(rational(1, 2)));
        assert_eq!(lattice_norm(&half, &d), LogNorm::finite(1, 2));
        let zero = TateElement::zero(d.clone(), caps());
        assert_eq!(lattice_norm(&zero, &d), LogNorm::Bottom);
        for f in [&x, &half, &zero] {
            assert_eq!(lattice_norm(f, &d), f.gauss_norm());
        }
    }

    #[test]
    fn adic_closure_is_the_closed_ball() {
        let d = stair(1);
        let x = term(&d, 0, 1, ValuedScalar::one());
        assert!(adic_closure_member(&x, &LogNorm::finite(1, 1)));
        assert!(!adic_closure_member(&x, &LogNorm::finite(1, 2)));
        let tx = term(&d, 0, 1, t_scalar());
        assert!(adic_closure_member(&tx, &LogNorm::zero()));
    }
}

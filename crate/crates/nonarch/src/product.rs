//! Sup-norm direct products of localized staircase algebras, the diagonal
//! Cech witness whose cocycle has no global preimage, the preimage
//! refutation engine, and the unbounded-inverse (non-admissibility) gap.
//!
//! Elements of the localization carry a closed-form norm: writing a coset in
//! its `T`-free normal form `sum g_(i,j) U^i X^j`, the quotient norm equals
//! `max |g_(i,j)| * 2^(floor(i) * r_log)` — the `X`-weight is contracted to
//! radius one and only the staircase floor of the `U`-exponent is charged.
//! This is a second, independent route to the values produced by the reducer
//! search in [`crate::localize`], and the two are cross-checked in tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localize::{class_optimum, quotient_norm_upper, LocalizationPresentation};
use crate::lognorm::{rational_string, LogNorm};
use crate::scalar::ValuedScalar;
use crate::series::{AlgebraDescriptor, Caps, Monomial, SupportShape, TateElement};
use crate::staircase;

/// A finite tuple of elements over a common descriptor, normed by the
/// maximum of the factor norms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductElement {
    pub factors: Vec<TateElement>,
}

impl ProductElement {
    pub fn new(factors: Vec<TateElement>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::PreconditionFailed(
                "a product needs at least one factor".into(),
            ));
        }
        let first = &factors[0].algebra;
        if factors.iter().any(|f| &f.algebra != first) {
            return Err(Error::DescriptorMismatch(
                "product factors live over different descriptors".into(),
            ));
        }
        Ok(ProductElement { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(TateElement::is_zero)
    }

    /// Sup norm over the factors' Gauss norms; `Bottom` iff all factors are
    /// zero.
    pub fn product_norm(&self) -> LogNorm {
        self.factors
            .iter()
            .fold(LogNorm::Bottom, |acc, f| acc.join(&f.gauss_norm()))
    }

    /// Sup norm over the factors' localized (quotient) norms.
    pub fn localized_norm(&self) -> LogNorm {
        self.factors.iter().fold(LogNorm::Bottom, |acc, f| {
            acc.join(&localized_factor_norm(f))
        })
    }
}

/// Closed-form quotient norm of a factor: `max |coef| * 2^(floor(u) * r_log)`
/// over the support. Exponents of `X` and `T` carry no weight after the
/// localization contracts both to radius one.
pub fn localized_factor_norm(f: &TateElement) -> LogNorm {
    debug_assert_eq!(f.algebra.support, SupportShape::Staircase);
    let r_log = &f.algebra.radius_x;
    let mut best = LogNorm::Bottom;
    for (m, c) in f.terms() {
        let w = BigRational::from_integer(staircase::floor(m.u).into()) * r_log;
        best = best.join(&(&c.log_norm() + &LogNorm::Finite(w)));
    }
    best
}

/// The scale sequence `pi(n) = t^(eps_n)` with `eps_n = 1/(scale * (n+1))`:
/// `|pi(n)| = 2^(-eps_n)` increases strictly to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PiSequence {
    pub scale: u64,
}

impl PiSequence {
    pub fn reciprocal_linear(scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::PreconditionFailed("scale must be positive".into()));
        }
        Ok(PiSequence { scale })
    }

    pub fn epsilon(&self, n: usize) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.scale * (n as u64 + 1)))
    }

    /// The scalar `t^(eps_n)`, of log-norm `-eps_n`.
    pub fn pi(&self, n: usize) -> ValuedScalar {
        ValuedScalar::var_power(self.epsilon(n))
    }
}

impl Default for PiSequence {
    fn default() -> Self {
        PiSequence { scale: 3 }
    }
}

/// Exact scan of `sup_i |pi|^i * 2^(floor(i) * r_log)` in log scale.
///
/// Within a dyadic block `[2^m, 2^(m+1))` the floor is constant, so the
/// objective `-i eps + floor(i) r_log` strictly decreases in `i` and the
/// supremum over the block is at its leader `2^m`. The scan therefore visits
/// `i = 0` and the block leaders, and runs until both `m >= ceil(2/eps)` and
/// `2^m eps > r_log`, past which point consecutive leaders strictly decrease
/// forever; extending the scan cannot change the maximizer, which tests
/// verify by doubling it.
///
/// Returns `(sup in log scale, smallest maximizer i)`.
pub fn radius_sup_scan(
    epsilon: &BigRational,
    r_log: &BigRational,
    extra_blocks: u64,
) -> (BigRational, u64) {
    let mut best = BigRational::zero(); // i = 0 contributes -0 eps + floor(0) r = 0
    let mut best_i = 0u64;
    let two = BigRational::from_integer(2.into());
    let min_blocks = (BigRational::from_integer(2.into()) / epsilon)
        .ceil()
        .to_integer()
        .to_u64()
        .expect("scan bound fits u64");
    let mut m = 0u64;
    let mut leader = BigRational::one(); // 2^m
    loop {
        let value = BigRational::from_integer((m + 1).into()) * r_log - &leader * epsilon;
        if value > best {
            best = value;
            best_i = 1u64.checked_shl(m as u32).expect("maximizer fits u64");
        }
        let tail_decreasing = &leader * epsilon > *r_log;
        if m >= min_blocks + extra_blocks && tail_decreasing {
            break;
        }
        m += 1;
        leader *= &two;
        assert!(m < 4096, "scan failed to terminate");
    }
    (best, best_i)
}

/// Construction parameters of one product factor.
#[derive(Debug, Clone, Serialize)]
pub struct FactorParams {
    pub n: usize,
    /// `eps_n`, with `|pi(n)| = 2^(-eps_n)`.
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: BigRational,
    /// `log2` of the factor's norm supremum `sup_i |pi|^i 2^(floor(i) r_log)`.
    #[serde(serialize_with = "ser_rat")]
    pub sup_lognorm: BigRational,
    /// Smallest index attaining the supremum.
    pub sup_index: u64,
    /// Greatest `l` with `|pi|^(-l) <= sqrt(sup)`; asserted `>= 1`.
    pub scale_pow: u64,
    /// Smallest `N` with `|pi|^N sup <= 1` and `|pi|^N 2^r_log <= 1`.
    pub laurent_pow: u64,
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Derive the per-factor parameters from the scale sequence by exact scan.
pub fn witness_parameters(n: usize, pi: &PiSequence, r_log: &BigRational) -> Result<FactorParams> {
    if !r_log.is_positive() {
        return Err(Error::PreconditionFailed(
            "log radius must be positive".into(),
        ));
    }
    let epsilon = pi.epsilon(n);
    let (sup_lognorm, sup_index) = radius_sup_scan(&epsilon, r_log, 0);
    // greatest l with l * eps <= sup/2
    let scale_pow = (&sup_lognorm / (BigRational::from_integer(2.into()) * &epsilon))
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(0);
    if scale_pow < 1 {
        return Err(Error::AssertLn { n });
    }
    // smallest N with N eps >= max(sup, r_log)
    let need = std::cmp::max(&sup_lognorm, r_log);
    let laurent_pow = (need / &epsilon)
        .ceil()
        .to_integer()
        .to_u64()
        .expect("laurent power fits u64");
    Ok(FactorParams {
        n,
        epsilon,
        sup_lognorm,
        sup_index,
        scale_pow,
        laurent_pow,
    })
}

/// The diagonal witness: parameters per factor, the Laurent element `F`, its
/// polynomial and antipolynomial sides `G_+`, `G_-`, and the growth data
/// that drives the refutation.
#[derive(Debug, Clone, Serialize)]
pub struct CechWitness {
    #[serde(serialize_with = "ser_rat")]
    pub r_log: BigRational,
    pub pi: PiSequence,
    pub params: Vec<FactorParams>,
    pub f: ProductElement,
    pub g_plus: ProductElement,
    pub g_minus: ProductElement,
    /// Per factor: `-(scale_pow + 1) eps_n + sup_lognorm`, the increasing
    /// sequence bounding the obstruction from below.
    pub growth: Vec<LogNorm>,
    /// Per factor: exact log-norm of `pi^l (pi U X)^(sup_index + 1)`, the
    /// element every candidate preimage must dominate.
    pub theta: Vec<LogNorm>,
    /// The defining identity held exactly on every factor at build time.
    pub identity_exact: bool,
}

fn witness_caps(p: &FactorParams) -> Caps {
    let reach = p.laurent_pow + p.sup_index + 2;
    Caps::new(reach, reach, reach)
}

fn pi_ux_power(
    algebra: &AlgebraDescriptor,
    caps: Caps,
    pi: &ValuedScalar,
    extra_pi_pow: u64,
    k: u64,
    t: i64,
) -> Result<TateElement> {
    // pi^extra * (pi U X)^k * T^t
    let coef = pi.pow(extra_pi_pow + k);
    TateElement::monomial_term(algebra.clone(), caps, Monomial::new(k, k, t), coef)
}

/// Build the witness over `n_factors` factors and verify its defining
/// identity `(T - Pi U X) F = G_+ - G_-` exactly, factor by factor.
pub fn build_cech_witness(
    n_factors: usize,
    pi: &PiSequence,
    r_log: &BigRational,
) -> Result<CechWitness> {
    if n_factors == 0 {
        return Err(Error::PreconditionFailed("need at least one factor".into()));
    }
    // keeps every refutation cascade step valid (see preimage_refutation)
    if pi.epsilon(0) > r_log / BigRational::from_integer(2.into()) {
        return Err(Error::PreconditionFailed(format!(
            "scale sequence too coarse: eps_0 = {} exceeds r_log/2",
            rational_string(&pi.epsilon(0))
        )));
    }
    let algebra = AlgebraDescriptor::localized_laurent(r_log.clone())?;
    let mut params = Vec::with_capacity(n_factors);
    let mut f_factors = Vec::with_capacity(n_factors);
    let mut gp_factors = Vec::with_capacity(n_factors);
    let mut gm_factors = Vec::with_capacity(n_factors);
    let mut growth = Vec::with_capacity(n_factors);
    let mut theta = Vec::with_capacity(n_factors);
    let mut prev_tail: Option<BigRational> = None;

    for n in 0..n_factors {
        let p = witness_parameters(n, pi, r_log)?;
        let caps = witness_caps(&p);
        let pi_n = pi.pi(n);
        let (l, i_star, big_n) = (p.scale_pow, p.sup_index, p.laurent_pow);

        // F_n = pi^l sum_{i = -N..i*} (pi U X)^(i* - i) T^i
        let mut f_n = TateElement::zero(algebra.clone(), caps);
        for i in -(big_n as i64)..=(i_star as i64) {
            let k = (i_star as i64 - i) as u64;
            f_n = f_n.add(&pi_ux_power(&algebra, caps, &pi_n, l, k, i)?)?;
        }
        // G_+ = pi^l T^(i*+1); G_- = pi^l (pi U X)^(N+i*+1) T^(-N)
        let gp_n = pi_ux_power(&algebra, caps, &pi_n, l, 0, i_star as i64 + 1)?;
        let gm_n = pi_ux_power(
            &algebra,
            caps,
            &pi_n,
            l,
            big_n + i_star + 1,
            -(big_n as i64),
        )?;

        // the defining identity, verified by exact expansion
        let t_minus_piux = TateElement::from_terms(
            algebra.clone(),
            caps,
            [
                (Monomial::new(0, 0, 1), ValuedScalar::one()),
                (Monomial::new(1, 1, 0), -&pi_n),
            ],
        )?;
        let lhs = t_minus_piux.mul(&f_n)?;
        let rhs = gp_n.sub(&gm_n)?;
        if lhs.truncated || rhs.truncated || lhs != rhs {
            return Err(Error::IdentityFailure {
                factor: n,
                detail: format!(
                    "(T - pi U X) F != G_+ - G_- (truncated: {})",
                    lhs.truncated || rhs.truncated
                ),
            });
        }

        // tail coefficients |pi^l| must vanish along the factors
        let tail = -BigRational::from_integer(l.into()) * &p.epsilon;
        if let Some(prev) = &prev_tail {
            if &tail >= prev {
                return Err(Error::IdentityFailure {
                    factor: n,
                    detail: "tail coefficient log-norms fail to decrease".into(),
                });
            }
        }
        prev_tail = Some(tail);

        // growth gamma_n = -(l+1) eps + sup; obstruction theta_n >= gamma_n
        let gamma = &p.sup_lognorm - BigRational::from_integer((l + 1).into()) * &p.epsilon;
        let th = BigRational::from_integer(staircase::floor(i_star + 1).into()) * r_log
            - BigRational::from_integer((l + i_star + 1).into()) * &p.epsilon;
        if th < gamma {
            return Err(Error::IdentityFailure {
                factor: n,
                detail: "obstruction norm fell below its growth bound".into(),
            });
        }
        // per-factor norm of F is exactly -l eps + sup, at least sup/2
        let f_norm = localized_factor_norm(&f_n);
        let expected =
            LogNorm::Finite(&p.sup_lognorm - BigRational::from_integer(l.into()) * &p.epsilon);
        if f_norm != expected {
            return Err(Error::IdentityFailure {
                factor: n,
                detail: format!("factor norm of F is {f_norm}, expected {expected}"),
            });
        }

        params.push(p);
        f_factors.push(f_n);
        gp_factors.push(gp_n);
        gm_factors.push(gm_n);
        growth.push(LogNorm::Finite(gamma));
        theta.push(LogNorm::Finite(th));
    }

    Ok(CechWitness {
        r_log: r_log.clone(),
        pi: *pi,
        params,
        f: ProductElement::new(f_factors)?,
        g_plus: ProductElement::new(gp_factors)?,
        g_minus: ProductElement::new(gm_factors)?,
        growth,
        theta,
        identity_exact: true,
    })
}

/// Which factor a refutation should run at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorChoice {
    /// Pick the first factor whose obstruction dominates the candidate.
    Select,
    At(usize),
}

/// One step of the forced-coefficient walk down the diagonal class.
#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub t_layer: u64,
    pub monomial: Monomial,
    pub expected_lognorm: LogNorm,
    pub actual_lognorm: LogNorm,
    pub matches: bool,
}

/// Exact record of why a candidate preimage fails at the chosen factor.
#[derive(Debug, Clone, Serialize)]
pub struct PreimageViolation {
    pub factor: usize,
    /// The bound `|pi|^(N+l) * sup` the candidate would have to beat.
    pub bound: LogNorm,
    /// Exact norm of `G_+ - f - (T - pi U X) H` at the factor.
    pub residual_norm: LogNorm,
    /// A monomial attaining the residual norm.
    pub at: Monomial,
    /// The obstruction norm `|pi^l (pi U X)^(sup_index+1)|`.
    pub theta: LogNorm,
    pub candidate_f_norm: LogNorm,
    pub candidate_h_norm: LogNorm,
    /// The coefficient cascade `H` would have to carry, layer by layer.
    pub chain: Vec<ChainStep>,
    pub equation: String,
}

/// Refute a candidate `(f, H)` claiming
/// `|G_+ - f - (T - Pi U X) H| < |pi(n)|^(N_n + l_n) * sup_n` at factor `n`.
///
/// The factor must satisfy the selection property: `scale_pow > 1` and the
/// obstruction element `pi^l (pi U X)^(sup_index + 1)` strictly dominates
/// both candidate norms. Under that selection the claimed bound forces a
/// cascade of modulus-`|pi|^(l+m)` coefficients down the diagonal class of
/// `T^(sup_index+1)`, ending in a coefficient of `f` that would make `f` at
/// least as large as the obstruction — impossible. The residual is computed
/// exactly and the violation pins where it breaks the bound; failing to find
/// one is the headline `SpecBreak`.
pub fn preimage_refutation(
    candidate_f: &ProductElement,
    candidate_h: &ProductElement,
    witness: &CechWitness,
    choice: FactorChoice,
) -> Result<PreimageViolation> {
    let f_norm = candidate_f.localized_norm();
    let h_norm = candidate_h.localized_norm();
    let selected = match choice {
        FactorChoice::At(n) => {
            if n >= witness.params.len() {
                return Err(Error::PreconditionFailed(format!(
                    "factor {n} beyond the built witness"
                )));
            }
            let ok = witness.params[n].scale_pow > 1 && witness.theta[n] > f_norm.join(&h_norm);
            if !ok {
                return Err(Error::PreconditionFailed(format!(
                    "factor {n} does not dominate the candidate; pass Select or use more factors"
                )));
            }
            n
        }
        FactorChoice::Select => {
            match (0..witness.params.len()).find(|&n| {
                witness.params[n].scale_pow > 1 && witness.theta[n] > f_norm.join(&h_norm)
            }) {
                Some(n) => n,
                None => {
                    return Err(Error::PreconditionFailed(
                        "no built factor dominates the candidate; increase the factor count".into(),
                    ))
                }
            }
        }
    };

    let p = &witness.params[selected];
    let algebra = &witness.f.factors[selected].algebra;
    let pi_n = witness.pi.pi(selected);
    let (l, i_star, big_n) = (p.scale_pow, p.sup_index, p.laurent_pow);
    let bound = LogNorm::Finite(
        &p.sup_lognorm - BigRational::from_integer((big_n + l).into()) * &p.epsilon,
    );

    // E = G_+ - f - (T - pi U X) H at the selected factor, exactly
    let f_n = widen(candidate_f.factor_or_zero(selected, algebra), p)?;
    let h_n = widen(candidate_h.factor_or_zero(selected, algebra), p)?;
    let caps = h_n.caps;
    let t_minus_piux = TateElement::from_terms(
        algebra.clone(),
        caps,
        [
            (Monomial::new(0, 0, 1), ValuedScalar::one()),
            (Monomial::new(1, 1, 0), -&pi_n),
        ],
    )?;
    let g_plus_n = widen(witness.g_plus.factors[selected].clone(), p)?;
    let residual = g_plus_n.sub(&f_n)?.sub(&t_minus_piux.mul(&h_n)?)?;
    if residual.truncated {
        return Err(Error::PreconditionFailed(
            "candidate support exceeds the refutation caps".into(),
        ));
    }
    let residual_norm = localized_factor_norm(&residual);

    if residual_norm < bound {
        return Err(Error::SpecBreak(format!(
            "candidate beats the bound {bound} at properly selected factor {selected}: \
             residual norm {residual_norm}"
        )));
    }

    // locate a monomial attaining the residual norm
    let r_log = &algebra.radius_x;
    let mut at = Monomial::ux(0, 0);
    for (m, c) in residual.terms() {
        let w = BigRational::from_integer(staircase::floor(m.u).into()) * r_log;
        if &c.log_norm() + &LogNorm::Finite(w) == residual_norm {
            at = *m;
            break;
        }
    }

    // the cascade H would need: |H at (i*-h, i*-h, h)| = |pi|^(l + i* - h)
    let mut chain = Vec::new();
    for h in (0..=i_star).rev() {
        let mono = Monomial::new(i_star - h, i_star - h, h as i64);
        let expected =
            LogNorm::Finite(-BigRational::from_integer((l + (i_star - h)).into()) * &p.epsilon);
        let actual = h_n.coefficient(&mono).log_norm();
        let matches = actual == expected;
        chain.push(ChainStep {
            t_layer: h,
            monomial: mono,
            expected_lognorm: expected,
            actual_lognorm: actual,
            matches,
        });
    }
    // bottom row: the coefficient f would need at (i*+1, i*+1)
    let phi_mono = Monomial::ux(i_star + 1, i_star + 1);
    let phi_expected =
        LogNorm::Finite(-BigRational::from_integer((l + i_star + 1).into()) * &p.epsilon);
    let phi_actual = f_n.coefficient(&phi_mono).log_norm();
    chain.push(ChainStep {
        t_layer: 0,
        monomial: phi_mono,
        matches: phi_actual == phi_expected,
        expected_lognorm: phi_expected,
        actual_lognorm: phi_actual,
    });

    Ok(PreimageViolation {
        factor: selected,
        bound: bound.clone(),
        residual_norm: residual_norm.clone(),
        at,
        theta: witness.theta[selected].clone(),
        candidate_f_norm: f_norm,
        candidate_h_norm: h_norm,
        chain,
        equation: format!(
            "residual norm {residual_norm} at {at} is not < {bound}; any candidate matching \
             the forced cascade would push |f| up to the obstruction {}",
            witness.theta[selected]
        ),
    })
}

impl ProductElement {
    fn factor_or_zero(&self, n: usize, algebra: &AlgebraDescriptor) -> TateElement {
        self.factors
            .get(n)
            .cloned()
            .unwrap_or_else(|| TateElement::zero(algebra.clone(), Caps::new(1, 1, 1)))
    }
}

fn widen(f: TateElement, p: &FactorParams) -> Result<TateElement> {
    let base = witness_caps(p);
    let caps = Caps::new(
        base.u.max(f.caps.u).saturating_add(2),
        base.x.max(f.caps.x).saturating_add(2),
        base.t.max(f.caps.t).saturating_add(2),
    );
    let mut out = TateElement::zero(f.algebra.clone(), caps);
    for (m, c) in f.terms() {
        out = out.add(&TateElement::monomial_term(
            f.algebra.clone(),
            caps,
            *m,
            c.clone(),
        )?)?;
    }
    Ok(out)
}

/// Joint-versus-per-factor comparison of the quotient upper bounds.
#[derive(Debug, Clone, Serialize)]
pub struct IsometryCheck {
    pub joint: LogNorm,
    pub per_factor: Vec<LogNorm>,
    pub per_factor_max: LogNorm,
    pub pass: bool,
}

/// Compute the quotient upper bound of a product element two ways: once as a
/// single joint search over every diagonal class of every factor (a shared
/// reducer), and once as the max of fully independent per-factor searches
/// (reducer construction, exact remainders and all). The two must agree
/// exactly; a mismatch names the offending factor and is a spec-break
/// signal.
pub fn product_localization_isometry_check(
    f: &ProductElement,
    depth: u64,
) -> Result<IsometryCheck> {
    let r_log = f.factors[0].algebra.radius_x.clone();
    let pres = LocalizationPresentation::weierstrass_x(r_log.clone())?;

    // route (a): one scan over all (factor, class) optima
    let mut joint = LogNorm::Bottom;
    for factor in &f.factors {
        let mut classes: BTreeMap<(u64, u64), BTreeMap<u64, ValuedScalar>> = BTreeMap::new();
        for (m, c) in factor.terms() {
            debug_assert!(m.t >= 0);
            classes
                .entry((m.u, m.x + m.t as u64))
                .or_default()
                .insert(m.t as u64, c.clone());
        }
        for ((u, s), coeffs) in &classes {
            let opt = class_optimum(coeffs, *u, *s, &r_log, factor.algebra.support, depth);
            joint = joint.join(&opt.value_capped);
        }
    }

    // route (b): independent per-factor searches
    let mut per_factor = Vec::with_capacity(f.factors.len());
    let mut per_factor_max = LogNorm::Bottom;
    for factor in &f.factors {
        let up = quotient_norm_upper(factor, &pres, depth)?;
        per_factor_max = per_factor_max.join(&up.value);
        per_factor.push(up.value);
    }

    if joint != per_factor_max {
        let offender = per_factor
            .iter()
            .position(|v| *v != joint)
            .unwrap_or(0);
        return Err(Error::IsometryMismatch {
            factor: offender,
            joint: joint.to_string(),
            per_factor: per_factor_max.to_string(),
        });
    }
    Ok(IsometryCheck {
        joint,
        per_factor,
        per_factor_max,
        pass: true,
    })
}

/// Certificate that the multiplication operator `T - (pi(n) U X)_n` has
/// inverse operator norm at least `2^target` on the localized product.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    #[serde(serialize_with = "ser_rat")]
    pub target: BigRational,
    /// Factor index carrying the witness.
    pub factor: usize,
    #[serde(serialize_with = "ser_rat")]
    pub epsilon: BigRational,
    /// Power of `pi U X` whose norm exceeds the target.
    pub peak_power: u64,
    /// Length of the geometric sum (`T`-degree reach).
    pub length: u64,
    pub input_lognorm: LogNorm,
    pub output_lognorm: LogNorm,
    /// `input - output`, the certified lower bound on the inverse norm.
    pub gap_lognorm: LogNorm,
    /// The geometric element itself when small enough to materialize.
    pub element: Option<TateElement>,
    pub materialized: bool,
}

const GAP_MATERIALIZE_CAP: u64 = 20_000;

/// Exhibit, for any positive log target, a geometric element whose image
/// under multiplication by `T - pi(n0) U X` has norm exactly 1 while the
/// element itself has norm above `2^target`; the inverse operator norm is
/// therefore unbounded over the factors.
///
/// The element is `sum_{i=0}^{L-1} (pi U X)^(L-1-i) T^i` at one factor,
/// mapping to `T^L - (pi U X)^L`. Its norm is the scan supremum of the
/// factor, so a factor with small enough `eps` pushes it past any target;
/// larger targets force larger factor indices. For very large targets the
/// element is reported through its generating rule with the boundary and
/// peak monomials materialized, and the full expansion is checked exactly
/// whenever the length fits.
pub fn admissibility_gap(
    target: &BigRational,
    pi: &PiSequence,
    r_log: &BigRational,
) -> Result<GapReport> {
    if !target.is_positive() || !r_log.is_positive() {
        return Err(Error::PreconditionFailed(
            "target and log radius must be positive".into(),
        ));
    }
    // choose the first dyadic block whose weight clears the target, then a
    // factor whose eps keeps the leader above it
    let mut m = 0u64;
    while BigRational::from_integer((m + 1).into()) * r_log <= *target {
        m += 1;
        assert!(m < 4096, "target out of range");
    }
    let slack = BigRational::from_integer((m + 1).into()) * r_log - target;
    let peak_power = 1u64
        .checked_shl(m as u32)
        .ok_or_else(|| Error::PreconditionFailed("target too large for u64 exponents".into()))?;
    // need eps < slack / 2^m, i.e. scale*(n+1) > 2^m/slack
    let threshold = BigRational::from_integer(peak_power.into()) / &slack;
    let factor = (threshold / BigRational::from_integer(pi.scale.into()))
        .floor()
        .to_integer()
        .to_u64()
        .expect("factor index fits u64") as usize;
    let epsilon = pi.epsilon(factor);
    let peak_value = BigRational::from_integer((m + 1).into()) * r_log
        - BigRational::from_integer(peak_power.into()) * &epsilon;
    debug_assert!(&peak_value > target);

    // smallest L > peak_power with L*eps >= floor(L)*r_log
    let mut length = None;
    for b in 1..=200u64 {
        let block_lo = 1u64 << (b - 1).min(63);
        let block_hi = if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
        let from_norm = (BigRational::from_integer(b.into()) * r_log / &epsilon)
            .ceil()
            .to_integer()
            .to_u64()
            .expect("length fits u64");
        let candidate = from_norm.max(block_lo).max(peak_power + 1);
        if candidate <= block_hi {
            length = Some(candidate);
            break;
        }
    }
    let length = length.ok_or_else(|| {
        Error::PreconditionFailed("no taming power within 200 dyadic blocks".into())
    })?;
    debug_assert!(
        BigRational::from_integer(length.into()) * &epsilon
            >= BigRational::from_integer(staircase::floor(length).into()) * r_log
    );

    // input norm: sup over k in [0, length-1] of -k eps + floor(k) r_log,
    // which the peak power attains past the target; leaders only
    let mut input = BigRational::zero();
    {
        let mut mm = 0u64;
        loop {
            let leader = 1u128 << mm;
            if leader >= length as u128 {
                break;
            }
            let v = BigRational::from_integer((mm + 1).into()) * r_log
                - BigRational::from_integer(leader.into()) * &epsilon;
            if v > input {
                input = v;
            }
            mm += 1;
        }
    }
    let input_lognorm = LogNorm::Finite(input.clone());
    let output_lognorm = LogNorm::zero(); // |T^L - (pi U X)^L| = max(1, <=1) = 1
    let gap_lognorm = LogNorm::Finite(input.clone());

    let algebra = AlgebraDescriptor::localized_laurent(r_log.clone())?;
    let pi_n = pi.pi(factor);
    let (element, materialized) = if length <= GAP_MATERIALIZE_CAP {
        let caps = Caps::new(length + 1, length + 1, length + 1);
        let s = TateElement::from_terms(
            algebra.clone(),
            caps,
            (0..length).map(|i| {
                let k = length - 1 - i;
                (Monomial::new(k, k, i as i64), pi_n.pow(k))
            }),
        )?;
        // verify the telescoping image and both norms exactly
        let t_minus_piux = TateElement::from_terms(
            algebra.clone(),
            caps,
            [
                (Monomial::new(0, 0, 1), ValuedScalar::one()),
                (Monomial::new(1, 1, 0), -&pi_n),
            ],
        )?;
        let image = t_minus_piux.mul(&s)?;
        let expected_image = TateElement::from_terms(
            algebra.clone(),
            caps,
            [
                (Monomial::new(0, 0, length as i64), ValuedScalar::one()),
                (Monomial::new(length, length, 0), -&pi_n.pow(length)),
            ],
        )?;
        if image != expected_image {
            return Err(Error::SpecBreak(
                "geometric element image is not the telescoped difference".into(),
            ));
        }
        if localized_factor_norm(&image) != output_lognorm {
            return Err(Error::SpecBreak("image norm is not exactly 1".into()));
        }
        if localized_factor_norm(&s) != input_lognorm {
            return Err(Error::SpecBreak(
                "materialized input norm disagrees with the leader scan".into(),
            ));
        }
        (Some(s), true)
    } else {
        (None, false)
    };

    Ok(GapReport {
        target: target.clone(),
        factor,
        epsilon,
        peak_power,
        length,
        input_lognorm,
        output_lognorm,
        gap_lognorm,
        element,
        materialized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::{rational, rational_int};

    fn stair_elem(u: u64, x: u64, c: ValuedScalar) -> TateElement {
        let d = AlgebraDescriptor::staircase(rational_int(1)).unwrap();
        TateElement::monomial_term(d, Caps::new(64, 64, 64), Monomial::ux(u, x), c).unwrap()
    }

    #[test]
    fn product_norm_is_the_factor_max() {
        let p = ProductElement::new(vec![
            stair_elem(0, 1, ValuedScalar::one()),
            stair_elem(0, 1, ValuedScalar::var_power(rational_int(1))),
        ])
        .unwrap();
        assert_eq!(p.product_norm(), LogNorm::finite(1, 1));
        let q = ProductElement::new(vec![
            stair_elem(3, 2, ValuedScalar::one()),
            stair_elem(0, 1, ValuedScalar::one()),
        ])
        .unwrap();
        assert_eq!(q.product_norm(), LogNorm::finite(2, 1));
        let z = ProductElement::new(vec![
            TateElement::zero(
                AlgebraDescriptor::staircase(rational_int(1)).unwrap(),
                Caps::new(4, 4, 4),
            );
            2
        ])
        .unwrap();
        assert_eq!(z.product_norm(), LogNorm::Bottom);
    }

    #[test]
    fn closed_form_norm_matches_reducer_search() {
        // the two independent routes to the quotient norm agree
        let pres = LocalizationPresentation::weierstrass_x(rational_int(1)).unwrap();
        let cases = [
            stair_elem(3, 5, ValuedScalar::one()),
            stair_elem(0, 4, ValuedScalar::var_power(rational(1, 2))),
            stair_elem(3, 5, ValuedScalar::one())
                .add(&stair_elem(1, 1, ValuedScalar::var_power(rational_int(2))))
                .unwrap(),
        ];
        for f in &cases {
            let closed = localized_factor_norm(f);
            let searched = quotient_norm_upper(f, &pres, 16).unwrap();
            assert!(!searched.depth_exhausted);
            assert_eq!(closed, searched.value);
        }
    }

    #[test]
    fn scan_oracle_and_pinned_parameters() {
        // brute-force oracle over i <= 64 for eps = 1/3, r_log = 1
        let eps = rational(1, 3);
        let mut best = BigRational::zero();
        let mut best_i = 0u64;
        for i in 0..=64u64 {
            let v = BigRational::from_integer(staircase::floor(i).into())
                - BigRational::from_integer(i.into()) * &eps;
            if v > best {
                best = v;
                best_i = i;
            }
        }
        assert_eq!(best, rational(5, 3));
        assert_eq!(best_i, 4);

        let (sup, idx) = radius_sup_scan(&eps, &rational_int(1), 0);
        assert_eq!(sup, best);
        assert_eq!(idx, best_i);
        // doubling the scan leaves the maximizer unchanged
        let (sup2, idx2) = radius_sup_scan(&eps, &rational_int(1), 6);
        assert_eq!((sup2, idx2), (sup, idx));

        let pi = PiSequence::default();
        let p = witness_parameters(0, &pi, &rational_int(1)).unwrap();
        assert_eq!(p.sup_lognorm, rational(5, 3));
        assert_eq!(p.sup_index, 4);
        assert_eq!(p.scale_pow, 2);
        assert_eq!(p.laurent_pow, 5);
    }

    #[test]
    fn coarse_scale_fails_the_l_assertion() {
        let pi = PiSequence::reciprocal_linear(1).unwrap();
        // eps_0 = 1 with r_log = 1/10: sup stays at 0 and l = 0
        assert!(matches!(
            witness_parameters(0, &pi, &rational(1, 10)),
            Err(Error::AssertLn { n: 0 })
        ));
    }

    #[test]
    fn sup_is_monotone_and_l_positive_through_64_factors() {
        let pi = PiSequence::default();
        let mut prev = BigRational::zero();
        for n in 0..=64 {
            let p = witness_parameters(n, &pi, &rational_int(1)).unwrap();
            assert!(p.sup_lognorm >= prev, "sup must not decrease");
            assert!(p.scale_pow >= 1, "l_n >= 1 must hold at n = {n}");
            prev = p.sup_lognorm;
        }
    }

    #[test]
    fn witness_identity_and_growth() {
        let pi = PiSequence::default();
        let w = build_cech_witness(3, &pi, &rational_int(1)).unwrap();
        // factor 0 spans T-exponents -5..=4
        let ts: Vec<i64> = w.f.factors[0].terms().map(|(m, _)| m.t).collect();
        assert_eq!(*ts.iter().min().unwrap(), -5);
        assert_eq!(*ts.iter().max().unwrap(), 4);
        assert_eq!(w.growth[0], LogNorm::finite(2, 3));
        assert_eq!(w.growth[1], LogNorm::finite(7, 6));
        assert!(w.growth.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn refutation_defeats_the_zero_candidate() {
        let pi = PiSequence::default();
        let w = build_cech_witness(2, &pi, &rational_int(1)).unwrap();
        let algebra = w.f.factors[0].algebra.clone();
        let zero = ProductElement::new(vec![
            TateElement::zero(algebra.clone(), Caps::new(2, 2, 2)),
            TateElement::zero(algebra, Caps::new(2, 2, 2)),
        ])
        .unwrap();
        let v = preimage_refutation(&zero, &zero, &w, FactorChoice::Select).unwrap();
        assert_eq!(v.factor, 0);
        // residual is G_+ itself: norm |pi^l| = 2^(-2/3); bound is
        // |pi|^(N+l) sup = 2^(-7/3) * 2^(5/3) = 2^(-2/3): not strictly below
        assert_eq!(v.residual_norm, LogNorm::finite(-2, 3));
        assert_eq!(v.bound, LogNorm::finite(-2, 3));
    }

    #[test]
    fn refutation_rejects_undominated_factors() {
        let pi = PiSequence::default();
        let w = build_cech_witness(1, &pi, &rational_int(1)).unwrap();
        let algebra = w.f.factors[0].algebra.clone();
        // a huge candidate no built factor dominates
        let big = ProductElement::new(vec![TateElement::monomial_term(
            algebra.clone(),
            Caps::new(8, 8, 8),
            Monomial::ux(0, 0),
            ValuedScalar::var_power(rational_int(-100)),
        )
        .unwrap()])
        .unwrap();
        let zero =
            ProductElement::new(vec![TateElement::zero(algebra, Caps::new(2, 2, 2))]).unwrap();
        assert!(matches!(
            preimage_refutation(&big, &zero, &w, FactorChoice::Select),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn isometry_check_on_monomial_factors() {
        let f = ProductElement::new(vec![
            stair_elem(3, 5, ValuedScalar::one()),
            TateElement::zero(
                AlgebraDescriptor::staircase(rational_int(1)).unwrap(),
                Caps::new(64, 64, 64),
            ),
        ])
        .unwrap();
        let check = product_localization_isometry_check(&f, 6).unwrap();
        assert!(check.pass);
        assert_eq!(check.joint, LogNorm::finite(2, 1));
        // mixed factors: max(1, 2) = 2
        let g = ProductElement::new(vec![
            stair_elem(1, 1, ValuedScalar::one()),
            stair_elem(3, 3, ValuedScalar::one()),
        ])
        .unwrap();
        let check2 = product_localization_isometry_check(&g, 6).unwrap();
        assert_eq!(check2.joint, LogNorm::finite(2, 1));
        assert_eq!(check2.per_factor[0], LogNorm::finite(1, 1));
        // all-zero: bottom on both routes
        let z = ProductElement::new(vec![TateElement::zero(
            AlgebraDescriptor::staircase(rational_int(1)).unwrap(),
            Caps::new(4, 4, 4),
        )])
        .unwrap();
        let check3 = product_localization_isometry_check(&z, 6).unwrap();
        assert_eq!(check3.joint, LogNorm::Bottom);
    }

    #[test]
    fn gap_for_small_target_is_materialized() {
        let pi = PiSequence::default();
        let report = admissibility_gap(&rational_int(2), &pi, &rational_int(1)).unwrap();
        assert!(report.materialized);
        assert!(matches!(&report.input_lognorm, LogNorm::Finite(v) if v > &rational_int(2)));
        assert_eq!(report.output_lognorm, LogNorm::zero());
        let elem = report.element.unwrap();
        assert_eq!(elem.num_terms() as u64, report.length);
    }

    #[test]
    fn gap_grows_with_the_target() {
        let pi = PiSequence::default();
        let mut prev = LogNorm::Bottom;
        for target in [2i64, 10, 50] {
            let report = admissibility_gap(&rational_int(target), &pi, &rational_int(1)).unwrap();
            assert!(matches!(&report.gap_lognorm, LogNorm::Finite(v) if v > &rational_int(target)));
            assert!(report.gap_lognorm > prev);
            prev = report.gap_lognorm;
        }
    }

    #[test]
    fn telescoping_lemma_across_lengths() {
        // (T - pi U X) sum_{i<L} (pi U X)^(L-1-i) T^i = T^L - (pi U X)^L
        let pi = PiSequence::default();
        let algebra = AlgebraDescriptor::localized_laurent(rational_int(1)).unwrap();
        for factor in [0usize, 3] {
            let pi_n = pi.pi(factor);
            for length in [1u64, 2, 7, 33] {
                let caps = Caps::new(length + 1, length + 1, length + 1);
                let mut s = TateElement::zero(algebra.clone(), caps);
                for i in 0..length {
                    s = s
                        .add(
                            &pi_ux_power(&algebra, caps, &pi_n, 0, length - 1 - i, i as i64)
                                .unwrap(),
                        )
                        .unwrap();
                }
                let t_minus = TateElement::from_terms(
                    algebra.clone(),
                    caps,
                    [
                        (Monomial::new(0, 0, 1), ValuedScalar::one()),
                        (Monomial::new(1, 1, 0), -&pi_n),
                    ],
                )
                .unwrap();
                let image = t_minus.mul(&s).unwrap();
                assert_eq!(image.num_terms(), 2);
                assert_eq!(
                    image.coefficient(&Monomial::new(0, 0, length as i64)),
                    ValuedScalar::one()
                );
            }
        }
    }
}

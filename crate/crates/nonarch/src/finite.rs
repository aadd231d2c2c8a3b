//! Positive control: algebras of scalar-valued functions on a finite point
//! set under the sup norm. Rational domains are cut out pointwise, the
//! localization is restriction to a clopen subset with its characteristic
//! idempotent, and the Cech complex of any covering is exact — checked by
//! honest kernel/image computations over exact rationals.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lognorm::LogNorm;
use crate::scalar::ValuedScalar;

/// Functions from a finite labelled point set into the scalar field, with
/// the pointwise operations and the sup norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteFunctionAlgebra {
    pub points: Vec<String>,
}

/// An element is one scalar per point, aligned with `points`.
pub type FunctionElement = Vec<ValuedScalar>;

impl FiniteFunctionAlgebra {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(points: I) -> Self {
        FiniteFunctionAlgebra {
            points: points.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn norm(&self, f: &FunctionElement) -> LogNorm {
        assert_eq!(f.len(), self.points.len());
        f.iter()
            .fold(LogNorm::Bottom, |acc, v| acc.join(&v.log_norm()))
    }

    fn check_element(&self, f: &FunctionElement) -> Result<()> {
        if f.len() != self.points.len() {
            return Err(Error::PreconditionFailed(format!(
                "element has {} values for {} points",
                f.len(),
                self.points.len()
            )));
        }
        Ok(())
    }

    /// The rational domain of a presentation `(f0, f1, ..., fm)`: the points
    /// where `|fi(x)| <= |f0(x)|` for every `i >= 1`. The presentation must
    /// generate the unit ideal, i.e. some `fi` is nonzero at every point.
    pub fn rational_domain(&self, fs: &[FunctionElement]) -> Result<Vec<usize>> {
        if fs.is_empty() {
            return Err(Error::PreconditionFailed("empty presentation".into()));
        }
        for f in fs {
            self.check_element(f)?;
        }
        for (x, label) in self.points.iter().enumerate() {
            if fs.iter().all(|f| f[x].is_zero()) {
                return Err(Error::NotGenerating {
                    point: label.clone(),
                });
            }
        }
        let f0 = &fs[0];
        Ok((0..self.points.len())
            .filter(|&x| {
                fs[1..]
                    .iter()
                    .all(|fi| fi[x].log_norm() <= f0[x].log_norm())
            })
            .collect())
    }
}

/// Result of localizing to a rational domain: the function algebra on the
/// sub-point-set, its characteristic idempotent in the ambient algebra, and
/// the isometry certificate for the restriction map.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizedAlgebra {
    pub subset: Vec<usize>,
    pub algebra: FiniteFunctionAlgebra,
    pub idempotent: FunctionElement,
    /// Restriction hits every indicator of the subset (surjectivity witness).
    pub restriction_surjective: bool,
    /// Zero-extensions realize every restricted norm exactly.
    pub norm_preserved: bool,
}

/// Localize to the rational domain of `fs`: restriction to the cut-out
/// subset, with the idempotent killing the complement. Surjectivity and
/// norm preservation of the restriction are certified exactly over the
/// finite set rather than assumed.
pub fn localize_finite(
    ambient: &FiniteFunctionAlgebra,
    fs: &[FunctionElement],
) -> Result<LocalizedAlgebra> {
    let subset = ambient.rational_domain(fs)?;
    let algebra = FiniteFunctionAlgebra::new(subset.iter().map(|&x| ambient.points[x].clone()));
    let idempotent: FunctionElement = (0..ambient.len())
        .map(|x| {
            if subset.contains(&x) {
                ValuedScalar::one()
            } else {
                ValuedScalar::zero()
            }
        })
        .collect();

    // surjectivity: each local indicator is the restriction of its
    // zero-extension; norm preservation: the extension has the same norm
    let mut restriction_surjective = true;
    let mut norm_preserved = true;
    for (local_idx, &global_idx) in subset.iter().enumerate() {
        let local: FunctionElement = (0..subset.len())
            .map(|j| {
                if j == local_idx {
                    ValuedScalar::one()
                } else {
                    ValuedScalar::zero()
                }
            })
            .collect();
        let extension: FunctionElement = (0..ambient.len())
            .map(|x| {
                if x == global_idx {
                    ValuedScalar::one()
                } else {
                    ValuedScalar::zero()
                }
            })
            .collect();
        let restricted: FunctionElement = subset.iter().map(|&x| extension[x].clone()).collect();
        restriction_surjective &= restricted == local;
        norm_preserved &= ambient.norm(&extension) == algebra.norm(&local);
    }
    Ok(LocalizedAlgebra {
        subset,
        algebra,
        idempotent,
        restriction_surjective,
        norm_preserved,
    })
}

/// Verdict of the Cech exactness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Exact,
    NotExact { kernel_dim: usize, image_dim: usize },
}

/// Check exactness of `0 -> A -> prod_i A(U_i) -> prod_{i<j} A(U_i n U_j)`
/// for the covering cut out by the given presentations.
///
/// Everything is finite, so the two middle spaces are concrete coordinate
/// spaces and the maps are incidence matrices; exactness reduces to an exact
/// rank computation. Injectivity of the restriction is equivalent to the
/// domains covering every point, which is also checked.
pub fn cech_exactness_finite(
    ambient: &FiniteFunctionAlgebra,
    cover: &[Vec<FunctionElement>],
) -> Result<Verdict> {
    let domains: Vec<Vec<usize>> = cover
        .iter()
        .map(|fs| ambient.rational_domain(fs))
        .collect::<Result<_>>()?;
    for (x, label) in ambient.points.iter().enumerate() {
        if !domains.iter().any(|d| d.contains(&x)) {
            return Err(Error::CoverIncomplete {
                point: label.clone(),
            });
        }
    }

    // coordinates of prod_i A(U_i)
    let mut middle_coords = Vec::new();
    for (i, d) in domains.iter().enumerate() {
        for &x in d {
            middle_coords.push((i, x));
        }
    }
    // restriction matrix: rows = middle coordinates, cols = points
    let restriction: Vec<Vec<BigRational>> = middle_coords
        .iter()
        .map(|&(_, x)| {
            (0..ambient.len())
                .map(|y| {
                    if x == y {
                        BigRational::from_integer(1.into())
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    // difference matrix: rows = overlap coordinates, cols = middle coords
    let mut difference: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..domains.len() {
        for j in (i + 1)..domains.len() {
            for x in domains[i].iter().filter(|x| domains[j].contains(x)) {
                let row: Vec<BigRational> = middle_coords
                    .iter()
                    .map(|&(k, y)| {
                        if y == *x && k == i {
                            BigRational::from_integer(1.into())
                        } else if y == *x && k == j {
                            BigRational::from_integer((-1).into())
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect();
                difference.push(row);
            }
        }
    }

    // the composite must vanish identically
    for drow in &difference {
        for col in 0..ambient.len() {
            let entry: BigRational = drow
                .iter()
                .zip(&restriction)
                .map(|(d, rrow)| d * &rrow[col])
                .sum();
            if !entry.is_zero() {
                return Err(Error::SpecBreak(
                    "difference o restriction is nonzero".into(),
                ));
            }
        }
    }

    let image_dim = rank(transpose(&restriction, ambient.len()));
    if image_dim != ambient.len() {
        // some point uncovered; already excluded above
        return Err(Error::SpecBreak(
            "restriction failed to be injective".into(),
        ));
    }
    let kernel_dim = middle_coords.len() - rank(difference);
    if kernel_dim == image_dim {
        Ok(Verdict::Exact)
    } else {
        Ok(Verdict::NotExact {
            kernel_dim,
            image_dim,
        })
    }
}

/// Do two presentations cut out the same domain and hence isometrically
/// identical localizations? Exact comparison of the localized data.
pub fn presentation_independent(
    ambient: &FiniteFunctionAlgebra,
    fs1: &[FunctionElement],
    fs2: &[FunctionElement],
) -> Result<bool> {
    let l1 = localize_finite(ambient, fs1)?;
    let l2 = localize_finite(ambient, fs2)?;
    if l1.subset != l2.subset {
        return Ok(false);
    }
    Ok(l1.algebra == l2.algebra
        && l1.idempotent == l2.idempotent
        && l1.restriction_surjective
        && l2.restriction_surjective
        && l1.norm_preserved
        && l2.norm_preserved)
}

fn transpose(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    (0..cols)
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

/// Rank by exact Gaussian elimination.
fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for entry in m[r].iter_mut() {
            *entry *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (entry, p) in m[i].iter_mut().zip(&pivot_row) {
                    *entry -= p * &factor;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::rational_int;

    fn t() -> ValuedScalar {
        ValuedScalar::var_power(rational_int(1))
    }

    fn two_points() -> FiniteFunctionAlgebra {
        FiniteFunctionAlgebra::new(["p", "q"])
    }

    #[test]
    fn domains_compare_norms_pointwise() {
        let alg = two_points();
        let f0 = vec![ValuedScalar::one(), t()];
        let f1 = vec![t(), ValuedScalar::one()];
        assert_eq!(alg.rational_domain(&[f0, f1]).unwrap(), vec![0]);
        let ones = vec![ValuedScalar::one(), ValuedScalar::one()];
        assert_eq!(
            alg.rational_domain(&[ones.clone(), ones.clone()]).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn non_generating_presentations_fail() {
        let alg = two_points();
        let f = vec![ValuedScalar::zero(), ValuedScalar::one()];
        let err = alg.rational_domain(&[f.clone(), f]).unwrap_err();
        assert!(matches!(err, Error::NotGenerating { point } if point == "p"));
    }

    #[test]
    fn localization_restricts_and_preserves_norms() {
        let alg = two_points();
        let f0 = vec![ValuedScalar::one(), t()];
        let f1 = vec![t(), ValuedScalar::one()];
        let loc = localize_finite(&alg, &[f0, f1]).unwrap();
        assert_eq!(loc.subset, vec![0]);
        assert_eq!(
            loc.idempotent,
            vec![ValuedScalar::one(), ValuedScalar::zero()]
        );
        assert!(loc.restriction_surjective);
        assert!(loc.norm_preserved);
        // restriction of (3, 5) to {p} is (3) with norm preserved
        let g = [ValuedScalar::from_int(3), ValuedScalar::from_int(5)];
        let restricted: Vec<_> = loc.subset.iter().map(|&x| g[x].clone()).collect();
        assert_eq!(restricted, vec![ValuedScalar::from_int(3)]);
        assert_eq!(loc.algebra.norm(&restricted), LogNorm::zero());
    }

    #[test]
    fn empty_domain_gives_the_zero_algebra() {
        let alg = two_points();
        let f0 = vec![t(), t()];
        let f1 = vec![ValuedScalar::one(), ValuedScalar::one()];
        let loc = localize_finite(&alg, &[f0, f1]).unwrap();
        assert!(loc.subset.is_empty());
        assert!(loc.algebra.is_empty());
        assert_eq!(loc.algebra.norm(&vec![]), LogNorm::Bottom);
    }

    #[test]
    fn sup_norm_is_power_multiplicative() {
        let alg = two_points();
        let f = vec![&ValuedScalar::one() + &t(), t()];
        let f2: FunctionElement = f.iter().map(|v| v * v).collect();
        assert_eq!(alg.norm(&f2), alg.norm(&f).scale_int(2));
    }

    #[test]
    fn disjoint_cover_is_exact() {
        let alg = two_points();
        // {p} and {q} via complementary presentations
        let p_only = vec![
            vec![ValuedScalar::one(), t()],
            vec![t(), ValuedScalar::one()],
        ];
        let q_only = vec![
            vec![t(), ValuedScalar::one()],
            vec![ValuedScalar::one(), t()],
        ];
        assert_eq!(
            cech_exactness_finite(&alg, &[p_only, q_only]).unwrap(),
            Verdict::Exact
        );
    }

    #[test]
    fn overlapping_cover_is_exact() {
        let alg = FiniteFunctionAlgebra::new(["p", "q", "r"]);
        let one = ValuedScalar::one;
        // {p, q} and {q, r}
        let pq = vec![vec![one(), one(), t()], vec![one(), one(), one()]];
        let qr = vec![vec![t(), one(), one()], vec![one(), one(), one()]];
        assert_eq!(
            cech_exactness_finite(&alg, &[pq, qr]).unwrap(),
            Verdict::Exact
        );
    }

    #[test]
    fn single_set_cover_is_exact() {
        let alg = two_points();
        let all = vec![
            vec![ValuedScalar::one(), ValuedScalar::one()],
            vec![t(), t()],
        ];
        assert_eq!(cech_exactness_finite(&alg, &[all]).unwrap(), Verdict::Exact);
    }

    #[test]
    fn incomplete_covers_are_rejected() {
        let alg = two_points();
        let p_only = vec![
            vec![ValuedScalar::one(), t()],
            vec![t(), ValuedScalar::one()],
        ];
        assert!(matches!(
            cech_exactness_finite(&alg, &[p_only]),
            Err(Error::CoverIncomplete { point }) if point == "q"
        ));
    }

    #[test]
    fn same_domain_same_localization() {
        let alg = two_points();
        let one = ValuedScalar::one;
        // two different presentations of {p}
        let pres1 = vec![vec![one(), t()], vec![t(), one()]];
        let pres2 = vec![vec![one(), &t() * &t()], vec![&t() * &t(), one()]];
        assert!(presentation_independent(&alg, &pres1, &pres2).unwrap());
        // and a genuinely different domain
        let full = vec![vec![one(), one()], vec![one(), one()]];
        assert!(!presentation_independent(&alg, &pres1, &full).unwrap());
    }

    #[test]
    fn rank_of_small_matrices() {
        let one = || BigRational::from_integer(1.into());
        let zero = BigRational::zero;
        assert_eq!(rank(vec![vec![one(), zero()], vec![zero(), one()]]), 2);
        assert_eq!(rank(vec![vec![one(), one()], vec![one(), one()]]), 1);
        assert_eq!(rank(vec![]), 0);
    }
}

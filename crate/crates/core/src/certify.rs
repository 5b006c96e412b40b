//! Interval-arithmetic certification of the strict-positivity claims behind
//! the combined radius threshold.
//!
//! The generic engine [`certify_positive`] adaptively bisects a range: a
//! subinterval is accepted once the interval evaluation has a strictly
//! positive lower bound, rejected with a witness once it has a negative
//! upper bound (confirmed by a point evaluation), and split otherwise.
//! A `certified_positive` verdict is therefore a machine check of strict
//! positivity on the whole range.

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::interval::Interval;
use crate::real::Real;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_DEPTH: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedPositive,
    CounterexampleFound,
    Inconclusive,
}

/// One accepted leaf of the bisection tree: the subinterval and the proven
/// lower bound of the expression on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leaf<R: Real> {
    pub interval: (R, R),
    pub lower_bound: R,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport<R: Real> {
    pub n: Option<Dimension>,
    pub range: (R, R),
    pub verdict: Verdict,
    pub subintervals_examined: usize,
    pub max_depth_reached: usize,
    /// A point where positivity provably fails, when the verdict is
    /// `counterexample_found`.
    pub witness: Option<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaves: Option<Vec<Leaf<R>>>,
}

/// Adaptive-bisection positivity certificate for an interval extension `f`
/// on `[lo, hi]`. Subintervals where `f` signals (for example a square root
/// straddling zero) are split like undecided ones. Splitting order is
/// deterministic (depth-first, left half first).
pub fn certify_positive<R: Real, F>(
    f: &F,
    lo: R,
    hi: R,
    max_depth: usize,
    collect_leaves: bool,
) -> Result<CertificateReport<R>>
where
    F: Fn(Interval<R>) -> Result<Interval<R>>,
{
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty certification range [{lo}, {hi}]")));
    }
    let root = Interval::new(lo, hi)?;
    let mut stack = vec![(root, 0usize)];
    let mut examined = 0usize;
    let mut deepest = 0usize;
    let mut leaves = if collect_leaves { Some(Vec::new()) } else { None };
    let report = |verdict, examined, deepest, witness, leaves| CertificateReport {
        n: None,
        range: (lo, hi),
        verdict,
        subintervals_examined: examined,
        max_depth_reached: deepest,
        witness,
        leaves,
    };
    while let Some((iv, depth)) = stack.pop() {
        examined += 1;
        deepest = deepest.max(depth);
        let enclosure = f(iv);
        match enclosure {
            Ok(enc) if enc.lo() > R::zero() => {
                if let Some(ref mut ls) = leaves {
                    ls.push(Leaf {
                        interval: (iv.lo(), iv.hi()),
                        lower_bound: enc.lo(),
                    });
                }
                continue;
            }
            Ok(enc) if enc.hi() < R::zero() => {
                // confirm at the midpoint in point-interval arithmetic
                let mid = iv.midpoint();
                if let Ok(at_mid) = f(Interval::point(mid)) {
                    if at_mid.hi() <= R::zero() {
                        return Ok(report(
                            Verdict::CounterexampleFound,
                            examined,
                            deepest,
                            Some(mid),
                            leaves.take(),
                        ));
                    }
                }
                // fall through to splitting
            }
            _ => {}
        }
        if depth >= max_depth {
            return Ok(report(
                Verdict::Inconclusive,
                examined,
                deepest,
                None,
                leaves.take(),
            ));
        }
        let (left, right) = iv.split();
        if left.width() <= R::zero() || right.width() <= R::zero() {
            // interval collapsed to adjacent floats without a decision
            return Ok(report(
                Verdict::Inconclusive,
                examined,
                deepest,
                None,
                leaves.take(),
            ));
        }
        stack.push((right, depth + 1));
        stack.push((left, depth + 1));
    }
    Ok(report(
        Verdict::CertifiedPositive,
        examined,
        deepest,
        None,
        leaves,
    ))
}

/// The common subexpression ((n+3)c² − 4)/(2√(2(1−c²))).
fn slope_term<R: Real>(n: Dimension, c: Interval<R>) -> Result<Interval<R>> {
    let nf = Interval::point(n.as_real::<R>());
    let one = Interval::point(R::one());
    let two = Interval::point(R::two());
    let g = (nf + Interval::point(R::of(3.0))) * c.square() - Interval::point(R::of(4.0));
    let one_minus_c2 = one - c.square();
    let root = (two * one_minus_c2).sqrt()?;
    g.div(two * root)
}

fn check_c_range<R: Real>(c: Interval<R>) -> Result<()> {
    if !(c.lo() > R::zero() && c.hi() < R::one()) {
        return Err(Error::IntervalUndefined(format!(
            "c must be contained in (0, 1), got [{}, {}]",
            c.lo(),
            c.hi()
        )));
    }
    Ok(())
}

/// Enclosure of the combined inequality's left side with the eigenvalue
/// replaced by its lower bound n/(1−c²):
///
///   (1/2)·[((n+1)/n)c + T]·n/(1−c²) + (1/n)·[c + T] + [1 + ((n+3)c² − 4)/(2(1−c²))]
///
/// with T = ((n+3)c² − 4)/(2√(2(1−c²))). The substitution of the eigenvalue
/// lower bound is sound only when the μ-coefficient [((n+1)/n)c + T] is
/// nonnegative, so that bracket is returned alongside; callers must certify
/// it on the same range.
pub fn combined_inequality<R: Real>(
    n: Dimension,
    c: Interval<R>,
) -> Result<(Interval<R>, Interval<R>)> {
    check_c_range(c)?;
    let nf = Interval::point(n.as_real::<R>());
    let one = Interval::point(R::one());
    let two = Interval::point(R::two());
    let half = Interval::point(R::half());
    let t = slope_term(n, c)?;
    let one_minus_c2 = one - c.square();
    let g = (nf + Interval::point(R::of(3.0))) * c.square() - Interval::point(R::of(4.0));
    let mu_coeff = (nf + one).div(nf)?.mul(c) + t;
    let mu_lower = nf.div(one_minus_c2)?;
    let second = (c + t).div(nf)?;
    let third = one + g.div(two * one_minus_c2)?;
    let value = half * mu_coeff * mu_lower + second + third;
    Ok((value, mu_coeff))
}

/// Interval target for certifying the combined inequality together with its
/// bracket side condition: min of the substituted expression and the
/// μ-coefficient. Positive lower bound certifies both at once.
pub fn combined_with_side_condition<R: Real>(
    n: Dimension,
    c: Interval<R>,
) -> Result<Interval<R>> {
    let (value, bracket) = combined_inequality(n, c)?;
    Ok(value.min_i(bracket))
}

/// The first sign condition of the weighted-estimate route:
/// c + ((n+3)c² − 4)/(2√(2(1−c²))), positive exactly when c > ζ(n)
/// (within c² < 4/(n+3)).
pub fn method1_first_condition<R: Real>(n: Dimension, c: Interval<R>) -> Result<Interval<R>> {
    check_c_range(c)?;
    Ok(c + slope_term(n, c)?)
}

/// The second sign condition 1/2 + ((n+3)c² − 4)/(4(1−c²)), nonnegative
/// exactly when c² ≥ 2/(n+1).
pub fn method1_second_condition<R: Real>(n: Dimension, c: Interval<R>) -> Result<Interval<R>> {
    check_c_range(c)?;
    let nf = Interval::point(n.as_real::<R>());
    let one = Interval::point(R::one());
    let g = (nf + Interval::point(R::of(3.0))) * c.square() - Interval::point(R::of(4.0));
    let one_minus_c2 = one - c.square();
    Ok(Interval::point(R::half()) + g.div(Interval::point(R::of(4.0)) * one_minus_c2)?)
}

/// Smallest left endpoint c* (within `tol`) such that the combined
/// inequality, including its bracket side condition, certifies as strictly
/// positive on [c*, 1 − 1e−9]. Defined for n = 3 and n = 4, where the
/// combined inequality determines the threshold.
pub fn certified_threshold<R: Real>(n: Dimension, tol: R) -> Result<R> {
    if !(n.get() == 3 || n.get() == 4) {
        return Err(Error::Domain(format!(
            "certified threshold is defined for n in {{3, 4}}, got {n}"
        )));
    }
    if tol < R::of(1e-6) {
        return Err(Error::Domain(format!(
            "threshold tolerance must be >= 1e-6, got {tol}"
        )));
    }
    let right = R::one() - R::of(1e-9);
    let f = |c: Interval<R>| combined_with_side_condition(n, c);
    let certified_from = |left: R| -> Result<bool> {
        let rep = certify_positive(&f, left, right, DEFAULT_MAX_DEPTH, false)?;
        Ok(rep.verdict == Verdict::CertifiedPositive)
    };
    let mut lo = R::of(0.5);
    let mut hi = R::of(0.8);
    if certified_from(lo)? {
        return Ok(lo);
    }
    if !certified_from(hi)? {
        return Err(Error::RootNotBracketed(format!(
            "combined inequality did not certify from c = {hi} for n = {n}"
        )));
    }
    while hi - lo > tol {
        let mid = R::half() * (lo + hi);
        if certified_from(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Certificates for the two sign conditions of the weighted-estimate route.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Method1Certificates<R: Real> {
    /// Positivity of c + ((n+3)c²−4)/(2√(2(1−c²))) on [ζ+1e−6, 2/√(n+3)−1e−6].
    pub first_above_zeta: CertificateReport<R>,
    /// Failure of the same expression just below ζ.
    pub first_below_zeta: CertificateReport<R>,
    /// Positivity of 1/2 + ((n+3)c²−4)/(4(1−c²)) just above c² = 2/(n+1).
    pub second_above_root: CertificateReport<R>,
    /// Failure of the same expression just below c² = 2/(n+1).
    pub second_below_root: CertificateReport<R>,
}

/// Certifies both sign conditions around their analytic thresholds ζ(n) and
/// √(2/(n+1)).
pub fn certify_method1_conditions<R: Real>(n: Dimension) -> Result<Method1Certificates<R>> {
    use crate::thresholds::{zeta, zeta_squared_small};
    if n.get() < 3 {
        return Err(Error::Domain(format!("requires n >= 3, got {n}")));
    }
    let (z, _) = zeta::<R>(n)?;
    let bm = R::two() / (n.as_real::<R>() + R::of(3.0)).sqrt();
    let eps = R::of(1e-6);
    let probe = R::of(1e-3);

    let f1 = |c: Interval<R>| method1_first_condition(n, c);
    let mut first_above = certify_positive(&f1, z + eps, bm - eps, DEFAULT_MAX_DEPTH, false)?;
    first_above.n = Some(n);
    let below = z - probe;
    let mut first_below = certify_positive(
        &f1,
        below,
        below + R::of(1e-6),
        DEFAULT_MAX_DEPTH,
        false,
    )?;
    first_below.n = Some(n);

    let c0 = zeta_squared_small::<R>(n).sqrt();
    let f2 = |c: Interval<R>| method1_second_condition(n, c);
    let second_hi = (bm - eps).max(c0 + R::of(1e-2));
    let mut second_above = certify_positive(&f2, c0 + eps, second_hi, DEFAULT_MAX_DEPTH, false)?;
    second_above.n = Some(n);
    let below2 = c0 - probe;
    let mut second_below = certify_positive(
        &f2,
        below2,
        below2 + R::of(1e-6),
        DEFAULT_MAX_DEPTH,
        false,
    )?;
    second_below.n = Some(n);

    Ok(Method1Certificates {
        first_above_zeta: first_above,
        first_below_zeta: first_below,
        second_above_root: second_above,
        second_below_root: second_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn engine_trivial_positive() {
        let f = |x: I| Ok(x.square() + I::point(1.0));
        let rep = certify_positive(&f, -1.0, 1.0, 60, true).unwrap();
        assert_eq!(rep.verdict, Verdict::CertifiedPositive);
        let leaves = rep.leaves.unwrap();
        assert!(!leaves.is_empty());
        for leaf in &leaves {
            assert!(leaf.lower_bound > 0.0);
        }
    }

    #[test]
    fn engine_counterexample() {
        let f = |x: I| Ok(x - I::point(0.5));
        let rep = certify_positive(&f, 0.0, 1.0, 60, false).unwrap();
        assert_eq!(rep.verdict, Verdict::CounterexampleFound);
        let w = rep.witness.unwrap();
        assert!(w < 0.5);
    }

    #[test]
    fn engine_inconclusive_on_zero_touching() {
        let f = |x: I| {
            let d = x - I::point(0.3);
            Ok(d.square())
        };
        let rep = certify_positive(&f, 0.0, 1.0, 40, false).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn combined_point_values() {
        // plain-arithmetic oracle at c = 0.9 and c = 0.6 for n = 3
        let eval = |n: f64, c: f64| {
            let g = (n + 3.0) * c * c - 4.0;
            let t = g / (2.0 * (2.0 * (1.0 - c * c)).sqrt());
            0.5 * ((n + 1.0) / n * c + t) * (n / (1.0 - c * c)) + (c + t) / n
                + (1.0 + g / (2.0 * (1.0 - c * c)))
        };
        let (v, _) = combined_inequality(dim(3), I::point(0.9)).unwrap();
        assert!(v.lo() > 0.0);
        assert!(v.contains(eval(3.0, 0.9)));
        let (v, _) = combined_inequality(dim(3), I::point(0.6)).unwrap();
        assert!(v.hi() < 0.0);
        assert!(v.contains(eval(3.0, 0.6)));
    }

    #[test]
    fn combined_certifies_above_threshold_n3() {
        let f = |c: I| combined_with_side_condition(dim(3), c);
        let rep = certify_positive(&f, 0.64, 0.99, 60, false).unwrap();
        assert_eq!(rep.verdict, Verdict::CertifiedPositive);
    }

    #[test]
    fn combined_rejects_c_containing_one() {
        assert!(combined_inequality(dim(3), I::new(0.5, 1.0).unwrap()).is_err());
    }

    #[test]
    fn method1_conditions_n5() {
        // just above zeta(5) = 0.5774 the first expression is positive
        let v = method1_first_condition(dim(5), I::point(0.578)).unwrap();
        assert!(v.lo() > 0.0);
        // at c = 0.57 < zeta it is negative
        let v = method1_first_condition(dim(5), I::point(0.57)).unwrap();
        assert!(v.hi() < 0.0);
    }

    #[test]
    fn method1_second_zero_at_algebraic_root() {
        // n = 7: c = 0.5 gives c^2 = 1/4 = 2/(n+1), expression exactly 0
        let v = method1_second_condition(dim(7), I::point(0.5)).unwrap();
        assert!(v.contains(0.0));
        assert!(v.width() < 1e-14);
    }

    #[test]
    fn method1_certificates() {
        for n in [3u32, 5, 7] {
            let certs = certify_method1_conditions::<f64>(dim(n)).unwrap();
            assert_eq!(
                certs.first_above_zeta.verdict,
                Verdict::CertifiedPositive,
                "n = {n}"
            );
            assert_eq!(
                certs.first_below_zeta.verdict,
                Verdict::CounterexampleFound,
                "n = {n}"
            );
            assert_eq!(
                certs.second_above_root.verdict,
                Verdict::CertifiedPositive,
                "n = {n}"
            );
            assert_eq!(
                certs.second_below_root.verdict,
                Verdict::CounterexampleFound,
                "n = {n}"
            );
        }
    }

    #[test]
    fn certified_thresholds_match_reported_values() {
        let c3 = certified_threshold::<f64>(dim(3), 1e-4).unwrap();
        assert!((c3 - 0.6378).abs() < 5e-4, "n=3: {c3}");
        let c4 = certified_threshold::<f64>(dim(4), 1e-4).unwrap();
        assert!((c4 - 0.5933).abs() < 5e-4, "n=4: {c4}");
        assert!(certified_threshold::<f64>(dim(5), 1e-4).is_err());
        assert!(certified_threshold::<f64>(dim(3), 1e-8).is_err());
    }

    #[test]
    fn certified_threshold_below_zeta() {
        use crate::thresholds::zeta;
        for n in [3u32, 4] {
            let c = certified_threshold::<f64>(dim(n), 1e-4).unwrap();
            let (z, _) = zeta::<f64>(dim(n)).unwrap();
            assert!(c < z, "n={n}: c* = {c}, zeta = {z}");
        }
    }
}

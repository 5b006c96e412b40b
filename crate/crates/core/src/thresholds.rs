//! Threshold constants for the improved rigidity radius: the closed-form
//! constant ζ(n) of condition (a), the transcendental root δ₀ of
//! F(δ) = α(δ) + ((n+3)cos²δ − 4)/(4sin²δ) for condition (b), and the
//! algebraic bounds κ, κ̃ and √((7n−1)/(2n²+5n−1)) that sandwich cos δ₀.

use crate::eigen::{mu_lower_tilde, mu_shooting};
use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::real::Real;
use crate::roots::{bisect, BisectOptions};
use serde::{Deserialize, Serialize};

/// Which branch of the two-branch radius condition governs when the weighted
/// estimate is used on its own: c² ≥ 2/(n+1) for n ≤ 4, the ζ² formula for
/// n ≥ 5. The condition-(a) constant itself is the single ζ² formula for all
/// n (the combined argument removes the 2/(n+1) floor for n = 3, 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaRule {
    SmallN,
    LargeN,
}

fn require_n3(n: Dimension) -> Result<()> {
    if n.get() < 3 {
        return Err(Error::Domain(format!(
            "threshold operations require n >= 3, got {n}"
        )));
    }
    Ok(())
}

/// ζ(n) = √((4(n+4) − 4√(2n−1))/(n² + 6n + 17)), together with the branch tag.
pub fn zeta<R: Real>(n: Dimension) -> Result<(R, ZetaRule)> {
    require_n3(n)?;
    let value = zeta_squared_large::<R>(n).sqrt();
    let rule = if n.get() <= 4 {
        ZetaRule::SmallN
    } else {
        ZetaRule::LargeN
    };
    Ok((value, rule))
}

/// The n ≥ 5 branch value ζ² = (4(n+4) − 4√(2n−1))/(n² + 6n + 17).
pub fn zeta_squared_large<R: Real>(n: Dimension) -> R {
    let nf = n.as_real::<R>();
    let four = R::of(4.0);
    (four * (nf + four) - four * (R::two() * nf - R::one()).sqrt())
        / (nf * nf + R::of(6.0) * nf + R::of(17.0))
}

/// The n ≤ 4 branch value 2/(n+1).
pub fn zeta_squared_small<R: Real>(n: Dimension) -> R {
    R::two() / (n.as_real::<R>() + R::one())
}

/// κ(n): the positive root of 2n(n+3)x² + (n+1)x + (1 − 7n) = 0, by the
/// rationalized quadratic formula (the negative root is computed without
/// cancellation, the positive one via the product of roots).
pub fn kappa<R: Real>(n: Dimension) -> Result<R> {
    require_n3(n)?;
    let nf = n.as_real::<R>();
    let a = R::two() * nf * (nf + R::of(3.0));
    let b = nf + R::one();
    let c = R::one() - R::of(7.0) * nf;
    let disc = (b * b - R::of(4.0) * a * c).sqrt();
    let neg_root = (-b - disc) / (R::two() * a);
    Ok(c / (a * neg_root))
}

/// The κ̃(n) quartic n(n+3)x⁴ + n(n+3)x³ + 2n(n+1)x² + (1−3n)x + (1−7n).
pub fn kappa_tilde_quartic<R: Real>(n: Dimension, x: R) -> R {
    let nf = n.as_real::<R>();
    let a4 = nf * (nf + R::of(3.0));
    let a2 = R::two() * nf * (nf + R::one());
    let a1 = R::one() - R::of(3.0) * nf;
    let a0 = R::one() - R::of(7.0) * nf;
    (((a4 * x + a4) * x + a2) * x + a1) * x + a0
}

/// κ̃(n): the unique zero of the quartic in (0, 1), by bracketed bisection.
/// A 10³-point scan asserts there is exactly one sign change.
pub fn kappa_tilde<R: Real>(n: Dimension) -> Result<R> {
    require_n3(n)?;
    let grid = 1000usize;
    let mut changes = 0usize;
    let mut prev = kappa_tilde_quartic(n, R::zero());
    for i in 1..=grid {
        let x = R::of(i as f64 / grid as f64);
        let v = kappa_tilde_quartic(n, x);
        if (prev > R::zero()) != (v > R::zero()) {
            changes += 1;
        }
        prev = v;
    }
    if changes == 0 {
        return Err(Error::RootNotBracketed(format!(
            "kappa_tilde quartic has no sign change in (0,1) for n = {n}"
        )));
    }
    if changes > 1 {
        return Err(Error::RootNotBracketed(format!(
            "kappa_tilde quartic has {changes} sign changes in (0,1) for n = {n}"
        )));
    }
    let root = bisect(
        |x| Ok(kappa_tilde_quartic(n, x)),
        R::zero(),
        R::one(),
        BisectOptions::width(R::of(1e-12)),
    )?;
    Ok(root.x)
}

/// √((7n−1)/(2n²+5n−1)), the explicit upper bound for cos δ₀.
pub fn bound_7n<R: Real>(n: Dimension) -> Result<R> {
    require_n3(n)?;
    let nf = n.as_real::<R>();
    let seven = R::of(7.0);
    Ok(((seven * nf - R::one()) / (R::two() * nf * nf + R::of(5.0) * nf - R::one())).sqrt())
}

/// F(δ) = α(δ) + ((n+3)cos²δ − 4)/(4sin²δ) with
/// α(δ) = (n+1)/(8n) · [1 − (1 − n/(2μ(δ)))cos δ]⁻¹ for a caller-supplied
/// eigenvalue provider (the true μ, μ̃, or n/s²).
pub fn f_of<R: Real, M>(n: Dimension, delta: R, mu_provider: &M) -> Result<R>
where
    M: Fn(R) -> Result<R>,
{
    require_n3(n)?;
    let half_pi = R::pi() * R::half();
    if !(delta > R::zero() && delta < half_pi) {
        return Err(Error::Domain(format!(
            "F is defined on (0, pi/2), got {delta}"
        )));
    }
    let nf = n.as_real::<R>();
    let c = delta.cos();
    let s = delta.sin();
    let mu = mu_provider(delta)?;
    let denom = R::one() - (R::one() - nf / (R::two() * mu)) * c;
    if denom <= R::zero() {
        return Err(Error::Domain(format!(
            "alpha denominator nonpositive at delta = {delta} (mu = {mu})"
        )));
    }
    let alpha = (nf + R::one()) / (R::of(8.0) * nf) / denom;
    Ok(alpha + ((nf + R::of(3.0)) * c * c - R::of(4.0)) / (R::of(4.0) * s * s))
}

fn f_root<R: Real, M>(n: Dimension, mu_provider: &M) -> Result<(R, R)>
where
    M: Fn(R) -> Result<R>,
{
    let lo = R::of(0.05);
    let hi = R::pi() * R::half() - R::of(1e-6);
    let root = bisect(
        |delta| f_of(n, delta, mu_provider),
        lo,
        hi,
        BisectOptions {
            x_abs: R::of(1e-11),
            f_abs: Some(R::of(1e-10)),
            max_iter: 200,
        },
    )?;
    Ok((root.x, root.x.cos()))
}

/// δ₀(n): the unique zero of F with the true (shooting) eigenvalue.
pub fn delta0<R: Real>(n: Dimension) -> Result<(R, R)> {
    require_n3(n)?;
    let provider = |delta: R| mu_shooting(n, delta, R::of(1e-12)).map(|r| r.mu);
    f_root(n, &provider)
}

/// δ̃₀(n): the zero of the F-variant built on the μ̃ lower bound.
pub fn delta0_tilde<R: Real>(n: Dimension) -> Result<(R, R)> {
    require_n3(n)?;
    let provider = |delta: R| mu_lower_tilde(n, delta);
    f_root(n, &provider)
}

/// All threshold constants of one dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord<R: Real> {
    pub n: Dimension,
    /// The original radius bound 2/√(n+3).
    pub bm: R,
    pub zeta: R,
    pub zeta_rule: ZetaRule,
    pub kappa: R,
    pub kappa_tilde: R,
    pub bound_7n: R,
    pub cos_delta0: R,
    pub cos_delta0_tilde: R,
    pub delta0: R,
    pub delta0_tilde: R,
}

impl<R: Real> ThresholdRecord<R> {
    pub fn compute(n: Dimension) -> Result<Self> {
        require_n3(n)?;
        let nf = n.as_real::<R>();
        let (z, rule) = zeta::<R>(n)?;
        let (d0, cd0) = delta0::<R>(n)?;
        let (d0t, cd0t) = delta0_tilde::<R>(n)?;
        Ok(ThresholdRecord {
            n,
            bm: R::two() / (nf + R::of(3.0)).sqrt(),
            zeta: z,
            zeta_rule: rule,
            kappa: kappa::<R>(n)?,
            kappa_tilde: kappa_tilde::<R>(n)?,
            bound_7n: bound_7n::<R>(n)?,
            cos_delta0: cd0,
            cos_delta0_tilde: cd0t,
            delta0: d0,
            delta0_tilde: d0t,
        })
    }

    /// Checks every ordering the record is supposed to satisfy; returns a
    /// description of each violation (empty = all hold).
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        if !(self.kappa < self.cos_delta0) {
            out.push(format!("kappa >= cos_delta0 at n = {n}"));
        }
        if !(self.cos_delta0 < self.kappa_tilde) {
            out.push(format!("cos_delta0 >= kappa_tilde at n = {n}"));
        }
        if !(self.cos_delta0 < self.bound_7n) {
            out.push(format!("cos_delta0 >= bound_7n at n = {n}"));
        }
        if !(self.delta0_tilde < self.delta0) {
            out.push(format!("delta0_tilde >= delta0 at n = {n}"));
        }
        if !(self.cos_delta0_tilde > self.cos_delta0) {
            out.push(format!("cos_delta0_tilde <= cos_delta0 at n = {n}"));
        }
        if !(self.zeta < self.bm) {
            out.push(format!("zeta >= bm at n = {n}"));
        }
        if !(self.kappa < self.bm) {
            out.push(format!("kappa >= bm at n = {n}"));
        }
        let np1 = self.n.as_real::<R>() + R::one();
        if !(self.cos_delta0 * self.cos_delta0 > R::one() / np1) {
            out.push(format!("cos_delta0^2 <= 1/(n+1) at n = {n}"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    ConditionA,
    ConditionB,
}

/// One row of the condition (a) vs (b) comparison. `margin` is
/// ζ − cos δ₀ (negative means (a) admits the larger ball);
/// `margin_vs_kappa` compares against the κ lower bound instead.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow<R: Real> {
    pub n: Dimension,
    pub winner: Winner,
    pub zeta: R,
    pub cos_delta0: R,
    pub kappa: R,
    pub margin: R,
    pub margin_vs_kappa: R,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison<R: Real> {
    pub rows: Vec<ComparisonRow<R>>,
    /// Smallest n in the scanned range where condition (b) first wins, if any.
    pub crossover: Option<u32>,
}

/// Compares conditions (a) and (b) for n = 3..=n_max.
pub fn compare_conditions<R: Real>(n_max: Dimension) -> Result<Comparison<R>> {
    if n_max.get() < 5 {
        return Err(Error::Domain(format!(
            "comparison needs n_max >= 5, got {n_max}"
        )));
    }
    let mut rows = Vec::new();
    let mut crossover = None;
    for n in 3..=n_max.get() {
        let dim = Dimension::new(n)?;
        let (z, _) = zeta::<R>(dim)?;
        let (_, cd0) = delta0::<R>(dim)?;
        let k = kappa::<R>(dim)?;
        let winner = if z < cd0 {
            Winner::ConditionA
        } else {
            Winner::ConditionB
        };
        if winner == Winner::ConditionB && crossover.is_none() {
            crossover = Some(n);
        }
        rows.push(ComparisonRow {
            n: dim,
            winner,
            zeta: z,
            cos_delta0: cd0,
            kappa: k,
            margin: z - cd0,
            margin_vs_kappa: z - k,
        });
    }
    Ok(Comparison { rows, crossover })
}

//! Numerical verification of the integral identities, estimates, and
//! linearization formulas on radially symmetric test data.
//!
//! Every tensor here has the form h = a(r) dr² + b(r) sin²r σ with σ the
//! round metric on the (n−1)-sphere, so all integrals over the ball reduce
//! exactly to one-dimensional quadrature against the sin^{n−1} r weight.
//! Boundary terms with tangential components vanish identically for this
//! ansatz.

use crate::eigen::{self, EigenProfile};
use crate::error::{Error, Result};
use crate::geometry::{unit_sphere_area, Dimension};
use crate::ode;
use crate::quadrature::QuadratureRule;
use crate::real::Real;
use rand::Rng;
use std::sync::Arc;

const MAX_QUAD_NODES: usize = 1 << 16;

type Eval<R> = Arc<dyn Fn(R) -> R + Send + Sync>;

/// A smooth radial profile with explicit first and second derivatives.
#[derive(Clone)]
pub struct RadialFunction<R: Real> {
    value: Eval<R>,
    d1: Eval<R>,
    d2: Eval<R>,
}

impl<R: Real> RadialFunction<R> {
    pub fn from_fns<F, G, H>(value: F, d1: G, d2: H) -> Self
    where
        F: Fn(R) -> R + Send + Sync + 'static,
        G: Fn(R) -> R + Send + Sync + 'static,
        H: Fn(R) -> R + Send + Sync + 'static,
    {
        RadialFunction {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    pub fn constant(phi: R) -> Self {
        Self::from_fns(move |_| phi, |_| R::zero(), |_| R::zero())
    }

    /// α + β cos r + γ sin r + η r² with coefficients drawn uniformly from
    /// [−1, 1].
    pub fn random_smooth_profile<G: Rng>(rng: &mut G) -> Self {
        let al = R::of(rng.gen_range(-1.0..1.0));
        let be = R::of(rng.gen_range(-1.0..1.0));
        let ga = R::of(rng.gen_range(-1.0..1.0));
        let et = R::of(rng.gen_range(-1.0..1.0));
        Self::from_fns(
            move |r: R| al + be * r.cos() + ga * r.sin() + et * r * r,
            move |r: R| -be * r.sin() + ga * r.cos() + R::two() * et * r,
            move |r: R| -be * r.cos() - ga * r.sin() + R::two() * et,
        )
    }

    pub fn value(&self, r: R) -> R {
        (self.value)(r)
    }

    pub fn deriv(&self, r: R) -> R {
        (self.d1)(r)
    }

    pub fn second_deriv(&self, r: R) -> R {
        (self.d2)(r)
    }

    /// Checks the derivative evaluators against central differences of the
    /// value at 100 interior sample points.
    pub fn derivatives_consistent(&self, delta: R) -> bool {
        let step = R::of(1e-5);
        for i in 1..=100 {
            let r = delta * R::of(i as f64 / 101.0);
            let fd1 = (self.value(r + step) - self.value(r - step)) / (R::two() * step);
            let fd2 = (self.value(r + step) - R::two() * self.value(r) + self.value(r - step))
                / (step * step);
            let scale = R::one() + self.value(r).abs();
            if (fd1 - self.deriv(r)).abs() > R::of(1e-6) * scale
                || (fd2 - self.second_deriv(r)).abs() > R::of(1e-4) * scale
            {
                return false;
            }
        }
        true
    }
}

/// h = a(r) dr² + b(r) sin²r σ. Smoothness at the pole requires a(0) = b(0);
/// the tangential boundary field h(v, ν̄) vanishes for every such tensor.
#[derive(Clone)]
pub struct RadialTensor<R: Real> {
    pub a: RadialFunction<R>,
    pub b: RadialFunction<R>,
}

impl<R: Real> RadialTensor<R> {
    pub fn new(a: RadialFunction<R>, b: RadialFunction<R>) -> Result<Self> {
        let gap = (a.value(R::zero()) - b.value(R::zero())).abs();
        if gap > R::of(1e-9) {
            return Err(Error::Precondition(format!(
                "a(0) != b(0): gap {gap}"
            )));
        }
        Ok(RadialTensor { a, b })
    }

    pub fn isotropic(phi: R) -> Self {
        RadialTensor {
            a: RadialFunction::constant(phi),
            b: RadialFunction::constant(phi),
        }
    }

    pub fn trace(&self, n: Dimension, r: R) -> R {
        self.a.value(r) + (n.as_real::<R>() - R::one()) * self.b.value(r)
    }

    pub fn trace_deriv(&self, n: Dimension, r: R) -> R {
        self.a.deriv(r) + (n.as_real::<R>() - R::one()) * self.b.deriv(r)
    }

    pub fn trace_second_deriv(&self, n: Dimension, r: R) -> R {
        self.a.second_deriv(r) + (n.as_real::<R>() - R::one()) * self.b.second_deriv(r)
    }

    /// a² + (n−1)b², the pointwise squared norm.
    pub fn norm_sq(&self, n: Dimension, r: R) -> R {
        let a = self.a.value(r);
        let b = self.b.value(r);
        a * a + (n.as_real::<R>() - R::one()) * b * b
    }
}

/// Radial component of div h; all other components vanish by symmetry.
pub fn divergence_radial<R: Real>(h: &RadialTensor<R>, n: Dimension, r: R) -> R {
    let nm1 = n.as_real::<R>() - R::one();
    h.a.deriv(r) + nm1 * (r.cos() / r.sin()) * (h.a.value(r) - h.b.value(r))
}

/// Solves a' = −(n−1) cot r (a − b) with a(0) = b(0), producing a
/// divergence-free tensor with the prescribed angular profile b.
pub fn make_divfree<R: Real>(
    b: &RadialFunction<R>,
    n: Dimension,
    delta: R,
) -> Result<RadialTensor<R>> {
    let nf = n.as_real::<R>();
    let nm1 = nf - R::one();
    let r0 = R::of(1e-4);
    if !(delta > R::two() * r0) {
        return Err(Error::Domain(format!("delta = {delta} too small")));
    }
    // series a = b0 + c1 r + c2 r² matching the ODE through O(r)
    let b0 = b.value(R::zero());
    let b1 = b.deriv(R::zero());
    let b2 = R::half() * b.second_deriv(R::zero());
    let c1 = nm1 * b1 / nf;
    let c2 = nm1 * b2 / (nf + R::one());
    let a_r0 = b0 + c1 * r0 + c2 * r0 * r0;
    let b_ode = b.clone();
    let traj = Arc::new(ode::integrate(
        move |r: R, y: [R; 1]| [-nm1 * (r.cos() / r.sin()) * (y[0] - b_ode.value(r))],
        r0,
        [a_r0],
        delta,
        20_000,
    ));

    let series_val = move |r: R| b0 + c1 * r + c2 * r * r;
    let (tv, td1, td2) = (traj.clone(), traj.clone(), traj);
    let (bv, bd1) = (b.clone(), b.clone());
    let value = move |r: R| {
        if r < r0 {
            series_val(r)
        } else {
            tv.eval(r)[0]
        }
    };
    let d1 = move |r: R| {
        if r < r0 {
            c1 + R::two() * c2 * r
        } else {
            -nm1 * (r.cos() / r.sin()) * (td1.eval(r)[0] - bv.value(r))
        }
    };
    let d1_for_d2 = d1.clone();
    let d2 = move |r: R| {
        if r < r0 {
            R::two() * c2
        } else {
            let s = r.sin();
            let cot = r.cos() / s;
            let diff = td2.eval(r)[0] - bd1.value(r);
            // derivative of −(n−1) cot r (a − b)
            -nm1 * (cot * (d1_for_d2(r) - bd1.deriv(r)) - diff / (s * s))
        }
    };
    Ok(RadialTensor {
        a: RadialFunction {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        },
        b: b.clone(),
    })
}

/// Largest |(div h)_r| over a sample of [δ/100, δ].
pub fn divergence_residual<R: Real>(h: &RadialTensor<R>, n: Dimension, delta: R) -> R {
    let mut worst = R::zero();
    for i in 1..=200 {
        let r = delta * R::of(i as f64 / 200.0).max(R::of(0.01));
        worst = worst.max(divergence_radial(h, n, r).abs());
    }
    worst
}

/// Integrates with node doubling from 512 until the value stabilizes to
/// 1e−12 relative, up to 2^16 nodes.
fn converged_integral<R: Real, F>(delta: R, eval: F) -> Result<R>
where
    F: Fn(&QuadratureRule<R>) -> R,
{
    let mut m = 512usize;
    let mut prev = eval(&QuadratureRule::new(m, R::zero(), delta)?);
    while m < MAX_QUAD_NODES {
        m *= 2;
        let next = eval(&QuadratureRule::new(m, R::zero(), delta)?);
        if (next - prev).abs() <= R::of(1e-12) * (R::one() + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence { nodes: m })
}

/// Both sides of the divergence-theorem identity
///
///   s ∫_Σ (tr h) h(ν̄, ν̄) = ∫_Ω [λ (tr h)² − h(∇λ, ∇tr h) − (tr h)(div h)(∇λ)]
///
/// with λ = cos r. The last term vanishes for divergence-free h;
/// `include_div_term` = false reproduces the restricted identity that is
/// only valid under that hypothesis.
pub fn verify_divergence_identity_with<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
    include_div_term: bool,
) -> Result<(R, R, R)> {
    let omega = unit_sphere_area::<R>(n.get() - 1);
    let s = delta.sin();
    let nm1 = n.get() - 1;
    let lhs = s * h.a.value(delta) * h.trace(n, delta) * omega * s.powi(nm1 as i32);
    let rhs = omega
        * converged_integral(delta, |rule| {
            rule.integrate_weighted(n, |r| {
                let tr = h.trace(n, r);
                let trp = h.trace_deriv(n, r);
                // h(∇λ, ∇tr h) = −sin r · a · tr'
                let mut acc = r.cos() * tr * tr + r.sin() * h.a.value(r) * trp;
                if include_div_term {
                    // (div h)(∇λ) = −sin r (div h)_r
                    acc = acc + tr * r.sin() * divergence_radial(h, n, r);
                }
                acc
            })
        })?;
    let residual = (lhs - rhs).abs() / (R::one() + lhs.abs());
    Ok((lhs, rhs, residual))
}

pub fn verify_divergence_identity<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
) -> Result<(R, R, R)> {
    verify_divergence_identity_with(h, n, delta, true)
}

/// The weighted boundary estimate
///
///   s ∫_Σ (tr h) h(ν̄, ν̄) ≤ ∫_Ω [(w/2)√(1−λ²)|h|² + λ(tr h)² + (1/2w)√(1−λ²)|∇tr h|²]
///
/// for divergence-free h and constant w > 0. Returns (lhs, rhs, rhs − lhs).
pub fn verify_trace_estimate<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
    w: R,
) -> Result<(R, R, R)> {
    if !(w > R::zero()) {
        return Err(Error::Domain(format!("weight must be positive, got {w}")));
    }
    let div_res = divergence_residual(h, n, delta);
    if div_res > R::of(1e-9) {
        return Err(Error::Precondition(format!(
            "tensor is not divergence-free: residual {div_res}"
        )));
    }
    let omega = unit_sphere_area::<R>(n.get() - 1);
    let s = delta.sin();
    let lhs = s * h.a.value(delta) * h.trace(n, delta) * omega * s.powi(n.get() as i32 - 1);
    let rhs = omega
        * converged_integral(delta, |rule| {
            rule.integrate_weighted(n, |r| {
                let tr = h.trace(n, r);
                let trp = h.trace_deriv(n, r);
                let sr = r.sin();
                R::half() * w * sr * h.norm_sq(n, r)
                    + r.cos() * tr * tr
                    + sr * trp * trp / (R::two() * w)
            })
        })?;
    Ok((lhs, rhs, rhs - lhs))
}

/// The integration-by-parts identity
///
///   ∫_Σ u² ∂_ν̄λ = ∫_Ω [u² Δλ − (λ − c) Δ(u²)]
///
/// for any smooth radial u, with Δλ = −nλ and c = cos δ.
pub fn verify_ibp_identity<R: Real>(
    u: &RadialFunction<R>,
    n: Dimension,
    delta: R,
) -> Result<(R, R, R)> {
    let omega = unit_sphere_area::<R>(n.get() - 1);
    let s = delta.sin();
    let c = delta.cos();
    let nf = n.as_real::<R>();
    let ub = u.value(delta);
    let lhs = -s * ub * ub * omega * s.powi(n.get() as i32 - 1);
    let rhs = omega
        * converged_integral(delta, |rule| {
            rule.integrate_weighted(n, |r| {
                let uv = u.value(r);
                let up = u.deriv(r);
                let upp = u.second_deriv(r);
                // Δ(u²) for radial u
                let dsq1 = R::two() * uv * up;
                let dsq2 = R::two() * (up * up + uv * upp);
                let lap_usq = dsq2 + (nf - R::one()) * (r.cos() / r.sin()) * dsq1;
                uv * uv * (-nf * r.cos()) - (r.cos() - c) * lap_usq
            })
        })?;
    let residual = (lhs - rhs).abs() / (R::one() + lhs.abs());
    Ok((lhs, rhs, residual))
}

/// Which trial function the variational check uses: the radial profile
/// itself (tested against the mean-subtracted quotient) or u(r) times a
/// first angular harmonic, whose mean vanishes automatically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialMode {
    Radial,
    Angular,
}

#[derive(Clone, Copy, Debug)]
pub struct VariationalCheck<R: Real> {
    pub lhs: R,
    pub rhs: R,
    pub slack: R,
}

/// Tests ∫|∇v|² ≥ μ(δ)[∫v² − (1/V)(∫v)²] for the trial built from `u`.
/// The angular trial adds (n−1)u²/sin²r inside the Dirichlet integral.
pub fn verify_variational<R: Real>(
    u: &RadialFunction<R>,
    n: Dimension,
    delta: R,
    mode: TrialMode,
) -> Result<VariationalCheck<R>> {
    let mu = eigen::mu_shooting(n, delta, R::of(1e-10))?.mu;
    let nf = n.as_real::<R>();
    let (lhs, rhs) = match mode {
        TrialMode::Radial => {
            let dirichlet = converged_integral(delta, |rule| {
                rule.integrate_weighted(n, |r| {
                    let up = u.deriv(r);
                    up * up
                })
            })?;
            let mass = converged_integral(delta, |rule| {
                rule.integrate_weighted(n, |r| {
                    let uv = u.value(r);
                    uv * uv
                })
            })?;
            let mean = converged_integral(delta, |rule| rule.integrate_weighted(n, |r| u.value(r)))?;
            let volume = converged_integral(delta, |rule| rule.integrate_weighted(n, |_| R::one()))?;
            (dirichlet, mu * (mass - mean * mean / volume))
        }
        TrialMode::Angular => {
            let dirichlet = converged_integral(delta, |rule| {
                rule.integrate_weighted(n, |r| {
                    let uv = u.value(r);
                    let up = u.deriv(r);
                    let sr = r.sin();
                    up * up + (nf - R::one()) * uv * uv / (sr * sr)
                })
            })?;
            let mass = converged_integral(delta, |rule| {
                rule.integrate_weighted(n, |r| {
                    let uv = u.value(r);
                    uv * uv
                })
            })?;
            (dirichlet, mu * mass)
        }
    };
    Ok(VariationalCheck {
        lhs,
        rhs,
        slack: lhs - rhs,
    })
}

/// Wraps a dense eigenfunction as a radial profile.
pub fn eigenprofile_function<R: Real>(profile: EigenProfile<R>) -> RadialFunction<R> {
    let p = Arc::new(profile);
    let (pv, p1, p2) = (p.clone(), p.clone(), p);
    RadialFunction {
        value: Arc::new(move |r| pv.value(r)),
        d1: Arc::new(move |r| p1.deriv(r)),
        d2: Arc::new(move |r| p2.second_deriv(r)),
    }
}

/// Scalar curvature of g_t = (1 + t a) dr² + sin²r (1 + t b) σ at radius r,
/// from the warped-product formula with f = √(1+ta), ρ = sin r √(1+tb):
///
///   R = (n−1)(n−2)(1 − (ρ'/f)²)/ρ² − 2(n−1)(ρ'/f)'/(f ρ)
pub fn warped_scalar_curvature<R: Real>(
    a: &RadialFunction<R>,
    b: &RadialFunction<R>,
    n: Dimension,
    t: R,
    r: R,
) -> Result<R> {
    let fa = R::one() + t * a.value(r);
    let fb = R::one() + t * b.value(r);
    if !(fa > R::zero() && fb > R::zero()) {
        return Err(Error::DegenerateMetric(format!(
            "1 + t a = {fa}, 1 + t b = {fb} at r = {r}"
        )));
    }
    let nf = n.as_real::<R>();
    let sr = r.sin();
    let cr = r.cos();
    let sq = fb.sqrt();
    let f = fa.sqrt();
    let fp = t * a.deriv(r) / (R::two() * f);
    let rho = sr * sq;
    let tbp = t * b.deriv(r);
    let tbpp = t * b.second_deriv(r);
    let rho_p = cr * sq + sr * tbp / (R::two() * sq);
    let rho_pp = -sr * sq + cr * tbp / sq
        + sr * (tbpp / (R::two() * sq) - tbp * tbp / (R::of(4.0) * fb * sq));
    let q = rho_p / f;
    let qp = (rho_pp * f - rho_p * fp) / (f * f);
    Ok((nf - R::one()) * (nf - R::two()) * (R::one() - q * q) / (rho * rho)
        - R::two() * (nf - R::one()) * qp / (f * rho))
}

/// Compares −Δ(tr h) − (n−1) tr h with the central finite difference
/// [R(g_t) − R(g_{−t})]/(2t) of the warped scalar curvature, at step `t`.
/// Returns the max relative residual over [δ/50, δ].
pub fn verify_linearized_r_with_step<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
    t: R,
) -> Result<R> {
    let nf = n.as_real::<R>();
    let mut worst = R::zero();
    let lo = delta * R::of(0.02);
    for i in 0..200 {
        let r = lo + (delta - lo) * R::of(i as f64 / 199.0);
        let tr = h.trace(n, r);
        let trp = h.trace_deriv(n, r);
        let trpp = h.trace_second_deriv(n, r);
        let lap_tr = trpp + (nf - R::one()) * (r.cos() / r.sin()) * trp;
        let analytic = -lap_tr - (nf - R::one()) * tr;
        let plus = warped_scalar_curvature(&h.a, &h.b, n, t, r)?;
        let minus = warped_scalar_curvature(&h.a, &h.b, n, -t, r)?;
        let fd = (plus - minus) / (R::two() * t);
        let res = (fd - analytic).abs() / (R::one() + analytic.abs());
        worst = worst.max(res);
    }
    Ok(worst)
}

pub fn verify_linearized_r<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
) -> Result<R> {
    verify_linearized_r_with_step(h, n, delta, R::of(1e-5))
}

/// Closed-form mean curvature of {r = δ} in g_t; requires b(δ) = 0 so both
/// metrics induce the same boundary metric.
fn mean_curvature_deformed<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
    t: R,
) -> R {
    let nf = n.as_real::<R>();
    let fa = R::one() + t * h.a.value(delta);
    let fb = R::one() + t * h.b.value(delta);
    let cot = delta.cos() / delta.sin();
    (nf - R::one()) / fa.sqrt() * (cot + t * h.b.deriv(delta) / (R::two() * fb))
}

/// Compares 2DH = (n−1)(b'(δ) − a(δ) cot δ) with the central finite
/// difference of the closed-form mean curvature of the deformed boundary.
/// Returns the absolute residual between the two values of 2DH.
pub fn verify_linearized_h<R: Real>(
    h: &RadialTensor<R>,
    n: Dimension,
    delta: R,
) -> Result<R> {
    let b_end = h.b.value(delta).abs();
    if b_end > R::of(1e-9) {
        return Err(Error::Precondition(format!(
            "b(delta) must vanish, got {b_end}"
        )));
    }
    let nf = n.as_real::<R>();
    let analytic = (nf - R::one()) * (h.b.deriv(delta) - h.a.value(delta) * delta.cos() / delta.sin());
    let t = R::of(1e-5);
    let fd = (mean_curvature_deformed(h, n, delta, t)
        - mean_curvature_deformed(h, n, delta, -t))
        / (R::two() * t);
    Ok((R::two() * fd - analytic).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn cos_profile() -> RadialFunction<f64> {
        RadialFunction::from_fns(|r: f64| r.cos(), |r: f64| -r.sin(), |r: f64| -r.cos())
    }

    #[test]
    fn random_profile_derivatives_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let u = RadialFunction::<f64>::random_smooth_profile(&mut rng);
            assert!(u.derivatives_consistent(1.3));
        }
    }

    #[test]
    fn divergence_of_metric_multiple_vanishes() {
        let h = RadialTensor::isotropic(0.7f64);
        for n in [3u32, 4, 7] {
            for r in [0.2, 0.7, 1.4] {
                assert!(divergence_radial(&h, dim(n), r).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn divergence_equal_profiles_reduces_to_a_prime() {
        let h = RadialTensor {
            a: cos_profile(),
            b: cos_profile(),
        };
        let r = 0.8f64;
        assert!((divergence_radial(&h, dim(4), r) + r.sin()).abs() < 1e-15);
    }

    #[test]
    fn divergence_matches_integration_by_parts_oracle() {
        // for W = phi d/dr: int (div h)(W) = boundary term - int <h, grad W>,
        // with <h, grad W> = a phi' + (n-1) phi cot r b for the radial ansatz
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = dim(3);
        let delta = 1.1f64;
        let omega = unit_sphere_area::<f64>(n.get() - 1);
        for _ in 0..5 {
            let a = RadialFunction::random_smooth_profile(&mut rng);
            let shift = a.value(0.0) - 0.3;
            let b = {
                let base = RadialFunction::<f64>::random_smooth_profile(&mut rng);
                let off = shift - base.value(0.0) + 0.3;
                let bb = base.clone();
                let b1 = base.clone();
                let b2 = base;
                RadialFunction::from_fns(
                    move |r| bb.value(r) + off,
                    move |r| b1.deriv(r),
                    move |r| b2.second_deriv(r),
                )
            };
            let h = RadialTensor::new(a, b).unwrap();
            let phi = |r: f64| 1.0 + 0.5 * r * r;
            let phi_p = |r: f64| r;
            let lhs = omega
                * converged_integral(delta, |rule| {
                    rule.integrate_weighted(n, |r| divergence_radial(&h, n, r) * phi(r))
                })
                .unwrap();
            let interior = omega
                * converged_integral(delta, |rule| {
                    rule.integrate_weighted(n, |r| {
                        h.a.value(r) * phi_p(r)
                            + 2.0 * phi(r) * (r.cos() / r.sin()) * h.b.value(r)
                    })
                })
                .unwrap();
            let boundary =
                h.a.value(delta) * phi(delta) * omega * delta.sin().powi(2);
            let residual = (lhs - (boundary - interior)).abs() / (1.0 + lhs.abs());
            assert!(residual < 1e-10, "residual {residual}");
        }
    }

    #[test]
    fn make_divfree_fixed_point_and_residual() {
        let n = dim(3);
        let h = make_divfree(&RadialFunction::constant(0.4f64), n, 1.0).unwrap();
        for r in [0.1, 0.5, 0.9] {
            assert!((h.a.value(r) - 0.4).abs() < 1e-10);
        }
        let h = make_divfree(&cos_profile(), n, 1.2).unwrap();
        assert!(divergence_residual(&h, n, 1.2) < 1e-9);
        assert!((h.a.value(0.0) - h.b.value(0.0)).abs() < 1e-12);
    }

    #[test]
    fn make_divfree_matches_closed_form() {
        // a(r) = (n-1)/sin^{n-1} r * int_0^r b cos t sin^{n-2} t dt
        let n = dim(4);
        let delta = 1.3f64;
        let h = make_divfree(&cos_profile(), n, delta).unwrap();
        for r in [0.2f64, 0.6, 1.0, 1.25] {
            let rule = QuadratureRule::new(2048, 0.0, r).unwrap();
            let integral = rule.integrate(|t: f64| t.cos() * t.cos() * t.sin().powi(2));
            let closed = 3.0 / r.sin().powi(3) * integral;
            assert!(
                (h.a.value(r) - closed).abs() < 1e-9,
                "r = {r}: {} vs {closed}",
                h.a.value(r)
            );
        }
    }

    #[test]
    fn divergence_identity_closed_form_isotropic() {
        // h = phi g: both sides reduce to n phi^2 omega s^n
        let phi = 0.8f64;
        for (n, delta) in [(3u32, 0.9f64), (5, 1.3)] {
            let nd = dim(n);
            let h = RadialTensor::isotropic(phi);
            let (lhs, rhs, residual) = verify_divergence_identity(&h, nd, delta).unwrap();
            let expected =
                n as f64 * phi * phi * unit_sphere_area::<f64>(n - 1) * delta.sin().powi(n as i32);
            assert!((lhs - expected).abs() < 1e-10 * expected.abs().max(1.0));
            assert!((rhs - expected).abs() < 1e-10 * expected.abs().max(1.0));
            assert!(residual < 1e-10);
        }
    }

    #[test]
    fn divergence_identity_divfree_input() {
        let n = dim(3);
        let h = make_divfree(&cos_profile(), n, 0.9).unwrap();
        let (_, _, residual) = verify_divergence_identity(&h, n, 0.9).unwrap();
        assert!(residual < 1e-10, "residual {residual}");
    }

    #[test]
    fn divergence_identity_negative_control() {
        // a = 1, b = 0 is not divergence-free; the restricted identity fails
        let n = dim(3);
        let h = RadialTensor {
            a: RadialFunction::constant(1.0f64),
            b: RadialFunction::constant(0.0),
        };
        let (_, _, with) = verify_divergence_identity_with(&h, n, 0.9, true).unwrap();
        let (_, _, without) = verify_divergence_identity_with(&h, n, 0.9, false).unwrap();
        assert!(with < 1e-10, "with term: {with}");
        assert!(without > 1e-3, "without term: {without}");
    }

    #[test]
    fn trace_estimate_isotropic_strict() {
        let h = RadialTensor::isotropic(0.6f64);
        let (_, _, slack) =
            verify_trace_estimate(&h, dim(3), 1.0, std::f64::consts::SQRT_2).unwrap();
        assert!(slack > 0.0);
    }

    #[test]
    fn trace_estimate_divfree_all_weights() {
        let n = dim(3);
        let h = make_divfree(&cos_profile(), n, 1.2).unwrap();
        for w in [0.5f64, std::f64::consts::SQRT_2, 4.0] {
            let (_, _, slack) = verify_trace_estimate(&h, n, 1.2, w).unwrap();
            assert!(slack >= -1e-10, "w = {w}: slack {slack}");
        }
    }

    #[test]
    fn trace_estimate_rejects_non_divfree() {
        let h = RadialTensor {
            a: RadialFunction::constant(1.0f64),
            b: RadialFunction::constant(0.0),
        };
        assert!(verify_trace_estimate(&h, dim(3), 1.0, 1.0).is_err());
    }

    #[test]
    fn ibp_identity_constant_and_lambda() {
        let n = dim(4);
        let delta = 1.1f64;
        let one = RadialFunction::constant(1.0f64);
        let (lhs, _, residual) = verify_ibp_identity(&one, n, delta).unwrap();
        let expected = -unit_sphere_area::<f64>(3) * delta.sin().powi(4);
        assert!((lhs - expected).abs() < 1e-12 * expected.abs());
        assert!(residual < 1e-10);

        let (_, _, residual) = verify_ibp_identity(&cos_profile(), n, delta).unwrap();
        assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn ibp_identity_polynomial() {
        let u = RadialFunction::from_fns(|r: f64| 1.0 + r * r, |r: f64| 2.0 * r, |_| 2.0);
        let (_, _, residual) = verify_ibp_identity(&u, dim(3), 0.9).unwrap();
        assert!(residual < 1e-10);
    }

    #[test]
    fn variational_constant_is_null() {
        let u = RadialFunction::constant(1.0f64);
        let check = verify_variational(&u, dim(3), 1.0, TrialMode::Radial).unwrap();
        assert!(check.lhs.abs() < 1e-12 && check.rhs.abs() < 1e-10);
    }

    #[test]
    fn variational_linear_angular_trial() {
        let u = RadialFunction::from_fns(|r: f64| r, |_| 1.0, |_| 0.0);
        let check = verify_variational(&u, dim(3), 1.0, TrialMode::Angular).unwrap();
        assert!(check.slack >= 0.0, "slack {}", check.slack);
    }

    #[test]
    fn variational_eigenfunction_saturates() {
        let n = dim(3);
        let delta = 1.0f64;
        let mu = eigen::mu_shooting(n, delta, 1e-12).unwrap().mu;
        let profile = eigen::eigenfunction(n, delta, mu).unwrap();
        let u = eigenprofile_function(profile);
        let check = verify_variational(&u, n, delta, TrialMode::Angular).unwrap();
        assert!(check.slack >= -1e-8 * check.lhs.abs());
        assert!(
            check.slack.abs() <= 1e-6 * check.lhs.abs(),
            "slack {} lhs {}",
            check.slack,
            check.lhs
        );
    }

    #[test]
    fn curvature_round_sphere() {
        let a = RadialFunction::constant(0.0f64);
        let b = RadialFunction::constant(0.0f64);
        for n in [3u32, 4, 6] {
            for r in [0.3, 0.9, 1.4] {
                let got = warped_scalar_curvature(&a, &b, dim(n), 0.0, r).unwrap();
                let expected = (n * (n - 1)) as f64;
                assert!((got - expected).abs() < 1e-9, "n={n} r={r}: {got}");
            }
        }
    }

    #[test]
    fn curvature_conformal_scaling() {
        // a = b = 1: g_t = (1+t) g, so R(g_t) = n(n-1)/(1+t)
        let one = RadialFunction::constant(1.0f64);
        let t = 0.01f64;
        let got = warped_scalar_curvature(&one, &one, dim(3), t, 0.7).unwrap();
        assert!((got - 6.0 / (1.0 + t)).abs() < 1e-9);
    }

    #[test]
    fn curvature_rejects_degenerate() {
        let a = RadialFunction::constant(-2.0f64);
        let b = RadialFunction::constant(0.0f64);
        assert!(warped_scalar_curvature(&a, &b, dim(3), 1.0, 0.5).is_err());
    }

    #[test]
    fn linearized_r_isotropic() {
        let h = RadialTensor::isotropic(0.5f64);
        let residual = verify_linearized_r(&h, dim(3), 1.0).unwrap();
        assert!(residual < 1e-6, "residual {residual}");
    }

    #[test]
    fn linearized_r_divfree() {
        let n = dim(3);
        let h = make_divfree(&cos_profile(), n, 1.0).unwrap();
        let residual = verify_linearized_r(&h, n, 1.0).unwrap();
        assert!(residual < 1e-6, "residual {residual}");
    }

    #[test]
    fn linearized_r_step_halving_second_order() {
        let h = RadialTensor::isotropic(0.5f64);
        let r1 = verify_linearized_r_with_step(&h, dim(3), 1.0, 1e-3).unwrap();
        let r2 = verify_linearized_r_with_step(&h, dim(3), 1.0, 5e-4).unwrap();
        let ratio = r1 / r2;
        assert!(ratio > 2.0 && ratio < 8.0, "ratio {ratio}");
    }

    #[test]
    fn linearized_h_single_term_cases() {
        let delta = 0.8f64;
        let n = dim(4);
        // a = 0, b vanishing at delta
        let b = RadialFunction::from_fns(
            move |r: f64| r * r - delta * delta,
            |r: f64| 2.0 * r,
            |_| 2.0,
        );
        let h = RadialTensor {
            a: RadialFunction::constant(0.0f64),
            b,
        };
        assert!(verify_linearized_h(&h, n, delta).unwrap() < 1e-8);
        // b = 0, a = 1
        let h = RadialTensor {
            a: RadialFunction::constant(1.0f64),
            b: RadialFunction::constant(0.0f64),
        };
        assert!(verify_linearized_h(&h, n, delta).unwrap() < 1e-8);
    }

    #[test]
    fn linearized_h_generic_and_precondition() {
        let delta = 0.8f64;
        let n = dim(4);
        let b = RadialFunction::from_fns(
            move |r: f64| (r - delta) * r.cos(),
            move |r: f64| r.cos() - (r - delta) * r.sin(),
            move |r: f64| -2.0 * r.sin() - (r - delta) * r.cos(),
        );
        let h = RadialTensor {
            a: cos_profile(),
            b,
        };
        assert!(verify_linearized_h(&h, n, delta).unwrap() < 1e-8);
        let bad = RadialTensor::isotropic(1.0f64);
        assert!(verify_linearized_h(&bad, n, delta).is_err());
    }
}

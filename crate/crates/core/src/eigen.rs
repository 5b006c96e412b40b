//! First nonzero Neumann eigenvalue μ(δ) of the geodesic ball B(δ) ⊂ Sⁿ.
//!
//! Two independent methods are provided: a shooting solver on the first
//! angular mode's radial profile equation, and a finite-difference
//! discretization of the same Sturm–Liouville problem solved by shifted
//! inverse iteration. The closed-form lower bounds
//! μ̃(δ) = n + s^{n−2}c/∫₀^δ sin^{n−1} and n/s² are exposed alongside.
//!
//! The first nonzero Neumann eigenvalue of a ball with δ ≤ π/2 is attained in
//! the first angular mode (ℓ = 1). That reduction is standard spectral theory
//! but is guarded rather than assumed: [`first_mode_is_angular`] computes the
//! radial (ℓ = 0) branch as well and reports any violation.

use crate::error::{Error, Result};
use crate::geometry::{sin_power_integral, Dimension};
use crate::ode;
use crate::real::Real;
use serde::{Deserialize, Serialize};

/// Which solver produced an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Shooting,
    FiniteDifferenceOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult<R: Real> {
    pub n: Dimension,
    pub delta: R,
    pub mu: R,
    pub method: EigenMethod,
    pub bracket: (R, R),
    pub residual: R,
}

fn check_delta<R: Real>(delta: R) -> Result<()> {
    let half_pi = R::pi() * R::half();
    if !(delta > R::zero() && delta <= half_pi) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, pi/2], got {delta}"
        )));
    }
    Ok(())
}

/// The simple lower bound n/sin²δ.
pub fn mu_lower_simple<R: Real>(n: Dimension, delta: R) -> R {
    let s = delta.sin();
    n.as_real::<R>() / (s * s)
}

/// The sharper lower bound μ̃(δ) = n + sin^{n−2}δ cos δ / ∫₀^δ sin^{n−1} t dt.
pub fn mu_lower_tilde<R: Real>(n: Dimension, delta: R) -> Result<R> {
    check_delta(delta)?;
    let s = delta.sin();
    let c = delta.cos();
    let integral = sin_power_integral(n, delta)?;
    Ok(n.as_real::<R>() + s.powi(n.get() as i32 - 2) * c / integral)
}

/// Number of fixed integration steps used by the shooting solver.
const SHOOT_STEPS: usize = 20_000;
/// Series start offset; below this the regular series expansion is used.
const SERIES_R0: f64 = 1e-4;

/// Precomputed cot r and 1/sin²r on the half-step grid of the fixed RK4 mesh.
/// Building this once per δ removes all trig calls from the μ bisection.
struct ShootTables<R: Real> {
    r0: R,
    h: R,
    cot: Vec<R>,
    inv_s2: Vec<R>,
    steps: usize,
    nm1: R,
    n: R,
}

impl<R: Real> ShootTables<R> {
    fn build(n: Dimension, delta: R, steps: usize) -> Self {
        let r0 = R::of(SERIES_R0);
        let h = (delta - r0) / R::of(steps as f64);
        let half_h = h * R::half();
        let count = 2 * steps + 1;
        let mut cot = Vec::with_capacity(count);
        let mut inv_s2 = Vec::with_capacity(count);
        for i in 0..count {
            let r = r0 + half_h * R::of(i as f64);
            let s = r.sin();
            cot.push(r.cos() / s);
            inv_s2.push(R::one() / (s * s));
        }
        ShootTables {
            r0,
            h,
            cot,
            inv_s2,
            steps,
            nm1: R::of(f64::from(n.get() - 1)),
            n: n.as_real::<R>(),
        }
    }

    /// Regular series start for the ℓ = 1 profile: u = r + c₂r³ + O(r⁵)
    /// with c₂ = (n + 1 − μ)/(2(n + 2)), fitted by matching the ODE.
    fn series_start_l1(&self, mu: R) -> [R; 2] {
        let c2 = (self.n + R::one() - mu) / (R::two() * (self.n + R::two()));
        let r0 = self.r0;
        [
            r0 + c2 * r0 * r0 * r0,
            R::one() + R::of(3.0) * c2 * r0 * r0,
        ]
    }

    /// Integrates the ℓ = 1 profile u'' + (n−1)cot(r)u' + [μ − (n−1)/sin²r]u = 0
    /// to δ and returns u'(δ).
    fn uprime_l1(&self, mu: R) -> R {
        let mut y = self.series_start_l1(mu);
        let f = |idx: usize, y: [R; 2]| {
            [
                y[1],
                -self.nm1 * self.cot[idx] * y[1] - (mu - self.nm1 * self.inv_s2[idx]) * y[0],
            ]
        };
        y = rk4_indexed(&f, y, self.h, self.steps);
        y[1]
    }

    /// Same for the radial ℓ = 0 branch u'' + (n−1)cot(r)u' + μu = 0 with
    /// u(0) = 1, u'(0) = 0 (series u = 1 − μr²/(2n) + O(r⁴)).
    fn uprime_l0(&self, mu: R) -> R {
        let r0 = self.r0;
        let d2 = -mu / (R::two() * self.n);
        let mut y = [R::one() + d2 * r0 * r0, R::two() * d2 * r0];
        let f = |idx: usize, y: [R; 2]| [y[1], -self.nm1 * self.cot[idx] * y[1] - mu * y[0]];
        y = rk4_indexed(&f, y, self.h, self.steps);
        y[1]
    }
}

/// Fixed-step RK4 where the vector field is indexed by half-step grid
/// position instead of evaluating coefficients on the fly.
fn rk4_indexed<R: Real, F: Fn(usize, [R; 2]) -> [R; 2]>(
    f: &F,
    y0: [R; 2],
    h: R,
    steps: usize,
) -> [R; 2] {
    let half = R::half();
    let sixth = R::of(1.0 / 6.0);
    let mut y = y0;
    for step in 0..steps {
        let i = 2 * step;
        let k1 = f(i, y);
        let k2 = f(i + 1, [y[0] + half * h * k1[0], y[1] + half * h * k1[1]]);
        let k3 = f(i + 1, [y[0] + half * h * k2[0], y[1] + half * h * k2[1]]);
        let k4 = f(i + 2, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y = [
            y[0] + sixth * h * (k1[0] + R::two() * (k2[0] + k3[0]) + k4[0]),
            y[1] + sixth * h * (k1[1] + R::two() * (k2[1] + k3[1]) + k4[1]),
        ];
    }
    y
}

/// Finds the first sign change of `f` scanning geometrically from `lo`,
/// then bisects it. Scanning (rather than a single wide bracket) keeps the
/// search locked onto the *smallest* root even when several eigenvalue
/// branches cross inside the window.
fn first_root_scan<R: Real, F: Fn(R) -> R>(
    f: F,
    lo: R,
    hi_cap: R,
    width_tol: R,
) -> Result<(R, (R, R))> {
    let factor = R::of(1.15);
    let mut a = lo;
    let mut fa = f(a);
    if fa == R::zero() {
        return Ok((a, (a, a)));
    }
    let mut b = a;
    loop {
        b = b * factor;
        if b > hi_cap {
            return Err(Error::NoSignChange {
                lo: lo.to_f64(),
                hi: hi_cap.to_f64(),
            });
        }
        let fb = f(b);
        if fb == R::zero() {
            return Ok((b, (b, b)));
        }
        if (fa > R::zero()) != (fb > R::zero()) {
            break;
        }
        a = b;
        fa = fb;
    }
    // bisect [a, b]
    let mut lo_x = a;
    let mut hi_x = b;
    let mut flo = fa;
    for _ in 0..200 {
        if hi_x - lo_x <= width_tol {
            break;
        }
        let mid = R::half() * (lo_x + hi_x);
        if mid <= lo_x || mid >= hi_x {
            break;
        }
        let fm = f(mid);
        if fm == R::zero() {
            return Ok((mid, (mid, mid)));
        }
        if (fm > R::zero()) == (flo > R::zero()) {
            lo_x = mid;
            flo = fm;
        } else {
            hi_x = mid;
        }
    }
    Ok((R::half() * (lo_x + hi_x), (lo_x, hi_x)))
}

/// μ(δ) by shooting on the ℓ = 1 radial profile: the smallest μ with
/// u'(δ) = 0, located by bisection on the sign of u'(δ).
pub fn mu_shooting<R: Real>(n: Dimension, delta: R, tol: R) -> Result<EigenResult<R>> {
    check_delta(delta)?;
    if !(tol >= R::of(1e-12) && tol <= R::of(1e-4)) {
        return Err(Error::Domain(format!(
            "shooting tolerance must lie in [1e-12, 1e-4], got {tol}"
        )));
    }
    let tables = ShootTables::build(n, delta, SHOOT_STEPS);
    let simple = mu_lower_simple::<R>(n, delta);
    // back off a whisker so the hemisphere case (root exactly at the bound)
    // stays inside the bracket
    let lo = simple * (R::one() - R::of(1e-6));
    // the eigenvalue always exceeds `simple`; the cap is widened from the
    // nominal 4x if the first branch lies higher
    let mut hi_cap = simple * R::of(4.0);
    let width_tol = tol * simple;
    let max_cap = simple * R::of(4096.0);
    loop {
        match first_root_scan(|mu| tables.uprime_l1(mu), lo, hi_cap, width_tol) {
            Ok((mu, bracket)) => {
                let residual = tables.uprime_l1(mu).abs();
                return Ok(EigenResult {
                    n,
                    delta,
                    mu,
                    method: EigenMethod::Shooting,
                    bracket,
                    residual,
                });
            }
            Err(Error::NoSignChange { .. }) if hi_cap < max_cap => {
                hi_cap = hi_cap * R::two();
            }
            Err(e) => return Err(e),
        }
    }
}

/// Smallest positive eigenvalue of the radial (ℓ = 0) Neumann branch.
pub fn mu_radial_first<R: Real>(n: Dimension, delta: R, tol: R) -> Result<R> {
    check_delta(delta)?;
    let tables = ShootTables::build(n, delta, SHOOT_STEPS);
    let start = R::of(0.25);
    let cap = mu_lower_simple::<R>(n, delta) * R::of(4096.0);
    let (mu, _) = first_root_scan(|mu| tables.uprime_l0(mu), start, cap, tol * start)?;
    Ok(mu)
}

/// Guard for the ℓ = 1 mode assumption: returns Ok(true) when the angular
/// branch gives the smaller first eigenvalue, Ok(false) when it does not
/// (which would invalidate the reduction and is reported, not used).
pub fn first_mode_is_angular<R: Real>(n: Dimension, delta: R) -> Result<bool> {
    let tol = R::of(1e-9);
    let angular = mu_shooting(n, delta, tol)?;
    let radial = mu_radial_first(n, delta, tol)?;
    Ok(angular.mu <= radial)
}

/// The shooting eigenfunction profile u(r) with u(r) ~ r at the pole,
/// integrated once at a converged μ and stored densely.
pub struct EigenProfile<R: Real> {
    traj: ode::Trajectory<R, 2>,
    n: R,
    nm1: R,
    mu: R,
    c2: R,
    r0: R,
}

impl<R: Real> EigenProfile<R> {
    pub fn value(&self, r: R) -> R {
        if r < self.r0 {
            r + self.c2 * r * r * r
        } else {
            self.traj.eval(r)[0]
        }
    }

    pub fn deriv(&self, r: R) -> R {
        if r < self.r0 {
            R::one() + R::of(3.0) * self.c2 * r * r
        } else {
            self.traj.eval(r)[1]
        }
    }

    pub fn second_deriv(&self, r: R) -> R {
        if r < self.r0 {
            R::of(6.0) * self.c2 * r
        } else {
            // from the profile ODE
            let y = self.traj.eval(r);
            let s = r.sin();
            -self.nm1 * (r.cos() / s) * y[1] - (self.mu - self.nm1 / (s * s)) * y[0]
        }
    }

    pub fn mu(&self) -> R {
        self.mu
    }

    pub fn n(&self) -> R {
        self.n
    }
}

/// Integrates the ℓ = 1 profile at the given μ and returns it as a dense
/// function on [0, δ].
pub fn eigenfunction<R: Real>(n: Dimension, delta: R, mu: R) -> Result<EigenProfile<R>> {
    check_delta(delta)?;
    let nf = n.as_real::<R>();
    let nm1 = R::of(f64::from(n.get() - 1));
    let c2 = (nf + R::one() - mu) / (R::two() * (nf + R::two()));
    let r0 = R::of(SERIES_R0);
    let y0 = [
        r0 + c2 * r0 * r0 * r0,
        R::one() + R::of(3.0) * c2 * r0 * r0,
    ];
    let f = move |r: R, y: [R; 2]| {
        let s = r.sin();
        [
            y[1],
            -nm1 * (r.cos() / s) * y[1] - (mu - nm1 / (s * s)) * y[0],
        ]
    };
    let traj = ode::integrate(f, r0, y0, delta, SHOOT_STEPS);
    Ok(EigenProfile {
        traj,
        n: nf,
        nm1,
        mu,
        c2,
        r0,
    })
}

/// Independent oracle: finite-difference discretization of the self-adjoint
/// form −(sin^{n−1}r·u')' + (n−1)sin^{n−3}r·u = μ sin^{n−1}r·u with u(0) = 0
/// (regularity) and u'(δ) = 0 (Neumann, via a ghost node halved for
/// symmetry), solved by shifted inverse iteration on the tridiagonal pencil.
pub fn mu_oracle_fd<R: Real>(n: Dimension, delta: R, m: usize) -> Result<EigenResult<R>> {
    check_delta(delta)?;
    if m < 100 {
        return Err(Error::Domain(format!("node count must be >= 100, got {m}")));
    }
    let h = delta / R::of(m as f64);
    let nm1 = n.get() as i32 - 1;
    let p = |r: R| r.sin().powi(nm1);
    let q = |r: R| R::of(f64::from(n.get() - 1)) * r.sin().powi(nm1 - 2);
    let w = |r: R| r.sin().powi(nm1);

    // unknowns u_1..u_m at r_i = i h; u_0 = 0
    let inv_h2 = R::one() / (h * h);
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m - 1); // off[i] couples u_{i+1} and u_{i+2}
    let mut weight = Vec::with_capacity(m);
    for i in 1..=m {
        let r = h * R::of(i as f64);
        let pm = p(r - h * R::half());
        if i < m {
            let pp = p(r + h * R::half());
            diag.push((pm + pp) * inv_h2 + q(r));
            off.push(-pp * inv_h2);
            weight.push(w(r));
        } else {
            // half-cell row at the Neumann end
            diag.push(pm * inv_h2 + q(r) * R::half());
            weight.push(w(r) * R::half());
        }
    }

    // shift strictly below the pencil's smallest eigenvalue
    let shift = mu_lower_simple::<R>(n, delta) * R::of(0.9);
    let mut d_shift = Vec::with_capacity(m);
    for i in 0..m {
        d_shift.push(diag[i] - shift * weight[i]);
    }
    // LU factorization of the shifted tridiagonal matrix
    let mut lu_d = vec![R::zero(); m];
    let mut lu_l = vec![R::zero(); m - 1];
    lu_d[0] = d_shift[0];
    for i in 1..m {
        let l = off[i - 1] / lu_d[i - 1];
        lu_l[i - 1] = l;
        lu_d[i] = d_shift[i] - l * off[i - 1];
    }

    let solve = |rhs: &[R], out: &mut Vec<R>| {
        out.clear();
        out.extend_from_slice(rhs);
        for i in 1..m {
            let corr = lu_l[i - 1] * out[i - 1];
            out[i] = out[i] - corr;
        }
        out[m - 1] = out[m - 1] / lu_d[m - 1];
        for i in (0..m - 1).rev() {
            out[i] = (out[i] - off[i] * out[i + 1]) / lu_d[i];
        }
    };

    // inverse iteration
    let mut v: Vec<R> = (1..=m).map(|i| h * R::of(i as f64)).collect();
    let mut x = Vec::with_capacity(m);
    let mut rhs = vec![R::zero(); m];
    let mut rho = R::zero();
    let mut converged = false;
    let mut last_change = R::infinity();
    let mut prev_change = R::infinity();
    for iter in 0..500 {
        for i in 0..m {
            rhs[i] = weight[i] * v[i];
        }
        solve(&rhs, &mut x);
        let norm = x
            .iter()
            .fold(R::zero(), |acc, &t| acc + t * t)
            .sqrt();
        for t in x.iter_mut() {
            *t = *t / norm;
        }
        std::mem::swap(&mut v, &mut x);
        // Rayleigh quotient v'Av / v'Wv
        let mut num = R::zero();
        let mut den = R::zero();
        for i in 0..m {
            let mut av = diag[i] * v[i];
            if i > 0 {
                av = av + off[i - 1] * v[i - 1];
            }
            if i + 1 < m {
                av = av + off[i] * v[i + 1];
            }
            num = num + v[i] * av;
            den = den + weight[i] * v[i] * v[i];
        }
        let rho_new = num / den;
        last_change = (rho_new - rho).abs();
        rho = rho_new;
        // stop at the target precision, or once the update stops shrinking
        // (the quotient has reached its rounding floor)
        if iter > 2 && (last_change <= R::of(1e-13) * rho.abs() || last_change >= prev_change) {
            converged = true;
            break;
        }
        prev_change = last_change;
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: 500,
            context: format!("inverse iteration for n={n} delta={delta} m={m}"),
        });
    }
    // residual ||Av - rho W v|| / ||W v||
    let mut res_num = R::zero();
    let mut res_den = R::zero();
    for i in 0..m {
        let mut av = diag[i] * v[i];
        if i > 0 {
            av = av + off[i - 1] * v[i - 1];
        }
        if i + 1 < m {
            av = av + off[i] * v[i + 1];
        }
        let wv = weight[i] * v[i];
        let r = av - rho * wv;
        res_num = res_num + r * r;
        res_den = res_den + wv * wv;
    }
    let residual = (res_num / res_den).sqrt();
    let slack = (last_change + R::epsilon() * rho) * R::of(4.0);
    Ok(EigenResult {
        n,
        delta,
        mu: rho,
        method: EigenMethod::FiniteDifferenceOracle,
        bracket: (rho - slack, rho + slack),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

    #[test]
    fn lower_bounds_at_hemisphere() {
        for n in 3..=8 {
            assert!((mu_lower_simple::<f64>(dim(n), HALF_PI) - f64::from(n)).abs() < 1e-14);
            assert!((mu_lower_tilde::<f64>(dim(n), HALF_PI).unwrap() - f64::from(n)).abs() < 1e-13);
        }
    }

    #[test]
    fn mu_lower_tilde_frozen_value() {
        // n = 3, delta = pi/4: 3 + 0.5 / ((pi/4 - 1/2)/2) = 6.503876...
        let v = mu_lower_tilde::<f64>(dim(3), std::f64::consts::FRAC_PI_4).unwrap();
        let i = (std::f64::consts::FRAC_PI_4 - 0.5) / 2.0;
        assert!((v - (3.0 + 0.5 / i)).abs() < 1e-12);
        assert!((v - 6.503876).abs() < 1e-6);
    }

    #[test]
    fn mu_lower_simple_frozen_value() {
        let v = mu_lower_simple::<f64>(dim(4), std::f64::consts::FRAC_PI_6);
        assert!((v - 16.0).abs() < 1e-12);
        let v = mu_lower_simple::<f64>(dim(3), 0.9);
        assert!((v - 3.0 / 0.9f64.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn tilde_dominates_simple() {
        for n in 3..=8 {
            for i in 1..10 {
                let delta = HALF_PI * f64::from(i) / 10.0;
                let tilde = mu_lower_tilde::<f64>(dim(n), delta).unwrap();
                let simple = mu_lower_simple::<f64>(dim(n), delta);
                assert!(tilde > simple, "n={n} delta={delta}");
            }
        }
    }

    #[test]
    fn shooting_hemisphere_is_n() {
        for n in 3..=8 {
            let r = mu_shooting::<f64>(dim(n), HALF_PI, 1e-10).unwrap();
            assert!(
                (r.mu - f64::from(n)).abs() < 1e-6,
                "n={n}: mu = {}",
                r.mu
            );
            assert!(r.bracket.0 <= r.mu && r.mu <= r.bracket.1);
        }
    }

    #[test]
    fn shooting_exceeds_tilde_bound() {
        for n in 3..=6 {
            for &delta in &[0.4, 0.8, 1.2] {
                let mu = mu_shooting::<f64>(dim(n), delta, 1e-10).unwrap().mu;
                let tilde = mu_lower_tilde::<f64>(dim(n), delta).unwrap();
                assert!(mu > tilde, "n={n} delta={delta}: {mu} <= {tilde}");
            }
        }
    }

    #[test]
    fn fd_oracle_hemisphere() {
        let r = mu_oracle_fd::<f64>(dim(3), HALF_PI, 2000).unwrap();
        assert!((r.mu - 3.0).abs() < 5e-6, "mu = {}", r.mu);
    }

    #[test]
    fn fd_oracle_richardson_second_order() {
        let m1 = mu_oracle_fd::<f64>(dim(4), 0.9, 1000).unwrap().mu;
        let m2 = mu_oracle_fd::<f64>(dim(4), 0.9, 2000).unwrap().mu;
        let m4 = mu_oracle_fd::<f64>(dim(4), 0.9, 4000).unwrap().mu;
        let ratio = (m1 - m2) / (m2 - m4);
        assert!(
            ratio > 4.0 / 1.5 && ratio < 4.0 * 1.5,
            "Richardson ratio {ratio}"
        );
    }

    #[test]
    fn cross_method_agreement() {
        for &(n, delta) in &[(3u32, 1.0), (5, 0.6)] {
            let shoot = mu_shooting::<f64>(dim(n), delta, 1e-10).unwrap().mu;
            let fd = mu_oracle_fd::<f64>(dim(n), delta, 4000).unwrap().mu;
            assert!(
                ((shoot - fd) / shoot).abs() < 1e-6,
                "n={n} delta={delta}: shooting {shoot} vs fd {fd}"
            );
        }
    }

    #[test]
    fn angular_mode_below_radial() {
        for &(n, delta) in &[(3u32, 0.8), (4, 1.2), (5, HALF_PI)] {
            assert!(first_mode_is_angular::<f64>(dim(n), delta).unwrap());
        }
    }

    #[test]
    fn eigenfunction_satisfies_neumann() {
        let n = dim(3);
        let r = mu_shooting::<f64>(n, 1.0, 1e-12).unwrap();
        let u = eigenfunction(n, 1.0, r.mu).unwrap();
        assert!(u.deriv(1.0).abs() < 1e-8);
        assert!((u.value(1e-5) - 1e-5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(mu_shooting::<f64>(dim(3), 2.0, 1e-8).is_err());
        assert!(mu_shooting::<f64>(dim(3), 1.0, 1e-2).is_err());
        assert!(mu_oracle_fd::<f64>(dim(3), 1.0, 50).is_err());
        assert!(mu_lower_tilde::<f64>(dim(3), 0.0).is_err());
    }
}

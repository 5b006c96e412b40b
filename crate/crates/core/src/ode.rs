//! Fixed-step classical fourth-order integrator with dense output.
//!
//! The coefficients of every ODE in this crate are smooth away from the pole
//! and the series starts remove the singularity, so a deterministic one-step
//! method with a fixed grid is both accurate and reproducible. Dense values
//! between grid points come from cubic Hermite interpolation on the stored
//! (state, slope) pairs, whose O(h⁴) error matches the integrator's order.

use crate::real::Real;

pub(crate) struct Trajectory<R: Real, const N: usize> {
    pub r0: R,
    pub h: R,
    pub states: Vec<[R; N]>,
    pub slopes: Vec<[R; N]>,
}

impl<R: Real, const N: usize> Trajectory<R, N> {
    #[cfg(test)]
    pub fn last(&self) -> [R; N] {
        *self.states.last().expect("nonempty trajectory")
    }

    /// Cubic Hermite evaluation at r (clamped to the stored range).
    pub fn eval(&self, r: R) -> [R; N] {
        let m = self.states.len() - 1;
        let pos = (r - self.r0) / self.h;
        let k = pos
            .floor()
            .to_f64()
            .max(0.0)
            .min((m - 1) as f64) as usize;
        let t = ((r - self.r0) - self.h * R::of(k as f64)) / self.h;
        let t2 = t * t;
        let t3 = t2 * t;
        let three = R::of(3.0);
        let h00 = R::two() * t3 - three * t2 + R::one();
        let h10 = t3 - R::two() * t2 + t;
        let h01 = -R::two() * t3 + three * t2;
        let h11 = t3 - t2;
        let mut out = [R::zero(); N];
        for i in 0..N {
            out[i] = h00 * self.states[k][i]
                + h10 * self.h * self.slopes[k][i]
                + h01 * self.states[k + 1][i]
                + h11 * self.h * self.slopes[k + 1][i];
        }
        out
    }
}

/// Integrates y' = f(r, y) from r0 to r_end in `steps` equal steps,
/// recording the full trajectory.
pub(crate) fn integrate<R: Real, const N: usize, F>(
    f: F,
    r0: R,
    y0: [R; N],
    r_end: R,
    steps: usize,
) -> Trajectory<R, N>
where
    F: Fn(R, [R; N]) -> [R; N],
{
    let h = (r_end - r0) / R::of(steps as f64);
    let mut states = Vec::with_capacity(steps + 1);
    let mut slopes = Vec::with_capacity(steps + 1);
    let mut y = y0;
    let mut r = r0;
    states.push(y);
    slopes.push(f(r, y));
    for step in 0..steps {
        y = rk4_step(&f, r, y, h);
        r = r0 + h * R::of((step + 1) as f64);
        states.push(y);
        slopes.push(f(r, y));
    }
    Trajectory {
        r0,
        h,
        states,
        slopes,
    }
}

#[inline]
pub(crate) fn rk4_step<R: Real, const N: usize, F>(f: &F, r: R, y: [R; N], h: R) -> [R; N]
where
    F: Fn(R, [R; N]) -> [R; N],
{
    let half = R::half();
    let sixth = R::of(1.0 / 6.0);
    let k1 = f(r, y);
    let k2 = f(r + half * h, axpy(y, half * h, k1));
    let k3 = f(r + half * h, axpy(y, half * h, k2));
    let k4 = f(r + h, axpy(y, h, k3));
    let mut out = y;
    for i in 0..N {
        out[i] = y[i] + sixth * h * (k1[i] + R::two() * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

#[inline]
fn axpy<R: Real, const N: usize>(y: [R; N], a: R, k: [R; N]) -> [R; N] {
    let mut out = y;
    for i in 0..N {
        out[i] = y[i] + a * k[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        // y'' = -y from (0, 1): y = cos r
        let traj = integrate(
            |_r: f64, y: [f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            2.0,
            2000,
        );
        let end = traj.last();
        assert!((end[0] - 2.0f64.cos()).abs() < 1e-12);
        assert!((end[1] + 2.0f64.sin()).abs() < 1e-12);
        // dense output
        let mid = traj.eval(1.234);
        assert!((mid[0] - 1.234f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn scalar_exponential() {
        let traj = integrate(|_r: f64, y: [f64; 1]| [y[0]], 0.0, [1.0], 1.0, 1000);
        assert!((traj.last()[0] - std::f64::consts::E).abs() < 1e-12);
    }
}

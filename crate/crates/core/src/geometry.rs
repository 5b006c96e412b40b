//! Scalar geometric quantities of the geodesic ball B(δ) in the round n-sphere.
//!
//! Everything here is a closed-form evaluation: the weight λ = cos r, the
//! boundary mean curvature (n−1)cot δ, the sine-power integrals entering the
//! Neumann eigenvalue bounds, and the two boundary coefficients that control
//! the sign of the boundary terms in the weighted rigidity estimate.

use crate::error::{Error, Result};
use crate::real::Real;
use serde::{Deserialize, Serialize};

/// Ambient dimension n of the sphere. Must satisfy n ≥ 2; threshold
/// computations additionally require n ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    /// Like [`Dimension::new`] but with the n ≥ 3 floor required by the
    /// threshold and certification operations.
    pub fn at_least_three(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("dimension must be >= 3, got {n}")));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_real<R: Real>(self) -> R {
        R::of(f64::from(self.0))
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Area of the unit m-sphere, ω_m = 2π^{(m+1)/2}/Γ((m+1)/2), computed by the
/// exact recurrence ω_m = 2π ω_{m−2}/(m−1) from ω_0 = 2, ω_1 = 2π. This keeps
/// integer and half-integer gamma values exact without a general Γ routine.
pub fn unit_sphere_area<R: Real>(m: u32) -> R {
    let two_pi = R::two() * R::pi();
    let (mut k, mut w) = if m % 2 == 0 {
        (0u32, R::two())
    } else {
        (1u32, two_pi)
    };
    while k < m {
        k += 2;
        w = w * two_pi / R::of(f64::from(k - 1));
    }
    w
}

/// The geodesic ball B(δ) ⊂ Sⁿ with δ < π/2, together with the derived
/// scalars used throughout: c = cos δ, s = sin δ, the boundary mean curvature
/// H(ḡ) = (n−1)c/s, the boundary area ω_{n−1} s^{n−1}, and the λ-weighted
/// volume ∫ λ dvol = ω_{n−1} sⁿ/n.
#[derive(Clone, Copy, Debug)]
pub struct BallGeometry<R: Real> {
    n: Dimension,
    delta: R,
    c: R,
    s: R,
    mean_curvature_bar: R,
    boundary_area: R,
    lambda_weighted_volume: R,
}

impl<R: Real> BallGeometry<R> {
    pub fn new(n: Dimension, delta: R) -> Result<Self> {
        let half_pi = R::pi() * R::half();
        if !(delta > R::zero() && delta < half_pi) {
            return Err(Error::Domain(format!(
                "ball radius must lie in (0, pi/2), got {delta}"
            )));
        }
        let c = delta.cos();
        let s = delta.sin();
        let nm1 = R::of(f64::from(n.get() - 1));
        let omega = unit_sphere_area::<R>(n.get() - 1);
        Ok(BallGeometry {
            n,
            delta,
            c,
            s,
            mean_curvature_bar: nm1 * c / s,
            boundary_area: omega * s.powi(n.get() as i32 - 1),
            lambda_weighted_volume: omega * s.powi(n.get() as i32) / n.as_real::<R>(),
        })
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn delta(&self) -> R {
        self.delta
    }

    pub fn c(&self) -> R {
        self.c
    }

    pub fn s(&self) -> R {
        self.s
    }

    pub fn mean_curvature_bar(&self) -> R {
        self.mean_curvature_bar
    }

    pub fn boundary_area(&self) -> R {
        self.boundary_area
    }

    pub fn lambda_weighted_volume(&self) -> R {
        self.lambda_weighted_volume
    }

    /// The weight λ(r) = cos r, for r in [0, δ].
    pub fn lambda_profile(&self, r: R) -> Result<R> {
        if !(r >= R::zero() && r <= self.delta) {
            return Err(Error::Domain(format!(
                "r = {r} outside [0, delta = {}]",
                self.delta
            )));
        }
        Ok(r.cos())
    }
}

/// ∫₀^δ sin^{n−1} t dt by the stable recurrence
/// I_k = (−sin^{k−1}δ cos δ + (k−1) I_{k−2})/k, I_0 = δ, I_1 = 1 − cos δ.
///
/// Admits δ = π/2 (the eigenvalue bounds are stated on (0, π/2]).
///
/// The recurrence loses a factor of roughly 1/sin²δ of relative accuracy
/// per step to cancellation, so away from π/2 the value is computed instead
/// from the all-positive series ∫₀^s u^k(1−u²)^{−1/2}du (u = sin t), whose
/// term ratio is sin²δ.
pub fn sin_power_integral<R: Real>(n: Dimension, delta: R) -> Result<R> {
    let half_pi = R::pi() * R::half();
    if !(delta > R::zero() && delta <= half_pi) {
        return Err(Error::Domain(format!(
            "sin_power_integral requires delta in (0, pi/2], got {delta}"
        )));
    }
    let c = delta.cos();
    let s = delta.sin();
    let target = n.get() - 1;
    if s < R::of(0.9) && target >= 2 {
        return Ok(sin_power_series(target, s));
    }
    let mut even = delta; // I_0
    let mut odd = R::one() - c; // I_1
    if target == 0 {
        return Ok(even);
    }
    if target == 1 {
        return Ok(odd);
    }
    let mut k = if target % 2 == 0 { 0u32 } else { 1u32 };
    while k < target {
        k += 2;
        let prev = if target % 2 == 0 { even } else { odd };
        let next = (-s.powi(k as i32 - 1) * c + R::of(f64::from(k - 1)) * prev) / R::of(f64::from(k));
        if target % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
    }
    Ok(if target % 2 == 0 { even } else { odd })
}

/// Σ_j binom(2j, j)/4^j · s^{k+2j+1}/(k+2j+1); every term is positive, so
/// no cancellation occurs for any k.
fn sin_power_series<R: Real>(k: u32, s: R) -> R {
    let s2 = s * s;
    let mut coeff = R::one();
    let mut pow = s.powi(k as i32 + 1);
    let mut acc = R::zero();
    for j in 0..10_000u32 {
        if j > 0 {
            let jf = R::of(f64::from(j));
            coeff = coeff * (R::two() * jf - R::one()) / (R::two() * jf);
            pow = pow * s2;
        }
        let term = coeff * pow / R::of(f64::from(k + 2 * j + 1));
        acc = acc + term;
        if term <= acc * R::epsilon() {
            break;
        }
    }
    acc
}

/// The two boundary coefficients evaluated at Σ = ∂B(δ):
/// the h(ν̄,ν̄)² coefficient A = H(ḡ)λ/4 + ∂_ν̄λ = ((n+3)c² − 4)/(4s) and the
/// |X|² coefficient B = n H(ḡ)λ/(2(n−1)) + ∂_ν̄λ/2 = ((n+1)c² − 1)/(2s).
pub fn boundary_coefficients<R: Real>(g: &BallGeometry<R>) -> (R, R) {
    let n = g.n().as_real::<R>();
    let c = g.c();
    let s = g.s();
    let c2 = c * c;
    let four = R::of(4.0);
    let a = ((n + R::of(3.0)) * c2 - four) / (four * s);
    let b = ((n + R::one()) * c2 - R::one()) / (R::two() * s);
    (a, b)
}

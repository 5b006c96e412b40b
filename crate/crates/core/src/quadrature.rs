//! Composite Gauss–Legendre quadrature on [0, δ].
//!
//! Sixteen nodes per panel; a rule with m total nodes uses ⌈m/16⌉ equal
//! panels. Panels never place a node at an endpoint, so integrands carrying
//! cot r factors (always paired with the sin^{n−1} r volume weight) are
//! evaluated only where they are finite.

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::real::Real;

pub const NODES_PER_PANEL: usize = 16;

#[derive(Clone, Debug)]
pub struct QuadratureRule<R: Real> {
    a: R,
    b: R,
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> QuadratureRule<R> {
    /// Builds a composite rule with at least `m` nodes on [a, b].
    pub fn new(m: usize, a: R, b: R) -> Result<Self> {
        if !(b > a) {
            return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
        }
        let panels = m.div_ceil(NODES_PER_PANEL).max(1);
        let (gx, gw) = gauss_legendre_unit::<R>(NODES_PER_PANEL);
        let width = (b - a) / R::of(panels as f64);
        let mut nodes = Vec::with_capacity(panels * NODES_PER_PANEL);
        let mut weights = Vec::with_capacity(panels * NODES_PER_PANEL);
        for p in 0..panels {
            let left = a + width * R::of(p as f64);
            let mid = left + width * R::half();
            let scale = width * R::half();
            for i in 0..NODES_PER_PANEL {
                nodes.push(mid + scale * gx[i]);
                weights.push(scale * gw[i]);
            }
        }
        Ok(QuadratureRule {
            a,
            b,
            nodes,
            weights,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn bounds(&self) -> (R, R) {
        (self.a, self.b)
    }

    /// ∫_a^b f(r) dr.
    pub fn integrate<F: Fn(R) -> R>(&self, f: F) -> R {
        let mut acc = R::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(x);
        }
        acc
    }

    /// ∫_a^b f(r) sin^{n−1} r dr, the radial form of a volume integral
    /// (without the ω_{n−1} factor).
    pub fn integrate_weighted<F: Fn(R) -> R>(&self, n: Dimension, f: F) -> R {
        let p = n.get() as i32 - 1;
        self.integrate(|r| f(r) * r.sin().powi(p))
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre_unit<R: Real>(k: usize) -> (Vec<R>, Vec<R>) {
    let mut xs = vec![R::zero(); k];
    let mut ws = vec![R::zero(); k];
    let kf = R::of(k as f64);
    for i in 0..k.div_ceil(2) {
        // Tricomi initial guess
        let mut x = R::of((std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos());
        for _ in 0..100 {
            let (p, d) = legendre_and_deriv(k, x, kf);
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= R::epsilon() * (R::one() + x.abs()) {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(k, x, kf);
        let w = R::two() / ((R::one() - x * x) * dp * dp);
        xs[i] = -x;
        xs[k - 1 - i] = x;
        ws[i] = w;
        ws[k - 1 - i] = w;
    }
    (xs, ws)
}

fn legendre_and_deriv<R: Real>(k: usize, x: R, kf: R) -> (R, R) {
    let mut p0 = R::one();
    let mut p1 = x;
    for j in 2..=k {
        let jf = R::of(j as f64);
        let p2 = ((R::two() * jf - R::one()) * x * p1 - (jf - R::one()) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // derivative via (1-x^2) P_k' = k (P_{k-1} - x P_k)
    let d = kf * (p0 - x * p1) / (R::one() - x * x);
    (p1, d)
}

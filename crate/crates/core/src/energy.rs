//! The per-edge energy `v`: a strictly concave function of the two center
//! angles of an apex triangle with fixed apex angle.
//!
//! `v` is the potential of the 1-form `w = ln tanh(r1/2) dφ2 + ln tanh(r2/2)
//! dφ1` on the open triangle `T = {φ1 > 0, φ2 > 0, φ1 + φ2 < π − θ}`, with
//! `r1, r2` the hyperbolic radii realizing the angles. It extends
//! continuously to the closure of `T` and vanishes at the origin; summing it
//! over all edges yields the global energy whose unique maximizer is the
//! solved circle pattern.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::lobachevsky::lobachevsky;
use crate::triangle::{hyperbolic_radii_from_angles, Degeneracy};

/// A point of the closed parameter triangle of one edge: two center angles
/// plus the fixed apex angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDomainPoint {
    pub phi1: f64,
    pub phi2: f64,
    /// Apex angle θ ∈ (0, π); the domain triangle is `φ1, φ2 > 0`,
    /// `φ1 + φ2 < π − θ`.
    pub theta: f64,
}

impl EnergyDomainPoint {
    /// A point of the **closure** of the domain triangle.
    pub fn new(phi1: f64, phi2: f64, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::InvalidInput(format!(
                "apex angle must lie in (0, π), got {theta}"
            )));
        }
        if phi1 < 0.0 || phi2 < 0.0 || phi1 + phi2 > PI - theta {
            return Err(Error::InvalidInput(format!(
                "({phi1}, {phi2}) lies outside the closed domain triangle for θ = {theta}"
            )));
        }
        Ok(EnergyDomainPoint { phi1, phi2, theta })
    }

    /// True when the point lies strictly inside the domain triangle.
    pub fn is_interior(&self) -> bool {
        self.phi1 > 0.0 && self.phi2 > 0.0 && self.phi1 + self.phi2 < PI - self.theta
    }

    fn boundary_kind(&self) -> Degeneracy {
        if self.phi1 <= 0.0 || self.phi2 <= 0.0 {
            Degeneracy::InfiniteRadius
        } else {
            Degeneracy::EuclideanLimit
        }
    }
}

/// Closed form of the edge energy:
/// `v = Λ((π−θ−φ1−φ2)/2) + Λ((π−θ+φ1+φ2)/2) + Λ((π−θ+φ1−φ2)/2)
///    + Λ((π−θ−φ1+φ2)/2) − 4Λ((π−θ)/2)`.
///
/// Defined on the closed domain triangle; `v(0,0) = 0` exactly, and `v` is
/// symmetric in `(phi1, phi2)`.
pub fn v_energy(p: &EnergyDomainPoint) -> f64 {
    let base = PI - p.theta;
    lobachevsky(0.5 * (base - p.phi1 - p.phi2))
        + lobachevsky(0.5 * (base + p.phi1 + p.phi2))
        + lobachevsky(0.5 * (base + p.phi1 - p.phi2))
        + lobachevsky(0.5 * (base - p.phi1 + p.phi2))
        - 4.0 * lobachevsky(0.5 * base)
}

/// Gradient of [`v_energy`] at an interior point:
/// `∂v/∂φ1 = ln tanh(r2/2)` and `∂v/∂φ2 = ln tanh(r1/2)`, where `(r1, r2)`
/// are the hyperbolic radii realizing the angles. Both components are
/// strictly negative on the interior.
///
/// Boundary points carry no finite gradient; they are reported as the
/// corresponding [`Degeneracy`] instead of a silent number.
pub fn v_gradient(p: &EnergyDomainPoint) -> Result<(f64, f64)> {
    if !p.is_interior() {
        return Err(Error::Degenerate(p.boundary_kind()));
    }
    let a = 0.5 * (PI - p.theta - p.phi1 - p.phi2);
    let b = a + p.theta;
    let c = 0.5 * (PI - p.theta - p.phi1 + p.phi2);
    let d = c + p.theta;
    let (la, lb, lc, ld) = (a.sin().ln(), b.sin().ln(), c.sin().ln(), d.sin().ln());
    // ln tanh(r2/2) and ln tanh(r1/2) in half-angle-sine form.
    Ok((0.5 * (la + lc - lb - ld), 0.5 * (la + ld - lb - lc)))
}

/// Hessian of [`v_energy`] at an interior point:
/// `−1/(sinh r1 sinh r2 sin θ) · [[cosh l, 1], [1, cosh l]]`,
/// symmetric and negative definite (eigenvalues `−(cosh l ± 1)/s`).
///
/// The diagonal is evaluated as `−(coth r1 coth r2 − cos θ)/sin θ`, which
/// stays finite even where `sinh r1 sinh r2` alone would overflow.
pub fn v_hessian(p: &EnergyDomainPoint) -> Result<Matrix2<f64>> {
    if !p.is_interior() {
        return Err(Error::Degenerate(p.boundary_kind()));
    }
    let (r1, r2) = hyperbolic_radii_from_angles(p.phi1, p.phi2, p.theta)?;
    let sin_t = p.theta.sin();
    // cosh l / (sinh r1 sinh r2) = coth r1 coth r2 − cos θ by the cosine law.
    let diag = -(1.0 / (r1.tanh() * r2.tanh()) - p.theta.cos()) / sin_t;
    let off = -1.0 / (r1.sinh() * r2.sinh() * sin_t);
    Ok(Matrix2::new(diag, off, off, diag))
}

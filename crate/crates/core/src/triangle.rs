//! Euclidean and hyperbolic primitives for the apex triangle: two circle
//! centers joined to an intersection point of their circles.
//!
//! The triangle has vertices `P` (the intersection point), `O1` and `O2`
//! (the centers). Side `r1` runs `P`–`O1`, side `r2` runs `P`–`O2`, and side
//! `l` runs `O1`–`O2`. `theta` is the angle at `P` between the two radius
//! sides; `phi1` is the angle opposite `r1` (located at `O2`) and `phi2` the
//! angle opposite `r2` (located at `O1`). Angles are radians.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix3;

use crate::error::{Error, Result};

/// Ways an inverse triangle computation can leave the space of positive
/// finite radii. Reported as explicit values — never NaN — so that line
/// searches and boundary analyses can branch on the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// A computed radius underflowed to zero.
    ZeroRadius,
    /// A radius grows beyond every bound (an angle reached 0 from inside).
    InfiniteRadius,
    /// The angle sum reached π: the hyperbolic triangle flattens to a
    /// Euclidean one and the radii shrink to zero in the limit.
    EuclideanLimit,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::ZeroRadius => write!(f, "radius collapses to zero"),
            Degeneracy::InfiniteRadius => write!(f, "radius grows without bound"),
            Degeneracy::EuclideanLimit => {
                write!(f, "angle sum reaches π (flat limit, radii tend to zero)")
            }
        }
    }
}

/// A solved apex triangle: both radii, the apex angle, the center distance
/// `l`, and the two angles at the centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApexTriangle {
    pub r1: f64,
    pub r2: f64,
    /// Apex angle at the intersection point, in (0, π).
    pub theta: f64,
    /// Distance between the two centers.
    pub l: f64,
    /// Angle opposite `r1`, at the center `O2`.
    pub phi1: f64,
    /// Angle opposite `r2`, at the center `O1`.
    pub phi2: f64,
}

fn assert_apex_domain(r1: f64, r2: f64, theta: f64) {
    assert!(
        r1 > 0.0 && r2 > 0.0,
        "apex triangle radii must be positive (got {r1}, {r2})"
    );
    assert!(
        theta > 0.0 && theta < PI,
        "apex angle must lie strictly inside (0, π) (got {theta})"
    );
}

/// Solve the Euclidean apex triangle from two radii and the apex angle.
///
/// `l` comes from the planar cosine law in its half-angle form
/// `l² = (r1−r2)² + 4 r1 r2 sin²(θ/2)`, which avoids cancellation for
/// `r1 ≈ r2`; the angles come from `atan2` forms of the projection of each
/// center onto the axis, so obtuse angles need no case split.
pub fn euclidean_apex(r1: f64, r2: f64, theta: f64) -> ApexTriangle {
    assert_apex_domain(r1, r2, theta);
    let (sin_t, cos_t) = theta.sin_cos();
    let l = f64::hypot(r1 - r2, 2.0 * (r1 * r2).sqrt() * (0.5 * theta).sin());
    let phi1 = f64::atan2(r1 * sin_t, r2 - r1 * cos_t);
    let phi2 = f64::atan2(r2 * sin_t, r1 - r2 * cos_t);
    ApexTriangle {
        r1,
        r2,
        theta,
        l,
        phi1,
        phi2,
    }
}

/// Solve the hyperbolic apex triangle from two radii and the apex angle.
///
/// The naive cosine-law route (`cosh l`, then angles from `acos`) overflows
/// near `r ≈ 350` and loses all precision for small radii. Both formulas
/// here are exponentially scaled and uniformly stable:
///
/// * `sinh²(l/2) = sin²(θ/2) sinh²((r1+r2)/2) + cos²(θ/2) sinh²((r1−r2)/2)`
///   evaluated as a `hypot`, so nothing is squared before the final `asinh`;
/// * the angle at `O1` satisfies
///   `phi2 = atan2(tanh r2 · sin θ / cosh r1, tanh r1 − cos θ tanh r2)`,
///   obtained from the sine and cosine laws after dividing the common
///   positive factor `cosh r1 cosh r2 / sinh l` out of both components.
///
/// Every intermediate stays finite for radii up to ≈ 708, comfortably past
/// the guaranteed `r ≤ 700` range.
pub fn hyperbolic_apex(r1: f64, r2: f64, theta: f64) -> ApexTriangle {
    assert_apex_domain(r1, r2, theta);
    let (sin_t, cos_t) = theta.sin_cos();
    let (sin_h, cos_h) = (0.5 * theta).sin_cos();
    let l = 2.0
        * f64::asinh(f64::hypot(
            sin_h * (0.5 * (r1 + r2)).sinh(),
            cos_h * (0.5 * (r1 - r2)).sinh(),
        ));
    let (t1, t2) = (r1.tanh(), r2.tanh());
    let phi1 = f64::atan2(t1 * sin_t / r2.cosh(), t2 - cos_t * t1);
    let phi2 = f64::atan2(t2 * sin_t / r1.cosh(), t1 - cos_t * t2);
    ApexTriangle {
        r1,
        r2,
        theta,
        l,
        phi1,
        phi2,
    }
}

/// `ln tanh(r/2)` without saturation for large `r`.
///
/// Direct evaluation of `tanh(r/2)` rounds to 1.0 beyond `r ≈ 38`; the form
/// `ln(1−e^{−r}) − ln(1+e^{−r})` keeps full relative accuracy everywhere.
pub(crate) fn log_tanh_half(r: f64) -> f64 {
    debug_assert!(r > 0.0);
    let e = (-r).exp();
    (-e).ln_1p() - e.ln_1p()
}

/// Inverse of [`log_tanh_half`]: recover `r` from `u = ln tanh(r/2)`.
///
/// `r = ln(1+e^u) − ln(1−e^u)`, evaluated with `ln_1p`/`exp_m1` so both the
/// small-radius (`u → −∞`, `r ≈ 2e^u`) and large-radius (`u → 0⁻`,
/// `r ≈ ln(2/(−u))`) ends stay accurate.
pub(crate) fn radius_from_log_tanh_half(u: f64) -> Result<f64> {
    if u >= 0.0 {
        return Err(Error::Degenerate(Degeneracy::InfiniteRadius));
    }
    let r = u.exp().ln_1p() - (-f64::exp_m1(u)).ln();
    if r <= 0.0 {
        return Err(Error::Degenerate(Degeneracy::ZeroRadius));
    }
    Ok(r)
}

/// Recover the hyperbolic radii from the two center angles and the apex
/// angle — the inverse of [`hyperbolic_apex`] for fixed `theta`.
///
/// With the half-angle combinations
/// `a = (π−θ−φ1−φ2)/2`, `b = a+θ`, `c = (π−θ−φ1+φ2)/2`, `d = c+θ`,
/// the radii satisfy
/// `tanh²(r1/2) = sin a sin d / (sin b sin c)` and
/// `tanh²(r2/2) = sin a sin c / (sin b sin d)`.
/// We work with the logarithms of the sines so that radii near 0 and ∞ are
/// resolved without forming ratios close to 1.
///
/// Boundary behavior (reported, never NaN):
/// * `phi1 ≤ 0` or `phi2 ≤ 0` → [`Degeneracy::InfiniteRadius`] (the radius
///   opposite the other angle diverges);
/// * `phi1 + phi2 ≥ π − theta` → [`Degeneracy::EuclideanLimit`];
/// * a radius too small for the floating range → [`Degeneracy::ZeroRadius`].
pub fn hyperbolic_radii_from_angles(phi1: f64, phi2: f64, theta: f64) -> Result<(f64, f64)> {
    assert!(
        theta > 0.0 && theta < PI,
        "apex angle must lie strictly inside (0, π) (got {theta})"
    );
    if phi1 <= 0.0 || phi2 <= 0.0 {
        return Err(Error::Degenerate(Degeneracy::InfiniteRadius));
    }
    let a = 0.5 * (PI - theta - phi1 - phi2);
    if a <= 0.0 {
        return Err(Error::Degenerate(Degeneracy::EuclideanLimit));
    }
    let b = a + theta;
    let c = 0.5 * (PI - theta - phi1 + phi2);
    let d = c + theta;
    // Interior inputs put all four auxiliary angles in (0, π).
    let (la, lb, lc, ld) = (a.sin().ln(), b.sin().ln(), c.sin().ln(), d.sin().ln());
    let u1 = 0.5 * (la + ld - lb - lc);
    let u2 = 0.5 * (la + lc - lb - ld);
    let r1 = radius_from_log_tanh_half(u1)?;
    let r2 = radius_from_log_tanh_half(u2)?;
    Ok((r1, r2))
}

/// Derivative of the side lengths of a hyperbolic triangle with respect to
/// its angles, `∂(l1,l2,l3)/∂(θ1,θ2,θ3)`, where `θi` is opposite `li`.
///
/// The matrix factors as
/// `−(1/S) · diag(sinh l1, sinh l2, sinh l3) · G` with
/// `G = [[1, cosh l3, cosh l2], [cosh l3, 1, cosh l1], [cosh l2, cosh l1, 1]]`
/// and `S = sinh li sinh lj sin θk` (any permutation — the sine law makes the
/// product invariant). All entries are negative: enlarging any angle shrinks
/// the triangle.
///
/// The six inputs must describe one consistent triangle; each angle is
/// checked against the cosine law of its opposite side to 1e-8.
pub fn derivative_cosine_law(
    l1: f64,
    l2: f64,
    l3: f64,
    th1: f64,
    th2: f64,
    th3: f64,
) -> Result<Matrix3<f64>> {
    let l = [l1, l2, l3];
    let th = [th1, th2, th3];
    for i in 0..3 {
        if !(l[i].is_finite() && l[i] > 0.0) {
            return Err(Error::InvalidInput(format!(
                "triangle side l{} must be positive (got {})",
                i + 1,
                l[i]
            )));
        }
        if !(th[i] > 0.0 && th[i] < PI) {
            return Err(Error::InvalidInput(format!(
                "triangle angle θ{} must lie in (0, π) (got {})",
                i + 1,
                th[i]
            )));
        }
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let implied = (l[j].cosh() * l[k].cosh() - l[i].cosh()) / (l[j].sinh() * l[k].sinh());
        if (implied - th[i].cos()).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "sides and angles violate the cosine law at θ{}: cos θ = {}, implied {}",
                i + 1,
                th[i].cos(),
                implied
            )));
        }
    }
    let s = l2.sinh() * l3.sinh() * th1.sin();
    let (ch1, ch2, ch3) = (l1.cosh(), l2.cosh(), l3.cosh());
    let g = Matrix3::new(1.0, ch3, ch2, ch3, 1.0, ch1, ch2, ch1, 1.0);
    let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(l1.sinh(), l2.sinh(), l3.sinh()));
    Ok(d * g * (-1.0 / s))
}

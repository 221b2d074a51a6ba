//! Pattern solvers: a monotone per-face sweep and a damped Newton method.
//!
//! Both routes search radii making every face's cone angle meet its target.
//! The sweep exploits that a face's cone angle decreases strictly in its own
//! radius, so each face update is a bracketed one-dimensional root-find; the
//! Newton route works in logarithmic coordinates where the cone Jacobian is
//! symmetric and (in the hyperbolic case) negative definite. A solution is
//! certified independently through the edge energy: its angle structure must
//! maximize the concave total energy, which reduces to a per-face constancy
//! condition on `ln tanh(r/2)` recomputed from the angles alone.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::energy::{v_energy, EnergyDomainPoint};
use crate::error::{Error, Result};
use crate::feasibility::{self, FeasibilityStatus};
use crate::problem::{
    AngleStructure, DenseProblem, Geometry, PatternProblem, RadiusAssignment, MAX_HYPERBOLIC_RADIUS,
};
use crate::triangle::{hyperbolic_radii_from_angles, log_tanh_half, radius_from_log_tanh_half};

/// Default residual tolerance in cone-angle radians (∞-norm).
pub const DEFAULT_TOL: f64 = 1e-10;
/// Feasibility margin required before a solve is attempted.
pub const PRECHECK_TOL: f64 = 1e-9;
/// Hard bracket floor for any radius.
const MIN_RADIUS: f64 = 1e-12;
/// Euclidean radii are capped only to keep arithmetic finite.
const MAX_EUCLIDEAN_RADIUS: f64 = 1e200;
/// Iteration cap for one face's one-dimensional root-find.
const FACE_SOLVE_STEPS: usize = 200;
/// Newton halvings before giving up on a step.
const MAX_BACKTRACKS: usize = 30;
/// Tolerance used for the built-in stationarity certificate.
const KKT_TOL: f64 = 1e-8;
/// Angle-structure invariant tolerance used by the certificate.
const STRUCTURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Gauss–Seidel sweeps of one-dimensional face updates.
    Iterative,
    /// Damped Newton in logarithmic radius coordinates.
    Newton,
    /// Newton with automatic fallback to the sweeps (the default).
    Auto,
}

/// Normalization pinning down the Euclidean scale freedom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EuclideanGauge {
    /// Radii sum to one.
    SumToOne,
    /// The named face keeps radius one.
    FixFace(String),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub method: SolveMethod,
    /// Residual tolerance in cone-angle radians.
    pub tol: f64,
    pub max_sweeps: usize,
    pub max_newton_steps: usize,
    pub euclidean_gauge: EuclideanGauge,
    /// Starting point; geometry defaults are used when absent.
    pub initial_radii: Option<RadiusAssignment>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: SolveMethod::Auto,
            tol: DEFAULT_TOL,
            max_sweeps: 20_000,
            max_newton_steps: 200,
            euclidean_gauge: EuclideanGauge::SumToOne,
            initial_radii: None,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "solve tolerance is {}; must be positive",
                self.tol
            )));
        }
        if self.max_sweeps == 0 || self.max_newton_steps == 0 {
            return Err(Error::InvalidInput(
                "iteration caps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub radii: RadiusAssignment,
    /// Per-side angles, exactly `forward_map(radii)`.
    pub angles: AngleStructure,
    /// Distance between the two circle centers across each edge.
    pub edge_lengths: BTreeMap<String, f64>,
    /// `max_f |cone(f) − Φ(f)|` at the returned radii.
    pub residual: f64,
    /// Sweeps or Newton steps taken (combined on fallback).
    pub iterations: usize,
    /// Total edge energy of the solution angles.
    pub energy: f64,
    /// Stationarity certificate; absent for Euclidean runs, where the
    /// energy principle as implemented does not apply.
    pub kkt_ok: Option<bool>,
    /// Set when the Newton route had to fall back to the sweeps.
    pub warning: Option<String>,
}

/// `ln sinh x` without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x < 0.5 {
        x.sinh().ln()
    } else {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `ln cosh x` without overflow.
fn ln_cosh(x: f64) -> f64 {
    if x < 0.5 {
        x.cosh().ln()
    } else {
        x - std::f64::consts::LN_2 + (-2.0 * x).exp().ln_1p()
    }
}

/// Coupling coefficients of one edge: the derivatives of the side angle at
/// `a` with respect to the logarithmic coordinates are `−kd` (own) and
/// `+k` (neighbor), and symmetrically at `b`.
fn edge_coupling(geometry: Geometry, ra: f64, rb: f64, theta: f64, l: f64) -> (f64, f64) {
    match geometry {
        Geometry::Euclidean => {
            let k = theta.sin() * (ra.ln() + rb.ln() - 2.0 * l.ln()).exp();
            (k, k)
        }
        Geometry::Hyperbolic => {
            let base = ln_sinh(ra) + ln_sinh(rb) - 2.0 * ln_sinh(l);
            let k = theta.sin() * base.exp();
            let kd = theta.sin() * (base + ln_cosh(l)).exp();
            (k, kd)
        }
    }
}

/// Cone angle of face `f` when its radius is replaced by `candidate` and
/// all other radii stay fixed.
fn cone_with(dense: &DenseProblem, r: &[f64], f: usize, candidate: f64) -> f64 {
    let mut total = 0.0;
    for &(ei, side) in &dense.idx.incidences[f] {
        let (a, b) = dense.idx.sides[ei];
        let ra = if a == f { candidate } else { r[a] };
        let rb = if b == f { candidate } else { r[b] };
        let t = match dense.geometry {
            Geometry::Euclidean => crate::triangle::euclidean_apex(ra, rb, dense.theta[ei]),
            Geometry::Hyperbolic => crate::triangle::hyperbolic_apex(ra, rb, dense.theta[ei]),
        };
        total += 2.0 * if side == 0 { t.phi2 } else { t.phi1 };
    }
    total
}

/// `d cone(f) / d r(f)` at the candidate radius; strictly negative.
fn cone_slope(dense: &DenseProblem, r: &[f64], f: usize, candidate: f64) -> f64 {
    let du_dr = |radius: f64| match dense.geometry {
        Geometry::Euclidean => 1.0 / radius,
        Geometry::Hyperbolic => 1.0 / radius.sinh(),
    };
    let mut slope = 0.0;
    for &(ei, side) in &dense.idx.incidences[f] {
        let (a, b) = dense.idx.sides[ei];
        let ra = if a == f { candidate } else { r[a] };
        let rb = if b == f { candidate } else { r[b] };
        let t = match dense.geometry {
            Geometry::Euclidean => crate::triangle::euclidean_apex(ra, rb, dense.theta[ei]),
            Geometry::Hyperbolic => crate::triangle::hyperbolic_apex(ra, rb, dense.theta[ei]),
        };
        let (k, kd) = edge_coupling(dense.geometry, ra, rb, dense.theta[ei], t.l);
        let (own, other, r_own, r_other) = if side == 0 {
            (a, b, ra, rb)
        } else {
            (b, a, rb, ra)
        };
        debug_assert_eq!(own, f);
        let mut d = -kd * du_dr(r_own);
        if other == f {
            d += k * du_dr(r_other);
        }
        slope += 2.0 * d;
    }
    slope
}

fn max_radius(geometry: Geometry) -> f64 {
    match geometry {
        Geometry::Euclidean => MAX_EUCLIDEAN_RADIUS,
        Geometry::Hyperbolic => MAX_HYPERBOLIC_RADIUS,
    }
}

fn residual_vec(dense: &DenseProblem, r: &[f64]) -> Vec<f64> {
    let per_edge = dense.side_angles(r);
    let cones = dense.cones(&per_edge);
    dense
        .phi
        .iter()
        .zip(&cones)
        .map(|(phi, cone)| phi - cone)
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn apply_gauge(dense: &DenseProblem, gauge: &EuclideanGauge, r: &mut [f64]) -> Result<()> {
    let scale = match gauge {
        EuclideanGauge::SumToOne => r.iter().sum::<f64>(),
        EuclideanGauge::FixFace(id) => {
            let Some(&fi) = dense.idx.face_of.get(id) else {
                return Err(Error::InvalidInput(format!(
                    "gauge face `{id}` is not a face of the complex"
                )));
            };
            r[fi]
        }
    };
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Numerical(format!(
            "gauge normalization scale is {scale}"
        )));
    }
    for v in r.iter_mut() {
        *v /= scale;
    }
    Ok(())
}

fn precheck(problem: &PatternProblem) -> Result<()> {
    let report = feasibility::check(problem, PRECHECK_TOL)?;
    if report.status != FeasibilityStatus::Feasible {
        return Err(Error::Infeasible(format!(
            "prescription is {} (margin {:.3e}); solving requires strict feasibility",
            report.status.as_str(),
            report.margin
        )));
    }
    Ok(())
}

fn initial_vec(dense: &DenseProblem, opts: &SolveOptions) -> Result<Vec<f64>> {
    match &opts.initial_radii {
        Some(radii) => dense.radii_vec(radii),
        None => {
            let default = match dense.geometry {
                Geometry::Euclidean => 1.0 / dense.n_faces() as f64,
                Geometry::Hyperbolic => 1.0,
            };
            Ok(vec![default; dense.n_faces()])
        }
    }
}

/// Solve `cone(f)(x) = target` for this face's radius, all others fixed.
/// The cone decreases strictly in `x`, so a bisection bracket exists
/// whenever the target is attainable at the current neighbor radii. Far
/// from equilibrium it may not be; the update then clamps to the violated
/// radius bound and lets later sweeps move the neighbors back into range.
fn solve_face(dense: &DenseProblem, r: &[f64], f: usize, target: f64, ftol: f64) -> Result<f64> {
    let rmax = max_radius(dense.geometry);
    let mut x = r[f].clamp(MIN_RADIUS, rmax);
    let mut fx = cone_with(dense, r, f, x) - target;
    if fx.abs() <= ftol {
        return Ok(x);
    }
    // Grow a sign-changing bracket outward from the current radius.
    let mut lo;
    let mut hi;
    if fx > 0.0 {
        // Cone too large: the root lies at a larger radius.
        lo = x;
        hi = (x * 2.0).min(rmax);
        while cone_with(dense, r, f, hi) - target > 0.0 {
            if hi >= rmax {
                return Ok(rmax);
            }
            lo = hi;
            hi = (hi * 2.0).min(rmax);
        }
    } else {
        hi = x;
        lo = (x * 0.5).max(MIN_RADIUS);
        while cone_with(dense, r, f, lo) - target < 0.0 {
            if lo <= MIN_RADIUS {
                return Ok(MIN_RADIUS);
            }
            hi = lo;
            lo = (lo * 0.5).max(MIN_RADIUS);
        }
    }
    x = 0.5 * (lo + hi);
    for _ in 0..FACE_SOLVE_STEPS {
        fx = cone_with(dense, r, f, x) - target;
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // Newton step, safeguarded by the bracket.
        let slope = cone_slope(dense, r, f, x);
        let newton = x - fx / slope;
        x = if slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::Numerical(format!(
        "face `{}`: one-dimensional update did not meet tolerance {ftol}",
        dense.idx.face_ids[f]
    )))
}

fn build_report(
    problem: &PatternProblem,
    dense: &DenseProblem,
    r: &[f64],
    iterations: usize,
    warning: Option<String>,
) -> Result<SolveReport> {
    let radii = dense.radii_assignment(r);
    let fwd = problem.forward_map(&radii)?;
    let residual = problem
        .cone_targets()
        .iter()
        .map(|(id, phi)| (phi - fwd.cones[id]).abs())
        .fold(0.0_f64, f64::max);
    let energy = total_energy(problem, &fwd.angles)?;
    let mut report = SolveReport {
        radii,
        angles: fwd.angles,
        edge_lengths: fwd.lengths,
        residual,
        iterations,
        energy,
        kkt_ok: None,
        warning,
    };
    if problem.geometry() == Geometry::Hyperbolic {
        report.kkt_ok = Some(verify_kkt(problem, &report, KKT_TOL)?);
    }
    Ok(report)
}

fn iterative_core(
    problem: &PatternProblem,
    dense: &DenseProblem,
    mut r: Vec<f64>,
    opts: &SolveOptions,
    warning: Option<String>,
    iterations_so_far: usize,
) -> Result<SolveReport> {
    let ftol = 0.05 * opts.tol;
    if max_abs(&residual_vec(dense, &r)) <= opts.tol {
        return build_report(problem, dense, &r, iterations_so_far, warning);
    }
    for sweep in 1..=opts.max_sweeps {
        for f in 0..dense.n_faces() {
            r[f] = solve_face(dense, &r, f, dense.phi[f], ftol)?;
        }
        if dense.geometry == Geometry::Euclidean {
            apply_gauge(dense, &opts.euclidean_gauge, &mut r)?;
        }
        let residual = max_abs(&residual_vec(dense, &r));
        if residual <= opts.tol {
            return build_report(problem, dense, &r, iterations_so_far + sweep, warning);
        }
        if sweep == opts.max_sweeps {
            return Err(Error::NoConvergence {
                residual,
                iterations: iterations_so_far + sweep,
            });
        }
    }
    unreachable!("loop returns or errors at the cap")
}

/// Continuity-method solver: Gauss–Seidel sweeps of monotone face updates.
pub fn solve_iterative(problem: &PatternProblem, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    precheck(problem)?;
    let dense = problem.dense()?;
    let mut r = initial_vec(&dense, opts)?;
    if dense.geometry == Geometry::Euclidean {
        apply_gauge(&dense, &opts.euclidean_gauge, &mut r)?;
    }
    iterative_core(problem, &dense, r, opts, None, 0)
}

fn u_of(geometry: Geometry, r: f64) -> f64 {
    match geometry {
        Geometry::Euclidean => r.ln(),
        Geometry::Hyperbolic => log_tanh_half(r),
    }
}

fn r_of(geometry: Geometry, u: f64) -> Result<f64> {
    match geometry {
        Geometry::Euclidean => Ok(u.exp()),
        Geometry::Hyperbolic => radius_from_log_tanh_half(u),
    }
}

fn clamp_u(geometry: Geometry, u: f64) -> f64 {
    let lo = u_of(geometry, MIN_RADIUS);
    let hi = u_of(geometry, max_radius(geometry));
    u.clamp(lo, hi)
}

fn jacobian_dense(dense: &DenseProblem, r: &[f64]) -> DMatrix<f64> {
    let n = dense.n_faces();
    let mut j = DMatrix::zeros(n, n);
    let per_edge = dense.side_angles(r);
    for (ei, &(a, b)) in dense.idx.sides.iter().enumerate() {
        let l = per_edge[ei].2;
        let (k, kd) = edge_coupling(dense.geometry, r[a], r[b], dense.theta[ei], l);
        j[(a, a)] -= 2.0 * kd;
        j[(a, b)] += 2.0 * k;
        j[(b, b)] -= 2.0 * kd;
        j[(b, a)] += 2.0 * k;
    }
    j
}

/// Jacobian `∂cone/∂u` in logarithmic coordinates (`u = ln tanh(r/2)`
/// hyperbolic, `u = ln r` Euclidean), rows and columns in
/// [`PatternProblem::face_order`]. Symmetric; negative definite in the
/// hyperbolic case, and annihilating constant vectors in the Euclidean
/// case (scale invariance).
pub fn jacobian_cone_angles(
    problem: &PatternProblem,
    radii: &RadiusAssignment,
) -> Result<DMatrix<f64>> {
    let dense = problem.dense()?;
    let r = dense.radii_vec(radii)?;
    Ok(jacobian_dense(&dense, &r))
}

fn newton_step(dense: &DenseProblem, j: &DMatrix<f64>, rho: &[f64]) -> Option<DVector<f64>> {
    let n = dense.n_faces();
    match dense.geometry {
        Geometry::Hyperbolic => {
            let rhs = DVector::from_column_slice(rho);
            j.clone().lu().solve(&rhs)
        }
        Geometry::Euclidean => {
            // Scale freedom makes J singular on constants; the bordered
            // system solves in the complement, keeping Σ δu = 0.
            let mut m = DMatrix::zeros(n + 1, n + 1);
            m.view_mut((0, 0), (n, n)).copy_from(j);
            for i in 0..n {
                m[(i, n)] = 1.0;
                m[(n, i)] = 1.0;
            }
            let mut rhs = DVector::zeros(n + 1);
            for (i, &v) in rho.iter().enumerate() {
                rhs[i] = v;
            }
            m.lu().solve(&rhs).map(|sol| sol.rows(0, n).into_owned())
        }
    }
}

/// Newton solver in logarithmic radius coordinates with backtracking;
/// falls back to the sweep solver (flagging a warning) when a step cannot
/// be computed or fails to reduce the residual.
pub fn solve_newton(problem: &PatternProblem, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    precheck(problem)?;
    let dense = problem.dense()?;
    let mut r = initial_vec(&dense, opts)?;
    if dense.geometry == Geometry::Euclidean {
        apply_gauge(&dense, &opts.euclidean_gauge, &mut r)?;
    }
    let fallback = |r: Vec<f64>, steps: usize, reason: &str| {
        let warning = format!("newton: {reason}; finished with the sweep solver");
        iterative_core(problem, &dense, r, opts, Some(warning), steps)
    };
    let mut u: Vec<f64> = r.iter().map(|&x| u_of(dense.geometry, x)).collect();
    let mut residual = residual_vec(&dense, &r);
    let mut res_norm = max_abs(&residual);
    for step in 0..opts.max_newton_steps {
        if res_norm <= opts.tol {
            if dense.geometry == Geometry::Euclidean {
                apply_gauge(&dense, &opts.euclidean_gauge, &mut r)?;
            }
            return build_report(problem, &dense, &r, step, None);
        }
        let j = jacobian_dense(&dense, &r);
        let Some(delta) = newton_step(&dense, &j, &residual) else {
            return fallback(r, step, "jacobian solve failed");
        };
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_BACKTRACKS {
            let u_try: Vec<f64> = u
                .iter()
                .zip(delta.iter())
                .map(|(&ui, &di)| clamp_u(dense.geometry, ui + scale * di))
                .collect();
            let r_try = u_try
                .iter()
                .map(|&ui| r_of(dense.geometry, ui))
                .collect::<Result<Vec<f64>>>()?;
            let res_try = residual_vec(&dense, &r_try);
            let norm_try = max_abs(&res_try);
            if norm_try < res_norm {
                u = u_try;
                r = r_try;
                residual = res_try;
                res_norm = norm_try;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            return fallback(r, step, "backtracking stalled");
        }
    }
    if res_norm <= opts.tol {
        if dense.geometry == Geometry::Euclidean {
            apply_gauge(&dense, &opts.euclidean_gauge, &mut r)?;
        }
        return build_report(problem, &dense, &r, opts.max_newton_steps, None);
    }
    Err(Error::NoConvergence {
        residual: res_norm,
        iterations: opts.max_newton_steps,
    })
}

/// Dispatch on `opts.method`.
pub fn solve(problem: &PatternProblem, opts: &SolveOptions) -> Result<SolveReport> {
    match opts.method {
        SolveMethod::Iterative => solve_iterative(problem, opts),
        SolveMethod::Newton | SolveMethod::Auto => solve_newton(problem, opts),
    }
}

/// Total edge energy `ℰ = Σ_e v(φ(f,e), φ(f′,e); π − D(e))` of an angle
/// structure in the closure of the admissible polytope. Tiny numerical
/// overshoots of the closure (up to 1e-9) are snapped onto it.
pub fn total_energy(problem: &PatternProblem, angles: &AngleStructure) -> Result<f64> {
    let dense = problem.dense()?;
    let mut total = 0.0;
    for (ei, id) in dense.idx.edge_ids.iter().enumerate() {
        let (Some(a), Some(b)) = (angles.side(id, 0), angles.side(id, 1)) else {
            return Err(Error::InvalidInput(format!(
                "angle structure misses edge `{id}`"
            )));
        };
        let theta = dense.theta[ei];
        let cap = std::f64::consts::PI - theta;
        let (mut a, mut b) = (a.max(0.0), b.max(0.0));
        let excess = a + b - cap;
        if excess > 0.0 {
            if excess > STRUCTURE_TOL {
                return Err(Error::InvalidInput(format!(
                    "edge `{id}`: side angles exceed the closed domain by {excess}"
                )));
            }
            a = (a - 0.5 * excess).max(0.0);
            b = (cap - a).max(0.0);
            // Rounding can leave the projected sum an ulp above the cap;
            // shave until it genuinely fits the closure.
            while a + b > cap {
                if b >= a {
                    b = b.next_down();
                } else {
                    a = a.next_down();
                }
            }
        }
        total += v_energy(&EnergyDomainPoint::new(a, b, theta)?);
    }
    Ok(total)
}

/// Stationarity certificate for a hyperbolic solution: the angles must be
/// strictly admissible, and for each face the per-side values
/// `ln tanh(r(f,e)/2)` — with the radius recomputed from that edge's two
/// angles alone — must agree within `tol`, exhibiting the Lagrange
/// constant of the energy principle.
pub fn verify_kkt(problem: &PatternProblem, report: &SolveReport, tol: f64) -> Result<bool> {
    if problem.geometry() == Geometry::Euclidean {
        return Err(Error::Unsupported(
            "the stationarity certificate applies to hyperbolic patterns only".into(),
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance is {tol}; must be positive"
        )));
    }
    if !report.angles.is_admissible(problem, STRUCTURE_TOL)? {
        return Ok(false);
    }
    let dense = problem.dense()?;
    for f in 0..dense.n_faces() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(ei, side) in &dense.idx.incidences[f] {
            let id = &dense.idx.edge_ids[ei];
            let phi_self = report
                .angles
                .side(id, side)
                .expect("admissible covers all sides");
            let phi_other = report
                .angles
                .side(id, 1 - side)
                .expect("admissible covers all sides");
            let radius = match hyperbolic_radii_from_angles(phi_other, phi_self, dense.theta[ei]) {
                Ok((r_self, _)) => r_self,
                Err(Error::Degenerate(_)) => return Ok(false),
                Err(e) => return Err(e),
            };
            let u = log_tanh_half(radius);
            lo = lo.min(u);
            hi = hi.max(u);
        }
        if hi - lo > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

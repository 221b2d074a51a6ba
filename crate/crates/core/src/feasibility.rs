//! Feasibility of prescribed angle data.
//!
//! Everything revolves around the subset slack
//! `g(X) = Σ_{e ∈ E(X)} D(e) − Σ_{f ∈ X} Φ(f)/2`: a hyperbolic pattern
//! exists iff `g(X) > 0` for every nonempty face set `X`, and a Euclidean
//! pattern exists iff the total sums balance exactly and `g(X) > 0` for
//! every nonempty proper `X`. Small instances can be settled by exhaustive
//! enumeration; the scalable route phrases the same Hall-type condition as
//! max-flow saturation and extracts violating subsets from minimum cuts.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::problem::{AngleStructure, DenseProblem, PatternProblem};
use crate::simplex::{self, LinearProgram, LpOutcome};

/// Max-flow value within this of the supply counts as saturated.
const SATURATION_TOL: f64 = 1e-9;
/// Brute-force enumeration refuses above this face count.
const BRUTE_FORCE_LIMIT: usize = 20;
/// Bisection steps when estimating the margin of a feasible instance.
const MARGIN_BISECTIONS: usize = 30;
/// Smallest LP margin that counts as an interior angle structure.
const LP_MARGIN_TOL: f64 = 1e-9;

/// Outcome of a feasibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    /// Strictly realizable with margin above the tolerance.
    Feasible,
    /// No violated subset, but some slack is within the tolerance of zero;
    /// the solvers refuse such prescriptions.
    BoundaryFeasible,
    Infeasible,
}

impl FeasibilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FeasibilityStatus::Feasible => "feasible",
            FeasibilityStatus::BoundaryFeasible => "boundary",
            FeasibilityStatus::Infeasible => "infeasible",
        }
    }
}

/// A face subset with its slack `g(X)`.
///
/// For a Euclidean prescription whose total sums fail to balance, the
/// certificate carries the full face set with the negated absolute
/// equality residual, since no proper subset witnesses a sum mismatch.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetCertificate {
    pub faces: BTreeSet<String>,
    pub slack: f64,
}

/// Dual assignment certifying a violated subset: `y_f = 1` on the subset,
/// `y_e = −1` on its edge set, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub y_faces: BTreeMap<String, f64>,
    pub y_edges: BTreeMap<String, f64>,
    /// `Σ Φ(f)/2·y_f + Σ D(e)·y_e`; nonnegative exactly when the subset is
    /// violating.
    pub objective: f64,
}

impl DualCertificate {
    fn from_subset(problem: &PatternProblem, faces: &BTreeSet<String>, slack: f64) -> Result<Self> {
        let edges = problem.complex().edge_set(faces)?;
        let y_faces = problem
            .complex()
            .faces
            .iter()
            .map(|f| (f.id.clone(), if faces.contains(&f.id) { 1.0 } else { 0.0 }))
            .collect();
        let y_edges = problem
            .complex()
            .edges
            .iter()
            .map(|e| (e.id.clone(), if edges.contains(&e.id) { -1.0 } else { 0.0 }))
            .collect();
        // `0.0 - slack` rather than `-slack`: a tight subset (slack exactly
        // zero) should certify objective +0, not -0.
        Ok(DualCertificate {
            y_faces,
            y_edges,
            objective: 0.0 - slack,
        })
    }

    /// Check dual feasibility and sign: `y_e ≤ 0`, `y_f + y_e ≤ 0` on every
    /// incidence, the normalization row `Σ n_f y_f + 2 Σ y_e ≤ −1`, and a
    /// nonnegative objective.
    pub fn violations(&self, problem: &PatternProblem) -> Vec<String> {
        let mut out = Vec::new();
        for (id, &ye) in &self.y_edges {
            if ye > 0.0 {
                out.push(format!("y_e for edge `{id}` is positive"));
            }
        }
        for e in &problem.complex().edges {
            let ye = self.y_edges.get(&e.id).copied().unwrap_or(0.0);
            for face in [&e.side_a, &e.side_b] {
                let yf = self.y_faces.get(face).copied().unwrap_or(0.0);
                if yf + ye > 0.0 {
                    out.push(format!(
                        "y_f + y_e positive on incidence `{face}` < `{}`",
                        e.id
                    ));
                }
            }
        }
        let norm: f64 = problem
            .complex()
            .faces
            .iter()
            .map(|f| f.sides as f64 * self.y_faces.get(&f.id).copied().unwrap_or(0.0))
            .sum::<f64>()
            + 2.0 * self.y_edges.values().sum::<f64>();
        if norm > -1.0 {
            out.push(format!("normalization row is {norm}; must be ≤ −1"));
        }
        let objective: f64 = problem
            .cone_targets()
            .iter()
            .map(|(id, phi)| phi / 2.0 * self.y_faces.get(id).copied().unwrap_or(0.0))
            .sum::<f64>()
            + problem
                .intersection_angles()
                .iter()
                .map(|(id, d)| d * self.y_edges.get(id).copied().unwrap_or(0.0))
                .sum::<f64>();
        if objective < 0.0 {
            out.push(format!("objective is {objective}; a certificate needs ≥ 0"));
        }
        out
    }
}

/// Full outcome of [`check_euclidean`] / [`check_hyperbolic`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub status: FeasibilityStatus,
    /// Minimum subset slack (estimated from the tightest cut for clearly
    /// feasible instances, exact near the boundary); `+∞` when no subset is
    /// constrained at all.
    pub margin: f64,
    /// The tightest subset found, present unless the instance is clearly
    /// feasible.
    pub certificate: Option<SubsetCertificate>,
    /// Present for infeasible instances whose violating subset is proper.
    pub dual_certificate: Option<DualCertificate>,
}

/// An interior angle structure with the uniform margin it certifies.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxMarginStructure {
    pub angles: AngleStructure,
    /// Lower bound on every side angle and on half of every edge's pair
    /// slack `D(e) − φ(f,e) − φ(f′,e)`.
    pub margin: f64,
}

/// `g(X)` for an explicit face subset.
pub fn subset_slack(problem: &PatternProblem, faces: &BTreeSet<String>) -> Result<f64> {
    let dense = problem.dense()?;
    let mut members = vec![false; dense.n_faces()];
    for id in faces {
        let Some(&fi) = dense.idx.face_of.get(id) else {
            return Err(Error::InvalidInput(format!("unknown face id `{id}`")));
        };
        members[fi] = true;
    }
    Ok(slack_of(&dense, &members))
}

/// `g(X)` over dense membership flags; the single summation path shared by
/// every route so identical subsets always produce identical floats.
fn slack_of(dense: &DenseProblem, members: &[bool]) -> f64 {
    let mut g = 0.0;
    for (ei, &(a, b)) in dense.idx.sides.iter().enumerate() {
        if members[a] || members[b] {
            g += dense.d[ei];
        }
    }
    for (fi, phi) in dense.phi.iter().enumerate() {
        if members[fi] {
            g -= phi / 2.0;
        }
    }
    g
}

fn member_ids(dense: &DenseProblem, members: &[bool]) -> BTreeSet<String> {
    members
        .iter()
        .enumerate()
        .filter(|&(_, &m)| m)
        .map(|(fi, _)| dense.idx.face_ids[fi].clone())
        .collect()
}

/// Keep the candidate with the smaller slack, breaking exact ties by the
/// lexicographically smaller face-id set.
fn pick_better(
    best: &mut Option<(Vec<bool>, f64, BTreeSet<String>)>,
    dense: &DenseProblem,
    members: Vec<bool>,
    slack: f64,
) {
    let ids = member_ids(dense, &members);
    let replace = match best {
        None => true,
        Some((_, bs, bids)) => slack < *bs || (slack == *bs && ids < *bids),
    };
    if replace {
        *best = Some((members, slack, ids));
    }
}

/// Exhaustive minimization of `g(X)` over nonempty subsets (optionally
/// excluding `X = F`); refuses above 20 faces.
pub fn brute_force_min_slack(
    problem: &PatternProblem,
    include_full: bool,
) -> Result<SubsetCertificate> {
    let dense = problem.dense()?;
    let n = dense.n_faces();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard(format!(
            "brute-force enumeration over {n} faces exceeds the limit of {BRUTE_FORCE_LIMIT}"
        )));
    }
    if !include_full && n == 1 {
        return Err(Error::InvalidInput(
            "a single-face complex has no nonempty proper subsets".into(),
        ));
    }
    let full = (1u64 << n) - 1;
    let mut best: Option<(Vec<bool>, f64, BTreeSet<String>)> = None;
    for mask in 1..=full {
        if !include_full && mask == full {
            continue;
        }
        let members: Vec<bool> = (0..n).map(|fi| mask >> fi & 1 == 1).collect();
        let slack = slack_of(&dense, &members);
        pick_better(&mut best, &dense, members, slack);
    }
    let (_, slack, faces) = best.expect("at least one nonempty subset");
    Ok(SubsetCertificate { faces, slack })
}

/// One flow system: a face universe feeding edge demands. Restricting the
/// universe models the Euclidean proper-subset condition.
struct System<'a> {
    dense: &'a DenseProblem,
    universe: Vec<usize>,
}

impl<'a> System<'a> {
    fn whole(dense: &'a DenseProblem) -> Self {
        System {
            dense,
            universe: (0..dense.n_faces()).collect(),
        }
    }

    fn without(dense: &'a DenseProblem, omitted: usize) -> Self {
        System {
            dense,
            universe: (0..dense.n_faces()).filter(|&f| f != omitted).collect(),
        }
    }

    fn supply(&self) -> f64 {
        self.universe.iter().map(|&f| self.dense.phi[f] / 2.0).sum()
    }

    fn sink_total(&self) -> f64 {
        self.dense.d.iter().sum()
    }

    /// Max-flow with inflated supplies; returns saturation and the faces on
    /// the source side of a minimum cut. `forced`, when set, pins one face
    /// to the source side via an uncapped arc.
    fn run(&self, inflation: f64, forced: Option<usize>) -> (bool, Vec<bool>) {
        let n = self.dense.n_faces();
        let m = self.dense.n_edges();
        let (source, sink) = (0, 1);
        let face_node = |f: usize| 2 + f;
        let edge_node = |e: usize| 2 + n + e;
        let mut net = FlowNetwork::new(2 + n + m);
        let mut supply = 0.0;
        for &f in &self.universe {
            let cap = if forced == Some(f) {
                f64::INFINITY
            } else {
                (1.0 + inflation) * self.dense.phi[f] / 2.0
            };
            net.add_arc(source, face_node(f), cap);
            supply += (1.0 + inflation) * self.dense.phi[f] / 2.0;
            for &(e, _) in &self.dense.idx.incidences[f] {
                net.add_arc(face_node(f), edge_node(e), f64::INFINITY);
            }
        }
        for e in 0..m {
            net.add_arc(edge_node(e), sink, self.dense.d[e]);
        }
        let flow = net.max_flow(source, sink);
        let saturated = forced.is_none() && supply - flow <= SATURATION_TOL;
        let reach = net.residual_reachable(source);
        let mut members = vec![false; n];
        for &f in &self.universe {
            members[f] = reach[face_node(f)];
        }
        (saturated, members)
    }

    /// Minimize `g(X)` over nonempty `X` inside the universe: exact via
    /// forced-face minimum cuts near the boundary, cut-based estimate when
    /// the instance is comfortably feasible. `None` for an empty universe.
    fn min_slack(&self, tol: f64) -> Option<(Vec<bool>, f64, BTreeSet<String>)> {
        if self.universe.is_empty() {
            return None;
        }
        let min_phi: f64 = self
            .universe
            .iter()
            .map(|&f| self.dense.phi[f])
            .fold(f64::INFINITY, f64::min);
        // Saturation at this inflation certifies g(X) ≥ 1.5·tol for every
        // X, even after the flow tolerance is spent.
        let delta_cert = (3.0 * tol + 2.0 * SATURATION_TOL) / min_phi;
        let mut best: Option<(Vec<bool>, f64, BTreeSet<String>)> = None;
        let (certified, cut) = self.run(delta_cert, None);
        if certified {
            // Clearly feasible: estimate the margin by bisecting the
            // inflation to the tightest cut.
            let mut lo = delta_cert;
            let mut hi = (self.sink_total() + 1.0) / self.supply() - 1.0;
            let (sat_hi, cut_hi) = self.run(hi, None);
            debug_assert!(!sat_hi, "supply exceeding all demand cannot saturate");
            let slack = slack_of(self.dense, &cut_hi);
            pick_better(&mut best, self.dense, cut_hi, slack);
            for _ in 0..MARGIN_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                let (sat, cut) = self.run(mid, None);
                if sat {
                    lo = mid;
                } else {
                    let slack = slack_of(self.dense, &cut);
                    pick_better(&mut best, self.dense, cut, slack);
                    hi = mid;
                }
            }
            return best;
        }
        if cut.iter().any(|&m| m) {
            let slack = slack_of(self.dense, &cut);
            pick_better(&mut best, self.dense, cut, slack);
        }
        let (plain_saturated, plain_cut) = self.run(0.0, None);
        if !plain_saturated && plain_cut.iter().any(|&m| m) {
            // The zero-inflation cut minimizes g outright.
            let slack = slack_of(self.dense, &plain_cut);
            pick_better(&mut best, self.dense, plain_cut, slack);
            if best.as_ref().is_some_and(|(_, s, _)| *s < 0.0) {
                return best;
            }
        }
        // Near the boundary: one forced run per face makes the scan exact,
        // because every nonempty X contains some face.
        for &f in &self.universe {
            let (_, cut) = self.run(0.0, Some(f));
            let slack = slack_of(self.dense, &cut);
            pick_better(&mut best, self.dense, cut, slack);
        }
        best
    }
}

/// Saturation probe at a fixed inflation, exposed for diagnostics: the
/// returned set is a violating subset whenever saturation fails.
pub fn flow_feasible(problem: &PatternProblem, inflation: f64) -> Result<(bool, BTreeSet<String>)> {
    if !(inflation.is_finite() && inflation >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "inflation is {inflation}; must be a nonnegative real"
        )));
    }
    let dense = problem.dense()?;
    let (saturated, members) = System::whole(&dense).run(inflation, None);
    Ok((saturated, member_ids(&dense, &members)))
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance is {tol}; must be positive"
        )));
    }
    Ok(())
}

fn status_for(margin: f64, tol: f64) -> FeasibilityStatus {
    if margin > tol {
        FeasibilityStatus::Feasible
    } else if margin > 0.0 {
        FeasibilityStatus::BoundaryFeasible
    } else {
        FeasibilityStatus::Infeasible
    }
}

fn report_from_best(
    problem: &PatternProblem,
    dense: &DenseProblem,
    best: Option<(Vec<bool>, f64, BTreeSet<String>)>,
    tol: f64,
) -> Result<FeasibilityReport> {
    let Some((_, margin, faces)) = best else {
        return Ok(FeasibilityReport {
            status: FeasibilityStatus::Feasible,
            margin: f64::INFINITY,
            certificate: None,
            dual_certificate: None,
        });
    };
    let status = status_for(margin, tol);
    let certificate = (status != FeasibilityStatus::Feasible).then(|| SubsetCertificate {
        faces: faces.clone(),
        slack: margin,
    });
    let dual_certificate = if status == FeasibilityStatus::Infeasible
        && faces.len() < dense.n_faces()
        && margin <= 0.0
    {
        Some(DualCertificate::from_subset(problem, &faces, margin)?)
    } else {
        None
    };
    Ok(FeasibilityReport {
        status,
        margin,
        certificate,
        dual_certificate,
    })
}

/// Decide the hyperbolic condition: `g(X) > 0` for every nonempty `X ⊆ F`.
pub fn check_hyperbolic(problem: &PatternProblem, tol: f64) -> Result<FeasibilityReport> {
    check_tolerance(tol)?;
    let dense = problem.dense()?;
    let best = System::whole(&dense).min_slack(tol);
    report_from_best(problem, &dense, best, tol)
}

/// The Euclidean global balance gate: a report if `ΣΦ/2 = ΣD` fails within
/// `tol`, `None` when the subset scan should proceed.
fn euclidean_balance_gate(
    problem: &PatternProblem,
    dense: &DenseProblem,
    tol: f64,
) -> Option<FeasibilityReport> {
    let residual = problem.total_cone() / 2.0 - problem.total_intersection();
    if residual.abs() <= tol {
        return None;
    }
    let faces: BTreeSet<String> = dense.idx.face_ids.iter().cloned().collect();
    // Oversupplied cone targets make X = F genuinely violating; an
    // undersupply has no violating subset, so the certificate carries
    // the negated equality residual instead.
    let slack = -residual.abs();
    Some(FeasibilityReport {
        status: FeasibilityStatus::Infeasible,
        margin: slack,
        certificate: Some(SubsetCertificate { faces, slack }),
        dual_certificate: None,
    })
}

/// Decide the Euclidean conditions: `ΣΦ/2 = ΣD` within `tol`, and
/// `g(X) > 0` for every nonempty proper `X ⊂ F`.
pub fn check_euclidean(problem: &PatternProblem, tol: f64) -> Result<FeasibilityReport> {
    check_tolerance(tol)?;
    let dense = problem.dense()?;
    if let Some(report) = euclidean_balance_gate(problem, &dense, tol) {
        return Ok(report);
    }
    let mut best: Option<(Vec<bool>, f64, BTreeSet<String>)> = None;
    for omitted in 0..dense.n_faces() {
        if let Some((members, slack, _)) = System::without(&dense, omitted).min_slack(tol) {
            pick_better(&mut best, &dense, members, slack);
        }
    }
    report_from_best(problem, &dense, best, tol)
}

/// Dispatch on the problem's geometry.
pub fn check(problem: &PatternProblem, tol: f64) -> Result<FeasibilityReport> {
    match problem.geometry() {
        crate::problem::Geometry::Euclidean => check_euclidean(problem, tol),
        crate::problem::Geometry::Hyperbolic => check_hyperbolic(problem, tol),
    }
}

/// `check`, but with the subset minimum taken by exhaustive enumeration
/// instead of minimum cuts: the independent route for cross-checking, and
/// the engine behind the CLI's `oracle` subcommand. Refuses more than 20
/// faces.
pub fn check_brute_force(problem: &PatternProblem, tol: f64) -> Result<FeasibilityReport> {
    check_tolerance(tol)?;
    let dense = problem.dense()?;
    let to_best = |cert: SubsetCertificate| {
        let mut members = vec![false; dense.n_faces()];
        for id in &cert.faces {
            members[dense.idx.face_of[id]] = true;
        }
        (members, cert.slack, cert.faces)
    };
    let best = match problem.geometry() {
        crate::problem::Geometry::Hyperbolic => {
            Some(to_best(brute_force_min_slack(problem, true)?))
        }
        crate::problem::Geometry::Euclidean => {
            if let Some(report) = euclidean_balance_gate(problem, &dense, tol) {
                return Ok(report);
            }
            if dense.n_faces() == 1 {
                None // no nonempty proper subsets: vacuously feasible
            } else {
                Some(to_best(brute_force_min_slack(problem, false)?))
            }
        }
    };
    report_from_best(problem, &dense, best, tol)
}

/// Construct the interior angle structure of maximal uniform margin, or
/// report that none exists.
///
/// The linear program maximizes `t` subject to
/// `a(f,e) + a(f′,e) + 4t ≤ D(e)` and `Σ_{e<f} a(f,e) + n_f·t = Φ(f)/2`
/// over `a ≥ 0, t ≥ 0`; the structure `φ = a + t` then keeps every side
/// angle at least `t` and every pair slack at least `2t`, so a positive
/// optimum is equivalent to the strict interior being nonempty. (A pair
/// coefficient of 2 would measure only the closed system: prescriptions
/// that are tight on a subset can still carry a positive such optimum
/// while no strict structure exists.)
pub fn lp_angle_structure(problem: &PatternProblem) -> Result<Option<MaxMarginStructure>> {
    let dense = problem.dense()?;
    let n_sides = 2 * dense.n_edges();
    let n_vars = n_sides + 1;
    let t_var = n_sides;
    let side_var = |e: usize, side: u8| 2 * e + side as usize;

    let mut objective = vec![0.0; n_vars];
    objective[t_var] = 1.0;
    let leq = (0..dense.n_edges())
        .map(|e| {
            let mut row = vec![0.0; n_vars];
            row[side_var(e, 0)] = 1.0;
            row[side_var(e, 1)] = 1.0;
            row[t_var] = 4.0;
            (row, dense.d[e])
        })
        .collect();
    let eq = (0..dense.n_faces())
        .map(|f| {
            let mut row = vec![0.0; n_vars];
            for &(e, side) in &dense.idx.incidences[f] {
                row[side_var(e, side)] += 1.0;
            }
            row[t_var] = dense.idx.incidences[f].len() as f64;
            (row, dense.phi[f] / 2.0)
        })
        .collect();

    let lp = LinearProgram {
        n: n_vars,
        objective,
        leq,
        eq,
    };
    let (x, margin) = match simplex::solve(&lp) {
        LpOutcome::Optimal { x, value } => (x, value),
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => {
            return Err(Error::Numerical(
                "angle-structure program reported unbounded margin".into(),
            ))
        }
    };
    if margin <= LP_MARGIN_TOL {
        return Ok(None);
    }
    let sides = dense
        .idx
        .edge_ids
        .iter()
        .enumerate()
        .map(|(e, id)| {
            (
                id.clone(),
                (x[side_var(e, 0)] + margin, x[side_var(e, 1)] + margin),
            )
        })
        .collect();
    Ok(Some(MaxMarginStructure {
        angles: AngleStructure::new(sides),
        margin,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{genus_two_octagon, torus_grid, uniform_problem};
    use crate::problem::Geometry;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn torus_with_phi(rows: usize, cols: usize, phi: f64) -> PatternProblem {
        uniform_problem(torus_grid(rows, cols), Geometry::Hyperbolic, FRAC_PI_2, phi).unwrap()
    }

    fn with_override(
        rows: usize,
        cols: usize,
        geometry: Geometry,
        base_phi: f64,
        overrides: &[(&str, f64)],
    ) -> PatternProblem {
        let c = torus_grid(rows, cols);
        let d: BTreeMap<String, f64> = c.edges.iter().map(|e| (e.id.clone(), FRAC_PI_2)).collect();
        let mut phi: BTreeMap<String, f64> =
            c.faces.iter().map(|f| (f.id.clone(), base_phi)).collect();
        for (id, v) in overrides {
            phi.insert((*id).into(), *v);
        }
        PatternProblem::new(c, geometry, d, phi).unwrap()
    }

    fn all_faces(problem: &PatternProblem) -> BTreeSet<String> {
        problem
            .complex()
            .faces
            .iter()
            .map(|f| f.id.clone())
            .collect()
    }

    #[test]
    fn brute_force_flat_equality_sits_at_the_full_set() {
        let p = torus_with_phi(2, 2, 2.0 * PI);
        let cert = brute_force_min_slack(&p, true).unwrap();
        assert_eq!(cert.faces, all_faces(&p));
        assert_eq!(cert.slack, 0.0);
        let proper = brute_force_min_slack(&p, false).unwrap();
        assert_abs_diff_eq!(proper.slack, PI, epsilon = 0.0);
        assert_eq!(proper.faces.len(), 1, "singleton wins");
        assert!(proper.faces.contains("f0_0"), "lexicographic tie-break");
    }

    #[test]
    fn brute_force_shrunken_cones_leave_positive_slack() {
        let p = torus_with_phi(2, 2, 2.0 * PI - 0.1);
        let cert = brute_force_min_slack(&p, true).unwrap();
        assert_eq!(cert.faces, all_faces(&p));
        assert_abs_diff_eq!(cert.slack, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_guards_large_complexes() {
        let p = torus_with_phi(3, 7, 2.0 * PI);
        assert!(matches!(
            brute_force_min_slack(&p, true),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn flow_probe_matches_brute_force_verdicts() {
        let p = torus_with_phi(2, 2, 2.0 * PI - 0.1);
        let (saturated, _) = flow_feasible(&p, 0.0).unwrap();
        assert!(saturated);
        let (saturated, cut) = flow_feasible(&p, 1.0).unwrap();
        assert!(
            !saturated,
            "doubled demand exceeds the total intersection budget"
        );
        assert!(!cut.is_empty());
    }

    #[test]
    fn flow_probe_detects_equality_under_tiny_inflation() {
        let p = torus_with_phi(2, 2, 2.0 * PI);
        let (saturated, cut) = flow_feasible(&p, 1e-6).unwrap();
        assert!(!saturated);
        assert_eq!(cut, all_faces(&p));
    }

    #[test]
    fn hyperbolic_feasible_margin_matches_brute_force() {
        let p = torus_with_phi(2, 2, 2.0 * PI - 0.1);
        let report = check_hyperbolic(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Feasible);
        assert_abs_diff_eq!(report.margin, 0.2, epsilon = 1e-12);
        assert!(report.certificate.is_none());
    }

    #[test]
    fn hyperbolic_equality_is_infeasible_with_full_certificate() {
        let p = torus_with_phi(2, 2, 2.0 * PI);
        let report = check_hyperbolic(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        assert_eq!(report.margin, 0.0);
        let cert = report.certificate.unwrap();
        assert_eq!(cert.faces, all_faces(&p));
        assert_eq!(cert.slack, 0.0);
        assert!(
            report.dual_certificate.is_none(),
            "the full set has no dual witness"
        );
    }

    #[test]
    fn hyperbolic_overloaded_face_is_infeasible() {
        let p = with_override(2, 2, Geometry::Hyperbolic, 2.0 * PI, &[("f0_0", 4.0 * PI)]);
        let report = check_hyperbolic(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        assert_abs_diff_eq!(report.margin, -PI, epsilon = 0.0);
        let cert = report.certificate.unwrap();
        assert!(cert.slack <= 0.0);
        let brute = brute_force_min_slack(&p, true).unwrap();
        assert_eq!(cert.faces, brute.faces);
        assert_eq!(cert.slack, brute.slack);
    }

    #[test]
    fn hyperbolic_proper_violation_carries_a_dual_witness() {
        let p = with_override(3, 3, Geometry::Hyperbolic, PI, &[("f0_0", 6.0 * PI)]);
        let report = check_hyperbolic(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        let cert = report.certificate.as_ref().unwrap();
        assert_eq!(cert.faces.len(), 1);
        assert!(cert.faces.contains("f0_0"));
        assert_abs_diff_eq!(cert.slack, -PI, epsilon = 1e-12);
        let dual = report.dual_certificate.unwrap();
        assert!(dual.violations(&p).is_empty());
        assert_abs_diff_eq!(dual.objective, PI, epsilon = 1e-12);
    }

    #[test]
    fn hyperbolic_status_agrees_with_brute_force_across_scales() {
        for phi in [
            5.0,
            2.0 * PI - 0.3,
            2.0 * PI - 1e-12,
            2.0 * PI,
            2.0 * PI + 0.4,
        ] {
            let p = torus_with_phi(2, 3, phi);
            let report = check_hyperbolic(&p, 1e-9).unwrap();
            let brute = brute_force_min_slack(&p, true).unwrap();
            let expected = status_for(brute.slack, 1e-9);
            assert_eq!(report.status, expected, "phi = {phi}");
        }
    }

    #[test]
    fn euclidean_balanced_square_torus_is_feasible() {
        let p =
            uniform_problem(torus_grid(2, 2), Geometry::Euclidean, FRAC_PI_2, 2.0 * PI).unwrap();
        let report = check_euclidean(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Feasible);
        assert_abs_diff_eq!(report.margin, PI, epsilon = 1e-9);
    }

    #[test]
    fn euclidean_sum_mismatch_is_infeasible() {
        let p = uniform_problem(
            torus_grid(2, 2),
            Geometry::Euclidean,
            FRAC_PI_2,
            2.0 * PI + 0.01,
        )
        .unwrap();
        let report = check_euclidean(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        assert_abs_diff_eq!(report.margin, -0.02, epsilon = 1e-12);
        let cert = report.certificate.unwrap();
        assert_eq!(cert.faces, all_faces(&p));
        assert!(cert.slack <= 0.0);
    }

    #[test]
    fn euclidean_mass_transfer_is_infeasible_at_a_singleton() {
        // Total preserved, one face demanding exactly its edge budget.
        let p = with_override(
            2,
            2,
            Geometry::Euclidean,
            4.0 * PI / 3.0,
            &[("f0_0", 4.0 * PI)],
        );
        let report = check_euclidean(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
        let cert = report.certificate.unwrap();
        assert_eq!(
            cert.faces.into_iter().collect::<Vec<_>>(),
            vec!["f0_0".to_string()]
        );
        assert_eq!(cert.slack, 0.0);
    }

    #[test]
    fn euclidean_single_face_is_vacuously_feasible_on_balance() {
        let p = uniform_problem(
            genus_two_octagon(),
            Geometry::Euclidean,
            FRAC_PI_2,
            4.0 * PI,
        )
        .unwrap();
        let report = check_euclidean(&p, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Feasible);
        assert!(report.margin.is_infinite());
        let unbalanced = uniform_problem(
            genus_two_octagon(),
            Geometry::Euclidean,
            FRAC_PI_2,
            4.0 * PI + 0.1,
        )
        .unwrap();
        let report = check_euclidean(&unbalanced, 1e-9).unwrap();
        assert_eq!(report.status, FeasibilityStatus::Infeasible);
    }

    #[test]
    fn lp_structure_on_the_octagon_reaches_an_eighth_of_pi() {
        let p = uniform_problem(
            genus_two_octagon(),
            Geometry::Hyperbolic,
            FRAC_PI_2,
            2.0 * PI,
        )
        .unwrap();
        let s = lp_angle_structure(&p).unwrap().expect("strictly feasible");
        assert_abs_diff_eq!(s.margin, PI / 8.0, epsilon = 1e-9);
        assert!(s.angles.is_admissible(&p, 1e-9).unwrap());
        for &(a, b) in s.angles.sides().values() {
            assert!(a >= s.margin - 1e-9 && b >= s.margin - 1e-9);
        }
    }

    #[test]
    fn lp_structure_absent_exactly_on_the_boundary() {
        // The closed system still admits a positive paper-style ε here, but
        // no strict structure exists; the margin program must say no.
        let boundary = torus_with_phi(2, 2, 2.0 * PI);
        assert!(lp_angle_structure(&boundary).unwrap().is_none());
        let feasible = torus_with_phi(2, 2, 2.0 * PI - 0.1);
        let s = lp_angle_structure(&feasible)
            .unwrap()
            .expect("interior nonempty");
        assert!(s.margin > 0.0);
        assert!(s.angles.is_admissible(&feasible, 1e-9).unwrap());
    }

    #[test]
    fn lp_presence_tracks_hyperbolic_margin() {
        for phi in [2.0 * PI - 0.5, 2.0 * PI, 2.0 * PI + 0.3, 4.0] {
            let p = torus_with_phi(2, 2, phi);
            let lp = lp_angle_structure(&p).unwrap();
            let margin = check_hyperbolic(&p, 1e-9).unwrap().margin;
            assert_eq!(lp.is_some(), margin > 1e-9, "phi = {phi}");
        }
    }

    #[test]
    fn subset_slack_rejects_unknown_faces() {
        let p = torus_with_phi(2, 2, 2.0 * PI);
        let x: BTreeSet<String> = ["ghost".to_string()].into();
        assert!(subset_slack(&p, &x).is_err());
        let x: BTreeSet<String> = ["f0_0".to_string()].into();
        assert_abs_diff_eq!(subset_slack(&p, &x).unwrap(), PI, epsilon = 0.0);
    }

    #[test]
    fn tolerance_must_be_positive() {
        let p = torus_with_phi(2, 2, 2.0 * PI);
        assert!(check_hyperbolic(&p, 0.0).is_err());
        assert!(check_euclidean(&p, f64::NAN).is_err());
    }

    #[test]
    fn brute_force_route_matches_the_flow_route() {
        let cases = [
            torus_with_phi(2, 2, 2.0 * PI - 0.1),
            torus_with_phi(2, 2, 2.0 * PI),
            with_override(2, 2, Geometry::Hyperbolic, 2.0 * PI, &[("f0_0", 4.0 * PI)]),
            with_override(
                2,
                2,
                Geometry::Euclidean,
                2.0 * PI,
                &[
                    ("f0_0", 4.0 * PI),
                    ("f0_1", 4.0 * PI / 3.0),
                    ("f1_0", 4.0 * PI / 3.0),
                    ("f1_1", 4.0 * PI / 3.0),
                ],
            ),
            uniform_problem(
                torus_grid(2, 2),
                Geometry::Euclidean,
                FRAC_PI_2,
                2.0 * PI + 0.01,
            )
            .unwrap(),
            uniform_problem(
                genus_two_octagon(),
                Geometry::Euclidean,
                FRAC_PI_2,
                4.0 * PI,
            )
            .unwrap(),
        ];
        for (i, p) in cases.iter().enumerate() {
            let flow = check(p, 1e-9).unwrap();
            let brute = check_brute_force(p, 1e-9).unwrap();
            assert_eq!(flow.status, brute.status, "case {i}");
            if brute.status != FeasibilityStatus::Feasible {
                assert_eq!(flow.margin, brute.margin, "case {i}");
                assert_eq!(
                    flow.certificate.as_ref().map(|c| &c.faces),
                    brute.certificate.as_ref().map(|c| &c.faces),
                    "case {i}"
                );
            }
        }
    }
}

//! Problem data for circle patterns: a valid cell complex together with a
//! geometry, one prescribed intersection angle per edge, and one prescribed
//! cone angle per face — plus the candidate objects (radius assignments,
//! angle structures) that the feasibility checks and solvers exchange.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{CellComplex, Indexing};
use crate::error::{Error, Result};
use crate::triangle::{euclidean_apex, hyperbolic_apex, ApexTriangle};

/// Which constant-curvature geometry the pattern lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }
}

/// Largest hyperbolic radius the kernels accept; beyond it `sinh` overflows
/// and lengths stop being finite.
pub const MAX_HYPERBOLIC_RADIUS: f64 = 700.0;

/// A fully specified instance: complex, geometry, intersection angles
/// `D: edges → (0, π)`, and cone-angle targets `Φ: faces → (0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternProblem {
    complex: CellComplex,
    geometry: Geometry,
    d: BTreeMap<String, f64>,
    phi: BTreeMap<String, f64>,
}

impl PatternProblem {
    /// Validate the complex and the two prescriptions. The angle maps must
    /// cover exactly the edge and face ids; each `D` lies strictly in
    /// `(0, π)` and each `Φ` is a positive finite number.
    pub fn new(
        complex: CellComplex,
        geometry: Geometry,
        d: BTreeMap<String, f64>,
        phi: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let violations = complex.violations();
        if !violations.is_empty() {
            return Err(Error::InvalidInput(format!(
                "invalid cell complex: {}",
                violations.join("; ")
            )));
        }
        check_coverage(
            "intersection angle",
            &d,
            complex.edges.iter().map(|e| e.id.as_str()),
        )?;
        check_coverage(
            "cone angle",
            &phi,
            complex.faces.iter().map(|f| f.id.as_str()),
        )?;
        for (id, &v) in &d {
            if !(v.is_finite() && v > 0.0 && v < std::f64::consts::PI) {
                return Err(Error::InvalidInput(format!(
                    "intersection angle for edge `{id}` is {v}; must lie strictly in (0, π)"
                )));
            }
        }
        for (id, &v) in &phi {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "cone angle for face `{id}` is {v}; must be positive and finite"
                )));
            }
        }
        Ok(PatternProblem {
            complex,
            geometry,
            d,
            phi,
        })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Prescribed intersection angle of an edge.
    pub fn intersection_angle(&self, edge: &str) -> Option<f64> {
        self.d.get(edge).copied()
    }

    /// Prescribed cone angle of a face.
    pub fn cone_target(&self, face: &str) -> Option<f64> {
        self.phi.get(face).copied()
    }

    pub fn intersection_angles(&self) -> &BTreeMap<String, f64> {
        &self.d
    }

    pub fn cone_targets(&self) -> &BTreeMap<String, f64> {
        &self.phi
    }

    /// `Σ_e D(e)` over all edges.
    pub fn total_intersection(&self) -> f64 {
        self.d.values().sum()
    }

    /// `Σ_f Φ(f)` over all faces.
    pub fn total_cone(&self) -> f64 {
        self.phi.values().sum()
    }

    /// Face ids in declaration order — the row/column order of every
    /// face-indexed matrix or vector this crate hands out.
    pub fn face_order(&self) -> Vec<String> {
        self.complex.faces.iter().map(|f| f.id.clone()).collect()
    }

    /// Evaluate every apex triangle for the given radii: per-edge side
    /// angles and lengths plus the resulting per-face cone angles.
    pub fn forward_map(&self, radii: &RadiusAssignment) -> Result<ForwardMap> {
        let dense = self.dense()?;
        let r = dense.radii_vec(radii)?;
        let per_edge = dense.side_angles(&r);
        let cones = dense.cones(&per_edge);
        let mut sides = BTreeMap::new();
        let mut lengths = BTreeMap::new();
        for (ei, id) in dense.idx.edge_ids.iter().enumerate() {
            let (phi_a, phi_b, l) = per_edge[ei];
            sides.insert(id.clone(), (phi_a, phi_b));
            lengths.insert(id.clone(), l);
        }
        let cones = dense.idx.face_ids.iter().cloned().zip(cones).collect();
        Ok(ForwardMap {
            angles: AngleStructure::new(sides),
            cones,
            lengths,
        })
    }

    /// Cone angle at each vertex: `Σ (π − D(e))` over the edge-ends meeting
    /// it. Requires endpoint data on every edge.
    pub fn vertex_cone_angles(&self) -> Result<BTreeMap<String, f64>> {
        let mut angles: BTreeMap<String, f64> = self
            .complex
            .vertices
            .iter()
            .map(|v| (v.clone(), 0.0))
            .collect();
        for e in &self.complex.edges {
            let Some((p, q)) = &e.endpoints else {
                return Err(Error::Unsupported(format!(
                    "edge `{}` carries no endpoint vertices; vertex cone angles need them",
                    e.id
                )));
            };
            let wedge = std::f64::consts::PI - self.d[&e.id];
            for v in [p, q] {
                *angles.get_mut(v).expect("validated endpoint") += wedge;
            }
        }
        Ok(angles)
    }

    pub(crate) fn dense(&self) -> Result<DenseProblem> {
        let idx = self.complex.indexing()?;
        let d: Vec<f64> = idx.edge_ids.iter().map(|id| self.d[id]).collect();
        let theta = d.iter().map(|&d| std::f64::consts::PI - d).collect();
        let phi = idx.face_ids.iter().map(|id| self.phi[id]).collect();
        Ok(DenseProblem {
            idx,
            d,
            theta,
            phi,
            geometry: self.geometry,
        })
    }
}

fn check_coverage<'a>(
    what: &str,
    map: &BTreeMap<String, f64>,
    required: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let required: BTreeSet<&str> = required.collect();
    let given: BTreeSet<&str> = map.keys().map(String::as_str).collect();
    let missing: Vec<&str> = required.difference(&given).copied().collect();
    if !missing.is_empty() {
        return Err(Error::InvalidInput(format!(
            "missing {what} for `{}`",
            missing.join("`, `")
        )));
    }
    let extra: Vec<&str> = given.difference(&required).copied().collect();
    if !extra.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{what} given for unknown id `{}`",
            extra.join("`, `")
        )));
    }
    Ok(())
}

/// One positive radius per face.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusAssignment {
    radii: BTreeMap<String, f64>,
}

impl RadiusAssignment {
    /// Every radius must be finite and positive.
    pub fn new(radii: BTreeMap<String, f64>) -> Result<Self> {
        for (id, &r) in &radii {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "radius for face `{id}` is {r}; must be positive and finite"
                )));
            }
        }
        Ok(RadiusAssignment { radii })
    }

    /// The same radius on every face of the complex.
    pub fn uniform(complex: &CellComplex, value: f64) -> Result<Self> {
        Self::new(
            complex
                .faces
                .iter()
                .map(|f| (f.id.clone(), value))
                .collect(),
        )
    }

    pub fn get(&self, face: &str) -> Option<f64> {
        self.radii.get(face).copied()
    }

    pub fn map(&self) -> &BTreeMap<String, f64> {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Multiply every radius by a positive factor (the Euclidean gauge
    /// freedom).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.radii
                .iter()
                .map(|(id, &r)| (id.clone(), r * factor))
                .collect(),
        )
    }
}

/// Side angles of every apex triangle, keyed by edge id as
/// `(angle on side A, angle on side B)`.
///
/// Keying by edge keeps the two angles of an edge with both sides on one
/// face distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleStructure {
    sides: BTreeMap<String, (f64, f64)>,
}

impl AngleStructure {
    pub fn new(sides: BTreeMap<String, (f64, f64)>) -> Self {
        AngleStructure { sides }
    }

    /// Angle on one side of an edge (0 = side A, 1 = side B).
    pub fn side(&self, edge: &str, side: u8) -> Option<f64> {
        let &(a, b) = self.sides.get(edge)?;
        Some(if side == 0 { a } else { b })
    }

    pub fn sides(&self) -> &BTreeMap<String, (f64, f64)> {
        &self.sides
    }

    /// Check the admissibility invariants against a problem: full edge
    /// coverage, every angle in `(0, π)`, the two angles of each edge
    /// summing below its intersection angle, and each face's side angles
    /// summing to `Φ(f)/2` within `tol`.
    pub fn violations(&self, problem: &PatternProblem, tol: f64) -> Result<Vec<String>> {
        let dense = problem.dense()?;
        let mut out = Vec::new();
        for id in self.sides.keys() {
            if !dense.idx.edge_ids.contains(id) {
                out.push(format!("angle given for unknown edge `{id}`"));
            }
        }
        for (ei, id) in dense.idx.edge_ids.iter().enumerate() {
            let Some(&(a, b)) = self.sides.get(id) else {
                out.push(format!("no angles for edge `{id}`"));
                continue;
            };
            for (side, v) in [("A", a), ("B", b)] {
                if !(v.is_finite() && v > 0.0 && v < std::f64::consts::PI) {
                    out.push(format!(
                        "angle on side {side} of edge `{id}` is {v}; must lie in (0, π)"
                    ));
                }
            }
            if a + b >= dense.d[ei] {
                out.push(format!(
                    "angles of edge `{id}` sum to {}; must stay below its intersection angle {}",
                    a + b,
                    dense.d[ei]
                ));
            }
        }
        if out.is_empty() {
            for (fi, id) in dense.idx.face_ids.iter().enumerate() {
                let sum: f64 = dense.idx.incidences[fi]
                    .iter()
                    .map(|&(ei, side)| {
                        let (a, b) = self.sides[&dense.idx.edge_ids[ei]];
                        if side == 0 {
                            a
                        } else {
                            b
                        }
                    })
                    .sum();
                let target = dense.phi[fi] / 2.0;
                if (sum - target).abs() > tol {
                    out.push(format!(
                        "face `{id}` side angles sum to {sum}; target Φ/2 is {target}"
                    ));
                }
            }
        }
        Ok(out)
    }

    /// True when [`AngleStructure::violations`] is empty.
    pub fn is_admissible(&self, problem: &PatternProblem, tol: f64) -> Result<bool> {
        Ok(self.violations(problem, tol)?.is_empty())
    }
}

/// Everything the apex triangles determine for one radius assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardMap {
    pub angles: AngleStructure,
    /// Cone angle of each face: twice the sum of its side angles.
    pub cones: BTreeMap<String, f64>,
    /// Length of each edge (distance between the two circle centers).
    pub lengths: BTreeMap<String, f64>,
}

/// Dense, index-based view of a problem for the numeric code paths.
#[derive(Debug, Clone)]
pub(crate) struct DenseProblem {
    pub idx: Indexing,
    /// Intersection angle per edge.
    pub d: Vec<f64>,
    /// Apex angle `π − D` per edge.
    pub theta: Vec<f64>,
    /// Cone target per face.
    pub phi: Vec<f64>,
    pub geometry: Geometry,
}

impl DenseProblem {
    pub fn n_faces(&self) -> usize {
        self.idx.face_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.idx.edge_ids.len()
    }

    /// Radii in face-index order; checks coverage and the hyperbolic range
    /// guard.
    pub fn radii_vec(&self, radii: &RadiusAssignment) -> Result<Vec<f64>> {
        check_coverage(
            "radius",
            radii.map(),
            self.idx.face_ids.iter().map(String::as_str),
        )?;
        let r: Vec<f64> = self.idx.face_ids.iter().map(|id| radii.map()[id]).collect();
        if self.geometry == Geometry::Hyperbolic {
            if let Some((fi, &bad)) = r
                .iter()
                .enumerate()
                .find(|&(_, &v)| v > MAX_HYPERBOLIC_RADIUS)
            {
                return Err(Error::InvalidInput(format!(
                    "hyperbolic radius for face `{}` is {bad}; supported range is (0, {MAX_HYPERBOLIC_RADIUS}]",
                    self.idx.face_ids[fi]
                )));
            }
        }
        Ok(r)
    }

    pub fn radii_assignment(&self, r: &[f64]) -> RadiusAssignment {
        RadiusAssignment::new(
            self.idx
                .face_ids
                .iter()
                .cloned()
                .zip(r.iter().copied())
                .collect(),
        )
        .expect("solver radii stay positive")
    }

    pub fn apex(&self, ei: usize, r: &[f64]) -> ApexTriangle {
        let (a, b) = self.idx.sides[ei];
        match self.geometry {
            Geometry::Euclidean => euclidean_apex(r[a], r[b], self.theta[ei]),
            Geometry::Hyperbolic => hyperbolic_apex(r[a], r[b], self.theta[ei]),
        }
    }

    /// Per edge: the side-A angle, side-B angle, and length. The apex
    /// solver reports the angle opposite each radius, so the angle *at*
    /// side A's center comes out of the `phi2` slot.
    pub fn side_angles(&self, r: &[f64]) -> Vec<(f64, f64, f64)> {
        (0..self.n_edges())
            .map(|ei| {
                let t = self.apex(ei, r);
                (t.phi2, t.phi1, t.l)
            })
            .collect()
    }

    /// Cone angle per face: `Σ 2·φ(f, e)` over its edge-side incidences.
    pub fn cones(&self, per_edge: &[(f64, f64, f64)]) -> Vec<f64> {
        self.idx
            .incidences
            .iter()
            .map(|inc| {
                inc.iter()
                    .map(|&(ei, side)| {
                        2.0 * if side == 0 {
                            per_edge[ei].0
                        } else {
                            per_edge[ei].1
                        }
                    })
                    .sum()
            })
            .collect()
    }
}

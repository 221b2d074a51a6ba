//! Instance and report documents: JSON on disk, validated types in memory.
//!
//! Angles in instance files are radians when numeric; a string with a
//! `deg` suffix (`"90deg"`) is converted at the parse boundary. Emission
//! always writes radians, and re-parsing an emitted document reproduces
//! the problem exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{DualCertificate, FeasibilityReport, SubsetCertificate};
use crate::problem::{Geometry, PatternProblem, RadiusAssignment};
use crate::solver::SolveReport;
use crate::CellComplex;

/// An angle as written in an instance file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    fn radians(&self, what: &str) -> Result<f64> {
        match self {
            AngleValue::Radians(v) => Ok(*v),
            AngleValue::Text(s) => {
                let trimmed = s.trim();
                let Some(number) = trimmed.strip_suffix("deg") else {
                    return Err(Error::Parse(format!(
                        "{what}: `{s}` is not a number and lacks the `deg` suffix"
                    )));
                };
                let degrees: f64 = number.trim().parse().map_err(|_| {
                    Error::Parse(format!("{what}: `{s}` has a malformed degree value"))
                })?;
                Ok(degrees.to_radians())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        self.name.is_none() && self.description.is_none()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FaceDoc {
    id: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    sides: [String; 2],
    #[serde(rename = "D")]
    d: AngleValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    endpoints: Option<[String; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    geometry: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
    faces: Vec<FaceDoc>,
    edges: Vec<EdgeDoc>,
    cone_angles: BTreeMap<String, AngleValue>,
}

/// A parsed instance: the validated problem plus optional metadata.
#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: PatternProblem,
    pub metadata: Metadata,
}

fn geometry_from_str(s: &str) -> Result<Geometry> {
    match s {
        "euclidean" => Ok(Geometry::Euclidean),
        "hyperbolic" => Ok(Geometry::Hyperbolic),
        other => Err(Error::Parse(format!(
            "geometry `{other}` is not supported; use \"euclidean\" or \"hyperbolic\""
        ))),
    }
}

/// Parse and validate an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let geometry = geometry_from_str(&doc.geometry)?;
    let mut d = BTreeMap::new();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let value =
            e.d.radians(&format!("edge `{}` intersection angle", e.id))?;
        if d.insert(e.id.clone(), value).is_some() {
            return Err(Error::InvalidInput(format!("duplicate edge id `{}`", e.id)));
        }
        edges.push(crate::complex::Edge {
            id: e.id.clone(),
            side_a: e.sides[0].clone(),
            side_b: e.sides[1].clone(),
            endpoints: e.endpoints.as_ref().map(|p| (p[0].clone(), p[1].clone())),
        });
    }
    let complex = CellComplex::from_edges(doc.faces.iter().map(|f| f.id.as_str()), edges);
    let mut phi = BTreeMap::new();
    for (id, value) in &doc.cone_angles {
        phi.insert(
            id.clone(),
            value.radians(&format!("cone angle of face `{id}`"))?,
        );
    }
    let problem = PatternProblem::new(complex, geometry, d, phi)?;
    Ok(Instance {
        problem,
        metadata: doc.metadata.unwrap_or_default(),
    })
}

/// Load an instance from disk.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

/// Serialize an instance back to its document form (angles in radians).
pub fn emit_instance(instance: &Instance) -> String {
    let problem = &instance.problem;
    let doc = InstanceDoc {
        geometry: problem.geometry().name().to_string(),
        metadata: (!instance.metadata.is_empty()).then(|| instance.metadata.clone()),
        faces: problem
            .complex()
            .faces
            .iter()
            .map(|f| FaceDoc { id: f.id.clone() })
            .collect(),
        edges: problem
            .complex()
            .edges
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                sides: [e.side_a.clone(), e.side_b.clone()],
                d: AngleValue::Radians(problem.intersection_angle(&e.id).expect("covered")),
                endpoints: e.endpoints.as_ref().map(|(a, b)| [a.clone(), b.clone()]),
            })
            .collect(),
        cone_angles: problem
            .cone_targets()
            .iter()
            .map(|(id, &v)| (id.clone(), AngleValue::Radians(v)))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
}

#[derive(Debug, Serialize)]
struct SubsetCertificateDoc<'a> {
    faces: Vec<&'a str>,
    slack: f64,
}

#[derive(Debug, Serialize)]
struct DualCertificateDoc<'a> {
    y_faces: &'a BTreeMap<String, f64>,
    y_edges: &'a BTreeMap<String, f64>,
    objective: f64,
}

#[derive(Debug, Serialize)]
struct FeasibilityDoc<'a> {
    status: &'a str,
    /// `null` when no subset constrains the prescription at all.
    margin: Option<f64>,
    certificate: Option<SubsetCertificateDoc<'a>>,
    dual_certificate: Option<DualCertificateDoc<'a>>,
}

fn cert_doc(c: &SubsetCertificate) -> SubsetCertificateDoc<'_> {
    SubsetCertificateDoc {
        faces: c.faces.iter().map(String::as_str).collect(),
        slack: c.slack,
    }
}

fn dual_doc(d: &DualCertificate) -> DualCertificateDoc<'_> {
    DualCertificateDoc {
        y_faces: &d.y_faces,
        y_edges: &d.y_edges,
        objective: d.objective,
    }
}

fn feasibility_doc(report: &FeasibilityReport) -> FeasibilityDoc<'_> {
    FeasibilityDoc {
        status: report.status.as_str(),
        margin: report.margin.is_finite().then_some(report.margin),
        certificate: report.certificate.as_ref().map(cert_doc),
        dual_certificate: report.dual_certificate.as_ref().map(dual_doc),
    }
}

/// Feasibility report as a JSON document.
pub fn feasibility_json(report: &FeasibilityReport) -> String {
    serde_json::to_string_pretty(&feasibility_doc(report)).expect("report serializes")
}

#[derive(Debug, Serialize)]
struct SolveReportDoc<'a> {
    geometry: &'a str,
    method: &'a str,
    feasibility: FeasibilityDoc<'a>,
    radii: &'a BTreeMap<String, f64>,
    /// Per edge, the side-A and side-B angles `φ(f,e)`.
    angles: &'a BTreeMap<String, (f64, f64)>,
    edge_lengths: &'a BTreeMap<String, f64>,
    residual: f64,
    iterations: usize,
    energy: f64,
    kkt_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<&'a str>,
}

/// Solve report (with its feasibility echo) as a JSON document.
pub fn solve_report_json(
    report: &SolveReport,
    feasibility: &FeasibilityReport,
    geometry: Geometry,
    method: &str,
) -> String {
    let doc = SolveReportDoc {
        geometry: geometry.name(),
        method,
        feasibility: feasibility_doc(feasibility),
        radii: report.radii.map(),
        angles: report.angles.sides(),
        edge_lengths: &report.edge_lengths,
        residual: report.residual,
        iterations: report.iterations,
        energy: report.energy,
        kkt_ok: report.kkt_ok,
        warning: report.warning.as_deref(),
    };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

#[derive(Debug, Serialize)]
struct WedgeDoc<'a> {
    edge: &'a str,
    side: u8,
    other_face: &'a str,
    start_angle: f64,
    extent: f64,
    edge_length: f64,
    neighbor_center: (f64, f64),
    neighbor_radius: f64,
    apex_points: [(f64, f64); 2],
}

#[derive(Debug, Serialize)]
struct FaceFanDoc<'a> {
    face: &'a str,
    radius: f64,
    circle_radius: f64,
    cone: f64,
    cone_excess: f64,
    wedges: Vec<WedgeDoc<'a>>,
}

#[derive(Debug, Serialize)]
struct GluingDoc<'a> {
    edge: &'a str,
    face_a: &'a str,
    face_b: &'a str,
    length: f64,
}

#[derive(Debug, Serialize)]
struct LayoutJsonDoc<'a> {
    geometry: &'a str,
    faces: Vec<FaceFanDoc<'a>>,
    gluing: Vec<GluingDoc<'a>>,
}

/// Geometric layout (per-face fans plus gluing table) as a JSON document.
pub fn layout_json(layout: &crate::layout::LayoutDocument) -> String {
    let doc = LayoutJsonDoc {
        geometry: layout.geometry.name(),
        faces: layout
            .faces
            .iter()
            .map(|f| FaceFanDoc {
                face: &f.face,
                radius: f.radius,
                circle_radius: f.circle_radius,
                cone: f.cone,
                cone_excess: f.cone_excess,
                wedges: f
                    .wedges
                    .iter()
                    .map(|w| WedgeDoc {
                        edge: &w.edge,
                        side: w.side,
                        other_face: &w.other_face,
                        start_angle: w.start_angle,
                        extent: w.extent,
                        edge_length: w.edge_length,
                        neighbor_center: w.neighbor_center,
                        neighbor_radius: w.neighbor_radius,
                        apex_points: w.apex_points,
                    })
                    .collect(),
            })
            .collect(),
        gluing: layout
            .gluing
            .iter()
            .map(|g| GluingDoc {
                edge: &g.edge,
                face_a: &g.face_a,
                face_b: &g.face_b,
                length: g.length,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("layout documents always serialize")
}

#[derive(Debug, Deserialize)]
struct SolutionDoc {
    radii: BTreeMap<String, f64>,
}

/// Read back the radii of a previously written solve report.
pub fn load_solution_radii(path: &Path) -> Result<RadiusAssignment> {
    let text = std::fs::read_to_string(path)?;
    let doc: SolutionDoc = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    RadiusAssignment::new(doc.radii)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TORUS_1X2: &str = r#"{
        "geometry": "hyperbolic",
        "metadata": {"name": "two-face torus"},
        "faces": [{"id": "left"}, {"id": "right"}],
        "edges": [
            {"id": "top", "sides": ["left", "right"], "D": "90deg"},
            {"id": "bottom", "sides": ["left", "right"], "D": 1.5707963267948966},
            {"id": "seam_l", "sides": ["left", "left"], "D": "90 deg"},
            {"id": "seam_r", "sides": ["right", "right"], "D": "90deg"}
        ],
        "cone_angles": {"left": "354deg", "right": 6.178465552059927}
    }"#;

    #[test]
    fn degree_suffix_parses_to_exact_radians() {
        let instance = parse_instance(TORUS_1X2).unwrap();
        let p = &instance.problem;
        assert_eq!(p.intersection_angle("top"), Some(FRAC_PI_2));
        assert_eq!(p.intersection_angle("seam_l"), Some(FRAC_PI_2));
        assert_abs_diff_eq!(
            p.cone_target("left").unwrap(),
            354.0_f64.to_radians(),
            epsilon = 0.0
        );
        assert_eq!(instance.metadata.name.as_deref(), Some("two-face torus"));
    }

    #[test]
    fn emit_then_parse_is_a_fixpoint() {
        let first = parse_instance(TORUS_1X2).unwrap();
        let emitted = emit_instance(&first);
        let second = parse_instance(&emitted).unwrap();
        assert_eq!(emit_instance(&second), emitted);
        assert_eq!(
            first.problem.intersection_angles(),
            second.problem.intersection_angles()
        );
        assert_eq!(first.problem.cone_targets(), second.problem.cone_targets());
        assert_eq!(first.problem.geometry(), second.problem.geometry());
        assert_eq!(first.metadata, second.metadata);
    }

    #[test]
    fn malformed_documents_are_rejected_with_positions() {
        let err = parse_instance("{\n  \"geometry\": [],\n}").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line")));
        let err = parse_instance(
            r#"{"geometry": "spherical", "faces": [], "edges": [], "cone_angles": {}}"#,
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("spherical")));
    }

    #[test]
    fn out_of_range_angles_are_named() {
        let text = TORUS_1X2.replace("\"90deg\"", "3.5");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(&err, Error::InvalidInput(m) if m.contains("(0, π)")));
        let text = TORUS_1X2.replace("\"90deg\"", "\"90rad\"");
        assert!(parse_instance(&text).is_err());
    }

    #[test]
    fn feasibility_report_serializes_with_certificates() {
        let instance = parse_instance(TORUS_1X2).unwrap();
        let report = feasibility::check(&instance.problem, 1e-9).unwrap();
        let json = feasibility_json(&report);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["status"], "feasible");
        assert!(value["margin"].is_f64());
        assert!(value["certificate"].is_null());
    }

    #[test]
    fn solution_radii_round_trip_through_a_report_file() {
        let instance = parse_instance(TORUS_1X2).unwrap();
        let solved =
            crate::solver::solve(&instance.problem, &crate::solver::SolveOptions::default())
                .unwrap();
        let feas = feasibility::check(&instance.problem, 1e-9).unwrap();
        let json = solve_report_json(&solved, &feas, Geometry::Hyperbolic, "auto");
        let dir = std::env::temp_dir().join("circle-pattern-format-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        std::fs::write(&path, &json).unwrap();
        let radii = load_solution_radii(&path).unwrap();
        for (id, &r) in solved.radii.map() {
            assert_eq!(radii.get(id), Some(r));
        }
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["geometry"], "hyperbolic");
        assert!(value["kkt_ok"].as_bool().unwrap());
        assert!((value["residual"].as_f64().unwrap()) < 1e-10);
    }

    #[test]
    fn single_face_margin_serializes_as_null() {
        let p = crate::fixtures::uniform_problem(
            crate::fixtures::genus_two_octagon(),
            Geometry::Euclidean,
            FRAC_PI_2,
            4.0 * PI,
        )
        .unwrap();
        let report = feasibility::check(&p, 1e-9).unwrap();
        let json = feasibility_json(&report);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["margin"].is_null());
        assert_eq!(value["status"], "feasible");
    }
}

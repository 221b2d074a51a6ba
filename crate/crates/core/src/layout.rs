//! Geometric realization of a solved pattern, face by face.
//!
//! Each face is developed as a fan around its own circle center: every
//! edge-side incidence contributes one wedge of angular extent `2φ(f,e)`
//! holding the realized triangle (sides `r(f)`, `r(f′)`, apex `π − D`).
//! Euclidean fans live in the plane with the center at the origin;
//! hyperbolic fans live in the Poincaré disk, centered at the disk center,
//! where a circle of hyperbolic radius `ρ` around the origin draws as a
//! Euclidean circle of radius `tanh(ρ/2)`. Wedges sharing an edge id glue
//! across fans; the whole-surface picture is this atlas plus the gluing
//! table — faces with cone angle ≠ 2π cannot be drawn closed, so the gap
//! or overlap `cone − 2π` is annotated instead.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::{Geometry, PatternProblem, RadiusAssignment};

/// One edge-side incidence realized inside its face's fan.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub edge: String,
    /// 0 = side A, 1 = side B of the edge.
    pub side: u8,
    pub other_face: String,
    /// Fan angle where this wedge begins; extents accumulate in incidence
    /// order starting from zero.
    pub start_angle: f64,
    /// `2·φ(f,e)`.
    pub extent: f64,
    /// Distance from this center to the neighbor center (the edge length).
    pub edge_length: f64,
    /// Drawing coordinates of the neighbor circle in this fan's chart.
    pub neighbor_center: (f64, f64),
    pub neighbor_radius: f64,
    /// The two circle intersection points bounding the wedge.
    pub apex_points: [(f64, f64); 2],
}

/// One face developed as a fan around the origin of its own chart.
#[derive(Debug, Clone)]
pub struct FaceFan {
    pub face: String,
    /// Pattern radius of the face circle.
    pub radius: f64,
    /// Drawing radius of the face circle (`r` Euclidean, `tanh(r/2)`
    /// hyperbolic).
    pub circle_radius: f64,
    pub cone: f64,
    /// `cone − 2π`: negative leaves a gap, positive overlaps.
    pub cone_excess: f64,
    pub wedges: Vec<Wedge>,
}

/// A pairing of the two wedges realizing one edge.
#[derive(Debug, Clone)]
pub struct Gluing {
    pub edge: String,
    pub face_a: String,
    pub face_b: String,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct LayoutDocument {
    pub geometry: Geometry,
    pub faces: Vec<FaceFan>,
    pub gluing: Vec<Gluing>,
}

/// Drawing radius of a circle of pattern radius `rho` around the chart
/// origin.
fn chart_radius(geometry: Geometry, rho: f64) -> f64 {
    match geometry {
        Geometry::Euclidean => rho,
        Geometry::Hyperbolic => (rho / 2.0).tanh(),
    }
}

/// The neighbor circle along a ray from the origin: its center distance
/// and drawing radius. In the disk model the circle through the two
/// diameter points at distances `l ∓ r'` has its Euclidean center at their
/// midpoint.
fn neighbor_circle(geometry: Geometry, l: f64, r_other: f64) -> (f64, f64) {
    match geometry {
        Geometry::Euclidean => (l, r_other),
        Geometry::Hyperbolic => {
            let near = ((l - r_other) / 2.0).tanh();
            let far = ((l + r_other) / 2.0).tanh();
            (0.5 * (near + far), 0.5 * (far - near))
        }
    }
}

/// Develop the solved pattern into per-face fans plus the gluing table.
pub fn export_layout(problem: &PatternProblem, radii: &RadiusAssignment) -> Result<LayoutDocument> {
    let dense = problem.dense()?;
    let r = dense.radii_vec(radii)?;
    let fwd = problem.forward_map(radii)?;
    let geometry = problem.geometry();
    let mut faces = Vec::with_capacity(dense.n_faces());
    for f in 0..dense.n_faces() {
        let mut wedges = Vec::with_capacity(dense.idx.incidences[f].len());
        let mut angle = 0.0_f64;
        let self_draw = chart_radius(geometry, r[f]);
        for &(ei, side) in &dense.idx.incidences[f] {
            let id = &dense.idx.edge_ids[ei];
            let (a, b) = dense.idx.sides[ei];
            let other = if side == 0 { b } else { a };
            let phi = fwd
                .angles
                .side(id, side)
                .expect("forward map covers all sides");
            let l = fwd.lengths[id];
            let (center_dist, neighbor_radius) = neighbor_circle(geometry, l, r[other]);
            let mid = angle + phi;
            let wedge = Wedge {
                edge: id.clone(),
                side,
                other_face: dense.idx.face_ids[other].clone(),
                start_angle: angle,
                extent: 2.0 * phi,
                edge_length: l,
                neighbor_center: (center_dist * mid.cos(), center_dist * mid.sin()),
                neighbor_radius,
                apex_points: [
                    (self_draw * angle.cos(), self_draw * angle.sin()),
                    (
                        self_draw * (angle + 2.0 * phi).cos(),
                        self_draw * (angle + 2.0 * phi).sin(),
                    ),
                ],
            };
            angle += 2.0 * phi;
            wedges.push(wedge);
        }
        let id = &dense.idx.face_ids[f];
        let cone = fwd.cones[id];
        faces.push(FaceFan {
            face: id.clone(),
            radius: r[f],
            circle_radius: self_draw,
            cone,
            cone_excess: cone - 2.0 * std::f64::consts::PI,
            wedges,
        });
    }
    let gluing = dense
        .idx
        .edge_ids
        .iter()
        .enumerate()
        .map(|(ei, id)| {
            let (a, b) = dense.idx.sides[ei];
            Gluing {
                edge: id.clone(),
                face_a: dense.idx.face_ids[a].clone(),
                face_b: dense.idx.face_ids[b].clone(),
                length: fwd.lengths[id],
            }
        })
        .collect();
    Ok(LayoutDocument {
        geometry,
        faces,
        gluing,
    })
}

impl LayoutDocument {
    /// Furthest drawing extent of any fan (used to size SVG cells).
    fn cell_radius(&self) -> f64 {
        let mut extent = 0.0_f64;
        for fan in &self.faces {
            extent = extent.max(fan.circle_radius);
            for w in &fan.wedges {
                let (cx, cy) = w.neighbor_center;
                extent = extent.max(cx.hypot(cy) + w.neighbor_radius);
            }
        }
        if self.geometry == Geometry::Hyperbolic {
            extent = extent.max(1.0);
        }
        extent
    }
}

fn fmt6(x: f64) -> String {
    // Normalize negative zero so output is reproducible across paths.
    let v = if x == 0.0 { 0.0 } else { x };
    format!("{v:.6}")
}

/// Render the layout as a deterministic standalone SVG document: one fan
/// per face on a fixed grid, wedge boundaries as rays, neighbor circles
/// dashed, shared edge ids labeling both of their wedges.
pub fn render_svg(layout: &LayoutDocument) -> Result<String> {
    let n = layout.faces.len();
    if n == 0 {
        return Err(Error::InvalidInput("layout has no faces to draw".into()));
    }
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let pad = 1.25;
    let cell = 2.0 * pad * layout.cell_radius();
    let label_band = 0.22 * cell;
    let width = cols as f64 * cell;
    let height = rows as f64 * (cell + label_band);
    let scale = 640.0 / cell;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" font-family=\"monospace\">",
        fmt6(width * scale),
        fmt6(height * scale)
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"100%\" height=\"100%\" fill=\"#fdfdf8\"/>"
    );
    for (i, fan) in layout.faces.iter().enumerate() {
        let col = i % cols;
        let row = i / cols;
        let cx = (col as f64 + 0.5) * cell * scale;
        let cy = (row as f64 * (cell + label_band) + 0.5 * cell) * scale;
        let _ = writeln!(
            svg,
            "  <g transform=\"translate({},{})\">",
            fmt6(cx),
            fmt6(cy)
        );
        if layout.geometry == Geometry::Hyperbolic {
            let _ = writeln!(
                svg,
                "    <circle r=\"{}\" fill=\"none\" stroke=\"#c8c8d8\" stroke-width=\"1\"/>",
                fmt6(scale)
            );
        }
        // Wedge fills first, then strokes above them.
        for (wi, w) in fan.wedges.iter().enumerate() {
            let r = fan.circle_radius * scale;
            let a0 = w.start_angle;
            let a1 = w.start_angle + w.extent;
            let large = if w.extent > std::f64::consts::PI {
                1
            } else {
                0
            };
            let shade = if wi % 2 == 0 { "#dce8f5" } else { "#c9dcef" };
            let _ = writeln!(
                svg,
                "    <path d=\"M 0 0 L {} {} A {} {} 0 {} 1 {} {} Z\" fill=\"{}\" stroke=\"none\"/>",
                fmt6(r * a0.cos()),
                fmt6(r * a0.sin()),
                fmt6(r),
                fmt6(r),
                large,
                fmt6(r * a1.cos()),
                fmt6(r * a1.sin()),
                shade
            );
        }
        let _ = writeln!(
            svg,
            "    <circle r=\"{}\" fill=\"none\" stroke=\"#30507a\" stroke-width=\"2\"/>",
            fmt6(fan.circle_radius * scale)
        );
        for w in &fan.wedges {
            let r = fan.circle_radius * scale;
            let a0 = w.start_angle;
            let _ = writeln!(
                svg,
                "    <line x1=\"0\" y1=\"0\" x2=\"{}\" y2=\"{}\" stroke=\"#30507a\" stroke-width=\"1\"/>",
                fmt6(r * a0.cos()),
                fmt6(r * a0.sin())
            );
            let (nx, ny) = w.neighbor_center;
            let _ = writeln!(
                svg,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#b0583c\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>",
                fmt6(nx * scale),
                fmt6(ny * scale),
                fmt6(w.neighbor_radius * scale)
            );
            let mid = w.start_angle + 0.5 * w.extent;
            let label_r = fan.circle_radius * 0.62 * scale;
            let _ = writeln!(
                svg,
                "    <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">{}</text>",
                fmt6(label_r * mid.cos()),
                fmt6(label_r * mid.sin()),
                xml_escape(&w.edge)
            );
        }
        // The final wedge boundary shows any gap or overlap against 2π.
        if let Some(last) = fan.wedges.last() {
            let r = fan.circle_radius * scale;
            let a = last.start_angle + last.extent;
            let _ = writeln!(
                svg,
                "    <line x1=\"0\" y1=\"0\" x2=\"{}\" y2=\"{}\" stroke=\"#b0583c\" stroke-width=\"1.5\"/>",
                fmt6(r * a.cos()),
                fmt6(r * a.sin())
            );
        }
        let excess = fan.cone_excess;
        let note = if excess.abs() < 1e-9 {
            "flat".to_string()
        } else if excess < 0.0 {
            format!("gap {}", fmt6(-excess))
        } else {
            format!("overlap {}", fmt6(excess))
        };
        let _ = writeln!(
            svg,
            "    <text x=\"0\" y=\"{}\" font-size=\"16\" text-anchor=\"middle\" fill=\"#111111\">{} ({})</text>",
            fmt6((0.5 * cell + 0.6 * label_band) * scale),
            xml_escape(&fan.face),
            note
        );
        let _ = writeln!(svg, "  </g>");
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{genus_two_octagon, torus_grid, uniform_problem};
    use crate::solver::{solve, SolveOptions};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn flat_layout() -> LayoutDocument {
        let p =
            uniform_problem(torus_grid(2, 2), Geometry::Euclidean, FRAC_PI_2, 2.0 * PI).unwrap();
        let report = solve(&p, &SolveOptions::default()).unwrap();
        export_layout(&p, &report.radii).unwrap()
    }

    #[test]
    fn flat_torus_fans_are_closed_quarter_circles() {
        let layout = flat_layout();
        assert_eq!(layout.faces.len(), 4);
        for fan in &layout.faces {
            assert_abs_diff_eq!(fan.circle_radius, 0.25, epsilon = 1e-12);
            assert_abs_diff_eq!(fan.cone_excess, 0.0, epsilon = 1e-10);
            let total: f64 = fan.wedges.iter().map(|w| w.extent).sum();
            assert_abs_diff_eq!(total, fan.cone, epsilon = 1e-12);
            for w in &fan.wedges {
                assert_abs_diff_eq!(w.extent, FRAC_PI_2, epsilon = 1e-10);
                assert_abs_diff_eq!(w.edge_length, 0.25 * 2.0_f64.sqrt(), epsilon = 1e-10);
            }
        }
        assert_eq!(layout.gluing.len(), 8);
    }

    #[test]
    fn hyperbolic_fan_shows_the_cone_gap_and_stays_in_the_disk() {
        let p = uniform_problem(
            torus_grid(2, 2),
            Geometry::Hyperbolic,
            FRAC_PI_2,
            2.0 * PI - 0.1,
        )
        .unwrap();
        let report = solve(&p, &SolveOptions::default()).unwrap();
        let layout = export_layout(&p, &report.radii).unwrap();
        for fan in &layout.faces {
            assert_abs_diff_eq!(fan.cone_excess, -0.1, epsilon = 1e-9);
            let total: f64 = fan.wedges.iter().map(|w| w.extent).sum();
            assert_abs_diff_eq!(total, 2.0 * PI - 0.1, epsilon = 1e-9);
            assert!(fan.circle_radius < 1.0);
            for w in &fan.wedges {
                let (cx, cy) = w.neighbor_center;
                assert!(
                    cx.hypot(cy) + w.neighbor_radius < 1.0,
                    "circles stay in the disk"
                );
                for (px, py) in w.apex_points {
                    assert!(px.hypot(py) < 1.0);
                }
            }
        }
    }

    #[test]
    fn disk_model_neighbor_circle_brackets_the_geodesic_span() {
        // The neighbor circle must pass through the two diameter points.
        let (c, r) = neighbor_circle(Geometry::Hyperbolic, 2.0, 0.7);
        assert_abs_diff_eq!(c - r, ((2.0 - 0.7_f64) / 2.0).tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(c + r, ((2.0 + 0.7_f64) / 2.0).tanh(), epsilon = 1e-15);
    }

    #[test]
    fn octagon_fan_glues_to_itself() {
        let p = uniform_problem(
            genus_two_octagon(),
            Geometry::Hyperbolic,
            FRAC_PI_2,
            2.0 * PI,
        )
        .unwrap();
        let report = solve(&p, &SolveOptions::default()).unwrap();
        let layout = export_layout(&p, &report.radii).unwrap();
        assert_eq!(layout.faces.len(), 1);
        let fan = &layout.faces[0];
        assert_eq!(fan.wedges.len(), 8, "both sides of each of the four edges");
        for g in &layout.gluing {
            assert_eq!(g.face_a, "f");
            assert_eq!(g.face_b, "f");
        }
        assert_abs_diff_eq!(fan.cone_excess, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn svg_is_deterministic_and_balanced() {
        let layout = flat_layout();
        let one = render_svg(&layout).unwrap();
        let two = render_svg(&layout).unwrap();
        assert_eq!(one, two, "identical input must render byte-identically");
        assert!(one.starts_with("<svg"));
        assert!(one.trim_end().ends_with("</svg>"));
        assert_eq!(one.matches("<g ").count(), one.matches("</g>").count());
        assert_eq!(one.matches("<svg").count(), one.matches("</svg>").count());
        assert!(!one.contains("NaN") && !one.contains("inf"));
        // Four fans, eight gluing rows → every edge id labels two wedges.
        for e in ["he0_0", "vs1_1"] {
            assert_eq!(one.matches(&format!(">{e}</text>")).count(), 2);
        }
    }
}

//! Ready-made cell complexes for tests, examples, and benchmarks.

use std::collections::BTreeMap;

use crate::complex::{CellComplex, Edge};
use crate::error::Result;
use crate::problem::{Geometry, PatternProblem};

/// Quadrilateral grid on a torus: `rows × cols` faces with both directions
/// wrapped. Faces are `f{r}_{c}`; `he{r}_{c}` is the edge east of face
/// `(r, c)` and `vs{r}_{c}` the edge south of it; vertices are `p{r}_{c}`.
///
/// Grids with a dimension of 1 wrap an edge back onto its own face, which
/// is legal but flagged as nonstandard by validation.
pub fn torus_grid(rows: usize, cols: usize) -> CellComplex {
    assert!(rows >= 1 && cols >= 1, "grid needs at least one face");
    let face = |r: usize, c: usize| format!("f{}_{}", r % rows, c % cols);
    let vertex = |r: usize, c: usize| format!("p{}_{}", r % rows, c % cols);
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            edges.push(Edge {
                id: format!("he{r}_{c}"),
                side_a: face(r, c),
                side_b: face(r, c + 1),
                endpoints: Some((vertex(r, c + 1), vertex(r + 1, c + 1))),
            });
            edges.push(Edge {
                id: format!("vs{r}_{c}"),
                side_a: face(r, c),
                side_b: face(r + 1, c),
                endpoints: Some((vertex(r + 1, c), vertex(r + 1, c + 1))),
            });
        }
    }
    let faces = (0..rows).flat_map(|r| (0..cols).map(move |c| format!("f{r}_{c}")));
    CellComplex::from_edges(faces, edges)
}

/// Genus-two surface as a single octagon with sides identified in pairs:
/// one face `f` with eight sides, four loop edges `a`–`d`, one vertex `p`.
pub fn genus_two_octagon() -> CellComplex {
    let edges = ["a", "b", "c", "d"]
        .into_iter()
        .map(|id| Edge {
            id: id.into(),
            side_a: "f".into(),
            side_b: "f".into(),
            endpoints: Some(("p".into(), "p".into())),
        })
        .collect();
    CellComplex::from_edges(["f"], edges)
}

/// A problem with the same intersection angle on every edge and the same
/// cone target on every face.
pub fn uniform_problem(
    complex: CellComplex,
    geometry: Geometry,
    d: f64,
    phi: f64,
) -> Result<PatternProblem> {
    let ds: BTreeMap<String, f64> = complex.edges.iter().map(|e| (e.id.clone(), d)).collect();
    let phis: BTreeMap<String, f64> = complex.faces.iter().map(|f| (f.id.clone(), phi)).collect();
    PatternProblem::new(complex, geometry, ds, phis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grid_euler_characteristic_is_zero() {
        for (rows, cols) in [(1, 1), (1, 3), (2, 2), (3, 4)] {
            let c = torus_grid(rows, cols);
            let chi = c.vertices.len() as i64 - c.edges.len() as i64 + c.faces.len() as i64;
            assert_eq!(chi, 0, "{rows}x{cols}");
            assert!(c.is_valid(), "{rows}x{cols}");
        }
    }

    #[test]
    fn octagon_euler_characteristic_is_minus_two() {
        let c = genus_two_octagon();
        let chi = c.vertices.len() as i64 - c.edges.len() as i64 + c.faces.len() as i64;
        assert_eq!(chi, -2);
        assert!(c.is_valid());
    }

    #[test]
    fn one_by_two_torus_has_self_glued_edges() {
        let c = torus_grid(1, 2);
        assert!(c.is_valid());
        let self_glued = c.edges.iter().filter(|e| e.side_a == e.side_b).count();
        assert_eq!(
            self_glued, 2,
            "the two vertical edges wrap onto their own face"
        );
    }
}

//! Combinatorial model of a cell-decomposed closed surface: faces, edges
//! with two face-sides each, and optional vertices.
//!
//! Ids are opaque strings at the API boundary; operations that need fast
//! access build a dense index first. A complex is plain data — `validate`
//! reports problems as values rather than failing construction, so malformed
//! inputs can be diagnosed in full.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A face record: its id and the number of edge-sides it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    /// Declared side count `n_f`; must equal the number of edge-side
    /// incidences referencing this face.
    pub sides: usize,
}

/// An edge record: two face-sides (which may name the same face) and
/// optional endpoint vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub side_a: String,
    pub side_b: String,
    pub endpoints: Option<(String, String)>,
}

/// The cell complex: faces, edges, and the (possibly empty) vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellComplex {
    pub faces: Vec<Face>,
    pub edges: Vec<Edge>,
    /// Vertex ids; empty when the decomposition is given without vertices.
    pub vertices: Vec<String>,
}

/// Severity of a [`Diagnostic`]: errors break the invariants, warnings mark
/// legal but unusual structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// One finding from [`CellComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Error => write!(f, "error: {}", self.message),
            Severity::Warning => write!(f, "warning: {}", self.message),
        }
    }
}

impl CellComplex {
    /// Build a complex from face ids and edges, deriving each face's side
    /// count by counting incidences and collecting mentioned endpoint
    /// vertices (sorted) into the vertex set.
    pub fn from_edges<I, S>(face_ids: I, edges: Vec<Edge>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut faces: Vec<Face> = face_ids
            .into_iter()
            .map(|id| Face {
                id: id.into(),
                sides: 0,
            })
            .collect();
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        let mut vertices: BTreeSet<String> = BTreeSet::new();
        for e in &edges {
            *count.entry(e.side_a.as_str()).or_insert(0) += 1;
            *count.entry(e.side_b.as_str()).or_insert(0) += 1;
            if let Some((p, q)) = &e.endpoints {
                vertices.insert(p.clone());
                vertices.insert(q.clone());
            }
        }
        for f in &mut faces {
            f.sides = count.get(f.id.as_str()).copied().unwrap_or(0);
        }
        CellComplex {
            faces,
            edges,
            vertices: vertices.into_iter().collect(),
        }
    }

    /// Check every structural invariant and report all findings.
    ///
    /// Errors: duplicate ids, sides or endpoints referencing missing
    /// records, side counts below 1 or inconsistent with the edge list, a
    /// broken handshake identity `Σ n_f = 2·|edges|`, and unreferenced
    /// faces. Edges with both sides on one face are legal but reported as a
    /// `nonstandard` warning.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let err = |msg: String| Diagnostic {
            severity: Severity::Error,
            message: msg,
        };

        let mut face_ids = BTreeSet::new();
        for f in &self.faces {
            if !face_ids.insert(f.id.as_str()) {
                out.push(err(format!("duplicate face id `{}`", f.id)));
            }
            if f.sides < 1 {
                out.push(err(format!(
                    "face `{}` declares {} sides; must be ≥ 1",
                    f.id, f.sides
                )));
            }
        }
        let mut edge_ids = BTreeSet::new();
        let vertex_ids: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        {
            let mut seen = BTreeSet::new();
            for v in &self.vertices {
                if !seen.insert(v.as_str()) {
                    out.push(err(format!("duplicate vertex id `{v}`")));
                }
            }
        }

        let mut incidence: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id.as_str()) {
                out.push(err(format!("duplicate edge id `{}`", e.id)));
            }
            for side in [&e.side_a, &e.side_b] {
                if face_ids.contains(side.as_str()) {
                    *incidence.entry(side.as_str()).or_insert(0) += 1;
                } else {
                    out.push(err(format!(
                        "edge `{}` references missing face `{side}`",
                        e.id
                    )));
                }
            }
            if e.side_a == e.side_b {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    message: format!(
                        "nonstandard: edge `{}` has both sides on face `{}`",
                        e.id, e.side_a
                    ),
                });
            }
            if let Some((p, q)) = &e.endpoints {
                for v in [p, q] {
                    if !vertex_ids.contains(v.as_str()) {
                        out.push(err(format!(
                            "edge `{}` endpoint references missing vertex `{v}`",
                            e.id
                        )));
                    }
                }
            }
        }

        let declared: usize = self.faces.iter().map(|f| f.sides).sum();
        if declared != 2 * self.edges.len() {
            out.push(err(format!(
                "handshake violation: Σ n_f = {declared} but 2·|edges| = {}",
                2 * self.edges.len()
            )));
        }
        for f in &self.faces {
            let counted = incidence.get(f.id.as_str()).copied().unwrap_or(0);
            if counted == 0 {
                out.push(err(format!(
                    "face `{}` is referenced by no edge side",
                    f.id
                )));
            } else if counted != f.sides {
                out.push(err(format!(
                    "face `{}` declares {} sides but {} edge sides reference it",
                    f.id, f.sides, counted
                )));
            }
        }
        out
    }

    /// The invariant violations only (warnings filtered out); empty exactly
    /// when the complex is valid.
    pub fn violations(&self) -> Vec<String> {
        self.validate()
            .into_iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.message)
            .collect()
    }

    /// True when [`CellComplex::violations`] is empty.
    pub fn is_valid(&self) -> bool {
        self.validate()
            .iter()
            .all(|d| d.severity != Severity::Error)
    }

    /// `E(X)`: the edges having at least one side on a face of `X`. Each
    /// edge appears once even when both sides lie in `X`.
    pub fn edge_set(&self, x: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        let face_ids: BTreeSet<&str> = self.faces.iter().map(|f| f.id.as_str()).collect();
        for id in x {
            if !face_ids.contains(id.as_str()) {
                return Err(Error::InvalidInput(format!("unknown face id `{id}`")));
            }
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| x.contains(&e.side_a) || x.contains(&e.side_b))
            .map(|e| e.id.clone())
            .collect())
    }

    /// Dense index over a valid complex; fails with the list of violations
    /// otherwise.
    pub(crate) fn indexing(&self) -> Result<Indexing> {
        let violations = self.violations();
        if !violations.is_empty() {
            return Err(Error::InvalidInput(format!(
                "invalid cell complex: {}",
                violations.join("; ")
            )));
        }
        let face_of: BTreeMap<String, usize> = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.id.clone(), i))
            .collect();
        let mut sides = Vec::with_capacity(self.edges.len());
        let mut incidences = vec![Vec::new(); self.faces.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            let a = face_of[&e.side_a];
            let b = face_of[&e.side_b];
            sides.push((a, b));
            incidences[a].push((ei, 0));
            incidences[b].push((ei, 1));
        }
        Ok(Indexing {
            face_ids: self.faces.iter().map(|f| f.id.clone()).collect(),
            face_of,
            edge_ids: self.edges.iter().map(|e| e.id.clone()).collect(),
            sides,
            incidences,
        })
    }
}

/// Dense view of a valid complex: faces and edges numbered in input order.
#[derive(Debug, Clone)]
pub(crate) struct Indexing {
    pub face_ids: Vec<String>,
    pub face_of: BTreeMap<String, usize>,
    pub edge_ids: Vec<String>,
    /// Per edge, the indices of the faces on side A and side B.
    pub sides: Vec<(usize, usize)>,
    /// Per face, its edge-side incidences `(edge index, side)`, side 0 = A.
    /// An edge with both sides on a face appears twice.
    pub incidences: Vec<Vec<(usize, u8)>>,
}

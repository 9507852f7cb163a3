//! Structural validators for the host graphs: sphere and projective-plane
//! quadrangulations, and reflexive sphere triangulations.

use serde::Serialize;

use crate::generators;
use crate::graph::{is_isomorphic, Graph, Vertex};
use crate::surface::embedding::{trace_faces, Embedding, FaceList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationKind {
    SphereQuadrangulation,
    ProjectivePlaneQuadrangulation,
    ReflexiveTriangulation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: ValidationKind,
    pub valid: bool,
    pub checks: Vec<Check>,
    pub euler_characteristic: Option<i64>,
    pub face_count: Option<usize>,
    /// Only reported for sphere quadrangulations whose other checks all pass.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_degree_at_least_3: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding_error: Option<String>,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenSubgraph {
    K23,
    K4,
}

/// True iff `h` has no (not necessarily induced) copy of the pattern. Loops
/// are ignored.
pub fn subgraph_free(h: &Graph, pattern: ForbiddenSubgraph) -> bool {
    match pattern {
        // K_{2,3} ⊆ H iff two vertices share three neighbours.
        ForbiddenSubgraph::K23 => h
            .vertices()
            .all(|u| (u + 1..h.vertex_count()).all(|v| h.common_neighbours(u, v).len() < 3)),
        ForbiddenSubgraph::K4 => h.edges().all(|(u, v)| {
            let common = h.common_neighbours(u, v);
            common
                .iter()
                .enumerate()
                .all(|(i, &x)| common[i + 1..].iter().all(|&y| !h.has_edge(x, y)))
        }),
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn push(&mut self, name: &'static str, passed: bool) {
        self.checks.push(Check { name, passed });
    }
}

fn traced(h: &Graph, e: &Embedding) -> (Option<FaceList>, Option<String>) {
    match trace_faces(h, e) {
        Ok(f) => (Some(f), None),
        Err(err) => (None, Some(err.to_string())),
    }
}

fn finish(
    kind: ValidationKind,
    b: Builder,
    faces: Option<FaceList>,
    embedding_error: Option<String>,
) -> ValidationReport {
    ValidationReport {
        kind,
        valid: b.checks.iter().all(|c| c.passed),
        checks: b.checks,
        euler_characteristic: faces.as_ref().map(|f| f.euler_characteristic),
        face_count: faces.as_ref().map(|f| f.faces.len()),
        min_degree_at_least_3: None,
        embedding_error,
    }
}

fn all_faces(faces: &Option<FaceList>, len: usize) -> bool {
    faces
        .as_ref()
        .is_some_and(|f| f.faces.iter().all(|w| w.len() == len))
}

fn chi_is(faces: &Option<FaceList>, chi: i64) -> bool {
    faces.as_ref().is_some_and(|f| f.euler_characteristic == chi)
}

pub fn validate_sphere_quadrangulation(h: &Graph, e: &Embedding) -> ValidationReport {
    let (faces, err) = traced(h, e);
    let mut b = Builder { checks: Vec::new() };
    b.push("embedding", faces.is_some());
    b.push("connected", h.is_connected());
    b.push("irreflexive", h.is_irreflexive());
    b.push("euler_characteristic_2", chi_is(&faces, 2));
    b.push("faces_length_4", all_faces(&faces, 4));
    b.push("k23_free", subgraph_free(h, ForbiddenSubgraph::K23));
    b.push("not_c4", !is_isomorphic(h, &generators::cycle(4).0));
    let mut report = finish(ValidationKind::SphereQuadrangulation, b, faces, err);
    if report.valid {
        report.min_degree_at_least_3 = Some(h.min_degree().is_some_and(|d| d >= 3));
    }
    report
}

pub fn validate_pp_quadrangulation(h: &Graph, e: &Embedding) -> ValidationReport {
    let (faces, err) = traced(h, e);
    let mut b = Builder { checks: Vec::new() };
    b.push("embedding", faces.is_some());
    b.push("connected", h.is_connected());
    b.push("irreflexive", h.is_irreflexive());
    b.push("euler_characteristic_1", chi_is(&faces, 1));
    b.push("faces_length_4", all_faces(&faces, 4));
    b.push("non_bipartite", !h.is_bipartite());
    b.push("k23_free", subgraph_free(h, ForbiddenSubgraph::K23));
    finish(ValidationKind::ProjectivePlaneQuadrangulation, b, faces, err)
}

/// Faces are traced on the underlying irreflexive graph.
pub fn validate_reflexive_triangulation(h: &Graph, e: &Embedding) -> ValidationReport {
    let under = h.underlying_irreflexive();
    let (faces, err) = traced(&under, e);
    let mut b = Builder { checks: Vec::new() };
    b.push("embedding", faces.is_some());
    b.push("all_reflexive", h.is_reflexive());
    b.push("connected", h.is_connected());
    b.push("euler_characteristic_2", chi_is(&faces, 2));
    b.push("faces_length_3", all_faces(&faces, 3));
    b.push("k4_free", subgraph_free(h, ForbiddenSubgraph::K4));
    b.push(
        "not_reflexive_triangle",
        !is_isomorphic(h, &generators::complete(3).reflexive_closure()),
    );
    finish(ValidationKind::ReflexiveTriangulation, b, faces, err)
}

/// Searches for distinct 4-cycles `abcd`, `a'b'cd` with `a ~ b'`; such a
/// configuration cannot occur in a K_{2,3}-free sphere quadrangulation.
/// Returns `[a, b, c, d, a', b']`.
pub fn non_adjacency_counterexample(h: &Graph) -> Option<[Vertex; 6]> {
    for c in h.vertices() {
        for &d in h.neighbours(c) {
            // Paths b-c-d-a closing with edge ab.
            let closings: Vec<(Vertex, Vertex)> = h
                .neighbours(c)
                .iter()
                .filter(|&&b| b != d)
                .flat_map(|&b| {
                    h.neighbours(d)
                        .iter()
                        .filter(move |&&a| a != c && a != b && h.has_edge(a, b))
                        .map(move |&a| (a, b))
                })
                .collect();
            for &(a, b) in &closings {
                for &(a2, b2) in &closings {
                    if (a, b) != (a2, b2) && h.has_edge(a, b2) {
                        return Some([a, b, c, d, a2, b2]);
                    }
                }
            }
        }
    }
    None
}

//! Double covers: moving bipartite instances onto `H × K2`, lifting a
//! projective-plane quadrangulation to the sphere, and the even-wheel
//! retraction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{check_retraction, double_cover, Graph, RetractionCheck, Vertex};
use crate::oracle::Colouring;
use crate::surface::embedding::Embedding;
use crate::surface::validate::{validate_pp_quadrangulation, validate_sphere_quadrangulation, ValidationReport};

/// Lifts `f: G -> H` to `G -> H × K2`: side `A` of the bipartition (the side
/// of the lowest vertex in each component) goes to sheet 1, side `B` to sheet 2.
pub fn bipartite_instance_to_cover(g: &Graph, f: &[Vertex]) -> Result<Colouring> {
    if f.len() != g.vertex_count() {
        return Err(Error::MalformedMap(format!(
            "colouring has {} entries, G has {} vertices",
            f.len(),
            g.vertex_count()
        )));
    }
    let side = g
        .bipartition()
        .ok_or_else(|| Error::Domain("the instance graph is not bipartite".into()))?;
    Ok(f.iter().zip(&side).map(|(&c, &b)| 2 * c + b as usize).collect())
}

/// Composes a colouring into `H × K2` with the first projection.
pub fn cover_to_instance(f: &[Vertex]) -> Colouring {
    f.iter().map(|&c| c / 2).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PpLift {
    /// Equal to `double_cover(H)` edge for edge.
    pub graph: Graph,
    pub embedding: Embedding,
    /// `sheets[w]` is the covering vertex (`2v + s`, sheet `s`) sent to
    /// cover vertex `w` by the bijection `q × φ`.
    pub sheets: Vec<Vertex>,
    pub validation: ValidationReport,
}

/// Orientation double cover of a signed rotation system of a non-bipartite
/// projective-plane quadrangulation, relabelled onto `H × K2`.
pub fn pp_lift(h: &Graph, e: &Embedding) -> Result<PpLift> {
    let report = validate_pp_quadrangulation(h, e);
    if h.is_bipartite() {
        return Err(Error::Precondition("H is bipartite, so H x K2 is two disjoint copies of H".into()));
    }
    if !report.valid {
        return Err(Error::Precondition(format!(
            "not a projective-plane quadrangulation: failed {:?}",
            report.failed_checks()
        )));
    }
    let n = h.vertex_count();
    // Sheet 0 keeps each rotation, sheet 1 reverses it; negative edges cross sheets.
    let at = |v: Vertex, s: usize| 2 * v + s;
    let mut sheet_rot = vec![Vec::new(); 2 * n];
    for v in h.vertices() {
        for s in 0..2 {
            let mut rot: Vec<Vertex> = e
                .rotation(v)
                .iter()
                .map(|&w| at(w, if e.sign(v, w) < 0 { 1 - s } else { s }))
                .collect();
            if s == 1 {
                rot.reverse();
            }
            sheet_rot[at(v, s)] = rot;
        }
    }
    let edges: BTreeSet<(Vertex, Vertex)> = sheet_rot
        .iter()
        .enumerate()
        .flat_map(|(x, rot)| rot.iter().map(move |&y| (x.min(y), x.max(y))))
        .collect();
    let sheets_graph = Graph::from_edges(2 * n, edges)?;
    let phi = sheets_graph
        .bipartition()
        .ok_or_else(|| Error::violation("the lift is bipartite", "the covering graph has an odd cycle"))?;
    // q × φ: x = (v, s) -> (v, φ(x)).
    let to_cover: Vec<Vertex> = (0..2 * n).map(|x| 2 * (x / 2) + phi[x] as usize).collect();
    if let Some(v) = h.vertices().find(|&v| phi[at(v, 0)] == phi[at(v, 1)]) {
        return Err(Error::violation("q x phi is a bijection", format!("both lifts of {v} get the same side")));
    }
    let mut sheets = vec![0; 2 * n];
    for (x, &w) in to_cover.iter().enumerate() {
        sheets[w] = x;
    }
    let rotations: Vec<Vec<Vertex>> = (0..2 * n)
        .map(|w| sheet_rot[sheets[w]].iter().map(|&y| to_cover[y]).collect())
        .collect();
    let embedding = Embedding::orientable(rotations);
    let mut b = Graph::builder(2 * n);
    for &(x, y) in sheets_graph.edges().collect::<Vec<_>>().iter() {
        b.add_edge(to_cover[x], to_cover[y])?;
    }
    let cover = double_cover(h);
    for w in 0..2 * n {
        b.set_label(w, cover.label(w));
    }
    let graph = b.build();
    if graph.edges().ne(cover.edges()) {
        return Err(Error::violation(
            "the lift is isomorphic to H x K2",
            "relabelled edges differ from the categorical product",
        ));
    }
    let validation = validate_sphere_quadrangulation(&graph, &embedding);
    Ok(PpLift {
        graph,
        embedding,
        sheets,
        validation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WheelRetraction {
    pub k: usize,
    /// `W_k × K2`; rim vertex `i` and hub `k` of the wheel, sheet `s`, at `2v + s`.
    pub f: Graph,
    /// Vertices of `H_k` in `F`: the cycle `{(i, i mod 2)}` and both hubs.
    pub h_vertices: Vec<Vertex>,
    /// The retraction `F -> H_k` as a map on `V(F)`.
    pub phi: Vec<Vertex>,
    pub check: RetractionCheck,
    /// `H_k` relabelled to `0..k+2` in the order of `h_vertices`, with its
    /// sphere embedding.
    pub h: Graph,
    pub embedding: Embedding,
    pub validation: ValidationReport,
}

/// Retraction of `W_k × K2` onto a sphere quadrangulation, for even `k >= 6`.
pub fn wheel_retraction(k: usize) -> Result<WheelRetraction> {
    if k < 6 || k % 2 == 1 {
        return Err(Error::Domain(format!("the wheel retraction needs even k >= 6, got {k}")));
    }
    let (wheel, _) = generators::wheel(k);
    let f = double_cover(&wheel);
    let at = |v: Vertex, s: usize| 2 * v + s;
    let mut h_vertices: Vec<Vertex> = (0..k).map(|i| at(i, i % 2)).collect();
    h_vertices.extend([at(k, 0), at(k, 1)]);
    let phi: Vec<Vertex> = f
        .vertices()
        .map(|x| {
            let (v, s) = (x / 2, x % 2);
            if v == k || v % 2 == s {
                x
            } else {
                at((v + 1) % k, s)
            }
        })
        .collect();
    let check = check_retraction(&f, &h_vertices, &phi)?;
    let (h, _) = f.induced(&h_vertices)?;
    // Hub k+s of H_k sees the rim vertices of the other parity.
    let faces: Vec<Vec<Vertex>> = (0..k)
        .map(|i| {
            let hub = k + (1 - i % 2);
            vec![hub, i, (i + 1) % k, (i + 2) % k]
        })
        .collect();
    let embedding = Embedding::from_faces(&h, &faces)?;
    let validation = validate_sphere_quadrangulation(&h, &embedding);
    Ok(WheelRetraction {
        k,
        f,
        h_vertices,
        phi,
        check,
        h,
        embedding,
        validation,
    })
}

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::surface::embedding::{trace_faces, Embedding, FaceList};
use crate::surface::validate::{subgraph_free, ForbiddenSubgraph};

/// An ordered pair of distinct, non-adjacent vertices sharing a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AcrossPair {
    pub a: Vertex,
    pub b: Vertex,
    /// Index into the traced face list.
    pub face: usize,
}

/// Labelled neighbourhood of a degree-three vertex `0` in a quadrangulation:
/// `ring[i]` is the vertex opposite `0` on the `i`-th face around it, and
/// `alphas = [α12, α23, α31]` the common neighbours of `0` with consecutive
/// ring vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub zero: Vertex,
    pub ring: [Vertex; 3],
    pub alphas: [Vertex; 3],
    pub faces: [usize; 3],
}

impl Anchor {
    pub fn one(&self) -> Vertex {
        self.ring[0]
    }
    pub fn alpha12(&self) -> Vertex {
        self.alphas[0]
    }
    pub fn alpha23(&self) -> Vertex {
        self.alphas[1]
    }
    pub fn alpha31(&self) -> Vertex {
        self.alphas[2]
    }
}

pub fn across_pairs(h: &Graph, e: &Embedding) -> Result<Vec<AcrossPair>> {
    let faces = trace_faces(h, e)?;
    across_pairs_of(h, &faces)
}

/// Across pairs from an already traced face list. On K_{2,3}-free graphs
/// other than the 4-cycle the face of each pair must be unique.
pub fn across_pairs_of(h: &Graph, faces: &FaceList) -> Result<Vec<AcrossPair>> {
    let mut found: BTreeMap<(Vertex, Vertex), BTreeSet<usize>> = BTreeMap::new();
    for (fi, face) in faces.faces.iter().enumerate() {
        for &a in face {
            for &b in face {
                if a != b && !h.has_edge(a, b) {
                    found.entry((a, b)).or_default().insert(fi);
                }
            }
        }
    }
    let unique_required = h.vertex_count() > 4 && subgraph_free(h, ForbiddenSubgraph::K23);
    found
        .into_iter()
        .map(|((a, b), fs)| {
            if unique_required && fs.len() > 1 {
                return Err(Error::violation(
                    "unique face per across pair",
                    format!("({a}, {b}) shares faces {fs:?}"),
                ));
            }
            Ok(AcrossPair {
                a,
                b,
                face: *fs.first().unwrap(),
            })
        })
        .collect()
}

/// Labels the neighbourhood of a degree-three vertex. With `zero = None` the
/// lowest-id vertex of degree three is used; the ring starts at the opposite
/// vertex of lowest id and follows the rotation at `0`.
pub fn find_anchor(h: &Graph, e: &Embedding, zero: Option<Vertex>) -> Result<Anchor> {
    let faces = trace_faces(h, e)?;
    find_anchor_in(h, e, &faces, zero)
}

pub fn find_anchor_in(h: &Graph, e: &Embedding, faces: &FaceList, zero: Option<Vertex>) -> Result<Anchor> {
    let zero = match zero {
        Some(z) if z < h.vertex_count() && h.degree(z) == 3 => z,
        Some(z) => {
            return Err(Error::Precondition(format!("vertex {z} does not have degree three")));
        }
        None => h
            .vertices()
            .find(|&v| h.degree(v) == 3)
            .ok_or_else(|| Error::Precondition("no vertex of degree three".into()))?,
    };
    let rot = e.rotation(zero);
    // The face through the corner (rot[j], 0, rot[j+1]) and its opposite vertex.
    let mut corners = Vec::with_capacity(3);
    for j in 0..3 {
        let (p, q) = (rot[j], rot[(j + 1) % 3]);
        let hit = faces.faces.iter().enumerate().find_map(|(fi, f)| {
            if f.len() != 4 {
                return None;
            }
            let t = f.iter().position(|&v| v == zero)?;
            let (prev, next) = (f[(t + 3) % 4], f[(t + 1) % 4]);
            ((prev, next) == (p, q) || (prev, next) == (q, p)).then_some((fi, f[(t + 2) % 4]))
        });
        let (fi, opposite) = hit.ok_or_else(|| {
            Error::Precondition(format!("no quadrilateral face through corner ({p}, {zero}, {q})"))
        })?;
        corners.push((fi, opposite));
    }
    let start = (0..3).min_by_key(|&j| corners[j].1).unwrap();
    let order = [start, (start + 1) % 3, (start + 2) % 3];
    let ring = order.map(|j| corners[j].1);
    let face_ids = order.map(|j| corners[j].0);
    if ring[0] == ring[1] || ring[1] == ring[2] || ring[0] == ring[2] {
        return Err(Error::violation("distinct ring vertices", format!("{ring:?}")));
    }
    if let Some(&r) = ring.iter().find(|&&r| h.has_edge(r, zero)) {
        return Err(Error::violation("ring across from 0", format!("{r} is adjacent to {zero}")));
    }
    let alpha = |i: Vertex, j: Vertex| -> Result<Vertex> {
        let common: Vec<Vertex> = h
            .neighbours(zero)
            .iter()
            .copied()
            .filter(|&w| h.has_edge(w, i) && h.has_edge(w, j))
            .collect();
        match common.as_slice() {
            [w] => Ok(*w),
            _ => Err(Error::violation(
                "unique common neighbour of 0, i, j",
                format!("{common:?} for ({i}, {j})"),
            )),
        }
    };
    let alphas = [alpha(ring[0], ring[1])?, alpha(ring[1], ring[2])?, alpha(ring[2], ring[0])?];
    if alphas[0] == alphas[1] || alphas[1] == alphas[2] || alphas[0] == alphas[2] {
        return Err(Error::violation("distinct alphas", format!("{alphas:?}")));
    }
    Ok(Anchor {
        zero,
        ring,
        alphas,
        faces: face_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn c4_across_pairs_are_the_diagonals() {
        let (c4, e) = generators::cycle(4);
        let pairs = across_pairs(&c4, &e).unwrap();
        let ab: Vec<(Vertex, Vertex)> = pairs.iter().map(|p| (p.a, p.b)).collect();
        assert_eq!(ab, vec![(0, 2), (1, 3), (2, 0), (3, 1)]);
    }

    #[test]
    fn cube_has_twenty_four_across_pairs() {
        let (cube, e) = generators::cube();
        let pairs = across_pairs(&cube, &e).unwrap();
        assert_eq!(pairs.len(), 24);
        assert!(pairs.iter().all(|p| !cube.has_edge(p.a, p.b)));
    }

    #[test]
    fn cube_anchor_matches_coordinates() {
        let (cube, e) = generators::cube();
        for zero in cube.vertices() {
            let anchor = find_anchor(&cube, &e, Some(zero)).unwrap();
            // Ring vertices differ from 0 in exactly two coordinates, alphas in one.
            for r in anchor.ring {
                assert_eq!((r ^ zero).count_ones(), 2);
            }
            for a in anchor.alphas {
                assert_eq!((a ^ zero).count_ones(), 1);
            }
            let [r1, r2, _] = anchor.ring;
            assert_eq!(anchor.alpha12(), zero ^ (r1 ^ zero) & (r2 ^ zero));
        }
    }

    #[test]
    fn c4_has_no_anchor() {
        let (c4, e) = generators::cycle(4);
        assert!(matches!(find_anchor(&c4, &e, None), Err(Error::Precondition(_))));
    }
}

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A rotation system with edge signs (+1 everywhere means orientable).
///
/// Loops never appear in rotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    rotations: Vec<Vec<Vertex>>,
    negative: BTreeSet<(Vertex, Vertex)>,
}

/// Faces of an embedding as closed walks, plus `V - E + F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceList {
    pub faces: Vec<Vec<Vertex>>,
    pub euler_characteristic: i64,
}

impl FaceList {
    pub fn face_lengths(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    (u.min(v), u.max(v))
}

impl Embedding {
    pub fn new<I>(rotations: Vec<Vec<Vertex>>, negative_edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Embedding {
            rotations,
            negative: negative_edges.into_iter().map(|(u, v)| key(u, v)).collect(),
        }
    }

    pub fn orientable(rotations: Vec<Vec<Vertex>>) -> Self {
        Self::new(rotations, [])
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotations
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotations[v]
    }

    /// `+1` or `-1`.
    pub fn sign(&self, u: Vertex, v: Vertex) -> i8 {
        if self.negative.contains(&key(u, v)) {
            -1
        } else {
            1
        }
    }

    pub fn negative_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.negative.iter().copied()
    }

    pub fn is_all_positive(&self) -> bool {
        self.negative.is_empty()
    }

    /// Every non-loop edge appears exactly once in each endpoint's rotation,
    /// and signs sit on edges.
    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.rotations.len() != g.vertex_count() {
            return Err(Error::MalformedEmbedding(format!(
                "{} rotations for {} vertices",
                self.rotations.len(),
                g.vertex_count()
            )));
        }
        for v in g.vertices() {
            let mut rot = self.rotations[v].clone();
            rot.sort_unstable();
            if rot != g.neighbours(v) {
                return Err(Error::MalformedEmbedding(format!(
                    "rotation at {v} is {:?}, expected a permutation of {:?}",
                    self.rotations[v],
                    g.neighbours(v)
                )));
            }
        }
        if let Some(&(u, v)) = self.negative.iter().find(|&&(u, v)| u == v || !g.has_edge(u, v)) {
            return Err(Error::MalformedEmbedding(format!("signed pair ({u}, {v}) is not an edge")));
        }
        Ok(())
    }

    /// Builds a rotation system from a straight-line plane drawing.
    pub fn from_planar_drawing(g: &Graph, coords: &[[f64; 2]]) -> Embedding {
        let rotations = g
            .vertices()
            .map(|v| {
                let mut nb: Vec<(f64, Vertex)> = g
                    .neighbours(v)
                    .iter()
                    .map(|&u| {
                        let dx = coords[u][0] - coords[v][0];
                        let dy = coords[u][1] - coords[v][1];
                        (dy.atan2(dx), u)
                    })
                    .collect();
                nb.sort_by(|a, b| a.0.total_cmp(&b.0));
                nb.into_iter().map(|(_, u)| u).collect()
            })
            .collect();
        Embedding::orientable(rotations)
    }

    /// Builds a rotation system from the vertex positions of a convex
    /// polyhedron: neighbours are ordered counter-clockwise seen from outside.
    pub fn from_polyhedron(g: &Graph, coords: &[[f64; 3]]) -> Embedding {
        let n = coords.len() as f64;
        let centroid = (0..3).map(|k| coords.iter().map(|p| p[k]).sum::<f64>() / n).collect::<Vec<_>>();
        let sub = |a: [f64; 3], b: &[f64]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let rotations = g
            .vertices()
            .map(|v| {
                let normal = sub(coords[v], &centroid);
                let seed = if normal[0].abs() < 0.9 * normal.iter().map(|x| x.abs()).fold(0.0, f64::max) {
                    [1.0, 0.0, 0.0]
                } else {
                    [0.0, 1.0, 0.0]
                };
                let e1 = cross(normal, seed);
                let e2 = cross(normal, e1);
                let mut nb: Vec<(f64, Vertex)> = g
                    .neighbours(v)
                    .iter()
                    .map(|&u| {
                        let d = sub(coords[u], &coords[v]);
                        (dot(d, e2).atan2(dot(d, e1)), u)
                    })
                    .collect();
                nb.sort_by(|a, b| a.0.total_cmp(&b.0));
                nb.into_iter().map(|(_, u)| u).collect()
            })
            .collect();
        Embedding::orientable(rotations)
    }

    /// Recovers a signed rotation system from the face boundaries of a closed
    /// surface. Each face is a cyclic vertex sequence; every edge must be
    /// traversed exactly twice over all faces. Local orientations are then
    /// normalised so that a spanning forest carries only positive signs, which
    /// makes orientable surfaces come out all-positive.
    pub fn from_faces(g: &Graph, faces: &[Vec<Vertex>]) -> Result<Embedding> {
        let n = g.vertex_count();
        // Corners at each vertex: (prev, next, corner id).
        let mut corners: Vec<Vec<(Vertex, Vertex, usize)>> = vec![Vec::new(); n];
        let mut corner_at: Vec<Vec<usize>> = Vec::with_capacity(faces.len());
        let mut edge_uses: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        let mut next_id = 0;
        for face in faces {
            let len = face.len();
            if len < 2 {
                return Err(Error::MalformedEmbedding("face shorter than two".into()));
            }
            let mut ids = Vec::with_capacity(len);
            for t in 0..len {
                let (u, v, w) = (face[(t + len - 1) % len], face[t], face[(t + 1) % len]);
                if v >= n || !g.has_edge(v, w) || v == w {
                    return Err(Error::MalformedEmbedding(format!("face step ({v}, {w}) is not an edge")));
                }
                *edge_uses.entry(key(v, w)).or_default() += 1;
                corners[v].push((u, w, next_id));
                ids.push(next_id);
                next_id += 1;
            }
            corner_at.push(ids);
        }
        if edge_uses.len() != g.edge_count() || edge_uses.values().any(|&c| c != 2) {
            return Err(Error::MalformedEmbedding(
                "every edge must be used exactly twice by the faces".into(),
            ));
        }
        // Walk each vertex link; record the rotation and the direction in which
        // each corner is passed (+1 when passed from its `prev` side).
        let mut rotations = vec![Vec::new(); n];
        let mut corner_dir = vec![0i8; next_id];
        for v in 0..n {
            let cs = &corners[v];
            if cs.is_empty() {
                continue;
            }
            let mut used = vec![false; cs.len()];
            let start = cs[0].0;
            let mut at = start;
            let mut rot = Vec::with_capacity(cs.len());
            loop {
                let Some(k) = (0..cs.len()).find(|&k| !used[k] && (cs[k].0 == at || cs[k].1 == at)) else {
                    return Err(Error::MalformedEmbedding(format!("link of {v} is not a cycle")));
                };
                used[k] = true;
                rot.push(at);
                let (prev, next, id) = cs[k];
                let (dir, to) = if prev == at { (1, next) } else { (-1, prev) };
                corner_dir[id] = dir;
                at = to;
                if at == start && used.iter().all(|&u| u) {
                    break;
                }
                if at == start {
                    return Err(Error::MalformedEmbedding(format!(
                        "link of {v} splits into several cycles (pinched vertex)"
                    )));
                }
            }
            rotations[v] = rot;
        }
        // Edge signs from consecutive corners along each face.
        let mut sign: BTreeMap<(Vertex, Vertex), i8> = BTreeMap::new();
        for (face, ids) in faces.iter().zip(&corner_at) {
            let len = face.len();
            for t in 0..len {
                let s = corner_dir[ids[t]] * corner_dir[ids[(t + 1) % len]];
                let k = key(face[t], face[(t + 1) % len]);
                match sign.insert(k, s) {
                    Some(old) if old != s => {
                        return Err(Error::MalformedEmbedding(format!(
                            "inconsistent orientation along edge {k:?}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        let emb = Embedding::new(
            rotations,
            sign.into_iter().filter(|&(_, s)| s < 0).map(|(k, _)| k),
        );
        emb.check(g)?;
        Ok(emb.normalised(g))
    }

    /// Equivalent embedding with reversed local orientations chosen so that
    /// every spanning-forest edge is positive.
    pub fn normalised(&self, g: &Graph) -> Embedding {
        let n = g.vertex_count();
        let mut flip: Vec<Option<i8>> = vec![None; n];
        for root in 0..n {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(1);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &u in g.neighbours(v) {
                    if flip[u].is_none() {
                        flip[u] = Some(self.sign(v, u) * flip[v].unwrap());
                        queue.push_back(u);
                    }
                }
            }
        }
        let flip: Vec<i8> = flip.into_iter().map(Option::unwrap).collect();
        let rotations = self
            .rotations
            .iter()
            .enumerate()
            .map(|(v, rot)| {
                if flip[v] < 0 {
                    rot.iter().rev().copied().collect()
                } else {
                    rot.clone()
                }
            })
            .collect();
        let negative = g
            .edges()
            .filter(|&(u, v)| self.sign(u, v) * flip[u] * flip[v] < 0)
            .collect::<Vec<_>>();
        Embedding::new(rotations, negative)
    }
}

/// Traces the faces of a (possibly non-orientable) rotation system.
///
/// A walk carries a local orientation that flips on negative edges; arriving
/// at `u` from `v` it leaves along the successor of `v` in `u`'s rotation when
/// the orientation is positive and the predecessor otherwise.
pub fn trace_faces(g: &Graph, e: &Embedding) -> Result<FaceList> {
    e.check(g)?;
    let n = g.vertex_count();
    let mut offset = Vec::with_capacity(n + 1);
    offset.push(0);
    for v in 0..n {
        offset.push(offset[v] + e.rotations[v].len());
    }
    let darts = offset[n];
    // Position of each neighbour in each rotation.
    let mut position: Vec<Vec<(Vertex, usize)>> = e
        .rotations
        .iter()
        .map(|rot| rot.iter().enumerate().map(|(i, &u)| (u, i)).collect())
        .collect();
    position.iter_mut().for_each(|p| p.sort_unstable());
    let pos = |v: Vertex, u: Vertex| -> usize {
        let p = &position[v];
        p[p.binary_search_by_key(&u, |&(w, _)| w).expect("rotation checked")].1
    };
    let state = |v: Vertex, i: usize, o: i8| 2 * (offset[v] + i) + usize::from(o < 0);

    let mut visited = vec![false; 2 * darts];
    let mut faces = Vec::new();
    for v0 in 0..n {
        if e.rotations[v0].is_empty() {
            faces.push(vec![v0]);
            continue;
        }
        for i0 in 0..e.rotations[v0].len() {
            for o0 in [1i8, -1] {
                if visited[state(v0, i0, o0)] {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut v, mut i, mut o) = (v0, i0, o0);
                loop {
                    visited[state(v, i, o)] = true;
                    walk.push(v);
                    let u = e.rotations[v][i];
                    let o_next = o * e.sign(v, u);
                    let j = pos(u, v);
                    visited[state(u, j, -o_next)] = true;
                    let deg = e.rotations[u].len();
                    let i_next = if o_next > 0 { (j + 1) % deg } else { (j + deg - 1) % deg };
                    (v, i, o) = (u, i_next, o_next);
                    if (v, i, o) == (v0, i0, o0) {
                        break;
                    }
                    if walk.len() > 2 * darts {
                        return Err(Error::MalformedEmbedding("face walk does not close".into()));
                    }
                }
                faces.push(walk);
            }
        }
    }
    let chi = n as i64 - g.edge_count() as i64 + faces.len() as i64;
    Ok(FaceList {
        faces,
        euler_characteristic: chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn planar_c4_has_two_square_faces() {
        let (c4, e) = generators::cycle(4);
        let faces = trace_faces(&c4, &e).unwrap();
        assert_eq!(faces.face_lengths(), vec![4, 4]);
        assert_eq!(faces.euler_characteristic, 2);
    }

    #[test]
    fn c5_with_one_twisted_edge_has_a_single_face_of_length_ten() {
        let (c5, _) = generators::cycle(5);
        let rotations = (0..5).map(|v| vec![(v + 4) % 5, (v + 1) % 5]).collect();
        let e = Embedding::new(rotations, [(4, 0)]);
        let faces = trace_faces(&c5, &e).unwrap();
        assert_eq!(faces.face_lengths(), vec![10]);
        assert_eq!(faces.euler_characteristic, 1);
    }

    #[test]
    fn cube_has_six_square_faces() {
        let (cube, e) = generators::cube();
        let faces = trace_faces(&cube, &e).unwrap();
        assert_eq!(faces.face_lengths(), vec![4; 6]);
        assert_eq!(faces.euler_characteristic, 2);
    }

    #[test]
    fn inconsistent_rotations_are_rejected() {
        let (c4, _) = generators::cycle(4);
        let bad = Embedding::orientable(vec![vec![1, 2], vec![0, 2], vec![1, 3], vec![2, 0]]);
        assert!(matches!(trace_faces(&c4, &bad), Err(Error::MalformedEmbedding(_))));
        let short = Embedding::orientable(vec![vec![1, 3]]);
        assert!(trace_faces(&c4, &short).is_err());
    }

    #[test]
    fn face_list_round_trips_through_from_faces() {
        for (g, e) in [generators::cube(), generators::reflexive_icosahedron()] {
            let g = g.underlying_irreflexive();
            let faces = trace_faces(&g, &e).unwrap();
            let rebuilt = Embedding::from_faces(&g, &faces.faces).unwrap();
            assert!(rebuilt.is_all_positive());
            let again = trace_faces(&g, &rebuilt).unwrap();
            assert_eq!(again.face_lengths().len(), faces.faces.len());
            assert_eq!(again.euler_characteristic, 2);
        }
    }

    #[test]
    fn from_faces_rejects_pinched_links() {
        // Two triangles glued at one vertex only: the link of 0 is two cycles.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let faces = vec![vec![0, 1, 2], vec![0, 2, 1], vec![0, 3, 4], vec![0, 4, 3]];
        assert!(Embedding::from_faces(&g, &faces).is_err());
    }
}

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::surface::anchor::across_pairs_of;
use crate::surface::embedding::{trace_faces, Embedding, FaceList};

pub type Pair = (Vertex, Vertex);

/// Digraph on ordered pairs with an arc `(a,b) -> (c,d)` iff
/// `ac, bc, bd` are edges and `ad` is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiDigraph {
    pub vertices: Vec<Pair>,
    pub out: Vec<Vec<usize>>,
    #[serde(skip)]
    index: BTreeMap<Pair, usize>,
}

impl PhiDigraph {
    /// Builds the digraph on `vertices` (deduplicated and sorted).
    pub fn on_pairs(h: &Graph, vertices: impl IntoIterator<Item = Pair>) -> PhiDigraph {
        let vertices: Vec<Pair> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<Pair, usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let out = vertices
            .iter()
            .map(|&(a, b)| {
                // c ranges over common neighbours of a and b, d over neighbours of b.
                let mut arcs = Vec::new();
                for (j, &(c, d)) in vertices.iter().enumerate() {
                    if arc_condition(h, (a, b), (c, d)) {
                        arcs.push(j);
                    }
                }
                arcs
            })
            .collect();
        PhiDigraph { vertices, out, index }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, p: Pair) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.index.contains_key(&p)
    }

    pub fn has_arc(&self, from: Pair, to: Pair) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(i), Some(j)) => self.out[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Pair, Pair)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(i, js)| js.iter().map(move |&j| (self.vertices[i], self.vertices[j])))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        self.out.iter().flatten().for_each(|&j| d[j] += 1);
        d
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(Vec::len).collect()
    }

    /// First arc whose reversal `(d,c) -> (b,a)` is missing.
    pub fn reversal_counterexample(&self) -> Option<(Pair, Pair)> {
        self.arcs().find(|&((a, b), (c, d))| !self.has_arc((d, c), (b, a)))
    }

    /// Underlying undirected edge set as sorted index pairs.
    pub fn underlying_edges(&self) -> BTreeSet<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, js)| js.iter().map(move |&j| (i.min(j), i.max(j))))
            .collect()
    }

    /// Shortest directed path by BFS, endpoints included.
    pub fn path(&self, from: Pair, to: Pair) -> Result<Vec<Pair>> {
        let s = self
            .index_of(from)
            .ok_or_else(|| Error::Precondition(format!("{from:?} is not a vertex of the pair digraph")))?;
        let t = self
            .index_of(to)
            .ok_or_else(|| Error::Precondition(format!("{to:?} is not a vertex of the pair digraph")))?;
        let mut parent = vec![usize::MAX; self.vertices.len()];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            if i == t {
                break;
            }
            for &j in &self.out[i] {
                if parent[j] == usize::MAX {
                    parent[j] = i;
                    queue.push_back(j);
                }
            }
        }
        if parent[t] == usize::MAX {
            return Err(Error::violation(
                "pair digraph strongly connected",
                format!("no directed path from {from:?} to {to:?}"),
            ));
        }
        let mut path = vec![self.vertices[t]];
        let mut at = t;
        while at != s {
            at = parent[at];
            path.push(self.vertices[at]);
        }
        path.reverse();
        Ok(path)
    }
}

pub(crate) fn arc_condition(h: &Graph, (a, b): Pair, (c, d): Pair) -> bool {
    h.has_edge(a, c) && h.has_edge(b, c) && h.has_edge(b, d) && !h.has_edge(a, d)
}

/// Names the first failing clause of the arc condition.
pub(crate) fn explain_missing_arc(h: &Graph, (a, b): Pair, (c, d): Pair) -> String {
    let clause = if !h.has_edge(a, c) {
        format!("{a}{c} is not an edge")
    } else if !h.has_edge(b, c) {
        format!("{b}{c} is not an edge")
    } else if !h.has_edge(b, d) {
        format!("{b}{d} is not an edge")
    } else if h.has_edge(a, d) {
        format!("{a}{d} is an edge")
    } else {
        "an endpoint is not a vertex of the digraph".into()
    };
    format!("no arc ({a},{b}) -> ({c},{d}): {clause}")
}

fn face_edges(face: &[Vertex]) -> BTreeSet<Pair> {
    (0..face.len())
        .map(|i| {
            let (u, v) = (face[i], face[(i + 1) % face.len()]);
            (u.min(v), u.max(v))
        })
        .collect()
}

/// Pairs `(a,b)`, `(c,d)` of across pairs on distinct faces sharing exactly
/// one edge, with `a ~ c` and `b ~ d`. Returned as sorted index pairs into
/// `phi.vertices`.
pub fn build_gamma(h: &Graph, faces: &FaceList, phi: &PhiDigraph) -> Result<BTreeSet<(usize, usize)>> {
    let pairs = across_pairs_of(h, faces)?;
    let face_of: BTreeMap<Pair, usize> = pairs.iter().map(|p| ((p.a, p.b), p.face)).collect();
    let edges: Vec<BTreeSet<Pair>> = faces.faces.iter().map(|f| face_edges(f)).collect();
    let mut gamma = BTreeSet::new();
    for (i, &(a, b)) in phi.vertices.iter().enumerate() {
        for (j, &(c, d)) in phi.vertices.iter().enumerate().skip(i + 1) {
            let (f, g) = (face_of[&(a, b)], face_of[&(c, d)]);
            if f != g && edges[f].intersection(&edges[g]).count() == 1 && h.has_edge(a, c) && h.has_edge(b, d) {
                gamma.insert((i, j));
            }
        }
    }
    Ok(gamma)
}

fn connected(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// The pair digraph on the across pairs of a sphere quadrangulation, with
/// its structural properties enforced: in- and out-degree two everywhere,
/// reversal symmetry, underlying graph equal to the face-adjacency graph
/// and connectivity of the latter.
pub fn build_phi_quad(h: &Graph, e: &Embedding) -> Result<PhiDigraph> {
    let faces = trace_faces(h, e)?;
    let pairs = across_pairs_of(h, &faces)?;
    let phi = PhiDigraph::on_pairs(h, pairs.iter().map(|p| (p.a, p.b)));
    let (ins, outs) = (phi.in_degrees(), phi.out_degrees());
    if let Some(i) = (0..phi.vertex_count()).find(|&i| ins[i] != 2 || outs[i] != 2) {
        return Err(Error::violation(
            "in- and out-degree two",
            format!("{:?} has in-degree {} and out-degree {}", phi.vertices[i], ins[i], outs[i]),
        ));
    }
    if let Some((p, q)) = phi.reversal_counterexample() {
        return Err(Error::violation("reversal symmetry", format!("arc {p:?} -> {q:?} has no reverse")));
    }
    let gamma = build_gamma(h, &faces, &phi)?;
    let under = phi.underlying_edges();
    if gamma != under {
        let diff: Vec<_> = gamma.symmetric_difference(&under).take(3).collect();
        return Err(Error::violation(
            "underlying graph equals face-adjacency graph",
            format!("differ on {diff:?}"),
        ));
    }
    if !connected(phi.vertex_count(), &gamma) {
        return Err(Error::violation("face-adjacency graph connected", "disconnected"));
    }
    Ok(phi)
}

/// Shortest directed path in `phi`; failure contradicts strong connectivity.
pub fn phi_path(phi: &PhiDigraph, from: Pair, to: Pair) -> Result<Vec<Pair>> {
    phi.path(from, to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn cube_phi_shape() {
        let (cube, e) = generators::cube();
        let phi = build_phi_quad(&cube, &e).unwrap();
        assert_eq!(phi.vertex_count(), 24);
        assert_eq!(phi.arc_count(), 48);
        assert!(phi.in_degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn arcs_cross_exactly_one_shared_edge() {
        let (cube, e) = generators::cube();
        let faces = trace_faces(&cube, &e).unwrap();
        let phi = build_phi_quad(&cube, &e).unwrap();
        let pairs = across_pairs_of(&cube, &faces).unwrap();
        let face_of: BTreeMap<Pair, usize> = pairs.iter().map(|p| ((p.a, p.b), p.face)).collect();
        for ((a, b), (c, d)) in phi.arcs() {
            let f = face_edges(&faces.faces[face_of[&(a, b)]]);
            let g = face_edges(&faces.faces[face_of[&(c, d)]]);
            let shared: Vec<_> = f.intersection(&g).collect();
            assert_eq!(shared, vec![&(b.min(c), b.max(c))]);
        }
    }

    #[test]
    fn all_pairs_paths_on_the_cube() {
        let (cube, e) = generators::cube();
        let phi = build_phi_quad(&cube, &e).unwrap();
        for &p in &phi.vertices {
            for &q in &phi.vertices {
                let path = phi_path(&phi, p, q).unwrap();
                assert_eq!((path[0], *path.last().unwrap()), (p, q));
                assert!(path.len() <= 24);
                assert!(path.windows(2).all(|w| phi.has_arc(w[0], w[1])));
            }
        }
        assert_eq!(phi_path(&phi, (0, 3), (0, 3)).unwrap(), vec![(0, 3)]);
    }

    #[test]
    fn torus_grid_gamma_is_disconnected() {
        // C4 x C4 (Cartesian) quadrangulates the torus; the face-adjacency
        // graph splits, so the structural checks must reject it.
        let at = |i: usize, j: usize| (i % 4) * 4 + j % 4;
        let edges: Vec<Pair> = (0..4).flat_map(|i| (0..4).flat_map(move |j| [(at(i, j), at(i + 1, j)), (at(i, j), at(i, j + 1))])).collect();
        let g = Graph::from_edges(16, edges).unwrap();
        let faces: Vec<Vec<Vertex>> = (0..4)
            .flat_map(|i| (0..4).map(move |j| vec![at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]))
            .collect();
        let e = Embedding::from_faces(&g, &faces).unwrap();
        assert_eq!(trace_faces(&g, &e).unwrap().euler_characteristic, 0);
        assert!(build_phi_quad(&g, &e).is_err());
    }

    #[test]
    fn missing_arc_explanations() {
        let (cube, _) = generators::cube();
        assert!(explain_missing_arc(&cube, (0, 3), (0, 5)).contains("00 is not an edge"));
    }
}

//! Finite undirected graphs with optional loops, and the basic homomorphism
//! toolkit built on them: products, folds, retractions and stiffness.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Vertices are dense ids `0..n`.
pub type Vertex = usize;

/// A finite graph without multi-edges. A loop at `v` is stored as `v ∈ N(v)`.
///
/// Immutable once built; use [`GraphBuilder`] to construct one.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
    nbrs: Vec<Vec<Vertex>>,
    loops: Vec<bool>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .field("loops", &self.looped_vertices().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<BTreeSet<Vertex>>,
    loops: Vec<bool>,
    labels: Vec<Option<String>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adj: vec![BTreeSet::new(); n],
            loops: vec![false; n],
            labels: vec![None; n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(BTreeSet::new());
        self.loops.push(false);
        self.labels.push(None);
        self.adj.len() - 1
    }

    pub fn add_looped_vertex(&mut self) -> Vertex {
        let v = self.add_vertex();
        self.loops[v] = true;
        v
    }

    /// Adds the edge `uv`; `u == v` adds a loop. Duplicates are ignored.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::MalformedGraph(format!(
                "edge ({u}, {v}) out of range for {n} vertices"
            )));
        }
        if u == v {
            self.loops[u] = true;
        } else {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
        Ok(self)
    }

    pub fn add_loop(&mut self, v: Vertex) -> Result<&mut Self> {
        self.add_edge(v, v)
    }

    pub fn set_label(&mut self, v: Vertex, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn build(self) -> Graph {
        let n = self.adj.len();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        let mut nbrs = Vec::with_capacity(n);
        for (v, set) in self.adj.into_iter().enumerate() {
            for &u in &set {
                rows[v].insert(u);
            }
            if self.loops[v] {
                rows[v].insert(v);
            }
            nbrs.push(set.into_iter().collect());
        }
        let labels = if self.labels.iter().any(Option::is_some) {
            Some(
                self.labels
                    .into_iter()
                    .enumerate()
                    .map(|(v, l)| l.unwrap_or_else(|| v.to_string()))
                    .collect(),
            )
        } else {
            None
        };
        Graph {
            rows,
            nbrs,
            loops: self.loops,
            labels,
        }
    }
}

impl Graph {
    pub fn builder(n: usize) -> GraphBuilder {
        GraphBuilder::new(n)
    }

    /// Builds a graph from an edge list; `(v, v)` entries are loops.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Reopens the graph for modification.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new(self.vertex_count());
        for v in self.vertices() {
            b.adj[v] = self.nbrs[v].iter().copied().collect();
            b.loops[v] = self.loops[v];
            if let Some(labels) = &self.labels {
                b.labels[v] = Some(labels[v].clone());
            }
        }
        b
    }

    pub fn vertex_count(&self) -> usize {
        self.nbrs.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Number of non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Non-loop edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            self.nbrs[u]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn looped_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(move |&v| self.loops[v])
    }

    /// Membership test; `has_edge(v, v)` reports a loop.
    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn has_loop(&self, v: Vertex) -> bool {
        self.loops[v]
    }

    /// Sorted non-loop neighbours.
    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.nbrs[v]
    }

    /// Neighbourhood as a bitset, including `v` itself iff `v` is looped.
    #[inline]
    pub fn neighbourhood(&self, v: Vertex) -> &FixedBitSet {
        &self.rows[v]
    }

    /// Degree ignoring loops.
    pub fn degree(&self, v: Vertex) -> usize {
        self.nbrs[v].len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.vertices().map(|v| self.degree(v)).min()
    }

    pub fn is_reflexive(&self) -> bool {
        self.loops.iter().all(|&l| l)
    }

    pub fn is_irreflexive(&self) -> bool {
        self.loops.iter().all(|&l| !l)
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Copy of the graph with a loop on every vertex.
    pub fn reflexive_closure(&self) -> Graph {
        let mut b = self.to_builder();
        b.loops.iter_mut().for_each(|l| *l = true);
        b.build()
    }

    /// Copy of the graph with every loop removed.
    pub fn underlying_irreflexive(&self) -> Graph {
        let mut b = self.to_builder();
        b.loops.iter_mut().for_each(|l| *l = false);
        b.build()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.nbrs[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// A proper 2-colouring (`false`/`true` sides), or `None` if the graph has
    /// an odd cycle or a loop. Each component's lowest vertex is on side `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        if !self.is_irreflexive() {
            return None;
        }
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let sv = side[v].unwrap();
                for &u in &self.nbrs[v] {
                    match side[u] {
                        None => {
                            side[u] = Some(!sv);
                            stack.push(u);
                        }
                        Some(su) if su == sv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Common non-loop neighbours of `u` and `v`.
    pub fn common_neighbours(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        self.nbrs[u]
            .iter()
            .copied()
            .filter(|&w| w != v && self.nbrs[v].binary_search(&w).is_ok())
            .collect()
    }

    /// Subgraph induced by `vertices` (kept in the given order), with the map
    /// from new ids to old ids.
    pub fn induced(&self, vertices: &[Vertex]) -> Result<(Graph, Vec<Vertex>)> {
        let n = self.vertex_count();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(Error::MalformedMap(format!("vertex {v} out of range")));
            }
            if index[v] != usize::MAX {
                return Err(Error::MalformedMap(format!("vertex {v} listed twice")));
            }
            index[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if self.loops[v] {
                b.add_loop(i)?;
            }
            for &u in &self.nbrs[v] {
                if index[u] != usize::MAX {
                    b.add_edge(i, index[u])?;
                }
            }
            if let Some(labels) = &self.labels {
                b.set_label(i, labels[v].clone());
            }
        }
        Ok((b.build(), vertices.to_vec()))
    }
}

fn check_map(g: &Graph, h: &Graph, map: &[Vertex]) -> Result<()> {
    if map.len() != g.vertex_count() {
        return Err(Error::MalformedMap(format!(
            "map has {} entries but the source has {} vertices",
            map.len(),
            g.vertex_count()
        )));
    }
    if let Some((v, &c)) = map
        .iter()
        .enumerate()
        .find(|(_, &c)| c >= h.vertex_count())
    {
        return Err(Error::MalformedMap(format!(
            "vertex {v} maps to {c}, outside the target's {} vertices",
            h.vertex_count()
        )));
    }
    Ok(())
}

/// True iff `map` sends every edge of `g` (loops included) to an edge of `h`.
pub fn is_homomorphism(g: &Graph, h: &Graph, map: &[Vertex]) -> Result<bool> {
    check_map(g, h, map)?;
    Ok(first_broken_edge(g, h, map).is_none())
}

/// The first edge (or loop, as `(v, v)`) of `g` whose image is not an edge.
/// Assumes `map` is well formed.
pub(crate) fn first_broken_edge(g: &Graph, h: &Graph, map: &[Vertex]) -> Option<(Vertex, Vertex)> {
    for v in g.vertices() {
        if g.has_loop(v) && !h.has_edge(map[v], map[v]) {
            return Some((v, v));
        }
        for &u in g.neighbours(v) {
            if v < u && !h.has_edge(map[v], map[u]) {
                return Some((v, u));
            }
        }
    }
    None
}

/// Categorical product; `(u1, u2)` has id `u1 * |V(F2)| + u2`.
pub fn categorical_product(f1: &Graph, f2: &Graph) -> Graph {
    let n2 = f2.vertex_count();
    let n = f1.vertex_count() * n2;
    let mut b = GraphBuilder::new(n);
    for u1 in f1.vertices() {
        for u2 in f2.vertices() {
            let u = u1 * n2 + u2;
            b.set_label(u, format!("({},{})", f1.label(u1), f2.label(u2)));
            for v1 in f1.vertices().filter(|&v1| f1.has_edge(u1, v1)) {
                for v2 in f2.vertices().filter(|&v2| f2.has_edge(u2, v2)) {
                    let v = v1 * n2 + v2;
                    if u <= v {
                        b.add_edge(u, v).expect("product ids are in range");
                    }
                }
            }
        }
    }
    b.build()
}

/// Projections of a product vertex id back to its factors.
pub fn product_projections(f2_size: usize, w: Vertex) -> (Vertex, Vertex) {
    (w / f2_size, w % f2_size)
}

/// `H × K2`, with `(v, j)` (`j ∈ {1, 2}`) at id `2v + j - 1`.
pub fn double_cover(h: &Graph) -> Graph {
    let k2 = {
        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 1).expect("in range");
        b.set_label(0, "1");
        b.set_label(1, "2");
        b.build()
    };
    categorical_product(h, &k2)
}

/// Distinct `u, v` with `N(u) ⊆ N(v)`, neighbourhoods closed under loops.
/// `None` means the graph is stiff.
pub fn non_stiff_witness(h: &Graph) -> Option<(Vertex, Vertex)> {
    for u in h.vertices() {
        for v in h.vertices() {
            if u != v && h.neighbourhood(u).is_subset(h.neighbourhood(v)) {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn is_stiff(h: &Graph) -> bool {
    non_stiff_witness(h).is_none()
}

/// One fold (irreflexive) or dismantling step (reflexive): for the first
/// dominated pair `N(u) ⊆ N(v)`, deletes `u` and returns the quotient together
/// with the map `V(H) → V(quotient)` sending `u` to `v`.
pub fn fold_step(h: &Graph) -> Option<(Graph, Vec<Vertex>)> {
    let (u, v) = non_stiff_witness(h)?;
    let keep: Vec<Vertex> = h.vertices().filter(|&w| w != u).collect();
    let (quotient, _) = h.induced(&keep).expect("subset of vertices");
    let map = h
        .vertices()
        .map(|w| {
            let w = if w == u { v } else { w };
            if w > u {
                w - 1
            } else {
                w
            }
        })
        .collect();
    Some((quotient, map))
}

/// Folds until stiff; returns the core and the composed map onto it.
pub fn fold_to_stiff(h: &Graph) -> (Graph, Vec<Vertex>) {
    let mut current = h.clone();
    let mut map: Vec<Vertex> = h.vertices().collect();
    while let Some((next, step)) = fold_step(&current) {
        for m in map.iter_mut() {
            *m = step[*m];
        }
        current = next;
    }
    (current, map)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RetractionCheck {
    pub is_retraction: bool,
    pub reason: Option<String>,
}

/// Checks that `phi` is a homomorphism `F → F` with image inside `h_vertices`
/// that fixes `h_vertices` pointwise.
pub fn check_retraction(f: &Graph, h_vertices: &[Vertex], phi: &[Vertex]) -> Result<RetractionCheck> {
    check_map(f, f, phi)?;
    let mut in_h = vec![false; f.vertex_count()];
    for &v in h_vertices {
        if v >= f.vertex_count() {
            return Err(Error::MalformedMap(format!("vertex {v} out of range")));
        }
        in_h[v] = true;
    }
    let fail = |reason: String| {
        Ok(RetractionCheck {
            is_retraction: false,
            reason: Some(reason),
        })
    };
    if let Some(v) = f.vertices().find(|&v| !in_h[phi[v]]) {
        return fail(format!("image of {v} is {} which lies outside the subgraph", phi[v]));
    }
    if let Some(&v) = h_vertices.iter().find(|&&v| phi[v] != v) {
        return fail(format!("subgraph vertex {v} is moved to {}", phi[v]));
    }
    if let Some((a, b)) = first_broken_edge(f, f, phi) {
        return fail(format!("edge ({a}, {b}) maps to the non-edge ({}, {})", phi[a], phi[b]));
    }
    Ok(RetractionCheck {
        is_retraction: true,
        reason: None,
    })
}

/// Brute-force isomorphism search, intended for small graphs. Returns `map`
/// with `map[v]` the image in `h` of vertex `v` of `g`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    if n != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.looped_vertices().count() != h.looped_vertices().count()
    {
        return None;
    }
    let signature = |gr: &Graph| {
        let mut s: Vec<(usize, bool)> = gr.vertices().map(|v| (gr.degree(v), gr.has_loop(v))).collect();
        s.sort_unstable();
        s
    };
    if signature(g) != signature(h) {
        return None;
    }
    // Most constrained first: high degree, then BFS-ish adjacency to placed vertices.
    let mut order: Vec<Vertex> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = g
            .vertices()
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = g.neighbours(v).iter().filter(|&&u| placed[u]).count();
                (links, g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        depth: usize,
        order: &[Vertex],
        g: &Graph,
        h: &Graph,
        map: &mut [Vertex],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in h.vertices() {
            if used[w] || h.degree(w) != g.degree(v) || h.has_loop(w) != g.has_loop(v) {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(depth + 1, order, g, h, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    extend(0, &order, g, h, &mut map, &mut used).then_some(map)
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn k2() -> Graph {
        generators::complete(2)
    }

    #[test]
    fn identity_is_a_homomorphism() {
        for h in [generators::cube().0, generators::reflexive_octahedron().0, generators::wheel(5).0] {
            let id: Vec<Vertex> = h.vertices().collect();
            assert!(is_homomorphism(&h, &h, &id).unwrap());
        }
    }

    #[test]
    fn c4_two_colours_and_c5_does_not() {
        let c4 = generators::cycle(4).0;
        assert!(is_homomorphism(&c4, &k2(), &[0, 1, 0, 1]).unwrap());
        let c5 = generators::cycle(5).0;
        // Every one of the 32 maps fails.
        for bits in 0u32..32 {
            let map: Vec<Vertex> = (0..5).map(|i| ((bits >> i) & 1) as usize).collect();
            assert!(!is_homomorphism(&c5, &k2(), &map).unwrap());
        }
    }

    #[test]
    fn malformed_maps_are_errors() {
        let c4 = generators::cycle(4).0;
        assert!(matches!(is_homomorphism(&c4, &k2(), &[0, 1, 0]), Err(Error::MalformedMap(_))));
        assert!(matches!(is_homomorphism(&c4, &k2(), &[0, 1, 0, 2]), Err(Error::MalformedMap(_))));
    }

    #[test]
    fn loops_must_map_to_loops() {
        let looped = Graph::from_edges(1, [(0, 0)]).unwrap();
        assert!(!is_homomorphism(&looped, &k2(), &[0]).unwrap());
        let target = k2().reflexive_closure();
        assert!(is_homomorphism(&looped, &target, &[1]).unwrap());
    }

    #[test]
    fn k2_squared_is_two_disjoint_edges() {
        let p = categorical_product(&k2(), &k2());
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edge_count(), 2);
        assert!(!p.is_connected());
    }

    #[test]
    fn c5_times_k2_is_c10() {
        let p = categorical_product(&generators::cycle(5).0, &k2());
        assert!(is_isomorphic(&p, &generators::cycle(10).0));
    }

    #[test]
    fn wheel_times_k2_rim_and_apexes() {
        // Even rim: two disjoint k-cycles. Odd rim: one 2k-cycle.
        for (k, components) in [(5usize, 1usize), (6, 2)] {
            let (w, _) = generators::wheel(k);
            let p = double_cover(&w);
            assert_eq!(p.vertex_count(), 2 * k + 2);
            let apexes = [2 * k, 2 * k + 1];
            let rim: Vec<Vertex> = p.vertices().filter(|v| !apexes.contains(v)).collect();
            let (rim_graph, _) = p.induced(&rim).unwrap();
            assert_eq!(rim_graph.edge_count(), 2 * k);
            assert!(rim_graph.vertices().all(|v| rim_graph.degree(v) == 2));
            assert_eq!(rim_graph.is_connected(), components == 1);
            if k == 5 {
                assert!(is_isomorphic(&rim_graph, &generators::cycle(10).0));
            }
            for (a, sheet) in [(apexes[0], 1usize), (apexes[1], 0)] {
                assert_eq!(p.degree(a), k);
                assert!(p.neighbours(a).iter().all(|&v| v % 2 == sheet));
            }
        }
    }

    #[test]
    fn bipartite_double_cover_is_two_copies() {
        let c4 = generators::cycle(4).0;
        let p = double_cover(&c4);
        let (a, b): (Vec<Vertex>, Vec<Vertex>) = {
            let side = p.bipartition().unwrap();
            // The components are the two copies; split by reachability from 0.
            let mut comp = vec![false; p.vertex_count()];
            let mut stack = vec![0];
            comp[0] = true;
            while let Some(v) = stack.pop() {
                for &u in p.neighbours(v) {
                    if !comp[u] {
                        comp[u] = true;
                        stack.push(u);
                    }
                }
            }
            let _ = side;
            p.vertices().partition(|&v| comp[v])
        };
        for part in [a, b] {
            let (copy, _) = p.induced(&part).unwrap();
            assert!(is_isomorphic(&copy, &c4));
        }
        let k2_cover = double_cover(&k2());
        assert_eq!(k2_cover.edge_count(), 2);
        assert!(!k2_cover.is_connected());
    }

    #[test]
    fn stiffness_witnesses() {
        assert_eq!(non_stiff_witness(&generators::cube().0), None);
        let tri = generators::complete(3).reflexive_closure();
        assert!(non_stiff_witness(&tri).is_some());
        let c4 = generators::cycle(4).0;
        let (u, v) = non_stiff_witness(&c4).unwrap();
        assert_eq!((u + 2) % 4, v);
    }

    #[test]
    fn w4_folds_to_k3_in_two_steps() {
        let (w4, _) = generators::wheel(4);
        let (once, m1) = fold_step(&w4).unwrap();
        assert!(is_homomorphism(&w4, &once, &m1).unwrap());
        let (twice, m2) = fold_step(&once).unwrap();
        assert!(is_homomorphism(&once, &twice, &m2).unwrap());
        assert!(is_isomorphic(&twice, &generators::complete(3)));
        assert!(fold_step(&twice).is_none());
    }

    #[test]
    fn cube_does_not_fold() {
        assert!(fold_step(&generators::cube().0).is_none());
    }

    #[test]
    fn reflexive_path_dismantles_to_a_looped_vertex() {
        let p3 = generators::path(3).reflexive_closure();
        let (core, map) = fold_to_stiff(&p3);
        assert_eq!(core.vertex_count(), 1);
        assert!(core.has_loop(0));
        assert!(is_homomorphism(&p3, &core, &map).unwrap());
    }

    #[test]
    fn retraction_checks() {
        let c6 = generators::cycle(6).0;
        let id: Vec<Vertex> = c6.vertices().collect();
        let all: Vec<Vertex> = c6.vertices().collect();
        assert!(check_retraction(&c6, &all, &id).unwrap().is_retraction);

        let edge = k2();
        let r = check_retraction(&edge, &[0], &[0, 0]).unwrap();
        assert!(!r.is_retraction);
        assert!(r.reason.is_some());

        // Image outside the subgraph is a reported failure, not an error.
        let r = check_retraction(&c6, &[0, 1], &id).unwrap();
        assert!(!r.is_retraction);
    }

    #[test]
    fn isomorphism_rejects_different_graphs() {
        assert!(!is_isomorphic(&generators::cycle(6).0, &generators::complete_bipartite(3, 3)));
        assert!(is_isomorphic(&generators::cube().0, &generators::cube().0));
    }
}

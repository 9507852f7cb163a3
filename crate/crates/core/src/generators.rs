//! Small named graphs with canonical embeddings.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::surface::embedding::Embedding;

fn circle(k: usize) -> Vec<[f64; 2]> {
    (0..k)
        .map(|i| {
            let t = TAU * i as f64 / k as f64;
            [t.cos(), t.sin()]
        })
        .collect()
}

fn built(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator edges are in range")
}

/// The cycle `C_k` drawn in the plane, `k >= 3`.
pub fn cycle(k: usize) -> (Graph, Embedding) {
    let g = built(k, (0..k).map(|i| (i, (i + 1) % k)));
    let e = Embedding::from_planar_drawing(&g, &circle(k));
    (g, e)
}

pub fn path(n: usize) -> Graph {
    built(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete(n: usize) -> Graph {
    built(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    built(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// The wheel `W_k`: rim `0..k` in cyclic order and hub `k`, drawn in the plane.
pub fn wheel(k: usize) -> (Graph, Embedding) {
    let g = built(k + 1, (0..k).flat_map(|i| [(i, (i + 1) % k), (i, k)]));
    let mut coords = circle(k);
    coords.push([0.0, 0.0]);
    let e = Embedding::from_planar_drawing(&g, &coords);
    (g, e)
}

/// `K_{2,3}` as a quadrangulation of the sphere, with parts `{0, 1}` and `{2, 3, 4}`.
pub fn k23_quadrangulation() -> (Graph, Embedding) {
    let g = complete_bipartite(2, 3);
    let faces = [vec![0, 2, 1, 3], vec![0, 3, 1, 4], vec![0, 4, 1, 2]];
    let e = Embedding::from_faces(&g, &faces).expect("K23 faces");
    (g, e)
}

/// The 3-cube; vertex `v` sits at the corner whose coordinates are the bits of `v`.
pub fn cube() -> (Graph, Embedding) {
    let g = built(8, (0..8).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))).filter(|&(u, v)| u < v));
    let coords: Vec<[f64; 3]> = (0..8)
        .map(|v| [(v & 1) as f64 - 0.5, ((v >> 1) & 1) as f64 - 0.5, ((v >> 2) & 1) as f64 - 0.5])
        .collect();
    let e = Embedding::from_polyhedron(&g, &coords);
    (g, e)
}

/// Rim `C_{2m}` on `0..2m` with hub `2m` joined to the even rim vertices and
/// hub `2m + 1` joined to the odd ones. `m = 3` is the cube.
pub fn pseudo_double_wheel(m: usize) -> Result<(Graph, Embedding)> {
    if m < 2 {
        return Err(Error::Domain(format!("pseudo-double wheel needs m >= 2, got {m}")));
    }
    let r = 2 * m;
    let (a, b) = (r, r + 1);
    let g = built(
        r + 2,
        (0..r).flat_map(|i| [(i, (i + 1) % r), (i, if i % 2 == 0 { a } else { b })]),
    );
    let faces: Vec<Vec<Vertex>> = (0..r)
        .step_by(2)
        .flat_map(|i| [vec![a, i, (i + 1) % r, (i + 2) % r], vec![b, (i + 3) % r, (i + 2) % r, (i + 1) % r]])
        .collect();
    let e = Embedding::from_faces(&g, &faces)?;
    Ok((g, e))
}

fn polyhedron(coords: &[[f64; 3]], edge_length_sq: f64) -> (Graph, Embedding) {
    let n = coords.len();
    let dist = |u: usize, v: usize| (0..3).map(|k| (coords[u][k] - coords[v][k]).powi(2)).sum::<f64>();
    let g = built(
        n,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| (dist(u, v) - edge_length_sq).abs() < 1e-9),
    );
    let e = Embedding::from_polyhedron(&g, coords);
    (g.reflexive_closure(), e)
}

/// `K_{2,2,2}` with a loop at every vertex; `2i` and `2i + 1` are antipodal.
pub fn reflexive_octahedron() -> (Graph, Embedding) {
    let coords: Vec<[f64; 3]> = (0..6)
        .map(|v| {
            let mut p = [0.0; 3];
            p[v / 2] = if v % 2 == 0 { 1.0 } else { -1.0 };
            p
        })
        .collect();
    polyhedron(&coords, 2.0)
}

pub fn reflexive_tetrahedron() -> (Graph, Embedding) {
    let coords = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    polyhedron(&coords, 8.0)
}

pub fn reflexive_icosahedron() -> (Graph, Embedding) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut coords = Vec::with_capacity(12);
    for s in [1.0, -1.0] {
        for t in [phi, -phi] {
            coords.push([0.0, s, t]);
            coords.push([s, t, 0.0]);
            coords.push([t, 0.0, s]);
        }
    }
    polyhedron(&coords, 4.0)
}

/// The generalized Mycielski graph `M_r(C_k)` for odd `k >= 3` and
/// `1 <= r <= 3`, quadrangulating the projective plane. Layer `j` holds
/// `(i, j) = j*k + i`; the hub is `k*r`. `r = 1` is the odd wheel and
/// `(k, r) = (5, 2)` the Grötzsch graph.
pub fn generalized_mycielski(k: usize, levels: usize) -> Result<(Graph, Embedding)> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("cycle length must be odd and at least 3, got {k}")));
    }
    if !(1..=3).contains(&levels) {
        return Err(Error::Domain(format!("levels must lie in 1..=3, got {levels}")));
    }
    let r = levels;
    let w = k * r;
    let at = |i: usize, j: usize| if j >= r { w } else { j * k + i % k };
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((at(i, 0), at(i + 1, 0)));
        for j in 0..r - 1 {
            edges.push((at(i, j), at(i + 1, j + 1)));
            edges.push((at(i + 1, j), at(i, j + 1)));
        }
        edges.push((at(i, r - 1), w));
    }
    let g = built(k * r + 1, edges);
    let mut faces = Vec::with_capacity(k * r);
    for i in k..2 * k {
        faces.push(vec![at(i - 1, 0), at(i, 0), at(i + 1, 0), at(i, 1)]);
        for j in 1..r {
            faces.push(vec![at(i - 1, j), at(i, j - 1), at(i + 1, j), at(i, j + 1)]);
        }
    }
    let e = Embedding::from_faces(&g, &faces)?;
    Ok((g, e))
}

/// The odd wheel `W_k` as a quadrangulation of the projective plane, faces
/// `hub x_i x_{i+1} x_{i+2}`; the hub is `k`.
pub fn projective_wheel(k: usize) -> (Graph, Embedding) {
    generalized_mycielski(k, 1).expect("odd wheel")
}

/// The Grötzsch graph in the projective plane.
pub fn grotzsch() -> (Graph, Embedding) {
    generalized_mycielski(5, 2).expect("Grötzsch graph")
}

//! Brute-force reference implementations, written without the library's
//! oracle, for cross-checking.
#![allow(dead_code)]

use std::collections::BTreeSet;

use reconforge::oracle::MoveRule;
use reconforge::{Graph, Vertex};

pub fn is_hom(g: &Graph, h: &Graph, c: &[Vertex]) -> bool {
    c.len() == g.vertex_count()
        && c.iter().all(|&x| x < h.vertex_count())
        && g.edges().all(|(u, v)| h.has_edge(c[u], c[v]))
        && g.looped_vertices().all(|v| h.has_loop(c[v]))
}

/// Every homomorphism `g -> h`, by plain backtracking in lexicographic order.
pub fn homs(g: &Graph, h: &Graph) -> Vec<Vec<Vertex>> {
    fn go(g: &Graph, h: &Graph, c: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let v = c.len();
        if v == g.vertex_count() {
            out.push(c.clone());
            return;
        }
        for x in h.vertices() {
            let ok = (!g.has_loop(v) || h.has_loop(x)) && (0..v).all(|u| !g.has_edge(u, v) || h.has_edge(c[u], x));
            if ok {
                c.push(x);
                go(g, h, c, out);
                c.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, h, &mut Vec::new(), &mut out);
    out
}

pub fn one_step(h: &Graph, a: &[Vertex], b: &[Vertex], rule: MoveRule) -> bool {
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    match (diff.as_slice(), rule) {
        (&[_], MoveRule::Irreflexive) => true,
        (&[v], MoveRule::Reflexive) => h.has_edge(a[v], b[v]),
        _ => false,
    }
}

/// Every state is a homomorphism and consecutive states are one move apart.
pub fn walk_ok(g: &Graph, h: &Graph, w: &[Vec<Vertex>], rule: MoveRule) -> Result<(), String> {
    for (i, c) in w.iter().enumerate() {
        if !is_hom(g, h, c) {
            return Err(format!("state {i} is not a homomorphism"));
        }
    }
    for (i, p) in w.windows(2).enumerate() {
        if !one_step(h, &p[0], &p[1], rule) {
            return Err(format!("states {i} and {} are not one move apart", i + 1));
        }
    }
    Ok(())
}

/// Component label of every homomorphism, by union-find over all pairs.
pub fn component_labels(g: &Graph, h: &Graph, rule: MoveRule) -> (Vec<Vec<Vertex>>, Vec<usize>) {
    let all = homs(g, h);
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if one_step(h, &all[i], &all[j], rule) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let labels = (0..all.len()).map(|i| find(&mut parent, i)).collect();
    (all, labels)
}

/// All graphs on vertex set `0..n`.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1usize << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

/// Face diagonals of a quadrangulation, both orders.
pub fn across_pairs(h: &Graph, faces: &[Vec<Vertex>]) -> BTreeSet<(Vertex, Vertex)> {
    faces
        .iter()
        .flat_map(|f| [(f[0], f[2]), (f[2], f[0]), (f[1], f[3]), (f[3], f[1])])
        .filter(|&(a, b)| !h.has_edge(a, b))
        .collect()
}

pub fn connected(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    if n > 0 {
        seen[0] = true;
    }
    while let Some(i) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == i && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

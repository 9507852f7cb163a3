//! Gadgets over stiff reflexive hosts that are locally triangulated around
//! a vertex.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::phi::{explain_missing_arc, Pair, PhiDigraph};
use crate::gadget::quad::ladder_gadget;
use crate::gadget::verify::verify_pattern_gadget;
use crate::gadget::{identity_on_host, paint, Assembler, PatternGadget, Provenance};
use crate::graph::{non_stiff_witness, Graph, Vertex};
use crate::oracle::MoveRule;
use crate::surface::embedding::Embedding;
use crate::surface::validate::{subgraph_free, ForbiddenSubgraph};

fn closed_adjacent(h: &Graph, u: Vertex, v: Vertex) -> bool {
    u == v || h.has_edge(u, v)
}

/// Vertices adjacent to every member of `s`; a signal joined to all of them
/// can only take colours in `s` exactly when the set is listable this way.
pub fn listable_attachment(h: &Graph, s: &[Vertex]) -> Result<Vec<Vertex>> {
    if s.is_empty() || s.iter().any(|&v| v >= h.vertex_count()) {
        return Err(Error::Precondition(format!("{s:?} is not a non-empty set of host vertices")));
    }
    let t: Vec<Vertex> = h.vertices().filter(|&t| s.iter().all(|&x| closed_adjacent(h, t, x))).collect();
    let common: BTreeSet<Vertex> = h.vertices().filter(|&c| t.iter().all(|&x| closed_adjacent(h, c, x))).collect();
    let want: BTreeSet<Vertex> = s.iter().copied().collect();
    if common != want {
        return Err(Error::Precondition(format!(
            "{s:?} is not listable: the common neighbours of {t:?} are {common:?}"
        )));
    }
    Ok(t)
}

/// Unary gadget whose signal ranges over exactly `s`.
pub fn build_listable_gadget(h: &Graph, s: &[Vertex]) -> Result<PatternGadget> {
    if !h.is_reflexive() {
        return Err(Error::Precondition("listable gadgets need a reflexive host".into()));
    }
    let t = listable_attachment(h, s)?;
    let mut asm = Assembler::new(h, true);
    let x = asm.vertex("x");
    for &v in &t {
        asm.edge(x, v)?;
    }
    let graph = asm.finish();
    let members: Vec<Vertex> = s.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let base = identity_on_host(graph.vertex_count(), h.vertex_count());
    let canonical = members
        .iter()
        .map(|&c| {
            let mut z = base.clone();
            z[x] = c;
            z
        })
        .collect();
    Ok(PatternGadget {
        graph,
        host: h.clone(),
        signals: vec![x],
        patterns: members.iter().map(|&c| vec![c]).collect(),
        canonical,
        rule: MoveRule::Reflexive,
        provenance: Provenance::new(format!("list {members:?}")),
    })
}

pub fn build_listable_edge_gadget(h: &Graph, u: Vertex, v: Vertex) -> Result<PatternGadget> {
    if u == v || !h.has_edge(u, v) {
        return Err(Error::Precondition(format!("{u}{v} is not an edge between distinct vertices")));
    }
    build_listable_gadget(h, &[u, v])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalCondition {
    ZeroInF,
    K4Free,
    RingCycle,
    Betas,
    BetaCycles,
    EdgesListable,
    TriplesListable,
}

impl LocalCondition {
    pub fn letter(self) -> char {
        match self {
            LocalCondition::ZeroInF => 'a',
            LocalCondition::K4Free => 'b',
            LocalCondition::RingCycle => 'c',
            LocalCondition::Betas => 'd',
            LocalCondition::BetaCycles => 'e',
            LocalCondition::EdgesListable => 'f',
            LocalCondition::TriplesListable => 'g',
        }
    }

    fn fail(self, detail: impl Into<String>) -> Error {
        Error::LocalTriangulation {
            condition: self.letter(),
            detail: detail.into(),
        }
    }
}

/// Witness that a host is locally triangulated around `zero`. Ring label `j`
/// (for `j >= 1`, read modulo `k`) is `ring[(j - 1) % k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTriangulationCertificate {
    pub zero: Vertex,
    pub f_vertices: Vec<Vertex>,
    pub ring: Vec<Vertex>,
    /// `betas[i - 1]` is a common neighbour of labels `i` and `i + 1` other than `zero`.
    pub betas: Vec<Vertex>,
    /// A spanning cycle of each beta's neighbourhood in F.
    pub beta_cycles: Vec<Vec<Vertex>>,
    pub listable_edges: Vec<Pair>,
    pub listable_triples: Vec<Vec<Vertex>>,
}

impl LocalTriangulationCertificate {
    pub fn k(&self) -> usize {
        self.ring.len()
    }

    pub fn label(&self, j: usize) -> Vertex {
        if j == 0 {
            self.zero
        } else {
            self.ring[(j - 1) % self.ring.len()]
        }
    }

    pub fn one(&self) -> Vertex {
        self.ring[0]
    }

    pub fn beta(&self, i: usize) -> Vertex {
        self.betas[(i - 1) % self.betas.len()]
    }

    fn beta_cycle(&self, i: usize) -> &[Vertex] {
        &self.beta_cycles[(i - 1) % self.betas.len()]
    }

    /// Ordered pairs over the listable edges of F.
    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.listable_edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)])
    }
}

/// Depth-first search for a Hamiltonian cycle of `h[verts]` starting at
/// `start`, trying neighbours in ascending order.
fn spanning_cycle(h: &Graph, verts: &[Vertex], start: Vertex) -> Option<Vec<Vertex>> {
    fn extend(h: &Graph, verts: &[Vertex], path: &mut Vec<Vertex>, used: &mut Vec<bool>) -> bool {
        let last = *path.last().unwrap();
        if path.len() == verts.len() {
            return verts.len() >= 3 && h.has_edge(last, path[0]);
        }
        for (i, &w) in verts.iter().enumerate() {
            if !used[i] && h.has_edge(last, w) {
                used[i] = true;
                path.push(w);
                if extend(h, verts, path, used) {
                    return true;
                }
                path.pop();
                used[i] = false;
            }
        }
        false
    }
    let s = verts.iter().position(|&v| v == start)?;
    let mut used = vec![false; verts.len()];
    used[s] = true;
    let mut path = vec![start];
    extend(h, verts, &mut path, &mut used).then_some(path)
}

fn is_cycle_on(h: &Graph, order: &[Vertex], verts: &[Vertex]) -> bool {
    let a: BTreeSet<_> = order.iter().collect();
    let b: BTreeSet<_> = verts.iter().collect();
    order.len() >= 3
        && order.len() == a.len()
        && a == b
        && (0..order.len()).all(|i| h.has_edge(order[i], order[(i + 1) % order.len()]))
}

/// Checks conditions (a) to (g) constructively, taking F to be the subgraph
/// induced by `f_vertices`. Listable gadgets are built and verified with the
/// oracle under `cap`.
pub fn validate_locally_triangulated(
    h: &Graph,
    zero: Vertex,
    f_vertices: &[Vertex],
    e: Option<&Embedding>,
    cap: usize,
) -> Result<LocalTriangulationCertificate> {
    if !h.is_reflexive() {
        return Err(Error::Precondition("the host must be reflexive".into()));
    }
    let f: Vec<Vertex> = f_vertices.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(&v) = f.iter().find(|&&v| v >= h.vertex_count()) {
        return Err(Error::Precondition(format!("F vertex {v} is not a host vertex")));
    }
    let in_f = |v: Vertex| f.binary_search(&v).is_ok();
    if !in_f(zero) {
        return Err(LocalCondition::ZeroInF.fail(format!("{zero} is not in F")));
    }
    let (induced, _) = h.induced(&f)?;
    if !subgraph_free(&induced, ForbiddenSubgraph::K4) {
        return Err(LocalCondition::K4Free.fail("F induces a K4"));
    }
    if let Some((u, v)) = non_stiff_witness(h) {
        return Err(Error::Precondition(format!("the host is not stiff: N({u}) is contained in N({v})")));
    }
    let f_nbrs = |v: Vertex| -> Vec<Vertex> { h.neighbours(v).iter().copied().filter(|&w| in_f(w)).collect() };

    let around = f_nbrs(zero);
    let Some(&lowest) = around.first() else {
        return Err(LocalCondition::RingCycle.fail(format!("{zero} has no neighbours in F")));
    };
    let from_embedding = e.and_then(|e| {
        let rot: Vec<Vertex> = e.rotation(zero).iter().copied().filter(|&w| in_f(w)).collect();
        let at = rot.iter().position(|&w| w == lowest)?;
        let order: Vec<Vertex> = rot[at..].iter().chain(&rot[..at]).copied().collect();
        is_cycle_on(h, &order, &around).then_some(order)
    });
    let ring = match from_embedding.or_else(|| spanning_cycle(h, &around, lowest)) {
        Some(r) => r,
        None => {
            return Err(LocalCondition::RingCycle.fail(format!("the F-neighbourhood {around:?} of {zero} has no spanning cycle")))
        }
    };
    let k = ring.len();

    let mut betas = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (ring[i], ring[(i + 1) % k]);
        match h.common_neighbours(a, b).into_iter().find(|&w| w != zero && in_f(w)) {
            Some(beta) => betas.push(beta),
            None => {
                return Err(LocalCondition::Betas.fail(format!(
                    "ring labels {} and {} ({a}, {b}) have no common F-neighbour besides {zero}",
                    i + 1,
                    i % k + 2
                )))
            }
        }
    }
    let mut beta_cycles = Vec::with_capacity(k);
    for (i, &beta) in betas.iter().enumerate() {
        let nb = f_nbrs(beta);
        match spanning_cycle(h, &nb, ring[i]) {
            Some(c) => beta_cycles.push(c),
            None => {
                return Err(LocalCondition::BetaCycles.fail(format!(
                    "the F-neighbourhood {nb:?} of beta_{} = {beta} has no spanning cycle",
                    i + 1
                )))
            }
        }
    }

    let listable = |s: &[Vertex], cond: LocalCondition| -> Result<()> {
        let g = build_listable_gadget(h, s).map_err(|err| cond.fail(err.to_string()))?;
        let report = verify_pattern_gadget(&g, MoveRule::Reflexive, cap)?;
        if report.cap_exceeded() {
            return Err(Error::CapExceeded { cap });
        }
        if !report.passed() {
            return Err(cond.fail(format!("the list gadget for {s:?} does not verify")));
        }
        Ok(())
    };
    let mut listable_edges = Vec::new();
    for (u, v) in induced.edges() {
        let (u, v) = (f[u], f[v]);
        listable(&[u, v], LocalCondition::EdgesListable)?;
        listable_edges.push((u, v));
    }
    let label = |j: usize| ring[(j - 1) % k];
    let listable_triples = vec![vec![zero, label(2), label(3)], vec![zero, label(3), label(4)]];
    for t in &listable_triples {
        listable(t, LocalCondition::TriplesListable)?;
    }
    Ok(LocalTriangulationCertificate {
        zero,
        f_vertices: f,
        ring,
        betas,
        beta_cycles,
        listable_edges,
        listable_triples,
    })
}

/// The pair digraph on ordered pairs over the listable edges of F.
pub fn build_phi_reflexive(h: &Graph, cert: &LocalTriangulationCertificate) -> Result<PhiDigraph> {
    let phi = PhiDigraph::on_pairs(h, cert.pairs());
    if let Some((p, q)) = phi.reversal_counterexample() {
        return Err(Error::violation("reversal symmetry", format!("arc {p:?} -> {q:?} has no reverse")));
    }
    Ok(phi)
}

/// The three explicit pair-digraph paths. `ToBetaI(i)` runs from `(0,1)` to
/// `(beta_i, i)` and `ToBetaIPlus1(i)` to `(beta_i, i+1)`; `Loop01` runs from
/// `(1,0)` to `(0,1)` around the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflexivePath {
    Loop01,
    ToBetaI(usize),
    ToBetaIPlus1(usize),
}

impl ReflexivePath {
    /// `(a0, a1, b0, b1)`: the path runs from `(a1,a0)` to `(b0,b1)`.
    pub fn endpoints(self, cert: &LocalTriangulationCertificate) -> (Vertex, Vertex, Vertex, Vertex) {
        let (zero, one) = (cert.zero, cert.one());
        match self {
            ReflexivePath::Loop01 => (zero, one, zero, one),
            ReflexivePath::ToBetaI(i) => (one, zero, cert.beta(i), cert.label(i)),
            ReflexivePath::ToBetaIPlus1(i) => (one, zero, cert.beta(i), cert.label(i + 1)),
        }
    }
}

/// `(s,beta) (x_2,x_3) ... (x_{t-1},x_t) (beta,s)` where `x_1 = s, ..., x_t`
/// runs around beta's neighbourhood cycle.
fn beta_walk(cycle: &[Vertex], s: Vertex, beta: Vertex) -> Result<Vec<Pair>> {
    let at = cycle
        .iter()
        .position(|&v| v == s)
        .ok_or_else(|| Error::violation("beta neighbourhood cycle", format!("{s} is not a neighbour of {beta}")))?;
    let x: Vec<Vertex> = cycle[at..].iter().chain(&cycle[..at]).copied().collect();
    let mut walk = vec![(s, beta)];
    walk.extend(x.windows(2).skip(1).map(|w| (w[0], w[1])));
    walk.push((beta, s));
    Ok(walk)
}

fn ring_path(cert: &LocalTriangulationCertificate, which: ReflexivePath) -> Result<Vec<Pair>> {
    let k = cert.k();
    let zero = cert.zero;
    let l = |j: usize| cert.label(j);
    match which {
        ReflexivePath::Loop01 => {
            let mut p = vec![(l(1), zero)];
            p.extend((2..k).map(|j| (l(j), l(j + 1))));
            p.push((zero, l(1)));
            Ok(p)
        }
        ReflexivePath::ToBetaI(i) | ReflexivePath::ToBetaIPlus1(i) => {
            if i == 0 || i > k {
                return Err(Error::Precondition(format!("ring index {i} is outside 1..={k}")));
            }
            let r = match which {
                ReflexivePath::ToBetaI(_) => i,
                _ => i % k + 1,
            };
            let beta = cert.beta(i);
            // Detour around beta_1 to turn (0,1) into (1,0).
            let mut p = vec![(zero, l(1))];
            p.extend(beta_walk(cert.beta_cycle(1), l(2), cert.beta(1))?);
            p.push((l(1), zero));
            // Walk the ring up to r, then step onto beta.
            let last = if r >= 3 { r - 2 } else { r + k - 2 };
            p.extend((2..=last).map(|j| (l(j), l(j + 1))));
            p.push((zero, l(r)));
            p.extend(beta_walk(cert.beta_cycle(i), l(r), beta)?);
            Ok(p)
        }
    }
}

/// Builds the requested path and checks each arc against the pair digraph.
pub fn reflexive_paths(h: &Graph, cert: &LocalTriangulationCertificate, which: ReflexivePath) -> Result<Vec<Pair>> {
    let phi = build_phi_reflexive(h, cert)?;
    let path = ring_path(cert, which)?;
    check_path(h, &phi, &path)?;
    Ok(path)
}

fn check_path(h: &Graph, phi: &PhiDigraph, path: &[Pair]) -> Result<()> {
    if let Some(&p) = path.iter().find(|&&p| !phi.contains(p)) {
        return Err(Error::violation(
            "pair digraph path",
            format!("{p:?} is not a listable adjacent pair"),
        ));
    }
    if let Some(w) = path.windows(2).find(|w| !phi.has_arc(w[0], w[1])) {
        return Err(Error::violation("pair digraph path", explain_missing_arc(h, w[0], w[1])));
    }
    Ok(())
}

pub fn nbo_from_path_reflexive(h: &Graph, phi: &PhiDigraph, path: &[Pair]) -> Result<PatternGadget> {
    check_path(h, phi, path)?;
    ladder_gadget(h, path, true, MoveRule::Reflexive, "not-both-one ladder (reflexive)", |c, d| {
        listable_attachment(h, &[c, d])
    })
}

/// The ladder gadget along `which`, with pattern set
/// `{(a0,b0), (a1,b0), (a0,b1)}` for the path's endpoints.
pub fn build_nbo_reflexive(h: &Graph, cert: &LocalTriangulationCertificate, which: ReflexivePath) -> Result<PatternGadget> {
    let phi = build_phi_reflexive(h, cert)?;
    let path = ring_path(cert, which)?;
    nbo_from_path_reflexive(h, &phi, &path)
}

/// Not-all-zero gadget on `z_1..z_4` with colours `0` and ring label `1`,
/// sharing one host copy among all parts.
pub fn build_naz_reflexive(h: &Graph, cert: &LocalTriangulationCertificate) -> Result<PatternGadget> {
    let k = cert.k();
    if k < 4 {
        return Err(Error::Precondition(format!("the ring around {} has length {k} < 4", cert.zero)));
    }
    let (zero, one) = (cert.zero, cert.one());
    let l = |j: usize| cert.label(j);
    let which = [
        ReflexivePath::ToBetaI(1),
        ReflexivePath::ToBetaI(2),
        ReflexivePath::ToBetaI(3),
        ReflexivePath::ToBetaIPlus1(4),
    ];
    let ws: Vec<PatternGadget> = which.iter().map(|&w| build_nbo_reflexive(h, cert, w)).collect::<Result<_>>()?;
    // Ring labels in each list; 0 stands for the centre.
    let lists: [&[usize]; 4] = [&[0, 1], &[0, 2, 3], &[0, 3, 4], &[0, 5]];
    let ls: Vec<PatternGadget> = lists
        .iter()
        .map(|list| build_listable_gadget(h, &list.iter().map(|&j| l(j)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;

    let mut asm = Assembler::new(h, true);
    let mut wmaps = Vec::with_capacity(4);
    let mut lmaps = Vec::with_capacity(4);
    for (i, w) in ws.iter().enumerate() {
        wmaps.push(asm.include(w, &format!("W{}", i + 1), &[])?);
    }
    for (i, g) in ls.iter().enumerate() {
        lmaps.push(asm.include(g, &format!("L{}", i + 1), &[])?);
    }
    let z: Vec<Vertex> = (0..4).map(|i| wmaps[i][ws[i].signals[0]]).collect();
    let w: Vec<Vertex> = (0..4).map(|i| wmaps[i][ws[i].signals[1]]).collect();
    let y: Vec<Vertex> = (0..4).map(|i| lmaps[i][ls[i].signals[0]]).collect();
    for i in 0..4 {
        asm.edge(y[i], w[i])?;
        if i + 1 < 4 {
            asm.edge(y[i], y[i + 1])?;
        }
    }
    let graph = asm.finish();

    let n = graph.vertex_count();
    let mut patterns = Vec::with_capacity(15);
    let mut canonical = Vec::with_capacity(15);
    for bits in 1u32..16 {
        let p: [bool; 4] = std::array::from_fn(|i| bits >> (3 - i) & 1 == 1);
        let mut c = identity_on_host(n, h.vertex_count());
        for i in 0..4 {
            let pat = if p[i] {
                [one, l(if i == 3 { 5 } else { i + 1 })]
            } else {
                [zero, cert.beta(i + 1)]
            };
            paint(&mut c, &wmaps[i], ws[i].zeta(&pat).expect("W pattern"));
            let colour = if p[i] {
                zero
            } else if p[i + 1..].iter().any(|&b| b) {
                l(lists[i][1])
            } else {
                l(*lists[i].last().unwrap())
            };
            paint(&mut c, &lmaps[i], ls[i].zeta(&[colour]).expect("list colour"));
        }
        patterns.push(p.iter().map(|&b| if b { one } else { zero }).collect());
        canonical.push(c);
    }
    let mut provenance = Provenance::new("not-all-zero (reflexive)");
    provenance.parts = ws.iter().chain(&ls).map(|g| g.provenance.clone()).collect();
    Ok(PatternGadget {
        graph,
        host: h.clone(),
        signals: z,
        patterns,
        canonical,
        rule: MoveRule::Reflexive,
        provenance,
    })
}

//! Pattern gadgets: a graph with ordered signal vertices, a set of allowed
//! signal patterns and one canonical colouring per pattern.

pub mod phi;
pub mod quad;
pub mod reflexive;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::oracle::{Colouring, MoveRule};

pub use phi::{build_gamma, build_phi_quad, phi_path, Pair, PhiDigraph};
pub use quad::{build_naz_quad, build_nbo_quad, nbo_from_path_quad};
pub use reflexive::{
    build_listable_edge_gadget, build_listable_gadget, build_naz_reflexive, build_nbo_reflexive, build_phi_reflexive,
    listable_attachment, nbo_from_path_reflexive, reflexive_paths, validate_locally_triangulated, LocalCondition, LocalTriangulationCertificate,
    ReflexivePath,
};
pub use verify::{
    transition_plans, verify_pattern_gadget, ConditionOutcome, Move, TransitionPlan, VerificationReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    /// The pair-digraph path the construction followed, if any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Provenance>,
}

impl Provenance {
    pub fn new(construction: impl Into<String>) -> Self {
        Provenance {
            construction: construction.into(),
            path: Vec::new(),
            parts: Vec::new(),
        }
    }
}

/// Every builder places an identity-coloured copy of the host on vertices
/// `0..host.vertex_count()`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternGadget {
    pub graph: Graph,
    pub host: Graph,
    pub signals: Vec<Vertex>,
    pub patterns: Vec<Vec<Vertex>>,
    pub canonical: Vec<Colouring>,
    pub rule: MoveRule,
    pub provenance: Provenance,
}

impl PatternGadget {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn pattern_index(&self, p: &[Vertex]) -> Option<usize> {
        self.patterns.iter().position(|q| q == p)
    }

    pub fn zeta(&self, p: &[Vertex]) -> Option<&Colouring> {
        self.pattern_index(p).map(|i| &self.canonical[i])
    }

    pub fn signal_values(&self, c: &[Vertex]) -> Vec<Vertex> {
        self.signals.iter().map(|&x| c[x]).collect()
    }

    /// Host vertices copied into the gadget.
    pub fn host_copy(&self) -> std::ops::Range<Vertex> {
        0..self.host.vertex_count()
    }

    /// Same gadget with edge `uv` removed.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<PatternGadget> {
        if !self.graph.has_edge(u, v) {
            return Err(Error::Precondition(format!("{u}{v} is not an edge of the gadget")));
        }
        let mut b = Graph::builder(self.graph.vertex_count());
        for (x, y) in self.graph.edges().filter(|&e| e != (u.min(v), u.max(v))) {
            b.add_edge(x, y)?;
        }
        for x in self.graph.looped_vertices() {
            b.add_loop(x)?;
        }
        let mut g = self.clone();
        g.graph = b.build();
        g.provenance.construction = format!("{} without edge {u}{v}", self.provenance.construction);
        Ok(g)
    }
}

/// Composes gadgets around one shared host copy.
pub(crate) struct Assembler {
    b: GraphBuilder,
    host_n: usize,
    looped: bool,
}

impl Assembler {
    pub fn new(host: &Graph, looped: bool) -> Self {
        let mut b = host.to_builder();
        for v in host.vertices() {
            b.set_label(v, format!("{}*", host.label(v)));
        }
        Assembler {
            b,
            host_n: host.vertex_count(),
            looped,
        }
    }

    pub fn vertex(&mut self, label: impl Into<String>) -> Vertex {
        let v = if self.looped {
            self.b.add_looped_vertex()
        } else {
            self.b.add_vertex()
        };
        self.b.set_label(v, label);
        v
    }

    pub fn edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.b.add_edge(u, v)?;
        Ok(())
    }

    /// Adds `g` with its host copy merged into the shared one and each listed
    /// `(gadget vertex, existing vertex)` identified. Returns the vertex map.
    pub fn include(&mut self, g: &PatternGadget, tag: &str, identify: &[(Vertex, Vertex)]) -> Result<Vec<Vertex>> {
        let mut map: Vec<Vertex> = Vec::with_capacity(g.vertex_count());
        for v in g.graph.vertices() {
            let target = if v < self.host_n {
                v
            } else if let Some(&(_, w)) = identify.iter().find(|&&(x, _)| x == v) {
                w
            } else {
                let w = if g.graph.has_loop(v) {
                    self.b.add_looped_vertex()
                } else {
                    self.b.add_vertex()
                };
                self.b.set_label(w, format!("{tag}.{}", g.graph.label(v)));
                w
            };
            map.push(target);
        }
        for (u, v) in g.graph.edges() {
            if u >= self.host_n || v >= self.host_n {
                self.b.add_edge(map[u], map[v])?;
            }
        }
        Ok(map)
    }

    pub fn finish(self) -> Graph {
        self.b.build()
    }
}

/// Copies a sub-gadget colouring through its vertex map.
pub(crate) fn paint(target: &mut [Vertex], map: &[Vertex], zeta: &[Vertex]) {
    for (v, &c) in zeta.iter().enumerate() {
        target[map[v]] = c;
    }
}

pub(crate) fn identity_on_host(n: usize, host_n: usize) -> Colouring {
    let mut c = vec![0; n];
    c[..host_n].iter_mut().enumerate().for_each(|(v, x)| *x = v);
    c
}

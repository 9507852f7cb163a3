//! Compiler from K4-recolouring to H-recolouring: each vertex `u` of `G`
//! becomes four signals `u_0..u_3` (signal `u_i` is "on" iff `u` has colour
//! `i`), every edge gets not-both-one gadgets on matching signals and every
//! vertex a not-all-zero gadget on its four signals.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadget::{
    build_naz_quad, build_naz_reflexive, build_nbo_quad, build_nbo_reflexive, transition_plans,
    validate_locally_triangulated, LocalTriangulationCertificate, PatternGadget, ReflexivePath, TransitionPlan,
};
use crate::generators;
use crate::graph::{is_homomorphism, Graph, GraphBuilder, Vertex};
use crate::oracle::{self, Colouring, HomSpace, MoveRule, Witness};
use crate::surface::anchor::{find_anchor, Anchor};
use crate::surface::embedding::Embedding;
use crate::surface::validate::{validate_reflexive_triangulation, validate_sphere_quadrangulation};

/// Number of colours of the source problem.
pub const SOURCE_COLOURS: usize = 4;

/// A host together with what the gadget builders need from it.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HostKit {
    Quadrangulation {
        host: Graph,
        embedding: Embedding,
        anchor: Anchor,
    },
    Reflexive {
        host: Graph,
        certificate: LocalTriangulationCertificate,
    },
}

impl HostKit {
    /// An irreflexive K_{2,3}-free sphere quadrangulation; `zero` picks the
    /// anchor vertex (default: lowest id of degree three).
    pub fn quadrangulation(host: &Graph, embedding: &Embedding, zero: Option<Vertex>) -> Result<HostKit> {
        let report = validate_sphere_quadrangulation(host, embedding);
        if !report.valid {
            return Err(Error::Precondition(format!(
                "not a K23-free sphere quadrangulation: failed {:?}",
                report.failed_checks()
            )));
        }
        let anchor = find_anchor(host, embedding, zero)?;
        Ok(HostKit::Quadrangulation {
            host: host.clone(),
            embedding: embedding.clone(),
            anchor,
        })
    }

    /// A reflexive host locally triangulated around `zero` (default 0) with
    /// F the whole host. The embedding, if given, fixes the ring orientation.
    pub fn reflexive(host: &Graph, embedding: Option<&Embedding>, zero: Option<Vertex>, cap: usize) -> Result<HostKit> {
        let all: Vec<Vertex> = host.vertices().collect();
        let certificate = validate_locally_triangulated(host, zero.unwrap_or(0), &all, embedding, cap)?;
        Ok(HostKit::Reflexive {
            host: host.clone(),
            certificate,
        })
    }

    /// Picks the kit from the host: reflexive hosts get the local
    /// triangulation kit, irreflexive ones the quadrangulation kit.
    pub fn detect(host: &Graph, embedding: &Embedding, zero: Option<Vertex>, cap: usize) -> Result<HostKit> {
        if host.is_reflexive() {
            let report = validate_reflexive_triangulation(host, embedding);
            let e = report.valid.then_some(embedding);
            HostKit::reflexive(host, e, zero, cap)
        } else {
            HostKit::quadrangulation(host, embedding, zero)
        }
    }

    pub fn host(&self) -> &Graph {
        match self {
            HostKit::Quadrangulation { host, .. } | HostKit::Reflexive { host, .. } => host,
        }
    }

    pub fn rule(&self) -> MoveRule {
        match self {
            HostKit::Quadrangulation { .. } => MoveRule::Irreflexive,
            HostKit::Reflexive { .. } => MoveRule::Reflexive,
        }
    }

    /// The host colours playing "off" and "on".
    pub fn zero_one(&self) -> (Vertex, Vertex) {
        match self {
            HostKit::Quadrangulation { anchor, .. } => (anchor.zero, anchor.one()),
            HostKit::Reflexive { certificate, .. } => (certificate.zero, certificate.one()),
        }
    }

    /// `{(0,0), (1,0), (0,1)}`-gadget.
    pub fn not_both_one(&self) -> Result<PatternGadget> {
        match self {
            HostKit::Quadrangulation { host, embedding, anchor } => {
                build_nbo_quad(host, embedding, anchor.zero, anchor.one(), anchor.zero, anchor.one())
            }
            HostKit::Reflexive { host, certificate } => build_nbo_reflexive(host, certificate, ReflexivePath::Loop01),
        }
    }

    pub fn not_all_zero(&self) -> Result<PatternGadget> {
        match self {
            HostKit::Quadrangulation { host, embedding, anchor } => build_naz_quad(host, embedding, anchor),
            HostKit::Reflexive { host, certificate } => build_naz_reflexive(host, certificate),
        }
    }
}

/// A gadget template with its transition plans keyed by pattern indices.
#[derive(Clone, Debug)]
pub struct Template {
    pub gadget: PatternGadget,
    pub plans: BTreeMap<(usize, usize), TransitionPlan>,
}

impl Template {
    fn new(gadget: PatternGadget, rule: MoveRule, cap: usize) -> Result<Template> {
        let plans = transition_plans(&gadget, rule, cap)?
            .into_iter()
            .map(|p| ((p.from, p.to), p))
            .collect();
        Ok(Template { gadget, plans })
    }
}

#[derive(Clone, Debug)]
pub struct GadgetLibrary {
    pub kit: HostKit,
    pub nbo: Template,
    pub naz: Template,
}

impl GadgetLibrary {
    pub fn new(kit: HostKit, cap: usize) -> Result<GadgetLibrary> {
        let rule = kit.rule();
        let nbo = Template::new(kit.not_both_one()?, rule, cap)?;
        let naz = Template::new(kit.not_all_zero()?, rule, cap)?;
        Ok(GadgetLibrary { kit, nbo, naz })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GadgetKind {
    /// Not-both-one gadget on `(u_i, v_i)`.
    NotBothOne { u: Vertex, v: Vertex, i: usize },
    /// Not-all-zero gadget on `u_0..u_3`.
    NotAllZero { u: Vertex },
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetEntry {
    pub id: usize,
    pub kind: GadgetKind,
    pub signals: Vec<Vertex>,
    /// Vertices `start..end` of `G'` hold this gadget's non-signal vertices.
    pub start: Vertex,
    pub end: Vertex,
    /// Template vertex to `G'` vertex.
    #[serde(skip)]
    pub map: Vec<Vertex>,
}

impl GadgetEntry {
    fn template<'a>(&self, lib: &'a GadgetLibrary) -> &'a Template {
        match self.kind {
            GadgetKind::NotBothOne { .. } => &lib.nbo,
            GadgetKind::NotAllZero { .. } => &lib.naz,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionBundle {
    pub source: Graph,
    pub f: Colouring,
    pub g: Colouring,
    pub g_prime: Graph,
    pub f_prime: Colouring,
    pub g_prime_colouring: Colouring,
    /// `signal_index[u][i]` is the vertex `u_i`; always `4u + i`.
    pub signal_index: Vec<[Vertex; SOURCE_COLOURS]>,
    pub registry: Vec<GadgetEntry>,
    pub rule: MoveRule,
    pub zero: Vertex,
    pub one: Vertex,
    #[serde(skip)]
    pub library: GadgetLibrary,
    /// Gadget ids touching each signal, ascending.
    #[serde(skip)]
    incident: Vec<Vec<usize>>,
}

fn check_k4_colouring(g: &Graph, f: &[Vertex], what: &str) -> Result<()> {
    let k4 = generators::complete(SOURCE_COLOURS);
    if !is_homomorphism(g, &k4, f).map_err(|e| Error::Precondition(format!("{what}: {e}")))? {
        return Err(Error::Precondition(format!("{what} is not a proper 4-colouring")));
    }
    Ok(())
}

/// Builds `G'` and the encodings of `f` and `g`.
pub fn compile(source: &Graph, f: &[Vertex], g: &[Vertex], library: GadgetLibrary) -> Result<ReductionBundle> {
    check_k4_colouring(source, f, "f")?;
    check_k4_colouring(source, g, "g")?;
    let (zero, one) = library.kit.zero_one();
    let rule = library.kit.rule();
    let n = source.vertex_count();
    let mut b = GraphBuilder::new(0);
    let signal_index: Vec<[Vertex; SOURCE_COLOURS]> = (0..n)
        .map(|u| {
            std::array::from_fn(|i| {
                let x = if rule == MoveRule::Reflexive {
                    b.add_looped_vertex()
                } else {
                    b.add_vertex()
                };
                b.set_label(x, format!("u{u}_{i}"));
                x
            })
        })
        .collect();

    let mut kinds = Vec::new();
    for (u, v) in source.edges() {
        for (a, c) in [(u, v), (v, u)] {
            for i in 0..SOURCE_COLOURS {
                kinds.push(GadgetKind::NotBothOne { u: a, v: c, i });
            }
        }
    }
    kinds.extend((0..n).map(|u| GadgetKind::NotAllZero { u }));

    let mut registry = Vec::with_capacity(kinds.len());
    for (id, kind) in kinds.into_iter().enumerate() {
        let (template, signals, tag) = match kind {
            GadgetKind::NotBothOne { u, v, i } => (
                &library.nbo.gadget,
                vec![signal_index[u][i], signal_index[v][i]],
                format!("Y[{u},{v},{i}]"),
            ),
            GadgetKind::NotAllZero { u } => (&library.naz.gadget, signal_index[u].to_vec(), format!("Z[{u}]")),
        };
        let start = b.vertex_count();
        let mut map = Vec::with_capacity(template.vertex_count());
        let t = &template.graph;
        for x in t.vertices() {
            let target = match template.signals.iter().position(|&s| s == x) {
                Some(j) => signals[j],
                None => {
                    let w = if t.has_loop(x) { b.add_looped_vertex() } else { b.add_vertex() };
                    b.set_label(w, format!("{tag}.{}", t.label(x)));
                    w
                }
            };
            map.push(target);
        }
        for (x, y) in t.edges() {
            b.add_edge(map[x], map[y])?;
        }
        registry.push(GadgetEntry {
            id,
            kind,
            signals,
            start,
            end: b.vertex_count(),
            map,
        });
    }
    let g_prime = b.build();

    let mut incident = vec![Vec::new(); g_prime.vertex_count()];
    for e in &registry {
        for &s in &e.signals {
            incident[s].push(e.id);
        }
    }
    let mut bundle = ReductionBundle {
        source: source.clone(),
        f: f.to_vec(),
        g: g.to_vec(),
        g_prime,
        f_prime: Vec::new(),
        g_prime_colouring: Vec::new(),
        signal_index,
        registry,
        rule,
        zero,
        one,
        library,
        incident,
    };
    bundle.f_prime = bundle.encode(f)?;
    bundle.g_prime_colouring = bundle.encode(g)?;
    Ok(bundle)
}

impl ReductionBundle {
    pub fn host(&self) -> &Graph {
        self.library.kit.host()
    }

    pub fn nbo_count(&self) -> usize {
        self.registry
            .iter()
            .filter(|e| matches!(e.kind, GadgetKind::NotBothOne { .. }))
            .count()
    }

    pub fn naz_count(&self) -> usize {
        self.registry.len() - self.nbo_count()
    }

    /// The canonical `G'` colouring of a proper 4-colouring of the source.
    pub fn encode(&self, f: &[Vertex]) -> Result<Colouring> {
        check_k4_colouring(&self.source, f, "colouring")?;
        let mut c = vec![usize::MAX; self.g_prime.vertex_count()];
        for (u, sig) in self.signal_index.iter().enumerate() {
            for (i, &x) in sig.iter().enumerate() {
                c[x] = if f[u] == i { self.one } else { self.zero };
            }
        }
        for e in &self.registry {
            let t = &e.template(&self.library).gadget;
            let p: Vec<Vertex> = e.signals.iter().map(|&s| c[s]).collect();
            let zeta = t
                .zeta(&p)
                .ok_or_else(|| Error::violation("encoded signals form a pattern", format!("gadget {}: {p:?}", e.id)))?;
            for (x, &col) in zeta.iter().enumerate() {
                c[e.map[x]] = col;
            }
        }
        Ok(c)
    }

    /// `u` gets the least `i` with `psi(u_i)` on.
    pub fn project(&self, psi: &[Vertex]) -> Result<Colouring> {
        if psi.len() != self.g_prime.vertex_count() {
            return Err(Error::MalformedMap(format!(
                "colouring has {} entries, G' has {} vertices",
                psi.len(),
                self.g_prime.vertex_count()
            )));
        }
        let f = self
            .signal_index
            .iter()
            .enumerate()
            .map(|(u, sig)| {
                sig.iter()
                    .position(|&x| psi[x] == self.one)
                    .ok_or(Error::ProjectionUndefined { vertex: u })
            })
            .collect::<Result<Colouring>>()?;
        if let Some((u, v)) = self.source.edges().find(|&(u, v)| f[u] == f[v]) {
            return Err(Error::violation(
                "projection is proper",
                format!("adjacent {u} and {v} both project to colour {}", f[u]),
            ));
        }
        Ok(f)
    }

    fn pattern_index(&self, entry: &GadgetEntry, c: &[Vertex]) -> Result<usize> {
        let t = &entry.template(&self.library).gadget;
        let p: Vec<Vertex> = entry.signals.iter().map(|&s| c[s]).collect();
        t.pattern_index(&p)
            .ok_or_else(|| Error::violation("gadget signals form a pattern", format!("gadget {}: {p:?}", entry.id)))
    }

    /// Sets signal `x` to `to`, moving every gadget on `x` through its plan.
    fn switch(&self, x: Vertex, to: Vertex, c: &mut Colouring, out: &mut Vec<Colouring>) -> Result<()> {
        let mut steps = Vec::new();
        for &id in &self.incident[x] {
            let e = &self.registry[id];
            let from = self.pattern_index(e, c)?;
            let mut next = c.clone();
            next[x] = to;
            let target = self.pattern_index(e, &next)?;
            let plan = e.template(&self.library).plans.get(&(from, target)).ok_or_else(|| {
                Error::violation("transition plan", format!("gadget {id} has no plan {from} -> {target}"))
            })?;
            steps.push((e, plan));
        }
        let mut apply = |e: &GadgetEntry, m: &crate::gadget::Move, c: &mut Colouring| {
            let v = e.map[m.vertex];
            debug_assert_eq!(c[v], m.from);
            c[v] = m.to;
            out.push(c.clone());
        };
        for &(e, plan) in &steps {
            plan.pre.iter().for_each(|m| apply(e, m, c));
        }
        let (e, plan) = steps.first().ok_or_else(|| Error::violation("signal in a gadget", format!("{x}")))?;
        apply(e, &plan.flip, c);
        for &(e, plan) in &steps {
            plan.post.iter().for_each(|m| apply(e, m, c));
        }
        Ok(())
    }

    /// Lifts one recolouring step `f -> g` of the source to a walk from
    /// `encode(f)` to `encode(g)`: switch the new colour's signal on, then
    /// the old one's off.
    pub fn lift_move(&self, f: &[Vertex], g: &[Vertex]) -> Result<Witness> {
        let start = self.encode(f)?;
        let end = self.encode(g)?;
        let diff: Vec<Vertex> = (0..f.len()).filter(|&u| f[u] != g[u]).collect();
        let mut c = start.clone();
        let mut states = vec![start];
        match diff.as_slice() {
            [] => {}
            &[u] => {
                self.switch(self.signal_index[u][g[u]], self.one, &mut c, &mut states)?;
                self.switch(self.signal_index[u][f[u]], self.zero, &mut c, &mut states)?;
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "colourings differ on {} vertices, not one",
                    diff.len()
                )))
            }
        }
        if c != end {
            return Err(Error::violation("lifted walk ends at the encoding", "final colouring differs"));
        }
        Ok(Witness(states))
    }

    /// Lifts a whole source witness and validates the result.
    pub fn lift_sequence(&self, w: &Witness) -> Result<Witness> {
        let Some(first) = w.first() else {
            return Ok(Witness::default());
        };
        let mut out = vec![self.encode(first)?];
        for pair in w.0.windows(2) {
            let part = self.lift_move(&pair[0], &pair[1])?;
            out.extend(part.0.into_iter().skip(1));
        }
        let lifted = Witness(out);
        let check = oracle::validate_witness(&self.g_prime, self.host(), &lifted, self.rule);
        if !check.valid {
            return Err(Error::violation(
                "lifted witness is valid",
                format!("step {:?}: {}", check.first_failure, check.reason.unwrap_or_default()),
            ));
        }
        Ok(lifted)
    }

    /// Random walk in `Hom(G', H)` from `f'`, projecting every state.
    pub fn random_walk_check(&self, steps: usize, seed: u64, cap: usize) -> Result<WalkReport> {
        let k4 = generators::complete(SOURCE_COLOURS);
        let comp: BTreeSet<Colouring> = oracle::component(&self.source, &k4, &self.f, MoveRule::Irreflexive, cap)?
            .into_iter()
            .collect();
        let space = HomSpace::new(&self.g_prime, self.host())?;
        let mut c = space.to_state(&self.f_prime)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = WalkReport {
            steps,
            seed,
            component_size: comp.len(),
            distinct_projections: 0,
            violations: 0,
            first_violation: None,
        };
        let mut seen = BTreeSet::new();
        let mut moves = Vec::new();
        for step in 0..=steps {
            let psi: Colouring = c.iter().map(|&x| x as Vertex).collect();
            let verdict = match self.project(&psi) {
                Ok(p) if comp.contains(&p) => {
                    seen.insert(p);
                    None
                }
                Ok(p) => Some(format!("projection {p:?} is outside the component of f")),
                Err(e) => Some(e.to_string()),
            };
            if let Some(v) = verdict {
                report.violations += 1;
                report.first_violation.get_or_insert(format!("step {step}: {v}"));
            }
            if step == steps {
                break;
            }
            moves.clear();
            for v in 0..c.len() {
                let mut m = space.moves_at(&c, v, self.rule);
                while m != 0 {
                    let col = m.trailing_zeros() as u8;
                    m &= m - 1;
                    moves.push((v, col));
                }
            }
            if let Some(&(v, col)) = moves.choose(&mut rng) {
                c[v] = col;
            }
        }
        report.distinct_projections = seen.len();
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkReport {
    pub steps: usize,
    pub seed: u64,
    pub component_size: usize,
    pub distinct_projections: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

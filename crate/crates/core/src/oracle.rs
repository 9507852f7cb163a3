//! Brute-force engine over `Hom(G, H)`: enumeration, single-vertex moves,
//! breadth-first reachability and frozen vertices.

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const DEFAULT_CAP: usize = 10_000_000;

/// Largest host the oracle accepts; colour sets are single machine words.
pub const MAX_HOST_VERTICES: usize = 64;

pub type Colouring = Vec<Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveRule {
    /// Change the colour of one vertex.
    Irreflexive,
    /// Change the colour of one vertex to a neighbour of its old colour.
    Reflexive,
}

impl std::str::FromStr for MoveRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "irreflexive" => Ok(MoveRule::Irreflexive),
            "reflexive" => Ok(MoveRule::Reflexive),
            other => Err(Error::Domain(format!("unknown move rule {other:?}"))),
        }
    }
}

/// A reconfiguration sequence `f_0, ..., f_m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(pub Vec<Colouring>);

impl Witness {
    pub fn moves(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    pub fn first(&self) -> Option<&Colouring> {
        self.0.first()
    }
    pub fn last(&self) -> Option<&Colouring> {
        self.0.last()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ReachResult {
    Reachable { moves: usize, witness: Witness },
    Unreachable { states_explored: usize },
    CapExceeded { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub valid: bool,
    /// Index of the first offending colouring.
    pub first_failure: Option<usize>,
    pub reason: Option<String>,
}

pub(crate) fn bit(c: usize) -> u64 {
    1u64 << c
}

fn bits_of(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let c = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            c
        })
    })
}

/// `G` and `H` preprocessed for move generation and packed state storage.
#[derive(Clone, Debug)]
pub struct HomSpace {
    n: usize,
    host_n: usize,
    nbrs: Vec<Vec<u32>>,
    looped: Vec<bool>,
    hadj: Vec<u64>,
    loop_mask: u64,
    bits: u32,
    per_word: usize,
    words: usize,
}

pub enum Flow {
    Continue,
    Stop,
}

/// The explored part of a component: packed states in discovery order with
/// parent links.
pub struct Exploration<'s> {
    space: &'s HomSpace,
    arena: Vec<u64>,
    parents: Vec<u32>,
    table: HashTable<u32>,
    /// Per vertex, the colours seen over all explored states.
    pub seen: Vec<u64>,
    /// Index of the state at which the visitor stopped.
    pub stopped_at: Option<usize>,
}

impl HomSpace {
    pub fn new(g: &Graph, h: &Graph) -> Result<Self> {
        let host_n = h.vertex_count();
        if host_n > MAX_HOST_VERTICES {
            return Err(Error::Precondition(format!(
                "host has {host_n} vertices; the oracle supports at most {MAX_HOST_VERTICES}"
            )));
        }
        if host_n == 0 && g.vertex_count() > 0 {
            return Err(Error::Precondition("empty host".into()));
        }
        let hadj: Vec<u64> = h
            .vertices()
            .map(|c| {
                let mut m: u64 = h.neighbours(c).iter().map(|&d| bit(d)).fold(0, |a, b| a | b);
                if h.has_loop(c) {
                    m |= bit(c);
                }
                m
            })
            .collect();
        let loop_mask = h.looped_vertices().map(bit).fold(0, |a, b| a | b);
        let bits = (usize::BITS - host_n.saturating_sub(1).leading_zeros()).max(1);
        let per_word = 64 / bits as usize;
        let n = g.vertex_count();
        Ok(HomSpace {
            n,
            host_n,
            nbrs: g.vertices().map(|v| g.neighbours(v).iter().map(|&u| u as u32).collect()).collect(),
            looped: g.vertices().map(|v| g.has_loop(v)).collect(),
            hadj,
            loop_mask,
            bits,
            per_word,
            words: n.div_ceil(per_word).max(1),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn host_vertex_count(&self) -> usize {
        self.host_n
    }

    pub fn all_colours(&self) -> u64 {
        if self.host_n == 64 {
            u64::MAX
        } else {
            bit(self.host_n) - 1
        }
    }

    pub fn to_state(&self, f: &[Vertex]) -> Result<Vec<u8>> {
        if f.len() != self.n {
            return Err(Error::MalformedMap(format!("expected {} entries, got {}", self.n, f.len())));
        }
        f.iter()
            .map(|&c| {
                if c < self.host_n {
                    Ok(c as u8)
                } else {
                    Err(Error::MalformedMap(format!("colour {c} outside the host")))
                }
            })
            .collect()
    }

    pub fn is_hom(&self, c: &[u8]) -> bool {
        (0..self.n).all(|v| {
            let m = self.hadj[c[v] as usize];
            (!self.looped[v] || m & bit(c[v] as usize) != 0)
                && self.nbrs[v].iter().all(|&u| m & bit(c[u as usize] as usize) != 0)
        })
    }

    /// Colours `v` may take with every other vertex fixed, including its current one.
    pub fn admissible(&self, c: &[u8], v: Vertex) -> u64 {
        let mut m = self.all_colours();
        for &u in &self.nbrs[v] {
            m &= self.hadj[c[u as usize] as usize];
        }
        if self.looped[v] {
            m &= self.loop_mask;
        }
        m
    }

    /// Colours `v` may move to under `rule`, excluding its current one.
    pub fn moves_at(&self, c: &[u8], v: Vertex, rule: MoveRule) -> u64 {
        let cur = c[v] as usize;
        let mut m = self.admissible(c, v) & !bit(cur);
        if rule == MoveRule::Reflexive {
            m &= self.hadj[cur];
        }
        m
    }

    fn pack(&self, c: &[u8], out: &mut [u64]) {
        out.fill(0);
        for (v, &x) in c.iter().enumerate() {
            out[v / self.per_word] |= (x as u64) << ((v % self.per_word) as u32 * self.bits);
        }
    }

    fn unpack(&self, w: &[u64], out: &mut [u8]) {
        let mask = (1u64 << self.bits) - 1;
        for (v, slot) in out.iter_mut().enumerate() {
            *slot = ((w[v / self.per_word] >> ((v % self.per_word) as u32 * self.bits)) & mask) as u8;
        }
    }

    /// Breadth-first search from `start`. Only colours in `allowed[v]` may be
    /// entered at `v`. The visitor sees every discovered state, in BFS order,
    /// and may stop the search.
    pub fn explore(
        &self,
        start: &[u8],
        rule: MoveRule,
        allowed: Option<&[u64]>,
        cap: usize,
        mut visit: impl FnMut(usize, &[u8]) -> Flow,
    ) -> Result<Exploration<'_>> {
        let mut ex = Exploration {
            space: self,
            arena: Vec::new(),
            parents: Vec::new(),
            table: HashTable::new(),
            seen: vec![0; self.n],
            stopped_at: None,
        };
        let mut cur = start.to_vec();
        let mut packed = vec![0u64; self.words];
        self.pack(start, &mut packed);
        ex.insert(&packed, u32::MAX);
        let mut head = 0;
        while head < ex.parents.len() {
            let base = head * self.words;
            self.unpack(&ex.arena[base..base + self.words], &mut cur);
            for (v, &x) in cur.iter().enumerate() {
                ex.seen[v] |= bit(x as usize);
            }
            if let Flow::Stop = visit(head, &cur) {
                ex.stopped_at = Some(head);
                return Ok(ex);
            }
            for v in 0..self.n {
                let mut m = self.moves_at(&cur, v, rule);
                if let Some(a) = allowed {
                    m &= a[v];
                }
                let old = cur[v];
                for c in bits_of(m) {
                    cur[v] = c as u8;
                    self.pack(&cur, &mut packed);
                    if ex.insert(&packed, head as u32) && ex.parents.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                }
                cur[v] = old;
            }
            head += 1;
        }
        Ok(ex)
    }
}

impl Exploration<'_> {
    fn hash(words: &[u64]) -> u64 {
        FxBuildHasher.hash_one(words)
    }

    fn slot(&self, i: u32) -> &[u64] {
        let w = self.space.words;
        &self.arena[i as usize * w..(i as usize + 1) * w]
    }

    fn insert(&mut self, packed: &[u64], parent: u32) -> bool {
        let h = Self::hash(packed);
        let w = self.space.words;
        let arena = &self.arena;
        if self
            .table
            .find(h, |&i| &arena[i as usize * w..(i as usize + 1) * w] == packed)
            .is_some()
        {
            return false;
        }
        let id = self.parents.len() as u32;
        self.arena.extend_from_slice(packed);
        self.parents.push(parent);
        let arena = &self.arena;
        self.table
            .insert_unique(h, id, |&i| Self::hash(&arena[i as usize * w..(i as usize + 1) * w]));
        true
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn state(&self, i: usize) -> Vec<u8> {
        let mut out = vec![0; self.space.n];
        self.space.unpack(self.slot(i as u32), &mut out);
        out
    }

    pub fn index_of(&self, c: &[u8]) -> Option<usize> {
        let mut packed = vec![0; self.space.words];
        self.space.pack(c, &mut packed);
        self.table
            .find(Self::hash(&packed), |&i| self.slot(i) == packed.as_slice())
            .map(|&i| i as usize)
    }

    /// States from the start to state `i`.
    pub fn path_to(&self, i: usize) -> Vec<Vec<u8>> {
        let mut path = Vec::new();
        let mut at = i as u32;
        while at != u32::MAX {
            path.push(self.state(at as usize));
            at = self.parents[at as usize];
        }
        path.reverse();
        path
    }

    /// Vertices that kept one colour throughout the explored states.
    pub fn constant_vertices(&self) -> Vec<Vertex> {
        (0..self.seen.len()).filter(|&v| self.seen[v].count_ones() == 1).collect()
    }
}

pub(crate) fn widen(c: &[u8]) -> Colouring {
    c.iter().map(|&x| x as Vertex).collect()
}

fn require_hom(space: &HomSpace, f: &[Vertex], what: &str) -> Result<Vec<u8>> {
    let s = space.to_state(f)?;
    if !space.is_hom(&s) {
        return Err(Error::Precondition(format!("{what} is not a homomorphism")));
    }
    Ok(s)
}

/// All homomorphisms `G -> H` in lexicographic order.
pub fn enumerate_homs(g: &Graph, h: &Graph, cap: usize) -> Result<Vec<Colouring>> {
    let space = HomSpace::new(g, h)?;
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    let initial: Vec<u64> = (0..n)
        .map(|v| if space.looped[v] { space.loop_mask } else { space.all_colours() })
        .collect();
    // domains[d] holds the domains after assigning vertices 0..d.
    let mut domains = vec![initial];
    let mut colour = vec![0usize; n];
    let mut remaining: Vec<u64> = vec![domains[0][0]];
    while !remaining.is_empty() {
        let d = remaining.len() - 1;
        let rem = &mut remaining[d];
        if *rem == 0 {
            remaining.pop();
            domains.pop();
            continue;
        }
        let c = rem.trailing_zeros() as usize;
        *rem &= *rem - 1;
        colour[d] = c;
        let mut next = domains[d].clone();
        let mut dead = false;
        for &u in &space.nbrs[d] {
            let u = u as usize;
            if u > d {
                next[u] &= space.hadj[c];
                dead |= next[u] == 0;
            }
        }
        if dead {
            continue;
        }
        if d + 1 == n {
            out.push(colour.clone());
            if out.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            continue;
        }
        remaining.push(next[d + 1]);
        domains.push(next);
    }
    Ok(out)
}

/// Every colouring one move away from `f`, by vertex then colour.
pub fn neighbours(g: &Graph, h: &Graph, f: &[Vertex], rule: MoveRule) -> Result<Vec<Colouring>> {
    let space = HomSpace::new(g, h)?;
    let mut c = require_hom(&space, f, "f")?;
    let mut out = Vec::new();
    for v in 0..space.n {
        let old = c[v];
        for x in bits_of(space.moves_at(&c, v, rule)) {
            c[v] = x as u8;
            out.push(widen(&c));
        }
        c[v] = old;
    }
    Ok(out)
}

/// Shortest reconfiguration sequence from `f` to `g`, if any.
pub fn reachable(
    g: &Graph,
    h: &Graph,
    f: &[Vertex],
    target: &[Vertex],
    rule: MoveRule,
    cap: usize,
) -> Result<ReachResult> {
    let space = HomSpace::new(g, h)?;
    let start = require_hom(&space, f, "f")?;
    let goal = require_hom(&space, target, "g")?;
    let ex = match space.explore(&start, rule, None, cap, |_, s| {
        if s == goal.as_slice() {
            Flow::Stop
        } else {
            Flow::Continue
        }
    }) {
        Ok(ex) => ex,
        Err(Error::CapExceeded { cap }) => return Ok(ReachResult::CapExceeded { cap }),
        Err(e) => return Err(e),
    };
    Ok(match ex.stopped_at {
        Some(i) => {
            let witness = Witness(ex.path_to(i).iter().map(|s| widen(s)).collect());
            ReachResult::Reachable {
                moves: witness.moves(),
                witness,
            }
        }
        None => ReachResult::Unreachable {
            states_explored: ex.len(),
        },
    })
}

/// The component of `f` in the move graph, in BFS order.
pub fn component(g: &Graph, h: &Graph, f: &[Vertex], rule: MoveRule, cap: usize) -> Result<Vec<Colouring>> {
    let space = HomSpace::new(g, h)?;
    let start = require_hom(&space, f, "f")?;
    let mut out = Vec::new();
    space.explore(&start, rule, None, cap, |_, s| {
        out.push(widen(s));
        Flow::Continue
    })?;
    Ok(out)
}

/// Vertices whose colour is the same in every colouring reachable from `f`.
pub fn frozen_vertices(g: &Graph, h: &Graph, f: &[Vertex], rule: MoveRule, cap: usize) -> Result<Vec<Vertex>> {
    let space = HomSpace::new(g, h)?;
    let start = require_hom(&space, f, "f")?;
    let ex = space.explore(&start, rule, None, cap, |_, _| Flow::Continue)?;
    Ok(ex.constant_vertices())
}

pub fn validate_witness(g: &Graph, h: &Graph, w: &Witness, rule: MoveRule) -> WitnessCheck {
    let fail = |i: usize, reason: String| WitnessCheck {
        valid: false,
        first_failure: Some(i),
        reason: Some(reason),
    };
    let space = match HomSpace::new(g, h) {
        Ok(s) => s,
        Err(e) => return fail(0, e.to_string()),
    };
    let mut prev: Option<Vec<u8>> = None;
    for (i, f) in w.0.iter().enumerate() {
        let c = match space.to_state(f) {
            Ok(c) => c,
            Err(e) => return fail(i, e.to_string()),
        };
        if !space.is_hom(&c) {
            return fail(i, "not a homomorphism".into());
        }
        if let Some(p) = &prev {
            let changed: Vec<usize> = (0..c.len()).filter(|&v| p[v] != c[v]).collect();
            match changed.as_slice() {
                [v] => {
                    let (a, b) = (p[*v] as usize, c[*v] as usize);
                    if rule == MoveRule::Reflexive && space.hadj[a] & bit(b) == 0 {
                        return fail(i, format!("vertex {v} moves from {a} to non-adjacent {b}"));
                    }
                }
                _ => return fail(i, format!("{} vertices change", changed.len())),
            }
        }
        prev = Some(c);
    }
    WitnessCheck {
        valid: true,
        first_failure: None,
        reason: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::is_homomorphism;

    fn identity(n: usize) -> Vec<Vertex> {
        (0..n).collect()
    }

    #[test]
    fn enumeration_counts() {
        let k2 = generators::complete(2);
        let k3 = generators::complete(3);
        assert_eq!(enumerate_homs(&k2, &k3, DEFAULT_CAP).unwrap().len(), 6);
        assert_eq!(enumerate_homs(&k3, &k3, DEFAULT_CAP).unwrap().len(), 6);
        assert!(enumerate_homs(&generators::cycle(5).0, &k2, DEFAULT_CAP).unwrap().is_empty());
        assert_eq!(enumerate_homs(&generators::path(3), &k3, DEFAULT_CAP).unwrap().len(), 12);
    }

    #[test]
    fn enumeration_is_lexicographic_and_sound() {
        let (c4, _) = generators::cycle(4);
        let k3 = generators::complete(3);
        let homs = enumerate_homs(&c4, &k3, DEFAULT_CAP).unwrap();
        assert!(homs.windows(2).all(|w| w[0] < w[1]));
        // Brute force over all 3^4 maps.
        let mut brute = 0;
        for code in 0..81usize {
            let m: Vec<Vertex> = (0..4).map(|i| code / 3usize.pow(i) % 3).collect();
            brute += is_homomorphism(&c4, &k3, &m).unwrap() as usize;
        }
        assert_eq!(homs.len(), brute);
    }

    #[test]
    fn enumeration_respects_cap() {
        let k4 = generators::complete(4);
        let e = enumerate_homs(&generators::path(4), &k4, 5);
        assert!(matches!(e, Err(Error::CapExceeded { cap: 5 })));
    }

    #[test]
    fn looped_source_vertex_needs_looped_colour() {
        let mut b = Graph::builder(2);
        b.add_edge(0, 1).unwrap().add_loop(0).unwrap();
        let g = b.build();
        let mut hb = Graph::builder(3);
        hb.add_edge(0, 1).unwrap().add_edge(1, 2).unwrap().add_loop(2).unwrap();
        let h = hb.build();
        assert_eq!(enumerate_homs(&g, &h, 100).unwrap(), vec![vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn neighbours_of_frozen_and_free_colourings() {
        let (cube, _) = generators::cube();
        assert!(neighbours(&cube, &cube, &identity(8), MoveRule::Irreflexive).unwrap().is_empty());
        let tri = generators::complete(3).reflexive_closure();
        let n = neighbours(&tri, &tri, &[0, 0, 0], MoveRule::Reflexive).unwrap();
        assert_eq!(n.len(), 6);
        let single = Graph::builder(1).build();
        let k4 = generators::complete(4);
        assert_eq!(neighbours(&single, &k4, &[0], MoveRule::Irreflexive).unwrap().len(), 3);
    }

    #[test]
    fn k4_into_k4_is_frozen() {
        let k4 = generators::complete(4);
        let r = reachable(&k4, &k4, &[0, 1, 2, 3], &[1, 0, 2, 3], MoveRule::Irreflexive, DEFAULT_CAP).unwrap();
        assert_eq!(r, ReachResult::Unreachable { states_explored: 1 });
        let frozen = frozen_vertices(&k4, &k4, &identity(4), MoveRule::Irreflexive, DEFAULT_CAP).unwrap();
        assert_eq!(frozen, identity(4));
    }

    #[test]
    fn trivial_and_short_witnesses() {
        let k3 = generators::complete(3);
        let p3 = generators::path(3);
        match reachable(&p3, &k3, &[0, 1, 0], &[0, 1, 0], MoveRule::Irreflexive, 10).unwrap() {
            ReachResult::Reachable { moves, witness } => {
                assert_eq!(moves, 0);
                assert_eq!(witness.0, vec![vec![0, 1, 0]]);
            }
            other => panic!("{other:?}"),
        }
        let comp = component(&p3, &k3, &[0, 1, 0], MoveRule::Irreflexive, DEFAULT_CAP).unwrap();
        assert_eq!(comp.len(), 12);
        match reachable(&p3, &k3, &[0, 1, 0], &[1, 2, 1], MoveRule::Irreflexive, DEFAULT_CAP).unwrap() {
            ReachResult::Reachable { witness, .. } => {
                assert!(validate_witness(&p3, &k3, &witness, MoveRule::Irreflexive).valid);
                assert_eq!(witness.first().unwrap(), &vec![0, 1, 0]);
                assert_eq!(witness.last().unwrap(), &vec![1, 2, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cap_is_reported() {
        let k3 = generators::complete(3);
        let p3 = generators::path(3);
        let r = reachable(&p3, &k3, &[0, 1, 0], &[2, 1, 2], MoveRule::Irreflexive, 2).unwrap();
        assert_eq!(r, ReachResult::CapExceeded { cap: 2 });
        assert!(matches!(
            frozen_vertices(&p3, &k3, &[0, 1, 0], MoveRule::Irreflexive, 2),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn invalid_endpoints_are_rejected() {
        let k3 = generators::complete(3);
        let p3 = generators::path(3);
        assert!(matches!(
            reachable(&p3, &k3, &[0, 0, 1], &[0, 1, 0], MoveRule::Irreflexive, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            reachable(&p3, &k3, &[0, 1, 7], &[0, 1, 0], MoveRule::Irreflexive, 10),
            Err(Error::MalformedMap(_))
        ));
    }

    #[test]
    fn witness_validation() {
        let k4 = generators::complete(4);
        let single = Graph::builder(2).build();
        let jump = Witness(vec![vec![0, 0], vec![1, 1]]);
        let c = validate_witness(&single, &k4, &jump, MoveRule::Irreflexive);
        assert_eq!((c.valid, c.first_failure), (false, Some(1)));

        let (p, _) = generators::cycle(4);
        let p = p.reflexive_closure();
        let hop = Witness(vec![vec![0, 0], vec![2, 0]]);
        assert!(!validate_witness(&single, &p, &hop, MoveRule::Reflexive).valid);
        assert!(validate_witness(&single, &p, &hop, MoveRule::Irreflexive).valid);
    }

    #[test]
    fn single_vertex_into_k4_is_not_frozen() {
        let single = Graph::builder(1).build();
        let k4 = generators::complete(4);
        assert!(frozen_vertices(&single, &k4, &[2], MoveRule::Irreflexive, 10).unwrap().is_empty());
    }

    #[test]
    fn packing_round_trips_across_word_boundaries() {
        // 12 colours -> 4 bits, 16 per word; 40 vertices span three words.
        let g = Graph::builder(40).build();
        let (ico, _) = generators::reflexive_icosahedron();
        let space = HomSpace::new(&g, &ico).unwrap();
        let c: Vec<u8> = (0..40).map(|i| (i * 7 % 12) as u8).collect();
        let mut w = vec![0; space.words];
        space.pack(&c, &mut w);
        let mut back = vec![0; 40];
        space.unpack(&w, &mut back);
        assert_eq!(back, c);
    }

    #[test]
    fn oversized_host_is_rejected() {
        let big = Graph::builder(65).build();
        assert!(matches!(HomSpace::new(&big, &big), Err(Error::Precondition(_))));
    }
}

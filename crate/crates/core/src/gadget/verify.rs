//! Exhaustive checks of the three gadget conditions, and per-transition move
//! plans used when lifting walks through a reduction.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::PatternGadget;
use crate::graph::{is_homomorphism, Vertex};
use crate::oracle::{bit, Flow, HomSpace, MoveRule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConditionOutcome {
    Pass { states: usize },
    Fail { detail: String },
    CapExceeded { cap: usize },
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rule: MoveRule,
    pub patterns: usize,
    /// Canonical colourings are homomorphisms with the right signal values.
    pub canonical: ConditionOutcome,
    /// Every colouring reachable from a canonical one shows a pattern on the signals.
    pub closed: ConditionOutcome,
    /// Patterns differing in one signal are connected through colourings
    /// showing one of the two.
    pub transitions: ConditionOutcome,
    /// Whether the host copy kept its identity colouring in every state seen
    /// by the closure check. `None` if that check did not finish.
    pub host_frozen: Option<bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.canonical.passed() && self.closed.passed() && self.transitions.passed()
    }

    pub fn cap_exceeded(&self) -> bool {
        [&self.canonical, &self.closed, &self.transitions]
            .iter()
            .any(|c| matches!(c, ConditionOutcome::CapExceeded { .. }))
    }
}

fn hamming(p: &[Vertex], q: &[Vertex]) -> usize {
    p.iter().zip(q).filter(|(a, b)| a != b).count()
}

fn check_canonical(g: &PatternGadget) -> Result<Option<String>> {
    if g.canonical.len() != g.patterns.len() {
        return Ok(Some(format!(
            "{} patterns but {} canonical colourings",
            g.patterns.len(),
            g.canonical.len()
        )));
    }
    for (p, z) in g.patterns.iter().zip(&g.canonical) {
        if p.len() != g.signals.len() {
            return Ok(Some(format!("pattern {p:?} has the wrong arity")));
        }
        if z.len() != g.vertex_count() {
            return Ok(Some(format!("colouring for {p:?} has length {}", z.len())));
        }
        if !is_homomorphism(&g.graph, &g.host, z)? {
            return Ok(Some(format!("colouring for {p:?} is not a homomorphism")));
        }
        if g.signal_values(z) != *p {
            return Ok(Some(format!("colouring for {p:?} shows {:?} on the signals", g.signal_values(z))));
        }
    }
    Ok(None)
}

/// Checks conditions (a), (b), (c) exhaustively. A failure of (a) skips the
/// other two, which are then reported as failed.
pub fn verify_pattern_gadget(g: &PatternGadget, rule: MoveRule, cap: usize) -> Result<VerificationReport> {
    let space = HomSpace::new(&g.graph, &g.host)?;
    let mut report = VerificationReport {
        rule,
        patterns: g.patterns.len(),
        canonical: ConditionOutcome::Pass { states: 0 },
        closed: ConditionOutcome::Fail {
            detail: "skipped".into(),
        },
        transitions: ConditionOutcome::Fail {
            detail: "skipped".into(),
        },
        host_frozen: None,
    };
    if let Some(detail) = check_canonical(g)? {
        report.canonical = ConditionOutcome::Fail { detail };
        return Ok(report);
    }
    let zetas: Vec<Vec<u8>> = g.canonical.iter().map(|z| space.to_state(z)).collect::<Result<_>>()?;
    let allowed_patterns: HashSet<Vec<u8>> = g.patterns.iter().map(|p| p.iter().map(|&c| c as u8).collect()).collect();

    let (closed, frozen) = closure(g, &space, &zetas, &allowed_patterns, rule, cap)?;
    report.closed = closed;
    report.host_frozen = frozen;
    report.transitions = transitions(g, &space, &zetas, rule, cap)?;
    Ok(report)
}

fn closure(
    g: &PatternGadget,
    space: &HomSpace,
    zetas: &[Vec<u8>],
    allowed: &HashSet<Vec<u8>>,
    rule: MoveRule,
    cap: usize,
) -> Result<(ConditionOutcome, Option<bool>)> {
    let mut done = vec![false; zetas.len()];
    let mut states = 0;
    let mut frozen = true;
    let mut sig = vec![0u8; g.signals.len()];
    for i in 0..zetas.len() {
        if done[i] {
            continue;
        }
        let mut bad = None;
        let ex = match space.explore(&zetas[i], rule, None, cap.saturating_sub(states), |_, c| {
            for (s, &x) in sig.iter_mut().zip(&g.signals) {
                *s = c[x];
            }
            if allowed.contains(&sig) {
                Flow::Continue
            } else {
                bad = Some(sig.clone());
                Flow::Stop
            }
        }) {
            Ok(ex) => ex,
            Err(Error::CapExceeded { .. }) => return Ok((ConditionOutcome::CapExceeded { cap }, None)),
            Err(e) => return Err(e),
        };
        if let (Some(at), Some(sig)) = (ex.stopped_at, bad) {
            let detail = format!(
                "from the canonical colouring of {:?}, {} moves reach signals {:?}",
                g.patterns[i],
                ex.path_to(at).len() - 1,
                sig
            );
            return Ok((ConditionOutcome::Fail { detail }, None));
        }
        states += ex.len();
        frozen &= g.host_copy().all(|v| ex.seen[v] == bit(v));
        for (j, z) in zetas.iter().enumerate() {
            if !done[j] && ex.index_of(z).is_some() {
                done[j] = true;
            }
        }
    }
    Ok((ConditionOutcome::Pass { states }, Some(frozen)))
}

fn signal_masks(space: &HomSpace, g: &PatternGadget, p: &[Vertex], q: &[Vertex]) -> Vec<u64> {
    let mut allowed = vec![space.all_colours(); g.vertex_count()];
    for (j, &x) in g.signals.iter().enumerate() {
        allowed[x] = bit(p[j]) | bit(q[j]);
    }
    allowed
}

fn transitions(
    g: &PatternGadget,
    space: &HomSpace,
    zetas: &[Vec<u8>],
    rule: MoveRule,
    cap: usize,
) -> Result<ConditionOutcome> {
    let mut states = 0;
    for i in 0..g.patterns.len() {
        for j in i + 1..g.patterns.len() {
            let (p, q) = (&g.patterns[i], &g.patterns[j]);
            if hamming(p, q) != 1 {
                continue;
            }
            let allowed = signal_masks(space, g, p, q);
            let target = &zetas[j];
            let ex = match space.explore(&zetas[i], rule, Some(&allowed), cap, |_, c| {
                if c == target.as_slice() {
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            }) {
                Ok(ex) => ex,
                Err(Error::CapExceeded { .. }) => return Ok(ConditionOutcome::CapExceeded { cap }),
                Err(e) => return Err(e),
            };
            if ex.stopped_at.is_none() {
                return Ok(ConditionOutcome::Fail {
                    detail: format!(
                        "no walk from the canonical colouring of {p:?} to that of {q:?} ({} states explored)",
                        ex.len()
                    ),
                });
            }
            states += ex.len();
        }
    }
    Ok(ConditionOutcome::Pass { states })
}

/// Recolour `vertex` from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub vertex: Vertex,
    pub from: Vertex,
    pub to: Vertex,
}

impl Move {
    pub fn apply(&self, c: &mut [Vertex]) {
        debug_assert_eq!(c[self.vertex], self.from);
        c[self.vertex] = self.to;
    }

    pub fn reversed(self) -> Move {
        Move {
            vertex: self.vertex,
            from: self.to,
            to: self.from,
        }
    }
}

/// Walk from the canonical colouring of pattern `from` to that of `to`:
/// `pre` keeps the signals fixed, `flip` changes the one differing signal,
/// `post` keeps the new signals fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionPlan {
    pub from: usize,
    pub to: usize,
    pub pre: Vec<Move>,
    pub flip: Move,
    pub post: Vec<Move>,
}

impl TransitionPlan {
    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.pre.iter().chain(std::iter::once(&self.flip)).chain(&self.post)
    }
}

fn moves_along(path: &[Vec<u8>]) -> Vec<Move> {
    path.windows(2)
        .map(|w| {
            let v = (0..w[0].len()).find(|&v| w[0][v] != w[1][v]).expect("consecutive states differ");
            Move {
                vertex: v,
                from: w[0][v] as Vertex,
                to: w[1][v] as Vertex,
            }
        })
        .collect()
}

/// A plan for every ordered pair of patterns differing in one signal, in
/// lexicographic order of `(from, to)`.
pub fn transition_plans(g: &PatternGadget, rule: MoveRule, cap: usize) -> Result<Vec<TransitionPlan>> {
    let space = HomSpace::new(&g.graph, &g.host)?;
    let zetas: Vec<Vec<u8>> = g.canonical.iter().map(|z| space.to_state(z)).collect::<Result<_>>()?;
    let regions = g
        .patterns
        .iter()
        .zip(&zetas)
        .map(|(p, z)| {
            let allowed = signal_masks(&space, g, p, p);
            space.explore(z, rule, Some(&allowed), cap, |_, _| Flow::Continue)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut plans = Vec::new();
    for (i, p) in g.patterns.iter().enumerate() {
        for (j, q) in g.patterns.iter().enumerate() {
            if hamming(p, q) != 1 {
                continue;
            }
            let k = (0..p.len()).find(|&k| p[k] != q[k]).unwrap();
            let x = g.signals[k];
            let found = (0..regions[i].len()).find_map(|s| {
                let mut c = regions[i].state(s);
                if space.moves_at(&c, x, rule) & bit(q[k]) == 0 {
                    return None;
                }
                c[x] = q[k] as u8;
                regions[j].index_of(&c).map(|t| (s, t))
            });
            let Some((s, t)) = found else {
                return Err(Error::violation(
                    "single-flip transition",
                    format!("no state showing {p:?} flips signal {k} into the region of {q:?}"),
                ));
            };
            let mut post = moves_along(&regions[j].path_to(t));
            post.reverse();
            post.iter_mut().for_each(|m| *m = m.reversed());
            plans.push(TransitionPlan {
                from: i,
                to: j,
                pre: moves_along(&regions[i].path_to(s)),
                flip: Move {
                    vertex: x,
                    from: p[k],
                    to: q[k],
                },
                post,
            });
        }
    }
    Ok(plans)
}

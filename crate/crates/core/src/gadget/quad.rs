//! Gadgets over irreflexive K_{2,3}-free sphere quadrangulations.

use crate::error::{Error, Result};
use crate::gadget::phi::{build_phi_quad, Pair, PhiDigraph};
use crate::gadget::{identity_on_host, paint, Assembler, PatternGadget, Provenance};
use crate::graph::{Graph, Vertex};
use crate::oracle::MoveRule;
use crate::surface::anchor::Anchor;
use crate::surface::embedding::Embedding;

/// Builds the ladder gadget along a pair-digraph path `(c_1,d_1) ... (c_m,d_m)`.
///
/// `attach(c, d)` returns the host vertices whose copies each `y_i` is joined
/// to. With `(a_1,a_0) = (c_1,d_1)` and `(b_0,b_1) = (c_m,d_m)` the pattern
/// set is `{(a_0,b_0), (a_1,b_0), (a_0,b_1)}`.
pub(crate) fn ladder_gadget(
    host: &Graph,
    path: &[Pair],
    looped: bool,
    rule: MoveRule,
    construction: &str,
    attach: impl Fn(Vertex, Vertex) -> Result<Vec<Vertex>>,
) -> Result<PatternGadget> {
    let m = path.len();
    if m < 2 {
        return Err(Error::Precondition(
            "the two signals would coincide: the path needs at least two pairs".into(),
        ));
    }
    let mut asm = Assembler::new(host, looped);
    let ys: Vec<Vertex> = (1..=m).map(|i| asm.vertex(format!("y{i}"))).collect();
    for i in 0..m {
        if i + 1 < m {
            asm.edge(ys[i], ys[i + 1])?;
        }
        let (c, d) = path[i];
        for t in attach(c, d)? {
            asm.edge(ys[i], t)?;
        }
    }
    let graph = asm.finish();
    let (a1, a0) = path[0];
    let (b0, b1) = path[m - 1];
    let patterns = vec![vec![a0, b0], vec![a1, b0], vec![a0, b1]];
    let base = identity_on_host(graph.vertex_count(), host.vertex_count());
    let colour = |f: &dyn Fn(usize) -> Vertex| {
        let mut z = base.clone();
        ys.iter().enumerate().for_each(|(i, &y)| z[y] = f(i));
        z
    };
    let canonical = vec![
        colour(&|i| if i == 0 { path[0].1 } else { path[i].0 }),
        colour(&|i| path[i].0),
        colour(&|i| path[i].1),
    ];
    let mut provenance = Provenance::new(construction);
    provenance.path = path.to_vec();
    Ok(PatternGadget {
        graph,
        host: host.clone(),
        signals: vec![ys[0], ys[m - 1]],
        patterns,
        canonical,
        rule,
        provenance,
    })
}

/// The two common neighbours of an across pair.
fn face_companions(h: &Graph, c: Vertex, d: Vertex) -> Result<Vec<Vertex>> {
    let common = h.common_neighbours(c, d);
    if common.len() != 2 {
        return Err(Error::violation(
            "across pair has exactly two common neighbours",
            format!("({c}, {d}) has {common:?}"),
        ));
    }
    Ok(common)
}

pub fn nbo_from_path_quad(h: &Graph, phi: &PhiDigraph, path: &[Pair]) -> Result<PatternGadget> {
    if let Some(w) = path.windows(2).find(|w| !phi.has_arc(w[0], w[1])) {
        return Err(Error::violation(
            "pair digraph path",
            crate::gadget::phi::explain_missing_arc(h, w[0], w[1]),
        ));
    }
    ladder_gadget(h, path, false, MoveRule::Irreflexive, "not-both-one ladder (quadrangulation)", |c, d| {
        face_companions(h, c, d)
    })
}

/// A `{(a0,b0), (a1,b0), (a0,b1)}`-gadget from a shortest pair-digraph path
/// from `(a1,a0)` to `(b0,b1)`.
pub fn build_nbo_quad(h: &Graph, e: &Embedding, a0: Vertex, a1: Vertex, b0: Vertex, b1: Vertex) -> Result<PatternGadget> {
    let phi = build_phi_quad(h, e)?;
    for (x, y) in [(a1, a0), (b0, b1)] {
        if !phi.contains((x, y)) {
            return Err(Error::Precondition(format!("{x} is not across from {y}")));
        }
    }
    let path = phi.path((a1, a0), (b0, b1))?;
    nbo_from_path_quad(h, &phi, &path)
}

/// The not-all-zero gadget on signals `z_1..z_4` with colours `0` (the
/// anchor) and `1` (its first ring vertex), sharing one host copy.
pub fn build_naz_quad(h: &Graph, e: &Embedding, anchor: &Anchor) -> Result<PatternGadget> {
    let zero = anchor.zero;
    let [one, two, three] = anchor.ring;
    let [a12, a23, a31] = anchor.alphas;
    if !h.has_edge(a12, zero) || !h.has_edge(a23, zero) || !h.has_edge(a31, zero) {
        return Err(Error::Precondition("anchor alphas must neighbour 0".into()));
    }
    // W_1, W_3: {(1,2),(0,2),(1,0)}; W_2, W_4: {(1,3),(0,3),(1,0)}; Y: {(1,1),(0,1),(1,0)}.
    let w13 = build_nbo_quad(h, e, one, zero, two, zero)?;
    let w24 = build_nbo_quad(h, e, one, zero, three, zero)?;
    let y = build_nbo_quad(h, e, one, zero, one, zero)?;

    let mut asm = Assembler::new(h, false);
    let ws: Vec<&PatternGadget> = vec![&w13, &w24, &w13, &w24];
    let mut maps = Vec::with_capacity(4);
    for (i, w) in ws.iter().enumerate() {
        maps.push(asm.include(w, &format!("W{}", i + 1), &[])?);
    }
    let z: Vec<Vertex> = (0..4).map(|i| maps[i][ws[i].signals[0]]).collect();
    let w: Vec<Vertex> = (0..4).map(|i| maps[i][ws[i].signals[1]]).collect();
    let x12 = asm.vertex("x12");
    let y12 = asm.vertex("y12");
    let x34 = asm.vertex("x34");
    let y34 = asm.vertex("y34");
    for (x, yy, wa, wb) in [(x12, y12, w[0], w[1]), (x34, y34, w[2], w[3])] {
        for t in [wa, wb, zero, yy] {
            asm.edge(x, t)?;
        }
        asm.edge(yy, a12)?;
        asm.edge(yy, a31)?;
    }
    let ymap = asm.include(&y, "Y", &[(y.signals[0], y12), (y.signals[1], y34)])?;
    let graph = asm.finish();

    let n = graph.vertex_count();
    let mut patterns = Vec::with_capacity(15);
    let mut canonical = Vec::with_capacity(15);
    for bits in 1u32..16 {
        let p: [bool; 4] = std::array::from_fn(|i| bits >> (3 - i) & 1 == 1);
        let mut c = identity_on_host(n, h.vertex_count());
        for i in 0..4 {
            let b0 = if i % 2 == 0 { two } else { three };
            let pat = if p[i] { [one, zero] } else { [zero, b0] };
            paint(&mut c, &maps[i], ws[i].zeta(&pat).expect("W pattern"));
        }
        for (x, yy, pa, pb) in [(x12, y12, p[0], p[1]), (x34, y34, p[2], p[3])] {
            c[x] = if pb {
                a12
            } else if pa {
                a31
            } else {
                a23
            };
            c[yy] = if pa || pb { one } else { zero };
        }
        let ysig = [c[y12], c[y34]];
        paint(&mut c, &ymap, y.zeta(&ysig).expect("Y pattern"));
        patterns.push(p.iter().map(|&b| if b { one } else { zero }).collect());
        canonical.push(c);
    }
    let mut provenance = Provenance::new("not-all-zero (quadrangulation)");
    provenance.parts = vec![
        w13.provenance.clone(),
        w24.provenance.clone(),
        w13.provenance.clone(),
        w24.provenance.clone(),
        y.provenance.clone(),
    ];
    Ok(PatternGadget {
        graph,
        host: h.clone(),
        signals: z,
        patterns,
        canonical,
        rule: MoveRule::Irreflexive,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::is_homomorphism;
    use crate::surface::anchor::find_anchor;

    #[test]
    fn cube_nbo_shape_and_canonical_colourings() {
        let (cube, e) = generators::cube();
        let anchor = find_anchor(&cube, &e, None).unwrap();
        let (zero, one) = (anchor.zero, anchor.one());
        let g = build_nbo_quad(&cube, &e, zero, one, zero, one).unwrap();
        let m = g.provenance.path.len();
        assert_eq!(g.vertex_count(), 8 + m);
        for (p, z) in g.patterns.iter().zip(&g.canonical) {
            assert!(is_homomorphism(&g.graph, &cube, z).unwrap());
            assert_eq!(&g.signal_values(z), p);
        }
        // zeta_(a0,b1) colours every y_i with d_i.
        let z = g.zeta(&[zero, one]).unwrap();
        for (i, &(_, d)) in g.provenance.path.iter().enumerate() {
            assert_eq!(z[8 + i], d);
        }
    }

    #[test]
    fn degenerate_path_is_rejected() {
        let (cube, e) = generators::cube();
        // (a1,a0) = (b0,b1) would make both signals the same vertex.
        assert!(matches!(build_nbo_quad(&cube, &e, 0, 3, 3, 0), Err(Error::Precondition(_))));
        assert!(matches!(build_nbo_quad(&cube, &e, 0, 1, 0, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn cube_naz_canonical_colourings() {
        let (cube, e) = generators::cube();
        let anchor = find_anchor(&cube, &e, None).unwrap();
        let g = build_naz_quad(&cube, &e, &anchor).unwrap();
        assert_eq!(g.patterns.len(), 15);
        assert!(!g.patterns.contains(&vec![anchor.zero; 4]));
        for (p, z) in g.patterns.iter().zip(&g.canonical) {
            assert!(is_homomorphism(&g.graph, &cube, z).unwrap(), "{p:?}");
            assert_eq!(&g.signal_values(z), p);
        }
    }
}

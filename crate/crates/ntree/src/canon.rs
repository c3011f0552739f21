//! Canonical forms for colored graphs.
//!
//! The canonical form is a byte string that two graphs share exactly when they are
//! isomorphic as colored graphs (same `n`, a bijection of vertices preserving kind,
//! color and adjacency). It is computed by iterated color refinement with
//! individualization and backtracking, which is fast at the sizes appearing here
//! (tens of vertices). With `mod_color_permutation` the form is additionally
//! minimized over all injective recolorings of the colors present into `1..=n+1`,
//! i.e. over the full orbit of the color-permutation action.

use std::collections::BTreeMap;

use crate::graph::{Color, ColoredGraph, VertexKind};

/// Canonical byte string of `g`. See the module docs for the equality guarantee.
pub fn canonical_form(g: &ColoredGraph, mod_color_permutation: bool) -> Vec<u8> {
    if !mod_color_permutation {
        return canon_raw(g);
    }
    let present = g.colors_present();
    let mut best: Option<Vec<u8>> = None;
    for injection in injections(present.len(), g.n() + 1) {
        let map: BTreeMap<Color, Color> = present
            .iter()
            .copied()
            .zip(injection.iter().copied())
            .collect();
        let recolored = g.recolored(|c| map[&c]);
        let code = canon_raw(&recolored);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_else(|| canon_raw(g))
}

/// Rebuild a graph from a canonical byte string (vertex ids become `v0`, `v1`, ...).
/// Returns `None` on malformed input.
pub fn from_canonical(bytes: &[u8]) -> Option<ColoredGraph> {
    let mut cur = bytes;
    let n = take_u32(&mut cur)?;
    let v = take_u32(&mut cur)? as usize;
    let e = take_u32(&mut cur)? as usize;
    let mut vertices = Vec::with_capacity(v);
    for i in 0..v {
        let tag = take_u8(&mut cur)?;
        let color = take_u32(&mut cur)?;
        let kind = match tag {
            0 => VertexKind::F,
            1 => VertexKind::P(color),
            _ => return None,
        };
        vertices.push((format!("v{i}"), kind));
    }
    let mut edges = Vec::with_capacity(e);
    for _ in 0..e {
        let a = take_u32(&mut cur)? as usize;
        let b = take_u32(&mut cur)? as usize;
        if a >= v || b >= v {
            return None;
        }
        edges.push((format!("v{a}"), format!("v{b}")));
    }
    if !cur.is_empty() {
        return None;
    }
    ColoredGraph::new(n, vertices, edges).ok()
}

fn take_u8(cur: &mut &[u8]) -> Option<u8> {
    let (&first, rest) = cur.split_first()?;
    *cur = rest;
    Some(first)
}

fn take_u32(cur: &mut &[u8]) -> Option<u32> {
    if cur.len() < 4 {
        return None;
    }
    let (head, rest) = cur.split_at(4);
    *cur = rest;
    Some(u32::from_be_bytes(head.try_into().unwrap()))
}

/// All injective maps from a `k`-element set into `{1..=max}`, as images of the
/// element ranks, in lexicographic order.
pub(crate) fn injections(k: usize, max: Color) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; max as usize + 1];
    fn rec(
        k: usize,
        max: Color,
        current: &mut Vec<Color>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Color>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for c in 1..=max {
            if !used[c as usize] {
                used[c as usize] = true;
                current.push(c);
                rec(k, max, current, used, out);
                current.pop();
                used[c as usize] = false;
            }
        }
    }
    rec(k, max, &mut current, &mut used, &mut out);
    out
}

fn canon_raw(g: &ColoredGraph) -> Vec<u8> {
    let v = g.vertex_count();
    if v == 0 {
        return encode_ordered(g, &[]);
    }
    // Initial cells by (kind, color): F first, then P by ascending color.
    let keys: Vec<(u8, Color)> = (0..v)
        .map(|i| match g.kind(i) {
            VertexKind::F => (0, 0),
            VertexKind::P(c) => (1, c),
        })
        .collect();
    let cells = rank_dense(&keys);
    let cells = refine(g, cells);
    let mut best: Option<Vec<u8>> = None;
    search(g, cells, &mut best);
    best.expect("search always reaches a discrete partition")
}

/// Replace arbitrary orderable keys by their dense rank (0-based).
pub(crate) fn rank_dense<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

/// Iterated neighborhood refinement to a fixpoint, with canonical dense cell ids.
fn refine(g: &ColoredGraph, mut cells: Vec<u32>) -> Vec<u32> {
    loop {
        let keys: Vec<(u32, Vec<u32>)> = (0..g.vertex_count())
            .map(|i| {
                let mut nbr: Vec<u32> = g.neighbors(i).iter().map(|&w| cells[w]).collect();
                nbr.sort_unstable();
                (cells[i], nbr)
            })
            .collect();
        let new = rank_dense(&keys);
        if new == cells {
            return cells;
        }
        cells = new;
    }
}

fn search(g: &ColoredGraph, cells: Vec<u32>, best: &mut Option<Vec<u8>>) {
    // Find the first cell (smallest id) that is not a singleton.
    let v = g.vertex_count();
    let mut count: BTreeMap<u32, u32> = BTreeMap::new();
    for &c in &cells {
        *count.entry(c).or_default() += 1;
    }
    let target = count.iter().find(|&(_, &cnt)| cnt > 1).map(|(&c, _)| c);
    let Some(target) = target else {
        // Discrete: cell ids are a permutation of 0..v.
        let mut order = vec![0usize; v];
        for (vertex, &c) in cells.iter().enumerate() {
            order[c as usize] = vertex;
        }
        let code = encode_ordered(g, &order);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for vertex in 0..v {
        if cells[vertex] != target {
            continue;
        }
        // Individualize `vertex`: split it off the front of its cell, then refine.
        let keys: Vec<(u32, u8)> = cells
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, u8::from(c == target && i != vertex)))
            .collect();
        let split = rank_dense(&keys);
        search(g, refine(g, split), best);
    }
}

fn encode_ordered(g: &ColoredGraph, order: &[usize]) -> Vec<u8> {
    let mut pos = vec![0u32; order.len()];
    for (p, &vertex) in order.iter().enumerate() {
        pos[vertex] = p as u32;
    }
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (pos[a], pos[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(12 + order.len() * 5 + edges.len() * 8);
    out.extend_from_slice(&g.n().to_be_bytes());
    out.extend_from_slice(&(order.len() as u32).to_be_bytes());
    out.extend_from_slice(&(edges.len() as u32).to_be_bytes());
    for &vertex in order {
        match g.kind(vertex) {
            VertexKind::F => {
                out.push(0);
                out.extend_from_slice(&0u32.to_be_bytes());
            }
            VertexKind::P(c) => {
                out.push(1);
                out.extend_from_slice(&c.to_be_bytes());
            }
        }
    }
    for (a, b) in edges {
        out.extend_from_slice(&a.to_be_bytes());
        out.extend_from_slice(&b.to_be_bytes());
    }
    out
}

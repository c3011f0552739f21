//! Bisimulation minimization of colored graphs.
//!
//! Two vertices are bisimilar when they have the same kind and color and the
//! *sets* of behaviors reachable from them agree; the coarsest such partition is
//! computed by iterated refinement on neighbor-block sets. Collapsing each block
//! to one vertex yields the minimal graph, and the collapse map is a weak
//! covering. Two graphs are equivalent exactly when their minimal graphs are
//! isomorphic (optionally up to a permutation of the colors).

use std::collections::{BTreeMap, BTreeSet};

use crate::canon::{canonical_form, injections, rank_dense};
use crate::graph::{Color, ColoredGraph, VertexKind, WeakCoveringMap};

/// A partition of a graph's vertices into blocks of bisimilar vertices.
///
/// Blocks are sorted internally and ordered by their smallest member, so the
/// partition of a given graph has one stable presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl VertexPartition {
    fn from_assignment(assignment: &[u32]) -> Self {
        let mut by_cell: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in assignment.iter().enumerate() {
            by_cell.entry(c).or_default().push(v);
        }
        let mut blocks: Vec<Vec<usize>> = by_cell.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        let mut block_of = vec![0usize; assignment.len()];
        for (i, block) in blocks.iter().enumerate() {
            for &v in block {
                block_of[v] = i;
            }
        }
        VertexPartition { blocks, block_of }
    }

    /// The blocks, each sorted ascending, ordered by smallest member.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index (into `blocks()`) of the block containing vertex `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    /// Whether every block is a singleton.
    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// The coarsest partition that separates vertices by (kind, color) and is stable
/// under the neighbor-block-set signature.
fn coarsest_stable_partition(g: &ColoredGraph) -> VertexPartition {
    let keys: Vec<(u8, Color)> = (0..g.vertex_count())
        .map(|i| match g.kind(i) {
            VertexKind::F => (0, 0),
            VertexKind::P(c) => (1, c),
        })
        .collect();
    let mut assignment = rank_dense(&keys);
    loop {
        let keys: Vec<(u32, BTreeSet<u32>)> = (0..g.vertex_count())
            .map(|i| {
                let nbr: BTreeSet<u32> =
                    g.neighbors(i).iter().map(|&w| assignment[w]).collect();
                (assignment[i], nbr)
            })
            .collect();
        let new = rank_dense(&keys);
        if new == assignment {
            return VertexPartition::from_assignment(&assignment);
        }
        assignment = new;
    }
}

/// Collapse each bisimilarity block of `g` to one vertex.
///
/// Returns the minimal graph (vertex ids `b0`, `b1`, ... ordered by each block's
/// smallest member in `g`) together with the collapse map, which is a weak
/// covering from `g` onto the minimal graph.
pub fn minimize(g: &ColoredGraph) -> (ColoredGraph, WeakCoveringMap) {
    let partition = coarsest_stable_partition(g);
    let vertices: Vec<(String, VertexKind)> = partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let kind = g.kind(block[0]);
            debug_assert!(
                block.iter().all(|&v| g.kind(v) == kind),
                "blocks of a stable partition are kind-homogeneous"
            );
            (format!("b{i}"), kind)
        })
        .collect();
    let mut quotient_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (u, v) in g.edges() {
        let (bu, bv) = (partition.block_of(u), partition.block_of(v));
        debug_assert_ne!(bu, bv, "edges never stay inside a block of a valid graph");
        if bu != bv {
            quotient_edges.insert((bu.min(bv), bu.max(bv)));
        }
    }
    let edges: Vec<(String, String)> = quotient_edges
        .into_iter()
        .map(|(a, b)| (format!("b{a}"), format!("b{b}")))
        .collect();
    let quotient = ColoredGraph::new(g.n(), vertices, edges)
        .expect("quotient of a well-formed graph is well-formed");
    let vertex_map: BTreeMap<String, String> = (0..g.vertex_count())
        .map(|v| (g.id(v).to_string(), format!("b{}", partition.block_of(v))))
        .collect();
    (quotient, WeakCoveringMap::new(vertex_map))
}

/// Whether `g` is already minimal (no two distinct vertices are bisimilar).
pub fn is_minimal(g: &ColoredGraph) -> bool {
    coarsest_stable_partition(g).is_discrete()
}

/// Whether two graphs have isomorphic minimal forms (colors matched exactly).
pub fn bisimilar(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let (min_a, _) = minimize(a);
    let (min_b, _) = minimize(b);
    canonical_form(&min_a, false) == canonical_form(&min_b, false)
}

/// Search for a permutation of the colors `1..=n+1` carrying `b` onto a graph
/// bisimilar to `a`.
///
/// Returns the first witness in lexicographic one-line order: `sigma[c-1]` is the
/// image of color `c`. Returns `None` when the graphs live in different
/// dimensions or no permutation works.
pub fn bisimilar_up_to_permutation(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<Color>> {
    if a.n() != b.n() {
        return None;
    }
    let (min_a, _) = minimize(a);
    let (min_b, _) = minimize(b);
    let target = canonical_form(&min_a, false);
    // Recoloring commutes with minimization, so recoloring the already-minimal
    // graph is enough. Permutations agreeing on the colors present in `b` produce
    // the same recoloring, so test each restriction once.
    let present = min_b.colors_present();
    let mut seen: BTreeSet<Vec<Color>> = BTreeSet::new();
    for sigma in injections((a.n() + 1) as usize, a.n() + 1) {
        let restriction: Vec<Color> = present.iter().map(|&c| sigma[(c - 1) as usize]).collect();
        if !seen.insert(restriction) {
            continue;
        }
        let recolored = min_b.recolored(|c| sigma[(c - 1) as usize]);
        if canonical_form(&recolored, false) == target {
            return Some(sigma);
        }
    }
    None
}

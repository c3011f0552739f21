//! Brute-force oracles shared by the integration suites.
//!
//! Everything in this module is deliberately implemented with different
//! algorithms than the library uses — exhaustive search instead of partition
//! refinement, rooted-tree canonical strings instead of color refinement — so
//! the two sides can validate each other.
#![allow(dead_code)] // each test target compiles its own copy and uses a subset

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ntree::{Color, ColoredGraph, VertexKind};

/// All free trees with `1..=max_vertices` vertices, one representative per
/// isomorphism class, as edge lists over vertices `0..v`.
///
/// Grown by attaching a new leaf to every vertex of every smaller tree and
/// deduplicating by canonical string, which visits every isomorphism class.
pub fn free_trees(max_vertices: usize) -> Vec<Vec<(usize, usize)>> {
    let mut all: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut frontier: Vec<Vec<(usize, usize)>> = vec![Vec::new()]; // the 1-vertex tree
    all.extend(frontier.iter().cloned());
    for size in 2..=max_vertices {
        let mut seen: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        for tree in &frontier {
            for attach in 0..size - 1 {
                let mut grown = tree.clone();
                grown.push((attach, size - 1));
                let labels = vec![String::new(); size];
                seen.entry(tree_canonical(&grown, &labels)).or_insert(grown);
            }
        }
        frontier = seen.into_values().collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

fn adjacency(vertex_count: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); vertex_count];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// The one or two middle vertices of the tree (peeling leaves layer by layer).
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let v = adj.len();
    if v <= 2 {
        return (0..v).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..v).filter(|&u| degree[u] <= 1).collect();
    let mut remaining = v;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &u in &adj[leaf] {
                if degree[u] > 1 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
            degree[leaf] = 0;
        }
        layer = next;
    }
    layer
}

fn rooted_canonical(adj: &[Vec<usize>], labels: &[String], root: usize, parent: usize) -> String {
    let mut parts: Vec<String> = adj[root]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| rooted_canonical(adj, labels, u, root))
        .collect();
    parts.sort();
    format!("({}{})", labels[root], parts.concat())
}

/// Canonical string of a vertex-labelled free tree: isomorphic labelled trees
/// (and only those) get equal strings.
pub fn tree_canonical(edges: &[(usize, usize)], labels: &[String]) -> String {
    let adj = adjacency(labels.len(), edges);
    centers(&adj)
        .into_iter()
        .map(|c| rooted_canonical(&adj, labels, c, usize::MAX))
        .min()
        .expect("tree has a center")
}

fn kind_label(g: &ColoredGraph, v: usize, relabel: &[Color]) -> String {
    match g.kind(v) {
        VertexKind::F => "F".to_string(),
        VertexKind::P(c) => format!("P{}", relabel[c as usize - 1]),
    }
}

/// Canonical string of a colored tree with its exact colors.
pub fn colored_tree_canonical(g: &ColoredGraph) -> String {
    let identity: Vec<Color> = (1..=g.n() + 1).collect();
    let labels: Vec<String> = (0..g.vertex_count()).map(|v| kind_label(g, v, &identity)).collect();
    tree_canonical(&g.edges(), &labels)
}

/// All permutations of `1..=k` in some fixed order.
pub fn permutations(k: Color) -> Vec<Vec<Color>> {
    fn extend(prefix: &mut Vec<Color>, k: Color, out: &mut Vec<Vec<Color>>) {
        if prefix.len() == k as usize {
            out.push(prefix.clone());
            return;
        }
        for c in 1..=k {
            if !prefix.contains(&c) {
                prefix.push(c);
                extend(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), k, &mut out);
    out
}

/// Canonical string of a colored tree up to relabelling of the colors.
pub fn colored_tree_canonical_mod_perm(g: &ColoredGraph) -> String {
    let edges = g.edges();
    permutations(g.n() + 1)
        .into_iter()
        .map(|sigma| {
            let labels: Vec<String> =
                (0..g.vertex_count()).map(|v| kind_label(g, v, &sigma)).collect();
            tree_canonical(&edges, &labels)
        })
        .min()
        .expect("at least one permutation")
}

fn is_bipartition_side(adj: &[Vec<usize>], v: usize) -> Vec<bool> {
    // BFS two-coloring; trees are always bipartite.
    let mut side = vec![false; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                side[w] = !side[u];
                queue.push_back(w);
            }
        }
    }
    side
}

/// Every valid piece graph that is a tree with exactly `pieces` P-vertices,
/// one representative per exact-color isomorphism class.
///
/// Built by brute force: free trees, both bipartition assignments, all
/// colorings, filtered by the degree and distinct-neighbor-color rules.
pub fn all_valid_trees(n: u32, pieces: usize) -> Vec<ColoredGraph> {
    let palette = n as usize + 1;
    let mut out: BTreeMap<String, ColoredGraph> = BTreeMap::new();
    if pieces == 1 {
        for c in 1..=palette as Color {
            let g = ColoredGraph::new(n, vec![("t0".to_string(), VertexKind::P(c))], vec![])
                .expect("single vertex graph");
            out.insert(colored_tree_canonical(&g), g);
        }
        return out.into_values().collect();
    }
    // A tree with k P-vertices and f F-vertices has k + f - 1 edges, every one
    // incident to exactly one F-vertex of degree between 2 and n + 1.
    let f_min = (pieces - 1).div_ceil(n as usize);
    let f_max = pieces - 1;
    let max_vertices = pieces + f_max;
    let trees = free_trees(max_vertices);
    for tree in &trees {
        let vertex_count = tree.len() + 1;
        if vertex_count < pieces + f_min {
            continue;
        }
        let adj = adjacency(vertex_count, tree);
        let side = is_bipartition_side(&adj, 0);
        for p_side in [false, true] {
            let p_vertices: Vec<usize> = (0..vertex_count).filter(|&v| side[v] == p_side).collect();
            if p_vertices.len() != pieces {
                continue;
            }
            let f_vertices: Vec<usize> = (0..vertex_count).filter(|&v| side[v] != p_side).collect();
            if f_vertices.iter().any(|&f| adj[f].len() < 2 || adj[f].len() > palette) {
                continue;
            }
            // Try every coloring of the P-vertices.
            let mut coloring = vec![1 as Color; pieces];
            loop {
                let color_of = |v: usize| {
                    coloring[p_vertices.iter().position(|&p| p == v).expect("P vertex")]
                };
                let distinct = f_vertices.iter().all(|&f| {
                    let colors: BTreeSet<Color> = adj[f].iter().map(|&v| color_of(v)).collect();
                    colors.len() == adj[f].len()
                });
                if distinct {
                    let vertices: Vec<(String, VertexKind)> = (0..vertex_count)
                        .map(|v| {
                            let kind = if side[v] == p_side {
                                VertexKind::P(color_of(v))
                            } else {
                                VertexKind::F
                            };
                            (format!("t{v}"), kind)
                        })
                        .collect();
                    let edges: Vec<(String, String)> = tree
                        .iter()
                        .map(|&(a, b)| (format!("t{a}"), format!("t{b}")))
                        .collect();
                    let g = ColoredGraph::new(n, vertices, edges).expect("tree is a valid graph");
                    out.entry(colored_tree_canonical(&g)).or_insert(g);
                }
                // Next coloring in base-palette counting order.
                let mut pos = 0;
                loop {
                    if pos == pieces {
                        break;
                    }
                    if (coloring[pos] as usize) < palette {
                        coloring[pos] += 1;
                        break;
                    }
                    coloring[pos] = 1;
                    pos += 1;
                }
                if pos == pieces {
                    break;
                }
            }
        }
    }
    out.into_values().collect()
}

/// All set partitions of `items`.
pub fn set_partitions<T: Copy>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<T>> = Vec::new();
    fn place<T: Copy>(items: &[T], at: usize, current: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if at == items.len() {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(items[at]);
            place(items, at + 1, current, out);
            current[b].pop();
        }
        current.push(vec![items[at]]);
        place(items, at + 1, current, out);
        current.pop();
    }
    place(items, 0, &mut current, &mut out);
    out
}

/// Every partition of the vertices whose blocks stay inside one
/// (kind, color) class, as block lists of vertex indices.
pub fn homogeneous_partitions(g: &ColoredGraph) -> Vec<Vec<Vec<usize>>> {
    let mut cells: BTreeMap<(u8, Color), Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let key = match g.kind(v) {
            VertexKind::F => (0, 0),
            VertexKind::P(c) => (1, c),
        };
        cells.entry(key).or_default().push(v);
    }
    let mut combined: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for cell in cells.values() {
        let cell_partitions = set_partitions(cell);
        let mut next = Vec::with_capacity(combined.len() * cell_partitions.len());
        for prefix in &combined {
            for parts in &cell_partitions {
                let mut merged = prefix.clone();
                merged.extend(parts.iter().cloned());
                next.push(merged);
            }
        }
        combined = next;
    }
    combined
}

/// Whether every vertex of every block sees the same set of neighbor blocks —
/// the defining condition for the quotient map to be a weak covering.
pub fn is_stable_partition(g: &ColoredGraph, blocks: &[Vec<usize>]) -> bool {
    let mut block_of = vec![usize::MAX; g.vertex_count()];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    blocks.iter().all(|block| {
        let reference: BTreeSet<usize> =
            g.neighbors(block[0]).iter().map(|&u| block_of[u]).collect();
        block.iter().all(|&v| {
            let seen: BTreeSet<usize> = g.neighbors(v).iter().map(|&u| block_of[u]).collect();
            seen == reference
        })
    })
}

/// The quotient graph of a partition, with blocks named `q0`, `q1`, …
/// in block order. Returns `None` if an edge would collapse into a block.
pub fn quotient_by(g: &ColoredGraph, blocks: &[Vec<usize>]) -> Option<ColoredGraph> {
    let mut block_of = vec![usize::MAX; g.vertex_count()];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    let vertices: Vec<(String, VertexKind)> = blocks
        .iter()
        .enumerate()
        .map(|(b, block)| (format!("q{b}"), g.kind(block[0])))
        .collect();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (a, b) in g.edges() {
        let (qa, qb) = (block_of[a], block_of[b]);
        if qa == qb {
            return None;
        }
        edges.insert((qa.min(qb), qa.max(qb)));
    }
    let edges: Vec<(String, String)> =
        edges.into_iter().map(|(a, b)| (format!("q{a}"), format!("q{b}"))).collect();
    Some(ColoredGraph::new(g.n(), vertices, edges).expect("quotient is a well-formed graph"))
}

/// The map sending each vertex to its block's `q{i}` name.
pub fn quotient_map(g: &ColoredGraph, blocks: &[Vec<usize>]) -> ntree::WeakCoveringMap {
    let mut vertex_map = BTreeMap::new();
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            vertex_map.insert(g.id(v).to_string(), format!("q{b}"));
        }
    }
    ntree::WeakCoveringMap::new(vertex_map)
}

/// Minimality by exhaustive search: the only stable homogeneous partition is
/// the discrete one.
pub fn is_minimal_bruteforce(g: &ColoredGraph) -> bool {
    homogeneous_partitions(g)
        .into_iter()
        .filter(|blocks| is_stable_partition(g, blocks))
        .all(|blocks| blocks.len() == g.vertex_count())
}

//! Exhaustive enumeration of the valid tree-shaped colored graphs by piece
//! count, and the census of classes built on top of it.
//!
//! Every valid tree with `k` P vertices arises from a valid tree with `k - 1`
//! of them by removing a leaf P (and its simplex vertex when that would drop
//! below the minimum degree), so a level-by-level search with the two inverse
//! moves — hang a new piece on a fresh simplex vertex, or add a new piece to an
//! existing simplex vertex with room — finds each level completely. Trees are
//! deduplicated by exact canonical form; classes by the canonical form (up to
//! color permutation) of the minimized graph.
//!
//! With the `parallel` feature the per-level expansion and reduction run on
//! rayon. Results are merged into ordered maps keyed by canonical bytes with
//! values decoded from the keys, so parallel and serial runs are byte-identical.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bisim::minimize;
use crate::canon::{canonical_form, from_canonical};
use crate::graph::{Color, ColoredGraph, VertexKind};

/// One class in the census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusClass {
    /// Piece count of the minimal representative (the bucket it lands in).
    pub pieces: usize,
    /// Canonical form (up to color permutation) of the minimal graph.
    pub canonical: Vec<u8>,
    /// The minimal graph itself, decoded from the canonical form.
    pub representative: ColoredGraph,
}

/// Per-level statistics of a census run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KStats {
    /// The level: number of P vertices in the enumerated trees.
    pub pieces: usize,
    /// Distinct valid trees with that many P vertices.
    pub trees: usize,
    /// Classes first discovered at this level.
    pub new_classes: usize,
}

/// The headline numbers of a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub n: u32,
    pub max_pieces: usize,
    /// Classes per piece count of the minimal representative.
    pub buckets: BTreeMap<usize, usize>,
    /// The one extra class with no pieces at all (a single simplex).
    pub abelian: bool,
    /// Sum of all buckets plus the abelian class.
    pub total: usize,
}

struct NumericKeys<'a>(&'a BTreeMap<usize, usize>);

impl Serialize for NumericKeys<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl CensusReport {
    /// Serialize to the JSON wire format `{"n", "max_pieces", "buckets",
    /// "abelian", "total"}` with bucket keys as strings in numeric order.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            n: u32,
            max_pieces: usize,
            buckets: NumericKeys<'a>,
            abelian: bool,
            total: usize,
        }
        serde_json::to_string(&Doc {
            n: self.n,
            max_pieces: self.max_pieces,
            buckets: NumericKeys(&self.buckets),
            abelian: self.abelian,
            total: self.total,
        })
        .expect("report serialization cannot fail")
    }
}

/// Full census output: the report plus every class and per-level statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRun {
    pub report: CensusReport,
    /// All classes, ordered by (pieces, canonical form).
    pub classes: Vec<CensusClass>,
    pub per_k: Vec<KStats>,
}

/// Expand each item into canonical keys and gather one normalized graph per
/// distinct key. Values are decoded from the keys themselves, which makes the
/// result independent of both iteration order and parallel scheduling.
fn collect_normalized<T, F>(
    items: &[T],
    expand: F,
    parallel: bool,
) -> BTreeMap<Vec<u8>, ColoredGraph>
where
    T: Sync,
    F: Fn(&T) -> Vec<Vec<u8>> + Sync,
{
    fn absorb(acc: &mut BTreeMap<Vec<u8>, ColoredGraph>, key: Vec<u8>) {
        acc.entry(key)
            .or_insert_with_key(|k| from_canonical(k).expect("canonical keys decode"));
    }
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(BTreeMap::new, |mut acc, item| {
                for key in expand(item) {
                    absorb(&mut acc, key);
                }
                acc
            })
            .reduce(BTreeMap::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    let mut acc = BTreeMap::new();
    for item in items {
        for key in expand(item) {
            absorb(&mut acc, key);
        }
    }
    acc
}

/// All single-P graphs, one per color.
fn first_level(n: u32) -> BTreeMap<Vec<u8>, ColoredGraph> {
    let mut level = BTreeMap::new();
    for c in 1..=n + 1 {
        let g = ColoredGraph::new(n, vec![("v0".into(), VertexKind::P(c))], vec![])
            .expect("single vertices are well-formed");
        let key = canonical_form(&g, false);
        let g = from_canonical(&key).expect("canonical keys decode");
        level.insert(key, g);
    }
    level
}

/// Canonical keys of every one-move extension of `g`.
fn child_keys(g: &ColoredGraph) -> Vec<Vec<u8>> {
    let n = g.n();
    let vertices: Vec<(String, VertexKind)> = (0..g.vertex_count())
        .map(|v| (g.id(v).to_string(), g.kind(v)))
        .collect();
    let edges: Vec<(String, String)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string()))
        .collect();
    let mut out = Vec::new();
    let mut push_child =
        |extra_vertices: Vec<(String, VertexKind)>, extra_edges: Vec<(String, String)>| {
            let mut vs = vertices.clone();
            vs.extend(extra_vertices);
            let mut es = edges.clone();
            es.extend(extra_edges);
            let child = ColoredGraph::new(n, vs, es).expect("extensions are well-formed");
            out.push(canonical_form(&child, false));
        };
    for v in 0..g.vertex_count() {
        let id = g.id(v).to_string();
        match g.kind(v) {
            VertexKind::P(cp) => {
                // Hang a fresh simplex vertex with a new piece on this piece.
                for c in 1..=n + 1 {
                    if c != cp {
                        push_child(
                            vec![("x0".into(), VertexKind::F), ("x1".into(), VertexKind::P(c))],
                            vec![(id.clone(), "x0".into()), ("x0".into(), "x1".into())],
                        );
                    }
                }
            }
            VertexKind::F => {
                // Add a new piece to this simplex vertex if it has room.
                let used: Vec<Color> = g
                    .neighbors(v)
                    .iter()
                    .map(|&w| g.color(w).expect("F neighbors are P vertices"))
                    .collect();
                for c in 1..=n + 1 {
                    if !used.contains(&c) {
                        push_child(
                            vec![("x1".into(), VertexKind::P(c))],
                            vec![(id.clone(), "x1".into())],
                        );
                    }
                }
            }
        }
    }
    out
}

fn levels_up_to(
    n: u32,
    max_pieces: usize,
    parallel: bool,
) -> Vec<BTreeMap<Vec<u8>, ColoredGraph>> {
    let mut levels = Vec::with_capacity(max_pieces);
    if max_pieces == 0 {
        return levels;
    }
    levels.push(first_level(n));
    for _ in 2..=max_pieces {
        let parents: Vec<ColoredGraph> = levels
            .last()
            .expect("previous level exists")
            .values()
            .cloned()
            .collect();
        levels.push(collect_normalized(&parents, child_keys, parallel));
    }
    levels
}

fn census_run_impl(n: u32, max_pieces: usize, parallel: bool) -> CensusRun {
    assert!(n >= 1, "dimension must be at least 1");
    let mut classes: Vec<CensusClass> = Vec::new();
    let mut known: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut per_k = Vec::new();
    for (level_index, level) in levels_up_to(n, max_pieces, parallel).into_iter().enumerate() {
        let k = level_index + 1;
        let trees: Vec<ColoredGraph> = level.into_values().collect();
        let reduced = collect_normalized(
            &trees,
            |g| {
                let (min, _) = minimize(g);
                vec![canonical_form(&min, true)]
            },
            parallel,
        );
        let mut new_classes = 0;
        for (key, representative) in reduced {
            if known.contains_key(&key) {
                continue;
            }
            debug_assert_eq!(
                representative.p_count(),
                k,
                "a class first appears at the level of its own minimal graph"
            );
            known.insert(key.clone(), k);
            classes.push(CensusClass {
                pieces: k,
                canonical: key,
                representative,
            });
            new_classes += 1;
        }
        per_k.push(KStats {
            pieces: k,
            trees: trees.len(),
            new_classes,
        });
    }
    let mut buckets: BTreeMap<usize, usize> = BTreeMap::new();
    for class in &classes {
        *buckets.entry(class.pieces).or_default() += 1;
    }
    let total = classes.len() + 1;
    CensusRun {
        report: CensusReport {
            n,
            max_pieces,
            buckets,
            abelian: true,
            total,
        },
        classes,
        per_k,
    }
}

/// Enumerate all distinct valid trees with exactly `pieces` P vertices, in
/// canonical order.
pub fn enumerate_gamma_trees(n: u32, pieces: usize) -> Vec<ColoredGraph> {
    assert!(n >= 1, "dimension must be at least 1");
    assert!(pieces >= 1, "at least one piece is required");
    levels_up_to(n, pieces, cfg!(feature = "parallel"))
        .pop()
        .expect("the requested level was built")
        .into_values()
        .collect()
}

/// Census of all classes with up to `max_pieces` pieces, with per-level detail.
/// Uses the parallel code path when the `parallel` feature is enabled.
pub fn census_run(n: u32, max_pieces: usize) -> CensusRun {
    census_run_impl(n, max_pieces, cfg!(feature = "parallel"))
}

/// [`census_run`] on the sequential code path, regardless of features.
pub fn census_run_serial(n: u32, max_pieces: usize) -> CensusRun {
    census_run_impl(n, max_pieces, false)
}

/// The census report alone; see [`census_run`].
pub fn census(n: u32, max_pieces: usize) -> CensusReport {
    census_run(n, max_pieces).report
}

/// [`census`] on the sequential code path, regardless of features.
pub fn census_serial(n: u32, max_pieces: usize) -> CensusReport {
    census_run_serial(n, max_pieces).report
}

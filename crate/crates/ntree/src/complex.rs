//! Finite simplicial complexes built by gluing top-dimensional simplices along
//! codimension-one faces, and the combinatorial invariants extracted from them:
//! the gluing tree, the vertex coloring, the piece decomposition, and the
//! reducibility data.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Color;

/// A finite `n`-dimensional simplicial complex presented by its top simplices.
///
/// Vertices are identified by name; each top simplex is a set of `n + 1` names.
/// Lower-dimensional faces are implicit. Construction normalizes the
/// presentation (vertex names sorted within each simplex) but keeps the given
/// simplex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    dimension: u32,
    /// Sorted, deduplicated vertex names; index order equals name order.
    vertices: Vec<String>,
    /// Each simplex as sorted vertex indices.
    simplices: Vec<Vec<u32>>,
}

/// Rejected presentations of a [`SimplicialComplex`].
#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("dimension must be at least 1, got {dimension}")]
    InvalidDimension { dimension: u32 },
    #[error("a complex needs at least one simplex")]
    Empty,
    #[error("simplex {index} has {got} vertices, expected {expected}")]
    WrongCardinality {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("simplex {index} repeats vertex {name:?}")]
    RepeatedVertex { index: usize, name: String },
    #[error("simplex {index} has the same vertex set as an earlier simplex")]
    DuplicateSimplex { index: usize },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    dimension: u32,
    simplices: Vec<Vec<String>>,
}

impl SimplicialComplex {
    /// Build a complex from its dimension and top simplices (vertex name lists).
    pub fn new(dimension: u32, simplices: Vec<Vec<String>>) -> Result<Self, ComplexError> {
        if dimension == 0 {
            return Err(ComplexError::InvalidDimension { dimension });
        }
        if simplices.is_empty() {
            return Err(ComplexError::Empty);
        }
        let expected = dimension as usize + 1;
        for (index, simplex) in simplices.iter().enumerate() {
            if simplex.len() != expected {
                return Err(ComplexError::WrongCardinality {
                    index,
                    expected,
                    got: simplex.len(),
                });
            }
            let mut seen = BTreeSet::new();
            for name in simplex {
                if !seen.insert(name) {
                    return Err(ComplexError::RepeatedVertex {
                        index,
                        name: name.clone(),
                    });
                }
            }
        }
        let mut vertices: Vec<String> = simplices.iter().flatten().cloned().collect();
        vertices.sort();
        vertices.dedup();
        let index_of: BTreeMap<&str, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i as u32))
            .collect();
        let mut indexed: Vec<Vec<u32>> = Vec::with_capacity(simplices.len());
        let mut seen_sets: BTreeSet<Vec<u32>> = BTreeSet::new();
        for (index, simplex) in simplices.iter().enumerate() {
            let mut ids: Vec<u32> = simplex.iter().map(|name| index_of[name.as_str()]).collect();
            ids.sort_unstable();
            if !seen_sets.insert(ids.clone()) {
                return Err(ComplexError::DuplicateSimplex { index });
            }
            indexed.push(ids);
        }
        Ok(SimplicialComplex {
            dimension,
            vertices,
            simplices: indexed,
        })
    }

    /// Dimension `n` (each top simplex has `n + 1` vertices).
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Sorted vertex names.
    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of top simplices.
    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    /// Vertex names of simplex `i`, sorted.
    pub fn simplex_names(&self, i: usize) -> Vec<String> {
        self.simplices[i]
            .iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect()
    }

    pub(crate) fn simplex_indices(&self, i: usize) -> &[u32] {
        &self.simplices[i]
    }

    pub(crate) fn vertex_name(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    fn names_of(&self, ids: &[u32]) -> Vec<String> {
        ids.iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect()
    }

    /// Serialize to the JSON wire format
    /// `{"dimension": n, "simplices": [[names], ...]}`.
    pub fn to_json(&self) -> String {
        let doc = ComplexDoc {
            dimension: self.dimension,
            simplices: (0..self.simplex_count())
                .map(|i| self.simplex_names(i))
                .collect(),
        };
        serde_json::to_string(&doc).expect("complex serialization cannot fail")
    }
}

/// Parse one complex from its JSON wire format.
pub fn parse_complex(input: &str) -> Result<SimplicialComplex, ComplexError> {
    let doc: ComplexDoc = serde_json::from_str(input)?;
    SimplicialComplex::new(doc.dimension, doc.simplices)
}

/// Parse a JSON array of complexes.
pub fn parse_complex_family(input: &str) -> Result<Vec<SimplicialComplex>, ComplexError> {
    let docs: Vec<ComplexDoc> = serde_json::from_str(input)?;
    docs.into_iter()
        .map(|doc| SimplicialComplex::new(doc.dimension, doc.simplices))
        .collect()
}

/// A codimension-one face shared by at least two top simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedFace {
    /// The `n` vertices of the face, as sorted vertex indices.
    pub vertices: Vec<u32>,
    /// Indices of the top simplices containing the face, ascending.
    pub members: Vec<usize>,
}

/// The incidence structure of top simplices and shared faces.
///
/// For a complex in the tree class this bipartite structure is a tree; the
/// shared faces are listed in sorted vertex order, and their positions line up
/// with the pieces produced by [`compute_pieces`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingTree {
    /// Number of top simplices.
    pub simplex_count: usize,
    /// All faces contained in two or more top simplices.
    pub shared: Vec<SharedFace>,
}

impl GluingTree {
    /// For each simplex, the positions (into `shared`) of the faces containing it.
    fn faces_of_simplices(&self) -> Vec<Vec<usize>> {
        let mut faces_of = vec![Vec::new(); self.simplex_count];
        for (fi, face) in self.shared.iter().enumerate() {
            for &s in &face.members {
                faces_of[s].push(fi);
            }
        }
        faces_of
    }
}

/// Why a complex fails to lie in the tree class. Also the machine-readable
/// certificate printed by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TnCertificate {
    /// The simplices do not form one connected whole.
    #[error("complex is disconnected ({components} components): {witness_a:?} and {witness_b:?} are not glued")]
    Disconnected {
        components: usize,
        witness_a: Vec<String>,
        witness_b: Vec<String>,
    },
    /// The simplex/shared-face incidence structure contains a cycle.
    #[error("gluing structure has a cycle: face {face:?} closes a loop between {simplex_a:?} and {simplex_b:?}")]
    Cyclic {
        face: Vec<String>,
        simplex_a: Vec<String>,
        simplex_b: Vec<String>,
    },
    /// Propagating the seed coloring along the gluing tree hits a contradiction.
    #[error("no consistent vertex coloring: vertex {vertex:?} would need color {second} but already has {first}")]
    Uncolorable {
        vertex: String,
        first: Color,
        second: Color,
    },
    /// A vertex is shared beyond the gluings: the simplices around it do not
    /// form one face-connected fan.
    #[error("vertex {vertex:?} is folded: {witness_a:?} and {witness_b:?} meet at it without a chain of gluings through it")]
    Folded {
        vertex: String,
        witness_a: Vec<String>,
        witness_b: Vec<String>,
    },
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Join the classes of `a` and `b`; `false` if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Compute the shared-face structure of `k` (always defined, tree or not).
fn gluing_structure(k: &SimplicialComplex) -> GluingTree {
    let mut faces: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for i in 0..k.simplex_count() {
        let simplex = k.simplex_indices(i);
        for drop in 0..simplex.len() {
            let mut face = simplex.to_vec();
            face.remove(drop);
            faces.entry(face).or_default().push(i);
        }
    }
    let shared = faces
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(vertices, members)| SharedFace { vertices, members })
        .collect();
    GluingTree {
        simplex_count: k.simplex_count(),
        shared,
    }
}

/// Decide membership in the tree class.
///
/// On success returns the gluing tree; on failure returns the first applicable
/// certificate, checked in the order disconnected, cyclic, uncolorable, folded.
pub fn validate_tn(k: &SimplicialComplex) -> Result<GluingTree, TnCertificate> {
    let tree = gluing_structure(k);
    let m = tree.simplex_count;

    // Connectivity and acyclicity of the simplex/shared-face incidence
    // structure, via union-find over simplices with each face joining all of
    // its members. A redundant join is exactly a cycle through that face.
    let mut uf = UnionFind::new(m);
    let mut cycle: Option<(usize, usize, usize)> = None;
    for (fi, face) in tree.shared.iter().enumerate() {
        for &other in &face.members[1..] {
            if !uf.union(face.members[0], other) && cycle.is_none() {
                cycle = Some((fi, face.members[0], other));
            }
        }
    }
    let root0 = uf.find(0);
    if let Some(other) = (1..m).find(|&s| uf.find(s) != root0) {
        let roots: BTreeSet<usize> = (0..m).map(|s| uf.find(s)).collect();
        return Err(TnCertificate::Disconnected {
            components: roots.len(),
            witness_a: k.simplex_names(0),
            witness_b: k.simplex_names(other),
        });
    }
    if let Some((fi, a, b)) = cycle {
        return Err(TnCertificate::Cyclic {
            face: k.names_of(&tree.shared[fi].vertices),
            simplex_a: k.simplex_names(a),
            simplex_b: k.simplex_names(b),
        });
    }

    try_color(k, &tree)?;

    // Around every vertex the containing simplices must form one fan connected
    // by gluings through that vertex; otherwise the vertex is merely folded
    // onto itself and the complex is not built by gluings alone.
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); k.vertex_count()];
    for s in 0..m {
        for &v in k.simplex_indices(s) {
            containing[v as usize].push(s);
        }
    }
    for (v, simplices_at_v) in containing.iter().enumerate() {
        if simplices_at_v.len() <= 1 {
            continue;
        }
        let mut local = UnionFind::new(simplices_at_v.len());
        for face in &tree.shared {
            if face.vertices.binary_search(&(v as u32)).is_err() {
                continue;
            }
            let positions: Vec<usize> = face
                .members
                .iter()
                .map(|s| simplices_at_v.binary_search(s).expect("member contains v"))
                .collect();
            for &p in &positions[1..] {
                local.union(positions[0], p);
            }
        }
        let home = local.find(0);
        if let Some(p) = (1..simplices_at_v.len()).find(|&p| local.find(p) != home) {
            return Err(TnCertificate::Folded {
                vertex: k.vertex_name(v as u32).to_string(),
                witness_a: k.simplex_names(simplices_at_v[0]),
                witness_b: k.simplex_names(simplices_at_v[p]),
            });
        }
    }

    debug_assert_eq!(
        k.vertex_count(),
        k.dimension() as usize + m,
        "a tree-class complex has exactly dimension + simplex count vertices"
    );
    Ok(tree)
}

/// The vertex coloring with colors `1..=n+1`, constant on gluings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexColoring {
    /// Color of each vertex, indexed like the complex's sorted vertex list.
    colors: Vec<Color>,
}

impl VertexColoring {
    /// Color of the vertex at sorted index `v`.
    pub fn color_of(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// The coloring as a name-to-color map.
    pub fn as_map(&self, k: &SimplicialComplex) -> BTreeMap<String, Color> {
        k.vertex_names()
            .iter()
            .cloned()
            .zip(self.colors.iter().copied())
            .collect()
    }
}

fn try_color(k: &SimplicialComplex, tree: &GluingTree) -> Result<VertexColoring, TnCertificate> {
    let palette_size = k.dimension() + 1;
    let mut colors: Vec<Color> = vec![0; k.vertex_count()];
    // Seed: the lexicographically least simplex gets colors 1..=n+1 in vertex
    // name order. Index order equals name order, so least index list wins.
    let seed = (0..tree.simplex_count)
        .min_by_key(|&i| k.simplex_indices(i))
        .expect("complexes are nonempty");
    for (j, &v) in k.simplex_indices(seed).iter().enumerate() {
        colors[v as usize] = j as Color + 1;
    }
    let faces_of = tree.faces_of_simplices();
    let mut visited = vec![false; tree.simplex_count];
    visited[seed] = true;
    let mut queue = VecDeque::from([seed]);
    while let Some(s) = queue.pop_front() {
        for &fi in &faces_of[s] {
            let face = &tree.shared[fi];
            let present: BTreeSet<Color> =
                face.vertices.iter().map(|&v| colors[v as usize]).collect();
            debug_assert!(
                !present.contains(&0) && present.len() == face.vertices.len(),
                "faces of a colored simplex carry distinct colors"
            );
            let missing = (1..=palette_size)
                .find(|c| !present.contains(c))
                .expect("a face omits exactly one color");
            for &t in &face.members {
                if visited[t] {
                    continue;
                }
                visited[t] = true;
                let off = *k
                    .simplex_indices(t)
                    .iter()
                    .find(|v| face.vertices.binary_search(v).is_err())
                    .expect("a member has one vertex off the face");
                let existing = colors[off as usize];
                if existing == 0 {
                    colors[off as usize] = missing;
                } else if existing != missing {
                    return Err(TnCertificate::Uncolorable {
                        vertex: k.vertex_name(off).to_string(),
                        first: existing,
                        second: missing,
                    });
                }
                queue.push_back(t);
            }
        }
    }
    debug_assert!(
        colors.iter().all(|&c| c != 0),
        "connected complexes color every vertex"
    );
    Ok(VertexColoring { colors })
}

/// Recompute the canonical coloring of a complex already validated by
/// [`validate_tn`]. Panics on complexes that were not validated.
pub fn compute_coloring(k: &SimplicialComplex, tree: &GluingTree) -> VertexColoring {
    try_color(k, tree).expect("compute_coloring requires a validated complex")
}

/// One piece of the decomposition: a shared face (the spine) together with all
/// top simplices containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// Vertex names of the shared face, sorted.
    pub spine: Vec<String>,
    /// Vertex names of each member simplex, sorted, in ascending simplex order.
    pub members: Vec<Vec<String>>,
    /// The common color of the off-spine tips, when a coloring is supplied.
    pub label: Option<Color>,
}

/// The piece decomposition, one piece per shared face, unlabeled.
///
/// Pieces appear in the same order as `tree.shared`.
pub fn compute_pieces(k: &SimplicialComplex, tree: &GluingTree) -> Vec<Piece> {
    tree.shared
        .iter()
        .map(|face| Piece {
            spine: k.names_of(&face.vertices),
            members: face.members.iter().map(|&s| k.simplex_names(s)).collect(),
            label: None,
        })
        .collect()
}

/// The piece decomposition with each piece labeled by the one color its spine
/// omits (the color of every off-spine tip).
pub fn labeled_pieces(
    k: &SimplicialComplex,
    tree: &GluingTree,
    coloring: &VertexColoring,
) -> Vec<Piece> {
    let palette_size = k.dimension() + 1;
    let mut pieces = compute_pieces(k, tree);
    for (piece, face) in pieces.iter_mut().zip(&tree.shared) {
        let present: BTreeSet<Color> = face
            .vertices
            .iter()
            .map(|&v| coloring.color_of(v as usize))
            .collect();
        let label = (1..=palette_size)
            .find(|c| !present.contains(c))
            .expect("a spine omits exactly one color");
        piece.label = Some(label);
    }
    pieces
}

/// Vertices contained in every top simplex, sorted by name.
pub fn cone_vertices(k: &SimplicialComplex) -> Vec<String> {
    let mut counts = vec![0usize; k.vertex_count()];
    for i in 0..k.simplex_count() {
        for &v in k.simplex_indices(i) {
            counts[v as usize] += 1;
        }
    }
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == k.simplex_count())
        .map(|(v, _)| k.vertex_name(v as u32).to_string())
        .collect()
}

/// Whether every top simplex lies in exactly one or exactly `n + 1` shared
/// faces. A single-simplex complex does not branch at all and is not counted.
pub fn is_maximally_branched(k: &SimplicialComplex, tree: &GluingTree) -> bool {
    if tree.simplex_count == 1 {
        return false;
    }
    let full = k.dimension() as usize + 1;
    tree.faces_of_simplices()
        .iter()
        .all(|faces| faces.len() == 1 || faces.len() == full)
}

/// Reducibility data: whether the group splits off a line, which equals both
/// "the pieces miss a color" and "a cone vertex exists".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibilityReport {
    pub reducible: bool,
    /// Distinct piece labels.
    pub colors_used: BTreeSet<Color>,
    /// Vertices contained in every top simplex.
    pub cone_vertices: Vec<String>,
}

/// Compute the [`ReducibilityReport`] from the labeled pieces.
pub fn is_reducible(k: &SimplicialComplex, pieces: &[Piece]) -> ReducibilityReport {
    let colors_used: BTreeSet<Color> = pieces
        .iter()
        .map(|p| p.label.expect("reducibility needs labeled pieces"))
        .collect();
    let cone = cone_vertices(k);
    let reducible = (colors_used.len() as u32) < k.dimension() + 1;
    debug_assert_eq!(
        reducible,
        !cone.is_empty(),
        "missing piece color and cone vertex are the same phenomenon"
    );
    ReducibilityReport {
        reducible,
        colors_used,
        cone_vertices: cone,
    }
}

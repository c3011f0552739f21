//! Colored bipartite graphs and weak coverings.
//!
//! Vertices come in two kinds: `P` (piece) vertices carrying a color in `1..=n+1`,
//! and uncolored `F` (simplex) vertices. Graphs are simple and undirected. The
//! wire format is JSON:
//! `{"n":2,"vertices":[{"id":"p0","kind":"P","color":1},{"id":"f0","kind":"F"}],"edges":[["f0","p0"]]}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex colors are 1-based; a graph with parameter `n` uses colors `1..=n+1`.
pub type Color = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    P(Color),
    F,
}

impl VertexKind {
    pub fn color(&self) -> Option<Color> {
        match self {
            VertexKind::P(c) => Some(*c),
            VertexKind::F => None,
        }
    }

    pub fn is_p(&self) -> bool {
        matches!(self, VertexKind::P(_))
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph JSON: {0}")]
    Malformed(String),
    #[error("n must be at least 1, got {0}")]
    InvalidN(u32),
    #[error("duplicate vertex id {0:?}")]
    DuplicateId(String),
    #[error("vertex {0:?} has kind P but no color")]
    MissingColor(String),
    #[error("vertex {id:?} has kind F but carries color {color}")]
    UnexpectedColor { id: String, color: Color },
    #[error("vertex {id:?} has color {color}, colors are 1-based")]
    ZeroColor { id: String, color: Color },
    #[error("vertex {id:?} has unknown kind {kind:?}, expected \"P\" or \"F\"")]
    UnknownKind { id: String, kind: String },
    #[error("edge endpoint {0:?} is not a vertex")]
    UnknownEndpoint(String),
    #[error("self loop at {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge between {0:?} and {1:?}")]
    DuplicateEdge(String, String),
}

/// A simple undirected graph with P/F-kinded, P-colored vertices.
/// Equality is presentational: same ids, kinds and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: u32,
    ids: Vec<String>,
    kinds: Vec<VertexKind>,
    adj: Vec<Vec<usize>>,
    index: BTreeMap<String, usize>,
}

impl ColoredGraph {
    pub fn new(
        n: u32,
        vertices: Vec<(String, VertexKind)>,
        edges: Vec<(String, String)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidN(n));
        }
        let mut ids = Vec::with_capacity(vertices.len());
        let mut kinds = Vec::with_capacity(vertices.len());
        let mut index = BTreeMap::new();
        for (id, kind) in vertices {
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(GraphError::DuplicateId(id));
            }
            if let VertexKind::P(0) = kind {
                return Err(GraphError::ZeroColor { id, color: 0 });
            }
            ids.push(id);
            kinds.push(kind);
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or(GraphError::UnknownEndpoint(a.clone()))?;
            let ib = *index.get(&b).ok_or(GraphError::UnknownEndpoint(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(ColoredGraph { n, ids, kinds, adj, index })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn color(&self, v: usize) -> Option<Color> {
        self.kinds[v].color()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges as index pairs `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &w in nbrs {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Colors appearing on P-vertices, ascending.
    pub fn colors_present(&self) -> Vec<Color> {
        let set: BTreeSet<Color> = self.kinds.iter().filter_map(VertexKind::color).collect();
        set.into_iter().collect()
    }

    pub fn p_count(&self) -> usize {
        self.kinds.iter().filter(|k| k.is_p()).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.ids.len()];
        let mut components = 0;
        for start in 0..self.ids.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    /// The same graph with every P-color replaced by `map(color)`.
    /// `map` must be injective on the colors present.
    pub fn recolored(&self, map: impl Fn(Color) -> Color) -> ColoredGraph {
        let mut out = self.clone();
        for kind in &mut out.kinds {
            if let VertexKind::P(c) = kind {
                *c = map(*c);
            }
        }
        out
    }

    /// The same graph with vertex ids replaced by `map(id)`; fails on collisions.
    pub fn renamed(&self, map: impl Fn(&str) -> String) -> Result<ColoredGraph, GraphError> {
        let vertices = self
            .ids
            .iter()
            .zip(&self.kinds)
            .map(|(id, &k)| (map(id), k))
            .collect();
        let edges = self
            .edges()
            .into_iter()
            .map(|(a, b)| (map(&self.ids[a]), map(&self.ids[b])))
            .collect();
        ColoredGraph::new(self.n, vertices, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("graph serialization cannot fail")
    }

    pub(crate) fn to_doc(&self) -> GraphDoc {
        let mut order: Vec<usize> = (0..self.ids.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        let vertices = order
            .iter()
            .map(|&v| VertexDoc {
                id: self.ids[v].clone(),
                kind: if self.kinds[v].is_p() { "P" } else { "F" }.to_owned(),
                color: self.kinds[v].color(),
            })
            .collect();
        let mut edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.ids[a].clone(), self.ids[b].clone());
                if x <= y { (x, y) } else { (y, x) }
            })
            .collect();
        edges.sort();
        GraphDoc { n: self.n, vertices, edges }
    }

    /// Graphviz rendering: P-vertices as circles labeled `P<color>`, F-vertices as
    /// squares labeled `F`, in deterministic order.
    pub fn to_dot(&self) -> String {
        let mut order: Vec<usize> = (0..self.ids.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        let mut out = String::from("graph {\n");
        for &v in &order {
            let (shape, label) = match self.kinds[v] {
                VertexKind::P(c) => ("circle", format!("P{c}")),
                VertexKind::F => ("square", "F".to_owned()),
            };
            out.push_str(&format!(
                "  {} [shape={shape}, label={}];\n",
                dot_quote(&self.ids[v]),
                dot_quote(&label)
            ));
        }
        let mut edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.ids[a].clone(), self.ids[b].clone());
                if x <= y { (x, y) } else { (y, x) }
            })
            .collect();
        edges.sort();
        for (a, b) in edges {
            out.push_str(&format!("  {} -- {};\n", dot_quote(&a), dot_quote(&b)));
        }
        out.push_str("}\n");
        out
    }

    /// Plain-text listing, one vertex or edge per line, deterministic order.
    pub fn to_text(&self) -> String {
        let mut order: Vec<usize> = (0..self.ids.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        let mut out = format!("n {}\n", self.n);
        for &v in &order {
            match self.kinds[v] {
                VertexKind::P(c) => out.push_str(&format!("P {} color {}\n", self.ids[v], c)),
                VertexKind::F => out.push_str(&format!("F {}\n", self.ids[v])),
            }
        }
        let mut edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.ids[a].clone(), self.ids[b].clone());
                if x <= y { (x, y) } else { (y, x) }
            })
            .collect();
        edges.sort();
        for (a, b) in edges {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out
    }

    /// Class invariants violated by this graph, empty when it is a valid piece
    /// graph. The single-P-vertex graph is valid; the empty graph is not (it only
    /// stands for the abelian class inside a classification report).
    pub fn validate_graph(&self) -> Vec<GraphViolation> {
        let mut out = Vec::new();
        if self.ids.is_empty() {
            out.push(GraphViolation::Empty);
            return out;
        }
        for v in 0..self.ids.len() {
            if let VertexKind::P(c) = self.kinds[v] {
                if c > self.n + 1 {
                    out.push(GraphViolation::ColorOutOfRange {
                        id: self.ids[v].clone(),
                        color: c,
                        max: self.n + 1,
                    });
                }
            }
        }
        for (a, b) in self.edges() {
            if self.kinds[a].is_p() == self.kinds[b].is_p() {
                out.push(GraphViolation::EdgeWithinParts {
                    a: self.ids[a].clone(),
                    b: self.ids[b].clone(),
                });
            }
        }
        for v in 0..self.ids.len() {
            if self.kinds[v].is_p() {
                continue;
            }
            let degree = self.adj[v].len();
            if degree < 2 || degree > self.n as usize + 1 {
                out.push(GraphViolation::FDegreeOutOfRange {
                    id: self.ids[v].clone(),
                    degree,
                    max: self.n as usize + 1,
                });
            }
            let mut seen = BTreeSet::new();
            for &w in &self.adj[v] {
                if let Some(c) = self.kinds[w].color() {
                    if !seen.insert(c) {
                        out.push(GraphViolation::RepeatedColorAtF {
                            id: self.ids[v].clone(),
                            color: c,
                        });
                    }
                }
            }
        }
        let components = self.component_count();
        if components > 1 {
            out.push(GraphViolation::Disconnected { components });
        }
        out
    }

    /// `true` when the graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        !self.ids.is_empty()
            && self.is_connected()
            && self.edge_count() == self.ids.len() - 1
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum GraphViolation {
    Empty,
    EdgeWithinParts { a: String, b: String },
    FDegreeOutOfRange { id: String, degree: usize, max: usize },
    RepeatedColorAtF { id: String, color: Color },
    ColorOutOfRange { id: String, color: Color, max: Color },
    Disconnected { components: usize },
}

impl std::fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphViolation::Empty => write!(f, "graph is empty"),
            GraphViolation::EdgeWithinParts { a, b } => {
                write!(f, "edge {a:?} -- {b:?} joins two vertices of the same kind")
            }
            GraphViolation::FDegreeOutOfRange { id, degree, max } => {
                write!(f, "F-vertex {id:?} has degree {degree}, expected 2..={max}")
            }
            GraphViolation::RepeatedColorAtF { id, color } => {
                write!(f, "F-vertex {id:?} has two neighbors of color {color}")
            }
            GraphViolation::ColorOutOfRange { id, color, max } => {
                write!(f, "P-vertex {id:?} has color {color}, expected 1..={max}")
            }
            GraphViolation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphDoc {
    pub n: u32,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct VertexDoc {
    pub id: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
}

/// Parse the JSON wire format. Structural problems (duplicate ids, unknown edge
/// endpoints, self loops, duplicate edges, missing colors) are errors; class
/// invariants (degrees, connectivity, ...) are reported by
/// [`ColoredGraph::validate_graph`] instead.
pub fn parse_graph(input: &str) -> Result<ColoredGraph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(input).map_err(|e| GraphError::Malformed(e.to_string()))?;
    if doc.n == 0 {
        return Err(GraphError::InvalidN(0));
    }
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in doc.vertices {
        let kind = match v.kind.as_str() {
            "P" => match v.color {
                Some(0) => return Err(GraphError::ZeroColor { id: v.id, color: 0 }),
                Some(c) => VertexKind::P(c),
                None => return Err(GraphError::MissingColor(v.id)),
            },
            "F" => match v.color {
                Some(c) => return Err(GraphError::UnexpectedColor { id: v.id, color: c }),
                None => VertexKind::F,
            },
            other => {
                return Err(GraphError::UnknownKind { id: v.id, kind: other.to_owned() })
            }
        };
        vertices.push((v.id, kind));
    }
    ColoredGraph::new(doc.n, vertices, doc.edges)
}

/// A total map between the vertex sets of two graphs, by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeakCoveringMap {
    pub vertex_map: BTreeMap<String, String>,
}

impl WeakCoveringMap {
    pub fn new(vertex_map: BTreeMap<String, String>) -> Self {
        WeakCoveringMap { vertex_map }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("map is not total: source vertex {0:?} has no image")]
    NotTotal(String),
    #[error("map sends {vertex:?} to {target:?}, which is not a target vertex")]
    UnknownTarget { vertex: String, target: String },
    #[error("map mentions {0:?}, which is not a source vertex")]
    UnknownSource(String),
}

/// Decide whether `map` is a weak covering from `source` onto `target`: a
/// kind- and color-respecting graph homomorphism such that every target edge at
/// the image of a vertex lifts to an edge at that vertex. When the source is
/// connected and the answer is yes, the map is automatically surjective.
pub fn is_weak_covering(
    source: &ColoredGraph,
    target: &ColoredGraph,
    map: &WeakCoveringMap,
) -> Result<bool, CoveringError> {
    for id in map.vertex_map.keys() {
        if source.find(id).is_none() {
            return Err(CoveringError::UnknownSource(id.clone()));
        }
    }
    let mut image = vec![0usize; source.vertex_count()];
    for (v, slot) in image.iter_mut().enumerate() {
        let id = source.id(v);
        let target_id = map
            .vertex_map
            .get(id)
            .ok_or_else(|| CoveringError::NotTotal(id.to_owned()))?;
        *slot = target.find(target_id).ok_or_else(|| CoveringError::UnknownTarget {
            vertex: id.to_owned(),
            target: target_id.clone(),
        })?;
    }
    if source.n() != target.n() {
        return Ok(false);
    }
    for (v, &iv) in image.iter().enumerate() {
        if source.kind(v) != target.kind(iv) {
            return Ok(false);
        }
    }
    // Homomorphism: edges map to edges.
    for (a, b) in source.edges() {
        if !target.neighbors(image[a]).contains(&image[b]) {
            return Ok(false);
        }
    }
    // Edge lifting: every target edge at the image has a preimage edge.
    for v in 0..source.vertex_count() {
        let lifted: BTreeSet<usize> = source.neighbors(v).iter().map(|&w| image[w]).collect();
        for &t in target.neighbors(image[v]) {
            if !lifted.contains(&t) {
                return Ok(false);
            }
        }
    }
    if source.is_connected() && source.vertex_count() > 0 {
        let hit: BTreeSet<usize> = image.iter().copied().collect();
        debug_assert_eq!(
            hit.len(),
            target.vertex_count(),
            "a weak covering from a connected source must be surjective"
        );
    }
    Ok(true)
}

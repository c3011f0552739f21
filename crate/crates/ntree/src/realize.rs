//! Building complexes from colored graphs: every valid tree-shaped colored
//! graph is the graph of some complex, and this module constructs one witness.
//! It also provides seeded random generation of complexes with prescribed
//! piece count, color count and branching behavior.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{SimplicialComplex, UnionFind};
use crate::graph::{Color, ColoredGraph, VertexKind};

/// Why a graph has no realization.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    /// The graph violates the structural rules; the message is the first
    /// violation.
    #[error("graph is not realizable: {0}")]
    NotInClass(String),
    /// The graph is valid but contains a cycle; only trees arise from
    /// complexes in the tree class.
    #[error("graph is not a tree")]
    NotATree,
}

/// Construct a complex whose graph is (isomorphic to) the given valid tree.
///
/// Every piece keeps exactly the members the graph prescribes, padded with
/// fresh leaf simplices up to the minimum of two members per piece. Vertex
/// names encode the intended color (`c001v00000`, ...), so the realized
/// complex's canonical coloring reproduces the graph's colors exactly.
pub fn realize(g: &ColoredGraph) -> Result<SimplicialComplex, RealizeError> {
    let violations = g.validate_graph();
    if let Some(first) = violations.first() {
        return Err(RealizeError::NotInClass(first.to_string()));
    }
    if !g.is_tree() {
        return Err(RealizeError::NotATree);
    }
    Ok(realize_with(g, |_| 0))
}

/// Core construction: one vertex per color-slot equivalence class.
///
/// Every simplex (one per F vertex, plus `max(2, degree + extra) - degree`
/// fresh tips per P vertex) owns one slot per color; gluing a simplex into a
/// piece identifies all slots except the piece's own color. `extra_for` is
/// called once per P vertex in ascending vertex order.
fn realize_with(g: &ColoredGraph, mut extra_for: impl FnMut(usize) -> usize) -> SimplicialComplex {
    let n = g.n();
    let slots_per = (n + 1) as usize;
    let mut f_vertices = Vec::new();
    let mut p_vertices = Vec::new();
    for v in 0..g.vertex_count() {
        if g.kind(v).is_p() {
            p_vertices.push(v);
        } else {
            f_vertices.push(v);
        }
    }
    let unit_of_f: BTreeMap<usize, usize> = f_vertices
        .iter()
        .enumerate()
        .map(|(rank, &v)| (v, rank))
        .collect();
    let unit_of_p: BTreeMap<usize, usize> = p_vertices
        .iter()
        .enumerate()
        .map(|(rank, &v)| (v, f_vertices.len() + rank))
        .collect();
    let tip_counts: Vec<usize> = p_vertices
        .iter()
        .enumerate()
        .map(|(rank, &p)| {
            let degree = g.neighbors(p).len();
            (degree + extra_for(rank)).max(2) - degree
        })
        .collect();
    let first_tip_unit = f_vertices.len() + p_vertices.len();
    let total_units = first_tip_unit + tip_counts.iter().sum::<usize>();
    let slot = |unit: usize, c: Color| unit * slots_per + (c as usize - 1);

    let mut uf = UnionFind::new(total_units * slots_per);
    for (a, b) in g.edges() {
        let (f, p) = if g.kind(a).is_p() { (b, a) } else { (a, b) };
        let cp = g.color(p).expect("P vertices carry a color");
        for c in 1..=n + 1 {
            if c != cp {
                uf.union(slot(unit_of_f[&f], c), slot(unit_of_p[&p], c));
            }
        }
    }
    let mut tip_units: Vec<usize> = Vec::new();
    let mut next_tip_unit = first_tip_unit;
    for (rank, &p) in p_vertices.iter().enumerate() {
        let cp = g.color(p).expect("P vertices carry a color");
        for _ in 0..tip_counts[rank] {
            for c in 1..=n + 1 {
                if c != cp {
                    uf.union(slot(next_tip_unit, c), slot(unit_of_p[&p], c));
                }
            }
            tip_units.push(next_tip_unit);
            next_tip_unit += 1;
        }
    }

    // Name the classes in discovery order; the color prefix makes name order
    // match color order inside every simplex.
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut counter = 0usize;
    let mut simplices: Vec<Vec<String>> = Vec::new();
    for unit in (0..f_vertices.len()).chain(tip_units.iter().copied()) {
        let mut simplex = Vec::with_capacity(slots_per);
        for c in 1..=n + 1 {
            let root = uf.find(slot(unit, c));
            let name = names.entry(root).or_insert_with(|| {
                let name = format!("c{c:03}v{counter:05}");
                counter += 1;
                name
            });
            simplex.push(name.clone());
        }
        simplices.push(simplex);
    }
    SimplicialComplex::new(n, simplices).expect("realized complexes are well-formed")
}

/// Options for [`generate_random`].
#[derive(Debug, Clone)]
pub struct GenerateOptions {
    /// Dimension of the complex (at least 1).
    pub dimension: u32,
    /// Exact number of pieces (at least 1).
    pub pieces: usize,
    /// Seed for the deterministic generator.
    pub seed: u64,
    /// Force every simplex into exactly one or all `n + 1` shared faces.
    pub maximally_branched: bool,
    /// Exact number of distinct piece colors, if constrained.
    pub colors_used: Option<usize>,
}

/// Option combinations no complex satisfies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("unsatisfiable options: {0}")]
    Unsatisfiable(String),
}

fn check_feasible(
    n: u32,
    pieces: usize,
    maximally_branched: bool,
    colors_used: Option<usize>,
) -> Result<(), GenerateError> {
    let fail = |msg: String| Err(GenerateError::Unsatisfiable(msg));
    if n == 0 {
        return fail("dimension must be at least 1".into());
    }
    if pieces == 0 {
        return fail("at least one piece is required".into());
    }
    let palette_max = (n + 1) as usize;
    if let Some(c) = colors_used {
        if c == 0 || c > palette_max {
            return fail(format!(
                "color count must be between 1 and {palette_max}, got {c}"
            ));
        }
        if c > pieces {
            return fail(format!("{pieces} pieces cannot use {c} distinct colors"));
        }
        if c == 1 && pieces >= 2 {
            return fail("glued pieces cannot all share one color".into());
        }
    }
    if maximally_branched {
        if pieces > 1 && !(pieces - 1).is_multiple_of(n as usize) {
            return fail(format!(
                "a fully branched complex in dimension {n} has 1 + t*{n} pieces"
            ));
        }
        if let Some(c) = colors_used {
            let needed = if pieces == 1 { 1 } else { palette_max };
            if c != needed {
                return fail(format!(
                    "a fully branched complex with {pieces} pieces uses exactly {needed} colors"
                ));
            }
        }
    }
    Ok(())
}

/// Pick a color from `allowed`, preferring colors not yet used anywhere.
fn pick_color(allowed: &[Color], used: &BTreeSet<Color>, rng: &mut impl Rng) -> Color {
    let unused: Vec<Color> = allowed
        .iter()
        .copied()
        .filter(|c| !used.contains(c))
        .collect();
    if !unused.is_empty() && rng.random_bool(0.75) {
        unused[rng.random_range(0..unused.len())]
    } else {
        allowed[rng.random_range(0..allowed.len())]
    }
}

fn build_fully_branched(n: u32, pieces: usize, rng: &mut impl Rng) -> ColoredGraph {
    let mut vertices: Vec<(String, VertexKind)> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut p_colors: Vec<Color> = Vec::new();
    let first = rng.random_range(1..=n + 1);
    vertices.push(("p0".into(), VertexKind::P(first)));
    p_colors.push(first);
    let steps = if pieces == 1 {
        0
    } else {
        (pieces - 1) / n as usize
    };
    for step in 0..steps {
        let host = rng.random_range(0..p_colors.len());
        let f_id = format!("f{step}");
        vertices.push((f_id.clone(), VertexKind::F));
        edges.push((format!("p{host}"), f_id.clone()));
        let host_color = p_colors[host];
        for c in 1..=n + 1 {
            if c == host_color {
                continue;
            }
            let p_id = format!("p{}", p_colors.len());
            vertices.push((p_id.clone(), VertexKind::P(c)));
            p_colors.push(c);
            edges.push((f_id.clone(), p_id));
        }
    }
    ColoredGraph::new(n, vertices, edges).expect("generated trees are well-formed")
}

fn build_once(n: u32, pieces: usize, palette: &[Color], rng: &mut impl Rng) -> ColoredGraph {
    struct FaceInfo {
        id: String,
        colors: BTreeSet<Color>,
    }
    let mut vertices: Vec<(String, VertexKind)> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut p_colors: Vec<Color> = Vec::new();
    let mut faces: Vec<FaceInfo> = Vec::new();
    let mut used: BTreeSet<Color> = BTreeSet::new();

    let first = pick_color(palette, &used, rng);
    vertices.push(("p0".into(), VertexKind::P(first)));
    p_colors.push(first);
    used.insert(first);

    while p_colors.len() < pieces {
        // Move (b): attach a new piece to an existing simplex with room and an
        // available color. Move (a): glue a fresh simplex onto an existing piece
        // and hang a new piece on it.
        let candidates: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.colors.len() < (n + 1) as usize
                    && palette.iter().any(|c| !f.colors.contains(c))
            })
            .map(|(i, _)| i)
            .collect();
        let color;
        let p_id = format!("p{}", p_colors.len());
        if !candidates.is_empty() && rng.random_bool(0.5) {
            let fi = candidates[rng.random_range(0..candidates.len())];
            let allowed: Vec<Color> = palette
                .iter()
                .copied()
                .filter(|c| !faces[fi].colors.contains(c))
                .collect();
            color = pick_color(&allowed, &used, rng);
            faces[fi].colors.insert(color);
            edges.push((faces[fi].id.clone(), p_id.clone()));
        } else {
            let host = rng.random_range(0..p_colors.len());
            let f_id = format!("f{}", faces.len());
            vertices.push((f_id.clone(), VertexKind::F));
            edges.push((format!("p{host}"), f_id.clone()));
            let allowed: Vec<Color> = palette
                .iter()
                .copied()
                .filter(|&c| c != p_colors[host])
                .collect();
            color = pick_color(&allowed, &used, rng);
            faces.push(FaceInfo {
                id: f_id.clone(),
                colors: BTreeSet::from([p_colors[host], color]),
            });
            edges.push((f_id, p_id.clone()));
        }
        vertices.push((p_id, VertexKind::P(color)));
        p_colors.push(color);
        used.insert(color);
    }
    ColoredGraph::new(n, vertices, edges).expect("generated trees are well-formed")
}

/// Draw a valid tree-shaped colored graph with exactly `pieces` P vertices.
///
/// With `maximally_branched`, every F vertex has full degree `n + 1`. With
/// `colors_used = Some(c)`, exactly `c` distinct colors appear (drawn from
/// `1..=c`); infeasible combinations fail with [`GenerateError::Unsatisfiable`].
pub fn random_gamma_tree(
    n: u32,
    pieces: usize,
    maximally_branched: bool,
    colors_used: Option<usize>,
    rng: &mut impl Rng,
) -> Result<ColoredGraph, GenerateError> {
    check_feasible(n, pieces, maximally_branched, colors_used)?;
    if maximally_branched {
        return Ok(build_fully_branched(n, pieces, rng));
    }
    let palette: Vec<Color> = (1..=colors_used.unwrap_or((n + 1) as usize) as Color).collect();
    for _ in 0..64 {
        let g = build_once(n, pieces, &palette, rng);
        match colors_used {
            None => return Ok(g),
            Some(c) if g.colors_present().len() == c => return Ok(g),
            Some(_) => {}
        }
    }
    Err(GenerateError::Unsatisfiable(
        "could not hit the requested color count; try another seed".into(),
    ))
}

/// Deterministically generate a complex from the options: draw a tree with
/// [`random_gamma_tree`], then realize it with a random amount of extra
/// padding (0 to 2 additional leaf simplices per piece).
pub fn generate_random(options: &GenerateOptions) -> Result<SimplicialComplex, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let tree = random_gamma_tree(
        options.dimension,
        options.pieces,
        options.maximally_branched,
        options.colors_used,
        &mut rng,
    )?;
    let extras: Vec<usize> = (0..options.pieces)
        .map(|_| rng.random_range(0..=2usize))
        .collect();
    Ok(realize_with(&tree, |rank| extras[rank]))
}

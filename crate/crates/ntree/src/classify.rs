//! The classification pipeline: from a validated complex to its colored graph,
//! its class invariant, and equivalence certificates for pairs and families.

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::Serialize;

use crate::bisim::{bisimilar, bisimilar_up_to_permutation, minimize};
use crate::canon::canonical_form;
use crate::complex::{
    compute_coloring, is_maximally_branched, is_reducible, labeled_pieces, validate_tn,
    GluingTree, SimplicialComplex, TnCertificate, VertexColoring,
};
use crate::graph::{Color, ColoredGraph, VertexKind};

/// Why a complex has no graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    /// A single-simplex complex has no pieces and hence no graph; it is the
    /// abelian case of the classification.
    #[error("a single-simplex complex has no graph")]
    SingleSimplex,
}

/// The colored graph of a validated complex.
///
/// One P vertex per piece (`p0`, `p1`, ... in shared-face order, colored by the
/// piece label) and one F vertex per simplex lying in at least two pieces
/// (`f0`, `f1`, ... in ascending simplex order), with edges for membership.
pub fn gamma(
    k: &SimplicialComplex,
    tree: &GluingTree,
    coloring: &VertexColoring,
) -> Result<ColoredGraph, GammaError> {
    if tree.simplex_count == 1 {
        return Err(GammaError::SingleSimplex);
    }
    let palette_size = k.dimension() + 1;
    let mut piece_count_of = vec![0usize; tree.simplex_count];
    for face in &tree.shared {
        for &s in &face.members {
            piece_count_of[s] += 1;
        }
    }
    let mut vertices: Vec<(String, VertexKind)> = Vec::new();
    let mut f_id_of: Vec<Option<String>> = vec![None; tree.simplex_count];
    let mut next_f = 0usize;
    for (s, &count) in piece_count_of.iter().enumerate() {
        if count >= 2 {
            let id = format!("f{next_f}");
            next_f += 1;
            vertices.push((id.clone(), VertexKind::F));
            f_id_of[s] = Some(id);
        }
    }
    let mut edges: Vec<(String, String)> = Vec::new();
    for (i, face) in tree.shared.iter().enumerate() {
        let present: std::collections::BTreeSet<Color> = face
            .vertices
            .iter()
            .map(|&v| coloring.color_of(v as usize))
            .collect();
        let label = (1..=palette_size)
            .find(|c| !present.contains(c))
            .expect("a spine omits exactly one color");
        let p_id = format!("p{i}");
        vertices.push((p_id.clone(), VertexKind::P(label)));
        for &s in &face.members {
            if let Some(f_id) = &f_id_of[s] {
                edges.push((p_id.clone(), f_id.clone()));
            }
        }
    }
    let g = ColoredGraph::new(k.dimension(), vertices, edges)
        .expect("graphs of valid complexes are well-formed");
    debug_assert!(g.validate_graph().is_empty(), "gamma output is always valid");
    debug_assert!(g.is_tree(), "gamma of a tree-class complex is a tree");
    Ok(g)
}

/// The quasi-isometry class of a complex: its dimension plus either the abelian
/// marker or the canonical form (up to color permutation) of its minimal graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QiClass {
    pub dimension: u32,
    pub variant: QiVariant,
}

/// The two kinds of classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QiVariant {
    /// Single-simplex complexes (free abelian group).
    Abelian,
    /// Everything else, keyed by the canonical form of the minimal graph
    /// modulo color permutation.
    Graph(Vec<u8>),
}

/// Classification result: the class itself plus descriptive properties of the
/// given presentation. `reducible` is class-invariant; `maximally_branched`
/// and `colors_used` describe this complex, not the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiReport {
    pub class: QiClass,
    pub reducible: bool,
    pub maximally_branched: bool,
    /// Number of distinct piece labels (0 for the abelian case).
    pub colors_used: usize,
}

#[derive(Serialize)]
struct QiReportDoc<'a> {
    dimension: u32,
    variant: &'a str,
    canonical: String,
    reducible: bool,
    maximally_branched: bool,
    colors_used: usize,
}

impl QiReport {
    /// Serialize to the JSON wire format `{"dimension", "variant", "canonical",
    /// "reducible", "maximally_branched", "colors_used"}` with the canonical
    /// form in standard base64 (empty for the abelian case).
    pub fn to_json(&self) -> String {
        let (variant, canonical) = match &self.class.variant {
            QiVariant::Abelian => ("abelian", String::new()),
            QiVariant::Graph(bytes) => ("graph", BASE64.encode(bytes)),
        };
        let doc = QiReportDoc {
            dimension: self.class.dimension,
            variant,
            canonical,
            reducible: self.reducible,
            maximally_branched: self.maximally_branched,
            colors_used: self.colors_used,
        };
        serde_json::to_string(&doc).expect("report serialization cannot fail")
    }
}

/// Classify one complex. Fails with the validation certificate when the
/// complex is outside the supported class.
pub fn qi_class(k: &SimplicialComplex) -> Result<QiReport, TnCertificate> {
    let tree = validate_tn(k)?;
    let coloring = compute_coloring(k, &tree);
    let pieces = labeled_pieces(k, &tree, &coloring);
    let reducibility = is_reducible(k, &pieces);
    let maximally_branched = is_maximally_branched(k, &tree);
    let variant = if pieces.is_empty() {
        QiVariant::Abelian
    } else {
        let g = gamma(k, &tree, &coloring).expect("complexes with pieces have a graph");
        let (min, _) = minimize(&g);
        QiVariant::Graph(canonical_form(&min, true))
    };
    Ok(QiReport {
        class: QiClass {
            dimension: k.dimension(),
            variant,
        },
        reducible: reducibility.reducible,
        maximally_branched,
        colors_used: reducibility.colors_used.len(),
    })
}

/// A complex rejected during a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("input {side}, complex {index}: {certificate}")]
pub struct InvalidComplex {
    /// Which argument (0 = first, 1 = second).
    pub side: usize,
    /// Position within that argument's family (0 for single complexes).
    pub index: usize,
    pub certificate: TnCertificate,
}

/// Outcome of a pairwise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiCertificate {
    pub equivalent: bool,
    pub detail: QiDetail,
}

/// The reason behind a pairwise comparison outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum QiDetail {
    /// Different dimensions never compare equal.
    DimensionMismatch { a: u32, b: u32 },
    /// Two single-simplex complexes of the same dimension.
    BothAbelian,
    /// Exactly one side is a single simplex; `abelian` names it (0 or 1).
    AbelianVersusGraph { abelian: usize },
    /// The graphs are equivalent; the permutation (applied to the second
    /// complex's colors) witnesses it, or is absent for an exact-color match.
    Bisimilar { permutation: Option<Vec<Color>> },
    /// No (allowed) recoloring makes the graphs equivalent.
    NotBisimilar,
}

#[derive(Serialize)]
struct QiCertificateDoc<'a> {
    equivalent: bool,
    #[serde(flatten)]
    detail: &'a QiDetail,
}

impl QiCertificate {
    /// Serialize to JSON: `{"equivalent": ..., "reason": ..., ...}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&QiCertificateDoc {
            equivalent: self.equivalent,
            detail: &self.detail,
        })
        .expect("certificate serialization cannot fail")
    }
}

fn classify_side(k: &SimplicialComplex, side: usize) -> Result<Option<ColoredGraph>, InvalidComplex> {
    let tree = validate_tn(k).map_err(|certificate| InvalidComplex {
        side,
        index: 0,
        certificate,
    })?;
    if tree.simplex_count == 1 {
        return Ok(None);
    }
    let coloring = compute_coloring(k, &tree);
    Ok(Some(
        gamma(k, &tree, &coloring).expect("multi-simplex complexes have a graph"),
    ))
}

/// Compare two complexes, optionally allowing a color permutation (the default
/// notion of equivalence).
pub fn qi_equivalent_with(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    up_to_permutation: bool,
) -> Result<QiCertificate, InvalidComplex> {
    let ga = classify_side(a, 0)?;
    let gb = classify_side(b, 1)?;
    if a.dimension() != b.dimension() {
        return Ok(QiCertificate {
            equivalent: false,
            detail: QiDetail::DimensionMismatch {
                a: a.dimension(),
                b: b.dimension(),
            },
        });
    }
    let (ga, gb) = match (ga, gb) {
        (None, None) => {
            return Ok(QiCertificate {
                equivalent: true,
                detail: QiDetail::BothAbelian,
            })
        }
        (None, Some(_)) => {
            return Ok(QiCertificate {
                equivalent: false,
                detail: QiDetail::AbelianVersusGraph { abelian: 0 },
            })
        }
        (Some(_), None) => {
            return Ok(QiCertificate {
                equivalent: false,
                detail: QiDetail::AbelianVersusGraph { abelian: 1 },
            })
        }
        (Some(ga), Some(gb)) => (ga, gb),
    };
    if up_to_permutation {
        match bisimilar_up_to_permutation(&ga, &gb) {
            Some(sigma) => Ok(QiCertificate {
                equivalent: true,
                detail: QiDetail::Bisimilar {
                    permutation: Some(sigma),
                },
            }),
            None => Ok(QiCertificate {
                equivalent: false,
                detail: QiDetail::NotBisimilar,
            }),
        }
    } else if bisimilar(&ga, &gb) {
        Ok(QiCertificate {
            equivalent: true,
            detail: QiDetail::Bisimilar { permutation: None },
        })
    } else {
        Ok(QiCertificate {
            equivalent: false,
            detail: QiDetail::NotBisimilar,
        })
    }
}

/// Compare two complexes up to color permutation.
pub fn qi_equivalent(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<QiCertificate, InvalidComplex> {
    qi_equivalent_with(a, b, true)
}

/// Outcome of comparing two families: equivalent when they populate exactly
/// the same set of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub equivalent: bool,
    /// Distinct classes of each family, sorted.
    pub classes_a: Vec<QiClass>,
    pub classes_b: Vec<QiClass>,
    /// Classes present on one side only.
    pub only_in_a: Vec<QiClass>,
    pub only_in_b: Vec<QiClass>,
    /// Whether all members of a family fall into one class.
    pub single_class_a: bool,
    pub single_class_b: bool,
}

#[derive(Serialize)]
struct QiClassDoc {
    dimension: u32,
    variant: &'static str,
    canonical: String,
}

#[derive(Serialize)]
struct FamilyCertificateDoc {
    equivalent: bool,
    classes_a: Vec<QiClassDoc>,
    classes_b: Vec<QiClassDoc>,
    only_in_a: Vec<QiClassDoc>,
    only_in_b: Vec<QiClassDoc>,
    single_class_a: bool,
    single_class_b: bool,
}

fn class_doc(class: &QiClass) -> QiClassDoc {
    let (variant, canonical) = match &class.variant {
        QiVariant::Abelian => ("abelian", String::new()),
        QiVariant::Graph(bytes) => ("graph", BASE64.encode(bytes)),
    };
    QiClassDoc {
        dimension: class.dimension,
        variant,
        canonical,
    }
}

impl FamilyCertificate {
    /// Serialize to JSON with classes rendered as
    /// `{"dimension", "variant", "canonical"}` objects.
    pub fn to_json(&self) -> String {
        let doc = FamilyCertificateDoc {
            equivalent: self.equivalent,
            classes_a: self.classes_a.iter().map(class_doc).collect(),
            classes_b: self.classes_b.iter().map(class_doc).collect(),
            only_in_a: self.only_in_a.iter().map(class_doc).collect(),
            only_in_b: self.only_in_b.iter().map(class_doc).collect(),
            single_class_a: self.single_class_a,
            single_class_b: self.single_class_b,
        };
        serde_json::to_string(&doc).expect("certificate serialization cannot fail")
    }
}

fn family_classes(
    family: &[SimplicialComplex],
    side: usize,
) -> Result<Vec<QiClass>, InvalidComplex> {
    let mut classes = Vec::with_capacity(family.len());
    for (index, k) in family.iter().enumerate() {
        let report = qi_class(k).map_err(|certificate| InvalidComplex {
            side,
            index,
            certificate,
        })?;
        classes.push(report.class);
    }
    classes.sort();
    classes.dedup();
    Ok(classes)
}

/// Compare two families of complexes by their sets of classes.
pub fn qi_equivalent_families(
    a: &[SimplicialComplex],
    b: &[SimplicialComplex],
) -> Result<FamilyCertificate, InvalidComplex> {
    let classes_a = family_classes(a, 0)?;
    let classes_b = family_classes(b, 1)?;
    let only_in_a: Vec<QiClass> = classes_a
        .iter()
        .filter(|c| !classes_b.contains(c))
        .cloned()
        .collect();
    let only_in_b: Vec<QiClass> = classes_b
        .iter()
        .filter(|c| !classes_a.contains(c))
        .cloned()
        .collect();
    Ok(FamilyCertificate {
        equivalent: only_in_a.is_empty() && only_in_b.is_empty(),
        single_class_a: classes_a.len() == 1,
        single_class_b: classes_b.len() == 1,
        classes_a,
        classes_b,
        only_in_a,
        only_in_b,
    })
}

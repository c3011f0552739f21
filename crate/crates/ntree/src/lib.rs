//! Quasi-isometry classification of right-angled n-tree groups.
//!
//! A complex in the supported class is assembled from n-dimensional simplices glued
//! along (n-1)-dimensional faces in a tree pattern. Every such complex `K` carries an
//! essentially unique proper coloring of its vertices by `1..=n+1`, and decomposes
//! into *pieces*: the stars of the (n-1)-faces shared by at least two simplices. The
//! pieces and the simplices lying in more than one piece form a colored bipartite
//! graph Γ(K). The right-angled Artin groups of two complexes are quasi-isometric
//! exactly when their graphs are *bisimilar* (weakly cover a common colored graph)
//! after an optimal permutation of the colors, with a single-simplex complex set
//! apart as the abelian case.
//!
//! The crate provides the full pipeline: parsing and validating complexes
//! ([`complex`]), the colored-graph machinery with partition refinement and
//! canonical forms ([`graph`], [`bisim`], [`canon`]), classification and
//! equivalence certificates ([`classify`]), constructive realization of graphs as
//! complexes and seeded random generation ([`realize`]), and an exhaustive census
//! of classes by piece count ([`census`]).
//!
//! With the default `parallel` feature the census and other batch loops run on
//! rayon; disabling the feature falls back to equivalent sequential code. All
//! results are byte-identical either way.

pub mod bisim;
pub mod canon;
pub mod census;
pub mod classify;
pub mod complex;
pub mod graph;
pub mod realize;

pub use bisim::{bisimilar, bisimilar_up_to_permutation, is_minimal, minimize, VertexPartition};
pub use canon::{canonical_form, from_canonical};
pub use census::{census, census_run, census_run_serial, census_serial, enumerate_gamma_trees,
                 CensusClass, CensusReport, CensusRun, KStats};
pub use classify::{gamma, qi_class, qi_equivalent, qi_equivalent_families, qi_equivalent_with,
                   FamilyCertificate, GammaError, InvalidComplex, QiCertificate, QiClass,
                   QiDetail, QiReport, QiVariant};
pub use complex::{compute_coloring, compute_pieces, cone_vertices, is_maximally_branched,
                  is_reducible, labeled_pieces, parse_complex, parse_complex_family, validate_tn,
                  ComplexError, GluingTree, Piece, ReducibilityReport, SharedFace,
                  SimplicialComplex, TnCertificate, VertexColoring};
pub use graph::{is_weak_covering, parse_graph, Color, ColoredGraph, CoveringError, GraphError,
                GraphViolation, VertexKind, WeakCoveringMap};
pub use realize::{generate_random, random_gamma_tree, realize, GenerateError, GenerateOptions,
                  RealizeError};

//! Command-line front end for the n-tree classification pipeline.
//!
//! Data always goes to stdout, diagnostics to stderr. Exit codes follow a
//! three-way contract:
//!
//! * `0` — the input is valid / the inputs are equivalent,
//! * `1` — the question was answered negatively (invalid complex, inequivalent
//!   inputs, unrealizable graph); a machine-readable certificate is printed on
//!   stdout,
//! * `2` — the question could not be posed: usage errors, unreadable files,
//!   malformed JSON, unsatisfiable generator options.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ntree::{
    bisimilar, bisimilar_up_to_permutation, census_run_serial, compute_coloring,
    compute_pieces, gamma, minimize, parse_complex, parse_complex_family, parse_graph, qi_class,
    qi_equivalent_families, qi_equivalent_with, realize, generate_random, validate_tn,
    ColoredGraph, GenerateOptions, QiCertificate, QiDetail, TnCertificate,
};
#[cfg(feature = "parallel")]
use ntree::census_run;

#[derive(Parser)]
#[command(name = "ntree", version, about = "Classify complexes built from n-simplices glued along a tree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Structured document with vertices, colors and edges.
    Json,
    /// Graphviz source.
    Dot,
    /// Human-readable adjacency listing.
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a complex belongs to the tree-gluing class.
    ///
    /// Prints a summary on success, or the failure certificate and exit code 1.
    Validate {
        /// Complex JSON file ("-" for stdin).
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print the labelled piece graph of a complex.
    Gamma {
        /// Complex JSON file ("-" for stdin).
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Collapse a colored graph to its minimal form.
    Minimize {
        /// Graph JSON file ("-" for stdin).
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide whether two complexes present quasi-isometric groups.
    ///
    /// Prints a certificate; exit code 0 when equivalent, 1 when not.
    Compare {
        /// First complex (or graph with --graphs) JSON file.
        a: String,
        /// Second complex (or graph with --graphs) JSON file.
        b: String,
        /// Treat the inputs as colored graphs instead of complexes.
        #[arg(long)]
        graphs: bool,
        /// Require the exact coloring to match instead of matching up to a
        /// relabelling of colors.
        #[arg(long)]
        no_permutation: bool,
    },
    /// Compare two finite families of complexes by their sets of classes.
    CompareFamilies {
        /// First family: JSON array of complexes.
        a: String,
        /// Second family: JSON array of complexes.
        b: String,
    },
    /// Print the full classification report for one complex.
    Classify {
        /// Complex JSON file ("-" for stdin).
        #[arg(default_value = "-")]
        input: String,
    },
    /// Enumerate equivalence classes by piece count.
    Census {
        /// Dimension of the simplices.
        #[arg(long)]
        dimension: u32,
        /// Largest piece count to enumerate.
        #[arg(long)]
        max_pieces: usize,
        /// Worker threads for the enumeration (needs the "parallel" feature).
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory receiving one JSON + DOT file per discovered class.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Build a complex whose piece graph is the given colored graph.
    Realize {
        /// Graph JSON file ("-" for stdin).
        #[arg(default_value = "-")]
        input: String,
    },
    /// Generate a pseudorandom complex with the requested shape.
    Generate {
        /// Dimension of the simplices.
        #[arg(long)]
        dimension: u32,
        /// Number of pieces.
        #[arg(long)]
        pieces: usize,
        /// Seed for the deterministic generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force every simplex to meet pieces along all of its faces.
        #[arg(long)]
        maximally_branched: bool,
        /// Exact number of distinct piece labels to use.
        #[arg(long)]
        colors: Option<usize>,
    },
}

/// Successful `validate` summary.
#[derive(Serialize)]
struct ValidDoc {
    status: &'static str,
    dimension: u32,
    simplices: usize,
    pieces: usize,
}

/// Negative `validate`/`classify` answer carrying the certificate.
#[derive(Serialize)]
struct InvalidDoc<'a> {
    status: &'static str,
    certificate: &'a TnCertificate,
}

/// Negative `compare` answer when one input complex is invalid.
#[derive(Serialize)]
struct InvalidAtDoc<'a> {
    status: &'static str,
    input: usize,
    complex: usize,
    certificate: &'a TnCertificate,
}

/// Negative answer for questions without a structured certificate.
#[derive(Serialize)]
struct ErrorDoc {
    status: &'static str,
    error: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// `Err` is reserved for exit-code-2 situations (I/O, malformed input).
fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Gamma { input, format } => cmd_gamma(&input, format),
        Command::Minimize { input, format } => cmd_minimize(&input, format),
        Command::Compare { a, b, graphs, no_permutation } => {
            if graphs {
                cmd_compare_graphs(&a, &b, !no_permutation)
            } else {
                cmd_compare(&a, &b, !no_permutation)
            }
        }
        Command::CompareFamilies { a, b } => cmd_compare_families(&a, &b),
        Command::Classify { input } => cmd_classify(&input),
        Command::Census { dimension, max_pieces, jobs, dump } => {
            cmd_census(dimension, max_pieces, jobs, dump)
        }
        Command::Realize { input } => cmd_realize(&input),
        Command::Generate { dimension, pieces, seed, maximally_branched, colors } => {
            cmd_generate(dimension, pieces, seed, maximally_branched, colors)
        }
    }
}

fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn load_complex(path: &str) -> Result<ntree::SimplicialComplex, String> {
    let text = read_source(path)?;
    parse_complex(&text).map_err(|e| format!("parsing complex from {path}: {e}"))
}

fn load_graph(path: &str) -> Result<ColoredGraph, String> {
    let text = read_source(path)?;
    parse_graph(&text).map_err(|e| format!("parsing graph from {path}: {e}"))
}

fn print_graph(g: &ColoredGraph, format: Format) {
    match format {
        Format::Json => println!("{}", g.to_json()),
        Format::Dot => print!("{}", g.to_dot()),
        Format::Text => print!("{}", g.to_text()),
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("serializing report")
}

fn cmd_validate(input: &str) -> Result<ExitCode, String> {
    let k = load_complex(input)?;
    match validate_tn(&k) {
        Ok(tree) => {
            let doc = ValidDoc {
                status: "valid",
                dimension: k.dimension(),
                simplices: k.simplex_count(),
                pieces: tree.shared.len().max(1),
            };
            println!("{}", to_json(&doc));
            Ok(ExitCode::SUCCESS)
        }
        Err(certificate) => {
            println!("{}", to_json(&InvalidDoc { status: "invalid", certificate: &certificate }));
            eprintln!("invalid complex: {certificate}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_gamma(input: &str, format: Format) -> Result<ExitCode, String> {
    let k = load_complex(input)?;
    let tree = match validate_tn(&k) {
        Ok(tree) => tree,
        Err(certificate) => {
            println!("{}", to_json(&InvalidDoc { status: "invalid", certificate: &certificate }));
            eprintln!("invalid complex: {certificate}");
            return Ok(ExitCode::FAILURE);
        }
    };
    let coloring = compute_coloring(&k, &tree);
    match gamma(&k, &tree, &coloring) {
        Ok(graph) => {
            print_graph(&graph, format);
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("{}", to_json(&ErrorDoc { status: "abelian", error: e.to_string() }));
            eprintln!("{e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_minimize(input: &str, format: Format) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    let (minimal, map) = minimize(&g);
    print_graph(&minimal, format);
    eprintln!(
        "{} vertices collapsed to {} ({} fibers)",
        g.vertex_count(),
        minimal.vertex_count(),
        map.vertex_map.values().collect::<std::collections::BTreeSet<_>>().len(),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(a: &str, b: &str, up_to_permutation: bool) -> Result<ExitCode, String> {
    let ka = load_complex(a)?;
    let kb = load_complex(b)?;
    match qi_equivalent_with(&ka, &kb, up_to_permutation) {
        Ok(certificate) => {
            println!("{}", certificate.to_json());
            Ok(if certificate.equivalent { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Err(invalid) => {
            println!(
                "{}",
                to_json(&InvalidAtDoc {
                    status: "invalid",
                    input: invalid.side,
                    complex: invalid.index,
                    certificate: &invalid.certificate,
                })
            );
            eprintln!("{invalid}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_compare_graphs(a: &str, b: &str, up_to_permutation: bool) -> Result<ExitCode, String> {
    let ga = load_graph(a)?;
    let gb = load_graph(b)?;
    let certificate = if ga.n() != gb.n() {
        QiCertificate {
            equivalent: false,
            detail: QiDetail::DimensionMismatch { a: ga.n(), b: gb.n() },
        }
    } else if up_to_permutation {
        match bisimilar_up_to_permutation(&ga, &gb) {
            Some(permutation) => QiCertificate {
                equivalent: true,
                detail: QiDetail::Bisimilar { permutation: Some(permutation) },
            },
            None => QiCertificate { equivalent: false, detail: QiDetail::NotBisimilar },
        }
    } else if bisimilar(&ga, &gb) {
        QiCertificate { equivalent: true, detail: QiDetail::Bisimilar { permutation: None } }
    } else {
        QiCertificate { equivalent: false, detail: QiDetail::NotBisimilar }
    };
    println!("{}", certificate.to_json());
    Ok(if certificate.equivalent { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_compare_families(a: &str, b: &str) -> Result<ExitCode, String> {
    let fa = parse_complex_family(&read_source(a)?)
        .map_err(|e| format!("parsing family from {a}: {e}"))?;
    let fb = parse_complex_family(&read_source(b)?)
        .map_err(|e| format!("parsing family from {b}: {e}"))?;
    match qi_equivalent_families(&fa, &fb) {
        Ok(certificate) => {
            println!("{}", certificate.to_json());
            Ok(if certificate.equivalent { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Err(invalid) => {
            println!(
                "{}",
                to_json(&InvalidAtDoc {
                    status: "invalid",
                    input: invalid.side,
                    complex: invalid.index,
                    certificate: &invalid.certificate,
                })
            );
            eprintln!("{invalid}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_classify(input: &str) -> Result<ExitCode, String> {
    let k = load_complex(input)?;
    match qi_class(&k) {
        Ok(report) => {
            println!("{}", report.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Err(certificate) => {
            println!("{}", to_json(&InvalidDoc { status: "invalid", certificate: &certificate }));
            eprintln!("invalid complex: {certificate}");
            Ok(ExitCode::FAILURE)
        }
    }
}

#[cfg(feature = "parallel")]
fn census_with_jobs(dimension: u32, max_pieces: usize, jobs: Option<usize>) -> Result<ntree::CensusRun, String> {
    match jobs {
        None => Ok(census_run(dimension, max_pieces)),
        Some(0) => Err("--jobs must be at least 1".to_string()),
        Some(1) => Ok(census_run_serial(dimension, max_pieces)),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| format!("building thread pool: {e}"))?;
            Ok(pool.install(|| census_run(dimension, max_pieces)))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn census_with_jobs(dimension: u32, max_pieces: usize, jobs: Option<usize>) -> Result<ntree::CensusRun, String> {
    match jobs {
        Some(0) => return Err("--jobs must be at least 1".to_string()),
        Some(_) => eprintln!("built without the \"parallel\" feature; running serially"),
        None => {}
    }
    Ok(census_run_serial(dimension, max_pieces))
}

fn cmd_census(
    dimension: u32,
    max_pieces: usize,
    jobs: Option<usize>,
    dump: Option<PathBuf>,
) -> Result<ExitCode, String> {
    if dimension == 0 {
        return Err("--dimension must be at least 1".to_string());
    }
    if max_pieces == 0 {
        return Err("--max-pieces must be at least 1".to_string());
    }
    let run = census_with_jobs(dimension, max_pieces, jobs)?;
    for stats in &run.per_k {
        eprintln!(
            "k={}: {} trees, {} new classes",
            stats.pieces, stats.trees, stats.new_classes
        );
    }
    if let Some(dir) = dump {
        fs::create_dir_all(&dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
        let mut within: BTreeMap<usize, usize> = BTreeMap::new();
        for class in &run.classes {
            let idx = within.entry(class.pieces).or_insert(0);
            let stem = dir.join(format!("class-p{}-{:03}", class.pieces, idx));
            *idx += 1;
            let json = stem.with_extension("json");
            fs::write(&json, format!("{}\n", class.representative.to_json()))
                .map_err(|e| format!("writing {}: {e}", json.display()))?;
            let dot = stem.with_extension("dot");
            fs::write(&dot, class.representative.to_dot())
                .map_err(|e| format!("writing {}: {e}", dot.display()))?;
        }
        eprintln!("wrote {} class files under {}", 2 * run.classes.len(), dir.display());
    }
    println!("{}", run.report.to_json());
    Ok(ExitCode::SUCCESS)
}

fn cmd_realize(input: &str) -> Result<ExitCode, String> {
    let g = load_graph(input)?;
    match realize(&g) {
        Ok(k) => {
            println!("{}", k.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("{}", to_json(&ErrorDoc { status: "unrealizable", error: e.to_string() }));
            eprintln!("{e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_generate(
    dimension: u32,
    pieces: usize,
    seed: u64,
    maximally_branched: bool,
    colors: Option<usize>,
) -> Result<ExitCode, String> {
    let options = GenerateOptions {
        dimension,
        pieces,
        seed,
        maximally_branched,
        colors_used: colors,
    };
    let k = generate_random(&options).map_err(|e| e.to_string())?;
    println!("{}", k.to_json());
    let tree = validate_tn(&k).expect("generated complex must be valid");
    eprintln!(
        "dimension {dimension}, {} simplices, {} pieces, seed {seed}",
        k.simplex_count(),
        compute_pieces(&k, &tree).len().max(1),
    );
    Ok(ExitCode::SUCCESS)
}

//! Command-line front end. Every subcommand is deterministic and writes its
//! result to the output stream; diagnostics go to the error stream.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 size guard
//! refusal, 3 violated bound or internal invariant.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bounded_path::pivot_path_certificate;
use crate::degree::{count_trees, enumerate_trees, BipartiteTree, DegreeFunction, SizeGuard};
use crate::error::Error;
use crate::joyal::{enumerate_functional_digraphs, enumerate_marked_trees, phi, psi};
use crate::pivoting::{build_graph, PivotingGraph};
use crate::polytope::{
    check_simplicity, dimension, f_vector, facet_count, hirsch_bound, support, tree_to_vertex,
    SupportClass,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TOO_LARGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Largest tree count enumerated without `--force`.
pub const MAX_TREES: u64 = 1_000_000;
/// Largest `m * n` enumerated without `--force`.
pub const MAX_CELLS: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "pd-skeleton",
    about = "Trees, pivot graphs and vertices of transportation polytopes with prescribed source degrees"
)]
struct Invocation {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
    Dot,
    Csv,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Degree function as comma-separated integers, e.g. `1,1,1`.
    #[arg(long, allow_hyphen_values = true)]
    degrees: String,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format plain`.
    #[arg(long)]
    plain: bool,
    /// Enumerate even above the size guards.
    #[arg(long)]
    force: bool,
    /// Reserved; every algorithm here is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn format(&self, default: Format) -> Format {
        if self.plain {
            Format::Plain
        } else {
            self.format.unwrap_or(default)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bfs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact number of trees.
    Count(Common),
    /// List every tree in canonical order.
    Trees(Common),
    /// Emit the pivoting graph.
    Graph(Common),
    /// Exact diameter of the pivoting graph.
    Diameter {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "bfs")]
        method: Method,
    },
    /// Bounded pivot path certificate between two trees.
    Path {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Replay the certificate before printing it.
        #[arg(long)]
        certify: bool,
    },
    /// Vertex coordinates of a tree.
    Vertex {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tree: String,
    },
    /// Vertex and edge counts.
    Fvector(Common),
    /// Facet count.
    Facets(Common),
    /// Hirsch bound.
    Hirsch(Common),
    /// Round-trip both bijections and compare class sizes.
    BijectionCheck(Common),
    /// Check every invariant for one degree function.
    Check(Common),
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::TooLarge { .. } => EXIT_TOO_LARGE,
            Error::BoundExceeded { .. } | Error::Structure(_) => EXIT_VIOLATION,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

struct Output {
    text: String,
    code: i32,
    note: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
            note: None,
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let invocation = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&invocation.command) {
        Ok(output) => {
            let _ = out.write_all(output.text.as_bytes());
            if let Some(note) = output.note {
                let _ = writeln!(err, "{note}");
            }
            output.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn parse_degrees(common: &Common) -> Result<DegreeFunction, Failure> {
    Ok(common.degrees.parse::<DegreeFunction>()?)
}

/// Applies the CLI guards and returns the library guard to enumerate with.
fn guard(df: &DegreeFunction, common: &Common) -> Result<SizeGuard, Failure> {
    if common.force {
        return Ok(SizeGuard::unlimited());
    }
    check_cli_guard(df)?;
    Ok(SizeGuard::default())
}

fn check_cli_guard(df: &DegreeFunction) -> Result<(), Error> {
    let count = count_trees(df);
    let cells = df.num_sources() * df.num_destinations();
    if count > BigUint::from(MAX_TREES) || cells > MAX_CELLS {
        let estimate = u128::try_from(&count).unwrap_or(u128::MAX);
        return Err(Error::TooLarge {
            estimate,
            limit: MAX_TREES as u128,
        });
    }
    Ok(())
}

fn number(value: &BigUint) -> Value {
    serde_json::from_str(&value.to_string()).expect("integers are valid JSON numbers")
}

fn render(value: &Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("serializable")
    )
}

fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Count(c) => {
            let df = parse_degrees(c)?;
            Ok(Output::ok(format!("{}\n", count_trees(&df))))
        }
        Command::Trees(c) => {
            let df = parse_degrees(c)?;
            let trees = enumerate_trees(&df, guard(&df, c)?)?;
            let text = match c.format(Format::Json) {
                Format::Json => render(&json!(trees
                    .iter()
                    .map(|t| t.encoding())
                    .collect::<Vec<_>>())),
                _ => trees.iter().map(|t| format!("{t}\n")).collect(),
            };
            Ok(Output::ok(text))
        }
        Command::Graph(c) => {
            let df = parse_degrees(c)?;
            let graph = build_graph(&df, guard(&df, c)?)?;
            let text = match c.format(Format::Json) {
                Format::Dot => graph.to_dot(),
                Format::Json => render(&graph_json(&graph)),
                _ => {
                    let mut text = String::new();
                    for v in 0..graph.vertex_count() {
                        for &w in graph.adjacency(v).iter().filter(|&&w| w > v) {
                            text.push_str(&format!("{} {}\n", graph.tree(v), graph.tree(w)));
                        }
                    }
                    text
                }
            };
            Ok(Output::ok(text))
        }
        Command::Diameter { common: c, method } => {
            let df = parse_degrees(c)?;
            let Method::Bfs = method;
            let graph = build_graph(&df, guard(&df, c)?)?;
            let value = graph.exact_diameter();
            let bound = 2 * df.degree_sum();
            let hirsch = hirsch_bound(&df).ok();
            let text = match c.format(Format::Json) {
                Format::Json => render(&json!({
                    "diameter": value,
                    "bound2n2": bound,
                    "hirsch": hirsch,
                })),
                _ => format!(
                    "{value}\nbound={bound} hirsch={}\n",
                    hirsch.map_or("n/a".to_string(), |h| h.to_string())
                ),
            };
            let mut output = Output::ok(text);
            if value > bound {
                output.code = EXIT_VIOLATION;
                output.note = Some(format!("diameter {value} exceeds 2n-2 = {bound}"));
            }
            Ok(output)
        }
        Command::Path {
            common: c,
            from,
            to,
            certify,
        } => {
            let df = parse_degrees(c)?;
            let s = BipartiteTree::parse(&df, from)?;
            let t = BipartiteTree::parse(&df, to)?;
            let cert = pivot_path_certificate(&s, &t)?;
            if *certify {
                cert.verify()?;
            }
            let bound = 2 * df.degree_sum();
            let distance = if c.force || check_cli_guard(&df).is_ok() {
                let graph = build_graph(&df, SizeGuard::unlimited())?;
                Some(graph.distances_from(graph.index_of(&s)?)[graph.index_of(&t)?])
            } else {
                None
            };
            let moves = |list: &[crate::pivoting::PivotMove]| -> Vec<Value> {
                list.iter()
                    .map(|mv| json!({"insert": mv.inserted.to_string(), "remove": mv.removed.to_string()}))
                    .collect()
            };
            let text = match c.format(Format::Json) {
                Format::Json => render(&json!({
                    "from": s.encoding(),
                    "to": t.encoding(),
                    "moves_on_s": moves(&cert.moves_on_s),
                    "moves_on_t": moves(&cert.moves_on_t),
                    "meeting_tree": cert.meeting_tree.encoding(),
                    "total_length": cert.total_length(),
                    "bound": bound,
                    "bfs_distance": distance,
                    "certified": *certify,
                })),
                _ => {
                    let mut text = String::new();
                    for mv in &cert.moves_on_s {
                        text.push_str(&format!("S {mv}\n"));
                    }
                    for mv in &cert.moves_on_t {
                        text.push_str(&format!("T {mv}\n"));
                    }
                    text.push_str(&format!("meeting={}\n", cert.meeting_tree));
                    text.push_str(&format!(
                        "total_length={}\nbound={bound}\n",
                        cert.total_length()
                    ));
                    if let Some(d) = distance {
                        text.push_str(&format!("bfs_distance={d}\n"));
                    }
                    text
                }
            };
            let mut output = Output::ok(text);
            if cert.total_length() > bound {
                output.code = EXIT_VIOLATION;
                output.note = Some(format!(
                    "path length {} exceeds 2n-2 = {bound}",
                    cert.total_length()
                ));
            }
            Ok(output)
        }
        Command::Vertex { common: c, tree } => {
            let df = parse_degrees(c)?;
            let tree = BipartiteTree::parse(&df, tree)?;
            let x = tree_to_vertex(&df, &tree)?;
            let text = match c.format(Format::Csv) {
                Format::Json => render(&json!(x.rows())),
                _ => x.to_csv(),
            };
            Ok(Output::ok(text))
        }
        Command::Fvector(c) | Command::Facets(c) | Command::Hirsch(c) => {
            let df = parse_degrees(c)?;
            let fv = f_vector(&df);
            let facets = facet_count(&df).ok();
            let hirsch = facets.map(|f| f - dimension(&df));
            let bound = 2 * df.degree_sum();
            let text = match c.format(Format::Json) {
                Format::Json => render(&json!({
                    "f0": number(&fv.f0),
                    "f1": number(&fv.f1),
                    "facets": facets,
                    "hirsch": hirsch,
                    "bound2n2": bound,
                })),
                _ => {
                    let opt = |v: Option<usize>| v.map_or("n/a".to_string(), |v| v.to_string());
                    format!(
                        "f0={}\nf1={}\nfacets={}\nhirsch={}\nbound2n2={bound}\n",
                        fv.f0,
                        fv.f1,
                        opt(facets),
                        opt(hirsch)
                    )
                }
            };
            Ok(Output::ok(text))
        }
        Command::BijectionCheck(c) => {
            let df = parse_degrees(c)?;
            let g = guard(&df, c)?;
            let digraphs = enumerate_functional_digraphs(&df, g)?;
            let marked = enumerate_marked_trees(&df, g)?;
            let mut roundtrip = true;
            for s in &digraphs {
                roundtrip &= psi(&df, &phi(&df, s)?)? == *s;
            }
            for r in &marked {
                roundtrip &= phi(&df, &psi(&df, r)?)? == *r;
            }
            let expected = count_trees(&df) * BigUint::from(df.num_destinations());
            let sizes_ok = BigUint::from(digraphs.len()) == expected
                && BigUint::from(marked.len()) == expected;
            let text = match c.format(Format::Json) {
                Format::Json => render(&json!({
                    "functional_digraphs": digraphs.len(),
                    "marked_trees": marked.len(),
                    "n_times_count": number(&expected),
                    "roundtrip": roundtrip,
                })),
                _ => format!(
                    "{}\n{}\n{}\nroundtrip={roundtrip}\n",
                    digraphs.len(),
                    marked.len(),
                    expected
                ),
            };
            let mut output = Output::ok(text);
            if !(roundtrip && sizes_ok) {
                output.code = EXIT_VIOLATION;
                output.note = Some("bijection check failed".into());
            }
            Ok(output)
        }
        Command::Check(c) => {
            let df = parse_degrees(c)?;
            let g = guard(&df, c)?;
            let report = check_all(&df, g)?;
            let all = report.iter().all(|(_, ok)| *ok);
            let text = match c.format(Format::Json) {
                Format::Json => {
                    let map: serde_json::Map<String, Value> = report
                        .iter()
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect();
                    render(&Value::Object(map))
                }
                _ => report.iter().map(|(k, v)| format!("{k}={v}\n")).collect(),
            };
            let mut output = Output::ok(text);
            if !all {
                output.code = EXIT_VIOLATION;
                let failed: Vec<&str> = report
                    .iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(k, _)| *k)
                    .collect();
                output.note = Some(format!("failed: {}", failed.join(", ")));
            }
            Ok(output)
        }
    }
}

fn graph_json(graph: &PivotingGraph) -> Value {
    let vertices: Vec<String> = graph.trees().iter().map(|t| t.encoding()).collect();
    let mut edges = Vec::new();
    for v in 0..graph.vertex_count() {
        for &w in graph.adjacency(v).iter().filter(|&&w| w > v) {
            edges.push(json!([v, w]));
        }
    }
    json!({ "vertices": vertices, "edges": edges })
}

/// Pairs above this many vertices are checked from every vertex to a
/// sample of targets instead of all ordered pairs.
const ALL_PAIRS_LIMIT: usize = 600;

fn check_all(df: &DegreeFunction, guard: SizeGuard) -> Result<Vec<(&'static str, bool)>, Error> {
    let mut report = Vec::new();
    let count = count_trees(df);
    let graph = build_graph(df, guard)?;
    let trees = graph.trees();
    report.push((
        "count_matches_enumeration",
        BigUint::from(trees.len()) == count,
    ));

    let digraphs = enumerate_functional_digraphs(df, guard)?;
    let marked = enumerate_marked_trees(df, guard)?;
    let mut bijection = BigUint::from(digraphs.len())
        == &count * BigUint::from(df.num_destinations())
        && marked.len() == digraphs.len();
    for s in &digraphs {
        bijection &= psi(df, &phi(df, s)?)? == *s;
    }
    for r in &marked {
        bijection &= phi(df, &psi(df, r)?)? == *r;
    }
    report.push(("bijection_roundtrip", bijection));

    let regular_degree = dimension(df);
    report.push((
        "graph_regular",
        (0..graph.vertex_count()).all(|v| graph.adjacency(v).len() == regular_degree),
    ));
    report.push(("graph_connected", graph.is_connected()));
    report.push((
        "edge_count_matches_f1",
        BigUint::from(graph.edge_count()) == f_vector(df).f1,
    ));
    let bound = 2 * df.degree_sum();
    report.push(("diameter_within_2n2", graph.exact_diameter() <= bound));

    let mut paths_ok = true;
    let stride = if trees.len() <= ALL_PAIRS_LIMIT {
        1
    } else {
        trees.len() / ALL_PAIRS_LIMIT + 1
    };
    for (i, s) in trees.iter().enumerate() {
        let dist = graph.distances_from(i);
        for (j, t) in trees.iter().enumerate().step_by(stride) {
            let cert = pivot_path_certificate(s, t)?;
            paths_ok &= cert.verify().is_ok()
                && cert.total_length() <= bound
                && cert.total_length() >= dist[j];
        }
    }
    report.push(("bounded_paths", paths_ok));

    let mut geometry = true;
    for t in trees {
        let x = tree_to_vertex(df, t)?;
        geometry &= support(df, &x)? == SupportClass::Vertex(t.clone());
    }
    report.push(("vertex_support_roundtrip", geometry));
    report.push(("simple", check_simplicity(df)?.is_simple()));
    Ok(report)
}

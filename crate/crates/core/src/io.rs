//! JSON formats for graphs, QWGT instances, crossing assignments and results.
//!
//! Parse failures are reported as [`Error::Parse`] with the line and column
//! supplied by `serde_json`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::graph::{BondConfig, Graph};
use crate::knot::{CrossingAssignment, KauffmanVariable, Orientation};
use crate::scalar::{Complex64, Rational, Scalar, ScalarLiteral};

fn parse_json<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<Vec<u8>>,
}

impl GraphFile {
    fn build(self) -> Result<GraphInput> {
        let graph = Graph::new(self.vertices, self.edges.iter().map(|&[i, j]| (i, j)).collect())?;
        let bonds = match self.w {
            None => BondConfig::ferromagnetic(graph.num_edges()),
            Some(bits) => {
                if bits.len() != graph.num_edges() {
                    return Err(Error::mismatch("bond vector \"w\"", graph.num_edges(), bits.len()));
                }
                BondConfig(Gf2Vector::from_bits(&bits)?)
            }
        };
        Ok(GraphInput { graph, bonds })
    }

    fn of(graph: &Graph, bonds: Option<&BondConfig>) -> Self {
        Self {
            vertices: graph.num_vertices(),
            edges: graph.edges().iter().map(|&(i, j)| [i, j]).collect(),
            w: bonds.map(|b| b.bits().to_bits()),
        }
    }
}

/// A graph together with its bond vector (all ferromagnetic when `"w"` is absent).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    pub graph: Graph,
    pub bonds: BondConfig,
}

/// `{"vertices": N, "edges": [[i, j], ...], "w": [0|1, ...]}`.
pub fn parse_graph(text: &str) -> Result<GraphInput> {
    parse_json::<GraphFile>("graph file", text)?.build()
}

pub fn graph_to_json(graph: &Graph, bonds: Option<&BondConfig>) -> Value {
    serde_json::to_value(GraphFile::of(graph, bonds)).expect("graph serialises")
}

fn matrix_from_rows(rows: &[Vec<u8>], cols: usize) -> Result<Gf2Matrix> {
    Gf2Matrix::from_rows_with_cols(rows, cols)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QwgtFile {
    #[serde(rename = "A")]
    a: Vec<Vec<u8>>,
    #[serde(rename = "B")]
    b: Vec<Vec<u8>>,
    x: ScalarLiteral,
    y: ScalarLiteral,
}

/// A parsed QWGT instance, with `x` and `y` still as literals so the caller can pick the scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct QwgtInput {
    pub a: Gf2Matrix,
    pub b: Gf2Matrix,
    pub x: ScalarLiteral,
    pub y: ScalarLiteral,
}

/// `{"A": [[...]], "B": [[...]], "x": literal, "y": literal}`. `n` is taken from `B`.
pub fn parse_qwgt_instance(text: &str) -> Result<QwgtInput> {
    let file: QwgtFile = parse_json("QWGT instance", text)?;
    let n = file.b.len();
    Ok(QwgtInput {
        a: matrix_from_rows(&file.a, n)?,
        b: matrix_from_rows(&file.b, n)?,
        x: file.x,
        y: file.y,
    })
}

pub fn qwgt_instance_to_json(a: &Gf2Matrix, b: &Gf2Matrix, x: &ScalarLiteral, y: &ScalarLiteral) -> Value {
    serde_json::json!({
        "A": a.to_rows(),
        "B": b.to_rows(),
        "x": x.to_json(),
        "y": y.to_json(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Wrapped {
        #[serde(rename = "A")]
        a: Vec<Vec<u8>>,
    },
    Bare(Vec<Vec<u8>>),
}

/// A square 0/1 matrix, either bare `[[...]]` or wrapped as `{"A": [[...]]}`.
pub fn parse_matrix(text: &str) -> Result<Gf2Matrix> {
    let rows = match parse_json::<MatrixFile>("matrix file", text)? {
        MatrixFile::Wrapped { a } | MatrixFile::Bare(a) => a,
    };
    let cols = rows.first().map_or(0, Vec::len);
    matrix_from_rows(&rows, cols)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossingFile {
    lattice: GraphFile,
    crossings: Vec<i8>,
    orientation: Vec<Orientation>,
    #[serde(rename = "A")]
    a: ScalarLiteral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingInput {
    pub assignment: CrossingAssignment,
    pub a: KauffmanVariable,
}

/// `{"lattice": graph, "crossings": [±1, ...], "orientation": ["h"|"v", ...], "A": {"re", "im"}}`.
/// The crossing values are the raw diagram values; see [`CrossingAssignment::from_raw`].
pub fn parse_crossings(text: &str) -> Result<CrossingInput> {
    let file: CrossingFile = parse_json("crossing file", text)?;
    let lattice = file.lattice.build()?.graph;
    let assignment = CrossingAssignment::from_raw(lattice, &file.crossings, file.orientation)?;
    Ok(CrossingInput {
        assignment,
        a: KauffmanVariable::new(file.a.as_complex())?,
    })
}

pub fn crossings_to_json(cfg: &CrossingAssignment, a: &KauffmanVariable) -> Value {
    serde_json::json!({
        "lattice": graph_to_json(cfg.lattice(), None),
        "crossings": cfg.raw_signs(),
        "orientation": cfg.orientation(),
        "A": ScalarLiteral::Complex(a.value()).to_json(),
    })
}

/// Literal for a computed value.
pub fn literal_of<S: Scalar>(value: &S) -> ScalarLiteral {
    value.to_literal()
}

/// Natural logarithm of a value as a literal: real for positive reals, principal complex otherwise.
pub fn log_literal<S: Scalar>(value: &S) -> ScalarLiteral {
    match value.real_value() {
        Some(x) if x > 0.0 => ScalarLiteral::Real(x.ln()),
        _ => {
            let z: Complex64 = value.to_complex();
            ScalarLiteral::Complex(z.ln())
        }
    }
}

/// `{"Z", "logZ", "method", "kernel_dim", "terms_evaluated", "elapsed_ms"}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    #[serde(rename = "Z")]
    pub z: ScalarLiteral,
    #[serde(rename = "logZ")]
    pub log_z: ScalarLiteral,
    pub method: String,
    pub kernel_dim: Option<usize>,
    pub terms_evaluated: u128,
    pub elapsed_ms: Option<f64>,
}

impl ResultRecord {
    pub fn new<S: Scalar>(value: &S, method: &str, kernel_dim: Option<usize>, terms: u128) -> Self {
        Self {
            z: literal_of(value),
            log_z: log_literal(value),
            method: method.to_string(),
            kernel_dim,
            terms_evaluated: terms,
            elapsed_ms: None,
        }
    }

    pub fn with_elapsed_ms(mut self, ms: f64) -> Self {
        self.elapsed_ms = Some(ms);
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("result serialises")
    }
}

/// Exact rational from a literal when it has one (used for exact comparisons in reports).
pub fn rational_of(lit: &ScalarLiteral) -> Option<Rational> {
    lit.as_rational()
}

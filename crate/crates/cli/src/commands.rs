use std::path::{Path, PathBuf};

use clap::ValueEnum;
use qwgt_lab::gf2::{Gf2Matrix, KernelBasis};
use qwgt_lab::io::{
    graph_to_json, log_literal, parse_crossings, parse_graph, parse_matrix, parse_qwgt_instance, GraphInput,
    ResultRecord,
};
use qwgt_lab::knot::{kauffman_couplings, kauffman_q2_via_qwgt, potts_q2_direct, q_of_a, KauffmanEvaluation};
use qwgt_lab::qwgt::{bruteforce_counts, kernel_counts, kl_sign, qwgt_bound_check, QwgtInstance, ORACLE_MAX_BITS};
use qwgt_lab::spin_glass::{
    partition_direct, partition_direct_with_field, partition_double_transform, partition_kernel, partition_series,
    partition_with_field, qwgt_bridge, Evaluation, SpinGlass,
};
use qwgt_lab::{
    BondConfig, Complex64, Error, ErrorClass, FromLiteral, Gf2Vector, Rational, Scalar, ScalarKind, ScalarLiteral,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::report::{timed, RunReport, Timed};

/// Exit status for a failed `verify` run.
pub const EXIT_VERIFY_FAILED: u8 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => 2,
            ErrorClass::TooLarge => 3,
            ErrorClass::Domain => 4,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A command's JSON output and the exit status to finish with.
pub struct Output {
    pub json: Value,
    pub exit: u8,
}

impl From<Value> for Output {
    fn from(json: Value) -> Self {
        Self { json, exit: 0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub cap: u64,
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Fourier,
    Kernel,
    Series,
    Qwgt,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Direct, Method::Fourier, Method::Kernel, Method::Series, Method::Qwgt];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Fourier => "fourier",
            Method::Kernel => "kernel",
            Method::Series => "series",
            Method::Qwgt => "qwgt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QwgtMethod {
    Kernel,
    Bruteforce,
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn parse_literal(flag: &str, text: &str) -> CliResult<ScalarLiteral> {
    text.parse()
        .map_err(|e: Error| CliError::input(format!("{flag}: {e}")))
}

/// How the coupling was given on the command line.
#[derive(Debug, Clone)]
pub enum Coupling {
    BetaJ(ScalarLiteral),
    Lambda(ScalarLiteral),
}

impl Coupling {
    pub fn from_flags(beta_j: Option<&str>, lambda: Option<&str>) -> CliResult<Self> {
        match (beta_j, lambda) {
            (Some(b), None) => Ok(Coupling::BetaJ(parse_literal("--betaJ", b)?)),
            (None, Some(l)) => Ok(Coupling::Lambda(parse_literal("--lambda", l)?)),
            (None, None) => Err(CliError::input("one of --betaJ or --lambda is required")),
            (Some(_), Some(_)) => Err(CliError::input("--betaJ and --lambda are mutually exclusive")),
        }
    }
}

pub fn load_graph(path: &Path, w: Option<&str>) -> CliResult<GraphInput> {
    let mut input = parse_graph(&read_file(path)?).map_err(|e| located(path, e))?;
    if let Some(bits) = w {
        let bits = Gf2Vector::parse_bits(bits).map_err(|e| CliError::input(format!("--w: {e}")))?;
        if bits.len() != input.graph.num_edges() {
            return Err(CliError::input(format!(
                "--w has {} bits but the graph has {} edges",
                bits.len(),
                input.graph.num_edges()
            )));
        }
        input.bonds = BondConfig(bits);
    }
    Ok(input)
}

fn located(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

/// Options shared by the partition-function commands.
pub struct ZOptions {
    pub method: Method,
    pub order: Option<usize>,
    pub field: Option<Gf2Vector>,
}

pub fn parse_field(bits: Option<&str>, num_vertices: usize) -> CliResult<Option<Gf2Vector>> {
    let Some(bits) = bits else { return Ok(None) };
    let v = Gf2Vector::parse_bits(bits).map_err(|e| CliError::input(format!("--field: {e}")))?;
    if v.len() != num_vertices {
        return Err(CliError::input(format!(
            "--field has {} entries but the graph has {} vertices",
            v.len(),
            num_vertices
        )));
    }
    Ok(Some(v))
}

/// Evaluates `Z` with one method; the map carries method-specific extras.
fn evaluate<S: Scalar>(inst: &SpinGlass<S>, opts: &ZOptions, cap: u64) -> qwgt_lab::Result<(Evaluation<S>, Map<String, Value>)> {
    let mut extra = Map::new();
    if opts.field.is_some() && !matches!(opts.method, Method::Direct | Method::Kernel) {
        return Err(Error::Parse(format!(
            "--field is supported by the direct and kernel methods, not {}",
            opts.method.name()
        )));
    }
    let eval = match opts.method {
        Method::Direct => match &opts.field {
            Some(f) => partition_direct_with_field(inst, f)?,
            None => partition_direct(inst)?,
        },
        Method::Fourier => partition_double_transform(inst)?,
        Method::Kernel => match &opts.field {
            Some(f) => partition_with_field(inst, f, cap)?,
            None => partition_kernel(inst, cap)?,
        },
        Method::Series => {
            let m = inst.graph().num_edges();
            let order = opts.order.unwrap_or(m);
            let s = partition_series(inst, order, cap)?;
            let value = s.exact.clone().unwrap_or_else(|| s.partial_sums.last().cloned().unwrap_or_else(S::zero));
            extra.insert("order".into(), json!(order.min(m)));
            extra.insert("truncated".into(), json!(s.exact.is_none()));
            extra.insert("coefficients".into(), json!(s.coefficients));
            Evaluation {
                value,
                terms: s.terms,
                kernel_dim: None,
            }
        }
        Method::Qwgt => {
            let b = qwgt_bridge(inst, cap)?;
            let value = b.rhs.clone() * inst.prefactor()?;
            let dim = inst.graph().cycle_space_dimension();
            extra.insert(
                "bridge".into(),
                json!({
                    "lhs": b.lhs.to_literal(),
                    "rhs": b.rhs.to_literal(),
                    "lhs_method": b.lhs_method,
                    "discrepancy": b.lhs.discrepancy(&b.rhs),
                }),
            );
            Evaluation {
                value,
                terms: 1u128 << dim,
                kernel_dim: Some(dim),
            }
        }
    };
    Ok((eval, extra))
}

fn z_eval_with<S: Scalar>(inst: SpinGlass<S>, opts: &ZOptions, settings: Settings) -> CliResult<Value> {
    let (result, ms) = timed(settings.timings, || evaluate(&inst, opts, settings.cap));
    let (eval, extra) = result?;
    let mut record = ResultRecord::new(&eval.value, opts.method.name(), eval.kernel_dim, eval.terms);
    if let Some(ms) = ms {
        record = record.with_elapsed_ms(ms);
    }
    let mut out = record.to_json();
    if let Value::Object(map) = &mut out {
        map.insert("scalar".into(), json!(S::KIND));
        map.extend(extra);
    }
    Ok(out)
}

/// Dispatches on the literal kind: exact rationals for rational `λ`, complex
/// for complex literals, `f64` otherwise (a rational `βJ` is converted).
macro_rules! with_instance {
    ($input:expr, $coupling:expr, |$inst:ident| $body:expr) => {{
        let GraphInput { graph, bonds } = $input;
        match $coupling {
            Coupling::BetaJ(ScalarLiteral::Complex(z)) => {
                let $inst = SpinGlass::from_beta_j(graph, bonds, *z)?;
                $body
            }
            Coupling::BetaJ(lit) => {
                let x = f64::from_literal(lit)?;
                let $inst = SpinGlass::from_beta_j(graph, bonds, x)?;
                $body
            }
            Coupling::Lambda(ScalarLiteral::Rational(r)) => {
                let $inst = SpinGlass::from_lambda(graph, bonds, r.clone())?;
                $body
            }
            Coupling::Lambda(ScalarLiteral::Real(x)) => {
                let $inst = SpinGlass::from_lambda(graph, bonds, *x)?;
                $body
            }
            Coupling::Lambda(ScalarLiteral::Complex(z)) => {
                let $inst = SpinGlass::from_lambda(graph, bonds, *z)?;
                $body
            }
        }
    }};
}

pub fn z_eval(input: GraphInput, coupling: &Coupling, opts: &ZOptions, settings: Settings) -> CliResult<Output> {
    with_instance!(input, coupling, |inst| z_eval_with(inst, opts, settings)).map(Output::from)
}

fn series_with<S: Scalar>(inst: SpinGlass<S>, order: usize, settings: Settings) -> CliResult<Value> {
    let (result, ms) = timed(settings.timings, || partition_series(&inst, order, settings.cap));
    let s = result?;
    let partial: Vec<ScalarLiteral> = s.partial_sums.iter().map(Scalar::to_literal).collect();
    Ok(json!({
        "method": "series",
        "scalar": S::KIND,
        "order": s.coefficients.len() - 1,
        "coefficients": s.coefficients,
        "partial_sums": partial,
        "Z": s.exact.as_ref().map(Scalar::to_literal),
        "logZ": s.exact.as_ref().map(log_literal),
        "terms_evaluated": s.terms,
        "elapsed_ms": ms,
    }))
}

pub fn series(input: GraphInput, coupling: &Coupling, order: Option<usize>, settings: Settings) -> CliResult<Output> {
    let order = order.unwrap_or(input.graph.num_edges());
    with_instance!(input, coupling, |inst| series_with(inst, order, settings)).map(Output::from)
}

fn qwgt_eval_with<S: FromLiteral>(
    a: Gf2Matrix,
    b: Gf2Matrix,
    x: &ScalarLiteral,
    y: &ScalarLiteral,
    method: QwgtMethod,
    settings: Settings,
) -> CliResult<Value> {
    let inst = QwgtInstance::new(a, b, S::from_literal(x)?, S::from_literal(y)?)?;
    let (result, ms) = timed(settings.timings, || match method {
        QwgtMethod::Kernel => kernel_counts(inst.a(), inst.b(), settings.cap),
        QwgtMethod::Bruteforce => bruteforce_counts(inst.a(), inst.b()),
    });
    let counts = result?;
    let value = counts.evaluate(inst.x(), inst.y());
    Ok(json!({
        "S": value.to_literal(),
        "method": match method { QwgtMethod::Kernel => "kernel", QwgtMethod::Bruteforce => "bruteforce" },
        "scalar": S::KIND,
        "n": inst.n(),
        "kernel_dim": counts.kernel_dim,
        "terms_evaluated": counts.terms,
        "weight_counts": counts.counts,
        "bound_holds": qwgt_bound_check(&inst, &value),
        "elapsed_ms": ms,
    }))
}

pub fn qwgt_eval(path: &Path, method: QwgtMethod, settings: Settings) -> CliResult<Output> {
    let input = parse_qwgt_instance(&read_file(path)?).map_err(|e| located(path, e))?;
    let kind = input.x.kind().max(input.y.kind());
    let (a, b) = (input.a, input.b);
    match kind {
        ScalarKind::Rational => qwgt_eval_with::<Rational>(a, b, &input.x, &input.y, method, settings),
        ScalarKind::Real => qwgt_eval_with::<f64>(a, b, &input.x, &input.y, method, settings),
        ScalarKind::Complex => qwgt_eval_with::<Complex64>(a, b, &input.x, &input.y, method, settings),
    }
    .map(Output::from)
}

pub fn kl_sign_cmd(path: &Path, k: i64, l: i64) -> CliResult<Output> {
    let a = parse_matrix(&read_file(path)?).map_err(|e| located(path, e))?;
    if a.num_cols() > ORACLE_MAX_BITS {
        return Err(Error::OracleTooLarge {
            what: "KL sign evaluation",
            required_bits: a.num_cols(),
            limit_bits: ORACLE_MAX_BITS,
        }
        .into());
    }
    let v = kl_sign(&a, k, l)?;
    Ok(json!({
        "sign": v.sign,
        "value": ScalarLiteral::Rational(v.value),
        "promise_holds": v.promise_holds,
        "n": a.num_cols(),
        "k": k,
        "l": l,
    })
    .into())
}

fn kauffman_json(eval: &KauffmanEvaluation) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("Z_potts".into(), ScalarLiteral::Complex(eval.value).to_json());
    m.insert("q".into(), ScalarLiteral::Complex(eval.q).to_json());
    m.insert("lambda".into(), ScalarLiteral::Complex(eval.reduction.lambda).to_json());
    m.insert("w".into(), json!(eval.reduction.bonds.bits().to_bit_string()));
    m.insert("prefactor".into(), ScalarLiteral::Complex(eval.reduction.prefactor).to_json());
    m.insert("qwgt".into(), ScalarLiteral::Complex(eval.qwgt).to_json());
    m.insert("kernel_dim".into(), json!(eval.kernel_dim));
    m.insert("terms_evaluated".into(), json!(eval.terms));
    m.insert("bracket_up_to_constant".into(), json!(KauffmanEvaluation::BRACKET_UP_TO_CONSTANT));
    m
}

pub fn kauffman(path: &Path, settings: Settings) -> CliResult<Output> {
    let input = parse_crossings(&read_file(path)?).map_err(|e| located(path, e))?;
    let cfg = &input.assignment;
    let (result, via_ms) = timed(settings.timings, || kauffman_q2_via_qwgt(&input.a, cfg, settings.cap));
    let eval = result?;
    let mut out = kauffman_json(&eval);
    let mut results = vec![Timed {
        method: "qwgt",
        eval: Evaluation {
            value: eval.value,
            terms: u128::from(eval.terms),
            kernel_dim: Some(eval.kernel_dim),
        },
        elapsed_ms: via_ms,
    }];
    let g = cfg.lattice();
    if g.num_vertices() <= ORACLE_MAX_BITS {
        let (direct, ms) = timed(settings.timings, || potts_q2_direct(g, &kauffman_couplings(&input.a, cfg)));
        let direct = direct?;
        out.insert("direct".into(), ScalarLiteral::Complex(direct).to_json());
        results.push(Timed {
            method: "direct",
            eval: Evaluation {
                value: direct,
                terms: 1u128 << g.num_vertices(),
                kernel_dim: None,
            },
            elapsed_ms: ms,
        });
    } else {
        out.insert("direct".into(), Value::Null);
    }
    out.insert("A".into(), ScalarLiteral::Complex(input.a.value()).to_json());
    debug_assert_eq!(q_of_a(&input.a), eval.q);
    out.insert("report".into(), serde_json::to_value(RunReport::new(&results)).expect("report serialises"));
    Ok(Value::Object(out).into())
}

pub fn kernel_basis_cmd(path: &Path) -> CliResult<Output> {
    let text = read_file(path)?;
    let is_graph = serde_json::from_str::<Value>(&text)
        .map(|v| v.get("vertices").is_some())
        .unwrap_or(false);
    let (m, source) = if is_graph {
        (parse_graph(&text).map_err(|e| located(path, e))?.graph.incidence_matrix(), "graph incidence matrix")
    } else {
        (parse_matrix(&text).map_err(|e| located(path, e))?, "matrix")
    };
    let basis = KernelBasis::of(&m);
    let vectors: Vec<String> = basis.vectors().iter().map(Gf2Vector::to_bit_string).collect();
    Ok(json!({
        "source": source,
        "rows": m.num_rows(),
        "cols": m.num_cols(),
        "rank": m.rank(),
        "kernel_dim": basis.dim(),
        "basis": vectors,
    })
    .into())
}

pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub dump: PathBuf,
}

/// Runs every feasible method on seeded random `(w, βJ)` draws for a fixed graph.
pub fn verify(input: GraphInput, opts: &VerifyOptions, settings: Settings) -> CliResult<Output> {
    let graph = input.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trials = Vec::with_capacity(opts.trials);
    let mut skipped: Vec<Value> = Vec::new();
    let mut worst: Option<(usize, f64)> = None;
    for trial in 0..opts.trials {
        let bits: Vec<bool> = (0..graph.num_edges()).map(|_| rng.gen_bool(0.5)).collect();
        let bonds = BondConfig(Gf2Vector::from_bools(&bits));
        let beta_j: f64 = rng.gen_range(0.1..=2.0);
        let inst = SpinGlass::from_beta_j(graph.clone(), bonds.clone(), beta_j)?;
        let mut results = Vec::new();
        for method in Method::ALL {
            let opts = ZOptions {
                method,
                order: None,
                field: None,
            };
            let (result, ms) = timed(settings.timings, || evaluate(&inst, &opts, settings.cap));
            match result {
                Ok((eval, _)) => results.push(Timed {
                    method: method.name(),
                    eval,
                    elapsed_ms: ms,
                }),
                Err(e) if e.class() == ErrorClass::TooLarge => {
                    if trial == 0 {
                        skipped.push(json!({"method": method.name(), "reason": e.to_string()}));
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        if results.len() < 2 {
            return Err(CliError {
                code: 3,
                message: "fewer than two methods are feasible for this graph; nothing to compare".into(),
            });
        }
        let report = RunReport::new(&results);
        if worst.is_none_or(|(_, d)| report.max_discrepancy > d) {
            worst = Some((trial, report.max_discrepancy));
        }
        trials.push(json!({
            "trial": trial,
            "betaJ": ScalarLiteral::Real(beta_j),
            "w": bonds.bits().to_bit_string(),
            "report": report,
        }));
    }
    let max_discrepancy = worst.map_or(0.0, |(_, d)| d);
    let passed = max_discrepancy <= opts.tolerance;
    let mut out = json!({
        "command": "verify",
        "graph": graph_to_json(&graph, None),
        "trials": opts.trials,
        "seed": opts.seed,
        "tolerance": opts.tolerance,
        "skipped": skipped,
        "max_discrepancy": max_discrepancy,
        "worst_trial": worst.map(|(t, _)| t),
        "passed": passed,
        "results": trials,
    });
    if passed {
        return Ok(out.into());
    }
    let (t, _) = worst.expect("a failing run has a worst trial");
    let offending = &out["results"][t];
    let w = Gf2Vector::parse_bits(offending["w"].as_str().unwrap_or_default())?;
    let dump = json!({
        "instance": graph_to_json(&graph, Some(&BondConfig(w))),
        "betaJ": offending["betaJ"],
        "trial": t,
        "seed": opts.seed,
        "tolerance": opts.tolerance,
        "report": offending["report"],
    });
    write_file(&opts.dump, &(serde_json::to_string_pretty(&dump).expect("dump serialises") + "\n"))?;
    out["dumped_to"] = json!(opts.dump.display().to_string());
    Ok(Output {
        json: out,
        exit: EXIT_VERIFY_FAILED,
    })
}

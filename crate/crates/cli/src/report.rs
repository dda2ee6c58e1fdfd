use std::time::Instant;

use qwgt_lab::spin_glass::Evaluation;
use qwgt_lab::{Scalar, ScalarLiteral};
use serde::Serialize;

/// One method's value inside a [`RunReport`].
#[derive(Debug, Clone, Serialize)]
pub struct MethodResult {
    pub method: String,
    pub value: ScalarLiteral,
    pub kernel_dim: Option<usize>,
    pub terms_evaluated: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub a: String,
    pub b: String,
    /// `|a - b|`.
    pub absolute: f64,
    /// `|a - b| / max(|a|, |b|, 1)`.
    pub relative: f64,
}

/// Values of several methods on one instance with all pairwise discrepancies.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub methods: Vec<MethodResult>,
    pub discrepancies: Vec<Discrepancy>,
    pub max_discrepancy: f64,
}

/// A computed value with its name and optional timing.
pub struct Timed<S> {
    pub method: &'static str,
    pub eval: Evaluation<S>,
    pub elapsed_ms: Option<f64>,
}

/// Runs `f`, recording the wall-clock time only when `timings` is set.
pub fn timed<T>(timings: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    let ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
    (out, ms)
}

impl RunReport {
    pub fn new<S: Scalar>(results: &[Timed<S>]) -> Self {
        let mut discrepancies = Vec::new();
        let mut max_discrepancy = 0.0f64;
        for (i, a) in results.iter().enumerate() {
            for b in &results[i + 1..] {
                let relative = a.eval.value.discrepancy(&b.eval.value);
                max_discrepancy = max_discrepancy.max(relative);
                discrepancies.push(Discrepancy {
                    a: a.method.to_string(),
                    b: b.method.to_string(),
                    absolute: (a.eval.value.clone() - b.eval.value.clone()).modulus(),
                    relative,
                });
            }
        }
        let methods = results
            .iter()
            .map(|r| MethodResult {
                method: r.method.to_string(),
                value: r.eval.value.to_literal(),
                kernel_dim: r.eval.kernel_dim,
                terms_evaluated: r.eval.terms,
                elapsed_ms: r.elapsed_ms,
            })
            .collect();
        Self {
            methods,
            discrepancies,
            max_discrepancy,
        }
    }
}

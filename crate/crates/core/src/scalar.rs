//! Scalar fields the evaluators are generic over.
//!
//! Three instantiations are provided: exact rationals ([`Rational`]), `f64`
//! and [`Complex64`]. Exact rationals never round. The floating kinds carry
//! the usual IEEE-754 error model. Every evaluator here reduces to signed
//! integer term counts per weight; the floating kinds then contract those
//! counts against `x^k y^{n-k}` in exact dyadic arithmetic and round once, so
//! the only rounding left is in the inputs `x`, `y` themselves.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use num_complex::Complex64;
pub use num_rational::BigRational as Rational;

use crate::error::{Error, Result};

/// Relative tolerance used by the floating kinds when comparing against a bound.
pub const FLOAT_BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Real,
    Complex,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;

    /// |self| as a double.
    fn modulus(&self) -> f64;

    /// Square root: exact (or `None`) for rationals, principal branch for complex,
    /// `None` for negative reals.
    fn sqrt(&self) -> Option<Self>;

    /// The value as a real number, if this scalar lives on the real line.
    fn real_value(&self) -> Option<f64>;

    fn to_complex(&self) -> Complex64;

    fn to_literal(&self) -> ScalarLiteral;

    /// `|value| <= (|x| + |y|)^n`, exactly for rationals and to
    /// [`FLOAT_BOUND_TOL`] relative for the floating kinds.
    fn magnitude_bound_holds(value: &Self, x: &Self, y: &Self, n: usize) -> bool;

    fn pow(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }

    /// `Σ_k counts[k] x^k y^{n-k}` with `n = counts.len() - 1`.
    fn weighted_power_sum(counts: &[i64], x: &Self, y: &Self) -> Self {
        pairwise_power_sum(counts, x, y)
    }

    /// `|a - b| / max(|a|, |b|, 1)`.
    fn discrepancy(&self, other: &Self) -> f64 {
        let diff = (self.clone() - other.clone()).modulus();
        diff / self.modulus().max(other.modulus()).max(1.0)
    }
}

/// Scalars with exponential, logarithm and hyperbolic functions.
pub trait Analytic: Scalar {
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn cosh(&self) -> Self;
    fn tanh(&self) -> Self;
}

/// Fixed-shape pairwise summation; the result depends only on the slice contents.
pub fn pairwise_sum<S: Scalar>(terms: &[S]) -> S {
    match terms.len() {
        0 => S::zero(),
        1 => terms[0].clone(),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

fn pairwise_power_sum<S: Scalar>(counts: &[i64], x: &S, y: &S) -> S {
    let n = counts.len().saturating_sub(1);
    let mut xp = Vec::with_capacity(n + 1);
    let mut yp = Vec::with_capacity(n + 1);
    xp.push(S::one());
    yp.push(S::one());
    for k in 1..=n {
        xp.push(xp[k - 1].clone() * x.clone());
        yp.push(yp[k - 1].clone() * y.clone());
    }
    let terms: Vec<S> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| S::from_i64(c) * xp[k].clone() * yp[n - k].clone())
        .collect();
    pairwise_sum(&terms)
}

/// A complex number with exact rational parts.
pub(crate) type ExactComplex = (Rational, Rational);

/// Finite doubles are dyadic rationals, so this conversion is exact.
pub(crate) fn exact_complex(z: Complex64) -> Option<ExactComplex> {
    Some((Rational::from_float(z.re)?, Rational::from_float(z.im)?))
}

pub(crate) fn exact_mul(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

pub(crate) fn exact_powers(z: &ExactComplex, n: usize) -> Vec<ExactComplex> {
    let mut powers = vec![(Rational::one(), Rational::zero())];
    for k in 1..=n {
        let next = exact_mul(&powers[k - 1], z);
        powers.push(next);
    }
    powers
}

/// Rounds once to the nearest double in each part.
pub(crate) fn exact_to_complex(z: &ExactComplex) -> Option<Complex64> {
    Some(Complex64::new(z.0.to_f64()?, z.1.to_f64()?))
}

fn exact_complex_power_sum(counts: &[i64], x: &ExactComplex, y: &ExactComplex) -> ExactComplex {
    let n = counts.len().saturating_sub(1);
    let (xp, yp) = (exact_powers(x, n), exact_powers(y, n));
    let mut total = (Rational::zero(), Rational::zero());
    for (k, &c) in counts.iter().enumerate().filter(|(_, &c)| c != 0) {
        let t = exact_mul(&xp[k], &yp[n - k]);
        let c = Rational::from_integer(BigInt::from(c));
        total.0 += &c * t.0;
        total.1 += c * t.1;
    }
    total
}

fn float_bound_holds(value: f64, bound: f64) -> bool {
    value <= bound + FLOAT_BOUND_TOL * bound.max(1.0)
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Real;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn real_value(&self) -> Option<f64> {
        Some(*self)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn to_literal(&self) -> ScalarLiteral {
        ScalarLiteral::Real(*self)
    }

    fn magnitude_bound_holds(value: &Self, x: &Self, y: &Self, n: usize) -> bool {
        float_bound_holds(value.abs(), (x.abs() + y.abs()).powi(n as i32))
    }

    fn weighted_power_sum(counts: &[i64], x: &Self, y: &Self) -> Self {
        match (Rational::from_float(*x), Rational::from_float(*y)) {
            (Some(xr), Some(yr)) => Rational::weighted_power_sum(counts, &xr, &yr)
                .to_f64()
                .unwrap_or_else(|| pairwise_power_sum(counts, x, y)),
            _ => pairwise_power_sum(counts, x, y),
        }
    }
}

impl Analytic for f64 {
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::Complex;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }

    fn real_value(&self) -> Option<f64> {
        None
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn to_literal(&self) -> ScalarLiteral {
        ScalarLiteral::Complex(*self)
    }

    fn magnitude_bound_holds(value: &Self, x: &Self, y: &Self, n: usize) -> bool {
        float_bound_holds(value.norm(), (x.norm() + y.norm()).powi(n as i32))
    }

    fn weighted_power_sum(counts: &[i64], x: &Self, y: &Self) -> Self {
        let exact = exact_complex(*x)
            .zip(exact_complex(*y))
            .and_then(|(xr, yr)| exact_to_complex(&exact_complex_power_sum(counts, &xr, &yr)));
        exact.unwrap_or_else(|| pairwise_power_sum(counts, x, y))
    }
}

impl Analytic for Complex64 {
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }
    fn cosh(&self) -> Self {
        Complex64::cosh(*self)
    }
    fn tanh(&self) -> Self {
        Complex64::tanh(*self)
    }
}

fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn sqrt(&self) -> Option<Self> {
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn real_value(&self) -> Option<f64> {
        self.to_f64()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_literal(&self) -> ScalarLiteral {
        ScalarLiteral::Rational(self.clone())
    }

    fn magnitude_bound_holds(value: &Self, x: &Self, y: &Self, n: usize) -> bool {
        value.abs() <= num_traits::pow(x.abs() + y.abs(), n)
    }
}

/// A scalar as it appears in input and output files: `"p/q"`, a decimal
/// string, or `{"re": .., "im": ..}`.
#[derive(Clone, PartialEq)]
pub enum ScalarLiteral {
    Rational(Rational),
    Real(f64),
    Complex(Complex64),
}

impl ScalarLiteral {
    pub fn kind(&self) -> ScalarKind {
        match self {
            ScalarLiteral::Rational(_) => ScalarKind::Rational,
            ScalarLiteral::Real(_) => ScalarKind::Real,
            ScalarLiteral::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ScalarLiteral::Rational(r) => Some(r.clone()),
            _ => None,
        }
    }

    /// Real value; fails for a complex literal with nonzero imaginary part.
    pub fn as_real(&self) -> Option<f64> {
        match self {
            ScalarLiteral::Rational(r) => r.to_f64(),
            ScalarLiteral::Real(x) => Some(*x),
            ScalarLiteral::Complex(z) if z.im == 0.0 => Some(z.re),
            ScalarLiteral::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        match self {
            ScalarLiteral::Rational(r) => r.to_complex(),
            ScalarLiteral::Real(x) => Complex64::new(*x, 0.0),
            ScalarLiteral::Complex(z) => *z,
        }
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        use serde_json::Value;
        match value {
            Value::String(s) => s.parse(),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(ScalarLiteral::Rational(Rational::from_integer(i.into())))
                } else {
                    n.as_f64()
                        .map(ScalarLiteral::Real)
                        .ok_or_else(|| Error::Parse(format!("unsupported number {n}")))
                }
            }
            Value::Object(map) => {
                let part = |key: &str| -> Result<f64> {
                    let v = map
                        .get(key)
                        .ok_or_else(|| Error::Parse(format!("complex literal missing \"{key}\"")))?;
                    ScalarLiteral::from_json(v)?
                        .as_real()
                        .ok_or_else(|| Error::Parse(format!("\"{key}\" must be real")))
                };
                Ok(ScalarLiteral::Complex(Complex64::new(part("re")?, part("im")?)))
            }
            other => Err(Error::Parse(format!("expected a scalar literal, got {other}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ScalarLiteral::Complex(z) => serde_json::json!({
                "re": format_real(z.re),
                "im": format_real(z.im),
            }),
            other => serde_json::Value::String(other.to_string()),
        }
    }
}

/// Shortest round-trip decimal form.
pub fn format_real(x: f64) -> String {
    format!("{x:?}")
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ScalarLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarLiteral::Rational(r) => f.write_str(&format_rational(r)),
            ScalarLiteral::Real(x) => f.write_str(&format_real(*x)),
            ScalarLiteral::Complex(z) => {
                write!(f, "{{\"re\":\"{}\",\"im\":\"{}\"}}", format_real(z.re), format_real(z.im))
            }
        }
    }
}

impl Debug for ScalarLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ScalarLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(format!("scalar {s:?}: {e}")))?;
            return ScalarLiteral::from_json(&v);
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(ScalarLiteral::Rational(Rational::new(p, q)));
        }
        if let Ok(i) = s.parse::<BigInt>() {
            return Ok(ScalarLiteral::Rational(Rational::from_integer(i)));
        }
        s.parse::<f64>()
            .map(ScalarLiteral::Real)
            .map_err(|_| Error::Parse(format!("not a scalar literal: {s:?}")))
    }
}

impl Serialize for ScalarLiteral {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScalarLiteral {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        ScalarLiteral::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Conversion from a literal into a concrete scalar field.
pub trait FromLiteral: Scalar {
    fn from_literal(lit: &ScalarLiteral) -> Result<Self>;
}

impl FromLiteral for Rational {
    fn from_literal(lit: &ScalarLiteral) -> Result<Self> {
        lit.as_rational().ok_or_else(|| Error::Inexact {
            reason: format!("{lit} is not a rational literal"),
        })
    }
}

impl FromLiteral for f64 {
    fn from_literal(lit: &ScalarLiteral) -> Result<Self> {
        lit.as_real()
            .ok_or_else(|| Error::Parse(format!("{lit} is not a real value")))
    }
}

impl FromLiteral for Complex64 {
    fn from_literal(lit: &ScalarLiteral) -> Result<Self> {
        Ok(lit.as_complex())
    }
}

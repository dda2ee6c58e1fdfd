//! Quadratically signed weight enumerators
//! `S(A, B, x, y) = Σ_{b : Ab = 0} (-1)^{b^T B b} x^{|b|} y^{n-|b|}`.
//!
//! Both evaluation paths first reduce the sum to signed term counts per
//! Hamming weight (exact integers) and then contract them against a power
//! table `x^k y^{n-k}`. The brute-force path scans all of `{0,1}^n`; the
//! kernel path walks only the span of a kernel basis.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector, KernelBasis, KernelEnumerator, SignSource};
use crate::scalar::{Rational, Scalar};

/// Largest `n` the brute-force oracle accepts.
pub const ORACLE_MAX_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct QwgtInstance<S> {
    a: Gf2Matrix,
    b: Gf2Matrix,
    x: S,
    y: S,
}

impl<S: Scalar> QwgtInstance<S> {
    pub fn new(a: Gf2Matrix, b: Gf2Matrix, x: S, y: S) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSquare {
                rows: b.num_rows(),
                cols: b.num_cols(),
            });
        }
        if b.num_cols() != a.num_cols() {
            return Err(Error::mismatch("B dimension vs columns of A", a.num_cols(), b.num_cols()));
        }
        Ok(Self { a, b, x, y })
    }

    pub fn a(&self) -> &Gf2Matrix {
        &self.a
    }

    pub fn b(&self) -> &Gf2Matrix {
        &self.b
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn y(&self) -> &S {
        &self.y
    }

    /// Length of the summation vectors `b`.
    pub fn n(&self) -> usize {
        self.a.num_cols()
    }
}

/// Signed term counts: `counts[k] = Σ_{b : Ab = 0, |b| = k} (-1)^{sign(b)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedWeightCounts {
    pub counts: Vec<i64>,
    pub kernel_dim: usize,
    pub terms: u64,
}

impl SignedWeightCounts {
    /// `Σ_k counts[k] x^k y^{n-k}` with `n = counts.len() - 1`.
    pub fn evaluate<S: Scalar>(&self, x: &S, y: &S) -> S {
        contract_counts(&self.counts, x, y)
    }
}

/// `Σ_k counts[k] x^k y^{n-k}`; see [`Scalar::weighted_power_sum`].
pub fn contract_counts<S: Scalar>(counts: &[i64], x: &S, y: &S) -> S {
    S::weighted_power_sum(counts, x, y)
}

pub use crate::scalar::pairwise_sum;

/// Signed counts by exhaustive scan of `{0,1}^n`, everything recomputed per vector.
pub fn bruteforce_counts(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<SignedWeightCounts> {
    let n = a.num_cols();
    if n > ORACLE_MAX_BITS {
        return Err(Error::OracleTooLarge {
            what: "brute-force QWGT",
            required_bits: n,
            limit_bits: ORACLE_MAX_BITS,
        });
    }
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.num_rows(),
            cols: b.num_cols(),
        });
    }
    if b.num_cols() != n {
        return Err(Error::mismatch("B dimension vs columns of A", n, b.num_cols()));
    }
    let mut counts = vec![0i64; n + 1];
    for word in 0u64..(1u64 << n) {
        let v = Gf2Vector::from_word(word, n);
        if !a.matvec(&v)?.is_zero() {
            continue;
        }
        counts[v.weight()] += if b.quadratic_form(&v)? { -1 } else { 1 };
    }
    Ok(SignedWeightCounts {
        counts,
        kernel_dim: n - a.rank(),
        terms: 1u64 << n,
    })
}

/// Signed counts by Gray-code enumeration of the kernel of `a`.
pub fn kernel_counts(a: &Gf2Matrix, b: &Gf2Matrix, cap: u64) -> Result<SignedWeightCounts> {
    let basis = KernelBasis::of(a);
    let enumerator = KernelEnumerator::new(&basis).with_form(b)?.with_cap(cap);
    let counts = enumerator.signed_weight_counts(SignSource::Form)?;
    Ok(SignedWeightCounts {
        counts,
        kernel_dim: basis.dim(),
        terms: enumerator.total()?,
    })
}

/// The oracle path: exact sum over all `2^n` vectors. Requires `n <= 24`.
pub fn qwgt_bruteforce<S: Scalar>(inst: &QwgtInstance<S>) -> Result<S> {
    Ok(bruteforce_counts(&inst.a, &inst.b)?.evaluate(&inst.x, &inst.y))
}

/// Kernel-enumeration path, limited to `cap` kernel elements.
pub fn qwgt_kernel<S: Scalar>(inst: &QwgtInstance<S>, cap: u64) -> Result<S> {
    Ok(kernel_counts(&inst.a, &inst.b, cap)?.evaluate(&inst.x, &inst.y))
}

/// `|value| <= (|x| + |y|)^n` within the scalar's tolerance.
pub fn qwgt_bound_check<S: Scalar>(inst: &QwgtInstance<S>, value: &S) -> bool {
    S::magnitude_bound_holds(value, &inst.x, &inst.y, inst.n())
}

pub fn ltr(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    m.ltr()
}

pub fn diag_of(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    m.diag_of()
}

pub fn dg(w: &Gf2Vector) -> Gf2Matrix {
    Gf2Matrix::dg(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
}

impl Sign {
    pub fn of(value: &Rational) -> Self {
        if value.is_zero() {
            Sign::Zero
        } else if value.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KlVerdict {
    pub sign: Sign,
    pub value: Rational,
    /// `|S| >= (k^2 + l^2)^{n/2} / 2`, decided exactly as `4 S^2 >= (k^2 + l^2)^n`.
    pub promise_holds: bool,
}

/// Sign of `S(A, ltr(A), k, l)` for square `A` with unit diagonal, plus the promise check.
pub fn kl_sign(a: &Gf2Matrix, k: i64, l: i64) -> Result<KlVerdict> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.num_rows(),
            cols: a.num_cols(),
        });
    }
    if let Some(index) = (0..a.num_cols()).find(|&i| !a.get(i, i)) {
        return Err(Error::DiagonalNotIdentity { index });
    }
    if k <= 0 {
        return Err(Error::NonPositive { name: "k", value: k });
    }
    if l <= 0 {
        return Err(Error::NonPositive { name: "l", value: l });
    }
    let n = a.num_cols();
    let k = Rational::from_integer(BigInt::from(k));
    let l = Rational::from_integer(BigInt::from(l));
    let base = k.clone() * k.clone() + l.clone() * l.clone();
    let inst = QwgtInstance::new(a.clone(), a.ltr()?, k, l)?;
    let value = qwgt_bruteforce(&inst)?;
    let four = Rational::from_integer(BigInt::from(4));
    let promise_holds = four * value.clone() * value.clone() >= num_traits::pow(base, n);
    Ok(KlVerdict {
        sign: Sign::of(&value),
        value,
        promise_holds,
    })
}

//! Exact evaluation of quadratically signed weight enumerators (QWGTs) over
//! GF(2), and of ±J Ising spin-glass partition functions through them.
//!
//! The QWGT is
//! `S(A, B, x, y) = Σ_{b : Ab = 0} (-1)^{bᵀBb} x^{|b|} y^{n-|b|}`, and the
//! partition function of a ±J model on a graph with incidence matrix `A_inc`
//! and bond vector `w` satisfies
//! `(1-λ²)^{|E|/2} / 2^{|V|} · Z(w) = S(A_inc, dg(w), λ, 1)` with `λ = tanh βJ`.
//!
//! Every evaluator here reduces to exact integer counts per Hamming weight
//! and only then touches the scalar field, so results are identical for any
//! number of worker threads.

pub mod error;
pub mod gf2;
pub mod graph;
pub mod io;
pub mod knot;
pub mod qwgt;
pub mod scalar;
pub mod spin_glass;

pub use error::{Error, ErrorClass, Result};
pub use gf2::{Gf2Matrix, Gf2Vector, KernelBasis, DEFAULT_CAP};
pub use graph::{BondConfig, Graph};
pub use qwgt::{kl_sign, qwgt_bruteforce, qwgt_kernel, KlVerdict, QwgtInstance, Sign};
pub use scalar::{Analytic, Complex64, FromLiteral, Rational, Scalar, ScalarKind, ScalarLiteral};
pub use spin_glass::{Evaluation, SpinConfig, SpinGlass};

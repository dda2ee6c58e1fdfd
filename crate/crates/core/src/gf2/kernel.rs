//! Kernel bases and Gray-code enumeration of kernel elements.
//!
//! Elements of the kernel are visited in reflected-binary Gray-code order over
//! the basis coefficients, so consecutive elements differ by one basis vector.
//! Along the walk the enumerator maintains the Hamming weight `|b|`, the
//! parity `b·w` against a registered vector `w`, and the quadratic form bit
//! `b^T B b` against a registered square matrix `B`. Flipping coefficient `j`
//! updates the form bit by `k_j^T B k_j + b^T (B + B^T) k_j`; the cross term is
//! read off a precomputed `dim x dim` coefficient-space matrix, so each step
//! costs one XOR and one popcount over the packed words of `b`.

use rayon::prelude::*;

use super::matrix::Gf2Matrix;
use super::vector::Gf2Vector;
use crate::error::{Error, Result};

/// Default limit on the number of kernel elements a single enumeration may visit.
pub const DEFAULT_CAP: u64 = 1 << 28;

/// Parallel enumeration splits the coefficient space into Gray-code segments of this size.
pub const SEGMENT_BITS: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    ambient_dim: usize,
    vectors: Vec<Gf2Vector>,
}

impl KernelBasis {
    /// Basis of `{v : M v = 0}`, one vector per free column of the reduced echelon form.
    pub fn of(m: &Gf2Matrix) -> Self {
        let n = m.num_cols();
        let (reduced, pivots) = m.row_reduce();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors = (0..n)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Gf2Vector::unit(n, free);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.get(r, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Self {
            ambient_dim: n,
            vectors,
        }
    }

    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Gf2Vector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::mismatch("kernel basis vector", ambient_dim, v.len()));
        }
        Ok(Self {
            ambient_dim,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[Gf2Vector] {
        &self.vectors
    }

    /// Number of elements in the span, saturating at `u128::MAX`.
    pub fn span_size(&self) -> u128 {
        1u128.checked_shl(self.dim() as u32).unwrap_or(u128::MAX)
    }

    /// The combination selected by the low `dim` bits of `coefficients`.
    pub fn combination(&self, coefficients: u64) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.ambient_dim);
        for (j, k) in self.vectors.iter().enumerate() {
            if j < 64 && (coefficients >> j) & 1 == 1 {
                v.xor_assign(k);
            }
        }
        v
    }
}

pub fn kernel_basis(m: &Gf2Matrix) -> KernelBasis {
    KernelBasis::of(m)
}

/// Which parity bit signs a term in [`KernelEnumerator::signed_weight_counts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignSource {
    /// Every term counts `+1`.
    Unsigned,
    /// `(-1)^{b·w}` for the registered `w`.
    Dot,
    /// `(-1)^{b^T B b}` for the registered `B`.
    Form,
}

/// What the visitor sees at each kernel element.
#[derive(Debug)]
pub struct KernelStep<'a> {
    /// Position in Gray-code order.
    pub index: u64,
    /// Basis coefficients of the current element.
    pub coefficients: u64,
    pub vector: &'a Gf2Vector,
    pub weight: usize,
    /// `b·w` for the registered `w` (false when none is registered).
    pub dot: bool,
    /// `b^T B b` for the registered `B` (false when none is registered).
    pub form: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub dim: usize,
    pub visited: u64,
}

pub struct KernelEnumerator<'a> {
    basis: &'a KernelBasis,
    dot_with: Option<&'a Gf2Vector>,
    form: Option<&'a Gf2Matrix>,
    cap: u64,
}

/// Per-basis-vector quantities shared by all walkers.
struct Prepared<'a> {
    basis: &'a [Gf2Vector],
    dot_with: Option<&'a Gf2Vector>,
    form: Option<&'a Gf2Matrix>,
    dot_bits: u64,
    form_bits: u64,
    cross: Vec<u64>,
}

struct Walker<'p, 'a> {
    prep: &'p Prepared<'a>,
    index: u64,
    coefficients: u64,
    vector: Gf2Vector,
    weight: usize,
    dot: bool,
    form: bool,
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

impl<'a> Prepared<'a> {
    fn new(
        basis: &'a KernelBasis,
        dot_with: Option<&'a Gf2Vector>,
        form: Option<&'a Gf2Matrix>,
    ) -> Self {
        let vectors = basis.vectors();
        let mut dot_bits = 0u64;
        let mut form_bits = 0u64;
        let mut cross = vec![0u64; vectors.len()];
        if let Some(w) = dot_with {
            for (j, k) in vectors.iter().enumerate() {
                if k.dot_unchecked(w) {
                    dot_bits |= 1 << j;
                }
            }
        }
        if let Some(b) = form {
            let polar = b.symmetrized().expect("form matrix validated as square");
            let images: Vec<Gf2Vector> = vectors
                .iter()
                .map(|k| polar.matvec(k).expect("form matrix validated against basis"))
                .collect();
            for (j, k) in vectors.iter().enumerate() {
                if b.quadratic_form(k).expect("validated") {
                    form_bits |= 1 << j;
                }
                for (i, ki) in vectors.iter().enumerate() {
                    if ki.dot_unchecked(&images[j]) {
                        cross[j] |= 1 << i;
                    }
                }
            }
        }
        Self {
            basis: vectors,
            dot_with,
            form,
            dot_bits,
            form_bits,
            cross,
        }
    }
}

impl<'p, 'a> Walker<'p, 'a> {
    /// Positions the walker at Gray-code index `index`, computing everything from scratch.
    fn start(prep: &'p Prepared<'a>, ambient_dim: usize, index: u64) -> Self {
        let coefficients = gray(index);
        let mut vector = Gf2Vector::zeros(ambient_dim);
        for (j, k) in prep.basis.iter().enumerate() {
            if (coefficients >> j) & 1 == 1 {
                vector.xor_assign(k);
            }
        }
        let dot = prep.dot_with.is_some_and(|w| vector.dot_unchecked(w));
        let form = prep
            .form
            .is_some_and(|b| b.quadratic_form(&vector).expect("validated"));
        Self {
            prep,
            index,
            coefficients,
            weight: vector.weight(),
            vector,
            dot,
            form,
        }
    }

    fn advance(&mut self) {
        let j = (self.index + 1).trailing_zeros() as usize;
        let bit = 1u64 << j;
        if self.prep.form.is_some() {
            let cross = (self.coefficients & self.prep.cross[j]).count_ones() & 1 == 1;
            self.form ^= cross ^ (self.prep.form_bits & bit != 0);
        }
        self.dot ^= self.prep.dot_bits & bit != 0;
        self.vector.xor_assign(&self.prep.basis[j]);
        self.weight = self.vector.weight();
        self.coefficients ^= bit;
        self.index += 1;
    }

    fn step(&self) -> KernelStep<'_> {
        KernelStep {
            index: self.index,
            coefficients: self.coefficients,
            vector: &self.vector,
            weight: self.weight,
            dot: self.dot,
            form: self.form,
        }
    }

    fn sign(&self, source: SignSource) -> bool {
        match source {
            SignSource::Unsigned => false,
            SignSource::Dot => self.dot,
            SignSource::Form => self.form,
        }
    }
}

impl<'a> KernelEnumerator<'a> {
    pub fn new(basis: &'a KernelBasis) -> Self {
        Self {
            basis,
            dot_with: None,
            form: None,
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_dot(mut self, w: &'a Gf2Vector) -> Result<Self> {
        if w.len() != self.basis.ambient_dim() {
            return Err(Error::mismatch("registered parity vector", self.basis.ambient_dim(), w.len()));
        }
        self.dot_with = Some(w);
        Ok(self)
    }

    pub fn with_form(mut self, b: &'a Gf2Matrix) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSquare {
                rows: b.num_rows(),
                cols: b.num_cols(),
            });
        }
        if b.num_cols() != self.basis.ambient_dim() {
            return Err(Error::mismatch("registered form matrix", self.basis.ambient_dim(), b.num_cols()));
        }
        self.form = Some(b);
        Ok(self)
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// Number of elements the enumeration will visit, or the cap error.
    pub fn total(&self) -> Result<u64> {
        let required = self.basis.span_size();
        if self.basis.dim() >= 64 || required > u128::from(self.cap) {
            return Err(Error::CapExceeded {
                what: "kernel enumeration",
                required,
                cap: self.cap,
            });
        }
        Ok(required as u64)
    }

    /// Visits every kernel element once, in Gray-code order.
    pub fn for_each<F>(&self, mut visitor: F) -> Result<EnumerationSummary>
    where
        F: FnMut(&KernelStep<'_>),
    {
        let total = self.total()?;
        let prep = Prepared::new(self.basis, self.dot_with, self.form);
        let mut walker = Walker::start(&prep, self.basis.ambient_dim(), 0);
        visitor(&walker.step());
        for _ in 1..total {
            walker.advance();
            visitor(&walker.step());
        }
        Ok(EnumerationSummary {
            dim: self.basis.dim(),
            visited: total,
        })
    }

    /// Signed term counts by Hamming weight: entry `k` is the sum of `(-1)^{sign(b)}`
    /// over kernel elements of weight `k`. Segments are walked in parallel; the
    /// reduction is over integers, so the result does not depend on the thread count.
    pub fn signed_weight_counts(&self, source: SignSource) -> Result<Vec<i64>> {
        let total = self.total()?;
        match source {
            SignSource::Dot if self.dot_with.is_none() => {
                return Err(Error::Parse("no parity vector registered for Dot signs".into()))
            }
            SignSource::Form if self.form.is_none() => {
                return Err(Error::Parse("no form matrix registered for Form signs".into()))
            }
            _ => {}
        }
        let n = self.basis.ambient_dim();
        let prep = Prepared::new(self.basis, self.dot_with, self.form);
        let segment = 1u64 << SEGMENT_BITS;
        let segments = total.div_ceil(segment);
        let counts = (0..segments)
            .into_par_iter()
            .map(|s| {
                let start = s * segment;
                let end = (start + segment).min(total);
                let mut counts = vec![0i64; n + 1];
                let mut walker = Walker::start(&prep, n, start);
                loop {
                    counts[walker.weight] += if walker.sign(source) { -1 } else { 1 };
                    if walker.index + 1 >= end {
                        break;
                    }
                    walker.advance();
                }
                counts
            })
            .reduce(
                || vec![0i64; n + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(counts)
    }
}

/// Convenience wrapper: visit every element of `basis`'s span.
pub fn enumerate_kernel<F>(basis: &KernelBasis, cap: u64, visitor: F) -> Result<EnumerationSummary>
where
    F: FnMut(&KernelStep<'_>),
{
    KernelEnumerator::new(basis).with_cap(cap).for_each(visitor)
}

//! Binary linear algebra over packed machine words.

mod kernel;
mod matrix;
mod vector;

pub use kernel::{
    enumerate_kernel, kernel_basis, EnumerationSummary, KernelBasis, KernelEnumerator, KernelStep,
    SignSource, DEFAULT_CAP, SEGMENT_BITS,
};
pub use matrix::Gf2Matrix;
pub use vector::Gf2Vector;

use std::fmt;

use super::vector::Gf2Vector;
use crate::error::{Error, Result};

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<Gf2Vector>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![Gf2Vector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. A matrix with no rows has zero columns
    /// unless built with [`Gf2Matrix::from_rows_with_cols`].
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: &[Vec<u8>], cols: usize) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::mismatch("matrix row length", cols, r.len()));
                }
                Gf2Vector::from_bits(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows, cols })
    }

    pub fn from_row_vectors(rows: Vec<Gf2Vector>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::mismatch("matrix row length", cols, r.len()));
        }
        Ok(Self { rows, cols })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &Gf2Vector {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_indices() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M v` over GF(2).
    pub fn matvec(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if v.len() != self.cols {
            return Err(Error::mismatch("matvec", self.cols, v.len()));
        }
        let mut out = Gf2Vector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot_unchecked(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `M^T v` over GF(2): the XOR of the rows selected by `v`.
    pub fn transpose_matvec(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if v.len() != self.rows.len() {
            return Err(Error::mismatch("transposed matvec", self.rows.len(), v.len()));
        }
        let mut out = Gf2Vector::zeros(self.cols);
        for i in v.ones_indices() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// `b^T M b` mod 2.
    pub fn quadratic_form(&self, b: &Gf2Vector) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows.len(),
                cols: self.cols,
            });
        }
        if b.len() != self.cols {
            return Err(Error::mismatch("quadratic form", self.cols, b.len()));
        }
        Ok(b
            .ones_indices()
            .fold(false, |acc, i| acc ^ self.rows[i].dot_unchecked(b)))
    }

    /// `M + M^T`: the polar (bilinear) form of `b^T M b`.
    pub fn symmetrized(&self) -> Result<Gf2Matrix> {
        self.require_square()?;
        let mut out = self.transpose();
        for (o, r) in out.rows.iter_mut().zip(&self.rows) {
            o.xor_assign(r);
        }
        Ok(out)
    }

    /// Strictly lower triangular part (entries on or above the diagonal zeroed).
    pub fn ltr(&self) -> Result<Gf2Matrix> {
        self.require_square()?;
        let mut out = Gf2Matrix::zeros(self.cols, self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_indices().take_while(|&c| c < r) {
                out.set(r, c, true);
            }
        }
        Ok(out)
    }

    /// Diagonal part.
    pub fn diag_of(&self) -> Result<Gf2Matrix> {
        self.require_square()?;
        let mut out = Gf2Matrix::zeros(self.cols, self.cols);
        for i in 0..self.cols {
            if self.get(i, i) {
                out.set(i, i, true);
            }
        }
        Ok(out)
    }

    /// Square matrix with `w` on the diagonal.
    pub fn dg(w: &Gf2Vector) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(w.len(), w.len());
        for i in w.ones_indices() {
            out.set(i, i, true);
        }
        out
    }

    pub fn diagonal(&self) -> Result<Gf2Vector> {
        self.require_square()?;
        let mut d = Gf2Vector::zeros(self.cols);
        for i in 0..self.cols {
            if self.get(i, i) {
                d.set(i, true);
            }
        }
        Ok(d)
    }

    /// Reduced row echelon form; returns the reduced matrix and the pivot column of each
    /// nonzero row. Leftmost-pivot Gaussian elimination.
    pub fn row_reduce(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == m.rows.len() {
                break;
            }
            let Some(p) = (next..m.rows.len()).find(|&r| m.rows[r].get(c)) else {
                continue;
            };
            m.rows.swap(next, p);
            let pivot_row = m.rows[next].clone();
            for (r, row) in m.rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(Gf2Vector::to_bits).collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows.len(),
                cols: self.cols,
            })
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Gf2Matrix {
        Gf2Matrix::from_rows(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]).unwrap()
    }

    fn v(s: &str) -> Gf2Vector {
        Gf2Vector::parse_bits(s).unwrap()
    }

    #[test]
    fn matvec_examples() {
        let a = triangle();
        assert_eq!(a.matvec(&v("111")).unwrap(), v("000"));
        assert_eq!(a.matvec(&v("100")).unwrap(), v("110"));
        assert_eq!(a.matvec(&v("000")).unwrap(), v("000"));
        match a.matvec(&v("11")) {
            Err(Error::DimensionMismatch { expected: 3, found: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transpose_matvec_matches_transpose() {
        let a = triangle();
        let x = v("101");
        assert_eq!(a.transpose_matvec(&x).unwrap(), a.transpose().matvec(&x).unwrap());
    }

    #[test]
    fn quadratic_form_examples() {
        let b = Gf2Matrix::from_rows(&[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(b.quadratic_form(&v("11")).unwrap());
        assert!(!b.quadratic_form(&v("00")).unwrap());
        assert!(!b.quadratic_form(&v("10")).unwrap());
        let rect = Gf2Matrix::zeros(2, 3);
        assert!(matches!(rect.quadratic_form(&v("101")), Err(Error::NotSquare { .. })));
        assert!(b.quadratic_form(&v("1")).is_err());
    }

    #[test]
    fn dg_quadratic_form_is_dot_exhaustive() {
        for n in 0..=8usize {
            for wbits in 0u64..(1 << n) {
                let w = Gf2Vector::from_word(wbits, n);
                let d = Gf2Matrix::dg(&w);
                for bbits in 0u64..(1 << n) {
                    let b = Gf2Vector::from_word(bbits, n);
                    assert_eq!(d.quadratic_form(&b).unwrap(), b.dot(&w).unwrap());
                }
            }
        }
    }

    #[test]
    fn triangular_parts() {
        assert!(Gf2Matrix::identity(4).ltr().unwrap().rows().iter().all(Gf2Vector::is_zero));
        assert_eq!(
            Gf2Matrix::dg(&v("10")),
            Gf2Matrix::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap()
        );
        let m = Gf2Matrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            m.diag_of().unwrap(),
            Gf2Matrix::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap()
        );
        let full = Gf2Matrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(
            full.ltr().unwrap().to_rows(),
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0]]
        );
        assert!(Gf2Matrix::zeros(2, 3).ltr().is_err());
        assert!(Gf2Matrix::zeros(2, 3).diag_of().is_err());
    }

    #[test]
    fn symmetrized_has_zero_diagonal() {
        let m = Gf2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]).unwrap();
        let s = m.symmetrized().unwrap();
        assert!(s.diagonal().unwrap().is_zero());
        assert_eq!(s, s.transpose());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Gf2Matrix::from_rows(&[vec![1, 0], vec![1]]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(triangle().rank(), 2);
        assert_eq!(Gf2Matrix::identity(5).rank(), 5);
        assert_eq!(Gf2Matrix::zeros(3, 4).rank(), 0);
    }
}

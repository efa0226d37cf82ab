//! Block supermatrices with entries in Λ_N.
//!
//! Rows and columns are split as (even | odd). A matrix itself carries a
//! parity: for an even matrix the diagonal blocks hold even Grassmann
//! entries and the off-diagonal blocks odd ones; an odd matrix is the
//! reverse. Chart matrices and group elements are even; the odd form
//! matrix of the πsp series is odd.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::{GrassmannElement, GrassmannError, Parity};
use crate::linalg::QMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuperMatrixError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row}, {col}) violates the parity of its block")]
    ParityViolation { row: usize, col: usize },
    #[error("grade-zero part is singular")]
    Singular,
    #[error("expected an even square supermatrix")]
    NotEvenSquare,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

/// Sizes of the even and odd parts of a row or column index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub even: usize,
    pub odd: usize,
}

impl Partition {
    pub fn new(even: usize, odd: usize) -> Self {
        Partition { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }

    pub fn parity_of(self, index: usize) -> Parity {
        if index < self.even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperMatrix {
    rows: Partition,
    cols: Partition,
    parity: Parity,
    generators: usize,
    entries: Vec<GrassmannElement>,
}

impl SuperMatrix {
    /// Checked constructor. `entries` is row-major.
    pub fn new(
        rows: Partition,
        cols: Partition,
        parity: Parity,
        entries: Vec<GrassmannElement>,
        generators: usize,
    ) -> Result<Self, SuperMatrixError> {
        if entries.len() != rows.total() * cols.total() {
            return Err(SuperMatrixError::Shape(format!(
                "{} entries for a {}×{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        let out = SuperMatrix {
            rows,
            cols,
            parity,
            generators,
            entries,
        };
        out.check()?;
        Ok(out)
    }

    pub fn zeros(rows: Partition, cols: Partition, parity: Parity, generators: usize) -> Self {
        SuperMatrix {
            rows,
            cols,
            parity,
            generators,
            entries: vec![GrassmannElement::zero(generators); rows.total() * cols.total()],
        }
    }

    pub fn identity(part: Partition, generators: usize) -> Self {
        let mut out = Self::zeros(part, part, Parity::Even, generators);
        for i in 0..part.total() {
            out.entries[i * part.total() + i] = GrassmannElement::one(generators);
        }
        out
    }

    /// Lift a rational matrix. Nonzero entries must sit in blocks whose
    /// parity is even for the requested matrix parity.
    pub fn from_rational(
        m: &QMatrix,
        rows: Partition,
        cols: Partition,
        parity: Parity,
        generators: usize,
    ) -> Result<Self, SuperMatrixError> {
        if m.rows() != rows.total() || m.cols() != cols.total() {
            return Err(SuperMatrixError::Shape(format!(
                "{}×{} rational matrix for {}×{} blocks",
                m.rows(),
                m.cols(),
                rows,
                cols
            )));
        }
        let mut out = Self::zeros(rows, cols, parity, generators);
        for (i, j, v) in m.nonzeros() {
            out.entries[i * cols.total() + j] = GrassmannElement::scalar(generators, v.clone());
        }
        out.check()?;
        Ok(out)
    }

    pub fn row_partition(&self) -> Partition {
        self.rows
    }

    pub fn col_partition(&self) -> Partition {
        self.cols
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn nrows(&self) -> usize {
        self.rows.total()
    }

    pub fn ncols(&self) -> usize {
        self.cols.total()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GrassmannElement {
        &self.entries[i * self.ncols() + j]
    }

    pub fn entries(&self) -> &[GrassmannElement] {
        &self.entries
    }

    /// Grassmann parity required at position (i, j).
    pub fn block_parity(&self, i: usize, j: usize) -> Parity {
        self.rows.parity_of(i) + self.cols.parity_of(j) + self.parity
    }

    /// Replace one entry, re-checking its parity.
    pub fn with_entry(
        mut self,
        i: usize,
        j: usize,
        value: GrassmannElement,
    ) -> Result<Self, SuperMatrixError> {
        if value.generators() != self.generators {
            return Err(GrassmannError::GeneratorMismatch {
                left: self.generators,
                right: value.generators(),
            }
            .into());
        }
        if !value.has_parity(self.block_parity(i, j)) {
            return Err(SuperMatrixError::ParityViolation { row: i, col: j });
        }
        let c = self.ncols();
        self.entries[i * c + j] = value;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GrassmannElement::is_zero)
    }

    /// Grade-0 part as a rational matrix.
    pub fn body(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.nrows(), self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let b = self.entry(i, j).body();
                if !b.is_zero() {
                    out.set(i, j, b);
                }
            }
        }
        out
    }

    pub fn embed(&self, generators: usize) -> Result<Self, SuperMatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(generators))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            generators,
            entries,
            ..*self
        })
    }

    /// `smat_mul`: ordinary product over Λ_N.
    pub fn mul(&self, other: &SuperMatrix) -> Result<SuperMatrix, SuperMatrixError> {
        if self.cols != other.rows {
            return Err(SuperMatrixError::Shape(format!(
                "columns {} vs rows {}",
                self.cols, other.rows
            )));
        }
        if self.generators != other.generators {
            return Err(GrassmannError::GeneratorMismatch {
                left: self.generators,
                right: other.generators,
            }
            .into());
        }
        let (n, k, p) = (self.nrows(), self.ncols(), other.ncols());
        let mut entries = vec![GrassmannElement::zero(self.generators); n * p];
        for i in 0..n {
            for l in 0..k {
                let a = self.entry(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..p {
                    let b = other.entry(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * p + j].add_product(a, b)?;
                }
            }
        }
        Ok(SuperMatrix {
            rows: self.rows,
            cols: other.cols,
            parity: self.parity + other.parity,
            generators: self.generators,
            entries,
        })
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix, SuperMatrixError> {
        self.zip_with(other, |a, b| a.checked_add(b))
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix, SuperMatrixError> {
        self.zip_with(other, |a, b| a.checked_sub(b))
    }

    /// Left multiplication of every entry by a Grassmann scalar of the
    /// given parity; the matrix parity shifts accordingly.
    pub fn left_scale(&self, c: &GrassmannElement) -> Result<SuperMatrix, SuperMatrixError> {
        let shift = c
            .parity()
            .ok_or_else(|| SuperMatrixError::Shape("inhomogeneous scalar".into()))?;
        let entries = self
            .entries
            .iter()
            .map(|e| c.checked_mul(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            parity: self.parity + shift,
            entries,
            ..*self
        })
    }

    /// `(X Ξ; H Y)^{ST} = (Xᵀ Hᵀ; −Ξᵀ Yᵀ)`.
    pub fn supertranspose(&self) -> SuperMatrix {
        let (n, p) = (self.nrows(), self.ncols());
        let mut entries = vec![GrassmannElement::zero(self.generators); n * p];
        for i in 0..n {
            for j in 0..p {
                let e = self.entry(i, j);
                let upper_right = self.rows.parity_of(i) == Parity::Even
                    && self.cols.parity_of(j) == Parity::Odd;
                entries[j * n + i] = if upper_right { -e } else { e.clone() };
            }
        }
        SuperMatrix {
            rows: self.cols,
            cols: self.rows,
            parity: self.parity,
            generators: self.generators,
            entries,
        }
    }

    /// `smat_inverse_even`: C₀⁻¹ Σ_k (−N C₀⁻¹)^k with C₀ the grade-0 part.
    pub fn inverse_even(&self) -> Result<SuperMatrix, SuperMatrixError> {
        if self.rows != self.cols || self.parity != Parity::Even {
            return Err(SuperMatrixError::NotEvenSquare);
        }
        let body = self.body();
        let body_inv = body.inverse().ok_or(SuperMatrixError::Singular)?;
        let c0 = SuperMatrix::from_rational(&body, self.rows, self.cols, Parity::Even, self.generators)?;
        let c0_inv =
            SuperMatrix::from_rational(&body_inv, self.rows, self.cols, Parity::Even, self.generators)?;
        let nil = self.sub(&c0)?;
        let step = nil.mul(&c0_inv)?.negate();
        let mut term = SuperMatrix::identity(self.rows, self.generators);
        let mut series = term.clone();
        for _ in 0..=self.generators {
            term = term.mul(&step)?;
            if term.is_zero() {
                break;
            }
            series = series.add(&term)?;
        }
        c0_inv.mul(&series)
    }

    pub fn negate(&self) -> SuperMatrix {
        SuperMatrix {
            entries: self.entries.iter().map(|e| -e).collect(),
            ..*self
        }
    }

    /// Rows at the given indices, in the given order. Even-partition rows
    /// must come before odd ones so that the result is again blocked.
    pub fn select_rows(&self, indices: &[usize]) -> Result<SuperMatrix, SuperMatrixError> {
        let mut evens = 0;
        let mut seen_odd = false;
        for &i in indices {
            if i >= self.nrows() {
                return Err(SuperMatrixError::Shape(format!("row {i} out of range")));
            }
            match self.rows.parity_of(i) {
                Parity::Even if seen_odd => {
                    return Err(SuperMatrixError::Shape(
                        "even row selected after an odd one".into(),
                    ))
                }
                Parity::Even => evens += 1,
                Parity::Odd => seen_odd = true,
            }
        }
        let mut entries = Vec::with_capacity(indices.len() * self.ncols());
        for &i in indices {
            entries.extend(self.entries[i * self.ncols()..(i + 1) * self.ncols()].iter().cloned());
        }
        Ok(SuperMatrix {
            rows: Partition::new(evens, indices.len() - evens),
            cols: self.cols,
            parity: self.parity,
            generators: self.generators,
            entries,
        })
    }

    /// Sub-block by row and column ranges, keeping parities consistent.
    pub fn block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Vec<Vec<GrassmannElement>> {
        rows.map(|i| cols.clone().map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    fn zip_with<F>(&self, other: &SuperMatrix, f: F) -> Result<SuperMatrix, SuperMatrixError>
    where
        F: Fn(&GrassmannElement, &GrassmannElement) -> Result<GrassmannElement, GrassmannError>,
    {
        if self.rows != other.rows || self.cols != other.cols || self.parity != other.parity {
            return Err(SuperMatrixError::Shape("operands differ in shape or parity".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SuperMatrix {
            entries,
            ..*self
        })
    }

    fn check(&self) -> Result<(), SuperMatrixError> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let e = self.entry(i, j);
                if e.generators() != self.generators {
                    return Err(GrassmannError::GeneratorMismatch {
                        left: self.generators,
                        right: e.generators(),
                    }
                    .into());
                }
                if !e.has_parity(self.block_parity(i, j)) {
                    return Err(SuperMatrixError::ParityViolation { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows() {
            if i == self.rows.even && i > 0 {
                writeln!(f, "{}", "-".repeat(8))?;
            }
            let row: Vec<String> = (0..self.ncols())
                .map(|j| {
                    let s = self.entry(i, j).to_string();
                    if j == self.cols.even && j > 0 {
                        format!("| {s}")
                    } else {
                        s
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn g(n: usize, i: usize) -> GrassmannElement {
        GrassmannElement::generator(n, i).unwrap()
    }

    #[test]
    fn one_by_one_odd_product() {
        let p = Partition::new(0, 1);
        let a = SuperMatrix::new(p, p, Parity::Even, vec![g(2, 1)], 2);
        // (0|1)×(0|1) is a diagonal block, so an odd entry is rejected for an
        // even matrix and accepted for an odd one.
        assert!(matches!(a, Err(SuperMatrixError::ParityViolation { .. })));
        let a = SuperMatrix::new(p, p, Parity::Odd, vec![g(2, 1)], 2).unwrap();
        let b = SuperMatrix::new(p, p, Parity::Odd, vec![g(2, 2)], 2).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.parity(), Parity::Even);
        assert_eq!(*ab.entry(0, 0), &g(2, 1) * &g(2, 2));
    }

    #[test]
    fn supertranspose_of_pure_xi_block() {
        let rows = Partition::new(1, 1);
        let n = 1;
        let z = GrassmannElement::zero(n);
        let a = SuperMatrix::new(rows, rows, Parity::Even, vec![z.clone(), g(n, 1), z.clone(), z.clone()], n)
            .unwrap();
        let st = a.supertranspose();
        assert_eq!(*st.entry(1, 0), -&g(n, 1));
        assert!(st.entry(0, 1).is_zero());
    }

    #[test]
    fn scalar_inverse_with_nilpotent_tail() {
        let n = 2;
        let p = Partition::new(1, 0);
        let c = &GrassmannElement::from_integer(n, 2) + &(&g(n, 1) * &g(n, 2));
        let m = SuperMatrix::new(p, p, Parity::Even, vec![c], n).unwrap();
        let inv = m.inverse_even().unwrap();
        let expected = &GrassmannElement::scalar(n, q(1, 2)) - &(&g(n, 1) * &g(n, 2)).scale(&q(1, 4));
        assert_eq!(*inv.entry(0, 0), expected);
    }

    #[test]
    fn singular_body_is_reported() {
        let p = Partition::new(1, 0);
        let m = SuperMatrix::new(p, p, Parity::Even, vec![g(1, 1).grade_project(0)], 1).unwrap();
        assert_eq!(m.inverse_even(), Err(SuperMatrixError::Singular));
    }

    #[test]
    fn shape_mismatch() {
        let a = SuperMatrix::identity(Partition::new(1, 1), 0);
        let b = SuperMatrix::identity(Partition::new(2, 0), 0);
        assert!(matches!(a.mul(&b), Err(SuperMatrixError::Shape(_))));
    }

    #[test]
    fn numeric_supertranspose_matches_display() {
        // (2|1)×(2|1), entries named by position; ST computed by hand.
        let n = 2;
        let part = Partition::new(2, 1);
        let s = |v: i64| GrassmannElement::from_integer(n, v);
        let entries = vec![
            s(1), s(2), g(n, 1),
            s(3), s(4), g(n, 2),
            g(n, 2).scale(&int(5)), g(n, 1).scale(&int(6)), s(7),
        ];
        let a = SuperMatrix::new(part, part, Parity::Even, entries, n).unwrap();
        let st = a.supertranspose();
        let expected = vec![
            s(1), s(3), g(n, 2).scale(&int(5)),
            s(2), s(4), g(n, 1).scale(&int(6)),
            -&g(n, 1), -&g(n, 2), s(7),
        ];
        assert_eq!(st.entries(), &expected[..]);
    }
}

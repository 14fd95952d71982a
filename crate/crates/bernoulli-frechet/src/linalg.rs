//! Dense exact linear algebra over the rationals.
//!
//! The crate only needs a handful of primitives: reduced row echelon form,
//! rank, a canonical null-space basis, and linear solves that distinguish
//! unique, parametric and inconsistent systems. Everything is deterministic:
//! pivots are chosen as the first row with a nonzero entry in the current
//! column, so repeated runs produce identical echelon forms and identical
//! null-space bases.
//!
//! The matrices that show up here are small (at most a few thousand entries);
//! clarity wins over cache tricks.

use std::fmt;

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// Full column rank and consistent: the one solution.
    Unique(Vec<Rat>),
    /// Consistent with free columns. `particular` sets every free variable
    /// to zero; `kernel` is the canonical null-space basis, so the solution
    /// set is `particular + span(kernel)`.
    Parametric {
        particular: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
    /// No solution.
    Inconsistent,
}

impl RatMatrix {
    /// All-zero matrix. Zero rows or columns are allowed; a 0 x n matrix has
    /// rank 0 and a full null space, which the search module relies on when a
    /// row-selection set is empty.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Builds a matrix from row vectors. All rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == n_cols),
            "ragged rows: expected uniform length {n_cols}"
        );
        RatMatrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, x)| !a.is_zero() && !x.is_zero())
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place reduced row echelon form. Returns the pivot columns in
    /// order; the rank is their count. Pivot rows are chosen as the first
    /// row (scanning downward) with a nonzero entry in the current column.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(pivot_row, src);
            let inv = self
                .at(pivot_row, col)
                .recip()
                .expect("pivot is nonzero by selection");
            if !inv.is_one() {
                for c in col..self.cols {
                    let v = self.at(pivot_row, c) * &inv;
                    self.set(pivot_row, c, v);
                }
            }
            for r in 0..self.rows {
                if r == pivot_row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &(self.at(pivot_row, c) * &factor);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Canonical null-space basis: one vector per free column, carrying 1 at
    /// that free column, the negated echelon entries at the pivot columns,
    /// and 0 at every other free column. The basis is returned in ascending
    /// free-column order. `rank + basis.len() == cols` always holds.
    pub fn null_space(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(row, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b`, classifying the solution set. Panics if
    /// `b.len() != rows`.
    pub fn solve_full(&self, b: &[Rat]) -> Solution {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Solution::Inconsistent;
        }
        let mut particular = vec![Rat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.at(row, self.cols).clone();
        }
        if pivots.len() == self.cols {
            Solution::Unique(particular)
        } else {
            Solution::Parametric {
                particular,
                kernel: self.null_space(),
            }
        }
    }

    /// Convenience wrapper around [`RatMatrix::solve_full`] that returns a
    /// single solution when one exists (the particular solution with free
    /// variables zeroed) and `None` for inconsistent systems.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        match self.solve_full(b) {
            Solution::Unique(x) => Some(x),
            Solution::Parametric { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

//! Compressed sparse row matrices with exact integer entries.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<i64>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Sums duplicate coordinates and drops entries that end up zero.
    ///
    /// Panics if a coordinate lies outside the matrix.
    pub fn from_triplets(n_rows: usize, n_cols: usize, mut t: Vec<(usize, usize, i64)>) -> Self {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, i64)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            assert!(r < n_rows && c < n_cols, "entry ({r}, {c}) outside {n_rows}x{n_cols}");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != 0);
        let mut row_ptr = vec![0; n_rows + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|e| e.1).collect();
        let values = merged.iter().map(|e| e.2).collect();
        Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0,
        }
    }

    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        (0..self.n_rows)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let t = self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.n_cols, self.n_rows, t)
    }

    pub fn matmul(&self, rhs: &SparseMatrix) -> Self {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimensions differ");
        let mut t = Vec::new();
        for i in 0..self.n_rows {
            for (k, a) in self.row(i) {
                for (j, b) in rhs.row(k) {
                    t.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.n_rows, rhs.n_cols, t)
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut t = self.triplets();
        t.extend(rhs.triplets());
        Self::from_triplets(self.n_rows, self.n_cols, t)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.n_rows == self.n_cols && *self == self.transpose()
    }

    /// `out = A x`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_cols);
        debug_assert_eq!(out.len(), self.n_rows);
        for (i, o) in out.iter_mut().enumerate() {
            let span = self.row_ptr[i]..self.row_ptr[i + 1];
            let mut acc = 0.0;
            for (&j, &v) in self.col_idx[span.clone()].iter().zip(&self.values[span]) {
                acc += v as f64 * x[j];
            }
            *o = acc;
        }
    }

    /// `out = A x` for symmetric `A`, visiting only the rows matching nonzero
    /// entries of `x`. Cost scales with the support of `x`.
    pub fn sym_matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(self.n_rows, self.n_cols);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let span = self.row_ptr[j]..self.row_ptr[j + 1];
            for (&i, &v) in self.col_idx[span.clone()].iter().zip(&self.values[span]) {
                out[i] += v as f64 * xj;
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows];
        self.matvec_into(x, &mut out);
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.n_cols]; self.n_rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }
}

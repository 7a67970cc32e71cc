//! Compressed-sparse-row matrices for graph adjacency.
//!
//! The solver only ever needs a handful of products: CSR·vector, CSR·dense
//! and dense·CSRᵀ. The latter two are what keep the per-iteration cost of
//! the transport update at `O(nnz_s·|Vt| + |Vs|·nnz_t)` instead of cubic.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::math;

/// How to combine duplicate triplets during construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    /// Build from `(row, col, value)` triplets. Duplicates are combined with
    /// `combine`; explicit zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
        combine: Combine,
    ) -> Self {
        let mut trips: Vec<(usize, usize, f64)> = triplets
            .iter()
            .inspect(|(r, c, _)| {
                assert!(*r < rows && *c < cols, "triplet ({r},{c}) out of bounds");
            })
            .copied()
            .collect();
        trips.sort_unstable_by_key(|a| (a.0, a.1));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(trips.len());
        let mut values: Vec<f64> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in trips {
            if last == Some((r, c)) {
                let slot = values.last_mut().unwrap();
                match combine {
                    Combine::Sum => *slot += v,
                    Combine::Max => *slot = slot.max(v),
                }
            } else {
                indptr[r + 1] += 1;
                indices.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = Self { rows, cols, indptr, indices, values };
        m.prune_zeros();
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let trips: Vec<(usize, usize, f64)> =
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), diag.len(), &trips, Combine::Sum)
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut trips = Vec::new();
        for r in 0..m.rows() {
            for (c, &v) in m.row(r).iter().enumerate() {
                if v != 0.0 {
                    trips.push((r, c, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &trips, Combine::Sum)
    }

    fn prune_zeros(&mut self) {
        if !self.values.contains(&0.0) {
            return;
        }
        let mut indptr = vec![0usize; self.rows + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.values[k] != 0.0 {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    /// Number of structurally nonzero entries per row.
    pub fn row_support(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.indptr[r + 1] - self.indptr[r]).collect()
    }

    pub fn transpose(&self) -> CsrMatrix {
        let trips: Vec<(usize, usize, f64)> =
            self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        CsrMatrix::from_triplets(self.cols, self.rows, &trips, Combine::Sum)
    }

    pub fn map_values(&self, mut f: impl FnMut(f64) -> f64) -> CsrMatrix {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = f(*v);
        }
        out.prune_zeros();
        out
    }

    /// Elementwise `max(self, selfᵀ)`; the symmetrization used for directed input.
    pub fn max_with_transpose(&self) -> CsrMatrix {
        assert_eq!(self.rows, self.cols, "symmetrization needs a square matrix");
        let mut trips: Vec<(usize, usize, f64)> = self.triplets().collect();
        trips.extend(self.triplets().map(|(r, c, v)| (c, r, v)));
        CsrMatrix::from_triplets(self.rows, self.cols, &trips, Combine::Max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let t = self.transpose();
        if t.indptr != self.indptr || t.indices != self.indices {
            return false;
        }
        self.values
            .iter()
            .zip(&t.values)
            .all(|(a, b)| math::abs(a - b) <= tol)
    }

    /// Symmetric selection: rows and columns restricted to `idx` (strictly
    /// increasing), reindexed to `0..idx.len()`.
    pub fn select(&self, idx: &[usize]) -> CsrMatrix {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        let mut lookup = vec![usize::MAX; self.cols];
        for (new, &old) in idx.iter().enumerate() {
            lookup[old] = new;
        }
        let mut trips = Vec::new();
        for (new_r, &old_r) in idx.iter().enumerate() {
            let (cols, vals) = self.row(old_r);
            for (&c, &v) in cols.iter().zip(vals) {
                if lookup[c] != usize::MAX {
                    trips.push((new_r, lookup[c], v));
                }
            }
        }
        CsrMatrix::from_triplets(idx.len(), idx.len(), &trips, Combine::Sum)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect()
    }

    /// `self · rhs` into `out` (shape checked).
    pub fn mul_dense_into(&self, rhs: &DenseMatrix, out: &mut DenseMatrix) {
        assert_eq!(self.cols, rhs.rows(), "mul_dense: dimension mismatch");
        assert_eq!((out.rows(), out.cols()), (self.rows, rhs.cols()));
        out.fill(0.0);
        for r in 0..self.rows {
            let (cols, vals) = self.row(r);
            // split borrow: out row r vs rhs rows
            let out_row = out.row_mut(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let src = rhs.row(c);
                for (o, &s) in out_row.iter_mut().zip(src) {
                    *o += v * s;
                }
            }
        }
    }

    pub fn mul_dense(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols());
        self.mul_dense_into(rhs, &mut out);
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            out[(r, c)] = v;
        }
        out
    }
}

/// `lhs · rhsᵀ` with a sparse right factor: `out[i][k] = Σ_j lhs[i][j]·rhs[k][j]`.
pub fn dense_mul_csr_transpose_into(lhs: &DenseMatrix, rhs: &CsrMatrix, out: &mut DenseMatrix) {
    assert_eq!(lhs.cols(), rhs.cols(), "dense·csrᵀ: dimension mismatch");
    assert_eq!((out.rows(), out.cols()), (lhs.rows(), rhs.rows()));
    for i in 0..lhs.rows() {
        let a = lhs.row(i);
        let out_row = out.row_mut(i);
        for (k, slot) in out_row.iter_mut().enumerate() {
            let (cols, vals) = rhs.row(k);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += a[j] * v;
            }
            *slot = acc;
        }
    }
}

pub fn dense_mul_csr_transpose(lhs: &DenseMatrix, rhs: &CsrMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(lhs.rows(), rhs.rows());
    dense_mul_csr_transpose_into(lhs, rhs, &mut out);
    out
}

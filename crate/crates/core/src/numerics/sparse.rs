use num_complex::Complex64;

use super::CMatrix;

/// Row-compressed complex matrix.
///
/// The structure maps (left/right multiplication, chirality, real-structure
/// unitaries) are Kronecker products with identities or permutations, so
/// multiplying through them sparsely is much cheaper than dense matmul.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseCMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseCMatrix {
    /// Keeps every entry that is not exactly zero.
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(m.rows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..m.rows() {
            for (j, &z) in m.row(i).iter().enumerate() {
                if z != Complex64::new(0.0, 0.0) {
                    col_idx.push(j);
                    values.push(z);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            rows: m.rows(),
            cols: m.cols(),
            row_ptr,
            col_idx,
            values,
        }
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

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col_idx[k])] = self.values[k];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_dense(&self.to_dense().adjoint())
    }

    /// `S · X`.
    pub fn mul_dense(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, x.rows(), "sparse*dense shape mismatch");
        let m = x.cols();
        let mut out = CMatrix::zeros(self.rows, m);
        let out_data = out.as_mut_slice();
        for i in 0..self.rows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let a = self.values[k];
                let src = x.row(self.col_idx[k]);
                for (o, &b) in out_data[i * m..(i + 1) * m].iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `X · S`.
    pub fn dense_mul(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.cols(), self.rows, "dense*sparse shape mismatch");
        let mut out = CMatrix::zeros(x.rows(), self.cols);
        let n = self.cols;
        let out_data = out.as_mut_slice();
        for r in 0..x.rows() {
            let xrow = x.row(r);
            let orow = &mut out_data[r * n..(r + 1) * n];
            for (i, &xv) in xrow.iter().enumerate() {
                if xv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    orow[self.col_idx[k]] += xv * self.values[k];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|k| self.values[k] * v[self.col_idx[k]])
                    .sum()
            })
            .collect()
    }
}

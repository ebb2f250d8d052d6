use num_complex::Complex64;

use super::{CMatrix, NumericsError};

/// LU factorization with partial (row) pivoting, `P·M = L·U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl Lu {
    pub fn new(m: &CMatrix) -> Result<Self, NumericsError> {
        let n = m.ensure_square()?;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            swaps,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.lu.rows();
        let prod: Complex64 = (0..n).map(|i| self.lu[(i, i)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(NumericsError::ShapeMismatch {
                left: (n, n),
                right: (b.len(), 1),
            });
        }
        if self.singular {
            return Err(NumericsError::NumericalFailure("singular matrix in solve".into()));
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `M X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, NumericsError> {
        let mut out = CMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.column(j))?;
            out.set_column(j, &x);
        }
        Ok(out)
    }
}

/// `det(M)` via pivoted LU.
pub fn determinant(m: &CMatrix) -> Result<Complex64, NumericsError> {
    Ok(Lu::new(m)?.determinant())
}

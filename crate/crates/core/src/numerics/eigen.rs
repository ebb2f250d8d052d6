use num_complex::Complex64;

use super::{c, CMatrix, NumericsError, Tolerance};

const MAX_QL_SWEEPS: usize = 60;

/// Eigen-decomposition `M = Q·diag(values)·Q*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let lambda = CMatrix::diag(&self.values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        self.vectors.matmul(&lambda).matmul(&self.vectors.adjoint())
    }
}

/// Sorted real eigenvalues of a Hermitian matrix.
pub fn eig_hermitian(m: &CMatrix, tol: Tolerance) -> Result<Vec<f64>, NumericsError> {
    Ok(eigh(m, tol)?.values)
}

/// Householder tridiagonalization followed by implicit QL with Wilkinson
/// shifts. Eigenvectors are accumulated.
pub fn eigh(m: &CMatrix, tol: Tolerance) -> Result<HermitianEigen, NumericsError> {
    let n = m.ensure_square()?;
    let deviation = m.hermitian_deviation();
    if deviation > tol.abs_eps {
        return Err(NumericsError::NotHermitian { deviation });
    }
    if !m.is_finite() {
        return Err(NumericsError::NumericalFailure("non-finite input".into()));
    }
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let mut a = m.hermitian_part();
    let mut q = CMatrix::identity(n);
    tridiagonalize(&mut a, &mut q);

    // Rotate the complex off-diagonal into a real symmetric tridiagonal.
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = vec![c(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let off = a[(i + 1, i)];
        let r = off.norm();
        e[i] = r;
        phase[i + 1] = if r > 0.0 { phase[i] * (off / r) } else { phase[i] };
    }
    for row in 0..n {
        for (col, ph) in phase.iter().enumerate() {
            q[(row, col)] *= ph;
        }
    }

    implicit_ql(&mut d, &mut e, &mut q)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| q[(r, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// In-place reduction `A ← H A H` with accumulated `Q ← Q H`; on exit the
/// sub-diagonal of `a` holds the tridiagonal couplings.
fn tridiagonalize(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let unit = if x0.norm() > 0.0 { x0 / x0.norm() } else { c(1.0, 0.0) };
        let alpha = -unit * norm;
        let mut v = vec![c(0.0, 0.0); n];
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // A' = A − 2 v w* − 2 w v*, with p = A v, K = v* p, w = p − K v.
        let p = a.mul_vec(&v);
        let kk: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk.re * vi).collect();
        for i in 0..n {
            for j in 0..n {
                let delta = v[i] * w[j].conj() + w[i] * v[j].conj();
                if delta != c(0.0, 0.0) {
                    a[(i, j)] -= delta * 2.0;
                }
            }
        }

        // Q ← Q (I − 2 v v*)
        for r in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| q[(r, i)] * v[i]).sum();
            for i in k + 1..n {
                let vc = v[i].conj();
                q[(r, i)] -= s * vc * 2.0;
            }
        }
    }
}

/// QL iteration with implicit shifts on a real symmetric tridiagonal matrix
/// (`d` diagonal, `e[i]` couples `i` and `i+1`). Rotations are applied to the
/// columns of `z`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) -> Result<(), NumericsError> {
    let n = d.len();
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(NumericsError::NumericalFailure(format!(
                    "QL iteration did not converge at index {l}"
                )));
            }
            // Wilkinson-type shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut cc, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = cc * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                cc = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cc * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cc * r - b;
                for k in 0..z.rows() {
                    let zi = z[(k, i)];
                    let zi1 = z[(k, i + 1)];
                    z[(k, i + 1)] = zi * s + zi1 * cc;
                    z[(k, i)] = zi * cc - zi1 * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

use num_complex::Complex64;

use super::{c, CMatrix, NumericsError, Tolerance};

/// Pfaffian of a complex skew-symmetric matrix (`Mᵀ = −M`, no conjugation).
///
/// Parlett–Reid elimination: each step pivots the largest entry of the
/// current column into the sub-diagonal slot, records the sign of the
/// symmetric row/column swap, and eliminates with a rank-2 skew update.
pub fn pfaffian_skew(m: &CMatrix, tol: Tolerance) -> Result<Complex64, NumericsError> {
    let n = m.ensure_square()?;
    if n % 2 == 1 {
        return Err(NumericsError::OddDimension { dim: n });
    }
    let deviation = m.skew_deviation();
    if deviation > tol.abs_eps {
        return Err(NumericsError::NotSkewSymmetric { deviation });
    }
    if !m.is_finite() {
        return Err(NumericsError::NumericalFailure("non-finite input".into()));
    }
    // Exact skew-symmetrization removes the tolerated asymmetry.
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] - m[(j, i)]) * 0.5);
    let mut pf = c(1.0, 0.0);
    let mut tau = vec![c(0.0, 0.0); n];

    for k in (0..n.saturating_sub(1)).step_by(2) {
        let (kp, best) = (k + 1..n)
            .map(|i| (i, a[(i, k)].norm()))
            .fold((k + 1, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if kp != k + 1 {
            swap_rows_cols(&mut a, k + 1, kp);
            pf = -pf;
        }
        if best == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let pivot = a[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            for i in k + 2..n {
                tau[i] = a[(k, i)] / pivot;
            }
            for i in k + 2..n {
                let ai = a[(i, k + 1)];
                for j in k + 2..n {
                    let update = tau[i] * a[(j, k + 1)] - ai * tau[j];
                    a[(i, j)] += update;
                }
            }
        }
    }
    if !(pf.re.is_finite() && pf.im.is_finite()) {
        return Err(NumericsError::NumericalFailure("Pfaffian overflowed".into()));
    }
    Ok(pf)
}

fn swap_rows_cols(a: &mut CMatrix, p: usize, q: usize) {
    let n = a.rows();
    for j in 0..n {
        let t = a[(p, j)];
        a[(p, j)] = a[(q, j)];
        a[(q, j)] = t;
    }
    for i in 0..n {
        let t = a[(i, p)];
        a[(i, p)] = a[(i, q)];
        a[(i, q)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_base_case() {
        let a = c(1.5, -0.5);
        let m = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), a, -a, c(0.0, 0.0)]).unwrap();
        assert_eq!(pfaffian_skew(&m, Tolerance::default()).unwrap(), a);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(pfaffian_skew(&CMatrix::zeros(6, 6), Tolerance::default()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn four_by_four_closed_form() {
        // Pf = a01 a23 − a02 a13 + a03 a12
        let (a01, a02, a03, a12, a13, a23) = (c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0), c(-1.0, 0.5), c(4.0, 0.0), c(0.5, 0.5));
        let mut m = CMatrix::zeros(4, 4);
        for &(i, j, v) in &[(0, 1, a01), (0, 2, a02), (0, 3, a03), (1, 2, a12), (1, 3, a13), (2, 3, a23)] {
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        let expected = a01 * a23 - a02 * a13 + a03 * a12;
        assert!((pfaffian_skew(&m, Tolerance::default()).unwrap() - expected).norm() < 1e-13);
    }

    #[test]
    fn errors() {
        let tol = Tolerance::default();
        assert!(matches!(pfaffian_skew(&CMatrix::zeros(3, 3), tol), Err(NumericsError::OddDimension { dim: 3 })));
        assert!(matches!(
            pfaffian_skew(&CMatrix::identity(2), tol),
            Err(NumericsError::NotSkewSymmetric { .. })
        ));
    }
}

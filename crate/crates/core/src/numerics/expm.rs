use super::{CMatrix, Lu, NumericsError, Tolerance};

const PADE_DEGREE: usize = 8;

/// `exp(A)` for anti-Hermitian `A`, which is unitary.
///
/// Scaling and squaring around a diagonal `[8/8]` Padé approximant; the
/// scaled matrix has 1-norm at most 1/2.
pub fn unitary_exp(a: &CMatrix, tol: Tolerance) -> Result<CMatrix, NumericsError> {
    let n = a.ensure_square()?;
    let deviation = a.anti_hermitian_deviation();
    if deviation > tol.abs_eps {
        return Err(NumericsError::NotAntiHermitian { deviation });
    }
    let a = a.anti_hermitian_part();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));

    let coeffs = pade_coefficients(PADE_DEGREE);
    let mut numer = CMatrix::identity(n).scale_real(coeffs[0]);
    let mut denom = numer.clone();
    let mut power = CMatrix::identity(n);
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        power = power.matmul(&scaled);
        let term = power.scale_real(ck);
        numer += &term;
        if k % 2 == 0 {
            denom += &term;
        } else {
            denom -= &term;
        }
    }
    let mut out = Lu::new(&denom)?.solve(&numer)?;
    for _ in 0..squarings {
        out = out.matmul(&out);
    }
    Ok(out)
}

fn pade_coefficients(q: usize) -> Vec<f64> {
    let mut coeffs = vec![1.0; q + 1];
    for k in 1..=q {
        coeffs[k] = coeffs[k - 1] * (q + 1 - k) as f64 / (k * (2 * q + 1 - k)) as f64;
    }
    coeffs
}

//! Fermion action, the exact fermionic integral as a Pfaffian in a
//! J-canonical basis, and the field-strength determinant identity.

use rand::Rng;

use crate::fluctuations::FluctuatedDirac;
use crate::numerics::{c, determinant, pfaffian_skew, CMatrix, Complex64, NumericsError, Tolerance};
use crate::product::ProductTriple;
use crate::sampling::{random_vector, seeded_rng};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FermionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("real structure does not square to -1 (residual {0:e})")]
    StructureError(f64),
    #[error("bilinear form is not skew-symmetric (deviation {deviation:e}); D violates the reality condition")]
    NotSkew { deviation: f64 },
    #[error("det(D) = {det:e} is negative")]
    NegativeDeterminant { det: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `Ψ = (χ, ξ)`, one component per charge.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionField {
    psi: Vec<Complex64>,
}

impl FermionField {
    pub fn new(t: &ProductTriple, psi: Vec<Complex64>) -> Result<Self, FermionError> {
        if psi.len() != t.hilbert_dim() {
            return Err(FermionError::DimensionMismatch {
                expected: t.hilbert_dim(),
                got: psi.len(),
            });
        }
        Ok(Self { psi })
    }

    pub fn from_components(chi: &[Complex64], xi: &[Complex64]) -> Self {
        Self {
            psi: chi.iter().chain(xi).copied().collect(),
        }
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.psi[..self.psi.len() / 2]
    }

    pub fn xi(&self) -> &[Complex64] {
        &self.psi[self.psi.len() / 2..]
    }
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn check_square(t: &ProductTriple, d: &CMatrix) -> Result<(), FermionError> {
    if d.shape() != (t.hilbert_dim(), t.hilbert_dim()) {
        return Err(FermionError::DimensionMismatch {
            expected: t.hilbert_dim(),
            got: d.rows(),
        });
    }
    Ok(())
}

/// `S = ½⟨JΨ, DΨ⟩`.
pub fn fermion_action(t: &ProductTriple, psi: &FermionField, d: &CMatrix) -> Result<Complex64, FermionError> {
    check_square(t, d)?;
    if psi.psi.len() != t.hilbert_dim() {
        return Err(FermionError::DimensionMismatch {
            expected: t.hilbert_dim(),
            got: psi.psi.len(),
        });
    }
    Ok(inner(&t.apply_j(&psi.psi), &d.mul_vec(&psi.psi)) * 0.5)
}

/// `½⟨J_M ξ, (D′ + T)χ⟩ + ½⟨J_M χ, (D′ − T)ξ⟩` for a block-diagonal operator.
pub fn fermion_action_blocks(t: &ProductTriple, psi: &FermionField, fd: &FluctuatedDirac) -> Result<Complex64, FermionError> {
    if psi.psi.len() != t.hilbert_dim() {
        return Err(FermionError::DimensionMismatch {
            expected: t.hilbert_dim(),
            got: psi.psi.len(),
        });
    }
    let space = t.base().space();
    let km = space.real_structure();
    let j_m = |v: &[Complex64]| km.mul_vec(&v.iter().map(|z| z.conj()).collect::<Vec<_>>());
    let dp = fd.d_prime(t);
    let tt = &fd.theta_op(t) + &fd.y_op(t);
    let plus = &dp + &tt;
    let minus = &dp - &tt;
    let first = inner(&j_m(psi.xi()), &plus.mul_vec(psi.chi()));
    let second = inner(&j_m(psi.chi()), &minus.mul_vec(psi.xi()));
    Ok((first + second) * 0.5)
}

/// Orthonormal basis `e₁, Je₁, e₂, Je₂, …` of `ℋ`.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl CanonicalBasis {
    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Basis vectors as columns.
    pub fn as_matrix(&self) -> CMatrix {
        let dim = self.vectors.first().map_or(0, Vec::len);
        let mut m = CMatrix::zeros(dim, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        m
    }

    /// `‖E*E − I‖_max`.
    pub fn gram_residual(&self) -> f64 {
        let e = self.as_matrix();
        e.adjoint().matmul(&e).dist_max(&CMatrix::identity(self.vectors.len()))
    }

    /// `max_k ‖e_{2k+1} − J e_{2k}‖`.
    pub fn pairing_residual(&self, t: &ProductTriple) -> f64 {
        self.vectors
            .chunks(2)
            .map(|p| {
                let jv = t.apply_j(&p[0]);
                jv.iter().zip(&p[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Where the greedy construction draws its candidate directions from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisStart {
    /// Standard coordinate vectors in order, then seeded random vectors.
    Coordinate,
    /// Seeded random vectors only.
    Random(u64),
}

const OVERLAP_LIMIT: f64 = 1.0 - 1e-8;
const FALLBACK_SEED: u64 = 0x5eed;

pub fn canonical_basis(t: &ProductTriple) -> Result<CanonicalBasis, FermionError> {
    canonical_basis_from(t, BasisStart::Coordinate)
}

/// Greedy J-pairing: take a unit vector orthogonal to the current span,
/// append it and its image under `J`. The span stays `J`-invariant, so the
/// image is orthogonal to everything before it once `J² = −1`.
pub fn canonical_basis_from(t: &ProductTriple, start: BasisStart) -> Result<CanonicalBasis, FermionError> {
    let residual = t.j_square_residual();
    if residual > 1e-12 {
        return Err(FermionError::StructureError(residual));
    }
    let dim = t.hilbert_dim();
    let mut rng = seeded_rng(match start {
        BasisStart::Coordinate => FALLBACK_SEED,
        BasisStart::Random(seed) => seed,
    });
    let mut next_coordinate = match start {
        BasisStart::Coordinate => 0,
        BasisStart::Random(_) => dim,
    };
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while vectors.len() < dim {
        let candidate = if next_coordinate < dim {
            let mut e = vec![c(0.0, 0.0); dim];
            e[next_coordinate] = c(1.0, 0.0);
            next_coordinate += 1;
            e
        } else {
            unit_random(&mut rng, dim)
        };
        let Some(v) = orthonormalize(candidate, &vectors) else {
            continue;
        };
        let jv = t.apply_j(&v);
        vectors.push(v);
        vectors.push(jv);
    }
    Ok(CanonicalBasis { vectors })
}

fn unit_random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v = random_vector(rng, dim);
    let norm = inner(&v, &v).re.sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Two rounds of Gram-Schmidt against `span` on a unit `v`; `None` when
/// `v` lies (almost) inside the span.
fn orthonormalize(mut v: Vec<Complex64>, span: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    for _ in 0..2 {
        for u in span {
            let p = inner(u, &v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
    }
    let norm_sq = inner(&v, &v).re;
    if norm_sq < 1.0 - OVERLAP_LIMIT {
        return None;
    }
    let norm = norm_sq.sqrt();
    Some(v.into_iter().map(|z| z / norm).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionIntegral {
    /// `|Pf(A)|`.
    pub z: f64,
    pub pfaffian: Complex64,
    /// `√det D`, principal nonnegative root.
    pub sqrt_det: f64,
    pub det: Complex64,
    /// Set when `|det D|` is below `1e−12·‖D‖^dim` (near zero modes).
    pub condition_flag: bool,
}

/// `A_{ab} = ⟨J e_a, D e_b⟩ = (Eᵀ K* D E)_{ab}`.
pub fn bilinear_form(t: &ProductTriple, d: &CMatrix, basis: &CanonicalBasis) -> CMatrix {
    let e = basis.as_matrix();
    e.transpose().matmul(&t.real_structure().adjoint()).matmul(d).matmul(&e)
}

pub fn fermion_integral(t: &ProductTriple, d: &CMatrix) -> Result<FermionIntegral, FermionError> {
    let basis = canonical_basis(t)?;
    fermion_integral_in(t, d, &basis)
}

pub fn fermion_integral_in(t: &ProductTriple, d: &CMatrix, basis: &CanonicalBasis) -> Result<FermionIntegral, FermionError> {
    check_square(t, d)?;
    let scale = d.max_abs();
    let skew_tol = 1e-9 * scale.max(1.0);
    let a = bilinear_form(t, d, basis);
    let deviation = a.skew_deviation();
    if deviation > skew_tol {
        return Err(FermionError::NotSkew { deviation });
    }
    let pfaffian = pfaffian_skew(&a, Tolerance::default().with_abs(skew_tol))?;
    let det = determinant(d)?;
    let z = pfaffian.norm();
    if det.re < -1e-9 * (z * z).max(1.0) {
        return Err(FermionError::NegativeDeterminant { det: det.re });
    }
    let sqrt_det = det.re.max(0.0).sqrt();
    let dim = d.rows() as f64;
    let condition_flag = det.norm().ln() <= 1e-12f64.ln() + dim * scale.ln();
    Ok(FermionIntegral {
        z,
        pfaffian,
        sqrt_det,
        det,
        condition_flag,
    })
}

/// `F = [D′, T] + T²` with `T = Θ + Y`, and its parts.
#[derive(Clone, Debug)]
pub struct FieldStrength {
    pub f: CMatrix,
    pub f_theta: CMatrix,
    pub f_y: CMatrix,
    pub mixing: CMatrix,
}

impl FieldStrength {
    /// `‖F − (F_Θ + F_Y + {Θ, Y})‖_max`.
    pub fn decomposition_residual(&self) -> f64 {
        self.f.dist_max(&(&(&self.f_theta + &self.f_y) + &self.mixing))
    }
}

pub fn field_strength(t: &ProductTriple, fd: &FluctuatedDirac) -> FieldStrength {
    let dp = fd.d_prime(t);
    let th = fd.theta_op(t);
    let y = fd.y_op(t);
    let tt = &th + &y;
    let strength = |x: &CMatrix| &dp.commutator(x) + &x.matmul(x);
    FieldStrength {
        f: strength(&tt),
        f_theta: strength(&th),
        f_y: strength(&y),
        mixing: th.anticommutator(&y),
    }
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// `|det D − det(D′² − F)| / max(1, |det D|)`, comparing the full operator
/// with the single-charge block expression.
pub fn det_identity_residual(t: &ProductTriple, fd: &FluctuatedDirac) -> Result<f64, FermionError> {
    let full = determinant(&fd.assembled)?;
    let dp = fd.d_prime(t);
    let fs = field_strength(t, fd);
    let block = determinant(&(&dp.matmul(&dp) - &fs.f))?;
    Ok(relative(block, full))
}

/// `|det D − det(D′ + T)·det(D′ − T)| / max(1, |det D|)`.
pub fn block_identity_residual(t: &ProductTriple, fd: &FluctuatedDirac) -> Result<f64, FermionError> {
    let full = determinant(&fd.assembled)?;
    let dp = fd.d_prime(t);
    let tt = &fd.theta_op(t) + &fd.y_op(t);
    let prod = determinant(&(&dp + &tt))? * determinant(&(&dp - &tt))?;
    Ok(relative(prod, full))
}

//! Type `(0, 4)` matrix geometries over `Mₙ(ℝ)`, `M_{n/2}(ℍ)` or `Mₙ(ℂ)`.
//!
//! The Hilbert space `V ⊗ Mₙ(ℂ)` is flattened with the Clifford index
//! outermost and `Mₙ(ℂ)` row-major, so left multiplication by `A` is
//! `A ⊗ I` and right multiplication by `B` is `I ⊗ Bᵀ` on the matrix factor.
//! The real structure `J(v ⊗ m) = Cv ⊗ m*` is stored as the unitary
//! `K ⊗ P` (with `P` the transpose permutation) acting after entrywise
//! conjugation.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{AxiomContext, AxiomReport};
use crate::clifford::{trigamma_products, CliffordError, CliffordModule, TrigammaBasis};
use crate::numerics::{c, CMatrix, Tolerance};
use crate::sampling::{complex_gaussian_matrix, seeded_rng};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("L[{index}] is not anti-Hermitian (deviation {deviation:e})")]
    NotAntiHermitian { index: usize, deviation: f64 },
    #[error("H[{index}] is not Hermitian (deviation {deviation:e})")]
    NotHermitian { index: usize, deviation: f64 },
    #[error("{which}[{index}] is not in the algebra")]
    NotInAlgebra { which: DiracComponent, index: usize },
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracComponent {
    L,
    H,
}

impl fmt::Display for DiracComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::L => "L",
            Self::H => "H",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    /// `Mₙ(ℝ)`
    #[serde(rename = "R")]
    RealMat,
    /// `M_{n/2}(ℍ)`
    #[serde(rename = "H")]
    QuatMat,
    /// `Mₙ(ℂ)` as a real algebra
    #[serde(rename = "C")]
    ComplexMat,
}

impl AlgebraTag {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::RealMat => "R",
            Self::QuatMat => "H",
            Self::ComplexMat => "C",
        }
    }
}

/// A real matrix algebra realized inside `Mₙ(ℂ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraKind {
    tag: AlgebraTag,
    n: usize,
}

impl AlgebraKind {
    pub fn new(tag: AlgebraTag, n: usize) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidAlgebra("n must be positive".into()));
        }
        if tag == AlgebraTag::QuatMat && n % 2 == 1 {
            return Err(GeometryError::InvalidAlgebra(format!(
                "quaternionic algebra needs even n, got {n}"
            )));
        }
        Ok(Self { tag, n })
    }

    pub fn real(n: usize) -> Self {
        Self::new(AlgebraTag::RealMat, n).expect("n > 0")
    }

    pub fn quaternion(n: usize) -> Self {
        Self::new(AlgebraTag::QuatMat, n).expect("n even and positive")
    }

    pub fn complex(n: usize) -> Self {
        Self::new(AlgebraTag::ComplexMat, n).expect("n > 0")
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_shape(&self, m: &CMatrix) -> Result<(), GeometryError> {
        if m.shape() != (self.n, self.n) {
            return Err(GeometryError::DimensionMismatch {
                expected: self.n,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(())
    }

    /// Block-diagonal symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]`.
    pub fn symplectic_form(&self) -> CMatrix {
        let mut omega = CMatrix::zeros(self.n, self.n);
        for b in 0..self.n / 2 {
            omega[(2 * b, 2 * b + 1)] = c(1.0, 0.0);
            omega[(2 * b + 1, 2 * b)] = c(-1.0, 0.0);
        }
        omega
    }

    /// The antilinear involution `σ` of `Mₙ(ℂ)` whose fixed points form the
    /// real algebra: entrywise conjugation for `ℝ`, `Ω·conj(M)·Ω⁻¹` for `ℍ`.
    /// `None` for `Mₙ(ℂ)`, which has no such splitting.
    pub fn involution(&self, m: &CMatrix) -> Option<CMatrix> {
        match self.tag {
            AlgebraTag::RealMat => Some(m.conj()),
            AlgebraTag::QuatMat => {
                let omega = self.symplectic_form();
                Some(omega.matmul(&m.conj()).matmul(&omega.transpose()))
            }
            AlgebraTag::ComplexMat => None,
        }
    }

    /// Distance of `m` from the real algebra, `‖σ(m) − m‖_max` (zero for `ℂ`).
    pub fn membership_residual(&self, m: &CMatrix) -> Result<f64, GeometryError> {
        self.check_shape(m)?;
        Ok(match self.tag {
            AlgebraTag::RealMat => m.imag_part().max_abs(),
            _ => self.involution(m).map_or(0.0, |s| s.dist_max(m)),
        })
    }

    pub fn algebra_membership(&self, m: &CMatrix, tol: Tolerance) -> Result<bool, GeometryError> {
        Ok(self.membership_residual(m)? <= tol.abs_eps)
    }

    /// Real-linear projection onto the algebra, `(m + σ(m))/2`.
    pub fn project(&self, m: &CMatrix) -> CMatrix {
        match self.involution(m) {
            Some(s) => (m + &s).scale_real(0.5),
            None => m.clone(),
        }
    }

    /// Canonical real basis. `ℝ`: matrix units; `ℍ`: quaternion units
    /// `1, i, j, k` in each 2×2 block; `ℂ`: `E_{rc}` and `i·E_{rc}`.
    pub fn real_basis(&self) -> Vec<CMatrix> {
        let n = self.n;
        match self.tag {
            AlgebraTag::RealMat => (0..n * n).map(|k| CMatrix::unit(n, n, k / n, k % n)).collect(),
            AlgebraTag::ComplexMat => (0..n * n)
                .flat_map(|k| {
                    let e = CMatrix::unit(n, n, k / n, k % n);
                    let ie = e.scale(c(0.0, 1.0));
                    [e, ie]
                })
                .collect(),
            AlgebraTag::QuatMat => {
                let one = c(1.0, 0.0);
                let i = c(0.0, 1.0);
                let units: [[crate::numerics::Complex64; 4]; 4] = [
                    [one, c(0.0, 0.0), c(0.0, 0.0), one],
                    [i, c(0.0, 0.0), c(0.0, 0.0), -i],
                    [c(0.0, 0.0), one, -one, c(0.0, 0.0)],
                    [c(0.0, 0.0), i, i, c(0.0, 0.0)],
                ];
                let h = n / 2;
                let mut basis = Vec::with_capacity(n * n);
                for br in 0..h {
                    for bc in 0..h {
                        for u in &units {
                            let mut m = CMatrix::zeros(n, n);
                            m[(2 * br, 2 * bc)] = u[0];
                            m[(2 * br, 2 * bc + 1)] = u[1];
                            m[(2 * br + 1, 2 * bc)] = u[2];
                            m[(2 * br + 1, 2 * bc + 1)] = u[3];
                            basis.push(m);
                        }
                    }
                }
                basis
            }
        }
    }
}

/// `[A, ·]` on row-major vectorized `Mₙ(ℂ)`: `A ⊗ I − I ⊗ Aᵀ`.
pub fn commutator_op(a: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(a.rows());
    &a.kron(&id) - &id.kron(&a.transpose())
}

/// `{A, ·}` on row-major vectorized `Mₙ(ℂ)`: `A ⊗ I + I ⊗ Aᵀ`.
pub fn anticommutator_op(a: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(a.rows());
    &a.kron(&id) + &id.kron(&a.transpose())
}

/// Transpose permutation `vec(m) ↦ vec(mᵀ)` on row-major `Mₙ(ℂ)`.
pub fn transpose_permutation(n: usize) -> CMatrix {
    let mut p = CMatrix::zeros(n * n, n * n);
    for r in 0..n {
        for col in 0..n {
            p[(col * n + r, r * n + col)] = c(1.0, 0.0);
        }
    }
    p
}

/// Everything but the Dirac operator: Clifford module, algebra, and the
/// derived structure maps on `V ⊗ Mₙ(ℂ)`.
#[derive(Clone, Debug)]
pub struct FermionSpace {
    clifford: CliffordModule,
    trigamma: TrigammaBasis,
    algebra: AlgebraKind,
}

impl FermionSpace {
    pub fn new(algebra: AlgebraKind) -> Result<Self, GeometryError> {
        let clifford = CliffordModule::new(0, 4)?;
        let trigamma = trigamma_products(&clifford)?;
        Ok(Self {
            clifford,
            trigamma,
            algebra,
        })
    }

    pub fn clifford(&self) -> &CliffordModule {
        &self.clifford
    }

    pub fn trigamma(&self) -> &TrigammaBasis {
        &self.trigamma
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn n(&self) -> usize {
        self.algebra.n
    }

    /// `dim V · n²`.
    pub fn hilbert_dim(&self) -> usize {
        self.clifford.dim() * self.n() * self.n()
    }

    /// `l(a) = 1_V ⊗ (a ⊗ I)`.
    pub fn left(&self, a: &CMatrix) -> CMatrix {
        let n = self.n();
        CMatrix::identity(self.clifford.dim()).kron(&a.kron(&CMatrix::identity(n)))
    }

    /// `r(b) = 1_V ⊗ (I ⊗ bᵀ)`.
    pub fn right(&self, b: &CMatrix) -> CMatrix {
        let n = self.n();
        CMatrix::identity(self.clifford.dim()).kron(&CMatrix::identity(n).kron(&b.transpose()))
    }

    /// Unitary part `K ⊗ P` of `J(v ⊗ m) = Cv ⊗ m*`.
    pub fn real_structure(&self) -> CMatrix {
        self.clifford.conj_unitary().kron(&transpose_permutation(self.n()))
    }

    /// `Γ = γ ⊗ 1`.
    pub fn chirality(&self) -> CMatrix {
        let g5 = self.clifford.chirality().expect("(0,4) is even");
        g5.kron(&CMatrix::identity(self.n() * self.n()))
    }

    pub fn eps_prime(&self) -> i8 {
        self.clifford.signs().epsilon_prime
    }

    /// Fermion-space data for the axiom engine.
    pub fn axiom_context(&self) -> AxiomContext {
        let left: Vec<CMatrix> = self.algebra.real_basis().iter().map(|a| self.left(a)).collect();
        AxiomContext::new(&self.real_structure(), self.eps_prime(), Some(&self.chirality()), &left)
    }

    /// `Σⱼ γʲ ⊗ [Lⱼ, ·] + Σ γʲγᵏγˡ ⊗ {H_{jkl}, ·}` for arbitrary complex
    /// coefficient matrices.
    pub fn dirac_from_coefficients(&self, l: &[CMatrix; 4], h: &[CMatrix; 4]) -> CMatrix {
        let dim = self.hilbert_dim();
        let mut d = CMatrix::zeros(dim, dim);
        for (g, lj) in self.clifford.gammas().iter().zip(l) {
            d += &g.kron(&commutator_op(lj));
        }
        for (t, hj) in self.trigamma.products.iter().zip(h) {
            d += &t.kron(&anticommutator_op(hj));
        }
        d
    }
}

/// Coefficients `Lⱼ` (anti-Hermitian) and `H_{jkl}` (Hermitian), all in the
/// real algebra. `h` follows the trigamma triple order.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracData {
    l: [CMatrix; 4],
    h: [CMatrix; 4],
}

impl DiracData {
    pub fn zero(n: usize) -> Self {
        Self {
            l: std::array::from_fn(|_| CMatrix::zeros(n, n)),
            h: std::array::from_fn(|_| CMatrix::zeros(n, n)),
        }
    }

    pub fn l(&self) -> &[CMatrix; 4] {
        &self.l
    }

    pub fn h(&self) -> &[CMatrix; 4] {
        &self.h
    }

    pub fn into_parts(self) -> ([CMatrix; 4], [CMatrix; 4]) {
        (self.l, self.h)
    }
}

/// Validates shapes, then algebra membership, then (anti-)Hermiticity.
pub fn build_dirac_data(
    l: [CMatrix; 4],
    h: [CMatrix; 4],
    space: &FermionSpace,
    tol: Tolerance,
) -> Result<DiracData, GeometryError> {
    let alg = space.algebra();
    for m in l.iter().chain(&h) {
        alg.check_shape(m)?;
    }
    for (which, mats) in [(DiracComponent::L, &l), (DiracComponent::H, &h)] {
        for (index, m) in mats.iter().enumerate() {
            if !alg.algebra_membership(m, tol)? {
                return Err(GeometryError::NotInAlgebra { which, index });
            }
        }
    }
    for (index, m) in l.iter().enumerate() {
        let deviation = m.anti_hermitian_deviation();
        if deviation > tol.abs_eps {
            return Err(GeometryError::NotAntiHermitian { index, deviation });
        }
    }
    for (index, m) in h.iter().enumerate() {
        let deviation = m.hermitian_deviation();
        if deviation > tol.abs_eps {
            return Err(GeometryError::NotHermitian { index, deviation });
        }
    }
    Ok(DiracData { l, h })
}

#[derive(Clone, Debug)]
pub struct MatrixGeometry {
    space: FermionSpace,
    dirac: DiracData,
}

impl MatrixGeometry {
    /// Pairs a fermion space with Dirac data validated against it.
    pub fn new(space: FermionSpace, dirac: DiracData) -> Result<Self, GeometryError> {
        if dirac.l[0].rows() != space.n() {
            return Err(GeometryError::DimensionMismatch {
                expected: space.n(),
                rows: dirac.l[0].rows(),
                cols: dirac.l[0].cols(),
            });
        }
        Ok(Self { space, dirac })
    }

    pub fn from_parts(kind: AlgebraKind, l: [CMatrix; 4], h: [CMatrix; 4], tol: Tolerance) -> Result<Self, GeometryError> {
        let space = FermionSpace::new(kind)?;
        let dirac = build_dirac_data(l, h, &space, tol)?;
        Ok(Self { space, dirac })
    }

    pub fn zero(kind: AlgebraKind) -> Result<Self, GeometryError> {
        let space = FermionSpace::new(kind)?;
        let dirac = DiracData::zero(kind.n());
        Ok(Self { space, dirac })
    }

    pub fn space(&self) -> &FermionSpace {
        &self.space
    }

    pub fn dirac(&self) -> &DiracData {
        &self.dirac
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.space.algebra()
    }
}

/// Dense `(4n²)×(4n²)` Dirac operator.
pub fn assemble_dirac(geom: &MatrixGeometry) -> CMatrix {
    geom.space.dirac_from_coefficients(&geom.dirac.l, &geom.dirac.h)
}

pub fn verify_axioms(geom: &MatrixGeometry, tol: Tolerance) -> AxiomReport {
    verify_operator(&geom.space, &assemble_dirac(geom), tol)
}

/// Runs the axiom suite on an arbitrary operator on the fermion space.
pub fn verify_operator(space: &FermionSpace, d: &CMatrix, tol: Tolerance) -> AxiomReport {
    space.axiom_context().verify(d, tol)
}

/// Projection used by the sampler: algebra projection, then the
/// anti-Hermitian (`anti = true`) or Hermitian part.
pub fn project_coefficient(kind: AlgebraKind, m: &CMatrix, anti: bool) -> CMatrix {
    let p = kind.project(m);
    if anti {
        p.anti_hermitian_part()
    } else {
        p.hermitian_part()
    }
}

/// Gaussian `L`, `H` entries with standard deviation `scale`, projected onto
/// the admissible subspaces. Deterministic in `seed`.
pub fn sample_random_geometry(kind: AlgebraKind, scale: f64, seed: u64) -> Result<MatrixGeometry, GeometryError> {
    let mut rng = seeded_rng(seed);
    sample_with_rng(kind, scale, &mut rng)
}

pub fn sample_with_rng<R: Rng + ?Sized>(kind: AlgebraKind, scale: f64, rng: &mut R) -> Result<MatrixGeometry, GeometryError> {
    let n = kind.n();
    let l = std::array::from_fn(|_| project_coefficient(kind, &complex_gaussian_matrix(rng, n, n, scale), true));
    let h = std::array::from_fn(|_| project_coefficient(kind, &complex_gaussian_matrix(rng, n, n, scale), false));
    let space = FermionSpace::new(kind)?;
    Ok(MatrixGeometry {
        space,
        dirac: DiracData { l, h },
    })
}

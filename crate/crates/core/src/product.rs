//! Product of a matrix geometry with the `U(1)` internal triple.
//!
//! The internal `ℂ²` factor is the outermost tensor index, so every vector on
//! `ℋ = ℂ² ⊗ (V ⊗ Mₙ(ℂ))` is the concatenation `(χ, ξ)` of its two charge
//! components and every structured operator is a 2×2 block matrix of
//! `4n² × 4n²` blocks.

use crate::axioms::{AxiomContext, AxiomReport};
use crate::clifford::ko_sign_table;
use crate::geometry::{assemble_dirac, AlgebraKind, AlgebraTag, GeometryError, MatrixGeometry};
use crate::numerics::{c, CMatrix, Complex64, Tolerance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProductError {
    #[error("the product is only defined over real or quaternionic matrix algebras, got {0:?}")]
    UnsupportedAlgebra(AlgebraTag),
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("not a Lie algebra element: {0}")]
    NotLieAlgebraElement(String),
    #[error("dimension mismatch: expected {expected}, got {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The `s = 6` internal triple with `𝒜_F = ℂ` acting on `ℂ²` as
/// `κ ↦ diag(κ, κ̄)`.
#[derive(Clone, Debug)]
pub struct InternalTriple {
    real_structure: CMatrix,
    chirality: CMatrix,
    dirac: CMatrix,
}

impl InternalTriple {
    pub const KO_DIMENSION: u8 = 6;

    pub fn new() -> Self {
        let one = c(1.0, 0.0);
        Self {
            real_structure: CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), one, one, c(0.0, 0.0)]).expect("2x2"),
            chirality: CMatrix::diag(&[one, -one]),
            dirac: CMatrix::zeros(2, 2),
        }
    }

    pub fn represent(&self, kappa: Complex64) -> CMatrix {
        CMatrix::diag(&[kappa, kappa.conj()])
    }

    /// Unitary part of `J_F(e, p) = (p̄, ē)`.
    pub fn real_structure(&self) -> &CMatrix {
        &self.real_structure
    }

    pub fn chirality(&self) -> &CMatrix {
        &self.chirality
    }

    pub fn dirac(&self) -> &CMatrix {
        &self.dirac
    }

    /// `‖K_F·conj(K_F) − ε·I‖_max`.
    pub fn real_structure_square_residual(&self) -> f64 {
        let eps = f64::from(ko_sign_table(Self::KO_DIMENSION).epsilon);
        let sq = self.real_structure.matmul(&self.real_structure.conj());
        sq.dist_max(&CMatrix::identity(2).scale_real(eps))
    }

    pub fn verify(&self, tol: Tolerance) -> AxiomReport {
        let basis = [self.represent(c(1.0, 0.0)), self.represent(c(0.0, 1.0))];
        let eps_prime = ko_sign_table(Self::KO_DIMENSION).epsilon_prime;
        AxiomContext::new(&self.real_structure, eps_prime, Some(&self.chirality), &basis).verify(&self.dirac, tol)
    }
}

impl Default for InternalTriple {
    fn default() -> Self {
        Self::new()
    }
}

/// `a = x + iy` with `x, y` in the real algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    value: CMatrix,
    x: CMatrix,
    y: CMatrix,
}

impl AlgebraElement {
    pub fn value(&self) -> &CMatrix {
        &self.value
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    /// `ā = x − iy`.
    pub fn conj_bar(&self) -> CMatrix {
        &self.x - &self.y.scale(c(0.0, 1.0))
    }

    /// `a* = x* − i y*`, split accordingly.
    pub fn adjoint(&self) -> Self {
        Self {
            value: self.value.adjoint(),
            x: self.x.adjoint(),
            y: self.y.adjoint().scale_real(-1.0),
        }
    }
}

/// Splits `a ∈ 𝒜_M ⊗ ℂ` as `x + iy` with `x = (a + σ(a))/2`,
/// `y = (a − σ(a))/(2i)`.
pub fn split_element(a: &CMatrix, kind: AlgebraKind) -> Result<AlgebraElement, ProductError> {
    if a.shape() != (kind.n(), kind.n()) {
        return Err(ProductError::DimensionMismatch {
            expected: kind.n(),
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let s = kind.involution(a).ok_or(ProductError::UnsupportedAlgebra(kind.tag()))?;
    let x = (a + &s).scale_real(0.5);
    let y = (a - &s).scale(c(0.0, -0.5));
    Ok(AlgebraElement { value: a.clone(), x, y })
}

/// `blockdiag(p, m)` on the internal grading.
pub fn charge_blocks(plus: &CMatrix, minus: &CMatrix) -> CMatrix {
    CMatrix::block_diag(&[plus, minus])
}

/// The four `4n² × 4n²` blocks `(++, +−, −+, −−)` of an operator on `ℋ`.
pub fn split_blocks(d: &CMatrix) -> [CMatrix; 4] {
    let h = d.rows() / 2;
    [d.block(0, 0, h, h), d.block(0, h, h, h), d.block(h, 0, h, h), d.block(h, h, h, h)]
}

#[derive(Clone, Debug)]
pub struct ProductTriple {
    base: MatrixGeometry,
    internal: InternalTriple,
    d0: CMatrix,
    gamma: CMatrix,
    real_structure: CMatrix,
    context: AxiomContext,
}

pub fn build_product_triple(geom: &MatrixGeometry) -> Result<ProductTriple, ProductError> {
    let kind = geom.algebra();
    if kind.tag() == AlgebraTag::ComplexMat {
        return Err(ProductError::UnsupportedAlgebra(kind.tag()));
    }
    let internal = InternalTriple::new();
    let space = geom.space();
    let dm = assemble_dirac(geom);
    let d0 = charge_blocks(&dm, &dm);
    let gamma = internal.chirality().kron(&space.chirality());
    let real_structure = internal.real_structure().kron(&space.real_structure());

    let mut left = Vec::new();
    for b in kind.real_basis() {
        let ib = b.scale(c(0.0, 1.0));
        for a in [b, ib] {
            let el = split_element(&a, kind)?;
            left.push(charge_blocks(&space.left(&a), &space.left(&el.conj_bar())));
        }
    }
    let context = AxiomContext::new(&real_structure, 1, Some(&gamma), &left);
    Ok(ProductTriple {
        base: geom.clone(),
        internal,
        d0,
        gamma,
        real_structure,
        context,
    })
}

impl ProductTriple {
    pub fn base(&self) -> &MatrixGeometry {
        &self.base
    }

    pub fn internal(&self) -> &InternalTriple {
        &self.internal
    }

    pub fn kind(&self) -> AlgebraKind {
        self.base.algebra()
    }

    pub fn n(&self) -> usize {
        self.kind().n()
    }

    /// `8n²`.
    pub fn hilbert_dim(&self) -> usize {
        2 * self.block_dim()
    }

    /// `4n²`, the dimension of one charge component.
    pub fn block_dim(&self) -> usize {
        self.base.space().hilbert_dim()
    }

    /// `D₀ = 1_F ⊗ D_M`.
    pub fn d0(&self) -> &CMatrix {
        &self.d0
    }

    /// `Γ = Γ_F ⊗ γ ⊗ 1`.
    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    /// Unitary part `K_tot` of `J = J_F ⊗ J_M`.
    pub fn real_structure(&self) -> &CMatrix {
        &self.real_structure
    }

    pub fn ko_dimension(&self) -> u8 {
        (self.base.space().clifford().ko_dimension() + InternalTriple::KO_DIMENSION) % 8
    }

    pub fn eps_prime(&self) -> i8 {
        ko_sign_table(self.ko_dimension()).epsilon_prime
    }

    /// `J ψ = K_tot·conj(ψ)`.
    pub fn apply_j(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let conj: Vec<Complex64> = psi.iter().map(|z| z.conj()).collect();
        self.real_structure.mul_vec(&conj)
    }

    /// `‖K_tot·conj(K_tot) + I‖_max`, zero when `J² = −1`.
    pub fn j_square_residual(&self) -> f64 {
        let sq = self.real_structure.matmul(&self.real_structure.conj());
        (&sq + &CMatrix::identity(self.hilbert_dim())).max_abs()
    }

    /// `‖Γ² − I‖_max` together with `‖Γ − Γ*‖_max`.
    pub fn gamma_residual(&self) -> f64 {
        let sq = self.gamma.matmul(&self.gamma).dist_max(&CMatrix::identity(self.hilbert_dim()));
        sq.max(self.gamma.hermitian_deviation())
    }

    /// `J X J⁻¹`.
    pub fn conjugate_by_j(&self, x: &CMatrix) -> CMatrix {
        self.context.conjugate_by_j(x)
    }

    pub fn axiom_context(&self) -> &AxiomContext {
        &self.context
    }

    /// Runs the product-triple axiom suite on `d`.
    pub fn verify(&self, d: &CMatrix, tol: Tolerance) -> AxiomReport {
        self.context.verify(d, tol)
    }

    pub fn split(&self, a: &CMatrix) -> Result<AlgebraElement, ProductError> {
        split_element(a, self.kind())
    }

    /// `ā` for an arbitrary `a ∈ Mₙ(ℂ)`.
    pub fn bar(&self, a: &CMatrix) -> CMatrix {
        self.kind().involution(a).expect("real or quaternionic base")
    }

    /// `blockdiag(l_M(a), l_M(ā))`.
    pub fn left(&self, a: &AlgebraElement) -> CMatrix {
        let space = self.base.space();
        charge_blocks(&space.left(a.value()), &space.left(&a.conj_bar()))
    }

    /// `blockdiag(r_M(ā), r_M(a))`.
    pub fn right(&self, a: &AlgebraElement) -> CMatrix {
        let space = self.base.space();
        charge_blocks(&space.right(&a.conj_bar()), &space.right(a.value()))
    }

    pub fn represent_element(&self, a: &AlgebraElement) -> (CMatrix, CMatrix) {
        (self.left(a), self.right(a))
    }

    fn check_n(&self, m: &CMatrix) -> Result<(), ProductError> {
        if m.shape() != (self.n(), self.n()) {
            return Err(ProductError::DimensionMismatch {
                expected: self.n(),
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(())
    }

    fn check_unitary(&self, u: &CMatrix, tol: Tolerance) -> Result<(), ProductError> {
        self.check_n(u)?;
        let deviation = u.matmul(&u.adjoint()).dist_max(&CMatrix::identity(self.n()));
        if deviation > tol.abs_eps.max(tol.rel_eps) {
            return Err(ProductError::NotUnitary { deviation });
        }
        Ok(())
    }

    /// `U = l(u)·r(u⁻¹)`, the adjoint action of `u ∈ U(n)` on `ℋ`.
    pub fn gauge_operator(&self, u: &CMatrix, tol: Tolerance) -> Result<CMatrix, ProductError> {
        self.check_unitary(u, tol)?;
        let u_inv = u.adjoint();
        let id_v = CMatrix::identity(self.base.space().clifford().dim());
        // l_M(a)·r_M(b) = 1_V ⊗ a ⊗ bᵀ
        let plus = id_v.kron(&u.kron(&self.bar(&u_inv).transpose()));
        let minus = id_v.kron(&self.bar(u).kron(&u_inv.transpose()));
        Ok(charge_blocks(&plus, &minus))
    }

    /// Whether `u` lies in the real subgroup `U(𝒜_M)` (`O(n)` or `Sp(n/2)`),
    /// whose gauge operators act identically on both charges.
    pub fn is_geometric(&self, u: &CMatrix, tol: Tolerance) -> Result<bool, ProductError> {
        Ok(self.kind().algebra_membership(u, tol)?)
    }

    /// `l(a) + r(a*)` for `a = x + iy` with `x* = −x`, `y* = y`.
    pub fn adjoint_lie(&self, a: &AlgebraElement, tol: Tolerance) -> Result<CMatrix, ProductError> {
        self.check_n(a.value())?;
        let dx = a.x().anti_hermitian_deviation();
        if dx > tol.abs_eps {
            return Err(ProductError::NotLieAlgebraElement(format!("x is not anti-Hermitian (deviation {dx:e})")));
        }
        let dy = a.y().hermitian_deviation();
        if dy > tol.abs_eps {
            return Err(ProductError::NotLieAlgebraElement(format!("y is not Hermitian (deviation {dy:e})")));
        }
        Ok(&self.left(a) + &self.right(&a.adjoint()))
    }
}

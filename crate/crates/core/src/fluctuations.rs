//! Inner fluctuations of the product Dirac operator.
//!
//! Every fluctuated operator has the block form
//! `blockdiag(D′ + T, D′ − T)` on the two charges, with
//!
//! ```text
//! D′ = Σ γʲ ⊗ [L′ⱼ, ·] + Σ γʲγᵏγˡ ⊗ {H′_{jkl}, ·}
//! T  = Σ γʲ ⊗ {iθⱼ, ·} + Σ γʲγᵏγˡ ⊗ [iy_{jkl}, ·]
//! ```
//!
//! `L′, y` anti-Hermitian and `H′, θ` Hermitian, all in the real algebra
//! for genuine fluctuations. The four families are stored in a
//! [`CoefficientSet`].

use crate::geometry::{anticommutator_op, commutator_op, FermionSpace};
use crate::numerics::{c, CMatrix, Tolerance};
use crate::product::{charge_blocks, split_blocks, AlgebraElement, ProductError, ProductTriple};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FluctuationError {
    #[error("one-form generator list is empty")]
    EmptyGenerators,
    #[error("one-form is not Hermitian (deviation {deviation:e}); enable symmetrization")]
    NonHermitianOneForm { deviation: f64 },
    #[error("operator is not in the span of the fluctuation families (residual {residual:e})")]
    NotInSpan { residual: f64 },
    #[error("gauge parameter is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("gauge parameter is not in the real algebra")]
    NotInAlgebra,
    #[error(transparent)]
    Product(#[from] ProductError),
}

fn zeros4(n: usize) -> [CMatrix; 4] {
    std::array::from_fn(|_| CMatrix::zeros(n, n))
}

fn i_times(m: &CMatrix) -> CMatrix {
    m.scale(c(0.0, 1.0))
}

/// Pairs `(a_m, b_m)` defining `ω = Σ l(a_m)[D, l(b_m)]`.
#[derive(Clone, Debug)]
pub struct OneFormGenerators {
    pairs: Vec<(AlgebraElement, AlgebraElement)>,
}

impl OneFormGenerators {
    pub fn new(t: &ProductTriple, pairs: &[(CMatrix, CMatrix)]) -> Result<Self, FluctuationError> {
        if pairs.is_empty() {
            return Err(FluctuationError::EmptyGenerators);
        }
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((t.split(a)?, t.split(b)?)))
            .collect::<Result<Vec<_>, ProductError>>()?;
        Ok(Self { pairs })
    }

    /// The single pair `(u, u⁻¹)`, whose fluctuation is conjugation by `u`.
    pub fn from_unitary(t: &ProductTriple, u: &CMatrix) -> Result<Self, FluctuationError> {
        Self::new(t, &[(u.clone(), u.adjoint())])
    }

    pub fn pairs(&self) -> &[(AlgebraElement, AlgebraElement)] {
        &self.pairs
    }
}

/// `Λⱼ = Σ a[Lⱼ, b]`, `Λ_{jkl} = Σ a[H_{jkl}, b]` and their splits
/// `Λⱼ = σⱼ + iθⱼ`, `Λ_{jkl} = x_{jkl} + i·y_{jkl}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FluctuationCoefficients {
    pub lambda_j: [CMatrix; 4],
    pub lambda_jkl: [CMatrix; 4],
    pub sigma: [CMatrix; 4],
    pub theta: [CMatrix; 4],
    pub x: [CMatrix; 4],
    pub y: [CMatrix; 4],
}

impl FluctuationCoefficients {
    /// `‖Λ − (real + i·imag)‖_max` over both families.
    pub fn split_residual(&self) -> f64 {
        let fam = |lam: &[CMatrix; 4], re: &[CMatrix; 4], im: &[CMatrix; 4]| {
            (0..4)
                .map(|k| lam[k].dist_max(&(&re[k] + &i_times(&im[k]))))
                .fold(0.0, f64::max)
        };
        fam(&self.lambda_j, &self.sigma, &self.theta).max(fam(&self.lambda_jkl, &self.x, &self.y))
    }

    /// Largest deviation from the Hermiticity classes
    /// (σ, y anti-Hermitian; θ, x Hermitian).
    pub fn class_residual(&self) -> f64 {
        let anti = self.sigma.iter().chain(&self.y).map(CMatrix::anti_hermitian_deviation);
        let herm = self.theta.iter().chain(&self.x).map(CMatrix::hermitian_deviation);
        anti.chain(herm).fold(0.0, f64::max)
    }

    /// The real fluctuation part alone (θ = y = 0).
    pub fn real_part(&self) -> Self {
        let n = self.sigma[0].rows();
        Self {
            lambda_j: self.sigma.clone(),
            lambda_jkl: self.x.clone(),
            sigma: self.sigma.clone(),
            theta: zeros4(n),
            x: self.x.clone(),
            y: zeros4(n),
        }
    }

    /// The imaginary fluctuation part alone (σ = x = 0).
    pub fn imaginary_part(&self) -> Self {
        let n = self.sigma[0].rows();
        Self {
            lambda_j: std::array::from_fn(|k| i_times(&self.theta[k])),
            lambda_jkl: std::array::from_fn(|k| i_times(&self.y[k])),
            sigma: zeros4(n),
            theta: self.theta.clone(),
            x: zeros4(n),
            y: self.y.clone(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let f = |a: &[CMatrix; 4]| std::array::from_fn(|k| a[k].scale_real(s));
        Self {
            lambda_j: f(&self.lambda_j),
            lambda_jkl: f(&self.lambda_jkl),
            sigma: f(&self.sigma),
            theta: f(&self.theta),
            x: f(&self.x),
            y: f(&self.y),
        }
    }
}

/// Coefficients `(L′, H′, θ, y)` of a block operator; also used for
/// first-order variations.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub l_prime: [CMatrix; 4],
    pub h_prime: [CMatrix; 4],
    pub theta: [CMatrix; 4],
    pub y: [CMatrix; 4],
}

impl CoefficientSet {
    pub fn zero(n: usize) -> Self {
        Self {
            l_prime: zeros4(n),
            h_prime: zeros4(n),
            theta: zeros4(n),
            y: zeros4(n),
        }
    }

    /// `D′` on one charge block.
    pub fn d_prime(&self, space: &FermionSpace) -> CMatrix {
        space.dirac_from_coefficients(&self.l_prime, &self.h_prime)
    }

    /// `Θ = Σ γʲ ⊗ {iθⱼ, ·}`.
    pub fn theta_op(&self, space: &FermionSpace) -> CMatrix {
        let mut out = CMatrix::zeros(space.hilbert_dim(), space.hilbert_dim());
        for (g, th) in space.clifford().gammas().iter().zip(&self.theta) {
            out += &g.kron(&anticommutator_op(&i_times(th)));
        }
        out
    }

    /// `Y = Σ γʲγᵏγˡ ⊗ [iy_{jkl}, ·]`.
    pub fn y_op(&self, space: &FermionSpace) -> CMatrix {
        let mut out = CMatrix::zeros(space.hilbert_dim(), space.hilbert_dim());
        for (tg, y) in space.trigamma().products.iter().zip(&self.y) {
            out += &tg.kron(&commutator_op(&i_times(y)));
        }
        out
    }

    /// `blockdiag(D′ + T, D′ − T)` with `T = Θ + Y`.
    pub fn assemble(&self, space: &FermionSpace) -> CMatrix {
        let dp = self.d_prime(space);
        let t = &self.theta_op(space) + &self.y_op(space);
        charge_blocks(&(&dp + &t), &(&dp - &t))
    }

    /// Largest entrywise distance between corresponding coefficients.
    pub fn dist_max(&self, other: &Self) -> f64 {
        let fams = [
            (&self.l_prime, &other.l_prime),
            (&self.h_prime, &other.h_prime),
            (&self.theta, &other.theta),
            (&self.y, &other.y),
        ];
        fams.iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x.dist_max(y)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.l_prime
            .iter()
            .chain(&self.h_prime)
            .chain(&self.theta)
            .chain(&self.y)
            .map(CMatrix::max_abs)
            .fold(0.0, f64::max)
    }
}

/// A fluctuated product Dirac operator with its coefficients.
#[derive(Clone, Debug)]
pub struct FluctuatedDirac {
    pub coefficients: CoefficientSet,
    pub assembled: CMatrix,
}

impl FluctuatedDirac {
    pub fn from_coefficients(t: &ProductTriple, coefficients: CoefficientSet) -> Self {
        let assembled = coefficients.assemble(t.base().space());
        Self {
            coefficients,
            assembled,
        }
    }

    /// The unfluctuated `D₀`.
    pub fn vacuum(t: &ProductTriple) -> Self {
        let (l, h) = t.base().dirac().clone().into_parts();
        let n = t.n();
        Self::from_coefficients(
            t,
            CoefficientSet {
                l_prime: l,
                h_prime: h,
                theta: zeros4(n),
                y: zeros4(n),
            },
        )
    }

    pub fn d_prime(&self, t: &ProductTriple) -> CMatrix {
        self.coefficients.d_prime(t.base().space())
    }

    pub fn theta_op(&self, t: &ProductTriple) -> CMatrix {
        self.coefficients.theta_op(t.base().space())
    }

    pub fn y_op(&self, t: &ProductTriple) -> CMatrix {
        self.coefficients.y_op(t.base().space())
    }

    /// `‖assembled − blockdiag(D′ ± (Θ + Y))‖_max` from the stored coefficients.
    pub fn consistency_residual(&self, t: &ProductTriple) -> f64 {
        self.assembled.dist_max(&self.coefficients.assemble(t.base().space()))
    }
}

/// Computes `Λ` for the generators. With `symmetrize`, `ω` is replaced by
/// `(ω + ω*)/2`, which at the coefficient level takes the anti-Hermitian
/// part of `Λⱼ` and the Hermitian part of `Λ_{jkl}`; otherwise a
/// non-Hermitian `ω` is an error.
pub fn connes_one_form(
    t: &ProductTriple,
    gen: &OneFormGenerators,
    symmetrize: bool,
    tol: Tolerance,
) -> Result<FluctuationCoefficients, FluctuationError> {
    let n = t.n();
    let dirac = t.base().dirac();
    let mut lambda_j = zeros4(n);
    let mut lambda_jkl = zeros4(n);
    for (a, b) in gen.pairs() {
        let (a, b) = (a.value(), b.value());
        for k in 0..4 {
            lambda_j[k] += &a.matmul(&dirac.l()[k].commutator(b));
            lambda_jkl[k] += &a.matmul(&dirac.h()[k].commutator(b));
        }
    }
    if symmetrize {
        lambda_j = std::array::from_fn(|k| lambda_j[k].anti_hermitian_part());
        lambda_jkl = std::array::from_fn(|k| lambda_jkl[k].hermitian_part());
    } else {
        let deviation = lambda_j
            .iter()
            .map(CMatrix::anti_hermitian_deviation)
            .chain(lambda_jkl.iter().map(CMatrix::hermitian_deviation))
            .fold(0.0, f64::max);
        if deviation > tol.abs_eps {
            return Err(FluctuationError::NonHermitianOneForm { deviation });
        }
    }
    let mut sigma = zeros4(n);
    let mut theta = zeros4(n);
    let mut x = zeros4(n);
    let mut y = zeros4(n);
    for k in 0..4 {
        let s = t.split(&lambda_j[k])?;
        sigma[k] = s.x().clone();
        theta[k] = s.y().clone();
        let s = t.split(&lambda_jkl[k])?;
        x[k] = s.x().clone();
        y[k] = s.y().clone();
    }
    Ok(FluctuationCoefficients {
        lambda_j,
        lambda_jkl,
        sigma,
        theta,
        x,
        y,
    })
}

/// `L′ = L + σ`, `H′ = H + x`, with `θ`, `y` carried over.
pub fn total_fluctuation(t: &ProductTriple, coeffs: &FluctuationCoefficients) -> FluctuatedDirac {
    let dirac = t.base().dirac();
    let set = CoefficientSet {
        l_prime: std::array::from_fn(|k| &dirac.l()[k] + &coeffs.sigma[k]),
        h_prime: std::array::from_fn(|k| &dirac.h()[k] + &coeffs.x[k]),
        theta: coeffs.theta.clone(),
        y: coeffs.y.clone(),
    };
    FluctuatedDirac::from_coefficients(t, set)
}

/// Dense `D₀ + ω + JωJ⁻¹` with `ω = Σ l(a)[D₀, l(b)]` (symmetrized if asked).
pub fn connes_operator(t: &ProductTriple, gen: &OneFormGenerators, symmetrize: bool) -> CMatrix {
    let d0 = t.d0();
    let dim = t.hilbert_dim();
    let mut omega = CMatrix::zeros(dim, dim);
    for (a, b) in gen.pairs() {
        let la = t.left(a);
        let lb = t.left(b);
        omega += &la.matmul(&d0.commutator(&lb));
    }
    if symmetrize {
        omega = omega.hermitian_part();
    }
    let j_omega = t.conjugate_by_j(&omega).scale_real(f64::from(t.eps_prime()));
    &(d0 + &omega) + &j_omega
}

/// `U D U⁻¹` with `U = gauge_operator(u)`.
pub fn unitary_transform(t: &ProductTriple, u: &CMatrix, d: &CMatrix, tol: Tolerance) -> Result<CMatrix, FluctuationError> {
    let big_u = t.gauge_operator(u, tol)?;
    Ok(big_u.matmul(d).matmul(&big_u.adjoint()))
}

fn check_gauge_parameter(t: &ProductTriple, g: &CMatrix, tol: Tolerance) -> Result<(), FluctuationError> {
    let kind = t.kind();
    if !kind.algebra_membership(g, tol).map_err(ProductError::from)? {
        return Err(FluctuationError::NotInAlgebra);
    }
    let deviation = g.hermitian_deviation();
    if deviation > tol.abs_eps {
        return Err(FluctuationError::NotHermitian { deviation });
    }
    Ok(())
}

/// First-order variation of the coefficients under the imaginary gauge
/// generator `i·g` (`g` Hermitian in the real algebra):
///
/// ```text
/// δθⱼ = [g, L′ⱼ]     δy = [g, H′]
/// δL′ⱼ = −[g, θⱼ]    δH′ = −[g, y]
/// ```
///
/// A universal derivative coefficient becomes a charged function
/// coefficient and vice versa.
pub fn infinitesimal_gauge(
    t: &ProductTriple,
    g: &CMatrix,
    fd: &FluctuatedDirac,
    tol: Tolerance,
) -> Result<CoefficientSet, FluctuationError> {
    check_gauge_parameter(t, g, tol)?;
    let s = &fd.coefficients;
    Ok(CoefficientSet {
        l_prime: std::array::from_fn(|k| g.commutator(&s.theta[k]).scale_real(-1.0)),
        h_prime: std::array::from_fn(|k| g.commutator(&s.y[k]).scale_real(-1.0)),
        theta: std::array::from_fn(|k| g.commutator(&s.l_prime[k])),
        y: std::array::from_fn(|k| g.commutator(&s.h_prime[k])),
    })
}

/// Dense `[adjoint_lie(i·g), D]`.
pub fn dense_infinitesimal_gauge(t: &ProductTriple, g: &CMatrix, d: &CMatrix, tol: Tolerance) -> Result<CMatrix, FluctuationError> {
    check_gauge_parameter(t, g, tol)?;
    let a = t.split(&i_times(g))?;
    Ok(t.adjoint_lie(&a, tol)?.commutator(d))
}

/// `R = e^{iπΓ/4} = (1 + iΓ)/√2`.
pub fn chiral_rotation(t: &ProductTriple) -> CMatrix {
    let id = CMatrix::identity(t.hilbert_dim());
    (&id + &i_times(t.gamma())).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// `R D R⁻¹`, evaluated densely (equal to `iΓD` for Γ-odd `D`), with the
/// coefficients re-extracted.
pub fn chiral_rotate(t: &ProductTriple, fd: &FluctuatedDirac, tol: Tolerance) -> Result<FluctuatedDirac, FluctuationError> {
    let r = chiral_rotation(t);
    let rotated = r.matmul(&fd.assembled).matmul(&r.adjoint());
    extract_coefficients(t, &rotated, tol).map(|(fd, _)| fd)
}

/// Coefficient form of the chiral rotation. With `γʲγᵏγˡ = η·γ·γᵐ`:
///
/// ```text
/// θ′ₘ = η·H′_{jkl}    y′_{jkl} = η·L′ₘ
/// L′′ₘ = −η·y_{jkl}   H′′_{jkl} = −η·θₘ
/// ```
pub fn chiral_coefficient_map(t: &ProductTriple, fd: &FluctuatedDirac) -> CoefficientSet {
    let tri = t.base().space().trigamma();
    let s = &fd.coefficients;
    let mut out = CoefficientSet::zero(t.n());
    for k in 0..4 {
        let m = tri.dual_index[k];
        let eta = f64::from(tri.eta[k]);
        out.theta[m] = s.h_prime[k].scale_real(eta);
        out.y[k] = s.l_prime[m].scale_real(eta);
        out.l_prime[m] = s.y[k].scale_real(-eta);
        out.h_prime[k] = s.theta[m].scale_real(-eta);
    }
    out
}

/// `Tr_V(G*·X)/dim V` as an `n² × n²` matrix.
fn clifford_component(x: &CMatrix, g: &CMatrix, nn: usize) -> CMatrix {
    let dv = g.rows();
    let mut out = CMatrix::zeros(nn, nn);
    for v in 0..dv {
        for w in 0..dv {
            let coef = g[(v, w)].conj();
            if coef.norm() == 0.0 {
                continue;
            }
            out += &x.block(v * nn, w * nn, nn, nn).scale(coef);
        }
    }
    out.scale_real(1.0 / dv as f64)
}

/// `Σ_c M_{(r,c),(r′,c)}`.
fn partial_trace_right(m: &CMatrix, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, rp| (0..n).map(|col| m[(r * n + col, rp * n + col)]).sum())
}

/// Trace-free `A` with `M = [A, ·]`.
fn commutator_coefficient(m: &CMatrix, n: usize) -> CMatrix {
    partial_trace_right(m, n).scale_real(1.0 / n as f64)
}

/// `A` with `M = {A, ·}`.
fn anticommutator_coefficient(m: &CMatrix, n: usize) -> CMatrix {
    let pt = partial_trace_right(m, n);
    let tr_a = pt.trace() / (2.0 * n as f64);
    let mut a = pt;
    for i in 0..n {
        a[(i, i)] -= tr_a;
    }
    a.scale_real(1.0 / n as f64)
}

/// Projects `d` onto the four coefficient families using trace
/// orthogonality of the Clifford products. Returns the coefficients and
/// `‖d − reassembled‖_max`; fails with `NotInSpan` above `tol.abs_eps`.
pub fn extract_coefficients(t: &ProductTriple, d: &CMatrix, tol: Tolerance) -> Result<(FluctuatedDirac, f64), FluctuationError> {
    let space = t.base().space();
    let n = t.n();
    let nn = n * n;
    let [pp, _, _, mm] = split_blocks(d);
    let dp = (&pp + &mm).scale_real(0.5);
    let tp = (&pp - &mm).scale_real(0.5);
    let minus_i = c(0.0, -1.0);
    let gammas = space.clifford().gammas();
    let tri = &space.trigamma().products;
    let set = CoefficientSet {
        l_prime: std::array::from_fn(|k| commutator_coefficient(&clifford_component(&dp, &gammas[k], nn), n)),
        h_prime: std::array::from_fn(|k| anticommutator_coefficient(&clifford_component(&dp, &tri[k], nn), n)),
        theta: std::array::from_fn(|k| anticommutator_coefficient(&clifford_component(&tp, &gammas[k], nn), n).scale(minus_i)),
        y: std::array::from_fn(|k| commutator_coefficient(&clifford_component(&tp, &tri[k], nn), n).scale(minus_i)),
    };
    let fd = FluctuatedDirac::from_coefficients(t, set);
    let residual = fd.assembled.dist_max(d);
    if residual > tol.abs_eps {
        return Err(FluctuationError::NotInSpan { residual });
    }
    Ok((fd, residual))
}

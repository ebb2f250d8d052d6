//! Axiom checks shared by matrix geometries, the internal triple and the
//! product triple.

use serde::{Deserialize, Serialize};

use crate::numerics::{CMatrix, SparseCMatrix, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    pub residual: f64,
}

impl AxiomCheck {
    fn new(residual: f64, tol: f64) -> Self {
        Self {
            pass: residual <= tol,
            residual,
        }
    }
}

/// Per-axiom outcome. `chirality` is absent for odd structures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub hermitian: AxiomCheck,
    pub reality: AxiomCheck,
    pub first_order: AxiomCheck,
    pub chirality: Option<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.hermitian.pass
            && self.reality.pass
            && self.first_order.pass
            && self.chirality.is_none_or(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        [
            Some(self.hermitian.residual),
            Some(self.reality.residual),
            Some(self.first_order.residual),
            self.chirality.map(|c| c.residual),
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

/// Fermion-space data needed to test a candidate Dirac operator: the real
/// structure `J = K∘conj`, its sign `ε′`, an optional grading `Γ`, and the
/// left action of a real spanning set of the algebra.
#[derive(Clone, Debug)]
pub struct AxiomContext {
    real_structure: SparseCMatrix,
    real_structure_adj: SparseCMatrix,
    eps_prime: f64,
    chirality: Option<SparseCMatrix>,
    left_basis: Vec<SparseCMatrix>,
    right_basis: Vec<SparseCMatrix>,
}

impl AxiomContext {
    /// `left_basis` holds `l(a)` for a real basis of the algebra. Right
    /// actions are derived as `r(b) = J l(b*) J⁻¹ = K·l(b)ᵀ·K*`.
    pub fn new(
        real_structure: &CMatrix,
        eps_prime: i8,
        chirality: Option<&CMatrix>,
        left_basis: &[CMatrix],
    ) -> Self {
        let k = SparseCMatrix::from_dense(real_structure);
        let k_adj = k.adjoint();
        let right_basis = left_basis
            .iter()
            .map(|l| SparseCMatrix::from_dense(&k_adj.dense_mul(&k.mul_dense(&l.transpose()))))
            .collect();
        Self {
            real_structure: k,
            real_structure_adj: k_adj,
            eps_prime: f64::from(eps_prime),
            chirality: chirality.map(SparseCMatrix::from_dense),
            left_basis: left_basis.iter().map(SparseCMatrix::from_dense).collect(),
            right_basis,
        }
    }

    /// `J X J⁻¹ = K·conj(X)·K*`.
    pub fn conjugate_by_j(&self, x: &CMatrix) -> CMatrix {
        self.real_structure_adj
            .dense_mul(&self.real_structure.mul_dense(&x.conj()))
    }

    pub fn right_basis(&self) -> &[SparseCMatrix] {
        &self.right_basis
    }

    pub fn left_basis(&self) -> &[SparseCMatrix] {
        &self.left_basis
    }

    pub fn verify(&self, d: &CMatrix, tol: Tolerance) -> AxiomReport {
        let eps = tol.abs_eps;
        let hermitian = AxiomCheck::new(d.hermitian_deviation(), eps);
        let reality = AxiomCheck::new(d.dist_max(&self.conjugate_by_j(d).scale_real(self.eps_prime)), eps);
        let first_order = AxiomCheck::new(self.first_order_residual(d), eps);
        let chirality = self.chirality.as_ref().map(|g| {
            let anti = &g.dense_mul(d) + &g.mul_dense(d);
            AxiomCheck::new(anti.max_abs(), eps)
        });
        AxiomReport {
            hermitian,
            reality,
            first_order,
            chirality,
        }
    }

    /// `max_{a,b} ‖[[D, l(a)], r(b)]‖_max` over the basis pairs.
    pub fn first_order_residual(&self, d: &CMatrix) -> f64 {
        let mut worst = 0.0f64;
        for la in &self.left_basis {
            let comm = &la.dense_mul(d) - &la.mul_dense(d);
            for rb in &self.right_basis {
                let double = &rb.dense_mul(&comm) - &rb.mul_dense(&comm);
                worst = worst.max(double.max_abs());
            }
        }
        worst
    }
}

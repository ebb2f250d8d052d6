//! Irreducible Clifford modules of type `(p, q)`.
//!
//! Generators are built from tensor products of Pauli matrices:
//! `e_{2k} = Z^{⊗k} ⊗ X ⊗ I…`, `e_{2k+1} = Z^{⊗k} ⊗ Y ⊗ I…`, and for odd
//! `p + q` a final `Z^{⊗m}`. The first `p` gammas are the Hermitian `e_j`
//! (squaring to `+1`); the remaining `q` are `i·e_j` (anti-Hermitian,
//! squaring to `−1`).
//!
//! For even `p + q` the chirality is `γ = c·γ⁰γ¹…`, with `c` the first of
//! `1, i` making `γ` Hermitian and involutive. For `(0, 4)` this gives
//! `γ = γ¹γ²γ³γ⁴`.
//!
//! The real structure `C` is stored through its unitary part `K`, so that
//! `C v = K·conj(v)`. `K` is the first ordered product of the `e_j` (by
//! subset bitmask) satisfying `C γʲ C⁻¹ = ε′ γʲ`.

use crate::numerics::{c, CMatrix};

const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliffordError {
    #[error("unsupported signature ({p},{q}): p + q must be at most 5")]
    UnsupportedSignature { p: usize, q: usize },
    #[error("operation needs p + q = 4, got ({p},{q})")]
    WrongSignature { p: usize, q: usize },
    #[error("inconsistent Clifford structure: {0}")]
    Inconsistent(String),
}

/// Signs `(ε, ε′, ε″)` of a real structure: `J² = ε`, `JD = ε′DJ`,
/// `JΓ = ε″ΓJ`. `ε″` only exists in even KO-dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoSigns {
    pub epsilon: i8,
    pub epsilon_prime: i8,
    pub epsilon_double_prime: Option<i8>,
}

/// Standard sign table for KO-dimension `s mod 8`.
pub fn ko_sign_table(s: u8) -> KoSigns {
    const EPS: [i8; 8] = [1, 1, -1, -1, -1, -1, 1, 1];
    const EPS_PRIME: [i8; 8] = [1, -1, 1, 1, 1, -1, 1, 1];
    const EPS_DOUBLE_PRIME: [i8; 8] = [1, 0, -1, 0, 1, 0, -1, 0];
    let s = (s % 8) as usize;
    KoSigns {
        epsilon: EPS[s],
        epsilon_prime: EPS_PRIME[s],
        epsilon_double_prime: s.is_multiple_of(2).then_some(EPS_DOUBLE_PRIME[s]),
    }
}

/// `q − p mod 8`.
pub fn ko_dimension(p: usize, q: usize) -> u8 {
    ((q as i64 - p as i64).rem_euclid(8)) as u8
}

#[derive(Clone, Debug)]
pub struct CliffordModule {
    p: usize,
    q: usize,
    s: u8,
    gammas: Vec<CMatrix>,
    gamma5: Option<CMatrix>,
    conj_unitary: CMatrix,
    signs: KoSigns,
}

fn pauli() -> [CMatrix; 4] {
    let z0 = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMatrix::identity(2),
        CMatrix::from_vec(2, 2, vec![z0, one, one, z0]).unwrap(),
        CMatrix::from_vec(2, 2, vec![z0, -i, i, z0]).unwrap(),
        CMatrix::from_vec(2, 2, vec![one, z0, z0, -one]).unwrap(),
    ]
}

fn tensor_word(word: &[usize]) -> CMatrix {
    let sigma = pauli();
    word.iter()
        .fold(CMatrix::identity(1), |acc, &k| acc.kron(&sigma[k]))
}

fn euclidean_generators(d: usize) -> Vec<CMatrix> {
    let m = d / 2;
    let mut gens = Vec::with_capacity(d);
    for k in 0..m {
        for slot in [1, 2] {
            let word: Vec<usize> = (0..m)
                .map(|t| match t.cmp(&k) {
                    std::cmp::Ordering::Less => 3,
                    std::cmp::Ordering::Equal => slot,
                    std::cmp::Ordering::Greater => 0,
                })
                .collect();
            gens.push(tensor_word(&word));
        }
    }
    if d % 2 == 1 {
        gens.push(tensor_word(&vec![3; m]));
    }
    gens
}

fn ordered_product(mats: &[CMatrix], indices: impl IntoIterator<Item = usize>, dim: usize) -> CMatrix {
    indices
        .into_iter()
        .fold(CMatrix::identity(dim), |acc, j| acc.matmul(&mats[j]))
}

impl CliffordModule {
    pub fn new(p: usize, q: usize) -> Result<Self, CliffordError> {
        let d = p + q;
        if d > 5 {
            return Err(CliffordError::UnsupportedSignature { p, q });
        }
        let dim = 1usize << (d / 2);
        let euclid = euclidean_generators(d);
        let gammas: Vec<CMatrix> = euclid
            .iter()
            .enumerate()
            .map(|(j, e)| if j < p { e.clone() } else { e.scale(c(0.0, 1.0)) })
            .collect();
        let s = ko_dimension(p, q);
        let signs = ko_sign_table(s);

        let gamma5 = if d.is_multiple_of(2) {
            let prod = ordered_product(&gammas, 0..d, dim);
            let id = CMatrix::identity(dim);
            let chosen = [c(1.0, 0.0), c(0.0, 1.0)].into_iter().map(|ph| prod.scale(ph)).find(|g| {
                g.matmul(g).dist_max(&id) <= STRUCTURE_TOL && g.hermitian_deviation() <= STRUCTURE_TOL
            });
            Some(chosen.ok_or_else(|| CliffordError::Inconsistent("no chirality phase".into()))?)
        } else {
            None
        };

        let eps_prime = f64::from(signs.epsilon_prime);
        let conj_unitary = (0u32..(1 << d))
            .map(|mask| ordered_product(&euclid, (0..d).filter(|j| mask & (1 << j) != 0), dim))
            .find(|k| {
                let k_inv = k.adjoint();
                gammas.iter().all(|g| {
                    k.matmul(&g.conj()).matmul(&k_inv).dist_max(&g.scale_real(eps_prime)) <= STRUCTURE_TOL
                })
            })
            .ok_or_else(|| CliffordError::Inconsistent(format!("no charge conjugation for ({p},{q})")))?;

        let module = Self {
            p,
            q,
            s,
            gammas,
            gamma5,
            conj_unitary,
            signs,
        };
        let eps_residual = module.real_structure_square_residual();
        if eps_residual > STRUCTURE_TOL {
            return Err(CliffordError::Inconsistent(format!(
                "C² ≠ ε for ({p},{q}), residual {eps_residual:e}"
            )));
        }
        if let (Some(g5), Some(epp)) = (&module.gamma5, signs.epsilon_double_prime) {
            let k = &module.conj_unitary;
            let lhs = k.matmul(&g5.conj()).matmul(&k.adjoint());
            if lhs.dist_max(&g5.scale_real(f64::from(epp))) > STRUCTURE_TOL {
                return Err(CliffordError::Inconsistent("Cγ ≠ ε″γC".into()));
            }
        }
        Ok(module)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// KO-dimension `q − p mod 8`.
    pub fn ko_dimension(&self) -> u8 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.gammas.first().map_or(1, CMatrix::rows)
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    pub fn gamma(&self, j: usize) -> &CMatrix {
        &self.gammas[j]
    }

    pub fn chirality(&self) -> Option<&CMatrix> {
        self.gamma5.as_ref()
    }

    /// Unitary part `K` of the antilinear real structure `C v = K·conj(v)`.
    pub fn conj_unitary(&self) -> &CMatrix {
        &self.conj_unitary
    }

    pub fn signs(&self) -> KoSigns {
        self.signs
    }

    /// `‖K·conj(K) − ε·I‖_max`.
    pub fn real_structure_square_residual(&self) -> f64 {
        let k = &self.conj_unitary;
        let eps = f64::from(self.signs.epsilon);
        k.matmul(&k.conj()).dist_max(&CMatrix::identity(self.dim()).scale_real(eps))
    }

    /// Every ordered product `γ^{j1}⋯γ^{jr}` with `j1 < … < jr`, indexed by
    /// subset bitmask. These form a basis of `End(V)` in even dimension and
    /// are orthonormal under `Tr(A*B)/dim V`.
    pub fn product_basis(&self) -> Vec<(Vec<usize>, CMatrix)> {
        let d = self.gammas.len();
        (0u32..(1 << d))
            .map(|mask| {
                let idx: Vec<usize> = (0..d).filter(|j| mask & (1 << j) != 0).collect();
                let prod = ordered_product(&self.gammas, idx.iter().copied(), self.dim());
                (idx, prod)
            })
            .collect()
    }
}

/// Products `γʲγᵏγˡ` for `j < k < l` of a four-generator module, with the
/// complementary index `m` and sign `η` defined by `γʲγᵏγˡ = η·γ·γᵐ`.
#[derive(Clone, Debug)]
pub struct TrigammaBasis {
    pub triples: Vec<[usize; 3]>,
    pub products: Vec<CMatrix>,
    pub dual_index: Vec<usize>,
    pub eta: Vec<i8>,
}

pub fn trigamma_products(module: &CliffordModule) -> Result<TrigammaBasis, CliffordError> {
    if module.p() + module.q() != 4 {
        return Err(CliffordError::WrongSignature {
            p: module.p(),
            q: module.q(),
        });
    }
    let g5 = module
        .chirality()
        .ok_or_else(|| CliffordError::Inconsistent("missing chirality".into()))?;
    let mut basis = TrigammaBasis {
        triples: Vec::with_capacity(4),
        products: Vec::with_capacity(4),
        dual_index: Vec::with_capacity(4),
        eta: Vec::with_capacity(4),
    };
    for j in 0..4 {
        for k in j + 1..4 {
            for l in k + 1..4 {
                let m = 6 - j - k - l;
                let prod = module.gamma(j).matmul(module.gamma(k)).matmul(module.gamma(l));
                let dual = g5.matmul(module.gamma(m));
                let eta = if prod.dist_max(&dual) <= STRUCTURE_TOL {
                    1
                } else if prod.dist_max(&dual.scale_real(-1.0)) <= STRUCTURE_TOL {
                    -1
                } else {
                    return Err(CliffordError::Inconsistent(format!(
                        "γ{j}γ{k}γ{l} is not ±γγ{m}"
                    )));
                };
                basis.triples.push([j, k, l]);
                basis.products.push(prod);
                basis.dual_index.push(m);
                basis.eta.push(eta);
            }
        }
    }
    Ok(basis)
}

/// Sign of the permutation `idx` of `0..idx.len()`.
pub fn permutation_sign(idx: &[usize]) -> i8 {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

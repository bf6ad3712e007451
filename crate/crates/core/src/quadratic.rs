//! Payoffs as quadratic forms.
//!
//! For fixed `u_B`, each outcome amplitude `⟨jk|ψ_f⟩` is linear in A's real
//! 4-vector: `⟨jk|ψ_f⟩ = Σ_l u_A[l] M_jk(u_B)[l]`. Hence
//! `⟨$_A⟩ = Σ a_jk |⟨u_A, M_jk⟩|² = u_Aᵀ P_A(u_B) u_A` with
//! `P_A = Re Σ a_jk M_jk M_jk†`. Player B's form uses the same vectors with the
//! roles of the players exchanged: `N_00 = M_00`, `N_01 = M_10`,
//! `N_10 = M_01`, `N_11 = M_11`, all evaluated at `u_A`.
//!
//! The largest eigenvalue of a form is the best payoff the owning player can
//! reach against the fixed opponent, and because payoffs are linear in the
//! player's own measure no mixed strategy does better.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::BimatrixGame;
use crate::ewl::{DiscreteMixedStrategy, EntanglerSetting};
use crate::su2::Su2Element;

/// Eigenvalues within this distance of the largest one share its eigenspace.
pub const EIGEN_TIE_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Self::A => Self::B,
            Self::B => Self::A,
        }
    }
}

/// The amplitude vectors `M_jk(v)`, indexed `m[j][k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MVectors {
    pub m: [[Vector4<Complex64>; 2]; 2],
}

impl MVectors {
    pub fn get(&self, j: usize, k: usize) -> &Vector4<Complex64> {
        &self.m[j][k]
    }

    /// `⟨u, M_jk⟩ = Σ_l u[l] M_jk[l]` (no conjugation: `u` is real).
    pub fn amplitude(&self, u: &[f64; 4], j: usize, k: usize) -> Complex64 {
        self.m[j][k].iter().zip(u).map(|(m, &x)| m * x).sum()
    }

    /// The exchanged vectors used for the other player's form.
    fn exchanged(self) -> Self {
        let [[m00, m01], [m10, m11]] = self.m;
        Self {
            m: [[m00, m10], [m01, m11]],
        }
    }
}

/// The four amplitude vectors for opponent vector `v` (1-based components
/// `v¹..v⁴` below are `v[0]..v[3]`).
pub fn m_vectors(setting: EntanglerSetting, v: &[f64; 4]) -> MVectors {
    let (s, c) = setting.gamma().sin_cos();
    let [v1, v2, v3, v4] = *v;
    let cx = |re: f64, im: f64| Complex64::new(re, im);
    MVectors {
        m: [
            [
                Vector4::new(cx(v1, v4 * c), cx(-v3 * s, 0.0), cx(-v2 * s, 0.0), cx(-v4, v1 * c)),
                Vector4::new(cx(-v3 * c, v2), cx(0.0, v4 * s), cx(0.0, v1 * s), cx(-v2 * c, -v3)),
            ],
            [
                Vector4::new(cx(0.0, v3 * s), cx(-v4 * c, v1), cx(-v1 * c, -v4), cx(0.0, v2 * s)),
                Vector4::new(cx(v4 * s, 0.0), cx(-v2, -v3 * c), cx(v3, -v2 * c), cx(v1 * s, 0.0)),
            ],
        ],
    }
}

/// `N_jk(u_A)`: the vectors whose overlaps with `u_B` give the amplitudes.
pub fn n_vectors(setting: EntanglerSetting, u_a: &[f64; 4]) -> MVectors {
    m_vectors(setting, u_a).exchanged()
}

/// Real symmetric matrix `P` with `payoff = uᵀ P u` for the owner's vector `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffQuadraticForm {
    pub matrix: Matrix4<f64>,
    pub gamma: f64,
    pub owner: Player,
}

impl PayoffQuadraticForm {
    pub fn value(&self, u: &[f64; 4]) -> f64 {
        let v = Vector4::from(*u);
        v.dot(&(self.matrix * v))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.matrix[(r, c)]))
    }
}

fn form_from_vectors(x: &[[f64; 2]; 2], vectors: &MVectors) -> Matrix4<f64> {
    let mut h = Matrix4::<f64>::zeros();
    for j in 0..2 {
        for k in 0..2 {
            let m = vectors.get(j, k);
            for r in 0..4 {
                for c in 0..4 {
                    h[(r, c)] += x[j][k] * (m[r] * m[c].conj()).re;
                }
            }
        }
    }
    // exact symmetry, independent of rounding in the accumulation
    (h + h.transpose()) * 0.5
}

pub fn payoff_matrix_a(game: &BimatrixGame, setting: EntanglerSetting, u_b: &Su2Element) -> PayoffQuadraticForm {
    PayoffQuadraticForm {
        matrix: form_from_vectors(&game.a, &m_vectors(setting, &u_b.to_vector())),
        gamma: setting.gamma(),
        owner: Player::A,
    }
}

pub fn payoff_matrix_b(game: &BimatrixGame, setting: EntanglerSetting, u_a: &Su2Element) -> PayoffQuadraticForm {
    PayoffQuadraticForm {
        matrix: form_from_vectors(&game.b, &n_vectors(setting, &u_a.to_vector())),
        gamma: setting.gamma(),
        owner: Player::B,
    }
}

/// Form of `player` against a fixed pure opponent strategy.
pub fn payoff_matrix(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    player: Player,
    opponent: &Su2Element,
) -> PayoffQuadraticForm {
    match player {
        Player::A => payoff_matrix_a(game, setting, opponent),
        Player::B => payoff_matrix_b(game, setting, opponent),
    }
}

/// `P̄ = Σ_j q_j P(u_j)` over the opponent's mixed strategy.
pub fn averaged_matrix(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    player: Player,
    mu_opponent: &DiscreteMixedStrategy,
) -> PayoffQuadraticForm {
    let matrix = mu_opponent
        .iter()
        .map(|(q, u)| payoff_matrix(game, setting, player, u).matrix * q)
        .fold(Matrix4::zeros(), |acc, m| acc + m);
    PayoffQuadraticForm {
        matrix,
        gamma: setting.gamma(),
        owner: player,
    }
}

/// Largest eigenvalue of a form and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub value: f64,
    /// Canonically ordered orthonormal basis of the top eigenspace.
    pub eigenspace: Vec<[f64; 4]>,
    /// Deterministic representative taken from `eigenspace`.
    pub canonical: [f64; 4],
}

impl BestResponse {
    pub fn canonical_element(&self) -> Su2Element {
        Su2Element::from_vector_unchecked(self.canonical)
    }
}

fn argmax_abs(v: &Vector4<f64>) -> usize {
    let mut best = 0;
    for i in 1..4 {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    best
}

/// Best pure response to the opponent encoded in `form`.
///
/// The eigenspace basis does not depend on the rotation the eigen-solver picks
/// inside a degenerate eigenspace: it is rebuilt by pivoted Gram-Schmidt on the
/// projections of the standard basis vectors, preferring lower indices on ties,
/// and each vector is signed so its largest component is positive.
pub fn best_response_pure(form: &PayoffQuadraticForm) -> BestResponse {
    let eig = SymmetricEigen::new(form.matrix);
    let lambda_max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut projector = Matrix4::<f64>::zeros();
    let mut dim = 0;
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if lambda_max - ev <= EIGEN_TIE_TOL {
            let v = eig.eigenvectors.column(k);
            projector += v * v.transpose();
            dim += 1;
        }
    }

    let mut residuals: Vec<Vector4<f64>> = (0..4).map(|i| projector.column(i).into_owned()).collect();
    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut pick = 0;
        for i in 1..4 {
            if residuals[i].norm() > residuals[pick].norm() + 1e-9 {
                pick = i;
            }
        }
        let mut v = residuals[pick] / residuals[pick].norm();
        if v[argmax_abs(&v)] < 0.0 {
            v = -v;
        }
        for r in residuals.iter_mut() {
            *r -= v * v.dot(r);
        }
        basis.push(v);
    }

    let canonical = *basis
        .iter()
        .min_by_key(|v| argmax_abs(v))
        .expect("top eigenspace is never empty");
    let to_array = |v: &Vector4<f64>| [v[0], v[1], v[2], v[3]];
    BestResponse {
        value: lambda_max,
        eigenspace: basis.iter().map(to_array).collect(),
        canonical: to_array(&canonical),
    }
}

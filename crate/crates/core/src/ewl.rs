//! Direct simulation of the EWL protocol.
//!
//! `|ψ_f⟩ = J†(U_A ⊗ U_B) J |00⟩`, measured in the computational basis
//! ordered `(00, 01, 10, 11)`. Qubit A is the left tensor factor, so outcome
//! `(i, j)` sits at index `2i + j`.
//!
//! Everything else in the crate that produces a payoff is tested against this
//! module.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::su2::Su2Element;

const GAMMA_SLACK: f64 = 1e-12;
const PROB_SUM_TOL: f64 = 1e-12;

/// Entanglement parameter `γ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EntanglerSetting {
    gamma: f64,
}

impl EntanglerSetting {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::NonFinite { field: "gamma", value: gamma });
        }
        if !(-GAMMA_SLACK..=FRAC_PI_2 + GAMMA_SLACK).contains(&gamma) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        Ok(Self {
            gamma: gamma.clamp(0.0, FRAC_PI_2),
        })
    }

    pub fn unentangled() -> Self {
        Self { gamma: 0.0 }
    }

    pub fn maximal() -> Self {
        Self { gamma: FRAC_PI_2 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `J = cos(γ/2) I⊗I + i sin(γ/2) σx⊗σx`.
    pub fn matrix(&self) -> Matrix4<Complex64> {
        let (s, c) = (self.gamma / 2.0).sin_cos();
        let d = Complex64::new(c, 0.0);
        let o = Complex64::new(0.0, s);
        let z = Complex64::ZERO;
        #[rustfmt::skip]
        let j = Matrix4::new(
            d, z, z, o,
            z, d, o, z,
            z, o, d, z,
            o, z, z, d,
        );
        j
    }
}

impl TryFrom<f64> for EntanglerSetting {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        Self::new(gamma)
    }
}

impl From<EntanglerSetting> for f64 {
    fn from(s: EntanglerSetting) -> f64 {
        s.gamma
    }
}

/// The entangling gate `J(γ)`.
pub fn entangler(setting: EntanglerSetting) -> Matrix4<Complex64> {
    setting.matrix()
}

/// Two-qubit pure state over `(00, 01, 10, 11)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amplitudes: Vector4<Complex64>,
}

impl TwoQubitState {
    pub fn basis(index: usize) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[index] = Complex64::ONE;
        Self { amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vector4<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &Vector4<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[2 * i + j]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn apply(&self, op: &Matrix4<Complex64>) -> Self {
        Self {
            amplitudes: op * self.amplitudes,
        }
    }
}

/// Intermediate states of one protocol run.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolTrace {
    pub initial: TwoQubitState,
    pub entangled: TwoQubitState,
    pub played: TwoQubitState,
    pub final_state: TwoQubitState,
}

/// Run the protocol and keep every intermediate state.
pub fn run_protocol(setting: EntanglerSetting, u_a: &Su2Element, u_b: &Su2Element) -> ProtocolTrace {
    let j = setting.matrix();
    let initial = TwoQubitState::basis(0);
    let entangled = initial.apply(&j);
    let moves = u_a.matrix().kronecker(&u_b.matrix());
    let played = entangled.apply(&moves);
    let final_state = played.apply(&j.adjoint());
    ProtocolTrace {
        initial,
        entangled,
        played,
        final_state,
    }
}

pub fn final_state(setting: EntanglerSetting, u_a: &Su2Element, u_b: &Su2Element) -> TwoQubitState {
    run_protocol(setting, u_a, u_b).final_state
}

/// `p_ij = |⟨ij|ψ⟩|²`, indexed `2i + j`.
pub fn outcome_probs(state: &TwoQubitState) -> [f64; 4] {
    std::array::from_fn(|k| state.amplitudes[k].norm_sqr())
}

fn weighted(m: &[[f64; 2]; 2], p: &[f64; 4]) -> f64 {
    m[0][0] * p[0] + m[0][1] * p[1] + m[1][0] * p[2] + m[1][1] * p[3]
}

/// Expected payoffs `(⟨$_A⟩, ⟨$_B⟩)` for pure quantum strategies.
pub fn pure_payoffs(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    u_a: &Su2Element,
    u_b: &Su2Element,
) -> (f64, f64) {
    let p = outcome_probs(&final_state(setting, u_a, u_b));
    (weighted(&game.a, &p), weighted(&game.b, &p))
}

/// A finite convex combination of Dirac measures on SU(2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixedRepr", into = "MixedRepr")]
pub struct DiscreteMixedStrategy {
    support: Vec<Su2Element>,
    probs: Vec<f64>,
}

impl DiscreteMixedStrategy {
    pub fn new(support: Vec<Su2Element>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidMixedStrategy("empty support".into()));
        }
        if support.len() != probs.len() {
            return Err(Error::InvalidMixedStrategy(format!(
                "{} strategies but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidMixedStrategy(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidMixedStrategy(format!("probabilities sum to {total}")));
        }
        Ok(Self { support, probs })
    }

    pub fn pure(u: Su2Element) -> Self {
        Self {
            support: vec![u],
            probs: vec![1.0],
        }
    }

    /// Uniform weights over `support`.
    pub fn uniform(support: Vec<Su2Element>) -> Result<Self> {
        let n = support.len();
        if n == 0 {
            return Err(Error::InvalidMixedStrategy("empty support".into()));
        }
        Self::new(support, vec![1.0 / n as f64; n])
    }

    /// Drop entries with weight at or below `threshold` and renormalise.
    pub fn from_weights(support: &[Su2Element], weights: &[f64], threshold: f64) -> Result<Self> {
        let kept: Vec<(Su2Element, f64)> = support
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > threshold)
            .map(|(u, &w)| (*u, w))
            .collect();
        let total: f64 = kept.iter().map(|(_, w)| w).sum();
        if kept.is_empty() || total <= 0.0 {
            return Err(Error::InvalidMixedStrategy("no positive weight".into()));
        }
        let (s, p) = kept.into_iter().map(|(u, w)| (u, w / total)).unzip();
        Self::new(s, p)
    }

    pub fn support(&self) -> &[Su2Element] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Su2Element)> {
        self.probs.iter().copied().zip(&self.support)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.support.len() == 1
    }
}

#[derive(Serialize, Deserialize)]
struct MixedRepr {
    support: Vec<Su2Element>,
    probs: Vec<f64>,
}

impl TryFrom<MixedRepr> for DiscreteMixedStrategy {
    type Error = Error;

    fn try_from(r: MixedRepr) -> Result<Self> {
        Self::new(r.support, r.probs)
    }
}

impl From<DiscreteMixedStrategy> for MixedRepr {
    fn from(m: DiscreteMixedStrategy) -> Self {
        Self {
            support: m.support,
            probs: m.probs,
        }
    }
}

/// `Σ_i Σ_j p_i q_j ⟨$_X(U_A^(i), U_B^(j))⟩` for both players.
pub fn mixed_payoffs(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    mu_a: &DiscreteMixedStrategy,
    mu_b: &DiscreteMixedStrategy,
) -> (f64, f64) {
    let mut total = (0.0, 0.0);
    for (p, u_a) in mu_a.iter() {
        for (q, u_b) in mu_b.iter() {
            let (pa, pb) = pure_payoffs(game, setting, u_a, u_b);
            total.0 += p * q * pa;
            total.1 += p * q * pb;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{expected_payoffs, ClassicalMixedProfile};
    use crate::games;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn approx_c(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn entangler_examples() {
        let j0 = entangler(EntanglerSetting::unentangled());
        assert_eq!(j0, Matrix4::identity());

        let j = entangler(EntanglerSetting::maximal());
        let d = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let o = Complex64::new(0.0, FRAC_1_SQRT_2);
        for k in 0..4 {
            assert!(approx_c(j[(k, k)], d, 1e-15));
            assert!(approx_c(j[(k, 3 - k)], o, 1e-15));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let s = EntanglerSetting::new(rng.random_range(0.0..FRAC_PI_2)).unwrap();
            let j = entangler(s);
            let err = (j * j.adjoint() - Matrix4::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn entangler_rejects_out_of_range() {
        assert!(EntanglerSetting::new(-0.1).is_err());
        assert!(EntanglerSetting::new(2.0).is_err());
        assert!(EntanglerSetting::new(f64::NAN).is_err());
        assert_eq!(EntanglerSetting::new(FRAC_PI_2 + 1e-13).unwrap().gamma(), FRAC_PI_2);
    }

    #[test]
    fn final_state_examples() {
        let id = Su2Element::identity();
        for g in [0.0, 0.4, FRAC_PI_2] {
            let s = EntanglerSetting::new(g).unwrap();
            let psi = final_state(s, &id, &id);
            assert!(approx_c(psi.amplitude(0, 0), Complex64::ONE, 1e-15));

            let f = Su2Element::from_angles(PI, 0.0, 0.0).unwrap();
            let psi = final_state(s, &f, &f);
            assert!(approx_c(psi.amplitude(1, 1), -Complex64::ONE, 1e-15));
            assert!((outcome_probs(&psi)[3] - 1.0).abs() < 1e-15);
        }

        let trace = run_protocol(EntanglerSetting::maximal(), &id, &id);
        let psi1 = trace.entangled.amplitudes();
        assert!(approx_c(psi1[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(approx_c(psi1[3], Complex64::new(0.0, FRAC_1_SQRT_2), 1e-15));
        assert!(psi1[1].norm() == 0.0 && psi1[2].norm() == 0.0);
    }

    #[test]
    fn outcome_probs_examples() {
        assert_eq!(outcome_probs(&TwoQubitState::basis(0)), [1.0, 0.0, 0.0, 0.0]);
        let bell = TwoQubitState::from_amplitudes(Vector4::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ));
        let p = outcome_probs(&bell);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unentangled_classical_moves_factorise() {
        let s = EntanglerSetting::unentangled();
        for (ta, tb) in [(0.3, 1.1), (PI / 2.0, PI / 3.0), (2.9, 0.0)] {
            let ua = Su2Element::from_angles(ta, 0.0, 0.0).unwrap();
            let ub = Su2Element::from_angles(tb, 0.0, 0.0).unwrap();
            let p = outcome_probs(&final_state(s, &ua, &ub));
            let (ca, sa) = ((ta / 2.0).cos().powi(2), (ta / 2.0).sin().powi(2));
            let (cb, sb) = ((tb / 2.0).cos().powi(2), (tb / 2.0).sin().powi(2));
            let want = [ca * cb, ca * sb, sa * cb, sa * sb];
            for k in 0..4 {
                assert!((p[k] - want[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_payoff_examples() {
        let g = games::chicken();
        let id = Su2Element::identity();
        let f = Su2Element::from_angles(PI, 0.0, 0.0).unwrap();
        for gamma in [0.0, 0.7, FRAC_PI_2] {
            let (a, b) = pure_payoffs(&g, EntanglerSetting::new(gamma).unwrap(), &id, &id);
            assert!((a + 25.0).abs() < 1e-12 && (b + 25.0).abs() < 1e-12);
        }
        let (a, b) = pure_payoffs(&g, EntanglerSetting::unentangled(), &f, &id);
        assert!(a.abs() < 1e-12 && (b - 50.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_payoff_examples() {
        let g = games::chicken();
        let s = EntanglerSetting::unentangled();
        let id = Su2Element::identity();
        let f = Su2Element::flip();

        let single = mixed_payoffs(&g, s, &DiscreteMixedStrategy::pure(f), &DiscreteMixedStrategy::pure(id));
        assert_eq!(single, pure_payoffs(&g, s, &f, &id));

        let half = DiscreteMixedStrategy::uniform(vec![id, f]).unwrap();
        let (a, b) = mixed_payoffs(&g, s, &half, &half);
        assert!((a - 10.0).abs() < 1e-12 && (b - 10.0).abs() < 1e-12);

        for (p, q) in [(0.2, 0.9), (7.0 / 12.0, 7.0 / 12.0), (1.0, 0.3)] {
            let mu_a = DiscreteMixedStrategy::new(vec![id, f], vec![p, 1.0 - p]).unwrap();
            let mu_b = DiscreteMixedStrategy::new(vec![id, f], vec![q, 1.0 - q]).unwrap();
            let (a, b) = mixed_payoffs(&g, s, &mu_a, &mu_b);
            let (ea, eb) = expected_payoffs(&g, ClassicalMixedProfile::new(p, q).unwrap());
            assert!((a - ea).abs() < 1e-12 && (b - eb).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_strategy_validation() {
        let id = Su2Element::identity();
        assert!(DiscreteMixedStrategy::new(vec![], vec![]).is_err());
        assert!(DiscreteMixedStrategy::new(vec![id], vec![0.5]).is_err());
        assert!(DiscreteMixedStrategy::new(vec![id, id], vec![1.2, -0.2]).is_err());
        assert!(DiscreteMixedStrategy::new(vec![id], vec![1.0, 0.0]).is_err());
        let m = DiscreteMixedStrategy::from_weights(&[id, Su2Element::flip()], &[3.0, 1e-20], 1e-15).unwrap();
        assert!(m.is_pure());
    }

    #[test]
    fn mixed_strategy_wire_format() {
        let m: DiscreteMixedStrategy =
            serde_json::from_str(r#"{"support":[{"angles":[0,0,0]},{"vector":[0,1,0,0]}],"probs":[0.25,0.75]}"#)
                .unwrap();
        assert_eq!(m.len(), 2);
        assert!(serde_json::from_str::<DiscreteMixedStrategy>(r#"{"support":[{"angles":[0,0,0]}],"probs":[0.5]}"#)
            .is_err());
    }
}

//! Classical player against quantum player in Chicken.
//!
//! Player A is restricted to `U(φ, 0, 0)`, i.e. `u_A = (cos φ/2, sin φ/2, 0, 0)`,
//! while player B may use any `u_B = (w, x, y, z)`. For this scenario the
//! payoffs have a closed form in `(γ, φ, u_B)`, and in Chicken B always has a
//! strategy that earns at least as much as A.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::ewl::EntanglerSetting;
use crate::games;
use crate::su2::Su2Element;

const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricScenario {
    pub game: BimatrixGame,
    pub setting: EntanglerSetting,
    phi: f64,
    u_b: Su2Element,
}

impl AsymmetricScenario {
    pub fn new(game: BimatrixGame, setting: EntanglerSetting, phi: f64, u_b: Su2Element) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite { field: "phi", value: phi });
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(Error::InvalidArgument(format!("phi = {phi} lies outside [0, pi]")));
        }
        Ok(Self { game, setting, phi, u_b })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn u_b(&self) -> &Su2Element {
        &self.u_b
    }

    /// A's strategy `U(φ, 0, 0)`.
    pub fn u_a(&self) -> Su2Element {
        Su2Element::from_angles(self.phi, 0.0, 0.0).expect("phi validated in [0, pi]")
    }
}

/// Outcome weights of the closed form, in the order `(00, 01, 10, 11)`.
fn closed_form_weights(gamma: f64, phi: f64, u_b: &[f64; 4]) -> [f64; 4] {
    let [w, x, y, z] = *u_b;
    let (sp, cp) = (phi / 2.0).sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let cg2 = cg * cg;
    [
        z * z * cp * cp * cg2 + (w * cp - y * sp * sg).powi(2),
        y * y * cp * cp * cg2 + (z * sp * sg + x * cp).powi(2),
        z * z * sp * sp * cg2 + (y * cp * sg + w * sp).powi(2),
        y * y * sp * sp * cg2 + (z * cp * sg - x * sp).powi(2),
    ]
}

/// Closed-form payoffs `(⟨$_A⟩, ⟨$_B⟩)` of the scenario.
pub fn asym_payoffs(scenario: &AsymmetricScenario) -> (f64, f64) {
    let wts = closed_form_weights(scenario.setting.gamma(), scenario.phi, &scenario.u_b.to_vector());
    let eval = |m: &[[f64; 2]; 2]| m[0][0] * wts[0] + m[0][1] * wts[1] + m[1][0] * wts[2] + m[1][1] * wts[3];
    (eval(&scenario.game.a), eval(&scenario.game.b))
}

/// `⟨$_A⟩ - ⟨$_B⟩` for Chicken, via its simplified closed form.
pub fn chicken_payoff_difference(scenario: &AsymmetricScenario) -> Result<f64> {
    if !games::is_chicken(&scenario.game) {
        return Err(Error::NotChicken);
    }
    let [w, x, y, z] = scenario.u_b.to_vector();
    let (sp, cp) = (scenario.phi / 2.0).sin_cos();
    let (sg, cg) = scenario.setting.gamma().sin_cos();
    Ok(50.0
        * (cg * cg * (y * y * cp * cp - z * z * sp * sp) + (x * cp + z * sp * sg).powi(2)
            - (w * sp + y * cp * sg).powi(2)))
}

/// Which construction produced B's counter-strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterCase {
    /// `γ < π/2`, `φ > 0`: `u_B = (sin φ/2 cos γ, sin φ/2 sin γ, 0, -cos φ/2)`.
    Case1,
    /// `γ = π/2`: `u_B = (1/√2, 0, 1/√2, 0)`.
    Case2,
    /// `φ = 0`, `π/4 < γ < π/2`: `u_B = (0, 0, 1, 0)`.
    Case3Strict,
    /// `φ = 0`, `γ ≤ π/4`: `u_B = (1, 0, 0, 0)`, equal payoffs.
    Case3Equality,
}

impl CounterCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::Case1 => "case1",
            Self::Case2 => "case2",
            Self::Case3Strict => "case3_strict",
            Self::Case3Equality => "case3_equality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterStrategy {
    pub u_b: Su2Element,
    pub case: CounterCase,
}

/// B's explicit counter to A's classical `U(φ, 0, 0)` in Chicken.
pub fn chicken_counter_strategy(setting: EntanglerSetting, phi: f64) -> Result<CounterStrategy> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::InvalidArgument(format!("phi = {phi} lies outside [0, pi]")));
    }
    let gamma = setting.gamma();
    let (case, u) = if (FRAC_PI_2 - gamma).abs() <= BOUNDARY_TOL {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        (CounterCase::Case2, [h, 0.0, h, 0.0])
    } else if phi <= BOUNDARY_TOL {
        if gamma <= FRAC_PI_4 + BOUNDARY_TOL {
            (CounterCase::Case3Equality, [1.0, 0.0, 0.0, 0.0])
        } else {
            (CounterCase::Case3Strict, [0.0, 0.0, 1.0, 0.0])
        }
    } else {
        let (sp, cp) = (phi / 2.0).sin_cos();
        let (sg, cg) = gamma.sin_cos();
        (CounterCase::Case1, [sp * cg, sp * sg, 0.0, -cp])
    };
    Ok(CounterStrategy {
        u_b: Su2Element::from_vector(u)?,
        case,
    })
}

/// One row of a case-study sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub phi: f64,
    pub case: CounterCase,
    pub u_b: [f64; 4],
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub difference: f64,
    /// Largest deviation between closed-form and simulated payoffs.
    pub simulator_discrepancy: f64,
}

/// Evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

pub fn sweep_point(gamma: f64, phi: f64) -> Result<SweepRow> {
    let setting = EntanglerSetting::new(gamma)?;
    let counter = chicken_counter_strategy(setting, phi)?;
    let scenario = AsymmetricScenario::new(games::chicken(), setting, phi, counter.u_b)?;
    let (payoff_a, payoff_b) = asym_payoffs(&scenario);
    let difference = chicken_payoff_difference(&scenario)?;
    let (sim_a, sim_b) = crate::ewl::pure_payoffs(&scenario.game, setting, &scenario.u_a(), &counter.u_b);
    let simulator_discrepancy = (sim_a - payoff_a).abs().max((sim_b - payoff_b).abs());
    Ok(SweepRow {
        gamma: setting.gamma(),
        phi,
        case: counter.case,
        u_b: counter.u_b.to_vector(),
        payoff_a,
        payoff_b,
        difference,
        simulator_discrepancy,
    })
}

/// Sweep over the Cartesian product of `gammas × phis`, γ-major.
pub fn chicken_sweep(gammas: &[f64], phis: &[f64]) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    let points: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| phis.iter().map(move |&p| (g, p))).collect();
    points.par_iter().map(|&(g, p)| sweep_point(g, p)).collect()
}

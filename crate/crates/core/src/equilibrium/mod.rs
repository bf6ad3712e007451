//! Nash equilibria of the quantum game, built constructively over
//! finite-support mixed strategies.
//!
//! The central tool is [`certify`]: since a player's payoff is linear in their
//! own measure, the best deviation against a fixed opponent mixture is a pure
//! strategy, and its value is the largest eigenvalue of the opponent-averaged
//! quadratic form. The deviation gap it reports is therefore exact over all
//! probability measures on SU(2), not just over a grid.

mod double_oracle;
mod dynamics;
mod lemke_howson;
mod restricted;
mod search;

use serde::Serialize;

pub use double_oracle::{double_oracle, DoubleOracleConfig, DoubleOracleResult};
pub use dynamics::{best_response_dynamics, BrConfig, BrOutcome, BrResult, BrStep};
pub use lemke_howson::lemke_howson;
pub use restricted::{
    build_restricted_game, finite_mixed_ne, FiniteMethod, FiniteNeOptions, FiniteNeResult, FiniteRestrictedGame,
    RestrictedEquilibrium, MAX_ENUMERATION_STRATEGIES,
};
pub use search::{search, FoundEquilibrium, SearchConfig, SearchMethod, SearchReport};

use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::ewl::{mixed_payoffs, DiscreteMixedStrategy, EntanglerSetting};
use crate::quadratic::{averaged_matrix, best_response_pure, Player};
use crate::su2::Su2Element;

/// Tolerance for equilibria that are exact up to floating point.
pub const EXACT_EPSILON: f64 = 1e-9;
/// Tolerance for equilibria found by grid-resolution search.
pub const SEARCH_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumCertificate {
    pub mu_a: DiscreteMixedStrategy,
    pub mu_b: DiscreteMixedStrategy,
    pub payoff_a: f64,
    pub payoff_b: f64,
    /// Best achievable unilateral improvement for A.
    pub gap_a: f64,
    pub gap_b: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    /// A pure strategy attaining A's best deviation payoff.
    pub best_deviation_a: [f64; 4],
    pub best_deviation_b: [f64; 4],
}

impl EquilibriumCertificate {
    pub fn max_gap(&self) -> f64 {
        self.gap_a.max(self.gap_b)
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Same profile judged at another tolerance.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        let mut out = self.clone();
        out.epsilon = epsilon;
        out.verdict = verdict_for(out.max_gap(), epsilon);
        out
    }
}

fn verdict_for(max_gap: f64, epsilon: f64) -> Verdict {
    if max_gap <= epsilon {
        Verdict::Certified
    } else {
        Verdict::Refuted
    }
}

/// Exact ε-Nash check of a finite-support profile against the continuous game.
pub fn certify(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    mu_a: &DiscreteMixedStrategy,
    mu_b: &DiscreteMixedStrategy,
    epsilon: f64,
) -> Result<EquilibriumCertificate> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be a finite non-negative number, got {epsilon}")));
    }
    let (payoff_a, payoff_b) = mixed_payoffs(game, setting, mu_a, mu_b);
    let br_a = best_response_pure(&averaged_matrix(game, setting, Player::A, mu_b));
    let br_b = best_response_pure(&averaged_matrix(game, setting, Player::B, mu_a));
    // Eigen-solver noise can put λ_max a hair below the attained payoff.
    let gap_a = (br_a.value - payoff_a).max(0.0);
    let gap_b = (br_b.value - payoff_b).max(0.0);
    Ok(EquilibriumCertificate {
        mu_a: mu_a.clone(),
        mu_b: mu_b.clone(),
        payoff_a,
        payoff_b,
        gap_a,
        gap_b,
        epsilon,
        verdict: verdict_for(gap_a.max(gap_b), epsilon),
        best_deviation_a: br_a.canonical,
        best_deviation_b: br_b.canonical,
    })
}

pub fn certify_pure(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    u_a: &Su2Element,
    u_b: &Su2Element,
    epsilon: f64,
) -> Result<EquilibriumCertificate> {
    certify(
        game,
        setting,
        &DiscreteMixedStrategy::pure(*u_a),
        &DiscreteMixedStrategy::pure(*u_b),
        epsilon,
    )
}

/// Largest improvement `player` can get by deviating to a strategy in `grid`,
/// evaluated with the simulator only. Never exceeds the exact gap of
/// [`certify`]; used as an independent cross-check of it.
pub fn grid_deviation_gap(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    player: Player,
    mu_a: &DiscreteMixedStrategy,
    mu_b: &DiscreteMixedStrategy,
    grid: &[Su2Element],
) -> f64 {
    use rayon::prelude::*;
    let (base_a, base_b) = mixed_payoffs(game, setting, mu_a, mu_b);
    grid.par_iter()
        .map(|u| {
            let dev = DiscreteMixedStrategy::pure(*u);
            match player {
                Player::A => mixed_payoffs(game, setting, &dev, mu_b).0 - base_a,
                Player::B => mixed_payoffs(game, setting, mu_a, &dev).1 - base_b,
            }
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

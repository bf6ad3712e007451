use nalgebra::DMatrix;
use serde::Serialize;

use super::restricted::any_restricted_equilibrium;
use super::{certify, EquilibriumCertificate, EXACT_EPSILON};
use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::ewl::{pure_payoffs, DiscreteMixedStrategy, EntanglerSetting};
use crate::su2::Su2Element;

/// Strategies closer than this (in the 4-vector sense, up to sign) are not
/// added twice.
const SAME_STRATEGY_TOL: f64 = 1e-10;
/// Weights below this are dropped from the reported mixtures.
const WEIGHT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleOracleConfig {
    /// Stop once both exact gaps are at most this.
    pub epsilon: f64,
    pub max_iter: usize,
    pub max_support: usize,
}

impl Default for DoubleOracleConfig {
    fn default() -> Self {
        Self {
            epsilon: EXACT_EPSILON,
            max_iter: 100,
            max_support: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleOracleResult {
    /// Certificate with the smallest maximum gap seen.
    pub certificate: EquilibriumCertificate,
    pub iterations: usize,
    pub strategies_a: Vec<Su2Element>,
    pub strategies_b: Vec<Su2Element>,
    pub converged: bool,
}

fn contains(set: &[Su2Element], u: &Su2Element) -> bool {
    let v = u.to_vector();
    set.iter().any(|s| {
        let w = s.to_vector();
        let diff: f64 = v.iter().zip(&w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let sum: f64 = v.iter().zip(&w).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
        diff <= SAME_STRATEGY_TOL || sum <= SAME_STRATEGY_TOL
    })
}

/// Grows finite strategy sets by exact best responses until the restricted
/// equilibrium is also an equilibrium of the continuous game.
///
/// Each round solves the restricted game, certifies the result, and adds the
/// canonical principal eigenvector of each player's averaged form whenever it
/// improves on the current payoff.
pub fn double_oracle(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    init_a: &[Su2Element],
    init_b: &[Su2Element],
    config: &DoubleOracleConfig,
) -> Result<DoubleOracleResult> {
    if init_a.is_empty() || init_b.is_empty() {
        return Err(Error::InvalidArgument("double oracle needs nonempty initial sets".into()));
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let mut set_a: Vec<Su2Element> = Vec::new();
    let mut set_b: Vec<Su2Element> = Vec::new();
    for u in init_a {
        if !contains(&set_a, u) {
            set_a.push(*u);
        }
    }
    for u in init_b {
        if !contains(&set_b, u) {
            set_b.push(*u);
        }
    }
    let mut pa = DMatrix::<f64>::zeros(0, 0);
    let mut pb = DMatrix::<f64>::zeros(0, 0);

    let mut best: Option<EquilibriumCertificate> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        iterations += 1;
        extend_tables(game, setting, &set_a, &set_b, &mut pa, &mut pb);

        let Some((p, q)) = any_restricted_equilibrium(&pa, &pb, config.max_support) else {
            break;
        };
        let mu_a = DiscreteMixedStrategy::from_weights(&set_a, &p, WEIGHT_FLOOR)?;
        let mu_b = DiscreteMixedStrategy::from_weights(&set_b, &q, WEIGHT_FLOOR)?;
        let cert = certify(game, setting, &mu_a, &mu_b, config.epsilon)?;
        let improves = best.as_ref().is_none_or(|b| cert.max_gap() < b.max_gap());
        let done = cert.max_gap() <= config.epsilon;
        let (gap_a, gap_b) = (cert.gap_a, cert.gap_b);
        let (dev_a, dev_b) = (cert.best_deviation_a, cert.best_deviation_b);
        if improves {
            best = Some(cert);
        }
        if done {
            converged = true;
            break;
        }

        let mut grew = false;
        if gap_a > 1e-12 {
            let u = Su2Element::from_vector(dev_a)?;
            if !contains(&set_a, &u) {
                set_a.push(u);
                grew = true;
            }
        }
        if gap_b > 1e-12 {
            let u = Su2Element::from_vector(dev_b)?;
            if !contains(&set_b, &u) {
                set_b.push(u);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let certificate = match best {
        Some(c) => c,
        None => {
            // The restricted solver never produced a profile; report the first
            // pair so the caller still gets a (refuted) certificate.
            certify(
                game,
                setting,
                &DiscreteMixedStrategy::pure(set_a[0]),
                &DiscreteMixedStrategy::pure(set_b[0]),
                config.epsilon,
            )?
        }
    };
    Ok(DoubleOracleResult {
        certificate,
        iterations,
        strategies_a: set_a,
        strategies_b: set_b,
        converged,
    })
}

/// Fill in the payoff rows/columns for strategies added since the last call.
fn extend_tables(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    set_a: &[Su2Element],
    set_b: &[Su2Element],
    pa: &mut DMatrix<f64>,
    pb: &mut DMatrix<f64>,
) {
    let (m0, n0) = pa.shape();
    let (m, n) = (set_a.len(), set_b.len());
    let mut na = DMatrix::<f64>::zeros(m, n);
    let mut nb = DMatrix::<f64>::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            if i < m0 && j < n0 {
                na[(i, j)] = pa[(i, j)];
                nb[(i, j)] = pb[(i, j)];
            } else {
                let (x, y) = pure_payoffs(game, setting, &set_a[i], &set_b[j]);
                na[(i, j)] = x;
                nb[(i, j)] = y;
            }
        }
    }
    *pa = na;
    *pb = nb;
}

use std::collections::VecDeque;

use serde::Serialize;

use super::{certify_pure, EquilibriumCertificate, EXACT_EPSILON};
use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::ewl::{pure_payoffs, EntanglerSetting};
use crate::quadratic::{best_response_pure, payoff_matrix_a, payoff_matrix_b};
use crate::su2::Su2Element;

const CYCLE_WINDOW: usize = 50;
const CYCLE_QUANTUM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrConfig {
    /// Payoff change below which the iteration is considered settled; also
    /// the improvement a player needs before abandoning the current strategy.
    pub tol: f64,
    pub max_iter: usize,
    /// Tolerance handed to [`certify`](super::certify) for a settled profile.
    pub epsilon: f64,
}

impl Default for BrConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
            epsilon: EXACT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrStep {
    pub u_a: Su2Element,
    pub u_b: Su2Element,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BrOutcome {
    Converged { iterations: usize },
    /// The profile after `first_seen + period` iterations repeats the one
    /// after `first_seen`; `profiles` lists one full period.
    Cycle {
        first_seen: usize,
        period: usize,
        profiles: Vec<BrStep>,
    },
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrResult {
    /// Profile before the first update, then one entry per iteration.
    pub trace: Vec<BrStep>,
    pub final_profile: (Su2Element, Su2Element),
    pub outcome: BrOutcome,
    /// Present when the iteration settled.
    pub certificate: Option<EquilibriumCertificate>,
}

type CycleKey = [i64; 8];

fn cycle_key(a: &Su2Element, b: &Su2Element) -> CycleKey {
    let q = |v: f64| (v / CYCLE_QUANTUM).round() as i64;
    let (ua, ub) = (a.to_vector(), b.to_vector());
    [q(ua[0]), q(ua[1]), q(ua[2]), q(ua[3]), q(ub[0]), q(ub[1]), q(ub[2]), q(ub[3])]
}

/// Alternating pure best-response iteration: A answers B, then B answers the
/// updated A. A player only moves when the principal eigenvector beats the
/// current strategy by more than `tol`, and then moves to the canonical
/// representative of the top eigenspace.
pub fn best_response_dynamics(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    start: (Su2Element, Su2Element),
    config: &BrConfig,
) -> Result<BrResult> {
    if config.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let keep_tol = config.tol.max(1e-12);
    let (mut a, mut b) = start;
    let step = |a: Su2Element, b: Su2Element| {
        let (payoff_a, payoff_b) = pure_payoffs(game, setting, &a, &b);
        BrStep {
            u_a: a,
            u_b: b,
            payoff_a,
            payoff_b,
        }
    };

    let mut trace = vec![step(a, b)];
    let mut window: VecDeque<(CycleKey, usize)> = VecDeque::with_capacity(CYCLE_WINDOW);
    window.push_back((cycle_key(&a, &b), 0));
    let mut outcome = BrOutcome::MaxIterations;

    for it in 1..=config.max_iter {
        let mut moved = false;
        let form_a = payoff_matrix_a(game, setting, &b);
        let br_a = best_response_pure(&form_a);
        if br_a.value - form_a.value(&a.to_vector()) > keep_tol {
            a = br_a.canonical_element();
            moved = true;
        }
        let form_b = payoff_matrix_b(game, setting, &a);
        let br_b = best_response_pure(&form_b);
        if br_b.value - form_b.value(&b.to_vector()) > keep_tol {
            b = br_b.canonical_element();
            moved = true;
        }

        let current = step(a, b);
        let previous = trace[trace.len() - 1];
        trace.push(current);
        // Equal payoffs alone are not enough: a cycle can revisit the same
        // payoff pair with different strategies.
        if !moved
            && (current.payoff_a - previous.payoff_a).abs() < config.tol
            && (current.payoff_b - previous.payoff_b).abs() < config.tol
        {
            outcome = BrOutcome::Converged { iterations: it };
            break;
        }

        let key = cycle_key(&a, &b);
        if let Some(&(_, seen)) = window.iter().find(|(k, _)| *k == key) {
            outcome = BrOutcome::Cycle {
                first_seen: seen,
                period: it - seen,
                profiles: trace[seen..it].to_vec(),
            };
            break;
        }
        if window.len() == CYCLE_WINDOW {
            window.pop_front();
        }
        window.push_back((key, it));
    }

    let certificate = match outcome {
        BrOutcome::Converged { .. } => Some(certify_pure(game, setting, &a, &b, config.epsilon)?),
        _ => None,
    };
    Ok(BrResult {
        trace,
        final_profile: (a, b),
        outcome,
        certificate,
    })
}

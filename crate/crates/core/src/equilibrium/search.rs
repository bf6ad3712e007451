use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    best_response_dynamics, build_restricted_game, certify, certify_pure, double_oracle, finite_mixed_ne, grid_deviation_gap,
    BrConfig, BrOutcome, DoubleOracleConfig, EquilibriumCertificate, FiniteNeOptions, EXACT_EPSILON, SEARCH_EPSILON,
};
use crate::classical::{mixed_nash_indifference, BimatrixGame};
use crate::error::{Error, Result};
use crate::ewl::{DiscreteMixedStrategy, EntanglerSetting};
use crate::quadratic::Player;
use crate::su2::{grid, Su2Element};

/// Two certified profiles closer than this in every second-moment entry are
/// reported once.
const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Verification grid `[nθ, nα, nβ]` used for the grid-gap cross-check.
    pub grid: [usize; 3],
    /// Coarser grid for support enumeration.
    pub support_grid: [usize; 3],
    pub epsilon: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub n_random_starts: usize,
    pub max_support: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid: [9, 12, 12],
            support_grid: [3, 4, 4],
            epsilon: SEARCH_EPSILON,
            seed: 0,
            max_iter: 200,
            n_random_starts: 8,
            max_support: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    ClassicalEmbedding,
    BestResponseDynamics,
    SupportEnumeration,
    DoubleOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoundEquilibrium {
    pub method: SearchMethod,
    pub certificate: EquilibriumCertificate,
    /// Iterations spent by the method that produced the profile.
    pub trace_len: usize,
    /// Gaps inside the restricted game, for support enumeration.
    pub restricted_gaps: Option<[f64; 2]>,
    /// Best improvement over the verification grid, from the simulator alone.
    pub grid_gaps: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub game: String,
    pub gamma: f64,
    pub config: SearchConfig,
    pub candidates_examined: usize,
    pub equilibria: Vec<FoundEquilibrium>,
    pub search_failed: bool,
}

struct Candidate {
    method: SearchMethod,
    certificate: EquilibriumCertificate,
    trace_len: usize,
    restricted_gaps: Option<[f64; 2]>,
}

fn second_moment(mu: &DiscreteMixedStrategy) -> [f64; 16] {
    let mut out = [0.0; 16];
    for (p, u) in mu.iter() {
        let v = u.to_vector();
        for r in 0..4 {
            for c in 0..4 {
                out[4 * r + c] += p * v[r] * v[c];
            }
        }
    }
    out
}

/// Payoffs depend on each mixture only through `E[u uᵀ]`, so profiles with
/// equal second moments are the same equilibrium.
fn same_profile(x: &EquilibriumCertificate, y: &EquilibriumCertificate) -> bool {
    let close = |a: [f64; 16], b: [f64; 16]| a.iter().zip(&b).all(|(s, t)| (s - t).abs() <= DEDUP_TOL);
    close(second_moment(&x.mu_a), second_moment(&y.mu_a)) && close(second_moment(&x.mu_b), second_moment(&y.mu_b))
}

fn classical_embeddings(game: &BimatrixGame, setting: EntanglerSetting, epsilon: f64) -> Result<Vec<Candidate>> {
    let moves = [Su2Element::identity(), Su2Element::flip()];
    let mut out = Vec::new();
    for a in &moves {
        for b in &moves {
            out.push(Candidate {
                method: SearchMethod::ClassicalEmbedding,
                certificate: certify_pure(game, setting, a, b, epsilon)?,
                trace_len: 0,
                restricted_gaps: None,
            });
        }
    }
    if let Some(profile) = mixed_nash_indifference(game).profile() {
        // Classical mixing over {I, F} embedded as two-point measures.
        let mu_a = DiscreteMixedStrategy::from_weights(&moves, &[profile.p, 1.0 - profile.p], 0.0)?;
        let mu_b = DiscreteMixedStrategy::from_weights(&moves, &[profile.q, 1.0 - profile.q], 0.0)?;
        out.push(Candidate {
            method: SearchMethod::ClassicalEmbedding,
            certificate: certify(game, setting, &mu_a, &mu_b, epsilon)?,
            trace_len: 0,
            restricted_gaps: None,
        });
    }
    Ok(out)
}

fn dynamics_candidates(game: &BimatrixGame, setting: EntanglerSetting, config: &SearchConfig) -> Result<Vec<Candidate>> {
    let moves = [Su2Element::identity(), Su2Element::flip()];
    let mut starts: Vec<(Su2Element, Su2Element)> = Vec::new();
    for a in &moves {
        for b in &moves {
            starts.push((*a, *b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.n_random_starts {
        starts.push((Su2Element::haar_sample(&mut rng), Su2Element::haar_sample(&mut rng)));
    }
    let br = BrConfig {
        max_iter: config.max_iter,
        epsilon: config.epsilon,
        ..BrConfig::default()
    };
    let runs = starts
        .par_iter()
        .map(|start| best_response_dynamics(game, setting, *start, &br))
        .collect::<Result<Vec<_>>>()?;
    Ok(runs
        .into_iter()
        .filter_map(|run| {
            let trace_len = run.trace.len() - 1;
            match (run.outcome, run.certificate) {
                (BrOutcome::Converged { .. }, Some(certificate)) => Some(Candidate {
                    method: SearchMethod::BestResponseDynamics,
                    certificate,
                    trace_len,
                    restricted_gaps: None,
                }),
                _ => None,
            }
        })
        .collect())
}

fn enumeration_candidates(game: &BimatrixGame, setting: EntanglerSetting, config: &SearchConfig) -> Result<Vec<Candidate>> {
    let [t, a, b] = config.support_grid;
    let strategies = grid(t, a, b)?;
    let restricted = build_restricted_game(game, setting, &strategies, &strategies)?;
    let options = FiniteNeOptions {
        max_support: config.max_support,
        epsilon: config.epsilon,
    };
    let solved = finite_mixed_ne(&restricted, &options)?;
    Ok(solved
        .equilibria
        .into_iter()
        .map(|eq| Candidate {
            method: SearchMethod::SupportEnumeration,
            certificate: eq.certificate,
            trace_len: 0,
            restricted_gaps: Some([eq.restricted_gap_a, eq.restricted_gap_b]),
        })
        .collect())
}

fn double_oracle_candidate(game: &BimatrixGame, setting: EntanglerSetting, config: &SearchConfig) -> Result<Candidate> {
    let init = [Su2Element::identity(), Su2Element::flip()];
    let cfg = DoubleOracleConfig {
        epsilon: EXACT_EPSILON.min(config.epsilon),
        max_iter: config.max_iter,
        max_support: config.max_support,
    };
    let out = double_oracle(game, setting, &init, &init, &cfg)?;
    Ok(Candidate {
        method: SearchMethod::DoubleOracle,
        certificate: out.certificate.with_epsilon(config.epsilon),
        trace_len: out.iterations,
        restricted_gaps: None,
    })
}

/// Run every search method, keep the profiles certified at `config.epsilon`
/// against the continuous game, and drop duplicates.
///
/// The methods run in a fixed order (classical embeddings, best-response
/// dynamics, support enumeration, double oracle), and the earliest method to
/// find a profile is the one credited for it.
pub fn search(game: &BimatrixGame, setting: EntanglerSetting, config: &SearchConfig) -> Result<SearchReport> {
    if !(config.epsilon >= 0.0) || !config.epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be finite and non-negative, got {}", config.epsilon)));
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    if config.max_support == 0 {
        return Err(Error::InvalidArgument("max_support must be at least 1".into()));
    }
    let [gt, ga, gb] = config.grid;
    let verification = grid(gt, ga, gb)?;

    let mut candidates = classical_embeddings(game, setting, config.epsilon)?;
    candidates.extend(dynamics_candidates(game, setting, config)?);
    candidates.extend(enumeration_candidates(game, setting, config)?);
    candidates.push(double_oracle_candidate(game, setting, config)?);
    let candidates_examined = candidates.len();

    let mut kept: Vec<Candidate> = Vec::new();
    for c in candidates {
        if c.certificate.is_certified() && !kept.iter().any(|k| same_profile(&k.certificate, &c.certificate)) {
            kept.push(c);
        }
    }

    let equilibria: Vec<FoundEquilibrium> = kept
        .into_iter()
        .map(|c| {
            let cert = &c.certificate;
            let ga = grid_deviation_gap(game, setting, Player::A, &cert.mu_a, &cert.mu_b, &verification);
            let gb = grid_deviation_gap(game, setting, Player::B, &cert.mu_a, &cert.mu_b, &verification);
            FoundEquilibrium {
                method: c.method,
                trace_len: c.trace_len,
                restricted_gaps: c.restricted_gaps,
                grid_gaps: [ga, gb],
                certificate: c.certificate,
            }
        })
        .collect();

    Ok(SearchReport {
        game: game.name.clone(),
        gamma: setting.gamma(),
        config: config.clone(),
        candidates_examined,
        search_failed: equilibria.is_empty(),
        equilibria,
    })
}

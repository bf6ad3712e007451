use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{certify, lemke_howson, EquilibriumCertificate, EXACT_EPSILON, SEARCH_EPSILON};
use crate::classical::BimatrixGame;
use crate::error::{Error, Result};
use crate::ewl::{pure_payoffs, DiscreteMixedStrategy, EntanglerSetting};
use crate::su2::Su2Element;

/// Above this many payoff-distinct strategies per side, support enumeration
/// is skipped in favour of Lemke-Howson.
pub const MAX_ENUMERATION_STRATEGIES: usize = 16;

const DUPLICATE_TOL: f64 = 1e-12;
const PROB_TOL: f64 = 1e-12;

/// The continuous game restricted to finitely many strategies per player.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRestrictedGame {
    pub game: BimatrixGame,
    pub setting: EntanglerSetting,
    pub strategies_a: Vec<Su2Element>,
    pub strategies_b: Vec<Su2Element>,
    pub payoffs_a: DMatrix<f64>,
    pub payoffs_b: DMatrix<f64>,
}

pub fn build_restricted_game(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    grid_a: &[Su2Element],
    grid_b: &[Su2Element],
) -> Result<FiniteRestrictedGame> {
    if grid_a.is_empty() || grid_b.is_empty() {
        return Err(Error::InvalidArgument("restricted strategy sets must be nonempty".into()));
    }
    let (m, n) = (grid_a.len(), grid_b.len());
    let cells: Vec<(f64, f64)> = grid_a
        .par_iter()
        .flat_map_iter(|ua| grid_b.iter().map(move |ub| pure_payoffs(game, setting, ua, ub)))
        .collect();
    Ok(FiniteRestrictedGame {
        game: game.clone(),
        setting,
        strategies_a: grid_a.to_vec(),
        strategies_b: grid_b.to_vec(),
        payoffs_a: DMatrix::from_fn(m, n, |i, j| cells[i * n + j].0),
        payoffs_b: DMatrix::from_fn(m, n, |i, j| cells[i * n + j].1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteMethod {
    SupportEnumeration,
    /// Used when a side has more than [`MAX_ENUMERATION_STRATEGIES`]
    /// payoff-distinct strategies.
    LemkeHowson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteNeOptions {
    pub max_support: usize,
    /// Tolerance for the certificate against the continuous game.
    pub epsilon: f64,
}

impl Default for FiniteNeOptions {
    fn default() -> Self {
        Self {
            max_support: 4,
            epsilon: SEARCH_EPSILON,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedEquilibrium {
    /// Weights over all of `strategies_a` (payoff-duplicates get weight 0).
    pub probs_a: Vec<f64>,
    pub probs_b: Vec<f64>,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub restricted_gap_a: f64,
    pub restricted_gap_b: f64,
    pub certificate: EquilibriumCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteNeResult {
    pub method: FiniteMethod,
    pub distinct_a: usize,
    pub distinct_b: usize,
    pub equilibria: Vec<RestrictedEquilibrium>,
}

/// Indices of the first member of each group of identical rows.
fn distinct_rows(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..x.nrows() {
        let dup = reps.iter().any(|&r| {
            (0..x.ncols()).all(|j| (x[(i, j)] - x[(r, j)]).abs() <= DUPLICATE_TOL && (y[(i, j)] - y[(r, j)]).abs() <= DUPLICATE_TOL)
        });
        if !dup {
            reps.push(i);
        }
    }
    reps
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Weights on `cols` making every row in `rows` of `pay` equally good for the
/// row player; rows index `pay`, the returned vector is dense over columns.
fn indifference_weights(pay: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> Option<(Vec<f64>, f64)> {
    let k = rows.len();
    let mut sys = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            sys[(r, c)] = pay[(i, j)];
        }
        sys[(r, k)] = -1.0;
    }
    for c in 0..k {
        sys[(k, c)] = 1.0;
    }
    rhs[k] = 1.0;
    let sol = sys.lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut w = vec![0.0; pay.ncols()];
    for (c, &j) in cols.iter().enumerate() {
        if sol[c] < -PROB_TOL {
            return None;
        }
        w[j] = sol[c].max(0.0);
    }
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return None;
    }
    w.iter_mut().for_each(|v| *v /= total);
    Some((w, sol[k]))
}

/// Regret of the row player of `pay` against column weights `q`, given row weights `p`.
fn row_regret(pay: &DMatrix<f64>, p: &[f64], q: &[f64]) -> (f64, f64) {
    let values: Vec<f64> = (0..pay.nrows())
        .map(|i| (0..pay.ncols()).map(|j| pay[(i, j)] * q[j]).sum())
        .collect();
    let current: f64 = values.iter().zip(p).map(|(v, w)| v * w).sum();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (current, best - current)
}

fn regrets(a: &DMatrix<f64>, b: &DMatrix<f64>, p: &[f64], q: &[f64]) -> (f64, f64, f64, f64) {
    let (va, ga) = row_regret(a, p, q);
    let (vb, gb) = row_regret(&b.transpose(), q, p);
    (va, vb, ga, gb)
}

fn support_enumeration(a: &DMatrix<f64>, b: &DMatrix<f64>, max_support: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (m, n) = a.shape();
    let bt = b.transpose();
    let mut found: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for k in 1..=max_support.min(m).min(n) {
        let rows_sets = combinations(m, k);
        let col_sets = combinations(n, k);
        let batch: Vec<(Vec<f64>, Vec<f64>)> = rows_sets
            .par_iter()
            .flat_map_iter(|rows| {
                col_sets.iter().filter_map(|cols| {
                    let (q, _) = indifference_weights(a, rows, cols)?;
                    let (p, _) = indifference_weights(&bt, cols, rows)?;
                    let (_, _, ga, gb) = regrets(a, b, &p, &q);
                    (ga <= EXACT_EPSILON && gb <= EXACT_EPSILON).then_some((p, q))
                })
            })
            .collect();
        for cand in batch {
            let same = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(u, v)| (u - v).abs() <= EXACT_EPSILON);
            if !found.iter().any(|(p, q)| same(p, &cand.0) && same(q, &cand.1)) {
                found.push(cand);
            }
        }
    }
    found
}

fn lemke_howson_all(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (m, n) = a.shape();
    let mut found: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for label in 0..m + n {
        if let Some((p, q)) = lemke_howson(a, b, label) {
            let (_, _, ga, gb) = regrets(a, b, &p, &q);
            let same = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(u, v)| (u - v).abs() <= EXACT_EPSILON);
            if ga <= EXACT_EPSILON && gb <= EXACT_EPSILON && !found.iter().any(|(fp, fq)| same(fp, &p) && same(fq, &q)) {
                found.push((p, q));
            }
        }
    }
    found
}

/// Mixed equilibria of the restricted game.
///
/// Strategies with identical payoff rows (columns) are merged first; support
/// enumeration then runs over supports of equal size up to `max_support`.
/// Each equilibrium is also certified against the continuous game.
pub fn finite_mixed_ne(restricted: &FiniteRestrictedGame, options: &FiniteNeOptions) -> Result<FiniteNeResult> {
    if options.max_support == 0 {
        return Err(Error::InvalidArgument("max_support must be at least 1".into()));
    }
    let rows = distinct_rows(&restricted.payoffs_a, &restricted.payoffs_b);
    let cols = distinct_rows(&restricted.payoffs_a.transpose(), &restricted.payoffs_b.transpose());
    let a = restricted.payoffs_a.select_rows(&rows).select_columns(&cols);
    let b = restricted.payoffs_b.select_rows(&rows).select_columns(&cols);

    let (method, reduced) = if rows.len() <= MAX_ENUMERATION_STRATEGIES && cols.len() <= MAX_ENUMERATION_STRATEGIES {
        (FiniteMethod::SupportEnumeration, support_enumeration(&a, &b, options.max_support))
    } else {
        (FiniteMethod::LemkeHowson, lemke_howson_all(&a, &b))
    };

    let expand = |weights: &[f64], reps: &[usize], len: usize| {
        let mut full = vec![0.0; len];
        for (w, &r) in weights.iter().zip(reps) {
            full[r] = *w;
        }
        full
    };
    let equilibria = reduced
        .into_iter()
        .map(|(p, q)| {
            let probs_a = expand(&p, &rows, restricted.strategies_a.len());
            let probs_b = expand(&q, &cols, restricted.strategies_b.len());
            let (payoff_a, payoff_b, restricted_gap_a, restricted_gap_b) =
                regrets(&restricted.payoffs_a, &restricted.payoffs_b, &probs_a, &probs_b);
            let mu_a = DiscreteMixedStrategy::from_weights(&restricted.strategies_a, &probs_a, 0.0)?;
            let mu_b = DiscreteMixedStrategy::from_weights(&restricted.strategies_b, &probs_b, 0.0)?;
            let certificate = certify(&restricted.game, restricted.setting, &mu_a, &mu_b, options.epsilon)?;
            Ok(RestrictedEquilibrium {
                probs_a,
                probs_b,
                payoff_a,
                payoff_b,
                restricted_gap_a: restricted_gap_a.max(0.0),
                restricted_gap_b: restricted_gap_b.max(0.0),
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteNeResult {
        method,
        distinct_a: rows.len(),
        distinct_b: cols.len(),
        equilibria,
    })
}

/// One equilibrium of a restricted game, for iterative schemes that only
/// need a single solution. Prefers Lemke-Howson and falls back to support
/// enumeration.
pub(super) fn any_restricted_equilibrium(a: &DMatrix<f64>, b: &DMatrix<f64>, max_support: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let (m, n) = a.shape();
    for label in 0..m + n {
        if let Some((p, q)) = lemke_howson(a, b, label) {
            let (_, _, ga, gb) = regrets(a, b, &p, &q);
            if ga <= EXACT_EPSILON && gb <= EXACT_EPSILON {
                return Some((p, q));
            }
        }
    }
    support_enumeration(a, b, max_support).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{mixed_nash_indifference, pure_nash};
    use crate::games;
    use std::f64::consts::FRAC_PI_2;

    fn classical_grid() -> Vec<Su2Element> {
        vec![Su2Element::identity(), Su2Element::flip()]
    }

    #[test]
    fn classical_grid_recovers_bimatrix() {
        let g = games::chicken();
        for gamma in [0.0, FRAC_PI_2] {
            let r = build_restricted_game(&g, EntanglerSetting::new(gamma).unwrap(), &classical_grid(), &classical_grid()).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((r.payoffs_a[(i, j)] - g.a[i][j]).abs() < 1e-12);
                    assert!((r.payoffs_b[(i, j)] - g.b[i][j]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn table_shape_follows_grids() {
        let g = games::prisoners_dilemma();
        let ga = crate::su2::grid(3, 1, 1).unwrap();
        let gb = crate::su2::grid(2, 2, 1).unwrap();
        let r = build_restricted_game(&g, EntanglerSetting::maximal(), &ga, &gb).unwrap();
        assert_eq!(r.payoffs_a.shape(), (3, 4));
        assert!(build_restricted_game(&g, EntanglerSetting::maximal(), &[], &gb).is_err());
    }

    #[test]
    fn classical_chicken_equilibria() {
        let g = games::chicken();
        let r = build_restricted_game(&g, EntanglerSetting::unentangled(), &classical_grid(), &classical_grid()).unwrap();
        let out = finite_mixed_ne(&r, &FiniteNeOptions::default()).unwrap();
        assert_eq!(out.method, FiniteMethod::SupportEnumeration);
        assert_eq!(out.equilibria.len(), 3);

        let mut pure = 0;
        for eq in &out.equilibria {
            assert!(eq.restricted_gap_a <= 1e-9 && eq.restricted_gap_b <= 1e-9);
            assert!(eq.certificate.max_gap() <= 1e-9);
            if eq.probs_a.contains(&1.0) {
                pure += 1;
            } else {
                assert!((eq.probs_a[0] - 7.0 / 12.0).abs() < 1e-12);
                assert!((eq.probs_b[0] - 7.0 / 12.0).abs() < 1e-12);
            }
        }
        assert_eq!(pure, pure_nash(&g).len());
        assert!(mixed_nash_indifference(&g).profile().is_some());
    }

    #[test]
    fn strictly_dominant_pair_gives_single_equilibrium() {
        let g = games::prisoners_dilemma();
        let r = build_restricted_game(&g, EntanglerSetting::unentangled(), &classical_grid(), &classical_grid()).unwrap();
        let out = finite_mixed_ne(&r, &FiniteNeOptions::default()).unwrap();
        assert_eq!(out.equilibria.len(), 1);
        assert_eq!(out.equilibria[0].probs_a, vec![0.0, 1.0]);
        assert_eq!(out.equilibria[0].probs_b, vec![0.0, 1.0]);
    }

    #[test]
    fn single_strategy_grids() {
        let g = games::battle_of_the_sexes();
        let u = [Su2Element::from_angles(1.0, 2.0, 3.0).unwrap()];
        let r = build_restricted_game(&g, EntanglerSetting::new(0.5).unwrap(), &u, &u).unwrap();
        let out = finite_mixed_ne(&r, &FiniteNeOptions::default()).unwrap();
        assert_eq!(out.equilibria.len(), 1);
        assert_eq!(out.equilibria[0].probs_a, vec![1.0]);
    }

    #[test]
    fn duplicates_are_merged() {
        // θ = 0 with any β is the same strategy.
        let g = games::chicken();
        let grid = crate::su2::grid(3, 4, 4).unwrap();
        let r = build_restricted_game(&g, EntanglerSetting::new(0.6).unwrap(), &grid, &grid).unwrap();
        let out = finite_mixed_ne(&r, &FiniteNeOptions::default()).unwrap();
        assert!(out.distinct_a <= MAX_ENUMERATION_STRATEGIES);
        assert_eq!(out.method, FiniteMethod::SupportEnumeration);
        assert!(!out.equilibria.is_empty());
    }

    #[test]
    fn large_grids_fall_back_to_lemke_howson() {
        let g = games::stag_hunt();
        let grid = crate::su2::grid(5, 4, 4).unwrap();
        let r = build_restricted_game(&g, EntanglerSetting::new(0.3).unwrap(), &grid, &grid).unwrap();
        let out = finite_mixed_ne(&r, &FiniteNeOptions::default()).unwrap();
        assert_eq!(out.method, FiniteMethod::LemkeHowson);
        assert!(!out.equilibria.is_empty());
        for eq in &out.equilibria {
            assert!(eq.restricted_gap_a <= 1e-9 && eq.restricted_gap_b <= 1e-9);
        }
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 4).len(), 0);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
    }
}

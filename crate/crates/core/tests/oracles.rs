//! Cross-checks against a from-scratch two-qubit simulator written with plain
//! complex arrays, independent of the library's linear algebra.

use num_complex::Complex64 as C;
use qgame::ewl::{final_state, pure_payoffs};
use qgame::games;
use qgame::quadratic::{m_vectors, n_vectors, payoff_matrix_a, payoff_matrix_b};
use qgame::{EntanglerSetting, Su2Element};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

type M2 = [[C; 2]; 2];
type V4 = [C; 4];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `wI + i(xσx + yσy + zσz)` written out entry by entry.
fn su2(u: [f64; 4]) -> M2 {
    let [w, x, y, z] = u;
    [[c(w, z), c(y, x)], [c(-y, x), c(w, -z)]]
}

fn kron_apply(a: &M2, b: &M2, v: &V4) -> V4 {
    let mut out = [C::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + j] += a[i][k] * b[j][l] * v[2 * k + l];
                }
            }
        }
    }
    out
}

/// `J(γ)` or its adjoint applied to `v`: `cos(γ/2) v ± i sin(γ/2) (σx⊗σx) v`.
fn entangle(gamma: f64, v: &V4, adjoint: bool) -> V4 {
    let (s, co) = (gamma / 2.0).sin_cos();
    let sign = if adjoint { -1.0 } else { 1.0 };
    let flipped = [v[3], v[2], v[1], v[0]];
    std::array::from_fn(|k| v[k] * co + c(0.0, sign * s) * flipped[k])
}

fn reference_state(gamma: f64, ua: [f64; 4], ub: [f64; 4]) -> V4 {
    let zero = C::new(0.0, 0.0);
    let start = [C::new(1.0, 0.0), zero, zero, zero];
    let e = entangle(gamma, &start, false);
    let p = kron_apply(&su2(ua), &su2(ub), &e);
    entangle(gamma, &p, true)
}

fn basis(l: usize) -> [f64; 4] {
    let mut e = [0.0; 4];
    e[l] = 1.0;
    e
}

#[test]
fn library_simulator_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let gamma = rng.random_range(0.0..=FRAC_PI_2);
        let ua = Su2Element::haar_sample(&mut rng);
        let ub = Su2Element::haar_sample(&mut rng);
        let want = reference_state(gamma, ua.to_vector(), ub.to_vector());
        let got = final_state(EntanglerSetting::new(gamma).unwrap(), &ua, &ub);
        for k in 0..4 {
            assert!((got.amplitudes()[k] - want[k]).norm() < 1e-13);
        }
    }
}

/// With u_B fixed, each amplitude is linear in u_A, so evaluating the
/// reference simulator at the basis vectors recovers the coefficient vector.
/// The same holds for u_B with u_A fixed.
#[test]
fn amplitude_vectors_match_linear_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let gamma = rng.random_range(0.0..=FRAC_PI_2);
        let s = EntanglerSetting::new(gamma).unwrap();
        let ua = Su2Element::haar_sample(&mut rng).to_vector();
        let ub = Su2Element::haar_sample(&mut rng).to_vector();
        let m = m_vectors(s, &ub);
        let n = n_vectors(s, &ua);
        for l in 0..4 {
            let along_a = reference_state(gamma, basis(l), ub);
            let along_b = reference_state(gamma, ua, basis(l));
            for j in 0..2 {
                for k in 0..2 {
                    assert!((m.get(j, k)[l] - along_a[2 * j + k]).norm() < 1e-13, "M_{j}{k}[{l}]");
                    assert!((n.get(j, k)[l] - along_b[2 * j + k]).norm() < 1e-13, "N_{j}{k}[{l}]");
                }
            }
        }
    }
}

/// Recover each form by polarization, `P_lm = (q(e_l + e_m) - q(e_l) - q(e_m)) / 2`,
/// with `q` evaluated by the reference simulator on unnormalized real vectors.
#[test]
fn payoff_forms_match_polarization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for game in games::all() {
        for _ in 0..20 {
            let gamma = rng.random_range(0.0..=FRAC_PI_2);
            let s = EntanglerSetting::new(gamma).unwrap();
            let opp = Su2Element::haar_sample(&mut rng);
            let qa = |u: [f64; 4]| {
                let psi = reference_state(gamma, u, opp.to_vector());
                (0..4).map(|k| game.a[k / 2][k % 2] * psi[k].norm_sqr()).sum::<f64>()
            };
            let qb = |u: [f64; 4]| {
                let psi = reference_state(gamma, opp.to_vector(), u);
                (0..4).map(|k| game.b[k / 2][k % 2] * psi[k].norm_sqr()).sum::<f64>()
            };
            let pa = payoff_matrix_a(&game, s, &opp);
            let pb = payoff_matrix_b(&game, s, &opp);
            for l in 0..4 {
                for m in 0..4 {
                    let (want_a, want_b) = if l == m {
                        (qa(basis(l)), qb(basis(l)))
                    } else {
                        let mut e = basis(l);
                        e[m] = 1.0;
                        (
                            (qa(e) - qa(basis(l)) - qa(basis(m))) / 2.0,
                            (qb(e) - qb(basis(l)) - qb(basis(m))) / 2.0,
                        )
                    };
                    assert!((pa.matrix[(l, m)] - want_a).abs() < 1e-11, "{}: P_A[{l},{m}]", game.name);
                    assert!((pb.matrix[(l, m)] - want_b).abs() < 1e-11, "{}: P_B[{l},{m}]", game.name);
                }
            }
        }
    }
}

#[test]
fn quadratic_payoffs_match_reference_payoffs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for game in games::all() {
        for _ in 0..200 {
            let gamma = rng.random_range(0.0..=FRAC_PI_2);
            let s = EntanglerSetting::new(gamma).unwrap();
            let ua = Su2Element::haar_sample(&mut rng);
            let ub = Su2Element::haar_sample(&mut rng);
            let psi = reference_state(gamma, ua.to_vector(), ub.to_vector());
            let want_a: f64 = (0..4).map(|k| game.a[k / 2][k % 2] * psi[k].norm_sqr()).sum();
            let want_b: f64 = (0..4).map(|k| game.b[k / 2][k % 2] * psi[k].norm_sqr()).sum();
            let (sa, sb) = pure_payoffs(&game, s, &ua, &ub);
            assert!((sa - want_a).abs() < 1e-12 && (sb - want_b).abs() < 1e-12);
            let qa = payoff_matrix_a(&game, s, &ub).value(&ua.to_vector());
            let qb = payoff_matrix_b(&game, s, &ua).value(&ub.to_vector());
            assert!((qa - want_a).abs() < 1e-10 && (qb - want_b).abs() < 1e-10);
        }
    }
}

//! Classical 2×2 games.
//!
//! Strategies are identified by index: row `0`/`1` for player A and column
//! `0`/`1` for player B. `a[i][j]` and `b[i][j]` are the payoffs when A plays
//! row `i` and B plays column `j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A two-player game with two pure strategies per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BimatrixGame {
    pub name: String,
    pub row_labels: [String; 2],
    pub col_labels: [String; 2],
    pub a: [[f64; 2]; 2],
    pub b: [[f64; 2]; 2],
}

impl BimatrixGame {
    pub fn new(
        name: impl Into<String>,
        row_labels: [&str; 2],
        col_labels: [&str; 2],
        a: [[f64; 2]; 2],
        b: [[f64; 2]; 2],
    ) -> Result<Self> {
        for (field, m) in [("payoffs_A", &a), ("payoffs_B", &b)] {
            if let Some(&value) = m.iter().flatten().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field, value });
            }
        }
        Ok(Self {
            name: name.into(),
            row_labels: row_labels.map(str::to_owned),
            col_labels: col_labels.map(str::to_owned),
            a,
            b,
        })
    }

    /// Game with generic labels `s1, s2` / `t1, t2`.
    pub fn from_payoffs(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> Result<Self> {
        Self::new("unnamed", ["s1", "s2"], ["t1", "t2"], a, b)
    }

    /// Payoff table of one player, indexed `[row][col]`.
    pub fn payoffs(&self, player: crate::Player) -> &[[f64; 2]; 2] {
        match player {
            crate::Player::A => &self.a,
            crate::Player::B => &self.b,
        }
    }

    /// The same game with the players' roles exchanged: the new row player is
    /// the old column player.
    pub fn swapped(&self) -> Self {
        let t = |m: &[[f64; 2]; 2]| [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
        Self {
            name: format!("{} (swapped)", self.name),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            a: t(&self.b),
            b: t(&self.a),
        }
    }

    pub fn profile_label(&self, (i, j): (usize, usize)) -> String {
        format!("({},{})", self.row_labels[i], self.col_labels[j])
    }
}

/// Classical mixed profile: A plays row 0 with probability `p`, B plays
/// column 0 with probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMixedProfile {
    pub p: f64,
    pub q: f64,
}

impl ClassicalMixedProfile {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, value) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ProbabilityOutOfRange { name, value });
            }
        }
        Ok(Self { p, q })
    }

    pub fn pure((i, j): (usize, usize)) -> Self {
        let indicator = |k: usize| if k == 0 { 1.0 } else { 0.0 };
        Self {
            p: indicator(i),
            q: indicator(j),
        }
    }
}

fn bilinear(m: &[[f64; 2]; 2], p: f64, q: f64) -> f64 {
    p * q * m[0][0] + p * (1.0 - q) * m[0][1] + (1.0 - p) * q * m[1][0] + (1.0 - p) * (1.0 - q) * m[1][1]
}

/// Expected payoffs `(E_A, E_B)` of a classical mixed profile.
pub fn expected_payoffs(game: &BimatrixGame, profile: ClassicalMixedProfile) -> (f64, f64) {
    (
        bilinear(&game.a, profile.p, profile.q),
        bilinear(&game.b, profile.p, profile.q),
    )
}

/// All pure profiles from which neither player gains by deviating. Ties count
/// as equilibria.
pub fn pure_nash(game: &BimatrixGame) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let a_ok = game.a[i][j] >= game.a[1 - i][j];
            let b_ok = game.b[i][j] >= game.b[i][1 - j];
            if a_ok && b_ok {
                out.push((i, j));
            }
        }
    }
    out
}

/// Result of solving the two indifference equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndifferenceOutcome {
    Equilibrium { profile: ClassicalMixedProfile },
    /// A denominator vanished: the equation is either identically true or has
    /// no solution.
    Degenerate,
    /// Both equations have unique solutions but at least one lies outside
    /// `[0, 1]`.
    OutOfRange { p: f64, q: f64 },
}

impl IndifferenceOutcome {
    pub fn profile(&self) -> Option<ClassicalMixedProfile> {
        match self {
            Self::Equilibrium { profile } => Some(*profile),
            _ => None,
        }
    }
}

/// Mixed equilibrium from the indifference conditions
/// `E_A(0,q) = E_A(1,q)` and `E_B(p,0) = E_B(p,1)`.
pub fn mixed_nash_indifference(game: &BimatrixGame) -> IndifferenceOutcome {
    let a = &game.a;
    let b = &game.b;
    // q (a00 - a01 - a10 + a11) = a11 - a01
    let den_q = a[0][0] - a[0][1] - a[1][0] + a[1][1];
    // p (b00 - b10 - b01 + b11) = b11 - b10
    let den_p = b[0][0] - b[1][0] - b[0][1] + b[1][1];
    if den_q == 0.0 || den_p == 0.0 {
        return IndifferenceOutcome::Degenerate;
    }
    let q = (a[1][1] - a[0][1]) / den_q;
    let p = (b[1][1] - b[1][0]) / den_p;
    match ClassicalMixedProfile::new(p, q) {
        Ok(profile) => IndifferenceOutcome::Equilibrium { profile },
        Err(_) => IndifferenceOutcome::OutOfRange { p, q },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominantStrategy {
    pub index: usize,
    pub strict: bool,
}

/// Weakly dominant pure strategies of each player, with a strictness flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub player_a: Vec<DominantStrategy>,
    pub player_b: Vec<DominantStrategy>,
}

pub fn dominant_strategies(game: &BimatrixGame) -> Dominance {
    let mut player_a = Vec::new();
    let mut player_b = Vec::new();
    for s in 0..2 {
        let other = 1 - s;
        let a_diffs = [0, 1].map(|t| game.a[s][t] - game.a[other][t]);
        if a_diffs.iter().all(|&d| d >= 0.0) {
            player_a.push(DominantStrategy {
                index: s,
                strict: a_diffs.iter().any(|&d| d > 0.0),
            });
        }
        let b_diffs = [0, 1].map(|r| game.b[r][s] - game.b[r][other]);
        if b_diffs.iter().all(|&d| d >= 0.0) {
            player_b.push(DominantStrategy {
                index: s,
                strict: b_diffs.iter().any(|&d| d > 0.0),
            });
        }
    }
    Dominance { player_a, player_b }
}

/// Pure profiles not Pareto-dominated by another pure profile.
pub fn pareto_optimal_profiles(game: &BimatrixGame) -> Vec<(usize, usize)> {
    let cells: Vec<(usize, usize)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    let value = |(i, j): (usize, usize)| (game.a[i][j], game.b[i][j]);
    cells
        .iter()
        .copied()
        .filter(|&c| {
            let (ca, cb) = value(c);
            !cells.iter().any(|&d| {
                let (da, db) = value(d);
                da >= ca && db >= cb && (da > ca || db > cb)
            })
        })
        .collect()
}

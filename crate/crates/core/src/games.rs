//! Bundled example games.

use crate::classical::BimatrixGame;

fn build(name: &str, rows: [&str; 2], cols: [&str; 2], a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> BimatrixGame {
    BimatrixGame::new(name, rows, cols, a, b).expect("bundled payoffs are finite")
}

/// Chicken (Hawk-Dove). Strategy 0 is Hawk, 1 is Dove.
pub fn chicken() -> BimatrixGame {
    build(
        "Chicken",
        ["H", "D"],
        ["H", "D"],
        [[-25.0, 50.0], [0.0, 15.0]],
        [[-25.0, 0.0], [50.0, 15.0]],
    )
}

/// Whether `game` carries exactly the Chicken payoffs of [`chicken`].
pub fn is_chicken(game: &BimatrixGame) -> bool {
    let reference = chicken();
    game.a == reference.a && game.b == reference.b
}

/// Prisoner's dilemma. Strategy 0 is Cooperate, 1 is Defect.
pub fn prisoners_dilemma() -> BimatrixGame {
    build(
        "Prisoner's Dilemma",
        ["C", "D"],
        ["C", "D"],
        [[3.0, 0.0], [5.0, 1.0]],
        [[3.0, 5.0], [0.0, 1.0]],
    )
}

pub fn battle_of_the_sexes() -> BimatrixGame {
    build(
        "Battle of the Sexes",
        ["O", "F"],
        ["O", "F"],
        [[3.0, 0.0], [0.0, 2.0]],
        [[2.0, 0.0], [0.0, 3.0]],
    )
}

pub fn matching_pennies() -> BimatrixGame {
    build(
        "Matching Pennies",
        ["H", "T"],
        ["H", "T"],
        [[1.0, -1.0], [-1.0, 1.0]],
        [[-1.0, 1.0], [1.0, -1.0]],
    )
}

pub fn stag_hunt() -> BimatrixGame {
    build(
        "Stag Hunt",
        ["S", "H"],
        ["S", "H"],
        [[4.0, 0.0], [3.0, 3.0]],
        [[4.0, 3.0], [0.0, 3.0]],
    )
}

/// All bundled games, Chicken first.
pub fn all() -> Vec<BimatrixGame> {
    vec![
        chicken(),
        prisoners_dilemma(),
        battle_of_the_sexes(),
        matching_pennies(),
        stag_hunt(),
    ]
}

/// Look up a bundled game by a case-insensitive short name.
pub fn by_name(name: &str) -> Option<BimatrixGame> {
    match name.to_ascii_lowercase().replace(['-', '_', ' ', '\''], "").as_str() {
        "chicken" | "hawkdove" => Some(chicken()),
        "pd" | "prisonersdilemma" => Some(prisoners_dilemma()),
        "bos" | "battleofthesexes" => Some(battle_of_the_sexes()),
        "mp" | "matchingpennies" => Some(matching_pennies()),
        "staghunt" => Some(stag_hunt()),
        _ => None,
    }
}

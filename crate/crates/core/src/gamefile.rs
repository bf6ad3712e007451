//! TOML game files.
//!
//! ```toml
//! [game]
//! name = "chicken"
//! rows = ["H", "D"]
//! cols = ["H", "D"]
//! payoffs_A = [[-25, 50], [0, 15]]
//! payoffs_B = [[-25, 0], [50, 15]]
//!
//! [quantum]
//! gamma = 1.5707963267948966
//!
//! [search]
//! grid = [9, 12, 12]
//! epsilon = 1e-3
//! seed = 0
//! max_iter = 200
//! ```
//!
//! `rows`/`cols`, `[quantum]` and `[search]` are optional. Payoffs are given
//! row-major, `payoffs_A[i][j]` being A's payoff when A plays row `i`.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::classical::BimatrixGame;
use crate::equilibrium::SearchConfig;
use crate::ewl::EntanglerSetting;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameFileError {
    /// 1-based line of the offending item, when known.
    pub line: Option<usize>,
    /// Dotted path of the offending field, when known.
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for GameFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.field) {
            (Some(l), Some(field)) => write!(f, "line {l}, field `{field}`: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(field)) => write!(f, "field `{field}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for GameFileError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    game: RawGame,
    quantum: Option<RawQuantum>,
    search: Option<RawSearch>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    name: String,
    rows: Option<Spanned<Vec<String>>>,
    cols: Option<Spanned<Vec<String>>>,
    #[serde(rename = "payoffs_A")]
    payoffs_a: Spanned<Vec<Vec<f64>>>,
    #[serde(rename = "payoffs_B")]
    payoffs_b: Spanned<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuantum {
    gamma: Spanned<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    grid: Option<Spanned<Vec<usize>>>,
    epsilon: Option<Spanned<f64>>,
    seed: Option<u64>,
    max_iter: Option<Spanned<usize>>,
}

/// A parsed and validated game file.
#[derive(Debug, Clone, PartialEq)]
pub struct GameFile {
    pub game: BimatrixGame,
    pub setting: Option<EntanglerSetting>,
    /// Defaults filled in for anything the `[search]` section leaves out.
    pub search: SearchConfig,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn at(src: &str, span: Range<usize>, field: &str, message: impl Into<String>) -> GameFileError {
    GameFileError {
        line: Some(line_of(src, span.start)),
        field: Some(field.to_owned()),
        message: message.into(),
    }
}

fn two_by_two(src: &str, raw: &Spanned<Vec<Vec<f64>>>, field: &str) -> Result<[[f64; 2]; 2], GameFileError> {
    let rows = raw.get_ref();
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        let shape: Vec<String> = rows.iter().map(|r| r.len().to_string()).collect();
        return Err(at(
            src,
            raw.span(),
            field,
            format!("expected a 2x2 array, got {} row(s) of length [{}]", rows.len(), shape.join(", ")),
        ));
    }
    if let Some(v) = rows.iter().flatten().find(|v| !v.is_finite()) {
        return Err(at(src, raw.span(), field, format!("payoffs must be finite, got {v}")));
    }
    Ok([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
}

fn labels(src: &str, raw: &Option<Spanned<Vec<String>>>, field: &str, default: [&str; 2]) -> Result<[String; 2], GameFileError> {
    match raw {
        None => Ok(default.map(str::to_owned)),
        Some(s) => match s.get_ref().as_slice() {
            [x, y] => Ok([x.clone(), y.clone()]),
            other => Err(at(src, s.span(), field, format!("expected 2 labels, got {}", other.len()))),
        },
    }
}

/// Parse and validate the text of a game file.
pub fn parse_game_file(src: &str) -> Result<GameFile, GameFileError> {
    let raw: RawFile = toml::from_str(src).map_err(|e| GameFileError {
        line: e.span().map(|s| line_of(src, s.start)),
        field: None,
        message: e.message().to_owned(),
    })?;

    let a = two_by_two(src, &raw.game.payoffs_a, "game.payoffs_A")?;
    let b = two_by_two(src, &raw.game.payoffs_b, "game.payoffs_B")?;
    let rows = labels(src, &raw.game.rows, "game.rows", ["s1", "s2"])?;
    let cols = labels(src, &raw.game.cols, "game.cols", ["t1", "t2"])?;
    let game = BimatrixGame {
        name: raw.game.name,
        row_labels: rows,
        col_labels: cols,
        a,
        b,
    };

    let setting = match raw.quantum {
        None => None,
        Some(q) => {
            let span = q.gamma.span();
            Some(EntanglerSetting::new(q.gamma.into_inner()).map_err(|e| at(src, span, "quantum.gamma", e.to_string()))?)
        }
    };

    let mut search = SearchConfig::default();
    if let Some(s) = raw.search {
        if let Some(g) = s.grid {
            match g.get_ref().as_slice() {
                &[t, al, be] if t > 0 && al > 0 && be > 0 => search.grid = [t, al, be],
                _ => return Err(at(src, g.span(), "search.grid", "expected three positive counts [n_theta, n_alpha, n_beta]")),
            }
        }
        if let Some(e) = s.epsilon {
            let v = *e.get_ref();
            if !(v >= 0.0 && v.is_finite()) {
                return Err(at(src, e.span(), "search.epsilon", format!("must be finite and non-negative, got {v}")));
            }
            search.epsilon = v;
        }
        if let Some(seed) = s.seed {
            search.seed = seed;
        }
        if let Some(m) = s.max_iter {
            if *m.get_ref() == 0 {
                return Err(at(src, m.span(), "search.max_iter", "must be at least 1"));
            }
            search.max_iter = m.into_inner();
        }
    }

    Ok(GameFile { game, setting, search })
}

pub fn read_game_file(path: &Path) -> Result<GameFile, GameFileError> {
    let src = std::fs::read_to_string(path).map_err(|e| GameFileError {
        line: None,
        field: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_game_file(&src)
}

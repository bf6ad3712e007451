//! Lemke-Howson complementary pivoting for bimatrix games.
//!
//! Labels `0..m` are the row player's strategies, `m..m+n` the column
//! player's. The row tableau encodes `Bᵀx + s = 1, x ≥ 0` and the column
//! tableau `Ay + r = 1, y ≥ 0`, with both payoff matrices shifted to be
//! positive. Ties in the ratio test are broken lexicographically, which keeps
//! the path well defined on degenerate games.

use nalgebra::DMatrix;

const PIVOT_TOL: f64 = 1e-12;

struct Tableau {
    /// Each row: coefficients for all `m + n` labels, then the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Labels of the slack columns, in the order used for tie-breaking.
    slack_labels: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        *self.rows[r].last().expect("non-empty row")
    }

    /// Pivot `entering` into the basis; returns the label that leaves.
    fn pivot(&mut self, entering: usize) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r][entering] > PIVOT_TOL)
            .collect();
        let ratio_key = |r: usize| -> Vec<f64> {
            let p = self.rows[r][entering];
            std::iter::once(self.rhs(r))
                .chain(self.slack_labels.iter().map(|&l| self.rows[r][l]))
                .map(|v| v / p)
                .collect()
        };
        let mut best: Option<(usize, Vec<f64>)> = None;
        for r in candidates {
            let key = ratio_key(r);
            let better = match &best {
                None => true,
                Some((_, bk)) => lex_less(&key, bk),
            };
            if better {
                best = Some((r, key));
            }
        }
        let (row, _) = best?;

        let p = self.rows[row][entering];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = other[entering];
            if f != 0.0 {
                for (v, pv) in other.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let leaving = self.basis[row];
        self.basis[row] = entering;
        Some(leaving)
    }

    fn value_of(&self, label: usize) -> f64 {
        self.basis
            .iter()
            .position(|&l| l == label)
            .map(|r| self.rhs(r).max(0.0))
            .unwrap_or(0.0)
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-13 {
            return x < y;
        }
    }
    false
}

/// One equilibrium reached by dropping `dropped_label`. Returns the mixed
/// strategies `(p, q)`, or `None` if the path breaks down numerically.
pub fn lemke_howson(a: &DMatrix<f64>, b: &DMatrix<f64>, dropped_label: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 || b.shape() != (m, n) || dropped_label >= m + n {
        return None;
    }
    let shift = |mat: &DMatrix<f64>| {
        let lo = mat.iter().copied().fold(f64::INFINITY, f64::min);
        mat.map(|v| v - lo + 1.0)
    };
    let (a, b) = (shift(a), shift(b));
    let width = m + n + 1;

    // Row player's polytope: one constraint per column j.
    let mut row_tab = Tableau {
        rows: (0..n)
            .map(|j| {
                let mut r = vec![0.0; width];
                for i in 0..m {
                    r[i] = b[(i, j)];
                }
                r[m + j] = 1.0;
                r[m + n] = 1.0;
                r
            })
            .collect(),
        basis: (m..m + n).collect(),
        slack_labels: (m..m + n).collect(),
    };
    // Column player's polytope: one constraint per row i.
    let mut col_tab = Tableau {
        rows: (0..m)
            .map(|i| {
                let mut r = vec![0.0; width];
                for j in 0..n {
                    r[m + j] = a[(i, j)];
                }
                r[i] = 1.0;
                r[m + n] = 1.0;
                r
            })
            .collect(),
        basis: (0..m).collect(),
        slack_labels: (0..m).collect(),
    };

    let mut entering = dropped_label;
    let mut in_row_tab = dropped_label < m;
    let max_steps = 50 * (m + n) * (m + n) + 100;
    let mut finished = false;
    for _ in 0..max_steps {
        let tab = if in_row_tab { &mut row_tab } else { &mut col_tab };
        let leaving = tab.pivot(entering)?;
        if leaving == dropped_label {
            finished = true;
            break;
        }
        entering = leaving;
        in_row_tab = !in_row_tab;
    }
    if !finished {
        return None;
    }

    let x: Vec<f64> = (0..m).map(|i| row_tab.value_of(i)).collect();
    let y: Vec<f64> = (0..n).map(|j| col_tab.value_of(m + j)).collect();
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    if !(sx > 0.0 && sy > 0.0) {
        return None;
    }
    Some((x.iter().map(|v| v / sx).collect(), y.iter().map(|v| v / sy).collect()))
}

//! Quantum 2×2 games under the Eisert-Wilkens-Lewenstein (EWL) protocol.
//!
//! The crate is organised bottom-up:
//!
//! * [`classical`]: bimatrix games, expected payoffs, dominance, Pareto sets
//!   and classical Nash equilibria.
//! * [`su2`]: single-qubit strategies as SU(2) elements, in angle, unit
//!   4-vector and matrix form.
//! * [`ewl`]: direct two-qubit simulation of the protocol. This is the
//!   ground truth every other payoff route is checked against.
//! * [`quadratic`]: payoffs as real symmetric quadratic forms in the
//!   deviating player's 4-vector, and eigenvector best responses.
//! * [`equilibrium`]: certification of candidate profiles, best-response
//!   dynamics, restricted finite games and the equilibrium search pipeline.
//! * [`casestudies`]: the asymmetric classical-vs-quantum Chicken scenario.
//! * [`gamefile`], [`strategy_spec`], [`report`], [`cli`]: file formats and
//!   the command-line surface.

pub mod casestudies;
pub mod classical;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod ewl;
pub mod gamefile;
pub mod games;
pub mod quadratic;
pub mod report;
pub mod strategy_spec;
pub mod su2;

pub use classical::{BimatrixGame, ClassicalMixedProfile};
pub use error::{Error, Result};
pub use ewl::{DiscreteMixedStrategy, EntanglerSetting, TwoQubitState};
pub use quadratic::{PayoffQuadraticForm, Player};
pub use su2::Su2Element;

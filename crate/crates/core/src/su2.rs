//! Single-qubit strategies as elements of SU(2).
//!
//! Every `U ∈ SU(2)` is written as `U = w I + i x σx + i y σy + i z σz` with a
//! real unit vector `u = (w, x, y, z)`, and equivalently through the angles
//! `(θ, α, β)`:
//!
//! ```text
//! U(θ,α,β) = [ e^{iα} cos θ/2      i e^{iβ} sin θ/2 ]
//!            [ i e^{-iβ} sin θ/2   e^{-iα} cos θ/2  ]
//! w = cos α cos θ/2,  x = cos β sin θ/2,  y = -sin β sin θ/2,  z = sin α cos θ/2
//! ```

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const THETA_SLACK: f64 = 1e-9;
/// Below this magnitude a half-angle factor is treated as zero and the angle
/// it multiplies is reported as 0.
const UNDEFINED_ANGLE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    theta: f64,
    alpha: f64,
    beta: f64,
    u: [f64; 4],
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { field, value })
    }
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl Su2Element {
    pub fn identity() -> Self {
        Self::from_vector_unchecked([1.0, 0.0, 0.0, 0.0])
    }

    /// The classical flip `F = iσx = U(π, 0, 0)`.
    pub fn flip() -> Self {
        Self::from_vector_unchecked([0.0, 1.0, 0.0, 0.0])
    }

    /// Build from angles. `α, β` are wrapped modulo 2π; `θ` is clamped to
    /// `[0, π]` if it overshoots by at most 1e-9 and rejected otherwise.
    pub fn from_angles(theta: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_finite("theta", theta)?;
        check_finite("alpha", alpha)?;
        check_finite("beta", beta)?;
        if !(-THETA_SLACK..=PI + THETA_SLACK).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        let theta = theta.clamp(0.0, PI);
        let alpha = wrap_angle(alpha);
        let beta = wrap_angle(beta);
        let (s, c) = (theta / 2.0).sin_cos();
        let u = [alpha.cos() * c, beta.cos() * s, -beta.sin() * s, alpha.sin() * c];
        Ok(Self { theta, alpha, beta, u })
    }

    /// Build from a 4-vector, renormalising it to unit length. Vectors that
    /// are already unit up to rounding are kept bit for bit, so serialized
    /// strategies read back unchanged.
    pub fn from_vector(u: [f64; 4]) -> Result<Self> {
        for (field, v) in ["w", "x", "y", "z"].into_iter().zip(u) {
            check_finite(field, v)?;
        }
        let norm_sq = u.iter().map(|v| v * v).sum::<f64>();
        if (norm_sq - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self::from_vector_unchecked(u));
        }
        // Scale first so huge or tiny components neither overflow nor vanish.
        let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scaled = u.map(|v| v / scale);
        let norm = scaled.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(Self::from_vector_unchecked(scaled.map(|v| v / norm)))
    }

    /// `u` must already be unit length.
    pub(crate) fn from_vector_unchecked(u: [f64; 4]) -> Self {
        let [w, x, y, z] = u;
        let cos_half = w.hypot(z);
        let sin_half = x.hypot(y);
        let theta = 2.0 * sin_half.atan2(cos_half);
        let alpha = if cos_half <= UNDEFINED_ANGLE { 0.0 } else { wrap_angle(z.atan2(w)) };
        let beta = if sin_half <= UNDEFINED_ANGLE { 0.0 } else { wrap_angle((-y).atan2(x)) };
        Self { theta, alpha, beta, u }
    }

    pub fn from_nalgebra(v: &Vector4<f64>) -> Result<Self> {
        Self::from_vector([v[0], v[1], v[2], v[3]])
    }

    /// Classical mixed strategy `(p, 1-p)` embedded as `U(θ, 0, 0)` with
    /// `p = cos²(θ/2)`.
    pub fn classical_strategy(p: f64) -> Result<Self> {
        check_finite("p", p)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { name: "p", value: p });
        }
        Self::from_angles(2.0 * p.sqrt().acos(), 0.0, 0.0)
    }

    /// Uniform (Haar) sample: four standard normals, normalised.
    pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let u: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(el) = Self::from_vector(u) {
                return el;
            }
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.theta, self.alpha, self.beta]
    }

    pub fn to_vector(&self) -> [f64; 4] {
        self.u
    }

    pub fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.u)
    }

    /// `w I + i x σx + i y σy + i z σz`.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        let [w, x, y, z] = self.u;
        Matrix2::new(
            Complex64::new(w, z),
            Complex64::new(y, x),
            Complex64::new(-y, x),
            Complex64::new(w, -z),
        )
    }

    /// Conjugate transpose; `U(θ,α,β)† = U(θ, 2π-α, π+β)`.
    pub fn dagger(&self) -> Self {
        let [w, x, y, z] = self.u;
        Self {
            theta: self.theta,
            alpha: wrap_angle(TAU - self.alpha),
            beta: wrap_angle(PI + self.beta),
            u: [w, -x, -y, -z],
        }
    }
}

impl Serialize for Su2Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StrategyRepr::Vector(self.u).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Su2Element {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        StrategyRepr::deserialize(deserializer)?
            .to_element()
            .map_err(serde::de::Error::custom)
    }
}

/// Wire form of a strategy: `{"angles":[θ,α,β]}` or `{"vector":[w,x,y,z]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StrategyRepr {
    Angles([f64; 3]),
    Vector([f64; 4]),
}

impl StrategyRepr {
    pub fn to_element(self) -> Result<Su2Element> {
        match self {
            Self::Angles([t, a, b]) => Su2Element::from_angles(t, a, b),
            Self::Vector(u) => Su2Element::from_vector(u),
        }
    }
}

/// Cartesian grid over `θ ∈ [0, π]` (both endpoints when `n_theta ≥ 2`) and
/// `α, β ∈ [0, 2π)`. The order is θ-major, then α, then β.
pub fn grid(n_theta: usize, n_alpha: usize, n_beta: usize) -> Result<Vec<Su2Element>> {
    if n_theta == 0 || n_alpha == 0 || n_beta == 0 {
        return Err(Error::InvalidArgument("grid counts must be at least 1".into()));
    }
    let thetas: Vec<f64> = if n_theta == 1 {
        vec![0.0]
    } else {
        (0..n_theta).map(|k| PI * k as f64 / (n_theta - 1) as f64).collect()
    };
    let mut out = Vec::with_capacity(n_theta * n_alpha * n_beta);
    for &t in &thetas {
        for ia in 0..n_alpha {
            let a = TAU * ia as f64 / n_alpha as f64;
            for ib in 0..n_beta {
                let b = TAU * ib as f64 / n_beta as f64;
                out.push(Su2Element::from_angles(t, a, b)?);
            }
        }
    }
    Ok(out)
}

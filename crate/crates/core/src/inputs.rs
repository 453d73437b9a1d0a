//! Seeded i.i.d. input sequences and the truncation-standardization map.

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Mean zero, variance one input distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dist {
    #[serde(rename = "normal")]
    StandardNormal,
    Rademacher,
    /// Uniform on `[-sqrt(3), sqrt(3)]`.
    #[serde(rename = "uniform")]
    BoundedUniform,
}

impl Dist {
    pub fn name(self) -> &'static str {
        match self {
            Dist::StandardNormal => "normal",
            Dist::Rademacher => "rademacher",
            Dist::BoundedUniform => "uniform",
        }
    }

    /// Mean and standard deviation of `x * 1{|x| <= t}` in closed form.
    pub fn truncated_moments(self, t: f64) -> (f64, f64) {
        // all three distributions are symmetric, so the truncated mean vanishes
        let mu = 0.0;
        let second = match self {
            Dist::StandardNormal => {
                let density = (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
                (libm::erf(t / SQRT_2) - 2.0 * t * density).max(0.0)
            }
            Dist::Rademacher => {
                if t >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Dist::BoundedUniform => {
                if t >= SQRT_3 {
                    1.0
                } else {
                    t.powi(3) / (3.0 * SQRT_3)
                }
            }
        };
        (mu, (second - mu * mu).max(0.0).sqrt())
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "gaussian" | "standard-normal" => Ok(Dist::StandardNormal),
            // standardized Bernoulli(1/2) is exactly Rademacher
            "rademacher" | "bernoulli" => Ok(Dist::Rademacher),
            "uniform" | "bounded-uniform" => Ok(Dist::BoundedUniform),
            other => Err(Error::invalid(format!("unknown distribution '{other}'"))),
        }
    }
}

/// One seeded realization of `{x_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSequence {
    pub values: Vec<f64>,
    pub dist: Dist,
    pub seed: u64,
}

impl InputSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn generate_sequence(dist: Dist, length: usize, seed: u64) -> Result<InputSequence> {
    if length == 0 {
        return Err(Error::invalid("sequence length must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let values = match dist {
        Dist::StandardNormal => (0..length).map(|_| rng.sample(StandardNormal)).collect(),
        Dist::Rademacher => (0..length)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect(),
        Dist::BoundedUniform => (0..length)
            .map(|_| rng.random_range(-SQRT_3..SQRT_3))
            .collect(),
    };
    Ok(InputSequence { values, dist, seed })
}

/// Apply `x -> (x 1{|x| <= t} - mu(t)) / sigma(t)` elementwise.
///
/// `mu(t)` and `sigma(t)` are the population truncated moments of the
/// sequence's distribution, so the output has mean 0 and variance 1 exactly
/// and is bounded by `(t + |mu(t)|) / sigma(t)`.
pub fn truncate_standardize(seq: &InputSequence, t: f64) -> Result<InputSequence> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("truncation level must be positive, got {t}")));
    }
    let (mu, sigma) = seq.dist.truncated_moments(t);
    if sigma <= 0.0 {
        return Err(Error::DegenerateTruncation { dist: seq.dist.name(), t });
    }
    let values = seq
        .values
        .iter()
        .map(|&x| {
            let kept = if x.abs() <= t { x } else { 0.0 };
            (kept - mu) / sigma
        })
        .collect();
    Ok(InputSequence { values, dist: seq.dist, seed: seq.seed })
}

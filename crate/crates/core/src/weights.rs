//! Weight systems `(w, d)` and the quantities read directly off them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_VARS: usize = 3;
pub const MAX_VARS: usize = 8;

/// Primitive weight vector together with a weighted degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: Vec<u64>,
    degree: u64,
}

impl WeightSystem {
    /// Builds a weight system; the degree defaults to `Σw - 1`.
    pub fn new(weights: &[u64], degree: Option<u64>) -> Result<Self> {
        if !(MIN_VARS..=MAX_VARS).contains(&weights.len()) {
            return Err(Error::UnsupportedArity(weights.len()));
        }
        if let Some(&w) = weights.iter().find(|&&w| w == 0) {
            return Err(Error::InvalidWeight(w as i64));
        }
        let g = weights.iter().fold(0u64, |g, &w| g.gcd(&w));
        if g != 1 {
            return Err(Error::NonPrimitiveWeights { weights: weights.to_vec(), gcd: g });
        }
        let degree = match degree {
            Some(d) => d,
            None => weights.iter().sum::<u64>() - 1,
        };
        if degree < 1 {
            return Err(Error::InvalidDegree(degree as i64));
        }
        Ok(Self { weights: weights.to_vec(), degree })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Number of variables `m = n + 1`.
    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    /// `n`, so that the link has dimension `2n - 1`.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn link_dimension(&self) -> usize {
        2 * self.n() - 1
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn is_coprime(&self) -> bool {
        self.weights.iter().all(|w| w.gcd(&self.degree) == 1)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "({}) d={}", ws.join(","), self.degree)
    }
}

/// Shorthand for [`WeightSystem::new`].
pub fn make_weight_system(weights: &[u64], degree: Option<u64>) -> Result<WeightSystem> {
    WeightSystem::new(weights, degree)
}

/// `u_i = d / gcd(d, w_i)`, `v_i = w_i / gcd(d, w_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UvData {
    pub u: Vec<u64>,
    pub v: Vec<u64>,
}

impl UvData {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `n` for the singularity with these exponents (one less than the
    /// number of variables).
    pub fn n(&self) -> usize {
        self.u.len() - 1
    }
}

pub fn uv_data(ws: &WeightSystem) -> UvData {
    let d = ws.degree;
    let (u, v) = ws
        .weights
        .iter()
        .map(|&w| {
            let g = d.gcd(&w);
            (d / g, w / g)
        })
        .unzip();
    UvData { u, v }
}

/// `μ = ∏ (d / w_i - 1)`, computed exactly.
pub fn milnor_number(ws: &WeightSystem) -> Result<BigInt> {
    let d = BigInt::from(ws.degree);
    let mu = ws.weights.iter().fold(BigRational::one(), |acc, &w| {
        acc * (BigRational::new(d.clone(), w.into()) - BigRational::one())
    });
    if mu.is_integer() {
        Ok(mu.to_integer())
    } else {
        Err(Error::NonIntegralMilnor(mu.to_string()))
    }
}

/// `|w| - d > 0`: the quotient orbifold is Fano.
pub fn fano_positive(ws: &WeightSystem) -> bool {
    ws.weight_sum() > ws.degree
}

/// `|w| - d` as a signed integer.
pub fn fano_index(ws: &WeightSystem) -> i128 {
    ws.weight_sum() as i128 - ws.degree as i128
}

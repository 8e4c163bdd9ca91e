use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::hadamard_sign;

/// Weights `α_S ∈ [−1, 1]` on the level-ℓ subsets.
///
/// The structured kinds live on `3N` coordinates split into blocks
/// `A = [0, N)`, `B = [N, 2N)`, `C = [2N, 3N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignFamily {
    Generic {
        level: usize,
        /// `(mask, α)` pairs; unlisted masks weigh zero.
        values: BTreeMap<u64, f64>,
    },
    AlphaGamma {
        gamma: Vec<f64>,
    },
    BetaGamma {
        gamma: Vec<f64>,
    },
}

fn check_unit(v: f64, what: &str) -> Result<()> {
    if !(v.is_finite() && v.abs() <= 1.0) {
        return Err(Error::Specification(format!("{what} value {v} outside [−1,1]")));
    }
    Ok(())
}

fn check_gamma(gamma: &[f64]) -> Result<()> {
    if gamma.is_empty() || gamma.len() % 3 != 0 {
        return Err(Error::Specification(format!(
            "γ needs a positive multiple of 3 coordinates, got {}",
            gamma.len()
        )));
    }
    if gamma.len() > 63 {
        return Err(Error::Specification("γ longer than 63 coordinates".into()));
    }
    gamma.iter().try_for_each(|&g| check_unit(g, "γ"))
}

impl SignFamily {
    pub fn generic(level: usize, values: BTreeMap<u64, f64>) -> Result<Self> {
        for (&mask, &v) in &values {
            if mask.count_ones() as usize != level {
                return Err(Error::Specification(format!(
                    "mask {mask:#b} is not a level-{level} subset"
                )));
            }
            check_unit(v, "sign")?;
        }
        Ok(SignFamily::Generic { level, values })
    }

    pub fn alpha(gamma: Vec<f64>) -> Result<Self> {
        check_gamma(&gamma)?;
        Ok(SignFamily::AlphaGamma { gamma })
    }

    pub fn beta(gamma: Vec<f64>) -> Result<Self> {
        check_gamma(&gamma)?;
        Ok(SignFamily::BetaGamma { gamma })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SignFamily = serde_json::from_str(text)?;
        match raw {
            SignFamily::Generic { level, values } => Self::generic(level, values),
            SignFamily::AlphaGamma { gamma } => Self::alpha(gamma),
            SignFamily::BetaGamma { gamma } => Self::beta(gamma),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            SignFamily::Generic { level, .. } => *level,
            SignFamily::AlphaGamma { .. } => 3,
            SignFamily::BetaGamma { .. } => 6,
        }
    }

    /// Size of the coordinate domain for the structured kinds.
    pub fn num_vars(&self) -> Option<usize> {
        match self {
            SignFamily::Generic { .. } => None,
            SignFamily::AlphaGamma { gamma } | SignFamily::BetaGamma { gamma } => Some(gamma.len()),
        }
    }

    pub fn value(&self, mask: u64) -> f64 {
        match self {
            SignFamily::Generic { values, .. } => values.get(&mask).copied().unwrap_or(0.0),
            SignFamily::AlphaGamma { .. } => alpha_gamma(self, mask),
            SignFamily::BetaGamma { .. } => beta_gamma(self, mask),
        }
    }
}

/// `H̄(i, j) = (−1)^{⟨i,j⟩₂}` on block-local indices.
pub fn h_bar(i: usize, j: usize) -> f64 {
    hadamard_sign(i, j)
}

fn block_members(mask: u64, n: usize) -> [Vec<usize>; 3] {
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        if i < 3 * n {
            out[i / n].push(i);
        }
    }
    out
}

fn alpha_tuple(gamma: &[f64], n: usize, i1: usize, i2: usize, i3: usize) -> f64 {
    let (a, b, c) = (i1, i2 - n, i3 - 2 * n);
    h_bar(b, a) * h_bar(b, c) * gamma[i1] * gamma[i2] * gamma[i3]
}

/// `α(γ)_S`: nonzero only when `S` has one element in each block.
pub fn alpha_gamma(signs: &SignFamily, mask: u64) -> f64 {
    let SignFamily::AlphaGamma { gamma } = signs else {
        return 0.0;
    };
    let n = gamma.len() / 3;
    if mask.count_ones() != 3 || mask >> (3 * n) != 0 {
        return 0.0;
    }
    let [a, b, c] = block_members(mask, n);
    if a.len() != 1 || b.len() != 1 || c.len() != 1 {
        return 0.0;
    }
    alpha_tuple(gamma, n, a[0], b[0], c[0])
}

/// `β(γ)_S`: nonzero only when `S` has two elements in each block; the set
/// is read as the tuple `(i₁,…,i₆)` with `i₁ < i₄`, `i₂ < i₅`, `i₃ < i₆`.
pub fn beta_gamma(signs: &SignFamily, mask: u64) -> f64 {
    let SignFamily::BetaGamma { gamma } = signs else {
        return 0.0;
    };
    let n = gamma.len() / 3;
    if mask.count_ones() != 6 || mask >> (3 * n) != 0 {
        return 0.0;
    }
    let [a, b, c] = block_members(mask, n);
    if a.len() != 2 || b.len() != 2 || c.len() != 2 {
        return 0.0;
    }
    alpha_tuple(gamma, n, a[0], b[0], c[0]) * alpha_tuple(gamma, n, a[1], b[1], c[1])
}

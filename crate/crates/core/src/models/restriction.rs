use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::check_signs;

/// One coordinate of a restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Minus,
    Plus,
    Star,
}

impl Literal {
    pub fn fixed_value(self) -> Option<i8> {
        match self {
            Literal::Minus => Some(-1),
            Literal::Plus => Some(1),
            Literal::Star => None,
        }
    }
}

/// A partial assignment `ρ ∈ {−1, +1, ⋆}^N`.
///
/// Written as a string over `-`, `+`, `*`, one character per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Restriction {
    pattern: Vec<Literal>,
}

impl Restriction {
    pub fn new(pattern: Vec<Literal>) -> Self {
        Self { pattern }
    }

    pub fn all_free(n: usize) -> Self {
        Self::new(vec![Literal::Star; n])
    }

    /// Length `2n` with the first `n` coordinates fixed to `+1`. An oracle on
    /// `2n` positions restricted this way acts as the controlled oracle on
    /// the remaining `n`.
    pub fn controlled(n: usize) -> Self {
        let mut pattern = vec![Literal::Plus; n];
        pattern.extend(std::iter::repeat_n(Literal::Star, n));
        Self::new(pattern)
    }

    /// Each coordinate stays free with probability `p_star`, otherwise it is
    /// fixed to a uniform sign.
    pub fn random<R: Rng + ?Sized>(n: usize, p_star: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_star) {
            return Err(Error::Parameter(format!("star probability {p_star} outside [0,1]")));
        }
        let pattern = (0..n)
            .map(|_| {
                if rng.random::<f64>() < p_star {
                    Literal::Star
                } else if rng.random::<bool>() {
                    Literal::Plus
                } else {
                    Literal::Minus
                }
            })
            .collect();
        Ok(Self { pattern })
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.pattern
    }

    pub fn get(&self, i: usize) -> Literal {
        self.pattern[i]
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.pattern[i] == Literal::Star)
            .collect()
    }

    pub fn num_free(&self) -> usize {
        self.pattern.iter().filter(|&&l| l == Literal::Star).count()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::Shape(format!(
                "restriction has length {}, expected {n}",
                self.len()
            )));
        }
        Ok(())
    }

    /// `ρ(x)`: fixed coordinates take their value, free ones copy `x`.
    pub fn apply(&self, x: &[i8]) -> Result<Vec<i8>> {
        self.check_len(x.len())?;
        check_signs(x)?;
        Ok(self
            .pattern
            .iter()
            .zip(x)
            .map(|(l, &xi)| l.fixed_value().unwrap_or(xi))
            .collect())
    }

    /// Full input for a point of the free subcube. Bit `j` of `y` set means
    /// the `j`-th free coordinate (in increasing order) is `−1`.
    pub fn expand(&self, y: usize) -> Vec<i8> {
        let mut j = 0;
        self.pattern
            .iter()
            .map(|l| match l.fixed_value() {
                Some(v) => v,
                None => {
                    let bit = (y >> j) & 1;
                    j += 1;
                    if bit == 1 {
                        -1
                    } else {
                        1
                    }
                }
            })
            .collect()
    }

    /// Relabeling that moves free coordinates to a prefix, preserving order
    /// within each group: `perm[old] = new`.
    pub fn prefix_relabeling(&self) -> Vec<usize> {
        let mut perm = vec![0; self.len()];
        let mut next = 0;
        for i in self.free_indices() {
            perm[i] = next;
            next += 1;
        }
        for i in 0..self.len() {
            if self.pattern[i] != Literal::Star {
                perm[i] = next;
                next += 1;
            }
        }
        perm
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.pattern {
            f.write_str(match l {
                Literal::Minus => "-",
                Literal::Plus => "+",
                Literal::Star => "*",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pattern = s
            .chars()
            .map(|c| match c {
                '-' => Ok(Literal::Minus),
                '+' => Ok(Literal::Plus),
                '*' => Ok(Literal::Star),
                other => Err(Error::Specification(format!(
                    "restriction character {other:?} is not one of + - *"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pattern })
    }
}

/// Free-function form of [`Restriction::apply`].
pub fn restrict(x: &[i8], rho: &Restriction) -> Result<Vec<i8>> {
    rho.apply(x)
}

//! Exact Fourier spectra and level-ℓ Fourier growth.
//!
//! A function on `{−1,1}^N` is stored as a truth table of length `2^N`; bit
//! `i` of the table index set means `x_i = −1`. With that convention the
//! character `χ_S(x) = Π_{i∈S} x_i` at index `y` is `(−1)^{|S ∧ y|}` and the
//! whole spectrum is one Walsh–Hadamard transform.

mod direct;
mod signs;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fwht_in_place, MAX_ORACLE_QUBITS};
use crate::models::{acceptance_direct, acceptance_hybrid, AlgorithmSpec, HybridSpec, Restriction};

pub use direct::{
    direct_coefficient, direct_coefficient_bqp, direct_coefficient_dqck,
    direct_coefficient_half_bqp, direct_spectrum, relabeled_dqck_matrices, MAX_DIRECT_TERMS,
};
pub use signs::{alpha_gamma, beta_gamma, h_bar, SignFamily};

/// Largest number of variables a truth table may have.
pub const MAX_VARS: usize = MAX_ORACLE_QUBITS as usize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierSpectrum {
    num_vars: usize,
    coeffs: Vec<f64>,
}

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::Resource(format!(
            "truth table over {n} variables exceeds cap of {MAX_VARS}"
        )));
    }
    Ok(())
}

impl FourierSpectrum {
    /// `f̂(S) = 2^{−N}·Σ_x f(x)·χ_S(x)` for every `S`.
    pub fn from_truth_table(table: &[f64]) -> Result<Self> {
        if !table.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "truth table length {} is not a power of two",
                table.len()
            )));
        }
        let num_vars = table.len().trailing_zeros() as usize;
        check_vars(num_vars)?;
        let mut coeffs = table.to_vec();
        fwht_in_place(&mut coeffs);
        let scale = 1.0 / table.len() as f64;
        for c in &mut coeffs {
            *c *= scale;
        }
        Ok(Self { num_vars, coeffs })
    }

    /// Wraps precomputed coefficients.
    pub fn from_coefficients(coeffs: Vec<f64>) -> Result<Self> {
        if !coeffs.len().is_power_of_two() {
            return Err(Error::Shape("coefficient vector length is not a power of two".into()));
        }
        let num_vars = coeffs.len().trailing_zeros() as usize;
        check_vars(num_vars)?;
        Ok(Self { num_vars, coeffs })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// Inverse transform back to the truth table.
    pub fn truth_table(&self) -> Vec<f64> {
        let mut t = self.coeffs.clone();
        fwht_in_place(&mut t);
        t
    }

    /// `Σ_S f̂(S)²`.
    pub fn l2_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `L_{1,ℓ} = Σ_{|S|=ℓ} |f̂(S)|`.
    pub fn growth(&self, level: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| s.count_ones() as usize == level)
            .map(|(_, c)| c.abs())
            .sum()
    }

    /// Masks with `|f̂(S)| > tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&s| self.coeffs[s].abs() > tol)
            .collect()
    }

    /// Spectrum of `f|_ρ` over the free coordinates of `ρ` (in increasing
    /// order), obtained by folding each fixed variable into the coefficients.
    pub fn restrict(&self, rho: &Restriction) -> Result<FourierSpectrum> {
        rho.check_len(self.num_vars)?;
        let free = rho.free_indices();
        let mut out = vec![0.0; 1 << free.len()];
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut sign = 1.0;
            let mut t = 0usize;
            let mut j = 0;
            for i in 0..self.num_vars {
                let in_s = (s >> i) & 1 == 1;
                match rho.get(i).fixed_value() {
                    None => {
                        if in_s {
                            t |= 1 << j;
                        }
                        j += 1;
                    }
                    Some(v) => {
                        if in_s {
                            sign *= v as f64;
                        }
                    }
                }
            }
            out[t] += sign * c;
        }
        Ok(FourierSpectrum {
            num_vars: free.len(),
            coeffs: out,
        })
    }

    /// CSV rows `mask,coefficient`, skipping coefficients with `|f̂(S)| ≤ tol`.
    pub fn to_csv_rows(&self, tol: f64) -> Vec<(usize, f64)> {
        self.support(tol)
            .into_iter()
            .map(|s| (s, self.coeffs[s]))
            .collect()
    }
}

/// Spectrum of an arbitrary evaluator on `{−1,1}^n`.
pub fn spectrum<F>(f: F, n: usize) -> Result<FourierSpectrum>
where
    F: Fn(&[i8]) -> f64 + Sync,
{
    check_vars(n)?;
    let table: Vec<f64> = (0..1usize << n)
        .into_par_iter()
        .map(|y| {
            let x: Vec<i8> = (0..n).map(|i| if (y >> i) & 1 == 1 { -1 } else { 1 }).collect();
            f(&x)
        })
        .collect();
    FourierSpectrum::from_truth_table(&table)
}

/// Truth table of `x ↦ g(ρ(x))` over the free coordinates of `ρ`.
fn restricted_table<G>(n: usize, rho: Option<&Restriction>, g: G) -> Result<Vec<f64>>
where
    G: Fn(&[i8]) -> Result<f64> + Sync,
{
    let owned;
    let rho = match rho {
        Some(r) => {
            r.check_len(n)?;
            r
        }
        None => {
            owned = Restriction::all_free(n);
            &owned
        }
    };
    check_vars(rho.num_free())?;
    (0..1usize << rho.num_free())
        .into_par_iter()
        .map(|y| g(&rho.expand(y)))
        .collect()
}

/// Acceptance probability of `spec` tabulated over the free coordinates of `ρ`.
pub fn acceptance_table(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<Vec<f64>> {
    restricted_table(spec.num_vars(), rho, |x| acceptance_direct(spec, x))
}

/// Spectrum of `f|_ρ` where `f` is the acceptance probability of `spec`.
pub fn acceptance_spectrum(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
) -> Result<FourierSpectrum> {
    FourierSpectrum::from_truth_table(&acceptance_table(spec, rho)?)
}

/// Spectrum of `f|_ρ` for a hybrid algorithm.
pub fn hybrid_spectrum(h: &HybridSpec, rho: Option<&Restriction>) -> Result<FourierSpectrum> {
    let table = restricted_table(h.num_vars(), rho, |x| acceptance_hybrid(h, x))?;
    FourierSpectrum::from_truth_table(&table)
}

/// `L_{1,ℓ}` of a spectrum.
pub fn growth(sp: &FourierSpectrum, level: usize) -> f64 {
    sp.growth(level)
}

/// `Σ_{|S|=ℓ} α_S·f̂(S)` with `ℓ` the level of the sign family.
pub fn signed_growth(sp: &FourierSpectrum, signs: &SignFamily) -> Result<f64> {
    let identity: Vec<usize> = (0..sp.num_vars()).collect();
    signed_growth_mapped(sp, &identity, signs)
}

/// Signed growth of a spectrum whose variable `j` is coordinate `vars[j]` of
/// the sign family's domain (e.g. the free coordinates of a restriction).
pub fn signed_growth_mapped(
    sp: &FourierSpectrum,
    vars: &[usize],
    signs: &SignFamily,
) -> Result<f64> {
    if vars.len() != sp.num_vars() {
        return Err(Error::Shape(format!(
            "{} variable labels for a spectrum over {} variables",
            vars.len(),
            sp.num_vars()
        )));
    }
    if let Some(total) = signs.num_vars() {
        if let Some(&bad) = vars.iter().find(|&&v| v >= total) {
            return Err(Error::Specification(format!(
                "variable {bad} outside the sign family's {total} coordinates"
            )));
        }
    }
    if vars.iter().any(|&v| v >= 64) {
        return Err(Error::Specification("sign families address at most 64 coordinates".into()));
    }
    let level = signs.level();
    if level > sp.num_vars() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (s, &c) in sp.coeffs().iter().enumerate() {
        if s.count_ones() as usize != level || c == 0.0 {
            continue;
        }
        let mut full = 0u64;
        for (j, &v) in vars.iter().enumerate() {
            if (s >> j) & 1 == 1 {
                full |= 1 << v;
            }
        }
        total += signs.value(full) * c;
    }
    Ok(total)
}

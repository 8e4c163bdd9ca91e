//! Explicit-constant Fourier growth ceilings.

use crate::error::{Error, Result};

/// `C(n, k)` as a float; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Ceiling for `d`-query DQC(k) algorithms at level `ℓ ≥ 2`:
/// `min(2^{k/2}, √N)·C(2d, ℓ)·N^{(ℓ−2)/2}`.
pub fn dqck_ceiling(k: u32, n_vars: usize, d: usize, level: usize) -> Result<f64> {
    if level < 2 {
        return Err(Error::Parameter(format!(
            "DQC(k) ceiling is stated for level ≥ 2, got {level}"
        )));
    }
    let n = n_vars as f64;
    let clean = (2f64).powf(k as f64 / 2.0).min(n.sqrt());
    Ok(clean * binomial(2 * d as u64, level as u64) * n.powf((level as f64 - 2.0) / 2.0))
}

/// Ceiling for `d`-query BQP algorithms: `C(2d, ℓ)·N^{(ℓ−1)/2}`.
///
/// DQC(k) and ½BQP acceptance probabilities are averages of BQP acceptance
/// probabilities, so the same ceiling applies to them at every level.
pub fn bqp_ceiling(n_vars: usize, d: usize, level: usize) -> f64 {
    binomial(2 * d as u64, level as u64) * (n_vars as f64).powf((level as f64 - 1.0) / 2.0)
}

/// Ceiling for DQC(k) algorithms with `d` classical pre-processing queries:
/// `C(3d, ℓ)·N^{(ℓ−2)/2}·min(2^{k/2}, √N)`.
pub fn hybrid_dqck_ceiling(k: u32, n_vars: usize, d: usize, level: usize) -> Result<f64> {
    if level < 2 {
        return Err(Error::Parameter(format!(
            "hybrid DQC(k) ceiling is stated for level ≥ 2, got {level}"
        )));
    }
    let n = n_vars as f64;
    let clean = (2f64).powf(k as f64 / 2.0).min(n.sqrt());
    Ok(binomial(3 * d as u64, level as u64) * n.powf((level as f64 - 2.0) / 2.0) * clean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(2, 3), 0.0);
        assert_eq!(binomial(9, 0), 1.0);
    }

    #[test]
    fn table_ceilings() {
        assert_eq!(bqp_ceiling(4, 1, 1), 2.0);
        let c = dqck_ceiling(1, 4, 2, 2).unwrap();
        assert!((c - 6.0 * 2f64.sqrt()).abs() < 1e-12);
        // √N wins once 2^{k/2} exceeds it
        let c = dqck_ceiling(6, 4, 1, 2).unwrap();
        assert!((c - 2.0).abs() < 1e-12);
        assert!(dqck_ceiling(1, 4, 1, 1).is_err());
        let h = hybrid_dqck_ceiling(1, 4, 2, 3).unwrap();
        assert!((h - 20.0 * 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }
}

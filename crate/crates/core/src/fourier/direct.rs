//! Fourier coefficients by explicit summation over index tuples.
//!
//! These oracles never build a truth table. After relabeling the oracle
//! positions so that the free coordinates of `ρ` come first, each fixed
//! coordinate `i` contributes `ρ_i` through the diagonal `D^ρ`, and a tuple
//! `(I_1, …)` contributes to `f̂(S)` exactly when the parity of its free
//! oracle indices is `S`.

use super::FourierSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, IndexSpace, C64, ZERO};
use crate::models::{formula_matrices, AlgorithmSpec, Literal, Model, Restriction};

/// Largest tuple count the direct oracles will enumerate.
pub const MAX_DIRECT_TERMS: f64 = 1e7;

struct Relabeled {
    space: IndexSpace,
    /// composite index: old → new
    perm: Vec<usize>,
    /// composite index: new → old
    inverse: Vec<usize>,
    /// `D^ρ` entry per new composite index
    d_rho: Vec<f64>,
    n_free: usize,
}

impl Relabeled {
    fn new(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<Self> {
        let space = spec.space();
        let n = space.oracle_dim();
        let rho = match rho {
            Some(r) => {
                r.check_len(n)?;
                r.clone()
            }
            None => Restriction::all_free(n),
        };
        let oracle_perm = rho.prefix_relabeling();
        let mut oracle_inv = vec![0; n];
        for (old, &new) in oracle_perm.iter().enumerate() {
            oracle_inv[new] = old;
        }
        let m = space.dim();
        let mut perm = vec![0; m];
        let mut inverse = vec![0; m];
        let mut d_rho = vec![1.0; m];
        for flat in 0..m {
            let (i, w, k) = space.decompose(flat);
            let new = space.compose(oracle_perm[i], w, k);
            perm[flat] = new;
            inverse[new] = flat;
            if let Some(v) = rho.get(i).fixed_value() {
                d_rho[new] = v as f64;
            }
        }
        Ok(Self {
            space,
            perm,
            inverse,
            d_rho,
            n_free: rho.literals().iter().filter(|&&l| l == Literal::Star).count(),
        })
    }

    /// Bit of `S` carried by composite index `flat`, if its oracle index is free.
    fn free_bit(&self, flat: usize) -> Option<usize> {
        let i = self.space.oracle_index(flat);
        (i < self.n_free).then_some(i)
    }
}

/// `D^ρ·V'_t` for the trace form, `t = 1 … 2d`, with oracle positions
/// relabeled so the free coordinates come first. Returns the matrices and
/// the number of free coordinates.
pub fn relabeled_dqck_matrices(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
) -> Result<(Vec<ComplexMatrix>, usize)> {
    if spec.model() != Model::Dqck {
        return Err(Error::Specification(format!(
            "trace form needs a DQCK algorithm, got {}",
            spec.model()
        )));
    }
    let r = Relabeled::new(spec, rho)?;
    let mats = formula_matrices(spec)
        .iter()
        .map(|v| v.conjugate_by_permutation(&r.perm).scale_rows(&r.d_rho))
        .collect();
    Ok((mats, r.n_free))
}

/// One index-tuple enumeration. Positions are 1-based: `I_p` is the row index
/// of `mats[p−1]`; the last matrix's column index is `close` (or `I_1`).
struct Chain<'a> {
    mats: Vec<ComplexMatrix>,
    /// `parity[p−1]`: does `I_p` enter the parity (and `D^ρ`)?
    parity: Vec<bool>,
    starts: Vec<usize>,
    close: Option<usize>,
    /// ½BQP weight `F(I_1, I_pos)` checked when `I_pos` is chosen.
    weight: Option<(usize, &'a dyn Fn(usize, usize) -> bool)>,
    relabel: &'a Relabeled,
}

impl Chain<'_> {
    fn run(&self) -> Vec<C64> {
        let mut out = vec![ZERO; 1 << self.relabel.n_free];
        for &i1 in &self.starts {
            let mask = self.parity_of(1, i1, 0);
            self.descend(1, i1, i1, C64::new(1.0, 0.0), mask, &mut out);
        }
        out
    }

    fn parity_of(&self, pos: usize, idx: usize, mask: usize) -> usize {
        if self.parity[pos - 1] {
            if let Some(b) = self.relabel.free_bit(idx) {
                return mask ^ (1 << b);
            }
        }
        mask
    }

    /// `cur` is `I_pos`; `acc` the product of entries up to `mats[pos−2]`.
    fn descend(&self, pos: usize, first: usize, cur: usize, acc: C64, mask: usize, out: &mut [C64]) {
        let v = &self.mats[pos - 1];
        if pos == self.mats.len() {
            let end = self.close.unwrap_or(first);
            let z = v.get(cur, end);
            if z != ZERO {
                out[mask] += acc * z;
            }
            return;
        }
        let next_pos = pos + 1;
        for (next, &z) in v.row(cur).iter().enumerate() {
            if z == ZERO {
                continue;
            }
            if let Some((p, f)) = self.weight {
                if p == next_pos && !f(first, next) {
                    continue;
                }
            }
            let m = self.parity_of(next_pos, next, mask);
            self.descend(next_pos, first, next, acc * z, m, out);
        }
    }
}

fn guard(terms: f64) -> Result<()> {
    if terms > MAX_DIRECT_TERMS {
        return Err(Error::Resource(format!(
            "direct summation over {terms:.3e} index tuples exceeds {MAX_DIRECT_TERMS:.0e}"
        )));
    }
    Ok(())
}

fn finish(sums: Vec<C64>, norm: f64) -> Result<FourierSpectrum> {
    FourierSpectrum::from_coefficients(sums.into_iter().map(|z| z.re / norm).collect())
}

fn spectrum_dqck(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<FourierSpectrum> {
    let m = spec.space().dim() as f64;
    guard(m.powi(2 * spec.d() as i32))?;
    let r = Relabeled::new(spec, rho)?;
    let (mats, _) = relabeled_dqck_matrices(spec, rho)?;
    let len = mats.len();
    let chain = Chain {
        mats,
        parity: vec![true; len],
        starts: (0..spec.space().dim()).collect(),
        close: None,
        weight: None,
        relabel: &r,
    };
    finish(chain.run(), spec.space().noisy_dim() as f64)
}

fn spectrum_bqp(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<FourierSpectrum> {
    let m = spec.space().dim() as f64;
    guard(m.powi(2 * spec.d() as i32))?;
    let r = Relabeled::new(spec, rho)?;
    let v = formula_matrices(spec);
    let len = v.len();
    let mats = v
        .iter()
        .enumerate()
        .map(|(t, vt)| {
            let p = vt.conjugate_by_permutation(&r.perm);
            if t == 0 {
                p
            } else {
                p.scale_rows(&r.d_rho)
            }
        })
        .collect();
    let mut parity = vec![true; len];
    parity[0] = false;
    let start = r.perm[0];
    let chain = Chain {
        mats,
        parity,
        starts: vec![start],
        close: Some(start),
        weight: None,
        relabel: &r,
    };
    finish(chain.run(), 1.0)
}

fn spectrum_half_bqp(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<FourierSpectrum> {
    let d = spec.d();
    let m = spec.space().dim();
    guard((m as f64).powi(2 * d as i32 + 2))?;
    let r = Relabeled::new(spec, rho)?;
    let skip = [0, d + 1];
    let mats = formula_matrices(spec)
        .iter()
        .enumerate()
        .map(|(t, vt)| {
            let p = vt.conjugate_by_permutation(&r.perm);
            if skip.contains(&t) {
                p
            } else {
                p.scale_rows(&r.d_rho)
            }
        })
        .collect();
    let parity = (0..2 * d + 2).map(|t| !skip.contains(&t)).collect();
    let pred = |a: usize, b: usize| spec.accepts_pair(r.inverse[a], r.inverse[b]);
    let chain = Chain {
        mats,
        parity,
        starts: (0..m).collect(),
        close: None,
        weight: Some((d + 2, &pred)),
        relabel: &r,
    };
    finish(chain.run(), m as f64)
}

/// Every coefficient of `f|_ρ` by direct summation, indexed by masks over
/// the free coordinates of `ρ` in increasing order.
pub fn direct_spectrum(spec: &AlgorithmSpec, rho: Option<&Restriction>) -> Result<FourierSpectrum> {
    match spec.model() {
        Model::Bqp => spectrum_bqp(spec, rho),
        Model::Dqck => spectrum_dqck(spec, rho),
        Model::HalfBqp => spectrum_half_bqp(spec, rho),
    }
}

fn check_mask(rho: Option<&Restriction>, spec: &AlgorithmSpec, s: usize) -> Result<()> {
    let free = rho.map_or(spec.num_vars(), |r| r.num_free());
    if s >> free != 0 {
        return Err(Error::Specification(format!(
            "mask {s:#b} uses coordinates beyond the {free} free ones"
        )));
    }
    Ok(())
}

pub fn direct_coefficient_dqck(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
    s: usize,
) -> Result<f64> {
    check_mask(rho, spec, s)?;
    Ok(spectrum_dqck(spec, rho)?.coefficient(s))
}

pub fn direct_coefficient_bqp(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
    s: usize,
) -> Result<f64> {
    if spec.model() != Model::Bqp {
        return Err(Error::Specification("expected a BQP algorithm".into()));
    }
    check_mask(rho, spec, s)?;
    Ok(spectrum_bqp(spec, rho)?.coefficient(s))
}

pub fn direct_coefficient_half_bqp(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
    s: usize,
) -> Result<f64> {
    if spec.model() != Model::HalfBqp {
        return Err(Error::Specification("expected a HALF_BQP algorithm".into()));
    }
    check_mask(rho, spec, s)?;
    Ok(spectrum_half_bqp(spec, rho)?.coefficient(s))
}

/// `f̂|_ρ(S)` by direct summation, dispatching on the model.
pub fn direct_coefficient(spec: &AlgorithmSpec, rho: Option<&Restriction>, s: usize) -> Result<f64> {
    check_mask(rho, spec, s)?;
    Ok(direct_spectrum(spec, rho)?.coefficient(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::acceptance_spectrum;
    use crate::sampling::random_spec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn agree(spec: &AlgorithmSpec, rho: Option<&Restriction>) {
        let a = direct_spectrum(spec, rho).unwrap();
        let b = acceptance_spectrum(spec, rho).unwrap();
        for (s, (x, y)) in a.coeffs().iter().zip(b.coeffs()).enumerate() {
            assert!((x - y).abs() < 1e-8, "S={s:#b}: {x} vs {y}");
        }
    }

    #[test]
    fn dqc1_all_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let space = IndexSpace::new(1, 0, 1).unwrap();
        let spec = random_spec(Model::Dqck, space, 2, &mut rng).unwrap();
        agree(&spec, None);
        agree(&spec, Some(&"-*".parse().unwrap()));
    }

    #[test]
    fn every_model_with_restrictions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let space = IndexSpace::new(2, 0, 0).unwrap();
        for model in [Model::Bqp, Model::HalfBqp] {
            let spec = random_spec(model, space, 2, &mut rng).unwrap();
            agree(&spec, None);
            agree(&spec, Some(&"+*-*".parse().unwrap()));
        }
    }

    #[test]
    fn fully_fixed_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let space = IndexSpace::new(1, 0, 1).unwrap();
        let spec = random_spec(Model::Dqck, space, 1, &mut rng).unwrap();
        let sp = direct_spectrum(&spec, Some(&"+-".parse().unwrap())).unwrap();
        assert_eq!(sp.num_vars(), 0);
    }

    #[test]
    fn guard_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let space = IndexSpace::new(3, 1, 1).unwrap();
        let spec = random_spec(Model::Dqck, space, 3, &mut rng).unwrap();
        assert!(matches!(
            direct_coefficient_dqck(&spec, None, 0),
            Err(Error::Resource(_))
        ));
    }
}

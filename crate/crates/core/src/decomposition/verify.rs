//! Independent checks of the construction: explicit sums over intermediate
//! indices, the transpose-reversal identity and the block structure.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    decompose, decompose_improved, AugmentedMatrix, DecompositionSpec, SpecEcho,
};
use crate::error::{Error, Result};
use crate::fourier::{relabeled_dqck_matrices, FourierSpectrum};
use crate::linalg::{within_bound, ComplexMatrix, C64, ONE, ZERO};
use crate::models::{AlgorithmSpec, Restriction};

/// Largest number of index tuples a brute-force sum will visit.
pub const MAX_BRUTE_TERMS: f64 = 1e7;

/// Deviation allowed between construction and brute force.
const ENTRY_TOL: f64 = 1e-9;

fn guard(m: usize, free_steps: usize) -> Result<()> {
    let terms = (m as f64).powi(free_steps as i32);
    if terms > MAX_BRUTE_TERMS {
        return Err(Error::Resource(format!(
            "brute-force sum over {terms:.3e} tuples exceeds {MAX_BRUTE_TERMS:.0e}"
        )));
    }
    Ok(())
}

/// Visits every tuple `(I_1 = i1, I_2, …, I_{d+1})` with a nonzero product,
/// optionally pinning `I_{d+1}`.
fn walk(
    spec: &DecompositionSpec,
    i1: usize,
    last: Option<usize>,
    visit: &mut dyn FnMut(&[usize], C64),
) {
    fn rec(
        spec: &DecompositionSpec,
        idx: &mut Vec<usize>,
        acc: C64,
        last: Option<usize>,
        visit: &mut dyn FnMut(&[usize], C64),
    ) {
        let t = idx.len();
        if t == spec.d() + 1 {
            visit(idx, acc);
            return;
        }
        let u = &spec.matrices()[t - 1];
        let cur = idx[t - 1];
        let candidates: Vec<usize> = match last {
            Some(j) if t == spec.d() => vec![j],
            _ => (0..u.cols()).collect(),
        };
        for j in candidates {
            let z = u.get(cur, j);
            if z == ZERO {
                continue;
            }
            idx.push(j);
            rec(spec, idx, acc * z, last, visit);
            idx.pop();
        }
    }
    rec(spec, &mut vec![i1], ONE, last, visit);
}

/// Parity of the tuple, `None` if an equality fails, and the memory digits.
fn indicators(spec: &DecompositionSpec, idx: &[usize], s1: usize) -> Option<(usize, Vec<usize>)> {
    let oracle = |t: usize| spec.oracle_index(idx[t - 1]);
    let mut s = s1;
    for t in 2..=spec.d() {
        if spec.ignored().contains(&t) {
            continue;
        }
        let i = oracle(t);
        if i < spec.n_tilde() {
            s ^= 1 << i;
        }
    }
    if spec
        .equality_pairs()
        .iter()
        .any(|&(a, b)| oracle(a) != oracle(b))
    {
        return None;
    }
    let b = spec.memory_indices().iter().map(|&r| oracle(r) + 1).collect();
    Some((s, b))
}

/// `Σ_{I_2..I_d} Π_t U_t[I_t|I_{t+1}]` times the parity, equality and memory
/// indicators. `b_end` holds `i + 1` per memory slot.
pub fn brute_force_entry(
    spec: &DecompositionSpec,
    i1: usize,
    i_end: usize,
    s_end: usize,
    b_end: &[usize],
    s1: usize,
) -> Result<C64> {
    guard(spec.space().dim(), spec.d().saturating_sub(1))?;
    if b_end.len() != spec.memory_indices().len() {
        return Err(Error::Shape(format!(
            "{} memory digits for {} memory steps",
            b_end.len(),
            spec.memory_indices().len()
        )));
    }
    let mut total = ZERO;
    walk(spec, i1, Some(i_end), &mut |idx, z| {
        if let Some((s, b)) = indicators(spec, idx, s1) {
            if s == s_end && b == b_end {
                total += z;
            }
        }
    });
    Ok(total)
}

/// Every nonzero entry of row `(I_1, S_1)` keyed by the augmented column label.
pub fn brute_force_row(spec: &DecompositionSpec, i1: usize, s1: usize) -> Result<BTreeMap<usize, C64>> {
    guard(spec.space().dim(), spec.d())?;
    let codec = spec.codec();
    let mut out = BTreeMap::new();
    walk(spec, i1, None, &mut |idx, z| {
        if let Some((s, b)) = indicators(spec, idx, s1) {
            let col = codec.with_memory(idx[spec.d()], s, &b);
            *out.entry(col).or_insert(ZERO) += z;
        }
    });
    Ok(out)
}

fn row_deviation(row: &[(usize, C64)], brute: &BTreeMap<usize, C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for &(c, z) in row {
        dev = dev.max((z - brute.get(&c).copied().unwrap_or(ZERO)).norm());
    }
    for (c, &z) in brute {
        if !row.iter().any(|(cc, _)| cc == c) {
            dev = dev.max(z.norm());
        }
    }
    dev
}

/// Every connected block of every factor uses each row and column index of
/// `U_t` at most once and copies `U_t` exactly.
pub fn block_structure_check(spec: &DecompositionSpec, aug: &AugmentedMatrix) -> bool {
    let codec = aug.codec();
    aug.factors().iter().enumerate().all(|(t, f)| {
        let u = &spec.matrices()[t];
        let row_label = |r: usize| if t == 0 { aug.first_rows()[r] } else { r };
        f.components().iter().all(|comp| {
            let ri: Vec<usize> = comp.rows.iter().map(|&r| codec.decode(row_label(r)).i).collect();
            let ci: Vec<usize> = comp.cols.iter().map(|&c| codec.decode(c).i).collect();
            let distinct = |v: &[usize]| {
                let mut s = v.to_vec();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
            };
            if !distinct(&ri) || !distinct(&ci) {
                return false;
            }
            let block = f.block(comp);
            (0..ri.len()).all(|a| (0..ci.len()).all(|b| block.get(a, b) == u.get(ri[a], ci[b])))
        })
    })
}

/// Decomposes `U_d^T, …, U_1^T` (ignored steps mirrored to `d + 2 − t`) and
/// returns the largest deviation between `Ũ'[I_{d+1} | I_1 S]` and
/// `Ũ[I_1 | I_{d+1} S]`.
pub fn reversal_check(spec: &DecompositionSpec) -> Result<f64> {
    if !spec.is_basic() {
        return Err(Error::Specification(
            "reversal check covers the parity-only construction".into(),
        ));
    }
    let d = spec.d();
    let reversed: Vec<ComplexMatrix> = spec.matrices().iter().rev().map(|u| u.transpose()).collect();
    let ignored: Vec<usize> = spec
        .ignored()
        .iter()
        .filter(|&&t| t >= 2)
        .map(|&t| d + 2 - t)
        .collect();
    let rev = DecompositionSpec::basic(spec.space(), reversed, &ignored, spec.n_tilde())?;
    let fwd = decompose(spec)?;
    let bwd = decompose(&rev)?;
    let codec = fwd.codec();
    let mut dev: f64 = 0.0;
    let m = spec.space().dim();
    let mut table = vec![ZERO; m * m * (1 << spec.n_tilde())];
    for (k, &label) in bwd.product_labels().iter().enumerate() {
        let i_end = codec.decode(label).i;
        for &(c, z) in bwd.product_row(k) {
            let x = codec.decode(c);
            table[(x.i * m + i_end) * (1 << spec.n_tilde()) + x.s] = z;
        }
    }
    let mut seen = vec![false; table.len()];
    for (k, &label) in fwd.product_labels().iter().enumerate() {
        let i1 = codec.decode(label).i;
        for &(c, z) in fwd.product_row(k) {
            let x = codec.decode(c);
            let slot = (i1 * m + x.i) * (1 << spec.n_tilde()) + x.s;
            seen[slot] = true;
            dev = dev.max((z - table[slot]).norm());
        }
    }
    for (slot, z) in table.iter().enumerate() {
        if !seen[slot] {
            dev = dev.max(z.norm());
        }
    }
    Ok(dev)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub spec: SpecEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub entries_checked: usize,
    pub max_entry_deviation: f64,
    pub factor_norms: Vec<f64>,
    pub max_factor_norm: f64,
    /// `‖Ũ‖_frob`, or `‖Ũ^∅‖_frob` when constraints are present.
    pub product_frobenius: f64,
    pub min_input_frobenius: f64,
    pub block_structure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reversal_deviation: Option<f64>,
    pub entries_pass: bool,
    pub norms_pass: bool,
    pub frobenius_pass: bool,
    pub reversal_pass: bool,
    pub pass: bool,
}

/// Builds the decomposition and checks every guarantee against independent
/// computations.
pub fn verify(spec: &DecompositionSpec) -> Result<VerificationReport> {
    let aug = if spec.is_basic() {
        decompose(spec)?
    } else {
        decompose_improved(spec)?
    };
    let codec = aug.codec();
    let mut dev: f64 = 0.0;
    let mut checked = 0;
    for (k, &label) in aug.product_labels().iter().enumerate() {
        let x = codec.decode(label);
        let brute = brute_force_row(spec, x.i, x.s)?;
        checked += brute.len().max(aug.product_row(k).len());
        dev = dev.max(row_deviation(aug.product_row(k), &brute));
    }
    let factor_norms = aug.factor_norms();
    let max_factor_norm = factor_norms.iter().copied().fold(0.0, f64::max);
    let product_frobenius = if spec.is_basic() {
        aug.product_frobenius()
    } else {
        aug.empty_row_frobenius()
    };
    let min_input_frobenius = spec
        .matrices()
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(f64::INFINITY, f64::min);
    let reversal_deviation = if spec.is_basic() {
        Some(reversal_check(spec)?)
    } else {
        None
    };
    let block_structure = block_structure_check(spec, &aug);
    let entries_pass = dev <= ENTRY_TOL;
    let norms_pass = within_bound(max_factor_norm, 1.0);
    let frobenius_pass = within_bound(product_frobenius, min_input_frobenius);
    let reversal_pass = reversal_deviation.is_none_or(|r| r <= ENTRY_TOL);
    Ok(VerificationReport {
        spec: spec.echo(),
        seed: None,
        entries_checked: checked,
        max_entry_deviation: dev,
        factor_norms,
        max_factor_norm,
        product_frobenius,
        min_input_frobenius,
        block_structure,
        reversal_deviation,
        entries_pass,
        norms_pass,
        frobenius_pass,
        reversal_pass,
        pass: entries_pass && norms_pass && frobenius_pass && reversal_pass && block_structure,
    })
}

/// Every Fourier coefficient of `f|_ρ` for a DQC(k) algorithm, read off the
/// parity-augmented product of `I, D^ρV_1, …, D^ρV_{2d}`:
/// `f̂(S) = (NW)^{−1}·Σ_I Ũ[I | I S]`.
pub fn spectrum_via_decomposition(
    spec: &AlgorithmSpec,
    rho: Option<&Restriction>,
) -> Result<FourierSpectrum> {
    let (mats, n_free) = relabeled_dqck_matrices(spec, rho)?;
    let space = spec.space();
    let mut factors = vec![ComplexMatrix::identity(space.dim())];
    factors.extend(mats);
    let dspec = DecompositionSpec::basic(space, factors, &[], n_free)?;
    let aug = decompose(&dspec)?;
    let codec = aug.codec();
    let mut coeffs = vec![0.0; 1 << n_free];
    for (k, &label) in aug.product_labels().iter().enumerate() {
        let i1 = codec.decode(label).i;
        for &(c, z) in aug.product_row(k) {
            let x = codec.decode(c);
            if x.i == i1 {
                coeffs[x.s] += z.re;
            }
        }
    }
    let norm = space.noisy_dim() as f64;
    FourierSpectrum::from_coefficients(coeffs.into_iter().map(|c| c / norm).collect())
}

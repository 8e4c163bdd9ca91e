//! k-fold Forrelation and the circuits that evaluate it.
//!
//! `forr_k(x) = ⟨0|H·O_{x⁽¹⁾}·H ⋯ O_{x⁽ᵏ⁾}·H|0⟩` for `k` sign vectors of
//! length `N = 2^n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::MAX_VARS;
use crate::linalg::{
    check_signs, fwht_in_place, hadamard_matrix, hadamard_sign, ComplexMatrix, IndexSpace, C64,
    MAX_DENSE_HADAMARD_QUBITS, ONE, ZERO,
};
use crate::models::{AlgorithmSpec, Literal, Restriction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct ForrelationInstance {
    k: usize,
    n: u32,
    blocks: Vec<Vec<i8>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    k: usize,
    n: u32,
    blocks: Vec<Vec<i8>>,
}

impl TryFrom<RawInstance> for ForrelationInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let inst = Self::new(raw.blocks)?;
        if inst.k != raw.k || inst.n != raw.n {
            return Err(Error::Shape(format!(
                "declared k={}, n={} but blocks give k={}, n={}",
                raw.k, raw.n, inst.k, inst.n
            )));
        }
        Ok(inst)
    }
}

impl From<ForrelationInstance> for RawInstance {
    fn from(inst: ForrelationInstance) -> Self {
        RawInstance {
            k: inst.k,
            n: inst.n,
            blocks: inst.blocks,
        }
    }
}

impl ForrelationInstance {
    pub fn new(blocks: Vec<Vec<i8>>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::Shape("need at least one block".into()))?;
        let len = first.len();
        if !len.is_power_of_two() {
            return Err(Error::Shape(format!("block length {len} is not a power of two")));
        }
        let n = len.trailing_zeros();
        if n > MAX_DENSE_HADAMARD_QUBITS {
            return Err(Error::Resource(format!(
                "n={n} exceeds {MAX_DENSE_HADAMARD_QUBITS}"
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() != len) {
            return Err(Error::Shape(format!(
                "block lengths differ: {} vs {len}",
                b.len()
            )));
        }
        for b in &blocks {
            check_signs(b)?;
        }
        Ok(Self {
            k: blocks.len(),
            n,
            blocks,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Vec<i8>] {
        &self.blocks
    }

    /// `x⁽¹⁾ ‖ ⋯ ‖ x⁽ᵏ⁾`.
    pub fn concatenated(&self) -> Vec<i8> {
        self.blocks.concat()
    }
}

fn normalized_fwht(v: &mut [f64]) {
    fwht_in_place(v);
    let s = 1.0 / (v.len() as f64).sqrt();
    for z in v.iter_mut() {
        *z *= s;
    }
}

/// Statevector evaluation: `H`, then `O_{x⁽ᵏ⁾}·H`, …, `O_{x⁽¹⁾}·H` applied to
/// `|0⟩`, read at `⟨0|`.
pub fn forr(inst: &ForrelationInstance) -> f64 {
    let mut v = vec![0.0; inst.len()];
    v[0] = 1.0;
    normalized_fwht(&mut v);
    for block in inst.blocks.iter().rev() {
        for (z, &s) in v.iter_mut().zip(block) {
            *z *= s as f64;
        }
        normalized_fwht(&mut v);
    }
    v[0]
}

/// Dense evaluation of the product `H·O_{x⁽¹⁾}·H ⋯ O_{x⁽ᵏ⁾}·H`, entry `(0,0)`.
pub fn forr_dense(inst: &ForrelationInstance) -> Result<f64> {
    let h = hadamard_matrix(inst.n)?;
    let mut prod = h.clone();
    for block in &inst.blocks {
        let diag: Vec<f64> = block.iter().map(|&s| s as f64).collect();
        prod = prod.scale_cols(&diag).matmul(&h);
    }
    Ok(prod.get(0, 0).re)
}

/// `N^{−1}·Tr(O_{x⁽¹⁾}·H ⋯ O_{x⁽ᵏ⁾}·H)` by dense products.
pub fn normalized_trace(inst: &ForrelationInstance) -> Result<f64> {
    let h = hadamard_matrix(inst.n)?;
    let mut prod = ComplexMatrix::identity(inst.len());
    for block in &inst.blocks {
        let diag: Vec<f64> = block.iter().map(|&s| s as f64).collect();
        prod = prod.scale_cols(&diag).matmul(&h);
    }
    Ok(prod.trace().re / inst.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    MinusOne,
    PlusOne,
    Gap,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::MinusOne => "MINUS_ONE",
            Label::PlusOne => "PLUS_ONE",
            Label::Gap => "GAP",
        })
    }
}

/// `−1` when `value ≥ 2ε`, `+1` when `value ≤ ε`, otherwise outside the promise.
pub fn classify_value(value: f64, eps: f64) -> Result<Label> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("ε must be positive, got {eps}")));
    }
    Ok(if value >= 2.0 * eps {
        Label::MinusOne
    } else if value <= eps {
        Label::PlusOne
    } else {
        Label::Gap
    })
}

pub fn classify(inst: &ForrelationInstance, eps: f64) -> Result<Label> {
    classify_value(forr(inst), eps)
}

/// `(log₂ N)^{−k}`.
pub fn default_eps(k: usize, big_n: usize) -> Result<f64> {
    if big_n < 4 {
        return Err(Error::Parameter(format!("N={big_n} must be at least 4")));
    }
    Ok((big_n as f64).log2().powi(-(k as i32)))
}

/// Uniformly random blocks.
pub fn random_instance<R: Rng + ?Sized>(k: usize, n: u32, rng: &mut R) -> Result<ForrelationInstance> {
    let len = 1usize << n;
    ForrelationInstance::new(
        (0..k)
            .map(|_| (0..len).map(|_| if rng.random() { 1 } else { -1 }).collect())
            .collect(),
    )
}

/// First `k − 1` blocks uniform; the last block leans towards the signs of
/// `H·O_{x⁽ᵏ⁻¹⁾} ⋯ O_{x⁽¹⁾}·H|0⟩`, which pushes `forr` upwards.
pub fn forrelated_instance<R: Rng + ?Sized>(
    k: usize,
    n: u32,
    rng: &mut R,
) -> Result<ForrelationInstance> {
    let mut inst = random_instance(k, n, rng)?;
    let len = inst.len();
    let mut u = vec![0.0; len];
    u[0] = 1.0;
    normalized_fwht(&mut u);
    for block in &inst.blocks[..k - 1] {
        for (z, &s) in u.iter_mut().zip(block) {
            *z *= s as f64;
        }
        normalized_fwht(&mut u);
    }
    let scale = (len as f64).sqrt();
    let last = inst.blocks.last_mut().expect("k ≥ 1");
    for (x, &z) in last.iter_mut().zip(&u) {
        let lean = (z.abs() * scale).min(1.0);
        let agree = rng.random::<f64>() < 0.5 * (1.0 + lean);
        let sign = if z >= 0.0 { 1 } else { -1 };
        *x = if agree { sign } else { -sign };
    }
    Ok(inst)
}

/// Oracle register layout `(flag, block, j)` of the trace circuit, flag slowest.
fn trace_position(k: usize, big_n: usize, flag: usize, block: usize, j: usize) -> usize {
    (flag * k + block) * big_n + j
}

/// Gates of a controlled walk over the oracle register `(flag, block, j)`
/// with one control qubit as the lowest bit of the composite index. The
/// control, through the flag, chooses between the data half (flag = 1) and
/// the padding half (flag = 0); on the data half the gates alternate `H` on
/// `j` with a cyclic shift of the block. `close_with_h` adds the final `H`.
fn controlled_walk(k: usize, n: u32, m: usize, close_with_h: bool) -> Result<Vec<ComplexMatrix>> {
    let big_n = 1usize << n;
    let h = hadamard_matrix(n)?;
    let split = |flat: usize| {
        let i = flat >> 1;
        (i / (k * big_n), (i / big_n) % k, i % big_n, flat & 1)
    };
    let join = |flag: usize, b: usize, j: usize, c: usize| (trace_position(k, big_n, flag, b, j) << 1) | c;
    let h_ctrl = ComplexMatrix::from_fn(m, m, |r, c| {
        let (fr, br, jr, cr) = split(r);
        let (fc, bc, jc, cc) = split(c);
        if (fr, br, jr) == (fc, bc, jc) {
            C64::new(hadamard_sign(cr, cc) / 2f64.sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let cnot = ComplexMatrix::from_fn(m, m, |r, c| {
        let (f, b, j, cl) = split(c);
        if r == join(f ^ cl, b, j, cl) {
            ONE
        } else {
            ZERO
        }
    });
    let h_data = ComplexMatrix::from_fn(m, m, |r, c| {
        let (fr, br, jr, cr) = split(r);
        let (fc, bc, jc, cc) = split(c);
        if (fr, br, cr) != (fc, bc, cc) {
            ZERO
        } else if fr == 1 {
            h.get(jr, jc)
        } else if jr == jc {
            ONE
        } else {
            ZERO
        }
    });
    let shift = ComplexMatrix::from_fn(m, m, |r, c| {
        let (f, b, j, cl) = split(c);
        let target = if f == 1 { join(f, (b + 1) % k, j, cl) } else { c };
        if r == target {
            ONE
        } else {
            ZERO
        }
    });
    let mut unitaries = vec![h_data.matmul(&cnot).matmul(&h_ctrl)];
    for _ in 2..=k {
        unitaries.push(h_data.matmul(&shift));
    }
    let last = if close_with_h { h_data.matmul(&shift) } else { shift };
    unitaries.push(h_ctrl.matmul(&cnot).matmul(&last));
    Ok(unitaries)
}

fn walk_setup(k: usize, n: u32, what: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter(format!("{what} needs k ≥ 1")));
    }
    if n > MAX_DENSE_HADAMARD_QUBITS {
        return Err(Error::Resource(format!("n={n} exceeds {MAX_DENSE_HADAMARD_QUBITS}")));
    }
    Ok(())
}

fn padding_restriction(k: usize, big_n: usize) -> Restriction {
    Restriction::new(
        (0..2 * k * big_n)
            .map(|i| if i < k * big_n { Literal::Plus } else { Literal::Star })
            .collect(),
    )
}

/// DQC1 Hadamard test over `2kN` oracle positions whose acceptance
/// probability is `½ + (2N)^{−1}·Tr(O_{x⁽¹⁾}H ⋯ O_{x⁽ᵏ⁾}H)`.
///
/// The returned restriction fixes the padding half to `+1`; the free
/// coordinates are then `x⁽¹⁾ ‖ ⋯ ‖ x⁽ᵏ⁾` in order.
pub fn trace_circuit(k: usize, n: u32) -> Result<(AlgorithmSpec, Restriction)> {
    walk_setup(k, n, "trace circuit")?;
    let big_n = 1usize << n;
    let space = IndexSpace::with_oracle_dim(2 * k * big_n, 0, 1)?;
    space.check_dense()?;
    let m = space.dim();
    let unitaries = controlled_walk(k, n, m, false)?;
    let accept: Vec<usize> = (0..m).filter(|f| f & 1 == 0).collect();
    let spec = AlgorithmSpec::dqck(space, unitaries, &accept)?;
    Ok((spec, padding_restriction(k, big_n)))
}

/// Full input of the trace circuit for an instance (padding set to `+1`).
pub fn trace_input(inst: &ForrelationInstance) -> Vec<i8> {
    let mut x = vec![1i8; inst.k() * inst.len()];
    x.extend(inst.concatenated());
    x
}

/// The trace circuit with `d` blocks of `N = 2^n` bits each. The free input
/// has `d·N` bits, capped at the truth-table limit.
pub fn tightness_circuit(n: u32, d: usize) -> Result<(AlgorithmSpec, Restriction)> {
    let bits = d.saturating_mul(1usize.checked_shl(n).unwrap_or(usize::MAX));
    if bits > MAX_VARS {
        return Err(Error::Resource(format!(
            "d·N = {bits} input bits exceed the cap of {MAX_VARS}"
        )));
    }
    trace_circuit(d, n)
}

/// Coefficient of the tightness circuit's restricted acceptance at `mask`
/// over its `d·N` free bits: `±1/(2N·N^{d/2})` when the mask picks one index
/// `i_t` per block, with sign `(−1)^{⟨i_1,i_2⟩ + ⋯ + ⟨i_d,i_1⟩}`, else `0`
/// (the constant term is `½`).
pub fn tightness_coefficient(n: u32, d: usize, mask: usize) -> f64 {
    let big_n = 1usize << n;
    if mask == 0 {
        return 0.5;
    }
    let mut picks = Vec::with_capacity(d);
    for t in 0..d {
        let block = (mask >> (t * big_n)) & ((1 << big_n) - 1);
        if block.count_ones() != 1 {
            return 0.0;
        }
        picks.push(block.trailing_zeros() as usize);
    }
    if mask >> (d * big_n) != 0 {
        return 0.0;
    }
    let sign: f64 = (0..d)
        .map(|t| hadamard_sign(picks[t], picks[(t + 1) % d]))
        .product();
    sign / (2.0 * big_n as f64 * (big_n as f64).powf(d as f64 / 2.0))
}

/// BQP Hadamard test with `k` controlled queries whose acceptance
/// probability is `½ + forr_k(x)/2`. The control qubit is the workspace
/// register; input layout and restriction as in [`trace_circuit`].
pub fn hadamard_test_circuit(k: usize, n: u32) -> Result<(AlgorithmSpec, Restriction)> {
    walk_setup(k, n, "Hadamard test")?;
    let big_n = 1usize << n;
    let space = IndexSpace::with_oracle_dim(2 * k * big_n, 1, 0)?;
    space.check_dense()?;
    let m = space.dim();
    let unitaries = controlled_walk(k, n, m, true)?;
    let accept: Vec<usize> = (0..m).filter(|f| f & 1 == 0).collect();
    let spec = AlgorithmSpec::bqp(space, unitaries, &accept)?;
    Ok((spec, padding_restriction(k, big_n)))
}

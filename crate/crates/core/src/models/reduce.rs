//! Trading clean qubits for noisy ones at a bias cost.

use super::{Accept, AlgorithmSpec, Model};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, IndexSpace, C64};
use bitvec::prelude::*;

/// `2·acceptance − 1`.
pub fn bias(acceptance: f64) -> f64 {
    2.0 * acceptance - 1.0
}

/// Index bookkeeping between the DQC(k) register and the DQC(k−t) one.
///
/// New workspace `w' = (w, g, coin)` with `g` the `t+1` qubits that stand in
/// for the top clean qubits of the original; new clean register
/// `k' = (c, flag)`. The original clean value is `g·2^{k−t−1} + c`.
struct Layout {
    old: IndexSpace,
    new: IndexSpace,
    g_dim: usize,
    c_dim: usize,
}

struct Parts {
    orig: usize,
    g: usize,
    coin: usize,
    flag: usize,
}

impl Layout {
    fn new(old: IndexSpace, t: u32) -> Result<Self> {
        let new = IndexSpace::with_oracle_dim(old.oracle_dim(), old.w() + t + 2, old.k() - t)?;
        new.check_dense()?;
        Ok(Self {
            old,
            new,
            g_dim: 1 << (t + 1),
            c_dim: 1 << (old.k() - t - 1),
        })
    }

    fn split(&self, flat: usize) -> Parts {
        let (i, w2, k2) = self.new.decompose(flat);
        let (flag, c) = (k2 % 2, k2 / 2);
        let coin = w2 % 2;
        let g = (w2 / 2) % self.g_dim;
        let w = w2 / 2 / self.g_dim;
        Parts {
            orig: self.old.compose(i, w, g * self.c_dim + c),
            g,
            coin,
            flag,
        }
    }

    /// `U ⊗ I` on the original registers, identity on coin and flag.
    fn embed(&self, u: &ComplexMatrix) -> ComplexMatrix {
        let m = self.new.dim();
        let parts: Vec<Parts> = (0..m).map(|f| self.split(f)).collect();
        ComplexMatrix::from_fn(m, m, |r, c| {
            let (a, b) = (&parts[r], &parts[c]);
            if a.coin == b.coin && a.flag == b.flag {
                u.get(a.orig, b.orig)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// DQC(k−t) algorithm whose bias is `2^{−t−1}` times the input's bias at
/// every input.
///
/// Before the first gate, the flag qubit (last clean qubit) is flipped iff
/// the `t+1` fresh noisy qubits are all zero; the original algorithm then
/// runs with those qubits in place of its top `t+1` clean qubits. Outcomes
/// with the flag set are judged by the original accepting set, the rest by a
/// fresh noisy coin.
pub fn reduce_clean_qubits(spec: &AlgorithmSpec, t: u32) -> Result<AlgorithmSpec> {
    if spec.model() != Model::Dqck {
        return Err(Error::Specification("clean-qubit reduction needs a DQC(k) spec".into()));
    }
    let k = spec.space().k();
    if t == 0 || t >= k {
        return Err(Error::Parameter(format!("need 1 ≤ t < k, got t={t}, k={k}")));
    }
    let layout = Layout::new(spec.space(), t)?;
    let m = layout.new.dim();

    let toffoli = ComplexMatrix::from_fn(m, m, |r, c| {
        let p = layout.split(c);
        let target = if p.g == 0 { c ^ 1 } else { c };
        C64::new((r == target) as u8 as f64, 0.0)
    });

    let mut unitaries: Vec<ComplexMatrix> =
        spec.unitaries().iter().map(|u| layout.embed(u)).collect();
    unitaries[0] = unitaries[0].matmul(&toffoli);

    let mut accept = bitvec![0; m];
    for j in 0..m {
        let p = layout.split(j);
        let ok = if p.flag == 1 {
            spec.accepts(p.orig)
        } else {
            p.coin == 0
        };
        accept.set(j, ok);
    }
    AlgorithmSpec::new(Model::Dqck, layout.new, unitaries, Accept::Set(accept))
}

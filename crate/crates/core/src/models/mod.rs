//! Query algorithms in the BQP, DQC(k) and ½BQP models.
//!
//! Every algorithm applies `U_1, O, U_2, …, O, U_{d+1}` where `O = O_x ⊗ I`
//! multiplies the basis state `(i, w, k)` by `x_i`. The models differ only in
//! their start states and in how the final measurement is post-processed.

mod document;
mod hybrid;
mod reduce;
mod restriction;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{oracle_diagonal, ComplexMatrix, IndexSpace, C64, ZERO};

pub use document::{AcceptDoc, SpecDocument, UnitaryDoc};
pub use hybrid::{acceptance_hybrid, DecisionTree, HybridSpec};
pub use reduce::{bias, reduce_clean_qubits};
pub use restriction::{restrict, Literal, Restriction};

/// Residual `‖U†U − I‖_frob` accepted for supplied gates.
pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "BQP", alias = "bqp")]
    Bqp,
    #[serde(rename = "DQCK", alias = "dqck")]
    Dqck,
    #[serde(rename = "HALF_BQP", alias = "half_bqp", alias = "half-bqp")]
    HalfBqp,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bqp" => Ok(Model::Bqp),
            "dqck" | "dqc" => Ok(Model::Dqck),
            "half_bqp" | "half-bqp" | "halfbqp" => Ok(Model::HalfBqp),
            other => Err(Error::Specification(format!("unknown model {other:?}"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Bqp => "BQP",
            Model::Dqck => "DQCK",
            Model::HalfBqp => "HALF_BQP",
        })
    }
}

/// Accepting outcomes: a subset of `[M]`, or for ½BQP a predicate on
/// (start, outcome) pairs stored row-major as an `M × M` bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Accept {
    Set(BitVec),
    Pairs(BitVec),
}

/// One `d`-query algorithm. Immutable once built.
#[derive(Clone, Debug)]
pub struct AlgorithmSpec {
    model: Model,
    space: IndexSpace,
    unitaries: Vec<ComplexMatrix>,
    accept: Accept,
}

impl AlgorithmSpec {
    /// Validates shapes, unitarity (residual `1e−9`), and the model's
    /// register conventions.
    pub fn new(
        model: Model,
        space: IndexSpace,
        unitaries: Vec<ComplexMatrix>,
        accept: Accept,
    ) -> Result<Self> {
        space.check_dense()?;
        let m = space.dim();
        if unitaries.len() < 2 {
            return Err(Error::Specification(format!(
                "need d+1 ≥ 2 unitaries, got {}",
                unitaries.len()
            )));
        }
        match model {
            Model::Dqck if space.k() == 0 => {
                return Err(Error::Specification("DQC(k) requires k ≥ 1".into()))
            }
            Model::Bqp | Model::HalfBqp if space.k() != 0 => {
                return Err(Error::Specification(format!("{model} uses k = 0")))
            }
            _ => {}
        }
        for (t, u) in unitaries.iter().enumerate() {
            if u.rows() != m || u.cols() != m {
                return Err(Error::Shape(format!(
                    "U_{} is {}x{}, expected {m}x{m}",
                    t + 1,
                    u.rows(),
                    u.cols()
                )));
            }
            let r = u.unitarity_residual();
            if r > UNITARITY_TOL {
                return Err(Error::Validation(format!(
                    "U_{} is not unitary (residual {r:.3e})",
                    t + 1
                )));
            }
        }
        match (&accept, model) {
            (Accept::Set(s), Model::Bqp | Model::Dqck) if s.len() == m => {}
            (Accept::Pairs(p), Model::HalfBqp) if p.len() == m * m => {}
            _ => {
                return Err(Error::Specification(format!(
                    "accepting set does not match model {model} with M={m}"
                )))
            }
        }
        Ok(Self {
            model,
            space,
            unitaries,
            accept,
        })
    }

    pub fn bqp(space: IndexSpace, unitaries: Vec<ComplexMatrix>, accept: &[usize]) -> Result<Self> {
        Self::new(Model::Bqp, space, unitaries, set_from_indices(space.dim(), accept)?)
    }

    pub fn dqck(space: IndexSpace, unitaries: Vec<ComplexMatrix>, accept: &[usize]) -> Result<Self> {
        Self::new(Model::Dqck, space, unitaries, set_from_indices(space.dim(), accept)?)
    }

    pub fn half_bqp(
        space: IndexSpace,
        unitaries: Vec<ComplexMatrix>,
        pred: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let m = space.dim();
        let mut bits = bitvec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                bits.set(a * m + b, pred(a, b));
            }
        }
        Self::new(Model::HalfBqp, space, unitaries, Accept::Pairs(bits))
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn space(&self) -> IndexSpace {
        self.space
    }

    /// Number of queries.
    pub fn d(&self) -> usize {
        self.unitaries.len() - 1
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn accept(&self) -> &Accept {
        &self.accept
    }

    /// Whether outcome `j` is accepted (BQP and DQC(k)).
    pub fn accepts(&self, j: usize) -> bool {
        match &self.accept {
            Accept::Set(s) => s[j],
            Accept::Pairs(_) => false,
        }
    }

    /// `F(start, outcome)` (½BQP).
    pub fn accepts_pair(&self, start: usize, outcome: usize) -> bool {
        match &self.accept {
            Accept::Pairs(p) => p[start * self.space.dim() + outcome],
            Accept::Set(_) => false,
        }
    }

    /// Basis states the algorithm may start in, each with equal weight.
    pub fn starts(&self) -> Vec<usize> {
        match self.model {
            Model::Bqp => vec![0],
            Model::Dqck => (0..self.space.noisy_dim())
                .map(|nw| nw * self.space.clean_dim())
                .collect(),
            Model::HalfBqp => (0..self.space.dim()).collect(),
        }
    }

    /// Number of oracle positions `N` (input length).
    pub fn num_vars(&self) -> usize {
        self.space.oracle_dim()
    }
}

fn set_from_indices(m: usize, idx: &[usize]) -> Result<Accept> {
    let mut bits = bitvec![0; m];
    for &j in idx {
        if j >= m {
            return Err(Error::Specification(format!(
                "accepting index {j} outside [0, {m})"
            )));
        }
        bits.set(j, true);
    }
    Ok(Accept::Set(bits))
}

fn apply_diag(state: &mut [C64], diag: &[f64]) {
    for (z, &s) in state.iter_mut().zip(diag) {
        *z *= s;
    }
}

/// State after `U_{d+1}·O·U_d ⋯ O·U_1` applied to basis vector `start`.
fn evolve(spec: &AlgorithmSpec, diag: &[f64], start: usize) -> Vec<C64> {
    let m = spec.space.dim();
    let mut state = vec![ZERO; m];
    state[start] = C64::new(1.0, 0.0);
    for (t, u) in spec.unitaries.iter().enumerate() {
        if t > 0 {
            apply_diag(&mut state, diag);
        }
        state = u.mul_vec(&state);
    }
    state
}

/// Acceptance probability by statevector simulation of the circuit.
pub fn acceptance_direct(spec: &AlgorithmSpec, x: &[i8]) -> Result<f64> {
    let diag = oracle_diagonal(x, &spec.space)?;
    let starts = spec.starts();
    let mut total = 0.0;
    for &s in &starts {
        let state = evolve(spec, &diag, s);
        total += state
            .iter()
            .enumerate()
            .filter(|&(j, _)| match spec.model {
                Model::HalfBqp => spec.accepts_pair(s, j),
                _ => spec.accepts(j),
            })
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>();
    }
    Ok(total / starts.len() as f64)
}

fn projector(m: usize, keep: impl Fn(usize) -> bool) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(
        &(0..m)
            .map(|j| C64::new(if keep(j) { 1.0 } else { 0.0 }, 0.0))
            .collect::<Vec<_>>(),
    )
}

/// The matrices `V_t` of the product form of the acceptance probability.
///
/// * BQP: `V_1 … V_{2d+1}` with `f = ⟨0|V_1·O·V_2 ⋯ O·V_{2d+1}|0⟩`.
/// * DQC(k): `V_1 … V_{2d}` with `f = (NW)^{−1}·Tr(V_1·O ⋯ V_{2d}·O)`.
/// * ½BQP: `V_1 … V_{2d+2}` with `V_t = U_t†` for `t ≤ d+1` and
///   `V_{2d+3−t} = U_t`; the sum closes cyclically and weighs the pair
///   `(I_1, I_{d+2})` by `F`.
pub fn formula_matrices(spec: &AlgorithmSpec) -> Vec<ComplexMatrix> {
    let d = spec.d();
    let m = spec.space.dim();
    let u = &spec.unitaries;
    match spec.model {
        Model::Bqp => {
            let pi_f = projector(m, |j| spec.accepts(j));
            let mut v: Vec<ComplexMatrix> = (0..d).map(|t| u[t].adjoint()).collect();
            v.push(u[d].adjoint().matmul(&pi_f).matmul(&u[d]));
            v.extend((0..d).rev().map(|t| u[t].clone()));
            v
        }
        Model::Dqck => {
            let k_dim = spec.space.clean_dim();
            let p_s = projector(m, |j| j % k_dim == 0);
            let pi_f = projector(m, |j| spec.accepts(j));
            let mut v = vec![u[0].matmul(&p_s).matmul(&u[0].adjoint())];
            v.extend((1..d).map(|t| u[t].adjoint()));
            v.push(u[d].adjoint().matmul(&pi_f).matmul(&u[d]));
            v.extend((1..d).rev().map(|t| u[t].clone()));
            v
        }
        Model::HalfBqp => {
            let mut v: Vec<ComplexMatrix> = u.iter().map(|m| m.adjoint()).collect();
            v.extend(u.iter().rev().cloned());
            v
        }
    }
}

/// Acceptance probability from the product-form expressions.
pub fn acceptance_formula(spec: &AlgorithmSpec, x: &[i8]) -> Result<f64> {
    Ok(acceptance_formula_complex(spec, x)?.re)
}

/// Complex value of the product-form expression; its imaginary part is
/// rounding noise.
pub fn acceptance_formula_complex(spec: &AlgorithmSpec, x: &[i8]) -> Result<C64> {
    let diag = oracle_diagonal(x, &spec.space)?;
    let m = spec.space.dim();
    let d = spec.d();
    match spec.model {
        Model::Bqp => {
            let v = formula_matrices(spec);
            // row vector ⟨0|·V_1·O·V_2 ⋯ O·V_{2d+1}
            let mut row: Vec<C64> = v[0].row(0).to_vec();
            for vt in &v[1..] {
                apply_diag(&mut row, &diag);
                row = vt.transpose().mul_vec(&row);
            }
            Ok(row[0])
        }
        Model::Dqck => {
            let v = formula_matrices(spec);
            let mut prod = ComplexMatrix::identity(m);
            for vt in &v {
                prod = prod.matmul(vt).scale_cols(&diag);
            }
            Ok(prod.trace() / spec.space.noisy_dim() as f64)
        }
        Model::HalfBqp => {
            let u = &spec.unitaries;
            // P1 = U_1†·O·U_2† ⋯ O·U_{d+1}†,  P2 = U_{d+1}·O ⋯ O·U_1
            let mut p1 = u[0].adjoint();
            for t in 1..=d {
                p1 = p1.scale_cols(&diag).matmul(&u[t].adjoint());
            }
            let mut p2 = u[d].clone();
            for t in (0..d).rev() {
                p2 = p2.scale_cols(&diag).matmul(&u[t]);
            }
            let mut total = ZERO;
            for i1 in 0..m {
                for j in 0..m {
                    if spec.accepts_pair(i1, j) {
                        total += p1.get(i1, j) * p2.get(j, i1);
                    }
                }
            }
            Ok(total / m as f64)
        }
    }
}

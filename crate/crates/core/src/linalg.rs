//! Dense complex matrices, norms, structured gates, and F₂ index arithmetic.
//!
//! Matrices are stored row-major. Operators act on column vectors, so a
//! circuit `U_1, O, U_2` evolves a state as `U_2 · O · U_1 · |ψ⟩`.
//!
//! Composite basis indices follow one fixed codec everywhere in the crate:
//! `flat = (i·W + w)·K + k` (all zero-based), i.e. the oracle coordinate is
//! the slowest-varying and the clean register the fastest.

use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest number of oracle qubits an [`IndexSpace`] accepts.
pub const MAX_ORACLE_QUBITS: u32 = 20;

/// Largest composite dimension `M` materialised as a dense matrix.
pub const MAX_DENSE_DIM: usize = 1 << 12;

/// Absolute/relative slack used by every `lhs ≤ rhs` certification.
pub const BOUND_TOL: f64 = 1e-9;

/// `lhs ≤ rhs·(1+1e−9) + 1e−9`.
pub fn within_bound(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + BOUND_TOL) + BOUND_TOL
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting a length mismatch or
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Validation(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, z: C64) {
        self.data[r * self.cols + c] = z;
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} · {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols)
        })
    }

    /// `D · A` for a real diagonal `D`, i.e. row `r` scaled by `diag[r]`.
    pub fn scale_rows(&self, diag: &[f64]) -> ComplexMatrix {
        assert_eq!(diag.len(), self.rows);
        let mut out = self.clone();
        for (r, &s) in diag.iter().enumerate() {
            for z in &mut out.data[r * self.cols..(r + 1) * self.cols] {
                *z *= s;
            }
        }
        out
    }

    /// `A · D` for a real diagonal `D`.
    pub fn scale_cols(&self, diag: &[f64]) -> ComplexMatrix {
        assert_eq!(diag.len(), self.cols);
        let mut out = self.clone();
        for r in 0..self.rows {
            for (z, &s) in out.data[r * self.cols..(r + 1) * self.cols].iter_mut().zip(diag) {
                *z *= s;
            }
        }
        out
    }

    /// `P · A · Pᵀ` where `P` sends basis vector `e_j` to `e_{perm[j]}`.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> ComplexMatrix {
        assert!(self.is_square() && perm.len() == self.rows);
        let mut out = Self::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(perm[r], perm[c], self.get(r, c));
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, from a full SVD.
    pub fn operator_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        m.singular_values().iter().cloned().fold(0.0, f64::max)
    }

    /// `‖A†A − I‖_frob`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.rows))
            .frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Register dimensions of a query algorithm: oracle register of `N` basis
/// states, workspace of `w` qubits and `k` clean qubits.
///
/// The oracle register is usually `n` qubits (`N = 2^n`), but any positive
/// dimension is accepted so that block-embedded constructions over `d·N`
/// positions can be expressed directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSpace {
    oracle_dim: usize,
    w: u32,
    k: u32,
}

impl IndexSpace {
    pub fn new(n: u32, w: u32, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_QUBITS {
            return Err(Error::Dimension(format!(
                "oracle qubit count n={n} outside 1..={MAX_ORACLE_QUBITS}"
            )));
        }
        Self::with_oracle_dim(1 << n, w, k)
    }

    pub fn with_oracle_dim(oracle_dim: usize, w: u32, k: u32) -> Result<Self> {
        if oracle_dim == 0 || oracle_dim > 1 << MAX_ORACLE_QUBITS {
            return Err(Error::Dimension(format!(
                "oracle dimension {oracle_dim} outside 1..=2^{MAX_ORACLE_QUBITS}"
            )));
        }
        if w + k > 30 {
            return Err(Error::Dimension(format!("w={w}, k={k} too large")));
        }
        Ok(Self { oracle_dim, w, k })
    }

    /// `n` when the oracle register is a whole number of qubits.
    pub fn n(&self) -> Option<u32> {
        self.oracle_dim
            .is_power_of_two()
            .then(|| self.oracle_dim.trailing_zeros())
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `N`, the number of oracle positions (= input length).
    pub fn oracle_dim(&self) -> usize {
        self.oracle_dim
    }

    /// `W = 2^w`.
    pub fn workspace_dim(&self) -> usize {
        1 << self.w
    }

    /// `K = 2^k`.
    pub fn clean_dim(&self) -> usize {
        1 << self.k
    }

    /// `N·W`, the size of the maximally mixed register.
    pub fn noisy_dim(&self) -> usize {
        self.oracle_dim * self.workspace_dim()
    }

    /// `M = N·W·K`.
    pub fn dim(&self) -> usize {
        self.noisy_dim() * self.clean_dim()
    }

    #[inline]
    pub fn compose(&self, i: usize, w: usize, k: usize) -> usize {
        debug_assert!(i < self.oracle_dim && w < self.workspace_dim() && k < self.clean_dim());
        (i * self.workspace_dim() + w) * self.clean_dim() + k
    }

    #[inline]
    pub fn decompose(&self, flat: usize) -> (usize, usize, usize) {
        let k = flat % self.clean_dim();
        let rest = flat / self.clean_dim();
        (rest / self.workspace_dim(), rest % self.workspace_dim(), k)
    }

    /// Oracle coordinate of a composite index.
    #[inline]
    pub fn oracle_index(&self, flat: usize) -> usize {
        flat / (self.workspace_dim() * self.clean_dim())
    }

    /// Fails unless `M` fits the dense-matrix cap.
    pub fn check_dense(&self) -> Result<()> {
        if self.dim() > MAX_DENSE_DIM {
            return Err(Error::Resource(format!(
                "composite dimension {} exceeds dense cap {MAX_DENSE_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Largest `n` for which [`hadamard_matrix`] materialises `H_N` densely.
pub const MAX_DENSE_HADAMARD_QUBITS: u32 = 12;

/// `H_N = (1/√N)·[[1,1],[1,−1]]^{⊗n}`; entry `(i, j)` is `(−1)^{⟨i,j⟩₂}/√N`.
pub fn hadamard_matrix(n: u32) -> Result<ComplexMatrix> {
    if n == 0 || n > MAX_ORACLE_QUBITS {
        return Err(Error::Dimension(format!(
            "Hadamard qubit count n={n} outside 1..={MAX_ORACLE_QUBITS}"
        )));
    }
    if n > MAX_DENSE_HADAMARD_QUBITS {
        return Err(Error::Resource(format!(
            "dense H_N with n={n} exceeds cap n≤{MAX_DENSE_HADAMARD_QUBITS}"
        )));
    }
    let dim = 1usize << n;
    let s = 1.0 / (dim as f64).sqrt();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        C64::new(if f2_inner(i, j) { -s } else { s }, 0.0)
    }))
}

/// `⟨i, j⟩₂`: parity of the bitwise AND of the zero-based binary encodings.
#[inline]
pub fn f2_inner(i: usize, j: usize) -> bool {
    (i & j).count_ones() & 1 == 1
}

/// `(−1)^{⟨i,j⟩₂}`.
#[inline]
pub fn hadamard_sign(i: usize, j: usize) -> f64 {
    if f2_inner(i, j) {
        -1.0
    } else {
        1.0
    }
}

/// In-place unnormalised Walsh–Hadamard butterfly; `v.len()` must be a power of two.
pub fn fwht_in_place<T>(v: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let n = v.len();
    assert!(n.is_power_of_two(), "WHT length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Applies `H_N` to a state vector of length `N = 2^n`.
pub fn apply_hadamard(v: &mut [C64]) {
    fwht_in_place(v);
    let s = 1.0 / (v.len() as f64).sqrt();
    for z in v.iter_mut() {
        *z *= s;
    }
}

/// Haar-distributed `dim × dim` unitary: QR of an i.i.d. complex Gaussian
/// matrix with the phases of `diag(R)` folded back into `Q`.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::Dimension("random unitary of dimension 0".into()));
    }
    if dim > MAX_DENSE_DIM {
        return Err(Error::Resource(format!(
            "random unitary of dimension {dim} exceeds dense cap {MAX_DENSE_DIM}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut gaussian = || -> f64 { StandardNormal.sample(&mut rng) };
    let z = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        C64::new(gaussian() * scale, gaussian() * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| q[(r, c)]))
}

/// Validates a ±1 input vector.
pub fn check_signs(x: &[i8]) -> Result<()> {
    match x.iter().position(|&v| v != 1 && v != -1) {
        Some(pos) => Err(Error::Validation(format!(
            "input coordinate {pos} is {}, expected ±1",
            x[pos]
        ))),
        None => Ok(()),
    }
}

/// Diagonal of `O_x ⊗ I`: entry at composite index `(i, w, k)` equals `x_i`.
pub fn oracle_diagonal(x: &[i8], space: &IndexSpace) -> Result<Vec<f64>> {
    if x.len() != space.oracle_dim() {
        return Err(Error::Shape(format!(
            "input has length {}, oracle register has {} positions",
            x.len(),
            space.oracle_dim()
        )));
    }
    check_signs(x)?;
    let inner = space.workspace_dim() * space.clean_dim();
    Ok(x
        .iter()
        .flat_map(|&xi| std::iter::repeat(xi as f64).take(inner))
        .collect())
}

/// `O_x ⊗ I` as an `M × M` diagonal matrix.
pub fn phase_oracle(x: &[i8], space: &IndexSpace) -> Result<ComplexMatrix> {
    space.check_dense()?;
    let diag = oracle_diagonal(x, space)?;
    Ok(ComplexMatrix::from_diagonal(
        &diag.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
    ))
}

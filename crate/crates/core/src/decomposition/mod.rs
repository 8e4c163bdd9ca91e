//! Matrix decomposition over parity-, equality- and memory-augmented index
//! spaces.
//!
//! Given `U_1, …, U_d` of operator norm at most one, the construction
//! produces factors `Ũ_1, …, Ũ_d` whose product carries, next to the final
//! index `I_{d+1}`, the parity `S` of the oracle indices `i_t ≤ Ñ` visited at
//! steps `t ∈ [2,d] \ T`. The improved variant also enforces equalities
//! `i_{s_j} = i_{t_j}` through a scratch register `A` and remembers
//! `i_{r_j}` in a register `B`.

mod sparse;
mod verify;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, IndexSpace, C64, BOUND_TOL, ZERO};

pub use sparse::{Component, SparseMatrix};
pub use verify::{
    block_structure_check, brute_force_entry, brute_force_row, reversal_check,
    spectrum_via_decomposition, verify, VerificationReport, MAX_BRUTE_TERMS,
};

/// Cap on `M·2^Ñ·(N+1)^{p+q}`.
pub const MAX_AUGMENTED_DIM: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct DecompositionSpec {
    space: IndexSpace,
    matrices: Vec<ComplexMatrix>,
    ignored: BTreeSet<usize>,
    n_tilde: usize,
    equality_pairs: Vec<(usize, usize)>,
    memory_indices: Vec<usize>,
}

/// Plain-data echo of a spec for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecEcho {
    pub d: usize,
    pub m: usize,
    pub oracle_dim: usize,
    pub n_tilde: usize,
    pub ignored: Vec<usize>,
    pub equality_pairs: Vec<(usize, usize)>,
    pub memory_indices: Vec<usize>,
}

impl DecompositionSpec {
    /// Parity bookkeeping only. `ignored` holds 1-based steps.
    pub fn basic(
        space: IndexSpace,
        matrices: Vec<ComplexMatrix>,
        ignored: &[usize],
        n_tilde: usize,
    ) -> Result<Self> {
        Self::improved(space, matrices, ignored, n_tilde, &[], &[])
    }

    pub fn improved(
        space: IndexSpace,
        matrices: Vec<ComplexMatrix>,
        ignored: &[usize],
        n_tilde: usize,
        equality_pairs: &[(usize, usize)],
        memory_indices: &[usize],
    ) -> Result<Self> {
        let d = matrices.len();
        if d == 0 {
            return Err(Error::Specification("need at least one matrix".into()));
        }
        let m = space.dim();
        for (t, u) in matrices.iter().enumerate() {
            if u.rows() != m || u.cols() != m {
                return Err(Error::Shape(format!(
                    "U_{} is {}x{}, expected {m}x{m}",
                    t + 1,
                    u.rows(),
                    u.cols()
                )));
            }
            let norm = u.operator_norm();
            if norm > 1.0 + BOUND_TOL {
                return Err(Error::Validation(format!(
                    "U_{} has operator norm {norm} > 1",
                    t + 1
                )));
            }
        }
        if let Some(&t) = ignored.iter().find(|&&t| t == 0 || t > d) {
            return Err(Error::Validation(format!("ignored step {t} outside [1, {d}]")));
        }
        if n_tilde > space.oracle_dim() {
            return Err(Error::Validation(format!(
                "Ñ={n_tilde} exceeds N={}",
                space.oracle_dim()
            )));
        }
        let mut seen = BTreeSet::new();
        let in_range = |t: usize| (2..=d).contains(&t);
        for &(s, t) in equality_pairs {
            if !(in_range(s) && in_range(t) && s < t) {
                return Err(Error::Validation(format!(
                    "equality pair ({s}, {t}) needs 2 ≤ s < t ≤ {d}"
                )));
            }
            if !seen.insert(s) || !seen.insert(t) {
                return Err(Error::Validation("constraint steps must be distinct".into()));
            }
        }
        for &r in memory_indices {
            if !in_range(r) {
                return Err(Error::Validation(format!("memory step {r} outside [2, {d}]")));
            }
            if !seen.insert(r) {
                return Err(Error::Validation("constraint steps must be distinct".into()));
            }
        }
        let spec = Self {
            space,
            matrices,
            ignored: ignored.iter().copied().collect(),
            n_tilde,
            equality_pairs: equality_pairs.to_vec(),
            memory_indices: memory_indices.to_vec(),
        };
        spec.codec().check()?;
        Ok(spec)
    }

    pub fn space(&self) -> IndexSpace {
        self.space
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn ignored(&self) -> &BTreeSet<usize> {
        &self.ignored
    }

    pub fn n_tilde(&self) -> usize {
        self.n_tilde
    }

    pub fn equality_pairs(&self) -> &[(usize, usize)] {
        &self.equality_pairs
    }

    pub fn memory_indices(&self) -> &[usize] {
        &self.memory_indices
    }

    pub fn is_basic(&self) -> bool {
        self.equality_pairs.is_empty() && self.memory_indices.is_empty()
    }

    pub fn codec(&self) -> AugmentedCodec {
        AugmentedCodec {
            m: self.space.dim(),
            n_tilde: self.n_tilde,
            radix: self.space.oracle_dim() + 1,
            p: self.equality_pairs.len(),
            q: self.memory_indices.len(),
        }
    }

    pub fn echo(&self) -> SpecEcho {
        SpecEcho {
            d: self.d(),
            m: self.space.dim(),
            oracle_dim: self.space.oracle_dim(),
            n_tilde: self.n_tilde,
            ignored: self.ignored.iter().copied().collect(),
            equality_pairs: self.equality_pairs.clone(),
            memory_indices: self.memory_indices.clone(),
        }
    }

    /// Oracle index of a composite index.
    pub fn oracle_index(&self, flat: usize) -> usize {
        self.space.oracle_index(flat)
    }
}

/// `update_t(S, i)`: toggle `i` when `t ∈ [2,d] \ T` and `i < Ñ`
/// (zero-based oracle index). `t` is 1-based.
pub fn update(s: usize, i: usize, t: usize, spec: &DecompositionSpec) -> usize {
    if t >= 2 && t <= spec.d() && !spec.ignored.contains(&t) && i < spec.n_tilde {
        s ^ (1 << i)
    } else {
        s
    }
}

/// Decoded augmented index. Register slots hold `0` for empty or `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedIndex {
    pub i: usize,
    pub s: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// `flat = ((I·2^Ñ + S)·(N+1)^p + digits(A))·(N+1)^q + digits(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AugmentedCodec {
    m: usize,
    n_tilde: usize,
    radix: usize,
    p: usize,
    q: usize,
}

fn digits(v: &[usize], radix: usize) -> usize {
    v.iter().fold(0, |acc, &x| acc * radix + x)
}

fn undigits(mut flat: usize, len: usize, radix: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = flat % radix;
        flat /= radix;
    }
    out
}

impl AugmentedCodec {
    fn check(&self) -> Result<()> {
        let dim = (self.radix as f64).powi((self.p + self.q) as i32)
            * self.m as f64
            * 2f64.powi(self.n_tilde as i32);
        if dim > MAX_AUGMENTED_DIM as f64 {
            return Err(Error::Resource(format!(
                "augmented dimension {dim:.0} exceeds {MAX_AUGMENTED_DIM}"
            )));
        }
        Ok(())
    }

    fn a_span(&self) -> usize {
        self.radix.pow(self.p as u32)
    }

    fn b_span(&self) -> usize {
        self.radix.pow(self.q as u32)
    }

    pub fn dim(&self) -> usize {
        self.m * (1 << self.n_tilde) * self.a_span() * self.b_span()
    }

    pub fn encode(&self, x: &AugmentedIndex) -> usize {
        debug_assert!(x.a.len() == self.p && x.b.len() == self.q);
        (((x.i << self.n_tilde) + x.s) * self.a_span() + digits(&x.a, self.radix)) * self.b_span()
            + digits(&x.b, self.radix)
    }

    pub fn decode(&self, flat: usize) -> AugmentedIndex {
        let b = undigits(flat % self.b_span(), self.q, self.radix);
        let rest = flat / self.b_span();
        let a = undigits(rest % self.a_span(), self.p, self.radix);
        let rest = rest / self.a_span();
        AugmentedIndex {
            i: rest >> self.n_tilde,
            s: rest & ((1 << self.n_tilde) - 1),
            a,
            b,
        }
    }

    /// Label with empty registers.
    pub fn plain(&self, i: usize, s: usize) -> usize {
        ((i << self.n_tilde) + s) * self.a_span() * self.b_span()
    }

    /// Label with empty `A` and the given `B`.
    pub fn with_memory(&self, i: usize, s: usize, b: &[usize]) -> usize {
        self.plain(i, s) + digits(b, self.radix)
    }
}

/// Factors of the construction and their product on the rows of interest.
#[derive(Clone, Debug)]
pub struct AugmentedMatrix {
    codec: AugmentedCodec,
    factors: Vec<SparseMatrix>,
    /// augmented label of each row of `Ũ_1`
    first_rows: Vec<usize>,
    /// product rows, one per entry of `product_labels`
    product: Vec<Vec<(usize, C64)>>,
    product_labels: Vec<usize>,
}

impl AugmentedMatrix {
    pub fn codec(&self) -> AugmentedCodec {
        self.codec
    }

    pub fn factors(&self) -> &[SparseMatrix] {
        &self.factors
    }

    pub fn first_rows(&self) -> &[usize] {
        &self.first_rows
    }

    /// Row labels `(I_1, S_1)` with empty registers, in product order.
    pub fn product_labels(&self) -> &[usize] {
        &self.product_labels
    }

    pub fn product_row(&self, k: usize) -> &[(usize, C64)] {
        &self.product[k]
    }

    /// `Ũ[(I_1,S_1) | (I_end, S_end, B_end)]` with `A_end` empty.
    pub fn entry(&self, i1: usize, s1: usize, i_end: usize, s_end: usize, b_end: &[usize]) -> C64 {
        let row_label = self.codec.plain(i1, s1);
        let col = self.codec.with_memory(i_end, s_end, b_end);
        self.product_labels
            .iter()
            .position(|&l| l == row_label)
            .and_then(|k| self.product[k].iter().find(|(c, _)| *c == col))
            .map_or(ZERO, |&(_, z)| z)
    }

    pub fn factor_norms(&self) -> Vec<f64> {
        self.factors.iter().map(SparseMatrix::operator_norm).collect()
    }

    pub fn product_frobenius(&self) -> f64 {
        self.product
            .iter()
            .flatten()
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the rows with `S_1 = ∅`.
    pub fn empty_row_frobenius(&self) -> f64 {
        self.product_labels
            .iter()
            .zip(&self.product)
            .filter(|(&l, _)| self.codec.decode(l).s == 0)
            .flat_map(|(_, row)| row.iter())
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Column label and entry for row `x` of step `t` (1-based) and column
/// composite index `j`, or `None` when the entry is forced to zero.
fn transition(
    spec: &DecompositionSpec,
    codec: &AugmentedCodec,
    t: usize,
    x: &AugmentedIndex,
    j: usize,
) -> Option<usize> {
    let i = spec.oracle_index(x.i);
    let s = update(x.s, i, t, spec);
    let mut a = x.a.clone();
    let mut b = x.b.clone();
    for (slot, &r) in spec.memory_indices.iter().enumerate() {
        if r == t {
            if b[slot] != 0 {
                return None;
            }
            b[slot] = i + 1;
        }
    }
    for (slot, &(sj, _)) in spec.equality_pairs.iter().enumerate() {
        if sj == t {
            if a[slot] != 0 {
                return None;
            }
            a[slot] = i + 1;
        }
    }
    let next = spec.oracle_index(j);
    for (slot, &(_, tj)) in spec.equality_pairs.iter().enumerate() {
        if tj == t + 1 {
            if a[slot] != next + 1 {
                return None;
            }
            a[slot] = 0;
        }
    }
    Some(codec.encode(&AugmentedIndex { i: j, s, a, b }))
}

fn build_factor(spec: &DecompositionSpec, t: usize, rows: &[usize]) -> SparseMatrix {
    let codec = spec.codec();
    let u = &spec.matrices[t - 1];
    let mut f = SparseMatrix::new(rows.len(), codec.dim());
    for (r, &label) in rows.iter().enumerate() {
        let x = codec.decode(label);
        for (j, &z) in u.row(x.i).iter().enumerate() {
            if z == ZERO {
                continue;
            }
            if let Some(col) = transition(spec, &codec, t, &x, j) {
                f.push(r, col, z);
            }
        }
    }
    f
}

fn assemble(spec: &DecompositionSpec, first_rows: Vec<usize>, product_rows: Vec<usize>) -> AugmentedMatrix {
    let codec = spec.codec();
    let all: Vec<usize> = (0..codec.dim()).collect();
    let mut factors = vec![build_factor(spec, 1, &first_rows)];
    for t in 2..=spec.d() {
        factors.push(build_factor(spec, t, &all));
    }
    let product_labels: Vec<usize> = product_rows.iter().map(|&r| first_rows[r]).collect();
    let product = product_rows
        .iter()
        .map(|&r| factors[0].propagate_row(r, &factors[1..]))
        .collect();
    AugmentedMatrix {
        codec,
        factors,
        first_rows,
        product,
        product_labels,
    }
}

/// Parity-only construction: `Ũ_1` has rows indexed by `I_1` alone.
pub fn decompose(spec: &DecompositionSpec) -> Result<AugmentedMatrix> {
    if !spec.is_basic() {
        return Err(Error::Specification(
            "equality or memory constraints need decompose_improved".into(),
        ));
    }
    let codec = spec.codec();
    let m = spec.space.dim();
    let first_rows: Vec<usize> = (0..m).map(|i| codec.plain(i, 0)).collect();
    Ok(assemble(spec, first_rows, (0..m).collect()))
}

/// Full construction with rows `(I_1, S_1, A_1, B_1)` in every factor; the
/// product is kept on the rows with empty registers.
pub fn decompose_improved(spec: &DecompositionSpec) -> Result<AugmentedMatrix> {
    let codec = spec.codec();
    let m = spec.space.dim();
    let first_rows: Vec<usize> = (0..codec.dim()).collect();
    let product_rows: Vec<usize> = (0..m)
        .flat_map(|i| (0..1usize << spec.n_tilde).map(move |s| (i, s)))
        .map(|(i, s)| codec.plain(i, s))
        .collect();
    Ok(assemble(spec, first_rows, product_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unitary, ONE};

    fn space(n: u32) -> IndexSpace {
        IndexSpace::new(n, 0, 0).unwrap()
    }

    #[test]
    fn update_rules() {
        let spec = DecompositionSpec::basic(space(2), vec![ComplexMatrix::identity(4); 3], &[3], 2).unwrap();
        assert_eq!(update(0b01, 1, 3, &spec), 0b01);
        assert_eq!(update(0b10, 1, 2, &spec), 0b00);
        assert_eq!(update(0b00, 1, 1, &spec), 0b00);
    }

    #[test]
    fn codec_round_trip() {
        let s = space(2);
        let spec = DecompositionSpec::improved(
            s,
            vec![ComplexMatrix::identity(4); 4],
            &[],
            2,
            &[(2, 4)],
            &[3],
        )
        .unwrap();
        let codec = spec.codec();
        assert_eq!(codec.dim(), 4 * 4 * 5 * 5);
        for flat in 0..codec.dim() {
            assert_eq!(codec.encode(&codec.decode(flat)), flat);
        }
    }

    #[test]
    fn single_step_is_u1() {
        let u = random_unitary(4, 3).unwrap();
        let spec = DecompositionSpec::basic(space(2), vec![u.clone()], &[], 2).unwrap();
        let aug = decompose(&spec).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(aug.entry(i, 0, j, 0, &[]), u.get(i, j));
                for s in 1..4 {
                    assert_eq!(aug.entry(i, 0, j, s, &[]), ZERO);
                }
            }
        }
    }

    #[test]
    fn identities_two_steps() {
        let spec = DecompositionSpec::basic(space(2), vec![ComplexMatrix::identity(4); 2], &[], 4).unwrap();
        let aug = decompose(&spec).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for s in 0..16 {
                    let expected = if i == j && s == 1 << i { ONE } else { ZERO };
                    assert_eq!(aug.entry(i, 0, j, s, &[]), expected);
                }
            }
        }
    }

    #[test]
    fn validation_errors() {
        let big = ComplexMatrix::identity(2).scale(C64::new(1.5, 0.0));
        assert!(matches!(
            DecompositionSpec::basic(space(1), vec![big], &[], 1),
            Err(Error::Validation(_))
        ));
        let ids = vec![ComplexMatrix::identity(2); 4];
        assert!(matches!(
            DecompositionSpec::improved(space(1), ids.clone(), &[], 1, &[(2, 3)], &[3]),
            Err(Error::Validation(_))
        ));
        assert!(DecompositionSpec::improved(space(1), ids.clone(), &[], 1, &[(3, 2)], &[]).is_err());
        assert!(DecompositionSpec::improved(space(1), ids.clone(), &[], 1, &[], &[1]).is_err());
        let wide = IndexSpace::new(4, 2, 0).unwrap();
        assert!(matches!(
            DecompositionSpec::improved(wide, vec![ComplexMatrix::identity(64); 4], &[], 4, &[(2, 3)], &[4]),
            Err(Error::Resource(_))
        ));
    }
}

//! Seeded generators for random algorithms, inputs and hybrids.

use bitvec::prelude::*;
use rand::seq::index::sample;
use rand::Rng;

use crate::decomposition::DecompositionSpec;
use crate::error::{Error, Result};
use crate::linalg::{random_unitary, IndexSpace, C64};
use crate::models::{Accept, AlgorithmSpec, DecisionTree, HybridSpec, Model};

/// Haar-random gates and a uniformly random accepting set (or predicate).
pub fn random_spec<R: Rng + ?Sized>(
    model: Model,
    space: IndexSpace,
    d: usize,
    rng: &mut R,
) -> Result<AlgorithmSpec> {
    let m = space.dim();
    let unitaries = (0..=d)
        .map(|_| random_unitary(m, rng.random()))
        .collect::<Result<Vec<_>>>()?;
    let accept = match model {
        Model::HalfBqp => Accept::Pairs((0..m * m).map(|_| rng.random::<bool>()).collect::<BitVec>()),
        _ => Accept::Set((0..m).map(|_| rng.random::<bool>()).collect::<BitVec>()),
    };
    AlgorithmSpec::new(model, space, unitaries, accept)
}

/// Uniform `±1` vector.
pub fn random_input<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    (0..n).map(|_| if rng.random() { 1 } else { -1 }).collect()
}

/// Complete decision tree of the given depth on distinct random bits per
/// path, with an independent random algorithm at each leaf.
pub fn random_hybrid<R: Rng + ?Sized>(
    model: Model,
    space: IndexSpace,
    d: usize,
    depth: usize,
    rng: &mut R,
) -> Result<HybridSpec> {
    let n = space.oracle_dim();
    let depth = depth.min(d).min(n);
    let mut leaves = Vec::new();
    let tree = grow(depth, n, &mut Vec::new(), &mut leaves, rng);
    let specs = leaves
        .iter()
        .map(|_| random_spec(model, space, d, rng))
        .collect::<Result<Vec<_>>>()?;
    HybridSpec::new(tree, specs)
}

/// Random contractions (Haar unitaries scaled by a factor in `[½, 1]`), a
/// random ignored set, and `p` equality pairs plus `q` memory steps drawn
/// from distinct steps in `[2, d]`.
pub fn random_decomposition_spec<R: Rng + ?Sized>(
    space: IndexSpace,
    d: usize,
    n_tilde: usize,
    p: usize,
    q: usize,
    rng: &mut R,
) -> Result<DecompositionSpec> {
    if 2 * p + q > d.saturating_sub(1) {
        return Err(Error::Parameter(format!(
            "{p} pairs and {q} memory steps need {} distinct steps in [2, {d}]",
            2 * p + q
        )));
    }
    let m = space.dim();
    let matrices = (0..d)
        .map(|_| {
            let u = random_unitary(m, rng.random())?;
            let scale = if rng.random() { 1.0 } else { rng.random_range(0.5..1.0) };
            Ok(u.scale(C64::new(scale, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let ignored: Vec<usize> = (1..=d).filter(|_| rng.random_bool(0.3)).collect();
    let mut steps: Vec<usize> = sample(rng, d - 1, 2 * p + q)
        .into_iter()
        .map(|j| j + 2)
        .collect();
    let memory = steps.split_off(2 * p);
    let pairs: Vec<(usize, usize)> = steps
        .chunks(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    DecompositionSpec::improved(space, matrices, &ignored, n_tilde, &pairs, &memory)
}

fn grow<R: Rng + ?Sized>(
    depth: usize,
    n: usize,
    path: &mut Vec<usize>,
    leaves: &mut Vec<usize>,
    rng: &mut R,
) -> DecisionTree {
    if depth == 0 {
        leaves.push(leaves.len());
        return DecisionTree::Leaf(leaves.len() - 1);
    }
    let free: Vec<usize> = (0..n).filter(|i| !path.contains(i)).collect();
    let var = free[sample(rng, free.len(), 1).index(0)];
    path.push(var);
    let minus = grow(depth - 1, n, path, leaves, rng);
    let plus = grow(depth - 1, n, path, leaves, rng);
    path.pop();
    DecisionTree::Query {
        var,
        minus: Box::new(minus),
        plus: Box::new(plus),
    }
}

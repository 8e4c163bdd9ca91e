//! Algorithms with a classical pre-processing phase.

use std::collections::HashSet;

use super::{acceptance_direct, AlgorithmSpec};
use crate::error::{Error, Result};
use crate::linalg::check_signs;

/// Classical decision tree over the input bits. Leaves name an entry of
/// [`HybridSpec::leaves`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(usize),
    Query {
        var: usize,
        minus: Box<DecisionTree>,
        plus: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { minus, plus, .. } => 1 + minus.depth().max(plus.depth()),
        }
    }

    /// Leaf reached on input `x`.
    pub fn walk(&self, x: &[i8]) -> usize {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(l) => return *l,
                DecisionTree::Query { var, minus, plus } => {
                    node = if x[*var] == -1 { minus } else { plus };
                }
            }
        }
    }

    fn check(&self, seen: &mut HashSet<usize>, n: usize, leaves: usize) -> Result<()> {
        match self {
            DecisionTree::Leaf(l) if *l >= leaves => Err(Error::Specification(format!(
                "leaf {l} has no algorithm ({leaves} supplied)"
            ))),
            DecisionTree::Leaf(_) => Ok(()),
            DecisionTree::Query { var, minus, plus } => {
                if *var >= n {
                    return Err(Error::Specification(format!("query of bit {var} ≥ N={n}")));
                }
                if !seen.insert(*var) {
                    return Err(Error::Specification(format!(
                        "bit {var} queried twice on one path"
                    )));
                }
                minus.check(seen, n, leaves)?;
                plus.check(seen, n, leaves)?;
                seen.remove(var);
                Ok(())
            }
        }
    }
}

/// Decision tree of depth at most `d` selecting one of several `d`-query
/// algorithms of the same model and register sizes.
#[derive(Clone, Debug)]
pub struct HybridSpec {
    tree: DecisionTree,
    leaves: Vec<AlgorithmSpec>,
}

impl HybridSpec {
    pub fn new(tree: DecisionTree, leaves: Vec<AlgorithmSpec>) -> Result<Self> {
        let first = leaves
            .first()
            .ok_or_else(|| Error::Specification("hybrid needs at least one leaf algorithm".into()))?;
        for l in &leaves[1..] {
            if l.model() != first.model() || l.space() != first.space() || l.d() != first.d() {
                return Err(Error::Specification(
                    "leaf algorithms differ in model, registers or query count".into(),
                ));
            }
        }
        if tree.depth() > first.d() {
            return Err(Error::Specification(format!(
                "tree depth {} exceeds query count {}",
                tree.depth(),
                first.d()
            )));
        }
        tree.check(&mut HashSet::new(), first.num_vars(), leaves.len())?;
        Ok(Self { tree, leaves })
    }

    pub fn tree(&self) -> &DecisionTree {
        &self.tree
    }

    pub fn leaves(&self) -> &[AlgorithmSpec] {
        &self.leaves
    }

    pub fn num_vars(&self) -> usize {
        self.leaves[0].num_vars()
    }

    pub fn d(&self) -> usize {
        self.leaves[0].d()
    }
}

/// Acceptance probability of the leaf algorithm that the tree selects on `x`.
pub fn acceptance_hybrid(h: &HybridSpec, x: &[i8]) -> Result<f64> {
    if x.len() != h.num_vars() {
        return Err(Error::Shape(format!(
            "input has length {}, expected {}",
            x.len(),
            h.num_vars()
        )));
    }
    check_signs(x)?;
    let leaf = h.tree.walk(x);
    let spec = h
        .leaves
        .get(leaf)
        .ok_or_else(|| Error::Specification(format!("leaf {leaf} has no algorithm")))?;
    acceptance_direct(spec, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, IndexSpace};

    fn constant(accept: bool) -> AlgorithmSpec {
        let s = IndexSpace::new(1, 0, 1).unwrap();
        let all: Vec<usize> = if accept { (0..4).collect() } else { vec![] };
        AlgorithmSpec::dqck(s, vec![ComplexMatrix::identity(4); 3], &all).unwrap()
    }

    #[test]
    fn depth_zero_is_plain() {
        let h = HybridSpec::new(DecisionTree::Leaf(0), vec![constant(true)]).unwrap();
        assert_eq!(acceptance_hybrid(&h, &[1, -1]).unwrap(), 1.0);
    }

    #[test]
    fn one_query_tree() {
        let tree = DecisionTree::Query {
            var: 0,
            minus: Box::new(DecisionTree::Leaf(0)),
            plus: Box::new(DecisionTree::Leaf(1)),
        };
        let h = HybridSpec::new(tree, vec![constant(false), constant(true)]).unwrap();
        for x in [[1i8, 1], [-1, 1], [1, -1], [-1, -1]] {
            let expected = (1.0 + x[0] as f64) / 2.0;
            assert_eq!(acceptance_hybrid(&h, &x).unwrap(), expected);
        }
    }

    #[test]
    fn invalid_trees() {
        let missing = DecisionTree::Query {
            var: 0,
            minus: Box::new(DecisionTree::Leaf(0)),
            plus: Box::new(DecisionTree::Leaf(3)),
        };
        assert!(matches!(
            HybridSpec::new(missing, vec![constant(true)]),
            Err(Error::Specification(_))
        ));
        let repeat = DecisionTree::Query {
            var: 1,
            minus: Box::new(DecisionTree::Leaf(0)),
            plus: Box::new(DecisionTree::Query {
                var: 1,
                minus: Box::new(DecisionTree::Leaf(0)),
                plus: Box::new(DecisionTree::Leaf(0)),
            }),
        };
        assert!(HybridSpec::new(repeat, vec![constant(true)]).is_err());
    }
}

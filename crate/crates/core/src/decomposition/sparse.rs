//! Row-list sparse complex matrices.
//!
//! Augmented factors are block-diagonal after regrouping, so their operator
//! norm is the largest singular value over connected components of the
//! bipartite row/column graph, each handled by a dense SVD.

use crate::linalg::{ComplexMatrix, C64, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, C64)>>,
}

/// Rows and columns of one connected block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    /// Entries are appended; the caller keeps column indices unique per row.
    pub fn push(&mut self, r: usize, c: usize, z: C64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r].push((c, z));
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, C64)] {
        &self.entries[r]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r]
            .iter()
            .find(|(cc, _)| *cc == c)
            .map_or(ZERO, |&(_, z)| z)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the selected rows.
    pub fn frobenius_norm_rows(&self, rows: &[usize]) -> f64 {
        rows.iter()
            .flat_map(|&r| self.entries[r].iter())
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn components(&self) -> Vec<Component> {
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, _) in row {
                let a = find(&mut parent, r);
                let b = find(&mut parent, self.rows + c);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Component> = Vec::new();
        let mut touched = vec![false; n];
        for (r, row) in self.entries.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            touched[r] = true;
            for &(c, _) in row {
                touched[self.rows + c] = true;
            }
        }
        for v in 0..n {
            if !touched[v] {
                continue;
            }
            let root = find(&mut parent, v);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Component {
                    rows: Vec::new(),
                    cols: Vec::new(),
                });
            }
            let comp = &mut out[slot[root]];
            if v < self.rows {
                comp.rows.push(v);
            } else {
                comp.cols.push(v - self.rows);
            }
        }
        out
    }

    /// Dense copy of one component.
    pub fn block(&self, comp: &Component) -> ComplexMatrix {
        let mut pos = std::collections::HashMap::with_capacity(comp.cols.len());
        for (j, &c) in comp.cols.iter().enumerate() {
            pos.insert(c, j);
        }
        let mut out = ComplexMatrix::zeros(comp.rows.len(), comp.cols.len());
        for (i, &r) in comp.rows.iter().enumerate() {
            for &(c, z) in &self.entries[r] {
                out.set(i, pos[&c], z);
            }
        }
        out
    }

    pub fn operator_norm(&self) -> f64 {
        self.components()
            .iter()
            .map(|c| self.block(c).operator_norm())
            .fold(0.0, f64::max)
    }

    /// `e_r^T · self · rest[0] · rest[1] ⋯` as a sparse row.
    pub fn propagate_row(&self, r: usize, rest: &[SparseMatrix]) -> Vec<(usize, C64)> {
        let mut cur: Vec<(usize, C64)> = self.entries[r].clone();
        for f in rest {
            let mut acc = vec![ZERO; f.cols];
            let mut hit = vec![false; f.cols];
            let mut touched = Vec::new();
            for &(k, a) in &cur {
                for &(c, z) in &f.entries[k] {
                    if !hit[c] {
                        hit[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * z;
                }
            }
            touched.sort_unstable();
            cur = touched.into_iter().map(|c| (c, acc[c])).collect();
        }
        cur
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, z) in row {
                out.set(r, c, z);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;

    #[test]
    fn block_diagonal_norm() {
        let u = random_unitary(3, 4).unwrap();
        let mut s = SparseMatrix::new(6, 6);
        for r in 0..3 {
            for c in 0..3 {
                s.push(r, c, u.get(r, c));
                s.push(r + 3, c + 3, u.get(r, c) * 0.5);
            }
        }
        assert_eq!(s.components().len(), 2);
        assert!((s.operator_norm() - 1.0).abs() < 1e-12);
        assert!((s.operator_norm() - s.to_dense().operator_norm()).abs() < 1e-12);
        let row = s.propagate_row(0, &[s.clone()]);
        let dense = s.to_dense().matmul(&s.to_dense());
        for (c, z) in row {
            assert!((z - dense.get(0, c)).norm() < 1e-12);
        }
    }
}

//! Nonnegative integer transition matrices: irreducibility and the
//! Perron-Frobenius eigenvalue.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::word::EdgeWord;

/// Step tolerance for the power iteration.
pub const PF_STEP_TOLERANCE: f64 = 1e-12;
/// Tolerance at which eigenvalues are reported and compared.
pub const PF_REPORT_TOLERANCE: f64 = 1e-9;
const PF_MAX_ITERATIONS: usize = 200_000;

/// Square matrix of nonnegative integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl TransitionMatrix {
    pub fn zeros(dim: usize) -> Self {
        TransitionMatrix { dim, entries: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "transition matrix must be square");
            entries.extend_from_slice(row);
        }
        TransitionMatrix { dim, entries }
    }

    /// Letter-count matrix of a list of edge words over `dim` edges.
    pub fn from_words(dim: usize, words: &[EdgeWord]) -> Self {
        let mut m = Self::zeros(dim);
        for (i, w) in words.iter().enumerate() {
            for l in w.letters() {
                m.entries[i * dim + l.edge.0] += 1;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.dim).map(|j| self.get(i, j)).sum()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        (0..self.dim).map(|i| self.get(i, j)).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|&x| x > 0)
    }

    pub fn mul(&self, other: &TransitionMatrix) -> TransitionMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Successor lists of the transition digraph (arc `i -> j` iff entry > 0).
    pub fn successors(&self) -> Vec<Vec<usize>> {
        (0..self.dim)
            .map(|i| (0..self.dim).filter(|&j| self.get(i, j) > 0).collect())
            .collect()
    }

    /// For every `i`, the set of `j` reachable by a walk of length >= 1.
    fn reachability(&self) -> Vec<Vec<bool>> {
        let succ = self.successors();
        (0..self.dim)
            .map(|i| {
                let mut seen = vec![false; self.dim];
                let mut stack: Vec<usize> = succ[i].clone();
                while let Some(j) = stack.pop() {
                    if !seen[j] {
                        seen[j] = true;
                        stack.extend(&succ[j]);
                    }
                }
                seen
            })
            .collect()
    }

    /// Irreducible: every ordered pair `(i, j)` is joined by a walk of
    /// positive length in the transition digraph.
    pub fn is_irreducible(&self) -> bool {
        self.dim > 0 && self.reachability().iter().all(|row| row.iter().all(|&r| r))
    }

    /// Strongly connected components (classes of mutually reachable
    /// indices, singletons included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let reach = self.reachability();
        let mut assigned = vec![false; self.dim];
        let mut out = Vec::new();
        for i in 0..self.dim {
            if assigned[i] {
                continue;
            }
            let class: Vec<usize> = (0..self.dim)
                .filter(|&j| j == i || (reach[i][j] && reach[j][i]))
                .collect();
            for &j in &class {
                assigned[j] = true;
            }
            out.push(class);
        }
        out
    }

    fn principal_submatrix(&self, indices: &[usize]) -> TransitionMatrix {
        let rows: Vec<Vec<u64>> = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        TransitionMatrix::from_rows(&rows)
    }

    /// Spectral radius. The Perron-Frobenius eigenvalue of a reducible
    /// nonnegative matrix is the largest one among its irreducible diagonal
    /// blocks, so each strongly connected component is handled separately.
    pub fn pf_eigenvalue(&self) -> f64 {
        self.components()
            .iter()
            .map(|class| {
                let block = self.principal_submatrix(class);
                if block.is_irreducible() {
                    block.irreducible_perron().0
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    /// Positive right Perron eigenvector normalised to max entry 1, with its
    /// eigenvalue. `None` unless the matrix is irreducible.
    pub fn perron_vector(&self) -> Option<(f64, Vec<f64>)> {
        self.is_irreducible().then(|| self.irreducible_perron())
    }

    /// Power iteration on `X + I`, which is primitive whenever `X` is
    /// irreducible. Stops once the Collatz-Wielandt bounds agree.
    fn irreducible_perron(&self) -> (f64, Vec<f64>) {
        let n = self.dim;
        let mut x = vec![1.0f64; n];
        let mut estimate = 0.0;
        for _ in 0..PF_MAX_ITERATIONS {
            let y: Vec<f64> = (0..n)
                .map(|i| x[i] + (0..n).map(|j| self.get(i, j) as f64 * x[j]).sum::<f64>())
                .collect();
            let (lo, hi) = y
                .iter()
                .zip(&x)
                .map(|(a, b)| a / b)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
            let norm = y.iter().cloned().fold(0.0, f64::max);
            x = y.into_iter().map(|v| v / norm).collect();
            estimate = 0.5 * (lo + hi) - 1.0;
            if hi - lo <= PF_STEP_TOLERANCE * hi.max(1.0) {
                break;
            }
        }
        (estimate, x)
    }

    /// Sum of all entries of `X^power`, exact.
    pub fn power_entry_sum(&self, power: usize) -> BigUint {
        let n = self.dim;
        // Row vector 1^T X^power, accumulated one multiplication at a time.
        let mut v: Vec<BigUint> = vec![BigUint::one(); n];
        for _ in 0..power {
            let mut next = vec![BigUint::zero(); n];
            for (i, vi) in v.iter().enumerate() {
                for (j, slot) in next.iter_mut().enumerate() {
                    let x = self.get(i, j);
                    if x > 0 {
                        *slot += vi * x;
                    }
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn is_irreducible(x: &TransitionMatrix) -> bool {
    x.is_irreducible()
}

pub fn pf_eigenvalue(x: &TransitionMatrix) -> f64 {
    x.pf_eigenvalue()
}

//! Adjacency matrices of shifts of finite type: validation, irreducibility,
//! period, primitivity, and the cyclic decomposition of an irreducible shift
//! into a tower over a mixing component.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Line, Result, SftError};
use crate::linalg::IntMatrix;

/// Square non-negative integer matrix with no zero row or column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct AdjacencyMatrix(IntMatrix);

impl AdjacencyMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.rows() == 0 {
            return Err(SftError::Empty);
        }
        if !m.is_square() {
            return Err(SftError::NonSquare {
                row: 0,
                len: m.cols(),
                expected: m.rows(),
            });
        }
        Self::check(m)
    }

    /// Validates raw rows, reporting the first ragged row if the input is not square.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(SftError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(SftError::NonSquare {
                row,
                len: r.len(),
                expected: k,
            });
        }
        Self::check(IntMatrix::from_vec(k, k, rows.concat()))
    }

    /// Convenience constructor for small literals.
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    fn check(m: IntMatrix) -> Result<Self> {
        let k = m.rows();
        for i in 0..k {
            for j in 0..k {
                if m[(i, j)].is_negative() {
                    return Err(SftError::NegativeEntry { row: i, col: j });
                }
            }
        }
        if let Some(i) = (0..k).find(|&i| m.row(i).iter().all(Zero::is_zero)) {
            return Err(SftError::ZeroRowOrColumn {
                line: Line::Row,
                index: i,
            });
        }
        if let Some(j) = (0..k).find(|&j| (0..k).all(|i| m[(i, j)].is_zero())) {
            return Err(SftError::ZeroRowOrColumn {
                line: Line::Column,
                index: j,
            });
        }
        Ok(AdjacencyMatrix(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Number of vertices `K`.
    pub fn size(&self) -> usize {
        self.0.rows()
    }

    fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&v| !self.0[(u, v)].is_zero())
    }

    fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&u| !self.0[(u, v)].is_zero())
    }

    /// BFS distances from vertex 0 along edges.
    fn bfs_depths(&self) -> Vec<Option<usize>> {
        let mut depth = vec![None; self.size()];
        depth[0] = Some(0);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let d = depth[u].unwrap();
            for v in self.successors(u) {
                if depth[v].is_none() {
                    depth[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        depth
    }

    /// Strong connectivity of the graph.
    pub fn is_irreducible(&self) -> bool {
        if self.bfs_depths().iter().any(Option::is_none) {
            return false;
        }
        let mut seen = vec![false; self.size()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for u in self.predecessors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Gcd of cycle lengths. Only defined for irreducible matrices.
    pub fn period(&self) -> Result<usize> {
        if !self.is_irreducible() {
            return Err(SftError::Reducible);
        }
        let depth: Vec<usize> = self.bfs_depths().into_iter().map(Option::unwrap).collect();
        let mut g = 0usize;
        for u in 0..self.size() {
            for v in self.successors(u) {
                let diff = (depth[u] + 1).abs_diff(depth[v]);
                g = g.gcd(&diff);
            }
        }
        Ok(g)
    }

    /// Some power up to the Wielandt bound `(K-1)^2 + 1` is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let k = self.size();
        let pattern: Vec<Vec<bool>> = (0..k)
            .map(|i| (0..k).map(|j| !self.0[(i, j)].is_zero()).collect())
            .collect();
        let bound = (k - 1) * (k - 1) + 1;
        let mut power = pattern.clone();
        for _ in 0..bound {
            if power.iter().flatten().all(|&b| b) {
                return true;
            }
            power = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (0..k).any(|t| power[i][t] && pattern[t][j]))
                        .collect()
                })
                .collect();
        }
        false
    }

    pub fn classify(&self) -> Classification {
        if !self.is_irreducible() {
            Classification::Reducible
        } else if self.is_primitive() {
            Classification::Primitive
        } else {
            Classification::Irreducible {
                period: self.period().expect("irreducible"),
            }
        }
    }

    pub fn require_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(SftError::Reducible)
        }
    }

    pub fn require_primitive(&self) -> Result<()> {
        self.require_irreducible()?;
        if self.is_primitive() {
            Ok(())
        } else {
            Err(SftError::NotPrimitive)
        }
    }

    /// Splits an irreducible matrix into cyclic classes by BFS depth mod the period.
    pub fn spectral_decomposition(&self) -> Result<SpectralDecomposition> {
        let n = self.period()?;
        let depth: Vec<usize> = self.bfs_depths().into_iter().map(Option::unwrap).collect();
        let mut classes = vec![Vec::new(); n];
        for (v, d) in depth.iter().enumerate() {
            classes[d % n].push(v);
        }
        let vertex_order: Vec<usize> = classes.iter().flatten().copied().collect();
        let a = &self.0;
        let mut component = IntMatrix::identity(classes[0].len());
        for i in 0..n {
            let block = a.select(&classes[i], &classes[(i + 1) % n]);
            component = &component * &block;
        }
        let component = AdjacencyMatrix::new(component)?;
        Ok(SpectralDecomposition {
            period: n,
            classes,
            component,
            vertex_order,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Primitive,
    Irreducible { period: usize },
    Reducible,
}

/// Cyclic tower structure of an irreducible shift of period `n`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    pub period: usize,
    /// `classes[i]` holds the vertices at BFS depth `i` mod `period` from vertex 0.
    pub classes: Vec<Vec<usize>>,
    /// Product of the consecutive class-to-class blocks, starting and ending at class 0.
    pub component: AdjacencyMatrix,
    /// Original vertex indices listed class by class.
    pub vertex_order: Vec<usize>,
}

impl SpectralDecomposition {
    /// `A` with rows and columns permuted into class order.
    pub fn reordered(&self, a: &AdjacencyMatrix) -> IntMatrix {
        a.matrix().select(&self.vertex_order, &self.vertex_order)
    }

    /// Every nonzero block of the reordered matrix goes from class `i` to class `i+1`.
    pub fn is_block_cyclic(&self, a: &AdjacencyMatrix) -> bool {
        let n = self.period;
        for (i, from) in self.classes.iter().enumerate() {
            for (j, to) in self.classes.iter().enumerate() {
                if j == (i + 1) % n {
                    continue;
                }
                if !a.matrix().select(from, to).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

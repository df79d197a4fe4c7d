use std::sync::{OnceLock, RwLock};

use crate::cylinder::{CentralizerLattice, CommutatorData};
use crate::error::Result;
use crate::linalg::{minimal_polynomial, IntMatrix, MinPolyData};
use crate::sft::AdjacencyMatrix;
use crate::traces::{self, PerronData};

/// Numeric knobs shared by the float-backed and bounded-search procedures.
#[derive(Clone, Debug, PartialEq)]
pub struct SftConfig {
    /// Power-iteration stopping tolerance on the 1-norm change of successive iterates.
    pub perron_tol: f64,
    pub perron_max_iters: usize,
    /// Band around zero of `v . u_r` inside which positivity is decided by iteration only.
    pub positivity_tol: f64,
    /// Iteration cap for positivity and for K1 equality searches.
    pub j_max: usize,
}

impl Default for SftConfig {
    fn default() -> Self {
        SftConfig {
            perron_tol: 1e-12,
            perron_max_iters: 1_000_000,
            positivity_tol: 1e-9,
            j_max: 64,
        }
    }
}

/// Immutable per-matrix context. Derived data is computed on first use and cached.
#[derive(Debug)]
pub struct Sft {
    adj: AdjacencyMatrix,
    minpoly: MinPolyData,
    config: SftConfig,
    powers: RwLock<Vec<IntMatrix>>,
    centralizer: OnceLock<CentralizerLattice>,
    commutator: OnceLock<CommutatorData>,
    perron: OnceLock<Result<PerronData>>,
}

impl Sft {
    pub fn new(adj: AdjacencyMatrix) -> Self {
        Self::with_config(adj, SftConfig::default())
    }

    pub fn with_config(adj: AdjacencyMatrix, config: SftConfig) -> Self {
        let minpoly = minimal_polynomial(adj.matrix());
        let k = adj.size();
        Sft {
            adj,
            minpoly,
            config,
            powers: RwLock::new(vec![IntMatrix::identity(k)]),
            centralizer: OnceLock::new(),
            commutator: OnceLock::new(),
            perron: OnceLock::new(),
        }
    }

    pub fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adj
    }

    pub fn a(&self) -> &IntMatrix {
        self.adj.matrix()
    }

    /// Vertex count `K`.
    pub fn size(&self) -> usize {
        self.adj.size()
    }

    pub fn minpoly(&self) -> &MinPolyData {
        &self.minpoly
    }

    /// Multiplicity `l` of 0 as a root of the minimal polynomial.
    pub fn l(&self) -> usize {
        self.minpoly.l
    }

    pub fn config(&self) -> &SftConfig {
        &self.config
    }

    /// `A^j`, memoized.
    pub fn power(&self, j: usize) -> IntMatrix {
        if let Some(p) = self.powers.read().expect("power cache poisoned").get(j) {
            return p.clone();
        }
        let mut cache = self.powers.write().expect("power cache poisoned");
        while cache.len() <= j {
            let next = cache.last().expect("nonempty") * self.a();
            cache.push(next);
        }
        cache[j].clone()
    }

    pub fn centralizer_basis(&self) -> &CentralizerLattice {
        self.centralizer
            .get_or_init(|| CentralizerLattice::compute(self.a()))
    }

    pub(crate) fn commutator_data(&self) -> &CommutatorData {
        self.commutator
            .get_or_init(|| CommutatorData::compute(self.a()))
    }

    /// Perron data under the context's tolerance; fails for non-primitive matrices.
    pub fn perron(&self) -> Result<&PerronData> {
        self.perron
            .get_or_init(|| {
                traces::perron(
                    &self.adj,
                    self.config.perron_tol,
                    self.config.perron_max_iters,
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

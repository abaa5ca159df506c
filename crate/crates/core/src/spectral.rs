//! Matrix construction and the spectral route to module structure.
//!
//! From a design graph we form the degree matrix `D`, adjacency `A`,
//! Laplacian `L = D - A` and, dividing by the degree sum `d(G) = tr(L)`,
//! the design density matrix `rho = L / d(G)` (unit trace, positive
//! semidefinite). The multiplicity of eigenvalue zero counts the modules;
//! grouping vertices by the support of the kernel projector recovers the
//! modules themselves without depending on which kernel basis the
//! eigensolver happened to return.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use thiserror::Error;

use crate::disjoint::DisjointSet;
use crate::model::{PartitionMethod, SystemDesign, VertexOrder, VertexPartition};

/// Eigenvalues below `EIGENVALUE_TOLERANCE_SCALE * max(|lambda_max|, 1)`
/// count as zero.
pub const EIGENVALUE_TOLERANCE_SCALE: f64 = 1e-9;

/// Kernel projector entries larger than this in magnitude tie two vertices
/// into the same module.
pub const KERNEL_LINK_THRESHOLD: f64 = 1e-8;

/// Symmetry slack accepted on input matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Entries of a Fiedler vector within this of zero count as zero, both for
/// sign normalisation and for side assignment.
pub const FIEDLER_ZERO_TOLERANCE: f64 = 1e-10;

/// The Fiedler eigenvalue is flagged as degenerate when the next eigenvalue
/// up sits closer than this, relative to the spectral scale. Splits under a
/// degenerate Fiedler value are unreliable: the eigensolver may return an
/// arbitrary mix of the near-tied eigenvectors.
pub const DEGENERACY_GAP_SCALE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("degree-sum is zero; density matrix undefined")]
    ZeroDegreeSum,
    #[error("matrix is not symmetric: entry ({i},{j}) differs from ({j},{i}) by {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("kernel is empty: no eigenvalue below tolerance {tau:e}")]
    EmptyKernel { tau: f64 },
    #[error("matrix is disconnected: kernel dimension {dim}, expected 1")]
    Disconnected { dim: usize },
    #[error("need at least 2 vertices, got {0}")]
    TooSmall(usize),
}

/// The four matrices of a design, all over the same vertex order.
#[derive(Debug, Clone)]
pub struct DesignMatrices {
    pub order: VertexOrder,
    pub degree: DMatrix<f64>,
    pub adjacency: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
    /// `d(G) = tr(D) = 2 * |edges|`.
    pub degree_sum: usize,
    pub density: DMatrix<f64>,
}

/// Builds `D`, `A`, `L` and `rho` for a design. Fails when the design has
/// no edges, because `rho = L / d(G)` needs a positive degree sum.
pub fn build_matrices(design: &SystemDesign) -> Result<DesignMatrices, SpectralError> {
    let n = design.vertex_count();
    let mut adjacency = DMatrix::zeros(n, n);
    let mut degree = DMatrix::zeros(n, n);
    for (u, v) in design.edge_vertices() {
        adjacency[(u, v)] = 1.0;
        adjacency[(v, u)] = 1.0;
        degree[(u, u)] += 1.0;
        degree[(v, v)] += 1.0;
    }
    let laplacian = &degree - &adjacency;
    let degree_sum = laplacian.trace() as usize;
    if degree_sum == 0 {
        return Err(SpectralError::ZeroDegreeSum);
    }
    let density = &laplacian / degree_sum as f64;
    debug_assert!(
        (density.trace() - 1.0).abs() <= 1e-12,
        "density trace must be 1"
    );
    debug_assert!(
        (0..n).all(|i| laplacian.row(i).sum().abs() <= 1e-12),
        "laplacian rows must sum to 0"
    );
    Ok(DesignMatrices {
        order: design.vertex_order(),
        degree,
        adjacency,
        laplacian,
        degree_sum,
        density,
    })
}

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending, column
/// `k` of `eigenvectors` paired with `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    /// Zero cutoff for this spectrum.
    pub tau: f64,
}

impl EigenSystem {
    /// Replaces the default zero cutoff, for callers that need a coarser or
    /// finer notion of "numerically zero".
    pub fn with_tolerance(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    /// Count of eigenvalues below the zero cutoff.
    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < self.tau).count()
    }
}

/// Full symmetric eigendecomposition with eigenvalues sorted ascending.
/// Rejects matrices whose asymmetry exceeds `SYMMETRY_TOLERANCE`.
pub fn eigendecompose(matrix: &DMatrix<f64>) -> Result<EigenSystem, SpectralError> {
    let n = matrix.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (matrix[(i, j)] - matrix[(j, i)]).abs();
            if delta > SYMMETRY_TOLERANCE {
                return Err(SpectralError::NotSymmetric { i, j, delta });
            }
        }
    }
    let eigen = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eigen.eigenvectors.column(src));
    }
    let scale = eigenvalues.iter().fold(1.0f64, |m, &l| m.max(l.abs()));
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        tau: EIGENVALUE_TOLERANCE_SCALE * scale,
    })
}

/// Orthogonal projector onto the kernel, `K = sum of v v^T` over kernel
/// eigenvectors. `K[i][j]` is nonzero exactly when vertices `i` and `j`
/// share a module, independent of the kernel basis returned by the solver.
pub fn kernel_projector(es: &EigenSystem) -> Result<DMatrix<f64>, SpectralError> {
    let k = es.zero_multiplicity();
    if k == 0 {
        return Err(SpectralError::EmptyKernel { tau: es.tau });
    }
    let kernel = es.eigenvectors.columns(0, k);
    Ok(kernel * kernel.transpose())
}

/// Modules via the kernel projector: vertices `i`, `j` land in one group
/// when `|K[i][j]| > KERNEL_LINK_THRESHOLD`.
pub fn modules_from_kernel(es: &EigenSystem) -> Result<VertexPartition, SpectralError> {
    let projector = kernel_projector(es)?;
    let n = projector.nrows();
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if projector[(i, j)].abs() > KERNEL_LINK_THRESHOLD {
                ds.union(i, j);
            }
        }
    }
    Ok(VertexPartition::new(
        n,
        ds.groups(),
        PartitionMethod::Spectral,
    ))
}

/// Laplacian of the subgraph induced by `module` (vertex indices, any
/// order). Row `k` of the result corresponds to the `k`-th smallest vertex
/// in `module`; degrees are recomputed inside the subgraph.
pub fn sub_laplacian(design: &SystemDesign, module: &[usize]) -> DMatrix<f64> {
    let mut vertices: Vec<usize> = module.to_vec();
    vertices.sort_unstable();
    let local = |v: usize| vertices.binary_search(&v).ok();
    let m = vertices.len();
    let mut lap = DMatrix::zeros(m, m);
    for (u, v) in design.edge_vertices() {
        if let (Some(lu), Some(lv)) = (local(u), local(v)) {
            lap[(lu, lv)] -= 1.0;
            lap[(lv, lu)] -= 1.0;
            lap[(lu, lu)] += 1.0;
            lap[(lv, lv)] += 1.0;
        }
    }
    lap
}

/// The Fiedler pair of a connected graph's Laplacian.
#[derive(Debug, Clone)]
pub struct FiedlerVector {
    /// Smallest eigenvalue above the zero cutoff (algebraic connectivity).
    pub value: f64,
    /// Unit eigenvector, sign-normalised so its first entry larger than
    /// `FIEDLER_ZERO_TOLERANCE` in magnitude is positive.
    pub vector: Vec<f64>,
    /// True when the eigenvalue above sits within `DEGENERACY_GAP_SCALE *
    /// max(|lambda_max|, 1)` of the Fiedler value. See the constant's note.
    pub degenerate: bool,
}

/// Computes the Fiedler eigenpair of a connected Laplacian. Fails when the
/// kernel dimension is not exactly 1 (a disconnected graph) or the matrix
/// has fewer than two rows.
pub fn fiedler_vector(laplacian: &DMatrix<f64>) -> Result<FiedlerVector, SpectralError> {
    let n = laplacian.nrows();
    if n < 2 {
        return Err(SpectralError::TooSmall(n));
    }
    let es = eigendecompose(laplacian)?;
    let dim = es.zero_multiplicity();
    if dim == 0 {
        return Err(SpectralError::EmptyKernel { tau: es.tau });
    }
    if dim > 1 {
        return Err(SpectralError::Disconnected { dim });
    }
    let value = es.eigenvalues[1];
    let mut vector: Vec<f64> = es.eigenvectors.column(1).iter().copied().collect();
    if let Some(first) = vector.iter().find(|x| x.abs() > FIEDLER_ZERO_TOLERANCE) {
        if *first < 0.0 {
            for x in &mut vector {
                *x = -*x;
            }
        }
    }
    let scale = es.eigenvalues.iter().fold(1.0f64, |m, &l| m.max(l.abs()));
    let degenerate = n > 2 && (es.eigenvalues[2] - value) < DEGENERACY_GAP_SCALE * scale;
    Ok(FiedlerVector {
        value,
        vector,
        degenerate,
    })
}

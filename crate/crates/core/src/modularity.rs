//! Module quality and repair: bridge detection, Fiedler splitting, and
//! comparison of partitions produced by different methods.
//!
//! A module that only holds together through one or two coupling edges is a
//! design smell: internally it is two clusters, externally it reads as one.
//! Bridges are found by exhaustive edge removal (modules are small, so the
//! quadratic cost is irrelevant), and the suggested repair comes from the
//! sign pattern of the module's Fiedler vector.

use thiserror::Error;

use crate::disjoint::DisjointSet;
use crate::model::{SystemDesign, VertexPartition};
use crate::spectral::{fiedler_vector, sub_laplacian, SpectralError, FIEDLER_ZERO_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularityError {
    #[error("module is not connected")]
    DisconnectedModule,
    #[error("module has {0} vertex(es); splitting needs at least 2")]
    TooSmall(usize),
    #[error("partitions cover different vertex sets ({0} vs {1} vertices)")]
    UniverseMismatch(usize, usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Edges of the subgraph induced by `module`, as `(structor vertex,
/// functional vertex)` pairs in declaration order. `module` must be sorted.
fn induced_edges(design: &SystemDesign, module: &[usize]) -> Vec<(usize, usize)> {
    design
        .edge_vertices()
        .into_iter()
        .filter(|&(f, s)| module.binary_search(&f).is_ok() && module.binary_search(&s).is_ok())
        .map(|(f, s)| (s, f))
        .collect()
}

/// Number of connected components among `module` vertices using `edges`,
/// skipping the edge at index `skip` if given.
fn component_count(module: &[usize], edges: &[(usize, usize)], skip: Option<usize>) -> usize {
    let local = |v: usize| {
        module
            .binary_search(&v)
            .expect("edge endpoint inside module")
    };
    let mut ds = DisjointSet::new(module.len());
    let mut count = module.len();
    for (i, &(s, f)) in edges.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        if ds.union(local(s), local(f)) {
            count -= 1;
        }
    }
    count
}

fn sorted_module(module: &[usize]) -> Vec<usize> {
    let mut m = module.to_vec();
    m.sort_unstable();
    m
}

/// Finds the bridge edges of a connected module: those whose removal
/// disconnects it, each reported as `(structor vertex, functional vertex)`
/// in edge declaration order. Checked by removing each edge in turn and
/// recounting components.
pub fn detect_outliers(
    design: &SystemDesign,
    module: &[usize],
) -> Result<Vec<(usize, usize)>, ModularityError> {
    let module = sorted_module(module);
    let edges = induced_edges(design, &module);
    if component_count(&module, &edges, None) != 1 {
        return Err(ModularityError::DisconnectedModule);
    }
    Ok((0..edges.len())
        .filter(|&i| component_count(&module, &edges, Some(i)) > 1)
        .map(|i| edges[i])
        .collect())
}

/// Outcome of bisecting a module along its Fiedler vector.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// The module that was split, sorted.
    pub parent: Vec<usize>,
    /// Fiedler vector entries aligned with `parent`.
    pub values: Vec<f64>,
    /// Algebraic connectivity of the module.
    pub fiedler_value: f64,
    /// Vertices on the nonnegative side of the cut.
    pub side_a: Vec<usize>,
    /// Vertices on the negative side.
    pub side_b: Vec<usize>,
    /// Edges crossing the cut, `(structor vertex, functional vertex)`.
    pub cut_edges: Vec<(usize, usize)>,
    /// Vertices whose entry was within `FIEDLER_ZERO_TOLERANCE` of zero and
    /// were therefore assigned to side A by convention.
    pub zero_entries: Vec<usize>,
    /// True when both sides contain at least one structor and one
    /// functional, i.e. both halves are designs in their own right.
    pub valid: bool,
    /// True when the Fiedler eigenvalue is nearly tied with the next one
    /// up, which makes the side assignment unreliable.
    pub degenerate: bool,
}

/// Splits a connected module in two along the sign pattern of its Fiedler
/// vector (computed on the induced sub-Laplacian, degrees recounted inside
/// the module).
pub fn split_module(
    design: &SystemDesign,
    module: &[usize],
) -> Result<SplitResult, ModularityError> {
    let parent = sorted_module(module);
    if parent.len() < 2 {
        return Err(ModularityError::TooSmall(parent.len()));
    }
    let edges = induced_edges(design, &parent);
    if component_count(&parent, &edges, None) != 1 {
        return Err(ModularityError::DisconnectedModule);
    }
    let fiedler = fiedler_vector(&sub_laplacian(design, &parent))?;

    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    let mut zero_entries = Vec::new();
    for (k, &v) in parent.iter().enumerate() {
        let x = fiedler.vector[k];
        if x.abs() <= FIEDLER_ZERO_TOLERANCE {
            zero_entries.push(v);
        }
        if x >= -FIEDLER_ZERO_TOLERANCE {
            side_a.push(v);
        } else {
            side_b.push(v);
        }
    }
    debug_assert!(
        !side_a.is_empty() && !side_b.is_empty(),
        "a Fiedler vector is orthogonal to the all-ones vector, so both signs occur"
    );

    let in_a = |v: usize| side_a.binary_search(&v).is_ok();
    let cut_edges: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(s, f)| in_a(s) != in_a(f))
        .collect();

    let functional_count = design.functionals().len();
    let is_valid_side = |side: &[usize]| {
        side.iter().any(|&v| v >= functional_count) && side.iter().any(|&v| v < functional_count)
    };
    let valid = is_valid_side(&side_a) && is_valid_side(&side_b);

    Ok(SplitResult {
        parent,
        values: fiedler.vector,
        fiedler_value: fiedler.value,
        side_a,
        side_b,
        cut_edges,
        zero_entries,
        valid,
        degenerate: fiedler.degenerate,
    })
}

/// Difference between two partitions of the same vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionComparison {
    pub equal: bool,
    /// Groups present in the first partition but not the second.
    pub only_in_first: Vec<Vec<usize>>,
    pub only_in_second: Vec<Vec<usize>>,
}

/// Compares two partitions group by group. Fails when they do not cover
/// the same number of vertices.
pub fn compare_partitions(
    a: &VertexPartition,
    b: &VertexPartition,
) -> Result<PartitionComparison, ModularityError> {
    if a.total() != b.total() {
        return Err(ModularityError::UniverseMismatch(a.total(), b.total()));
    }
    let only_in_first: Vec<Vec<usize>> = a
        .groups()
        .iter()
        .filter(|g| !b.groups().contains(g))
        .cloned()
        .collect();
    let only_in_second: Vec<Vec<usize>> = b
        .groups()
        .iter()
        .filter(|g| !a.groups().contains(g))
        .cloned()
        .collect();
    Ok(PartitionComparison {
        equal: only_in_first.is_empty() && only_in_second.is_empty(),
        only_in_first,
        only_in_second,
    })
}

/// Static quality measures of one module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleStats {
    /// Module vertices, sorted.
    pub vertices: Vec<usize>,
    pub structor_count: usize,
    pub functional_count: usize,
    pub edge_count: usize,
    /// Internal edges over `structors * functionals`; `None` for modules
    /// with only one kind of vertex (singletons).
    pub density: Option<f64>,
    /// Bridge edges, `(structor vertex, functional vertex)`.
    pub bridges: Vec<(usize, usize)>,
    /// True when the module hangs together only through bridges and is
    /// sparse: bridges exist and density is below the caller's threshold.
    pub reducible: bool,
}

/// Computes [`ModuleStats`] for one connected module. `split_threshold` is
/// the density below which a bridged module counts as reducible.
pub fn module_stats(
    design: &SystemDesign,
    module: &[usize],
    split_threshold: f64,
) -> Result<ModuleStats, ModularityError> {
    let vertices = sorted_module(module);
    let bridges = detect_outliers(design, &vertices)?;
    let total_functionals = design.functionals().len();
    let structor_count = vertices.iter().filter(|&&v| v >= total_functionals).count();
    let functional_count = vertices.len() - structor_count;
    let edge_count = induced_edges(design, &vertices).len();
    let pairs = structor_count * functional_count;
    let density = (pairs > 0).then(|| edge_count as f64 / pairs as f64);
    let reducible = !bridges.is_empty() && density.is_some_and(|d| d < split_threshold);
    Ok(ModuleStats {
        vertices,
        structor_count,
        functional_count,
        edge_count,
        density,
        bridges,
        reducible,
    })
}

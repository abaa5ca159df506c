//! Random design generators for stress tests and benchmarks. Both are
//! deterministic given the caller's RNG, so suites can pin seeds and fail
//! reproducibly.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::disjoint::DisjointSet;
use crate::model::SystemDesign;

/// Uniform random design: structor and functional counts drawn from
/// `1..=max`, every edge present independently with `edge_probability`.
/// Draws with no edge at all are discarded and retried, so the result is
/// always analysable.
pub fn random_design<R: Rng + ?Sized>(
    rng: &mut R,
    max_structors: usize,
    max_functionals: usize,
    edge_probability: f64,
) -> SystemDesign {
    loop {
        let s = rng.random_range(1..=max_structors);
        let f = rng.random_range(1..=max_functionals);
        let mut edges = Vec::new();
        for si in 0..s {
            for fi in 0..f {
                if rng.random_bool(edge_probability) {
                    edges.push((si, fi));
                }
            }
        }
        if !edges.is_empty() {
            return SystemDesign::synthetic(s, f, &edges);
        }
    }
}

/// A design made of two internally connected clusters joined by exactly one
/// coupling edge, for exercising outlier detection and splitting. Every
/// vertex keeps at least two edges inside its own cluster, so the coupling
/// edge is the unique single-edge cut and the two clusters are the one
/// correct way to bisect the design.
#[derive(Debug, Clone)]
pub struct BridgedClusters {
    pub design: SystemDesign,
    /// Vertex indices of the first cluster, sorted.
    pub side_a: Vec<usize>,
    /// Vertex indices of the second cluster, sorted.
    pub side_b: Vec<usize>,
    /// The coupling, `(structor vertex, functional vertex)`.
    pub bridge: (usize, usize),
}

/// Generates two clusters of 2 to 5 structors and functionals each. Every
/// cluster starts complete bipartite and sheds random edges while staying
/// connected, at least `min_density` dense and at least two edges deep at
/// every vertex; a single bridge then joins a random structor of one cluster
/// to a random functional of the other.
pub fn bridged_clusters<R: Rng + ?Sized>(rng: &mut R, min_density: f64) -> BridgedClusters {
    let sa = rng.random_range(2..=5);
    let fa = rng.random_range(2..=5);
    let sb = rng.random_range(2..=5);
    let fb = rng.random_range(2..=5);

    let mut edges = cluster_edges(rng, 0, 0, sa, fa, min_density);
    edges.extend(cluster_edges(rng, sa, fa, sb, fb, min_density));

    // The bridge runs structor-of-one to functional-of-the-other; which way
    // round is a coin flip.
    let bridge_ordinals = if rng.random_bool(0.5) {
        (rng.random_range(0..sa), fa + rng.random_range(0..fb))
    } else {
        (sa + rng.random_range(0..sb), rng.random_range(0..fa))
    };
    edges.push(bridge_ordinals);

    let total_f = fa + fb;
    let design = SystemDesign::synthetic(sa + sb, total_f, &edges);
    let side_a: Vec<usize> = (0..fa).chain(total_f..total_f + sa).collect();
    let side_b: Vec<usize> = (fa..total_f)
        .chain(total_f + sa..total_f + sa + sb)
        .collect();
    let bridge = (total_f + bridge_ordinals.0, bridge_ordinals.1);
    BridgedClusters {
        design,
        side_a,
        side_b,
        bridge,
    }
}

/// Edges of one cluster occupying structor ordinals `s0..s0+s` and
/// functional ordinals `f0..f0+f`: complete bipartite, then thinned to a
/// random density target in `[min_density, 1]` without disconnecting and
/// without dropping any vertex below two edges. Keeping two edges per vertex
/// rules out internal bridges at these sizes, which is what lets a later
/// coupling edge be the unique minimum cut.
fn cluster_edges<R: Rng + ?Sized>(
    rng: &mut R,
    s0: usize,
    f0: usize,
    s: usize,
    f: usize,
    min_density: f64,
) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..s)
        .flat_map(|si| (0..f).map(move |fi| (s0 + si, f0 + fi)))
        .collect();
    let target = rng.random_range(min_density..=1.0);
    let total_pairs = (s * f) as f64;
    let mut candidates: Vec<usize> = (0..edges.len()).collect();
    candidates.shuffle(rng);
    let mut structor_degree = vec![f; s];
    let mut functional_degree = vec![s; f];
    // Tombstone removable edges until the next removal would undershoot the
    // density target.
    let mut remaining = edges.len();
    for idx in candidates {
        if (remaining - 1) as f64 / total_pairs < target {
            break;
        }
        let (si, fi) = (edges[idx].0 - s0, edges[idx].1 - f0);
        if structor_degree[si] <= 2 || functional_degree[fi] <= 2 {
            continue;
        }
        if stays_connected(&edges, idx, s0, f0, s, f) {
            edges[idx] = (usize::MAX, usize::MAX);
            structor_degree[si] -= 1;
            functional_degree[fi] -= 1;
            remaining -= 1;
        }
    }
    edges.retain(|&(a, _)| a != usize::MAX);
    edges
}

fn stays_connected(
    edges: &[(usize, usize)],
    skip: usize,
    s0: usize,
    f0: usize,
    s: usize,
    f: usize,
) -> bool {
    // Local numbering: functionals 0..f, structors f..f+s.
    let mut ds = DisjointSet::new(s + f);
    let mut merges = 0;
    for (i, &(si, fi)) in edges.iter().enumerate() {
        if i == skip || si == usize::MAX {
            continue;
        }
        if ds.union(fi - f0, f + (si - s0)) {
            merges += 1;
        }
    }
    merges == s + f - 1
}

//! Shared fixtures and strategies for the unit tests.

use nalgebra::DMatrix;
use proptest::prelude::*;

use crate::model::SystemDesign;

/// Shorthand for [`SystemDesign::synthetic`].
pub(crate) fn design_from_edges(
    s_count: usize,
    f_count: usize,
    edges: &[(usize, usize)],
) -> SystemDesign {
    SystemDesign::synthetic(s_count, f_count, edges)
}

/// The running example: a prototype-pattern design with four classes, four
/// methods and five provides edges, decomposing into three modules.
pub(crate) fn prototype_design() -> SystemDesign {
    design_from_edges(4, 4, &[(0, 0), (1, 0), (1, 1), (2, 2), (3, 3)])
}

/// Random design with at least one edge: up to `max_s` structors, `max_f`
/// functionals, each possible edge present with probability `p`.
pub(crate) fn arb_design(
    max_s: usize,
    max_f: usize,
    p: f64,
) -> impl Strategy<Value = SystemDesign> {
    (1..=max_s, 1..=max_f)
        .prop_flat_map(move |(s, f)| {
            proptest::collection::vec(proptest::bool::weighted(p), s * f)
                .prop_map(move |mask| (s, f, mask))
        })
        .prop_filter_map("design needs at least one edge", |(s, f, mask)| {
            let edges: Vec<(usize, usize)> = mask
                .iter()
                .enumerate()
                .filter(|&(_, &present)| present)
                .map(|(i, _)| (i / f, i % f))
                .collect();
            if edges.is_empty() {
                None
            } else {
                Some(design_from_edges(s, f, &edges))
            }
        })
}

pub(crate) fn matrices_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    a.nrows() == b.nrows()
        && a.ncols() == b.ncols()
        && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
}

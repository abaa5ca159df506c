//! The projector route to module structure.
//!
//! Reading the density matrix as an operator on a register of basis kets
//! (one per vertex, labelled in binary), every edge `{u, v}` contributes a
//! rank-one projector term `c * (|u> - |v>)(<u| - <v|)` with `c = 1/d(G)`,
//! and `rho` is exactly the sum of those terms. Grouping terms that share a
//! ket, transitively, partitions the sum into block-orthogonal operators
//! whose supports are the modules. This is the third, operator-level route
//! to the same decomposition the component oracle and the kernel analysis
//! produce.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::disjoint::DisjointSet;
use crate::model::{PartitionMethod, SystemDesign, VertexOrder, VertexPartition};
use crate::spectral::DesignMatrices;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectorError {
    #[error("ket index {index} out of range for {total} basis kets")]
    KetOutOfRange { index: usize, total: usize },
}

/// Width in bits of ket labels for a system of `total` vertices: enough to
/// tell all vertices apart, and at least one bit.
pub fn ket_width(total: usize) -> usize {
    if total <= 2 {
        1
    } else {
        (usize::BITS - (total - 1).leading_zeros()) as usize
    }
}

/// A basis ket: vertex index plus its fixed-width binary label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetLabel {
    pub index: usize,
    pub bits: String,
}

impl KetLabel {
    pub fn new(index: usize, total: usize) -> Self {
        let width = ket_width(total);
        KetLabel {
            index,
            bits: format!("{index:0width$b}"),
        }
    }
}

/// One term of the edge decomposition: `coefficient * (|u> - |v>)(<u| - <v|)`
/// with `u < v` (for a design, `u` is always the functional endpoint,
/// because functionals come first in the vertex order).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProjector {
    pub u: usize,
    pub v: usize,
    pub coefficient: f64,
}

impl EdgeProjector {
    /// Dense form of the term over `n` basis kets: zero everywhere except
    /// the 2x2 block on rows and columns `u`, `v`.
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        m[(self.u, self.u)] = self.coefficient;
        m[(self.v, self.v)] = self.coefficient;
        m[(self.u, self.v)] = -self.coefficient;
        m[(self.v, self.u)] = -self.coefficient;
        m
    }
}

/// The result of applying `rho` to a basis ket: a sparse column, ket index
/// to coefficient, holding only nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct KetColumnOperator {
    pub ket: usize,
    pub coefficients: BTreeMap<usize, f64>,
}

/// `rho |j>`: column `j` of the density matrix in sparse form. The entries
/// are the ket's own degree over `d(G)` on the diagonal and `-1/d(G)` for
/// each neighbour.
pub fn apply_to_ket(m: &DesignMatrices, ket: usize) -> Result<KetColumnOperator, ProjectorError> {
    let n = m.density.nrows();
    if ket >= n {
        return Err(ProjectorError::KetOutOfRange {
            index: ket,
            total: n,
        });
    }
    let mut coefficients = BTreeMap::new();
    for i in 0..n {
        let c = m.density[(i, ket)];
        if c != 0.0 {
            coefficients.insert(i, c);
        }
    }
    Ok(KetColumnOperator { ket, coefficients })
}

/// Splits `rho` into its edge projector terms, one per adjacency entry in
/// the upper triangle, scanned row-major so terms come out ordered by
/// `(u, v)`.
pub fn edge_decomposition(m: &DesignMatrices) -> Vec<EdgeProjector> {
    let n = m.adjacency.nrows();
    let coefficient = 1.0 / m.degree_sum as f64;
    let mut terms = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if m.adjacency[(u, v)] != 0.0 {
                terms.push(EdgeProjector { u, v, coefficient });
            }
        }
    }
    terms
}

/// Groups terms that touch a common ket, transitively. Returns classes of
/// indices into `terms`, each class sorted, classes ordered by smallest
/// member.
pub fn partition_terms(terms: &[EdgeProjector]) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(terms.len());
    let mut first_touch: BTreeMap<usize, usize> = BTreeMap::new();
    for (t, term) in terms.iter().enumerate() {
        for ket in [term.u, term.v] {
            match first_touch.get(&ket) {
                Some(&earlier) => {
                    ds.union(earlier, t);
                }
                None => {
                    first_touch.insert(ket, t);
                }
            }
        }
    }
    ds.groups()
}

/// Modules from the term classes: a class's module is the union of kets its
/// terms touch, and every untouched (isolated) vertex forms a singleton.
pub fn modules_from_projectors(
    design: &SystemDesign,
    terms: &[EdgeProjector],
    classes: &[Vec<usize>],
) -> VertexPartition {
    let n = design.vertex_count();
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(classes.len());
    let mut touched = vec![false; n];
    for class in classes {
        let mut members = Vec::new();
        for &t in class {
            for ket in [terms[t].u, terms[t].v] {
                if !touched[ket] {
                    touched[ket] = true;
                    members.push(ket);
                }
            }
        }
        groups.push(members);
    }
    for (v, was_touched) in touched.iter().enumerate() {
        if !was_touched {
            groups.push(vec![v]);
        }
    }
    VertexPartition::new(n, groups, PartitionMethod::Projector)
}

/// Rendering options for [`render_dirac`].
#[derive(Debug, Clone, Copy, Default)]
pub struct DiracStyle {
    /// Print the structor endpoint first, matching the way provides edges
    /// are written, instead of the canonical ascending ket order.
    pub source_order: bool,
    /// Prefix the term with its scalar coefficient.
    pub with_coefficient: bool,
}

/// Renders one term in Dirac notation, e.g. `(|000>-|100>)(<000|-<100|)`
/// with the real bra-ket glyphs. Canonical order puts the smaller ket
/// first; source order puts the structor first.
pub fn render_dirac(term: &EdgeProjector, order: &VertexOrder, style: DiracStyle) -> String {
    let total = order.total();
    let (first, second) = if style.source_order && !order.is_structor(term.u) {
        (term.v, term.u)
    } else {
        (term.u, term.v)
    };
    let a = KetLabel::new(first, total).bits;
    let b = KetLabel::new(second, total).bits;
    let body = format!("(|{a}\u{27e9}-|{b}\u{27e9})(\u{27e8}{a}|-\u{27e8}{b}|)");
    if style.with_coefficient {
        format!("{} \u{b7} {body}", term.coefficient)
    } else {
        body
    }
}

//! CSV matrix dumps and Graphviz rendering.

use std::fmt;
use std::str::FromStr;

use crate::model::{SystemDesign, VertexPartition};
use crate::spectral::DesignMatrices;

/// Which of the four design matrices to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Degree,
    Adjacency,
    Laplacian,
    Density,
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" => Ok(MatrixKind::Degree),
            "adjacency" => Ok(MatrixKind::Adjacency),
            "laplacian" => Ok(MatrixKind::Laplacian),
            "density" => Ok(MatrixKind::Density),
            other => Err(format!(
                "unknown matrix `{other}`; expected degree, adjacency, laplacian or density"
            )),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Degree => "degree",
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::Density => "density",
        })
    }
}

/// Renders one matrix as CSV with a header row and column of vertex ids.
/// The integer matrices print as integers; the density matrix prints in
/// scientific notation with 13 significant digits.
pub fn matrix_csv(m: &DesignMatrices, kind: MatrixKind) -> String {
    let matrix = match kind {
        MatrixKind::Degree => &m.degree,
        MatrixKind::Adjacency => &m.adjacency,
        MatrixKind::Laplacian => &m.laplacian,
        MatrixKind::Density => &m.density,
    };
    let ids: Vec<&str> = m.order.ids().collect();
    let mut out = String::new();
    out.push(',');
    out.push_str(&ids.join(","));
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        out.push_str(id);
        for j in 0..ids.len() {
            let x = matrix[(i, j)];
            if kind == MatrixKind::Density {
                out.push_str(&format!(",{x:.12e}"));
            } else {
                out.push_str(&format!(",{}", x as i64));
            }
        }
        out.push('\n');
    }
    out
}

/// Renders the design as an undirected Graphviz graph: boxes for
/// structors, ellipses for functionals, one cluster per module of the
/// given partition, edges in declaration order.
pub fn dot_graph(design: &SystemDesign, partition: &VertexPartition) -> String {
    let order = design.vertex_order();
    let mut out = String::new();
    out.push_str(&format!("graph \"{}\" {{\n", design.name()));
    for (i, group) in partition.groups().iter().enumerate() {
        out.push_str(&format!("  subgraph cluster_{i} {{\n"));
        out.push_str(&format!("    label=\"module {}\";\n", i + 1));
        for &v in group {
            let shape = if order.is_structor(v) {
                "box"
            } else {
                "ellipse"
            };
            out.push_str(&format!("    \"{}\" [shape={shape}];\n", order.id(v)));
        }
        out.push_str("  }\n");
    }
    for e in design.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            design.structors()[e.structor].id,
            design.functionals()[e.functional].id
        ));
    }
    out.push_str("}\n");
    out
}

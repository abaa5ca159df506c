//! The full analysis pipeline and its report.
//!
//! [`analyze`] runs all three decomposition methods over a design, checks
//! them against each other, gathers per-module quality measures and renders
//! the projector classes. The report serialises to JSON with a fixed field
//! order, so identical inputs give byte-identical output.

use serde::Serialize;
use thiserror::Error;

use crate::model::{InheritanceFinding, SystemDesign, VertexPartition};
use crate::modularity::{module_stats, split_module, ModularityError};
use crate::projectors::{
    edge_decomposition, modules_from_projectors, partition_terms, render_dirac, DiracStyle,
};
use crate::spectral::{build_matrices, eigendecompose, modules_from_kernel, SpectralError};

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Modularity(#[from] ModularityError),
}

/// Knobs for [`analyze`]. The defaults match the command line defaults.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Override for the zero-eigenvalue cutoff; `None` picks the relative
    /// default.
    pub tolerance: Option<f64>,
    /// Include the four matrices in the report.
    pub include_matrices: bool,
    /// Prefix projector terms with their coefficient.
    pub verbose_projectors: bool,
    /// Density below which a bridged module is flagged reducible.
    pub split_threshold: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            tolerance: None,
            include_matrices: false,
            verbose_projectors: false,
            split_threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignSummary {
    pub name: String,
    pub structor_count: usize,
    pub functional_count: usize,
    pub edge_count: usize,
    pub structors: Vec<crate::model::Entity>,
    pub functionals: Vec<crate::model::Entity>,
    /// Execution order for circuit designs, empty otherwise.
    pub sequence: Vec<String>,
    pub inheritance: Vec<InheritanceFinding>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub degree_sum: usize,
    /// Zero cutoff applied to the Laplacian spectrum.
    pub tolerance: f64,
    pub laplacian_eigenvalues: Vec<f64>,
    pub density_eigenvalues: Vec<f64>,
    /// Multiplicity of eigenvalue zero, i.e. the module count.
    pub zero_multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    /// Vertex ids in matrix order.
    pub order: Vec<String>,
    pub degree: Vec<Vec<i64>>,
    pub adjacency: Vec<Vec<i64>>,
    pub laplacian: Vec<Vec<i64>>,
    pub density: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodsReport {
    /// Connected components, the ground truth.
    pub components: Vec<Vec<String>>,
    /// Kernel eigenvector grouping.
    pub spectral: Vec<Vec<String>>,
    /// Projector class grouping.
    pub projector: Vec<Vec<String>>,
    /// True when all three grouped the vertices identically.
    pub agreement: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleEntry {
    pub members: Vec<String>,
    pub structors: Vec<String>,
    pub functionals: Vec<String>,
    pub edge_count: usize,
    pub density: Option<f64>,
    /// Bridge edges as `[structor id, functional id]` pairs.
    pub bridges: Vec<(String, String)>,
    pub reducible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorClass {
    /// Ids of the vertices this class's terms span.
    pub module: Vec<String>,
    /// Rendered Dirac terms, in `(u, v)` scan order.
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub design: DesignSummary,
    pub spectrum: SpectrumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<MatrixReport>,
    pub methods: MethodsReport,
    pub modules: Vec<ModuleEntry>,
    pub projector_classes: Vec<ProjectorClass>,
    pub warnings: Vec<String>,
}

fn ids(design: &SystemDesign, vertices: &[usize]) -> Vec<String> {
    let order = design.vertex_order();
    vertices.iter().map(|&v| order.id(v).to_string()).collect()
}

fn partition_ids(design: &SystemDesign, p: &VertexPartition) -> Vec<Vec<String>> {
    p.groups().iter().map(|g| ids(design, g)).collect()
}

fn matrix_i64(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<i64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] as i64).collect())
        .collect()
}

fn matrix_f64(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Runs the whole pipeline. Fails on edgeless designs (no density matrix)
/// and propagates numerical failures; method disagreement is not an error
/// here, it is reported in `methods.agreement` for the caller to act on.
pub fn analyze(
    design: &SystemDesign,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, AnalyzeError> {
    let order = design.vertex_order();
    let components = design.connected_components();

    let m = build_matrices(design)?;
    let mut es = eigendecompose(&m.laplacian)?;
    if let Some(tau) = opts.tolerance {
        es = es.with_tolerance(tau);
    }
    let es_density = eigendecompose(&m.density)?;
    let spectral = modules_from_kernel(&es)?;

    let terms = edge_decomposition(&m);
    let classes = partition_terms(&terms);
    let projector = modules_from_projectors(design, &terms, &classes);

    let agreement = components.same_groups(&spectral) && components.same_groups(&projector);

    let mut warnings = Vec::new();
    for v in design.isolated_vertices() {
        warnings.push(format!(
            "isolated vertex `{}` has no provides edge and forms a singleton module",
            order.id(v)
        ));
    }
    if es.zero_multiplicity() != es_density.zero_multiplicity() {
        warnings.push(format!(
            "Laplacian and density spectra disagree on the zero multiplicity ({} vs {})",
            es.zero_multiplicity(),
            es_density.zero_multiplicity()
        ));
    }

    let mut modules = Vec::with_capacity(components.group_count());
    for (i, group) in components.groups().iter().enumerate() {
        let stats = module_stats(design, group, opts.split_threshold)?;
        if stats.reducible {
            warnings.push(format!(
                "module {} is held together by {} bridge(s) at density {:.3}; consider splitting",
                i + 1,
                stats.bridges.len(),
                stats.density.unwrap_or(0.0)
            ));
        }
        let functional_count = design.functionals().len();
        modules.push(ModuleEntry {
            members: ids(design, &stats.vertices),
            structors: ids(
                design,
                &stats
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| v >= functional_count)
                    .collect::<Vec<_>>(),
            ),
            functionals: ids(
                design,
                &stats
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| v < functional_count)
                    .collect::<Vec<_>>(),
            ),
            edge_count: stats.edge_count,
            density: stats.density,
            bridges: stats
                .bridges
                .iter()
                .map(|&(s, f)| (order.id(s).to_string(), order.id(f).to_string()))
                .collect(),
            reducible: stats.reducible,
        });
    }

    let style = DiracStyle {
        source_order: false,
        with_coefficient: opts.verbose_projectors,
    };
    let projector_classes = classes
        .iter()
        .map(|class| {
            let mut span = Vec::new();
            for &t in class {
                for ket in [terms[t].u, terms[t].v] {
                    if !span.contains(&ket) {
                        span.push(ket);
                    }
                }
            }
            span.sort_unstable();
            ProjectorClass {
                module: ids(design, &span),
                terms: class
                    .iter()
                    .map(|&t| render_dirac(&terms[t], &order, style))
                    .collect(),
            }
        })
        .collect();

    Ok(AnalysisReport {
        design: DesignSummary {
            name: design.name().to_string(),
            structor_count: design.structors().len(),
            functional_count: design.functionals().len(),
            edge_count: design.edges().len(),
            structors: design.structors().to_vec(),
            functionals: design.functionals().to_vec(),
            sequence: design
                .sequence_ids()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            inheritance: design.infer_inheritance(),
        },
        spectrum: SpectrumReport {
            degree_sum: m.degree_sum,
            tolerance: es.tau,
            laplacian_eigenvalues: es.eigenvalues.clone(),
            density_eigenvalues: es_density.eigenvalues.clone(),
            zero_multiplicity: es.zero_multiplicity(),
        },
        matrices: opts.include_matrices.then(|| MatrixReport {
            order: order.ids().map(str::to_string).collect(),
            degree: matrix_i64(&m.degree),
            adjacency: matrix_i64(&m.adjacency),
            laplacian: matrix_i64(&m.laplacian),
            density: matrix_f64(&m.density),
        }),
        methods: MethodsReport {
            components: partition_ids(design, &components),
            spectral: partition_ids(design, &spectral),
            projector: partition_ids(design, &projector),
            agreement,
        },
        modules,
        projector_classes,
        warnings,
    })
}

impl AnalysisReport {
    /// Pretty JSON with a trailing newline, field order fixed by the struct
    /// definitions.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        out.push('\n');
        out
    }
}

/// Plain-text rendering of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let d = &r.design;
    out.push_str(&format!(
        "design {}: {} structors, {} functionals, {} edges\n",
        d.name, d.structor_count, d.functional_count, d.edge_count
    ));
    out.push_str(&format!(
        "degree-sum d(G) = {}, zero multiplicity {} (tolerance {:.1e})\n",
        r.spectrum.degree_sum, r.spectrum.zero_multiplicity, r.spectrum.tolerance
    ));
    out.push_str(&format!(
        "methods agree: {}\n",
        if r.methods.agreement { "yes" } else { "NO" }
    ));
    if !d.sequence.is_empty() {
        out.push_str(&format!("sequence: {}\n", d.sequence.join(" -> ")));
    }
    out.push('\n');
    for (i, m) in r.modules.iter().enumerate() {
        out.push_str(&format!("module {}: {}\n", i + 1, m.members.join(" ")));
        match m.density {
            Some(density) => out.push_str(&format!(
                "  {} edge(s), density {:.3}{}\n",
                m.edge_count,
                density,
                if m.reducible { ", reducible" } else { "" }
            )),
            None => out.push_str("  singleton\n"),
        }
        if !m.bridges.is_empty() {
            let rendered: Vec<String> = m.bridges.iter().map(|(s, f)| format!("{s}-{f}")).collect();
            out.push_str(&format!("  bridges: {}\n", rendered.join(" ")));
        }
    }
    if !d.inheritance.is_empty() {
        out.push('\n');
        out.push_str("inheritance:\n");
        for f in &d.inheritance {
            out.push_str(&format!(
                "  {} provided by {}\n",
                f.functional,
                f.providers.join(", ")
            ));
        }
    }
    out.push('\n');
    out.push_str("projector classes:\n");
    for (i, class) in r.projector_classes.iter().enumerate() {
        out.push_str(&format!(
            "  class {} ({}):\n",
            i + 1,
            class.module.join(" ")
        ));
        for term in &class.terms {
            out.push_str(&format!("    {term}\n"));
        }
    }
    if !r.warnings.is_empty() {
        out.push('\n');
        for w in &r.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum SplitRequestError {
    #[error("no structor or functional has id `{0}`")]
    UnknownVertex(String),
    #[error(transparent)]
    Modularity(#[from] ModularityError),
}

/// One vertex's Fiedler entry in a split report.
#[derive(Debug, Clone, Serialize)]
pub struct FiedlerEntry {
    pub id: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub design: String,
    /// The module being split (ids, vertex order).
    pub module: Vec<String>,
    pub fiedler_value: f64,
    pub entries: Vec<FiedlerEntry>,
    pub side_a: Vec<String>,
    pub side_b: Vec<String>,
    /// Cut edges as `[structor id, functional id]` pairs.
    pub cut_edges: Vec<(String, String)>,
    /// Vertices assigned to side A because their entry was numerically zero.
    pub zero_entries: Vec<String>,
    /// Both sides hold at least one structor and one functional.
    pub valid: bool,
    /// Fiedler eigenvalue nearly tied with the next one; sides unreliable.
    pub degenerate: bool,
    /// Density of the module before the split, `None` for singletons.
    pub parent_density: Option<f64>,
    pub threshold: f64,
    /// The module was flagged reducible at this threshold, so the split is
    /// not just possible but advisable.
    pub recommended: bool,
}

/// Splits the module containing the vertex with id `selector` and reports
/// the outcome. The selector may name any structor or functional in the
/// module.
pub fn split_by_selector(
    design: &SystemDesign,
    selector: &str,
    threshold: f64,
) -> Result<SplitReport, SplitRequestError> {
    let order = design.vertex_order();
    let vertex = order
        .index_of(selector)
        .ok_or_else(|| SplitRequestError::UnknownVertex(selector.to_string()))?;
    let components = design.connected_components();
    let group = components.groups()[components
        .group_of(vertex)
        .expect("components cover every vertex")]
    .clone();

    let stats = module_stats(design, &group, threshold)?;
    let split = split_module(design, &group)?;

    let edge_ids = |edges: &[(usize, usize)]| {
        edges
            .iter()
            .map(|&(s, f)| (order.id(s).to_string(), order.id(f).to_string()))
            .collect()
    };
    Ok(SplitReport {
        design: design.name().to_string(),
        module: ids(design, &split.parent),
        fiedler_value: split.fiedler_value,
        entries: split
            .parent
            .iter()
            .zip(&split.values)
            .map(|(&v, &value)| FiedlerEntry {
                id: order.id(v).to_string(),
                value,
            })
            .collect(),
        side_a: ids(design, &split.side_a),
        side_b: ids(design, &split.side_b),
        cut_edges: edge_ids(&split.cut_edges),
        zero_entries: ids(design, &split.zero_entries),
        valid: split.valid,
        degenerate: split.degenerate,
        parent_density: stats.density,
        threshold,
        recommended: stats.reducible,
    })
}

impl SplitReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        out.push('\n');
        out
    }
}

/// Plain-text rendering of a split report.
pub fn render_split_text(r: &SplitReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "splitting module [{}] of design {}\n",
        r.module.join(" "),
        r.design
    ));
    out.push_str(&format!(
        "fiedler value {:.6}{}\n",
        r.fiedler_value,
        if r.degenerate {
            " (degenerate: nearly tied with the next eigenvalue, sides unreliable)"
        } else {
            ""
        }
    ));
    for e in &r.entries {
        out.push_str(&format!("  {:>4}  {:+.6}\n", e.id, e.value));
    }
    out.push_str(&format!("side A: {}\n", r.side_a.join(" ")));
    out.push_str(&format!("side B: {}\n", r.side_b.join(" ")));
    let cuts: Vec<String> = r
        .cut_edges
        .iter()
        .map(|(s, f)| format!("{s}-{f}"))
        .collect();
    out.push_str(&format!("cut edges: {}\n", cuts.join(" ")));
    if !r.zero_entries.is_empty() {
        out.push_str(&format!(
            "zero entries (assigned to side A): {}\n",
            r.zero_entries.join(" ")
        ));
    }
    match r.parent_density {
        Some(d) => out.push_str(&format!(
            "parent density {:.3} against threshold {:.3}: split {}\n",
            d,
            r.threshold,
            if r.recommended {
                "recommended"
            } else {
                "not required"
            }
        )),
        None => out.push_str("parent is a singleton\n"),
    }
    out.push_str(&format!(
        "split is {}\n",
        if r.valid {
            "valid: both sides keep a structor and a functional"
        } else {
            "INVALID: a side lost all structors or all functionals"
        }
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{design_from_edges, prototype_design};

    #[test]
    fn analysis_of_the_prototype_reports_three_agreeing_modules() {
        let r = analyze(&prototype_design(), &AnalyzeOptions::default()).unwrap();
        assert!(r.methods.agreement);
        assert_eq!(r.spectrum.zero_multiplicity, 3);
        assert_eq!(r.modules.len(), 3);
        assert_eq!(
            r.methods.components,
            vec![
                vec!["F1", "F2", "S1", "S2"],
                vec!["F3", "S3"],
                vec!["F4", "S4"]
            ]
        );
        assert_eq!(r.methods.spectral, r.methods.components);
        assert_eq!(r.methods.projector, r.methods.components);
        assert_eq!(r.design.inheritance.len(), 1);
        assert!(r.matrices.is_none());
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn matrices_are_included_on_request() {
        let opts = AnalyzeOptions {
            include_matrices: true,
            ..Default::default()
        };
        let r = analyze(&prototype_design(), &opts).unwrap();
        let m = r.matrices.unwrap();
        assert_eq!(m.order[0], "F1");
        assert_eq!(m.laplacian[0], vec![2, 0, 0, 0, -1, -1, 0, 0]);
        assert_eq!(m.density[0][0], 0.2);
        assert_eq!(m.degree[5][5], 2);
        assert_eq!(m.adjacency[0][4], 1);
    }

    #[test]
    fn json_output_is_deterministic() {
        let d = prototype_design();
        let a = analyze(&d, &AnalyzeOptions::default()).unwrap().to_json();
        let b = analyze(&d, &AnalyzeOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn isolated_vertices_are_warned_about() {
        let d = design_from_edges(2, 2, &[(0, 0)]);
        let r = analyze(&d, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.warnings.len(), 2);
        assert!(r.warnings[0].contains("`F2`"));
        assert!(r.warnings[1].contains("`S2`"));
        assert_eq!(r.modules.len(), 3);
        assert_eq!(r.modules[1].density, None);
    }

    #[test]
    fn reducible_modules_are_warned_about() {
        // Two 4-cycles joined by one bridge: density 9/16 forces a higher
        // threshold to trip the flag.
        let d = design_from_edges(
            4,
            4,
            &[
                (0, 0),
                (0, 1),
                (1, 0),
                (1, 1),
                (2, 2),
                (2, 3),
                (3, 2),
                (3, 3),
                (0, 2),
            ],
        );
        let opts = AnalyzeOptions {
            split_threshold: 0.6,
            ..Default::default()
        };
        let r = analyze(&d, &opts).unwrap();
        assert!(r.modules[0].reducible);
        assert!(r.warnings.iter().any(|w| w.contains("consider splitting")));
    }

    #[test]
    fn verbose_projectors_carry_coefficients() {
        let opts = AnalyzeOptions {
            verbose_projectors: true,
            ..Default::default()
        };
        let r = analyze(&prototype_design(), &opts).unwrap();
        assert!(r.projector_classes[0].terms[0].starts_with("0.1 · "));
    }

    #[test]
    fn text_rendering_mentions_the_essentials() {
        let r = analyze(&prototype_design(), &AnalyzeOptions::default()).unwrap();
        let text = render_text(&r);
        assert!(text.contains("design design: 4 structors, 4 functionals, 5 edges"));
        assert!(text.contains("degree-sum d(G) = 10"));
        assert!(text.contains("module 1: F1 F2 S1 S2"));
        assert!(text.contains("F1 provided by S1, S2"));
        assert!(text.contains("(|000⟩-|100⟩)(⟨000|-⟨100|)"));
    }

    #[test]
    fn split_report_for_the_prototype_path_module() {
        let d = prototype_design();
        let r = split_by_selector(&d, "S2", 0.5).unwrap();
        assert_eq!(r.module, vec!["F1", "F2", "S1", "S2"]);
        assert_eq!(r.side_a, vec!["F1", "S1"]);
        assert_eq!(r.side_b, vec!["F2", "S2"]);
        assert_eq!(r.cut_edges, vec![("S2".to_string(), "F1".to_string())]);
        assert!(r.valid);
        assert_eq!(r.parent_density, Some(0.75));
        assert!(!r.recommended, "density 0.75 is above the 0.5 threshold");
        let text = render_split_text(&r);
        assert!(text.contains("side A: F1 S1"));
        assert!(text.contains("split is valid"));
    }

    #[test]
    fn split_report_rejects_unknown_selectors_and_tiny_modules() {
        let d = prototype_design();
        let err = split_by_selector(&d, "S9", 0.5).unwrap_err();
        assert_eq!(err.to_string(), "no structor or functional has id `S9`");

        let isolated = design_from_edges(2, 2, &[(0, 0)]);
        let err = split_by_selector(&isolated, "S2", 0.5).unwrap_err();
        assert!(matches!(
            err,
            SplitRequestError::Modularity(ModularityError::TooSmall(1))
        ));
    }

    #[test]
    fn tolerance_override_reaches_the_spectrum_report() {
        let r = analyze(
            &prototype_design(),
            &AnalyzeOptions {
                tolerance: Some(1e-6),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.spectrum.tolerance, 1e-6);
        assert_eq!(r.spectrum.zero_multiplicity, 3);
    }
}

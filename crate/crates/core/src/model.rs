//! The design model: structors, functionals, and the provides relation.
//!
//! A [`SystemDesign`] is a bipartite graph. Structors generalise classes,
//! services, or circuit stages; functionals generalise the methods or
//! behaviours they provide. Every edge runs between the two sets, never
//! within one. Vertices get a fixed ordering (functionals first, then
//! structors, each in declaration order) so that matrices, ket labels and
//! reports all agree on who sits where.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disjoint::DisjointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("empty design: need at least one structor and one functional")]
    EmptyDesign,
    #[error("invalid id `{0}`: ids start with a letter or underscore and continue with letters, digits, `_` or `-`")]
    InvalidId(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown structor `{0}`")]
    UnknownStructor(String),
    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),
    #[error("duplicate provides edge `{0} {1}`")]
    DuplicateEdge(String, String),
    #[error("sequence entry `{0}` is not a declared structor")]
    UnknownSequenceEntry(String),
}

/// True when `s` matches `[A-Za-z_][A-Za-z0-9_-]*`.
pub fn is_valid_id(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// A named design element: stable `id` plus human-readable display `name`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub name: String,
}

impl Entity {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            name: name.into(),
        }
    }
}

/// One provides edge, stored as ordinals into the structor and functional
/// declaration lists (not vertex indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub structor: usize,
    pub functional: usize,
}

/// Fixed vertex numbering for a design: functionals occupy `0..functional_count`,
/// structors follow, both in declaration order.
#[derive(Debug, Clone)]
pub struct VertexOrder {
    labels: Vec<String>,
    functional_count: usize,
    index: HashMap<String, usize>,
}

impl VertexOrder {
    fn new(functionals: &[Entity], structors: &[Entity]) -> Self {
        let mut labels = Vec::with_capacity(functionals.len() + structors.len());
        labels.extend(functionals.iter().map(|e| e.id.clone()));
        labels.extend(structors.iter().map(|e| e.id.clone()));
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        VertexOrder {
            labels,
            functional_count: functionals.len(),
            index,
        }
    }

    pub fn total(&self) -> usize {
        self.labels.len()
    }

    pub fn functional_count(&self) -> usize {
        self.functional_count
    }

    pub fn structor_count(&self) -> usize {
        self.labels.len() - self.functional_count
    }

    /// Vertex id at index `v`. Panics when out of range, like slice indexing.
    pub fn id(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn is_structor(&self, v: usize) -> bool {
        v >= self.functional_count
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }
}

/// How a vertex partition was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMethod {
    /// Connected components via union-find; the ground truth the numerical
    /// methods are checked against.
    Oracle,
    /// Kernel eigenvector support grouping.
    Spectral,
    /// Projector-term partitioning.
    Projector,
    /// A module bisected along its Fiedler vector.
    FiedlerSplit,
}

impl fmt::Display for PartitionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PartitionMethod::Oracle => "oracle",
            PartitionMethod::Spectral => "spectral",
            PartitionMethod::Projector => "projector",
            PartitionMethod::FiedlerSplit => "fiedler-split",
        };
        f.write_str(s)
    }
}

/// A partition of the vertex set `0..total` into disjoint, covering groups,
/// held in canonical form: every group sorted ascending, groups ordered by
/// smallest member. Two partitions over the same vertices compare equal
/// exactly when they group identically, regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    total: usize,
    groups: Vec<Vec<usize>>,
    method: PartitionMethod,
}

impl VertexPartition {
    /// Canonicalises `groups`. Panics if the groups do not exactly cover
    /// `0..total` without overlap; callers construct partitions from
    /// algorithms whose output is covering by construction, so a violation
    /// here is a bug, not an input error.
    pub fn new(total: usize, mut groups: Vec<Vec<usize>>, method: PartitionMethod) -> Self {
        let mut seen = vec![false; total];
        for g in &mut groups {
            g.sort_unstable();
            for &v in g.iter() {
                assert!(
                    v < total,
                    "vertex {v} out of range for partition of {total}"
                );
                assert!(!seen[v], "vertex {v} appears in two groups");
                seen[v] = true;
            }
        }
        assert!(
            seen.iter().all(|&s| s),
            "partition does not cover all {total} vertices"
        );
        groups.retain(|g| !g.is_empty());
        groups.sort_by_key(|g| g[0]);
        VertexPartition {
            total,
            groups,
            method,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn method(&self) -> PartitionMethod {
        self.method
    }

    /// Index of the group containing vertex `v`.
    pub fn group_of(&self, v: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.binary_search(&v).is_ok())
    }

    /// Equality of the grouping itself, ignoring which method produced it.
    pub fn same_groups(&self, other: &VertexPartition) -> bool {
        self.total == other.total && self.groups == other.groups
    }
}

/// Inheritance-like reuse: one functional provided by several structors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InheritanceFinding {
    /// Functional id.
    pub functional: String,
    /// Ids of all providing structors, in declaration order.
    pub providers: Vec<String>,
}

/// A validated bipartite design graph.
///
/// Construction checks ids, cross-references and duplicate edges, so any
/// value of this type is safe to analyse. Edge order and declaration order
/// are preserved; everything downstream (matrices, reports, exports) is
/// deterministic in them.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDesign {
    name: String,
    structors: Vec<Entity>,
    functionals: Vec<Entity>,
    edges: Vec<Edge>,
    /// Execution order of structors (circuit designs only), as ordinals.
    sequence: Vec<usize>,
}

impl SystemDesign {
    /// Validates and builds a design. `provides` pairs are `(structor id,
    /// functional id)`; `sequence` lists structor ids or is empty.
    pub fn new(
        name: impl Into<String>,
        structors: Vec<Entity>,
        functionals: Vec<Entity>,
        provides: &[(String, String)],
        sequence: &[String],
    ) -> Result<Self, ModelError> {
        if structors.is_empty() || functionals.is_empty() {
            return Err(ModelError::EmptyDesign);
        }
        let mut ids: HashMap<&str, ()> = HashMap::new();
        for e in structors.iter().chain(functionals.iter()) {
            if !is_valid_id(&e.id) {
                return Err(ModelError::InvalidId(e.id.clone()));
            }
            if ids.insert(&e.id, ()).is_some() {
                return Err(ModelError::DuplicateId(e.id.clone()));
            }
        }
        let structor_index: HashMap<&str, usize> = structors
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), i))
            .collect();
        let functional_index: HashMap<&str, usize> = functionals
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), i))
            .collect();

        let mut edges = Vec::with_capacity(provides.len());
        for (sid, fid) in provides {
            let s = *structor_index
                .get(sid.as_str())
                .ok_or_else(|| ModelError::UnknownStructor(sid.clone()))?;
            let f = *functional_index
                .get(fid.as_str())
                .ok_or_else(|| ModelError::UnknownFunctional(fid.clone()))?;
            let edge = Edge {
                structor: s,
                functional: f,
            };
            if edges.contains(&edge) {
                return Err(ModelError::DuplicateEdge(sid.clone(), fid.clone()));
            }
            edges.push(edge);
        }

        let mut seq = Vec::with_capacity(sequence.len());
        for sid in sequence {
            let s = *structor_index
                .get(sid.as_str())
                .ok_or_else(|| ModelError::UnknownSequenceEntry(sid.clone()))?;
            seq.push(s);
        }

        Ok(SystemDesign {
            name: name.into(),
            structors,
            functionals,
            edges,
            sequence: seq,
        })
    }

    /// Builds a synthetic design named `design`, with structors
    /// `S1..=S{s_count}`, functionals `F1..=F{f_count}`, and edges given as
    /// `(structor ordinal, functional ordinal)` pairs. Panics on
    /// out-of-range ordinals or repeated edges; meant for generated
    /// workloads and tests, not user input.
    pub fn synthetic(s_count: usize, f_count: usize, edges: &[(usize, usize)]) -> SystemDesign {
        let structors: Vec<Entity> = (1..=s_count)
            .map(|i| Entity::new(format!("S{i}"), format!("S{i}")))
            .collect();
        let functionals: Vec<Entity> = (1..=f_count)
            .map(|i| Entity::new(format!("F{i}"), format!("F{i}")))
            .collect();
        let provides: Vec<(String, String)> = edges
            .iter()
            .map(|&(s, f)| (format!("S{}", s + 1), format!("F{}", f + 1)))
            .collect();
        SystemDesign::new("design", structors, functionals, &provides, &[])
            .expect("synthetic designs use well-formed ids")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Same design under a different name (reports use the input file stem).
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn structors(&self) -> &[Entity] {
        &self.structors
    }

    pub fn functionals(&self) -> &[Entity] {
        &self.functionals
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Structor ids in execution order; empty for non-circuit designs.
    pub fn sequence_ids(&self) -> Vec<&str> {
        self.sequence
            .iter()
            .map(|&s| self.structors[s].id.as_str())
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.structors.len() + self.functionals.len()
    }

    pub fn vertex_order(&self) -> VertexOrder {
        VertexOrder::new(&self.functionals, &self.structors)
    }

    /// Vertex index of structor ordinal `s`.
    pub fn structor_vertex(&self, s: usize) -> usize {
        self.functionals.len() + s
    }

    /// Vertex index of functional ordinal `f` (the identity, spelled out).
    pub fn functional_vertex(&self, f: usize) -> usize {
        f
    }

    /// Edges as vertex-index pairs `(functional vertex, structor vertex)`,
    /// in declaration order.
    pub fn edge_vertices(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|e| (e.functional, self.structor_vertex(e.structor)))
            .collect()
    }

    /// Per-vertex degree in vertex-index order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count()];
        for (u, v) in self.edge_vertices() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Vertices with no incident edge, ascending.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d == 0)
            .map(|(v, _)| v)
            .collect()
    }

    /// Ground-truth module structure: connected components of the design
    /// graph. Every other decomposition method is checked against this one.
    pub fn connected_components(&self) -> VertexPartition {
        let mut ds = DisjointSet::new(self.vertex_count());
        for (u, v) in self.edge_vertices() {
            ds.union(u, v);
        }
        VertexPartition::new(self.vertex_count(), ds.groups(), PartitionMethod::Oracle)
    }

    /// Functionals provided by two or more structors, the design analogue of
    /// inheritance or interface reuse. Ordered by functional declaration.
    pub fn infer_inheritance(&self) -> Vec<InheritanceFinding> {
        let mut providers: Vec<Vec<usize>> = vec![Vec::new(); self.functionals.len()];
        for e in &self.edges {
            providers[e.functional].push(e.structor);
        }
        let mut findings = Vec::new();
        for (f, mut ps) in providers.into_iter().enumerate() {
            if ps.len() < 2 {
                continue;
            }
            ps.sort_unstable();
            findings.push(InheritanceFinding {
                functional: self.functionals[f].id.clone(),
                providers: ps
                    .into_iter()
                    .map(|s| self.structors[s].id.clone())
                    .collect(),
            });
        }
        findings
    }
}

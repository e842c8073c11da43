//! Graph presentations of right-angled Artin/Coxeter groups.
//!
//! A presentation is a finite simple graph whose vertices carry a cyclic
//! order (2 or infinite). Adjacent vertices commute. The position of a vertex
//! in the vertex sequence fixes the generator order used by every canonical
//! form downstream.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not a vertex")]
    UnknownEndpoint(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("standard graph needs at least one vertex")]
    EmptyStandardGraph,
}

/// Cyclic order of a vertex generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexOrder {
    Two,
    Infinite,
}

impl Serialize for VertexOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            VertexOrder::Two => s.serialize_u64(2),
            VertexOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for VertexOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(2) => Ok(VertexOrder::Two),
            Raw::Str(s) if s == "inf" => Ok(VertexOrder::Infinite),
            Raw::Num(n) => Err(serde::de::Error::custom(format!(
                "unsupported vertex order {n} (expected 2 or \"inf\")"
            ))),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "unsupported vertex order \"{s}\" (expected 2 or \"inf\")"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub name: String,
    pub order: VertexOrder,
}

impl VertexSpec {
    pub fn new(name: impl Into<String>, order: VertexOrder) -> Self {
        VertexSpec {
            name: name.into(),
            order,
        }
    }
}

/// Unvalidated presentation; this is also the on-disk graph file layout.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawPresentation {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

/// Position of a vertex in its presentation's vertex sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A validated graph presentation. Immutable once built.
#[derive(Debug, Clone)]
pub struct GraphPresentation {
    vertices: Vec<VertexSpec>,
    edges: BTreeSet<(u32, u32)>,
    by_name: HashMap<String, VertexId>,
    adjacent: Vec<Vec<bool>>,
    // for each vertex, the other vertices it does not commute with
    blockers: Vec<Vec<usize>>,
}

impl PartialEq for GraphPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for GraphPresentation {}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks every presentation invariant and builds the indexed form.
pub fn validate(raw: &RawPresentation) -> Result<GraphPresentation, PresentationError> {
    let mut by_name = HashMap::with_capacity(raw.vertices.len());
    for (i, v) in raw.vertices.iter().enumerate() {
        if !is_identifier(&v.name) {
            return Err(PresentationError::InvalidName(v.name.clone()));
        }
        if by_name.insert(v.name.clone(), VertexId(i as u32)).is_some() {
            return Err(PresentationError::DuplicateVertex(v.name.clone()));
        }
    }

    let n = raw.vertices.len();
    let mut edges = BTreeSet::new();
    let mut adjacent = vec![vec![false; n]; n];
    for [u, v] in &raw.edges {
        let iu = *by_name
            .get(u)
            .ok_or_else(|| PresentationError::UnknownEndpoint(u.clone()))?;
        let iv = *by_name
            .get(v)
            .ok_or_else(|| PresentationError::UnknownEndpoint(v.clone()))?;
        if iu == iv {
            return Err(PresentationError::SelfLoop(u.clone()));
        }
        edges.insert((iu.0.min(iv.0), iu.0.max(iv.0)));
        adjacent[iu.index()][iv.index()] = true;
        adjacent[iv.index()][iu.index()] = true;
    }

    let blockers = (0..n)
        .map(|v| (0..n).filter(|&u| u != v && !adjacent[v][u]).collect())
        .collect();

    Ok(GraphPresentation {
        vertices: raw.vertices.clone(),
        edges,
        by_name,
        adjacent,
        blockers,
    })
}

impl GraphPresentation {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, PresentationError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| PresentationError::UnknownVertex(name.to_string()))
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()].name
    }

    pub fn order(&self, v: VertexId) -> VertexOrder {
        self.vertices[v.index()].order
    }

    /// Edges as pairs of vertex ids, smaller id first, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().map(|&(u, v)| (VertexId(u), VertexId(v)))
    }

    /// True iff `u` and `v` are distinct adjacent vertices.
    pub fn commutes_ids(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacent[u.index()][v.index()]
    }

    pub fn commutes(&self, u: &str, v: &str) -> Result<bool, PresentationError> {
        Ok(self.commutes_ids(self.vertex(u)?, self.vertex(v)?))
    }

    /// Vertices other than `v` that do not commute with `v`.
    pub(crate) fn blockers(&self, v: usize) -> &[usize] {
        &self.blockers[v]
    }

    /// True iff every vertex has infinite order (a right-angled Artin group).
    pub fn is_torsion_free(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.order == VertexOrder::Infinite)
    }

    pub fn to_raw(&self) -> RawPresentation {
        RawPresentation {
            vertices: self.vertices.clone(),
            edges: self
                .edges()
                .map(|(u, v)| [self.name(u).to_string(), self.name(v).to_string()])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// Edgeless graph: free group.
    Free,
    /// Complete graph: free abelian group.
    Abelian,
    /// Complete graph of involutions; `n = 2` is the Klein four-group.
    CoxeterComplete,
    /// Path graph `v0 - v1 - ... - v(n-1)`.
    Path,
}

/// Vertex names for standard graphs: `a`..`z`, then `v0`, `v1`, ... past 26.
fn standard_name(i: usize, n: usize) -> String {
    if n <= 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

pub fn standard_graph(
    kind: StandardKind,
    n: usize,
) -> Result<GraphPresentation, PresentationError> {
    if n == 0 {
        return Err(PresentationError::EmptyStandardGraph);
    }
    let order = match kind {
        StandardKind::CoxeterComplete => VertexOrder::Two,
        _ => VertexOrder::Infinite,
    };
    let names: Vec<String> = (0..n).map(|i| standard_name(i, n)).collect();
    let vertices = names
        .iter()
        .map(|name| VertexSpec::new(name.clone(), order))
        .collect();
    let edges = match kind {
        StandardKind::Free => Vec::new(),
        StandardKind::Abelian | StandardKind::CoxeterComplete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| [names[i].clone(), names[j].clone()])
            .collect(),
        StandardKind::Path => (1..n)
            .map(|i| [names[i - 1].clone(), names[i].clone()])
            .collect(),
    };
    validate(&RawPresentation { vertices, edges })
}

impl fmt::Display for GraphPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| match v.order {
                VertexOrder::Two => format!("{}:2", v.name),
                VertexOrder::Infinite => v.name.clone(),
            })
            .collect();
        let es: Vec<String> = self
            .edges()
            .map(|(u, v)| format!("{}-{}", self.name(u), self.name(v)))
            .collect();
        write!(f, "[{}] {{{}}}", vs.join(" "), es.join(" "))
    }
}

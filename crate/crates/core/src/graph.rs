//! Immutable simple undirected graphs with printable vertex labels.
//!
//! Every operation returns a new [`Graph`]; nothing mutates its input.
//! Copies produced by constructions use derived labels of the form
//! `base#i`, and an optional provenance map records which construction
//! role produced each vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque printable vertex token. No whitespace, never empty, never starts
/// with `#` (that introduces a comment in the edge-list format).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexLabel(String);

impl VertexLabel {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.is_empty() || s.starts_with('#') || s.chars().any(|c| c.is_whitespace() || c == '"') {
            return Err(Error::InvalidLabel(s));
        }
        Ok(VertexLabel(s))
    }

    /// Label of the `i`-th copy of this vertex: `base#i`.
    pub fn copy(&self, i: usize) -> Self {
        VertexLabel(format!("{}#{}", self.0, i))
    }

    /// Label for a vertex minted by a construction, `prefix#tail`.
    pub(crate) fn derived(prefix: &str, tail: impl fmt::Display) -> Self {
        VertexLabel(format!("{prefix}#{tail}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_derived(&self) -> bool {
        self.0.contains('#')
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for VertexLabel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        VertexLabel::new(s)
    }
}

impl TryFrom<&str> for VertexLabel {
    type Error = Error;

    fn try_from(s: &str) -> Result<Self> {
        VertexLabel::new(s)
    }
}

impl From<VertexLabel> for String {
    fn from(v: VertexLabel) -> String {
        v.0
    }
}

/// Unordered pair of distinct labels, stored with the smaller label first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(VertexLabel, VertexLabel);

impl Edge {
    pub fn new(a: VertexLabel, b: VertexLabel) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Edge::new(VertexLabel::new(a)?, VertexLabel::new(b)?)
    }

    pub fn endpoints(&self) -> (&VertexLabel, &VertexLabel) {
        (&self.0, &self.1)
    }

    pub fn contains(&self, v: &VertexLabel) -> bool {
        &self.0 == v || &self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A set of edges, meant to be interpreted inside some host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.0.insert(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.0.iter()
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl IntoIterator for EdgeSet {
    type Item = Edge;
    type IntoIter = std::collections::btree_set::IntoIter<Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Which construction step produced a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum Origin {
    /// Plain copy `index` of a vertex of a source graph.
    Copy { of: VertexLabel, index: usize },
    /// The single copy of a branch vertex inside a gadget.
    Branch { of: VertexLabel },
    /// Interior (or pendant tip) vertex on copy `copy` of segment `segment`.
    PathInternal {
        segment: usize,
        copy: usize,
        position: usize,
    },
    /// Vertex of the supplied counterexample graph A*.
    Astar { of: VertexLabel },
}

impl Origin {
    pub fn is_astar(&self) -> bool {
        matches!(self, Origin::Astar { .. })
    }

    /// The source vertex this one stands in for, if any.
    pub fn source(&self) -> Option<&VertexLabel> {
        match self {
            Origin::Copy { of, .. } | Origin::Branch { of } | Origin::Astar { of } => Some(of),
            Origin::PathInternal { .. } => None,
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Copy { of, index } => write!(f, "copy({of},{index})"),
            Origin::Branch { of } => write!(f, "branch-copy({of})"),
            Origin::PathInternal {
                segment,
                copy,
                position,
            } => write!(f, "path-internal(s{segment},c{copy},p{position})"),
            Origin::Astar { of } => write!(f, "astar({of})"),
        }
    }
}

/// Finite simple undirected graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
    provenance: Option<BTreeMap<VertexLabel, Origin>>,
}

#[derive(Debug, Default)]
pub struct GraphBuilder {
    graph: Graph,
    origins: BTreeMap<VertexLabel, Origin>,
}

impl GraphBuilder {
    pub fn add_vertex(&mut self, v: VertexLabel) -> Result<&mut Self> {
        if self.graph.adj.contains_key(&v) {
            return Err(Error::DuplicateVertex(v));
        }
        self.graph.adj.insert(v, BTreeSet::new());
        Ok(self)
    }

    /// Adds `v` unless it is already present.
    pub fn ensure_vertex(&mut self, v: VertexLabel) -> &mut Self {
        self.graph.adj.entry(v).or_default();
        self
    }

    pub fn add_edge(&mut self, a: VertexLabel, b: VertexLabel) -> Result<&mut Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        for v in [&a, &b] {
            if !self.graph.adj.contains_key(v) {
                return Err(Error::MissingVertex(v.clone()));
            }
        }
        if !self.graph.adj.get_mut(&a).unwrap().insert(b.clone()) {
            return Err(Error::DuplicateEdge(a, b));
        }
        self.graph.adj.get_mut(&b).unwrap().insert(a);
        Ok(self)
    }

    pub fn set_origin(&mut self, v: VertexLabel, origin: Origin) -> &mut Self {
        self.origins.insert(v, origin);
        self
    }

    pub fn contains(&self, v: &VertexLabel) -> bool {
        self.graph.adj.contains_key(v)
    }

    pub fn build(self) -> Result<Graph> {
        let GraphBuilder { graph, origins } = self;
        if origins.is_empty() {
            Ok(graph)
        } else {
            graph.with_provenance(origins)
        }
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Graph on the given vertices and edges; edge endpoints must be listed.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexLabel>,
        edges: impl IntoIterator<Item = (VertexLabel, VertexLabel)>,
    ) -> Result<Graph> {
        let mut b = Graph::builder();
        for v in vertices {
            b.add_vertex(v)?;
        }
        for (x, y) in edges {
            b.add_edge(x, y)?;
        }
        b.build()
    }

    /// Convenience constructor: vertices are the edge endpoints.
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Graph> {
        let mut b = Graph::builder();
        for (x, y) in edges {
            let (x, y) = (VertexLabel::new(x)?, VertexLabel::new(y)?);
            b.ensure_vertex(x.clone()).ensure_vertex(y.clone());
            b.add_edge(x, y)?;
        }
        b.build()
    }

    /// Attaches a provenance map, which must cover every vertex exactly once.
    pub fn with_provenance(mut self, origins: BTreeMap<VertexLabel, Origin>) -> Result<Graph> {
        if origins.len() != self.adj.len() || origins.keys().any(|v| !self.adj.contains_key(v)) {
            return Err(Error::Precondition(
                "provenance must cover every vertex exactly once".into(),
            ));
        }
        self.provenance = Some(origins);
        Ok(self)
    }

    pub fn without_provenance(mut self) -> Graph {
        self.provenance = None;
        self
    }

    pub fn provenance(&self) -> Option<&BTreeMap<VertexLabel, Origin>> {
        self.provenance.as_ref()
    }

    pub fn origin(&self, v: &VertexLabel) -> Option<&Origin> {
        self.provenance.as_ref().and_then(|p| p.get(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexLabel> {
        self.adj.keys()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexLabel> {
        self.adj.keys().cloned().collect()
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(u, ns)| {
            ns.range((std::ops::Bound::Excluded(u), std::ops::Bound::Unbounded))
                .map(move |v| Edge(u.clone(), v.clone()))
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    pub fn has_vertex(&self, v: &VertexLabel) -> bool {
        self.adj.contains_key(v)
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.adj.get(&e.0).is_some_and(|ns| ns.contains(&e.1))
    }

    pub fn neighbors(&self, v: &VertexLabel) -> Result<&BTreeSet<VertexLabel>> {
        self.adj.get(v).ok_or_else(|| Error::MissingVertex(v.clone()))
    }

    pub fn degree(&self, v: &VertexLabel) -> Result<usize> {
        self.neighbors(v).map(BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// `self - x`: same vertices, every edge of `x` removed.
    pub fn delete_edges(&self, x: &EdgeSet) -> Result<Graph> {
        let mut out = self.clone();
        for e in x {
            if !self.has_edge(e) {
                return Err(Error::NotAnEdge(e.0.clone(), e.1.clone()));
            }
            out.adj.get_mut(&e.0).unwrap().remove(&e.1);
            out.adj.get_mut(&e.1).unwrap().remove(&e.0);
        }
        Ok(out)
    }

    /// Subgraph induced by `keep` (labels outside the graph are ignored).
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexLabel>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(*v))
            .map(|(v, ns)| (v.clone(), ns.intersection(keep).cloned().collect()))
            .collect();
        let provenance = self.provenance.as_ref().map(|p| {
            p.iter()
                .filter(|(v, _)| keep.contains(*v))
                .map(|(v, o)| (v.clone(), o.clone()))
                .collect()
        });
        Graph { adj, provenance }
    }

    /// Subgraph formed by the given edges and their endpoints.
    pub fn edge_subgraph(&self, edges: &EdgeSet) -> Result<Graph> {
        let mut keep = BTreeSet::new();
        for e in edges {
            if !self.has_edge(e) {
                return Err(Error::NotAnEdge(e.0.clone(), e.1.clone()));
            }
            keep.insert(e.0.clone());
            keep.insert(e.1.clone());
        }
        let mut adj: BTreeMap<VertexLabel, BTreeSet<VertexLabel>> =
            keep.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for e in edges {
            adj.get_mut(&e.0).unwrap().insert(e.1.clone());
            adj.get_mut(&e.1).unwrap().insert(e.0.clone());
        }
        let provenance = self.provenance.as_ref().map(|p| {
            p.iter()
                .filter(|(v, _)| keep.contains(*v))
                .map(|(v, o)| (v.clone(), o.clone()))
                .collect()
        });
        Ok(Graph { adj, provenance })
    }

    pub fn delete_vertex(&self, v: &VertexLabel) -> Result<Graph> {
        if !self.has_vertex(v) {
            return Err(Error::MissingVertex(v.clone()));
        }
        let mut keep = self.vertex_set();
        keep.remove(v);
        Ok(self.induced_subgraph(&keep))
    }

    /// Contracts edge `keep`–`merge` into `keep`; parallel edges collapse.
    pub fn contract_edge(&self, keep: &VertexLabel, merge: &VertexLabel) -> Result<Graph> {
        let e = Edge::new(keep.clone(), merge.clone())?;
        if !self.has_edge(&e) {
            return Err(Error::NotAnEdge(e.0, e.1));
        }
        let mut out = self.delete_vertex(merge)?;
        let ns = out.adj.get_mut(keep).unwrap();
        let moved: Vec<VertexLabel> = self.adj[merge]
            .iter()
            .filter(|w| *w != keep)
            .cloned()
            .collect();
        ns.extend(moved.iter().cloned());
        for w in moved {
            out.adj.get_mut(&w).unwrap().insert(keep.clone());
        }
        Ok(out)
    }

    /// True when every vertex and edge of `self` is present in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.adj.iter().all(|(v, ns)| {
            other
                .adj
                .get(v)
                .is_some_and(|ons| ns.iter().all(|w| ons.contains(w)))
        })
    }

    /// Same vertices and edges, ignoring provenance.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.adj == other.adj
    }

    /// Renames every vertex through `f`, which must be injective.
    pub fn relabel(&self, mut f: impl FnMut(&VertexLabel) -> VertexLabel) -> Result<Graph> {
        let map: BTreeMap<&VertexLabel, VertexLabel> = self.adj.keys().map(|v| (v, f(v))).collect();
        let mut b = Graph::builder();
        for v in map.values() {
            b.add_vertex(v.clone())?;
        }
        for e in self.edges() {
            b.add_edge(map[&e.0].clone(), map[&e.1].clone())?;
        }
        let mut g = b.build()?;
        if let Some(p) = &self.provenance {
            g.provenance = Some(p.iter().map(|(v, o)| (map[v].clone(), o.clone())).collect());
        }
        Ok(g)
    }
}

/// A union together with where each part's vertices ended up.
#[derive(Clone, Debug)]
pub struct UnionMap {
    pub graph: Graph,
    /// `parts[i][v]` = label in `graph` of vertex `v` of part `i`.
    pub parts: Vec<BTreeMap<VertexLabel, VertexLabel>>,
}

/// Disjoint union of `parts` after relabelling vertex `v` of part `i` to
/// `v#i`, followed by merging each group in `identify` (labels refer to the
/// relabelled union) into one vertex. Overlapping groups merge transitively.
/// The merged vertex keeps the label and provenance of its member from the
/// lowest-indexed part. Parallel edges and loops created by merging are
/// dropped with a warning.
pub fn disjoint_union_with_identifications(
    parts: &[Graph],
    identify: &[Vec<VertexLabel>],
) -> Result<Graph> {
    union_with_map(parts, identify).map(|u| u.graph)
}

pub fn union_with_map(parts: &[Graph], identify: &[Vec<VertexLabel>]) -> Result<UnionMap> {
    // relabelled vertex -> (part, original)
    let mut slots: Vec<(usize, VertexLabel, VertexLabel)> = Vec::new();
    let mut index: BTreeMap<VertexLabel, usize> = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for v in part.vertices() {
            let lbl = v.copy(i);
            index.insert(lbl.clone(), slots.len());
            slots.push((i, v.clone(), lbl));
        }
    }

    let mut parent: Vec<usize> = (0..slots.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for group in identify {
        let mut members = Vec::with_capacity(group.len());
        for v in group {
            members.push(*index.get(v).ok_or_else(|| Error::MissingVertex(v.clone()))?);
        }
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            // smaller slot index = lower part, then smaller label
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }

    let rep_label: Vec<VertexLabel> = (0..slots.len())
        .map(|x| slots[find(&mut parent, x)].2.clone())
        .collect();
    let any_provenance = parts.iter().any(|p| p.provenance.is_some());

    let mut b = Graph::builder();
    let mut origins = BTreeMap::new();
    for (x, (part, orig, lbl)) in slots.iter().enumerate() {
        if &rep_label[x] == lbl {
            b.add_vertex(lbl.clone())?;
            if any_provenance {
                let o = parts[*part].origin(orig).cloned().unwrap_or(Origin::Copy {
                    of: orig.clone(),
                    index: *part,
                });
                origins.insert(lbl.clone(), o);
            }
        }
    }
    let mut part_maps: Vec<BTreeMap<VertexLabel, VertexLabel>> = vec![BTreeMap::new(); parts.len()];
    for (x, (part, orig, _)) in slots.iter().enumerate() {
        part_maps[*part].insert(orig.clone(), rep_label[x].clone());
    }
    for (i, part) in parts.iter().enumerate() {
        for e in part.edges() {
            let (a, c) = (&part_maps[i][&e.0], &part_maps[i][&e.1]);
            if a == c {
                warn!("identification turned edge {e} of part {i} into a loop; dropped");
                continue;
            }
            match b.add_edge(a.clone(), c.clone()) {
                Ok(_) => {}
                Err(Error::DuplicateEdge(..)) => {
                    warn!("identification made edge {a}-{c} parallel; collapsed");
                }
                Err(err) => return Err(err),
            }
        }
    }
    let mut graph = b.build()?;
    if any_provenance {
        graph = graph.with_provenance(origins)?;
    }
    Ok(UnionMap {
        graph,
        parts: part_maps,
    })
}

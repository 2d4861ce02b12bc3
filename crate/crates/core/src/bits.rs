//! Dense index form of a [`Graph`] for the search code: vertices become
//! `0..n` in label order and vertex/edge sets become `u128` masks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexLabel};

pub(crate) type Mask = u128;

pub const MAX_VERTICES: usize = 128;
pub const MAX_EDGES: usize = 128;

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u128 << i
}

#[inline]
pub(crate) fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

pub(crate) fn ones(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn full(n: usize) -> Mask {
    if n == 128 {
        !0
    } else {
        bit(n) - 1
    }
}

/// Union of the neighbourhoods of the vertices in `set`.
#[inline]
pub(crate) fn neighborhood(adj: &[Mask], set: Mask) -> Mask {
    ones(set).fold(0, |acc, v| acc | adj[v])
}

/// Vertices reachable from `start` inside `within` (start must lie in it).
pub(crate) fn component(adj: &[Mask], within: Mask, start: usize) -> Mask {
    let mut seen = bit(start);
    let mut frontier = seen;
    while frontier != 0 {
        let next = neighborhood(adj, frontier) & within & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

#[derive(Clone, Debug)]
pub(crate) struct Indexed {
    pub labels: Vec<VertexLabel>,
    pub index: BTreeMap<VertexLabel, usize>,
    pub adj: Vec<Mask>,
    /// `(u, v)` with `u < v`, in label order.
    pub edges: Vec<(usize, usize)>,
}

impl Indexed {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.vertex_count() > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "graph vertex set",
                actual: g.vertex_count(),
                limit: MAX_VERTICES,
            });
        }
        let labels: Vec<VertexLabel> = g.vertices().cloned().collect();
        let index: BTreeMap<VertexLabel, usize> =
            labels.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut adj = vec![0; labels.len()];
        let mut edges = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            let (a, b) = e.endpoints();
            let (i, j) = (index[a], index[b]);
            adj[i] |= bit(j);
            adj[j] |= bit(i);
            edges.push((i.min(j), i.max(j)));
        }
        Ok(Indexed {
            labels,
            index,
            adj,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn require_edge_masks(&self) -> Result<()> {
        if self.edges.len() > MAX_EDGES {
            return Err(Error::TooLarge {
                what: "graph edge set",
                actual: self.edges.len(),
                limit: MAX_EDGES,
            });
        }
        Ok(())
    }

    pub fn all_edges(&self) -> Mask {
        full(self.edges.len())
    }

    /// Adjacency of the spanning subgraph keeping the edges in `keep`.
    pub fn adjacency_of(&self, keep: Mask) -> Vec<Mask> {
        let mut adj = vec![0; self.n()];
        for e in ones(keep) {
            let (a, b) = self.edges[e];
            adj[a] |= bit(b);
            adj[b] |= bit(a);
        }
        adj
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    pub fn mask_of(&self, vs: impl IntoIterator<Item = impl std::borrow::Borrow<VertexLabel>>) -> Result<Mask> {
        let mut m = 0;
        for v in vs {
            let v = v.borrow();
            m |= bit(*self.index.get(v).ok_or_else(|| Error::MissingVertex(v.clone()))?);
        }
        Ok(m)
    }

    pub fn labels_of(&self, m: Mask) -> impl Iterator<Item = &VertexLabel> {
        ones(m).map(move |i| &self.labels[i])
    }

    pub fn edge(&self, e: usize) -> Edge {
        let (a, b) = self.edges[e];
        Edge::new(self.labels[a].clone(), self.labels[b].clone()).expect("simple graph")
    }

    pub fn edge_set_of(&self, m: Mask) -> EdgeSet {
        ones(m).map(|e| self.edge(e)).collect()
    }
}

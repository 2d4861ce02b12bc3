//! Expansion (minor model) search.
//!
//! An `h`-expansion in `g` is a family of disjoint connected branch sets,
//! one per vertex of `h`, together with a distinct `g`-edge between the
//! branch sets of every edge of `h`. [`find_expansion`] is an exhaustive
//! backtracking search with a node budget; [`naive_is_minor_oracle`] is an
//! independent brute-force check used to cross-validate it.

mod minimal;
mod oracle;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bits::{self, Indexed, Mask};
use crate::decomposition::connected_components;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexLabel};

pub use minimal::{enumerate_minimal_expansions, MinimalExpansions};
pub(crate) use minimal::{enumerate_masks, Meter};
pub use oracle::{naive_is_minor_oracle, NAIVE_ORACLE_MAX_VERTICES};
pub(crate) use search::{solve, Problem, Verdict};

/// Budget value meaning "search until the space is exhausted".
pub const UNBOUNDED: u64 = u64::MAX;

/// Size guard for [`is_minor`]; larger instances need [`is_minor_unguarded`].
pub const IS_MINOR_MAX_HOST_VERTICES: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeImage {
    pub pattern: Edge,
    pub image: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorEmbedding {
    pub branch_sets: BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
    /// One image per pattern edge, sorted by pattern edge.
    pub edge_map: Vec<EdgeImage>,
}

impl MinorEmbedding {
    /// Host edges used by the model: the edge images plus the host edges
    /// inside each branch set.
    pub fn used_edges(&self, g: &Graph) -> BTreeSet<Edge> {
        let mut out: BTreeSet<Edge> = self.edge_map.iter().map(|e| e.image.clone()).collect();
        for set in self.branch_sets.values() {
            for e in g.induced_subgraph(set).edges() {
                out.insert(e);
            }
        }
        out
    }

    pub fn vertices(&self) -> BTreeSet<VertexLabel> {
        self.branch_sets.values().flatten().cloned().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingConstraints {
    /// Branch set of the key must contain the value.
    #[serde(default)]
    pub must_contain: BTreeMap<VertexLabel, VertexLabel>,
    /// Branch set of the key must stay inside the value.
    #[serde(default)]
    pub allowed_region: BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
    /// Branch set of the key must avoid the value.
    #[serde(default)]
    pub forbidden_region: BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
}

impl EmbeddingConstraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn rooted(roots: BTreeMap<VertexLabel, VertexLabel>) -> Self {
        EmbeddingConstraints {
            must_contain: roots,
            ..Self::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.must_contain.is_empty() && self.allowed_region.is_empty() && self.forbidden_region.is_empty()
    }

    pub fn validate(&self, h: &Graph, g: &Graph) -> Result<()> {
        for (u, x) in &self.must_contain {
            for (v, host) in [(u, h), (x, g)] {
                if !host.has_vertex(v) {
                    return Err(Error::MissingVertex(v.clone()));
                }
            }
        }
        for (u, region) in self.allowed_region.iter().chain(&self.forbidden_region) {
            if !h.has_vertex(u) {
                return Err(Error::MissingVertex(u.clone()));
            }
            if let Some(x) = region.iter().find(|x| !g.has_vertex(x)) {
                return Err(Error::MissingVertex(x.clone()));
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, m: &MinorEmbedding) -> bool {
        let set = |u: &VertexLabel| m.branch_sets.get(u);
        self.must_contain
            .iter()
            .all(|(u, x)| set(u).is_some_and(|s| s.contains(x)))
            && self
                .allowed_region
                .iter()
                .all(|(u, r)| set(u).is_some_and(|s| s.is_subset(r)))
            && self
                .forbidden_region
                .iter()
                .all(|(u, r)| set(u).is_some_and(|s| s.is_disjoint(r)))
    }
}

/// Outcome of a single expansion search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "embedding", rename_all = "kebab-case")]
pub enum Expansion {
    Found(MinorEmbedding),
    /// The search space was exhausted without success.
    None,
    BudgetExhausted,
}

impl Expansion {
    pub fn is_found(&self) -> bool {
        matches!(self, Expansion::Found(_))
    }

    pub fn embedding(&self) -> Option<&MinorEmbedding> {
        match self {
            Expansion::Found(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub result: Expansion,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// Checks every model invariant directly on the labelled graphs.
pub fn verify_embedding(h: &Graph, g: &Graph, m: &MinorEmbedding) -> bool {
    let keys: BTreeSet<&VertexLabel> = m.branch_sets.keys().collect();
    if keys != h.vertices().collect() {
        return false;
    }
    let mut seen: BTreeSet<&VertexLabel> = BTreeSet::new();
    for set in m.branch_sets.values() {
        if set.is_empty() || set.iter().any(|x| !g.has_vertex(x) || !seen.insert(x)) {
            return false;
        }
        let sub = g.induced_subgraph(set);
        if connected_components(&sub).len() != 1 {
            return false;
        }
    }
    let h_edges: BTreeSet<Edge> = h.edges().collect();
    let mapped: BTreeSet<&Edge> = m.edge_map.iter().map(|e| &e.pattern).collect();
    if mapped.len() != m.edge_map.len() || mapped.len() != h_edges.len() || !mapped.iter().all(|e| h_edges.contains(*e)) {
        return false;
    }
    let images: BTreeSet<&Edge> = m.edge_map.iter().map(|e| &e.image).collect();
    if images.len() != m.edge_map.len() {
        return false;
    }
    m.edge_map.iter().all(|EdgeImage { pattern, image }| {
        let (u, v) = pattern.endpoints();
        let (x, y) = image.endpoints();
        let (bu, bv) = (&m.branch_sets[u], &m.branch_sets[v]);
        g.has_edge(image) && ((bu.contains(x) && bv.contains(y)) || (bu.contains(y) && bv.contains(x)))
    })
}

/// Pattern adjacency lists and the host in index form, shared by every
/// search over the same `(h, g)` pair.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub h: Indexed,
    pub g: Indexed,
    pub pattern: Vec<Vec<usize>>,
    pub allowed: Vec<Mask>,
    pub roots: Vec<Option<usize>>,
}

impl Instance {
    pub fn new(h: &Graph, g: &Graph, c: &EmbeddingConstraints) -> Result<Self> {
        c.validate(h, g)?;
        let hi = Indexed::new(h)?;
        let gi = Indexed::new(g)?;
        let pattern = hi.adj.iter().map(|&m| bits::ones(m).collect()).collect();
        let everything = bits::full(gi.n());
        let mut allowed = vec![everything; hi.n()];
        let mut roots = vec![None; hi.n()];
        for (u, region) in &c.allowed_region {
            allowed[hi.index[u]] &= gi.mask_of(region)?;
        }
        for (u, region) in &c.forbidden_region {
            allowed[hi.index[u]] &= !gi.mask_of(region)?;
        }
        for (u, x) in &c.must_contain {
            roots[hi.index[u]] = Some(gi.index[x]);
        }
        Ok(Instance {
            h: hi,
            g: gi,
            pattern,
            allowed,
            roots,
        })
    }

    /// Runs the search on the spanning subgraph of the host given by
    /// `host_adj` (normally `self.g.adj`).
    pub fn run(&self, host_adj: &[Mask], budget: u64) -> (Verdict, u64) {
        let p = Problem {
            pattern: &self.pattern,
            host: host_adj,
            allowed: &self.allowed,
            roots: &self.roots,
        };
        solve(&p, budget)
    }

    /// Host edges (as an edge mask) used by the model with these branch sets.
    pub fn model_edges(&self, host_adj: &[Mask], sets: &[Mask]) -> Mask {
        let mut used = 0;
        for (id, &(a, b)) in self.g.edges.iter().enumerate() {
            if host_adj[a] & bits::bit(b) == 0 {
                continue;
            }
            let owner = |x: usize| sets.iter().position(|&s| s & bits::bit(x) != 0);
            match (owner(a), owner(b)) {
                (Some(p), Some(q)) if p == q => used |= bits::bit(id),
                _ => {}
            }
        }
        for (p, q) in self.pattern_edges() {
            used |= bits::bit(self.image_edge(host_adj, sets[p], sets[q]));
        }
        used
    }

    fn pattern_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pattern
            .iter()
            .enumerate()
            .flat_map(|(p, ns)| ns.iter().filter(move |&&q| q > p).map(move |&q| (p, q)))
    }

    /// Smallest host edge joining the two sets.
    fn image_edge(&self, host_adj: &[Mask], a: Mask, b: Mask) -> usize {
        self.g
            .edges
            .iter()
            .position(|&(x, y)| {
                host_adj[x] & bits::bit(y) != 0
                    && ((a & bits::bit(x) != 0 && b & bits::bit(y) != 0)
                        || (a & bits::bit(y) != 0 && b & bits::bit(x) != 0))
            })
            .expect("search only returns models with every pattern edge realised")
    }

    pub fn embedding(&self, host_adj: &[Mask], sets: &[Mask]) -> MinorEmbedding {
        let branch_sets = sets
            .iter()
            .enumerate()
            .map(|(p, &s)| (self.h.labels[p].clone(), self.g.labels_of(s).cloned().collect()))
            .collect();
        let mut edge_map: Vec<EdgeImage> = self
            .pattern_edges()
            .map(|(p, q)| EdgeImage {
                pattern: self.h.edge(self.h.edge_id(p, q).unwrap()),
                image: self.g.edge(self.image_edge(host_adj, sets[p], sets[q])),
            })
            .collect();
        edge_map.sort_by(|x, y| x.pattern.cmp(&y.pattern));
        MinorEmbedding {
            branch_sets,
            edge_map,
        }
    }
}

/// Searches for an `h`-expansion in `g` satisfying `c`, expanding at most
/// `budget` search nodes. `Expansion::None` is only returned after the
/// whole search space has been exhausted.
pub fn find_expansion(h: &Graph, g: &Graph, c: &EmbeddingConstraints, budget: u64) -> Result<SearchOutcome> {
    let inst = Instance::new(h, g, c)?;
    let (verdict, nodes) = inst.run(&inst.g.adj, budget);
    let result = match verdict {
        Verdict::Found(sets) => Expansion::Found(inst.embedding(&inst.g.adj, &sets)),
        Verdict::Absent => Expansion::None,
        Verdict::OutOfBudget => Expansion::BudgetExhausted,
    };
    Ok(SearchOutcome { result, nodes })
}

/// Exact minor test for desk-scale instances (`|V(g)|` at most
/// [`IS_MINOR_MAX_HOST_VERTICES`]).
pub fn is_minor(h: &Graph, g: &Graph) -> Result<bool> {
    if g.vertex_count() > IS_MINOR_MAX_HOST_VERTICES {
        return Err(Error::TooLarge {
            what: "host graph for exhaustive minor test",
            actual: g.vertex_count(),
            limit: IS_MINOR_MAX_HOST_VERTICES,
        });
    }
    is_minor_unguarded(h, g)
}

/// [`is_minor`] without the size guard; may take exponential time.
pub fn is_minor_unguarded(h: &Graph, g: &Graph) -> Result<bool> {
    let out = find_expansion(h, g, &EmbeddingConstraints::none(), UNBOUNDED)?;
    Ok(out.result.is_found())
}

/// Splits the components of `h` other than `a` into those that do not
/// contain `a` as a minor and those that do.
pub fn partition_components(h: &Graph, a: &Graph) -> Result<(Vec<Graph>, Vec<Graph>)> {
    let comps = connected_components(h);
    let pos = comps
        .iter()
        .position(|c| c.same_structure(a))
        .ok_or_else(|| Error::Precondition("a is not a component of h".into()))?;
    let mut without = Vec::new();
    let mut with = Vec::new();
    for (i, c) in comps.into_iter().enumerate() {
        if i == pos {
            continue;
        }
        if is_minor(a, &c)? {
            with.push(c);
        } else {
            without.push(c);
        }
    }
    Ok((without, with))
}

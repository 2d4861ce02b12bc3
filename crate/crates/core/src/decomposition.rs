//! Components, block-cut trees, branch vertices and segments.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph, VertexLabel};
use crate::minor::is_minor;

/// Connected components as induced subgraphs, ordered by smallest label.
pub fn connected_components(g: &Graph) -> Vec<Graph> {
    let mut seen: BTreeSet<&VertexLabel> = BTreeSet::new();
    let mut out = Vec::new();
    for start in g.vertices() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            comp.insert(v.clone());
            for w in g.neighbors(v).expect("vertex of g") {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        out.push(g.induced_subgraph(&comp));
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: BTreeSet<VertexLabel>,
    pub edges: EdgeSet,
    /// A single edge (K2).
    pub trivial: bool,
}

impl Block {
    pub fn graph(&self) -> Graph {
        let mut b = Graph::builder();
        for v in &self.vertices {
            b.ensure_vertex(v.clone());
        }
        for e in &self.edges {
            let (x, y) = e.endpoints();
            b.add_edge(x.clone(), y.clone()).expect("block edges are simple");
        }
        b.build().expect("no provenance")
    }

    /// Sort key used for every deterministic tie-break.
    pub fn key(&self) -> Vec<&VertexLabel> {
        self.vertices.iter().collect()
    }

    pub fn name(&self) -> String {
        let vs: Vec<&str> = self.vertices.iter().map(VertexLabel::as_str).collect();
        format!("{{{}}}", vs.join(","))
    }
}

/// Bipartite tree of blocks and cutvertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCutTree {
    /// Sorted by [`Block::key`].
    pub blocks: Vec<Block>,
    pub cutvertices: BTreeSet<VertexLabel>,
    /// `(block index, cutvertex)` incidences.
    pub adjacency: Vec<(usize, VertexLabel)>,
}

impl BlockCutTree {
    pub fn block_index(&self, b: &Block) -> Option<usize> {
        self.blocks.iter().position(|x| x == b)
    }

    pub fn blocks_at(&self, v: &VertexLabel) -> Vec<usize> {
        self.adjacency
            .iter()
            .filter(|(_, c)| c == v)
            .map(|(b, _)| *b)
            .collect()
    }

    pub fn cutvertices_of(&self, block: usize) -> Vec<&VertexLabel> {
        self.adjacency
            .iter()
            .filter(|(b, _)| *b == block)
            .map(|(_, c)| c)
            .collect()
    }
}

/// Blocks of a connected graph (Hopcroft–Tarjan with an edge stack).
pub fn block_cut_tree(g: &Graph) -> Result<BlockCutTree> {
    if g.is_empty() {
        return Err(Error::Precondition("block-cut tree of the empty graph".into()));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let labels: Vec<&VertexLabel> = g.vertices().collect();
    let index: BTreeMap<&VertexLabel, usize> = labels.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let adj: Vec<Vec<usize>> = labels
        .iter()
        .map(|v| g.neighbors(v).unwrap().iter().map(|w| index[w]).collect())
        .collect();

    struct Dfs<'a> {
        adj: &'a [Vec<usize>],
        disc: Vec<usize>,
        low: Vec<usize>,
        timer: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.timer += 1;
            self.disc[u] = self.timer;
            self.low[u] = self.timer;
            for &v in &self.adj[u] {
                if self.disc[v] == 0 {
                    self.stack.push((u, v));
                    self.visit(v, Some(u));
                    self.low[u] = self.low[u].min(self.low[v]);
                    if self.low[v] >= self.disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = self.stack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        self.blocks.push(block);
                    }
                } else if Some(v) != parent && self.disc[v] < self.disc[u] {
                    self.stack.push((u, v));
                    self.low[u] = self.low[u].min(self.disc[v]);
                }
            }
        }
    }
    let n = labels.len();
    let mut dfs = Dfs {
        adj: &adj,
        disc: vec![0; n],
        low: vec![0; n],
        timer: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    dfs.visit(0, None);

    let mut blocks: Vec<Block> = dfs
        .blocks
        .iter()
        .map(|es| {
            let edges: EdgeSet = es
                .iter()
                .map(|&(a, b)| Edge::new(labels[a].clone(), labels[b].clone()).unwrap())
                .collect();
            let vertices: BTreeSet<VertexLabel> = es
                .iter()
                .flat_map(|&(a, b)| [labels[a].clone(), labels[b].clone()])
                .collect();
            Block {
                trivial: edges.len() == 1,
                vertices,
                edges,
            }
        })
        .collect();
    if blocks.is_empty() {
        // a single vertex is its own block
        blocks.push(Block {
            vertices: g.vertex_set(),
            edges: EdgeSet::new(),
            trivial: false,
        });
    }
    blocks.sort_by(|x, y| x.key().cmp(&y.key()));

    let mut membership: BTreeMap<&VertexLabel, Vec<usize>> = BTreeMap::new();
    for (i, b) in blocks.iter().enumerate() {
        for v in &b.vertices {
            membership.entry(v).or_default().push(i);
        }
    }
    let mut cutvertices = BTreeSet::new();
    let mut adjacency = Vec::new();
    for (v, bs) in &membership {
        if bs.len() >= 2 {
            cutvertices.insert((*v).clone());
            adjacency.extend(bs.iter().map(|&b| (b, (*v).clone())));
        }
    }
    adjacency.sort();
    Ok(BlockCutTree {
        blocks,
        cutvertices,
        adjacency,
    })
}

/// Vertices of `g` with degree at least 3 in the context graph `ctx`.
pub fn branch_vertices(g: &Graph, ctx: &Graph) -> Result<BTreeSet<VertexLabel>> {
    if !g.is_subgraph_of(ctx) {
        return Err(Error::NotSubgraph);
    }
    Ok(g
        .vertices()
        .filter(|v| ctx.degree(v).unwrap() >= 3)
        .cloned()
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    /// Path between two distinct branch vertices.
    Between,
    /// Path from a branch vertex to a tip of degree 1.
    Pendant,
    /// Cycle through a single branch vertex.
    Closed,
}

/// Maximal path of `g` whose interior vertices are not branch vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    /// Branch vertex the segment was walked from.
    pub start: VertexLabel,
    /// Other branch vertex, the pendant tip, or `start` again when closed.
    pub end: VertexLabel,
    /// Interior vertices in walking order (the tip is not interior).
    pub internal: Vec<VertexLabel>,
    pub length: usize,
}

impl Segment {
    pub fn vertices(&self) -> impl Iterator<Item = &VertexLabel> {
        std::iter::once(&self.start)
            .chain(self.internal.iter())
            .chain(std::iter::once(&self.end))
    }
}

/// Splits `g` into segments relative to the branch vertices of `ctx`.
pub fn segment_decomposition(g: &Graph, ctx: &Graph) -> Result<Vec<Segment>> {
    let branch = branch_vertices(g, ctx)?;
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    if branch.is_empty() {
        return Err(Error::NoBranchVertex);
    }
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    let mut out = Vec::new();
    for b in &branch {
        for first in g.neighbors(b)? {
            let e = Edge::new(b.clone(), first.clone())?;
            if used.contains(&e) {
                continue;
            }
            used.insert(e);
            let mut internal = Vec::new();
            let (mut prev, mut cur) = (b.clone(), first.clone());
            while !branch.contains(&cur) && g.degree(&cur)? == 2 {
                let next = g
                    .neighbors(&cur)?
                    .iter()
                    .find(|w| **w != prev)
                    .expect("degree two")
                    .clone();
                used.insert(Edge::new(cur.clone(), next.clone())?);
                internal.push(cur.clone());
                prev = std::mem::replace(&mut cur, next);
            }
            let kind = if !branch.contains(&cur) {
                SegmentKind::Pendant
            } else if &cur == b {
                SegmentKind::Closed
            } else {
                SegmentKind::Between
            };
            out.push(Segment {
                kind,
                start: b.clone(),
                end: cur,
                length: internal.len() + 1,
                internal,
            });
        }
    }
    debug_assert_eq!(used.len(), g.edge_count());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MaxDegree2Class {
    Cycle,
    Path,
    IsolatedVertex,
    HasDegree3Vertex,
}

/// Classifies a connected graph: a cycle, a path, a single vertex, or one
/// with some vertex of degree at least 3.
pub fn classify_max_degree2(h: &Graph) -> Result<MaxDegree2Class> {
    if h.is_empty() {
        return Err(Error::Precondition("cannot classify the empty graph".into()));
    }
    if !is_connected(h) {
        return Err(Error::Disconnected);
    }
    Ok(if h.vertex_count() == 1 {
        MaxDegree2Class::IsolatedVertex
    } else if h.max_degree() >= 3 {
        MaxDegree2Class::HasDegree3Vertex
    } else if h.edge_count() == h.vertex_count() {
        MaxDegree2Class::Cycle
    } else {
        MaxDegree2Class::Path
    })
}

/// Hereditary property "contains `minor` as a minor".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyPredicate {
    pub name: String,
    pub minor: Graph,
}

impl PropertyPredicate {
    pub fn contains_minor(name: impl Into<String>, minor: Graph) -> Self {
        PropertyPredicate {
            name: name.into(),
            minor,
        }
    }

    pub fn holds(&self, g: &Graph) -> Result<bool> {
        is_minor(&self.minor, g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Block(usize),
    Cut(usize),
}

/// Smallest subtree of `t` containing every block in `marked` (indices into
/// `t.blocks`), returned as a restricted tree with re-indexed blocks.
pub fn minimal_subtree(t: &BlockCutTree, marked: &BTreeSet<usize>) -> Result<BlockCutTree> {
    if marked.is_empty() {
        return Err(Error::Precondition("minimal subtree needs at least one marked block".into()));
    }
    if let Some(&bad) = marked.iter().find(|&&b| b >= t.blocks.len()) {
        return Err(Error::Precondition(format!("block index {bad} out of range")));
    }
    let cuts: Vec<&VertexLabel> = t.cutvertices.iter().collect();
    let mut adj: BTreeMap<Node, BTreeSet<Node>> = BTreeMap::new();
    for b in 0..t.blocks.len() {
        adj.entry(Node::Block(b)).or_default();
    }
    for (b, c) in &t.adjacency {
        let ci = cuts.iter().position(|x| *x == c).unwrap();
        adj.entry(Node::Block(*b)).or_default().insert(Node::Cut(ci));
        adj.entry(Node::Cut(ci)).or_default().insert(Node::Block(*b));
    }
    loop {
        let leaf = adj.iter().find(|(n, ns)| {
            ns.len() <= 1 && adj.len() > 1 && !matches!(n, Node::Block(b) if marked.contains(b))
        });
        let Some((&leaf, _)) = leaf else { break };
        let ns = adj.remove(&leaf).unwrap();
        for n in ns {
            adj.get_mut(&n).unwrap().remove(&leaf);
        }
    }
    let kept_blocks: Vec<usize> = adj
        .keys()
        .filter_map(|n| match n {
            Node::Block(b) => Some(*b),
            Node::Cut(_) => None,
        })
        .collect();
    let renumber: BTreeMap<usize, usize> = kept_blocks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let cutvertices: BTreeSet<VertexLabel> = adj
        .keys()
        .filter_map(|n| match n {
            Node::Cut(c) => Some(cuts[*c].clone()),
            Node::Block(_) => None,
        })
        .collect();
    let adjacency = t
        .adjacency
        .iter()
        .filter(|(b, c)| renumber.contains_key(b) && cutvertices.contains(c))
        .map(|(b, c)| (renumber[b], c.clone()))
        .collect();
    Ok(BlockCutTree {
        blocks: kept_blocks.iter().map(|&b| t.blocks[b].clone()).collect(),
        cutvertices,
        adjacency,
    })
}

/// A leaf block of the (sub)tree; the first in label order among leaves.
pub fn choose_leaf_block(tsub: &BlockCutTree) -> Result<&Block> {
    (0..tsub.blocks.len())
        .find(|&b| tsub.cutvertices_of(b).len() <= 1)
        .map(|b| &tsub.blocks[b])
        .ok_or_else(|| Error::Precondition("empty block tree".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> VertexLabel {
        VertexLabel::new(s).unwrap()
    }

    fn g(edges: &[(&str, &str)]) -> Graph {
        Graph::from_edges(edges.iter().copied()).unwrap()
    }

    fn bowtie() -> Graph {
        g(&[("a", "b"), ("b", "v"), ("a", "v"), ("v", "c"), ("c", "d"), ("d", "v")])
    }

    /// A 4-cycle with a tail, and a context (H adds u adjacent to v).
    fn square_with_tail() -> (Graph, Graph) {
        let gg = g(&[("v", "w"), ("w", "w1"), ("v", "u1"), ("u1", "u2"), ("u2", "w")]);
        let mut es = vec![("v", "w"), ("w", "w1"), ("v", "u1"), ("u1", "u2"), ("u2", "w"), ("u", "v")];
        es.sort();
        (gg, g(&es))
    }

    #[test]
    fn components() {
        let two = g(&[("a", "b"), ("b", "c"), ("a", "c"), ("x", "y")]);
        let cs = connected_components(&two);
        assert_eq!(cs.len(), 2);
        assert_eq!((cs[0].vertex_count(), cs[1].vertex_count()), (3, 2));
        let isolated = Graph::new(["p", "q", "r"].map(l), []).unwrap();
        assert_eq!(connected_components(&isolated).len(), 3);
        assert_eq!(connected_components(&bowtie()).len(), 1);
    }

    #[test]
    fn bowtie_blocks() {
        let t = block_cut_tree(&bowtie()).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.cutvertices, [l("v")].into());
        assert_eq!(t.adjacency.len(), 2);
    }

    #[test]
    fn triangle_with_pendant_blocks() {
        let h = g(&[("s", "b"), ("b", "c"), ("s", "c"), ("s", "d")]);
        let t = block_cut_tree(&h).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.blocks.iter().filter(|b| b.trivial).count(), 1);
        assert_eq!(t.cutvertices, [l("s")].into());
    }

    #[test]
    fn disconnected_block_tree_is_an_error() {
        assert_eq!(block_cut_tree(&g(&[("a", "b"), ("c", "d")])).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn square_with_tail_branch_vertices() {
        let (gg, h) = square_with_tail();
        assert_eq!(branch_vertices(&gg, &h).unwrap(), [l("v"), l("w")].into());
        let k3 = g(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(branch_vertices(&k3, &k3).unwrap().is_empty());
        let claw = g(&[("c", "x"), ("c", "y"), ("c", "z")]);
        assert_eq!(branch_vertices(&claw, &claw).unwrap(), [l("c")].into());
        assert_eq!(branch_vertices(&h, &gg).unwrap_err(), Error::NotSubgraph);
    }

    #[test]
    fn square_with_tail_segments() {
        let (gg, h) = square_with_tail();
        let segs = segment_decomposition(&gg, &h).unwrap();
        assert_eq!(segs.len(), 3);
        let mut summary: Vec<(SegmentKind, usize)> = segs.iter().map(|s| (s.kind, s.length)).collect();
        summary.sort();
        assert_eq!(
            summary,
            vec![
                (SegmentKind::Between, 1),
                (SegmentKind::Between, 3),
                (SegmentKind::Pendant, 1)
            ]
        );
        let long = segs.iter().find(|s| s.length == 3).unwrap();
        assert_eq!(long.internal, vec![l("u1"), l("u2")]);
        let pendant = segs.iter().find(|s| s.kind == SegmentKind::Pendant).unwrap();
        assert_eq!((&pendant.start, &pendant.end), (&l("w"), &l("w1")));
    }

    #[test]
    fn claw_segments_are_pendant() {
        let claw = g(&[("c", "x"), ("c", "y"), ("c", "z")]);
        let segs = segment_decomposition(&claw, &claw).unwrap();
        assert_eq!(segs.len(), 3);
        assert!(segs.iter().all(|s| s.kind == SegmentKind::Pendant && s.length == 1));
    }

    #[test]
    fn closed_segment_at_branch_vertex() {
        let tri = g(&[("x", "c"), ("c", "d"), ("d", "x")]);
        let ctx = g(&[("x", "c"), ("c", "d"), ("d", "x"), ("x", "p"), ("x", "q")]);
        let segs = segment_decomposition(&tri, &ctx).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].kind, SegmentKind::Closed);
        assert_eq!(segs[0].length, 3);
        assert_eq!(segs[0].start, segs[0].end);
    }

    #[test]
    fn segments_need_a_branch_vertex() {
        let tri = g(&[("x", "c"), ("c", "d"), ("d", "x")]);
        assert_eq!(segment_decomposition(&tri, &tri).unwrap_err(), Error::NoBranchVertex);
    }

    #[test]
    fn classify() {
        let c5 = g(&[("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1")]);
        let p4 = g(&[("1", "2"), ("2", "3"), ("3", "4")]);
        let claw = g(&[("c", "x"), ("c", "y"), ("c", "z")]);
        assert_eq!(classify_max_degree2(&c5).unwrap(), MaxDegree2Class::Cycle);
        assert_eq!(classify_max_degree2(&p4).unwrap(), MaxDegree2Class::Path);
        assert_eq!(classify_max_degree2(&g(&[("a", "b")])).unwrap(), MaxDegree2Class::Path);
        assert_eq!(classify_max_degree2(&claw).unwrap(), MaxDegree2Class::HasDegree3Vertex);
        let one = Graph::new([l("a")], []).unwrap();
        assert_eq!(classify_max_degree2(&one).unwrap(), MaxDegree2Class::IsolatedVertex);
        assert_eq!(classify_max_degree2(&g(&[("a", "b"), ("c", "d")])).unwrap_err(), Error::Disconnected);
    }

    /// Path-shaped block tree: triangle - edge - triangle - edge.
    fn chain() -> Graph {
        g(&[
            ("a", "b"), ("b", "c"), ("a", "c"),
            ("c", "d"),
            ("d", "e"), ("e", "f"), ("d", "f"),
            ("f", "z"),
        ])
    }

    #[test]
    fn minimal_subtree_cases() {
        let t = block_cut_tree(&chain()).unwrap();
        assert_eq!(t.blocks.len(), 4);
        let tri = |name: &str| t.blocks.iter().position(|b| b.vertices.contains(&l(name)) && b.vertices.len() == 3).unwrap();
        let one = minimal_subtree(&t, &[tri("a")].into()).unwrap();
        assert_eq!(one.blocks.len(), 1);
        assert!(one.cutvertices.is_empty());

        let both = minimal_subtree(&t, &[tri("a"), tri("e")].into()).unwrap();
        assert_eq!(both.blocks.len(), 3);
        assert_eq!(both.cutvertices, [l("c"), l("d")].into());

        let all: BTreeSet<usize> = (0..t.blocks.len()).collect();
        assert_eq!(minimal_subtree(&t, &all).unwrap(), t);
        assert!(minimal_subtree(&t, &BTreeSet::new()).is_err());
    }

    #[test]
    fn leaf_choice() {
        let t = block_cut_tree(&chain()).unwrap();
        let single = minimal_subtree(&t, &[0].into()).unwrap();
        assert_eq!(choose_leaf_block(&single).unwrap(), &t.blocks[0]);
        let leaf = choose_leaf_block(&t).unwrap();
        assert_eq!(t.cutvertices_of(t.block_index(leaf).unwrap()).len(), 1);
        assert!(leaf.vertices.contains(&l("a")));

        // star of blocks around x: every outer block is a leaf, smallest label wins
        let star = g(&[("x", "p"), ("x", "q"), ("p", "q"), ("x", "m"), ("x", "n"), ("m", "n"), ("x", "r")]);
        let t = block_cut_tree(&star).unwrap();
        let leaf = choose_leaf_block(&t).unwrap();
        assert_eq!(leaf.key(), vec![&l("m"), &l("n"), &l("x")]);
    }
}

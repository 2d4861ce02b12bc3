//! Gadget constructions: the segment-replicating gadget `G^×` and the two
//! assemblies of `H*` (component-wise and block-wise).

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use serde::Serialize;

use crate::decomposition::{
    block_cut_tree, branch_vertices, choose_leaf_block, classify_max_degree2, connected_components,
    minimal_subtree, segment_decomposition, MaxDegree2Class, PropertyPredicate, SegmentKind,
};
use crate::error::{Error, Result};
use crate::format::parse_graph;
use crate::graph::{union_with_map, Edge, EdgeSet, Graph, Origin, VertexLabel};
use crate::minor::{is_minor, partition_components};

/// A candidate counterexample graph with its root vertices and the
/// `(k, r)` it claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AstarSpec {
    pub astar: Graph,
    /// Vertex `s` of the pattern maps to the vertex `s'` of `astar` its
    /// branch set must contain.
    pub roots: BTreeMap<VertexLabel, VertexLabel>,
    pub k: usize,
    pub r: usize,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn content(line: &str) -> &str {
    let t = line.trim();
    if t.starts_with('#') {
        ""
    } else {
        t.find(" #").map_or(t, |i| t[..i].trim_end())
    }
}

/// Parses a spec document: an edge-list graph block, then `root s -> s'`
/// lines, then `k <int>` and `r <int>`.
pub fn load_astar_spec(text: &str) -> Result<AstarSpec> {
    let lines: Vec<&str> = text.lines().collect();
    let mut rows = lines.iter().enumerate().filter(|(_, l)| !content(l).is_empty());

    let (hidx, header) = rows.next().ok_or_else(|| perr(1, "missing graph header"))?;
    let counts: Vec<usize> = content(header)
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(hidx + 1, "graph header expects `n m`"))?;
    let &[n, m] = counts.as_slice() else {
        return Err(perr(hidx + 1, "graph header expects `n m`"));
    };
    // the graph block ends with its m-th edge line (or n-th vertex line when m = 0)
    let mut end = hidx;
    let (mut seen_vertices, mut seen_edges) = (0, 0);
    while (m > 0 && seen_edges < m) || (m == 0 && seen_vertices < n) {
        let (i, l) = rows
            .next()
            .ok_or_else(|| perr(lines.len(), "graph block ends early"))?;
        match content(l).split_whitespace().count() {
            1 => seen_vertices += 1,
            2 => seen_edges += 1,
            _ => return Err(perr(i + 1, format!("expected a label or an edge, got {:?}", content(l)))),
        }
        end = i;
    }
    let astar = parse_graph(&lines[..=end].join("\n"))?;

    let mut roots = BTreeMap::new();
    let (mut k, mut r) = (None, None);
    for (i, l) in rows {
        let ln = i + 1;
        let toks: Vec<&str> = content(l).split_whitespace().collect();
        let positive = |s: &str| match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(perr(ln, format!("expected a positive integer, got {s:?}"))),
        };
        match toks.as_slice() {
            ["root", s, "->", t] => {
                let s = VertexLabel::new(*s).map_err(|e| perr(ln, e.to_string()))?;
                let t = VertexLabel::new(*t).map_err(|e| perr(ln, e.to_string()))?;
                if !astar.has_vertex(&t) {
                    return Err(perr(ln, format!("root target {t} is not a vertex of the graph")));
                }
                if roots.insert(s.clone(), t).is_some() {
                    return Err(perr(ln, format!("root {s} given twice")));
                }
            }
            ["k", v] => k = Some(positive(v)?),
            ["r", v] => r = Some(positive(v)?),
            _ => return Err(perr(ln, format!("unrecognised spec line {:?}", content(l)))),
        }
    }
    Ok(AstarSpec {
        astar,
        roots,
        k: k.ok_or_else(|| perr(lines.len(), "missing `k` line"))?,
        r: r.ok_or_else(|| perr(lines.len(), "missing `r` line"))?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ComponentWise,
    BlockWise,
}

/// Everything needed to assemble an `H*`.
#[derive(Clone, Debug)]
pub struct GadgetRecipe {
    pub mode: Mode,
    pub h: Graph,
    /// The component `a` (component-wise mode only).
    pub a: Option<Graph>,
    pub spec: AstarSpec,
    pub r: usize,
    /// Block property (block-wise mode only).
    pub predicate: Option<PropertyPredicate>,
}

impl GadgetRecipe {
    pub fn build(&self) -> Result<(Graph, Option<BuildTrace>)> {
        match self.mode {
            Mode::ComponentWise => {
                let a = self
                    .a
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("component-wise mode needs a component".into()))?;
                Ok((h_star_components(&self.h, a, &self.spec, self.r)?, None))
            }
            Mode::BlockWise => h_star_blocks(self).map(|(g, t)| (g, Some(t))),
        }
    }
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    if r < 3 {
        warn!("r = {r}: the branch-count identity is only guaranteed for r >= 3");
    }
    Ok(())
}

/// Replaces every segment of `g` (relative to the branch vertices of
/// `ctx`) by `r` parallel copies sharing only the branch-vertex copies.
/// Between-segments get length `max(l, 2)`, closed ones `max(l, 3)`.
pub fn g_times(g: &Graph, ctx: &Graph, r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let segments = segment_decomposition(g, ctx)?;
    let branch = branch_vertices(g, ctx)?;
    let mut b = Graph::builder();
    for v in &branch {
        b.add_vertex(v.clone())?;
        b.set_origin(v.clone(), Origin::Branch { of: v.clone() });
    }
    for (si, seg) in segments.iter().enumerate() {
        let (length, closes) = match seg.kind {
            SegmentKind::Between => (seg.length.max(2), Some(&seg.end)),
            SegmentKind::Closed => (seg.length.max(3), Some(&seg.end)),
            SegmentKind::Pendant => (seg.length, None),
        };
        // new vertices per copy: the interior, plus the tip of a pendant path
        let fresh = if closes.is_some() { length - 1 } else { length };
        for c in 0..r {
            let mut prev = seg.start.clone();
            for p in 1..=fresh {
                let v = VertexLabel::derived(&format!("x{si}"), format!("{c}.{p}"));
                if g.has_vertex(&v) || b.contains(&v) {
                    return Err(Error::Precondition(format!("derived label {v} collides with an input label")));
                }
                b.add_vertex(v.clone())?;
                b.set_origin(
                    v.clone(),
                    Origin::PathInternal {
                        segment: si,
                        copy: c,
                        position: p,
                    },
                );
                b.add_edge(prev, v.clone())?;
                prev = v;
            }
            if let Some(end) = closes {
                b.add_edge(prev, end.clone())?;
            }
        }
    }
    b.build()
}

/// Removes copies `keep..` of segment `segment` from a gadget built by
/// [`g_times`]. Used to inject faults.
pub fn thin_bundle(gx: &Graph, segment: usize, keep: usize) -> Result<Graph> {
    let prov = gx
        .provenance()
        .ok_or_else(|| Error::Precondition("gadget has no provenance".into()))?;
    let doomed: BTreeSet<VertexLabel> = prov
        .iter()
        .filter(|(_, o)| matches!(o, Origin::PathInternal { segment: s, copy, .. } if *s == segment && *copy >= keep))
        .map(|(v, _)| v.clone())
        .collect();
    if doomed.is_empty() {
        // a length-1 segment has no interior once copied only if it was never lengthened
        return Err(Error::Precondition(format!("segment {segment} has no copies to remove")));
    }
    let keep_set: BTreeSet<VertexLabel> = gx.vertices().filter(|v| !doomed.contains(*v)).cloned().collect();
    Ok(gx.induced_subgraph(&keep_set))
}

fn with_origins(g: &Graph, f: impl Fn(&VertexLabel) -> Origin) -> Result<Graph> {
    let origins = g.vertices().map(|v| (v.clone(), f(v))).collect();
    g.clone().with_provenance(origins)
}

/// Vertices of `hstar` whose provenance marks them as coming from A*.
pub fn astar_region(hstar: &Graph) -> BTreeSet<VertexLabel> {
    hstar
        .provenance()
        .map(|p| p.iter().filter(|(_, o)| o.is_astar()).map(|(v, _)| v.clone()).collect())
        .unwrap_or_default()
}

/// Disjoint union of A*, `r` copies of each component of `h` without an
/// `a`-minor, and one gadget per other component with an `a`-minor.
pub fn h_star_components(h: &Graph, a: &Graph, spec: &AstarSpec, r: usize) -> Result<Graph> {
    check_r(r)?;
    match classify_max_degree2(a)? {
        MaxDegree2Class::HasDegree3Vertex => {}
        other => {
            return Err(Error::Precondition(format!(
                "component is a {other:?}; the construction needs a vertex of degree at least 3"
            )))
        }
    }
    let (bs, cs) = partition_components(h, a)?;
    let mut parts = vec![with_origins(&spec.astar, |v| Origin::Astar { of: v.clone() })?];
    for b in &bs {
        for j in 0..r {
            parts.push(with_origins(b, |v| Origin::Copy { of: v.clone(), index: j })?);
        }
    }
    for c in &cs {
        parts.push(g_times(c, h, r)?);
    }
    Ok(union_with_map(&parts, &[])?.graph)
}

/// One merged vertex of the block-wise assembly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    /// Vertex of `h` (or root) the members stand for.
    pub vertex: VertexLabel,
    /// `part:label` for every merged copy.
    pub members: Vec<String>,
    pub merged_into: VertexLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartTrace {
    pub kind: String,
    pub source: String,
}

/// Audit record of a block-wise assembly. Blocks are written as sorted
/// vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildTrace {
    pub property: String,
    pub property_blocks: Vec<String>,
    pub property_subtree: Vec<String>,
    pub leaf_block: String,
    pub c_blocks: Vec<String>,
    pub c_subtree: Vec<String>,
    pub b_blocks: Vec<String>,
    pub b_paths: Vec<String>,
    pub d_components: Vec<String>,
    pub roots: BTreeMap<VertexLabel, VertexLabel>,
    pub parts: Vec<PartTrace>,
    pub identifications: Vec<Identification>,
}

fn graph_name(g: &Graph) -> String {
    let vs: Vec<&str> = g.vertices().map(VertexLabel::as_str).collect();
    format!("{{{}}}", vs.join(","))
}

fn edges_graph<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Result<Graph> {
    let set: EdgeSet = edges.into_iter().cloned().collect();
    let mut b = Graph::builder();
    for e in &set {
        let (x, y) = e.endpoints();
        b.ensure_vertex(x.clone()).ensure_vertex(y.clone());
        b.add_edge(x.clone(), y.clone())?;
    }
    b.build()
}

/// Block-wise assembly of `H*` for a hereditary block property.
pub fn h_star_blocks(recipe: &GadgetRecipe) -> Result<(Graph, BuildTrace)> {
    let (h, spec, r) = (&recipe.h, &recipe.spec, recipe.r);
    check_r(r)?;
    let pred = recipe
        .predicate
        .as_ref()
        .ok_or_else(|| Error::Precondition("block-wise mode needs a property".into()))?;
    let t = block_cut_tree(h)?;
    let graphs: Vec<Graph> = t.blocks.iter().map(|b| b.graph()).collect();

    let mut marked = BTreeSet::new();
    for (i, g) in graphs.iter().enumerate() {
        if pred.holds(g)? {
            marked.insert(i);
        }
    }
    if marked.is_empty() {
        return Err(Error::Precondition(format!("no block has property {}", pred.name)));
    }
    let tp = minimal_subtree(&t, &marked)?;
    let leaf = choose_leaf_block(&tp)?;
    let ai = t.block_index(leaf).expect("subtree blocks come from the tree");
    if t.blocks[ai].trivial {
        return Err(Error::Precondition("chosen leaf block is a single edge".into()));
    }
    let a = &graphs[ai];

    let mut cs = BTreeSet::new();
    for (i, g) in graphs.iter().enumerate() {
        if i != ai && is_minor(a, g)? {
            cs.insert(i);
        }
    }
    let mut c_marked = cs.clone();
    c_marked.insert(ai);
    let tc = minimal_subtree(&t, &c_marked)?;
    let in_tc: BTreeSet<usize> = tc.blocks.iter().map(|b| t.block_index(b).unwrap()).collect();
    let bs: BTreeSet<usize> = in_tc.iter().copied().filter(|i| *i != ai && !cs.contains(i)).collect();

    let s: BTreeSet<VertexLabel> = t.cutvertices_of(ai).into_iter().cloned().collect();
    let given: BTreeSet<VertexLabel> = spec.roots.keys().cloned().collect();
    if s != given {
        return Err(Error::Precondition(format!(
            "spec roots {:?} do not match the cutvertices {:?} of the leaf block",
            given.iter().map(VertexLabel::as_str).collect::<Vec<_>>(),
            s.iter().map(VertexLabel::as_str).collect::<Vec<_>>()
        )));
    }

    let outside: Vec<&Edge> = (0..t.blocks.len())
        .filter(|i| !in_tc.contains(i))
        .flat_map(|i| t.blocks[i].edges.iter())
        .collect();
    let ds = connected_components(&edges_graph(outside)?);
    let trivial_b: Vec<&Edge> = bs
        .iter()
        .filter(|&&i| t.blocks[i].trivial)
        .flat_map(|&i| t.blocks[i].edges.iter())
        .collect();
    let paths = connected_components(&edges_graph(trivial_b)?);

    let mut parts = vec![with_origins(&spec.astar, |v| Origin::Astar { of: v.clone() })?];
    let mut part_trace = vec![PartTrace {
        kind: "astar".into(),
        source: graph_name(&spec.astar),
    }];
    // (part index, source graph) of every part standing in for T_C vertices
    let mut tc_parts: Vec<(usize, &Graph)> = Vec::new();
    for &i in &cs {
        tc_parts.push((parts.len(), &graphs[i]));
        parts.push(g_times(&graphs[i], h, r)?);
        part_trace.push(PartTrace {
            kind: "c-gadget".into(),
            source: t.blocks[i].name(),
        });
    }
    for &i in bs.iter().filter(|&&i| !t.blocks[i].trivial) {
        tc_parts.push((parts.len(), &graphs[i]));
        parts.push(g_times(&graphs[i], h, r)?);
        part_trace.push(PartTrace {
            kind: "b-gadget".into(),
            source: t.blocks[i].name(),
        });
    }
    for p in &paths {
        tc_parts.push((parts.len(), p));
        parts.push(g_times(p, h, r)?);
        part_trace.push(PartTrace {
            kind: "path-gadget".into(),
            source: graph_name(p),
        });
    }
    let mut d_parts: Vec<(usize, &Graph)> = Vec::new();
    for d in &ds {
        for j in 0..r {
            d_parts.push((parts.len(), d));
            parts.push(with_origins(d, |v| Origin::Copy { of: v.clone(), index: j })?);
            part_trace.push(PartTrace {
                kind: format!("d-copy-{j}"),
                source: graph_name(d),
            });
        }
    }

    // copies of each T_C vertex across parts; the leaf block itself is
    // represented only through its roots in A*
    let mut groups: BTreeMap<VertexLabel, Vec<(usize, VertexLabel)>> = BTreeMap::new();
    for (v, target) in &spec.roots {
        groups.entry(v.clone()).or_default().push((0, target.clone()));
    }
    for &(pi, src) in &tc_parts {
        for v in src.vertices() {
            let is_branch = matches!(parts[pi].origin(v), Some(Origin::Branch { of }) if of == v);
            if is_branch {
                groups.entry(v.clone()).or_default().push((pi, v.clone()));
            }
        }
    }
    for &(pi, src) in &d_parts {
        for v in src.vertices() {
            if let Some(g) = groups.get_mut(v) {
                g.push((pi, v.clone()));
            } else if in_tc.iter().any(|&i| t.blocks[i].vertices.contains(v)) {
                return Err(Error::Precondition(format!(
                    "attaching vertex {v} has no copy in the assembled parts"
                )));
            }
        }
    }
    let identify: Vec<Vec<VertexLabel>> = groups
        .values()
        .filter(|m| m.len() >= 2)
        .map(|m| m.iter().map(|(pi, v)| v.copy(*pi)).collect())
        .collect();
    let union = union_with_map(&parts, &identify)?;

    let identifications = groups
        .iter()
        .filter(|(_, m)| m.len() >= 2)
        .map(|(v, m)| Identification {
            vertex: v.clone(),
            members: m.iter().map(|(pi, x)| format!("{pi}:{x}")).collect(),
            merged_into: union.parts[m[0].0][&m[0].1].clone(),
        })
        .collect();
    let names = |set: &BTreeSet<usize>| set.iter().map(|&i| t.blocks[i].name()).collect::<Vec<_>>();
    let trace = BuildTrace {
        property: pred.name.clone(),
        property_blocks: names(&marked),
        property_subtree: tp.blocks.iter().map(|b| b.name()).collect(),
        leaf_block: t.blocks[ai].name(),
        c_blocks: names(&cs),
        c_subtree: names(&in_tc),
        b_blocks: names(&bs),
        b_paths: paths.iter().map(graph_name).collect(),
        d_components: ds.iter().map(graph_name).collect(),
        roots: spec.roots.clone(),
        parts: part_trace,
        identifications,
    };
    Ok((union.graph, trace))
}

//! Edge-list text format, graph6 import and DOT export.
//!
//! Edge-list layout: a header `n m`, then vertex lines (one label each),
//! then edge lines `u v`. Blank lines and `#` comments are ignored. Vertex
//! lines may be omitted when every vertex is an edge endpoint; the header
//! counts are always checked.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Dot,
}

fn strip_comment(line: &str) -> &str {
    let t = line.trim();
    if t.starts_with('#') {
        return "";
    }
    // a comment after content must be separated by whitespace, labels may contain '#'
    match t.find(" #").or_else(|| t.find("\t#")) {
        Some(i) => t[..i].trim_end(),
        None => t,
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing `n m` header"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| perr(hline, format!("header expects two counts, got {header:?}")))
    };
    if nums.len() != 2 {
        return Err(perr(hline, format!("header expects two counts, got {header:?}")));
    }
    let (n, m) = (parse_count(nums[0])?, parse_count(nums[1])?);

    let mut b = Graph::builder();
    let mut edges = 0usize;
    let label = |line: usize, s: &str| VertexLabel::new(s).map_err(|e| perr(line, e.to_string()));
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [v] => {
                b.add_vertex(label(ln, v)?)
                    .map_err(|e| perr(ln, e.to_string()))?;
            }
            [x, y] => {
                let (x, y) = (label(ln, x)?, label(ln, y)?);
                if x == y {
                    return Err(perr(ln, format!("self-loop at {x}")));
                }
                b.ensure_vertex(x.clone()).ensure_vertex(y.clone());
                b.add_edge(x, y).map_err(|e| perr(ln, e.to_string()))?;
                edges += 1;
            }
            _ => return Err(perr(ln, format!("expected a label or an edge, got {l:?}"))),
        }
    }
    let g = b.build()?;
    if g.vertex_count() != n || edges != m {
        return Err(perr(
            hline,
            format!(
                "header announces {n} vertices and {m} edges, found {} and {edges}",
                g.vertex_count()
            ),
        ));
    }
    Ok(g)
}

/// Decodes one graph6 string (optionally with the `>>graph6<<` prefix).
/// Vertices are labelled `0`, `1`, ...
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&c| !(63..=126).contains(&c)) {
        return Err(perr(1, "graph6 bytes must lie in 63..=126"));
    }
    let (n, rest) = match bytes {
        [] => return Err(perr(1, "empty graph6 string")),
        [126, 126, r @ ..] if r.len() >= 6 => {
            (r[..6].iter().fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize), &r[6..])
        }
        [126, r @ ..] if r.len() >= 3 => {
            (r[..3].iter().fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize), &r[3..])
        }
        [c, r @ ..] if *c != 126 => ((c - 63) as usize, r),
        _ => return Err(perr(1, "truncated graph6 size field")),
    };
    let needed = n * n.saturating_sub(1) / 2;
    if rest.len() * 6 < needed || rest.len() != needed.div_ceil(6) {
        return Err(perr(1, format!("graph6 body has wrong length for n = {n}")));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let names: Vec<VertexLabel> = (0..n).map(|i| VertexLabel::new(i.to_string()).unwrap()).collect();
    let mut b = Graph::builder();
    for v in &names {
        b.add_vertex(v.clone())?;
    }
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                b.add_edge(names[i].clone(), names[j].clone())?;
            }
            k += 1;
        }
    }
    b.build()
}

pub fn serialize(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => to_edge_list(g),
        Format::Dot => to_dot(g),
    }
}

fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for v in g.vertices() {
        let _ = writeln!(out, "{v}");
    }
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

fn dot_id(v: &VertexLabel) -> String {
    format!("\"{}\"", v.as_str().replace('\\', "\\\\"))
}

fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        match g.origin(v) {
            Some(o) => {
                let _ = writeln!(out, "  {} [role=\"{o}\"];", dot_id(v));
            }
            None => {
                let _ = writeln!(out, "  {};", dot_id(v));
            }
        }
    }
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let _ = writeln!(out, "  {} -- {};", dot_id(a), dot_id(b));
    }
    out.push_str("}\n");
    out
}

/// Reads either format, choosing graph6 when the text carries the
/// `>>graph6<<` header or is a single token with no header line.
pub fn parse_any(text: &str) -> Result<Graph> {
    let t = text.trim();
    let single_token = !t.is_empty() && t.split_whitespace().count() == 1;
    if t.starts_with(">>graph6<<") || single_token {
        parse_graph6(t)
    } else {
        parse_graph(text)
    }
}

/// Vertices of `g` whose labels appear in `names`; handy for regions.
pub fn label_set<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<BTreeSet<VertexLabel>> {
    names.into_iter().map(VertexLabel::new).collect()
}

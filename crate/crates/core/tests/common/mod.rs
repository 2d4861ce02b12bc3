#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use epcheck::decomposition::{connected_components, is_connected};
use epcheck::gadgets::AstarSpec;
use epcheck::{Edge, Graph, VertexLabel};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn l(s: &str) -> VertexLabel {
    VertexLabel::new(s).unwrap()
}

pub fn g(edges: &[(&str, &str)]) -> Graph {
    Graph::from_edges(edges.iter().copied()).unwrap()
}

/// Graph on `v0..v{n-1}` with the given index edges.
pub fn indexed(n: usize, edges: &[(usize, usize)]) -> Graph {
    let names: Vec<VertexLabel> = (0..n).map(|i| l(&format!("v{i}"))).collect();
    let es = edges.iter().map(|&(a, b)| (names[a].clone(), names[b].clone()));
    Graph::new(names.clone(), es).unwrap()
}

pub fn complete(prefix: &str, n: usize) -> Graph {
    let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let mut es = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            es.push((names[i].as_str(), names[j].as_str()));
        }
    }
    if n == 1 {
        return Graph::new([l(&names[0])], []).unwrap();
    }
    Graph::from_edges(es).unwrap()
}

pub fn cycle(prefix: &str, n: usize) -> Graph {
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    Graph::from_edges((0..n).map(|i| (names[i].as_str(), names[(i + 1) % n].as_str()))).unwrap()
}

/// The example graph G and its context H (H adds u adjacent to v).
pub fn square_with_tail() -> (Graph, Graph) {
    let base = [("v", "w"), ("w", "w1"), ("v", "u1"), ("u1", "u2"), ("u2", "w")];
    let mut ctx = base.to_vec();
    ctx.push(("u", "v"));
    (g(&base), g(&ctx))
}

pub fn spec(astar: Graph, roots: &[(&str, &str)], k: usize, r: usize) -> AstarSpec {
    AstarSpec {
        astar,
        roots: roots.iter().map(|(a, b)| (l(a), l(b))).collect(),
        k,
        r,
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..n {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// by brute-force canonical form over all permutations.
pub fn nonisomorphic(n: usize) -> Vec<Graph> {
    let ps = pairs(n);
    let perms = permutations(n);
    let code = |mask: u32, perm: &[usize]| {
        let mut c = 0u32;
        for (k, &(i, j)) in ps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                let idx = ps.iter().position(|&p| p == (a, b)).unwrap();
                c |= 1 << idx;
            }
        }
        c
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << ps.len()) {
        let canon = perms.iter().map(|p| code(mask, p)).min().unwrap();
        if seen.insert(canon) {
            let es: Vec<(usize, usize)> = (0..ps.len()).filter(|k| mask >> k & 1 == 1).map(|k| ps[k]).collect();
            out.push(indexed(n, &es));
        }
    }
    out
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let es: Vec<(usize, usize)> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    indexed(n, &es)
}

/// Random spanning tree plus independent extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut es = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        es.insert((u, v));
    }
    for e in pairs(n) {
        if rng.gen_bool(p) {
            es.insert(e);
        }
    }
    indexed(n, &es.into_iter().collect::<Vec<_>>())
}

pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Blocks as `(vertices, edges)` from the common-cycle relation on edges,
/// computed by enumerating every simple cycle.
pub fn oracle_blocks(g: &Graph) -> BTreeSet<(BTreeSet<VertexLabel>, BTreeSet<Edge>)> {
    let vs: Vec<VertexLabel> = g.vertices().cloned().collect();
    let idx: BTreeMap<&VertexLabel, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<Edge> = g.edges().collect();
    let eid: BTreeMap<(usize, usize), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (a, b) = e.endpoints();
            let (a, b) = (idx[a], idx[b]);
            ((a.min(b), a.max(b)), i)
        })
        .collect();
    let adj: Vec<Vec<usize>> = vs
        .iter()
        .map(|v| g.neighbors(v).unwrap().iter().map(|u| idx[u]).collect())
        .collect();
    let mut dsu = Dsu((0..edges.len()).collect());
    let edge_of = |a: usize, b: usize| eid[&(a.min(b), a.max(b))];

    fn walk(
        s: usize,
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        adj: &[Vec<usize>],
        cycle: &mut dyn FnMut(&[usize]),
    ) {
        let u = *path.last().unwrap();
        for &w in &adj[u] {
            if w == s && path.len() >= 3 {
                cycle(path);
            } else if w > s && !on[w] {
                on[w] = true;
                path.push(w);
                walk(s, path, on, adj, cycle);
                path.pop();
                on[w] = false;
            }
        }
    }

    for s in 0..vs.len() {
        let mut on = vec![false; vs.len()];
        on[s] = true;
        let mut record = |p: &[usize]| {
            let first = edge_of(p[0], p[p.len() - 1]);
            for w in p.windows(2) {
                dsu.union(first, edge_of(w[0], w[1]));
            }
        };
        walk(s, &mut vec![s], &mut on, &adj, &mut record);
    }
    let mut classes: BTreeMap<usize, (BTreeSet<VertexLabel>, BTreeSet<Edge>)> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        let c = classes.entry(dsu.find(i)).or_default();
        let (a, b) = e.endpoints();
        c.0.insert(a.clone());
        c.0.insert(b.clone());
        c.1.insert(e.clone());
    }
    classes.into_values().collect()
}

/// Vertices whose removal increases the number of components.
pub fn oracle_cutvertices(g: &Graph) -> BTreeSet<VertexLabel> {
    let before = connected_components(g).len();
    g.vertices()
        .filter(|v| connected_components(&g.delete_vertex(v).unwrap()).len() > before)
        .cloned()
        .collect()
}

/// `g` keeping all vertices but only the edges whose bit is set in `mask`.
pub fn keep_edges(g: &Graph, edges: &[Edge], mask: u32) -> Graph {
    let drop: epcheck::EdgeSet = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 0)
        .map(|(_, e)| e.clone())
        .collect();
    g.delete_edges(&drop).unwrap()
}

/// Largest number of pairwise edge-disjoint `h`-expansions, from the
/// minimal edge subsets that contain one. `h` needs an edge.
pub fn packing_oracle(h: &Graph, g: &Graph) -> usize {
    let edges: Vec<Edge> = g.edges().collect();
    assert!(edges.len() <= 12 && h.edge_count() > 0);
    let full = (1u32 << edges.len()) - 1;
    let contains: Vec<bool> = (0..=full)
        .map(|m| epcheck::minor::naive_is_minor_oracle(h, &keep_edges(g, &edges, m)).unwrap())
        .collect();
    let minimal: Vec<u32> = (0..=full)
        .filter(|&m| contains[m as usize] && (0..edges.len()).all(|i| m >> i & 1 == 0 || !contains[(m & !(1 << i)) as usize]))
        .collect();
    fn best(sets: &[u32], used: u32) -> usize {
        match sets.split_first() {
            None => 0,
            Some((&s, rest)) => {
                let skip = best(rest, used);
                if s & used == 0 {
                    skip.max(1 + best(rest, used | s))
                } else {
                    skip
                }
            }
        }
    }
    best(&minimal, 0)
}

/// Size of a smallest edge set whose deletion leaves no `h`-minor.
pub fn hitting_oracle(h: &Graph, g: &Graph) -> Option<usize> {
    let edges: Vec<Edge> = g.edges().collect();
    let full = (1u32 << edges.len()) - 1;
    (0..=full)
        .filter(|&x| !epcheck::minor::naive_is_minor_oracle(h, &keep_edges(g, &edges, full & !x)).unwrap())
        .map(|x| x.count_ones() as usize)
        .min()
}

/// Brute force over all maps `V(g) -> V(h) + unused`: is there a model of
/// `h` whose branch set of `s` contains `root` for every `(s, root)`?
pub fn rooted_oracle(h: &Graph, g: &Graph, roots: &BTreeMap<VertexLabel, VertexLabel>) -> bool {
    let hv: Vec<VertexLabel> = h.vertices().cloned().collect();
    let gv: Vec<VertexLabel> = g.vertices().cloned().collect();
    let k = hv.len();
    let mut assign = vec![0usize; gv.len()];
    loop {
        let sets: Vec<BTreeSet<VertexLabel>> = (0..k)
            .map(|i| gv.iter().zip(&assign).filter(|(_, &a)| a == i + 1).map(|(v, _)| v.clone()).collect())
            .collect();
        let ok = sets.iter().all(|s| !s.is_empty() && is_connected(&g.induced_subgraph(s)))
            && roots.iter().all(|(s, r)| {
                let i = hv.iter().position(|x| x == s).unwrap();
                sets[i].contains(r)
            })
            && h.edges().all(|e| {
                let (a, b) = e.endpoints();
                let (i, j) = (hv.iter().position(|x| x == a).unwrap(), hv.iter().position(|x| x == b).unwrap());
                g.edges().any(|f| {
                    let (x, y) = f.endpoints();
                    (sets[i].contains(x) && sets[j].contains(y)) || (sets[i].contains(y) && sets[j].contains(x))
                })
            });
        if ok {
            return true;
        }
        let mut p = 0;
        loop {
            if p == assign.len() {
                return false;
            }
            assign[p] += 1;
            if assign[p] <= k {
                break;
            }
            assign[p] = 0;
            p += 1;
        }
    }
}

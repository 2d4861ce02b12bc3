//! Brute-force minor test by enumerating every assignment of host vertices
//! to "unused" or one branch set. Shares nothing with the search engine.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const NAIVE_ORACLE_MAX_VERTICES: usize = 8;

pub fn naive_is_minor_oracle(h: &Graph, g: &Graph) -> Result<bool> {
    let n = g.vertex_count();
    if n > NAIVE_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "host graph for the naive minor oracle",
            actual: n,
            limit: NAIVE_ORACLE_MAX_VERTICES,
        });
    }
    let k = h.vertex_count();
    if k == 0 {
        return Ok(true);
    }
    if k > n {
        return Ok(false);
    }

    let gv: Vec<_> = g.vertices().collect();
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let i = gv.iter().position(|v| *v == a).unwrap();
        let j = gv.iter().position(|v| *v == b).unwrap();
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let hv: Vec<_> = h.vertices().collect();
    let h_edges: Vec<(usize, usize)> = h
        .edges()
        .map(|e| {
            let (a, b) = e.endpoints();
            (
                hv.iter().position(|v| *v == a).unwrap(),
                hv.iter().position(|v| *v == b).unwrap(),
            )
        })
        .collect();

    // label[x] in 0..k names a branch set, k means unused
    let mut label = vec![0usize; n];
    loop {
        if is_model(&label, k, &adj, &h_edges) {
            return Ok(true);
        }
        // odometer increment over (k + 1)^n labellings
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            label[i] += 1;
            if label[i] <= k {
                break;
            }
            label[i] = 0;
            i += 1;
        }
    }
}

fn is_model(label: &[usize], k: usize, adj: &[Vec<bool>], h_edges: &[(usize, usize)]) -> bool {
    let n = label.len();
    for c in 0..k {
        let members: Vec<usize> = (0..n).filter(|&x| label[x] == c).collect();
        let Some(&start) = members.first() else {
            return false;
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if adj[x][y] && !seen[y] && label[y] == c {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached != members.len() {
            return false;
        }
    }
    h_edges.iter().all(|&(p, q)| {
        (0..n).any(|x| label[x] == p && (0..n).any(|y| label[y] == q && adj[x][y]))
    })
}

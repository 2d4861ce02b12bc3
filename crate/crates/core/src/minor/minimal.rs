//! Inclusion-minimal expansion edge sets.
//!
//! A minimal set is found by running the search and then dropping single
//! edges while an expansion survives; since containing an expansion is
//! monotone under adding edges, a set from which no single edge can be
//! dropped is inclusion-minimal. All minimal sets are enumerated by a
//! recursion on a forbidden edge set `F`: take any minimal set `S`
//! avoiding `F` and recurse on `F + e` for every `e` in `S`. Any other
//! minimal set `M` avoiding `F` misses some edge of `S`, so it is reached.

use std::collections::{BTreeMap, HashSet};

use crate::bits::{bit, ones, Mask};
use crate::error::Result;
use crate::graph::{EdgeSet, Graph};

use super::{EmbeddingConstraints, Instance, MinorEmbedding, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MinimalSet {
    pub edges: Mask,
    /// Branch sets of one model using exactly `edges`.
    pub sets: Vec<Mask>,
}

pub(crate) enum Probe {
    Found(MinimalSet),
    Absent,
    OutOfBudget,
}

/// Node accounting shared by a sequence of searches.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Meter {
    pub limit: u64,
    pub used: u64,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    fn run(&mut self, inst: &Instance, keep: Mask) -> Verdict {
        let adj = inst.g.adjacency_of(keep);
        let (v, n) = inst.run(&adj, self.limit.saturating_sub(self.used));
        self.used = self.used.saturating_add(n);
        v
    }
}

/// A minimal expansion edge set inside the edges `keep`.
pub(crate) fn minimal_in(inst: &Instance, keep: Mask, meter: &mut Meter) -> Probe {
    let mut sets = match meter.run(inst, keep) {
        Verdict::Found(s) => s,
        Verdict::Absent => return Probe::Absent,
        Verdict::OutOfBudget => return Probe::OutOfBudget,
    };
    let mut edges = inst.model_edges(&inst.g.adjacency_of(keep), &sets);
    'shrink: loop {
        for e in ones(edges) {
            let smaller = edges & !bit(e);
            match meter.run(inst, smaller) {
                Verdict::Found(s) => {
                    edges = inst.model_edges(&inst.g.adjacency_of(smaller), &s);
                    sets = s;
                    continue 'shrink;
                }
                Verdict::Absent => {}
                Verdict::OutOfBudget => return Probe::OutOfBudget,
            }
        }
        return Probe::Found(MinimalSet { edges, sets });
    }
}

/// Every minimal set, keyed by edge mask. The flag is false when the node
/// budget ran out, in which case the map holds only the sets found so far.
pub(crate) fn enumerate_masks(inst: &Instance, meter: &mut Meter) -> (BTreeMap<Mask, Vec<Mask>>, bool) {
    let all = inst.g.all_edges();
    let mut found: BTreeMap<Mask, Vec<Mask>> = BTreeMap::new();
    let mut seen: HashSet<Mask> = HashSet::from([0]);
    let mut stack: Vec<Mask> = vec![0];
    while let Some(forbidden) = stack.pop() {
        let known = found.iter().find(|(s, _)| **s & forbidden == 0).map(|(s, _)| *s);
        let s = match known {
            Some(s) => s,
            None => match minimal_in(inst, all & !forbidden, meter) {
                Probe::Found(m) => {
                    found.insert(m.edges, m.sets);
                    m.edges
                }
                Probe::Absent => continue,
                Probe::OutOfBudget => return (found, false),
            },
        };
        let branches: Vec<Mask> = ones(s).map(|e| forbidden | bit(e)).collect();
        for f in branches.into_iter().rev() {
            if seen.insert(f) {
                stack.push(f);
            }
        }
    }
    (found, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalExpansions {
    /// Sorted by edge set; each comes with one model using exactly it.
    pub expansions: Vec<(EdgeSet, MinorEmbedding)>,
    /// False when the budget ran out before the enumeration finished.
    pub complete: bool,
    pub nodes: u64,
}

/// Enumerates all inclusion-minimal edge sets of `g` that contain an
/// `h`-expansion, spending at most `budget` search nodes in total.
pub fn enumerate_minimal_expansions(h: &Graph, g: &Graph, budget: u64) -> Result<MinimalExpansions> {
    let inst = Instance::new(h, g, &EmbeddingConstraints::none())?;
    inst.g.require_edge_masks()?;
    let mut meter = Meter::new(budget);
    let (found, complete) = enumerate_masks(&inst, &mut meter);
    let mut expansions: Vec<(EdgeSet, MinorEmbedding)> = found
        .iter()
        .map(|(&edges, sets)| {
            let adj = inst.g.adjacency_of(edges);
            (inst.g.edge_set_of(edges), inst.embedding(&adj, sets))
        })
        .collect();
    expansions.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(MinimalExpansions {
        expansions,
        complete,
        nodes: meter.used,
    })
}

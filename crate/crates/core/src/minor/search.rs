//! Backtracking over branch sets.
//!
//! Pattern vertices are placed one at a time. Rooted vertices go first,
//! then vertices with the most already-placed neighbours (ties: higher
//! degree). A vertex's branch set is seeded next to an already placed
//! neighbour's set when there is one, preferring high-degree host vertices,
//! and is then grown by an include/exclude enumeration over its frontier so
//! that every connected set containing the seed is reachable exactly once.
//!
//! Pruning rules, all necessary conditions for a model:
//! * minor-monotone counts: vertices, edges, cycle rank, and vertices of
//!   degree at least 3;
//! * a placed set needs one free neighbouring host vertex per unplaced
//!   pattern neighbour (their branch sets are disjoint);
//! * every unplaced pattern vertex needs a free connected region that
//!   touches the sets of all of its placed neighbours.

use std::cmp::Reverse;

use crate::bits::{bit, component, count, full, neighborhood, ones, Mask};

pub(crate) struct Problem<'a> {
    pub pattern: &'a [Vec<usize>],
    pub host: &'a [Mask],
    pub allowed: &'a [Mask],
    pub roots: &'a [Option<usize>],
}

#[derive(Debug)]
pub(crate) enum Verdict {
    /// Branch sets, indexed by pattern vertex.
    Found(Vec<Mask>),
    Absent,
    OutOfBudget,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Done,
    Fail,
    Out,
}

fn cycle_rank(adj: &[Mask]) -> usize {
    let n = adj.len();
    let m = adj.iter().map(|&a| count(a)).sum::<usize>() / 2;
    let mut left = full(n);
    let mut comps = 0;
    while left != 0 {
        let c = component(adj, left, left.trailing_zeros() as usize);
        left &= !c;
        comps += 1;
    }
    m + comps - n
}

fn refuted_by_counts(p: &Problem) -> bool {
    let k = p.pattern.len();
    let n = p.host.len();
    if k > n {
        return true;
    }
    let hm: usize = p.pattern.iter().map(Vec::len).sum::<usize>() / 2;
    let gm: usize = p.host.iter().map(|&a| count(a)).sum::<usize>() / 2;
    if hm > gm {
        return true;
    }
    let h_adj: Vec<Mask> = p
        .pattern
        .iter()
        .map(|ns| ns.iter().fold(0, |acc, &q| acc | bit(q)))
        .collect();
    if cycle_rank(&h_adj) > cycle_rank(p.host) {
        return true;
    }
    let h3 = p.pattern.iter().filter(|ns| ns.len() >= 3).count();
    let g3 = p.host.iter().filter(|&&a| count(a) >= 3).count();
    h3 > g3
}

pub(crate) fn solve(p: &Problem, budget: u64) -> (Verdict, u64) {
    let k = p.pattern.len();
    if k == 0 {
        return (Verdict::Found(Vec::new()), 0);
    }
    if refuted_by_counts(p) || p.allowed.contains(&0) {
        return (Verdict::Absent, 0);
    }
    let mut s = Search::new(p, budget);
    let step = s.place(0);
    let verdict = match step {
        Step::Done => Verdict::Found(s.sets.clone()),
        Step::Fail => Verdict::Absent,
        Step::Out => Verdict::OutOfBudget,
    };
    (verdict, s.nodes)
}

struct Search<'a, 'p> {
    p: &'a Problem<'p>,
    order: Vec<usize>,
    pos: Vec<usize>,
    sets: Vec<Mask>,
    used: Mask,
    universe: Mask,
    host_degree: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl<'a, 'p> Search<'a, 'p> {
    fn new(p: &'a Problem<'p>, budget: u64) -> Self {
        let k = p.pattern.len();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        for _ in 0..k {
            let key = |u: usize| {
                (
                    p.roots[u].is_some(),
                    p.pattern[u].iter().filter(|&&w| placed[w]).count(),
                    p.pattern[u].len(),
                    Reverse(u),
                )
            };
            let u = (0..k).filter(|&u| !placed[u]).max_by_key(|&u| key(u)).unwrap();
            placed[u] = true;
            order.push(u);
        }
        let mut pos = vec![0; k];
        for (i, &u) in order.iter().enumerate() {
            pos[u] = i;
        }
        Search {
            p,
            order,
            pos,
            sets: vec![0; k],
            used: 0,
            universe: full(p.host.len()),
            host_degree: p.host.iter().map(|a| a.count_ones()).collect(),
            nodes: 0,
            budget,
        }
    }

    fn place(&mut self, i: usize) -> Step {
        if i == self.order.len() {
            return Step::Done;
        }
        let u = self.order[i];
        let allowed = self.p.allowed[u] & self.universe & !self.used;
        let (candidates, rooted) = match self.p.roots[u] {
            Some(r) if allowed & bit(r) != 0 => (bit(r), true),
            Some(_) => return Step::Fail,
            None => {
                let anchor = self.p.pattern[u]
                    .iter()
                    .filter(|&&w| self.pos[w] < i)
                    .map(|&w| neighborhood(self.p.host, self.sets[w]) & allowed)
                    .min_by_key(|&m| count(m));
                (anchor.unwrap_or(allowed), false)
            }
        };
        let mut seeds: Vec<usize> = ones(candidates).collect();
        seeds.sort_by_key(|&s| (Reverse(self.host_degree[s]), s));
        let mut tried: Mask = 0;
        for s in seeds {
            match self.grow(i, u, bit(s), tried) {
                Step::Fail => {}
                other => return other,
            }
            if !rooted {
                tried |= bit(s);
            }
        }
        Step::Fail
    }

    fn grow(&mut self, i: usize, u: usize, set: Mask, excluded: Mask) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Out;
        }
        let free = self.universe & !self.used & !set;
        if count(free) < self.order.len() - i - 1 || !self.feasible(i, u, set, free, false) {
            return Step::Fail;
        }
        let nbr = neighborhood(self.p.host, set);
        let mut unsatisfied: Mask = 0;
        for &w in &self.p.pattern[u] {
            if self.pos[w] < i && nbr & self.sets[w] == 0 {
                unsatisfied |= neighborhood(self.p.host, self.sets[w]);
            }
        }
        let open_neighbours = self.p.pattern[u].iter().any(|&w| self.pos[w] > i);
        if unsatisfied == 0 && !open_neighbours {
            // shrinking a set never hurts anyone else
            return self.commit(i, u, set);
        }
        let frontier = nbr & free & !excluded & self.p.allowed[u];
        if frontier == 0 {
            return if unsatisfied == 0 {
                self.commit(i, u, set)
            } else {
                Step::Fail
            };
        }
        let toward = frontier & unsatisfied;
        let y = if toward != 0 {
            toward.trailing_zeros() as usize
        } else {
            ones(frontier)
                .max_by_key(|&v| (self.host_degree[v], Reverse(v)))
                .unwrap()
        };
        let branches = if toward != 0 {
            [(set | bit(y), excluded), (set, excluded | bit(y))]
        } else {
            [(set, excluded | bit(y)), (set | bit(y), excluded)]
        };
        for (s, x) in branches {
            match self.grow(i, u, s, x) {
                Step::Fail => {}
                other => return other,
            }
        }
        Step::Fail
    }

    fn commit(&mut self, i: usize, u: usize, set: Mask) -> Step {
        let free = self.universe & !self.used & !set;
        if !self.feasible(i, u, set, free, true) {
            return Step::Fail;
        }
        self.sets[u] = set;
        self.used |= set;
        let step = self.place(i + 1);
        if step != Step::Done {
            self.used &= !set;
            self.sets[u] = 0;
        }
        step
    }

    /// Necessary conditions for extending the current partial model once
    /// pattern vertex `u` (position `i`) takes `set`. With `committing`
    /// false only the conditions that cannot recover as `set` grows are
    /// checked.
    fn feasible(&self, i: usize, u: usize, set: Mask, free: Mask, committing: bool) -> bool {
        let host = self.p.host;
        let set_of = |w: usize| if w == u { set } else { self.sets[w] };
        let open = |w: usize| self.p.pattern[w].iter().filter(|&&x| self.pos[x] > i).count();

        for j in 0..i {
            let w = self.order[j];
            if count(neighborhood(host, self.sets[w]) & free) < open(w) {
                return false;
            }
        }
        if committing {
            let nbr = neighborhood(host, set);
            if self.p.pattern[u]
                .iter()
                .any(|&w| self.pos[w] < i && nbr & self.sets[w] == 0)
            {
                return false;
            }
            if count(nbr & free) < open(u) {
                return false;
            }
        }

        for j in i + 1..self.order.len() {
            let z = self.order[j];
            let space = free & self.p.allowed[z];
            let placed: Vec<usize> = self.p.pattern[z]
                .iter()
                .copied()
                .filter(|&w| self.pos[w] < i || (committing && w == u))
                .collect();
            if let Some(r) = self.p.roots[z] {
                if space & bit(r) == 0 {
                    return false;
                }
                let c = component(host, space, r);
                let nc = neighborhood(host, c);
                if placed.iter().any(|&w| nc & set_of(w) == 0) {
                    return false;
                }
                continue;
            }
            let Some((&first, rest)) = placed.split_first() else {
                if space == 0 {
                    return false;
                }
                continue;
            };
            let mut starts = neighborhood(host, set_of(first)) & space;
            let mut ok = false;
            while starts != 0 {
                let c = component(host, space, starts.trailing_zeros() as usize);
                let nc = neighborhood(host, c);
                if rest.iter().all(|&w| nc & set_of(w) != 0) {
                    ok = true;
                    break;
                }
                starts &= !c;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

//! Brute-force verifiers: packing, hitting sets, deletion robustness,
//! expansion locality, counterexample specs, branch counting and sampled
//! hereditariness.
//!
//! Deletion sets are enumerated by size, then lexicographically in edge
//! label order. Batches of candidate sets may be evaluated on a thread
//! pool; results are reduced in enumeration order and every search sees the
//! same model cache snapshot, so reports do not depend on the number of
//! workers.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{bit, count, ones, Mask};
use crate::decomposition::{branch_vertices, PropertyPredicate};
use crate::error::{Error, Result};
use crate::format::{serialize, Format};
use crate::gadgets::{g_times, AstarSpec};
use crate::graph::{Edge, EdgeSet, Graph, VertexLabel};
use crate::minor::{
    enumerate_masks, find_expansion, EmbeddingConstraints, Expansion, Instance, Meter, MinorEmbedding, Verdict,
};

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_SUBSET_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;

const BATCH: usize = 512;
const CACHE_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Search nodes per expansion search (per enumeration for packing and
    /// locality).
    pub node_budget: u64,
    /// Deletion sets enumerated before falling back to sampling.
    pub subset_budget: u64,
    pub seed: u64,
    pub jobs: usize,
    /// Sample even when exhaustive enumeration fits the budget.
    pub force_sample: bool,
    pub samples: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            seed: DEFAULT_SEED,
            jobs: 1,
            force_sample: false,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// One step of a minor sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum MinorStep {
    DeleteEdge { edge: Edge },
    DeleteVertex { vertex: VertexLabel },
    /// The second endpoint is merged into the first.
    Contract { keep: VertexLabel, merge: VertexLabel },
}

/// Evidence carried by a refutation. Only the relevant fields are set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deleted_edges: Option<EdgeSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<MinorEmbedding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packing: Option<Vec<MinorEmbedding>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minor_steps: Option<Vec<MinorStep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Refuted { witness: Box<Witness> },
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunMode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub subsets_checked: u64,
    pub search_nodes: u64,
    /// Wall time; left out of JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub claim: String,
    pub outcome: Outcome,
    pub mode: RunMode,
    pub seed: u64,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(claim: &str, seed: u64) -> Self {
        Report {
            claim: claim.into(),
            outcome: Outcome::Holds,
            mode: RunMode::Exhaustive,
            seed,
            stats: Stats::default(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.outcome, Outcome::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Refuted { witness } => Some(witness),
            _ => None,
        }
    }

    /// 0 holds, 1 refuted, 2 budget exhausted.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Holds => 0,
            Outcome::Refuted { .. } => 1,
            Outcome::BudgetExhausted => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    fn refute(&mut self, w: Witness) {
        self.outcome = Outcome::Refuted { witness: Box::new(w) };
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn subset_count(m: usize, max: usize) -> u128 {
    (0..=max.min(m)).fold(0u128, |acc, k| acc.saturating_add(binomial(m, k)))
}

/// Subsets of `0..m` of size `0..=max`, by size then lexicographically.
fn subsets_up_to(m: usize, max: usize) -> impl Iterator<Item = Mask> {
    (0..=max.min(m)).flat_map(move |k| {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut first = true;
        std::iter::from_fn(move || {
            if first {
                first = false;
            } else {
                let mut i = k;
                loop {
                    if i == 0 {
                        return None;
                    }
                    i -= 1;
                    if idx[i] < m - k + i {
                        break;
                    }
                }
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            Some(idx.iter().fold(0, |acc, &e| acc | bit(e)))
        })
    })
}

enum Probe {
    /// An expansion survives; the mask is its edge set when freshly found.
    Contains(Option<Mask>),
    Destroyed,
    Unknown,
}

#[derive(Debug, Default)]
struct Sweep {
    witness: Option<Mask>,
    unknown_before_witness: bool,
    unknown: bool,
    subsets: u64,
    nodes: u64,
}

struct Engine<'a> {
    inst: &'a Instance,
    node_budget: u64,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a Instance, opts: &VerifyOptions) -> Result<Self> {
        inst.g.require_edge_masks()?;
        let pool = if opts.jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.jobs)
                    .build()
                    .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Engine {
            inst,
            node_budget: opts.node_budget,
            pool,
        })
    }

    fn probe(&self, x: Mask, cache: &[Mask]) -> (Probe, u64) {
        if cache.iter().any(|&m| m & x == 0) {
            return (Probe::Contains(None), 0);
        }
        let keep = self.inst.g.all_edges() & !x;
        let adj = self.inst.g.adjacency_of(keep);
        let (v, nodes) = self.inst.run(&adj, self.node_budget);
        let p = match v {
            Verdict::Found(sets) => Probe::Contains(Some(self.inst.model_edges(&adj, &sets))),
            Verdict::Absent => Probe::Destroyed,
            Verdict::OutOfBudget => Probe::Unknown,
        };
        (p, nodes)
    }

    /// First deletion set (in iteration order) after which no expansion is
    /// left.
    fn sweep(&self, candidates: impl Iterator<Item = Mask>) -> Sweep {
        let mut out = Sweep::default();
        let mut cache: Vec<Mask> = Vec::new();
        let mut candidates = candidates.peekable();
        while candidates.peek().is_some() {
            let batch: Vec<Mask> = candidates.by_ref().take(BATCH).collect();
            let eval = |x: &Mask| self.probe(*x, &cache);
            let results: Vec<(Probe, u64)> = match &self.pool {
                Some(pool) => pool.install(|| batch.par_iter().map(eval).collect()),
                None => batch.iter().map(eval).collect(),
            };
            for (x, (p, nodes)) in batch.iter().zip(results) {
                out.subsets += 1;
                out.nodes = out.nodes.saturating_add(nodes);
                match p {
                    Probe::Contains(Some(m)) if cache.len() < CACHE_LIMIT => cache.push(m),
                    Probe::Contains(_) => {}
                    Probe::Destroyed => {
                        out.witness = Some(*x);
                        out.unknown_before_witness = out.unknown;
                        return out;
                    }
                    Probe::Unknown => out.unknown = true,
                }
            }
        }
        out
    }
}

/// For every deletion set of at most `r - 1` host edges, some `h`
/// expansion satisfying `c` survives.
pub fn check_deletion_robustness(
    claim: &str,
    h: &Graph,
    host: &Graph,
    c: &EmbeddingConstraints,
    r: usize,
    opts: &VerifyOptions,
) -> Result<Report> {
    let start = Instant::now();
    let inst = Instance::new(h, host, c)?;
    let engine = Engine::new(&inst, opts)?;
    let m = inst.g.edges.len();
    let max = r.saturating_sub(1).min(m);
    let mut report = Report::new(claim, opts.seed);

    let total = subset_count(m, max);
    let sweep = if !opts.force_sample && total <= opts.subset_budget as u128 {
        engine.sweep(subsets_up_to(m, max))
    } else {
        report.mode = RunMode::Sampled {
            seed: opts.seed,
            trials: opts.samples,
        };
        report.notes.push(format!(
            "{total} deletion sets exceed the exhaustive budget; sampled sets of size {max}"
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let draws = (0..opts.samples).map(move |_| sample(&mut rng, m, max).iter().fold(0, |acc, e| acc | bit(e)));
        engine.sweep(draws)
    };
    report.stats.subsets_checked = sweep.subsets;
    report.stats.search_nodes = sweep.nodes;
    match sweep.witness {
        Some(x) => report.refute(Witness {
            deleted_edges: Some(inst.g.edge_set_of(x)),
            note: Some(format!("no {h_n}-vertex pattern expansion survives these deletions", h_n = h.vertex_count())),
            ..Witness::default()
        }),
        None if sweep.unknown => report.outcome = Outcome::BudgetExhausted,
        None => {
            if matches!(report.mode, RunMode::Sampled { .. }) {
                report.notes.push("no counterexample found among the samples; not a proof".into());
            }
        }
    }
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

/// Deletion robustness of the gadget built from `(g, ctx, r)`.
pub fn check_gadget_robustness(g: &Graph, ctx: &Graph, r: usize, opts: &VerifyOptions) -> Result<Report> {
    let gx = g_times(g, ctx, r)?;
    check_deletion_robustness("gadget-robustness", g, &gx, &EmbeddingConstraints::none(), r, opts)
}

/// Deletion robustness of an assembled `H*` against `h`.
pub fn check_hstar_robustness(hstar: &Graph, h: &Graph, r: usize, opts: &VerifyOptions) -> Result<Report> {
    check_deletion_robustness("hstar-robustness", h, hstar, &EmbeddingConstraints::none(), r, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingWitness {
    pub embeddings: Vec<MinorEmbedding>,
}

impl PackingWitness {
    /// Pairwise edge-disjointness of the models' used edges.
    pub fn is_edge_disjoint(&self, g: &Graph) -> bool {
        let mut seen: BTreeSet<Edge> = BTreeSet::new();
        self.embeddings
            .iter()
            .all(|m| m.used_edges(g).into_iter().all(|e| seen.insert(e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub count: usize,
    pub witness: PackingWitness,
    /// False when the budget ran out; `count` is then a lower bound.
    pub exhaustive: bool,
    pub search_nodes: u64,
}

/// Largest `t <= cap` such that `g` has `t` pairwise edge-disjoint
/// `h`-expansions. Works on the inclusion-minimal expansion edge sets.
pub fn max_edge_disjoint_packing(h: &Graph, g: &Graph, cap: usize, budget: u64) -> Result<Packing> {
    let inst = Instance::new(h, g, &EmbeddingConstraints::none())?;
    inst.g.require_edge_masks()?;
    let mut meter = Meter::new(budget);
    let (found, mut exhaustive) = enumerate_masks(&inst, &mut meter);
    let sets: Vec<(Mask, Vec<Mask>)> = found.into_iter().collect();
    let embed = |i: usize| {
        let (edges, branch) = &sets[i];
        inst.embedding(&inst.g.adjacency_of(*edges), branch)
    };

    let mut chosen: Vec<usize> = Vec::new();
    if cap > 0 && sets.first().is_some_and(|(e, _)| *e == 0) {
        // an edgeless model can be reused without sharing edges
        chosen = vec![0; cap];
    } else {
        let min_size = sets.iter().map(|(e, _)| count(*e)).min().unwrap_or(1).max(1);
        let mut nodes = 0u64;
        for t in 1..=cap {
            let mut pick = Vec::with_capacity(t);
            match pack(&sets, t, 0, 0, min_size, &mut pick, &mut nodes, budget.saturating_sub(meter.used)) {
                Some(true) => chosen = pick,
                Some(false) => break,
                None => {
                    exhaustive = false;
                    break;
                }
            }
        }
        meter.used = meter.used.saturating_add(nodes);
    }
    Ok(Packing {
        count: chosen.len(),
        witness: PackingWitness {
            embeddings: chosen.iter().map(|&i| embed(i)).collect(),
        },
        exhaustive,
        search_nodes: meter.used,
    })
}

/// Picks `t` more pairwise disjoint sets with index `>= from` avoiding
/// `used`. `None` when the node budget runs out.
#[allow(clippy::too_many_arguments)]
fn pack(
    sets: &[(Mask, Vec<Mask>)],
    t: usize,
    from: usize,
    used: Mask,
    min_size: usize,
    pick: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> Option<bool> {
    if pick.len() == t {
        return Some(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    let all: Mask = sets.iter().fold(0, |acc, (e, _)| acc | e);
    if count(all & !used) < (t - pick.len()) * min_size {
        return Some(false);
    }
    for i in from..sets.len() {
        if sets[i].0 & used != 0 {
            continue;
        }
        pick.push(i);
        match pack(sets, t, i + 1, used | sets[i].0, min_size, pick, nodes, budget) {
            Some(false) => {}
            other => return other,
        }
        pick.pop();
    }
    Some(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "edges", rename_all = "kebab-case")]
pub enum HittingSet {
    Found(EdgeSet),
    /// Every set of at most `bound` edges leaves an expansion.
    None,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingOutcome {
    pub result: HittingSet,
    pub subsets_checked: u64,
    pub search_nodes: u64,
}

/// Smallest edge set of size at most `bound` whose deletion leaves no
/// `h`-expansion (first in lexicographic order among the smallest).
pub fn min_edge_hitting_set(h: &Graph, g: &Graph, bound: usize, opts: &VerifyOptions) -> Result<HittingOutcome> {
    let inst = Instance::new(h, g, &EmbeddingConstraints::none())?;
    let engine = Engine::new(&inst, opts)?;
    let m = inst.g.edges.len();
    let truncated = subset_count(m, bound) > opts.subset_budget as u128;
    let sweep = engine.sweep(subsets_up_to(m, bound).take(opts.subset_budget.min(usize::MAX as u64) as usize));
    let result = match sweep.witness {
        Some(_) if sweep.unknown_before_witness => HittingSet::BudgetExhausted,
        Some(x) => HittingSet::Found(inst.g.edge_set_of(x)),
        None if sweep.unknown || truncated => HittingSet::BudgetExhausted,
        None => HittingSet::None,
    };
    Ok(HittingOutcome {
        result,
        subsets_checked: sweep.subsets,
        search_nodes: sweep.nodes,
    })
}

/// Every inclusion-minimal `h`-expansion in `hstar` restricted to
/// `region` (its vertices there and its edges inside) still contains an
/// `a`-expansion.
pub fn check_expansion_locality(
    h: &Graph,
    hstar: &Graph,
    a: &Graph,
    region: &BTreeSet<VertexLabel>,
    opts: &VerifyOptions,
) -> Result<Report> {
    let start = Instant::now();
    if let Some(v) = region.iter().find(|v| !hstar.has_vertex(v)) {
        return Err(Error::MissingVertex(v.clone()));
    }
    let inst = Instance::new(h, hstar, &EmbeddingConstraints::none())?;
    inst.g.require_edge_masks()?;
    let region_mask = inst.g.mask_of(region)?;
    let mut meter = Meter::new(opts.node_budget);
    let (found, complete) = enumerate_masks(&inst, &mut meter);
    let mut report = Report::new("expansion-locality", opts.seed);
    report.stats.subsets_checked = found.len() as u64;
    let mut unknown = !complete;
    for (&edges, sets) in &found {
        let vertices = sets.iter().fold(0, |acc, s| acc | s) & region_mask;
        let mut b = Graph::builder();
        for v in inst.g.labels_of(vertices) {
            b.ensure_vertex(v.clone());
        }
        for e in ones(edges) {
            let (x, y) = inst.g.edges[e];
            if vertices & bit(x) != 0 && vertices & bit(y) != 0 {
                b.add_edge(inst.g.labels[x].clone(), inst.g.labels[y].clone())?;
            }
        }
        let restricted = b.build()?;
        let out = find_expansion(a, &restricted, &EmbeddingConstraints::none(), opts.node_budget)?;
        meter.used = meter.used.saturating_add(out.nodes);
        match out.result {
            Expansion::Found(_) => {}
            Expansion::None => {
                report.refute(Witness {
                    embedding: Some(inst.embedding(&inst.g.adjacency_of(edges), sets)),
                    note: Some("the part of this expansion inside the region has no expansion of the component".into()),
                    ..Witness::default()
                });
                unknown = false;
                break;
            }
            Expansion::BudgetExhausted => unknown = true,
        }
    }
    if unknown {
        report.outcome = Outcome::BudgetExhausted;
    }
    report.stats.search_nodes = meter.used;
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

/// Checks a counterexample spec for pattern `a`: fewer than `k`
/// edge-disjoint `a`-expansions in A*, and a rooted expansion surviving
/// every deletion of at most `r - 1` edges.
pub fn check_generic_counterexample(a: &Graph, spec: &AstarSpec, opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let packing = max_edge_disjoint_packing(a, &spec.astar, spec.k, opts.node_budget)?;
    if packing.count >= spec.k {
        let mut report = Report::new("generic-counterexample", opts.seed);
        report.stats.search_nodes = packing.search_nodes;
        report.refute(Witness {
            packing: Some(packing.witness.embeddings),
            note: Some(format!("{} edge-disjoint expansions in A*", spec.k)),
            ..Witness::default()
        });
        report.stats.elapsed = start.elapsed();
        return Ok(report);
    }
    let c = EmbeddingConstraints::rooted(spec.roots.clone());
    let mut report = check_deletion_robustness("generic-counterexample", a, &spec.astar, &c, spec.r, opts)?;
    report.stats.search_nodes = report.stats.search_nodes.saturating_add(packing.search_nodes);
    report
        .notes
        .insert(0, format!("packing in A* with cap {}: {}", spec.k, packing.count));
    if !packing.exhaustive && report.holds() {
        report.outcome = Outcome::BudgetExhausted;
    }
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

/// Compares the number of vertices of degree at least 3 in the gadget
/// with the number of branch vertices of `g` in `ctx`.
pub fn check_branch_count(g: &Graph, ctx: &Graph, r: usize) -> Result<Report> {
    let start = Instant::now();
    if r < 3 {
        return Err(Error::Precondition(format!("branch count needs r >= 3, got {r}")));
    }
    let expected = branch_vertices(g, ctx)?.len();
    let gx = g_times(g, ctx, r)?;
    let actual = gx.vertices().filter(|v| gx.degree(v).unwrap() >= 3).count();
    let mut report = Report::new("branch-count", 0);
    report.notes.push(format!("branch vertices {expected}, gadget vertices of degree >= 3 {actual}"));
    if expected != actual {
        report.refute(Witness {
            graph: Some(serialize(&gx, Format::EdgeList)),
            note: Some(format!("expected {expected}, found {actual}")),
            ..Witness::default()
        });
    }
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

fn random_step(g: &Graph, rng: &mut ChaCha8Rng) -> Result<(Graph, MinorStep)> {
    let edges: Vec<Edge> = g.edges().collect();
    let op = if edges.is_empty() { 2 } else { rng.gen_range(0..3) };
    match op {
        0 => {
            let e = edges[rng.gen_range(0..edges.len())].clone();
            let x: EdgeSet = [e.clone()].into_iter().collect();
            Ok((g.delete_edges(&x)?, MinorStep::DeleteEdge { edge: e }))
        }
        1 => {
            let e = &edges[rng.gen_range(0..edges.len())];
            let (keep, merge) = e.endpoints();
            let step = MinorStep::Contract {
                keep: keep.clone(),
                merge: merge.clone(),
            };
            Ok((g.contract_edge(keep, merge)?, step))
        }
        _ => {
            let vs: Vec<&VertexLabel> = g.vertices().collect();
            let v = vs[rng.gen_range(0..vs.len())].clone();
            Ok((g.delete_vertex(&v)?, MinorStep::DeleteVertex { vertex: v }))
        }
    }
}

/// For each corpus graph without the property, samples `trials` random
/// minor sequences and checks that no intermediate minor has it.
pub fn check_hereditary_sampled(pred: &PropertyPredicate, corpus: &[Graph], trials: u64, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("hereditary", seed);
    report.mode = RunMode::Sampled { seed, trials };
    let mut skipped = 0;
    'corpus: for g in corpus {
        if pred.holds(g)? {
            skipped += 1;
            continue;
        }
        for _ in 0..trials {
            let mut cur = g.clone();
            let mut steps = Vec::new();
            let len = rng.gen_range(1..=g.vertex_count() + g.edge_count()).max(1);
            for _ in 0..len {
                if cur.is_empty() {
                    break;
                }
                let (next, step) = random_step(&cur, &mut rng)?;
                cur = next;
                steps.push(step);
                report.stats.subsets_checked += 1;
                if pred.holds(&cur)? {
                    report.refute(Witness {
                        graph: Some(serialize(g, Format::EdgeList)),
                        minor_steps: Some(steps),
                        note: Some(format!("this minor has property {}", pred.name)),
                        ..Witness::default()
                    });
                    break 'corpus;
                }
            }
        }
    }
    report.notes.push(format!("{skipped} corpus graphs already have the property and were skipped"));
    if report.holds() {
        report.notes.push("no counterexample found among the samples; not a proof".into());
    }
    report.stats.elapsed = start.elapsed();
    Ok(report)
}

//! Acceptance suite. Each test prints one PASS/FAIL line straight to
//! stdout so the lines survive output capture.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use epcheck::decomposition::{
    block_cut_tree, branch_vertices, connected_components, segment_decomposition, PropertyPredicate,
    SegmentKind,
};
use epcheck::gadgets::{astar_region, g_times, h_star_blocks, h_star_components, thin_bundle, GadgetRecipe, Mode};
use epcheck::graph::union_with_map;
use epcheck::minor::{find_expansion, naive_is_minor_oracle, verify_embedding, EmbeddingConstraints, Expansion, UNBOUNDED};
use epcheck::verify::{
    check_branch_count, check_expansion_locality, check_gadget_robustness, check_generic_counterexample,
    check_hstar_robustness, max_edge_disjoint_packing, min_edge_hitting_set, HittingSet, Report, VerifyOptions,
};
use epcheck::{Edge, EdgeSet, Graph, VertexLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, title: &str, ok: bool, detail: &str, took: Duration, limit: Duration) -> bool {
    let pass = ok && took < limit;
    let line = format!(
        "acceptance criterion {n} ({title}): {} | {detail} | {:.2}s of {}s\n",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn exhaustive() -> VerifyOptions {
    VerifyOptions::default()
}

/// Graph pairs of criteria 1 and 7.
fn corpus() -> Vec<(Graph, Graph)> {
    let small: Vec<Graph> = (1..=5).flat_map(nonisomorphic).collect();
    let mut pairs = Vec::new();
    for h in small.iter().filter(|h| h.vertex_count() <= 4) {
        for g in &small {
            pairs.push((h.clone(), g.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    for _ in 0..200 {
        let nh = rng.gen_range(1..=4);
        let ph = rng.gen_range(0.2..0.9);
        let pg = rng.gen_range(0.2..0.8);
        let h = random_graph(&mut rng, nh, ph);
        let g = random_graph(&mut rng, 6, pg);
        pairs.push((h, g));
    }
    pairs
}

#[test]
fn criterion_1_minor_oracle_equivalence() {
    let start = Instant::now();
    let pairs = corpus();
    let classes: Vec<usize> = (1..=5).map(|n| nonisomorphic(n).len()).collect();
    let mut disagreements = Vec::new();
    let mut unsound = 0;
    for (h, g) in &pairs {
        let out = find_expansion(h, g, &EmbeddingConstraints::none(), UNBOUNDED).unwrap();
        let expected = naive_is_minor_oracle(h, g).unwrap();
        if let Expansion::Found(m) = &out.result {
            if !verify_embedding(h, g, m) {
                unsound += 1;
            }
        }
        if out.result.is_found() != expected || out.result == Expansion::BudgetExhausted {
            disagreements.push((h.clone(), g.clone()));
        }
    }
    let ok = classes == vec![1, 2, 4, 11, 34] && disagreements.is_empty() && unsound == 0;
    let detail = format!(
        "{} pairs ({} enumerated + 200 random), {} disagreements, {} invalid models",
        pairs.len(),
        pairs.len() - 200,
        disagreements.len(),
        unsound
    );
    assert!(
        verdict(1, "minor oracle equivalence", ok, &detail, start.elapsed(), secs(120)),
        "{detail}; first: {:?}",
        disagreements.first()
    );
}

#[test]
fn criterion_2_block_cut_tree() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut bad = Vec::new();
    let mut blocks_seen = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=9);
        let p = rng.gen_range(0.0..0.45);
        let g = random_connected(&mut rng, n, p);
        let t = block_cut_tree(&g).unwrap();
        let got: BTreeSet<(BTreeSet<VertexLabel>, BTreeSet<Edge>)> = t
            .blocks
            .iter()
            .map(|b| (b.vertices.clone(), b.edges.iter().cloned().collect()))
            .collect();
        blocks_seen += t.blocks.len();
        let trivial_ok = t.blocks.iter().all(|b| b.trivial == (b.edges.len() == 1));
        let cuts = oracle_cutvertices(&g);
        let incidences: BTreeSet<(usize, VertexLabel)> = t
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.vertices.iter().filter(|v| cuts.contains(*v)).map(move |v| (i, v.clone())))
            .collect();
        let adjacency: BTreeSet<(usize, VertexLabel)> = t.adjacency.iter().cloned().collect();
        if got != oracle_blocks(&g) || t.cutvertices != cuts || !trivial_ok || adjacency != incidences {
            bad.push(g);
        }
    }
    let detail = format!("500 graphs, {blocks_seen} blocks, {} disagreements", bad.len());
    assert!(
        verdict(2, "block-cut tree", bad.is_empty(), &detail, start.elapsed(), secs(60)),
        "{detail}; first: {:?}",
        bad.first()
    );
}

/// Reports of criterion 3 plus whether the fault witnesses re-verify.
fn run_criterion_3(opts: &VerifyOptions) -> (Vec<String>, bool, String) {
    let (gg, ctx) = square_with_tail();
    let holds = check_gadget_robustness(&gg, &ctx, 3, opts).unwrap();
    let gx = g_times(&gg, &ctx, 3).unwrap();
    // segment 1 is the v-w edge; with its bundle gone only the three v-u1-u2-w copies carry the cycle
    let faulty = thin_bundle(&gx, 1, 0).unwrap();
    let fault = epcheck::verify::check_deletion_robustness(
        "gadget-robustness",
        &gg,
        &faulty,
        &EmbeddingConstraints::none(),
        3,
        opts,
    )
    .unwrap();

    // a double star with one bundle cut down to a single path at r = 2
    let star2 = g(&[("v", "w"), ("v", "a"), ("v", "b"), ("w", "c"), ("w", "d")]);
    let sx = g_times(&star2, &star2, 2).unwrap();
    let between = segment_decomposition(&star2, &star2)
        .unwrap()
        .iter()
        .position(|s| s.kind == SegmentKind::Between)
        .unwrap();
    let thin = thin_bundle(&sx, between, 1).unwrap();
    let fault2 =
        epcheck::verify::check_deletion_robustness("gadget-robustness", &star2, &thin, &EmbeddingConstraints::none(), 2, opts)
            .unwrap();

    let reverified = reverify(&gg, &faulty, &fault, 2) && reverify(&star2, &thin, &fault2, 1);
    let ok = holds.holds() && holds.mode == epcheck::verify::RunMode::Exhaustive && reverified;
    let detail = format!(
        "G^x holds over {} deletion sets; thinned bundle refuted by {:?}; double star refuted by {:?}",
        holds.stats.subsets_checked,
        fault.witness().and_then(|w| w.deleted_edges.as_ref()).map(edge_names),
        fault2.witness().and_then(|w| w.deleted_edges.as_ref()).map(edge_names),
    );
    (vec![holds.to_json(), fault.to_json(), fault2.to_json()], ok, detail)
}

fn edge_names(x: &EdgeSet) -> Vec<String> {
    x.iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            format!("{a}-{b}")
        })
        .collect()
}

/// The witness deletes at most `max` host edges and leaves no expansion.
fn reverify(h: &Graph, host: &Graph, report: &Report, max: usize) -> bool {
    let Some(x) = report.witness().and_then(|w| w.deleted_edges.clone()) else {
        return false;
    };
    if x.len() > max || !x.iter().all(|e| host.has_edge(e)) {
        return false;
    }
    let rest = host.delete_edges(&x).unwrap();
    find_expansion(h, &rest, &EmbeddingConstraints::none(), UNBOUNDED).unwrap().result == Expansion::None
}

#[test]
fn criterion_3_gadget_robustness() {
    let start = Instant::now();
    let (_, ok, detail) = run_criterion_3(&exhaustive());
    assert!(verdict(3, "G^x robustness", ok, &detail, start.elapsed(), secs(120)), "{detail}");
}

/// Random connected subgraph of a random context with at least one edge
/// and one branch vertex.
fn branch_instance(rng: &mut ChaCha8Rng) -> (Graph, Graph, usize) {
    loop {
        let n = rng.gen_range(3..=9);
        let p = rng.gen_range(0.05..0.5);
        let ctx = random_connected(rng, n, p);
        let kept: EdgeSet = ctx.edges().filter(|_| rng.gen_bool(0.7)).collect();
        let sub = ctx.edge_subgraph(&kept).unwrap();
        let Some(g) = connected_components(&sub).into_iter().max_by_key(|c| c.edge_count()) else {
            continue;
        };
        if g.edge_count() == 0 || g.vertices().all(|v| ctx.degree(v).unwrap() < 3) {
            continue;
        }
        return (g, ctx, rng.gen_range(3..=4));
    }
}

fn run_criterion_4() -> (Vec<String>, bool, String) {
    let (gg, ctx) = square_with_tail();
    let sample = check_branch_count(&gg, &ctx, 4).unwrap();
    let sample_ok = sample.holds() && branch_vertices(&gg, &ctx).unwrap().len() == 2;
    let mut reports = vec![sample.to_json()];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let mut failures = 0;
    for _ in 0..100 {
        let (g, ctx, r) = branch_instance(&mut rng);
        // independent count: degree >= 3 after the construction, against degree >= 3 in the context
        let expected = g.vertices().filter(|v| ctx.degree(v).unwrap() >= 3).count();
        let gx = g_times(&g, &ctx, r).unwrap();
        let actual = gx.vertices().filter(|v| gx.degree(v).unwrap() >= 3).count();
        let report = check_branch_count(&g, &ctx, r).unwrap();
        if expected != actual || !report.holds() {
            failures += 1;
        }
        reports.push(report.to_json());
    }
    let detail = format!("square with tail 2 = 2: {sample_ok}; 100 random instances, {failures} mismatches");
    (reports, sample_ok && failures == 0, detail)
}

#[test]
fn criterion_4_branch_count() {
    let start = Instant::now();
    let (_, ok, detail) = run_criterion_4();
    assert!(verdict(4, "branch-count identity", ok, &detail, start.elapsed(), secs(30)), "{detail}");
}

fn run_criterion_5(opts: &VerifyOptions) -> (Vec<String>, bool, String) {
    let h = union_with_map(&[complete("a", 4), g(&[("p", "q")])], &[]).unwrap().graph;
    let a = connected_components(&h).into_iter().find(|c| c.vertex_count() == 4).unwrap();
    let sp = spec(complete("z", 5), &[], 4, 2);
    let generic = check_generic_counterexample(&a, &sp, opts).unwrap();
    let recipe = GadgetRecipe {
        mode: Mode::ComponentWise,
        h: h.clone(),
        a: Some(a.clone()),
        spec: sp.clone(),
        r: 2,
        predicate: None,
    };
    let (hs, _) = recipe.build().unwrap();
    let same = hs.same_structure(&h_star_components(&h, &a, &sp, 2).unwrap());
    let robust = check_hstar_robustness(&hs, &h, 2, opts).unwrap();
    let local = check_expansion_locality(&h, &hs, &a, &astar_region(&hs), opts).unwrap();
    let packing = max_edge_disjoint_packing(&h, &hs, 4, opts.node_budget).unwrap();
    let exhaustive = [&generic, &robust]
        .iter()
        .all(|r| r.mode == epcheck::verify::RunMode::Exhaustive);
    let ok = same
        && generic.holds()
        && robust.holds()
        && local.holds()
        && exhaustive
        && packing.exhaustive
        && packing.count < 4;
    let detail = format!(
        "H* has {} vertices, {} edges; generic {:?}, robustness {:?} over {} sets, locality {:?} over {} minimal expansions, packing {}",
        hs.vertex_count(),
        hs.edge_count(),
        generic.exit_code(),
        robust.exit_code(),
        robust.stats.subsets_checked,
        local.exit_code(),
        local.stats.subsets_checked,
        packing.count
    );
    let reports = vec![
        generic.to_json(),
        robust.to_json(),
        local.to_json(),
        serde_json::to_string_pretty(&packing).unwrap(),
    ];
    (reports, ok, detail)
}

#[test]
fn criterion_5_component_instance() {
    let start = Instant::now();
    let (_, ok, detail) = run_criterion_5(&exhaustive());
    assert!(verdict(5, "component-wise instance", ok, &detail, start.elapsed(), secs(300)), "{detail}");
}

fn run_criterion_6(opts: &VerifyOptions) -> (Vec<String>, bool, String) {
    let h = g(&[("s", "b"), ("b", "c"), ("s", "c"), ("s", "d")]);
    let tri = g(&[("x", "y"), ("y", "z"), ("x", "z")]);
    let recipe = GadgetRecipe {
        mode: Mode::BlockWise,
        h: h.clone(),
        a: None,
        spec: spec(complete("z", 5), &[("s", "z1")], 4, 2),
        r: 2,
        predicate: Some(PropertyPredicate::contains_minor("K3", tri)),
    };
    let (hs, trace) = h_star_blocks(&recipe).unwrap();
    let trace_ok = trace.leaf_block == "{b,c,s}"
        && trace.c_blocks.is_empty()
        && trace.b_blocks.is_empty()
        && trace.b_paths.is_empty()
        && trace.d_components == vec!["{d,s}".to_string()];

    let region = astar_region(&hs);
    let root = hs
        .vertices()
        .find(|v| hs.origin(v).and_then(|o| o.source()).map(VertexLabel::as_str) == Some("z1"))
        .cloned();
    let shape_ok = root.as_ref().is_some_and(|s| {
        let outside: Vec<&VertexLabel> = hs.vertices().filter(|v| !region.contains(*v)).collect();
        region.len() == 5
            && hs.induced_subgraph(&region).edge_count() == 10
            && hs.vertex_count() == 7
            && hs.edge_count() == 12
            && outside.len() == 2
            && outside
                .iter()
                .all(|v| hs.degree(v).unwrap() == 1 && hs.neighbors(v).unwrap().contains(s))
    });

    let a = block_cut_tree(&h).unwrap().blocks.into_iter().find(|b| !b.trivial).unwrap().graph();
    let robust = check_hstar_robustness(&hs, &h, 2, opts).unwrap();
    let local = check_expansion_locality(&h, &hs, &a, &region, opts).unwrap();
    let packing = max_edge_disjoint_packing(&h, &hs, 4, opts.node_budget).unwrap();
    let ok = trace_ok
        && shape_ok
        && robust.holds()
        && robust.mode == epcheck::verify::RunMode::Exhaustive
        && local.holds()
        && packing.exhaustive
        && packing.count < 4;
    let detail = format!(
        "trace {trace_ok}, K5 plus 2 pendants at the root {shape_ok}; robustness {:?} over {} sets, locality {:?}, packing {}",
        robust.exit_code(),
        robust.stats.subsets_checked,
        local.exit_code(),
        packing.count
    );
    let reports = vec![
        serde_json::to_string_pretty(&trace).unwrap(),
        robust.to_json(),
        local.to_json(),
        serde_json::to_string_pretty(&packing).unwrap(),
    ];
    (reports, ok, detail)
}

#[test]
fn criterion_6_block_instance() {
    let start = Instant::now();
    let (_, ok, detail) = run_criterion_6(&exhaustive());
    assert!(verdict(6, "block-wise instance", ok, &detail, start.elapsed(), secs(120)), "{detail}");
}

#[test]
fn criterion_7_duality() {
    let start = Instant::now();
    let opts = exhaustive();
    let mut compared = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    for (h, g) in corpus() {
        let m = g.edge_count();
        let packing = max_edge_disjoint_packing(&h, &g, m + 1, opts.node_budget).unwrap();
        let hitting = min_edge_hitting_set(&h, &g, m, &opts).unwrap();
        let hit = match hitting.result {
            HittingSet::Found(x) => x.len(),
            HittingSet::None => usize::MAX,
            HittingSet::BudgetExhausted => {
                skipped += 1;
                continue;
            }
        };
        if !packing.exhaustive {
            skipped += 1;
            continue;
        }
        compared += 1;
        if hit < packing.count {
            violations.push((h, g, hit, packing.count));
        }
    }
    let detail = format!("{compared} pairs compared, {skipped} skipped, {} violations", violations.len());
    assert!(
        verdict(7, "hitting >= packing", violations.is_empty(), &detail, start.elapsed(), secs(120)),
        "{detail}; first: {:?}",
        violations.first()
    );
}

fn all_reports(opts: &VerifyOptions) -> Vec<String> {
    let mut out = run_criterion_3(opts).0;
    out.extend(run_criterion_4().0);
    out.extend(run_criterion_5(opts).0);
    out.extend(run_criterion_6(opts).0);
    out
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let first = all_reports(&exhaustive());
    let second = all_reports(&exhaustive());
    let parallel = all_reports(&VerifyOptions {
        jobs: 4,
        ..exhaustive()
    });
    let ok = first == second && first == parallel;
    let detail = format!(
        "{} reports, {} bytes, repeat identical {}, 4 workers identical {}",
        first.len(),
        first.iter().map(String::len).sum::<usize>(),
        first == second,
        first == parallel
    );
    assert!(verdict(8, "determinism", ok, &detail, start.elapsed(), secs(600)), "{detail}");
}

//! `epcheck`: decompositions, gadget construction and verification runs
//! from the command line.
//!
//! Exit codes: 0 holds or success, 1 refuted, 2 budget exhausted,
//! 64 usage error, 65 malformed input or violated precondition,
//! 66 unreadable input, 74 output error.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use epcheck::decomposition::{
    block_cut_tree, classify_max_degree2, connected_components, segment_decomposition, PropertyPredicate,
};
use epcheck::format::{label_set, parse_any, serialize, Format};
use epcheck::gadgets::{astar_region, g_times, h_star_blocks, h_star_components, load_astar_spec, GadgetRecipe, Mode};
use epcheck::minor::{find_expansion, verify_embedding, EmbeddingConstraints, Expansion, MinorEmbedding};
use epcheck::verify::{
    check_branch_count, check_expansion_locality, check_gadget_robustness,
    check_generic_counterexample, check_hereditary_sampled, check_hstar_robustness, max_edge_disjoint_packing,
    min_edge_hitting_set, HittingSet, Report, VerifyOptions, DEFAULT_NODE_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED,
    DEFAULT_SUBSET_BUDGET,
};
use epcheck::{EdgeSet, Error, Graph, VertexLabel};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NOINPUT: u8 = 66;
const EXIT_IO: u8 = 74;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Dot,
    EdgeList,
}

#[derive(Parser, Debug)]
#[command(name = "epcheck", version, about = "Edge-Erdős–Pósa gadget workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Search nodes per expansion search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = positive_u64)]
    budget: u64,
    /// Deletion sets enumerated before sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_BUDGET, value_parser = positive_u64)]
    subsets: u64,
    /// Samples drawn when a check falls back to sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES, value_parser = positive_u64)]
    samples: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for batched checks.
    #[arg(long, global = true, default_value_t = 1, value_parser = positive_usize)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Sample instead of enumerating exhaustively.
    #[arg(long, global = true)]
    force_sample: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the witness of a refutation to this file.
    #[arg(long, global = true)]
    witness_out: Option<PathBuf>,
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    positive_u64(s).map(|v| v as usize)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Connected components.
    Components { graph: PathBuf },
    /// Block-cut tree of a connected graph.
    Blocks { graph: PathBuf },
    /// Segments relative to the branch vertices of a context graph.
    Segments {
        graph: PathBuf,
        #[arg(long)]
        ctx: PathBuf,
    },
    /// Cycle, path, isolated vertex, or has a vertex of degree >= 3.
    Classify { graph: PathBuf },
    /// Build the segment-replicating gadget.
    Gtimes {
        graph: PathBuf,
        #[arg(long)]
        ctx: PathBuf,
        #[arg(short = 'r', value_parser = positive_usize)]
        r: usize,
    },
    /// Component-wise H*.
    Hstar1 {
        h: PathBuf,
        /// Graph equal to one component of h.
        a: PathBuf,
        spec: PathBuf,
        /// Copies per component; defaults to the spec's r.
        #[arg(short = 'r', value_parser = positive_usize)]
        r: Option<usize>,
    },
    /// Block-wise H* for the property "contains F as a minor".
    Hstar2 {
        h: PathBuf,
        spec: PathBuf,
        /// The graph F.
        #[arg(long)]
        minor: PathBuf,
        #[arg(short = 'r', value_parser = positive_usize)]
        r: Option<usize>,
    },
    /// Search for an h-expansion in g, or re-check a witness.
    Minor {
        h: PathBuf,
        g: PathBuf,
        /// Rooting constraint `s=x`: the branch set of s contains x.
        #[arg(long = "root")]
        roots: Vec<String>,
        /// Report or witness JSON to confirm against (h, g).
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Maximum number of edge-disjoint h-expansions in g.
    Pack {
        h: PathBuf,
        g: PathBuf,
        #[arg(long, value_parser = positive_usize)]
        cap: usize,
    },
    /// Smallest edge set meeting every h-expansion in g.
    Hit {
        h: PathBuf,
        g: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// Deletion robustness: of the gadget (`--ctx`) or of a host (`--host`).
    Robust {
        h: PathBuf,
        #[arg(long, conflicts_with = "host", required_unless_present = "host")]
        ctx: Option<PathBuf>,
        #[arg(long)]
        host: Option<PathBuf>,
        #[arg(short = 'r', value_parser = positive_usize)]
        r: usize,
    },
    /// Every h-expansion in H* has an a-expansion inside the A* region.
    Locality {
        h: PathBuf,
        a: PathBuf,
        /// Build H* component-wise from this spec (region from provenance).
        #[arg(long, required_unless_present = "hstar")]
        spec: Option<PathBuf>,
        #[arg(short = 'r', value_parser = positive_usize)]
        r: Option<usize>,
        /// Prebuilt H*; needs `--region`.
        #[arg(long, conflicts_with = "spec", requires = "region")]
        hstar: Option<PathBuf>,
        /// Whitespace-separated labels of the A* region.
        #[arg(long)]
        region: Option<PathBuf>,
    },
    /// Validate a counterexample spec for pattern a.
    Gencheck { a: PathBuf, spec: PathBuf },
    /// Compare degree->=3 counts of the gadget with the branch vertices.
    Branchcount {
        graph: PathBuf,
        #[arg(long)]
        ctx: PathBuf,
        #[arg(short = 'r', value_parser = positive_usize)]
        r: usize,
    },
    /// Sample random minors of corpus graphs lacking an F-minor.
    Hereditary {
        #[arg(long)]
        minor: PathBuf,
        #[arg(required = true)]
        corpus: Vec<PathBuf>,
        #[arg(long, default_value_t = 100, value_parser = positive_u64)]
        trials: u64,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(EXIT_DATA, e.to_string())
    }
}

type Run = Result<u8, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_NOINPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Graph, Fail> {
    parse_any(&read(path)?).map_err(|e| Fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

struct Ctx {
    run: RunConfig,
}

impl Ctx {
    fn opts(&self) -> VerifyOptions {
        VerifyOptions {
            node_budget: self.run.budget,
            subset_budget: self.run.subsets,
            seed: self.run.seed,
            jobs: self.run.jobs,
            force_sample: self.run.force_sample,
            samples: self.run.samples,
        }
    }

    fn emit(&self, text: &str) -> Result<(), Fail> {
        let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
        match &self.run.out {
            Some(p) => fs::write(p, text).map_err(|e| Fail(EXIT_IO, format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json(&self, v: &Value) -> Result<(), Fail> {
        self.emit(&serde_json::to_string_pretty(v).expect("json values serialize"))
    }

    fn emit_graph(&self, g: &Graph) -> Result<(), Fail> {
        match self.run.format {
            OutFormat::Dot => self.emit(&serialize(g, Format::Dot)),
            OutFormat::Json => self.emit_json(&json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "edge_list": serialize(g, Format::EdgeList),
            })),
            OutFormat::Text | OutFormat::EdgeList => self.emit(&serialize(g, Format::EdgeList)),
        }
    }

    fn emit_report(&self, report: &Report) -> Run {
        if let (Some(path), Some(w)) = (&self.run.witness_out, report.witness()) {
            let text = serde_json::to_string_pretty(w).expect("witnesses serialize");
            fs::write(path, text).map_err(|e| Fail(EXIT_IO, format!("{}: {e}", path.display())))?;
        }
        match self.run.format {
            OutFormat::Json => self.emit(&report.to_json())?,
            _ => self.emit(&report_text(report))?,
        }
        Ok(report.exit_code() as u8)
    }
}

fn report_text(r: &Report) -> String {
    let status = match r.exit_code() {
        0 => "holds",
        1 => "refuted",
        _ => "budget-exhausted",
    };
    let mode = match r.mode {
        epcheck::verify::RunMode::Exhaustive => "exhaustive".to_string(),
        epcheck::verify::RunMode::Sampled { seed, trials } => format!("sampled seed={seed} trials={trials}"),
    };
    let mut out = format!(
        "{}: {status} ({mode}) seed={} subsets={} nodes={}\n",
        r.claim, r.seed, r.stats.subsets_checked, r.stats.search_nodes
    );
    for n in &r.notes {
        out.push_str(&format!("  {n}\n"));
    }
    if let Some(w) = r.witness() {
        out.push_str(&serde_json::to_string_pretty(w).expect("witnesses serialize"));
        out.push('\n');
    }
    out
}

fn parse_roots(roots: &[String]) -> Result<BTreeMap<VertexLabel, VertexLabel>, Fail> {
    roots
        .iter()
        .map(|r| {
            let (s, x) = r
                .split_once('=')
                .ok_or_else(|| Fail(EXIT_USAGE, format!("--root expects s=x, got {r:?}")))?;
            Ok((VertexLabel::new(s)?, VertexLabel::new(x)?))
        })
        .collect()
}

fn find_component(h: &Graph, a: &Graph) -> Result<Graph, Fail> {
    connected_components(h)
        .into_iter()
        .find(|c| c.same_structure(a))
        .ok_or_else(|| Fail(EXIT_DATA, "the given graph is not a component of h".into()))
}

fn build_hstar1(h: &Path, a: &Path, spec: &Path, r: Option<usize>) -> Result<(Graph, Graph, Graph), Fail> {
    let (h, a) = (load(h)?, load(a)?);
    let a = find_component(&h, &a)?;
    let spec = load_astar_spec(&read(spec)?)?;
    let hs = h_star_components(&h, &a, &spec, r.unwrap_or(spec.r))?;
    Ok((h, a, hs))
}

/// Confirms a witness against `(h, g)` without reusing the verifier that
/// produced it.
fn confirm_witness(h: &Graph, g: &Graph, doc: &Value, budget: u64) -> Result<(bool, Vec<String>), Fail> {
    let w = doc.pointer("/outcome/witness").unwrap_or(doc);
    let bad = |e: serde_json::Error| Fail(EXIT_DATA, format!("malformed witness: {e}"));
    let mut lines = Vec::new();
    let mut ok = true;
    let mut checked = false;
    if let Some(x) = w.get("deleted_edges") {
        checked = true;
        let x: EdgeSet = serde_json::from_value(x.clone()).map_err(bad)?;
        let rest = g.delete_edges(&x)?;
        let out = find_expansion(h, &rest, &EmbeddingConstraints::none(), budget)?;
        let fine = out.result == Expansion::None;
        lines.push(format!(
            "deleting {} edges leaves {}",
            x.len(),
            match out.result {
                Expansion::None => "no expansion (exhaustive)",
                Expansion::Found(_) => "an expansion",
                Expansion::BudgetExhausted => "an undecided instance (budget)",
            }
        ));
        ok &= fine;
    }
    if let Some(m) = w.get("embedding") {
        checked = true;
        let m: MinorEmbedding = serde_json::from_value(m.clone()).map_err(bad)?;
        let fine = verify_embedding(h, g, &m);
        lines.push(format!("embedding {}", if fine { "verifies" } else { "does not verify" }));
        ok &= fine;
    }
    if let Some(p) = w.get("packing") {
        checked = true;
        let ms: Vec<MinorEmbedding> = serde_json::from_value(p.clone()).map_err(bad)?;
        let mut used = BTreeSet::new();
        let fine = ms.iter().all(|m| verify_embedding(h, g, m))
            && ms.iter().all(|m| m.used_edges(g).into_iter().all(|e| used.insert(e)));
        lines.push(format!(
            "{} embeddings {} pairwise edge-disjoint",
            ms.len(),
            if fine { "verify and are" } else { "fail to verify or are not" }
        ));
        ok &= fine;
    }
    if !checked {
        return Err(Fail(EXIT_DATA, "witness has nothing checkable against (h, g)".into()));
    }
    Ok((ok, lines))
}

fn run(cli: Cli) -> Run {
    let cx = Ctx { run: cli.run };
    let json = cx.run.format == OutFormat::Json;
    match cli.command {
        Command::Components { graph } => {
            let comps = connected_components(&load(&graph)?);
            if json {
                let v: Vec<Value> = comps
                    .iter()
                    .map(|c| json!({"vertices": c.vertex_set(), "edges": c.edge_set()}))
                    .collect();
                cx.emit_json(&Value::Array(v))?;
            } else {
                let lines: Vec<String> = comps
                    .iter()
                    .map(|c| c.vertices().map(VertexLabel::as_str).collect::<Vec<_>>().join(" "))
                    .collect();
                cx.emit(&lines.join("\n"))?;
            }
            Ok(0)
        }
        Command::Blocks { graph } => {
            let t = block_cut_tree(&load(&graph)?)?;
            if json {
                cx.emit_json(&serde_json::to_value(&t).expect("trees serialize"))?;
            } else {
                let mut out = String::new();
                for (i, b) in t.blocks.iter().enumerate() {
                    out.push_str(&format!("block {i} {}{}\n", b.name(), if b.trivial { " trivial" } else { "" }));
                }
                let cuts: Vec<&str> = t.cutvertices.iter().map(VertexLabel::as_str).collect();
                out.push_str(&format!("cutvertices {}\n", cuts.join(" ")));
                for (b, c) in &t.adjacency {
                    out.push_str(&format!("tree {b} {c}\n"));
                }
                cx.emit(&out)?;
            }
            Ok(0)
        }
        Command::Segments { graph, ctx } => {
            let segs = segment_decomposition(&load(&graph)?, &load(&ctx)?)?;
            if json {
                cx.emit_json(&serde_json::to_value(&segs).expect("segments serialize"))?;
            } else {
                let lines: Vec<String> = segs
                    .iter()
                    .map(|s| {
                        let path: Vec<&str> = s.vertices().map(VertexLabel::as_str).collect();
                        format!("{:?} length {}: {}", s.kind, s.length, path.join("-")).to_lowercase()
                    })
                    .collect();
                cx.emit(&lines.join("\n"))?;
            }
            Ok(0)
        }
        Command::Classify { graph } => {
            let c = classify_max_degree2(&load(&graph)?)?;
            cx.emit(&format!("{c:?}"))?;
            Ok(0)
        }
        Command::Gtimes { graph, ctx, r } => {
            let gx = g_times(&load(&graph)?, &load(&ctx)?, r)?;
            cx.emit_graph(&gx)?;
            Ok(0)
        }
        Command::Hstar1 { h, a, spec, r } => {
            let (_, _, hs) = build_hstar1(&h, &a, &spec, r)?;
            cx.emit_graph(&hs)?;
            Ok(0)
        }
        Command::Hstar2 { h, spec, minor, r } => {
            let spec = load_astar_spec(&read(&spec)?)?;
            let f = load(&minor)?;
            let name = minor.file_stem().map_or("F".into(), |s| s.to_string_lossy().into_owned());
            let recipe = GadgetRecipe {
                mode: Mode::BlockWise,
                h: load(&h)?,
                a: None,
                r: r.unwrap_or(spec.r),
                spec,
                predicate: Some(PropertyPredicate::contains_minor(name, f)),
            };
            let (hs, trace) = h_star_blocks(&recipe)?;
            if json {
                cx.emit_json(&json!({
                    "trace": trace,
                    "edge_list": serialize(&hs, Format::EdgeList),
                }))?;
            } else {
                cx.emit_graph(&hs)?;
                eprintln!("{}", serde_json::to_string_pretty(&trace).expect("traces serialize"));
            }
            Ok(0)
        }
        Command::Minor { h, g, roots, verify } => {
            let (h, g) = (load(&h)?, load(&g)?);
            if let Some(path) = verify {
                let doc: Value = serde_json::from_str(&read(&path)?)
                    .map_err(|e| Fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
                let (ok, lines) = confirm_witness(&h, &g, &doc, cx.run.budget)?;
                cx.emit(&format!("{}\n{}", if ok { "confirmed" } else { "not confirmed" }, lines.join("\n")))?;
                return Ok(if ok { 0 } else { 1 });
            }
            let c = EmbeddingConstraints::rooted(parse_roots(&roots)?);
            let out = find_expansion(&h, &g, &c, cx.run.budget)?;
            let code = match out.result {
                Expansion::Found(_) => 0,
                Expansion::None => 1,
                Expansion::BudgetExhausted => 2,
            };
            if json {
                cx.emit_json(&json!({"result": out.result, "nodes": out.nodes}))?;
            } else {
                let head = match &out.result {
                    Expansion::Found(_) => "found",
                    Expansion::None => "none",
                    Expansion::BudgetExhausted => "budget-exhausted",
                };
                let mut text = format!("{head} (nodes {})", out.nodes);
                if let Some(m) = out.result.embedding() {
                    for (u, set) in &m.branch_sets {
                        let vs: Vec<&str> = set.iter().map(VertexLabel::as_str).collect();
                        text.push_str(&format!("\n{u}: {}", vs.join(" ")));
                    }
                }
                cx.emit(&text)?;
            }
            Ok(code)
        }
        Command::Pack { h, g, cap } => {
            let p = max_edge_disjoint_packing(&load(&h)?, &load(&g)?, cap, cx.run.budget)?;
            if json {
                cx.emit_json(&serde_json::to_value(&p).expect("packings serialize"))?;
            } else {
                let tag = if p.exhaustive { "exhaustive" } else { "lower bound, budget exhausted" };
                cx.emit(&format!("{} ({tag})", p.count))?;
            }
            Ok(if p.exhaustive { 0 } else { 2 })
        }
        Command::Hit { h, g, bound } => {
            let out = min_edge_hitting_set(&load(&h)?, &load(&g)?, bound, &cx.opts())?;
            if json {
                cx.emit_json(&serde_json::to_value(&out).expect("outcomes serialize"))?;
            } else {
                let text = match &out.result {
                    HittingSet::Found(x) => {
                        let es: Vec<String> = x.iter().map(ToString::to_string).collect();
                        format!("{} edges: {}", x.len(), es.join(" "))
                    }
                    HittingSet::None => format!("none of size at most {bound}"),
                    HittingSet::BudgetExhausted => "budget-exhausted".into(),
                };
                cx.emit(&text)?;
            }
            Ok(if out.result == HittingSet::BudgetExhausted { 2 } else { 0 })
        }
        Command::Robust { h, ctx, host, r } => {
            let h = load(&h)?;
            let report = match (ctx, host) {
                (Some(ctx), _) => check_gadget_robustness(&h, &load(&ctx)?, r, &cx.opts())?,
                (None, Some(host)) => check_hstar_robustness(&load(&host)?, &h, r, &cx.opts())?,
                (None, None) => unreachable!("clap requires one of --ctx and --host"),
            };
            cx.emit_report(&report)
        }
        Command::Locality {
            h,
            a,
            spec,
            r,
            hstar,
            region,
        } => {
            let report = match (spec, hstar, region) {
                (Some(spec), _, _) => {
                    let (h, a, hs) = build_hstar1(&h, &a, &spec, r)?;
                    check_expansion_locality(&h, &hs, &a, &astar_region(&hs), &cx.opts())?
                }
                (None, Some(hs), Some(region)) => {
                    let text = read(&region)?;
                    let region = label_set(text.split_whitespace())?;
                    check_expansion_locality(&load(&h)?, &load(&hs)?, &load(&a)?, &region, &cx.opts())?
                }
                _ => return Err(Fail(EXIT_USAGE, "give --spec, or --hstar with --region".into())),
            };
            cx.emit_report(&report)
        }
        Command::Gencheck { a, spec } => {
            let spec = load_astar_spec(&read(&spec)?)?;
            let report = check_generic_counterexample(&load(&a)?, &spec, &cx.opts())?;
            cx.emit_report(&report)
        }
        Command::Branchcount { graph, ctx, r } => {
            let report = check_branch_count(&load(&graph)?, &load(&ctx)?, r)?;
            cx.emit_report(&report)
        }
        Command::Hereditary { minor, corpus, trials } => {
            let f = load(&minor)?;
            let name = minor.file_stem().map_or("F".into(), |s| s.to_string_lossy().into_owned());
            let graphs = corpus.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            let pred = PropertyPredicate::contains_minor(name, f);
            let report = check_hereditary_sampled(&pred, &graphs, trials, cx.run.seed)?;
            cx.emit_report(&report)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("epcheck: {msg}");
            ExitCode::from(code)
        }
    }
}


//! `surface-minors`: command-line front end for surface embeddings,
//! genus search, excluded-minor certificates, cycle structure, tree
//! decompositions and the bound tower.

mod corpus;
mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use surface_bounds::{constants_with, identities, Options};
use surface_minors::certify::{certify_excluded_minor, Certification, ExclusionCertificate};
use surface_minors::embedding::Embedding;
use surface_minors::genus::{embeddable_in, min_euler_genus, GenusOutcome, SearchConfig, Surface};
use surface_minors::graph::{Graph, VertexId};
use surface_minors::structure::Structure;
use surface_minors::topology::{classify_cycle, cut_along};
use surface_minors::treedecomp::{
    balanced_separation_sequence, boundary_bound, compute_tree_decomposition, Mode, TreeDecomposition,
};

#[derive(Parser)]
#[command(name = "surface-minors", version, about = "Graphs on surfaces: genus, excluded minors, cycle structure, bounds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Search budget: branch-and-bound nodes for genus search, cycles for enumeration.
    #[arg(long, global = true, env = "SURFACE_MINORS_BUDGET")]
    budget: Option<u64>,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks (overrides the corpus seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// Graph in graph6 format.
    #[arg(long)]
    graph6: Option<String>,
    /// Graph as JSON: {"n": .., "vertices": [..]?, "edges": [[u, v], ..]}.
    #[arg(long, value_name = "FILE")]
    json_graph: Option<PathBuf>,
    /// Embedding as JSON: {"graph": .., "rotation": {..}, "signature": {..}}.
    #[arg(long, value_name = "FILE")]
    embedding: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Facial walks and Euler genus of an embedding (default rotation if only a graph is given).
    Faces(GraphInput),
    /// Minimum orientable and nonorientable Euler genus.
    Genus {
        #[command(flatten)]
        input: GraphInput,
        /// Include witness embeddings in the output.
        #[arg(long)]
        witness: bool,
    },
    /// Whether the graph embeds in a surface.
    Embeddable {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_name = "GENUS:ORIENTABILITY")]
        surface: Surface,
    },
    /// Certify the graph as an excluded minor for a surface, or check a certificate.
    Certify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_name = "GENUS:ORIENTABILITY")]
        surface: Option<Surface>,
        /// Verify a stored certificate instead of producing one.
        #[arg(long, value_name = "FILE", conflicts_with = "surface")]
        check: Option<PathBuf>,
        /// With --check, also rerun the genus search.
        #[arg(long, requires = "check")]
        rerun: bool,
    },
    /// Classify a cycle and cut the surface along it.
    Cut {
        #[command(flatten)]
        input: GraphInput,
        /// Cycle as a vertex sequence, e.g. 0,1,2,3.
        #[arg(long)]
        cycle: String,
    },
    /// Largest family of pairwise non-homotopic internally disjoint paths (or cycles when FROM = TO).
    Homotopy {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        from: VertexId,
        #[arg(long)]
        to: VertexId,
    },
    /// Longest chain of well-nested contractible cycles.
    Chain(GraphInput),
    /// Face radius inside a contractible cycle.
    Radius {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        cycle: String,
    },
    /// Tree decomposition, exact for small graphs.
    Treedecomp {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Balanced separation sequence of a tree decomposition into k parts.
    Separate {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        k: usize,
        /// Tree decomposition JSON; computed when absent.
        #[arg(long, value_name = "FILE")]
        decomposition: Option<PathBuf>,
    },
    /// Constants of the bound tower for Euler genus g.
    Bounds {
        #[arg(long)]
        g: u64,
        /// Compute exact integers when their log2 is below this many bits.
        #[arg(long, default_value_t = 1_000_000)]
        exact_cap: u64,
        /// Working precision in fractional bits.
        #[arg(long, default_value_t = 256)]
        prec: u32,
        /// Decimal digits of the log2 bounds.
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// The bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Recompute every known fact and invariant suite; fails on any mismatch.
    Verify {
        /// Corpus file to use instead of the bundled one.
        #[arg(long, value_name = "FILE")]
        file: Option<PathBuf>,
    },
    /// Print the bundled corpus.
    Show,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

struct Report {
    json: Value,
    text: String,
    /// A checked property failed; the process exits nonzero.
    failed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { json, text, failed: false }
    }
}

struct Ctx {
    cfg: SearchConfig,
    cycle_budget: usize,
    seed: Option<u64>,
}

impl GraphInput {
    fn graph(&self) -> Result<Graph> {
        match (&self.graph6, &self.json_graph, &self.embedding) {
            (Some(s), None, None) => input::graph_from_graph6(s),
            (None, Some(p), None) => input::graph_from_json_text(&input::read(p)?),
            (None, None, Some(_)) => Ok(self.embedding_file()?.expect("present").graph().clone()),
            (None, None, None) => bail!("give a graph with --graph6, --json-graph or --embedding"),
            _ => bail!("give only one of --graph6, --json-graph, --embedding"),
        }
    }

    fn embedding_file(&self) -> Result<Option<Embedding>> {
        self.embedding.as_ref().map(|p| input::embedding_from_json_text(&input::read(p)?)).transpose()
    }

    /// The given embedding, or else a minimum-genus embedding of the graph.
    fn embedding_or_minimum(&self, ctx: &Ctx) -> Result<(Embedding, &'static str)> {
        if let Some(e) = self.embedding_file()? {
            return Ok((e, "given"));
        }
        let g = self.graph()?;
        match min_euler_genus(&g, ctx.cfg) {
            GenusOutcome::Exact(p) => Ok((p.orientable_witness, "minimum orientable genus")),
            GenusOutcome::Unknown { .. } => bail!("genus search ran out of budget; pass --embedding"),
        }
    }
}

fn surface_json(s: Surface) -> Value {
    json!({ "euler_genus": s.euler_genus, "orientable": s.orientable })
}

fn faces(input: &GraphInput) -> Result<Report> {
    let emb = match input.embedding_file()? {
        Some(e) => e,
        None => Embedding::default_for(&input.graph()?),
    };
    let g = emb.graph();
    let faces: Vec<Value> = emb.faces().iter().map(|f| json!({ "vertices": f.vertices, "length": f.len() })).collect();
    let genus = emb.total_euler_genus();
    let mut text = format!("{} vertices, {} edges, {} faces\n", g.n(), g.m(), faces.len());
    for (i, f) in emb.faces().iter().enumerate() {
        writeln!(text, "  face {i}: {:?}", f.vertices)?;
    }
    writeln!(text, "Euler genus {genus}, {}", if emb.is_orientable() { "orientable" } else { "nonorientable" })?;
    let json = json!({
        "n": g.n(), "m": g.m(), "faces": faces, "euler_genus": genus, "orientable": emb.is_orientable(),
    });
    Ok(Report::ok(json, text))
}

fn genus(input: &GraphInput, witness: bool, ctx: &Ctx) -> Result<Report> {
    let g = input.graph()?;
    Ok(match min_euler_genus(&g, ctx.cfg) {
        GenusOutcome::Exact(p) => {
            let mut json = json!({
                "exact": true, "orientable": p.orientable, "nonorientable": p.nonorientable,
                "euler_genus": p.euler_genus(), "nodes": p.nodes,
            });
            if witness {
                json["orientable_witness"] = p.orientable_witness.to_json_value();
                json["nonorientable_witness"] = p.nonorientable_witness.as_ref().map_or(Value::Null, Embedding::to_json_value);
            }
            let non = p.nonorientable.map_or("none (forest)".to_string(), |x| x.to_string());
            let text = format!(
                "orientable Euler genus   {}\nnonorientable Euler genus {non}\nexact: yes ({} nodes)\n",
                p.orientable, p.nodes
            );
            Report::ok(json, text)
        }
        GenusOutcome::Unknown { lower, upper, nodes } => Report::ok(
            json!({ "exact": false, "lower": lower, "upper": upper, "nodes": nodes }),
            format!("budget exhausted after {nodes} nodes: Euler genus in [{lower}, {}]\nexact: no\n", upper.map_or("?".into(), |u| u.to_string())),
        ),
    })
}

fn embeddable(input: &GraphInput, s: Surface, ctx: &Ctx) -> Result<Report> {
    let g = input.graph()?;
    let (verdict, witness) = match embeddable_in(&g, s, ctx.cfg) {
        Some(Some(w)) => ("yes", w.to_json_value()),
        Some(None) => ("no", Value::Null),
        None => ("unknown", Value::Null),
    };
    let json = json!({ "surface": surface_json(s), "embeddable": verdict, "exact": verdict != "unknown", "witness": witness });
    Ok(Report::ok(json, format!("embeds in {s}: {verdict}\n")))
}

fn certify(input: &GraphInput, surface: Option<Surface>, check: Option<&PathBuf>, rerun: bool, ctx: &Ctx) -> Result<Report> {
    if let Some(path) = check {
        let text = input::read(path)?;
        let cert = ExclusionCertificate::from_json(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let r = cert.verify(rerun.then_some(ctx.cfg));
        let json = json!({ "valid": r.is_ok(), "error": r.as_ref().err().map(|e| e.to_string()), "digest": cert.digest() });
        let text = match &r {
            Ok(()) => format!("certificate valid for {} ({} minors checked)\n", cert.surface, cert.minors.len()),
            Err(e) => format!("certificate invalid: {e}\n"),
        };
        return Ok(Report { json, text, failed: r.is_err() });
    }
    let s = surface.ok_or_else(|| anyhow!("give --surface or --check"))?;
    let g = input.graph()?;
    Ok(match certify_excluded_minor(&g, s, ctx.cfg) {
        Certification::Certified(c) => {
            let json = json!({ "verdict": "certified", "certificate": c.to_json_value() });
            let text = format!(
                "excluded minor for {s}: certified\nEuler genus of G {}, {} one-step minors embed\ndigest {}\n{}\n",
                c.genus_of_g,
                c.minors.len(),
                c.digest(),
                c.to_json()
            );
            Report::ok(json, text)
        }
        Certification::Embeds(w) => Report::ok(
            json!({ "verdict": "embeds", "witness": w.to_json_value() }),
            format!("not an excluded minor: the graph embeds in {s}\n"),
        ),
        Certification::MinorNotEmbeddable { op, minor } => Report::ok(
            json!({ "verdict": "not_minimal", "op": op, "minor": minor.to_json_value() }),
            format!("not minimal: after {op} the graph still does not embed in {s}\n"),
        ),
        Certification::Unknown { blocking } => Report::ok(
            json!({ "verdict": "unknown", "exact": false, "blocking": blocking }),
            format!("unknown: budget exhausted on {blocking}\n"),
        ),
    })
}

fn cut(input: &GraphInput, cycle: &str, ctx: &Ctx) -> Result<Report> {
    let (emb, source) = input.embedding_or_minimum(ctx)?;
    let c = input::parse_vertices(cycle)?;
    let cl = classify_cycle(&emb, &c)?;
    let res = cut_along(&emb, &c)?;
    let parts: Vec<Value> = res
        .embedding
        .component_genera()
        .into_iter()
        .map(|(vs, g, o)| json!({ "vertices": vs, "euler_genus": g, "orientable": o }))
        .collect();
    let before = emb.total_euler_genus();
    let after = res.embedding.total_euler_genus();
    let json = json!({
        "embedding_source": source,
        "cycle": cl.cycle, "two_sided": cl.two_sided, "separating": cl.separating, "contractible": cl.contractible,
        "euler_genus_before": before, "euler_genus_after": after, "parts": parts,
        "cut_embedding": res.embedding.to_json_value(),
    });
    let text = format!(
        "cycle {:?} ({source} embedding)\n  two-sided {}  separating {}  contractible {}\nEuler genus {before} -> {after} over {} part(s)\n",
        cl.cycle,
        cl.two_sided,
        cl.separating,
        cl.contractible,
        json["parts"].as_array().map_or(0, Vec::len)
    );
    Ok(Report::ok(json, text))
}

fn homotopy(input: &GraphInput, a: VertexId, b: VertexId, ctx: &Ctx) -> Result<Report> {
    let (emb, source) = input.embedding_or_minimum(ctx)?;
    let fam = Structure::new(&emb).max_nonhomotopic_internally_disjoint(a, b, ctx.cycle_budget)?;
    let text = format!(
        "{} pairwise non-homotopic members between {a} and {b} ({source} embedding, Euler genus {})\nbound {}  within bound {}  exact {}\n",
        fam.members.len(),
        fam.euler_genus,
        fam.bound,
        fam.within_bound,
        fam.exact
    );
    let failed = !fam.within_bound;
    let mut json = serde_json::to_value(&fam)?;
    json["embedding_source"] = source.into();
    Ok(Report { json, text, failed })
}

fn chain(input: &GraphInput, ctx: &Ctx) -> Result<Report> {
    let (emb, source) = input.embedding_or_minimum(ctx)?;
    let ch = Structure::new(&emb).longest_well_nested_chain(ctx.cycle_budget)?;
    let mut text = format!("longest well-nested chain: {} cycles ({source} embedding)\n", ch.cycles.len());
    for c in &ch.cycles {
        writeln!(text, "  {c:?}")?;
    }
    writeln!(
        text,
        "free {}  one piece {}  two pieces {}  candidates {}  exact {}",
        ch.best_free, ch.best_one_piece, ch.best_two_pieces, ch.candidates, ch.exact
    )?;
    let mut json = serde_json::to_value(&ch)?;
    json["embedding_source"] = source.into();
    Ok(Report::ok(json, text))
}

fn radius(input: &GraphInput, cycle: &str, ctx: &Ctx) -> Result<Report> {
    let (emb, source) = input.embedding_or_minimum(ctx)?;
    let c = input::parse_vertices(cycle)?;
    let r = Structure::new(&emb).radius(&c)?;
    let mut text = format!("radius {} inside {c:?} ({source} embedding)\n", r.radius);
    for f in &r.faces {
        writeln!(text, "  face {}: {}", f.face, f.radius)?;
    }
    let mut json = serde_json::to_value(&r)?;
    json["embedding_source"] = source.into();
    Ok(Report::ok(json, text))
}

fn treedecomp(input: &GraphInput, mode: ModeArg) -> Result<Report> {
    let g = input.graph()?;
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Heuristic => Mode::Heuristic,
    };
    let c = compute_tree_decomposition(&g, mode);
    let td = &c.decomposition;
    let valid = td.validate(&g);
    let mut text = format!("width {} over {} bags  exact {}  degraded {}\n", td.width(), td.len(), c.exact, c.degraded);
    for (i, b) in td.bags.iter().enumerate() {
        writeln!(text, "  bag {i}: {b:?}")?;
    }
    writeln!(text, "tree edges {:?}", td.tree_edges)?;
    let decomposition: Value = serde_json::from_str(&td.to_json())?;
    let json = json!({
        "width": td.width(), "exact": c.exact, "degraded": c.degraded, "decomposition": decomposition,
        "valid": valid.is_ok(),
    });
    Ok(Report { json, text, failed: valid.is_err() })
}

fn separate(input: &GraphInput, k: usize, decomposition: Option<&PathBuf>) -> Result<Report> {
    let g = input.graph()?;
    let td = match decomposition {
        Some(p) => TreeDecomposition::from_json(&input::read(p)?)?,
        None => compute_tree_decomposition(&g, Mode::Heuristic).decomposition,
    };
    td.validate(&g).map_err(|v| anyhow!("invalid tree decomposition: {v}"))?;
    let seq = balanced_separation_sequence(&g, &td, k)?;
    let bound = boundary_bound(k);
    let ratio_ok = seq.max_ratio_ok(3);
    let boundary_ok = seq.boundary.iter().all(|&b| b <= bound);
    let mut text = format!("{k} parts of a {}-node decomposition\n", td.len());
    for (i, p) in seq.parts.iter().enumerate() {
        writeln!(text, "  part {i}: weight {}  boundary {}  nodes {p:?}", seq.weights[i], seq.boundary[i])?;
    }
    writeln!(text, "weight ratio <= 3: {ratio_ok}   boundary <= {bound}: {boundary_ok}")?;
    let mut json = serde_json::to_value(&seq)?;
    json["boundary_bound"] = bound.into();
    json["ratio_ok"] = ratio_ok.into();
    json["boundary_ok"] = boundary_ok.into();
    Ok(Report { json, text, failed: !(ratio_ok && boundary_ok) })
}

fn bounds(g: u64, exact_cap: u64, prec: u32, digits: u32) -> Result<Report> {
    let c = constants_with(g, Options { prec, exact_cap_bits: exact_cap })?;
    let id = identities(&c);
    let rows = c.rows(digits);
    let mut text = format!("bound tower for Euler genus {g} ({prec} fractional bits)\n");
    writeln!(text, "{:<8} {:<44} log2 in", "name", "value")?;
    for r in &rows {
        let value = r.exact.clone().unwrap_or_else(|| "-".into());
        let value = if value.len() > 44 { format!("{}... ({} digits)", &value[..20], value.len()) } else { value };
        writeln!(text, "{:<8} {:<44} [{}, {}]   {}", r.name, value, r.log2_lo, r.log2_hi, r.provenance)?;
    }
    writeln!(text, "identities: T+1 {}  U = Q*R {}  P {}  widest log2 interval 2^{:.1}", id.t, id.u, id.p, id.max_log2_width)?;
    let json = json!({
        "g": g, "prec": prec, "rows": rows,
        "identities": { "t": id.t, "u": id.u, "p": id.p, "max_log2_width": id.max_log2_width },
    });
    Ok(Report { json, text, failed: !(id.t && id.u && id.p) })
}

fn corpus_verify(file: Option<&PathBuf>, ctx: &Ctx) -> Result<Report> {
    let text = match file {
        Some(p) => input::read(p)?,
        None => corpus::BUNDLED.to_string(),
    };
    let c = corpus::load(&text)?;
    let seed = ctx.seed.unwrap_or(c.seed);
    let checks = corpus::verify(&c, &corpus::Settings { seed, cfg: ctx.cfg });
    let failures = checks.iter().filter(|c| !c.ok).count();
    let mut out = String::new();
    for ch in &checks {
        writeln!(out, "{} {:<12} {:<28} {}", if ch.ok { "ok  " } else { "FAIL" }, ch.entry, ch.property, ch.detail)?;
    }
    writeln!(out, "{} checks, {failures} failed (seed {seed})", checks.len())?;
    let json = json!({ "seed": seed, "checks": checks, "failures": failures });
    Ok(Report { json, text: out, failed: failures > 0 })
}

fn run(cli: Cli) -> Result<Report> {
    let threads = if cli.global.threads == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { cli.global.threads };
    // a second initialisation only happens in tests; ignore it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    let mut cfg = SearchConfig { threads, ..SearchConfig::default() };
    if let Some(b) = cli.global.budget {
        cfg.budget = b;
    }
    let ctx = Ctx {
        cfg,
        cycle_budget: usize::try_from(cfg.budget).unwrap_or(usize::MAX),
        seed: cli.global.seed,
    };
    match &cli.command {
        Command::Faces(i) => faces(i),
        Command::Genus { input, witness } => genus(input, *witness, &ctx),
        Command::Embeddable { input, surface } => embeddable(input, *surface, &ctx),
        Command::Certify { input, surface, check, rerun } => certify(input, *surface, check.as_ref(), *rerun, &ctx),
        Command::Cut { input, cycle } => cut(input, cycle, &ctx),
        Command::Homotopy { input, from, to } => homotopy(input, *from, *to, &ctx),
        Command::Chain(i) => chain(i, &ctx),
        Command::Radius { input, cycle } => radius(input, cycle, &ctx),
        Command::Treedecomp { input, mode } => treedecomp(input, *mode),
        Command::Separate { input, k, decomposition } => separate(input, *k, decomposition.as_ref()),
        Command::Bounds { g, exact_cap, prec, digits } => bounds(*g, *exact_cap, *prec, *digits),
        Command::Corpus { action: CorpusAction::Verify { file } } => corpus_verify(file.as_ref(), &ctx),
        Command::Corpus { action: CorpusAction::Show } => {
            let v: Value = serde_json::from_str(corpus::BUNDLED)?;
            Ok(Report::ok(v, corpus::BUNDLED.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.global.json;
    match run(cli).context("surface-minors") {
        Ok(r) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                print!("{}", r.text);
            }
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! The `brauerkit` command line.
//!
//! Every input argument is a file path, `-` for standard input, or an inline
//! JSON value. Brauer diagrams may also be given as generator words such as
//! `id_1 + cup ; cap + id_1`. Exit codes: 0 when a command succeeds or a
//! check passes, 1 when a check fails, 2 on bad input or usage.

use crate::brauer::{parse_word, BrauerDiagram};
use crate::brauer_algebra::{br_compose, BrElement, Ring, RingElem};
use crate::coloured::{ColouredBrauerDiagram, Palette};
use crate::graph::{Graph, XGraph};
use crate::species::{
    evaluate, free_component, free_nerve_table, segal_check, species_table, CircuitOperad, GraphicalSpecies,
    LawReport, NamedGraph, PresheafTable,
};
use crate::substitution::{
    check_deleted_colimit, check_substitution_associativity, delete_vertex_labels, random_gog, random_nesting,
    similar, subdivide, terminal_representative, GraphOfGraphs,
};
use crate::util::rng_from_seed;
use crate::wiring::{
    check_axioms, check_circuit_algebra, operad_gamma, parse_word_key, CheckConfig, CheckReport, CircuitAlgebra,
    FreeCircuitAlgebra, FreeGenerator, MatchingAlgebra, TableAlgebra, WiringDiagram,
};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;

#[derive(Parser, Debug)]
#[command(name = "brauerkit", version, about = "Brauer diagrams, circuit algebras, graph substitution and Segal checks")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks. Defaults to $BRAUERKIT_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monochrome Brauer diagrams.
    #[command(subcommand)]
    Bd(BdCommand),
    /// The Brauer category enriched over a ring.
    #[command(subcommand)]
    Br(BrCommand),
    /// Coloured Brauer diagrams.
    #[command(subcommand)]
    Cbd(CbdCommand),
    /// Wiring diagrams.
    #[command(subcommand)]
    Wd(WdCommand),
    /// Circuit algebras.
    #[command(subcommand)]
    Ca(CaCommand),
    /// Graphs with ports.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Graphs of graphs, vertex deletion and similarity.
    #[command(subcommand)]
    Gog(GogCommand),
    /// Graphical species, circuit operads and the Segal check.
    #[command(subcommand)]
    Species(SpeciesCommand),
}

#[derive(Args, Debug)]
struct Pair {
    /// The first factor (applied first for compositions).
    #[arg(long)]
    lhs: String,
    /// The second factor.
    #[arg(long)]
    rhs: String,
}

#[derive(Subcommand, Debug)]
enum BdCommand {
    /// Vertical composite: `lhs` then `rhs`.
    Compose(Pair),
    /// Horizontal composite `lhs ⊗ rhs`.
    Tensor(Pair),
    /// The dual diagram.
    Dual {
        #[arg(long)]
        diagram: String,
    },
    /// A factorization into generators.
    Factor {
        #[arg(long)]
        diagram: String,
    },
    /// Checks the triangle identities for n = 1..max-n.
    CheckTriangle {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BrCommand {
    /// Composite of two linear combinations: `lhs` then `rhs`.
    Mul {
        #[command(flatten)]
        pair: Pair,
        /// One of Z, Q, Z[t], Z/p.
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Value of a closed loop, as a ring element (`t` in Z[t]).
        #[arg(long, default_value = "1")]
        delta: String,
    },
}

#[derive(Subcommand, Debug)]
enum CbdCommand {
    /// Vertical composite: `lhs` then `rhs`.
    Compose {
        #[command(flatten)]
        pair: Pair,
        /// Palette both diagrams must use.
        #[arg(long)]
        palette: Option<String>,
        /// Also print the walled normal form of the result.
        #[arg(long)]
        walled: bool,
    },
}

#[derive(Subcommand, Debug)]
enum WdCommand {
    /// Operadic composite of an outer diagram with one inner diagram per block.
    Gamma {
        #[arg(long)]
        outer: String,
        #[arg(long = "inner")]
        inners: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct FreeSpec {
    /// Generators as JSON `[{"name": .., "word": [..]}, ..]`.
    #[arg(long)]
    generators: Option<String>,
    /// Palette of the free algebra; defaults to one colour `a`.
    #[arg(long)]
    palette: Option<String>,
    /// Arity bound.
    #[arg(long, default_value_t = 4)]
    bound: usize,
    /// Largest number of generators in an element.
    #[arg(long, default_value_t = 2)]
    max_blocks: usize,
}

#[derive(Subcommand, Debug)]
enum CaCommand {
    /// Checks the circuit-algebra laws of a tabulated or free algebra.
    Check {
        /// A tabulated algebra as JSON.
        #[arg(long)]
        algebra: Option<String>,
        #[command(flatten)]
        free: FreeSpec,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Also check the derived-operation axioms up to this word length.
        #[arg(long)]
        axioms: Option<usize>,
    },
    /// Lists the carrier of a free circuit algebra at a colour word.
    Free {
        #[command(flatten)]
        free: FreeSpec,
        /// Colour word, comma separated.
        #[arg(long, default_value = "")]
        word: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GraphKind {
    Empty,
    Stick,
    Isolated,
    Corolla,
    Line,
    Wheel,
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Builds a standard graph.
    Build {
        #[arg(value_enum)]
        kind: GraphKind,
        /// Ports of a corolla, vertices of a line or wheel.
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// Glues two ports.
    Glue {
        #[arg(long)]
        graph: String,
        #[arg(long, num_args = 2, required = true, value_names = ["A", "B"])]
        ports: Vec<String>,
    },
    /// The element category.
    Elements {
        #[arg(long)]
        graph: String,
    },
    /// Tests two graphs for isomorphism.
    Iso {
        #[arg(long, default_value = "-")]
        graph: String,
        #[arg(long)]
        with: String,
    },
    /// Graphviz rendering.
    Dot {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand, Debug)]
enum GogCommand {
    /// The colimit of a graph of graphs.
    Colimit {
        #[arg(long)]
        gog: String,
    },
    /// Deletes bivalent or isolated vertices.
    Delete {
        #[arg(long)]
        graph: String,
        #[arg(long, num_args = 1..)]
        vertices: Vec<String>,
    },
    /// The terminal object of the similarity class of a connected graph.
    Terminal {
        #[arg(long)]
        graph: String,
    },
    /// Tests two connected graphs for similarity.
    Similar(Pair),
    /// Checks substitution associativity and deletion coherence on random cases.
    AssocCheck {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
    },
}

#[derive(Args, Debug)]
struct SpeciesSpec {
    /// A species as JSON, or `terminal:N`, `sign:N`, `torsor:N` for arity bound N.
    #[arg(long)]
    species: String,
    /// Palette of a built-in species; defaults to one colour `a`.
    #[arg(long)]
    palette: Option<String>,
}

#[derive(Subcommand, Debug)]
enum SpeciesCommand {
    /// The structures of a species on a graph.
    Eval {
        #[command(flatten)]
        spec: SpeciesSpec,
        #[arg(long)]
        graph: String,
    },
    /// Runs the Segal check on a presheaf table, or on a table built from a species.
    Segal {
        /// A presheaf table as JSON.
        #[arg(long, conflicts_with = "species")]
        presheaf: Option<String>,
        /// A species as JSON or a built-in name.
        #[arg(long)]
        species: Option<String>,
        #[arg(long)]
        palette: Option<String>,
        /// Graphs as JSON `[{"id": .., "graph": ..}, ..]`.
        #[arg(long, requires = "species")]
        graphs: Option<String>,
        /// Use the nerve of the free circuit operad instead of the species itself.
        #[arg(long)]
        free: bool,
        #[arg(long, default_value_t = 2)]
        v_max: usize,
        #[arg(long, default_value_t = 3)]
        e_max: usize,
        /// Print the table instead of checking it.
        #[arg(long)]
        emit_table: bool,
    },
    /// One component of the truncated free circuit operad.
    FreeComponent {
        #[command(flatten)]
        spec: SpeciesSpec,
        /// Colour word, comma separated.
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 2)]
        v_max: usize,
        #[arg(long, default_value_t = 3)]
        e_max: usize,
    },
    /// Checks the circuit-operad and modular-operad laws.
    CheckCo {
        /// A circuit operad as JSON.
        #[arg(long, conflicts_with = "matching")]
        operad: Option<String>,
        /// Use the operad of the matching algebra with this arity bound.
        #[arg(long)]
        matching: Option<usize>,
        #[arg(long)]
        palette: Option<String>,
    },
}

/// What a command produced.
struct Report {
    text: String,
    /// Rendered directly from the value so that field order is preserved.
    json: String,
    passed: bool,
}

impl Report {
    fn data<T: Serialize>(value: &T, text: impl ToString) -> Result<Report> {
        Ok(Report { text: text.to_string(), json: serde_json::to_string(value)?, passed: true })
    }

    fn check(passed: bool, json: Value, text: impl ToString) -> Report {
        Report { text: text.to_string(), json: json.to_string(), passed }
    }
}

struct Ctx<'a> {
    seed: u64,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    /// The text behind an argument: standard input, inline JSON or a file.
    fn text(&mut self, src: &str) -> Result<String> {
        if src == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            return Ok(s);
        }
        let t = src.trim_start();
        if t.starts_with('{') || t.starts_with('[') {
            return Ok(src.to_string());
        }
        std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")))
    }

    fn load<T: DeserializeOwned>(&mut self, src: &str) -> Result<T> {
        let text = self.text(src)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")))
    }

    fn value(&mut self, src: &str) -> Result<Value> {
        self.load(src)
    }

    /// A diagram as JSON or a generator word, given inline or in a file.
    fn diagram(&mut self, src: &str) -> Result<BrauerDiagram> {
        let text = if src == "-" || Path::new(src).is_file() { self.text(src)? } else { src.to_string() };
        if text.trim_start().starts_with('{') {
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{src}: {e}")))
        } else {
            parse_word(text.trim())
        }
    }

    fn palette(&mut self, src: &Option<String>) -> Result<Palette> {
        match src {
            Some(p) => self.load(p),
            None => Ok(Palette::monochrome("a")),
        }
    }

    fn species(&mut self, src: &str, palette: &Option<String>) -> Result<GraphicalSpecies> {
        if let Some((kind, bound)) = src.split_once(':') {
            let bound: usize = bound.parse().map_err(|_| Error::Parse(format!("bad arity bound in {src}")))?;
            let pal = self.palette(palette)?;
            return match kind {
                "terminal" => Ok(GraphicalSpecies::terminal(pal, bound)),
                "sign" => Ok(GraphicalSpecies::sign(pal, bound)),
                "torsor" => Ok(GraphicalSpecies::torsor(pal, bound)),
                _ => Err(Error::Parse(format!("unknown species {kind}"))),
            };
        }
        self.load(src)
    }

    /// A graph, or the underlying graph of an `X`-graph.
    fn graph(&mut self, src: &str) -> Result<Graph> {
        Ok(self.xgraph(src)?.graph().clone())
    }

    /// An `X`-graph, or a graph with the identity labelling.
    fn xgraph(&mut self, src: &str) -> Result<XGraph> {
        let v = self.value(src)?;
        if v.get("rho").is_some() {
            return serde_json::from_value(v).map_err(|e| Error::Parse(format!("{src}: {e}")));
        }
        let g: Graph = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{src}: {e}")))?;
        Ok(XGraph::identity(g))
    }
}

fn colour_word(s: &str) -> Vec<String> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    parse_word_key(s)
}

fn seed_from_env() -> u64 {
    std::env::var("BRAUERKIT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Runs the command line on process stdio and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut input, &mut out, &mut err)
}

/// Runs the command line on the given streams and returns the exit code.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx { seed: cli.seed.unwrap_or_else(seed_from_env), stdin };
    match dispatch(&mut ctx, cli.command) {
        Ok(report) => {
            let written = if cli.json {
                writeln!(out, "{}", report.json)
            } else {
                writeln!(out, "{}", report.text.trim_end())
            };
            if written.is_err() {
                return 2;
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<Report> {
    match command {
        Command::Bd(c) => bd(ctx, c),
        Command::Br(c) => br(ctx, c),
        Command::Cbd(c) => cbd(ctx, c),
        Command::Wd(c) => wd(ctx, c),
        Command::Ca(c) => ca(ctx, c),
        Command::Graph(c) => graph(ctx, c),
        Command::Gog(c) => gog(ctx, c),
        Command::Species(c) => species(ctx, c),
    }
}

fn bd(ctx: &mut Ctx, c: BdCommand) -> Result<Report> {
    match c {
        BdCommand::Compose(p) => {
            let d = ctx.diagram(&p.lhs)?.then(&ctx.diagram(&p.rhs)?)?;
            Report::data(&d, &d)
        }
        BdCommand::Tensor(p) => {
            let d = ctx.diagram(&p.lhs)?.tensor(&ctx.diagram(&p.rhs)?);
            Report::data(&d, &d)
        }
        BdCommand::Dual { diagram } => {
            let d = ctx.diagram(&diagram)?.dual();
            Report::data(&d, &d)
        }
        BdCommand::Factor { diagram } => {
            let d = ctx.diagram(&diagram)?;
            let w = d.factor_generators()?;
            if w.evaluate()? != d {
                return Ok(Report::check(false, json!({ "word": w.to_string(), "evaluates": false }), format!("{w}\nfactorization does not evaluate back")));
            }
            Report::data(&w, &w)
        }
        BdCommand::CheckTriangle { max_n } => {
            let mut rows = Vec::new();
            let mut text = String::new();
            for n in 1..=max_n {
                let (l, r) = BrauerDiagram::zigzags(n);
                let id = BrauerDiagram::identity(n);
                let ok = l == id && r == id;
                text += &format!("n = {n}: {}\n", if ok { "ok" } else { "FAIL" });
                rows.push(json!({ "n": n, "passed": ok }));
            }
            let passed = rows.iter().all(|r| r["passed"] == true);
            Ok(Report::check(passed, json!({ "passed": passed, "cases": rows }), text))
        }
    }
}

fn ring_elem(ring: &Ring, s: &str) -> Result<RingElem> {
    if s.trim() == "t" {
        return ring.t();
    }
    let v = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    ring.elem_from_json(&v)
}

fn br_operand(ctx: &mut Ctx, ring: &Ring, src: &str) -> Result<BrElement> {
    let is_element = |v: &Value| v.get("terms").is_some();
    let text = if src == "-" || Path::new(src).is_file() { ctx.text(src)? } else { src.to_string() };
    match serde_json::from_str::<Value>(&text) {
        Ok(v) if is_element(&v) => {
            let e: BrElement = serde_json::from_value(v)?;
            if e.ring() != ring {
                return Err(Error::RingMismatch(format!("{src} is over {}, not {}", e.ring().name(), ring.name())));
            }
            Ok(e)
        }
        Ok(v) => BrElement::basis(ring, &serde_json::from_value(v)?),
        Err(_) => BrElement::basis(ring, &parse_word(text.trim())?),
    }
}

fn br(ctx: &mut Ctx, c: BrCommand) -> Result<Report> {
    match c {
        BrCommand::Mul { pair, ring, delta } => {
            let ring = Ring::parse(&ring)?;
            let delta = ring_elem(&ring, &delta)?;
            let a = br_operand(ctx, &ring, &pair.lhs)?;
            let b = br_operand(ctx, &ring, &pair.rhs)?;
            let r = br_compose(&a, &b, &delta)?;
            Report::data(&r, &r)
        }
    }
}

fn cbd(ctx: &mut Ctx, c: CbdCommand) -> Result<Report> {
    match c {
        CbdCommand::Compose { pair, palette, walled } => {
            let a: ColouredBrauerDiagram = ctx.load(&pair.lhs)?;
            let b: ColouredBrauerDiagram = ctx.load(&pair.rhs)?;
            if let Some(p) = &palette {
                let p: Palette = ctx.load(p)?;
                if a.palette() != &p || b.palette() != &p {
                    return Err(Error::PaletteMismatch("a diagram does not use the given palette".into()));
                }
            }
            let d = a.then(&b)?;
            if !walled {
                return Report::data(&d, &d);
            }
            let nf = d.to_walled_normal_form()?;
            let text = format!(
                "{d}\nsource shuffle {:?}\ntarget shuffle {:?}\ncore {}\nwall {:?}",
                nf.source_shuffle.images(),
                nf.target_shuffle.images(),
                nf.core,
                nf.wall
            );
            let json = json!({
                "diagram": d,
                "walled": {
                    "source_shuffle": nf.source_shuffle.images(),
                    "target_shuffle": nf.target_shuffle.images(),
                    "core": nf.core,
                    "wall": [nf.wall.0, nf.wall.1, nf.wall.2, nf.wall.3],
                },
            });
            Ok(Report::check(true, json, text))
        }
    }
}

fn wd(ctx: &mut Ctx, c: WdCommand) -> Result<Report> {
    match c {
        WdCommand::Gamma { outer, inners } => {
            let g: WiringDiagram = ctx.load(&outer)?;
            let fs = inners.iter().map(|s| ctx.load(s)).collect::<Result<Vec<WiringDiagram>>>()?;
            let r = operad_gamma(&g, &fs)?;
            Report::data(&r, &r)
        }
    }
}

fn free_algebra(ctx: &mut Ctx, spec: &FreeSpec) -> Result<FreeCircuitAlgebra> {
    let src = spec.generators.as_deref().ok_or_else(|| Error::Parse("--generators is required".into()))?;
    let generators: Vec<FreeGenerator> = ctx.load(src)?;
    let mut alg = FreeCircuitAlgebra::new(ctx.palette(&spec.palette)?, generators, spec.bound)?;
    alg.max_blocks = spec.max_blocks;
    Ok(alg)
}

fn law_check<A: CircuitAlgebra>(alg: &A, cfg: &CheckConfig, axioms: Option<usize>) -> Result<Report> {
    let mut reports: Vec<(&str, CheckReport)> = vec![("circuit algebra", check_circuit_algebra(alg, cfg)?)];
    if let Some(len) = axioms {
        reports.push(("axioms", check_axioms(alg, len, false)?));
    }
    let passed = reports.iter().all(|(_, r)| r.passed());
    let text: String = reports.iter().map(|(name, r)| format!("{name}: {r}\n")).collect();
    let json = json!({
        "passed": passed,
        "reports": reports.iter().map(|(name, r)| json!({ "name": name, "report": r })).collect::<Vec<_>>(),
    });
    Ok(Report::check(passed, json, text))
}

fn ca(ctx: &mut Ctx, c: CaCommand) -> Result<Report> {
    match c {
        CaCommand::Check { algebra, free, max_points, samples, axioms } => {
            let cfg = CheckConfig {
                max_points,
                max_blocks: free.max_blocks,
                samples,
                seed: ctx.seed,
                ..CheckConfig::default()
            };
            match algebra {
                Some(src) => {
                    let alg: TableAlgebra = ctx.load(&src)?;
                    law_check(&alg, &cfg, axioms)
                }
                None => law_check(&free_algebra(ctx, &free)?, &cfg, axioms),
            }
        }
        CaCommand::Free { free, word } => {
            let alg = free_algebra(ctx, &free)?;
            let elems = alg.carrier(&colour_word(&word))?;
            let text: String = elems
                .iter()
                .map(|e| {
                    let names: Vec<&str> = e.gens.iter().map(|&g| alg.generators()[g].name.as_str()).collect();
                    format!("[{}] {}\n", names.join(","), e.shape)
                })
                .collect();
            Report::data(&elems, format!("{} elements\n{text}", elems.len()))
        }
    }
}

fn graph(ctx: &mut Ctx, c: GraphCommand) -> Result<Report> {
    match c {
        GraphCommand::Build { kind, n } => {
            let g = match kind {
                GraphKind::Empty => Graph::empty(),
                GraphKind::Stick => Graph::stick(),
                GraphKind::Isolated => Graph::isolated_vertex(),
                GraphKind::Corolla => Graph::corolla_n(n),
                GraphKind::Line => Graph::line(n),
                GraphKind::Wheel => Graph::wheel(n)?,
            };
            Report::data(&g, &g)
        }
        GraphCommand::Glue { graph, ports } => {
            let g = ctx.graph(&graph)?.glue(&ports[0], &ports[1])?;
            Report::data(&g, &g)
        }
        GraphCommand::Elements { graph } => {
            let g = ctx.graph(&graph)?;
            let els = g.elements();
            let mut text = format!("{} sticks, {} corollas, {} morphisms\n", els.sticks.len(), els.corollas.len(), els.morphisms.len());
            for m in &els.morphisms {
                text += &format!(
                    "  {}: stick {} -> corolla {} at position {}{}\n",
                    g.half_label(m.half_edge),
                    m.stick,
                    g.vertex_label(m.corolla),
                    m.position,
                    if m.flipped { " (flipped)" } else { "" }
                );
            }
            Report::data(&els, text)
        }
        GraphCommand::Iso { graph, with } => {
            let a = ctx.graph(&graph)?;
            let b = ctx.graph(&with)?;
            Ok(match a.iso(&b) {
                Some(f) => Report::check(
                    true,
                    json!({ "isomorphic": true, "edge_map": f.edge_map(), "half_map": f.half_map(), "vertex_map": f.vertex_map() }),
                    "isomorphic",
                ),
                None => Report::check(false, json!({ "isomorphic": false }), "not isomorphic"),
            })
        }
        GraphCommand::Dot { graph } => {
            let dot = ctx.graph(&graph)?.to_dot();
            Ok(Report::check(true, json!({ "dot": dot }), dot))
        }
    }
}

fn gog(ctx: &mut Ctx, c: GogCommand) -> Result<Report> {
    match c {
        GogCommand::Colimit { gog } => {
            let gog: GraphOfGraphs = ctx.load(&gog)?;
            let colim = gog.colimit()?;
            let problems = colim.check(&gog);
            if !problems.is_empty() {
                return Ok(Report::check(false, json!({ "graph": colim.graph, "problems": problems }), problems.join("\n")));
            }
            Report::data(&colim.graph, &colim.graph)
        }
        GogCommand::Delete { graph, vertices } => {
            let g = ctx.graph(&graph)?;
            let rec = delete_vertex_labels(&g, &vertices)?;
            let text = format!("{}\nkinds: {:?}", rec.target, rec.components);
            Report::data(&rec, text)
        }
        GogCommand::Terminal { graph } => {
            let x = ctx.xgraph(&graph)?;
            let t = terminal_representative(&x)?;
            Report::data(&t, t.graph())
        }
        GogCommand::Similar(p) => {
            let a = ctx.xgraph(&p.lhs)?;
            let b = ctx.xgraph(&p.rhs)?;
            let s = similar(&a, &b)?;
            Ok(Report::check(s, json!({ "similar": s }), if s { "similar" } else { "not similar" }))
        }
        GogCommand::AssocCheck { samples, max_vertices } => {
            let mut rng = rng_from_seed(ctx.seed);
            let (mut assoc, mut deletion) = (0, 0);
            let mut failures = Vec::new();
            for i in 0..samples {
                let base = Graph::random(max_vertices, 3, 2, &mut rng);
                let (outer, inners) = random_nesting(&base, 2, 3, &mut rng);
                if check_substitution_associativity(&outer, &inners)? {
                    assoc += 1;
                } else {
                    failures.push(format!("nesting {i}"));
                }
                let (g, w) = subdivide(&base, 2, &mut rng);
                let over = random_gog(&base, 2, 3, &mut rng);
                if check_deleted_colimit(&g, &w, &over)? {
                    deletion += 1;
                } else {
                    failures.push(format!("deletion {i}"));
                }
            }
            let passed = failures.is_empty();
            let text = format!(
                "associativity: {assoc}/{samples}\ndeletion coherence: {deletion}/{samples}\nseed {}{}",
                ctx.seed,
                failures.iter().map(|f| format!("\nFAIL {f}")).collect::<String>()
            );
            let json = json!({
                "passed": passed,
                "seed": ctx.seed,
                "associativity": assoc,
                "deletion": deletion,
                "samples": samples,
                "failures": failures,
            });
            Ok(Report::check(passed, json, text))
        }
    }
}

fn law_report(reports: &[(&str, LawReport)]) -> Report {
    let passed = reports.iter().all(|(_, r)| r.passed());
    let text: String = reports.iter().map(|(name, r)| format!("{name}: {r}\n")).collect();
    let json = json!({
        "passed": passed,
        "reports": reports.iter().map(|(name, r)| json!({ "name": name, "report": r })).collect::<Vec<_>>(),
    });
    Report::check(passed, json, text)
}

fn species(ctx: &mut Ctx, c: SpeciesCommand) -> Result<Report> {
    match c {
        SpeciesCommand::Eval { spec, graph } => {
            let s = ctx.species(&spec.species, &spec.palette)?;
            let structures = evaluate(&s, &ctx.graph(&graph)?)?;
            let keys: Vec<String> = structures.iter().map(|a| a.key(&s)).collect();
            let text = format!("{} structures\n{}", keys.len(), keys.join("\n"));
            Report::data(&structures, text)
        }
        SpeciesCommand::Segal { presheaf, species, palette, graphs, free, v_max, e_max, emit_table } => {
            let table: PresheafTable = match (presheaf, species) {
                (Some(p), _) => ctx.load(&p)?,
                (None, Some(sp)) => {
                    let s = ctx.species(&sp, &palette)?;
                    let src = graphs.ok_or_else(|| Error::Parse("--graphs is required with --species".into()))?;
                    let graphs: Vec<NamedGraph> = ctx.load(&src)?;
                    if free {
                        free_nerve_table(&s, &graphs, v_max, e_max)?
                    } else {
                        species_table(&s, &graphs)?
                    }
                }
                (None, None) => return Err(Error::Parse("one of --presheaf or --species is required".into())),
            };
            if emit_table {
                return Report::data(&table, serde_json::to_string_pretty(&table)?);
            }
            let report = segal_check(&table)?;
            let failing = report.failing();
            let mut text = report.to_string();
            if !failing.is_empty() {
                text += &format!("Segal condition fails at: {}", failing.join(", "));
            }
            let json = json!({ "passed": report.passed(), "failing": failing, "graphs": report.graphs });
            Ok(Report::check(report.passed(), json, text))
        }
        SpeciesCommand::FreeComponent { spec, word, v_max, e_max } => {
            let s = ctx.species(&spec.species, &spec.palette)?;
            let c = free_component(&s, &colour_word(&word), v_max, e_max)?;
            let elements: Vec<Value> = c
                .elements
                .iter()
                .map(|(g, a)| json!({ "graph": g, "structure": a.key(&s) }))
                .collect();
            let mut text = format!("{} graphs, {} elements\n", c.graphs.len(), c.elements.len());
            for (g, a) in &c.elements {
                text += &format!("  graph {g}: {}\n", a.key(&s));
            }
            let json = json!({ "word": c.word, "graphs": c.graphs, "elements": elements });
            Ok(Report::check(true, json, text))
        }
        SpeciesCommand::CheckCo { operad, matching, palette } => {
            let co: CircuitOperad = match (operad, matching) {
                (Some(src), _) => ctx.load(&src)?,
                (None, Some(bound)) => CircuitOperad::from_circuit_algebra(&MatchingAlgebra::new(ctx.palette(&palette)?, bound))?,
                (None, None) => return Err(Error::Parse("one of --operad or --matching is required".into())),
            };
            Ok(law_report(&[("circuit operad", co.validate()), ("modular operad", co.check_modular())]))
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use reconforge::gadget::{
    build_listable_gadget, build_nbo_quad, build_nbo_reflexive, verify_pattern_gadget, ConditionOutcome,
    PatternGadget, ReflexivePath,
};
use reconforge::generators;
use reconforge::graph::double_cover;
use reconforge::io::{read_embedding, read_graph, read_json, to_dot, write_json};
use reconforge::oracle::{self, Colouring, MoveRule, ReachResult, Witness};
use reconforge::reduction::{compile, GadgetLibrary, HostKit, ReductionBundle};
use reconforge::surface::embedding::Embedding;
use reconforge::surface::validate::{
    validate_pp_quadrangulation, validate_reflexive_triangulation, validate_sphere_quadrangulation,
};
use reconforge::transforms::{bipartite_instance_to_cover, pp_lift, wheel_retraction};
use reconforge::{Error, Graph, Result, Vertex};

use crate::{Global, Output};

fn json_out<T: Serialize>(value: &T, ok: bool) -> Result<Output> {
    Ok(Output::Json {
        value: serde_json::to_value(value)?,
        ok,
    })
}

fn rule_for(global: &Global, host: &Graph) -> MoveRule {
    match global.rule {
        Some(r) => r.into(),
        None if host.is_reflexive() => MoveRule::Reflexive,
        None => MoveRule::Irreflexive,
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SurfaceKind {
    /// K_{2,3}-free quadrangulation of the sphere.
    SphereQuad,
    /// Quadrangulation of the projective plane.
    PpQuad,
    /// K4-free reflexive triangulation of the sphere.
    ReflexiveTri,
}

pub fn validate(kind: SurfaceKind, graph: &Path, embedding: &Path) -> Result<Output> {
    let g = read_graph(graph)?;
    let e = read_embedding(embedding, &g)?;
    let report = match kind {
        SurfaceKind::SphereQuad => validate_sphere_quadrangulation(&g, &e),
        SurfaceKind::PpQuad => validate_pp_quadrangulation(&g, &e),
        SurfaceKind::ReflexiveTri => validate_reflexive_triangulation(&g, &e),
    };
    json_out(&report, report.valid)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Cycle,
    Wheel,
    K23,
    Cube,
    PseudoDoubleWheel,
    Mycielski,
    ProjectiveWheel,
    Grotzsch,
    ReflexiveTetrahedron,
    ReflexiveOctahedron,
    ReflexiveIcosahedron,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Size parameter: cycle length, wheel rim, or `m` of the pseudo-double wheel.
    #[arg(long, short)]
    k: Option<usize>,
    /// Number of Mycielski levels.
    #[arg(long, default_value_t = 2)]
    levels: usize,
    /// Print Graphviz instead of JSON.
    #[arg(long)]
    dot: bool,
    /// Also write the graph here.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    /// Also write the embedding here.
    #[arg(long)]
    embedding_out: Option<PathBuf>,
}

fn need_k(k: Option<usize>, family: &str, min: usize) -> Result<usize> {
    let k = k.ok_or_else(|| Error::Domain(format!("{family} needs --k")))?;
    if k < min {
        return Err(Error::Domain(format!("{family} needs k >= {min}, got {k}")));
    }
    Ok(k)
}

pub fn generate(args: &GenerateArgs) -> Result<Output> {
    let (g, e) = match args.family {
        Family::Cycle => generators::cycle(need_k(args.k, "cycle", 3)?),
        Family::Wheel => generators::wheel(need_k(args.k, "wheel", 3)?),
        Family::K23 => generators::k23_quadrangulation(),
        Family::Cube => generators::cube(),
        Family::PseudoDoubleWheel => generators::pseudo_double_wheel(need_k(args.k, "pseudo-double wheel", 2)?)?,
        Family::Mycielski => generators::generalized_mycielski(need_k(args.k, "mycielski", 3)?, args.levels)?,
        Family::ProjectiveWheel => generators::generalized_mycielski(need_k(args.k, "projective wheel", 3)?, 1)?,
        Family::Grotzsch => generators::grotzsch(),
        Family::ReflexiveTetrahedron => generators::reflexive_tetrahedron(),
        Family::ReflexiveOctahedron => generators::reflexive_octahedron(),
        Family::ReflexiveIcosahedron => generators::reflexive_icosahedron(),
    };
    if let Some(p) = &args.graph_out {
        write_json(p, &g)?;
    }
    if let Some(p) = &args.embedding_out {
        write_json(p, &e)?;
    }
    if args.dot {
        return Ok(Output::Text(to_dot(&g, &[])));
    }
    json_out(&json!({ "graph": g, "embedding": e }), true)
}

#[derive(Subcommand, Debug)]
pub enum TransformCommand {
    /// Lift a non-bipartite projective-plane quadrangulation to the sphere.
    PpLift { graph: PathBuf, embedding: PathBuf },
    /// Retract `W_k x K2` onto a sphere quadrangulation (even k >= 6).
    Retraction { k: usize },
    /// Move a bipartite instance `G -> H` onto `H x K2`; with two colourings
    /// the oracle decides both instances and compares.
    TimesK2 {
        g: PathBuf,
        h: PathBuf,
        f: PathBuf,
        target: Option<PathBuf>,
    },
}

fn read_colouring(path: &Path) -> Result<Colouring> {
    read_json(path)
}

pub fn transform(global: &Global, which: &TransformCommand) -> Result<Output> {
    match which {
        TransformCommand::PpLift { graph, embedding } => {
            let h = read_graph(graph)?;
            let e = read_embedding(embedding, &h)?;
            let lift = pp_lift(&h, &e)?;
            json_out(&lift, lift.validation.valid)
        }
        TransformCommand::Retraction { k } => {
            let r = wheel_retraction(*k)?;
            json_out(&r, r.check.is_retraction && r.validation.valid)
        }
        TransformCommand::TimesK2 { g, h, f, target } => {
            let g = read_graph(g)?;
            let h = read_graph(h)?;
            let f = read_colouring(f)?;
            let cover = double_cover(&h);
            let f2 = bipartite_instance_to_cover(&g, &f)?;
            let mut out = json!({ "cover": cover, "f": f2 });
            let mut ok = true;
            if let Some(t) = target {
                let t = read_colouring(t)?;
                let t2 = bipartite_instance_to_cover(&g, &t)?;
                let rule = rule_for(global, &h);
                let base = decide(&g, &h, &f, &t, rule, global.cap)?;
                let lifted = decide(&g, &cover, &f2, &t2, rule, global.cap)?;
                ok = base == lifted;
                out["target"] = json!(t2);
                out["reachable_in_h"] = json!(base);
                out["reachable_in_cover"] = json!(lifted);
                out["agree"] = json!(ok);
            }
            json_out(&out, ok)
        }
    }
}

fn decide(g: &Graph, h: &Graph, f: &[Vertex], t: &[Vertex], rule: MoveRule, cap: usize) -> Result<bool> {
    match oracle::reachable(g, h, f, t, rule, cap)? {
        ReachResult::Reachable { .. } => Ok(true),
        ReachResult::Unreachable { .. } => Ok(false),
        ReachResult::CapExceeded { cap } => Err(Error::CapExceeded { cap }),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GadgetKindArg {
    NotBothOne,
    NotAllZero,
    /// Unary gadget confining one vertex to a listable set (reflexive hosts).
    Listable,
}

#[derive(Args, Debug)]
pub struct CompileGadgetArgs {
    #[arg(long, value_enum)]
    kind: GadgetKindArg,
    host: PathBuf,
    embedding: PathBuf,
    /// Host vertex playing 0.
    #[arg(long)]
    zero: Option<Vertex>,
    /// Quadrangulation hosts: `a0,a1,b0,b1` for the `{(a0,b0),(a1,b0),(a0,b1)}` gadget.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    endpoints: Option<Vec<Vertex>>,
    /// Reflexive hosts: `loop01`, `to-beta:I` or `to-beta-next:I`.
    #[arg(long)]
    path: Option<String>,
    /// The listable set, comma separated.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<Vertex>>,
    #[arg(long)]
    dot: bool,
    /// Also write the gadget JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_path(s: &str) -> Result<ReflexivePath> {
    let bad = || Error::Domain(format!("unknown path {s:?}; expected loop01, to-beta:I or to-beta-next:I"));
    if s == "loop01" {
        return Ok(ReflexivePath::Loop01);
    }
    let (name, i) = s.split_once(':').ok_or_else(bad)?;
    let i: usize = i.parse().map_err(|_| bad())?;
    match name {
        "to-beta" => Ok(ReflexivePath::ToBetaI(i)),
        "to-beta-next" => Ok(ReflexivePath::ToBetaIPlus1(i)),
        _ => Err(bad()),
    }
}

pub fn compile_gadget(global: &Global, args: &CompileGadgetArgs) -> Result<Output> {
    let host = read_graph(&args.host)?;
    let e = read_embedding(&args.embedding, &host)?;
    let gadget: PatternGadget = match args.kind {
        GadgetKindArg::Listable => {
            if !host.is_reflexive() {
                return Err(Error::Domain("listable-set gadgets need a reflexive host".into()));
            }
            let set = args
                .set
                .as_deref()
                .ok_or_else(|| Error::Domain("listable gadget needs --set".into()))?;
            build_listable_gadget(&host, set)?
        }
        kind => {
            let kit = HostKit::detect(&host, &e, args.zero, global.cap)?;
            match (kind, &kit, &args.endpoints, &args.path) {
                (GadgetKindArg::NotAllZero, ..) => kit.not_all_zero()?,
                (_, HostKit::Quadrangulation { host, embedding, .. }, Some(p), _) => {
                    build_nbo_quad(host, embedding, p[0], p[1], p[2], p[3])?
                }
                (_, HostKit::Reflexive { host, certificate }, _, Some(p)) => {
                    build_nbo_reflexive(host, certificate, parse_path(p)?)?
                }
                _ => kit.not_both_one()?,
            }
        }
    };
    if let Some(p) = &args.out {
        write_json(p, &gadget)?;
    }
    if args.dot {
        return Ok(Output::Text(to_dot(&gadget.graph, &gadget.signals)));
    }
    json_out(&gadget, true)
}

pub fn verify_gadget(global: &Global, path: &Path) -> Result<Output> {
    let gadget: PatternGadget = read_json(path)?;
    let rule = global.rule.map_or(gadget.rule, MoveRule::from);
    let report = verify_pattern_gadget(&gadget, rule, global.cap)?;
    if report.cap_exceeded() {
        let cap = [&report.canonical, &report.closed, &report.transitions]
            .into_iter()
            .find_map(|c| match c {
                ConditionOutcome::CapExceeded { cap } => Some(*cap),
                _ => None,
            })
            .unwrap_or(global.cap);
        eprintln!("{}", serde_json::to_string(&report)?);
        return Err(Error::CapExceeded { cap });
    }
    json_out(&report, report.passed())
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Source graph.
    g: PathBuf,
    /// Start 4-colouring, colours 0..3.
    f: PathBuf,
    /// Target 4-colouring.
    target: PathBuf,
    host: PathBuf,
    embedding: PathBuf,
    /// Bundle directory to create.
    #[arg(long)]
    out: PathBuf,
    /// Host vertex playing 0.
    #[arg(long)]
    zero: Option<Vertex>,
}

/// Inputs kept in a bundle so that `lift` and `walk` can recompile it.
#[derive(Serialize, Deserialize)]
struct BundleManifest {
    zero: Option<Vertex>,
    rule: MoveRule,
    g_prime_vertices: usize,
    g_prime_edges: usize,
    not_both_one: usize,
    not_all_zero: usize,
}

const INPUTS: [&str; 5] = ["source.json", "f.json", "g.json", "host.json", "host.embedding.json"];

struct Inputs {
    source: Graph,
    f: Colouring,
    g: Colouring,
    host: Graph,
    embedding: Embedding,
}

fn build(inputs: &Inputs, zero: Option<Vertex>, cap: usize) -> Result<ReductionBundle> {
    let kit = HostKit::detect(&inputs.host, &inputs.embedding, zero, cap)?;
    let library = GadgetLibrary::new(kit, cap)?;
    compile(&inputs.source, &inputs.f, &inputs.g, library)
}

pub fn reduce(global: &Global, args: &ReduceArgs) -> Result<Output> {
    let host = read_graph(&args.host)?;
    let inputs = Inputs {
        source: read_graph(&args.g)?,
        f: read_colouring(&args.f)?,
        g: read_colouring(&args.target)?,
        embedding: read_embedding(&args.embedding, &host)?,
        host,
    };
    let bundle = build(&inputs, args.zero, global.cap)?;
    let dir = &args.out;
    fs::create_dir_all(dir)?;
    write_json(dir.join(INPUTS[0]), &inputs.source)?;
    write_json(dir.join(INPUTS[1]), &inputs.f)?;
    write_json(dir.join(INPUTS[2]), &inputs.g)?;
    write_json(dir.join(INPUTS[3]), &inputs.host)?;
    write_json(dir.join(INPUTS[4]), &inputs.embedding)?;
    write_json(dir.join("g_prime.json"), &bundle.g_prime)?;
    write_json(dir.join("f_prime.json"), &bundle.f_prime)?;
    write_json(dir.join("g_prime_target.json"), &bundle.g_prime_colouring)?;
    write_json(dir.join("registry.json"), &bundle.registry)?;
    let manifest = BundleManifest {
        zero: args.zero,
        rule: bundle.rule,
        g_prime_vertices: bundle.g_prime.vertex_count(),
        g_prime_edges: bundle.g_prime.edge_count(),
        not_both_one: bundle.nbo_count(),
        not_all_zero: bundle.naz_count(),
    };
    write_json(dir.join("bundle.json"), &manifest)?;
    json_out(&manifest, true)
}

fn load_bundle(dir: &Path, cap: usize) -> Result<ReductionBundle> {
    let manifest: BundleManifest = read_json(dir.join("bundle.json"))?;
    let host = read_graph(dir.join(INPUTS[3]))?;
    let inputs = Inputs {
        source: read_graph(dir.join(INPUTS[0]))?,
        f: read_colouring(&dir.join(INPUTS[1]))?,
        g: read_colouring(&dir.join(INPUTS[2]))?,
        embedding: read_embedding(dir.join(INPUTS[4]), &host)?,
        host,
    };
    let bundle = build(&inputs, manifest.zero, cap)?;
    let stored = read_graph(dir.join("g_prime.json"))?;
    if stored.vertex_count() != bundle.g_prime.vertex_count() || stored.edges().ne(bundle.g_prime.edges()) {
        return Err(Error::Precondition("bundle's G' does not match its inputs".into()));
    }
    Ok(bundle)
}

/// Accepts a bare witness or the output of `verify`.
fn read_witness(path: &Path) -> Result<Witness> {
    let value: Value = read_json(path)?;
    let inner = match value {
        Value::Object(mut m) => m
            .remove("witness")
            .ok_or_else(|| Error::MalformedMap("witness object has no \"witness\" field".into()))?,
        v => v,
    };
    Ok(serde_json::from_value(inner)?)
}

pub fn lift(global: &Global, dir: &Path, witness: &Path) -> Result<Output> {
    let bundle = load_bundle(dir, global.cap)?;
    let w = read_witness(witness)?;
    let lifted = bundle.lift_sequence(&w)?;
    json_out(&lifted, true)
}

pub fn walk(global: &Global, dir: &Path, steps: usize) -> Result<Output> {
    let bundle = load_bundle(dir, global.cap)?;
    let report = bundle.random_walk_check(steps, global.seed, global.cap)?;
    json_out(&report, report.violations == 0)
}

pub fn verify(global: &Global, g: &Path, h: &Path, f: &Path, target: &Path) -> Result<Output> {
    let g = read_graph(g)?;
    let h = read_graph(h)?;
    let f = read_colouring(f)?;
    let t = read_colouring(target)?;
    let rule = rule_for(global, &h);
    let result = oracle::reachable(&g, &h, &f, &t, rule, global.cap)?;
    let mut value = serde_json::to_value(&result)?;
    value["rule"] = json!(rule);
    match &result {
        ReachResult::Reachable { witness, .. } => {
            let check = oracle::validate_witness(&g, &h, witness, rule);
            value["witness_valid"] = json!(check.valid);
            Ok(Output::Json { value, ok: true })
        }
        ReachResult::Unreachable { states_explored } => {
            value["component_size"] = json!(states_explored);
            Ok(Output::Json { value, ok: false })
        }
        ReachResult::CapExceeded { cap } => Err(Error::CapExceeded { cap: *cap }),
    }
}

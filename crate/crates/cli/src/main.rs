use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reconforge::oracle::{MoveRule, DEFAULT_CAP};
use reconforge::Error;

mod commands;

/// Reconfiguration gadgets, reductions and the oracle that checks them.
#[derive(Parser, Debug)]
#[command(name = "reconforge", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// State cap for every exhaustive search.
    #[arg(long, global = true, env = "RECONFORGE_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Move rule; inferred from the host when omitted.
    #[arg(long, global = true, value_enum)]
    pub rule: Option<RuleArg>,
    /// Seed for random walks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    Irreflexive,
    Reflexive,
}

impl From<RuleArg> for MoveRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Irreflexive => MoveRule::Irreflexive,
            RuleArg::Reflexive => MoveRule::Reflexive,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph and embedding against a surface class.
    Validate {
        #[arg(long, value_enum)]
        kind: commands::SurfaceKind,
        graph: PathBuf,
        embedding: PathBuf,
    },
    /// Emit a named graph with its embedding.
    Generate(commands::GenerateArgs),
    /// Double covers and retractions.
    Transform {
        #[command(subcommand)]
        which: commands::TransformCommand,
    },
    /// Build a pattern gadget on a host.
    CompileGadget(commands::CompileGadgetArgs),
    /// Exhaustively check the three gadget conditions.
    VerifyGadget { gadget: PathBuf },
    /// Compile a 4-recolouring instance into a bundle directory.
    Reduce(commands::ReduceArgs),
    /// Lift a 4-recolouring witness through a bundle.
    Lift { bundle: PathBuf, witness: PathBuf },
    /// Decide reachability between two colourings.
    Verify {
        g: PathBuf,
        h: PathBuf,
        f: PathBuf,
        target: PathBuf,
    },
    /// Random walk from the encoded start, projecting every state.
    Walk {
        bundle: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
}

/// What a command produced, and whether it is an affirmative answer.
pub enum Output {
    Json { value: serde_json::Value, ok: bool },
    Text(String),
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::CertificateViolation { .. } | Error::LocalTriangulation { .. } | Error::ProjectionUndefined { .. } => 1,
        _ => 2,
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::Validate { kind, graph, embedding } => commands::validate(kind, &graph, &embedding),
        Command::Generate(args) => commands::generate(&args),
        Command::Transform { which } => commands::transform(g, &which),
        Command::CompileGadget(args) => commands::compile_gadget(g, &args),
        Command::VerifyGadget { gadget } => commands::verify_gadget(g, &gadget),
        Command::Reduce(args) => commands::reduce(g, &args),
        Command::Lift { bundle, witness } => commands::lift(g, &bundle, &witness),
        Command::Verify { g: gp, h, f, target } => commands::verify(g, &gp, &h, &f, &target),
        Command::Walk { bundle, steps } => commands::walk(g, &bundle, steps),
    };
    match result {
        Ok(Output::Json { value, ok }) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("JSON values serialise")));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Output::Text(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::CapExceeded { cap } = e {
                emit(&format!("{}\n", serde_json::json!({ "result": "cap-exceeded", "cap": cap })));
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

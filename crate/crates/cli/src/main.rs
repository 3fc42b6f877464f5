use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use embedhom::io::{emit_report, Report};

mod commands;

use commands::{CliError, FieldChoice};

/// Embedded homology of hypergraphs, hard-sphere persistence and
/// hypergraph automorphism groups, over exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "embedhom", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Print only the result payload, without the report envelope.
    #[arg(long, global = true)]
    result_only: bool,

    /// Coefficient field: Q, or Z/p for p in 2, 3, 5, 7, 11, 13, 101.
    #[arg(long, global = true, default_value = "Q")]
    pub field: FieldChoice,

    /// Vertex cap for permutation-group searches.
    #[arg(long, global = true, env = "EMBEDHOM_VERTEX_CAP", default_value_t = 10,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub vertex_cap: u32,

    /// Vertex cap for full-simplex ambients.
    #[arg(long, global = true, env = "EMBEDHOM_AMBIENT_CAP", default_value_t = 16,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub ambient_cap: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Face closures and superset closures of a hypergraph.
    Closure {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ClosureOp::Delta)]
        op: ClosureOp,
        /// Ambient vertex set for the superset closures (default: the file's vertices).
        #[arg(long, value_delimiter = ',')]
        ambient: Option<Vec<u32>>,
    },
    /// Betti numbers of the infimum, supremum or ambient chain complex.
    Homology {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = HomologyKind::Inf)]
        kind: HomologyKind,
        /// Require the input to be a hyperdigraph.
        #[arg(long)]
        directed: bool,
        /// Write boundary matrices as `row col value` text files into this directory.
        #[arg(long)]
        export_matrices: Option<PathBuf>,
    },
    /// Checks that Inf -> Sup induces an isomorphism on homology.
    QuasiCheck { input: PathBuf },
    /// Dimensions and exactness data of the four-term cochain sequence.
    FourTerm { input: PathBuf },
    /// Compares the quotients of an ambient complex by Inf and by Sup.
    QuotientCheck {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AmbientChoice::Full)]
        ambient: AmbientChoice,
        /// Top degree of the full-simplex ambient (default: |V| - 1).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Persistent Betti numbers of the hard-sphere filtration of a point sample.
    Persist {
        points: PathBuf,
        /// Largest configuration size (hyperedge cardinality).
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Kind::Inf)]
        kind: Kind,
        /// Only consecutive step pairs instead of all pairs.
        #[arg(long)]
        consecutive: bool,
        /// Write the table as CSV here (default: embedded in the report).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the interval barcode as JSON here.
        #[arg(long)]
        barcode: Option<PathBuf>,
    },
    /// Homeomorphism, stabilizer and automorphism groups of a hypergraph.
    Aut { input: PathBuf },
    /// Isometry group of a point sample, optionally intersected with a hypergraph's groups.
    Isom {
        points: PathBuf,
        #[arg(long)]
        hypergraph: Option<PathBuf>,
    },
    /// Divisor bound on the order of the configuration bundle.
    BundleOrder {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        genus: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Embedding dimension of RP^m (reference values exist for m <= 4).
        #[arg(long)]
        n_embed: Option<u64>,
    },
    /// Lower bound t + k on the dimension of a k-regular embedding.
    EmbedBound {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        k: u64,
    },
    /// Runs the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smaller instance counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureOp {
    Delta,
    Lower,
    Max,
    Min,
    Upper,
    LowerUpper,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologyKind {
    Inf,
    Sup,
    Ambient,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Inf,
    Sup,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientChoice {
    Closure,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Surface,
    Euclidean,
    Sphere,
    Rp,
    RpTimesR,
}

fn run(cli: &Cli) -> Result<(serde_json::Value, serde_json::Value, Vec<String>), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Closure { input, op, ambient } => commands::closure(input, *op, ambient.as_deref()),
        Command::Homology {
            input,
            kind,
            directed,
            export_matrices,
        } => commands::homology(g, input, *kind, *directed, export_matrices.as_deref()),
        Command::QuasiCheck { input } => commands::quasi_check(g, input),
        Command::FourTerm { input } => commands::four_term(g, input),
        Command::QuotientCheck {
            input,
            ambient,
            max_degree,
        } => commands::quotient_check(g, input, *ambient, *max_degree),
        Command::Persist {
            points,
            n_max,
            max_degree,
            kind,
            consecutive,
            csv,
            barcode,
        } => commands::persist(g, points, *n_max, *max_degree, *kind, !consecutive, csv.as_deref(), barcode.as_deref()),
        Command::Aut { input } => commands::aut(g, input),
        Command::Isom { points, hypergraph } => commands::isom(g, points, hypergraph.as_deref()),
        Command::BundleOrder {
            space,
            n,
            m,
            genus,
            k,
            n_embed,
        } => commands::bundle_order(*space, *n, *m, *genus, *k, *n_embed),
        Command::EmbedBound { t, k } => commands::embed_bound(*t, *k),
        Command::Selftest { seed, quick } => commands::selftest(*seed, *quick),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Closure { .. } => "closure",
        Command::Homology { .. } => "homology",
        Command::QuasiCheck { .. } => "quasi-check",
        Command::FourTerm { .. } => "four-term",
        Command::QuotientCheck { .. } => "quotient-check",
        Command::Persist { .. } => "persist",
        Command::Aut { .. } => "aut",
        Command::Isom { .. } => "isom",
        Command::BundleOrder { .. } => "bundle-order",
        Command::EmbedBound { .. } => "embed-bound",
        Command::Selftest { .. } => "selftest",
    }
}

fn echo_args() -> serde_json::Value {
    serde_json::Value::from(std::env::args().skip(1).collect::<Vec<_>>())
}

fn write_out(g: &Global, report: &Report) -> Result<(), CliError> {
    if g.result_only {
        let text = serde_json::to_string_pretty(&report.result).expect("json value") + "\n";
        match &g.output {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Lib(e.into()))?,
            None => print!("{text}"),
        }
        return Ok(());
    }
    match &g.output {
        Some(p) => emit_report(report, p).map_err(CliError::Lib),
        None => {
            println!("{}", report.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    match outcome {
        Ok((args, result, warnings)) => {
            let mut args = args;
            if let Some(obj) = args.as_object_mut() {
                obj.insert("argv".into(), echo_args());
            }
            let mut report = Report::new(name, args, result, warnings);
            report.elapsed_ms = elapsed_ms;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            match write_out(&cli.global, &report) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => e.report(),
            }
        }
        Err(e) => e.report(),
    }
}

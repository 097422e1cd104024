use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use locce_cli::{all_pass, emit, paper_suite, parse, run_all, CliError, Family, Format, Protocol, Scenario, Shape};

#[derive(Parser)]
#[command(name = "locce", version, about = "Local state discrimination with shared entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format; overrides the scenario file's `format`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Print wall-clock milliseconds in the `ms` column.
    #[arg(long, global = true)]
    timing: bool,
    /// Default seed for randomized searches.
    #[arg(long, global = true, env = "LOCCE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Default)]
struct Params {
    #[arg(long)]
    id: Option<String>,
    #[arg(long, value_enum)]
    protocol: Option<Protocol>,
    /// Overrides the built-in expected value.
    #[arg(long)]
    expected: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// GHZ basis with a GHZ resource (or without, for `computational`).
    Ghz {
        #[arg(long)]
        n: usize,
        /// Qubits per party, e.g. `2,2`; defaults to one per party.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[command(flatten)]
        params: Params,
    },
    /// Graph-state basis decoded with the conjugate graph-state resource.
    Graph {
        #[arg(long)]
        n: usize,
        /// Edge list such as `0-1,1-2`.
        #[arg(long, value_delimiter = ',', value_parser = parse_edge, conflicts_with = "shape")]
        edges: Option<Vec<(usize, usize)>>,
        #[arg(long, value_enum)]
        shape: Option<Shape>,
        #[command(flatten)]
        params: Params,
    },
    /// Lattice states with `m` of the `n` pairs teleported over Bell resources.
    Lattice {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        params: Params,
    },
    /// Parametric two-qubit basis.
    Parametric {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        params: Params,
    },
    /// The four three-party states of Example 4 with a Bell pair on B and C.
    Example4 {
        #[command(flatten)]
        params: Params,
    },
    /// One-way orthogonality condition for the Bell basis.
    Oneway {
        /// Resource spectrum with trace 2, e.g. `1.6,0.4`.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long)]
        outcomes: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[command(flatten)]
        params: Params,
    },
    /// Achieved fidelities against the analytic upper bounds.
    Bounds {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[command(flatten)]
        params: Params,
    },
    /// Runs the full verification battery and prints a summary.
    PaperSuite,
    /// Runs every scenario in a JSON file.
    Run {
        #[arg(long)]
        scenario: std::path::PathBuf,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("edge `{s}` is not of the form a-b"))?;
    let v = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("edge `{s}`: {e}"));
    Ok((v(a)?, v(b)?))
}

fn with_params(mut s: Scenario, p: Params) -> Scenario {
    s.id = p.id;
    s.protocol = p.protocol;
    s.expected = p.expected;
    s
}

fn scenarios(command: Command) -> Result<(Vec<Scenario>, Option<Format>), CliError> {
    let one = |s| Ok((vec![s], None));
    match command {
        Command::Ghz { n, sizes, params } => {
            let mut s = Scenario::new(Family::Ghz);
            s.n = Some(n);
            s.party_sizes = sizes;
            one(with_params(s, params))
        }
        Command::Graph { n, edges, shape, params } => {
            let mut s = Scenario::new(Family::Graph);
            s.n = Some(n);
            s.edges = edges;
            s.shape = shape;
            one(with_params(s, params))
        }
        Command::Lattice { n, m, params } => {
            let mut s = Scenario::new(Family::Lattice);
            s.n = Some(n);
            s.m = m;
            one(with_params(s, params))
        }
        Command::Parametric { alpha, gamma, params } => {
            let mut s = Scenario::new(Family::Parametric);
            s.alpha = Some(alpha);
            s.gamma = Some(gamma);
            one(with_params(s, params))
        }
        Command::Example4 { params } => one(with_params(Scenario::new(Family::Example4), params)),
        Command::Oneway {
            lambdas,
            outcomes,
            restarts,
            params,
        } => {
            let mut s = Scenario::new(Family::Oneway);
            s.lambdas = lambdas;
            s.outcomes = outcomes;
            s.restarts = restarts;
            one(with_params(s, params))
        }
        Command::Bounds {
            n,
            sizes,
            lambdas,
            params,
        } => {
            let mut s = Scenario::new(Family::Bounds);
            s.n = n;
            s.party_sizes = sizes;
            s.lambdas = lambdas;
            one(with_params(s, params))
        }
        Command::PaperSuite => Ok((paper_suite(), None)),
        Command::Run { scenario } => {
            let file = parse(&std::fs::read_to_string(scenario)?)?;
            Ok((file.scenarios, file.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suite = matches!(cli.command, Command::PaperSuite);
    let result = scenarios(cli.command).and_then(|(list, file_format)| {
        let format = cli.common.format.or(file_format).unwrap_or(Format::Table);
        let rows = run_all(&list, cli.common.seed)?;
        Ok((emit(format, &rows, cli.common.timing)?, rows, format))
    });
    match result {
        Ok((text, rows, format)) => {
            print!("{text}");
            if suite {
                let passed = rows.iter().filter(|r| r.status == locce_cli::Status::Pass).count();
                let summary = format!("paper-suite: {passed}/{} scenarios passed", rows.len());
                // keep csv and json output machine-readable
                if format == Format::Table {
                    println!("\n{summary}");
                } else {
                    eprintln!("{summary}");
                }
            }
            if all_pass(&rows) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

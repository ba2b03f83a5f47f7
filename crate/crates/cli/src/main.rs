//! Command-line interface: construct special Schubert intersections,
//! certify non-degeneracy, emit Bethe data, verify bundled fixtures, and
//! run range surveys.

mod fixtures;
mod surveys;
mod textout;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wronsky_core::analysis::{analyze_problem, analyze_truncated, AnalysisOptions};
use wronsky_core::Partition;
use wronsky_core::SchubertProblem;

#[derive(Parser)]
#[command(
    name = "wronsky",
    version,
    about = "Special Schubert intersections in Gr_{N+1}(Poly_d) and the matching two-point Bethe vectors, in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Bits of working precision for numeric fallbacks
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct ProblemArgs {
    /// Inline problem JSON {"N":..,"d":..,"a":[..],"w":[..],"m":..}
    #[arg(long, conflicts_with_all = ["file", "rank"])]
    problem: Option<String>,
    /// Path to a problem JSON file
    #[arg(long, conflicts_with = "rank")]
    file: Option<PathBuf>,
    /// Rank N (the planes have dimension N+1)
    #[arg(short = 'n', long)]
    rank: Option<usize>,
    /// Ambient polynomial degree d
    #[arg(short, requires = "rank")]
    d: Option<usize>,
    /// Partition at 0, comma separated, e.g. 2,1
    #[arg(long, requires = "rank")]
    a: Option<String>,
    /// Partition at infinity, comma separated
    #[arg(long, requires = "rank")]
    w: Option<String>,
    /// Order of the special condition at -1; inferred when omitted
    #[arg(short, requires = "rank")]
    m: Option<usize>,
}

#[derive(Args)]
struct IntersectArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Also evaluate the Bethe vector in the tensor product
    #[arg(long)]
    weight_vector: bool,
}

#[derive(Args)]
struct TruncatedArgs {
    /// Truncation orders m_1 < ... < m_N, comma separated
    #[arg(long)]
    ms: String,
    /// Ambient polynomial degree d
    #[arg(short)]
    d: usize,
    /// Also evaluate the Bethe vector
    #[arg(long)]
    weight_vector: bool,
}

#[derive(Args)]
pub(crate) struct SurveyArgs {
    /// discriminants | common-roots | wronski-corollary | determinant
    pub(crate) kind: String,
    /// Largest ambient degree
    #[arg(long)]
    pub(crate) d_max: Option<usize>,
    /// Rank N for the Wronskian sweep
    #[arg(short = 'n', long, default_value_t = 2)]
    pub(crate) rank: usize,
    /// Number of random instances for the determinant survey
    #[arg(long, default_value_t = 200)]
    pub(crate) count: usize,
    /// Largest index-set size for the determinant survey
    #[arg(long, default_value_t = 6)]
    pub(crate) k_max: usize,
    /// Seed for randomized surveys (always printed)
    #[arg(long, default_value_t = 42)]
    pub(crate) seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Fixture file (JSON array of cases); bundled fixtures when omitted
    fixture: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct and analyze the unique element of a special intersection
    Intersect(IntersectArgs),
    /// Analyze the plane spanned by truncated binomials
    Truncated(TruncatedArgs),
    /// Construct the intersection and evaluate its Bethe vector
    WeightVector(ProblemArgs),
    /// Range and randomized verification surveys
    Survey(SurveyArgs),
    /// Run fixture cases and diff against expected values
    Verify(VerifyArgs),
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

fn load_problem(args: &ProblemArgs) -> Result<SchubertProblem, String> {
    if let Some(inline) = &args.problem {
        return serde_json::from_str(inline).map_err(|e| e.to_string());
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        return serde_json::from_str(&text).map_err(|e| e.to_string());
    }
    let (Some(rank), Some(d), Some(a), Some(w)) = (args.rank, args.d, &args.a, &args.w) else {
        return Err("provide --problem, --file, or all of --rank, -d, --a, --w".into());
    };
    let a = Partition::new(parse_usize_list(a)?).map_err(|e| e.to_string())?;
    let w = Partition::new(parse_usize_list(w)?).map_err(|e| e.to_string())?;
    match args.m {
        Some(m) => SchubertProblem::new(rank, d, a, w, m).map_err(|e| e.to_string()),
        None => SchubertProblem::with_inferred_m(rank, d, a, w).map_err(|e| e.to_string()),
    }
}

fn run_intersect(args: &IntersectArgs, format: Format, precision: u32, force_wv: bool) -> ExitCode {
    let problem = match load_problem(&args.problem) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = AnalysisOptions {
        precision,
        weight_vector: args.weight_vector || force_wv,
        ..AnalysisOptions::default()
    };
    match analyze_problem(&problem, &opts) {
        Ok(report) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable report")
                ),
                Format::Text => textout::print_intersect(&report),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run_truncated(args: &TruncatedArgs, format: Format, precision: u32) -> ExitCode {
    let ms = match parse_usize_list(&args.ms) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = AnalysisOptions {
        precision,
        weight_vector: args.weight_vector,
        ..AnalysisOptions::default()
    };
    match analyze_truncated(&ms, args.d, &opts) {
        Ok((report, generators)) => {
            match format {
                Format::Json => {
                    let payload = serde_json::json!({
                        "generators": generators,
                        "report": report,
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&payload).expect("serializable")
                    );
                }
                Format::Text => {
                    println!("truncated binomial generators:");
                    for g in &generators {
                        println!("  {g}");
                    }
                    textout::print_intersect(&report);
                }
            }
            ExitCode::SUCCESS
        }
        Err(wronsky_core::Error::BadTruncationOrders) => {
            eprintln!("error: {}", wronsky_core::Error::BadTruncationOrders);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let precision = cli.precision;
    match &cli.command {
        Command::Intersect(args) => run_intersect(args, format, precision, false),
        Command::WeightVector(args) => {
            let wrapped = IntersectArgs {
                problem: ProblemArgs {
                    problem: args.problem.clone(),
                    file: args.file.clone(),
                    rank: args.rank,
                    d: args.d,
                    a: args.a.clone(),
                    w: args.w.clone(),
                    m: args.m,
                },
                weight_vector: true,
            };
            run_intersect(&wrapped, format, precision, true)
        }
        Command::Truncated(args) => run_truncated(args, format, precision),
        Command::Survey(args) => surveys::run(args, format == Format::Json, precision),
        Command::Verify(args) => fixtures::run(args.fixture.as_deref(), precision),
    }
}

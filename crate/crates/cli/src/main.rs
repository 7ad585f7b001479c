//! Command-line verifier for the rank identities of Fermat period matrices.
//!
//! Exit codes: 0 when every executed case passes, 1 when any case fails,
//! 2 on configuration or usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fermat_periods::codim::codim;
use fermat_periods::combinatorics::{
    enumerate_index_set, enumerate_linear_cycles, linear_cycle_count,
};
use fermat_periods::matrix::build_matrix;
use fermat_periods::periods::{linear_cycle_period, DegreeVector};
use fermat_periods::rank::{rank_auto, rank_exact, rank_modular};
use fermat_periods::verify::{
    run_all_ones_suite, run_ci_suite, run_linear_pair_suite, CaseKind, CaseStatus, RankStrategy,
    Report, SuiteConfig,
};
use fermat_periods::{
    Error, ExponentIndex, FermatParams, LinearCycle, PeriodMatrix, Provenance, RankResult,
};

#[derive(Parser)]
#[command(name = "fermat-verify", version, about = "Exact verification of period-matrix rank identities for algebraic cycles in Fermat hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the 23 linear-pair rank identities.
    Pairs(SuiteArgs),
    /// Verify complete-intersection rank identities over the standard grid.
    Ci(SuiteArgs),
    /// Verify the all-ones closed form and its row-generation identity.
    AllOnes(AllOnesArgs),
    /// Evaluate one linear-cycle period.
    Period(PeriodArgs),
    /// Build a period matrix and write it to a file.
    Matrix(MatrixArgs),
    /// Compute the rank of a previously dumped period matrix.
    Rank(RankArgs),
    /// Evaluate a codimension number C_a.
    Codim(CodimArgs),
    /// Count the linear cycles inside the Fermat hypersurface.
    CountCycles(ParamArgs),
    /// Enumerate canonical linear cycles, or an exponent index set.
    Enumerate(EnumerateArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Modular,
    Auto,
}

impl From<MethodArg> for RankStrategy {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => RankStrategy::Exact,
            MethodArg::Modular => RankStrategy::Modular,
            MethodArg::Auto => RankStrategy::Auto,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
    Text,
}

#[derive(Args)]
struct SuiteArgs {
    /// Restrict to cases with this n.
    #[arg(long)]
    n: Option<u32>,
    /// Restrict to cases with this d.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Primes for the modular path.
    #[arg(long, default_value_t = 3)]
    primes: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the JSON report here in addition to the table on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct AllOnesArgs {
    #[command(flatten)]
    suite: SuiteArgs,
    /// Largest degree d of the grid.
    #[arg(long, default_value_t = 6)]
    degree_cap: u32,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct PeriodArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Root exponents a_1,...,a_{n/2+1} of the cycle.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
    /// Coordinate permutation b_0,...,b_{n+1} of the cycle.
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<u32>,
    /// Exponent index i_0,...,i_{n+1} of the differential form.
    #[arg(long, value_delimiter = ',', required = true)]
    i: Vec<u32>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Intersection dimension of the linear pair (-1 = disjoint).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["degrees", "a", "b"])]
    m: Option<i64>,
    /// Complete-intersection degrees d_1,...,d_{n/2+1}.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["a", "b"])]
    degrees: Option<Vec<u32>>,
    /// Root exponents of a single linear cycle (with --b).
    #[arg(long, value_delimiter = ',', requires = "b")]
    a: Option<Vec<u32>>,
    /// Coordinate permutation of a single linear cycle (with --a).
    #[arg(long, value_delimiter = ',', requires = "a")]
    b: Option<Vec<u32>>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct RankArgs {
    /// Matrix dump produced by the matrix subcommand.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, default_value_t = 3)]
    primes: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct CodimArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Multiset a_1,...,a_s.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Enumerate the exponent index set of this total degree instead of the
    /// linear cycles.
    #[arg(long)]
    total: Option<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Pairs(args) => {
            let config = suite_config(&args, 6);
            emit_report(&run_linear_pair_suite(&config), &args)
        }
        Command::Ci(args) => {
            let config = suite_config(&args, 6);
            emit_report(&run_ci_suite(&config), &args)
        }
        Command::AllOnes(args) => {
            let config = suite_config(&args.suite, args.degree_cap);
            emit_report(&run_all_ones_suite(&config), &args.suite)
        }
        Command::Period(args) => {
            let params = FermatParams::new(args.params.n, args.params.d)?;
            let cycle = LinearCycle::new(args.a, args.b)?;
            let value = linear_cycle_period(params, &cycle, &ExponentIndex(args.i))?;
            println!("scalar {}", value.scalar);
            println!("normalized {}", value.normalized);
            Ok(ExitCode::SUCCESS)
        }
        Command::Matrix(args) => {
            let params = FermatParams::new(args.params.n, args.params.d)?;
            let provenance = match (args.m, args.degrees, args.a, args.b) {
                (Some(m), None, None, None) => Provenance::LinearPair { m },
                (None, Some(degrees), None, None) => Provenance::CompleteIntersection {
                    degrees: DegreeVector::canonical(params, degrees)?,
                },
                (None, None, Some(a), Some(b)) => Provenance::SingleCycle { a, b },
                _ => {
                    return Err(Error::BadParams(
                        "specify exactly one of --m, --degrees, or --a with --b".into(),
                    ))
                }
            };
            let matrix = build_matrix(params, provenance)?;
            let bytes = match args.format {
                FormatArg::Json => matrix.dump_json(),
                FormatArg::Tsv => matrix.dump_tsv(),
                FormatArg::Text => {
                    return Err(Error::BadParams("matrix supports json or tsv output".into()))
                }
            };
            std::fs::write(&args.out, bytes)?;
            println!(
                "wrote {} x {} matrix over Z[zeta_{}] to {}",
                matrix.rows(),
                matrix.cols(),
                params.zeta_order(),
                args.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank(args) => {
            let bytes = std::fs::read(&args.file)?;
            let matrix = if bytes.first() == Some(&b'{') {
                PeriodMatrix::load_json(&bytes)?
            } else {
                PeriodMatrix::load_tsv(&bytes)?
            };
            if args.primes == 0 {
                return Err(Error::BadParams("--primes must be at least 1".into()));
            }
            let result: RankResult = match args.method {
                MethodArg::Exact => rank_exact(&matrix),
                MethodArg::Modular => rank_modular(&matrix, args.primes),
                MethodArg::Auto => rank_auto(&matrix, args.primes),
            };
            if args.format == FormatArg::Json {
                println!("{}", serde_json::to_string_pretty(&result).expect("serializable"));
            } else {
                println!(
                    "rank {} ({}, {})",
                    result.rank,
                    method_name(&result),
                    if result.certified { "certified" } else { "uncertified" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Codim(args) => {
            println!("{}", codim(args.params.n, args.params.d, &args.a));
            Ok(ExitCode::SUCCESS)
        }
        Command::CountCycles(args) => {
            let params = FermatParams::new(args.n, args.d)?;
            println!("{}", linear_cycle_count(params));
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate(args) => {
            let params = FermatParams::new(args.params.n, args.params.d)?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            match args.total {
                Some(total) => {
                    for i in enumerate_index_set(params, total) {
                        writeln!(out, "{}", join(&i.0))?;
                    }
                }
                None => {
                    for cycle in enumerate_linear_cycles(params) {
                        writeln!(out, "a={} b={} sign={}", join(&cycle.a), join(&cycle.b), cycle.sign)?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn suite_config(args: &SuiteArgs, degree_cap: u32) -> SuiteConfig {
    SuiteConfig {
        method: args.method.into(),
        prime_count: args.primes.max(1),
        jobs: args.jobs,
        filter_n: args.n,
        filter_d: args.d,
        all_ones_degree_cap: degree_cap,
    }
}

fn method_name(result: &RankResult) -> String {
    match &result.method {
        fermat_periods::RankMethod::Exact => "exact".to_string(),
        fermat_periods::RankMethod::Modular { primes } => {
            format!("modular at {} primes", primes.len())
        }
    }
}

fn case_label(case: &fermat_periods::VerificationCase) -> String {
    match &case.kind {
        CaseKind::LinearPair { m } => format!("(n={}, d={}, m={})", case.n, case.d, m),
        CaseKind::CompleteIntersection { degrees } => {
            format!("(n={}, d={}, degrees={:?})", case.n, case.d, degrees)
        }
        CaseKind::AllOnes => format!("(n={}, d={}, all-ones)", case.n, case.d),
    }
}

fn emit_report(report: &Report, args: &SuiteArgs) -> Result<ExitCode, Error> {
    if args.format == FormatArg::Json {
        println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
    } else {
        for case in &report.cases {
            let computed = case
                .computed
                .as_ref()
                .map(|r| format!("{} ({})", r.rank, method_name(r)))
                .unwrap_or_else(|| "-".to_string());
            println!(
                "{:<40} expected {:>6}  computed {:<28} {:>4}  {:.2}s{}",
                case_label(case),
                case.expected,
                computed,
                match case.status {
                    CaseStatus::Pass => "pass",
                    CaseStatus::Fail => "FAIL",
                    CaseStatus::Error => "ERR",
                },
                case.wall_time,
                case.detail.as_deref().map(|s| format!("  [{s}]")).unwrap_or_default(),
            );
        }
        println!(
            "{}: {} passed, {} failed, {} errored in {:.2}s",
            report.suite, report.passed, report.failed, report.errored, report.wall_time
        );
    }
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_vec_pretty(report).expect("serializable"))?;
    }
    Ok(if report.failed == 0 && report.errored == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

//! `hexasort` command-line front end.
//!
//! Exit status: 0 yes/accept, 1 no/reject, 2 usage or validation error,
//! 3 search budget exceeded.

mod error;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hexasort::auto::{solve_with, SolverChoice};
use hexasort::engine::{play_trace, Instance, TraceFailure, Variant};
use hexasort::format::{
    parse_instance, parse_partition, parse_solution, parse_three_partition, parse_trace,
    serialize_artifact, serialize_instance, serialize_trace, FormatError, ParsedInstance,
    SolutionDocument,
};
use hexasort::harness::{
    bench, check_spider_forced_config, cross_check, four_merge_suite, generate_instance,
    render_tsv, spider_config_suite, suite_cases, three_merge_suite, BenchSuite, Family,
    GeneratorParams, LemmaReport,
};
use hexasort::reductions::{
    partition_canonicalize, partition_to_spider, partition_to_two_edges,
    three_partition_to_gadgets, witness_from_partition, witness_from_triplets,
    CanonicalizationResult, PartitionInstance, ReductionArtifact, ThreePartitionInstance, Topology,
    TreeShape,
};
use hexasort::solvers::{SearchLimits, DEFAULT_MAX_STATES};

use error::{CliError, EXIT_NO, EXIT_YES};

#[derive(Parser)]
#[command(
    name = "hexasort",
    version,
    about = "Exact solvers and reductions for the Hexasort stacking game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Compile a Partition or 3-Partition source into a Hexasort instance.
    Reduce(ReduceArgs),
    /// Decide an instance.
    Solve(SolveArgs),
    /// Replay a trace against an instance.
    Verify(VerifyArgs),
    /// Run the exhaustive gadget-lemma checkers.
    Enumerate(EnumerateArgs),
    /// Print the DP state-count table for a bench suite.
    Bench(BenchArgs),
    /// Compare every solver against brute force on seeded instances.
    CrossCheck(CrossCheckArgs),
}

#[derive(Args)]
struct LimitArgs {
    /// Abort a search after this many states.
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: u64,
    /// Abort a search after this many seconds.
    #[arg(long)]
    max_seconds: Option<u64>,
    /// Run searches on a single thread.
    #[arg(long)]
    sequential: bool,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_states: self.max_states,
            max_time: self.max_seconds.map(Duration::from_secs),
            parallel: !self.sequential,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Empty,
    Fitting,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Empty => Variant::Empty,
            VariantArg::Fitting => Variant::Fitting,
        }
    }
}

/// `N` or `A-B` (inclusive).
#[derive(Clone, Debug)]
struct Span<T>(RangeInclusive<T>);

impl<T: FromStr + Copy> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| {
            x.trim()
                .parse::<T>()
                .map_err(|_| format!("`{s}` is not N or A-B"))
        };
        match s.split_once('-') {
            Some((a, b)) => Ok(Span(num(a)?..=num(b)?)),
            None => {
                let n = num(s)?;
                Ok(Span(n..=n))
            }
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// path, star, spider, disjoint-edges or random.
    #[arg(long, default_value = "random")]
    family: Family,
    #[arg(long, default_value = "1-4")]
    vertices: Span<usize>,
    /// Edge probability for the random family.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Exact edge count for the random family.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, default_value = "1-2")]
    colors: Span<u32>,
    #[arg(long, default_value = "1-5")]
    threshold: Span<u32>,
    #[arg(long, default_value = "0-6")]
    length: Span<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Partition,
    #[value(name = "3partition")]
    ThreePartition,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    TwoEdges,
    Spider,
    DisjointSpiders,
    SpiderTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Path,
    Binary,
    Star,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    from: Source,
    #[arg(long)]
    construction: ConstructionArg,
    /// How the gadgets of `spider-tree` are joined.
    #[arg(long, default_value = "path")]
    tree_shape: ShapeArg,
    /// Source document: `{"elements": [...]}`, plus `"bound"` for 3-Partition.
    input: PathBuf,
    /// Artifact output file (stdout if absent).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Source solution (`{"subset": [...]}` or `{"triplets": [[...], ...]}`)
    /// to translate into a witness trace.
    #[arg(long)]
    witness_from: Option<PathBuf>,
    /// Where to write the witness trace (stdout if absent).
    #[arg(long, requires = "witness_from")]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    variant: VariantArg,
    #[arg(long, default_value = "auto")]
    solver: SolverChoice,
    /// Write the witness trace of a yes-verdict here.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    trace: PathBuf,
    /// Override the variant declared in the trace document.
    #[arg(long)]
    variant: Option<VariantArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LemmaArg {
    ThreeMerge,
    FourMerge,
    SpiderConfig,
    All,
}

#[derive(Args)]
struct EnumerateArgs {
    lemma: LemmaArg,
    /// Largest threshold for the merge-lemma suites.
    #[arg(long, default_value_t = 6)]
    max_t: u32,
    /// Largest element sum for the spider-configuration suite.
    #[arg(long, default_value_t = 12)]
    max_sum: u64,
    /// Check a single Partition source instead of the whole suite.
    #[arg(long)]
    partition: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "ladder")]
    suite: BenchSuite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print `-` in the elapsed column so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct CrossCheckArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    limits: LimitArgs,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_with<T>(
    path: &Path,
    parse: impl FnOnce(&str) -> Result<T, FormatError>,
) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn load_instance(path: &Path) -> Result<ParsedInstance, CliError> {
    parse_with(path, parse_instance)
}

fn status(yes: bool) -> ExitCode {
    ExitCode::from(if yes { EXIT_YES } else { EXIT_NO })
}

fn run_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    let params = GeneratorParams {
        family: args.family,
        vertices: args.vertices.0,
        edge_density: args.density,
        edge_count: args.edges,
        colors: args.colors.0,
        threshold: args.threshold.0,
        length: args.length.0,
        seed: args.seed,
    };
    let inst = generate_instance(&params)?;
    write_or_print(args.out.as_deref(), &serialize_instance(&inst))?;
    Ok(ExitCode::SUCCESS)
}

fn canonical_partition(elements: Vec<u64>) -> Result<PartitionInstance, CliError> {
    let p = PartitionInstance::new(elements)?;
    match partition_canonicalize(&p) {
        CanonicalizationResult::Canonical(c) => Ok(c),
        CanonicalizationResult::Decided { decision, subset } => Err(CliError::Usage(format!(
            "source is not canonical and decides trivially: {decision}{}",
            subset
                .map(|s| format!(" with subset {s:?}"))
                .unwrap_or_default()
        ))),
    }
}

fn run_reduce(args: ReduceArgs) -> Result<ExitCode, CliError> {
    let solution = args
        .witness_from
        .as_deref()
        .map(|p| parse_with(p, parse_solution))
        .transpose()?;
    let (artifact, witness): (ReductionArtifact, _) = match args.from {
        Source::Partition => {
            let doc = parse_with(&args.input, parse_partition)?;
            let p = canonical_partition(doc.elements)?;
            let art = match args.construction {
                ConstructionArg::TwoEdges => partition_to_two_edges(&p)?,
                ConstructionArg::Spider => partition_to_spider(&p)?,
                _ => {
                    return Err(CliError::Usage(
                        "partition sources support the two-edges and spider constructions".into(),
                    ))
                }
            };
            let witness = match solution {
                None => None,
                Some(SolutionDocument::Subset { subset }) => {
                    Some(witness_from_partition(&art, &subset)?)
                }
                Some(_) => {
                    return Err(CliError::Usage(
                        "a partition solution needs a `subset` list".into(),
                    ))
                }
            };
            (art, witness)
        }
        Source::ThreePartition => {
            let doc = parse_with(&args.input, parse_three_partition)?;
            let a = ThreePartitionInstance::new(doc.elements, doc.bound)?;
            let topology = match args.construction {
                ConstructionArg::DisjointSpiders => Topology::Disjoint,
                ConstructionArg::SpiderTree => Topology::Tree(match args.tree_shape {
                    ShapeArg::Path => TreeShape::Path,
                    ShapeArg::Binary => TreeShape::Binary,
                    ShapeArg::Star => TreeShape::Star,
                }),
                _ => return Err(CliError::Usage(
                    "3partition sources support the disjoint-spiders and spider-tree constructions"
                        .into(),
                )),
            };
            let art = three_partition_to_gadgets(&a, topology)?;
            let witness = match solution {
                None => None,
                Some(SolutionDocument::Triplets { triplets }) => {
                    Some(witness_from_triplets(&art, &triplets)?)
                }
                Some(_) => {
                    return Err(CliError::Usage(
                        "a 3partition solution needs a `triplets` list".into(),
                    ))
                }
            };
            (art, witness)
        }
    };
    write_or_print(args.out.as_deref(), &serialize_artifact(&artifact))?;
    if let Some(w) = witness {
        write_or_print(
            args.witness_out.as_deref(),
            &serialize_trace(&w, Variant::Empty),
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, CliError> {
    let inst = load_instance(&args.instance)?.into_instance();
    let variant = Variant::from(args.variant);
    let verdict = solve_with(&inst, variant, args.solver, &args.limits.limits())?;
    let reason = verdict
        .reason
        .map(|r| format!(" ({r})"))
        .unwrap_or_default();
    println!("{}{reason}", verdict.decision);
    if let Some(w) = &verdict.witness {
        let text: Vec<String> = w.0.iter().map(ToString::to_string).collect();
        println!("witness: {}", text.join(" "));
        if let Some(out) = &args.witness_out {
            write_or_print(Some(out), &serialize_trace(w, variant))?;
        }
    }
    Ok(status(verdict.is_yes()))
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let inst: Instance = load_instance(&args.instance)?.into_instance();
    let (trace, declared) = parse_with(&args.trace, parse_trace)?;
    let variant = args.variant.map(Variant::from).unwrap_or(declared);
    let replay = play_trace(&inst, &trace, variant)?;
    match &replay.failure {
        None => println!("accept ({variant})"),
        Some(f) => {
            println!("reject ({variant}): {f}");
            if let TraceFailure::IllegalStep { index, .. } = f {
                println!("failing step: {}", index + 1);
            }
        }
    }
    Ok(status(replay.accepted))
}

fn print_report(r: &LemmaReport) {
    let patterns: Vec<String> = r.patterns.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!(
        "{}\tcases={}\tviolations={}\t{}",
        r.lemma,
        r.cases,
        r.violations.len(),
        patterns.join(",")
    );
    for v in &r.violations {
        println!("  violation: {}", v.context);
        if let Some(t) = &v.trace {
            println!("    trace: {:?}", t.0);
        }
        if let Some(c) = &v.configuration {
            println!("    configuration: {c:?}");
        }
    }
}

fn run_enumerate(args: EnumerateArgs) -> Result<ExitCode, CliError> {
    let limits = args.limits.limits();
    let wants = |l: LemmaArg| args.lemma == l || args.lemma == LemmaArg::All;
    let mut reports = Vec::new();
    if wants(LemmaArg::ThreeMerge) {
        reports.push(three_merge_suite(args.max_t, &limits)?);
    }
    if wants(LemmaArg::FourMerge) {
        reports.push(four_merge_suite(args.max_t, &limits)?);
    }
    if wants(LemmaArg::SpiderConfig) {
        reports.push(match &args.partition {
            Some(p) => check_spider_forced_config(
                &canonical_partition(parse_with(p, parse_partition)?.elements)?,
                &limits,
            )?,
            None => spider_config_suite(args.max_sum, &limits)?,
        });
    }
    for r in &reports {
        print_report(r);
    }
    Ok(status(reports.iter().all(LemmaReport::passed)))
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    let rows = bench(&suite_cases(args.suite, args.seed), &args.limits.limits());
    print!("{}", render_tsv(&rows, !args.no_timing));
    Ok(status(rows.iter().all(|r| r.within_bound)))
}

fn run_cross_check(args: CrossCheckArgs) -> Result<ExitCode, CliError> {
    let params = GeneratorParams::default().with_seed(args.seed);
    let report = cross_check(&params, args.trials, &args.limits.limits())?;
    for d in &report.disagreements {
        println!(
            "disagreement\ttrial={}\tseed={}\tvariant={}\tdecider={}\t{:?}\t{}",
            d.trial,
            d.seed,
            d.variant,
            d.decider,
            d.mismatch,
            serialize_instance(&d.instance).replace('\n', "")
        );
    }
    println!(
        "trials={}\tcomparisons={}\tskipped={}\tdisagreements={}",
        report.trials,
        report.comparisons,
        report.skipped,
        report.disagreements.len()
    );
    Ok(status(report.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Solve(a) => run_solve(a),
        Command::Verify(a) => run_verify(a),
        Command::Enumerate(a) => run_enumerate(a),
        Command::Bench(a) => run_bench(a),
        Command::CrossCheck(a) => run_cross_check(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}

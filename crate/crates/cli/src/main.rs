use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polydiff::constructions::{axis_simplex, staircase_antiblocking, CoordinateSubset};
use polydiff::covers::UniformCover;
use polydiff::mixed::lemma_exact_sequence_check;
use polydiff::polytope::{points_from_json_str, VPolytope, DIM_CAP};
use polydiff::rational::parse_rational;
use polydiff::report::{write_csv, VerificationReport};
use polydiff::search::{run_search, BodyClass, SearchConfig, SearchTarget};
use polydiff::selftest::{all_passed, format_table, run_selftest, SelftestOptions};
use polydiff::verify::{vandermonde_report, Verifier};
use polydiff::Error;

const EXIT_VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(name = "polydiff", version, about = "Exact checks of mixed-volume inequalities for polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check on one body and print its report.
    Verify(VerifyArgs),
    /// Run seeded random trials of a check.
    Search(SearchArgs),
    /// Run the built-in identity suite.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    RogersShephard,
    Godbersen,
    Schneider,
    Conj1,
    Conj2,
    Conj2Reduction,
    DualBt,
    Decomposition,
    Alesker,
    LemmaExact,
    Vandermonde,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
struct BodySource {
    /// Body JSON file: {"dim": n, "vertices": [["p/q", …], …]}.
    #[arg(long, value_name = "FILE", group = "source")]
    body: Option<PathBuf>,
    /// Axis simplex conv{0, c₁e₁, …, cₙeₙ}, e.g. `1,1/2`.
    #[arg(long, value_name = "C1,…,CN", group = "source")]
    simplex: Option<String>,
    /// Generator points (body JSON format) of a staircase body.
    #[arg(long, value_name = "FILE", group = "source")]
    staircase: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Allow ambient dimension above the cap.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[command(flatten)]
    source: BodySource,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    kvec: Option<Vec<usize>>,
    /// `k₀,…,k_p` for `alesker`.
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
    /// Cover blocks, 1-based, separated by `;`, e.g. `1,2;1;2`.
    #[arg(long)]
    cover: Option<String>,
    /// 1-based subspace coordinates for `lemma-exact`, e.g. `2`.
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<usize>>,
    /// Extra body file: the L bodies of `decomposition`, the subspace bodies
    /// of `lemma-exact`. Repeatable.
    #[arg(long = "l", value_name = "FILE")]
    l: Vec<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Godbersen,
    Conj1,
    Conj2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Antiblocking,
    General,
    Simplex,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    target: TargetArg,
    #[arg(long = "class", value_enum, default_value = "antiblocking")]
    class: ClassArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    kvec: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Master seed; trial i uses stream i.
    #[arg(long)]
    seed: u64,
    /// Coordinates are drawn from multiples of 1/q.
    #[arg(long, default_value_t = 4)]
    grid_q: u32,
    /// Generator points per body.
    #[arg(long, default_value_t = 4)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SelftestArgs {
    /// Skip the 6-dimensional cases.
    #[arg(long)]
    quick: bool,
    /// Perturb one expected value; the suite must then fail.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &PathBuf, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_body(path: &PathBuf) -> Result<VPolytope, Error> {
    with_path(path, VPolytope::from_json_str(&read(path)?))
}

impl BodySource {
    fn load(&self) -> Result<VPolytope, Error> {
        if let Some(path) = &self.body {
            return load_body(path);
        }
        if let Some(spec) = &self.simplex {
            let c = spec.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>, _>>()?;
            return axis_simplex(&c);
        }
        if let Some(path) = &self.staircase {
            let (_, points) = with_path(path, points_from_json_str(&read(path)?))?;
            return with_path(path, staircase_antiblocking(&points));
        }
        Err(usage("a body is required: --body, --simplex or --staircase"))
    }
}

fn parse_cover(n: usize, text: &str) -> Result<UniformCover, Error> {
    let blocks = text
        .split(';')
        .map(|block| {
            let members = block
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| usage(format!("bad cover element {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            CoordinateSubset::from_one_based(n, members)
        })
        .collect::<Result<Vec<_>, _>>()?;
    UniformCover::infer(n, blocks)
}

fn need<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, Error> {
    value.clone().ok_or_else(|| usage(format!("{flag} is required for this check")))
}

fn warn_force(force: bool) {
    if force {
        eprintln!("warning: --force lifts the dimension cap of {DIM_CAP}; this may take very long");
    }
}

fn emit(output: &Output, json: String, csv_reports: &[VerificationReport]) -> Result<(), Error> {
    let text = match output.format {
        Format::Json => json + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(csv_reports, &mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Error> {
    warn_force(args.output.force);
    let v = Verifier::new().with_force(args.output.force);
    let report = match args.check {
        Check::Vandermonde => vandermonde_report(need(&args.n, "--n")?, need(&args.p, "--p")?, args.k)?,
        check => {
            let body = args.source.load()?;
            let n = body.dim();
            match check {
                Check::RogersShephard => v.rogers_shephard(&body)?,
                Check::Godbersen => v.godbersen(&body, need(&args.k, "--k")?)?,
                Check::Schneider => v.schneider(&body, need(&args.p, "--p")?)?,
                Check::Conj1 => v.conjecture1(&body, need(&args.p, "--p")?, need(&args.k, "--k")?)?,
                Check::Conj2 => v.conjecture2(&body, need(&args.p, "--p")?, &need(&args.kvec, "--kvec")?)?,
                Check::Conj2Reduction => {
                    v.conjecture2_reduction(&body, need(&args.p, "--p")?, &need(&args.kvec, "--kvec")?)?
                }
                Check::DualBt => v.dual_bt(&body, &parse_cover(n, &need(&args.cover, "--cover")?)?)?,
                Check::Decomposition => {
                    let ls = if args.l.is_empty() {
                        vec![body.clone(); need(&args.p, "--p or --l")?]
                    } else {
                        args.l.iter().map(load_body).collect::<Result<Vec<_>, _>>()?
                    };
                    v.decomposition(&body, &ls)?
                }
                Check::Alesker => {
                    let partition = need(&args.partition, "--partition")?;
                    v.alesker_coefficient(&body, partition.len().saturating_sub(1), &partition)?
                }
                Check::LemmaExact => {
                    let sigma = CoordinateSubset::from_one_based(n, need(&args.sigma, "--sigma")?)?;
                    let k = sigma.len();
                    let mut ls = args.l.iter().map(load_body).collect::<Result<Vec<_>, _>>()?;
                    if ls.len() == 1 && k > 1 {
                        ls = vec![ls[0].clone(); k];
                    }
                    lemma_exact_sequence_check(&sigma, &vec![body.clone(); n - k], &ls)?
                }
                Check::Vandermonde => unreachable!(),
            }
        }
    };
    let pass = !report.any_violation();
    emit(&args.output, report.to_json_pretty(), std::slice::from_ref(&report))?;
    if !pass {
        eprintln!("{}", report.summary_line());
    }
    Ok(pass)
}

fn cmd_search(args: &SearchArgs) -> Result<bool, Error> {
    warn_force(args.output.force);
    let target = match args.target {
        TargetArg::Godbersen => SearchTarget::Godbersen,
        TargetArg::Conj1 => SearchTarget::Conj1,
        TargetArg::Conj2 => SearchTarget::Conj2,
    };
    let class = match args.class {
        ClassArg::Antiblocking => BodyClass::Antiblocking,
        ClassArg::General => BodyClass::General,
        ClassArg::Simplex => BodyClass::Simplex,
    };
    let k_spec = match target {
        SearchTarget::Conj2 => need(&args.kvec, "--kvec")?,
        _ => vec![need(&args.k, "--k")?],
    };
    let mut config = SearchConfig::new(target, class, args.n, args.p, k_spec);
    config.trials = args.trials;
    config.seed = args.seed;
    config.grid_q = args.grid_q;
    config.points = args.points;
    config.force = args.output.force;
    let outcome = run_search(&config)?;
    let json = serde_json::to_string_pretty(&outcome)?;
    emit(&args.output, json, &outcome.reports)?;
    let s = &outcome.summary;
    eprintln!(
        "{} trials, {} violations ({} on proven inputs), {} equalities, min gap {}",
        s.trials,
        s.violations,
        s.proven_violations,
        s.equalities,
        polydiff::rational::format_rational(&s.min_gap)
    );
    Ok(s.violations == 0)
}

fn cmd_selftest(args: &SelftestArgs) -> bool {
    let rows = run_selftest(&SelftestOptions { quick: args.quick, inject_fault: args.inject_fault });
    print!("{}", format_table(&rows));
    let ok = all_passed(&rows);
    if !ok {
        eprintln!("SELFTEST FAILED");
    }
    ok
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for violations here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Search(a) => cmd_search(a),
        Command::Selftest(a) => Ok(cmd_selftest(a)),
    };
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result, matches!(cli.command, Command::Selftest(_))))
}

/// 0 on pass, 2 on a violation, 1 on errors and selftest failures.
fn exit_code(result: &Result<bool, Error>, selftest: bool) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) if !selftest => EXIT_VIOLATION,
        _ => 1,
    }
}

//! Command-line front end: single runs, cross-checking and benchmarks.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sublcs::bench::{planted_corpus, run_cell, Algorithm, BenchRecord, Planted};
use sublcs::corpus::{load_corpus, AlphabetMode, Source};
use sublcs::exact::ExactOptions;
use sublcs::matcher::count_containing_documents;
use sublcs::meter::{self, measure};
use sublcs::oracle::LcsResult;
use sublcs::{Corpus, Error};

#[global_allocator]
static ALLOC: meter::CountingAlloc = meter::CountingAlloc;

const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "sublcs", version, about = "Longest substring common to at least d of m documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact solver in O(tau) words
    Exact(RunArgs),
    /// Constant-space approximation within tau - 1 of the optimum
    Approx(RunArgs),
    /// Linear-space generalized suffix tree solution
    Classic(RunArgs),
    /// Brute-force reference solver
    Oracle(RunArgs),
    /// Run every algorithm and check that they agree
    Verify(RunArgs),
    /// Time and meter the algorithms on planted corpora
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Alphabet {
    Byte,
    Decimal,
}

#[derive(Args)]
struct InputArgs {
    /// Documents: several files (one each), one file split on --sep, or a directory
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Minimum number of documents that must contain the substring
    #[arg(long)]
    d: usize,

    /// Record separator for a single input file: a byte value (31, 0x1f) or one character
    #[arg(long, value_parser = parse_separator, default_value = "0x1f")]
    sep: u8,

    #[arg(long, value_enum, default_value = "byte")]
    alphabet: Alphabet,
}

#[derive(Args)]
struct OutputArgs {
    /// Print a JSON record (default)
    #[arg(long, conflicts_with = "tsv")]
    json: bool,

    /// Print a tab-separated header and row
    #[arg(long)]
    tsv: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Space budget; clamped to n for the exact and approximate solvers
    #[arg(long, default_value_t = 16)]
    tau: usize,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus sizes n, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000")]
    sizes: Vec<usize>,

    /// Space budgets, comma separated
    #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
    tau_list: Vec<usize>,

    /// Algorithms to run: exact, approx, classic, oracle
    #[arg(long, value_delimiter = ',', default_value = "exact,approx,classic")]
    algorithms: Vec<String>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long, default_value_t = 4)]
    m: usize,

    #[arg(long, default_value_t = 2)]
    d: usize,

    #[arg(long, default_value_t = 4)]
    sigma: u32,

    /// Length of the planted common substring
    #[arg(long, default_value_t = 40)]
    secret_len: usize,

    /// Emit JSON lines instead of TSV
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct RunRecord {
    algorithm: &'static str,
    tau: Option<usize>,
    length: usize,
    doc: usize,
    start: usize,
    count_verified: usize,
    peak_words: usize,
    millis: f64,
}

impl RunRecord {
    const TSV_HEADER: &'static str = "algorithm\ttau\tlength\tdoc\tstart\tcount_verified\tpeak_words\tmillis";

    fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.algorithm,
            self.tau.map_or("-".to_string(), |t| t.to_string()),
            self.length,
            self.doc,
            self.start,
            self.count_verified,
            self.peak_words,
            self.millis
        )
    }
}

fn parse_separator(s: &str) -> Result<u8, String> {
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u8::from_str_radix(hex, 16).ok()
    } else if s.len() == 1 && !s.as_bytes()[0].is_ascii_digit() {
        Some(s.as_bytes()[0])
    } else {
        s.parse::<u8>().ok()
    };
    parsed.ok_or_else(|| format!("not a byte: {s:?}"))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(args: &InputArgs) -> Result<Corpus, Failure> {
    let mode = match args.alphabet {
        Alphabet::Byte => AlphabetMode::Byte,
        Alphabet::Decimal => AlphabetMode::Decimal,
    };
    let source = match args.inputs.as_slice() {
        [dir] if dir.is_dir() => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            Source::Documents(files.iter().map(|p| read(p)).collect::<Result<_, _>>()?)
        }
        [file] => Source::Delimited(read(file)?, args.sep),
        many => Source::Documents(many.iter().map(|p| read(p)).collect::<Result<_, _>>()?),
    };
    Ok(load_corpus(source, mode, args.d)?)
}

fn run_one(c: &Corpus, alg: Algorithm, tau: usize) -> Result<RunRecord, Failure> {
    let tau = tau.clamp(1, c.n().max(1));
    let opts = ExactOptions::from_env();
    let start = Instant::now();
    let (result, peak_words) = measure(|| match alg {
        Algorithm::Exact => sublcs::exact::exact_lcs(c, tau, &opts),
        other => other.run(c, tau),
    });
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let r: LcsResult = result?;
    let count_verified = if r.length == 0 { c.m() } else { count_containing_documents(c, c.span_symbols(&r.span)) };
    if count_verified < c.d() {
        return Err(Failure::Invariant(format!("{} returned {} found in only {count_verified} documents", alg, r.span)));
    }
    Ok(RunRecord {
        algorithm: alg.name(),
        tau: alg.uses_tau().then_some(tau),
        length: r.length,
        doc: r.span.doc,
        start: r.span.start,
        count_verified,
        peak_words,
        millis,
    })
}

fn print_records(records: &[RunRecord], out: &OutputArgs) {
    if out.tsv {
        println!("{}", RunRecord::TSV_HEADER);
        for r in records {
            println!("{}", r.to_tsv());
        }
    } else if let [r] = records {
        println!("{}", serde_json::to_string(r).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(records).expect("serializable"));
    }
}

fn verify(args: &RunArgs) -> Result<(), Failure> {
    let c = load(&args.input)?;
    let records = vec![
        run_one(&c, Algorithm::Exact, args.tau)?,
        run_one(&c, Algorithm::Approx, 1)?,
        run_one(&c, Algorithm::Classic, 1)?,
        run_one(&c, Algorithm::BruteForce, 1)?,
    ];
    print_records(&records, &args.output);
    let length = records[0].length;
    if let Some(r) = records.iter().find(|r| r.length != length) {
        return Err(Failure::Invariant(format!(
            "{} found length {} but exact found {length}",
            r.algorithm, r.length
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    m: usize,
    d: usize,
    sigma: u32,
    tau: usize,
    algorithm: &'static str,
    millis: f64,
    peak_words: usize,
    length: usize,
}

impl From<&BenchRecord> for BenchRow {
    fn from(r: &BenchRecord) -> BenchRow {
        BenchRow {
            n: r.n,
            m: r.m,
            d: r.d,
            sigma: r.sigma,
            tau: r.tau,
            algorithm: r.algorithm.name(),
            millis: r.millis,
            peak_words: r.peak_words,
            length: r.length,
        }
    }
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let algorithms: Vec<Algorithm> = args.algorithms.iter().map(|a| a.parse()).collect::<Result<_, _>>()?;
    if !args.json {
        println!("{}", BenchRecord::TSV_HEADER);
    }
    for &n in &args.sizes {
        let spec = Planted { n, m: args.m, d: args.d, sigma: args.sigma, secret_len: args.secret_len, seed: args.seed };
        let c = planted_corpus(&spec)?;
        let mut expected: Option<(Algorithm, usize)> = None;
        for &alg in &algorithms {
            let taus: &[usize] = if alg.uses_tau() { &args.tau_list } else { &[0] };
            for &tau in taus {
                let record = run_cell(&c, alg, tau.clamp(1, n))?;
                let record = BenchRecord { tau, ..record };
                if args.json {
                    println!("{}", serde_json::to_string(&BenchRow::from(&record)).expect("serializable"));
                } else {
                    println!("{}", record.to_tsv());
                }
                if alg == Algorithm::Approx {
                    continue;
                }
                match expected {
                    Some((first, len)) if len != record.length => {
                        return Err(Failure::Invariant(format!(
                            "n = {n}: {alg} found length {} but {first} found {len}",
                            record.length
                        )));
                    }
                    None => expected = Some((alg, record.length)),
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let single = |args: &RunArgs, alg: Algorithm| -> Result<(), Failure> {
        let c = load(&args.input)?;
        let record = run_one(&c, alg, args.tau)?;
        print_records(&[record], &args.output);
        Ok(())
    };
    match &cli.command {
        Command::Exact(a) => single(a, Algorithm::Exact),
        Command::Approx(a) => single(a, Algorithm::Approx),
        Command::Classic(a) => single(a, Algorithm::Classic),
        Command::Oracle(a) => single(a, Algorithm::BruteForce),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}

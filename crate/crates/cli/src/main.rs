//! `sst`: command-line driver for shaping, analysis, coding and
//! error-detection experiments.
//!
//! Exit codes: 0 success, 1 detection events during `unshape`, 2 invalid
//! flags or input, 3 composition cap exceeded, 4 I/O failure.

mod text;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sst_core::analysis::shaping_table;
use sst_core::codec::{read_stream, run_codec_benchmark, write_stream, CodecModelConfig};
use sst_core::index::DEFAULT_COMPOSITION_CAP;
use sst_core::testability::{run_detection_experiment, ErrorCount, ErrorModel};
use sst_core::{Alphabet, Shaper, ShapingParams, SourceEnsemble, SstError, TableCache};

const CAP_ENV: &str = "SST_COMPOSITION_CAP";
const SOURCE_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "sst", version, about = "Set shaping transforms and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average information content of the shaped set for K = 0..=k-max.
    Analyze(AnalyzeArgs),
    /// Shape every string of a file.
    Shape(TransformArgs),
    /// Invert shaping; lines outside the shaped set become ERROR:<line>.
    Unshape(TransformArgs),
    /// Compare adaptive code lengths of raw and shaped strings.
    CodecBench(BenchArgs),
    /// Detection rate of injected errors per shaping order.
    Testability(TestabilityArgs),
    /// Arithmetic-code the first string of a file into a stream file.
    Encode(EncodeArgs),
    /// Decode a stream file back to its string.
    Decode(DecodeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    k: usize,
    /// One string per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Comma-separated symbol probabilities; uniform when omitted.
    #[arg(long)]
    source: Option<String>,
    /// Additive smoothing constant of the adaptive model.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TestabilityArgs {
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    n: usize,
    /// Comma-separated shaping orders.
    #[arg(long, value_delimiter = ',', required = true)]
    k_list: Vec<usize>,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    source: Option<String>,
    /// Exact number of substituted symbols per message.
    #[arg(long, conflicts_with_all = ["error_rate", "burst"])]
    errors: Option<usize>,
    /// Independent per-symbol substitution probability.
    #[arg(long, conflicts_with = "burst")]
    error_rate: Option<f64>,
    /// Length of one re-randomized contiguous window.
    #[arg(long)]
    burst: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Capacity(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Capacity(m) | Failure::Io(m) => m,
        }
    }
}

impl From<SstError> for Failure {
    fn from(e: SstError) -> Self {
        match e {
            SstError::CapacityExceeded { .. } => Failure::Capacity(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn emit(out: Option<&Path>, contents: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, contents).map_err(|e| io_failure(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(contents)
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn parse_source(alphabet: Alphabet, spec: Option<&str>) -> Result<SourceEnsemble, Failure> {
    let Some(spec) = spec else {
        return Ok(SourceEnsemble::uniform(alphabet));
    };
    let probs = spec
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("invalid probability {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if probs.len() != alphabet.size() {
        return Err(Failure::Usage(format!(
            "source has {} probabilities for an alphabet of {}",
            probs.len(),
            alphabet.size()
        )));
    }
    Ok(SourceEnsemble::normalized(probs, SOURCE_TOLERANCE)?)
}

fn with_newline(mut s: String) -> Vec<u8> {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

fn analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let alphabet = Alphabet::new(args.alphabet)?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let rows = shaping_table(alphabet, args.n, args.k_max)?;
    let body = match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Io(e.to_string()))?)
                .expect("csv output is utf-8")
        }
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "alphabet": args.alphabet,
            "base_len": args.n,
            "rows": rows,
        }))
        .expect("rows serialize"),
    };
    emit(args.out.as_deref(), &with_newline(body))?;
    Ok(0)
}

fn transform(args: TransformArgs, inverse: bool) -> Result<u8, Failure> {
    let alphabet = Alphabet::new(args.alphabet)?;
    let contents = read_text(&args.input)?;
    let (lines, trailing) = text::split_lines(&contents);
    let mut out = Vec::with_capacity(lines.len());
    let mut detections = 0usize;
    for (i, line) in lines.iter().enumerate() {
        let lineno = i + 1;
        let s = text::parse_line(alphabet, line).map_err(|e| Failure::Usage(format!("line {lineno}: {e}")))?;
        let base_len = if inverse {
            s.len()
                .checked_sub(args.k)
                .filter(|&n| n >= 1)
                .ok_or_else(|| Failure::Usage(format!("line {lineno}: shorter than K + 1 symbols")))?
        } else {
            s.len()
        };
        let shaper = Shaper::new(ShapingParams::new(args.alphabet, base_len, args.k)?)?;
        let result = if inverse { shaper.unshape(&s) } else { shaper.shape(&s) };
        match result {
            Ok(t) => out.push(t.to_string()),
            Err(SstError::NotInShapedSet) => {
                detections += 1;
                out.push(format!("ERROR:{lineno}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(args.out.as_deref(), text::join_lines(&out, trailing).as_bytes())?;
    Ok(if detections > 0 { 1 } else { 0 })
}

fn codec_bench(args: BenchArgs) -> Result<u8, Failure> {
    let params = ShapingParams::new(args.alphabet, args.n, args.k)?;
    let src = parse_source(params.alphabet, args.source.as_deref())?;
    let cfg = CodecModelConfig::new(params.alphabet, args.alpha)?;
    let report = run_codec_benchmark(params, &src, args.trials, args.seed, &cfg)?;
    let body = match args.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(args.out.as_deref(), &with_newline(body))?;
    Ok(0)
}

fn testability(args: TestabilityArgs) -> Result<u8, Failure> {
    let alphabet = Alphabet::new(args.alphabet)?;
    let src = parse_source(alphabet, args.source.as_deref())?;
    let em = match (args.errors, args.error_rate, args.burst) {
        (_, Some(p), None) => ErrorModel::Substitution {
            count: ErrorCount::PerSymbol(p),
        },
        (_, None, Some(length)) => ErrorModel::Burst { length },
        (e, None, None) => ErrorModel::substitutions(e.unwrap_or(1)),
        _ => unreachable!("clap rejects conflicting error models"),
    };
    let report = run_detection_experiment(alphabet, args.n, &args.k_list, &src, &em, args.trials, args.seed)?;
    let body = match args.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(args.out.as_deref(), &with_newline(body))?;
    Ok(0)
}

fn encode_file(args: EncodeArgs) -> Result<u8, Failure> {
    let alphabet = Alphabet::new(args.alphabet)?;
    let contents = read_text(&args.input)?;
    let (lines, _) = text::split_lines(&contents);
    let first = lines.first().ok_or_else(|| Failure::Usage("input file is empty".into()))?;
    let s = text::parse_line(alphabet, first).map_err(|e| Failure::Usage(format!("line 1: {e}")))?;
    let bytes = write_stream(&s, args.alpha)?;
    emit(Some(&args.out), &bytes)?;
    Ok(0)
}

fn decode_file(args: DecodeArgs) -> Result<u8, Failure> {
    let bytes = fs::read(&args.input).map_err(|e| io_failure(&args.input, e))?;
    let s = read_stream(&bytes, args.alpha)?;
    emit(args.out.as_deref(), format!("{s}\n").as_bytes())?;
    Ok(0)
}

fn composition_cap() -> Result<u64, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Usage(format!("{CAP_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_COMPOSITION_CAP),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    TableCache::init_global(composition_cap()?);
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Shape(a) => transform(a, false),
        Command::Unshape(a) => transform(a, true),
        Command::CodecBench(a) => codec_bench(a),
        Command::Testability(a) => testability(a),
        Command::Encode(a) => encode_file(a),
        Command::Decode(a) => decode_file(a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("sst: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

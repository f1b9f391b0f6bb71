//! `douglas`: build, draw, count and verify generalized Douglas regions.

mod cache;

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use douglas_core::condensation::condensation_trace;
use douglas_core::enumerate::sweep;
use douglas_core::matchgraph::{count_matchings_with_limit, MAX_BANDWIDTH};
use douglas_core::render::{region_dump, render_ascii, render_svg};
use douglas_core::report::VerifyOptions;
use douglas_core::shuffle::reduction_trace;
use douglas_core::{
    build_region, case_recurrence, characteristic_matrix, dual_graph, encode, formula_count,
    matching_generating_function, permanent_oracle, shuffle_count, verify, CondensationError,
    CountError, FormulaError, MatchGraph, RegionSpec, ShuffleError, SpecInvalid, VerifyReport,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "douglas",
    version,
    about = "Exact domino tiling counts of generalized Douglas regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Side length a.
    #[arg(long)]
    a: Option<u32>,
    /// Distances between drawn-in diagonals, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    /// JSON file of the form {"a": 7, "d": [4, 2, 5, 4]}.
    #[arg(long, conflicts_with_all = ["a", "d"])]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Brute,
    Condense,
    Shuffle,
    Formula,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceKind {
    Condense,
    Shuffle,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphEngine {
    Dp,
    Permanent,
}

#[derive(Subcommand)]
enum Command {
    /// Print the region (cells, corners, statistics) as JSON.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Draw the region.
    Render {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        /// Overlay one tiling.
        #[arg(long)]
        matching: bool,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Count tilings with one engine.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "formula")]
        engine: Engine,
        /// Largest profile width the brute engine accepts.
        #[arg(long, default_value_t = MAX_BANDWIDTH)]
        max_width: usize,
    },
    /// Cross-check every engine and identity; one JSON report per line.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Verify every valid spec with total size at most this.
        #[arg(long, conflicts_with_all = ["a", "d", "spec"])]
        sweep: Option<u32>,
        /// Profile-width limit for the brute engine inside reports.
        #[arg(long, default_value_t = VerifyOptions::default().brute_limit)]
        brute_limit: usize,
        /// Add per-stage timings to each report.
        #[arg(long)]
        timings: bool,
    },
    /// Print a recursion or reduction trace as JSON lines.
    Trace {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "condense")]
        engine: TraceKind,
    },
    /// Print the dual graph as JSON.
    Dual {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Print the characteristic weight pattern and its encoded sequence.
    Pattern {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Matching generating function of a graph read from JSON.
    GraphCount {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        engine: GraphEngine,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Invalid(#[from] SpecInvalid),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Shuffle(ShuffleError),
    #[error(transparent)]
    Condense(CondensationError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error("no tiling exists")]
    NoTiling,
}

impl From<ShuffleError> for CliError {
    fn from(e: ShuffleError) -> Self {
        match e {
            ShuffleError::Spec(s) => CliError::Invalid(s),
            other => CliError::Shuffle(other),
        }
    }
}

impl From<CondensationError> for CliError {
    fn from(e: CondensationError) -> Self {
        match e {
            CondensationError::Spec(s) => CliError::Invalid(s),
            CondensationError::Count(c) => CliError::Count(c),
            other => CliError::Condense(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Count(CountError::SizeLimit { .. }) => 3,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl SpecArgs {
    fn resolve(&self) -> Result<RegionSpec, CliError> {
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            return Ok(serde_json::from_str(&text)?);
        }
        match self.a {
            Some(a) if !self.d.is_empty() => Ok(RegionSpec::new(a, self.d.clone())),
            _ => Err(CliError::Usage(
                "give --a and --d, or --spec FILE".to_string(),
            )),
        }
    }
}

fn emit(out: &mut impl Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(io_err(Path::new("<stdout>")))
}

fn count(spec: &RegionSpec, engine: Engine, max_width: usize) -> Result<String, CliError> {
    let m = match engine {
        Engine::Formula => formula_count(&build_region(spec)?)?,
        Engine::Brute => count_matchings_with_limit(&dual_graph(&build_region(spec)?), max_width)?,
        Engine::Shuffle => shuffle_count(spec)?,
        Engine::Condense => {
            let condenser = cache::load();
            let m = condenser.count(spec)?;
            cache::store(&condenser).map_err(io_err(Path::new(cache::CACHE_ENV)))?;
            m
        }
    };
    Ok(m.to_string())
}

fn verify_cmd(
    out: &mut impl Write,
    spec: &SpecArgs,
    sweep_max: Option<u32>,
    opts: VerifyOptions,
) -> Result<(), CliError> {
    let engine = cache::load();
    let (reports, invalid): (Vec<VerifyReport>, usize) = match sweep_max {
        Some(max) => {
            let sw = sweep(max);
            // warm the memo in size order so parallel workers mostly hit it
            for s in &sw.valid {
                engine.count(s)?;
            }
            let reports = sw
                .valid
                .par_iter()
                .map(|s| verify(s, &engine, opts))
                .collect();
            (reports, sw.rejected.len())
        }
        None => {
            let s = spec.resolve()?;
            let report = verify(&s, &engine, opts);
            if report.invalid.is_some() {
                emit(out, &serde_json::to_string(&report)?)?;
                build_region(&s)?;
            }
            (vec![report], 0)
        }
    };
    cache::store(&engine).map_err(io_err(Path::new(cache::CACHE_ENV)))?;
    for r in &reports {
        emit(out, &serde_json::to_string(r)?)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if sweep_max.is_some() {
        eprintln!(
            "{} valid, {} passed, {failed} failed, {invalid} invalid skipped",
            reports.len(),
            reports.len() - failed
        );
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

/// One trace record per distinct sub-region, parents before children.
fn trace_condense(out: &mut impl Write, spec: &RegionSpec) -> Result<(), CliError> {
    let engine = cache::load();
    let mut seen = HashSet::new();
    let mut stack = vec![spec.clone()];
    while let Some(s) = stack.pop() {
        if s.d.is_empty() || !seen.insert(s.canonical()) {
            continue;
        }
        let record = condensation_trace(&engine, &s)?;
        emit(out, &serde_json::to_string(&record)?)?;
        if let Ok(rec) = case_recurrence(&s) {
            stack.extend(rec.sub_specs.into_iter().rev());
        }
    }
    cache::store(&engine).map_err(io_err(Path::new(cache::CACHE_ENV)))?;
    Ok(())
}

fn write_output(out: &mut impl Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => out
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn read_graph(path: &Path) -> Result<MatchGraph, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(MatchGraph::from_json(&text)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Build { spec } => {
            let region = build_region(&spec.resolve()?)?;
            emit(&mut out, &serde_json::to_string(&region_dump(&region))?)
        }
        Command::Render {
            spec,
            format,
            matching,
            out: path,
        } => {
            let region = build_region(&spec.resolve()?)?;
            let text = match format {
                Format::Ascii => render_ascii(&region, matching),
                Format::Svg => render_svg(&region, matching),
            }
            .ok_or(CliError::NoTiling)?;
            write_output(&mut out, path.as_deref(), &text)
        }
        Command::Count {
            spec,
            engine,
            max_width,
        } => {
            let m = count(&spec.resolve()?, engine, max_width)?;
            emit(&mut out, &m)
        }
        Command::Verify {
            spec,
            sweep,
            brute_limit,
            timings,
        } => verify_cmd(
            &mut out,
            &spec,
            sweep,
            VerifyOptions {
                brute_limit,
                timings,
            },
        ),
        Command::Trace { spec, engine } => {
            let s = spec.resolve()?;
            match engine {
                TraceKind::Condense => trace_condense(&mut out, &s),
                TraceKind::Shuffle => {
                    for step in reduction_trace(&s)? {
                        emit(&mut out, &serde_json::to_string(&step)?)?;
                    }
                    Ok(())
                }
            }
        }
        Command::Dual { spec } => {
            let region = build_region(&spec.resolve()?)?;
            emit(&mut out, &dual_graph(&region).to_json())
        }
        Command::Pattern { spec } => {
            let pattern = characteristic_matrix(&spec.resolve()?)?;
            let record = serde_json::json!({
                "code": encode(&pattern)?.to_string(),
                "pattern": pattern,
            });
            emit(&mut out, &record.to_string())
        }
        Command::GraphCount { file, engine } => {
            let g = read_graph(&file)?;
            let m = match engine {
                GraphEngine::Dp => matching_generating_function(&g)?,
                GraphEngine::Permanent => permanent_oracle(&g)?,
            };
            emit(&mut out, &m.to_string())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

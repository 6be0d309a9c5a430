//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bits::BitVec;
use crate::decoders::{algorithm_i, algorithm_ii, AlgorithmIConfig, AlgorithmIIConfig, TraceEvent};
use crate::error::{Error, Result};
use crate::graph_code::GraphCode;
use crate::local_code::{for_each_combination, make_local_code, LocalCodeKind};
use crate::simulate::{run_simulation, ErrorSpec, SimConfig};
use crate::tables::{build_table, TableKind};
use crate::thresholds::{delta_asymptotic, run_query, EpsMode, ThresholdMode, ThresholdQuery, ThresholdResult};
use crate::topology::RegularHypergraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Largest number of double-error patterns the oracle enumerates.
const ORACLE_MAX_PAIRS: usize = 200_000;

#[derive(Debug, Parser)]
#[command(name = "graphcode", version, about = "Graph and hypergraph codes: thresholds, decoding trials and small-instance oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a threshold formula.
    Threshold(ThresholdArgs),
    /// Reproduce a table of thresholds.
    Tables(TablesArgs),
    /// Monte Carlo decoding trials.
    Simulate(SimulateArgs),
    /// Exhaustive checks on one small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ThresholdKind {
    Bipartite,
    BipartiteAsymptotic,
    Hypergraph,
    Distance,
    AsymptoticDelta,
    AsymptoticGamma0,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum EpsArg {
    Finite,
    #[default]
    Zero,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(value_enum)]
    kind: ThresholdKind,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    d0: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    delta0: Option<f64>,
    /// Slack term of the large-n conditions.
    #[arg(long, value_enum, default_value_t)]
    eps: EpsArg,
    /// Use the closed form of the inner maximum (t = 1, d0 = 3 only).
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[arg(value_parser = parse_table)]
    which: TableKind,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CodeArgs {
    /// Local code: hamming:R, golay23, bch31, spc:N, repetition:N or file:PATH.
    #[arg(long, default_value = "golay23", value_parser = parse_code)]
    code: LocalCodeKind,
    #[arg(long, default_value_t = 2)]
    l: usize,
    #[arg(long)]
    m: usize,
    /// Local decoding radius; defaults to the code's correction radius.
    #[arg(long)]
    t: Option<usize>,
    /// Branching iterations of the list decoder (l >= 3).
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, conflicts_with = "error_frac", required_unless_present = "error_frac")]
    errors: Option<usize>,
    #[arg(long)]
    error_frac: Option<f64>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write per-iteration traces as JSON lines to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    output: Output,
}

fn parse_code(s: &str) -> std::result::Result<LocalCodeKind, String> {
    s.parse::<LocalCodeKind>().map_err(|e| e.to_string())
}

fn parse_table(s: &str) -> std::result::Result<TableKind, String> {
    s.parse::<TableKind>().map_err(|e| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Threshold(a) => cmd_threshold(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numeric { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(std::io::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn cmd_threshold(a: ThresholdArgs) -> Result<i32> {
    let mode = match a.kind {
        ThresholdKind::Bipartite => ThresholdMode::BipartiteSigma0,
        ThresholdKind::BipartiteAsymptotic => ThresholdMode::BipartiteAsymptotic,
        ThresholdKind::Hypergraph if a.closed_form => ThresholdMode::HammingGamma0,
        ThresholdKind::Hypergraph => ThresholdMode::HypergraphGamma0,
        ThresholdKind::Distance => ThresholdMode::DistanceBound,
        ThresholdKind::AsymptoticDelta => ThresholdMode::DistanceAsymptotic,
        ThresholdKind::AsymptoticGamma0 => ThresholdMode::Gamma0Asymptotic,
    };
    if mode == ThresholdMode::HammingGamma0 && (a.t.unwrap_or(1) != 1 || a.d0.unwrap_or(3) != 3) {
        return Err(Error::invalid("--closed-form needs t = 1 and d0 = 3"));
    }
    let q = ThresholdQuery {
        mode,
        n: a.n,
        t: a.t,
        d0: a.d0,
        l: a.l,
        tau: a.tau,
        delta0: a.delta0,
        eps_mode: match a.eps {
            EpsArg::Finite => EpsMode::Finite,
            EpsArg::Zero => EpsMode::Zero,
        },
    };
    let mut res = run_query(&q)?;
    if mode == ThresholdMode::Gamma0Asymptotic {
        // The companion distance estimate for the same (l, delta0).
        let d = delta_asymptotic(q.l.unwrap_or(2), q.delta0.unwrap_or(0.0))?;
        res.root.insert("delta_asymptotic".into(), d.value);
    }
    let text = match a.output.format.unwrap_or_default() {
        Format::Json => to_json(&res)?,
        Format::Csv => threshold_csv(&res),
    };
    emit(&a.output, &text)?;
    Ok(EXIT_OK)
}

fn threshold_csv(r: &ThresholdResult) -> String {
    let roots: Vec<String> = r.root.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
    format!(
        "mode,value,residual,roots\n{},{:.10e},{:e},{}\n",
        serde_json::to_value(r.query.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        r.value,
        r.residual,
        roots.join(";")
    )
}

fn cmd_tables(a: TablesArgs) -> Result<i32> {
    let table = build_table(a.which);
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&table)?,
    };
    emit(&a.output, &text)?;
    if table.errors.is_empty() {
        Ok(EXIT_OK)
    } else {
        for e in &table.errors {
            eprintln!("error: {e}");
        }
        Ok(EXIT_NUMERIC)
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<i32> {
    let errors = match (a.errors, a.error_frac) {
        (Some(w), _) => ErrorSpec::Count(w),
        (None, Some(f)) => ErrorSpec::Fraction(f),
        (None, None) => return Err(Error::invalid("one of --errors or --error-frac is required")),
    };
    let t = match a.code.t {
        Some(t) => t,
        None => make_local_code(&a.code.code)?.t_max(),
    };
    let cfg = SimConfig {
        code: a.code.code,
        l: a.code.l,
        m: a.code.m,
        t,
        errors,
        trials: a.trials,
        seed: a.code.seed,
        max_iters: a.code.max_iters,
        s: a.code.s,
        jobs: a.jobs,
        trace: a.trace.is_some(),
    };
    let report = run_simulation(&cfg)?;
    if let Some(path) = &a.trace {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        for r in &report.records {
            let events: Vec<TraceEvent> = r.trace.clone().unwrap_or_default();
            for ev in events {
                serde_json::to_writer(&mut file, &TrialEvent { trial: r.trial, event: ev }).map_err(std::io::Error::from)?;
                file.write_all(b"\n")?;
            }
        }
        file.flush()?;
    }
    let text = match a.output.format.unwrap_or_default() {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("trial,seed,success,converged,iterations,list_size,residual_weight\n");
            for r in &report.records {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.trial, r.seed, r.success, r.converged, r.iterations, r.list_size, r.residual_weight
                ));
            }
            s
        }
    };
    emit(&a.output, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TrialEvent {
    trial: usize,
    #[serde(flatten)]
    event: TraceEvent,
}

#[derive(Debug, Serialize)]
pub struct PatternSweep {
    pub weight: usize,
    pub patterns: usize,
    /// Decoder output equals the transmitted word.
    pub decoded: usize,
    /// Transmitted word present among the list candidates (list decoder only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listed: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub code: String,
    pub l: usize,
    pub m: usize,
    pub t: usize,
    pub seed: u64,
    pub n_edges: usize,
    pub dimension: usize,
    /// `N·(l·R₀ − (l − 1))`, rounded up.
    pub dimension_lower_bound: i64,
    pub min_distance: Option<usize>,
    pub sweeps: Vec<PatternSweep>,
}

/// Builds the instance, its dimension and minimum distance, and sweeps all error
/// patterns of weight 1 and (when few enough) weight 2 through the decoder.
pub fn oracle_report(kind: &LocalCodeKind, l: usize, m: usize, t: Option<usize>, s: usize, max_iters: Option<usize>, seed: u64) -> Result<OracleReport> {
    let local = Arc::new(make_local_code(kind)?);
    let t = t.unwrap_or(local.t_max());
    local.check_radius(t)?;
    let code = GraphCode::new(RegularHypergraph::sample(l, m, local.n(), seed)?, Arc::clone(&local))?;
    let big_n = code.len();
    let dimension = code.dimension()?;
    let bound = (big_n as f64 * code.rate_lower_bound()).ceil() as i64;
    let min_distance = match code.min_distance_small() {
        Ok(d) => d,
        Err(Error::SizeLimit(_)) => None,
        Err(e) => return Err(e),
    };
    let mut sweeps = Vec::new();
    for w in 1..=2usize {
        if w == 2 && big_n * (big_n - 1) / 2 > ORACLE_MAX_PAIRS {
            break;
        }
        let mut sweep = PatternSweep {
            weight: w,
            patterns: 0,
            decoded: 0,
            listed: (l > 2).then_some(0),
        };
        let mut failure = None;
        for_each_combination(big_n, w, |pos| {
            let y = BitVec::from_positions(big_n, pos.iter().copied());
            sweep.patterns += 1;
            let outcome = if l == 2 {
                let cfg = AlgorithmIConfig {
                    t,
                    max_iters,
                    transmitted: None,
                };
                algorithm_i(&code, &y, &cfg).map(|r| (r.output.is_zero(), false))
            } else {
                let mut cfg = AlgorithmIIConfig::new(t, s);
                cfg.cleanup.max_iters = max_iters;
                algorithm_ii(&code, &y, &cfg).map(|r| {
                    let listed = r.list.final_level().iter().any(BitVec::is_zero) || r.list.cleaned.iter().any(BitVec::is_zero);
                    (r.decode.output.is_zero(), listed)
                })
            };
            match outcome {
                Ok((ok, listed)) => {
                    sweep.decoded += ok as usize;
                    if let Some(c) = sweep.listed.as_mut() {
                        *c += listed as usize;
                    }
                    true
                }
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        sweeps.push(sweep);
    }
    Ok(OracleReport {
        code: local.name().to_string(),
        l,
        m,
        t,
        seed,
        n_edges: big_n,
        dimension,
        dimension_lower_bound: bound,
        min_distance,
        sweeps,
    })
}

fn cmd_oracle(a: OracleArgs) -> Result<i32> {
    let c = &a.code;
    let report = oracle_report(&c.code, c.l, c.m, c.t, c.s, c.max_iters, c.seed)?;
    let text = match a.output.format.unwrap_or_default() {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = format!(
                "code,l,m,n_edges,dimension,dimension_lower_bound,min_distance\n{},{},{},{},{},{},{}\nweight,patterns,decoded,listed\n",
                report.code,
                report.l,
                report.m,
                report.n_edges,
                report.dimension,
                report.dimension_lower_bound,
                report.min_distance.map_or(String::new(), |d| d.to_string())
            );
            for w in &report.sweeps {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    w.weight,
                    w.patterns,
                    w.decoded,
                    w.listed.map_or(String::new(), |c| c.to_string())
                ));
            }
            s
        }
    };
    emit(&a.output, &text)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_of(args: &[&str]) -> i32 {
        run(std::iter::once("graphcode").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(code_of(&["threshold"]), EXIT_USAGE);
        assert_eq!(code_of(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code_of(&["threshold", "bipartite", "--t", "3"]), EXIT_USAGE);
        assert_eq!(code_of(&["--help"]), EXIT_OK);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Error::numeric("x", 1.0)), EXIT_NUMERIC);
        assert_eq!(exit_code(&Error::invalid("x")), EXIT_USAGE);
    }

    #[test]
    fn oracle_on_tiny_instance() {
        let r = oracle_report(&LocalCodeKind::Hamming(3), 2, 2, None, 2, None, 5).unwrap();
        assert_eq!(r.n_edges, 14);
        assert!(r.dimension as i64 >= r.dimension_lower_bound);
        assert_eq!(r.sweeps[0].patterns, 14);
        assert_eq!(r.sweeps[1].patterns, 91);
    }
}

//! Iterative decoders for graph and hypergraph codes.
//!
//! The building block is [`local_round`]: every vertex of one part replaces its view
//! of the current word by the bounded-distance decoding of that view. All vertices
//! read the same input snapshot, so the result does not depend on vertex order.
//!
//! * [`algorithm_i`] alternates rounds on the two parts of a bipartite graph.
//! * [`algorithm_ii`] branches over all parts of a hypergraph for `s` iterations,
//!   cleans every candidate up with [`algorithm_i`] on parts `(0, 1)`, and returns the
//!   candidate closest to the received word.
//! * [`good_bad_sets`] and [`reduction_check`] expose the per-part error accounting
//!   that drives the error-reduction argument for hypergraphs.

mod diagnostics;

use std::collections::HashSet;
use std::io::Write;

use serde::Serialize;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::graph_code::{GlobalWord, GraphCode};

pub use diagnostics::{good_bad_sets, reduction_check, GoodBadSets, ReductionCheck};

/// One line of an instrumented decoding trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub iteration: usize,
    pub part: usize,
    /// Distance to the known transmitted word after this step. For the branching
    /// stage of [`algorithm_ii`] it is the minimum over the candidates this part
    /// produced.
    pub error_weight: usize,
    pub list_size: usize,
}

/// Writes a trace as JSON lines.
pub fn write_trace_jsonl<W: Write>(trace: &[TraceEvent], mut out: W) -> Result<()> {
    for ev in trace {
        serde_json::to_writer(&mut out, ev).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The current word is a codeword.
    Converged,
    /// A full round on both parts changed nothing.
    FixedPoint,
    /// The word at the start of a round repeated an earlier one.
    Cycle,
    IterationCap,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub output: GlobalWord,
    /// `output` passes the global parity checks.
    pub converged: bool,
    pub iterations: usize,
    pub stop: StopReason,
    /// Present when a transmitted word was supplied.
    pub trace: Option<Vec<TraceEvent>>,
}

/// Candidate sets produced by the branching stage of [`algorithm_ii`].
#[derive(Clone, Debug, Default)]
pub struct CandidateList {
    /// `levels[j]` is the deduplicated set before iteration `j + 1`; `levels[0] = {y}`.
    pub levels: Vec<Vec<GlobalWord>>,
    /// Number of words produced in iteration `j + 1` before deduplication.
    pub pre_dedup: Vec<usize>,
    /// Outputs of the cleanup stage, deduplicated, in candidate order.
    pub cleaned: Vec<GlobalWord>,
}

impl CandidateList {
    /// The candidates handed to the cleanup stage.
    pub fn final_level(&self) -> &[GlobalWord] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Clone, Debug)]
pub struct AlgorithmIIOutput {
    pub decode: DecodeResult,
    pub list: CandidateList,
}

/// Default cap for [`algorithm_i`]: `⌈4·log₂ m⌉ + 8` half-iterations.
pub fn default_max_iters(m: usize) -> usize {
    (4.0 * (m.max(1) as f64).log2()).ceil() as usize + 8
}

/// Decodes every vertex of `part` from the same snapshot `u`.
pub fn local_round(code: &GraphCode, u: &GlobalWord, part: usize, t: usize) -> Result<GlobalWord> {
    code.local().check_radius(t)?;
    check_word(code, u)?;
    if part >= code.topology().l() {
        return Err(Error::invalid(format!(
            "part {part} out of range 0..{}",
            code.topology().l()
        )));
    }
    Ok(round_unchecked(code, u, part, t))
}

fn round_unchecked(code: &GraphCode, u: &GlobalWord, part: usize, t: usize) -> GlobalWord {
    let local = code.local();
    let topo = code.topology();
    let mut out = u.clone();
    let mut view = BitVec::zeros(local.n());
    for v in 0..topo.m() {
        code.project_into(u, part, v, &mut view);
        if local.decode_in_place(&mut view, t) {
            for (slot, &e) in topo.incident(part, v).iter().enumerate() {
                out.set(e as usize, view.get(slot));
            }
        }
    }
    out
}

fn check_word(code: &GraphCode, y: &GlobalWord) -> Result<()> {
    if y.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            actual: y.len(),
        });
    }
    Ok(())
}

fn check_transmitted(code: &GraphCode, tx: Option<&GlobalWord>) -> Result<()> {
    match tx {
        Some(x) => check_word(code, x),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AlgorithmIConfig<'a> {
    pub t: usize,
    /// Half-iteration cap; `None` uses [`default_max_iters`].
    pub max_iters: Option<usize>,
    /// Known transmitted word, enabling the trace.
    pub transmitted: Option<&'a GlobalWord>,
}

impl AlgorithmIConfig<'_> {
    pub fn new(t: usize) -> Self {
        AlgorithmIConfig {
            t,
            max_iters: None,
            transmitted: None,
        }
    }
}

/// Alternating decoding of a bipartite graph code: odd iterations decode part 0, even
/// iterations part 1.
///
/// Stops when the word is a codeword, when a full round leaves it unchanged, when the
/// word at the start of a round repeats, or at the iteration cap.
pub fn algorithm_i(code: &GraphCode, y: &GlobalWord, cfg: &AlgorithmIConfig<'_>) -> Result<DecodeResult> {
    if code.topology().l() != 2 {
        return Err(Error::invalid(format!(
            "algorithm I needs a bipartite graph, got l = {}",
            code.topology().l()
        )));
    }
    code.local().check_radius(cfg.t)?;
    check_word(code, y)?;
    check_transmitted(code, cfg.transmitted)?;
    let cap = cfg.max_iters.unwrap_or_else(|| default_max_iters(code.topology().m()));
    let mut trace = cfg.transmitted.map(|_| Vec::new());

    let mut word = y.clone();
    let finish = |word: GlobalWord, iterations, stop, trace| DecodeResult {
        converged: stop == StopReason::Converged,
        output: word,
        iterations,
        stop,
        trace,
    };
    if code.is_codeword(&word) {
        return Ok(finish(word, 0, StopReason::Converged, trace));
    }

    let mut round_starts: Vec<GlobalWord> = vec![word.clone()];
    let mut iteration = 0;
    while iteration < cap {
        let part = iteration % 2;
        word = round_unchecked(code, &word, part, cfg.t);
        iteration += 1;
        if let (Some(tr), Some(tx)) = (trace.as_mut(), cfg.transmitted) {
            tr.push(TraceEvent {
                iteration,
                part,
                error_weight: word.distance(tx),
                list_size: 1,
            });
        }
        if code.is_codeword(&word) {
            return Ok(finish(word, iteration, StopReason::Converged, trace));
        }
        if part == 1 {
            if round_starts.last() == Some(&word) {
                return Ok(finish(word, iteration, StopReason::FixedPoint, trace));
            }
            if round_starts.contains(&word) {
                return Ok(finish(word, iteration, StopReason::Cycle, trace));
            }
            round_starts.push(word.clone());
        }
    }
    Ok(finish(word, iteration, StopReason::IterationCap, trace))
}

#[derive(Clone, Copy, Debug)]
pub struct CleanupConfig {
    pub enabled: bool,
    /// Cap for each cleanup run; `None` uses [`default_max_iters`].
    pub max_iters: Option<usize>,
}

impl Default for CleanupConfig {
    fn default() -> Self {
        CleanupConfig {
            enabled: true,
            max_iters: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AlgorithmIIConfig<'a> {
    pub t: usize,
    /// Number of branching iterations.
    pub s: usize,
    pub cleanup: CleanupConfig,
    pub transmitted: Option<&'a GlobalWord>,
}

impl AlgorithmIIConfig<'_> {
    pub fn new(t: usize, s: usize) -> Self {
        AlgorithmIIConfig {
            t,
            s,
            cleanup: CleanupConfig::default(),
            transmitted: None,
        }
    }
}

/// Branching list decoder for hypergraph codes.
///
/// `Y⁽¹⁾ = {y}`; each iteration applies every part's [`local_round`] to every member
/// of the current set and deduplicates. After `s` iterations (or earlier, once the set
/// stops changing) every candidate is passed through [`algorithm_i`] on the bipartite
/// restriction to parts `(0, 1)`, and [`select_closest`] picks the result.
pub fn algorithm_ii(code: &GraphCode, y: &GlobalWord, cfg: &AlgorithmIIConfig<'_>) -> Result<AlgorithmIIOutput> {
    let l = code.topology().l();
    code.local().check_radius(cfg.t)?;
    check_word(code, y)?;
    check_transmitted(code, cfg.transmitted)?;
    let mut trace = cfg.transmitted.map(|_| Vec::new());

    let mut list = CandidateList {
        levels: vec![vec![y.clone()]],
        ..Default::default()
    };
    let mut branching = 0;
    for j in 1..=cfg.s {
        let current = list.levels.last().expect("levels start non-empty");
        let mut seen: HashSet<GlobalWord> = HashSet::with_capacity(current.len() * l);
        let mut next = Vec::with_capacity(current.len() * l);
        let mut produced = 0;
        for part in 0..l {
            let mut best = usize::MAX;
            for cand in current {
                let out = round_unchecked(code, cand, part, cfg.t);
                produced += 1;
                if let Some(tx) = cfg.transmitted {
                    best = best.min(out.distance(tx));
                }
                if seen.insert(out.clone()) {
                    next.push(out);
                }
            }
            if let Some(tr) = trace.as_mut() {
                tr.push(TraceEvent {
                    iteration: j,
                    part,
                    error_weight: best,
                    list_size: current.len(),
                });
            }
        }
        list.pre_dedup.push(produced);
        branching = j;
        let unchanged = next.len() == current.len() && current.iter().all(|c| seen.contains(c));
        list.levels.push(next);
        if unchanged {
            break;
        }
    }

    let mut cleanup_iters = 0;
    if cfg.cleanup.enabled {
        let bip = code.restrict(0, 1)?;
        let mut seen = HashSet::new();
        let mut cleaned = Vec::new();
        let icfg = AlgorithmIConfig {
            t: cfg.t,
            max_iters: cfg.cleanup.max_iters,
            transmitted: None,
        };
        for cand in list.final_level() {
            let res = algorithm_i(&bip, cand, &icfg)?;
            cleanup_iters = cleanup_iters.max(res.iterations);
            if seen.insert(res.output.clone()) {
                cleaned.push(res.output);
            }
        }
        list.cleaned = cleaned;
    } else {
        list.cleaned = list.final_level().to_vec();
    }

    let output = select_closest(code, &list.cleaned, y)?;
    let converged = code.is_codeword(&output);
    if let (Some(tr), Some(tx)) = (trace.as_mut(), cfg.transmitted) {
        tr.push(TraceEvent {
            iteration: branching + cleanup_iters,
            part: 0,
            error_weight: output.distance(tx),
            list_size: list.cleaned.len(),
        });
    }
    Ok(AlgorithmIIOutput {
        decode: DecodeResult {
            output,
            converged,
            iterations: branching + cleanup_iters,
            stop: if converged {
                StopReason::Converged
            } else {
                StopReason::IterationCap
            },
            trace,
        },
        list,
    })
}

/// The candidate nearest to `y` in Hamming distance, preferring codewords of `code`;
/// ties go to the lexicographically smallest word.
pub fn select_closest(code: &GraphCode, candidates: &[GlobalWord], y: &GlobalWord) -> Result<GlobalWord> {
    candidates
        .iter()
        .map(|c| (!code.is_codeword(c), c.distance(y), c))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then_with(|| a.2.lex_cmp(b.2)))
        .map(|(_, _, c)| c.clone())
        .ok_or_else(|| Error::invalid("no candidates to select from"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_code::{make_local_code, LocalCodeKind};
    use crate::topology::RegularHypergraph;
    use std::sync::Arc;

    fn code(kind: LocalCodeKind, l: usize, m: usize, seed: u64) -> GraphCode {
        let local = Arc::new(make_local_code(&kind).unwrap());
        GraphCode::new(RegularHypergraph::sample(l, m, local.n(), seed).unwrap(), local).unwrap()
    }

    #[test]
    fn default_cap() {
        assert_eq!(default_max_iters(1), 8);
        assert_eq!(default_max_iters(1000), 48);
    }

    #[test]
    fn codeword_input_returns_immediately() {
        let c = code(LocalCodeKind::Golay23, 2, 20, 1);
        let y = BitVec::zeros(c.len());
        let r = algorithm_i(&c, &y, &AlgorithmIConfig::new(3)).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.output, y);
    }

    #[test]
    fn algorithm_i_rejects_hypergraphs_and_bad_radius() {
        let c = code(LocalCodeKind::Hamming(3), 3, 5, 1);
        let y = BitVec::zeros(c.len());
        assert!(algorithm_i(&c, &y, &AlgorithmIConfig::new(1)).is_err());
        let c2 = code(LocalCodeKind::Hamming(3), 2, 5, 1);
        assert!(matches!(
            algorithm_i(&c2, &y, &AlgorithmIConfig::new(2)),
            Err(Error::RadiusTooLarge { .. })
        ));
        assert!(local_round(&c2, &y, 2, 1).is_err());
    }

    #[test]
    fn single_error_removed_by_one_round() {
        let c = code(LocalCodeKind::Golay23, 2, 10, 4);
        let mut y = BitVec::zeros(c.len());
        y.flip(17);
        let out = local_round(&c, &y, 0, 3).unwrap();
        assert!(out.is_zero());
        let out = local_round(&c, &y, 1, 1).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn select_closest_rules() {
        let c = code(LocalCodeKind::Hamming(3), 2, 2, 0);
        let y = BitVec::zeros(c.len());
        assert!(select_closest(&c, &[], &y).is_err());
        let a = BitVec::from_positions(c.len(), [0]);
        assert_eq!(select_closest(&c, std::slice::from_ref(&a), &y).unwrap(), a);
        // A non-codeword at distance 1 loses to the zero codeword.
        assert_eq!(select_closest(&c, &[a, y.clone()], &y).unwrap(), y);
    }

    #[test]
    fn trace_lines_are_json() {
        let ev = TraceEvent {
            iteration: 1,
            part: 0,
            error_weight: 4,
            list_size: 1,
        };
        let mut buf = Vec::new();
        write_trace_jsonl(&[ev, ev], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"iteration":1,"part":0,"error_weight":4,"list_size":1}"#
        );
    }
}

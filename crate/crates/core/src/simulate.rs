//! Monte Carlo decoding trials over the random ensemble.
//!
//! Each trial draws its own hypergraph from `derive_seed(seed, trial)`, transmits the
//! all-zero codeword, flips a uniformly random set of edges of the requested weight
//! and decodes. Trials run in parallel; results are ordered by trial index and do not
//! depend on the number of worker threads.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVec;
use crate::decoders::{algorithm_i, algorithm_ii, AlgorithmIConfig, AlgorithmIIConfig, CleanupConfig, StopReason, TraceEvent};
use crate::error::{Error, Result};
use crate::graph_code::GraphCode;
use crate::local_code::{make_local_code, BinaryLinearCode, LocalCodeKind};
use crate::rng::{derive_seed, SplitMix64};
use crate::topology::RegularHypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorSpec {
    Count(usize),
    /// Fraction of the `N` edges, rounded down.
    Fraction(f64),
}

impl ErrorSpec {
    pub fn weight(self, n_edges: usize) -> Result<usize> {
        let w = match self {
            ErrorSpec::Count(w) => w,
            ErrorSpec::Fraction(f) => {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::invalid(format!("error fraction must lie in [0, 1], got {f}")));
                }
                (f * n_edges as f64).floor() as usize
            }
        };
        if w >= n_edges {
            return Err(Error::invalid(format!("error weight {w} must be below N = {n_edges}")));
        }
        Ok(w)
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub code: LocalCodeKind,
    pub l: usize,
    pub m: usize,
    pub t: usize,
    pub errors: ErrorSpec,
    pub trials: usize,
    pub seed: u64,
    /// Cap for Algorithm I and for each cleanup run.
    pub max_iters: Option<usize>,
    /// Branching iterations for `l ≥ 3`.
    pub s: usize,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Record per-iteration traces.
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub converged: bool,
    pub iterations: usize,
    pub list_size: usize,
    /// Weight of the decoder output (the transmitted word is zero).
    pub residual_weight: usize,
    pub stop: StopReason,
    #[serde(skip)]
    pub trace: Option<Vec<TraceEvent>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub d0: usize,
    pub l: usize,
    pub m: usize,
    pub t: usize,
    pub n_edges: usize,
    pub error_weight: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub max_iters: Option<usize>,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_iterations: f64,
    pub records: Vec<TrialRecord>,
}

/// Runs the trials of `cfg`.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    let local = Arc::new(make_local_code(&cfg.code)?);
    local.check_radius(cfg.t)?;
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if cfg.l < 2 || cfg.m == 0 {
        return Err(Error::invalid(format!("need l >= 2 and m >= 1 (l = {}, m = {})", cfg.l, cfg.m)));
    }
    let n_edges = local.n() * cfg.m;
    let weight = cfg.errors.weight(n_edges)?;

    let run = || -> Result<Vec<TrialRecord>> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(cfg, &local, weight, i))
            .collect()
    };
    let records = if cfg.jobs == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(run)?
    };

    let successes = records.iter().filter(|r| r.success).count();
    let total_iters: usize = records.iter().map(|r| r.iterations).sum();
    Ok(SimReport {
        code: local.name().to_string(),
        n: local.n(),
        k: local.k(),
        d0: local.d0(),
        l: cfg.l,
        m: cfg.m,
        t: cfg.t,
        n_edges,
        error_weight: weight,
        trials: cfg.trials,
        seed: cfg.seed,
        s: (cfg.l > 2).then_some(cfg.s),
        max_iters: cfg.max_iters,
        successes,
        success_rate: successes as f64 / cfg.trials as f64,
        mean_iterations: total_iters as f64 / cfg.trials as f64,
        records,
    })
}

/// Replays a single trial; `run_simulation` reports the same record.
pub fn run_trial(cfg: &SimConfig, local: &Arc<BinaryLinearCode>, weight: usize, trial: usize) -> Result<TrialRecord> {
    let seed = derive_seed(cfg.seed, trial as u64);
    let topo = RegularHypergraph::sample(cfg.l, cfg.m, local.n(), seed)?;
    let code = GraphCode::new(topo, Arc::clone(local))?;
    let support = SplitMix64::new(derive_seed(seed, 0)).sample_distinct(code.len(), weight);
    let y = BitVec::from_positions(code.len(), support);
    let zero = BitVec::zeros(code.len());
    let transmitted = cfg.trace.then_some(&zero);

    let (result, list_size) = if cfg.l == 2 {
        let icfg = AlgorithmIConfig {
            t: cfg.t,
            max_iters: cfg.max_iters,
            transmitted,
        };
        (algorithm_i(&code, &y, &icfg)?, 1)
    } else {
        let mut acfg = AlgorithmIIConfig::new(cfg.t, cfg.s);
        acfg.cleanup = CleanupConfig {
            enabled: true,
            max_iters: cfg.max_iters,
        };
        acfg.transmitted = transmitted;
        let out = algorithm_ii(&code, &y, &acfg)?;
        (out.decode, out.list.final_level().len())
    };
    Ok(TrialRecord {
        trial,
        seed,
        success: result.output.is_zero(),
        converged: result.converged,
        iterations: result.iterations,
        list_size,
        residual_weight: result.output.weight(),
        stop: result.stop,
        trace: result.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize, errors: ErrorSpec) -> SimConfig {
        SimConfig {
            code: LocalCodeKind::Golay23,
            l,
            m: 40,
            t: 3,
            errors,
            trials: 6,
            seed: 9,
            max_iters: None,
            s: 2,
            jobs: 2,
            trace: false,
        }
    }

    #[test]
    fn zero_errors_always_succeed() {
        let r = run_simulation(&cfg(2, ErrorSpec::Count(0))).unwrap();
        assert_eq!(r.success_rate, 1.0);
        let r = run_simulation(&cfg(3, ErrorSpec::Count(0))).unwrap();
        assert_eq!(r.success_rate, 1.0);
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let mut a = cfg(2, ErrorSpec::Count(8));
        let r1 = run_simulation(&a).unwrap();
        a.jobs = 1;
        let r2 = run_simulation(&a).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(run_simulation(&cfg(2, ErrorSpec::Count(920))).is_err());
        assert!(run_simulation(&cfg(2, ErrorSpec::Fraction(1.5))).is_err());
        let mut c = cfg(2, ErrorSpec::Count(1));
        c.t = 4;
        assert!(matches!(run_simulation(&c), Err(Error::RadiusTooLarge { .. })));
        c.t = 3;
        c.trials = 0;
        assert!(run_simulation(&c).is_err());
    }
}

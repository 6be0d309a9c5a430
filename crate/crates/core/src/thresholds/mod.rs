//! Correctable-error and distance thresholds of the random graph and hypergraph code
//! ensembles.
//!
//! Every `sup`-type threshold is evaluated as a first-violation point: the defining
//! strict inequality is scanned upward on a logarithmic grid starting at
//! [`SCAN_FLOOR`], and the first failing cell is refined by bisection. A condition
//! that already fails at the floor yields 0. All logarithms and entropies are in bits.

mod asymptotic;
mod bipartite;
mod distance;
mod hypergraph;
pub mod numeric;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub use asymptotic::{gamma0_asymptotic, gamma0_tau, x0_tau};
pub use bipartite::{f_bipartite, sigma0_bipartite, sigma0_bipartite_asymptotic, BipartiteF};
pub use distance::{delta_asymptotic, delta_bound, delta_x0};
pub use hypergraph::{gamma0_hamming, gamma0_hypergraph, tilde_f, tilde_f_closed_form, TildeF};
pub use numeric::{entropy, entropy_vec};

/// Smallest argument examined by the first-violation scans.
pub const SCAN_FLOOR: f64 = 1e-9;

/// Largest accepted relative residual of a defining equation at a returned root.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    BipartiteSigma0,
    BipartiteAsymptotic,
    HypergraphGamma0,
    /// The closed form for single-error-correcting Hamming local codes.
    HammingGamma0,
    DistanceBound,
    DistanceAsymptotic,
    Gamma0Asymptotic,
}

/// Slack term of the large-`n` inequalities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsMode {
    /// `(1 + log₂ n)/n` for the bipartite case, `log₂ n / n` for hypergraphs.
    Finite,
    #[default]
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdQuery {
    pub mode: ThresholdMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    pub eps_mode: EpsMode,
}

impl ThresholdQuery {
    pub fn new(mode: ThresholdMode) -> Self {
        ThresholdQuery {
            mode,
            n: None,
            t: None,
            d0: None,
            l: None,
            tau: None,
            delta0: None,
            eps_mode: EpsMode::Zero,
        }
    }

    fn need<T: Copy>(v: Option<T>, name: &str, mode: ThresholdMode) -> Result<T> {
        v.ok_or_else(|| Error::invalid(format!("--{name} is required for {mode:?}")))
    }

    fn validate(&self) -> Result<()> {
        if let (Some(t), Some(d0)) = (self.t, self.d0) {
            if 2 * t + 1 > d0 {
                return Err(Error::invalid(format!("need 2t + 1 <= d0 (t = {t}, d0 = {d0})")));
            }
        }
        if let Some(d) = self.delta0 {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::invalid(format!("delta0 must lie in (0, 1), got {d}")));
            }
        }
        if let Some(tau) = self.tau {
            let cap = self.delta0.map_or(0.5, |d| d / 2.0);
            if !(tau > 0.0 && tau <= cap) {
                return Err(Error::invalid(format!("tau must lie in (0, {cap}], got {tau}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub scan_floor: f64,
    pub scan_points: usize,
    pub residual: f64,
}

impl Tolerances {
    pub(crate) fn scan(points: usize) -> Self {
        Tolerances {
            scan_floor: SCAN_FLOOR,
            scan_points: points,
            residual: RESIDUAL_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub query: ThresholdQuery,
    pub value: f64,
    /// Auxiliary roots realizing the value, by name.
    pub root: BTreeMap<String, f64>,
    /// Relative residual of the defining equation at the returned point.
    pub residual: f64,
    pub method: String,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<[f64; 2]>,
    /// Sign changes of the inner root equation over its full bracket.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_changes: Option<usize>,
    pub notes: Vec<String>,
}

impl ThresholdResult {
    pub(crate) fn new(query: ThresholdQuery, method: &str, tolerances: Tolerances) -> Self {
        ThresholdResult {
            query,
            value: 0.0,
            root: BTreeMap::new(),
            residual: 0.0,
            method: method.to_string(),
            tolerances,
            bracket: None,
            sign_changes: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn with_root(mut self, name: &str, v: f64) -> Self {
        self.root.insert(name.to_string(), v);
        self
    }

    /// Fails if the residual exceeds [`RESIDUAL_TOL`].
    pub(crate) fn checked(self) -> Result<Self> {
        if self.residual.is_finite() && self.residual <= RESIDUAL_TOL {
            Ok(self)
        } else {
            Err(Error::numeric(
                format!("{:?}: residual above tolerance at {:e}", self.query.mode, self.value),
                self.residual,
            ))
        }
    }
}

/// Where a scanned condition `g < 0` stops holding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Boundary {
    AtFloor,
    /// Last passing and first failing points after bisection.
    Found { lo: f64, hi: f64 },
    /// Holds up to the top of the grid.
    Clear { top: f64 },
}

/// First violation of `g < 0` along `grid`, refined by bisection in `log₂`.
pub(crate) fn find_boundary<G: FnMut(f64) -> Result<f64>>(mut g: G, grid: &[f64]) -> Result<Boundary> {
    match numeric::first_violation(&mut g, grid)? {
        numeric::Scan::ViolatedAtFloor => Ok(Boundary::AtFloor),
        numeric::Scan::Clear => Ok(Boundary::Clear {
            top: *grid.last().expect("non-empty grid"),
        }),
        numeric::Scan::Crossing { lo, hi } => {
            let (lo, hi) = numeric::bisect_boundary(|x| Ok(g(x)? < 0.0), lo, hi)?;
            Ok(Boundary::Found { lo, hi })
        }
    }
}

/// Entry and exit of the first interval on which `g < 0` holds. With positive slack
/// the large-`n` conditions fail near zero, so the threshold is the upper end of the
/// first feasible interval rather than a first violation from the floor.
pub(crate) fn find_feasible_interval<G: FnMut(f64) -> Result<f64>>(
    mut g: G,
    grid: &[f64],
) -> Result<Option<(f64, Boundary)>> {
    let Some((before, first)) = numeric::first_pass(&mut g, grid)? else {
        return Ok(None);
    };
    let entry = match before {
        None => first,
        Some(b) => numeric::bisect_boundary(|x| Ok(g(x)? >= 0.0), b, first)?.1,
    };
    let start = grid.iter().position(|&x| x >= first).expect("first is on the grid");
    let mut rest = vec![entry];
    rest.extend_from_slice(&grid[start + 1..]);
    Ok(Some((entry, find_boundary(g, &rest)?)))
}

/// Evaluates a query.
pub fn run_query(q: &ThresholdQuery) -> Result<ThresholdResult> {
    q.validate()?;
    let mode = q.mode;
    let need_usize = |v: Option<usize>, name: &str| ThresholdQuery::need(v, name, mode);
    match mode {
        ThresholdMode::BipartiteSigma0 => {
            let n = ThresholdQuery::need(q.n, "n", mode)? as usize;
            sigma0_bipartite(n, need_usize(q.t, "t")?)
        }
        ThresholdMode::BipartiteAsymptotic => {
            let tau = ThresholdQuery::need(q.tau, "tau", mode)?;
            sigma0_bipartite_asymptotic(q.n, tau, q.eps_mode)
        }
        ThresholdMode::HypergraphGamma0 => {
            let n = ThresholdQuery::need(q.n, "n", mode)? as usize;
            gamma0_hypergraph(n, need_usize(q.t, "t")?, need_usize(q.d0, "d0")?, need_usize(q.l, "l")?)
        }
        ThresholdMode::HammingGamma0 => {
            let n = ThresholdQuery::need(q.n, "n", mode)? as usize;
            gamma0_hamming(n, need_usize(q.l, "l")?)
        }
        ThresholdMode::DistanceBound => {
            let n = ThresholdQuery::need(q.n, "n", mode)? as usize;
            delta_bound(n, need_usize(q.d0, "d0")?, need_usize(q.l, "l")?)
        }
        ThresholdMode::DistanceAsymptotic => {
            let delta0 = ThresholdQuery::need(q.delta0, "delta0", mode)?;
            delta_asymptotic(need_usize(q.l, "l")?, delta0)
        }
        ThresholdMode::Gamma0Asymptotic => {
            let delta0 = ThresholdQuery::need(q.delta0, "delta0", mode)?;
            gamma0_asymptotic(need_usize(q.l, "l")?, delta0, q.n, q.eps_mode)
        }
    }
}

//! Long local codes: `t = τn`, `d0 = δ0·n`, `n → ∞`.

use super::numeric::{entropy, log_grid, relative_gap};
use super::{find_boundary, find_feasible_interval, Boundary, EpsMode, ThresholdMode, ThresholdQuery, ThresholdResult, Tolerances, SCAN_FLOOR};
use crate::error::{Error, Result};

const X_GRID: usize = 600;
const TAU_GRID: usize = 200;
const ZOOM_POINTS: usize = 20;
const ZOOM_ROUNDS: usize = 8;

/// Both sides of `(1−x/δ0)h(xτ/(δ0−x)) + (x/δ0)h(δ0−τ) + ε < (1−1/l)h(x)`.
fn sides(l: usize, delta0: f64, tau: f64, eps: f64, x: f64) -> (f64, f64) {
    let lhs = (1.0 - x / delta0) * entropy(x * tau / (delta0 - x)) + x / delta0 * entropy(delta0 - tau) + eps;
    (lhs, (1.0 - 1.0 / l as f64) * entropy(x))
}

fn check(l: usize, delta0: f64) -> Result<()> {
    if l < 2 {
        return Err(Error::invalid(format!("need l >= 2, got {l}")));
    }
    if !(delta0 > 0.0 && delta0 < 0.5) {
        return Err(Error::invalid(format!("delta0 must lie in (0, 1/2), got {delta0}")));
    }
    Ok(())
}

/// `x₀(τ)` clipped to `τ`, which is all `min(τ, x₀(τ))` needs. With positive slack the
/// value is the upper end of the first interval on which the inequality holds.
pub fn x0_tau(l: usize, delta0: f64, tau: f64, eps: f64) -> Result<f64> {
    check(l, delta0)?;
    if !(tau > 0.0 && tau <= delta0 / 2.0) {
        return Err(Error::invalid(format!("tau must lie in (0, delta0/2], got {tau}")));
    }
    Ok(x0_boundary(l, delta0, tau, eps)?.0)
}

fn x0_boundary(l: usize, delta0: f64, tau: f64, eps: f64) -> Result<(f64, Option<[f64; 2]>)> {
    let g = |x: f64| {
        let (a, b) = sides(l, delta0, tau, eps, x);
        Ok(a - b)
    };
    let grid = log_grid(SCAN_FLOOR, tau, X_GRID);
    let boundary = if eps == 0.0 {
        find_boundary(g, &grid)?
    } else {
        match find_feasible_interval(g, &grid)? {
            None => return Ok((0.0, None)),
            Some((_, b)) => b,
        }
    };
    Ok(match boundary {
        Boundary::AtFloor => (0.0, None),
        Boundary::Clear { top } => (top, None),
        Boundary::Found { lo, hi } => (lo, Some([lo, hi])),
    })
}

/// `γ₀(τ) = min(τ, x₀(τ))`.
pub fn gamma0_tau(l: usize, delta0: f64, tau: f64, eps: f64) -> Result<f64> {
    Ok(tau.min(x0_tau(l, delta0, tau, eps)?))
}

/// `γ₀ = max_{0<τ≤δ0/2} min(τ, x₀(τ))`, maximized on a uniform `τ` grid followed by
/// repeated zooming around the best cell.
///
/// `EpsMode::Finite` uses the slack `log₂ n / n` and needs `n`.
pub fn gamma0_asymptotic(l: usize, delta0: f64, n: Option<u64>, eps_mode: EpsMode) -> Result<ThresholdResult> {
    check(l, delta0)?;
    let eps = match (eps_mode, n) {
        (EpsMode::Zero, _) => 0.0,
        (EpsMode::Finite, Some(n)) if n >= 2 => (n as f64).log2() / n as f64,
        (EpsMode::Finite, _) => return Err(Error::invalid("eps mode `finite` needs n >= 2")),
    };
    let top = delta0 / 2.0;
    let eval = |tau: f64| gamma0_tau(l, delta0, tau, eps);

    let mut best_tau = top;
    let mut best = f64::NEG_INFINITY;
    let mut step = top / TAU_GRID as f64;
    for k in 1..=TAU_GRID {
        let tau = step * k as f64;
        let v = eval(tau)?;
        if v > best {
            best = v;
            best_tau = tau;
        }
    }
    for _ in 0..ZOOM_ROUNDS {
        let lo = (best_tau - step).max(step * 1e-3);
        let hi = (best_tau + step).min(top);
        step = (hi - lo) / ZOOM_POINTS as f64;
        for k in 0..=ZOOM_POINTS {
            let tau = lo + step * k as f64;
            let v = eval(tau)?;
            if v > best {
                best = v;
                best_tau = tau;
            }
        }
    }

    let mut q = ThresholdQuery::new(ThresholdMode::Gamma0Asymptotic);
    q.n = n;
    q.l = Some(l);
    q.delta0 = Some(delta0);
    q.eps_mode = eps_mode;
    let mut res = ThresholdResult::new(q, "tau grid with zoom refinement, log-grid scan and bisection for x0", Tolerances::scan(X_GRID))
        .with_root("tau", best_tau)
        .with_root("eps", eps);
    let (x0, bracket) = x0_boundary(l, delta0, best_tau, eps)?;
    res.root.insert("x0".into(), x0);
    res.value = best.max(0.0);
    if let Some(b) = bracket {
        let (a, c) = sides(l, delta0, best_tau, eps, x0);
        res.bracket = Some(b);
        res.residual = relative_gap(a, c);
    }
    res.checked()
}

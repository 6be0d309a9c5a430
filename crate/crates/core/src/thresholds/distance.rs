use super::numeric::{bisect, entropy, log2_binomials, log_grid, relative_gap, LogSum};
use super::{find_boundary, Boundary, ThresholdMode, ThresholdQuery, ThresholdResult, Tolerances, SCAN_FLOOR};
use crate::error::{Error, Result};

const OMEGA_GRID: usize = 512;

/// `log₂` of the positive and negative parts of `ωn + Σ_{i≥d0} C(n,i)(ωn − i)x^i`.
fn x0_gap(lc: &[f64], d0: usize, wn: f64, u: f64) -> f64 {
    let mut pos = LogSum::new();
    let mut neg = LogSum::new();
    pos.add(wn.log2());
    for (i, &l) in lc.iter().enumerate().skip(d0) {
        let coef = wn - i as f64;
        if coef > 0.0 {
            pos.add(l + i as f64 * u + coef.log2());
        } else if coef < 0.0 {
            neg.add(l + i as f64 * u + (-coef).log2());
        }
    }
    pos.value() - neg.value()
}

fn x0_with(lc: &[f64], d0: usize, omega: f64) -> Result<f64> {
    let wn = omega * (lc.len() - 1) as f64;
    let f = |u: f64| x0_gap(lc, d0, wn, u);
    let (mut lo, mut hi) = (-30.0, 30.0);
    while f(lo) <= 0.0 {
        lo *= 2.0;
        if lo < -4000.0 {
            return Err(Error::numeric(format!("x0 bracket exhausted below at omega = {omega}"), f(lo).abs()));
        }
    }
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 4000.0 {
            return Err(Error::numeric(format!("x0 bracket exhausted above at omega = {omega}"), f(hi).abs()));
        }
    }
    let (a, b) = bisect(|u| Ok(f(u)), lo, hi)?;
    Ok(if f(a).abs() <= f(b).abs() { a } else { b }.exp2())
}

/// Positive root `x₀` of `ωn + Σ_{i=d0}^{n} C(n,i)(ωn − i)x^i = 0`.
pub fn delta_x0(n: usize, d0: usize, omega: f64) -> Result<f64> {
    check(n, d0, 2)?;
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::invalid(format!("omega must lie in (0, 1), got {omega}")));
    }
    x0_with(&log2_binomials(n), d0, omega)
}

fn check(n: usize, d0: usize, l: usize) -> Result<()> {
    if l < 2 || d0 < 2 || d0 > n {
        return Err(Error::invalid(format!(
            "need l >= 2 and 2 <= d0 <= n (n = {n}, d0 = {d0}, l = {l})"
        )));
    }
    Ok(())
}

/// `(l/n)·log₂((1 + Σ_{i≥d0} C(n,i)x₀^i) / x₀^{ωn})` with `x₀ = x₀(ω)`.
fn exponent(lc: &[f64], d0: usize, l: usize, omega: f64) -> Result<(f64, f64)> {
    let n = (lc.len() - 1) as f64;
    let x0 = x0_with(lc, d0, omega)?;
    let u = x0.log2();
    let mut s = LogSum::new();
    s.add(0.0);
    for (i, &c) in lc.iter().enumerate().skip(d0) {
        s.add(c + i as f64 * u);
    }
    Ok((l as f64 / n * (s.value() - omega * n * u), x0))
}

/// Lower bound on the ensemble-average relative distance: the first `ω` at which the
/// exponent stops being below `(l − 1)h(ω)`.
pub fn delta_bound(n: usize, d0: usize, l: usize) -> Result<ThresholdResult> {
    check(n, d0, l)?;
    let lc = log2_binomials(n);
    let mut q = ThresholdQuery::new(ThresholdMode::DistanceBound);
    q.n = Some(n as u64);
    q.d0 = Some(d0);
    q.l = Some(l);
    let mut res = ThresholdResult::new(q, "log-grid scan over omega, inner root by bisection in log x", Tolerances::scan(OMEGA_GRID));
    let rhs = |w: f64| (l - 1) as f64 * entropy(w);
    let grid = log_grid(SCAN_FLOOR, 0.5, OMEGA_GRID);
    match find_boundary(|w| Ok(exponent(&lc, d0, l, w)?.0 - rhs(w)), &grid)? {
        Boundary::AtFloor => res.notes.push(format!("condition fails at omega = {SCAN_FLOOR:e}")),
        Boundary::Clear { top } => {
            res.value = top;
            res.notes.push("condition holds on the whole grid".into());
        }
        Boundary::Found { lo, hi } => {
            let (v, x0) = exponent(&lc, d0, l, lo)?;
            res.value = lo;
            res.bracket = Some([lo, hi]);
            res.residual = relative_gap(v, rhs(lo));
            res.root.insert("x0".into(), x0);
        }
    }
    res.checked()
}

/// Root `x ∈ (0, 1/2)` of `h(x)/x = (l/(l − 1))·h(δ0)/δ0`.
pub fn delta_asymptotic(l: usize, delta0: f64) -> Result<ThresholdResult> {
    if l < 2 {
        return Err(Error::invalid(format!("need l >= 2, got {l}")));
    }
    if !(delta0 > 0.0 && delta0 <= 0.5) {
        return Err(Error::invalid(format!("delta0 must lie in (0, 1/2], got {delta0}")));
    }
    let target = l as f64 / (l - 1) as f64 * entropy(delta0) / delta0;
    let ratio = |x: f64| entropy(x) / x;
    let mut q = ThresholdQuery::new(ThresholdMode::DistanceAsymptotic);
    q.l = Some(l);
    q.delta0 = Some(delta0);
    let mut res = ThresholdResult::new(q, "bisection in log x on h(x)/x", Tolerances::scan(0));
    let (lo, hi) = (-1000.0f64, -1.0f64);
    if ratio(lo.exp2()) < target {
        res.notes.push("root below 2^-1000".into());
        return Ok(res);
    }
    let (a, b) = bisect(|u| Ok(ratio(u.exp2()) - target), lo, hi)?;
    let x = 0.5 * (a.exp2() + b.exp2());
    res.value = x;
    res.bracket = Some([a.exp2(), b.exp2()]);
    res.residual = relative_gap(ratio(x), target);
    res.checked()
}

use super::numeric::{entropy, log2_binomials, log_grid, relative_gap, LogSum};
use super::{find_boundary, find_feasible_interval, Boundary, EpsMode, ThresholdMode, ThresholdQuery, ThresholdResult, Tolerances, SCAN_FLOOR};
use crate::error::{Error, Result};

/// Widest bracket for the inner root, in `log₂ x`: `x ∈ [1e−30, 1e30]`.
const U_LIMIT: f64 = 99.657_842_846_620_87;
const SIGMA_GRID: usize = 400;
const SIGN_GRID: usize = 256;
const ASYMPTOTIC_GRID: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BipartiteF {
    /// `F_{n,t}(σ)` in bits.
    pub value: f64,
    pub x: f64,
    /// Relative residual of the root equation at `x`.
    pub residual: f64,
}

/// The four single sums the double sum of the root equation factors into:
/// `Σ_{i≤t} Σ_{j>t} C_i C_j (σ(n−j) − i(1−σ)) x^{i+j} = σ·A·B − (1−σ)·C·D`.
struct Sums {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

fn sums(lc: &[f64], t: usize, u: f64) -> Sums {
    let n = lc.len() - 1;
    let (mut a, mut b, mut c, mut d) = (LogSum::new(), LogSum::new(), LogSum::new(), LogSum::new());
    for (i, &l) in lc.iter().enumerate() {
        let term = l + i as f64 * u;
        if i <= t {
            b.add(term);
            if i > 0 {
                c.add(term + (i as f64).log2());
            }
        } else {
            d.add(term);
            if i < n {
                a.add(term + ((n - i) as f64).log2());
            }
        }
    }
    Sums {
        a: a.value(),
        b: b.value(),
        c: c.value(),
        d: d.value(),
    }
}

/// `log₂(σAB) − log₂((1−σ)CD)`: positive near `x = 0`, negative for large `x`.
fn root_gap(lc: &[f64], t: usize, sigma: f64, u: f64) -> f64 {
    let s = sums(lc, t, u);
    (sigma.log2() + s.a + s.b) - ((1.0 - sigma).log2() + s.c + s.d)
}

fn check_nt(n: usize, t: usize) -> Result<()> {
    if t == 0 || t >= n {
        return Err(Error::invalid(format!("need 1 <= t < n (n = {n}, t = {t})")));
    }
    Ok(())
}

/// `F_{n,t}(σ)` with its auxiliary root `x`, all sums in the log domain.
pub fn f_bipartite(n: usize, t: usize, sigma: f64) -> Result<BipartiteF> {
    check_nt(n, t)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::invalid(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    f_with(&log2_binomials(n), t, sigma)
}

fn f_with(lc: &[f64], t: usize, sigma: f64) -> Result<BipartiteF> {
    let n = lc.len() - 1;
    let gap = |u: f64| root_gap(lc, t, sigma, u);
    let (mut lo, mut hi) = (-30.0, 30.0);
    while gap(lo) <= 0.0 {
        if lo <= -U_LIMIT {
            return Err(Error::numeric("root bracket exhausted below x = 1e-30", gap(lo).abs()));
        }
        lo = (2.0 * lo).max(-U_LIMIT);
    }
    while gap(hi) >= 0.0 {
        if hi >= U_LIMIT {
            return Err(Error::numeric("root bracket exhausted above x = 1e30", gap(hi).abs()));
        }
        hi = (2.0 * hi).min(U_LIMIT);
    }
    let (a, b) = super::numeric::bisect(|u| Ok(gap(u)), lo, hi)?;
    let u = if gap(a).abs() <= gap(b).abs() { a } else { b };
    let s = sums(lc, t, u);
    let value = entropy(sigma) - sigma * n as f64 * u + sigma * s.d + (1.0 - sigma) * s.b;
    Ok(BipartiteF {
        value,
        x: u.exp2(),
        residual: 1.0 - (-gap(u).abs()).exp2(),
    })
}

fn sign_changes(lc: &[f64], t: usize, sigma: f64) -> usize {
    let grid: Vec<f64> = (0..SIGN_GRID)
        .map(|k| -U_LIMIT + 2.0 * U_LIMIT * k as f64 / (SIGN_GRID - 1) as f64)
        .collect();
    super::numeric::count_sign_changes(|u| root_gap(lc, t, sigma, u), &grid)
}

/// `σ₀`: the first `σ > 0` at which `F_{n,t}(σ) < (n − 1)h(σ)` stops holding.
///
/// For `t = 1` the inequality already fails at the scan floor and the result is 0.
pub fn sigma0_bipartite(n: usize, t: usize) -> Result<ThresholdResult> {
    check_nt(n, t)?;
    let lc = log2_binomials(n);
    let mut q = ThresholdQuery::new(ThresholdMode::BipartiteSigma0);
    q.n = Some(n as u64);
    q.t = Some(t);
    let mut res = ThresholdResult::new(q, "log-grid scan of F - (n-1)h, bisection in log sigma", Tolerances::scan(SIGMA_GRID));
    let rhs = |s: f64| (n - 1) as f64 * entropy(s);
    let grid = log_grid(SCAN_FLOOR, 0.5, SIGMA_GRID);
    match find_boundary(|s| Ok(f_with(&lc, t, s)?.value - rhs(s)), &grid)? {
        Boundary::AtFloor => {
            res.notes.push(format!("F >= (n-1)h already at sigma = {SCAN_FLOOR:e}"));
            Ok(res)
        }
        Boundary::Clear { top } => Err(Error::numeric(
            format!("no violation up to sigma = {top}"),
            0.0,
        )),
        Boundary::Found { lo, hi } => {
            let f = f_with(&lc, t, lo)?;
            res.value = lo;
            res.bracket = Some([lo, hi]);
            res.residual = relative_gap(f.value, rhs(lo)).max(f.residual);
            res.sign_changes = Some(sign_changes(&lc, t, lo));
            let res = res.with_root("x", f.x);
            if res.sign_changes != Some(1) {
                return Err(Error::numeric(
                    format!("root equation has {:?} sign changes at sigma0", res.sign_changes),
                    res.residual,
                ));
            }
            res.checked()
        }
    }
}

/// `(1−x)h(x(1−τ)/(1−x)) + x·h(τ) + ε − h(x)`.
fn asymptotic_gap(x: f64, tau: f64, eps: f64) -> (f64, f64) {
    let lhs = (1.0 - x) * entropy(x * (1.0 - tau) / (1.0 - x)) + x * entropy(tau) + eps;
    (lhs, entropy(x))
}

/// Large-`n` bipartite threshold for local codes correcting `τn` errors, capped at `τ`.
///
/// With `EpsMode::Finite` the slack is `(1 + log₂ n)/n` and `n` is required. Positive
/// slack makes the condition fail near zero, so the value is the upper end of the first
/// interval on which it holds (0 if there is none).
pub fn sigma0_bipartite_asymptotic(n: Option<u64>, tau: f64, eps_mode: EpsMode) -> Result<ThresholdResult> {
    if !(tau > 0.0 && tau < 0.5) {
        return Err(Error::invalid(format!("tau must lie in (0, 1/2), got {tau}")));
    }
    let eps = match (eps_mode, n) {
        (EpsMode::Zero, _) => 0.0,
        (EpsMode::Finite, Some(n)) if n >= 2 => (1.0 + (n as f64).log2()) / n as f64,
        (EpsMode::Finite, _) => return Err(Error::invalid("eps mode `finite` needs n >= 2")),
    };
    let mut q = ThresholdQuery::new(ThresholdMode::BipartiteAsymptotic);
    q.n = n;
    q.tau = Some(tau);
    q.eps_mode = eps_mode;
    let mut res = ThresholdResult::new(q, "log-grid scan capped at tau, bisection in log x", Tolerances::scan(ASYMPTOTIC_GRID))
        .with_root("eps", eps);
    let g = |x: f64| {
        let (l, r) = asymptotic_gap(x, tau, eps);
        Ok(l - r)
    };
    let grid = log_grid(SCAN_FLOOR, tau, ASYMPTOTIC_GRID);
    let boundary = if eps == 0.0 {
        find_boundary(g, &grid)?
    } else {
        match find_feasible_interval(g, &grid)? {
            None => {
                res.notes.push("condition fails on the whole grid".into());
                return Ok(res);
            }
            Some((entry, b)) => {
                res.root.insert("entry".into(), entry);
                b
            }
        }
    };
    match boundary {
        Boundary::AtFloor => res.notes.push(format!("condition fails at x = {SCAN_FLOOR:e}")),
        Boundary::Clear { .. } => {
            res.value = tau;
            res.notes.push("condition holds up to tau; value capped at tau".into());
        }
        Boundary::Found { lo, hi } => {
            let (l, r) = asymptotic_gap(lo, tau, eps);
            res.value = lo;
            res.bracket = Some([lo, hi]);
            res.residual = relative_gap(l, r);
        }
    }
    res.checked()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_equation_sign_pattern() {
        let lc = log2_binomials(23);
        assert!(root_gap(&lc, 3, 0.01, -60.0) > 0.0);
        assert!(root_gap(&lc, 3, 0.01, 60.0) < 0.0);
        assert_eq!(sign_changes(&lc, 3, 0.01), 1);
    }

    #[test]
    fn factorized_sum_matches_double_sum() {
        let (n, t, sigma, x) = (9usize, 2usize, 0.07, 0.3f64);
        let c = |k: usize| (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64);
        let mut direct = 0.0;
        for i in 0..=t {
            for j in t + 1..=n {
                direct += c(i) * c(j) * (sigma * (n - j) as f64 - i as f64 * (1.0 - sigma)) * x.powi((i + j) as i32);
            }
        }
        let s = sums(&log2_binomials(n), t, x.log2());
        let fact = sigma * (s.a + s.b).exp2() - (1.0 - sigma) * (s.c + s.d).exp2();
        assert!((direct - fact).abs() < 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn small_sigma_f_vanishes() {
        let f = f_bipartite(23, 3, 1e-9).unwrap();
        assert!(f.value.abs() < 1e-6);
        assert!(f_bipartite(23, 0, 0.1).is_err());
        assert!(f_bipartite(23, 3, 1.0).is_err());
    }

    #[test]
    fn t1_gives_zero() {
        for n in [7, 15, 31] {
            assert_eq!(sigma0_bipartite(n, 1).unwrap().value, 0.0);
        }
    }

    #[test]
    fn asymptotic_capped_and_finite_eps_needs_n() {
        let r = sigma0_bipartite_asymptotic(None, 0.1, EpsMode::Zero).unwrap();
        assert!(r.value > 0.0 && r.value <= 0.1);
        assert!(sigma0_bipartite_asymptotic(None, 0.1, EpsMode::Finite).is_err());
    }
}

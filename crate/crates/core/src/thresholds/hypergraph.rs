//! `F̃_{n,t}(γ) = max g(z)` over the profiles with edge density `γ` whose good-vertex
//! error count equals `t` times the bad-vertex count, and the threshold `γ₀` built on it.
//!
//! The maximizer has the exponential-family form `zᵢ ∝ C(n,i)·e^{a·i + b·cᵢ}` with
//! `cᵢ = i` for `i ≤ t`, `cᵢ = −t` for `i ≥ d0 − t` and 0 in between. The
//! multipliers minimize the convex dual `Ψ(a,b) = log Σ C(n,i)e^{a·i + b·cᵢ} − a·γn`,
//! whose minimum equals the constrained maximum.

use std::f64::consts::LN_2;

use super::numeric::{count_sign_changes, entropy, log2_binomials, log2_sum_exp2, log_grid, relative_gap, LogSum};
use super::{find_boundary, Boundary, ThresholdMode, ThresholdQuery, ThresholdResult, Tolerances, SCAN_FLOOR};
use crate::error::{Error, Result};

const GAMMA_GRID: usize = 300;
const GAMMA_TOP: f64 = 0.45;
const NEWTON_TOL: f64 = 1e-13;
const U_LIMIT: f64 = 99.657_842_846_620_87;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TildeMethod {
    Newton,
    NestedBisection,
}

#[derive(Clone, Debug)]
pub struct TildeF {
    /// Maximum of `g` in bits.
    pub value: f64,
    /// The maximizing profile.
    pub z: Vec<f64>,
    pub x: f64,
    pub y: f64,
    /// Largest relative moment mismatch at the solution.
    pub residual: f64,
    pub method: TildeMethod,
}

struct Family {
    /// `ln C(n, i)`
    lc: Vec<f64>,
    c: Vec<f64>,
    target: f64,
}

#[derive(Clone, Copy)]
struct Moments {
    phi: f64,
    mean_i: f64,
    mean_c: f64,
    abs_c: f64,
    var_i: f64,
    cov: f64,
    var_c: f64,
}

impl Family {
    fn new(n: usize, t: usize, d0: usize, gamma: f64) -> Self {
        let lc = log2_binomials(n).into_iter().map(|v| v * LN_2).collect();
        let c = (0..=n)
            .map(|i| {
                if i <= t {
                    i as f64
                } else if i >= d0 - t {
                    -(t as f64)
                } else {
                    0.0
                }
            })
            .collect();
        Family {
            lc,
            c,
            target: gamma * n as f64,
        }
    }

    fn exponents(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        self.lc.iter().zip(&self.c).enumerate().map(move |(i, (&l, &c))| l + a * i as f64 + b * c)
    }

    fn moments(&self, a: f64, b: f64) -> Moments {
        let max = self.exponents(a, b).fold(f64::NEG_INFINITY, f64::max);
        let (mut s, mut si, mut sc, mut sac, mut sii, mut sic, mut scc) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (i, e) in self.exponents(a, b).enumerate() {
            let w = (e - max).exp();
            let (fi, c) = (i as f64, self.c[i]);
            s += w;
            si += w * fi;
            sc += w * c;
            sac += w * c.abs();
            sii += w * fi * fi;
            sic += w * fi * c;
            scc += w * c * c;
        }
        let (mi, mc) = (si / s, sc / s);
        Moments {
            phi: max + s.ln(),
            mean_i: mi,
            mean_c: mc,
            abs_c: sac / s,
            var_i: (sii / s - mi * mi).max(0.0),
            cov: sic / s - mi * mc,
            var_c: (scc / s - mc * mc).max(0.0),
        }
    }

    #[cfg(test)]
    fn dual(&self, a: f64, b: f64) -> f64 {
        self.moments(a, b).phi - a * self.target
    }

    fn residual(&self, m: &Moments) -> f64 {
        let r1 = (m.mean_i - self.target).abs() / self.target;
        let r2 = if m.abs_c > 0.0 { m.mean_c.abs() / m.abs_c } else { 0.0 };
        r1.max(r2)
    }

    /// Damped Newton on the dual, with a Levenberg term added to the Hessian whenever
    /// the plain step fails to decrease it.
    fn newton(&self, gamma: f64) -> Option<(f64, f64)> {
        let mut a = (gamma / (1.0 - gamma)).ln();
        let mut b = 0.0;
        let mut lambda = 0.0f64;
        for _ in 0..1000 {
            let m = self.moments(a, b);
            if self.residual(&m) <= NEWTON_TOL {
                return Some((a, b));
            }
            let (g1, g2) = (m.mean_i - self.target, m.mean_c);
            let scale = m.var_i + m.var_c;
            let (h11, h22) = (m.var_i + lambda, m.var_c + lambda);
            let det = h11 * h22 - m.cov * m.cov;
            let mut moved = false;
            if det.is_finite() && det > 1e-14 * scale * scale {
                let da = -(h22 * g1 - m.cov * g2) / det;
                let db = -(h11 * g2 - m.cov * g1) / det;
                let psi0 = m.phi - a * self.target;
                let slope = g1 * da + g2 * db;
                let mut step = 1.0;
                while step >= 1e-4 {
                    let (na, nb) = (a + step * da, b + step * db);
                    let nm = self.moments(na, nb);
                    let decrease = nm.phi - na * self.target <= psi0 + 1e-4 * step * slope;
                    // Near the optimum the dual is flat to machine precision; the
                    // moment residual still measures progress there.
                    if decrease || self.residual(&nm) < 0.5 * self.residual(&m) {
                        a = na;
                        b = nb;
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
            }
            if moved {
                lambda *= 0.1;
            } else {
                if lambda > 1e12 * (scale + 1.0) {
                    return (self.residual(&m) <= 1e-10).then_some((a, b));
                }
                lambda = (10.0 * lambda).max(1e-8 * (scale + f64::MIN_POSITIVE));
            }
        }
        None
    }

    /// Solves `E[i] = γn` in `a` for fixed `b`; `E[i]` increases with `a`.
    fn solve_a(&self, b: f64) -> Option<f64> {
        let f = |a: f64| self.moments(a, b).mean_i - self.target;
        let (mut lo, mut hi) = (-50.0, 50.0);
        while f(lo) > 0.0 {
            lo *= 2.0;
            if lo < -1e5 {
                return None;
            }
        }
        while f(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e5 {
                return None;
            }
        }
        super::numeric::bisect(|a| Ok(f(a)), lo, hi).ok().map(|(l, h)| 0.5 * (l + h))
    }

    /// Outer bisection on `b`: along `a*(b)`, `E[c]` increases with `b`.
    fn nested_bisection(&self) -> Option<(f64, f64)> {
        let f = |b: f64| -> Result<f64> {
            let a = self.solve_a(b).ok_or_else(|| Error::numeric("inner bracket exhausted", f64::NAN))?;
            Ok(self.moments(a, b).mean_c)
        };
        let (mut lo, mut hi) = (-50.0, 50.0);
        while f(lo).ok()? > 0.0 {
            lo *= 2.0;
            if lo < -1e5 {
                return None;
            }
        }
        while f(hi).ok()? < 0.0 {
            hi *= 2.0;
            if hi > 1e5 {
                return None;
            }
        }
        let (l, h) = super::numeric::bisect(f, lo, hi).ok()?;
        let b = 0.5 * (l + h);
        Some((self.solve_a(b)?, b))
    }
}

/// `F̃_{n,t}(γ)` and its maximizing profile, for local codes of distance `d0`.
pub fn tilde_f(n: usize, t: usize, d0: usize, gamma: f64) -> Result<TildeF> {
    if t == 0 || d0 <= 2 * t || d0 > n {
        return Err(Error::invalid(format!(
            "need t >= 1 and 2t < d0 <= n (n = {n}, t = {t}, d0 = {d0})"
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    let fam = Family::new(n, t, d0, gamma);
    let (method, (a, b)) = match fam.newton(gamma) {
        Some(ab) => (TildeMethod::Newton, ab),
        None => (
            TildeMethod::NestedBisection,
            fam.nested_bisection().ok_or_else(|| {
                Error::numeric(format!("no maximizer found for gamma = {gamma}"), f64::NAN)
            })?,
        ),
    };
    let m = fam.moments(a, b);
    let z: Vec<f64> = fam.exponents(a, b).map(|e| (e - m.phi).exp()).collect();
    Ok(TildeF {
        value: (m.phi - a * fam.target) / LN_2,
        z,
        x: a.exp(),
        y: b.exp(),
        residual: fam.residual(&m),
        method,
    })
}

/// The sums `P = Σ_{i≥2} C(n,i) x^{i+1}` and `Q = Σ_{i≥2} (i+1) C(n,i) x^{i+1}` in `log₂`.
fn hamming_sums(lc: &[f64], u: f64) -> (f64, f64) {
    let (mut p, mut q) = (LogSum::new(), LogSum::new());
    for (i, &l) in lc.iter().enumerate().skip(2) {
        let term = l + (i + 1) as f64 * u;
        p.add(term);
        q.add(term + ((i + 1) as f64).log2());
    }
    (p.value(), q.value())
}

/// `log₂ Q − log₂(2nP + √(nP)) − log₂ γ`, increasing in `u = log₂ x`.
fn hamming_gap(lc: &[f64], gamma: f64, u: f64) -> f64 {
    let ln = ((lc.len() - 1) as f64).log2();
    let (lp, lq) = hamming_sums(lc, u);
    lq - log2_sum_exp2([1.0 + ln + lp, 0.5 * (ln + lp)]) - gamma.log2()
}

/// Closed form of `F̃_{n,1}(γ)` for `d0 = 3`, returning the value and its root `x`.
pub fn tilde_f_closed_form(n: usize, gamma: f64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::invalid("closed form needs n >= 3"));
    }
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1/2), got {gamma}")));
    }
    closed_with(&log2_binomials(n), gamma)
}

fn closed_with(lc: &[f64], gamma: f64) -> Result<(f64, f64)> {
    let n = (lc.len() - 1) as f64;
    let f = |u: f64| hamming_gap(lc, gamma, u);
    let (mut lo, mut hi) = (-30.0, 30.0);
    while f(lo) >= 0.0 {
        lo *= 2.0;
        if lo < -4000.0 {
            return Err(Error::numeric("closed-form bracket exhausted below", f(lo).abs()));
        }
    }
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 4000.0 {
            return Err(Error::numeric("closed-form bracket exhausted above", f(hi).abs()));
        }
    }
    let (a, b) = super::numeric::bisect(|u| Ok(f(u)), lo, hi)?;
    let u = if f(a).abs() <= f(b).abs() { a } else { b };
    let (lp, _) = hamming_sums(lc, u);
    let value = -gamma * n * u + log2_sum_exp2([0.0, 1.0 + 0.5 * (n.log2() + lp)]);
    Ok((value, u.exp2()))
}

fn check_l(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::invalid(format!("need l >= 2, got {l}")));
    }
    Ok(())
}

/// `γ₀`: first `γ` at which `(l/n)·F̃_{n,t}(γ) < (l − 1)h(γ)` stops holding.
pub fn gamma0_hypergraph(n: usize, t: usize, d0: usize, l: usize) -> Result<ThresholdResult> {
    check_l(l)?;
    tilde_f(n, t, d0, 0.01)?;
    let mut q = ThresholdQuery::new(ThresholdMode::HypergraphGamma0);
    q.n = Some(n as u64);
    q.t = Some(t);
    q.d0 = Some(d0);
    q.l = Some(l);
    let lhs = |g: f64| -> Result<(f64, TildeF)> {
        let tf = tilde_f(n, t, d0, g)?;
        Ok((l as f64 / n as f64 * tf.value, tf))
    };
    let rhs = |g: f64| (l - 1) as f64 * entropy(g);
    let res = ThresholdResult::new(
        q,
        "log-grid scan, dual Newton for the inner maximum, bisection in log gamma",
        Tolerances::scan(GAMMA_GRID),
    );
    let grid = log_grid(SCAN_FLOOR, GAMMA_TOP, GAMMA_GRID);
    let boundary = find_boundary(|g| Ok(lhs(g)?.0 - rhs(g)), &grid)?;
    finish_gamma0(res, boundary, |g| {
        let (v, tf) = lhs(g)?;
        Ok((v, rhs(g), tf.residual, vec![("x", tf.x), ("y", tf.y)]))
    })
}

/// `γ₀` for `t = 1`, `d0 = 3` through the closed form of `F̃`.
pub fn gamma0_hamming(n: usize, l: usize) -> Result<ThresholdResult> {
    check_l(l)?;
    if n < 3 {
        return Err(Error::invalid("closed form needs n >= 3"));
    }
    let lc = log2_binomials(n);
    let mut q = ThresholdQuery::new(ThresholdMode::HammingGamma0);
    q.n = Some(n as u64);
    q.t = Some(1);
    q.d0 = Some(3);
    q.l = Some(l);
    let lhs = |g: f64| -> Result<(f64, f64)> {
        let (v, x) = closed_with(&lc, g)?;
        Ok((l as f64 / n as f64 * v, x))
    };
    let rhs = |g: f64| (l - 1) as f64 * entropy(g);
    let mut res = ThresholdResult::new(q, "log-grid scan, closed form for the inner maximum", Tolerances::scan(GAMMA_GRID));
    let grid = log_grid(SCAN_FLOOR, GAMMA_TOP, GAMMA_GRID);
    let boundary = find_boundary(|g| Ok(lhs(g)?.0 - rhs(g)), &grid)?;
    if let Boundary::Found { lo, .. } = boundary {
        let ugrid: Vec<f64> = (0..512).map(|k| -U_LIMIT + 2.0 * U_LIMIT * k as f64 / 511.0).collect();
        let changes = count_sign_changes(|u| hamming_gap(&lc, lo, u), &ugrid);
        res.sign_changes = Some(changes);
        if changes != 1 {
            return Err(Error::numeric(format!("closed-form equation has {changes} sign changes"), f64::NAN));
        }
    }
    finish_gamma0(res, boundary, |g| {
        let (v, x) = lhs(g)?;
        Ok((v, rhs(g), 0.0, vec![("x", x)]))
    })
}

type Probe = (f64, f64, f64, Vec<(&'static str, f64)>);

fn finish_gamma0<P: FnMut(f64) -> Result<Probe>>(mut res: ThresholdResult, b: Boundary, mut probe: P) -> Result<ThresholdResult> {
    match b {
        Boundary::AtFloor => res.notes.push(format!("condition fails at gamma = {SCAN_FLOOR:e}")),
        Boundary::Clear { top } => {
            return Err(Error::numeric(format!("no violation up to gamma = {top}"), 0.0));
        }
        Boundary::Found { lo, hi } => {
            let (lhs, rhs, inner, roots) = probe(lo)?;
            res.value = lo;
            res.bracket = Some([lo, hi]);
            res.residual = relative_gap(lhs, rhs).max(inner);
            for (k, v) in roots {
                res.root.insert(k.to_string(), v);
            }
        }
    }
    res.checked()
}

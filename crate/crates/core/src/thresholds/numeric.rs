//! Scalar numerics shared by the threshold solvers. Logarithms are base 2.

use crate::error::{Error, Result};

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Entropy of a probability vector in bits.
pub fn entropy_vec(z: &[f64]) -> f64 {
    z.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// `log₂ C(n, i)` for `i = 0..=n`, built by the running product.
pub fn log2_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..=n {
        acc += ((n - i + 1) as f64 / i as f64).log2();
        out.push(acc);
    }
    out
}

/// Streaming base-2 log-sum-exp: accumulates `Σ 2^vᵢ` as `2^max · s`.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.max {
            self.scaled = self.scaled * (self.max - v).exp2() + 1.0;
            self.max = v;
        } else {
            self.scaled += (v - self.max).exp2();
        }
    }

    /// `log₂` of the sum; `-∞` when empty.
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.log2()
        }
    }
}

impl FromIterator<f64> for LogSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = LogSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// `log₂ Σ 2^vᵢ`.
pub fn log2_sum_exp2(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<LogSum>().value()
}

/// `n` points spaced evenly in `log₂` from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log2(), hi.log2());
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                (a + (b - a) * k as f64 / (n - 1) as f64).exp2()
            }
        })
        .collect()
}

/// Bisection for a sign change of `f` on `[lo, hi]`, run until the bracket stops
/// shrinking in floating point. Returns the final bracket.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok((lo, lo));
    }
    if f_hi == 0.0 {
        return Ok((hi, hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::numeric(
            format!("no sign change on [{lo:e}, {hi:e}]"),
            f_lo.abs().min(f_hi.abs()),
        ));
    }
    let lo_sign = f_lo.signum();
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok((mid, mid));
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Bisection on a predicate: `ok(lo)` holds, `ok(hi)` does not. Works in `log₂ x`
/// so that brackets spanning many decades converge in relative terms.
pub fn bisect_boundary<F: FnMut(f64) -> Result<bool>>(mut ok: F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (lo.log2(), hi.log2());
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if ok(mid.exp2())? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a.exp2(), b.exp2()))
}

/// Number of strict sign changes of `f` along `grid`, skipping exact zeros.
pub fn count_sign_changes<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &x in grid {
        let v = f(x);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Outcome of scanning a condition `g(x) < 0` upward along a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scan {
    /// The condition already fails at the first grid point.
    ViolatedAtFloor,
    /// The last passing and first failing grid points.
    Crossing { lo: f64, hi: f64 },
    /// The condition holds on the whole grid.
    Clear,
}

/// Scans `grid` for the first point where `g ≥ 0`.
pub fn first_violation<G: FnMut(f64) -> Result<f64>>(mut g: G, grid: &[f64]) -> Result<Scan> {
    let mut prev = None;
    for &x in grid {
        if g(x)? >= 0.0 {
            return Ok(match prev {
                None => Scan::ViolatedAtFloor,
                Some(lo) => Scan::Crossing { lo, hi: x },
            });
        }
        prev = Some(x);
    }
    Ok(Scan::Clear)
}

/// Scans `grid` for the first point where `g < 0`, returning it with its predecessor.
pub fn first_pass<G: FnMut(f64) -> Result<f64>>(mut g: G, grid: &[f64]) -> Result<Option<(Option<f64>, f64)>> {
    let mut prev = None;
    for &x in grid {
        if g(x)? < 0.0 {
            return Ok(Some((prev, x)));
        }
        prev = Some(x);
    }
    Ok(None)
}

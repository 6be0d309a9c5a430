//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's numeric code: binomials are exact products,
//! maximizations are brute-force grids refined by compass search, roots come from
//! plain bisection.
#![allow(dead_code)]

use std::sync::Arc;

use graphcode::{make_local_code, GraphCode, LocalCodeKind, RegularHypergraph};

pub fn graph_code(kind: LocalCodeKind, l: usize, m: usize, seed: u64) -> GraphCode {
    let local = Arc::new(make_local_code(&kind).unwrap());
    GraphCode::new(RegularHypergraph::sample(l, m, local.n(), seed).unwrap(), local).unwrap()
}

pub fn h(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `h(z) + Σ z_i log₂ C(n, i)`.
pub fn g(z: &[f64]) -> f64 {
    let n = z.len() - 1;
    z.iter()
        .enumerate()
        .map(|(i, &p)| if p > 0.0 { p * (binom(n, i).log2() - p.log2()) } else { 0.0 })
        .sum()
}

/// Maximizes `g` over a slice of the simplex described by free coordinates `u`.
///
/// `complete(u)` returns the full profile or `None` if it leaves the simplex. The
/// free coordinates are first swept on a grid of spacing `step` over `[0, caps[j]]`,
/// then the best grid point is polished by compass search.
pub fn slice_max<F: Fn(&[f64]) -> Option<Vec<f64>>>(complete: F, caps: &[f64], step: f64) -> f64 {
    let dim = caps.len();
    let mut u = vec![0.0; dim];
    let mut best = (f64::NEG_INFINITY, u.clone());
    sweep(&complete, caps, step, 0, &mut u, &mut best);
    let (mut val, mut x) = best;
    assert!(val.is_finite(), "grid found no feasible point");
    let mut s = step;
    while s > 1e-12 {
        let mut moved = false;
        for j in 0..dim {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[j] += dir * s;
                if y[j] < 0.0 {
                    continue;
                }
                if let Some(z) = complete(&y) {
                    let v = g(&z);
                    if v > val {
                        val = v;
                        x = y;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            s *= 0.5;
        }
    }
    val
}

fn sweep<F: Fn(&[f64]) -> Option<Vec<f64>>>(
    complete: &F,
    caps: &[f64],
    step: f64,
    j: usize,
    u: &mut Vec<f64>,
    best: &mut (f64, Vec<f64>),
) {
    if j == caps.len() {
        if let Some(z) = complete(u) {
            let v = g(&z);
            if v > best.0 {
                *best = (v, u.clone());
            }
        }
        return;
    }
    let mut k = 0usize;
    loop {
        let x = k as f64 * step;
        if x > caps[j] + 1e-12 {
            break;
        }
        u[j] = x;
        sweep(complete, caps, step, j + 1, u, best);
        k += 1;
    }
    u[j] = 0.0;
}

fn valid(z: Vec<f64>) -> Option<Vec<f64>> {
    z.iter().all(|&p| p >= -1e-15).then(|| z.into_iter().map(|p| p.max(0.0)).collect())
}

/// Maximum of `g` over `{Σ i z_i = σn, Σ_{i>t} z_i = σ}`.
pub fn bipartite_oracle(n: usize, t: usize, sigma: f64, step: f64) -> f64 {
    assert_eq!(t, 2, "oracle parametrization written for t = 2");
    // Free: z_2 and z_3..z_{n-1}; z_n closes the tail mass, z_1 the moment, z_0 the sum.
    let complete = |u: &[f64]| -> Option<Vec<f64>> {
        let z2 = u[0];
        let mid = &u[1..];
        let mut z = vec![0.0; n + 1];
        z[2] = z2;
        for (k, &v) in mid.iter().enumerate() {
            z[3 + k] = v;
        }
        z[n] = sigma - mid.iter().sum::<f64>();
        let tail_moment: f64 = (3..=n).map(|i| i as f64 * z[i]).sum();
        z[1] = sigma * n as f64 - tail_moment - 2.0 * z2;
        z[0] = 1.0 - sigma - z[1] - z[2];
        valid(z)
    };
    let mut caps = vec![sigma * n as f64 / 2.0];
    caps.extend(std::iter::repeat_n(sigma, n - 3));
    slice_max(complete, &caps, step)
}

/// Maximum of `g` over `{Σ i z_i = γn, z_1 = Σ_{i≥d0−1} z_i}` (radius 1).
pub fn tilde_oracle(n: usize, d0: usize, gamma: f64, step: f64) -> f64 {
    assert!(d0 == 3 || d0 == 4, "oracle parametrization written for d0 in {{3, 4}}");
    let lo = d0 - 1;
    let target = gamma * n as f64;
    // Free: z_lo..z_n; z_1 is their mass, z_2 (when d0 = 4) closes the moment.
    let complete = |u: &[f64]| -> Option<Vec<f64>> {
        let mut z = vec![0.0; n + 1];
        for (k, &v) in u.iter().enumerate() {
            z[lo + k] = v;
        }
        let mass: f64 = u.iter().sum();
        let moment: f64 = (lo..=n).map(|i| i as f64 * z[i]).sum();
        z[1] = mass;
        if d0 == 4 {
            z[2] = (target - mass - moment) / 2.0;
        } else if (target - mass - moment).abs() > 1e-12 {
            return None;
        }
        z[0] = 1.0 - z[1..].iter().sum::<f64>();
        valid(z)
    };
    if d0 == 3 {
        // The moment equation pins z_2; parametrize by the rest.
        let complete3 = |u: &[f64]| -> Option<Vec<f64>> {
            let rest: f64 = u.iter().enumerate().map(|(k, &v)| (k as f64 + 4.0) * v).sum();
            let z2 = (target - rest) / 3.0;
            if z2 < 0.0 {
                return None;
            }
            let mut full = vec![z2];
            full.extend_from_slice(u);
            complete(&full)
        };
        let caps: Vec<f64> = (3..=n).map(|i| target / (i + 1) as f64).collect();
        slice_max(complete3, &caps, step)
    } else {
        let caps: Vec<f64> = (lo..=n).map(|i| target / (i + 1) as f64).collect();
        slice_max(complete, &caps, step)
    }
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

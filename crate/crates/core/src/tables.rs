//! Threshold tables for standard parameter sets, as CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thresholds::{delta_asymptotic, delta_bound, gamma0_asymptotic, gamma0_hypergraph, sigma0_bipartite, EpsMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    /// `σ₀` for the Golay and double-error-correcting BCH local codes.
    Example1,
    /// `γ₀` and `δ` for Hamming local codes of length 511 and several `l`.
    Example2N511,
    /// `γ₀` and `δ` for Hamming local codes at overall rate about one half.
    RateHalf,
    /// Large-`n` `γ₀` and the asymptotic distance estimate.
    Examples34,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [
        TableKind::Example1,
        TableKind::Example2N511,
        TableKind::RateHalf,
        TableKind::Examples34,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Example1 => "example1",
            TableKind::Example2N511 => "example2_n511",
            TableKind::RateHalf => "rate_half",
            TableKind::Examples34 => "examples34",
        }
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown table `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Real(f64),
    /// A rate, printed with four decimals in CSV.
    Rate(f64),
    Text(&'static str),
    /// The solver for this cell failed; see `Table::errors`.
    Failed,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.6e}"),
            Cell::Rate(v) => format!("{v:.4}"),
            Cell::Text(s) => s.to_string(),
            Cell::Failed => "nan".to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v) | Cell::Rate(v) => Some(v),
            Cell::Text(_) | Cell::Failed => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub errors: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).expect("writing to a String cannot fail");
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn cell(r: Result<f64>, errors: &mut Vec<String>, what: String) -> Cell {
    match r {
        Ok(v) => Cell::Real(v),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            Cell::Failed
        }
    }
}

/// Hamming local codes of length `n = 2^r − 1` in `l` parts.
fn hamming_rows(params: &[(usize, usize)]) -> (Vec<Vec<Cell>>, Vec<String>) {
    let computed: Vec<_> = params
        .par_iter()
        .map(|&(n, l)| {
            let g = gamma0_hypergraph(n, 1, 3, l).map(|r| r.value);
            let d = delta_bound(n, 3, l).map(|r| r.value);
            (n, l, g, d)
        })
        .collect();
    let mut errors = Vec::new();
    let rows = computed
        .into_iter()
        .map(|(n, l, g, d)| {
            let r = (n + 1).trailing_zeros() as f64;
            vec![
                Cell::Int(n as u64),
                Cell::Int(l as u64),
                Cell::Int(1),
                Cell::Int(3),
                Cell::Rate(1.0 - l as f64 * r / n as f64),
                cell(g, &mut errors, format!("gamma0 n={n} l={l}")),
                cell(d, &mut errors, format!("delta n={n} l={l}")),
            ]
        })
        .collect();
    (rows, errors)
}

pub const EXAMPLE2_L: [usize; 7] = [17, 23, 28, 34, 40, 45, 51];
pub const RATE_HALF: [(usize, usize); 4] = [(127, 9), (255, 16), (511, 28), (1023, 51)];

/// Computes a table.
pub fn build_table(kind: TableKind) -> Table {
    let name = kind.name();
    match kind {
        TableKind::Example1 => {
            let mut errors = Vec::new();
            let rows = [("golay23", 23usize, 3usize, 7usize), ("bch31", 31, 2, 5)]
                .into_iter()
                .map(|(code, n, t, d0)| {
                    let s = sigma0_bipartite(n, t).map(|r| r.value);
                    let frac = s.as_ref().ok().map(|s| s * t as f64 / n as f64);
                    vec![
                        Cell::Text(code),
                        Cell::Int(n as u64),
                        Cell::Int(t as u64),
                        Cell::Int(d0 as u64),
                        cell(s, &mut errors, format!("sigma0 n={n} t={t}")),
                        frac.map_or(Cell::Failed, Cell::Real),
                    ]
                })
                .collect();
            Table {
                name,
                columns: vec!["code", "n", "t", "d0", "sigma0", "fraction"],
                rows,
                errors,
            }
        }
        TableKind::Example2N511 | TableKind::RateHalf => {
            let params: Vec<(usize, usize)> = if kind == TableKind::RateHalf {
                RATE_HALF.to_vec()
            } else {
                EXAMPLE2_L.iter().map(|&l| (511, l)).collect()
            };
            let (rows, errors) = hamming_rows(&params);
            Table {
                name,
                columns: vec!["n", "l", "t", "d0", "rate_lower", "gamma0", "delta"],
                rows,
                errors,
            }
        }
        TableKind::Examples34 => {
            let mut errors = Vec::new();
            // Last field: the distance estimate published for these parameters by a
            // different bound. Shown beside ours, not compared.
            let rows = [(3usize, 0.05f64, 0.0112f64), (10, 0.01, 0.00599)]
                .into_iter()
                .map(|(l, d0, quoted)| {
                    let g = gamma0_asymptotic(l, d0, None, EpsMode::Zero);
                    let tau = g.as_ref().ok().map(|r| r.root["tau"]);
                    vec![
                        Cell::Int(l as u64),
                        Cell::Real(d0),
                        tau.map_or(Cell::Failed, Cell::Real),
                        cell(g.map(|r| r.value), &mut errors, format!("gamma0 l={l} delta0={d0}")),
                        cell(
                            delta_asymptotic(l, d0).map(|r| r.value),
                            &mut errors,
                            format!("delta l={l} delta0={d0}"),
                        ),
                        Cell::Real(quoted),
                    ]
                })
                .collect();
            Table {
                name,
                columns: vec!["l", "delta0", "tau", "gamma0", "delta", "delta_reference"],
                rows,
                errors,
            }
        }
    }
}

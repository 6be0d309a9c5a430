use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_code::GraphCode;
use crate::topology::EdgeSet;

/// Good and bad vertices of one part with respect to an error support.
///
/// A good vertex sees at most `t` error edges and is cleaned by one local decoding; a
/// bad vertex sees at least `d0 − t` and may add up to `t` new errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodBadSets {
    pub part: usize,
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
    /// `|E(G)|`: error edges incident to good vertices.
    pub errors_on_good: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionCheck {
    pub holds: bool,
    /// First part with `|E(G_i)| ≥ t·|B_i| + εN`.
    pub witness: Option<usize>,
    /// `|E(G_i)| − t·|B_i| − εN` for every part.
    pub margins: Vec<f64>,
}

pub fn good_bad_sets(code: &GraphCode, errors: &EdgeSet, part: usize, t: usize) -> Result<GoodBadSets> {
    let topo = code.topology();
    let d0 = code.local().d0();
    if t >= d0 {
        return Err(Error::invalid(format!("need d0 - t >= 1 (t = {t}, d0 = {d0})")));
    }
    if part >= topo.l() {
        return Err(Error::invalid(format!("part {part} out of range 0..{}", topo.l())));
    }
    if let Some(&e) = errors.ids().last() {
        if e >= code.len() {
            return Err(Error::invalid(format!("edge {e} out of range")));
        }
    }
    let mut hits = vec![0usize; topo.m()];
    for &e in errors.ids() {
        hits[topo.vertex_of(part, e)] += 1;
    }
    let good: Vec<usize> = (0..topo.m()).filter(|&v| hits[v] <= t).collect();
    let bad = (0..topo.m()).filter(|&v| hits[v] >= d0 - t).collect();
    let errors_on_good = good.iter().map(|&v| hits[v]).sum();
    Ok(GoodBadSets {
        part,
        good,
        bad,
        errors_on_good,
    })
}

/// Whether some part satisfies `|E(G_i)| ≥ t·|B_i| + εN`.
pub fn reduction_check(code: &GraphCode, errors: &EdgeSet, t: usize, eps: f64) -> Result<ReductionCheck> {
    let slack = eps * code.len() as f64;
    let mut margins = Vec::with_capacity(code.topology().l());
    for part in 0..code.topology().l() {
        let gb = good_bad_sets(code, errors, part, t)?;
        margins.push(gb.errors_on_good as f64 - (t * gb.bad.len()) as f64 - slack);
    }
    let witness = margins.iter().position(|&m| m >= 0.0);
    Ok(ReductionCheck {
        holds: witness.is_some(),
        witness,
        margins,
    })
}

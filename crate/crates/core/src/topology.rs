//! Random `n`-regular `l`-partite hypergraphs in the permutation model.
//!
//! Edges are the integers `0..N` with `N = n·m`. Each part carries an attachment
//! permutation `π`: edge `e` meets that part at vertex `π(e) / n`, in local slot
//! `π(e) mod n`. The slot order is the coordinate order of the local codeword at the
//! vertex. Sampled structures use the identity on the first part and independent
//! uniform permutations on the others; `l = 2` is the bipartite graph case.
//!
//! Parts and vertices are indexed from zero throughout.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularHypergraph {
    l: usize,
    m: usize,
    n: usize,
    seed: u64,
    /// `attach[p][e]`: slot of edge `e` in part `p`
    attach: Vec<Vec<u32>>,
    /// `slots[p][s]`: edge occupying slot `s` of part `p`
    slots: Vec<Vec<u32>>,
}

/// A set of edge ids, sorted and unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    ids: Vec<usize>,
}

impl EdgeSet {
    pub fn new(mut ids: Vec<usize>, n_edges: usize) -> Result<Self> {
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&e| e >= n_edges) {
            return Err(Error::invalid(format!("edge id {bad} out of range 0..{n_edges}")));
        }
        Ok(EdgeSet { ids })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.ids.binary_search(&e).is_ok()
    }
}

/// Degree counts toward a vertex subset and the set `T_r(S)` of vertices with more
/// than `r` edges into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDegreeStats {
    pub degrees: Vec<usize>,
    pub t_r: Vec<usize>,
}

impl RegularHypergraph {
    /// Samples `l − 1` independent Fisher–Yates permutations from `seed`.
    pub fn sample(l: usize, m: usize, n: usize, seed: u64) -> Result<Self> {
        if l < 2 || m < 1 || n < 1 {
            return Err(Error::invalid(format!(
                "need l >= 2, m >= 1, n >= 1 (got l = {l}, m = {m}, n = {n})"
            )));
        }
        let big_n = n
            .checked_mul(m)
            .filter(|&v| v <= u32::MAX as usize)
            .ok_or_else(|| Error::SizeLimit(format!("n·m = {n}·{m} does not fit edge ids")))?;
        let mut rng = SplitMix64::new(seed);
        let mut attach = Vec::with_capacity(l);
        attach.push((0..big_n as u32).collect::<Vec<_>>());
        for _ in 1..l {
            attach.push(rng.permutation(big_n));
        }
        Ok(Self::from_attachments(l, m, n, seed, attach))
    }

    /// Builds a structure from the `l − 1` non-identity permutations, part 0 being the
    /// identity.
    pub fn from_permutations(m: usize, n: usize, seed: u64, perms: Vec<Vec<u32>>) -> Result<Self> {
        if perms.is_empty() || m == 0 || n == 0 {
            return Err(Error::invalid("need at least one permutation and m, n >= 1"));
        }
        let big_n = n * m;
        let mut attach = vec![(0..big_n as u32).collect::<Vec<_>>()];
        for (i, p) in perms.into_iter().enumerate() {
            check_bijection(&p, big_n).map_err(|e| Error::invalid(format!("permutation {}: {e}", i + 1)))?;
            attach.push(p);
        }
        Ok(Self::from_attachments(attach.len(), m, n, seed, attach))
    }

    fn from_attachments(l: usize, m: usize, n: usize, seed: u64, attach: Vec<Vec<u32>>) -> Self {
        let slots = attach
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (e, &s) in p.iter().enumerate() {
                    inv[s as usize] = e as u32;
                }
                inv
            })
            .collect();
        RegularHypergraph {
            l,
            m,
            n,
            seed,
            attach,
            slots,
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges `N = n·m`.
    pub fn n_edges(&self) -> usize {
        self.n * self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Attachment permutation of part `p`.
    pub fn attachment(&self, part: usize) -> &[u32] {
        &self.attach[part]
    }

    /// The `l − 1` permutations of parts `1..l`.
    pub fn perms(&self) -> &[Vec<u32>] {
        &self.attach[1..]
    }

    /// Whether part 0 carries the identity (always true for sampled structures).
    pub fn is_canonical(&self) -> bool {
        self.attach[0].iter().enumerate().all(|(e, &s)| e as u32 == s)
    }

    /// The vertex of `part` that edge `e` meets.
    #[inline]
    pub fn vertex_of(&self, part: usize, e: usize) -> usize {
        self.attach[part][e] as usize / self.n
    }

    /// Edges at `vertex` of `part`, in local slot order.
    pub fn incident_edges(&self, part: usize, vertex: usize) -> Result<&[u32]> {
        self.check_vertex(part, vertex)?;
        Ok(self.incident(part, vertex))
    }

    #[inline]
    pub(crate) fn incident(&self, part: usize, vertex: usize) -> &[u32] {
        &self.slots[part][vertex * self.n..(vertex + 1) * self.n]
    }

    fn check_vertex(&self, part: usize, vertex: usize) -> Result<()> {
        if part >= self.l {
            return Err(Error::invalid(format!("part {part} out of range 0..{}", self.l)));
        }
        if vertex >= self.m {
            return Err(Error::invalid(format!("vertex {vertex} out of range 0..{}", self.m)));
        }
        Ok(())
    }

    /// The bipartite graph left by keeping parts `i` and `j`, on the same edge ids.
    ///
    /// Part 0 of the result is part `i` of `self` and part 1 is part `j`. The result is
    /// canonical when `i = 0`.
    pub fn bipartite_restriction(&self, i: usize, j: usize) -> Result<RegularHypergraph> {
        if i == j {
            return Err(Error::invalid("restriction needs two distinct parts"));
        }
        if i >= self.l || j >= self.l {
            return Err(Error::invalid(format!("parts must be in 0..{}", self.l)));
        }
        Ok(RegularHypergraph {
            l: 2,
            m: self.m,
            n: self.n,
            seed: self.seed,
            attach: vec![self.attach[i].clone(), self.attach[j].clone()],
            slots: vec![self.slots[i].clone(), self.slots[j].clone()],
        })
    }

    /// `deg_S(v)` for every vertex `v` of `part`, where `S` is a set of vertices of
    /// `s_part`, together with `T_r(S) = {v : deg_S(v) ≥ r + 1}`.
    pub fn s_degree_stats(&self, part: usize, s_part: usize, s: &[usize], r: usize) -> Result<SDegreeStats> {
        if part == s_part {
            return Err(Error::invalid("S must come from a different part"));
        }
        if r >= self.n {
            return Err(Error::invalid(format!("r = {r} must be below the degree {}", self.n)));
        }
        self.check_vertex(part, 0)?;
        let mut degrees = vec![0usize; self.m];
        for &v in s {
            for &e in self.incident_edges(s_part, v)? {
                degrees[self.vertex_of(part, e as usize)] += 1;
            }
        }
        let t_r = (0..self.m).filter(|&v| degrees[v] > r).collect();
        Ok(SDegreeStats { degrees, t_r })
    }

    /// Text dump: a header `l m n seed` and one line per permutation of parts `1..l`.
    pub fn dump(&self) -> Result<String> {
        if !self.is_canonical() {
            return Err(Error::invalid("only structures with an identity first part can be dumped"));
        }
        let mut out = format!("{} {} {} {}\n", self.l, self.m, self.n, self.seed);
        for p in self.perms() {
            let mut first = true;
            for v in p {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").expect("writing to a String cannot fail");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| Error::MalformedFile("empty dump".into()))?
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|e| Error::MalformedFile(format!("header: {e}"))))
            .collect::<Result<_>>()?;
        let [l, m, n, seed] = header[..] else {
            return Err(Error::MalformedFile("header must be `l m n seed`".into()));
        };
        let (l, m, n) = (l as usize, m as usize, n as usize);
        let perms: Vec<Vec<u32>> = lines
            .map(|line| {
                line.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|e| Error::MalformedFile(format!("permutation: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if l < 2 || perms.len() != l - 1 {
            return Err(Error::MalformedFile(format!(
                "expected {} permutation lines, found {}",
                l.saturating_sub(1),
                perms.len()
            )));
        }
        Self::from_permutations(m, n, seed, perms)
    }
}

fn check_bijection(p: &[u32], len: usize) -> std::result::Result<(), String> {
    if p.len() != len {
        return Err(format!("length {} != {len}", p.len()));
    }
    let mut seen = vec![false; len];
    for &v in p {
        let v = v as usize;
        if v >= len || seen[v] {
            return Err(format!("value {v} repeated or out of range"));
        }
        seen[v] = true;
    }
    Ok(())
}

//! The global code: every edge labeling whose projection at each vertex of every
//! part is a codeword of the local code.

use std::sync::Arc;

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::local_code::BinaryLinearCode;
use crate::rng::SplitMix64;
use crate::topology::RegularHypergraph;

/// A word of the global code's ambient space, indexed by edge id.
pub type GlobalWord = BitVec;

/// Largest length for which dense GF(2) elimination over the global parity rows is
/// attempted.
pub const MAX_DENSE_LENGTH: usize = 10_000;

/// Largest dimension for which all codewords are enumerated.
pub const MAX_ENUMERATION_DIM: usize = 22;

#[derive(Clone, Debug)]
pub struct GraphCode {
    topology: RegularHypergraph,
    local: Arc<BinaryLinearCode>,
}

impl GraphCode {
    pub fn new(topology: RegularHypergraph, local: Arc<BinaryLinearCode>) -> Result<Self> {
        if topology.n() != local.n() {
            return Err(Error::invalid(format!(
                "local code length {} does not match the degree {}",
                local.n(),
                topology.n()
            )));
        }
        Ok(GraphCode { topology, local })
    }

    pub fn topology(&self) -> &RegularHypergraph {
        &self.topology
    }

    pub fn local(&self) -> &BinaryLinearCode {
        &self.local
    }

    pub fn local_arc(&self) -> &Arc<BinaryLinearCode> {
        &self.local
    }

    /// Code length `N`.
    pub fn len(&self) -> usize {
        self.topology.n_edges()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `l·R₀ − (l − 1)`, the guaranteed lower bound on the rate.
    pub fn rate_lower_bound(&self) -> f64 {
        let l = self.topology.l() as f64;
        l * self.local.rate() - (l - 1.0)
    }

    /// Same code on the bipartite graph formed by parts `i` and `j`.
    pub fn restrict(&self, i: usize, j: usize) -> Result<GraphCode> {
        Ok(GraphCode {
            topology: self.topology.bipartite_restriction(i, j)?,
            local: Arc::clone(&self.local),
        })
    }

    /// `x(v)`: the bits of `x` on the edges at `vertex` of `part`, in slot order.
    pub fn project(&self, x: &GlobalWord, part: usize, vertex: usize) -> BitVec {
        let mut out = BitVec::zeros(self.local.n());
        self.project_into(x, part, vertex, &mut out);
        out
    }

    pub(crate) fn project_into(&self, x: &GlobalWord, part: usize, vertex: usize, out: &mut BitVec) {
        for (slot, &e) in self.topology.incident(part, vertex).iter().enumerate() {
            out.set(slot, x.get(e as usize));
        }
    }

    /// Whether every vertex of `part` sees a local codeword.
    pub fn part_satisfied(&self, x: &GlobalWord, part: usize) -> bool {
        let mut buf = BitVec::zeros(self.local.n());
        (0..self.topology.m()).all(|v| {
            self.project_into(x, part, v, &mut buf);
            self.local.is_codeword(&buf)
        })
    }

    pub fn is_codeword(&self, x: &GlobalWord) -> bool {
        x.len() == self.len() && (0..self.topology.l()).all(|p| self.part_satisfied(x, p))
    }

    /// Every local parity row lifted to length `N`, one block per vertex of each part.
    pub fn parity_matrix(&self) -> BitMatrix {
        let big_n = self.len();
        let mut m = BitMatrix::new(big_n);
        for p in 0..self.topology.l() {
            for v in 0..self.topology.m() {
                let edges = self.topology.incident(p, v);
                for h in self.local.parity_check().rows() {
                    let mut row = BitVec::zeros(big_n);
                    for slot in h.iter_ones() {
                        // Parallel edges never share a vertex slot, so XOR equals set here.
                        row.flip(edges[slot] as usize);
                    }
                    m.push_row(row);
                }
            }
        }
        m
    }

    fn check_dense(&self) -> Result<()> {
        if self.len() > MAX_DENSE_LENGTH {
            Err(Error::SizeLimit(format!(
                "N = {} exceeds {MAX_DENSE_LENGTH} for dense elimination",
                self.len()
            )))
        } else {
            Ok(())
        }
    }

    pub fn dimension(&self) -> Result<usize> {
        self.check_dense()?;
        Ok(self.len() - self.parity_matrix().rank())
    }

    pub fn nullspace_basis(&self) -> Result<Vec<GlobalWord>> {
        self.check_dense()?;
        Ok(self.parity_matrix().nullspace())
    }

    /// All `2^dim` codewords, zero first, in Gray-code order.
    pub fn enumerate_codewords(&self) -> Result<Vec<GlobalWord>> {
        let basis = self.nullspace_basis()?;
        if basis.len() > MAX_ENUMERATION_DIM {
            return Err(Error::SizeLimit(format!(
                "dimension {} exceeds {MAX_ENUMERATION_DIM} for enumeration",
                basis.len()
            )));
        }
        let mut word = BitVec::zeros(self.len());
        let mut out = Vec::with_capacity(1 << basis.len());
        out.push(word.clone());
        for i in 1u64..(1u64 << basis.len()) {
            word.xor_assign(&basis[i.trailing_zeros() as usize]);
            out.push(word.clone());
        }
        Ok(out)
    }

    /// Minimum nonzero weight, or `None` for the zero code.
    pub fn min_distance_small(&self) -> Result<Option<usize>> {
        let basis = self.nullspace_basis()?;
        if basis.len() > MAX_ENUMERATION_DIM {
            return Err(Error::SizeLimit(format!(
                "dimension {} exceeds {MAX_ENUMERATION_DIM} for enumeration",
                basis.len()
            )));
        }
        let mut word = BitVec::zeros(self.len());
        let mut best = None;
        for i in 1u64..(1u64 << basis.len()) {
            word.xor_assign(&basis[i.trailing_zeros() as usize]);
            let w = word.weight();
            best = Some(best.map_or(w, |b: usize| b.min(w)));
        }
        Ok(best)
    }

    /// Uniform random codeword: each basis vector is included with probability ½.
    pub fn random_codeword(&self, seed: u64) -> Result<GlobalWord> {
        let basis = self.nullspace_basis()?;
        let mut rng = SplitMix64::new(seed);
        let mut word = BitVec::zeros(self.len());
        for b in &basis {
            if rng.next_bool() {
                word.xor_assign(b);
            }
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_code::{make_local_code, LocalCodeKind};

    fn code(kind: LocalCodeKind, l: usize, m: usize, seed: u64) -> GraphCode {
        let local = Arc::new(make_local_code(&kind).unwrap());
        let topo = RegularHypergraph::sample(l, m, local.n(), seed).unwrap();
        GraphCode::new(topo, local).unwrap()
    }

    #[test]
    fn degree_mismatch_rejected() {
        let local = Arc::new(make_local_code(&LocalCodeKind::Hamming(3)).unwrap());
        let topo = RegularHypergraph::sample(2, 3, 5, 0).unwrap();
        assert!(GraphCode::new(topo, local).is_err());
    }

    #[test]
    fn zero_word_and_single_flip() {
        let c = code(LocalCodeKind::Hamming(3), 2, 4, 3);
        let mut x = BitVec::zeros(c.len());
        assert!(c.is_codeword(&x));
        x.flip(5);
        assert!(!c.is_codeword(&x));
        assert!(!c.is_codeword(&BitVec::zeros(c.len() + 1)));
    }

    #[test]
    fn repetition_on_parallel_edges_has_dimension_one() {
        let c = code(LocalCodeKind::Repetition(3), 2, 1, 0);
        assert_eq!(c.dimension().unwrap(), 1);
        assert!(c.is_codeword(&BitVec::ones(3)));
        assert_eq!(c.min_distance_small().unwrap(), Some(3));
    }

    #[test]
    fn enumeration_count_matches_dimension() {
        let c = code(LocalCodeKind::Hamming(3), 2, 2, 11);
        let dim = c.dimension().unwrap();
        let words = c.enumerate_codewords().unwrap();
        assert_eq!(words.len(), 1 << dim);
        assert!(words.iter().all(|w| c.is_codeword(w)));
        let min = words.iter().skip(1).map(BitVec::weight).min();
        assert_eq!(c.min_distance_small().unwrap(), min);
    }

    #[test]
    fn random_codeword_is_deterministic() {
        let c = code(LocalCodeKind::Hamming(3), 2, 3, 5);
        let a = c.random_codeword(77).unwrap();
        assert_eq!(a, c.random_codeword(77).unwrap());
        assert!(c.is_codeword(&a));
    }

    #[test]
    fn size_limit_enforced() {
        let c = code(LocalCodeKind::Golay23, 2, 500, 1);
        assert!(matches!(c.dimension(), Err(Error::SizeLimit(_))));
    }
}

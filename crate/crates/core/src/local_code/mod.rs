//! Binary linear block codes used as the constraint at every vertex.
//!
//! A [`BinaryLinearCode`] carries both a generator and a parity-check matrix, its
//! verified minimum distance, and a coset-leader table for every syndrome whose
//! minimum-weight error pattern has weight at most `t_max = ⌊(d0 − 1)/2⌋`. The
//! bounded-distance decoder [`BinaryLinearCode::bounded_distance_decode`] is a
//! lookup into that table restricted to the caller's radius.

mod construct;
mod file;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub use file::{parse_parity_check, ParityCheckFile};

/// Largest dimension for which the minimum distance is found by enumerating codewords.
pub const MAX_EXHAUSTIVE_K: usize = 22;

/// Cap on the number of coset-leader entries built at construction.
const MAX_LEADER_TABLE: u64 = 1 << 22;

/// Random codewords drawn to cross-check a design distance when `k` is too large
/// for enumeration.
const DESIGN_DISTANCE_SAMPLES: usize = 4096;

/// Which local code to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalCodeKind {
    /// Hamming code of length `2^r − 1`.
    Hamming(u32),
    /// The binary Golay code `[23, 12, 7]`.
    Golay23,
    /// The narrow-sense BCH code `[31, 21, 5]`.
    Bch31_21,
    /// Single parity-check code of length `n`.
    Spc(usize),
    /// Repetition code of length `n`.
    Repetition(usize),
    /// Parity-check matrix read from a file (see [`parse_parity_check`]).
    FromFile(PathBuf),
}

impl FromStr for LocalCodeKind {
    type Err = Error;

    /// Accepts `hamming:R`, `golay23`, `bch31` (or `bch_31_21`), `spc:N`,
    /// `repetition:N` and `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<usize> {
            arg.ok_or_else(|| Error::invalid(format!("{what} needs a parameter, e.g. {what}:7")))?
                .parse::<usize>()
                .map_err(|e| Error::invalid(format!("bad {what} parameter: {e}")))
        };
        match name.to_ascii_lowercase().as_str() {
            "hamming" => Ok(LocalCodeKind::Hamming(num("hamming")? as u32)),
            "golay23" | "golay" => Ok(LocalCodeKind::Golay23),
            "bch31" | "bch_31_21" | "bch31_21" => Ok(LocalCodeKind::Bch31_21),
            "spc" => Ok(LocalCodeKind::Spc(num("spc")?)),
            "repetition" | "rep" => Ok(LocalCodeKind::Repetition(num("repetition")?)),
            "file" => Ok(LocalCodeKind::FromFile(PathBuf::from(
                arg.ok_or_else(|| Error::invalid("file needs a path, e.g. file:code.txt"))?,
            ))),
            other => Err(Error::invalid(format!("unknown local code kind '{other}'"))),
        }
    }
}

impl fmt::Display for LocalCodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalCodeKind::Hamming(r) => write!(f, "hamming:{r}"),
            LocalCodeKind::Golay23 => f.write_str("golay23"),
            LocalCodeKind::Bch31_21 => f.write_str("bch31"),
            LocalCodeKind::Spc(n) => write!(f, "spc:{n}"),
            LocalCodeKind::Repetition(n) => write!(f, "repetition:{n}"),
            LocalCodeKind::FromFile(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// How the stored minimum distance was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    /// Minimum weight over all `2^k` codewords.
    Exhaustive,
    /// Design value, not contradicted by random codeword samples.
    DesignSampled,
    /// Smallest weight of a zero-syndrome error pattern, found by enumeration.
    LowWeightSearch,
}

#[derive(Clone, Debug)]
pub struct BinaryLinearCode {
    name: String,
    n: usize,
    k: usize,
    d0: usize,
    t_max: usize,
    distance_source: DistanceSource,
    generator: BitMatrix,
    parity_check: BitMatrix,
    /// syndrome → error positions of the unique minimum-weight pattern, weight ≤ t_max
    leaders: HashMap<BitVec, Vec<u32>>,
}

/// Builds a local code of the requested kind with all invariants verified.
pub fn make_local_code(kind: &LocalCodeKind) -> Result<BinaryLinearCode> {
    match kind {
        LocalCodeKind::Hamming(r) => construct::hamming(*r),
        LocalCodeKind::Golay23 => construct::golay23(),
        LocalCodeKind::Bch31_21 => construct::bch_31_21(),
        LocalCodeKind::Spc(n) => construct::spc(*n),
        LocalCodeKind::Repetition(n) => construct::repetition(*n),
        LocalCodeKind::FromFile(path) => {
            let text = std::fs::read_to_string(path)?;
            let parsed = parse_parity_check(&text)?;
            BinaryLinearCode::from_parity_check(
                format!("file:{}", path.display()),
                parsed.n,
                parsed.rows,
                None,
            )
        }
    }
}

impl BinaryLinearCode {
    /// Code defined by the rows of `parity_check` (which must be independent).
    ///
    /// `design_d0` is required only when `k > 22` and no low-weight codeword can be
    /// found cheaply.
    pub fn from_parity_check(
        name: impl Into<String>,
        n: usize,
        parity_check: BitMatrix,
        design_d0: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("code length must be positive"));
        }
        if parity_check.n_cols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: parity_check.n_cols(),
            });
        }
        let rank = parity_check.rank();
        if rank != parity_check.n_rows() {
            return Err(Error::RankDeficient {
                what: "parity-check matrix",
                rank,
                expected: parity_check.n_rows(),
            });
        }
        // The nullspace basis is systematic on the free columns, hence full rank.
        let generator = BitMatrix::from_rows(n, parity_check.nullspace());
        Self::assemble(name.into(), n, generator, parity_check, design_d0)
    }

    /// Code spanned by the rows of `generator` (which must be independent).
    pub fn from_generator(
        name: impl Into<String>,
        n: usize,
        generator: BitMatrix,
        design_d0: Option<usize>,
    ) -> Result<Self> {
        if generator.n_cols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: generator.n_cols(),
            });
        }
        let rank = generator.rank();
        if rank != generator.n_rows() {
            return Err(Error::RankDeficient {
                what: "generator matrix",
                rank,
                expected: generator.n_rows(),
            });
        }
        let parity_check = BitMatrix::from_rows(n, generator.nullspace());
        Self::assemble(name.into(), n, generator, parity_check, design_d0)
    }

    fn assemble(
        name: String,
        n: usize,
        generator: BitMatrix,
        parity_check: BitMatrix,
        design_d0: Option<usize>,
    ) -> Result<Self> {
        let k = generator.n_rows();
        if k == 0 {
            return Err(Error::invalid("zero-dimensional code has no minimum distance"));
        }
        if parity_check.n_rows() != n - k {
            return Err(Error::RankDeficient {
                what: "parity-check matrix",
                rank: parity_check.n_rows(),
                expected: n - k,
            });
        }
        if !generator.orthogonal_to(&parity_check) {
            return Err(Error::invalid("generator and parity-check matrices are not orthogonal"));
        }

        let (d0, distance_source) = if k <= MAX_EXHAUSTIVE_K {
            let found = min_weight_exhaustive(&generator);
            if let Some(declared) = design_d0 {
                if found < declared {
                    return Err(Error::DistanceContradicted { declared, found });
                }
            }
            (found, DistanceSource::Exhaustive)
        } else if let Some(declared) = design_d0 {
            let mut rng = SplitMix64::new(0x5EED_D157 ^ (n as u64) << 32 ^ k as u64);
            for _ in 0..DESIGN_DISTANCE_SAMPLES {
                let msg = BitVec::from_positions(k, (0..k).filter(|_| rng.next_bool()));
                let w = generator.combine_rows(&msg).weight();
                if w > 0 && w < declared {
                    return Err(Error::DistanceContradicted { declared, found: w });
                }
            }
            (declared, DistanceSource::DesignSampled)
        } else {
            let d = min_weight_low_weight_search(&parity_check, n, 1 << 24).ok_or_else(|| {
                Error::SizeLimit(format!(
                    "cannot certify the minimum distance of a [{n}, {k}] code without a design value"
                ))
            })?;
            (d, DistanceSource::LowWeightSearch)
        };

        let t_max = (d0 - 1) / 2;
        let table_size: u64 = (0..=t_max).map(|i| binomial_u64(n, i)).sum();
        if table_size > MAX_LEADER_TABLE {
            return Err(Error::SizeLimit(format!(
                "coset-leader table would hold {table_size} entries"
            )));
        }
        let leaders = build_leaders(&parity_check, n, t_max)?;

        Ok(BinaryLinearCode {
            name,
            n,
            k,
            d0,
            t_max,
            distance_source,
            generator,
            parity_check,
            leaders,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// `R₀ = k / n`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn distance_source(&self) -> DistanceSource {
        self.distance_source
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Number of stored coset leaders (one per correctable syndrome).
    pub fn leader_count(&self) -> usize {
        self.leaders.len()
    }

    /// Iterates `(syndrome, error pattern)` pairs of the coset-leader table.
    pub fn coset_leaders(&self) -> impl Iterator<Item = (&BitVec, BitVec)> + '_ {
        self.leaders.iter().map(move |(s, pos)| {
            (s, BitVec::from_positions(self.n, pos.iter().map(|&p| p as usize)))
        })
    }

    pub fn syndrome(&self, z: &BitVec) -> BitVec {
        self.parity_check.mul_vec(z)
    }

    pub fn is_codeword(&self, z: &BitVec) -> bool {
        z.len() == self.n && self.parity_check.rows().iter().all(|h| !h.dot(z))
    }

    pub fn encode(&self, msg: &BitVec) -> Result<BitVec> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: msg.len(),
            });
        }
        Ok(self.generator.combine_rows(msg))
    }

    /// ψ: the unique codeword within distance `t` of `z` if there is one, else `z`.
    pub fn bounded_distance_decode(&self, z: &BitVec, t: usize) -> Result<BitVec> {
        self.check_radius(t)?;
        if z.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: z.len(),
            });
        }
        let mut out = z.clone();
        self.decode_in_place(&mut out, t);
        Ok(out)
    }

    pub fn check_radius(&self, t: usize) -> Result<()> {
        if t > self.t_max {
            Err(Error::RadiusTooLarge {
                t,
                t_max: self.t_max,
            })
        } else {
            Ok(())
        }
    }

    /// In-place ψ; returns whether `z` changed. The radius must already be validated.
    pub(crate) fn decode_in_place(&self, z: &mut BitVec, t: usize) -> bool {
        debug_assert!(t <= self.t_max);
        let s = self.syndrome(z);
        if s.is_zero() {
            return false;
        }
        match self.leaders.get(&s) {
            Some(pos) if pos.len() <= t => {
                for &p in pos {
                    z.flip(p as usize);
                }
                true
            }
            _ => false,
        }
    }

    /// Minimum weight over nonzero codewords by enumeration; requires `k ≤ 22`.
    pub fn min_distance_bruteforce(&self) -> Result<usize> {
        if self.k > MAX_EXHAUSTIVE_K {
            return Err(Error::SizeLimit(format!(
                "k = {} exceeds {MAX_EXHAUSTIVE_K} for exhaustive enumeration",
                self.k
            )));
        }
        Ok(min_weight_exhaustive(&self.generator))
    }

    /// Serializes the parity-check matrix in the text format read by
    /// [`parse_parity_check`].
    pub fn to_parity_check_file(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.k);
        for row in self.parity_check.rows() {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }
}

/// Gray-code walk over all `2^k` messages.
fn min_weight_exhaustive(generator: &BitMatrix) -> usize {
    let k = generator.n_rows();
    let n = generator.n_cols();
    let mut word = BitVec::zeros(n);
    let mut best = usize::MAX;
    for i in 1u64..(1u64 << k) {
        let flip = i.trailing_zeros() as usize;
        word.xor_assign(generator.row(flip));
        best = best.min(word.weight());
    }
    best
}

/// Smallest `w` such that some weight-`w` pattern has zero syndrome, giving up once
/// `budget` patterns have been tried.
fn min_weight_low_weight_search(h: &BitMatrix, n: usize, budget: u64) -> Option<usize> {
    let columns = columns_of(h, n);
    let mut tried = 0u64;
    for w in 1..=n {
        let mut found = false;
        for_each_combination(n, w, |pos| {
            tried += 1;
            let mut acc = BitVec::zeros(h.n_rows());
            for &p in pos {
                acc.xor_assign(&columns[p]);
            }
            if acc.is_zero() {
                found = true;
            }
            !found && tried < budget
        });
        if found {
            return Some(w);
        }
        if tried >= budget {
            return None;
        }
    }
    None
}

fn columns_of(h: &BitMatrix, n: usize) -> Vec<BitVec> {
    (0..n)
        .map(|c| BitVec::from_positions(h.n_rows(), (0..h.n_rows()).filter(|&r| h.row(r).get(c))))
        .collect()
}

fn build_leaders(h: &BitMatrix, n: usize, t_max: usize) -> Result<HashMap<BitVec, Vec<u32>>> {
    let columns = columns_of(h, n);
    let mut table: HashMap<BitVec, Vec<u32>> = HashMap::new();
    let mut clash = None;
    for w in 1..=t_max {
        for_each_combination(n, w, |pos| {
            let mut s = BitVec::zeros(h.n_rows());
            for &p in pos {
                s.xor_assign(&columns[p]);
            }
            if table.contains_key(&s) || s.is_zero() {
                clash = Some(w);
                return false;
            }
            table.insert(s, pos.iter().map(|&p| p as u32).collect());
            true
        });
        if clash.is_some() {
            return Err(Error::invalid(
                "two error patterns within the correction radius share a syndrome",
            ));
        }
    }
    Ok(table)
}

/// Visits the `w`-subsets of `0..n` in lexicographic order until `f` returns false.
pub(crate) fn for_each_combination(n: usize, w: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if w > n {
        return;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..w).rev().find(|&i| idx[i] < n - w + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(n: usize) -> impl Iterator<Item = BitVec> {
        (0u64..(1 << n)).map(move |v| BitVec::from_u64(n, v))
    }

    #[test]
    fn combinations_are_complete() {
        let mut count = 0;
        let mut last: Option<Vec<usize>> = None;
        for_each_combination(6, 3, |c| {
            if let Some(prev) = &last {
                assert!(prev.as_slice() < c);
            }
            last = Some(c.to_vec());
            count += 1;
            true
        });
        assert_eq!(count, 20);
        let mut zero = 0;
        for_each_combination(4, 0, |c| {
            assert!(c.is_empty());
            zero += 1;
            true
        });
        assert_eq!(zero, 1);
    }

    #[test]
    fn hamming7_parameters() {
        let c = make_local_code(&LocalCodeKind::Hamming(3)).unwrap();
        assert_eq!((c.n(), c.k(), c.d0(), c.t_max()), (7, 4, 3, 1));
        assert_eq!(c.leader_count(), 7);
    }

    #[test]
    fn leaders_match_their_syndromes() {
        for kind in [LocalCodeKind::Hamming(4), LocalCodeKind::Golay23] {
            let c = make_local_code(&kind).unwrap();
            for (s, e) in c.coset_leaders() {
                assert_eq!(&c.syndrome(&e), s);
                assert!(e.weight() <= c.t_max());
            }
        }
    }

    #[test]
    fn encode_unit_vectors_gives_generator_rows() {
        let c = make_local_code(&LocalCodeKind::Golay23).unwrap();
        for i in 0..c.k() {
            let e = BitVec::from_positions(c.k(), [i]);
            assert_eq!(&c.encode(&e).unwrap(), c.generator().row(i));
        }
        assert!(c.encode(&BitVec::zeros(c.k())).unwrap().is_zero());
        assert!(matches!(
            c.encode(&BitVec::zeros(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn decode_rejects_radius_above_t_max() {
        let c = make_local_code(&LocalCodeKind::Hamming(3)).unwrap();
        assert!(matches!(
            c.bounded_distance_decode(&BitVec::zeros(7), 2),
            Err(Error::RadiusTooLarge { t: 2, t_max: 1 })
        ));
    }

    #[test]
    fn hamming7_weight_two_patterns_return_z_or_close_codeword() {
        let c = make_local_code(&LocalCodeKind::Hamming(3)).unwrap();
        for z in all_words(7) {
            let out = c.bounded_distance_decode(&z, 1).unwrap();
            assert!(out == z || (c.is_codeword(&out) && out.distance(&z) <= 1));
        }
    }

    #[test]
    fn radius_zero_is_identity() {
        let c = make_local_code(&LocalCodeKind::Hamming(3)).unwrap();
        for z in all_words(7) {
            assert_eq!(c.bounded_distance_decode(&z, 0).unwrap(), z);
        }
    }

    #[test]
    fn small_code_distances() {
        for n in [2, 5, 9] {
            let spc = make_local_code(&LocalCodeKind::Spc(n)).unwrap();
            assert_eq!(spc.min_distance_bruteforce().unwrap(), 2);
            let rep = make_local_code(&LocalCodeKind::Repetition(n)).unwrap();
            assert_eq!(rep.min_distance_bruteforce().unwrap(), n);
            assert_eq!(rep.t_max(), (n - 1) / 2);
        }
    }

    #[test]
    fn low_weight_search_finds_distance() {
        let c = make_local_code(&LocalCodeKind::Hamming(4)).unwrap();
        assert_eq!(min_weight_low_weight_search(c.parity_check(), c.n(), 1 << 20), Some(3));
    }

    #[test]
    fn large_hamming_uses_design_distance() {
        let c = make_local_code(&LocalCodeKind::Hamming(5)).unwrap();
        assert_eq!((c.n(), c.k(), c.d0()), (31, 26, 3));
        assert_eq!(c.distance_source(), DistanceSource::DesignSampled);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("hamming:3".parse::<LocalCodeKind>().unwrap(), LocalCodeKind::Hamming(3));
        assert_eq!("golay23".parse::<LocalCodeKind>().unwrap(), LocalCodeKind::Golay23);
        assert_eq!("bch31".parse::<LocalCodeKind>().unwrap(), LocalCodeKind::Bch31_21);
        assert_eq!("spc:4".parse::<LocalCodeKind>().unwrap(), LocalCodeKind::Spc(4));
        assert!("spc".parse::<LocalCodeKind>().is_err());
        assert!("turbo".parse::<LocalCodeKind>().is_err());
        for k in ["hamming:4", "golay23", "bch31", "spc:5", "repetition:3"] {
            let parsed: LocalCodeKind = k.parse().unwrap();
            assert_eq!(parsed.to_string(), k);
        }
    }

    #[test]
    fn contradicted_design_distance_is_rejected() {
        let c = make_local_code(&LocalCodeKind::Hamming(3)).unwrap();
        let err = BinaryLinearCode::from_generator("x", 7, c.generator().clone(), Some(4)).unwrap_err();
        assert!(matches!(err, Error::DistanceContradicted { declared: 4, found: 3 }));
    }

    #[test]
    fn full_space_code() {
        let c = BinaryLinearCode::from_parity_check("full", 5, BitMatrix::new(5), None).unwrap();
        assert_eq!((c.k(), c.d0(), c.t_max()), (5, 1, 0));
    }
}

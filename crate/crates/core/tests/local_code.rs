use graphcode::rng::SplitMix64;
use graphcode::{make_local_code, BinaryLinearCode, BitVec, LocalCodeKind};
use proptest::prelude::*;

fn code(spec: &str) -> BinaryLinearCode {
    make_local_code(&spec.parse().unwrap()).unwrap()
}

fn all_codewords(c: &BinaryLinearCode) -> Vec<BitVec> {
    (0..1u64 << c.k())
        .map(|m| c.encode(&BitVec::from_u64(c.k(), m)).unwrap())
        .collect()
}

#[test]
fn hamming7_exhaustive() {
    let c = code("hamming:3");
    for x in all_codewords(&c) {
        assert!(c.is_codeword(&x));
        assert_eq!(c.bounded_distance_decode(&x, 1).unwrap(), x);
        for e in 0..7 {
            let mut y = x.clone();
            y.flip(e);
            assert_eq!(c.bounded_distance_decode(&y, 1).unwrap(), x);
        }
    }
}

#[test]
fn brute_force_distances() {
    for (spec, n, k, d) in [
        ("hamming:3", 7, 4, 3),
        ("hamming:4", 15, 11, 3),
        ("golay23", 23, 12, 7),
        ("bch31", 31, 21, 5),
        ("spc:9", 9, 8, 2),
        ("repetition:5", 5, 1, 5),
    ] {
        let c = code(spec);
        assert_eq!((c.n(), c.k()), (n, k), "{spec}");
        assert_eq!(c.min_distance_bruteforce().unwrap(), d, "{spec}");
        assert_eq!(c.d0(), d, "{spec}");
    }
}

fn random_trials(c: &BinaryLinearCode, t: usize, trials: usize, seed: u64) -> usize {
    let mut rng = SplitMix64::new(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let msg = BitVec::from_positions(c.k(), (0..c.k()).filter(|_| rng.next_bool()));
        let x = c.encode(&msg).unwrap();
        let w = rng.below(t as u64 + 1) as usize;
        let e = BitVec::from_positions(c.n(), rng.sample_distinct(c.n(), w));
        if c.bounded_distance_decode(&x.xor(&e), t).unwrap() != x {
            failures += 1;
        }
    }
    failures
}

#[test]
fn golay_and_bch_random_trials() {
    assert_eq!(random_trials(&code("golay23"), 3, 10_000, 1), 0);
    assert_eq!(random_trials(&code("bch31"), 2, 10_000, 2), 0);
    assert_eq!(random_trials(&code("hamming:5"), 1, 2_000, 3), 0);
}

#[test]
fn file_round_trip() {
    let c = code("golay23");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golay.txt");
    std::fs::write(&path, c.to_parity_check_file()).unwrap();
    let d = make_local_code(&LocalCodeKind::FromFile(path)).unwrap();
    assert_eq!((d.n(), d.k(), d.d0()), (23, 12, 7));
    for x in [0u64, 1, 0xabc, 0xfff] {
        let w = c.encode(&BitVec::from_u64(12, x)).unwrap();
        assert!(d.is_codeword(&w));
    }
}

proptest! {
    #[test]
    fn decoding_is_idempotent_and_local(bits in prop::collection::vec(any::<bool>(), 23), t in 0usize..=3) {
        let c = code("golay23");
        let z = BitVec::from_positions(23, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
        let once = c.bounded_distance_decode(&z, t).unwrap();
        prop_assert_eq!(c.bounded_distance_decode(&once, t).unwrap(), once.clone());
        prop_assert!(once == z || once.distance(&z) <= t);
        prop_assert!(once == z || c.is_codeword(&once));
    }

    #[test]
    fn bch_round_trip(msg in 0u64..(1 << 21), e1 in 0usize..31, e2 in 0usize..31) {
        let c = code("bch31");
        let x = c.encode(&BitVec::from_u64(21, msg)).unwrap();
        let mut y = x.clone();
        y.flip(e1);
        if e2 != e1 {
            y.flip(e2);
        }
        prop_assert_eq!(c.bounded_distance_decode(&y, 2).unwrap(), x);
    }
}

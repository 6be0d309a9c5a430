mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::graph_code;
use graphcode::{make_local_code, BitVec, GraphCode, LocalCodeKind, RegularHypergraph};

#[test]
fn hamming_pair_dimension_meets_rate_bound() {
    let c = graph_code(LocalCodeKind::Hamming(3), 2, 2, 5);
    assert_eq!(c.len(), 14);
    assert!(c.dimension().unwrap() >= 2);
}

#[test]
fn rate_bound_on_twenty_instances() {
    let specs = [
        (LocalCodeKind::Hamming(3), 2),
        (LocalCodeKind::Hamming(3), 3),
        (LocalCodeKind::Hamming(4), 2),
        (LocalCodeKind::Golay23, 2),
        (LocalCodeKind::Spc(6), 4),
    ];
    for (i, (kind, l)) in specs.iter().cycle().take(20).enumerate() {
        let c = graph_code(kind.clone(), *l, 3 + i % 7, i as u64);
        let bound = c.len() as f64 * c.rate_lower_bound();
        assert!(c.dimension().unwrap() as f64 >= bound - 1e-9, "instance {i}");
    }
}

#[test]
fn min_distance_matches_enumeration() {
    let c = graph_code(LocalCodeKind::Hamming(3), 2, 2, 9);
    let words = c.enumerate_codewords().unwrap();
    assert_eq!(words.len(), 1 << c.dimension().unwrap());
    let distinct: HashSet<_> = words.iter().cloned().collect();
    assert_eq!(distinct.len(), words.len());
    let min = words.iter().skip(1).map(BitVec::weight).min();
    assert_eq!(c.min_distance_small().unwrap(), min);
    assert!(words.iter().all(|w| c.is_codeword(w)));
}

#[test]
fn adding_basis_vectors_preserves_membership() {
    let c = graph_code(LocalCodeKind::Hamming(3), 3, 12, 2);
    let basis = c.nullspace_basis().unwrap();
    let x = c.random_codeword(4).unwrap();
    for b in &basis {
        assert!(c.is_codeword(&x.xor(b)));
    }
    let mut y = x.clone();
    y.flip(0);
    for b in &basis {
        assert!(!c.is_codeword(&y.xor(b)));
    }
}

#[test]
fn random_codewords_cover_small_code() {
    let c = (0..200u64)
        .map(|s| graph_code(LocalCodeKind::Hamming(3), 2, 4, s))
        .find(|c| c.dimension().unwrap() == 4)
        .expect("a dimension-4 instance");
    let seen: HashSet<BitVec> = (0..1000).map(|s| c.random_codeword(s).unwrap()).collect();
    assert_eq!(seen.len(), 16);
    assert_eq!(c.random_codeword(3).unwrap(), c.random_codeword(3).unwrap());
}

#[test]
fn full_space_local_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("full.txt");
    std::fs::write(&path, "5 5\n").unwrap();
    let local = Arc::new(make_local_code(&LocalCodeKind::FromFile(path)).unwrap());
    let c = GraphCode::new(RegularHypergraph::sample(2, 4, 5, 1).unwrap(), local).unwrap();
    assert_eq!(c.dimension().unwrap(), c.len());
}

#[test]
fn complement_symmetry_only_with_all_ones() {
    let c = graph_code(LocalCodeKind::Repetition(3), 2, 3, 1);
    let words = c.enumerate_codewords().unwrap();
    let ones = BitVec::ones(c.len());
    assert!(c.is_codeword(&ones));
    let set: HashSet<_> = words.iter().cloned().collect();
    assert!(words.iter().all(|w| set.contains(&w.xor(&ones))));
}

mod common;

use looplab_core::ising::{log_z, Engine, InverseTemperature};
use looplab_core::lattice::VertexSet;
use looplab_core::loopsoup::{log_tree_count, SleParameter};
use looplab_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn free_polyomino_counts() {
    let counts: Vec<usize> = (1..=7).map(|k| common::free_polyominoes(k).len()).collect();
    assert_eq!(counts, [1, 2, 4, 9, 21, 56, 164]);
}

#[test]
fn tree_listing_small_cases() {
    assert_eq!(common::enumerate_wired_spanning_trees(&VertexSet::rectangle(0, 0, 0, 0)), 4);
    assert_eq!(common::enumerate_wired_spanning_trees(&VertexSet::rectangle(0, 0, 1, 0)), 15);
    assert_eq!(common::enumerate_wired_spanning_trees(&VertexSet::rectangle(0, 0, 1, 1)), 192);
}

#[test]
fn random_clusters_are_connected() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for size in 1..30 {
        let c = common::random_cluster(&mut rng, size);
        assert_eq!(c.len(), size);
        assert!(c.is_connected());
    }
}

#[test]
fn regression_of_a_line() {
    let (slope, intercept, r2) = common::regression(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 5.0, 7.0]);
    assert!((slope - 2.0).abs() < 1e-12 && (intercept + 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
}

#[test]
fn errors_convert_to_the_crate_error() {
    let big = VertexSet::rectangle(0, 0, 9, 9);
    let err: Error = log_z(&big, InverseTemperature::CRITICAL, Engine::Enumeration)
        .unwrap_err()
        .into();
    assert!(matches!(err, Error::Ising(_)));
    assert!(err.to_string().contains("100"));
    assert_eq!(log_tree_count(&VertexSet::empty()).unwrap(), 0.0);
    let err: Error = SleParameter::new(9.0).unwrap_err().into();
    assert!(matches!(err, Error::Soup(_)));
}

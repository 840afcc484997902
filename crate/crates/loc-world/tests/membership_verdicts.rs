use box_models::fcs::{pair_box, tilted_pair_state};
use box_models::nsbox::{boolean_xor_box, deterministic_box, enumerate_assignments};
use box_models::sample::{random_local_box, rng};
use box_models::Scenario;
use loc_world::{local_membership, vertex_count, MembershipVerdict, VertexSet};

#[test]
fn uniform_box_is_local() {
    let b = boolean_xor_box(&[0, 0, 0, 0], 2).unwrap();
    match local_membership(&b).unwrap() {
        MembershipVerdict::Local(model) => {
            assert!(model.verify(&b).unwrap() < 1e-7);
            assert!(model.norm() <= 1.0 + 1e-8);
        }
        other => panic!("uniform-parity box must be local, got {other:?}"),
    }
}

#[test]
fn deterministic_boxes_are_local_with_unit_weight() {
    let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
    let vs = VertexSet::new(&sc).unwrap();
    for assignment in enumerate_assignments(&sc) {
        let b = deterministic_box(&sc, &assignment).unwrap();
        match local_membership(&b).unwrap() {
            MembershipVerdict::Local(model) => {
                let j = vs.rank_of(&assignment);
                assert!((model.weights()[j] - 1.0).abs() < 1e-7);
                assert!(model.norm() <= 1.0 + 1e-8);
            }
            other => panic!("deterministic box must be local, got {other:?}"),
        }
    }
}

#[test]
fn random_local_mixtures_are_local() {
    let mut r = rng(21);
    let sc = Scenario::new(vec![2, 2], vec![3, 2]).unwrap();
    for _ in 0..25 {
        let b = random_local_box(&sc, &mut r).unwrap();
        match local_membership(&b).unwrap() {
            MembershipVerdict::Local(model) => {
                assert!(model.verify(&b).unwrap() < 1e-7);
            }
            other => panic!("local mixture misclassified as {other:?}"),
        }
    }
}

#[test]
fn pr_box_is_not_local_and_carries_a_functional() {
    let pr = boolean_xor_box(&[0, 0, 0, 1], 2).unwrap();
    match local_membership(&pr).unwrap() {
        MembershipVerdict::NotLocal { functional, violation } => {
            assert!(violation > 1e-7);
            // soundness: the certificate is nonnegative on every vertex
            let vs = VertexSet::new(pr.scenario()).unwrap();
            assert!(functional.min_on_vertices(&vs) > -1e-9);
            // and strictly negative on the box it separates
            assert!(functional.value(&pr).unwrap() < -1e-7);
        }
        other => panic!("PR box misclassified as {other:?}"),
    }
}

#[test]
fn tilted_pair_box_is_not_local() {
    let b = pair_box(&tilted_pair_state(), &[1, 3]).unwrap();
    match local_membership(&b).unwrap() {
        MembershipVerdict::NotLocal { functional, violation } => {
            assert!(violation > 1e-7);
            assert!(functional.value(&b).unwrap() < -1e-7);
        }
        other => panic!("tilted pair box misclassified as {other:?}"),
    }
}

#[test]
fn oversized_scenarios_are_rejected() {
    // 4 parties, 5 outputs, 5 inputs: 5^5 strategies per party, 5^20 total
    let sc = Scenario::uniform(4, 5, 5).unwrap();
    assert!(vertex_count(&sc) > 1_000_000);
    let b = random_local_box(&sc, &mut rng(3)).unwrap();
    assert!(local_membership(&b).is_err());
}

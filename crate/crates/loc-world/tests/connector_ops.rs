use box_models::nsbox::{deterministic_box, enumerate_assignments};
use box_models::sample::{random_local_box, rng};
use box_models::{Representation, Scenario};
use loc_world::{
    check_loc_feasibility, chsh_connector, local_membership, loc_feasibility, Connector,
    MembershipVerdict, World,
};

#[test]
fn identity_connector_round_trips_through_std_tensor() {
    let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
    let id = Connector::identity(&sc);
    let t = id.std_tensor().unwrap();
    let back = Connector::from_std_tensor(sc.clone(), sc.clone(), &t, World::Loc).unwrap();
    let diff = id
        .w_ab()
        .iter()
        .zip(back.w_ab())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff < 1e-12);
}

#[test]
fn identity_connector_fixes_boxes() {
    let sc = Scenario::new(vec![3, 2], vec![2, 2]).unwrap();
    let id = Connector::identity(&sc);
    let mut r = rng(31);
    for _ in 0..10 {
        let b = random_local_box(&sc, &mut r).unwrap();
        let out = id.apply(&b).unwrap();
        let before = b.dense_abbrev().unwrap();
        let after = out.to_representation(Representation::Abbreviated).unwrap();
        let after = after.dense().unwrap();
        let diff = before
            .data()
            .iter()
            .zip(after.data())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-12);
    }
}

#[test]
fn chsh_connector_is_loc_feasible() {
    let (conn, cert) = chsh_connector().unwrap();
    let worst = check_loc_feasibility(&conn, &cert).unwrap();
    assert!(worst < 1e-8);
}

#[test]
fn chsh_connector_maps_deterministic_to_deterministic() {
    let (conn, _) = chsh_connector().unwrap();
    let sc = conn.in_scenario().clone();
    for assignment in enumerate_assignments(&sc) {
        let b = deterministic_box(&sc, &assignment).unwrap();
        let out = conn.apply(&b).unwrap();
        let dense = out.dense_standard().unwrap();
        // image of a deterministic box under a deterministic transformation
        for &v in dense.data() {
            assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9);
        }
        match local_membership(&out.assume_physical()).unwrap() {
            MembershipVerdict::Local(_) => {}
            other => panic!("deterministic image misclassified as {other:?}"),
        }
    }
}

#[test]
fn loc_feasibility_certificates_reconstruct_vertex_images() {
    let (conn, _) = chsh_connector().unwrap();
    let cert = loc_feasibility(&conn).unwrap();
    assert!(check_loc_feasibility(&conn, &cert).unwrap() < 1e-8);
}

#[test]
fn tensoring_with_identity_preserves_locality() {
    // feasible 2-to-1 connector applied to parties (1,2) of a 3-party local
    // box leaves a 2-party local box
    let (conn, _) = chsh_connector().unwrap();
    let sc3 = Scenario::uniform(3, 2, 2).unwrap();
    let mut r = rng(32);
    for _ in 0..10 {
        let b = random_local_box(&sc3, &mut r).unwrap();
        let out = conn.apply_to_parties(&b, &[1, 2]).unwrap();
        assert_eq!(out.scenario().parties(), 2);
        assert_eq!(out.scenario().outputs(0), 2);
        assert_eq!(out.scenario().inputs(1), 2);
        match local_membership(&out).unwrap() {
            MembershipVerdict::Local(_) => {}
            other => panic!("identity-tensored image misclassified as {other:?}"),
        }
    }
}

#[test]
fn apply_to_parties_matches_apply_on_full_overlap() {
    let (conn, _) = chsh_connector().unwrap();
    let sc = conn.in_scenario().clone();
    let mut r = rng(33);
    for _ in 0..5 {
        let b = random_local_box(&sc, &mut r).unwrap();
        let via_apply = conn.apply(&b).unwrap();
        let via_parties = conn.apply_to_parties(&b, &[0, 1]).unwrap();
        let a = via_apply.dense_standard().unwrap();
        let p = via_parties.dense_standard().unwrap();
        let diff = a
            .data()
            .iter()
            .zip(p.data())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-12);
    }
}

#[test]
fn world_names_round_trip() {
    for w in [World::Loc, World::Quant, World::Sep, World::Steer] {
        assert_eq!(World::from_name(w.name()).unwrap(), w);
    }
    assert!(World::from_name("nosuch").is_err());
}

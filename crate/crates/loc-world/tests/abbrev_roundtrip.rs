use box_models::nsbox::{deterministic_box, enumerate_assignments};
use box_models::sample::{random_local_box, rng};
use box_models::Scenario;
use loc_world::AbbreviationMap;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn chsh_scenario_has_nine_abbreviated_coordinates() {
    let sc = Scenario::uniform(2, 2, 2).unwrap();
    assert_eq!(sc.abbrev_len(), 9);
    assert_eq!(sc.dense_len(), 16);
}

#[test]
fn deterministic_boxes_round_trip_exactly() {
    let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
    let map = AbbreviationMap::new(&sc);
    for assignment in enumerate_assignments(&sc) {
        let b = deterministic_box(&sc, &assignment).unwrap();
        let std = b.dense_standard().unwrap();
        let q = map.abbreviate(&b).unwrap();
        let back = map.expand(&q).unwrap();
        // 0/1 arithmetic throughout: round trip must be bit-exact
        assert_eq!(std.data(), back.as_slice());
    }
}

#[test]
fn random_local_boxes_round_trip() {
    let mut r = rng(11);
    for sc in [
        Scenario::uniform(2, 2, 2).unwrap(),
        Scenario::new(vec![3, 2], vec![2, 3]).unwrap(),
        Scenario::uniform(3, 2, 2).unwrap(),
    ] {
        let map = AbbreviationMap::new(&sc);
        for _ in 0..20 {
            let b = random_local_box(&sc, &mut r).unwrap();
            let std = b.dense_standard().unwrap();
            let back = map.expand(&map.abbreviate(&b).unwrap()).unwrap();
            assert!(max_abs_diff(std.data(), &back) < 1e-12);
        }
    }
}

#[test]
fn reduce_inverts_expand() {
    let sc = Scenario::new(vec![2, 3], vec![3, 2]).unwrap();
    let map = AbbreviationMap::new(&sc);
    let mut r = rng(12);
    use rand::Rng;
    for _ in 0..10 {
        let q: Vec<f64> = (0..sc.abbrev_len()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let back = map.reduce(&map.expand(&q).unwrap()).unwrap();
        assert!(max_abs_diff(&q, &back) < 1e-12);
    }
}

#[test]
fn functional_pairing_is_preserved() {
    // c . P in standard coordinates equals (S^T c) . q in abbreviated ones
    let sc = Scenario::new(vec![2, 2], vec![2, 3]).unwrap();
    let map = AbbreviationMap::new(&sc);
    let mut r = rng(13);
    use rand::Rng;
    for _ in 0..10 {
        let c: Vec<f64> = (0..sc.dense_len()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let c_ab = map.functional_to_abbrev(&c).unwrap();
        let b = random_local_box(&sc, &mut r).unwrap();
        let std = b.dense_standard().unwrap();
        let q = map.abbreviate(&b).unwrap();
        let lhs: f64 = c.iter().zip(std.data()).map(|(a, b)| a * b).sum();
        let rhs: f64 = c_ab.iter().zip(&q).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn abbrev_vertex_matches_abbreviate() {
    let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
    let map = AbbreviationMap::new(&sc);
    for assignment in enumerate_assignments(&sc) {
        let b = deterministic_box(&sc, &assignment).unwrap();
        let via_box = map.abbreviate(&b).unwrap();
        let direct = map.abbrev_vertex(&assignment);
        assert_eq!(via_box, direct);
    }
}

#[test]
fn sparse_expansion_rows_match_dense_expand() {
    let sc = Scenario::new(vec![2, 3], vec![3, 2]).unwrap();
    let map = AbbreviationMap::new(&sc);
    for y in 0..sc.dense_len() {
        let row = map.s_row_sparse_multi(y);
        // apply the sparse row to every abbreviated unit vector
        for q in 0..sc.abbrev_len() {
            let mut unit = vec![0.0; sc.abbrev_len()];
            unit[q] = 1.0;
            let dense = map.expand(&unit).unwrap();
            let sparse: f64 = row.iter().filter(|(a, _)| *a == q).map(|(_, v)| v).sum();
            assert!((dense[y] - sparse).abs() < 1e-14);
        }
    }
}

use box_models::abbrev::PartyMaps;
use box_models::scenario::{multi_indices, Scenario};
use box_models::{random_local_box, rng, Representation};

#[test]
fn doubled_index_round_trips() {
    let sc = Scenario::new(vec![3, 2], vec![2, 4]).unwrap();
    for k in 0..2 {
        for a in 0..sc.outputs(k) {
            for x in 0..sc.inputs(k) {
                let y = sc.doubled(k, a, x);
                assert!(y < sc.party_dim(k));
                assert_eq!(sc.split(k, y), (a, x));
            }
        }
    }
    // a-major: consecutive inputs are adjacent.
    assert_eq!(sc.doubled(0, 0, 0), 0);
    assert_eq!(sc.doubled(0, 0, 1), 1);
    assert_eq!(sc.doubled(0, 1, 0), 2);
}

#[test]
fn abbreviated_index_round_trips() {
    let sc = Scenario::new(vec![3, 2], vec![2, 4]).unwrap();
    for k in 0..2 {
        assert_eq!(
            sc.abbrev_party_dim(k),
            sc.inputs(k) * (sc.outputs(k) - 1) + 1
        );
        for ah in 0..sc.outputs(k) - 1 {
            for xh in 0..sc.inputs(k) {
                let q = sc.abbrev(k, ah, xh);
                assert!(q > Scenario::EMPTY && q < sc.abbrev_party_dim(k));
                assert_eq!(sc.abbrev_split(k, q), (ah, xh));
            }
        }
    }
}

#[test]
fn multi_indices_is_row_major() {
    let idx: Vec<Vec<usize>> = multi_indices(&[2, 3]).collect();
    assert_eq!(idx.len(), 6);
    assert_eq!(idx[0], vec![0, 0]);
    assert_eq!(idx[1], vec![0, 1]);
    assert_eq!(idx[2], vec![0, 2]);
    assert_eq!(idx[3], vec![1, 0]);
    assert_eq!(idx[5], vec![1, 2]);
}

#[test]
fn dense_stride_matches_layout() {
    let sc = Scenario::new(vec![2, 3, 2], vec![2, 1, 3]).unwrap();
    let extents: Vec<usize> = (0..3).map(|k| sc.party_dim(k)).collect();
    for idx in multi_indices(&extents) {
        let flat: usize = (0..3).map(|k| idx[k] * sc.dense_stride(k)).sum();
        let expect = idx
            .iter()
            .zip(&extents)
            .fold(0, |acc, (&i, &e)| acc * e + i);
        assert_eq!(flat, expect);
    }
}

#[test]
fn abbreviation_inverts_expansion() {
    // T S = identity on the abbreviated space, for several party shapes.
    for (o, i) in [(2, 2), (3, 2), (2, 3), (4, 1), (3, 3)] {
        let sc = Scenario::uniform(1, o, i).unwrap();
        let maps = PartyMaps::new(&sc, 0);
        let (na, ns) = (maps.dim_abbrev, maps.dim_std);
        for q in 0..na {
            for qp in 0..na {
                let dot: f64 = (0..ns)
                    .map(|y| maps.reduce[q * ns + y] * maps.expand[y * na + qp])
                    .sum();
                let want = if q == qp { 1.0 } else { 0.0 };
                assert_eq!(dot, want, "shape ({o},{i}) entry ({q},{qp})");
            }
        }
    }
}

#[test]
fn unit_effect_matches_abbreviated_form() {
    let sc = Scenario::new(vec![3, 2], vec![2, 3]).unwrap();
    for k in 0..2 {
        let e = sc.unit_effect_party(k);
        assert_eq!(e.len(), sc.party_dim(k));
        for (y, &ey) in e.iter().enumerate() {
            let (_, x) = sc.split(k, y);
            assert_eq!(ey, if x == 0 { 1.0 } else { 0.0 });
        }
        let ea = sc.unit_effect_abbrev_party(k);
        assert_eq!(ea[Scenario::EMPTY], 1.0);
        assert!(ea[1..].iter().all(|&v| v == 0.0));
    }
}

#[test]
fn representation_round_trip_preserves_boxes() {
    let mut r = rng(7);
    for (o, i, m) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (2, 2, 4)] {
        let sc = Scenario::uniform(m, o, i).unwrap();
        let b = random_local_box(&sc, &mut r).unwrap();
        let ab = b.to_representation(Representation::Abbreviated).unwrap();
        let back = ab.to_representation(Representation::Standard).unwrap();
        let orig = b.dense().unwrap();
        let got = back.dense().unwrap();
        let err = orig
            .data()
            .iter()
            .zip(got.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "round trip error {err} at ({o},{i},{m})");
        // The norm is the empty-symbol entry in abbreviated form.
        assert!((ab.norm().unwrap() - 1.0).abs() < 1e-9);
        assert!((b.norm().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn mps_representation_round_trip() {
    let b = box_models::svetlichny_mps(4).unwrap();
    let ab = b.to_representation(Representation::Abbreviated).unwrap();
    assert!(ab.is_mps());
    let back = ab.to_representation(Representation::Standard).unwrap();
    let orig = b.dense().unwrap();
    let got = back.dense().unwrap();
    let err = orig
        .data()
        .iter()
        .zip(got.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-12);
}

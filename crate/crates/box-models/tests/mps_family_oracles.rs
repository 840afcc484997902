use box_models::{
    boolean_xor_box, consecutive_ones_fn, consecutive_ones_mps, majority_fn, majority_mps,
    ring_xor_fn, svetlichny_mps, NsBox,
};

fn max_diff(a: &NsBox, b: &NsBox) -> f64 {
    let ta = a.dense_standard().unwrap();
    let tb = b.dense_standard().unwrap();
    assert_eq!(ta.len(), tb.len());
    ta.data()
        .iter()
        .zip(tb.data())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn svetlichny_mps_matches_dense_table() {
    for m in 3..=6 {
        let mps = svetlichny_mps(m).unwrap();
        assert!(mps.is_mps());
        assert_eq!(mps.max_bond(), 16);
        let dense = boolean_xor_box(&ring_xor_fn(m), m).unwrap();
        let err = max_diff(&mps, &dense);
        assert!(err <= 1e-10, "m={m}: err {err}");
    }
}

#[test]
fn consecutive_ones_mps_matches_dense_table() {
    for m in 2..=6 {
        for r in 1..=m {
            let mps = consecutive_ones_mps(m, r).unwrap();
            assert_eq!(mps.max_bond(), 2 * (r + 1));
            let dense = boolean_xor_box(&consecutive_ones_fn(m, r), m).unwrap();
            let err = max_diff(&mps, &dense);
            assert!(err <= 1e-10, "m={m} r={r}: err {err}");
        }
    }
}

#[test]
fn majority_mps_matches_dense_table() {
    for m in 2..=6 {
        let mps = majority_mps(m).unwrap();
        assert_eq!(mps.max_bond(), 2 * (m.div_ceil(2) + 1));
        let dense = boolean_xor_box(&majority_fn(m), m).unwrap();
        let err = max_diff(&mps, &dense);
        assert!(err <= 1e-10, "m={m}: err {err}");
    }
}

#[test]
fn majority_mps_spot_entries() {
    // m = 4: f(1,1,0,0) = 1 and f(1,0,0,0) = 0; correlated outputs weigh
    // 2^(1-m) when the parity matches f.
    let b = majority_mps(4).unwrap();
    let w = 0.125;
    let p = b.prob(&[1, 0, 0, 0], &[1, 1, 0, 0]).unwrap();
    assert!((p - w).abs() < 1e-12, "f=1 wants odd parity: {p}");
    let p = b.prob(&[1, 1, 0, 0], &[1, 1, 0, 0]).unwrap();
    assert!((p - 0.0).abs() < 1e-12);
    let p = b.prob(&[0, 0, 0, 0], &[1, 0, 0, 0]).unwrap();
    assert!((p - w).abs() < 1e-12, "f=0 wants even parity: {p}");
    let p = b.prob(&[1, 1, 0, 0], &[1, 0, 0, 0]).unwrap();
    assert!((p - w).abs() < 1e-12);
}

#[test]
fn mps_boxes_are_entrywise_queriable() {
    let b = svetlichny_mps(8).unwrap();
    // Entry access must not densify: 4^8 entries would be fine, but the
    // query path goes through the site product either way.
    let p = b.prob(&[0; 8], &[0; 8]).unwrap();
    assert!((p - 0.5_f64.powi(7)).abs() < 1e-12);
    let p = b.prob(&[1, 0, 0, 0, 0, 0, 0, 0], &[0; 8]).unwrap();
    assert!(p.abs() < 1e-12);
}

use box_models::{
    boolean_xor_box, deterministic_box, hex_f64, parse_hex_f64, random_local_box, rng,
    Representation, Scenario,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn local_boxes_survive_representation_cycle(
        parties in 1usize..=3,
        outputs in 2usize..=3,
        inputs in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let sc = Scenario::uniform(parties, outputs, inputs).unwrap();
        let b = random_local_box(&sc, &mut rng(seed)).unwrap();
        prop_assert!(b.is_physical());
        let cycled = b
            .to_representation(Representation::Abbreviated)
            .unwrap()
            .to_representation(Representation::Standard)
            .unwrap();
        let ta = b.dense_standard().unwrap();
        let tb = cycled.dense_standard().unwrap();
        for (x, y) in ta.data().iter().zip(tb.data()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn xor_boxes_are_physical_for_any_table(
        (m, table) in (2usize..=4).prop_flat_map(|m| {
            (Just(m), prop::collection::vec(0u8..=1, 1usize << m))
        }),
    ) {
        let mut b = boolean_xor_box(&table, m).unwrap();
        b.verify_physical().unwrap();
        let t = b.dense_standard().unwrap();
        let w = (2.0f64).powi(1 - m as i32);
        for v in t.data() {
            prop_assert!(v.abs() < 1e-15 || (v - w).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_boxes_are_indicator_tables(
        (m, bits) in (2usize..=3).prop_flat_map(|m| {
            (Just(m), prop::collection::vec(0usize..2, 2 * m))
        }),
    ) {
        let sc = Scenario::uniform(m, 2, 2).unwrap();
        let assignment: Vec<Vec<usize>> =
            bits.chunks(2).map(|c| c.to_vec()).collect();
        let b = deterministic_box(&sc, &assignment).unwrap();
        prop_assert!(b.is_physical());
        for xs in 0..(1usize << m) {
            let x: Vec<usize> = (0..m).map(|k| xs >> (m - 1 - k) & 1).collect();
            let want: Vec<usize> = (0..m).map(|k| assignment[k][x[k]]).collect();
            for outs in 0..(1usize << m) {
                let a: Vec<usize> = (0..m).map(|k| outs >> (m - 1 - k) & 1).collect();
                let p = b.prob(&a, &x).unwrap();
                let expect = if a == want { 1.0 } else { 0.0 };
                prop_assert!((p - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hex_words_round_trip_all_bit_patterns(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        let back = parse_hex_f64(&hex_f64(v)).unwrap();
        prop_assert_eq!(v.to_bits(), back.to_bits());
    }
}

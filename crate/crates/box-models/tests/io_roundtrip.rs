use box_models::{
    box_from_text, box_to_text, hex_f64, parse_hex_f64, random_local_box, read_box, rng,
    svetlichny_mps, write_box, BoxData, NsBox, Representation, Scenario,
};

fn assert_bit_identical(a: &NsBox, b: &NsBox) {
    assert_eq!(a.scenario(), b.scenario());
    assert_eq!(a.representation(), b.representation());
    assert_eq!(a.is_physical(), b.is_physical());
    match (a.data(), b.data()) {
        (BoxData::Dense(ta), BoxData::Dense(tb)) => {
            assert_eq!(ta.data().len(), tb.data().len());
            for (x, y) in ta.data().iter().zip(tb.data()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        (BoxData::Mps(ma), BoxData::Mps(mb)) => {
            assert_eq!(ma.len(), mb.len());
            for (sa, sb) in ma.sites().iter().zip(mb.sites()) {
                assert_eq!(sa.phys, sb.phys);
                assert_eq!(sa.left, sb.left);
                assert_eq!(sa.right, sb.right);
                for (x, y) in sa.data.iter().zip(&sb.data) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
        _ => panic!("representation form mismatch"),
    }
}

#[test]
fn dense_standard_round_trip() {
    let sc = Scenario::new(vec![3, 2], vec![2, 3]).unwrap();
    let b = random_local_box(&sc, &mut rng(7)).unwrap();
    let back = box_from_text(&box_to_text(&b)).unwrap();
    assert_bit_identical(&b, &back);
}

#[test]
fn abbreviated_round_trip() {
    let sc = Scenario::uniform(2, 2, 2).unwrap();
    let b = random_local_box(&sc, &mut rng(8))
        .unwrap()
        .to_representation(Representation::Abbreviated)
        .unwrap();
    let back = box_from_text(&box_to_text(&b)).unwrap();
    assert_bit_identical(&b, &back);
}

#[test]
fn mps_round_trip() {
    let b = svetlichny_mps(4).unwrap();
    let back = box_from_text(&box_to_text(&b)).unwrap();
    assert_bit_identical(&b, &back);
}

#[test]
fn file_round_trip() {
    let b = svetlichny_mps(3).unwrap();
    let path = std::env::temp_dir().join("nsbox-io-test.box");
    write_box(&path, &b).unwrap();
    let back = read_box(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_bit_identical(&b, &back);
}

#[test]
fn hex_words_are_exact() {
    for v in [
        0.0,
        -0.0,
        1.0 / 3.0,
        -1.0 / 3.0,
        f64::MIN_POSITIVE,
        5e-324,
        f64::MAX,
        -f64::MAX,
        std::f64::consts::PI,
    ] {
        let back = parse_hex_f64(&hex_f64(v)).unwrap();
        assert_eq!(v.to_bits(), back.to_bits());
    }
    assert!(parse_hex_f64("zzzz").is_err());
}

#[test]
fn malformed_text_rejected() {
    let sc = Scenario::uniform(2, 2, 2).unwrap();
    let b = random_local_box(&sc, &mut rng(9)).unwrap();
    let text = box_to_text(&b);

    assert!(box_from_text("").is_err());
    assert!(box_from_text(&text.replace("nsbox v1", "nsbox v2")).is_err());
    assert!(box_from_text(&text.replace("representation standard", "representation weird")).is_err());

    // Truncate the entry payload.
    let cut = text.rfind('\n').unwrap();
    let cut = text[..cut].rfind('\n').unwrap();
    assert!(box_from_text(&text[..cut + 1]).is_err());
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tensor_core::{ContractionGraph, Dir, Leg, Mps, Tensor};

fn leg(label: u32, dir: Dir, extent: usize) -> Leg {
    Leg { label, dir, extent }
}

fn random_tensor(rng: &mut ChaCha20Rng, legs: Vec<Leg>) -> Tensor {
    let n: usize = legs.iter().map(|l| l.extent).product();
    let data: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Tensor::new(legs, data).unwrap()
}

#[test]
fn contract_pair_matches_matmul_loop() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let a = random_tensor(&mut rng, vec![leg(0, Dir::In, 3), leg(1, Dir::Out, 4)]);
    let b = random_tensor(&mut rng, vec![leg(2, Dir::In, 4), leg(3, Dir::Out, 5)]);
    let c = a.contract_pair(&b, &[(1, 0)]).unwrap();
    assert_eq!(c.legs().len(), 2);
    for i in 0..3 {
        for j in 0..5 {
            let mut want = 0.0;
            for k in 0..4 {
                want += a.get(&[i, k]) * b.get(&[k, j]);
            }
            assert!((c.get(&[i, j]) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn contract_pair_multi_leg_matches_loops() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let a = random_tensor(
        &mut rng,
        vec![leg(0, Dir::In, 2), leg(1, Dir::Out, 3), leg(2, Dir::Out, 4)],
    );
    let b = random_tensor(
        &mut rng,
        vec![leg(3, Dir::In, 4), leg(4, Dir::In, 3), leg(5, Dir::Out, 2)],
    );
    // Pair legs (1,1) and (2,0): result legs (a0, b2).
    let c = a.contract_pair(&b, &[(1, 1), (2, 0)]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let mut want = 0.0;
            for k in 0..3 {
                for l in 0..4 {
                    want += a.get(&[i, k, l]) * b.get(&[l, k, j]);
                }
            }
            assert!((c.get(&[i, j]) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn trace_pair_matches_loop() {
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    let a = random_tensor(
        &mut rng,
        vec![leg(0, Dir::Out, 3), leg(1, Dir::In, 2), leg(2, Dir::In, 3)],
    );
    let t = a.trace_pair(0, 2).unwrap();
    for j in 0..2 {
        let mut want = 0.0;
        for i in 0..3 {
            want += a.get(&[i, j, i]);
        }
        assert!((t.get(&[j]) - want).abs() < 1e-12);
    }
}

#[test]
fn permute_round_trip() {
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    let a = random_tensor(
        &mut rng,
        vec![leg(0, Dir::In, 2), leg(1, Dir::Out, 3), leg(2, Dir::In, 4)],
    );
    let p = a.permute(&[2, 0, 1]).unwrap();
    assert_eq!(p.legs()[0].label, 2);
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..4 {
                assert_eq!(p.get(&[k, i, j]), a.get(&[i, j, k]));
            }
        }
    }
    let back = p.permute(&[1, 2, 0]).unwrap();
    assert_eq!(back.data(), a.data());
}

/// Brute-force value of a three-node closed chain with an extra direct edge,
/// summing over all index assignments.
#[test]
fn graph_scalar_matches_brute_force() {
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    let a = random_tensor(&mut rng, vec![leg(0, Dir::Out, 2), leg(1, Dir::Out, 3)]);
    let b = random_tensor(&mut rng, vec![leg(2, Dir::In, 2), leg(3, Dir::Out, 4)]);
    let c = random_tensor(&mut rng, vec![leg(4, Dir::In, 3), leg(5, Dir::In, 4)]);
    let mut g = ContractionGraph::new();
    let na = g.add_node(a.clone());
    let nb = g.add_node(b.clone());
    let nc = g.add_node(c.clone());
    g.connect(na, 0, nb, 0).unwrap();
    g.connect(na, 1, nc, 0).unwrap();
    g.connect(nb, 1, nc, 1).unwrap();
    let v = g.contract().unwrap();
    let mut want = 0.0;
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..4 {
                want += a.get(&[i, j]) * b.get(&[i, k]) * c.get(&[j, k]);
            }
        }
    }
    assert!((v.as_scalar().unwrap() - want).abs() < 1e-12);
}

#[test]
fn graph_open_legs_ordered_by_origin() {
    let mut rng = ChaCha20Rng::seed_from_u64(16);
    let a = random_tensor(&mut rng, vec![leg(0, Dir::In, 2), leg(1, Dir::Out, 3)]);
    let b = random_tensor(&mut rng, vec![leg(2, Dir::In, 3), leg(3, Dir::Out, 4)]);
    let mut g = ContractionGraph::new();
    let na = g.add_node(a.clone());
    let nb = g.add_node(b.clone());
    g.connect(na, 1, nb, 0).unwrap();
    let m = g.contract().unwrap();
    assert_eq!(m.legs()[0].label, 0);
    assert_eq!(m.legs()[1].label, 3);
    let direct = a.contract_pair(&b, &[(1, 0)]).unwrap();
    assert_eq!(m.data(), direct.data());
}

#[test]
fn graph_handles_disconnected_components() {
    let a = Tensor::scalar(3.0);
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    let b = random_tensor(&mut rng, vec![leg(0, Dir::Out, 2), leg(1, Dir::In, 2)]);
    let mut g = ContractionGraph::new();
    g.add_node(a);
    let nb = g.add_node(b.clone());
    g.connect(nb, 0, nb, 1).unwrap();
    let v = g.contract().unwrap().as_scalar().unwrap();
    let tr = b.get(&[0, 0]) + b.get(&[1, 1]);
    assert!((v - 3.0 * tr).abs() < 1e-12);
}

#[test]
fn contraction_order_does_not_change_value() {
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    // Ring of five tensors with mixed bond sizes.
    let ext = [2usize, 3, 2, 4, 3];
    let mut g = ContractionGraph::new();
    let mut ids = Vec::new();
    for i in 0..5 {
        let t = random_tensor(
            &mut rng,
            vec![
                leg(2 * i as u32, Dir::In, ext[i]),
                leg(2 * i as u32 + 1, Dir::Out, ext[(i + 1) % 5]),
            ],
        );
        ids.push(g.add_node(t));
    }
    for i in 0..5 {
        g.connect(ids[i], 1, ids[(i + 1) % 5], 0).unwrap();
    }
    let base = g.contract().unwrap().as_scalar().unwrap();
    for bias in 1..6u64 {
        let v = g.contract_with_bias(bias).unwrap().as_scalar().unwrap();
        assert!((v - base).abs() <= 1e-10 * base.abs().max(1.0));
    }
}

#[test]
fn environment_reproduces_value_for_every_node() {
    let mut rng = ChaCha20Rng::seed_from_u64(19);
    let a = random_tensor(&mut rng, vec![leg(0, Dir::Out, 2), leg(1, Dir::Out, 3)]);
    let b = random_tensor(&mut rng, vec![leg(2, Dir::In, 2), leg(3, Dir::Out, 4)]);
    let c = random_tensor(&mut rng, vec![leg(4, Dir::In, 3), leg(5, Dir::In, 4)]);
    let mut g = ContractionGraph::new();
    let na = g.add_node(a);
    let nb = g.add_node(b);
    let nc = g.add_node(c);
    g.connect(na, 0, nb, 0).unwrap();
    g.connect(na, 1, nc, 0).unwrap();
    g.connect(nb, 1, nc, 1).unwrap();
    let v = g.contract().unwrap().as_scalar().unwrap();
    for id in [na, nb, nc] {
        let env = g.environment(id).unwrap();
        assert_eq!(env.rank(), g.node(id).rank());
        for (el, nl) in env.legs().iter().zip(g.node(id).legs()) {
            assert_eq!(el.extent, nl.extent);
        }
        let w = env.dot(g.node(id)).unwrap();
        assert!((w - v).abs() < 1e-10 * v.abs().max(1.0));
    }
}

#[test]
fn mps_round_trip_is_exact() {
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    let shape = [2usize, 3, 2, 2];
    let n: usize = shape.iter().product();
    let data: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mps = Mps::from_dense(&shape, &data).unwrap();
    let back = mps.to_dense().unwrap();
    for (x, y) in data.iter().zip(&back) {
        assert!((x - y).abs() <= 1e-12);
    }
    // entry() agrees with the dense layout.
    assert!((mps.entry(&[1, 2, 0, 1]).unwrap() - data[((1 * 3 + 2) * 2 + 0) * 2 + 1]).abs() <= 1e-12);
}

#[test]
fn graph_rejects_bad_wiring() {
    let a = Tensor::zeros(vec![leg(0, Dir::Out, 2)]).unwrap();
    let b = Tensor::zeros(vec![leg(1, Dir::Out, 2)]).unwrap();
    let c = Tensor::zeros(vec![leg(2, Dir::In, 3)]).unwrap();
    let mut g = ContractionGraph::new();
    let na = g.add_node(a);
    let nb = g.add_node(b);
    let nc = g.add_node(c);
    assert!(g.connect(na, 0, nb, 0).is_err()); // same direction
    assert!(g.connect(na, 0, nc, 0).is_err()); // extent mismatch
    let d = Tensor::zeros(vec![leg(3, Dir::In, 2), leg(4, Dir::In, 2)]).unwrap();
    let nd = g.add_node(d);
    g.connect(na, 0, nd, 0).unwrap();
    assert!(g.connect(na, 0, nd, 1).is_err()); // leg already wired
}

use box_models::cmat::{inner, kron_vec};
use box_models::{
    ghz_model, ghz_pauli_mps, ghz_state, pauli, pauli_projectors, quantum_box, CMat, NsBox,
    QState, QuantumModel, C64,
};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

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

/// Born-rule oracle straight from the definition: P(a|x) = <psi|(⊗ M)|psi>.
fn born_prob(psi: &[C64], meas: &[Vec<[CMat; 2]>], a: &[usize], x: &[usize]) -> f64 {
    let mut effect = CMat::eye(1);
    for k in 0..a.len() {
        effect = effect.kron(&meas[k][x[k]][a[k]]);
    }
    inner(psi, &effect.matvec(psi)).re
}

#[test]
fn product_sigma_z_state_is_deterministic() {
    let e0 = vec![re(1.0), re(0.0)];
    let e1 = vec![re(0.0), re(1.0)];
    let psi = kron_vec(&e0, &e1);
    let zz = vec![pauli_projectors(3).to_vec()];
    let model = QuantumModel::new(vec![2, 2], QState::Pure(psi), vec![zz.clone(), zz]).unwrap();
    let b = quantum_box(&model).unwrap();
    assert!(b.is_physical());
    for a0 in 0..2 {
        for a1 in 0..2 {
            let p = b.prob(&[a0, a1], &[0, 0]).unwrap();
            let want = if (a0, a1) == (0, 1) { 1.0 } else { 0.0 };
            assert!((p - want).abs() < 1e-12, "P({a0},{a1}) = {p}");
        }
    }
}

#[test]
fn maximally_mixed_qubit_is_uniform() {
    let rho = CMat::eye(2).scale(re(0.5));
    let meas = vec![vec![pauli_projectors(1).to_vec(), pauli_projectors(3).to_vec()]];
    let model = QuantumModel::new(vec![2], QState::Mixed(rho), meas).unwrap();
    let b = quantum_box(&model).unwrap();
    assert!(b.is_physical());
    for x in 0..2 {
        for a in 0..2 {
            let p = b.prob(&[a], &[x]).unwrap();
            assert!((p - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn ghz3_matches_born_oracle() {
    let model = ghz_model(3);
    let b = quantum_box(&model).unwrap();
    assert!(b.is_physical());
    let psi = ghz_state(3);
    let party = vec![pauli_projectors(1), pauli_projectors(3)];
    let meas = vec![party.clone(), party.clone(), party];
    for ai in 0..8usize {
        for xi in 0..8usize {
            let a = [ai >> 2 & 1, ai >> 1 & 1, ai & 1];
            let x = [xi >> 2 & 1, xi >> 1 & 1, xi & 1];
            let want = born_prob(&psi, &meas, &a, &x);
            let got = b.prob(&a, &x).unwrap();
            assert!((got - want).abs() < 1e-12, "a={a:?} x={x:?}: {got} vs {want}");
        }
    }
}

#[test]
fn ghz_pauli_mps_matches_quantum_box() {
    for m in 2..=7 {
        let mps = ghz_pauli_mps(m).unwrap();
        assert!(mps.is_mps());
        assert_eq!(mps.max_bond(), 4);
        let dense = quantum_box(&ghz_model(m)).unwrap();
        let err = max_diff(&mps, &dense);
        assert!(err <= 1e-10, "m={m}: err {err}");
    }
}

#[test]
fn ghz_pauli_mps_matches_quantum_box_m10() {
    let mps = ghz_pauli_mps(10).unwrap();
    let dense = quantum_box(&ghz_model(10)).unwrap();
    let err = max_diff(&mps, &dense);
    assert!(err <= 1e-10, "err {err}");
}

#[test]
fn ghz_marginals_are_uniform() {
    let b = quantum_box(&ghz_model(4)).unwrap();
    for k in 0..4 {
        for x in 0..2 {
            for a in 0..2 {
                let mut p = 0.0;
                for rest in 0..8usize {
                    let mut av = [0usize; 4];
                    let mut r = rest;
                    for (j, slot) in av.iter_mut().enumerate() {
                        if j == k {
                            *slot = a;
                        } else {
                            *slot = r & 1;
                            r >>= 1;
                        }
                    }
                    let mut xv = [0usize; 4];
                    xv[k] = x;
                    p += b.prob(&av, &xv).unwrap();
                }
                assert!((p - 0.5).abs() < 1e-12, "party {k} x={x} a={a}: {p}");
            }
        }
    }
}

#[test]
fn model_rejects_incomplete_povm() {
    let p = pauli_projectors(3);
    let bad = vec![vec![vec![p[0].clone(), p[0].clone()]]];
    let err = QuantumModel::new(vec![2], QState::Pure(vec![re(1.0), re(0.0)]), bad);
    assert!(err.is_err());
}

#[test]
fn model_rejects_non_psd_effect() {
    let sz = pauli(3);
    let complement = CMat::eye(2).sub(&sz);
    let bad = vec![vec![vec![sz, complement]]];
    let err = QuantumModel::new(vec![2], QState::Pure(vec![re(1.0), re(0.0)]), bad);
    assert!(err.is_err());
}

#[test]
fn model_rejects_mismatched_state_dim() {
    let zz = vec![pauli_projectors(3).to_vec()];
    let err = QuantumModel::new(
        vec![2, 2],
        QState::Pure(vec![re(1.0), re(0.0)]),
        vec![zz.clone(), zz],
    );
    assert!(err.is_err());
}

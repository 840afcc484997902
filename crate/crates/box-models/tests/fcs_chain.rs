use box_models::cmat::{inner, kron_vec, C64};
use box_models::{
    fcs_chain_box, fcs_chain_state, pair_box, pair_pauli_coeffs, pauli, pauli_projectors,
    pauli_transfer16, quantum_box, rng, singlet_state, tilted_pair_state, CMat, MixedPairChannel,
    NsBox, QState, QuantumModel,
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

/// Applies a two-qubit unitary to qubits (p, q) of an n-qubit state, p being
/// the first tensor factor of u. Qubits are 1-based, qubit 1 most significant.
fn apply_pair(u: &CMat, state: &[C64], n: usize, p: usize, q: usize) -> Vec<C64> {
    let (bp, bq) = (n - p, n - q);
    let dim = 1usize << n;
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for (idx, slot) in out.iter_mut().enumerate() {
        let row = (idx >> bp & 1) * 2 + (idx >> bq & 1);
        let base = idx & !(1 << bp) & !(1 << bq);
        let mut v = C64::new(0.0, 0.0);
        for s in 0..2 {
            for t in 0..2 {
                v += u[(row, s * 2 + t)] * state[base | s << bp | t << bq];
            }
        }
        *slot = v;
    }
    out
}

fn xyz_meas(n: usize) -> Vec<Vec<Vec<CMat>>> {
    (0..n)
        .map(|_| (1..=3).map(|p| pauli_projectors(p).to_vec()).collect())
        .collect()
}

#[test]
fn transfer_of_identity_is_identity() {
    let t = pauli_transfer16(&CMat::eye(4)).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((t[i * 16 + j] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn singlet_coeffs_are_diagonal() {
    let f = pair_pauli_coeffs(&singlet_state()).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let want = match (i, j) {
                (0, 0) => 0.25,
                _ if i == j => -0.25,
                _ => 0.0,
            };
            assert!((f[i * 4 + j] - want).abs() < 1e-12, "f[{i}{j}]");
        }
    }
}

#[test]
fn tilted_coeffs_match_direct_born() {
    let phi = tilted_pair_state();
    let f = pair_pauli_coeffs(&phi).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let m = pauli(i).kron(&pauli(j));
            let want = inner(&phi, &m.matvec(&phi)).re / 4.0;
            assert!((f[i * 4 + j] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn pair_box_matches_quantum_model() {
    let phi = tilted_pair_state();
    let b = pair_box(&phi, &[1, 2, 3]).unwrap();
    let model = QuantumModel::new(vec![2, 2], QState::Pure(phi), xyz_meas(2)).unwrap();
    let oracle = quantum_box(&model).unwrap();
    let err = max_diff(&b, &oracle);
    assert!(err < 1e-12, "err {err}");
}

#[test]
fn singlet_pair_box_anticorrelates() {
    let b = pair_box(&singlet_state(), &[1, 2, 3]).unwrap();
    for x in 0..3 {
        for a in 0..2 {
            let p = b.prob(&[a, a], &[x, x]).unwrap();
            assert!(p.abs() < 1e-12, "x={x} a={a}: {p}");
        }
    }
}

#[test]
fn chain_box_identity_couplers_factorize() {
    let pair = pair_box(&tilted_pair_state(), &[1, 2, 3])
        .unwrap()
        .dense_standard()
        .unwrap();
    for m in 2..=3usize {
        let chain = fcs_chain_box(&vec![CMat::eye(4); m]).unwrap();
        assert!(chain.is_mps());
        let dense = chain.dense_standard().unwrap();
        let mut idx = vec![0usize; 2 * m];
        'entries: loop {
            let mut want = 1.0;
            for k in 0..m {
                want *= pair.get(&[idx[2 * k], idx[2 * k + 1]]);
            }
            let got = dense.get(&idx);
            assert!((got - want).abs() < 1e-12, "idx {idx:?}: {got} vs {want}");
            let mut k = 2 * m;
            loop {
                if k == 0 {
                    break 'entries;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < 6 {
                    continue 'entries;
                }
                idx[k] = 0;
            }
        }
    }
}

#[test]
fn chain_box_matches_quantum_model_m1() {
    let mut r = rng(41);
    let u = box_models::haar_unitary(4, &mut r);
    let chain = fcs_chain_box(std::slice::from_ref(&u)).unwrap();
    // The single coupler wraps (2, 1): qubit 2 is its first factor.
    let psi = apply_pair(&u, &tilted_pair_state(), 2, 2, 1);
    let model = QuantumModel::new(vec![2, 2], QState::Pure(psi), xyz_meas(2)).unwrap();
    let err = max_diff(&chain, &quantum_box(&model).unwrap());
    assert!(err < 1e-10, "err {err}");
}

#[test]
fn chain_box_matches_quantum_model_m2() {
    let mut r = rng(42);
    let u1 = box_models::haar_unitary(4, &mut r);
    let u2 = box_models::haar_unitary(4, &mut r);
    let chain = fcs_chain_box(&[u1.clone(), u2.clone()]).unwrap();

    let phi = tilted_pair_state();
    let mut psi = kron_vec(&phi, &phi);
    psi = apply_pair(&u1, &psi, 4, 2, 3);
    psi = apply_pair(&u2, &psi, 4, 4, 1);
    let model = QuantumModel::new(vec![2; 4], QState::Pure(psi), xyz_meas(4)).unwrap();
    let err = max_diff(&chain, &quantum_box(&model).unwrap());
    assert!(err < 1e-10, "err {err}");
}

#[test]
fn chain_state_identity_is_singlet_pairs() {
    let id = MixedPairChannel::unitary(CMat::eye(4));
    let st = fcs_chain_state(&[id.clone(), id]).unwrap();
    assert_eq!(st.n_qubits(), 4);
    let tr = st.trace().unwrap();
    assert!((tr - 1.0).abs() < 1e-12);
    let rho = st.to_density().unwrap();
    let s = singlet_state();
    let pair = CMat::outer(&s, &s);
    let want = pair.kron(&pair);
    let err = rho.sub(&want).max_abs();
    assert!(err < 1e-12, "err {err}");
}

#[test]
fn chain_state_is_linear_in_channel_weight() {
    let mut r = rng(43);
    let u0 = box_models::haar_unitary(4, &mut r);
    let u1 = box_models::haar_unitary(4, &mut r);
    let v = box_models::haar_unitary(4, &mut r);
    let w = 0.3;
    let mixed = MixedPairChannel {
        weight: w,
        u0: u0.clone(),
        u1: u1.clone(),
    };
    let rho = fcs_chain_state(&[mixed, MixedPairChannel::unitary(v.clone())])
        .unwrap()
        .to_density()
        .unwrap();
    let rho0 = fcs_chain_state(&[
        MixedPairChannel::unitary(u0),
        MixedPairChannel::unitary(v.clone()),
    ])
    .unwrap()
    .to_density()
    .unwrap();
    let rho1 = fcs_chain_state(&[MixedPairChannel::unitary(u1), MixedPairChannel::unitary(v)])
        .unwrap()
        .to_density()
        .unwrap();
    let want = rho0
        .scale(C64::new(w, 0.0))
        .add(&rho1.scale(C64::new(1.0 - w, 0.0)));
    let err = rho.sub(&want).max_abs();
    assert!(err < 1e-12, "err {err}");
}

#[test]
fn chain_state_density_matches_unitary_oracle() {
    let mut r = rng(44);
    let u1 = box_models::haar_unitary(4, &mut r);
    let u2 = box_models::haar_unitary(4, &mut r);
    let st = fcs_chain_state(&[
        MixedPairChannel::unitary(u1.clone()),
        MixedPairChannel::unitary(u2.clone()),
    ])
    .unwrap();
    assert!((st.trace().unwrap() - 1.0).abs() < 1e-12);

    let s = singlet_state();
    let mut psi = kron_vec(&s, &s);
    psi = apply_pair(&u1, &psi, 4, 2, 3);
    psi = apply_pair(&u2, &psi, 4, 4, 1);
    let want = CMat::outer(&psi, &psi);
    let err = st.to_density().unwrap().sub(&want).max_abs();
    assert!(err < 1e-10, "err {err}");
}

#[test]
fn chain_state_trace_one_seeded() {
    let mut r = rng(45);
    let chans: Vec<MixedPairChannel> = (0..3)
        .map(|_| MixedPairChannel::unitary(box_models::haar_unitary(4, &mut r)))
        .collect();
    let st = fcs_chain_state(&chans).unwrap();
    assert_eq!(st.n_qubits(), 6);
    assert!((st.trace().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn pair_box_rejects_bad_axis() {
    assert!(pair_box(&tilted_pair_state(), &[0, 1]).is_err());
    assert!(pair_box(&tilted_pair_state(), &[]).is_err());
    assert!(pair_box(&[C64::new(1.0, 0.0)], &[1]).is_err());
}

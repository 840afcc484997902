//! Quantum models and Born-rule evaluation into behaviour boxes.

use tensor_core::{Dir, Leg, Mps, MpsSite, Tensor};

use crate::cmat::{CMat, C64};
use crate::nsbox::{NsBox, Representation};
use crate::scenario::Scenario;
use crate::{BoxError, Result};

const PSD_TOL: f64 = 1e-9;
const POVM_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum QState {
    Pure(Vec<C64>),
    Mixed(CMat),
}

impl QState {
    pub fn dim(&self) -> usize {
        match self {
            QState::Pure(v) => v.len(),
            QState::Mixed(m) => m.rows(),
        }
    }
}

/// A multipartite state together with one POVM per party and input.
///
/// `meas[party][input][outcome]` acts on the party's local factor.
#[derive(Debug, Clone)]
pub struct QuantumModel {
    dims: Vec<usize>,
    state: QState,
    meas: Vec<Vec<Vec<CMat>>>,
}

impl QuantumModel {
    pub fn new(dims: Vec<usize>, state: QState, meas: Vec<Vec<Vec<CMat>>>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(BoxError::BadModel("empty or zero local dimension".into()));
        }
        if state.dim() != total {
            return Err(BoxError::BadModel(format!(
                "state dimension {} does not match product of local dimensions {total}",
                state.dim()
            )));
        }
        if meas.len() != dims.len() {
            return Err(BoxError::BadModel(
                "one measurement family required per party".into(),
            ));
        }
        if let QState::Mixed(rho) = &state {
            let lo = rho.min_eigenvalue()?;
            if lo < -PSD_TOL {
                return Err(BoxError::BadModel(format!(
                    "state has negative eigenvalue {lo:.3e}"
                )));
            }
            if rho.trace().re > 1.0 + POVM_TOL {
                return Err(BoxError::BadModel("state trace exceeds 1".into()));
            }
        }
        for (party, fams) in meas.iter().enumerate() {
            if fams.is_empty() {
                return Err(BoxError::BadModel(format!("party {party} has no inputs")));
            }
            for (input, povm) in fams.iter().enumerate() {
                if povm.is_empty() {
                    return Err(BoxError::BadModel(format!(
                        "party {party} input {input} has no outcomes"
                    )));
                }
                let d = dims[party];
                let mut sum = CMat::zeros(d, d);
                for op in povm {
                    if op.rows() != d || op.cols() != d {
                        return Err(BoxError::BadModel(format!(
                            "party {party} input {input}: operator dimension mismatch"
                        )));
                    }
                    let lo = op.min_eigenvalue()?;
                    if lo < -PSD_TOL {
                        return Err(BoxError::BadModel(format!(
                            "party {party} input {input}: effect has negative eigenvalue {lo:.3e}"
                        )));
                    }
                    sum = sum.add(op);
                }
                if sum.sub(&CMat::eye(d)).max_abs() > POVM_TOL {
                    return Err(BoxError::BadModel(format!(
                        "party {party} input {input}: POVM does not sum to identity"
                    )));
                }
            }
        }
        Ok(Self { dims, state, meas })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn state(&self) -> &QState {
        &self.state
    }

    pub fn scenario(&self) -> Scenario {
        let outputs = self.meas.iter().map(|f| f[0].len()).collect();
        let inputs = self.meas.iter().map(|f| f.len()).collect();
        Scenario::new(outputs, inputs).expect("validated in new")
    }
}

/// Fold party `0` of `rho` (local dim `d`) with effect `m`, leaving the
/// reduced matrix on the remaining factors: out[u,v] = sum_{s,s'} m[s,s']
/// rho[(s',u),(s,v)].
fn fold_effect(m: &CMat, rho: &CMat, d: usize) -> CMat {
    let rest = rho.rows() / d;
    let mut out = CMat::zeros(rest, rest);
    for s in 0..d {
        for sp in 0..d {
            let coef = m[(s, sp)];
            if coef == C64::new(0.0, 0.0) {
                continue;
            }
            for u in 0..rest {
                for v in 0..rest {
                    out[(u, v)] += coef * rho[(sp * rest + u, s * rest + v)];
                }
            }
        }
    }
    out
}

/// Same fold applied to the outer product psi psi^dag without materializing it.
fn fold_effect_pure(m: &CMat, psi: &[C64], d: usize) -> CMat {
    let rest = psi.len() / d;
    let mut out = CMat::zeros(rest, rest);
    for s in 0..d {
        for sp in 0..d {
            let coef = m[(s, sp)];
            if coef == C64::new(0.0, 0.0) {
                continue;
            }
            for u in 0..rest {
                let left = coef * psi[sp * rest + u];
                for v in 0..rest {
                    out[(u, v)] += left * psi[s * rest + v].conj();
                }
            }
        }
    }
    out
}

/// Born-rule behaviour of a quantum model as a dense standard box.
///
/// Parties are folded in order, sharing the partial trace across all
/// outcome/input branches of the already-folded prefix.
pub fn quantum_box(model: &QuantumModel) -> Result<NsBox> {
    let sc = model.scenario();
    let m = sc.parties();
    let len = sc.dense_len();
    if len > tensor_core::MAX_DENSE_ENTRIES {
        return Err(BoxError::BadModel(
            "scenario too large for dense box".into(),
        ));
    }
    let mut values = vec![0.0; len];

    // Depth-first over party branches; `reduced` lives on parties k..m-1.
    struct Walk<'a> {
        model: &'a QuantumModel,
        sc: &'a Scenario,
        values: &'a mut [f64],
    }
    impl Walk<'_> {
        fn descend(&mut self, k: usize, offset: usize, reduced: &CMat) {
            let d = self.model.dims[k];
            for (x, povm) in self.model.meas[k].iter().enumerate() {
                for (a, op) in povm.iter().enumerate() {
                    let y = self.sc.doubled(k, a, x);
                    let off = offset + y * self.sc.dense_stride(k);
                    if k + 1 == self.sc.parties() {
                        let mut tr = C64::new(0.0, 0.0);
                        for s in 0..d {
                            for sp in 0..d {
                                tr += op[(s, sp)] * reduced[(sp, s)];
                            }
                        }
                        self.values[off] = tr.re;
                    } else {
                        let next = fold_effect(op, reduced, d);
                        self.descend(k + 1, off, &next);
                    }
                }
            }
        }
    }

    let mut walk = Walk {
        model,
        sc: &sc,
        values: &mut values,
    };
    let d0 = model.dims[0];
    for (x, povm) in model.meas[0].iter().enumerate() {
        for (a, op) in povm.iter().enumerate() {
            let y = sc.doubled(0, a, x);
            let off = y * sc.dense_stride(0);
            if m == 1 {
                let tr = match &model.state {
                    QState::Mixed(rho) => {
                        let mut t = C64::new(0.0, 0.0);
                        for s in 0..d0 {
                            for sp in 0..d0 {
                                t += op[(s, sp)] * rho[(sp, s)];
                            }
                        }
                        t
                    }
                    QState::Pure(psi) => {
                        let mut t = C64::new(0.0, 0.0);
                        for s in 0..d0 {
                            for sp in 0..d0 {
                                t += op[(s, sp)] * psi[sp] * psi[s].conj();
                            }
                        }
                        t
                    }
                };
                walk.values[off] = tr.re;
            } else {
                let next = match &model.state {
                    QState::Mixed(rho) => fold_effect(op, rho, d0),
                    QState::Pure(psi) => fold_effect_pure(op, psi, d0),
                };
                walk.descend(1, off, &next);
            }
        }
    }

    let legs: Vec<Leg> = (0..m)
        .map(|k| Leg::new(k as u32, Dir::Out, sc.party_dim(k)))
        .collect();
    let tensor = Tensor::new(legs, values)?;
    let mut bx = NsBox::from_dense(sc.clone(), Representation::Standard, tensor)?;
    let trace_one = matches!(&model.state, QState::Pure(_))
        || matches!(&model.state, QState::Mixed(r) if (r.trace().re - 1.0).abs() <= 1e-9);
    if trace_one {
        bx.verify_physical()?;
    }
    Ok(bx)
}

pub fn pauli(i: usize) -> CMat {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let im = C64::new(0.0, 1.0);
    match i {
        0 => CMat::from_rows(vec![vec![one, z], vec![z, one]]),
        1 => CMat::from_rows(vec![vec![z, one], vec![one, z]]),
        2 => CMat::from_rows(vec![vec![z, -im], vec![im, z]]),
        3 => CMat::from_rows(vec![vec![one, z], vec![z, -one]]),
        _ => panic!("pauli index out of range"),
    }
}

/// Eigenprojectors (1 +/- sigma_p)/2, outcome 0 first.
pub fn pauli_projectors(p: usize) -> [CMat; 2] {
    let half = C64::new(0.5, 0.0);
    let s = pauli(p);
    let i = CMat::eye(2);
    [i.add(&s).scale(half), i.sub(&s).scale(half)]
}

/// (|0...0> + |1...1>)/sqrt(2) on m qubits.
pub fn ghz_state(m: usize) -> Vec<C64> {
    assert!(m >= 1);
    let mut v = vec![C64::new(0.0, 0.0); 1 << m];
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = s;
    v[(1 << m) - 1] = s;
    v
}

/// GHZ model with sigma_x (input 0) and sigma_z (input 1) measurements.
pub fn ghz_model(m: usize) -> QuantumModel {
    let meas: Vec<Vec<Vec<CMat>>> = (0..m)
        .map(|_| vec![pauli_projectors(1).to_vec(), pauli_projectors(3).to_vec()])
        .collect();
    QuantumModel::new(vec![2; m], QState::Pure(ghz_state(m)), meas)
        .expect("GHZ model is well formed")
}

/// Bond-4 MPS for the GHZ box with sigma_x/sigma_z measurements.
///
/// P(a|x) = (1/2) sum_{s,t} prod_k <t| M_{a_k|x_k} |s>; the bond carries the
/// (s, t) pair and every site matrix is diagonal over it.
pub fn ghz_pauli_mps(m: usize) -> Result<NsBox> {
    assert!(m >= 2);
    let sc = Scenario::uniform(m, 2, 2)?;
    // diag[y][s*2+t]
    let entry = |a: usize, x: usize, s: usize, t: usize| -> f64 {
        if x == 0 {
            let sign = if a == 0 { 1.0 } else { -1.0 };
            if s == t {
                0.5
            } else {
                0.5 * sign
            }
        } else if s == t && a == s {
            1.0
        } else {
            0.0
        }
    };
    let mut sites = Vec::with_capacity(m);
    for k in 0..m {
        let (left, right) = match k {
            0 => (1, 4),
            _ if k + 1 == m => (4, 1),
            _ => (4, 4),
        };
        let mut data = vec![0.0; 4 * left * right];
        for a in 0..2 {
            for x in 0..2 {
                let y = sc.doubled(k, a, x);
                for s in 0..2 {
                    for t in 0..2 {
                        let b = s * 2 + t;
                        let v = entry(a, x, s, t);
                        let scale = if k == 0 { 0.5 } else { 1.0 };
                        let (l, r) = match k {
                            0 => (0, b),
                            _ if k + 1 == m => (b, 0),
                            _ => (b, b),
                        };
                        data[(y * left + l) * right + r] = v * scale;
                    }
                }
            }
        }
        sites.push(MpsSite::new(4, left, right, data)?);
    }
    Ok(NsBox::from_mps(sc, Representation::Standard, Mps::new(sites)?)?.assume_physical())
}

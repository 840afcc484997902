//! Finitely correlated chains: a ring of entangled qubit pairs coupled by
//! two-qubit unitaries or channels, in Pauli coefficient space.
//!
//! Qubits 1..2m sit on a ring. Pair kappa holds a two-qubit state on qubits
//! (2k-1, 2k); coupler kappa acts on qubits (2k, 2k+1), the last one wrapping
//! to qubit 1. Everything is tracked through real Pauli coefficients
//! rho = sum_i r[i1..in] sigma_{i1} x ... x sigma_{in}, so site tensors stay
//! real even though sigma_y is not.
//!
//! Cutting the ring between qubits 2m and 1 yields a chain whose bonds carry
//! the running source index plus the wrap pair (i1, j1) needed by the final
//! coupler: bond 64 after odd qubits, 256 after even ones.

use tensor_core::{Mps, MpsSite};

use crate::cmat::{inner, CMat, C64};
use crate::nsbox::{NsBox, Representation};
use crate::quantum::pauli;
use crate::scenario::Scenario;
use crate::{BoxError, Result};

const UNITARY_TOL: f64 = 1e-9;

/// (R x I)(|00> + |11>)/sqrt(2) with R = exp(i pi sigma_y / 8); the pair
/// state whose sigma_x/sigma_y/sigma_z box powers the chain examples.
pub fn tilted_pair_state() -> Vec<C64> {
    let c = (std::f64::consts::PI / 8.0).cos() * std::f64::consts::FRAC_1_SQRT_2;
    let s = (std::f64::consts::PI / 8.0).sin() * std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C64::new(c, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(c, 0.0),
    ]
}

/// (|01> - |10>)/sqrt(2).
pub fn singlet_state() -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ]
}

/// Pauli coefficients of a two-qubit pure state: f[i*4+j] =
/// <phi| sigma_i x sigma_j |phi> / 4, real by Hermiticity.
pub fn pair_pauli_coeffs(state: &[C64]) -> Result<Vec<f64>> {
    if state.len() != 4 {
        return Err(BoxError::BadModel(
            "pair state must live on two qubits".into(),
        ));
    }
    let mut f = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            let op = pauli(i).kron(&pauli(j));
            f[i * 4 + j] = inner(state, &op.matvec(state)).re / 4.0;
        }
    }
    Ok(f)
}

/// Pauli transfer matrix of a two-qubit unitary: T[(i,i'),(j,j')] =
/// tr((sigma_i x sigma_i') U (sigma_j x sigma_j') U^dag) / 4, row-major
/// 16 x 16, real by cyclicity.
pub fn pauli_transfer16(u: &CMat) -> Result<Vec<f64>> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(BoxError::BadModel("coupler must act on two qubits".into()));
    }
    if !u.is_unitary(UNITARY_TOL) {
        return Err(BoxError::BadModel("coupler is not unitary".into()));
    }
    let udag = u.dagger();
    let mut t = vec![0.0; 256];
    for j in 0..4 {
        for jp in 0..4 {
            let conj = u.mul(&pauli(j).kron(&pauli(jp))).mul(&udag);
            for i in 0..4 {
                for ip in 0..4 {
                    let v = pauli(i).kron(&pauli(ip)).mul(&conj).trace();
                    debug_assert!(v.im.abs() < 1e-12);
                    t[(i * 4 + ip) * 16 + (j * 4 + jp)] = v.re / 4.0;
                }
            }
        }
    }
    Ok(t)
}

/// Convex mixture of two unitary couplers: rho -> w u0 rho u0^dag +
/// (1-w) u1 rho u1^dag.
#[derive(Debug, Clone)]
pub struct MixedPairChannel {
    pub weight: f64,
    pub u0: CMat,
    pub u1: CMat,
}

impl MixedPairChannel {
    pub fn unitary(u: CMat) -> Self {
        Self {
            weight: 1.0,
            u1: u.clone(),
            u0: u,
        }
    }

    pub fn transfer(&self) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(BoxError::BadModel("channel weight outside [0, 1]".into()));
        }
        let t0 = pauli_transfer16(&self.u0)?;
        let t1 = pauli_transfer16(&self.u1)?;
        Ok(t0
            .iter()
            .zip(&t1)
            .map(|(a, b)| self.weight * a + (1.0 - self.weight) * b)
            .collect())
    }
}

/// Builds the cut-ring chain sites. `g(phys, pauli)` is the per-qubit vertex
/// weight; the physical extent is `phys`.
fn chain_sites(
    m: usize,
    f: &[f64],
    transfers: &[Vec<f64>],
    phys: usize,
    g: impl Fn(usize, usize) -> f64,
) -> Result<Mps> {
    assert_eq!(transfers.len(), m);
    let wrap = |i1: usize, j1: usize| i1 * 4 + j1;
    let mut sites = Vec::with_capacity(2 * m);

    // Qubit 1: emit f over the first pair, pin (i1, j1) on the wrap.
    let mut first = vec![0.0; phys * 64];
    for y in 0..phys {
        for i1 in 0..4 {
            let gv = g(y, i1);
            if gv == 0.0 {
                continue;
            }
            for j1 in 0..4 {
                for j2 in 0..4 {
                    first[y * 64 + j2 * 16 + wrap(i1, j1)] = gv * f[j1 * 4 + j2];
                }
            }
        }
    }
    sites.push(MpsSite::new(phys, 1, 64, first)?);

    for kappa in 1..m {
        // Qubit 2k: apply coupler kappa, emitting its output slot for
        // qubit 2k+1 onto the bond.
        let t = &transfers[kappa - 1];
        let mut even = vec![0.0; phys * 64 * 256];
        for y in 0..phys {
            for j in 0..4 {
                for ip in 0..4 {
                    for jp in 0..4 {
                        let mut v = 0.0;
                        for i in 0..4 {
                            v += g(y, i) * t[(i * 4 + ip) * 16 + (j * 4 + jp)];
                        }
                        if v == 0.0 {
                            continue;
                        }
                        for w in 0..16 {
                            even[(y * 64 + j * 16 + w) * 256 + (ip * 4 + jp) * 16 + w] = v;
                        }
                    }
                }
            }
        }
        sites.push(MpsSite::new(phys, 64, 256, even)?);

        // Qubit 2k+1: consume the coupler output, emit f over pair kappa+1.
        let mut odd = vec![0.0; phys * 256 * 64];
        for y in 0..phys {
            for ip in 0..4 {
                let gv = g(y, ip);
                if gv == 0.0 {
                    continue;
                }
                for jp in 0..4 {
                    for jpp in 0..4 {
                        let v = gv * f[jp * 4 + jpp];
                        if v == 0.0 {
                            continue;
                        }
                        for w in 0..16 {
                            odd[(y * 256 + (ip * 4 + jp) * 16 + w) * 64 + jpp * 16 + w] = v;
                        }
                    }
                }
            }
        }
        sites.push(MpsSite::new(phys, 256, 64, odd)?);
    }

    // Qubit 2m: the wrapping coupler closes onto the pinned (i1, j1).
    let t = &transfers[m - 1];
    let mut last = vec![0.0; phys * 64];
    for y in 0..phys {
        for j in 0..4 {
            for i1 in 0..4 {
                for j1 in 0..4 {
                    let mut v = 0.0;
                    for i in 0..4 {
                        v += g(y, i) * t[(i * 4 + i1) * 16 + (j * 4 + j1)];
                    }
                    last[y * 64 + j * 16 + wrap(i1, j1)] = v;
                }
            }
        }
    }
    sites.push(MpsSite::new(phys, 64, 1, last)?);
    Ok(Mps::new(sites)?)
}

/// Vertex weight of a Pauli measurement box: g[(a,x), i] = [i = 0] +
/// (-1)^a [i = x+1], inputs 0/1/2 meaning sigma_x/sigma_y/sigma_z.
fn pauli_vertex(inputs: usize) -> impl Fn(usize, usize) -> f64 {
    move |y, i| {
        let (a, x) = (y / inputs, y % inputs);
        if i == 0 {
            1.0
        } else if i == x + 1 {
            if a == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    }
}

/// Two-party box of a two-qubit state under Pauli measurements listed per
/// input (indices into sigma_x/sigma_y/sigma_z as 1/2/3).
pub fn pair_box(state: &[C64], paulis: &[usize]) -> Result<NsBox> {
    if paulis.is_empty() || paulis.iter().any(|&p| p == 0 || p > 3) {
        return Err(BoxError::BadModel(
            "measurement list must name Pauli axes".into(),
        ));
    }
    let f = pair_pauli_coeffs(state)?;
    let n = inner(state, state).re;
    if (n - 1.0).abs() > 1e-9 {
        return Err(BoxError::BadModel("pair state is not normalized".into()));
    }
    let ins = paulis.len();
    let sc = Scenario::uniform(2, 2, ins)?;
    let g = |y: usize, i: usize| -> f64 {
        let (a, x) = (y / ins, y % ins);
        if i == 0 {
            1.0
        } else if i == paulis[x] {
            if a == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    };
    let mut data = vec![0.0; (2 * ins) * (2 * ins)];
    for ya in 0..2 * ins {
        for yb in 0..2 * ins {
            let mut v = 0.0;
            for i in 0..4 {
                let ga = g(ya, i);
                if ga == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    v += ga * g(yb, j) * f[i * 4 + j];
                }
            }
            data[ya * 2 * ins + yb] = v;
        }
    }
    let t = tensor_core::Tensor::new(
        vec![
            tensor_core::Leg::new(0, tensor_core::Dir::Out, 2 * ins),
            tensor_core::Leg::new(1, tensor_core::Dir::Out, 2 * ins),
        ],
        data,
    )?;
    let mut b = NsBox::from_dense(sc, Representation::Standard, t)?;
    b.verify_physical()?;
    Ok(b)
}

/// Chain box of the tilted-pair ring coupled by the given two-qubit
/// unitaries, as a 2m-party MPS over sigma_x/sigma_y/sigma_z measurements.
/// Coupler k acts on qubits (2k, 2k+1), the last wrapping to qubit 1 with
/// the even qubit in its first factor.
pub fn fcs_chain_box(unitaries: &[CMat]) -> Result<NsBox> {
    let m = unitaries.len();
    if m == 0 {
        return Err(BoxError::BadModel("at least one coupler required".into()));
    }
    let f = pair_pauli_coeffs(&tilted_pair_state())?;
    let transfers: Vec<Vec<f64>> = unitaries
        .iter()
        .map(pauli_transfer16)
        .collect::<Result<_>>()?;
    let mps = chain_sites(m, &f, &transfers, 6, pauli_vertex(3))?;
    let sc = Scenario::uniform(2 * m, 2, 3)?;
    Ok(NsBox::from_mps(sc, Representation::Standard, mps)?.assume_physical())
}

/// A 2m-qubit state in Pauli coefficient form, rho = sum r[i] sigma_{i},
/// held as an MPS over the per-qubit Pauli index.
#[derive(Debug, Clone)]
pub struct PauliMps {
    mps: Mps,
}

impl PauliMps {
    pub fn n_qubits(&self) -> usize {
        self.mps.len()
    }

    pub fn mps(&self) -> &Mps {
        &self.mps
    }

    pub fn coeff(&self, paulis: &[usize]) -> Result<f64> {
        Ok(self.mps.entry(paulis)?)
    }

    pub fn trace(&self) -> Result<f64> {
        let n = self.n_qubits();
        Ok(self.coeff(&vec![0; n])? * (1u64 << n) as f64)
    }

    /// Dense density matrix; exponential, for small chains only.
    pub fn to_density(&self) -> Result<CMat> {
        let n = self.n_qubits();
        if n > 8 {
            return Err(BoxError::BadModel(
                "chain too long for a dense density".into(),
            ));
        }
        let dim = 1usize << n;
        let coeffs = self.mps.to_dense()?;
        let mut rho = CMat::zeros(dim, dim);
        let mut idx = vec![0usize; n];
        for (flat, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut rem = flat;
            for k in (0..n).rev() {
                idx[k] = rem % 4;
                rem /= 4;
            }
            // sigma_{i} has one entry per row; accumulate c * sigma into rho.
            for row in 0..dim {
                let mut col = 0usize;
                let mut val = C64::new(1.0, 0.0);
                for (k, &p) in idx.iter().enumerate() {
                    let bit = (row >> (n - 1 - k)) & 1;
                    let (cbit, factor) = match p {
                        0 => (bit, C64::new(1.0, 0.0)),
                        1 => (1 - bit, C64::new(1.0, 0.0)),
                        2 => (
                            1 - bit,
                            if bit == 0 {
                                C64::new(0.0, -1.0)
                            } else {
                                C64::new(0.0, 1.0)
                            },
                        ),
                        _ => (
                            bit,
                            if bit == 0 {
                                C64::new(1.0, 0.0)
                            } else {
                                C64::new(-1.0, 0.0)
                            },
                        ),
                    };
                    col = col << 1 | cbit;
                    val *= factor;
                }
                rho[(row, col)] += val * c;
            }
        }
        Ok(rho)
    }
}

/// Chain state of the singlet ring coupled by mixed unitary channels, in
/// Pauli coefficient form. Channel k acts on qubits (2k, 2k+1), the last
/// wrapping to qubit 1 with the even qubit in its first factor.
pub fn fcs_chain_state(channels: &[MixedPairChannel]) -> Result<PauliMps> {
    let m = channels.len();
    if m == 0 {
        return Err(BoxError::BadModel("at least one channel required".into()));
    }
    let f = pair_pauli_coeffs(&singlet_state())?;
    let transfers: Vec<Vec<f64>> = channels
        .iter()
        .map(MixedPairChannel::transfer)
        .collect::<Result<_>>()?;
    let mps = chain_sites(m, &f, &transfers, 4, |y, i| if y == i { 1.0 } else { 0.0 })?;
    Ok(PauliMps { mps })
}

//! Seeded samplers for states, measurements and boxes. All randomness flows
//! through a counter-based generator keyed by a caller-supplied seed, so
//! every downstream experiment is reproducible bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use tensor_core::{Dir, Leg, Tensor};

use crate::cmat::{normalize, CMat, C64};
use crate::nsbox::{deterministic_box, enumerate_assignments, NsBox, Representation};
use crate::scenario::Scenario;
use crate::upb::ProductVector;
use crate::Result;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn complex_gaussian(rng: &mut ChaCha20Rng) -> C64 {
    // Box-Muller with guarded log argument.
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen::<f64>();
    let r = (-2.0 * u.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * v;
    C64::new(r * th.cos(), r * th.sin())
}

/// Haar-random unitary: Ginibre matrix orthonormalized column by column
/// (positive-diagonal QR, whose Q factor is Haar distributed).
pub fn haar_unitary(d: usize, rng: &mut ChaCha20Rng) -> CMat {
    assert!(d >= 1);
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| (0..d).map(|_| complex_gaussian(rng)).collect())
        .collect();
    for i in 0..d {
        for j in 0..i {
            let prev = cols[j].clone();
            let ov: C64 = prev.iter().zip(&cols[i]).map(|(p, c)| p.conj() * c).sum();
            for (c, p) in cols[i].iter_mut().zip(&prev) {
                *c -= ov * p;
            }
        }
        normalize(&mut cols[i]);
    }
    let mut u = CMat::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            u[(i, j)] = v;
        }
    }
    u
}

pub fn random_pure(d: usize, rng: &mut ChaCha20Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    normalize(&mut v);
    v
}

pub fn random_product_pure(dims: &[usize], rng: &mut ChaCha20Rng) -> ProductVector {
    ProductVector::new(dims.iter().map(|&d| random_pure(d, rng)).collect())
}

/// Full-rank random density matrix G G^dag / tr.
pub fn random_density(d: usize, rng: &mut ChaCha20Rng) -> CMat {
    let mut g = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = complex_gaussian(rng);
        }
    }
    let m = g.mul(&g.dagger());
    let tr = m.trace().re;
    m.scale(C64::new(1.0 / tr, 0.0))
}

/// Rank-1 projective measurement with d outcomes from a Haar unitary's
/// columns.
pub fn random_projective_meas(d: usize, rng: &mut ChaCha20Rng) -> Vec<CMat> {
    let u = haar_unitary(d, rng);
    (0..d)
        .map(|j| {
            let col: Vec<C64> = (0..d).map(|i| u[(i, j)]).collect();
            CMat::outer(&col, &col)
        })
        .collect()
}

const MAX_FULL_MIX: usize = 256;
const SAMPLED_EXTREMES: usize = 32;

/// Random local box: an exponentially weighted mixture of deterministic
/// boxes. Scenarios with at most 256 deterministic extremes mix all of them;
/// larger ones mix 32 sampled assignments.
pub fn random_local_box(sc: &Scenario, rng: &mut ChaCha20Rng) -> Result<NsBox> {
    let m = sc.parties();
    let total: f64 = (0..m)
        .map(|k| (sc.outputs(k) as f64).powi(sc.inputs(k) as i32))
        .product();
    let assignments: Vec<Vec<Vec<usize>>> = if total <= MAX_FULL_MIX as f64 {
        enumerate_assignments(sc)
    } else {
        (0..SAMPLED_EXTREMES)
            .map(|_| {
                (0..m)
                    .map(|k| {
                        (0..sc.inputs(k))
                            .map(|_| rng.gen_range(0..sc.outputs(k)))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    let mut weights: Vec<f64> = (0..assignments.len())
        .map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln())
        .collect();
    let z: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= z;
    }
    let legs: Vec<Leg> = (0..m)
        .map(|k| Leg::new(k as u32, Dir::Out, sc.party_dim(k)))
        .collect();
    let mut data = vec![0.0; sc.dense_len()];
    for (assignment, w) in assignments.iter().zip(&weights) {
        let det = deterministic_box(sc, assignment)?;
        for (slot, v) in data.iter_mut().zip(det.dense()?.data()) {
            *slot += w * v;
        }
    }
    let t = Tensor::new(legs, data)?;
    let mut b = NsBox::from_dense(sc.clone(), Representation::Standard, t)?;
    b.verify_physical()?;
    Ok(b)
}

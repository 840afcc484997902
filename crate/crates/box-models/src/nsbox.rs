//! The box type and the elementary box constructors.

use tensor_core::{Dir, Leg, Mps, Tensor};

use crate::abbrev::{abbrev_to_std, mps_abbrev_to_std, mps_std_to_abbrev, std_to_abbrev};
use crate::scenario::{multi_indices, Scenario};
use crate::{BoxError, Result};

/// Slice normalization tolerance for physical boxes.
pub const NORM_TOL: f64 = 1e-9;
/// No-signalling tolerance for physical boxes.
pub const NS_TOL: f64 = 1e-9;
/// Entry negativity tolerance for physical boxes.
pub const NEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Standard,
    Abbreviated,
}

#[derive(Debug, Clone)]
pub enum BoxData {
    Dense(Tensor),
    Mps(Mps),
}

/// A box over the no-signalling span of a scenario. Entries may be negative
/// (coarse-grained pseudo-boxes); `physical` marks boxes verified to be
/// nonnegative, normalized and no-signalling.
#[derive(Debug, Clone)]
pub struct NsBox {
    scenario: Scenario,
    rep: Representation,
    physical: bool,
    data: BoxData,
}

impl NsBox {
    pub fn from_dense(scenario: Scenario, rep: Representation, data: Tensor) -> Result<Self> {
        for k in 0..scenario.parties() {
            let want = match rep {
                Representation::Standard => scenario.party_dim(k),
                Representation::Abbreviated => scenario.abbrev_party_dim(k),
            };
            let leg = data
                .legs()
                .iter()
                .find(|l| l.label == k as u32)
                .ok_or_else(|| BoxError::BadBox(format!("missing leg for party {k}")))?;
            if leg.extent != want || leg.dir != Dir::Out {
                return Err(BoxError::BadBox(format!(
                    "party {k} leg does not match the scenario"
                )));
            }
        }
        Ok(Self {
            scenario,
            rep,
            physical: false,
            data: BoxData::Dense(data),
        })
    }

    pub fn from_mps(scenario: Scenario, rep: Representation, mps: Mps) -> Result<Self> {
        if mps.len() != scenario.parties() {
            return Err(BoxError::BadBox(format!(
                "MPS of {} sites in a {}-party scenario",
                mps.len(),
                scenario.parties()
            )));
        }
        for k in 0..scenario.parties() {
            let want = match rep {
                Representation::Standard => scenario.party_dim(k),
                Representation::Abbreviated => scenario.abbrev_party_dim(k),
            };
            if mps.site(k).phys != want {
                return Err(BoxError::BadBox(format!(
                    "site {k} physical extent does not match the scenario"
                )));
            }
        }
        Ok(Self {
            scenario,
            rep,
            physical: false,
            data: BoxData::Mps(mps),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn representation(&self) -> Representation {
        self.rep
    }

    pub fn data(&self) -> &BoxData {
        &self.data
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    /// Marks the box physical without re-verification. For constructors
    /// whose output is no-signalling and normalized by derivation.
    pub fn assume_physical(mut self) -> Self {
        self.physical = true;
        self
    }

    pub fn is_mps(&self) -> bool {
        matches!(self.data, BoxData::Mps(_))
    }

    pub fn max_bond(&self) -> usize {
        match &self.data {
            BoxData::Mps(m) => m.max_bond(),
            BoxData::Dense(_) => 1,
        }
    }

    /// Dense tensor in the current representation.
    pub fn dense(&self) -> Result<Tensor> {
        match &self.data {
            BoxData::Dense(t) => Ok(t.clone()),
            BoxData::Mps(m) => {
                let data = m.to_dense()?;
                let legs: Vec<Leg> = m
                    .sites()
                    .iter()
                    .enumerate()
                    .map(|(k, s)| Leg::new(k as u32, Dir::Out, s.phys))
                    .collect();
                Ok(Tensor::new(legs, data)?)
            }
        }
    }

    /// Dense tensor in the standard representation.
    pub fn dense_standard(&self) -> Result<Tensor> {
        let t = self.dense()?;
        match self.rep {
            Representation::Standard => Ok(t),
            Representation::Abbreviated => abbrev_to_std(&self.scenario, &t),
        }
    }

    /// Dense tensor in the abbreviated representation. Faithful on
    /// no-signalling data only.
    pub fn dense_abbrev(&self) -> Result<Tensor> {
        let t = self.dense()?;
        match self.rep {
            Representation::Standard => std_to_abbrev(&self.scenario, &t),
            Representation::Abbreviated => Ok(t),
        }
    }

    /// Same box converted to the other representation, preserving form.
    pub fn to_representation(&self, rep: Representation) -> Result<Self> {
        if rep == self.rep {
            return Ok(self.clone());
        }
        let data = match &self.data {
            BoxData::Dense(t) => BoxData::Dense(match rep {
                Representation::Standard => abbrev_to_std(&self.scenario, t)?,
                Representation::Abbreviated => std_to_abbrev(&self.scenario, t)?,
            }),
            BoxData::Mps(m) => BoxData::Mps(match rep {
                Representation::Standard => mps_abbrev_to_std(&self.scenario, m)?,
                Representation::Abbreviated => mps_std_to_abbrev(&self.scenario, m)?,
            }),
        };
        Ok(Self {
            scenario: self.scenario.clone(),
            rep,
            physical: self.physical,
            data,
        })
    }

    /// P(a⃗|x⃗) from whatever representation is stored.
    pub fn prob(&self, a: &[usize], x: &[usize]) -> Result<f64> {
        let m = self.scenario.parties();
        if a.len() != m || x.len() != m {
            return Err(BoxError::BadBox("index arity mismatch".into()));
        }
        match self.rep {
            Representation::Standard => {
                let idx: Vec<usize> = (0..m)
                    .map(|k| self.scenario.doubled(k, a[k], x[k]))
                    .collect();
                self.entry(&idx)
            }
            Representation::Abbreviated => {
                let std = self.to_representation(Representation::Standard)?;
                std.prob(a, x)
            }
        }
    }

    fn entry(&self, idx: &[usize]) -> Result<f64> {
        match &self.data {
            BoxData::Dense(t) => Ok(t.get(idx)),
            BoxData::Mps(m) => Ok(m.entry(idx)?),
        }
    }

    /// The norm E(P): outputs summed at the all-zero input.
    pub fn norm(&self) -> Result<f64> {
        match self.rep {
            Representation::Standard => {
                let m = self.scenario.parties();
                let mut total = 0.0;
                let extents: Vec<usize> = (0..m).map(|k| self.scenario.outputs(k)).collect();
                for a in multi_indices(&extents) {
                    total += self.prob(&a, &vec![0; m])?;
                }
                Ok(total)
            }
            Representation::Abbreviated => {
                self.entry(&vec![Scenario::EMPTY; self.scenario.parties()])
            }
        }
    }

    /// Verifies positivity, slice normalization and no-signalling on the
    /// dense standard form, and sets the physical flag.
    pub fn verify_physical(&mut self) -> Result<()> {
        let t = self.dense_standard()?;
        let sc = &self.scenario;
        let m = sc.parties();
        let out_extents: Vec<usize> = (0..m).map(|k| sc.outputs(k)).collect();
        let in_extents: Vec<usize> = (0..m).map(|k| sc.inputs(k)).collect();
        let entry = |a: &[usize], x: &[usize]| -> f64 {
            let idx: Vec<usize> = (0..m).map(|k| sc.doubled(k, a[k], x[k])).collect();
            t.get(&idx)
        };
        for x in multi_indices(&in_extents) {
            let mut slice = 0.0;
            for a in multi_indices(&out_extents) {
                let p = entry(&a, &x);
                if p < -NEG_TOL {
                    return Err(BoxError::BadBox(format!("negative entry {p:.3e}")));
                }
                slice += p;
            }
            if (slice - 1.0).abs() > NORM_TOL {
                return Err(BoxError::BadBox(format!(
                    "slice sums to {slice:.12} at input {x:?}"
                )));
            }
        }
        check_no_signalling(sc, &t, NS_TOL)?;
        self.physical = true;
        Ok(())
    }
}

/// Checks that the marginal over each party's output is independent of that
/// party's input, on dense standard data.
pub fn check_no_signalling(sc: &Scenario, t: &Tensor, tol: f64) -> Result<()> {
    let m = sc.parties();
    for k in 0..m {
        if sc.inputs(k) < 2 {
            continue;
        }
        // Extents of everyone else's doubled index plus party k's input.
        let mut extents: Vec<usize> = (0..m)
            .filter(|&j| j != k)
            .map(|j| sc.party_dim(j))
            .collect();
        extents.push(sc.inputs(k));
        let mut baseline = vec![f64::NAN; extents.iter().take(m - 1).product()];
        for idx in multi_indices(&extents) {
            let xk = idx[m - 1];
            let mut marg = 0.0;
            for ak in 0..sc.outputs(k) {
                let mut full = vec![0usize; m];
                let mut pos = 0;
                for (j, slot) in full.iter_mut().enumerate() {
                    if j == k {
                        *slot = sc.doubled(k, ak, xk);
                    } else {
                        *slot = idx[pos];
                        pos += 1;
                    }
                }
                marg += t.get(&full);
            }
            let slot = {
                let mut s = 0usize;
                for (v, e) in idx.iter().zip(extents.iter()).take(m - 1) {
                    s = s * e + v;
                }
                s
            };
            if xk == 0 {
                baseline[slot] = marg;
            } else if (marg - baseline[slot]).abs() > tol {
                return Err(BoxError::BadBox(format!(
                    "party {k} signals: marginal moves by {:.3e}",
                    (marg - baseline[slot]).abs()
                )));
            }
        }
    }
    Ok(())
}

/// Enumerates per-party deterministic assignments lexicographically: the
/// tuple (f(0), f(1), ...) with f(0) most significant, party 0 outermost.
pub fn enumerate_assignments(sc: &Scenario) -> Vec<Vec<Vec<usize>>> {
    let per_party: Vec<Vec<Vec<usize>>> = (0..sc.parties())
        .map(|k| {
            let (o, i) = (sc.outputs(k), sc.inputs(k));
            let mut fs = Vec::with_capacity(o.pow(i as u32));
            let mut f = vec![0usize; i];
            loop {
                fs.push(f.clone());
                let mut pos = i;
                loop {
                    if pos == 0 {
                        return fs;
                    }
                    pos -= 1;
                    f[pos] += 1;
                    if f[pos] < o {
                        break;
                    }
                    f[pos] = 0;
                }
            }
        })
        .collect();
    let mut combos = vec![Vec::new()];
    for fs in &per_party {
        let mut next = Vec::with_capacity(combos.len() * fs.len());
        for c in &combos {
            for f in fs {
                let mut c = c.clone();
                c.push(f.clone());
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

/// The deterministic box where party k answers input x with assignment[k][x].
pub fn deterministic_box(sc: &Scenario, assignment: &[Vec<usize>]) -> Result<NsBox> {
    if assignment.len() != sc.parties() {
        return Err(BoxError::BadBox("one assignment per party required".into()));
    }
    for (k, f) in assignment.iter().enumerate() {
        if f.len() != sc.inputs(k) {
            return Err(BoxError::BadBox(format!("party {k} assignment arity")));
        }
        if f.iter().any(|&a| a >= sc.outputs(k)) {
            return Err(BoxError::BadBox(format!(
                "party {k} assignment out of output range"
            )));
        }
    }
    let legs: Vec<Leg> = (0..sc.parties())
        .map(|k| Leg::new(k as u32, Dir::Out, sc.party_dim(k)))
        .collect();
    let t = Tensor::from_fn(legs, |idx| {
        let hit = idx.iter().enumerate().all(|(k, &y)| {
            let (a, x) = sc.split(k, y);
            assignment[k][x] == a
        });
        if hit {
            1.0
        } else {
            0.0
        }
    })?;
    let mut b = NsBox::from_dense(sc.clone(), Representation::Standard, t)?;
    b.verify_physical()?;
    Ok(b)
}

/// P(a⃗|x⃗) = 2^(1-m) δ(⊕ a_k, f(x⃗)) over m binary-input binary-output
/// parties; f is a table indexed with party 0's input most significant.
pub fn boolean_xor_box(f: &[u8], m: usize) -> Result<NsBox> {
    if f.len() != 1 << m {
        return Err(BoxError::BadBox(format!(
            "table of {} entries for {m} parties",
            f.len()
        )));
    }
    let sc = Scenario::uniform(m, 2, 2)?;
    let w = 0.5_f64.powi(m as i32 - 1);
    let legs: Vec<Leg> = (0..m).map(|k| Leg::new(k as u32, Dir::Out, 4)).collect();
    let t = Tensor::from_fn(legs, |idx| {
        let mut parity = 0usize;
        let mut xs = 0usize;
        for &y in idx {
            parity ^= y >> 1;
            xs = (xs << 1) | (y & 1);
        }
        if parity as u8 == f[xs] & 1 {
            w
        } else {
            0.0
        }
    })?;
    let mut b = NsBox::from_dense(sc, Representation::Standard, t)?;
    b.verify_physical()?;
    Ok(b)
}

/// Ring function ⊕ x_k x_{k+1} ⊕ x_m x_1 behind the generalized Svetlichny
/// box, as a table for [`boolean_xor_box`].
pub fn ring_xor_fn(m: usize) -> Vec<u8> {
    table(m, |x| {
        let mut v = 0;
        for k in 0..m {
            v ^= x[k] & x[(k + 1) % m];
        }
        v
    })
}

/// 1 iff the inputs contain r consecutive ones.
pub fn consecutive_ones_fn(m: usize, r: usize) -> Vec<u8> {
    table(m, |x| {
        let mut run = 0usize;
        for &b in x {
            run = if b == 1 { run + 1 } else { 0 };
            if run >= r {
                return 1;
            }
        }
        0
    })
}

/// 1 iff half or more of the inputs are ones.
pub fn majority_fn(m: usize) -> Vec<u8> {
    table(m, |x| {
        let ones: usize = x.iter().map(|&b| b as usize).sum();
        (2 * ones >= m) as u8
    })
}

fn table(m: usize, f: impl Fn(&[u8]) -> u8) -> Vec<u8> {
    (0..1usize << m)
        .map(|xs| {
            let bits: Vec<u8> = (0..m).map(|k| ((xs >> (m - 1 - k)) & 1) as u8).collect();
            f(&bits)
        })
        .collect()
}

//! Connectors: linear maps between box scenarios that send the world's state
//! set into its subnormalized state set.  Stored as matrices on abbreviated
//! coordinates; the standard doubled-leg tensor is derived on demand, so a
//! connector never carries redundant gauge freedom.

use box_models::{NsBox, Representation, Scenario};
use tensor_core::tensor::{Dir, Leg, Tensor};
use tensor_core::MAX_DENSE_ENTRIES;

use crate::abbrev_map::AbbreviationMap;
use crate::membership::{decompose, Decomposition};
use crate::vertices::VertexSet;
use crate::{LocError, Result, FEAS_TOL, POS_TOL};

/// State set a connector is certified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum World {
    Loc,
    Quant,
    Sep,
    Steer,
}

impl World {
    pub fn name(self) -> &'static str {
        match self {
            World::Loc => "loc",
            World::Quant => "quant",
            World::Sep => "sep",
            World::Steer => "steer",
        }
    }

    pub fn from_name(s: &str) -> Result<World> {
        match s {
            "loc" => Ok(World::Loc),
            "quant" => Ok(World::Quant),
            "sep" => Ok(World::Sep),
            "steer" => Ok(World::Steer),
            _ => Err(LocError::Parse(format!("unknown world {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Connector {
    in_scenario: Scenario,
    out_scenario: Scenario,
    /// Row-major (abbrev_out x abbrev_in).
    w_ab: Vec<f64>,
    world: World,
    cert_ref: Option<String>,
}

impl Connector {
    pub fn from_abbrev(
        in_scenario: Scenario,
        out_scenario: Scenario,
        w_ab: Vec<f64>,
        world: World,
    ) -> Result<Connector> {
        if w_ab.len() != out_scenario.abbrev_len() * in_scenario.abbrev_len() {
            return Err(LocError::Shape("connector matrix size mismatch".into()));
        }
        Ok(Connector {
            in_scenario,
            out_scenario,
            w_ab,
            world,
            cert_ref: None,
        })
    }

    /// Read a map off its standard doubled-leg tensor (out legs first, then
    /// in legs).  Only the no-signalling action survives: W_ab = R_out W S_in.
    pub fn from_std_tensor(
        in_scenario: Scenario,
        out_scenario: Scenario,
        t: &Tensor,
        world: World,
    ) -> Result<Connector> {
        let m_out = out_scenario.parties();
        let m_in = in_scenario.parties();
        if t.rank() != m_out + m_in {
            return Err(LocError::Shape("tensor rank mismatch".into()));
        }
        for (k, leg) in t.legs().iter().enumerate() {
            let want = if k < m_out {
                out_scenario.party_dim(k)
            } else {
                in_scenario.party_dim(k - m_out)
            };
            if leg.extent != want {
                return Err(LocError::Shape(format!("leg {k} extent mismatch")));
            }
        }
        let map_in = AbbreviationMap::new(&in_scenario);
        let map_out = AbbreviationMap::new(&out_scenario);
        let (ab_in, ab_out) = (map_in.dim_abbrev(), map_out.dim_abbrev());
        let (std_in, std_out) = (map_in.dim_std(), map_out.dim_std());
        // Columns over input vertices would lose information; reduce both
        // sides instead: rows first (R_out), then expand-side section.
        let data = t.data();
        let mut w_ab = vec![0.0; ab_out * ab_in];
        // W acting on abbreviated input basis vectors: column q of S_in.
        let mut s_col = vec![0.0; std_in];
        for qi in 0..ab_in {
            let mut unit = vec![0.0; ab_in];
            unit[qi] = 1.0;
            let col = map_in.expand(&unit)?;
            s_col.copy_from_slice(&col);
            // image in standard out coordinates
            let mut img = vec![0.0; std_out];
            for (yo, img_v) in img.iter_mut().enumerate() {
                let row = &data[yo * std_in..(yo + 1) * std_in];
                *img_v = row.iter().zip(&s_col).map(|(a, b)| a * b).sum();
            }
            let red = map_out.reduce(&img)?;
            for (qo, v) in red.iter().enumerate() {
                w_ab[qo * ab_in + qi] = *v;
            }
        }
        Ok(Connector {
            in_scenario,
            out_scenario,
            w_ab,
            world,
            cert_ref: None,
        })
    }

    pub fn identity(sc: &Scenario) -> Connector {
        let ab = sc.abbrev_len();
        let mut w_ab = vec![0.0; ab * ab];
        for i in 0..ab {
            w_ab[i * ab + i] = 1.0;
        }
        Connector {
            in_scenario: sc.clone(),
            out_scenario: sc.clone(),
            w_ab,
            world: World::Loc,
            cert_ref: None,
        }
    }

    pub fn in_scenario(&self) -> &Scenario {
        &self.in_scenario
    }

    pub fn out_scenario(&self) -> &Scenario {
        &self.out_scenario
    }

    pub fn world(&self) -> World {
        self.world
    }

    pub fn w_ab(&self) -> &[f64] {
        &self.w_ab
    }

    pub fn cert_ref(&self) -> Option<&str> {
        self.cert_ref.as_deref()
    }

    pub fn set_cert_ref(&mut self, r: impl Into<String>) {
        self.cert_ref = Some(r.into());
    }

    /// Image of abbreviated input coordinates.
    pub fn apply_abbrev(&self, q: &[f64]) -> Result<Vec<f64>> {
        let ab_in = self.in_scenario.abbrev_len();
        let ab_out = self.out_scenario.abbrev_len();
        if q.len() != ab_in {
            return Err(LocError::Shape("abbreviated length mismatch".into()));
        }
        let mut out = vec![0.0; ab_out];
        for (o, out_v) in out.iter_mut().enumerate() {
            let row = &self.w_ab[o * ab_in..(o + 1) * ab_in];
            *out_v = row.iter().zip(q).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    /// Apply to a whole box.  The result is returned unverified: connectors
    /// for one world may map boxes of a larger set to signed pseudo-boxes.
    pub fn apply(&self, b: &NsBox) -> Result<NsBox> {
        if b.scenario() != &self.in_scenario {
            return Err(LocError::Shape("box scenario mismatch".into()));
        }
        let q = AbbreviationMap::new(&self.in_scenario).abbreviate(b)?;
        let img = self.apply_abbrev(&q)?;
        let legs: Vec<Leg> = (0..self.out_scenario.parties())
            .map(|k| {
                Leg::new(
                    k as u32,
                    Dir::Out,
                    self.out_scenario.abbrev_party_dim(k),
                )
            })
            .collect();
        let t = Tensor::new(legs, img)?;
        Ok(NsBox::from_dense(
            self.out_scenario.clone(),
            Representation::Abbreviated,
            t,
        )?)
    }

    /// Standard doubled-leg tensor, out legs (labels 0..) before in legs.
    pub fn std_tensor(&self) -> Result<Tensor> {
        let map_in = AbbreviationMap::new(&self.in_scenario);
        let map_out = AbbreviationMap::new(&self.out_scenario);
        let (std_in, std_out) = (map_in.dim_std(), map_out.dim_std());
        if std_in.saturating_mul(std_out) > MAX_DENSE_ENTRIES {
            return Err(LocError::TooLarge("standard connector tensor".into()));
        }
        let ab_in = map_in.dim_abbrev();
        let ab_out = map_out.dim_abbrev();
        // W_std = S_out W_ab R_in, assembled row by row.
        let mut rows_red = vec![0.0; ab_out * std_in];
        let mut unit = vec![0.0; std_in];
        for yi in 0..std_in {
            unit[yi] = 1.0;
            let red = map_in.reduce(&unit)?;
            unit[yi] = 0.0;
            for (qo, chunk) in rows_red.chunks_mut(std_in).enumerate() {
                let wrow = &self.w_ab[qo * ab_in..(qo + 1) * ab_in];
                chunk[yi] = wrow.iter().zip(&red).map(|(a, b)| a * b).sum();
            }
        }
        let mut data = vec![0.0; std_out * std_in];
        let mut unit_ab = vec![0.0; ab_out];
        for qo in 0..ab_out {
            unit_ab[qo] = 1.0;
            let col = map_out.expand(&unit_ab)?;
            unit_ab[qo] = 0.0;
            for (yo, cv) in col.iter().enumerate() {
                if *cv == 0.0 {
                    continue;
                }
                let dst = &mut data[yo * std_in..(yo + 1) * std_in];
                let src = &rows_red[qo * std_in..(qo + 1) * std_in];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += cv * s;
                }
            }
        }
        let mut legs = Vec::new();
        for k in 0..self.out_scenario.parties() {
            legs.push(Leg::new(
                k as u32,
                Dir::Out,
                self.out_scenario.party_dim(k),
            ));
        }
        for k in 0..self.in_scenario.parties() {
            legs.push(Leg::new(
                (self.out_scenario.parties() + k) as u32,
                Dir::In,
                self.in_scenario.party_dim(k),
            ));
        }
        Ok(Tensor::new(legs, data)?)
    }

    /// Apply to a contiguous or scattered subset of parties of a larger box;
    /// the output parties take the position of the first party acted on,
    /// remaining parties keep their relative order.
    pub fn apply_to_parties(&self, b: &NsBox, parties: &[usize]) -> Result<NsBox> {
        let sc = b.scenario();
        let m_in = self.in_scenario.parties();
        if parties.len() != m_in {
            return Err(LocError::Shape("party count mismatch".into()));
        }
        let mut seen = vec![false; sc.parties()];
        for (t, &p) in parties.iter().enumerate() {
            if p >= sc.parties() || seen[p] {
                return Err(LocError::Shape("invalid party selection".into()));
            }
            seen[p] = true;
            if sc.outputs(p) != self.in_scenario.outputs(t)
                || sc.inputs(p) != self.in_scenario.inputs(t)
            {
                return Err(LocError::Shape(format!(
                    "party {p} type differs from connector input {t}"
                )));
            }
        }
        let w = self.std_tensor()?;
        let box_t = b.dense_standard()?;
        let m_out = self.out_scenario.parties();
        let pairs: Vec<(usize, usize)> = parties
            .iter()
            .enumerate()
            .map(|(t, &p)| (p, m_out + t))
            .collect();
        // contract_pair output order: untouched box legs, then W's out legs.
        let raw = box_t.contract_pair(&w, &pairs)?;
        let untouched: Vec<usize> = (0..sc.parties()).filter(|p| !seen[*p]).collect();
        let insert_at = untouched
            .iter()
            .filter(|&&p| p < *parties.iter().min().unwrap())
            .count();
        let n_un = untouched.len();
        let mut perm = Vec::with_capacity(n_un + m_out);
        for i in 0..insert_at {
            perm.push(i);
        }
        for o in 0..m_out {
            perm.push(n_un + o);
        }
        for i in insert_at..n_un {
            perm.push(i);
        }
        let t = raw.permute(&perm)?;
        let mut outputs = Vec::new();
        let mut inputs = Vec::new();
        for i in 0..insert_at {
            outputs.push(sc.outputs(untouched[i]));
            inputs.push(sc.inputs(untouched[i]));
        }
        for o in 0..m_out {
            outputs.push(self.out_scenario.outputs(o));
            inputs.push(self.out_scenario.inputs(o));
        }
        for i in insert_at..n_un {
            outputs.push(sc.outputs(untouched[i]));
            inputs.push(sc.inputs(untouched[i]));
        }
        let new_sc = Scenario::new(outputs, inputs)?;
        let relabeled = Tensor::new(
            (0..new_sc.parties())
                .map(|k| Leg::new(k as u32, Dir::Out, new_sc.party_dim(k)))
                .collect(),
            t.data().to_vec(),
        )?;
        Ok(NsBox::from_dense(
            new_sc,
            Representation::Standard,
            relabeled,
        )?)
    }
}

/// Decompositions of every input-vertex image into output vertices; the
/// direct witness that a map is a LOC connector.
#[derive(Debug, Clone)]
pub struct LocFeasibility {
    /// weights[i][j]: weight of output vertex j in the image of input vertex i.
    pub weights: Vec<Vec<f64>>,
}

/// Certify a connector against the local world by decomposing each
/// input-vertex image.
pub fn loc_feasibility(conn: &Connector) -> Result<LocFeasibility> {
    let vin = VertexSet::new(conn.in_scenario())?;
    let vout = VertexSet::new(conn.out_scenario())?;
    let mut weights = Vec::with_capacity(vin.len());
    for i in 0..vin.len() {
        let img = conn.apply_abbrev(vin.column(i))?;
        match decompose(&vout, &img)? {
            Decomposition::Weights(w) => weights.push(w),
            Decomposition::Separated(_) => {
                return Err(LocError::Certificate(format!(
                    "image of vertex {i} leaves the subnormalized local set"
                )))
            }
        }
    }
    Ok(LocFeasibility { weights })
}

/// Re-validate a feasibility certificate; returns the worst reconstruction
/// residual.
pub fn check_loc_feasibility(conn: &Connector, cert: &LocFeasibility) -> Result<f64> {
    let vin = VertexSet::new(conn.in_scenario())?;
    let vout = VertexSet::new(conn.out_scenario())?;
    if cert.weights.len() != vin.len() {
        return Err(LocError::Certificate("weight row count".into()));
    }
    let ab_out = conn.out_scenario().abbrev_len();
    let mut worst = 0.0f64;
    for (i, row) in cert.weights.iter().enumerate() {
        if row.len() != vout.len() {
            return Err(LocError::Certificate("weight column count".into()));
        }
        if row.iter().any(|&w| w < -POS_TOL) {
            return Err(LocError::Certificate(format!(
                "negative weight on vertex {i}"
            )));
        }
        if row.iter().sum::<f64>() > 1.0 + FEAS_TOL {
            return Err(LocError::Certificate(format!(
                "image of vertex {i} exceeds unit norm"
            )));
        }
        let img = conn.apply_abbrev(vin.column(i))?;
        let mut rec = vec![0.0; ab_out];
        for (j, w) in row.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            for (a, v) in vout.column(j).iter().enumerate() {
                rec[a] += w * v;
            }
        }
        let res = rec
            .iter()
            .zip(&img)
            .map(|(r, t)| (r - t).abs())
            .fold(0.0, f64::max);
        if res > FEAS_TOL {
            return Err(LocError::Certificate(format!(
                "vertex {i} image residual {res:.3e}"
            )));
        }
        worst = worst.max(res);
    }
    Ok(worst)
}

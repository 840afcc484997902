//! Conversion between standard and abbreviated box representations.
//!
//! The abbreviated form drops each party's last outcome and records, per
//! party, the unmeasured symbol `∅` (outputs summed at input 0) plus the
//! entries with output â < O - 1. On no-signalling data the two forms carry
//! the same information; expansion after abbreviation projects arbitrary
//! dense data onto the no-signalling subspace.

use tensor_core::{Dir, Leg, Mps, MpsSite, Tensor};

use crate::scenario::Scenario;
use crate::{BoxError, Result};

/// Per-party expansion (std x abbrev) and abbreviation (abbrev x std)
/// matrices, row-major.
#[derive(Debug, Clone)]
pub struct PartyMaps {
    pub dim_std: usize,
    pub dim_abbrev: usize,
    /// expand[y * dim_abbrev + q]
    pub expand: Vec<f64>,
    /// reduce[q * dim_std + y]
    pub reduce: Vec<f64>,
}

impl PartyMaps {
    pub fn new(scenario: &Scenario, party: usize) -> Self {
        let o = scenario.outputs(party);
        let i = scenario.inputs(party);
        let dim_std = o * i;
        let dim_abbrev = i * (o - 1) + 1;
        let mut expand = vec![0.0; dim_std * dim_abbrev];
        let mut reduce = vec![0.0; dim_abbrev * dim_std];
        for a in 0..o {
            for x in 0..i {
                let y = scenario.doubled(party, a, x);
                // Entries with the last outcome are recovered from the
                // unmeasured symbol minus the kept outcomes at that input.
                if a == o - 1 {
                    expand[y * dim_abbrev] = 1.0;
                    for ah in 0..o - 1 {
                        expand[y * dim_abbrev + scenario.abbrev(party, ah, x)] = -1.0;
                    }
                } else {
                    expand[y * dim_abbrev + scenario.abbrev(party, a, x)] = 1.0;
                }
                if x == 0 {
                    reduce[y] = 1.0;
                }
                if a < o - 1 {
                    reduce[scenario.abbrev(party, a, x) * dim_std + y] = 1.0;
                }
            }
        }
        Self {
            dim_std,
            dim_abbrev,
            expand,
            reduce,
        }
    }

    fn expand_tensor(&self, std_label: u32, abbrev_label: u32) -> Tensor {
        Tensor::new(
            vec![
                Leg::new(std_label, Dir::Out, self.dim_std),
                Leg::new(abbrev_label, Dir::In, self.dim_abbrev),
            ],
            self.expand.clone(),
        )
        .expect("expansion matrix shape")
    }

    fn reduce_tensor(&self, abbrev_label: u32, std_label: u32) -> Tensor {
        Tensor::new(
            vec![
                Leg::new(abbrev_label, Dir::Out, self.dim_abbrev),
                Leg::new(std_label, Dir::In, self.dim_std),
            ],
            self.reduce.clone(),
        )
        .expect("abbreviation matrix shape")
    }
}

fn convert_dense(
    scenario: &Scenario,
    data: &Tensor,
    expect_party_dim: impl Fn(&Scenario, usize) -> usize,
    map: impl Fn(&PartyMaps, u32, u32) -> Tensor,
) -> Result<Tensor> {
    let m = scenario.parties();
    if data.rank() != m {
        return Err(BoxError::BadBox(format!(
            "dense box of rank {} in an {m}-party scenario",
            data.rank()
        )));
    }
    for k in 0..m {
        let leg = data
            .legs()
            .iter()
            .find(|l| l.label == k as u32)
            .ok_or_else(|| BoxError::BadBox(format!("missing leg for party {k}")))?;
        if leg.extent != expect_party_dim(scenario, k) {
            return Err(BoxError::BadBox(format!(
                "party {k} leg extent {} does not match the scenario",
                leg.extent
            )));
        }
    }
    let mut out = data.clone();
    for k in 0..m {
        let tmp_label = m as u32 + k as u32;
        let conv = map(&PartyMaps::new(scenario, k), tmp_label, k as u32);
        let pos = out
            .legs()
            .iter()
            .position(|l| l.label == k as u32)
            .expect("checked above");
        out = out.contract_pair(&conv, &[(pos, 1)])?;
        out = relabel_leg(out, tmp_label, k as u32);
    }
    // Contractions append fresh legs last; restore party order.
    let order: Vec<usize> = (0..m as u32)
        .map(|lbl| {
            out.legs()
                .iter()
                .position(|l| l.label == lbl)
                .expect("relabelled in the loop")
        })
        .collect();
    Ok(out.permute(&order)?)
}

fn relabel_leg(t: Tensor, from: u32, to: u32) -> Tensor {
    let labels: Vec<u32> = t
        .legs()
        .iter()
        .map(|l| if l.label == from { to } else { l.label })
        .collect();
    t.relabel(&labels).expect("fresh label")
}

/// Dense standard (one leg per party, extent O*I, outgoing) to dense
/// abbreviated. Faithful only on no-signalling data.
pub fn std_to_abbrev(scenario: &Scenario, data: &Tensor) -> Result<Tensor> {
    convert_dense(
        scenario,
        data,
        |s, k| s.party_dim(k),
        |maps, tmp, party| maps.reduce_tensor(tmp, party),
    )
}

/// Dense abbreviated to dense standard.
pub fn abbrev_to_std(scenario: &Scenario, data: &Tensor) -> Result<Tensor> {
    convert_dense(
        scenario,
        data,
        |s, k| s.abbrev_party_dim(k),
        |maps, tmp, party| maps.expand_tensor(tmp, party),
    )
}

fn convert_mps(scenario: &Scenario, mps: &Mps, reduce: bool) -> Result<Mps> {
    let m = scenario.parties();
    if mps.len() != m {
        return Err(BoxError::BadBox(format!(
            "MPS of {} sites in an {m}-party scenario",
            mps.len()
        )));
    }
    let mut sites = Vec::with_capacity(m);
    for k in 0..m {
        let maps = PartyMaps::new(scenario, k);
        let site = mps.site(k);
        let (from, to, mat) = if reduce {
            (maps.dim_std, maps.dim_abbrev, &maps.reduce)
        } else {
            (maps.dim_abbrev, maps.dim_std, &maps.expand)
        };
        if site.phys != from {
            return Err(BoxError::BadBox(format!(
                "site {k} physical extent {} does not match the scenario",
                site.phys
            )));
        }
        let (l, r) = (site.left, site.right);
        let mut data = vec![0.0; to * l * r];
        for q in 0..to {
            for p in 0..from {
                let w = mat[q * from + p];
                if w == 0.0 {
                    continue;
                }
                for lr in 0..l * r {
                    data[q * l * r + lr] += w * site.data[p * l * r + lr];
                }
            }
        }
        sites.push(MpsSite::new(to, l, r, data)?);
    }
    Ok(Mps::new(sites)?)
}

/// Sitewise standard-to-abbreviated conversion of a matrix-product box.
pub fn mps_std_to_abbrev(scenario: &Scenario, mps: &Mps) -> Result<Mps> {
    convert_mps(scenario, mps, true)
}

/// Sitewise abbreviated-to-standard conversion of a matrix-product box.
pub fn mps_abbrev_to_std(scenario: &Scenario, mps: &Mps) -> Result<Mps> {
    convert_mps(scenario, mps, false)
}

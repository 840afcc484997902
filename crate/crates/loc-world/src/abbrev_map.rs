//! Bundled per-party maps between standard doubled-leg coordinates and
//! abbreviated no-signalling coordinates, with helpers for applying the
//! expansion S, the reduction R and the functional transport S' to flat
//! multi-leg arrays.
//!
//! S has full column rank by construction: R is a left inverse (R S = I), so
//! abbreviated coordinates are honest coordinates on the no-signalling
//! subspace.

use box_models::{NsBox, PartyMaps, Scenario};
use tensor_core::MAX_DENSE_ENTRIES;

use crate::{LocError, Result};

pub struct AbbreviationMap {
    scenario: Scenario,
    maps: Vec<PartyMaps>,
    /// Row-major (abbrev x std) transpose of each party expansion.
    s_t: Vec<Vec<f64>>,
}

/// Apply a row-major (out_e x in_e) matrix to leg k of a flat row-major
/// multi-leg array, replacing that leg's extent.
pub(crate) fn apply_to_leg(
    extents: &mut [usize],
    k: usize,
    out_e: usize,
    mat: &[f64],
    v: &[f64],
) -> Vec<f64> {
    let in_e = extents[k];
    let pre: usize = extents[..k].iter().product();
    let post: usize = extents[k + 1..].iter().product();
    let mut out = vec![0.0; pre * out_e * post];
    for p in 0..pre {
        for o in 0..out_e {
            let orow = (p * out_e + o) * post;
            for i in 0..in_e {
                let m = mat[o * in_e + i];
                if m == 0.0 {
                    continue;
                }
                let irow = (p * in_e + i) * post;
                for q in 0..post {
                    out[orow + q] += m * v[irow + q];
                }
            }
        }
    }
    extents[k] = out_e;
    out
}

impl AbbreviationMap {
    pub fn new(scenario: &Scenario) -> AbbreviationMap {
        let maps: Vec<PartyMaps> = (0..scenario.parties())
            .map(|k| PartyMaps::new(scenario, k))
            .collect();
        let s_t = maps
            .iter()
            .map(|m| {
                let (ns, na) = (m.dim_std, m.dim_abbrev);
                let mut t = vec![0.0; na * ns];
                for y in 0..ns {
                    for q in 0..na {
                        t[q * ns + y] = m.expand[y * na + q];
                    }
                }
                t
            })
            .collect();
        AbbreviationMap {
            scenario: scenario.clone(),
            maps,
            s_t,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn dim_std(&self) -> usize {
        self.scenario.dense_len()
    }

    pub fn dim_abbrev(&self) -> usize {
        self.scenario.abbrev_len()
    }

    pub fn party(&self, k: usize) -> &PartyMaps {
        &self.maps[k]
    }

    /// Row-major (abbrev x std) transpose of the party-k expansion.
    pub(crate) fn s_t(&self, k: usize) -> &[f64] {
        &self.s_t[k]
    }

    fn check_budget(&self) -> Result<()> {
        if self.dim_std() > MAX_DENSE_ENTRIES {
            return Err(LocError::TooLarge(format!(
                "standard dimension {} exceeds dense budget",
                self.dim_std()
            )));
        }
        Ok(())
    }

    /// Box coordinates q with P = S q.
    pub fn abbreviate(&self, b: &NsBox) -> Result<Vec<f64>> {
        if b.scenario() != &self.scenario {
            return Err(LocError::Shape("box scenario mismatch".into()));
        }
        Ok(b.dense_abbrev()?.data().to_vec())
    }

    /// P = S q as a flat standard array.
    pub fn expand(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.check_budget()?;
        if q.len() != self.dim_abbrev() {
            return Err(LocError::Shape("abbreviated length mismatch".into()));
        }
        let mut extents: Vec<usize> = (0..self.scenario.parties())
            .map(|k| self.scenario.abbrev_party_dim(k))
            .collect();
        let mut v = q.to_vec();
        for (k, m) in self.maps.iter().enumerate() {
            v = apply_to_leg(&mut extents, k, m.dim_std, &m.expand, &v);
        }
        Ok(v)
    }

    /// q = R P, the coordinate section of the expansion.
    pub fn reduce(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_budget()?;
        if p.len() != self.dim_std() {
            return Err(LocError::Shape("standard length mismatch".into()));
        }
        let mut extents: Vec<usize> = (0..self.scenario.parties())
            .map(|k| self.scenario.party_dim(k))
            .collect();
        let mut v = p.to_vec();
        for (k, m) in self.maps.iter().enumerate() {
            v = apply_to_leg(&mut extents, k, m.dim_abbrev, &m.reduce, &v);
        }
        Ok(v)
    }

    /// Functional transport: coefficients c over standard coordinates map to
    /// S'c over abbreviated ones, so that (S'c) . q = c . (S q).
    pub fn functional_to_abbrev(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_budget()?;
        if c.len() != self.dim_std() {
            return Err(LocError::Shape("standard length mismatch".into()));
        }
        let mut extents: Vec<usize> = (0..self.scenario.parties())
            .map(|k| self.scenario.party_dim(k))
            .collect();
        let mut v = c.to_vec();
        for (k, m) in self.maps.iter().enumerate() {
            v = apply_to_leg(&mut extents, k, m.dim_abbrev, &self.s_t[k], &v);
        }
        Ok(v)
    }

    /// Abbreviated coordinates of the deterministic box given by per-party
    /// input-to-output assignments; exact 0/1 entries, no tensor round trip.
    pub fn abbrev_vertex(&self, assignment: &[Vec<usize>]) -> Vec<f64> {
        let sc = &self.scenario;
        let per_party: Vec<Vec<f64>> = (0..sc.parties())
            .map(|k| {
                let (o, i) = (sc.outputs(k), sc.inputs(k));
                let mut v = vec![0.0; sc.abbrev_party_dim(k)];
                v[Scenario::EMPTY] = 1.0;
                for x in 0..i {
                    let a = assignment[k][x];
                    if a < o - 1 {
                        v[sc.abbrev(k, a, x)] = 1.0;
                    }
                }
                v
            })
            .collect();
        let mut out = vec![1.0];
        for v in &per_party {
            let mut next = Vec::with_capacity(out.len() * v.len());
            for &a in &out {
                for &b in v {
                    next.push(a * b);
                }
            }
            out = next;
        }
        out
    }

    /// Nonzero entries of the party-k expansion row for doubled index y.
    pub fn s_row_sparse(&self, k: usize, y: usize) -> Vec<(usize, f64)> {
        let m = &self.maps[k];
        (0..m.dim_abbrev)
            .filter_map(|q| {
                let v = m.expand[y * m.dim_abbrev + q];
                (v != 0.0).then_some((q, v))
            })
            .collect()
    }

    /// Nonzero entries of the party-k expansion column for abbreviated
    /// coordinate q.
    pub fn s_col_sparse(&self, k: usize, q: usize) -> Vec<(usize, f64)> {
        let m = &self.maps[k];
        (0..m.dim_std)
            .filter_map(|y| {
                let v = m.expand[y * m.dim_abbrev + q];
                (v != 0.0).then_some((y, v))
            })
            .collect()
    }

    /// Sparse full expansion row for a flat standard index: nonzero entries
    /// (flat abbreviated index, coefficient) of S restricted to that row.
    pub fn s_row_sparse_multi(&self, std_flat: usize) -> Vec<(usize, f64)> {
        let sc = &self.scenario;
        let parties = sc.parties();
        let mut ys = vec![0usize; parties];
        let mut rem = std_flat;
        for k in (0..parties).rev() {
            ys[k] = rem % sc.party_dim(k);
            rem /= sc.party_dim(k);
        }
        let per_party: Vec<Vec<(usize, f64)>> = (0..parties)
            .map(|k| self.s_row_sparse(k, ys[k]))
            .collect();
        let mut acc: Vec<(usize, f64)> = vec![(0, 1.0)];
        for (k, row) in per_party.iter().enumerate() {
            let stride = sc.abbrev_party_dim(k);
            let mut next = Vec::with_capacity(acc.len() * row.len());
            for &(base, coeff) in &acc {
                for &(q, v) in row {
                    next.push((base * stride + q, coeff * v));
                }
            }
            acc = next;
        }
        acc
    }
}

//! Certified positivity of bipartite functionals over the local polytope.
//!
//! A functional on an (A, B) scenario is nonnegative on every local box
//! exactly when it is a positive combination over the extended scenario in
//! which each of B's inputs is asked to a separate party.  The combination
//! weights are the certificate; checking them needs no optimisation.

use box_models::{NsBox, Scenario};
use tensor_core::tensor::Tensor;

use crate::abbrev_map::AbbreviationMap;
use crate::optimize::ExtendedScenario;
use crate::{LocError, Result, FEAS_TOL, POS_TOL};

/// Pair standard-coordinate coefficients with a box.
pub fn evaluate_std(coeffs: &Tensor, b: &NsBox) -> Result<f64> {
    let t = b.dense_standard()?;
    if t.len() != coeffs.len() {
        return Err(LocError::Shape("coefficient size mismatch".into()));
    }
    Ok(coeffs.dot(&t)?)
}

/// Witness that a bipartite functional is nonnegative on all local boxes.
#[derive(Debug, Clone)]
pub struct PositiveFunctionalCertificate {
    scenario: Scenario,
    /// Functional in abbreviated coordinates of `scenario`.
    functional: Vec<f64>,
    /// Nonnegative weights over standard coordinates of the extended
    /// scenario.
    cbar: Vec<f64>,
}

impl PositiveFunctionalCertificate {
    pub fn new(
        scenario: Scenario,
        functional: Vec<f64>,
        cbar: Vec<f64>,
    ) -> Result<PositiveFunctionalCertificate> {
        if scenario.parties() != 2 {
            return Err(LocError::Shape("certificate needs a bipartite scenario".into()));
        }
        if functional.len() != scenario.abbrev_len() {
            return Err(LocError::Shape("functional length mismatch".into()));
        }
        Ok(PositiveFunctionalCertificate {
            scenario,
            functional,
            cbar,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn functional(&self) -> &[f64] {
        &self.functional
    }

    pub fn cbar(&self) -> &[f64] {
        &self.cbar
    }

    pub fn value_abbrev(&self, q: &[f64]) -> f64 {
        self.functional.iter().zip(q).map(|(c, v)| c * v).sum()
    }

    pub fn value(&self, b: &NsBox) -> Result<f64> {
        let q = AbbreviationMap::new(&self.scenario).abbreviate(b)?;
        Ok(self.value_abbrev(&q))
    }

    /// Re-validate: weights nonnegative, their transport vanishes whenever
    /// two of B's extended parties answer, and matches the functional
    /// elsewhere.  Returns the worst residual.
    pub fn verify(&self) -> Result<f64> {
        let ext = ExtendedScenario::new(&self.scenario)?;
        if self.cbar.len() != ext.ext.dense_len() {
            return Err(LocError::Certificate("cbar length mismatch".into()));
        }
        if let Some(v) = self.cbar.iter().find(|&&v| v < -POS_TOL) {
            return Err(LocError::Certificate(format!("negative weight {v:.3e}")));
        }
        let scale = 1.0 + self
            .functional
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for (q, row) in ext.transport_rows().iter().enumerate() {
            let t: f64 = row.iter().map(|&(p, v)| v * self.cbar[p]).sum();
            let want = ext.link_target(q).map_or(0.0, |j| self.functional[j]);
            let res = (t - want).abs();
            if res > FEAS_TOL * scale {
                return Err(LocError::Certificate(format!(
                    "transport residual {res:.3e} at coordinate {q}"
                )));
            }
            worst = worst.max(res);
        }
        Ok(worst)
    }
}

//! Measurement scenarios and the index conventions used across the workspace.
//!
//! Per-party indices come in two flavours:
//!
//! - *doubled* index `y = a * I_k + x` over all (output, input) pairs,
//!   of extent `O_k * I_k`;
//! - *abbreviated* index over the minimal no-signalling parametrization:
//!   position 0 is the "unmeasured" symbol `∅`, followed by `1 + â * I_k + x̂`
//!   for `â < O_k - 1`, of extent `I_k * (O_k - 1) + 1`.
//!
//! Dense standard box data is a tensor with one leg per party of extent
//! `O_k * I_k`, row-major with party 1 as the most significant index.

use crate::{BoxError, Result};

/// A Bell scenario: per-party output and input counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    outputs: Vec<usize>,
    inputs: Vec<usize>,
}

impl Scenario {
    pub fn new(outputs: Vec<usize>, inputs: Vec<usize>) -> Result<Self> {
        if outputs.len() != inputs.len() || outputs.is_empty() {
            return Err(BoxError::BadScenario(format!(
                "party counts differ or empty: {} outputs vs {} inputs",
                outputs.len(),
                inputs.len()
            )));
        }
        if outputs.iter().any(|&o| o < 1) || inputs.iter().any(|&i| i < 1) {
            return Err(BoxError::BadScenario(
                "every party needs at least one output and one input".into(),
            ));
        }
        Ok(Self { outputs, inputs })
    }

    /// Scenario with the same output/input counts at every party.
    pub fn uniform(parties: usize, outputs: usize, inputs: usize) -> Result<Self> {
        Self::new(vec![outputs; parties], vec![inputs; parties])
    }

    pub fn parties(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self, party: usize) -> usize {
        self.outputs[party]
    }

    pub fn inputs(&self, party: usize) -> usize {
        self.inputs[party]
    }

    /// Extent of the doubled per-party index.
    pub fn party_dim(&self, party: usize) -> usize {
        self.outputs[party] * self.inputs[party]
    }

    /// Extent of the abbreviated per-party index.
    pub fn abbrev_party_dim(&self, party: usize) -> usize {
        self.inputs[party] * (self.outputs[party] - 1) + 1
    }

    pub fn dense_len(&self) -> usize {
        (0..self.parties()).map(|k| self.party_dim(k)).product()
    }

    pub fn abbrev_len(&self) -> usize {
        (0..self.parties())
            .map(|k| self.abbrev_party_dim(k))
            .product()
    }

    /// Row-major stride of a party's doubled index in the dense layout.
    pub fn dense_stride(&self, party: usize) -> usize {
        (party + 1..self.parties())
            .map(|k| self.party_dim(k))
            .product()
    }

    /// Doubled index of (output, input) at a party.
    pub fn doubled(&self, party: usize, a: usize, x: usize) -> usize {
        debug_assert!(a < self.outputs[party] && x < self.inputs[party]);
        a * self.inputs[party] + x
    }

    /// Inverse of [`Self::doubled`]: (output, input).
    pub fn split(&self, party: usize, y: usize) -> (usize, usize) {
        (y / self.inputs[party], y % self.inputs[party])
    }

    /// Abbreviated index of the unmeasured symbol.
    pub const EMPTY: usize = 0;

    /// Abbreviated index of (â, x̂) with â < O_k - 1.
    pub fn abbrev(&self, party: usize, a_hat: usize, x_hat: usize) -> usize {
        debug_assert!(a_hat + 1 < self.outputs[party] && x_hat < self.inputs[party]);
        1 + a_hat * self.inputs[party] + x_hat
    }

    /// Inverse of [`Self::abbrev`] for nonzero indices: (â, x̂).
    pub fn abbrev_split(&self, party: usize, q: usize) -> (usize, usize) {
        debug_assert!(q > 0);
        ((q - 1) / self.inputs[party], (q - 1) % self.inputs[party])
    }

    /// Coefficients of the unit effect on the doubled index of one party:
    /// summing outputs at input 0.
    pub fn unit_effect_party(&self, party: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.party_dim(party)];
        for a in 0..self.outputs[party] {
            e[self.doubled(party, a, 0)] = 1.0;
        }
        e
    }

    /// Coefficients of the unit effect on the abbreviated index of one party:
    /// the unmeasured component alone.
    pub fn unit_effect_abbrev_party(&self, party: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.abbrev_party_dim(party)];
        e[Self::EMPTY] = 1.0;
        e
    }
}

/// Walks all multi-indices over the given extents in row-major order.
pub fn multi_indices(extents: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = extents.iter().product();
    (0..total).map(move |mut flat| {
        let mut idx = vec![0usize; extents.len()];
        for k in (0..extents.len()).rev() {
            idx[k] = flat % extents[k];
            flat /= extents[k];
        }
        idx
    })
}

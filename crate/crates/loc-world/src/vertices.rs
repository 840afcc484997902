//! Deterministic extreme points of the local polytope in abbreviated
//! coordinates.

use box_models::{enumerate_assignments, Scenario};

use crate::abbrev_map::AbbreviationMap;
use crate::{LocError, Result};

/// Enumeration budget for extreme-point methods.
pub const MAX_VERTICES: usize = 1_000_000;

/// Number of deterministic boxes of the scenario.
pub fn vertex_count(sc: &Scenario) -> u128 {
    (0..sc.parties())
        .map(|k| (sc.outputs(k) as u128).saturating_pow(sc.inputs(k) as u32))
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// All deterministic boxes, lexicographic in (party, input, output) digits,
/// with their abbreviated coordinate vectors materialised as columns.
pub struct VertexSet {
    scenario: Scenario,
    assignments: Vec<Vec<Vec<usize>>>,
    columns: Vec<Vec<f64>>,
}

impl VertexSet {
    pub fn new(sc: &Scenario) -> Result<VertexSet> {
        let count = vertex_count(sc);
        if count > MAX_VERTICES as u128 {
            return Err(LocError::TooLarge(format!(
                "{count} deterministic boxes exceeds the {MAX_VERTICES} budget"
            )));
        }
        let map = AbbreviationMap::new(sc);
        let assignments = enumerate_assignments(sc);
        let columns = assignments
            .iter()
            .map(|f| map.abbrev_vertex(f))
            .collect();
        Ok(VertexSet {
            scenario: sc.clone(),
            assignments,
            columns,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn assignment(&self, j: usize) -> &[Vec<usize>] {
        &self.assignments[j]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// Lexicographic rank of a deterministic assignment.
    pub fn rank_of(&self, assignment: &[Vec<usize>]) -> usize {
        let sc = &self.scenario;
        let mut rank = 0usize;
        for k in 0..sc.parties() {
            let (o, i) = (sc.outputs(k), sc.inputs(k));
            let mut local = 0usize;
            for x in 0..i {
                local = local * o + assignment[k][x];
            }
            rank = rank * o.pow(i as u32) + local;
        }
        rank
    }
}

//! Local-polytope membership with certificates on both sides: an explicit
//! convex decomposition when the box is local, a separating Bell functional
//! when it is not, and an explicit marginal verdict in between.

use box_models::{NsBox, Scenario};
use conic_solver::lp::LpStatus;

use crate::abbrev_map::AbbreviationMap;
use crate::lpbuild::{LpModel, RowKind};
use crate::vertices::VertexSet;
use crate::{LocError, Result, MARGIN_TOL, POS_TOL};

/// Residual bound for accepting a reconstructed decomposition.
pub const MODEL_TOL: f64 = 1e-7;

/// Convex weights over the deterministic boxes, lexicographic vertex order.
#[derive(Debug, Clone)]
pub struct LocalModel {
    scenario: Scenario,
    weights: Vec<f64>,
}

impl LocalModel {
    pub fn new(scenario: Scenario, weights: Vec<f64>) -> LocalModel {
        LocalModel { scenario, weights }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Sup-norm gap between the model's box and the target, in abbreviated
    /// coordinates.
    pub fn residual(&self, q_target: &[f64]) -> Result<f64> {
        let vs = VertexSet::new(&self.scenario)?;
        if self.weights.len() != vs.len() {
            return Err(LocError::Shape("weight count mismatch".into()));
        }
        let mut rec = vec![0.0; q_target.len()];
        for (j, w) in self.weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            for (a, v) in vs.column(j).iter().enumerate() {
                rec[a] += w * v;
            }
        }
        Ok(rec
            .iter()
            .zip(q_target)
            .map(|(r, t)| (r - t).abs())
            .fold(0.0, f64::max))
    }

    /// Re-validates the model against a box: weights nonnegative, norm at
    /// most one, reconstruction within `MODEL_TOL`.
    pub fn verify(&self, b: &NsBox) -> Result<f64> {
        if b.scenario() != &self.scenario {
            return Err(LocError::Shape("box scenario mismatch".into()));
        }
        if self.weights.iter().any(|&w| w < -POS_TOL) {
            return Err(LocError::Certificate("negative weight".into()));
        }
        if self.norm() > 1.0 + 1e-8 {
            return Err(LocError::Certificate("weights exceed unit norm".into()));
        }
        let q = AbbreviationMap::new(&self.scenario).abbreviate(b)?;
        let res = self.residual(&q)?;
        if res > MODEL_TOL {
            return Err(LocError::Certificate(format!(
                "reconstruction residual {res:.3e}"
            )));
        }
        Ok(res)
    }
}

/// Linear functional on boxes, stored in abbreviated coordinates.
#[derive(Debug, Clone)]
pub struct BellFunctional {
    scenario: Scenario,
    abbrev: Vec<f64>,
}

impl BellFunctional {
    pub fn from_abbrev(scenario: Scenario, abbrev: Vec<f64>) -> Result<BellFunctional> {
        if abbrev.len() != scenario.abbrev_len() {
            return Err(LocError::Shape("abbreviated length mismatch".into()));
        }
        Ok(BellFunctional { scenario, abbrev })
    }

    /// Transport standard-coordinate coefficients; the abbreviated form gives
    /// the same value on every no-signalling box.
    pub fn from_std(scenario: Scenario, std_coeffs: &[f64]) -> Result<BellFunctional> {
        let map = AbbreviationMap::new(&scenario);
        let abbrev = map.functional_to_abbrev(std_coeffs)?;
        Ok(BellFunctional { scenario, abbrev })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn abbrev(&self) -> &[f64] {
        &self.abbrev
    }

    pub fn value_abbrev(&self, q: &[f64]) -> f64 {
        self.abbrev.iter().zip(q).map(|(c, v)| c * v).sum()
    }

    pub fn value(&self, b: &NsBox) -> Result<f64> {
        let q = AbbreviationMap::new(&self.scenario).abbreviate(b)?;
        Ok(self.value_abbrev(&q))
    }

    /// Minimum over all deterministic boxes; nonnegative for a sound
    /// separating functional.
    pub fn min_on_vertices(&self, vs: &VertexSet) -> f64 {
        (0..vs.len())
            .map(|j| self.value_abbrev(vs.column(j)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn normalized_inf(mut self) -> BellFunctional {
        let m = self
            .abbrev
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        if m > 0.0 {
            for v in &mut self.abbrev {
                *v /= m;
            }
        }
        self
    }
}

#[derive(Debug)]
pub enum MembershipVerdict {
    /// In the polytope, with an explicit decomposition.
    Local(LocalModel),
    /// Too close to the boundary to call at the working tolerances.
    Marginal {
        residual: Option<f64>,
        functional: Option<BellFunctional>,
        violation: Option<f64>,
    },
    /// Outside, with a functional nonnegative on the polytope and negative on
    /// the box.
    NotLocal {
        functional: BellFunctional,
        violation: f64,
    },
}

pub(crate) enum Decomposition {
    Weights(Vec<f64>),
    /// Farkas row multipliers (one per abbreviated coordinate, then the norm
    /// row).
    Separated(Vec<f64>),
}

/// Feasibility LP for q = sum_j w_j v_j, w >= 0, sum w <= 1.
pub(crate) fn decompose(vs: &VertexSet, q: &[f64]) -> Result<Decomposition> {
    let ab = q.len();
    let mut model = LpModel::new();
    let w = model.pos_vars(vs.len());
    for a in 0..ab {
        let coeffs: Vec<_> = (0..vs.len())
            .filter_map(|j| {
                let v = vs.column(j)[a];
                (v != 0.0).then_some((w[j], v))
            })
            .collect();
        model.row(RowKind::Eq, coeffs, q[a]);
    }
    model.row(RowKind::Le, w.iter().map(|&v| (v, 1.0)).collect(), 1.0);
    let out = model.solve()?;
    match out.status() {
        LpStatus::Optimal => Ok(Decomposition::Weights(
            model.values(&out.solution.x, &w),
        )),
        LpStatus::Infeasible => {
            let y = out
                .farkas()
                .ok_or_else(|| LocError::Optimize("missing infeasibility certificate".into()))?;
            Ok(Decomposition::Separated(y.to_vec()))
        }
        s => Err(LocError::Optimize(format!("membership LP returned {s:?}"))),
    }
}

/// Turn Farkas multipliers of the membership LP into a Bell functional that
/// is nonnegative on every vertex and negative on the box.
fn farkas_functional(sc: &Scenario, y: &[f64]) -> Result<BellFunctional> {
    let ab = sc.abbrev_len();
    let mut g: Vec<f64> = y[..ab].iter().map(|v| -v).collect();
    // Slack column forces y[ab] <= 0; shifting by the norm row's multiplier
    // on the empty coordinate keeps vertex values nonnegative.
    g[0] += -y[ab];
    Ok(BellFunctional::from_abbrev(sc.clone(), g)?.normalized_inf())
}

/// Decide membership of the box in the local polytope.
///
/// Guarded by the `MAX_VERTICES` enumeration budget.  Verdicts always carry a
/// certificate; boundary cases within the working tolerances are reported as
/// `Marginal`, never silently rounded to either side.
pub fn local_membership(b: &NsBox) -> Result<MembershipVerdict> {
    let sc = b.scenario().clone();
    let vs = VertexSet::new(&sc)?;
    let q = AbbreviationMap::new(&sc).abbreviate(b)?;
    match decompose(&vs, &q)? {
        Decomposition::Weights(weights) => {
            let model = LocalModel::new(sc, weights);
            let residual = model.residual(&q)?;
            if residual <= MODEL_TOL {
                Ok(MembershipVerdict::Local(model))
            } else {
                Ok(MembershipVerdict::Marginal {
                    residual: Some(residual),
                    functional: None,
                    violation: None,
                })
            }
        }
        Decomposition::Separated(y) => {
            let functional = farkas_functional(&sc, &y)?;
            let floor = functional.min_on_vertices(&vs);
            if floor < -1e-9 {
                return Err(LocError::Certificate(format!(
                    "separating functional dips to {floor:.3e} on a vertex"
                )));
            }
            let violation = -functional.value_abbrev(&q);
            if violation >= MARGIN_TOL {
                Ok(MembershipVerdict::NotLocal {
                    functional,
                    violation,
                })
            } else {
                Ok(MembershipVerdict::Marginal {
                    residual: None,
                    functional: Some(functional),
                    violation: Some(violation),
                })
            }
        }
    }
}

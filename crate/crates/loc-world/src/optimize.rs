//! Connector optimisation over the local world.
//!
//! `optimize_connector` solves the extreme-point program: minimise the
//! pairing of the connector with an objective tensor subject to every
//! deterministic input box mapping to a subnormalized local box.  It is exact
//! for any scenario within the vertex budget.
//!
//! `optimize_2to1_fast` avoids enumerating party B's strategies.  Rows of a
//! many-to-one connector must be nonnegative on local boxes, share an
//! input-independent norm functional W0, and leave E - W0 nonnegative as
//! well; nonnegativity is imposed through positive combinations over the
//! extended scenario in which each input of B becomes a separate party asked
//! once.  Constraint count grows linearly with party A's input count.

use box_models::Scenario;
use conic_solver::lp::{check_lp_optimal, LpSolution, LpStatus};
use tensor_core::tensor::Tensor;

use crate::abbrev_map::{apply_to_leg, AbbreviationMap};
use crate::connector::{check_loc_feasibility, Connector, LocFeasibility, World};
use crate::functional::PositiveFunctionalCertificate;
use crate::lpbuild::{LpModel, RowKind, Var};
use crate::vertices::VertexSet;
use crate::{LocError, Result, FEAS_TOL};

/// Tolerance for re-checking stored LP optimality certificates.
const LP_CHECK_TOL: f64 = 1e-6;

/// Pair an objective tensor (standard coordinates, out legs before in legs)
/// down to abbreviated coordinates: c_ab = S_out' C R_in'.
pub(crate) fn objective_to_abbrev(
    c: &Tensor,
    in_sc: &Scenario,
    out_sc: &Scenario,
) -> Result<Vec<f64>> {
    let m_out = out_sc.parties();
    let m_in = in_sc.parties();
    if c.rank() != m_out + m_in {
        return Err(LocError::Shape("objective rank mismatch".into()));
    }
    for (k, leg) in c.legs().iter().enumerate() {
        let want = if k < m_out {
            out_sc.party_dim(k)
        } else {
            in_sc.party_dim(k - m_out)
        };
        if leg.extent != want {
            return Err(LocError::Shape(format!("objective leg {k} extent")));
        }
    }
    let map_out = AbbreviationMap::new(out_sc);
    let map_in = AbbreviationMap::new(in_sc);
    let mut extents: Vec<usize> = (0..m_out)
        .map(|k| out_sc.party_dim(k))
        .chain((0..m_in).map(|k| in_sc.party_dim(k)))
        .collect();
    let mut v = c.data().to_vec();
    for k in 0..m_out {
        v = apply_to_leg(
            &mut extents,
            k,
            out_sc.abbrev_party_dim(k),
            map_out.s_t(k),
            &v,
        );
    }
    for k in 0..m_in {
        v = apply_to_leg(
            &mut extents,
            m_out + k,
            in_sc.abbrev_party_dim(k),
            &map_in.party(k).reduce,
            &v,
        );
    }
    Ok(v)
}

fn trans_loc_model(
    c_ab: &[f64],
    vin: &VertexSet,
    vout: &VertexSet,
) -> (LpModel, Vec<Var>, Vec<Vec<Var>>) {
    let ab_in = vin.scenario().abbrev_len();
    let ab_out = vout.scenario().abbrev_len();
    let mut model = LpModel::new();
    let w = model.free_vars(ab_out * ab_in);
    let p: Vec<Vec<Var>> = (0..vin.len())
        .map(|_| model.pos_vars(vout.len()))
        .collect();
    for i in 0..vin.len() {
        let q_in = vin.column(i);
        for qo in 0..ab_out {
            let mut coeffs: Vec<(Var, f64)> = Vec::new();
            for (qi, &v) in q_in.iter().enumerate() {
                if v != 0.0 {
                    coeffs.push((w[qo * ab_in + qi], v));
                }
            }
            for (j, pj) in p[i].iter().enumerate() {
                let v = vout.column(j)[qo];
                if v != 0.0 {
                    coeffs.push((*pj, -v));
                }
            }
            model.row(RowKind::Eq, coeffs, 0.0);
        }
        model.row(RowKind::Le, p[i].iter().map(|&v| (v, 1.0)).collect(), 1.0);
    }
    for (k, &c) in c_ab.iter().enumerate() {
        model.objective(w[k], c);
    }
    (model, w, p)
}

/// Optimality certificate for an extreme-point connector program.
#[derive(Debug, Clone)]
pub struct ConnectorLpCertificate {
    pub objective: f64,
    pub feasibility: LocFeasibility,
    pub lp_x: Vec<f64>,
    pub lp_dual: Vec<f64>,
}

impl ConnectorLpCertificate {
    /// Re-validate offline: rebuild the program, check the stored solution's
    /// optimality conditions, and confirm both the connector entries and the
    /// vertex-image decompositions.
    pub fn verify(&self, c: &Tensor, conn: &Connector) -> Result<()> {
        let c_ab = objective_to_abbrev(c, conn.in_scenario(), conn.out_scenario())?;
        let vin = VertexSet::new(conn.in_scenario())?;
        let vout = VertexSet::new(conn.out_scenario())?;
        let (model, w, _) = trans_loc_model(&c_ab, &vin, &vout);
        let problem = model.problem()?;
        let sol = LpSolution {
            status: LpStatus::Optimal,
            x: self.lp_x.clone(),
            objective: self.objective,
            dual: self.lp_dual.clone(),
            farkas: None,
            iterations: 0,
        };
        check_lp_optimal(&problem, &sol, LP_CHECK_TOL).map_err(LocError::Certificate)?;
        let w_ab = model.values(&self.lp_x, &w);
        let gap = w_ab
            .iter()
            .zip(conn.w_ab())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > FEAS_TOL {
            return Err(LocError::Certificate(format!(
                "connector deviates from certified solution by {gap:.3e}"
            )));
        }
        check_loc_feasibility(conn, &self.feasibility)?;
        let pairing: f64 = w_ab.iter().zip(&c_ab).map(|(a, b)| a * b).sum();
        if (pairing - self.objective).abs() > LP_CHECK_TOL * (1.0 + self.objective.abs()) {
            return Err(LocError::Certificate("objective mismatch".into()));
        }
        Ok(())
    }
}

/// Minimise `<W, C>` over LOC connectors from `in_sc` to `out_sc`.
///
/// The objective tensor is given in standard coordinates with out legs before
/// in legs; only its no-signalling pairing matters.  Both scenarios must stay
/// within the vertex budget.
pub fn optimize_connector(
    c: &Tensor,
    in_sc: &Scenario,
    out_sc: &Scenario,
) -> Result<(Connector, ConnectorLpCertificate)> {
    let c_ab = objective_to_abbrev(c, in_sc, out_sc)?;
    let vin = VertexSet::new(in_sc)?;
    let vout = VertexSet::new(out_sc)?;
    let (model, w, p) = trans_loc_model(&c_ab, &vin, &vout);
    let out = model.solve()?;
    let sol = out.optimal()?;
    let w_ab = model.values(&sol.x, &w);
    let weights: Vec<Vec<f64>> = p.iter().map(|row| model.values(&sol.x, row)).collect();
    let conn = Connector::from_abbrev(in_sc.clone(), out_sc.clone(), w_ab, World::Loc)?;
    let cert = ConnectorLpCertificate {
        objective: sol.objective,
        feasibility: LocFeasibility { weights },
        lp_x: sol.x.clone(),
        lp_dual: sol.dual.clone(),
    };
    cert.verify(c, &conn)?;
    Ok((conn, cert))
}

/// How an extended-scenario abbreviated coordinate enters the program.
enum ExtCoord {
    /// At least two of B's inputs answered: forced to vanish.
    Zero,
    /// At most one answered: equals the functional at this input coordinate.
    Link(usize),
}

pub(crate) struct ExtendedScenario {
    pub ext: Scenario,
    map: AbbreviationMap,
    classes: Vec<ExtCoord>,
}

impl ExtendedScenario {
    /// in_sc must be bipartite; party B's inputs become n_B single-question
    /// parties.
    pub(crate) fn new(in_sc: &Scenario) -> Result<ExtendedScenario> {
        if in_sc.parties() != 2 {
            return Err(LocError::Shape("extended scenario needs two parties".into()));
        }
        let (d_a, n_a) = (in_sc.outputs(0), in_sc.inputs(0));
        let (d_b, n_b) = (in_sc.outputs(1), in_sc.inputs(1));
        let mut outputs = vec![d_a];
        let mut inputs = vec![n_a];
        outputs.extend(std::iter::repeat_n(d_b, n_b));
        inputs.extend(std::iter::repeat_n(1, n_b));
        let ext = Scenario::new(outputs, inputs)?;
        let map = AbbreviationMap::new(&ext);
        let ab_a = in_sc.abbrev_party_dim(0);
        let mut classes = Vec::with_capacity(ext.abbrev_len());
        let ext_ab_dims: Vec<usize> = (0..ext.parties())
            .map(|k| ext.abbrev_party_dim(k))
            .collect();
        let mut multi = vec![0usize; ext.parties()];
        for flat in 0..ext.abbrev_len() {
            let mut rem = flat;
            for (k, d) in ext_ab_dims.iter().enumerate().rev() {
                multi[k] = rem % d;
                rem /= d;
            }
            let answered: Vec<usize> = (1..ext.parties())
                .filter(|&k| multi[k] != Scenario::EMPTY)
                .collect();
            classes.push(match answered.len() {
                0 => ExtCoord::Link(multi[0] * in_sc.abbrev_party_dim(1)),
                1 => {
                    let slot = answered[0] - 1;
                    let (b_hat, _) = ext.abbrev_split(answered[0], multi[answered[0]]);
                    let q_b = in_sc.abbrev(1, b_hat, slot);
                    ExtCoord::Link(multi[0] * in_sc.abbrev_party_dim(1) + q_b)
                }
                _ => ExtCoord::Zero,
            });
        }
        debug_assert_eq!(ab_a, in_sc.abbrev_party_dim(0));
        Ok(ExtendedScenario { ext, map, classes })
    }

    /// Input-scenario coordinate an extended coordinate reports to, or None
    /// when the transport there must vanish.
    pub(crate) fn link_target(&self, q_flat: usize) -> Option<usize> {
        match self.classes[q_flat] {
            ExtCoord::Zero => None,
            ExtCoord::Link(j) => Some(j),
        }
    }

    /// Sparse expansion column for an extended abbreviated coordinate:
    /// entries (standard index, coefficient) of S.
    fn s_column(&self, q_flat: usize) -> Vec<(usize, f64)> {
        let ext = &self.ext;
        let parties = ext.parties();
        let mut multi = vec![0usize; parties];
        let mut rem = q_flat;
        for k in (0..parties).rev() {
            multi[k] = rem % ext.abbrev_party_dim(k);
            rem /= ext.abbrev_party_dim(k);
        }
        let per_party: Vec<Vec<(usize, f64)>> = (0..parties)
            .map(|k| self.map.s_col_sparse(k, multi[k]))
            .collect();
        let mut acc: Vec<(usize, f64)> = vec![(0, 1.0)];
        for (k, col) in per_party.iter().enumerate() {
            let stride = ext.party_dim(k);
            let mut next = Vec::with_capacity(acc.len() * col.len());
            for &(base, coeff) in &acc {
                for &(y, v) in col {
                    next.push((base * stride + y, coeff * v));
                }
            }
            acc = next;
        }
        acc
    }

    /// All functional-transport rows: for each abbreviated coordinate, the
    /// sparse coefficients of (S' cbar) at that coordinate.
    pub(crate) fn transport_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.ext.abbrev_len())
            .map(|q| self.s_column(q))
            .collect()
    }
}

/// Optimality certificate for the extended-scenario program.  Each row of
/// the connector carries a positive-combination witness over the extended
/// scenario; `cbar0` witnesses E - W0.
#[derive(Debug, Clone)]
pub struct Fast2to1Certificate {
    pub objective: f64,
    /// Row-major (c, z) order over the out party's outputs and inputs.
    pub cbars: Vec<Vec<f64>>,
    pub cbar0: Vec<f64>,
    pub lp_x: Vec<f64>,
    pub lp_dual: Vec<f64>,
}

struct FastModel {
    model: LpModel,
    u: Vec<Vec<Var>>,
    w0: Vec<Var>,
    cbar_vars: Vec<Vec<Var>>,
    cbar0_vars: Vec<Var>,
}

fn fast_model(c_ab: &[f64], in_sc: &Scenario, out_sc: &Scenario) -> Result<FastModel> {
    let ext = ExtendedScenario::new(in_sc)?;
    let rows = ext.transport_rows();
    let (o_out, i_out) = (out_sc.outputs(0), out_sc.inputs(0));
    let ab_in = in_sc.abbrev_len();
    let ab_out = out_sc.abbrev_len();
    let ext_std = ext.ext.dense_len();
    let mut model = LpModel::new();
    let u: Vec<Vec<Var>> = (0..o_out * i_out)
        .map(|_| model.free_vars(ab_in))
        .collect();
    let w0 = model.free_vars(ab_in);
    let cbar_vars: Vec<Vec<Var>> = (0..o_out * i_out)
        .map(|_| model.pos_vars(ext_std))
        .collect();
    let cbar0_vars = model.pos_vars(ext_std);
    // transport pattern rows for every row functional and for E - W0
    for (q, row) in rows.iter().enumerate() {
        for (r, cbar) in cbar_vars.iter().enumerate() {
            let mut coeffs: Vec<(Var, f64)> =
                row.iter().map(|&(p, v)| (cbar[p], v)).collect();
            match ext.classes[q] {
                ExtCoord::Zero => model.row(RowKind::Eq, coeffs, 0.0),
                ExtCoord::Link(j) => {
                    coeffs.push((u[r][j], -1.0));
                    model.row(RowKind::Eq, coeffs, 0.0);
                }
            }
        }
        let mut coeffs: Vec<(Var, f64)> =
            row.iter().map(|&(p, v)| (cbar0_vars[p], v)).collect();
        match ext.classes[q] {
            ExtCoord::Zero => model.row(RowKind::Eq, coeffs, 0.0),
            ExtCoord::Link(j) => {
                // (S' cbar0)[j] = E[j] - w0[j]; E is the empty-coordinate
                // indicator in abbreviated coordinates.
                coeffs.push((w0[j], 1.0));
                let rhs = if j == 0 { 1.0 } else { 0.0 };
                model.row(RowKind::Eq, coeffs, rhs);
            }
        }
    }
    // rows of one input sum to the shared norm functional
    for z in 0..i_out {
        for j in 0..ab_in {
            let mut coeffs: Vec<(Var, f64)> =
                (0..o_out).map(|c| (u[c * i_out + z][j], 1.0)).collect();
            coeffs.push((w0[j], -1.0));
            model.row(RowKind::Eq, coeffs, 0.0);
        }
    }
    // objective over the connector's abbreviated rows
    for j in 0..ab_in {
        model.objective(w0[j], c_ab[j]);
    }
    for qo in 1..ab_out {
        let (c, z) = out_sc.abbrev_split(0, qo);
        for j in 0..ab_in {
            model.objective(u[c * i_out + z][j], c_ab[qo * ab_in + j]);
        }
    }
    Ok(FastModel {
        model,
        u,
        w0,
        cbar_vars,
        cbar0_vars,
    })
}

fn connector_from_fast(
    model: &FastModel,
    x: &[f64],
    in_sc: &Scenario,
    out_sc: &Scenario,
) -> Result<Connector> {
    let ab_in = in_sc.abbrev_len();
    let ab_out = out_sc.abbrev_len();
    let i_out = out_sc.inputs(0);
    let mut w_ab = vec![0.0; ab_out * ab_in];
    w_ab[..ab_in].copy_from_slice(&model.model.values(x, &model.w0));
    for qo in 1..ab_out {
        let (c, z) = out_sc.abbrev_split(0, qo);
        let row = model.model.values(x, &model.u[c * i_out + z]);
        w_ab[qo * ab_in..(qo + 1) * ab_in].copy_from_slice(&row);
    }
    Connector::from_abbrev(in_sc.clone(), out_sc.clone(), w_ab, World::Loc)
}

impl Fast2to1Certificate {
    /// Row functionals of the connector in (c, z) order, the last output
    /// recovered from the norm functional.
    fn row_functionals(conn: &Connector) -> Vec<Vec<f64>> {
        let in_sc = conn.in_scenario();
        let out_sc = conn.out_scenario();
        let ab_in = in_sc.abbrev_len();
        let (o_out, i_out) = (out_sc.outputs(0), out_sc.inputs(0));
        let w0 = &conn.w_ab()[..ab_in];
        let mut rows = vec![vec![0.0; ab_in]; o_out * i_out];
        for qo in 1..out_sc.abbrev_len() {
            let (c, z) = out_sc.abbrev_split(0, qo);
            rows[c * i_out + z]
                .copy_from_slice(&conn.w_ab()[qo * ab_in..(qo + 1) * ab_in]);
        }
        for z in 0..i_out {
            let mut last = w0.to_vec();
            for c in 0..o_out - 1 {
                for (l, v) in last.iter_mut().zip(&rows[c * i_out + z]) {
                    *l -= v;
                }
            }
            rows[(o_out - 1) * i_out + z] = last;
        }
        rows
    }

    pub fn verify(&self, c: &Tensor, conn: &Connector) -> Result<()> {
        let in_sc = conn.in_scenario();
        let out_sc = conn.out_scenario();
        if out_sc.parties() != 1 {
            return Err(LocError::Shape("fast certificate needs one out party".into()));
        }
        let c_ab = objective_to_abbrev(c, in_sc, out_sc)?;
        let fast = fast_model(&c_ab, in_sc, out_sc)?;
        let problem = fast.model.problem()?;
        let sol = LpSolution {
            status: LpStatus::Optimal,
            x: self.lp_x.clone(),
            objective: self.objective,
            dual: self.lp_dual.clone(),
            farkas: None,
            iterations: 0,
        };
        check_lp_optimal(&problem, &sol, LP_CHECK_TOL).map_err(LocError::Certificate)?;
        let rebuilt = connector_from_fast(&fast, &self.lp_x, in_sc, out_sc)?;
        let gap = rebuilt
            .w_ab()
            .iter()
            .zip(conn.w_ab())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > FEAS_TOL {
            return Err(LocError::Certificate(format!(
                "connector deviates from certified solution by {gap:.3e}"
            )));
        }
        // independent positivity re-check of every row and of E - W0
        let rows = Self::row_functionals(conn);
        let (o_out, i_out) = (out_sc.outputs(0), out_sc.inputs(0));
        if self.cbars.len() != o_out * i_out {
            return Err(LocError::Certificate("cbar count mismatch".into()));
        }
        for (r, cbar) in self.cbars.iter().enumerate() {
            PositiveFunctionalCertificate::new(in_sc.clone(), rows[r].clone(), cbar.clone())?
                .verify()?;
        }
        let ab_in = in_sc.abbrev_len();
        let mut e_minus_w0 = vec![0.0; ab_in];
        e_minus_w0[0] = 1.0;
        for (v, w) in e_minus_w0.iter_mut().zip(&conn.w_ab()[..ab_in]) {
            *v -= w;
        }
        PositiveFunctionalCertificate::new(in_sc.clone(), e_minus_w0, self.cbar0.clone())?
            .verify()?;
        Ok(())
    }
}

/// Minimise `<W, C>` over LOC connectors from a bipartite scenario to a
/// single-party scenario without enumerating party B's strategies.
///
/// Party A has `n_a` inputs with `d_a` outputs, party B `n_b` inputs with
/// `d_b` outputs; `n_b` is capped because the extended scenario grows as
/// d_b^n_b.
pub fn optimize_2to1_fast(
    c: &Tensor,
    n_a: usize,
    n_b: usize,
    d_a: usize,
    d_b: usize,
    out_sc: &Scenario,
) -> Result<(Connector, Fast2to1Certificate)> {
    if n_b > 6 {
        return Err(LocError::TooLarge(format!(
            "party B input count {n_b} exceeds the extended-scenario cap of 6"
        )));
    }
    if out_sc.parties() != 1 {
        return Err(LocError::Shape("output scenario must have one party".into()));
    }
    let in_sc = Scenario::new(vec![d_a, d_b], vec![n_a, n_b])?;
    let c_ab = objective_to_abbrev(c, &in_sc, out_sc)?;
    let fast = fast_model(&c_ab, &in_sc, out_sc)?;
    let out = fast.model.solve()?;
    let sol = out.optimal()?;
    let conn = connector_from_fast(&fast, &sol.x, &in_sc, out_sc)?;
    let cbars: Vec<Vec<f64>> = fast
        .cbar_vars
        .iter()
        .map(|vars| fast.model.values(&sol.x, vars))
        .collect();
    let cbar0 = fast.model.values(&sol.x, &fast.cbar0_vars);
    let cert = Fast2to1Certificate {
        objective: sol.objective,
        cbars,
        cbar0,
        lp_x: sol.x.clone(),
        lp_dual: sol.dual.clone(),
    };
    cert.verify(c, &conn)?;
    Ok((conn, cert))
}

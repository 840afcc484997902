//! Wirings: connectors built from classical circuits that route inputs and
//! outputs between parties.  Within a group the parties fire in the listed
//! order, each input a function of the group input and the outputs already
//! collected, so every representable program is acyclic by construction.

use box_models::Scenario;
use tensor_core::tensor::{Dir, Leg, Tensor};

use crate::connector::{Connector, LocFeasibility, World};
use crate::vertices::VertexSet;
use crate::{LocError, Result};

/// One output party of a wiring, consuming a set of input parties.
pub struct WiringGroup {
    /// Input parties in firing order.
    pub parties: Vec<usize>,
    /// Output alphabet of the merged party.
    pub outputs: usize,
    /// Input alphabet of the merged party.
    pub inputs: usize,
    /// Input fed to `parties[t]` given the group input and the outputs of
    /// `parties[..t]`.
    pub route: Box<dyn Fn(usize, usize, &[usize]) -> usize>,
    /// Group output given the group input and all collected outputs.
    pub emit: Box<dyn Fn(usize, &[usize]) -> usize>,
}

/// Singleton pass-through groups: the identity wiring.
pub fn identity_wiring(sc: &Scenario) -> Vec<WiringGroup> {
    (0..sc.parties())
        .map(|k| WiringGroup {
            parties: vec![k],
            outputs: sc.outputs(k),
            inputs: sc.inputs(k),
            route: Box::new(|_, y, _| y),
            emit: Box::new(|_, a| a[0]),
        })
        .collect()
}

/// The canonical two-party chain: the first party receives the group input,
/// the second receives the first's output, and the group reports the second
/// output.  On two binary parties its tensor is
/// delta(x, y) delta(x', a) delta(b, a').
pub fn pair_wiring(sc: &Scenario) -> Result<Vec<WiringGroup>> {
    if sc.parties() != 2 {
        return Err(LocError::Shape("pair wiring needs two parties".into()));
    }
    if sc.outputs(0) > sc.inputs(1) {
        return Err(LocError::Shape(
            "first party's outputs cannot drive the second party's input".into(),
        ));
    }
    Ok(vec![WiringGroup {
        parties: vec![0, 1],
        outputs: sc.outputs(1),
        inputs: sc.inputs(0),
        route: Box::new(|t, y, prefix| if t == 0 { y } else { prefix[0] }),
        emit: Box::new(|_, a| a[1]),
    }])
}

/// Build the connector of a classical wiring.  `groups` must partition the
/// parties of `in_sc`; the output scenario has one party per group, in group
/// order.
pub fn wiring(in_sc: &Scenario, groups: &[WiringGroup]) -> Result<(Connector, LocFeasibility)> {
    let m = in_sc.parties();
    let mut owner = vec![usize::MAX; m];
    for (g, grp) in groups.iter().enumerate() {
        if grp.outputs == 0 || grp.inputs == 0 || grp.parties.is_empty() {
            return Err(LocError::Shape(format!("group {g} is degenerate")));
        }
        for &p in &grp.parties {
            if p >= m || owner[p] != usize::MAX {
                return Err(LocError::Shape(format!(
                    "party {p} missing or claimed twice"
                )));
            }
            owner[p] = g;
        }
    }
    if owner.iter().any(|&g| g == usize::MAX) {
        return Err(LocError::Shape("groups must cover every party".into()));
    }
    let out_sc = Scenario::new(
        groups.iter().map(|g| g.outputs).collect(),
        groups.iter().map(|g| g.inputs).collect(),
    )?;

    let mut legs: Vec<Leg> = (0..groups.len())
        .map(|g| Leg::new(g as u32, Dir::Out, out_sc.party_dim(g)))
        .collect();
    legs.extend(
        (0..m).map(|k| Leg::new((groups.len() + k) as u32, Dir::In, in_sc.party_dim(k))),
    );
    let mut t = Tensor::zeros(legs)?;

    // One pass per group input and per output assignment of its parties:
    // the routed inputs make exactly one standard entry per combination.
    let mut idx = vec![0usize; groups.len() + m];
    fill_group(&mut t, &mut idx, in_sc, &out_sc, groups, 0)?;

    let conn = Connector::from_std_tensor(in_sc.clone(), out_sc.clone(), &t, World::Loc)?;

    // Deterministic strategies compose to deterministic strategies, so the
    // feasibility weights are exact unit vectors.
    let vin = VertexSet::new(in_sc)?;
    let vout = VertexSet::new(&out_sc)?;
    let mut weights = Vec::with_capacity(vin.len());
    for i in 0..vin.len() {
        let f = vin.assignment(i);
        let mut out_assign: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
        for grp in groups {
            let mut per_input = Vec::with_capacity(grp.inputs);
            for y in 0..grp.inputs {
                let mut outs: Vec<usize> = Vec::with_capacity(grp.parties.len());
                for (tpos, &p) in grp.parties.iter().enumerate() {
                    let x = (grp.route)(tpos, y, &outs);
                    if x >= in_sc.inputs(p) {
                        return Err(LocError::Shape(format!(
                            "route sends party {p} input {x} out of range"
                        )));
                    }
                    outs.push(f[p][x]);
                }
                let b = (grp.emit)(y, &outs);
                if b >= grp.outputs {
                    return Err(LocError::Shape("emit output out of range".into()));
                }
                per_input.push(b);
            }
            out_assign.push(per_input);
        }
        let j = vout.rank_of(&out_assign);
        let mut w = vec![0.0; vout.len()];
        w[j] = 1.0;
        weights.push(w);
    }
    Ok((conn, LocFeasibility { weights }))
}

/// Recursive fill over groups: enumerate each group's input and its parties'
/// outputs, deriving the routed inputs and the emitted output.
fn fill_group(
    t: &mut Tensor,
    idx: &mut Vec<usize>,
    in_sc: &Scenario,
    out_sc: &Scenario,
    groups: &[WiringGroup],
    g: usize,
) -> Result<()> {
    if g == groups.len() {
        let flat = idx.clone();
        t.set(&flat, 1.0);
        return Ok(());
    }
    let grp = &groups[g];
    for y in 0..grp.inputs {
        let n = grp.parties.len();
        let mut outs = vec![0usize; n];
        loop {
            // route with the current output prefix; reject bad programs
            let mut xs = Vec::with_capacity(n);
            for (tpos, &p) in grp.parties.iter().enumerate() {
                let x = (grp.route)(tpos, y, &outs[..tpos]);
                if x >= in_sc.inputs(p) {
                    return Err(LocError::Shape(format!(
                        "route sends party {p} input {x} out of range"
                    )));
                }
                xs.push(x);
            }
            let b = (grp.emit)(y, &outs);
            if b >= grp.outputs {
                return Err(LocError::Shape("emit output out of range".into()));
            }
            idx[g] = out_sc.doubled(g, b, y);
            for (tpos, &p) in grp.parties.iter().enumerate() {
                idx[groups.len() + p] = in_sc.doubled(p, outs[tpos], xs[tpos]);
            }
            fill_group(t, idx, in_sc, out_sc, groups, g + 1)?;
            // odometer over this group's outputs
            let mut pos = n;
            let mut done = false;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                outs[pos] += 1;
                if outs[pos] < in_sc.outputs(grp.parties[pos]) {
                    break;
                }
                outs[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(())
}

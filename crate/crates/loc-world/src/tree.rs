//! Acyclic connector networks and no-signalling lower bounds on their
//! functionals.
//!
//! A network with no open output legs evaluates boxes to a scalar in
//! [0, E(P)]. Its minimum over the no-signalling polytope is an LP; for
//! functionals invariant under the automorphisms of a perfect binary tree
//! the LP collapses onto orbit sums, which keeps the depth-3 CHSH tree
//! (sixteen leaves would be out of reach dense) solvable in seconds.

use std::collections::HashMap;

use conic_solver::lp::LpStatus;
use tensor_core::{Dir, Leg, Tensor};

use box_models::{NsBox, Scenario};

use crate::abbrev_map::AbbreviationMap;
use crate::connector::Connector;
use crate::functional::evaluate_std;
use crate::lpbuild::{LpModel, RowKind};
use crate::{LocError, Result, FEAS_TOL, POS_TOL};

/// Child slot of a network node: either a box party or another node's
/// single output party.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Port {
    Leaf(usize),
    Node(usize),
}

/// One placed connector: which connector it instantiates and what feeds
/// each of its input parties, in party order.
#[derive(Clone, Debug)]
pub struct NetworkNode {
    pub connector: usize,
    pub children: Vec<Port>,
}

/// Acyclic network of connectors over a fixed leaf scenario, fully
/// contracted: every leaf party feeds exactly one node, every non-root
/// node feeds exactly one parent, and the root's single output party is
/// closed with a designated (output, input) coordinate.
#[derive(Clone, Debug)]
pub struct ConnectorNetwork {
    connectors: Vec<Connector>,
    nodes: Vec<NetworkNode>,
    root: usize,
    root_input: usize,
    leaf_scenario: Scenario,
}

impl ConnectorNetwork {
    pub fn new(
        connectors: Vec<Connector>,
        nodes: Vec<NetworkNode>,
        root: usize,
        root_input: usize,
        leaf_scenario: Scenario,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(LocError::Shape("network needs at least one node".into()));
        }
        if root >= nodes.len() {
            return Err(LocError::Shape(format!(
                "root index {root} out of range for {} nodes",
                nodes.len()
            )));
        }
        let leaves = leaf_scenario.parties();
        let mut leaf_used = vec![false; leaves];
        let mut node_used = vec![false; nodes.len()];
        for (n, node) in nodes.iter().enumerate() {
            let conn = connectors.get(node.connector).ok_or_else(|| {
                LocError::Shape(format!("node {n}: connector index {} out of range", node.connector))
            })?;
            if conn.out_scenario().parties() != 1 {
                return Err(LocError::Shape(format!(
                    "node {n}: network nodes need single-party connector outputs"
                )));
            }
            let in_sc = conn.in_scenario();
            if node.children.len() != in_sc.parties() {
                return Err(LocError::Shape(format!(
                    "node {n}: {} children for a {}-party connector",
                    node.children.len(),
                    in_sc.parties()
                )));
            }
            for (t, port) in node.children.iter().enumerate() {
                let (o, i) = match *port {
                    Port::Leaf(l) => {
                        if l >= leaves {
                            return Err(LocError::Shape(format!("node {n}: leaf {l} out of range")));
                        }
                        if leaf_used[l] {
                            return Err(LocError::Shape(format!("leaf {l} used twice")));
                        }
                        leaf_used[l] = true;
                        (leaf_scenario.outputs(l), leaf_scenario.inputs(l))
                    }
                    Port::Node(c) => {
                        if c >= n {
                            // children strictly precede parents, which rules
                            // out cycles by construction
                            return Err(LocError::Shape(format!(
                                "node {n}: child node {c} must precede its parent"
                            )));
                        }
                        if node_used[c] {
                            return Err(LocError::Shape(format!("node {c} consumed twice")));
                        }
                        node_used[c] = true;
                        let out = connectors[nodes[c].connector].out_scenario();
                        (out.outputs(0), out.inputs(0))
                    }
                };
                if o != in_sc.outputs(t) || i != in_sc.inputs(t) {
                    return Err(LocError::Shape(format!(
                        "node {n} slot {t}: expected ({},{}) got ({o},{i})",
                        in_sc.outputs(t),
                        in_sc.inputs(t)
                    )));
                }
            }
        }
        if let Some(l) = leaf_used.iter().position(|u| !u) {
            return Err(LocError::Shape(format!("leaf {l} unused")));
        }
        if node_used[root] {
            return Err(LocError::Shape("root node consumed by another node".into()));
        }
        if let Some(n) = (0..nodes.len()).find(|&n| n != root && !node_used[n]) {
            return Err(LocError::Shape(format!("node {n} does not feed the root")));
        }
        let root_out = connectors[nodes[root].connector].out_scenario();
        if root_input >= root_out.party_dim(0) {
            return Err(LocError::Shape(format!(
                "root coordinate {root_input} out of range {}",
                root_out.party_dim(0)
            )));
        }
        Ok(Self { connectors, nodes, root, root_input, leaf_scenario })
    }

    pub fn connectors(&self) -> &[Connector] {
        &self.connectors
    }

    pub fn nodes(&self) -> &[NetworkNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_input(&self) -> usize {
        self.root_input
    }

    pub fn leaf_scenario(&self) -> &Scenario {
        &self.leaf_scenario
    }

    /// Dense standard-coordinate functional of the fully contracted
    /// network: legs ordered by leaf party, ascending.
    pub fn functional_std(&self) -> Result<Tensor> {
        let (tensor, leaves) = self.subtree_tensor(self.root)?;
        debug_assert_eq!(leaves.len(), self.leaf_scenario.parties());
        let root_dim = self.connectors[self.nodes[self.root].connector]
            .out_scenario()
            .party_dim(0);
        let mut pick = vec![0.0; root_dim];
        pick[self.root_input] = 1.0;
        let indicator = Tensor::new(vec![Leg::new(u32::MAX, Dir::In, root_dim)], pick)?;
        let picked = tensor.contract_pair(&indicator, &[(0, 0)])?;
        // remaining legs follow `leaves`; sort them into leaf order
        let mut order: Vec<usize> = (0..leaves.len()).collect();
        order.sort_by_key(|&i| leaves[i]);
        Ok(picked.permute(&order)?)
    }

    /// Contract the subtree rooted at node `n`. Returns the tensor with
    /// legs [node output, open leaf legs...] and the leaf ids matching the
    /// open legs in order.
    fn subtree_tensor(&self, n: usize) -> Result<(Tensor, Vec<usize>)> {
        let node = &self.nodes[n];
        let mut acc = self.connectors[node.connector].std_tensor()?;
        // tags[i] describes leg i of acc: None for the output leg,
        // Some(Err(t)) for the pending input slot t, Some(Ok(l)) for leaf l
        let mut tags: Vec<Option<std::result::Result<usize, usize>>> = vec![None];
        tags.extend((0..node.children.len()).map(|t| Some(Err(t))));
        for (t, port) in node.children.iter().enumerate() {
            match *port {
                Port::Leaf(l) => {
                    let pos = tags.iter().position(|g| *g == Some(Err(t))).unwrap();
                    tags[pos] = Some(Ok(l));
                }
                Port::Node(c) => {
                    let (sub, sub_leaves) = self.subtree_tensor(c)?;
                    let pos = tags.iter().position(|g| *g == Some(Err(t))).unwrap();
                    acc = acc.contract_pair(&sub, &[(pos, 0)])?;
                    tags.remove(pos);
                    tags.extend(sub_leaves.into_iter().map(|l| Some(Ok(l))));
                }
            }
        }
        let out_pos = tags.iter().position(|g| g.is_none()).unwrap();
        let mut leaf_order: Vec<(usize, usize)> = tags
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match g {
                Some(Ok(l)) => Some((i, *l)),
                Some(Err(_)) => unreachable!("every slot is wired"),
                None => None,
            })
            .collect();
        let leaves: Vec<usize> = leaf_order.iter().map(|&(_, l)| l).collect();
        let mut perm = vec![out_pos];
        perm.extend(leaf_order.drain(..).map(|(i, _)| i));
        Ok((acc.permute(&perm)?, leaves))
    }

    /// Evaluate the network functional on a box.
    pub fn value(&self, b: &NsBox) -> Result<f64> {
        let f = self.functional_std()?;
        evaluate_std(&f, b)
    }
}

/// Orbits of flat multi-indices under the automorphism group of a perfect
/// binary tree acting on the index positions.
struct TreeOrbits {
    orbit_of: Vec<usize>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
}

fn canonical_tuple(t: &[usize]) -> Vec<usize> {
    if t.len() <= 1 {
        return t.to_vec();
    }
    let h = t.len() / 2;
    let l = canonical_tuple(&t[..h]);
    let r = canonical_tuple(&t[h..]);
    let (a, b) = if r < l { (r, l) } else { (l, r) };
    let mut out = a;
    out.extend(b);
    out
}

fn tree_orbits(extent: usize, parties: usize) -> TreeOrbits {
    let total = extent.pow(parties as u32);
    let mut orbit_of = vec![0usize; total];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut digits = vec![0usize; parties];
    for flat in 0..total {
        let mut rem = flat;
        for k in (0..parties).rev() {
            digits[k] = rem % extent;
            rem /= extent;
        }
        let canon = canonical_tuple(&digits);
        let id = *ids.entry(canon).or_insert_with(|| {
            reps.push(flat);
            sizes.push(0);
            reps.len() - 1
        });
        sizes[id] += 1;
        orbit_of[flat] = id;
    }
    TreeOrbits { orbit_of, reps, sizes }
}

/// True when the functional tensor is invariant under every subtree swap
/// of the perfect binary tree on its legs.
fn tree_symmetric(f: &Tensor, parties: usize) -> bool {
    if !parties.is_power_of_two() || parties < 2 {
        return false;
    }
    let scale = f.data().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut block = parties;
    while block >= 2 {
        let half = block / 2;
        for start in (0..parties).step_by(block) {
            let mut perm: Vec<usize> = (0..parties).collect();
            for i in 0..half {
                perm.swap(start + i, start + half + i);
            }
            let swapped = match f.permute(&perm) {
                Ok(t) => t,
                Err(_) => return false,
            };
            let diff = f
                .data()
                .iter()
                .zip(swapped.data())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if diff > 1e-12 * scale {
                return false;
            }
        }
        block = half;
    }
    true
}

/// Certificate for a no-signalling minimum: dual multipliers reproducing
/// the functional over the expansion map plus a primal witness box
/// attaining the bound. When `reduced` is set both vectors are indexed by
/// tree orbits instead of raw coordinates.
#[derive(Clone, Debug)]
pub struct NsMinCertificate {
    pub reduced: bool,
    pub mu: f64,
    pub lambda: Vec<f64>,
    pub witness: Vec<f64>,
}

/// Minimize a network's functional over the no-signalling polytope.
///
/// The bound solves, in abbreviated coordinates, the dual program
/// min -mu over lambda >= 0 with S^T lambda + mu e = c; its negated row
/// duals are a subnormalized no-signalling witness attaining mu. For
/// tree-symmetric functionals over identical parties the program is
/// collapsed onto orbit sums first. The returned certificate has already
/// been re-verified in the full coordinate space.
pub fn ns_min_value(net: &ConnectorNetwork) -> Result<(f64, NsMinCertificate)> {
    let sc = net.leaf_scenario().clone();
    if sc.dense_len() > 1 << 18 {
        return Err(LocError::TooLarge(format!(
            "leaf scenario has {} dense coordinates",
            sc.dense_len()
        )));
    }
    let f = net.functional_std()?;
    let map = AbbreviationMap::new(&sc);
    let c_ab = map.functional_to_abbrev(f.data())?;

    let parties = sc.parties();
    let uniform = (1..parties)
        .all(|k| sc.outputs(k) == sc.outputs(0) && sc.inputs(k) == sc.inputs(0));

    let cert = if uniform && tree_symmetric(&f, parties) {
        let std_orb = tree_orbits(sc.party_dim(0), parties);
        let ab_orb = tree_orbits(sc.abbrev_party_dim(0), parties);
        let mut c_red = vec![0.0; ab_orb.reps.len()];
        for (flat, &o) in ab_orb.orbit_of.iter().enumerate() {
            c_red[o] += c_ab[flat];
        }
        let mut s_red = vec![vec![0.0; ab_orb.reps.len()]; std_orb.reps.len()];
        for (p, &rep) in std_orb.reps.iter().enumerate() {
            for (a, v) in map.s_row_sparse_multi(rep) {
                s_red[p][ab_orb.orbit_of[a]] += v;
            }
        }
        let empty_orbit = ab_orb.orbit_of[0];
        solve_dual(&s_red, &c_red, empty_orbit, true)?
    } else {
        if sc.abbrev_len().saturating_mul(sc.dense_len()) > 4_000_000 {
            return Err(LocError::TooLarge(
                "functional is not tree-symmetric and the full dual program is too large".into(),
            ));
        }
        let rows: Vec<Vec<f64>> = (0..sc.dense_len())
            .map(|p| {
                let mut row = vec![0.0; sc.abbrev_len()];
                for (a, v) in map.s_row_sparse_multi(p) {
                    row[a] += v;
                }
                row
            })
            .collect();
        solve_dual(&rows, &c_ab, 0, false)?
    };

    verify_ns_min(net, &cert)?;
    Ok((cert.mu, cert))
}

/// Solve min -mu s.t. sum_p lambda_p s[p] + mu e_empty = c, lambda >= 0.
fn solve_dual(
    s_rows: &[Vec<f64>],
    c: &[f64],
    empty: usize,
    reduced: bool,
) -> Result<NsMinCertificate> {
    let mut m = LpModel::new();
    let mu = m.free_var();
    let lambda = m.pos_vars(s_rows.len());
    m.objective(mu, -1.0);
    for (o, &target) in c.iter().enumerate() {
        let mut coeffs: Vec<(crate::lpbuild::Var, f64)> = s_rows
            .iter()
            .enumerate()
            .filter_map(|(p, row)| (row[o] != 0.0).then_some((lambda[p], row[o])))
            .collect();
        if o == empty {
            coeffs.push((mu, 1.0));
        }
        m.row(RowKind::Eq, coeffs, target);
    }
    let out = m.solve()?;
    if out.status() != LpStatus::Optimal {
        return Err(LocError::Optimize(format!(
            "no-signalling bound program ended {:?}",
            out.status()
        )));
    }
    let x = &out.solution.x;
    let witness: Vec<f64> = out.solution.dual.iter().map(|v| -v).collect();
    Ok(NsMinCertificate {
        reduced,
        mu: m.value(x, mu),
        lambda: lambda.iter().map(|&v| m.value(x, v)).collect(),
        witness,
    })
}

/// Re-check a no-signalling minimum certificate against the network in
/// the full coordinate space: dual feasibility reproducing the abbreviated
/// functional, witness subnormalization and nonnegativity after expansion,
/// and matching attained value.
pub fn verify_ns_min(net: &ConnectorNetwork, cert: &NsMinCertificate) -> Result<()> {
    let sc = net.leaf_scenario().clone();
    let f = net.functional_std()?;
    let map = AbbreviationMap::new(&sc);
    let c_ab = map.functional_to_abbrev(f.data())?;
    let scale = c_ab.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let parties = sc.parties();

    let (std_orb, ab_orb) = if cert.reduced {
        let uniform = (1..parties)
            .all(|k| sc.outputs(k) == sc.outputs(0) && sc.inputs(k) == sc.inputs(0));
        if !uniform || !tree_symmetric(&f, parties) {
            return Err(LocError::Certificate(
                "reduced certificate for a functional without tree symmetry".into(),
            ));
        }
        (
            Some(tree_orbits(sc.party_dim(0), parties)),
            Some(tree_orbits(sc.abbrev_party_dim(0), parties)),
        )
    } else {
        (None, None)
    };

    let expect_lambda = std_orb.as_ref().map_or(sc.dense_len(), |o| o.reps.len());
    let expect_witness = ab_orb.as_ref().map_or(sc.abbrev_len(), |o| o.reps.len());
    if cert.lambda.len() != expect_lambda || cert.witness.len() != expect_witness {
        return Err(LocError::Certificate(format!(
            "certificate sizes {}x{} do not match scenario {}x{}",
            cert.lambda.len(),
            cert.witness.len(),
            expect_lambda,
            expect_witness
        )));
    }
    if let Some(v) = cert.lambda.iter().find(|v| **v < -POS_TOL) {
        return Err(LocError::Certificate(format!("negative dual weight {v}")));
    }

    // dual feasibility: sum_p lambda_p S[p,·] + mu e_empty = c_ab
    let mut recon = vec![0.0; sc.abbrev_len()];
    for p in 0..sc.dense_len() {
        let lam = match &std_orb {
            Some(orb) => {
                let o = orb.orbit_of[p];
                cert.lambda[o] / orb.sizes[o] as f64
            }
            None => cert.lambda[p],
        };
        if lam == 0.0 {
            continue;
        }
        for (a, v) in map.s_row_sparse_multi(p) {
            recon[a] += lam * v;
        }
    }
    recon[0] += cert.mu;
    let residual = recon
        .iter()
        .zip(&c_ab)
        .fold(0.0f64, |m, (r, c)| m.max((r - c).abs()));
    if residual > FEAS_TOL * scale * sc.dense_len() as f64 {
        return Err(LocError::Certificate(format!(
            "dual residual {residual:.3e} too large"
        )));
    }

    // witness: a valid abbreviated no-signalling box attaining mu
    let q_ab: Vec<f64> = match &ab_orb {
        Some(orb) => orb.orbit_of.iter().map(|&o| cert.witness[o]).collect(),
        None => cert.witness.clone(),
    };
    if (q_ab[0] - 1.0).abs() > 1e-7 {
        return Err(LocError::Certificate(format!(
            "witness normalization {} != 1",
            q_ab[0]
        )));
    }
    let dense = map.expand(&q_ab)?;
    if let Some(v) = dense.iter().find(|v| **v < -1e-7) {
        return Err(LocError::Certificate(format!(
            "witness has negative probability {v}"
        )));
    }
    let attained: f64 = c_ab.iter().zip(&q_ab).map(|(c, q)| c * q).sum();
    if (attained - cert.mu).abs() > 1e-6 * scale {
        return Err(LocError::Certificate(format!(
            "witness value {attained} does not attain bound {}",
            cert.mu
        )));
    }
    Ok(())
}

/// Perfect binary tree of CHSH connectors of the given depth, closed at
/// the root with output 0 on input 0.
pub fn chsh_tree(depth: u32) -> Result<ConnectorNetwork> {
    chsh_tree_with_root(depth, 0, 0)
}

/// Perfect binary tree of CHSH connectors, closed at the root with the
/// given output and input.
pub fn chsh_tree_with_root(depth: u32, output: usize, input: usize) -> Result<ConnectorNetwork> {
    if depth == 0 || depth > 3 {
        return Err(LocError::TooLarge(format!(
            "tree depth {depth} outside supported range 1..=3"
        )));
    }
    if output > 1 || input > 1 {
        return Err(LocError::Shape("root coordinates must be binary".into()));
    }
    let leaves = 1usize << depth;
    let leaf_sc = Scenario::uniform(leaves, 2, 2)?;
    let (conn, _) = crate::chsh::chsh_connector()?;
    let mut nodes = Vec::new();
    let root = build_tree(&mut nodes, depth, 0);
    let root = match root {
        Port::Node(n) => n,
        Port::Leaf(_) => unreachable!("depth >= 1"),
    };
    ConnectorNetwork::new(vec![conn], nodes, root, output * 2 + input, leaf_sc)
}

fn build_tree(nodes: &mut Vec<NetworkNode>, depth: u32, leaf_off: usize) -> Port {
    if depth == 0 {
        return Port::Leaf(leaf_off);
    }
    let half = 1usize << (depth - 1);
    let l = build_tree(nodes, depth - 1, leaf_off);
    let r = build_tree(nodes, depth - 1, leaf_off + half);
    nodes.push(NetworkNode { connector: 0, children: vec![l, r] });
    Port::Node(nodes.len() - 1)
}

use crate::tensor::{Dir, Tensor};
use crate::{Result, TensorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Port {
    node: usize,
    leg: usize,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: Port,
    b: Port,
}

/// A network of tensors. Edges join an `Out` leg to an `In` leg of equal
/// extent; each leg carries at most one edge. Legs without an edge are the
/// open legs of the network.
#[derive(Debug, Clone, Default)]
pub struct ContractionGraph {
    nodes: Vec<Tensor>,
    edges: Vec<Edge>,
}

impl ContractionGraph {
    pub fn new() -> ContractionGraph {
        ContractionGraph::default()
    }

    pub fn add_node(&mut self, t: Tensor) -> NodeId {
        self.nodes.push(t);
        NodeId(self.nodes.len() - 1)
    }

    pub fn node(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Wire leg `la` of `a` to leg `lb` of `b`. Directions must oppose and
    /// extents must match.
    pub fn connect(&mut self, a: NodeId, la: usize, b: NodeId, lb: usize) -> Result<()> {
        let ta = self
            .nodes
            .get(a.0)
            .ok_or_else(|| TensorError::BadGraph("unknown node".into()))?;
        let tb = self
            .nodes
            .get(b.0)
            .ok_or_else(|| TensorError::BadGraph("unknown node".into()))?;
        let lega = *ta
            .legs()
            .get(la)
            .ok_or_else(|| TensorError::BadLeg("connect: leg out of range".into()))?;
        let legb = *tb
            .legs()
            .get(lb)
            .ok_or_else(|| TensorError::BadLeg("connect: leg out of range".into()))?;
        if lega.extent != legb.extent {
            return Err(TensorError::ShapeMismatch(format!(
                "connect: extents {} vs {}",
                lega.extent, legb.extent
            )));
        }
        if lega.dir == legb.dir {
            return Err(TensorError::BadGraph(
                "connect: legs must have opposite directions".into(),
            ));
        }
        let pa = Port { node: a.0, leg: la };
        let pb = Port { node: b.0, leg: lb };
        for e in &self.edges {
            for p in [e.a, e.b] {
                if p == pa || p == pb {
                    return Err(TensorError::BadGraph("connect: leg already wired".into()));
                }
            }
        }
        self.edges.push(Edge { a: pa, b: pb });
        Ok(())
    }

    /// Open ports in (node, leg) order.
    fn open_ports(&self) -> Vec<Port> {
        let mut used = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            used[e.a.node].push(e.a.leg);
            used[e.b.node].push(e.b.leg);
        }
        let mut open = Vec::new();
        for (n, t) in self.nodes.iter().enumerate() {
            for l in 0..t.rank() {
                if !used[n].contains(&l) {
                    open.push(Port { node: n, leg: l });
                }
            }
        }
        open
    }

    pub fn open_leg_count(&self) -> usize {
        self.open_ports().len()
    }

    /// True when no open leg points `Out` of the network.
    pub fn no_outgoing_open_legs(&self) -> bool {
        self.open_ports()
            .iter()
            .all(|p| self.nodes[p.node].legs()[p.leg].dir == Dir::In)
    }

    /// Contract the whole network. Open legs survive, ordered by
    /// (node index, leg index) of their original position. Uses a greedy
    /// elimination order minimising the intermediate tensor size.
    pub fn contract(&self) -> Result<Tensor> {
        self.contract_impl(None)
    }

    /// Same as `contract` but taking pair-merge decisions in the given
    /// node-pair order where possible (testing hook for order invariance).
    pub fn contract_with_bias(&self, bias: u64) -> Result<Tensor> {
        self.contract_impl(Some(bias))
    }

    fn contract_impl(&self, bias: Option<u64>) -> Result<Tensor> {
        if self.nodes.is_empty() {
            return Ok(Tensor::scalar(1.0));
        }
        // Track, per live tensor, the provenance of each leg so edges and
        // final ordering can be resolved after arbitrary merges.
        struct Live {
            t: Tensor,
            ports: Vec<Port>, // original (node, leg) for every leg of t
        }
        let mut live: Vec<Option<Live>> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(n, t)| {
                Some(Live {
                    t: t.clone(),
                    ports: (0..t.rank()).map(|l| Port { node: n, leg: l }).collect(),
                })
            })
            .collect();
        let mut owner: Vec<usize> = (0..self.nodes.len()).collect();
        let mut edges = self.edges.clone();

        // Self-edges (possible after merges) are traced out eagerly.
        let trace_self = |live: &mut Vec<Option<Live>>, edges: &mut Vec<Edge>, owner: &Vec<usize>| -> Result<()> {
            loop {
                let mut found = None;
                for (i, e) in edges.iter().enumerate() {
                    if owner[e.a.node] == owner[e.b.node] {
                        found = Some(i);
                        break;
                    }
                }
                let Some(i) = found else { return Ok(()) };
                let e = edges.remove(i);
                let slot = owner[e.a.node];
                let lv = live[slot].take().unwrap();
                let la = lv.ports.iter().position(|&p| p == e.a).unwrap();
                let lb = lv.ports.iter().position(|&p| p == e.b).unwrap();
                let t = lv.t.trace_pair(la, lb)?;
                let mut ports = lv.ports;
                let (hi, lo) = if la > lb { (la, lb) } else { (lb, la) };
                ports.remove(hi);
                ports.remove(lo);
                live[slot] = Some(Live { t, ports });
            }
        };

        trace_self(&mut live, &mut edges, &owner)?;
        let mut rng_state = bias.unwrap_or(0);

        while !edges.is_empty() {
            // Choose the connected pair with the smallest result size.
            let mut best: Option<(usize, usize, usize)> = None; // (slot_a, slot_b, cost)
            let mut seen = Vec::new();
            for e in &edges {
                let sa = owner[e.a.node];
                let sb = owner[e.b.node];
                let key = if sa < sb { (sa, sb) } else { (sb, sa) };
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                let ta = &live[key.0].as_ref().unwrap().t;
                let tb = &live[key.1].as_ref().unwrap().t;
                let shared: usize = edges
                    .iter()
                    .filter(|f| {
                        let (x, y) = (owner[f.a.node], owner[f.b.node]);
                        (x, y) == key || (y, x) == key
                    })
                    .map(|f| self.nodes[f.a.node].legs()[f.a.leg].extent)
                    .product();
                let cost = ta.len() / shared * (tb.len() / shared);
                let better = match best {
                    None => true,
                    Some((_, _, c)) => {
                        if let Some(_) = bias {
                            // Deterministic pseudo-random tie handling to
                            // exercise alternative orders in tests.
                            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            if cost == c {
                                rng_state >> 63 == 1
                            } else {
                                cost < c
                            }
                        } else {
                            cost < c
                        }
                    }
                };
                if better {
                    best = Some((key.0, key.1, cost));
                }
            }
            let (sa, sb, _) = best.expect("edges nonempty implies a candidate pair");
            let la = live[sa].take().unwrap();
            let lb = live[sb].take().unwrap();
            let mut pairs = Vec::new();
            edges.retain(|e| {
                let (x, y) = (owner[e.a.node], owner[e.b.node]);
                if (x, y) == (sa, sb) {
                    pairs.push((
                        la.ports.iter().position(|&p| p == e.a).unwrap(),
                        lb.ports.iter().position(|&p| p == e.b).unwrap(),
                    ));
                    false
                } else if (y, x) == (sa, sb) {
                    pairs.push((
                        la.ports.iter().position(|&p| p == e.b).unwrap(),
                        lb.ports.iter().position(|&p| p == e.a).unwrap(),
                    ));
                    false
                } else {
                    true
                }
            });
            let t = la.t.contract_pair(&lb.t, &pairs)?;
            let mut ports: Vec<Port> = la
                .ports
                .iter()
                .enumerate()
                .filter(|(i, _)| !pairs.iter().any(|p| p.0 == *i))
                .map(|(_, &p)| p)
                .collect();
            ports.extend(
                lb.ports
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !pairs.iter().any(|p| p.1 == *i))
                    .map(|(_, &p)| p),
            );
            live[sa] = Some(Live { t, ports });
            for o in owner.iter_mut() {
                if *o == sb {
                    *o = sa;
                }
            }
            trace_self(&mut live, &mut edges, &owner)?;
        }

        // Outer-product the disconnected components, then order open legs.
        let mut acc: Option<Live> = None;
        for lv in live.into_iter().flatten() {
            acc = Some(match acc {
                None => lv,
                Some(a) => {
                    let t = a.t.outer(&lv.t)?;
                    let mut ports = a.ports;
                    ports.extend(lv.ports);
                    Live { t, ports }
                }
            });
        }
        let acc = acc.expect("at least one node");
        let mut order: Vec<usize> = (0..acc.ports.len()).collect();
        order.sort_by_key(|&i| (acc.ports[i].node, acc.ports[i].leg));
        acc.t.permute(&order)
    }

    /// Contract everything except `node`; the result's legs mirror
    /// `node`'s legs in order (the edge partners of each leg). Requires the
    /// full graph to evaluate to a scalar, so
    /// `value == environment(n).dot(node(n))` for every node.
    pub fn environment(&self, node: NodeId) -> Result<Tensor> {
        let t = self
            .nodes
            .get(node.0)
            .ok_or_else(|| TensorError::BadGraph("unknown node".into()))?;
        if self.open_leg_count() != 0 {
            return Err(TensorError::BadGraph(
                "environment requires a closed (scalar) network".into(),
            ));
        }
        let mut partners = Vec::with_capacity(t.rank());
        for l in 0..t.rank() {
            let p = Port { node: node.0, leg: l };
            let partner = self
                .edges
                .iter()
                .find_map(|e| {
                    if e.a == p {
                        Some(e.b)
                    } else if e.b == p {
                        Some(e.a)
                    } else {
                        None
                    }
                })
                .ok_or_else(|| TensorError::BadGraph("node leg not wired".into()))?;
            partners.push(partner);
        }
        let mut sub = ContractionGraph::new();
        let mut map = vec![usize::MAX; self.nodes.len()];
        for (i, nt) in self.nodes.iter().enumerate() {
            if i != node.0 {
                map[i] = sub.add_node(nt.clone()).0;
            }
        }
        for e in &self.edges {
            if e.a.node != node.0 && e.b.node != node.0 {
                sub.connect(NodeId(map[e.a.node]), e.a.leg, NodeId(map[e.b.node]), e.b.leg)?;
            }
        }
        let env = sub.contract()?;
        // contract() orders open legs by (node, leg); re-order to mirror
        // the removed node's own leg order.
        let mut open: Vec<Port> = partners.clone();
        open.sort_by_key(|p| (p.node, p.leg));
        let perm: Vec<usize> = partners
            .iter()
            .map(|p| open.iter().position(|q| q == p).unwrap())
            .collect();
        env.permute(&perm)
    }
}

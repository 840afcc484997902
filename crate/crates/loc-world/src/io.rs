//! Lossless text formats for connectors and networks. Floats are stored as
//! hexadecimal IEEE-754 bit patterns, matching the box format.
//!
//! Connector payloads are the abbreviated-coordinate matrix, row-major over
//! output then input flat indices; the `ordering abbrev-v1` tag pins the
//! element order (empty symbol first, then (a,x) pairs a-major, party 0
//! most significant).

use std::fmt::Write as _;
use std::path::Path;

use box_models::io::{hex_f64, parse_hex_f64};
use box_models::Scenario;

use crate::connector::{Connector, World};
use crate::tree::{ConnectorNetwork, NetworkNode, Port};
use crate::{LocError, Result};

const ORDERING: &str = "abbrev-v1";

fn push_words(out: &mut String, data: &[f64]) {
    for chunk in data.chunks(16) {
        let line: Vec<String> = chunk.iter().map(|&v| hex_f64(v)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
}

fn push_scenario(out: &mut String, prefix: &str, sc: &Scenario) {
    let _ = writeln!(out, "{prefix}_parties {}", sc.parties());
    let outs: Vec<String> = (0..sc.parties())
        .map(|k| sc.outputs(k).to_string())
        .collect();
    let ins: Vec<String> = (0..sc.parties())
        .map(|k| sc.inputs(k).to_string())
        .collect();
    let _ = writeln!(out, "{prefix}_outputs {}", outs.join(" "));
    let _ = writeln!(out, "{prefix}_inputs {}", ins.join(" "));
}

struct Lines<'a> {
    iter: std::str::Lines<'a>,
    n: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines { iter: text.lines(), n: 0 }
    }

    fn next(&mut self) -> Result<&'a str> {
        loop {
            self.n += 1;
            let line = self
                .iter
                .next()
                .ok_or_else(|| LocError::Parse("unexpected end of file".into()))?
                .trim();
            if !line.is_empty() {
                return Ok(line);
            }
        }
    }

    fn field(&mut self, key: &str) -> Result<String> {
        let line = self.next()?;
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .map(str::to_owned)
            .ok_or_else(|| LocError::Parse(format!("line {}: expected `{key} ...`", self.n)))
    }

    fn usize_field(&mut self, key: &str) -> Result<usize> {
        self.field(key)?
            .parse()
            .map_err(|_| LocError::Parse(format!("line {}: bad `{key}` count", self.n)))
    }

    fn floats(&mut self, count: usize) -> Result<Vec<f64>> {
        let mut data = Vec::with_capacity(count);
        while data.len() < count {
            let line = self.next()?;
            for w in line.split_ascii_whitespace() {
                data.push(parse_hex_f64(w).map_err(|e| LocError::Parse(e.to_string()))?);
            }
        }
        if data.len() != count {
            return Err(LocError::Parse(format!(
                "expected {count} float words, found {}",
                data.len()
            )));
        }
        Ok(data)
    }

    fn scenario(&mut self, prefix: &str) -> Result<Scenario> {
        let parties = self.usize_field(&format!("{prefix}_parties"))?;
        let outputs = parse_usizes(&self.field(&format!("{prefix}_outputs"))?)?;
        let inputs = parse_usizes(&self.field(&format!("{prefix}_inputs"))?)?;
        if outputs.len() != parties || inputs.len() != parties {
            return Err(LocError::Parse(format!(
                "line {}: party count disagrees with lists",
                self.n
            )));
        }
        Ok(Scenario::new(outputs, inputs)?)
    }
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    s.split_ascii_whitespace()
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| LocError::Parse(format!("bad integer `{w}`")))
        })
        .collect()
}

fn connector_body(out: &mut String, conn: &Connector) {
    let _ = writeln!(out, "connector v1");
    let _ = writeln!(out, "world {}", conn.world().name());
    let _ = writeln!(out, "ordering {ORDERING}");
    push_scenario(out, "in", conn.in_scenario());
    push_scenario(out, "out", conn.out_scenario());
    let _ = writeln!(out, "entries {}", conn.w_ab().len());
    push_words(out, conn.w_ab());
}

pub fn connector_to_text(conn: &Connector) -> String {
    let mut out = String::new();
    connector_body(&mut out, conn);
    out
}

fn connector_from_lines(lines: &mut Lines) -> Result<Connector> {
    if lines.next()? != "connector v1" {
        return Err(LocError::Parse("not a connector v1 file".into()));
    }
    let world = World::from_name(&lines.field("world")?)?;
    let ordering = lines.field("ordering")?;
    if ordering != ORDERING {
        return Err(LocError::Parse(format!(
            "unsupported index ordering `{ordering}`"
        )));
    }
    let in_sc = lines.scenario("in")?;
    let out_sc = lines.scenario("out")?;
    let entries = lines.usize_field("entries")?;
    let want = in_sc.abbrev_len() * out_sc.abbrev_len();
    if entries != want {
        return Err(LocError::Parse(format!(
            "entry count {entries} does not match the scenarios ({want})"
        )));
    }
    let data = lines.floats(entries)?;
    Connector::from_abbrev(in_sc, out_sc, data, world)
}

pub fn connector_from_text(text: &str) -> Result<Connector> {
    connector_from_lines(&mut Lines::new(text))
}

pub fn write_connector(path: impl AsRef<Path>, conn: &Connector) -> Result<()> {
    Ok(std::fs::write(path, connector_to_text(conn))?)
}

pub fn read_connector(path: impl AsRef<Path>) -> Result<Connector> {
    connector_from_text(&std::fs::read_to_string(path)?)
}

fn port_token(p: Port) -> String {
    match p {
        Port::Leaf(l) => format!("leaf:{l}"),
        Port::Node(n) => format!("node:{n}"),
    }
}

fn parse_port(tok: &str) -> Result<Port> {
    let (kind, idx) = tok
        .split_once(':')
        .ok_or_else(|| LocError::Parse(format!("bad port token `{tok}`")))?;
    let idx: usize = idx
        .parse()
        .map_err(|_| LocError::Parse(format!("bad port index in `{tok}`")))?;
    match kind {
        "leaf" => Ok(Port::Leaf(idx)),
        "node" => Ok(Port::Node(idx)),
        _ => Err(LocError::Parse(format!("bad port kind in `{tok}`"))),
    }
}

/// Self-contained network file: leaf scenario, embedded connector blocks,
/// then one node line per placed connector and the root assignment.
pub fn network_to_text(net: &ConnectorNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network v1");
    push_scenario(&mut out, "leaf", net.leaf_scenario());
    let _ = writeln!(out, "connectors {}", net.connectors().len());
    for conn in net.connectors() {
        connector_body(&mut out, conn);
    }
    let _ = writeln!(out, "nodes {}", net.nodes().len());
    for (i, node) in net.nodes().iter().enumerate() {
        let ports: Vec<String> = node.children.iter().map(|&p| port_token(p)).collect();
        let _ = writeln!(out, "node {i} {} {}", node.connector, ports.join(" "));
    }
    let _ = writeln!(out, "root {}", net.root());
    let _ = writeln!(out, "root_input {}", net.root_input());
    out
}

pub fn network_from_text(text: &str) -> Result<ConnectorNetwork> {
    let mut lines = Lines::new(text);
    if lines.next()? != "network v1" {
        return Err(LocError::Parse("not a network v1 file".into()));
    }
    let leaf_sc = lines.scenario("leaf")?;
    let n_conn = lines.usize_field("connectors")?;
    let mut connectors = Vec::with_capacity(n_conn);
    for _ in 0..n_conn {
        connectors.push(connector_from_lines(&mut lines)?);
    }
    let n_nodes = lines.usize_field("nodes")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let body = lines.field("node")?;
        let mut toks = body.split_ascii_whitespace();
        let idx: usize = toks
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| LocError::Parse("node line needs an index".into()))?;
        if idx != i {
            return Err(LocError::Parse(format!(
                "node lines out of order: expected {i}, found {idx}"
            )));
        }
        let connector: usize = toks
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| LocError::Parse("node line needs a connector index".into()))?;
        let children: Vec<Port> = toks.map(parse_port).collect::<Result<_>>()?;
        nodes.push(NetworkNode { connector, children });
    }
    let root = lines.usize_field("root")?;
    let root_input = lines.usize_field("root_input")?;
    ConnectorNetwork::new(connectors, nodes, root, root_input, leaf_sc)
}

pub fn write_network(path: impl AsRef<Path>, net: &ConnectorNetwork) -> Result<()> {
    Ok(std::fs::write(path, network_to_text(net))?)
}

pub fn read_network(path: impl AsRef<Path>) -> Result<ConnectorNetwork> {
    network_from_text(&std::fs::read_to_string(path)?)
}

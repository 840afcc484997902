//! Lossless text format for boxes. Floats are stored as the hexadecimal
//! IEEE-754 bit pattern so round trips are exact.

use std::fmt::Write as _;
use std::path::Path;

use tensor_core::{Dir, Leg, Mps, MpsSite, Tensor};

use crate::nsbox::{BoxData, NsBox, Representation};
use crate::scenario::Scenario;
use crate::{BoxError, Result};

pub fn hex_f64(v: f64) -> String {
    format!("{:016x}", v.to_bits())
}

pub fn parse_hex_f64(s: &str) -> Result<f64> {
    let bits =
        u64::from_str_radix(s, 16).map_err(|_| BoxError::Parse(format!("bad float word `{s}`")))?;
    Ok(f64::from_bits(bits))
}

fn push_words(out: &mut String, data: &[f64]) {
    for chunk in data.chunks(16) {
        let line: Vec<String> = chunk.iter().map(|&v| hex_f64(v)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
}

pub fn box_to_text(b: &NsBox) -> String {
    let sc = b.scenario();
    let mut out = String::new();
    let _ = writeln!(out, "nsbox v1");
    let _ = writeln!(out, "parties {}", sc.parties());
    let outs: Vec<String> = (0..sc.parties())
        .map(|k| sc.outputs(k).to_string())
        .collect();
    let ins: Vec<String> = (0..sc.parties())
        .map(|k| sc.inputs(k).to_string())
        .collect();
    let _ = writeln!(out, "outputs {}", outs.join(" "));
    let _ = writeln!(out, "inputs {}", ins.join(" "));
    let rep = match b.representation() {
        Representation::Standard => "standard",
        Representation::Abbreviated => "abbreviated",
    };
    let _ = writeln!(out, "representation {rep}");
    let _ = writeln!(out, "physical {}", b.is_physical());
    match b.data() {
        BoxData::Dense(t) => {
            let _ = writeln!(out, "form dense");
            let _ = writeln!(out, "entries {}", t.len());
            push_words(&mut out, t.data());
        }
        BoxData::Mps(m) => {
            let _ = writeln!(out, "form mps");
            let _ = writeln!(out, "sites {}", m.len());
            for s in m.sites() {
                let _ = writeln!(out, "site {} {} {}", s.phys, s.left, s.right);
                push_words(&mut out, &s.data);
            }
        }
    }
    out
}

struct Lines<'a> {
    iter: std::str::Lines<'a>,
    n: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        loop {
            self.n += 1;
            let line = self
                .iter
                .next()
                .ok_or_else(|| BoxError::Parse("unexpected end of file".into()))?
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
            .ok_or_else(|| BoxError::Parse(format!("line {}: expected `{key} ...`", self.n)))
    }

    fn floats(&mut self, count: usize) -> Result<Vec<f64>> {
        let mut data = Vec::with_capacity(count);
        while data.len() < count {
            let line = self.next()?;
            for w in line.split_ascii_whitespace() {
                data.push(parse_hex_f64(w)?);
            }
        }
        if data.len() != count {
            return Err(BoxError::Parse(format!(
                "expected {count} float words, found {}",
                data.len()
            )));
        }
        Ok(data)
    }
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    s.split_ascii_whitespace()
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| BoxError::Parse(format!("bad integer `{w}`")))
        })
        .collect()
}

pub fn box_from_text(text: &str) -> Result<NsBox> {
    let mut lines = Lines {
        iter: text.lines(),
        n: 0,
    };
    if lines.next()? != "nsbox v1" {
        return Err(BoxError::Parse("not an nsbox v1 file".into()));
    }
    let parties: usize = lines
        .field("parties")?
        .parse()
        .map_err(|_| BoxError::Parse("bad party count".into()))?;
    let outputs = parse_usizes(&lines.field("outputs")?)?;
    let inputs = parse_usizes(&lines.field("inputs")?)?;
    if outputs.len() != parties || inputs.len() != parties {
        return Err(BoxError::Parse("party count disagrees with lists".into()));
    }
    let sc = Scenario::new(outputs, inputs)?;
    let rep = match lines.field("representation")?.as_str() {
        "standard" => Representation::Standard,
        "abbreviated" => Representation::Abbreviated,
        other => return Err(BoxError::Parse(format!("unknown representation `{other}`"))),
    };
    let physical = match lines.field("physical")?.as_str() {
        "true" => true,
        "false" => false,
        other => return Err(BoxError::Parse(format!("bad physical flag `{other}`"))),
    };
    let b = match lines.field("form")?.as_str() {
        "dense" => {
            let entries: usize = lines
                .field("entries")?
                .parse()
                .map_err(|_| BoxError::Parse("bad entry count".into()))?;
            let want = match rep {
                Representation::Standard => sc.dense_len(),
                Representation::Abbreviated => sc.abbrev_len(),
            };
            if entries != want {
                return Err(BoxError::Parse(format!(
                    "entry count {entries} does not match the scenario ({want})"
                )));
            }
            let data = lines.floats(entries)?;
            let legs: Vec<Leg> = (0..parties)
                .map(|k| {
                    let extent = match rep {
                        Representation::Standard => sc.party_dim(k),
                        Representation::Abbreviated => sc.abbrev_party_dim(k),
                    };
                    Leg::new(k as u32, Dir::Out, extent)
                })
                .collect();
            NsBox::from_dense(sc, rep, Tensor::new(legs, data)?)?
        }
        "mps" => {
            let n: usize = lines
                .field("sites")?
                .parse()
                .map_err(|_| BoxError::Parse("bad site count".into()))?;
            let mut sites = Vec::with_capacity(n);
            for _ in 0..n {
                let dims = parse_usizes(&lines.field("site")?)?;
                if dims.len() != 3 {
                    return Err(BoxError::Parse("site header needs phys left right".into()));
                }
                let data = lines.floats(dims[0] * dims[1] * dims[2])?;
                sites.push(MpsSite::new(dims[0], dims[1], dims[2], data)?);
            }
            NsBox::from_mps(sc, rep, Mps::new(sites)?)?
        }
        other => return Err(BoxError::Parse(format!("unknown form `{other}`"))),
    };
    Ok(if physical { b.assume_physical() } else { b })
}

pub fn write_box(path: impl AsRef<Path>, b: &NsBox) -> Result<()> {
    Ok(std::fs::write(path, box_to_text(b))?)
}

pub fn read_box(path: impl AsRef<Path>) -> Result<NsBox> {
    box_from_text(&std::fs::read_to_string(path)?)
}

//! The CHSH connector: a 2-to-1 map whose rows are the CHSH functional, a
//! relabelled copy, and their complements.  Coefficient tables are row-major
//! over doubled indices (y, y') with y = a * 2 + x.

use box_models::{NsBox, Scenario};
use tensor_core::tensor::{Dir, Leg, Tensor};

use crate::connector::{loc_feasibility, Connector, LocFeasibility, World};
use crate::{LocError, Result};

/// Minimum of the relabelled CHSH functional on the tilted pair box.
pub const CHSH_PAIR_VALUE: f64 = 0.5 - std::f64::consts::FRAC_1_SQRT_2;

/// The CHSH functional; 0 or 1 on every deterministic box, -1/2 on the
/// Popescu-Rohrlich box.
pub fn chsh_table() -> [f64; 16] {
    [
        1.0, -1.0, 1.0, 0.0, //
        -1.0, 1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.0,
    ]
}

/// CHSH with both inputs relabelled; the connector's second-row functional.
pub fn chsh_prime_table() -> [f64; 16] {
    let c = chsh_table();
    let mut t = [0.0; 16];
    for a in 0..2 {
        for x in 0..2 {
            for b in 0..2 {
                for y in 0..2 {
                    t[(a * 2 + x) * 4 + (b * 2 + y)] =
                        c[(a * 2 + (x ^ 1)) * 4 + (b * 2 + (y ^ 1))];
                }
            }
        }
    }
    t
}

/// The norm functional: 1 on every normalized box.
pub fn chsh_e_table() -> [f64; 16] {
    let mut t = [0.0; 16];
    for (i, v) in t.iter_mut().enumerate() {
        let (y1, y2) = (i / 4, i % 4);
        if y1 % 2 == 0 && y2 % 2 == 0 {
            *v = 1.0;
        }
    }
    t
}

/// CHSH with party A's input relabelled: the variant whose minimum over
/// quantum pair boxes is attained by the tilted state, at `CHSH_PAIR_VALUE`.
/// Among the 32 relabellings of `chsh_table` attaining that value this is
/// the lexicographically smallest coefficient vector.
pub fn chsh_double_prime_table() -> [f64; 16] {
    [
        -1.0, 1.0, 0.0, 0.0, //
        1.0, -1.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0,
    ]
}

/// All relabellings of a bipartite (2,2;2,2) coefficient table: party swap,
/// input flips, output flips.
pub fn table_relabelings(base: &[f64; 16]) -> Vec<[f64; 16]> {
    let mut out = Vec::with_capacity(32);
    for s in 0..2 {
        for fa in 0..2 {
            for fb in 0..2 {
                for oa in 0..2 {
                    for ob in 0..2 {
                        let mut t = [0.0; 16];
                        for a in 0..2usize {
                            for x in 0..2usize {
                                for b in 0..2usize {
                                    for y in 0..2usize {
                                        // value(t, P) = value(base, relabelled P)
                                        let (y1, y2) = if s == 0 {
                                            ((a ^ oa) * 2 + (x ^ fa), (b ^ ob) * 2 + (y ^ fb))
                                        } else {
                                            ((b ^ oa) * 2 + (y ^ fa), (a ^ ob) * 2 + (x ^ fb))
                                        };
                                        t[(a * 2 + x) * 4 + (b * 2 + y)] = base[y1 * 4 + y2];
                                    }
                                }
                            }
                        }
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// Pair a (2,2;2,2) coefficient table with a box.
pub fn table_value(table: &[f64], b: &NsBox) -> Result<f64> {
    if table.len() != 16 {
        return Err(LocError::Shape("table needs 16 entries".into()));
    }
    let t = b.dense_standard()?;
    if t.len() != 16 {
        return Err(LocError::Shape("box is not a (2,2;2,2) box".into()));
    }
    Ok(table.iter().zip(t.data()).map(|(a, b)| a * b).sum())
}

/// A 2-to-2 connector on (2,2;2,2) boxes that is not a wiring: it maps
/// every deterministic box to a local box yet produces negative
/// quasi-probabilities on a PR-box variant.
///
/// The matrix acts on abbreviated 9-vectors ordered with the empty symbol
/// first and (a,x) pairs a-major per party, party A major overall.
pub fn appendix_e_connector() -> Connector {
    let w: [f64; 81] = [
        1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, //
        0.25, 0.0, 0.0, 0.25, 0.5, -0.25, 0.5, -0.5, 0.25, //
        0.5, -0.25, 0.5, 0.5, -0.25, -0.5, 0.0, 0.25, -0.75, //
        0.75, -0.5, 0.0, 0.25, 0.5, -0.25, -0.5, 0.25, 0.5, //
        0.25, 0.0, -0.25, 0.25, 0.5, -0.25, 0.0, -0.25, 0.75, //
        0.5, -0.5, 0.25, 0.5, 0.0, -0.5, -0.5, 0.5, -0.25, //
        0.75, 0.0, 0.0, -0.25, -0.5, 0.5, -0.25, 0.25, 0.25, //
        0.25, 0.0, -0.25, -0.25, 0.0, 0.5, 0.25, -0.25, 0.5, //
        0.25, 0.0, 0.5, 0.25, -0.5, 0.0, -0.25, 0.25, -0.5,
    ];
    let sc = Scenario::uniform(2, 2, 2).expect("fixed scenario");
    Connector::from_abbrev(sc.clone(), sc, w.to_vec(), World::Loc)
        .expect("fixed 9x9 connector")
}

/// The four-row CHSH connector from two (2,2) parties to one.
///
/// Output rows over the doubled out index (b, y): row (0,0) is CHSH, (1,0)
/// its complement to the norm functional, (0,1) the relabelled copy, (1,1)
/// its complement.  Every deterministic box maps to a deterministic one, and
/// the norm functional is preserved.
pub fn chsh_connector() -> Result<(Connector, LocFeasibility)> {
    let in_sc = Scenario::uniform(2, 2, 2)?;
    let out_sc = Scenario::uniform(1, 2, 2)?;
    let c = chsh_table();
    let cp = chsh_prime_table();
    let e = chsh_e_table();
    let legs = vec![
        Leg::new(0, Dir::Out, 4),
        Leg::new(1, Dir::In, 4),
        Leg::new(2, Dir::In, 4),
    ];
    let t = Tensor::from_fn(legs, |idx| {
        let (b, y) = (idx[0] / 2, idx[0] % 2);
        let j = idx[1] * 4 + idx[2];
        let row = if y == 0 { &c } else { &cp };
        if b == 0 {
            row[j]
        } else {
            e[j] - row[j]
        }
    })?;
    let conn = Connector::from_std_tensor(in_sc, out_sc, &t, World::Loc)?;
    let cert = loc_feasibility(&conn)?;
    Ok((conn, cert))
}

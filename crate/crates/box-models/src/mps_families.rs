//! Matrix-product forms of the XOR box families.
//!
//! Each site tensor acts on row vectors (bond flows left to right), physical
//! index y = a*2 + x. Sites 1..m-1 carry a factor 1/2 so the dense form is
//! 2^(1-m) δ(⊕a, f(x⃗)). Boundary vectors are folded into the first and last
//! site, so the first site has left extent 1 and the last right extent 1.

use tensor_core::{Mps, MpsSite};

use crate::nsbox::{NsBox, Representation};
use crate::scenario::Scenario;
use crate::{BoxError, Result};

/// Generalized Svetlichny box, f = ⊕ x_k x_{k+1} ⊕ x_m x_1, bond 16.
///
/// Bond registers (two levels each): a copy of x_1, the previous party's
/// input, the partial ring sum, and the partial output parity.
pub fn svetlichny_mps(m: usize) -> Result<NsBox> {
    if m < 3 {
        return Err(BoxError::BadBox(
            "the ring function needs at least 3 parties".into(),
        ));
    }
    let bond = |r1: usize, r2: usize, r3: usize, r4: usize| ((r1 * 2 + r2) * 2 + r3) * 2 + r4;
    let mut sites = Vec::with_capacity(m);

    let mut first = vec![0.0; 4 * 16];
    for a in 0..2 {
        for x in 0..2 {
            first[(a * 2 + x) * 16 + bond(x, x, 0, a)] = 0.5;
        }
    }
    sites.push(MpsSite::new(4, 1, 16, first)?);

    for _ in 1..m - 1 {
        let mut mid = vec![0.0; 4 * 16 * 16];
        for a in 0..2 {
            for x in 0..2 {
                let y = a * 2 + x;
                for r1 in 0..2 {
                    for r2 in 0..2 {
                        for r3 in 0..2 {
                            for r4 in 0..2 {
                                let from = bond(r1, r2, r3, r4);
                                let to = bond(r1, x, r3 ^ (r2 & x), r4 ^ a);
                                mid[(y * 16 + from) * 16 + to] = 0.5;
                            }
                        }
                    }
                }
            }
        }
        sites.push(MpsSite::new(4, 16, 16, mid)?);
    }

    // Final delta: partial ring sum equals total parity plus the two
    // closing products x_{m-1} x_m and x_m x_1.
    let mut last = vec![0.0; 4 * 16];
    for a in 0..2 {
        for x in 0..2 {
            let y = a * 2 + x;
            for r1 in 0..2 {
                for r2 in 0..2 {
                    for r3 in 0..2 {
                        for r4 in 0..2 {
                            if r3 == r4 ^ (x & (r1 ^ r2)) ^ a {
                                last[y * 16 + bond(r1, r2, r3, r4)] = 1.0;
                            }
                        }
                    }
                }
            }
        }
    }
    sites.push(MpsSite::new(4, 16, 1, last)?);

    let b = NsBox::from_mps(
        Scenario::uniform(m, 2, 2)?,
        Representation::Standard,
        Mps::new(sites)?,
    )?;
    // No-signalling and normalized by the XOR-box structure.
    Ok(b.assume_physical())
}

/// Counter automaton shared by the run-length and majority boxes: `step`
/// maps (counter, input) to the next counter, `accept` holds at counter
/// values meaning f = 1, `levels` is the counter range.
fn counter_mps(
    m: usize,
    levels: usize,
    step: impl Fn(usize, usize) -> usize,
    accept: impl Fn(usize) -> bool,
) -> Result<Mps> {
    let bond = levels * 2;
    let mut sites = Vec::with_capacity(m);

    let mut first = vec![0.0; 4 * bond];
    for a in 0..2 {
        for x in 0..2 {
            first[(a * 2 + x) * bond + (x * 2 + a)] = 0.5;
        }
    }
    sites.push(MpsSite::new(4, 1, bond, first)?);

    for _ in 1..m - 1 {
        let mut mid = vec![0.0; 4 * bond * bond];
        for a in 0..2 {
            for x in 0..2 {
                let y = a * 2 + x;
                for c in 0..levels {
                    for s in 0..2 {
                        let from = c * 2 + s;
                        let to = step(c, x) * 2 + (s ^ a);
                        mid[(y * bond + from) * bond + to] = 0.5;
                    }
                }
            }
        }
        sites.push(MpsSite::new(4, bond, bond, mid)?);
    }

    let mut last = vec![0.0; 4 * bond];
    for a in 0..2 {
        for x in 0..2 {
            let y = a * 2 + x;
            for c in 0..levels {
                for s in 0..2 {
                    let hit = accept(step(c, x));
                    if (s ^ a) == hit as usize {
                        last[y * bond + c * 2 + s] = 1.0;
                    }
                }
            }
        }
    }
    sites.push(MpsSite::new(4, bond, 1, last)?);
    Ok(Mps::new(sites)?)
}

/// Box of f_r (inputs contain r consecutive ones), bond 2(r+1). The counter
/// tracks the trailing run of ones, absorbing at r.
pub fn consecutive_ones_mps(m: usize, r: usize) -> Result<NsBox> {
    if m < 2 || r < 1 || r > m {
        return Err(BoxError::BadBox(format!(
            "run length r={r} must satisfy 1 <= r <= m and m >= 2"
        )));
    }
    let mps = counter_mps(
        m,
        r + 1,
        move |c, x| {
            if c == r {
                r
            } else if x == 1 {
                c + 1
            } else {
                0
            }
        },
        move |c| c == r,
    )?;
    let b = NsBox::from_mps(Scenario::uniform(m, 2, 2)?, Representation::Standard, mps)?;
    Ok(b.assume_physical())
}

/// Majority-voting box (half or more inputs are ones), bond 2(⌈m/2⌉+1).
/// The counter sums the inputs, absorbing at the threshold ⌈m/2⌉.
pub fn majority_mps(m: usize) -> Result<NsBox> {
    if m < 2 {
        return Err(BoxError::BadBox("majority needs at least 2 parties".into()));
    }
    let t = m.div_ceil(2);
    let mps = counter_mps(m, t + 1, move |c, x| (c + x).min(t), move |c| c == t)?;
    let b = NsBox::from_mps(Scenario::uniform(m, 2, 2)?, Representation::Standard, mps)?;
    Ok(b.assume_physical())
}

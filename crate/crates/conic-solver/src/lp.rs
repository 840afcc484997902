//! Revised two-phase simplex for `min c.x  s.t.  A x = b, x >= 0`.
//!
//! The basis inverse is kept as an LU factorisation plus product-form eta
//! updates, refactorised periodically. Pricing is Dantzig with a switch to
//! Bland's rule after a stall, which guarantees termination.

use crate::linalg::{dot, Lu, Mat};
use crate::{Result, SolverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    /// Primal infeasible; `farkas` holds y with yᵀA <= 0 and yᵀb > 0.
    Infeasible,
    Unbounded,
    /// Iteration limit hit before optimality.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub a: Mat,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl LpProblem {
    pub fn new(a: Mat, b: Vec<f64>, c: Vec<f64>) -> Result<LpProblem> {
        if a.rows != b.len() || a.cols != c.len() {
            return Err(SolverError::Dims(format!(
                "lp: A is {}x{}, b has {}, c has {}",
                a.rows,
                a.cols,
                b.len(),
                c.len()
            )));
        }
        Ok(LpProblem { a, b, c })
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual vector y: at optimality Aᵀy <= c and bᵀy equals the objective.
    pub dual: Vec<f64>,
    pub farkas: Option<Vec<f64>>,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 60;
const STALL_LIMIT: usize = 200;

struct Basis<'a> {
    cols: &'a dyn Fn(usize, usize) -> f64, // (row, col) of the extended matrix
    m: usize,
    basic: Vec<usize>,
    lu: Lu,
    etas: Vec<(usize, Vec<f64>)>,
}

impl<'a> Basis<'a> {
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut bmat = Mat::zeros(m, m);
        for (k, &j) in self.basic.iter().enumerate() {
            for i in 0..m {
                bmat[(i, k)] = (self.cols)(i, j);
            }
        }
        self.lu = Lu::factor(&bmat)?;
        self.etas.clear();
        Ok(())
    }

    fn ftran(&self, v: &[f64]) -> Vec<f64> {
        let mut x = self.lu.solve(v);
        for (r, d) in &self.etas {
            let t = x[*r] / d[*r];
            for (i, di) in d.iter().enumerate() {
                if i != *r {
                    x[i] -= di * t;
                }
            }
            x[*r] = t;
        }
        x
    }

    fn btran(&self, c: &[f64]) -> Vec<f64> {
        let mut z = c.to_vec();
        for (r, d) in self.etas.iter().rev() {
            let s = dot(&z, d);
            z[*r] = (z[*r] - (s - z[*r] * d[*r])) / d[*r];
        }
        self.lu.solve_transposed(&z)
    }

    fn push_eta(&mut self, r: usize, d: Vec<f64>) {
        self.etas.push((r, d));
    }
}

/// Solve the equality-form LP. Rows are internally flipped so b >= 0; the
/// returned duals refer to the caller's row orientation.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let m = p.a.rows;
    let n = p.a.cols;
    if m == 0 {
        let unbounded = p.c.iter().any(|&cj| cj < -COST_TOL);
        return Ok(LpSolution {
            status: if unbounded { LpStatus::Unbounded } else { LpStatus::Optimal },
            x: vec![0.0; n],
            objective: 0.0,
            dual: Vec::new(),
            farkas: None,
            iterations: 0,
        });
    }

    let flip: Vec<f64> = p.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let b: Vec<f64> = p.b.iter().zip(&flip).map(|(v, f)| v * f).collect();
    // Extended columns: original n, then m artificials (identity).
    let a = &p.a;
    let col = |i: usize, j: usize| -> f64 {
        if j < n {
            a[(i, j)] * flip[i]
        } else if j - n == i {
            1.0
        } else {
            0.0
        }
    };

    let mut basis = Basis {
        cols: &col,
        m,
        basic: (n..n + m).collect(),
        lu: Lu::factor(&Mat::eye(m))?,
        etas: Vec::new(),
    };
    let mut xb = b.clone();
    let mut iterations = 0usize;
    let max_iterations = 50_000 + 50 * (n + m);

    let scale = p
        .b
        .iter()
        .fold(1.0f64, |s, v| s.max(v.abs()))
        .max(p.a.max_abs());

    for phase in [1, 2] {
        let cost = |j: usize| -> f64 {
            if phase == 1 {
                if j >= n {
                    1.0
                } else {
                    0.0
                }
            } else if j < n {
                p.c[j]
            } else {
                0.0
            }
        };
        let mut stall = 0usize;
        let mut last_obj = f64::INFINITY;
        loop {
            if iterations >= max_iterations {
                return Ok(stalled(p, &basis.basic, &xb, n, iterations));
            }
            iterations += 1;
            if basis.etas.len() >= REFACTOR_EVERY {
                basis.refactor()?;
                xb = basis.ftran(&b);
            }
            let cb: Vec<f64> = basis.basic.iter().map(|&j| cost(j)).collect();
            let y = basis.btran(&cb);
            let obj = dot(&cb, &xb);
            if obj < last_obj - 1e-12 * scale.max(1.0) {
                last_obj = obj;
                stall = 0;
            } else {
                stall += 1;
            }
            let bland = stall > STALL_LIMIT;

            // Price the candidate columns.
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..n + m {
                if phase == 2 && j >= n {
                    continue; // artificials may not re-enter
                }
                if basis.basic.contains(&j) {
                    continue;
                }
                let aj: Vec<f64> = (0..m).map(|i| col(i, j)).collect();
                let r = cost(j) - dot(&y, &aj);
                if r < -COST_TOL {
                    if bland {
                        entering = Some((j, r));
                        break;
                    }
                    match entering {
                        Some((_, best)) if r >= best => {}
                        _ => entering = Some((j, r)),
                    }
                }
            }

            let Some((q, _)) = entering else {
                break; // phase optimal
            };
            let aq: Vec<f64> = (0..m).map(|i| col(i, q)).collect();
            let d = basis.ftran(&aq);

            // Ratio test; basic artificials at zero are forced out first in
            // phase 2 so they can never rise again.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let forced = phase == 2 && basis.basic[i] >= n && d[i].abs() > PIVOT_TOL;
                if d[i] > PIVOT_TOL || forced {
                    let ratio = if forced { 0.0 } else { (xb[i].max(0.0)) / d[i] };
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && bland && basis.basic[i] < basis.basic[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, theta)) = leave else {
                if phase == 1 {
                    return Err(SolverError::Numerical("phase-1 ray".into()));
                }
                return Ok(LpSolution {
                    status: LpStatus::Unbounded,
                    x: vec![0.0; n],
                    objective: f64::NEG_INFINITY,
                    dual: vec![0.0; m],
                    farkas: None,
                    iterations,
                });
            };

            for i in 0..m {
                if i != r {
                    xb[i] -= theta * d[i];
                    if xb[i] < 0.0 {
                        xb[i] = xb[i].max(-1e-7 * scale.max(1.0));
                        if xb[i] > -PIVOT_TOL {
                            xb[i] = xb[i].max(0.0);
                        }
                    }
                }
            }
            xb[r] = theta;
            basis.basic[r] = q;
            basis.push_eta(r, d);
        }

        if phase == 1 {
            let cb: Vec<f64> = basis.basic.iter().map(|&j| if j >= n { 1.0 } else { 0.0 }).collect();
            let obj = dot(&cb, &xb);
            if obj > 1e-7 * scale.max(1.0) {
                let y = basis.btran(&cb);
                let farkas: Vec<f64> = y.iter().zip(&flip).map(|(v, f)| v * f).collect();
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: vec![0.0; n],
                    objective: f64::INFINITY,
                    dual: vec![0.0; m],
                    farkas: Some(farkas),
                    iterations,
                });
            }
            // Zero out residual artificial levels before phase 2.
            for i in 0..m {
                if basis.basic[i] >= n {
                    xb[i] = 0.0;
                }
            }
        }
    }

    let mut x = vec![0.0; n];
    for (i, &j) in basis.basic.iter().enumerate() {
        if j < n {
            x[j] = xb[i].max(0.0);
        }
    }
    let cb: Vec<f64> = basis.basic.iter().map(|&j| if j < n { p.c[j] } else { 0.0 }).collect();
    let y = basis.btran(&cb);
    let dual: Vec<f64> = y.iter().zip(&flip).map(|(v, f)| v * f).collect();
    let objective = dot(&p.c, &x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        dual,
        farkas: None,
        iterations,
    })
}

fn stalled(p: &LpProblem, basic: &[usize], xb: &[f64], n: usize, iterations: usize) -> LpSolution {
    let mut x = vec![0.0; n];
    for (i, &j) in basic.iter().enumerate() {
        if j < n {
            x[j] = xb[i].max(0.0);
        }
    }
    LpSolution {
        status: LpStatus::Stalled,
        objective: dot(&p.c, &x),
        x,
        dual: vec![0.0; p.a.rows],
        farkas: None,
        iterations,
    }
}

/// Residual checks on a claimed optimal solution: primal feasibility,
/// dual feasibility of `dual` and matching objectives, all within `tol`
/// relative to the problem scale.
pub fn check_lp_optimal(p: &LpProblem, sol: &LpSolution, tol: f64) -> std::result::Result<(), String> {
    let scale = p.a.max_abs().max(1.0);
    if sol.x.iter().any(|&v| v < -tol) {
        return Err("negative variable".into());
    }
    let ax = p.a.matvec(&sol.x);
    for (i, (u, v)) in ax.iter().zip(&p.b).enumerate() {
        if (u - v).abs() > tol * scale {
            return Err(format!("row {i} residual {}", u - v));
        }
    }
    let aty = p.a.tmatvec(&sol.dual);
    for (j, (u, cj)) in aty.iter().zip(&p.c).enumerate() {
        if *u > cj + tol * scale {
            return Err(format!("dual infeasible at column {j}"));
        }
    }
    let by = dot(&p.b, &sol.dual);
    if (by - sol.objective).abs() > tol * scale.max(sol.objective.abs()) {
        return Err(format!("duality gap {}", by - sol.objective));
    }
    Ok(())
}

/// Check a Farkas certificate of infeasibility: yᵀA <= tol and yᵀb > tol.
pub fn check_lp_infeasible(p: &LpProblem, farkas: &[f64], tol: f64) -> std::result::Result<(), String> {
    let scale = p.a.max_abs().max(1.0);
    let ya = p.a.tmatvec(farkas);
    if ya.iter().any(|&v| v > tol * scale) {
        return Err("certificate not in dual cone".into());
    }
    let yb = dot(farkas, &p.b);
    if yb <= tol * scale {
        return Err(format!("certificate value {yb} not positive"));
    }
    Ok(())
}

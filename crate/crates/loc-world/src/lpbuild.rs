//! Thin modelling layer over the equality-form LP solver.
//!
//! Variables are declared as free or nonnegative; rows as equalities or
//! `<=` inequalities.  Lowering splits free variables into positive and
//! negative parts and adds one slack column per inequality, so the same model
//! always produces the same `LpProblem` column ordering: nonnegative
//! variables first, then the free-variable splits, then slacks in row order.

use conic_solver::linalg::Mat;
use conic_solver::lp::{check_lp_infeasible, solve_lp, LpProblem, LpSolution, LpStatus};

use crate::{LocError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Free(usize),
    Pos(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Eq,
    Le,
}

struct Row {
    coeffs: Vec<(Var, f64)>,
    kind: RowKind,
    rhs: f64,
}

#[derive(Default)]
pub struct LpModel {
    n_free: usize,
    n_pos: usize,
    objective: Vec<(Var, f64)>,
    rows: Vec<Row>,
}

/// Outcome of a solved model with values mapped back to model variables.
pub struct LpOutcome {
    pub solution: LpSolution,
}

impl LpModel {
    pub fn new() -> LpModel {
        LpModel::default()
    }

    pub fn free_var(&mut self) -> Var {
        self.n_free += 1;
        Var::Free(self.n_free - 1)
    }

    pub fn free_vars(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.free_var()).collect()
    }

    pub fn pos_var(&mut self) -> Var {
        self.n_pos += 1;
        Var::Pos(self.n_pos - 1)
    }

    pub fn pos_vars(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.pos_var()).collect()
    }

    pub fn objective(&mut self, var: Var, c: f64) {
        if c != 0.0 {
            self.objective.push((var, c));
        }
    }

    pub fn row(&mut self, kind: RowKind, coeffs: Vec<(Var, f64)>, rhs: f64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    fn n_le(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::Le).count()
    }

    fn n_cols(&self) -> usize {
        self.n_pos + 2 * self.n_free + self.n_le()
    }

    fn col_of(&self, var: Var) -> usize {
        match var {
            Var::Pos(j) => j,
            Var::Free(i) => self.n_pos + 2 * i,
        }
    }

    /// Lower to the solver's `min c'x  s.t. Ax = b, x >= 0` form.
    pub fn problem(&self) -> Result<LpProblem> {
        let m = self.rows.len();
        let n = self.n_cols();
        let mut a = Mat::zeros(m, n);
        let mut b = vec![0.0; m];
        let mut slack = self.n_pos + 2 * self.n_free;
        for (i, row) in self.rows.iter().enumerate() {
            for &(var, v) in &row.coeffs {
                let j = self.col_of(var);
                a[(i, j)] += v;
                if let Var::Free(_) = var {
                    a[(i, j + 1)] -= v;
                }
            }
            if row.kind == RowKind::Le {
                a[(i, slack)] = 1.0;
                slack += 1;
            }
            b[i] = row.rhs;
        }
        let mut c = vec![0.0; n];
        for &(var, v) in &self.objective {
            let j = self.col_of(var);
            c[j] += v;
            if let Var::Free(_) = var {
                c[j + 1] -= v;
            }
        }
        Ok(LpProblem::new(a, b, c)?)
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let p = self.problem()?;
        let solution = solve_lp(&p)?;
        if solution.status == LpStatus::Infeasible {
            let farkas = solution
                .farkas
                .as_deref()
                .ok_or_else(|| LocError::Optimize("infeasible without certificate".into()))?;
            check_lp_infeasible(&p, farkas, 1e-7)
                .map_err(LocError::Certificate)?;
        }
        Ok(LpOutcome { solution })
    }

    pub fn value(&self, x: &[f64], var: Var) -> f64 {
        match var {
            Var::Pos(j) => x[j],
            Var::Free(i) => x[self.n_pos + 2 * i] - x[self.n_pos + 2 * i + 1],
        }
    }

    pub fn values(&self, x: &[f64], vars: &[Var]) -> Vec<f64> {
        vars.iter().map(|&v| self.value(x, v)).collect()
    }
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        self.solution.status
    }

    pub fn optimal(&self) -> Result<&LpSolution> {
        match self.solution.status {
            LpStatus::Optimal => Ok(&self.solution),
            s => Err(LocError::Optimize(format!("solver returned {s:?}"))),
        }
    }

    pub fn farkas(&self) -> Option<&[f64]> {
        self.solution.farkas.as_deref()
    }
}

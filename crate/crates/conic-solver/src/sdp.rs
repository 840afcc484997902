//! Interior-point solver for linear matrix inequalities:
//!
//! ```text
//! minimise    c.x
//! subject to  F0 + sum_i x_i F_i  >= 0   (block-diagonal, PSD)
//!             A x = b
//! ```
//!
//! Nesterov-Todd scaled predictor-corrector with a dense Schur complement.
//! Blocks are either dense symmetric matrices or diagonal (polyhedral)
//! blocks. The dual matrix Y and equality multipliers are reported so
//! callers can extract certificates.

use crate::linalg::{cholesky, dot, norm_inf, symmetric_eigen, Lu, Mat};
use crate::{Result, SolverError};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockDim {
    Dense(usize),
    Diag(usize),
}

impl BlockDim {
    pub fn size(&self) -> usize {
        match *self {
            BlockDim::Dense(n) | BlockDim::Diag(n) => n,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Block {
    Dense(Mat),
    Diag(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct BlockMat {
    pub blocks: Vec<Block>,
}

impl BlockMat {
    pub fn zeros(dims: &[BlockDim]) -> BlockMat {
        BlockMat {
            blocks: dims
                .iter()
                .map(|d| match *d {
                    BlockDim::Dense(n) => Block::Dense(Mat::zeros(n, n)),
                    BlockDim::Diag(n) => Block::Diag(vec![0.0; n]),
                })
                .collect(),
        }
    }

    pub fn scaled_identity(dims: &[BlockDim], tau: f64) -> BlockMat {
        BlockMat {
            blocks: dims
                .iter()
                .map(|d| match *d {
                    BlockDim::Dense(n) => Block::Dense(Mat::eye(n).scale(tau)),
                    BlockDim::Diag(n) => Block::Diag(vec![tau; n]),
                })
                .collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &BlockMat, s: f64) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            match (a, b) {
                (Block::Dense(x), Block::Dense(y)) => {
                    for (u, v) in x.data.iter_mut().zip(&y.data) {
                        *u += s * v;
                    }
                }
                (Block::Diag(x), Block::Diag(y)) => {
                    for (u, v) in x.iter_mut().zip(y) {
                        *u += s * v;
                    }
                }
                _ => panic!("block kind mismatch"),
            }
        }
    }

    pub fn inner(&self, other: &BlockMat) -> f64 {
        let mut s = 0.0;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            match (a, b) {
                (Block::Dense(x), Block::Dense(y)) => {
                    s += dot(&x.data, &y.data);
                }
                (Block::Diag(x), Block::Diag(y)) => {
                    s += dot(x, y);
                }
                _ => panic!("block kind mismatch"),
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0f64, |m, b| match b {
            Block::Dense(x) => m.max(x.max_abs()),
            Block::Diag(x) => m.max(norm_inf(x)),
        })
    }

    fn symmetrize(&mut self) {
        for b in &mut self.blocks {
            if let Block::Dense(x) = b {
                let n = x.rows;
                for i in 0..n {
                    for j in i + 1..n {
                        let v = 0.5 * (x[(i, j)] + x[(j, i)]);
                        x[(i, j)] = v;
                        x[(j, i)] = v;
                    }
                }
            }
        }
    }

    /// Smallest eigenvalue across blocks.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut lo = f64::INFINITY;
        for b in &self.blocks {
            match b {
                Block::Dense(x) => lo = lo.min(symmetric_eigen(x)?.0[0]),
                Block::Diag(x) => lo = lo.min(x.iter().cloned().fold(f64::INFINITY, f64::min)),
            }
        }
        Ok(lo)
    }
}

/// Symmetric sparse matrix over the block structure; entries with
/// `row != col` stand for both mirror positions.
#[derive(Debug, Clone, Default)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, usize, f64)>, // (block, row, col, value), row <= col
}

impl SparseSym {
    pub fn new() -> SparseSym {
        SparseSym::default()
    }

    pub fn push(&mut self, block: usize, row: usize, col: usize, val: f64) {
        let (r, c) = if row <= col { (row, col) } else { (col, row) };
        self.entries.push((block, r, c, val));
    }

    pub fn add_into(&self, out: &mut BlockMat, coeff: f64) {
        for &(b, r, c, v) in &self.entries {
            match &mut out.blocks[b] {
                Block::Dense(x) => {
                    x[(r, c)] += coeff * v;
                    if r != c {
                        x[(c, r)] += coeff * v;
                    }
                }
                Block::Diag(x) => {
                    assert_eq!(r, c, "off-diagonal entry in diagonal block");
                    x[r] += coeff * v;
                }
            }
        }
    }

    pub fn inner(&self, x: &BlockMat) -> f64 {
        let mut s = 0.0;
        for &(b, r, c, v) in &self.entries {
            let xv = match &x.blocks[b] {
                Block::Dense(m) => m[(r, c)],
                Block::Diag(d) => d[r],
            };
            s += if r == c { v * xv } else { 2.0 * v * xv };
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, e| m.max(e.3.abs()))
    }

    fn validate(&self, dims: &[BlockDim]) -> Result<()> {
        for &(b, r, c, _) in &self.entries {
            let Some(d) = dims.get(b) else {
                return Err(SolverError::BadProblem(format!("block {b} out of range")));
            };
            if c >= d.size() || r > c {
                return Err(SolverError::BadProblem(format!(
                    "entry ({b},{r},{c}) out of range"
                )));
            }
            if matches!(d, BlockDim::Diag(_)) && r != c {
                return Err(SolverError::BadProblem(
                    "off-diagonal entry in diagonal block".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub dims: Vec<BlockDim>,
    pub c: Vec<f64>,
    pub f0: SparseSym,
    pub fs: Vec<SparseSym>,
    /// Optional equalities A x = b.
    pub a: Option<Mat>,
    pub b: Vec<f64>,
    pub tol: f64,
    pub max_iters: usize,
    /// Print per-iteration progress to stderr.
    pub trace: bool,
}

impl SdpProblem {
    pub fn new(dims: Vec<BlockDim>, c: Vec<f64>, f0: SparseSym, fs: Vec<SparseSym>) -> SdpProblem {
        SdpProblem {
            dims,
            c,
            f0,
            fs,
            a: None,
            b: Vec::new(),
            tol: 1e-8,
            max_iters: 120,
            trace: false,
        }
    }

    pub fn with_equalities(mut self, a: Mat, b: Vec<f64>) -> SdpProblem {
        self.a = Some(a);
        self.b = b;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.c.len() != self.fs.len() {
            return Err(SolverError::BadProblem("c and fs lengths differ".into()));
        }
        self.f0.validate(&self.dims)?;
        for f in &self.fs {
            f.validate(&self.dims)?;
        }
        if let Some(a) = &self.a {
            if a.cols != self.c.len() || a.rows != self.b.len() {
                return Err(SolverError::BadProblem("equality dimensions".into()));
            }
        } else if !self.b.is_empty() {
            return Err(SolverError::BadProblem("b without A".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdpStatus {
    Converged,
    SlowProgress,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual PSD matrix: <F_i, y_mat> + (A^T y_eq)_i = c_i at optimality.
    pub y_mat: BlockMat,
    pub y_eq: Vec<f64>,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    pub iterations: usize,
}

pub trait SdpBackend {
    fn solve_sdp(&self, p: &SdpProblem) -> Result<SdpSolution>;
}

/// The built-in Nesterov-Todd interior-point backend.
#[derive(Debug, Clone, Default)]
pub struct NtIpm;

impl SdpBackend for NtIpm {
    fn solve_sdp(&self, p: &SdpProblem) -> Result<SdpSolution> {
        solve_sdp(p)
    }
}

enum NtScale {
    Dense { winv: Mat },
    Diag { winv: Vec<f64> },
}

/// Cholesky that retries with growing diagonal bumps; near-singular blocks
/// appear routinely once the barrier parameter is small.
fn cholesky_robust(m: &Mat) -> Result<Mat> {
    if let Ok(l) = cholesky(m, 0.0) {
        return Ok(l);
    }
    let scale = m.max_abs().max(1e-300);
    let mut bump = 1e-14 * scale;
    for _ in 0..4 {
        let mut shifted = m.clone();
        for i in 0..m.rows {
            shifted[(i, i)] += bump;
        }
        if let Ok(l) = cholesky(&shifted, 0.0) {
            return Ok(l);
        }
        bump *= 100.0;
    }
    Err(SolverError::Numerical("cholesky failed after bumps".into()))
}

/// Lower-triangular inverse.
fn tri_inverse(l: &Mat) -> Mat {
    let n = l.rows;
    let mut inv = Mat::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / l[(j, j)];
        for i in j + 1..n {
            let mut s = 0.0;
            for k in j..i {
                s += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

fn nt_scale_block(s: &Block, y: &Block) -> Result<NtScale> {
    match (s, y) {
        (Block::Dense(sm), Block::Dense(ym)) => {
            let ls = cholesky_robust(sm)?;
            let m = ls.transpose().matmul(ym).matmul(&ls);
            let (vals, vecs) = symmetric_eigen(&m)?;
            let n = sm.rows;
            // M^{1/2} = V^T diag(sqrt) V with eigenvectors as rows of V.
            let mut msqrt = Mat::zeros(n, n);
            for r in 0..n {
                let sq = vals[r].max(1e-300).sqrt();
                for i in 0..n {
                    for j in 0..n {
                        msqrt[(i, j)] += sq * vecs[(r, i)] * vecs[(r, j)];
                    }
                }
            }
            let linv = tri_inverse(&ls);
            let winv = linv.transpose().matmul(&msqrt).matmul(&linv);
            Ok(NtScale::Dense { winv })
        }
        (Block::Diag(sd), Block::Diag(yd)) => {
            let winv = sd
                .iter()
                .zip(yd)
                .map(|(&si, &yi)| (yi.max(1e-300) / si.max(1e-300)).sqrt())
                .collect();
            Ok(NtScale::Diag { winv })
        }
        _ => Err(SolverError::BadProblem("block kind mismatch".into())),
    }
}

/// W^{-1} X W^{-1} for a dense symmetric block X.
fn congr_dense(scale: &NtScale, x: &Block) -> Block {
    match (scale, x) {
        (NtScale::Dense { winv }, Block::Dense(xm)) => {
            Block::Dense(winv.matmul(xm).matmul(winv))
        }
        (NtScale::Diag { winv }, Block::Diag(xd)) => {
            Block::Diag(xd.iter().zip(winv).map(|(&v, &w)| v * w * w).collect())
        }
        _ => panic!("block kind mismatch"),
    }
}

/// Block inverse via Cholesky.
fn block_inverse(b: &Block) -> Result<Block> {
    match b {
        Block::Dense(m) => {
            let l = cholesky_robust(m)?;
            let linv = tri_inverse(&l);
            Ok(Block::Dense(linv.transpose().matmul(&linv)))
        }
        Block::Diag(d) => Ok(Block::Diag(d.iter().map(|&v| 1.0 / v.max(1e-300)).collect())),
    }
}

/// Largest step alpha in [0, 1] keeping b + alpha db positive definite,
/// backed off by the fraction-to-boundary factor.
fn max_step(b: &Block, db: &Block) -> Result<f64> {
    const GAMMA: f64 = 0.98;
    match (b, db) {
        (Block::Dense(m), Block::Dense(dm)) => {
            let l = cholesky_robust(m)?;
            let linv = tri_inverse(&l);
            let t = linv.matmul(dm).matmul(&linv.transpose());
            let lam = symmetric_eigen(&t)?.0[0];
            Ok(if lam >= 0.0 { 1.0 } else { (GAMMA / -lam).min(1.0) })
        }
        (Block::Diag(d), Block::Diag(dd)) => {
            let mut a = 1.0f64;
            for (&v, &dv) in d.iter().zip(dd) {
                if dv < 0.0 {
                    a = a.min(GAMMA * v / -dv);
                }
            }
            Ok(a)
        }
        _ => Err(SolverError::BadProblem("block kind mismatch".into())),
    }
}

struct Residuals {
    rp_mat: BlockMat, // F0 + sum x F - S
    r_eq: Vec<f64>,   // b - A x
    r_d: Vec<f64>,    // c - <F_i, Y> - (A^T y)_i
}

fn residuals(p: &SdpProblem, x: &[f64], s: &BlockMat, y: &BlockMat, y_eq: &[f64]) -> Residuals {
    let mut rp = BlockMat::zeros(&p.dims);
    p.f0.add_into(&mut rp, 1.0);
    for (xi, f) in x.iter().zip(&p.fs) {
        f.add_into(&mut rp, *xi);
    }
    rp.add_scaled(s, -1.0);
    let r_eq = match &p.a {
        Some(a) => {
            let ax = a.matvec(x);
            p.b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect()
        }
        None => Vec::new(),
    };
    let aty = match &p.a {
        Some(a) => a.tmatvec(y_eq),
        None => vec![0.0; p.c.len()],
    };
    let r_d: Vec<f64> = p
        .c
        .iter()
        .enumerate()
        .map(|(i, ci)| ci - p.fs[i].inner(y) - aty[i])
        .collect();
    Residuals { rp_mat: rp, r_eq, r_d }
}

fn schur_matrix(p: &SdpProblem, scales: &[NtScale]) -> Mat {
    let n = p.c.len();
    let col_of = |j: usize| -> Vec<f64> {
        // U_j = W^{-1} F_j W^{-1}, built blockwise from sparse entries.
        let mut uj = BlockMat::zeros(&p.dims);
        for &(b, r, c, v) in &p.fs[j].entries {
            match (&scales[b], &mut uj.blocks[b]) {
                (NtScale::Dense { winv }, Block::Dense(out)) => {
                    let nb = winv.rows;
                    // v * (col_r col_c^T + col_c col_r^T) congruence term.
                    for i in 0..nb {
                        let wir = winv[(i, r)];
                        let wic = winv[(i, c)];
                        for k in 0..nb {
                            let t = if r == c {
                                v * wir * winv[(k, c)]
                            } else {
                                v * (wir * winv[(k, c)] + wic * winv[(k, r)])
                            };
                            out[(i, k)] += t;
                        }
                    }
                }
                (NtScale::Diag { winv }, Block::Diag(out)) => {
                    out[r] += v * winv[r] * winv[r];
                }
                _ => unreachable!("validated block kinds"),
            }
        }
        (0..n).map(|i| p.fs[i].inner(&uj)).collect()
    };
    #[cfg(feature = "parallel")]
    let cols: Vec<Vec<f64>> = (0..n).into_par_iter().map(col_of).collect();
    #[cfg(not(feature = "parallel"))]
    let cols: Vec<Vec<f64>> = (0..n).map(col_of).collect();
    let mut m = Mat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    // Symmetrise away roundoff.
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn solve_sdp(p: &SdpProblem) -> Result<SdpSolution> {
    p.validate()?;
    let n = p.c.len();
    let neq = p.b.len();
    let nu: usize = p.dims.iter().map(|d| d.size()).sum();
    if nu == 0 {
        return Err(SolverError::BadProblem("empty block structure".into()));
    }
    let scale = p
        .f0
        .max_abs()
        .max(p.fs.iter().fold(0.0, |m, f| m.max(f.max_abs())))
        .max(norm_inf(&p.c))
        .max(1.0);

    let tau = scale;
    let mut x = vec![0.0; n];
    let mut s = BlockMat::scaled_identity(&p.dims, tau);
    let mut y = BlockMat::scaled_identity(&p.dims, tau);
    let mut y_eq = vec![0.0; neq];

    let mut best: Option<SdpSolution> = None;
    for iter in 0..p.max_iters {
        let res = residuals(p, &x, &s, &y, &y_eq);
        let mu = s.inner(&y) / nu as f64;
        let obj = dot(&p.c, &x);
        let rel_p = res.rp_mat.max_abs().max(norm_inf(&res.r_eq)) / scale;
        let rel_d = norm_inf(&res.r_d) / scale;
        let rel_gap = (s.inner(&y)).abs() / (1.0 + obj.abs());

        let current = SdpSolution {
            status: SdpStatus::SlowProgress,
            x: x.clone(),
            objective: obj,
            y_mat: y.clone(),
            y_eq: y_eq.clone(),
            primal_res: rel_p,
            dual_res: rel_d,
            gap: rel_gap,
            iterations: iter,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                rel_p.max(rel_d).max(rel_gap) < b.primal_res.max(b.dual_res).max(b.gap)
            }
        };
        if better {
            best = Some(current);
        }
        if rel_p < p.tol && rel_d < p.tol && rel_gap < p.tol {
            let mut sol = best.unwrap();
            sol.status = SdpStatus::Converged;
            sol.x = x;
            sol.objective = obj;
            sol.y_mat = y;
            sol.y_eq = y_eq;
            sol.primal_res = rel_p;
            sol.dual_res = rel_d;
            sol.gap = rel_gap;
            sol.iterations = iter;
            return Ok(sol);
        }

        // NT scaling and Schur complement.
        let scales: Vec<NtScale> = match s
            .blocks
            .iter()
            .zip(&y.blocks)
            .map(|(sb, yb)| nt_scale_block(sb, yb))
            .collect::<Result<Vec<_>>>()
        {
            Ok(v) => v,
            Err(_) => break,
        };
        let m = schur_matrix(p, &scales);
        let mut kkt = Mat::zeros(n + neq, n + neq);
        for i in 0..n {
            for j in 0..n {
                kkt[(i, j)] = m[(i, j)];
            }
        }
        if let Some(a) = &p.a {
            for i in 0..neq {
                for j in 0..n {
                    kkt[(n + i, j)] = a[(i, j)];
                    kkt[(j, n + i)] = -a[(i, j)];
                }
            }
        }
        // Tiny regularisation keeps the LU stable on degenerate problems.
        for i in 0..n + neq {
            kkt[(i, i)] += if i < n { 1e-13 * scale } else { -1e-13 * scale };
        }
        let lu = match Lu::factor(&kkt) {
            Ok(l) => l,
            Err(_) => break,
        };

        let yinv = match y
            .blocks
            .iter()
            .map(block_inverse)
            .collect::<Result<Vec<_>>>()
        {
            Ok(v) => BlockMat { blocks: v },
            Err(_) => break,
        };

        // One Newton solve for a given centring target sigma*mu.
        let solve_direction = |sigma_mu: f64| -> Result<(Vec<f64>, Vec<f64>, BlockMat, BlockMat)> {
            // Rc = sigma*mu*Y^{-1} - S
            let mut rc = BlockMat::zeros(&p.dims);
            rc.add_scaled(&yinv, sigma_mu);
            rc.add_scaled(&s, -1.0);
            // G = W^{-1} (Rc - Rp) W^{-1}
            let mut g = rc.clone();
            g.add_scaled(&res.rp_mat, -1.0);
            let g = BlockMat {
                blocks: scales
                    .iter()
                    .zip(&g.blocks)
                    .map(|(sc, b)| congr_dense(sc, b))
                    .collect(),
            };
            let mut rhs = vec![0.0; n + neq];
            for i in 0..n {
                rhs[i] = p.fs[i].inner(&g) - res.r_d[i];
            }
            for i in 0..neq {
                rhs[n + i] = res.r_eq[i];
            }
            // One round of iterative refinement stabilises the step when the
            // Schur complement is nearly singular close to the optimum.
            let mut sol = lu.solve(&rhs);
            let kr = kkt.matvec(&sol);
            let resid: Vec<f64> = rhs.iter().zip(&kr).map(|(r, k)| r - k).collect();
            let corr = lu.solve(&resid);
            for (si, ci) in sol.iter_mut().zip(&corr) {
                *si += ci;
            }
            let dx = sol[..n].to_vec();
            let dy_eq = sol[n..].to_vec();
            // dS = sum dx F + Rp
            let mut ds = BlockMat::zeros(&p.dims);
            for (dxi, f) in dx.iter().zip(&p.fs) {
                f.add_into(&mut ds, *dxi);
            }
            ds.add_scaled(&res.rp_mat, 1.0);
            // dY = W^{-1} (Rc - dS) W^{-1}
            let mut rcds = rc;
            rcds.add_scaled(&ds, -1.0);
            let mut dy = BlockMat {
                blocks: scales
                    .iter()
                    .zip(&rcds.blocks)
                    .map(|(sc, b)| congr_dense(sc, b))
                    .collect(),
            };
            dy.symmetrize();
            Ok((dx, dy_eq, ds, dy))
        };

        // Predictor: pure Newton toward the boundary.
        let (dx_a, _dy_eq_a, ds_a, dy_a) = solve_direction(0.0)?;
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for ((sb, db), (yb, dyb)) in s
            .blocks
            .iter()
            .zip(&ds_a.blocks)
            .zip(y.blocks.iter().zip(&dy_a.blocks))
        {
            ap = ap.min(max_step(sb, db)?);
            ad = ad.min(max_step(yb, dyb)?);
        }
        let _ = &dx_a;
        // Mehrotra-style adaptive centring.
        let mut s_aff = s.clone();
        s_aff.add_scaled(&ds_a, ap);
        let mut y_aff = y.clone();
        y_aff.add_scaled(&dy_a, ad);
        let mu_aff = s_aff.inner(&y_aff) / nu as f64;
        // Keep some centring while feasibility residuals still dominate the
        // barrier, otherwise the iterates pin to the boundary too early and
        // the residual polish stalls.
        let mut sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);
        if rel_p.max(rel_d) * scale > 10.0 * mu {
            sigma = sigma.max(0.1);
        }
        sigma = sigma.max(1e-6);

        // Corrector.
        let (dx, dy_eq, ds, dy) = solve_direction(sigma * mu)?;
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for ((sb, db), (yb, dyb)) in s
            .blocks
            .iter()
            .zip(&ds.blocks)
            .zip(y.blocks.iter().zip(&dy.blocks))
        {
            ap = ap.min(max_step(sb, db)?);
            ad = ad.min(max_step(yb, dyb)?);
        }
        if p.trace {
            eprintln!(
                "sdp iter {iter}: mu {mu:.3e} rp {rel_p:.3e} rd {rel_d:.3e} gap {rel_gap:.3e} sigma {sigma:.2e} ap {ap:.3} ad {ad:.3}"
            );
        }
        for (xi, dxi) in x.iter_mut().zip(&dx) {
            *xi += ap * dxi;
        }
        s.add_scaled(&ds, ap);
        for (yi, dyi) in y_eq.iter_mut().zip(&dy_eq) {
            *yi += ad * dyi;
        }
        y.add_scaled(&dy, ad);
    }
    best.ok_or_else(|| SolverError::Numerical("sdp made no progress".into()))
}

/// Residual checks on a claimed solution against the stated tolerance
/// budget: primal PSD slack, equalities, dual PSD and stationarity, gap.
pub fn check_sdp_solution(p: &SdpProblem, sol: &SdpSolution, tol: f64) -> std::result::Result<(), String> {
    let mut smat = BlockMat::zeros(&p.dims);
    p.f0.add_into(&mut smat, 1.0);
    for (xi, f) in sol.x.iter().zip(&p.fs) {
        f.add_into(&mut smat, *xi);
    }
    let lam_s = smat.min_eigenvalue().map_err(|e| e.to_string())?;
    if lam_s < -tol {
        return Err(format!("primal slack eigenvalue {lam_s:.3e}"));
    }
    if let Some(a) = &p.a {
        let ax = a.matvec(&sol.x);
        for (i, (u, v)) in ax.iter().zip(&p.b).enumerate() {
            if (u - v).abs() > tol * (1.0 + v.abs()) {
                return Err(format!("equality {i} residual {}", u - v));
            }
        }
    }
    let lam_y = sol.y_mat.min_eigenvalue().map_err(|e| e.to_string())?;
    if lam_y < -tol {
        return Err(format!("dual eigenvalue {lam_y:.3e}"));
    }
    let aty = match &p.a {
        Some(a) => a.tmatvec(&sol.y_eq),
        None => vec![0.0; p.c.len()],
    };
    for i in 0..p.c.len() {
        let r = p.c[i] - p.fs[i].inner(&sol.y_mat) - aty[i];
        if r.abs() > tol * (1.0 + p.c[i].abs()) {
            return Err(format!("stationarity {i} residual {r:.3e}"));
        }
    }
    Ok(())
}

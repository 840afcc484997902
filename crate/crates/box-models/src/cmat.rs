//! Dense complex matrices for quantum states, measurements and channels.

use conic_solver::linalg::{min_eigenvalue, Mat};
use num_complex::Complex64;

use crate::{BoxError, Result};

pub type C64 = Complex64;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_real(mat: &[f64], rows: usize, cols: usize) -> Self {
        assert_eq!(mat.len(), rows * cols);
        Self {
            rows,
            cols,
            data: mat.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }

    /// |v><w| as a matrix.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, &vi) in v.iter().enumerate() {
            for (j, &wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let p = self.dagger().mul(self);
        p.sub(&Self::eye(self.rows)).max_abs() <= tol
    }

    /// Real embedding [[Re, -Im], [Im, Re]]; symmetric iff self is Hermitian,
    /// with the same spectrum (doubled multiplicities).
    pub fn real_embedding(&self) -> Mat {
        let n = self.rows;
        assert_eq!(self.rows, self.cols);
        let mut m = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let v = self[(i, j)];
                m[(i, j)] = v.re;
                m[(i + n, j + n)] = v.re;
                m[(i, j + n)] = -v.im;
                m[(i + n, j)] = v.im;
            }
        }
        m
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if !self.is_hermitian(1e-9 * (1.0 + self.max_abs())) {
            return Err(BoxError::BadModel("matrix is not Hermitian".into()));
        }
        min_eigenvalue(&self.real_embedding())
            .map_err(|e| BoxError::BadModel(format!("eigenvalue solve failed: {e}")))
    }

    /// Partial transpose over the listed tensor factors.
    pub fn partial_transpose(&self, dims: &[usize], parties: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        assert_eq!((self.rows, self.cols), (d, d));
        let flip: Vec<bool> = (0..dims.len()).map(|k| parties.contains(&k)).collect();
        let mut out = Self::zeros(d, d);
        let unpack = |mut v: usize| -> Vec<usize> {
            let mut idx = vec![0; dims.len()];
            for k in (0..dims.len()).rev() {
                idx[k] = v % dims[k];
                v /= dims[k];
            }
            idx
        };
        let pack = |idx: &[usize]| -> usize {
            idx.iter().zip(dims.iter()).fold(0, |s, (&i, &d)| s * d + i)
        };
        for r in 0..d {
            for c in 0..d {
                let mut ri = unpack(r);
                let mut ci = unpack(c);
                for k in 0..dims.len() {
                    if flip[k] {
                        std::mem::swap(&mut ri[k], &mut ci[k]);
                    }
                }
                out[(pack(&ri), pack(&ci))] = self[(r, c)];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn inner(v: &[C64], w: &[C64]) -> C64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn kron_vec(v: &[C64], w: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(v.len() * w.len());
    for &a in v {
        for &b in w {
            out.push(a * b);
        }
    }
    out
}

pub fn normalize(v: &mut [C64]) {
    let n = inner(v, v).re.sqrt();
    assert!(n > 0.0, "cannot normalize zero vector");
    for x in v {
        *x /= n;
    }
}

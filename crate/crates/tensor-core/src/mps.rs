use crate::{Result, TensorError, MAX_DENSE_ENTRIES};

/// One site of a matrix-product state. `data[p][l][r]` flattened row-major
/// as `(p * left + l) * right + r`. Boundary bonds have extent 1 and are
/// folded into the terminal sites.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsSite {
    pub phys: usize,
    pub left: usize,
    pub right: usize,
    pub data: Vec<f64>,
}

impl MpsSite {
    pub fn new(phys: usize, left: usize, right: usize, data: Vec<f64>) -> Result<MpsSite> {
        if phys == 0 || left == 0 || right == 0 {
            return Err(TensorError::ShapeMismatch("mps site: zero extent".into()));
        }
        if data.len() != phys * left * right {
            return Err(TensorError::ShapeMismatch(format!(
                "mps site: {} values for shape ({phys},{left},{right})",
                data.len()
            )));
        }
        Ok(MpsSite { phys, left, right, data })
    }

    pub fn get(&self, p: usize, l: usize, r: usize) -> f64 {
        self.data[(p * self.left + l) * self.right + r]
    }
}

/// Matrix-product decomposition of a dense multi-leg tensor: entry
/// (p_1..p_m) equals the product of the site matrices A^{p_k} taken left to
/// right. Interior bonds must agree between neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct Mps {
    sites: Vec<MpsSite>,
}

impl Mps {
    pub fn new(sites: Vec<MpsSite>) -> Result<Mps> {
        if sites.is_empty() {
            return Err(TensorError::ShapeMismatch("mps: no sites".into()));
        }
        if sites[0].left != 1 || sites[sites.len() - 1].right != 1 {
            return Err(TensorError::ShapeMismatch(
                "mps: boundary bonds must have extent 1".into(),
            ));
        }
        for w in sites.windows(2) {
            if w[0].right != w[1].left {
                return Err(TensorError::ShapeMismatch(format!(
                    "mps: bond mismatch {} vs {}",
                    w[0].right, w[1].left
                )));
            }
        }
        Ok(Mps { sites })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sites(&self) -> &[MpsSite] {
        &self.sites
    }

    pub fn site(&self, k: usize) -> &MpsSite {
        &self.sites[k]
    }

    pub fn max_bond(&self) -> usize {
        self.sites.iter().map(|s| s.right).max().unwrap_or(1)
    }

    /// Evaluate a single entry: the product of site matrices selected by
    /// `phys`, contracted left to right.
    pub fn entry(&self, phys: &[usize]) -> Result<f64> {
        if phys.len() != self.sites.len() {
            return Err(TensorError::ShapeMismatch("entry: wrong arity".into()));
        }
        let mut row = vec![1.0f64];
        for (s, &p) in self.sites.iter().zip(phys) {
            if p >= s.phys {
                return Err(TensorError::ShapeMismatch("entry: index out of range".into()));
            }
            let mut next = vec![0.0; s.right];
            for (l, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for (r, slot) in next.iter_mut().enumerate() {
                    *slot += v * s.get(p, l, r);
                }
            }
            row = next;
        }
        Ok(row[0])
    }

    /// Expand to a dense row-major array over the physical indices, leftmost
    /// site slowest. Reuses left-prefix vectors along a depth-first walk so
    /// each site matrix is applied once per prefix rather than once per
    /// entry.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let mut total: usize = 1;
        for s in &self.sites {
            total = total
                .checked_mul(s.phys)
                .filter(|&t| t <= MAX_DENSE_ENTRIES)
                .ok_or(TensorError::TooLarge(usize::MAX))?;
        }
        let mut out = vec![0.0; total];
        let mut pos = 0usize;
        self.walk(0, &[1.0], &mut out, &mut pos)?;
        debug_assert_eq!(pos, total);
        Ok(out)
    }

    fn walk(&self, k: usize, row: &[f64], out: &mut Vec<f64>, pos: &mut usize) -> Result<()> {
        if k == self.sites.len() {
            out[*pos] = row[0];
            *pos += 1;
            return Ok(());
        }
        let s = &self.sites[k];
        for p in 0..s.phys {
            let mut next = vec![0.0; s.right];
            for (l, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for (r, slot) in next.iter_mut().enumerate() {
                    *slot += v * s.get(p, l, r);
                }
            }
            self.walk(k + 1, &next, out, pos)?;
        }
        Ok(())
    }

    /// Exact embedding of a dense array as an MPS (bond = product of
    /// remaining physical extents to the right; no truncation). Intended for
    /// round-trip tests on small shapes, not for production data.
    pub fn from_dense(shape: &[usize], data: &[f64]) -> Result<Mps> {
        if shape.is_empty() {
            return Err(TensorError::ShapeMismatch("from_dense: no legs".into()));
        }
        let total: usize = shape.iter().product();
        if total != data.len() {
            return Err(TensorError::ShapeMismatch("from_dense: length".into()));
        }
        // Site k routes the prefix index through a bond enumerating all
        // suffix choices: A^{p}[l][r] with l = flattened prefix so far is a
        // selector onto r = l * phys + p.
        let mut sites = Vec::with_capacity(shape.len());
        let mut left = 1usize;
        for (k, &phys) in shape.iter().enumerate() {
            let last = k + 1 == shape.len();
            let right = if last { 1 } else { left * phys };
            let mut d = vec![0.0; phys * left * right];
            for p in 0..phys {
                for l in 0..left {
                    if last {
                        d[(p * left + l) * right] = data[l * phys + p];
                    } else {
                        d[(p * left + l) * right + (l * phys + p)] = 1.0;
                    }
                }
            }
            sites.push(MpsSite::new(phys, left, right, d)?);
            left = right;
        }
        Mps::new(sites)
    }
}

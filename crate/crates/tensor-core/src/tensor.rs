use crate::{Result, TensorError, MAX_DENSE_ENTRIES};

/// Leg orientation. `Out` legs carry data away from a node (box outputs,
/// connector outputs); `In` legs absorb it. An edge always joins an `Out`
/// leg to an `In` leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    In,
    Out,
}

impl Dir {
    pub fn flipped(self) -> Dir {
        match self {
            Dir::In => Dir::Out,
            Dir::Out => Dir::In,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leg {
    pub label: u32,
    pub dir: Dir,
    pub extent: usize,
}

impl Leg {
    pub fn new(label: u32, dir: Dir, extent: usize) -> Leg {
        Leg { label, dir, extent }
    }
}

/// Dense real tensor, row-major over `legs` in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    legs: Vec<Leg>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(legs: Vec<Leg>, data: Vec<f64>) -> Result<Tensor> {
        let n: usize = legs.iter().map(|l| l.extent).product();
        if legs.iter().any(|l| l.extent == 0) {
            return Err(TensorError::ShapeMismatch("zero-extent leg".into()));
        }
        if n > MAX_DENSE_ENTRIES {
            return Err(TensorError::TooLarge(n));
        }
        if data.len() != n {
            return Err(TensorError::ShapeMismatch(format!(
                "data length {} does not match leg extents (product {})",
                data.len(),
                n
            )));
        }
        Ok(Tensor { legs, data })
    }

    pub fn zeros(legs: Vec<Leg>) -> Result<Tensor> {
        let n: usize = legs.iter().map(|l| l.extent).product();
        if n > MAX_DENSE_ENTRIES {
            return Err(TensorError::TooLarge(n));
        }
        Tensor::new(legs, vec![0.0; n])
    }

    pub fn scalar(v: f64) -> Tensor {
        Tensor {
            legs: Vec::new(),
            data: vec![v],
        }
    }

    pub fn from_fn(legs: Vec<Leg>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Tensor> {
        let mut t = Tensor::zeros(legs)?;
        let rank = t.rank();
        let mut idx = vec![0usize; rank];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.legs.len()
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_scalar(&self) -> Result<f64> {
        if self.rank() != 0 {
            return Err(TensorError::ShapeMismatch(format!(
                "expected scalar, rank is {}",
                self.rank()
            )));
        }
        Ok(self.data[0])
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.legs.len()];
        for i in (0..self.legs.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.legs[i + 1].extent;
        }
        s
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.legs.len());
        let mut flat = 0usize;
        for (i, &v) in idx.iter().enumerate() {
            debug_assert!(v < self.legs[i].extent);
            flat = flat * self.legs[i].extent + v;
        }
        flat
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for i in (0..self.legs.len()).rev() {
            idx[i] = flat % self.legs[i].extent;
            flat /= self.legs[i].extent;
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let flat = self.flatten(idx);
        self.data[flat] = v;
    }

    /// New tensor with legs rearranged so that leg `perm[i]` of `self`
    /// becomes leg `i` of the result.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor> {
        if perm.len() != self.legs.len() {
            return Err(TensorError::BadLeg("permutation length mismatch".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(TensorError::BadLeg("invalid permutation".into()));
            }
            seen[p] = true;
        }
        let new_legs: Vec<Leg> = perm.iter().map(|&p| self.legs[p]).collect();
        let old_strides = self.strides();
        let mut out = Tensor::zeros(new_legs)?;
        let rank = out.rank();
        if rank == 0 {
            out.data[0] = self.data[0];
            return Ok(out);
        }
        let mut idx = vec![0usize; rank];
        for flat in 0..out.data.len() {
            out.unflatten(flat, &mut idx);
            let mut src = 0usize;
            for (i, &v) in idx.iter().enumerate() {
                src += v * old_strides[perm[i]];
            }
            out.data[flat] = self.data[src];
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Tensor {
        let mut t = self.clone();
        for v in &mut t.data {
            *v *= s;
        }
        t
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.legs != other.legs {
            return Err(TensorError::ShapeMismatch("add: leg mismatch".into()));
        }
        let mut t = self.clone();
        for (a, b) in t.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        Ok(t)
    }

    /// Full pairing of two tensors with identical leg extents, ignoring
    /// direction: sum of elementwise products.
    pub fn dot(&self, other: &Tensor) -> Result<f64> {
        if self.data.len() != other.data.len() {
            return Err(TensorError::ShapeMismatch("dot: size mismatch".into()));
        }
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Contract `pairs` of legs between `self` and `other`:
    /// `pairs[i] = (leg of self, leg of other)`. Remaining legs keep their
    /// order, `self`'s first.
    pub fn contract_pair(&self, other: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
        for &(la, lb) in pairs {
            if la >= self.rank() || lb >= other.rank() {
                return Err(TensorError::BadLeg("contract_pair: leg out of range".into()));
            }
            if self.legs[la].extent != other.legs[lb].extent {
                return Err(TensorError::ShapeMismatch(format!(
                    "contract_pair: extents {} vs {}",
                    self.legs[la].extent, other.legs[lb].extent
                )));
            }
        }
        let mut a_contr: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut b_contr: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        {
            let mut sa = a_contr.clone();
            sa.sort_unstable();
            sa.dedup();
            let mut sb = b_contr.clone();
            sb.sort_unstable();
            sb.dedup();
            if sa.len() != pairs.len() || sb.len() != pairs.len() {
                return Err(TensorError::BadLeg("contract_pair: repeated leg".into()));
            }
        }
        let a_free: Vec<usize> = (0..self.rank()).filter(|i| !a_contr.contains(i)).collect();
        let b_free: Vec<usize> = (0..other.rank()).filter(|i| !b_contr.contains(i)).collect();

        // Permute to (free..., contracted...) on self and (contracted..., free...)
        // on other, then a plain matrix product does the sum.
        let mut a_perm = a_free.clone();
        a_perm.extend_from_slice(&a_contr);
        let mut b_perm = std::mem::take(&mut b_contr);
        b_perm.extend_from_slice(&b_free);
        a_contr.clear();

        let a = self.permute(&a_perm)?;
        let b = other.permute(&b_perm)?;
        let m: usize = a_free.iter().map(|&i| self.legs[i].extent).product();
        let k: usize = pairs.iter().map(|&(la, _)| self.legs[la].extent).product();
        let n: usize = b_free.iter().map(|&i| other.legs[i].extent).product();

        let mut legs: Vec<Leg> = a_free.iter().map(|&i| self.legs[i]).collect();
        legs.extend(b_free.iter().map(|&i| other.legs[i]));
        let total = m.checked_mul(n).ok_or(TensorError::TooLarge(usize::MAX))?;
        if total > MAX_DENSE_ENTRIES {
            return Err(TensorError::TooLarge(total));
        }
        let mut data = vec![0.0f64; total];
        // ikj loop keeps the inner accesses contiguous.
        for i in 0..m {
            for l in 0..k {
                let av = a.data[i * k + l];
                if av == 0.0 {
                    continue;
                }
                let brow = &b.data[l * n..(l + 1) * n];
                let crow = &mut data[i * n..(i + 1) * n];
                for j in 0..n {
                    crow[j] += av * brow[j];
                }
            }
        }
        Tensor::new(legs, data)
    }

    /// Trace out a pair of legs of equal extent within the same tensor.
    pub fn trace_pair(&self, la: usize, lb: usize) -> Result<Tensor> {
        if la == lb || la >= self.rank() || lb >= self.rank() {
            return Err(TensorError::BadLeg("trace_pair: bad legs".into()));
        }
        if self.legs[la].extent != self.legs[lb].extent {
            return Err(TensorError::ShapeMismatch("trace_pair: extent mismatch".into()));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&i| i != la && i != lb).collect();
        let mut perm = keep.clone();
        perm.push(la);
        perm.push(lb);
        let p = self.permute(&perm)?;
        let d = self.legs[la].extent;
        let legs: Vec<Leg> = keep.iter().map(|&i| self.legs[i]).collect();
        let outer: usize = legs.iter().map(|l| l.extent).product();
        let mut data = vec![0.0f64; outer];
        for (o, slot) in data.iter_mut().enumerate() {
            let base = o * d * d;
            let mut s = 0.0;
            for t in 0..d {
                s += p.data[base + t * d + t];
            }
            *slot = s;
        }
        Tensor::new(legs, data)
    }

    /// Outer product; result legs are `self`'s then `other`'s.
    pub fn outer(&self, other: &Tensor) -> Result<Tensor> {
        self.contract_pair(other, &[])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn relabel(&self, labels: &[u32]) -> Result<Tensor> {
        if labels.len() != self.legs.len() {
            return Err(TensorError::BadLeg("relabel: length mismatch".into()));
        }
        let mut t = self.clone();
        for (leg, &lab) in t.legs.iter_mut().zip(labels) {
            leg.label = lab;
        }
        Ok(t)
    }
}

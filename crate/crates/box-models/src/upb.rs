//! Bound entangled states from unextendible product bases.

use crate::cmat::{inner, kron_vec, normalize, CMat, C64};
use crate::{BoxError, Result};

const ORTHO_TOL: f64 = 1e-9;
const PPT_TOL: f64 = 1e-9;

/// A product vector, one local factor per party. Factors need not be
/// normalized; constructors normalize them.
#[derive(Debug, Clone)]
pub struct ProductVector {
    pub factors: Vec<Vec<C64>>,
}

impl ProductVector {
    pub fn new(factors: Vec<Vec<C64>>) -> Self {
        let mut factors = factors;
        for f in &mut factors {
            normalize(f);
        }
        Self { factors }
    }

    pub fn from_real(factors: &[&[f64]]) -> Self {
        Self::new(
            factors
                .iter()
                .map(|f| f.iter().map(|&v| C64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    pub fn full(&self) -> Vec<C64> {
        let mut v = vec![C64::new(1.0, 0.0)];
        for f in &self.factors {
            v = kron_vec(&v, f);
        }
        v
    }
}

/// The three-qubit shifts basis |01+>, |1+0>, |+01>, |--->.
pub fn shifts_basis() -> Vec<ProductVector> {
    let zero = [1.0, 0.0];
    let one = [0.0, 1.0];
    let plus = [1.0, 1.0];
    let minus = [1.0, -1.0];
    vec![
        ProductVector::from_real(&[&zero, &one, &plus]),
        ProductVector::from_real(&[&one, &plus, &zero]),
        ProductVector::from_real(&[&plus, &zero, &one]),
        ProductVector::from_real(&[&minus, &minus, &minus]),
    ]
}

/// All pairwise tensor products, party lists concatenated. The product of
/// two unextendible product bases is again one on the joint party set.
pub fn product_basis_pair(a: &[ProductVector], b: &[ProductVector]) -> Vec<ProductVector> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for va in a {
        for vb in b {
            let mut factors = va.factors.clone();
            factors.extend(vb.factors.iter().cloned());
            out.push(ProductVector { factors });
        }
    }
    out
}

/// Normalized projector onto the complement of the span of a product basis:
/// rho = (I - sum |psi><psi|) / (D - n). Verifies pairwise orthogonality and
/// positivity under every partial transpose; an unextendible basis makes the
/// result bound entangled.
pub fn upb_state(basis: &[ProductVector], dims: &[usize]) -> Result<CMat> {
    let d: usize = dims.iter().product();
    if basis.len() >= d {
        return Err(BoxError::BadModel("basis as large as the space".into()));
    }
    let fulls: Vec<Vec<C64>> = basis
        .iter()
        .map(|v| {
            if v.dims() != dims {
                return Err(BoxError::BadModel("factor dimensions disagree".into()));
            }
            Ok(v.full())
        })
        .collect::<Result<_>>()?;
    for i in 0..fulls.len() {
        for j in i + 1..fulls.len() {
            let ov = inner(&fulls[i], &fulls[j]).norm();
            if ov > ORTHO_TOL {
                return Err(BoxError::BadModel(format!(
                    "basis vectors {i} and {j} overlap by {ov:.3e}"
                )));
            }
        }
    }
    let mut rho = CMat::eye(d);
    for f in &fulls {
        rho = rho.sub(&CMat::outer(f, f));
    }
    rho = rho.scale(C64::new(1.0 / (d - basis.len()) as f64, 0.0));

    for cut in 1..(1usize << dims.len()) - 1 {
        // Complementary cuts transpose to each other; check the half with
        // party 0 untouched.
        if cut & 1 == 1 {
            continue;
        }
        let parties: Vec<usize> = (0..dims.len()).filter(|k| cut >> k & 1 == 1).collect();
        let pt = rho.partial_transpose(dims, &parties);
        let lo = pt.min_eigenvalue()?;
        if lo < -PPT_TOL {
            return Err(BoxError::BadModel(format!(
                "partial transpose over {parties:?} has eigenvalue {lo:.3e}"
            )));
        }
    }
    Ok(rho)
}

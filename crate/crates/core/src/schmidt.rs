//! Schmidt decompositions of bipartite pure states.
//!
//! A vector on `H_n ⊗ H_m` is reshaped into the `n×m` coefficient matrix whose
//! entry `(i, j)` is the amplitude of `|i⟩⊗|j⟩`; its singular value
//! decomposition yields the Schmidt coefficients and factor vectors.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qops::{BipartiteDims, CMatrix, CVector};
use crate::rng;

/// Default rank tolerance, relative to the largest Schmidt coefficient.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A unit vector on a bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: BipartiteDims,
}

impl PureState {
    /// Accepts `amplitudes` only if its norm is one to within `1e-10`.
    pub fn new(amplitudes: CVector, dims: BipartiteDims) -> Result<Self> {
        check_len(&amplitudes, dims)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("state has norm {norm}, expected 1")));
        }
        Ok(Self { amplitudes, dims })
    }

    pub fn normalized(amplitudes: CVector, dims: BipartiteDims) -> Result<Self> {
        check_len(&amplitudes, dims)?;
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amplitudes: amplitudes.unscale(norm), dims })
    }

    /// `|a⟩ ⊗ |b⟩` after normalizing both factors.
    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        let dims = BipartiteDims::new(a.len(), b.len())?;
        Self::normalized(a.kronecker(b), dims)
    }

    /// `|i⟩ ⊗ |j⟩`.
    pub fn basis(dims: BipartiteDims, i: usize, j: usize) -> Self {
        let mut v = CVector::zeros(dims.total());
        v[i * dims.m + j] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// The `n×m` coefficient matrix.
    pub fn coefficient_matrix(&self) -> CMatrix {
        reshape(&self.amplitudes, self.dims)
    }
}

fn check_len(v: &CVector, dims: BipartiteDims) -> Result<()> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {} but {dims} needs {}",
            v.len(),
            dims.total()
        )));
    }
    Ok(())
}

fn reshape(v: &CVector, dims: BipartiteDims) -> CMatrix {
    CMatrix::from_fn(dims.n, dims.m, |i, j| v[i * dims.m + j])
}

fn flatten(m: &CMatrix) -> CVector {
    let (n, k) = m.shape();
    CVector::from_fn(n * k, |idx, _| m[(idx / k, idx % k)])
}

/// `v = Σ_i α_i |u_i⟩ ⊗ |w_i⟩` with `α` descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coeffs: Vec<f64>,
    /// Left factors `u_i` as the columns of an `n × r` matrix.
    pub left: CMatrix,
    /// Right factors `w_i` as the columns of an `m × r` matrix.
    pub right: CMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> CVector {
        let mut out = CVector::zeros(self.left.nrows() * self.right.nrows());
        for (i, a) in self.coeffs.iter().enumerate() {
            let term = self.left.column(i).kronecker(&self.right.column(i));
            out += term * Complex64::new(*a, 0.0);
        }
        out
    }
}

/// Schmidt decomposition via SVD of the coefficient matrix.
pub fn schmidt_decompose(v: &PureState) -> Result<SchmidtDecomposition> {
    decompose_raw(&v.amplitudes, v.dims)
}

fn decompose_raw(v: &CVector, dims: BipartiteDims) -> Result<SchmidtDecomposition> {
    if v.norm() < 1e-300 {
        return Err(Error::ZeroVector);
    }
    let svd = reshape(v, dims).svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V†");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coeffs = order.iter().map(|&i| svd.singular_values[i]).collect();
    let left = CMatrix::from_fn(dims.n, order.len(), |r, c| u[(r, order[c])]);
    // M = U Σ V†, so the right factor of term i is row i of V† read as a column.
    let right = CMatrix::from_fn(dims.m, order.len(), |r, c| v_t[(order[c], r)]);
    Ok(SchmidtDecomposition { coeffs, left, right })
}

/// Number of Schmidt coefficients strictly above `tol`.
pub fn schmidt_rank(v: &PureState, tol: f64) -> usize {
    schmidt_decompose(v)
        .map(|d| d.coeffs.iter().filter(|a| **a > tol).count())
        .unwrap_or(0)
}

/// Schmidt rank with the tolerance `DEFAULT_RANK_TOL · α_1`.
pub fn schmidt_rank_default(v: &PureState) -> usize {
    let coeffs = schmidt_decompose(v).map(|d| d.coeffs).unwrap_or_default();
    let tol = DEFAULT_RANK_TOL * coeffs.first().copied().unwrap_or(0.0);
    coeffs.iter().filter(|a| **a > tol).count()
}

fn check_k(k: usize, dims: BipartiteDims) -> Result<()> {
    if k == 0 || k > dims.max_schmidt_rank() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is outside 1..={} for {dims}",
            dims.max_schmidt_rank()
        )));
    }
    Ok(())
}

/// `‖|v⟩⟨v|‖_{S(k)} = Σ_{i≤k} α_i²`.
pub fn pure_norm_sk(v: &PureState, k: usize) -> Result<f64> {
    check_k(k, v.dims)?;
    let d = schmidt_decompose(v)?;
    Ok(d.coeffs.iter().take(k).map(|a| a * a).sum())
}

/// Normalized random state `Σ_{i<k} |a_i⟩⊗|b_i⟩` with Gaussian factors.
pub fn random_rank_k_state(dims: BipartiteDims, k: usize, seed: u64) -> Result<PureState> {
    check_k(k, dims)?;
    let mut rng = rng::seeded(seed);
    Ok(random_rank_k_with(dims, k, &mut rng))
}

pub(crate) fn random_rank_k_with<R: Rng + ?Sized>(dims: BipartiteDims, k: usize, rng: &mut R) -> PureState {
    loop {
        let a = rng::random_complex(dims.n, k, rng);
        let b = rng::random_complex(dims.m, k, rng);
        let v = flatten(&(a * b.transpose()));
        if let Ok(state) = PureState::normalized(v, dims) {
            return state;
        }
    }
}

/// Best Schmidt-rank-`k` approximation of `v` (not normalized), or `None` for the zero vector.
pub(crate) fn truncate_to_rank(v: &CVector, dims: BipartiteDims, k: usize) -> Option<CVector> {
    let d = decompose_raw(v, dims).ok()?;
    let mut out = CMatrix::zeros(dims.n, dims.m);
    for i in 0..k.min(d.coeffs.len()) {
        let term = d.left.column(i) * d.right.column(i).transpose();
        out += term * Complex64::new(d.coeffs[i], 0.0);
    }
    Some(flatten(&out))
}

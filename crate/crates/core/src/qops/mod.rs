//! Dense bipartite operator algebra.
//!
//! Operators on `H_n ⊗ H_m` are stored as dense `nm × nm` complex matrices.
//! The basis vector `|i⟩ ⊗ |j⟩` sits at index `i·m + j`, which matches the
//! layout produced by [`kron`].

mod io;
mod maps;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_operator, parse_operator, save_operator, OperatorFile};
pub(crate) use maps::apply_second_matrix;
pub use maps::{
    adjoint_map, adjoint_pairing_defect, apply_map_second, identity_map, reduction_map, reduction_map_k, trace_map,
    transpose_map, MapRep,
};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Absolute tolerance used when validating Hermiticity on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Local dimensions of a bipartite system `H_n ⊗ H_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub n: usize,
    pub m: usize,
}

impl BipartiteDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::InvalidParameter(format!(
                "bipartite factors must both be at least 2, got {n}x{m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// Dimension of the joint space.
    pub fn total(&self) -> usize {
        self.n * self.m
    }

    /// The smaller local dimension, i.e. the largest possible Schmidt rank.
    pub fn max_schmidt_rank(&self) -> usize {
        self.n.min(self.m)
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.n, self.m)
    }
}

/// A dense Hermitian matrix, optionally tagged with a bipartite split.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    dims: Option<BipartiteDims>,
}

impl HermitianOperator {
    /// Validates Hermiticity to [`HERMITIAN_TOL`] and stores the symmetrized matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::hermitian_part(&matrix))
    }

    pub fn with_dims(matrix: CMatrix, dims: BipartiteDims) -> Result<Self> {
        Self::new(matrix)?.tagged(dims)
    }

    /// `(M + M†)/2` without a tolerance check; for matrices that are Hermitian
    /// in exact arithmetic but carry rounding from products.
    pub fn hermitian_part(matrix: &CMatrix) -> Self {
        let sym = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        Self { matrix: sym, dims: None }
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim), dims: None }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim), dims: None }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &CVector) -> Self {
        Self::hermitian_part(&(v * v.adjoint()))
    }

    /// Attaches a bipartite split; fails unless `n·m` equals the dimension.
    pub fn tagged(mut self, dims: BipartiteDims) -> Result<Self> {
        if dims.total() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "bipartite split {dims} does not match operator dimension {}",
                self.dim()
            )));
        }
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> Option<BipartiteDims> {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { matrix: &self.matrix * Complex64::new(c, 0.0), dims: self.dims }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add operators of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self { matrix: &self.matrix + &other.matrix, dims: self.dims.or(other.dims) })
    }

    /// `c·I − self`.
    pub fn shifted_complement(&self, c: f64) -> Self {
        let mut m = -self.matrix.clone();
        for i in 0..self.dim() {
            m[(i, i)] += c;
        }
        Self { matrix: m, dims: self.dims }
    }

    /// `⟨v|X|v⟩`, real for Hermitian `X`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }

    /// Real inner product `Tr(XY)`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        trace_product(&self.matrix, &other.matrix).re
    }

    pub fn eigen(&self) -> HermitianEigen {
        eig_unchecked(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().values
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigen().values.last().expect("operators are non-empty")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen().values[0]
    }

    /// Operator (spectral) norm.
    pub fn operator_norm(&self) -> f64 {
        let values = self.eigen().values;
        values[0].abs().max(values[values.len() - 1].abs())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

/// Largest `|M_ij − conj(M_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Kronecker product; `(A⊗B)[i·p+k, j·q+l] = A[i,j]·B[k,l]` for `B` of shape `p×q`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// The swap operator `S = Σ_ij |i⟩⟨j| ⊗ |j⟩⟨i|` on `H_n ⊗ H_n`.
pub fn swap_operator(n: usize) -> HermitianOperator {
    let d = n * n;
    let mut m = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + j, j * n + i)] = ONE;
        }
    }
    tag_square(HermitianOperator { matrix: m, dims: None }, n)
}

/// Projection onto `(1/√n) Σ_i |i⟩⊗|i⟩`.
pub fn max_entangled(n: usize) -> HermitianOperator {
    let d = n * n;
    let w = Complex64::new(1.0 / n as f64, 0.0);
    let mut m = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + i, j * n + j)] = w;
        }
    }
    tag_square(HermitianOperator { matrix: m, dims: None }, n)
}

fn tag_square(op: HermitianOperator, n: usize) -> HermitianOperator {
    match BipartiteDims::new(n, n) {
        Ok(dims) => HermitianOperator { dims: Some(dims), ..op },
        Err(_) => op,
    }
}

/// Transposes every `m×m` block of a bipartite matrix, i.e. `(id_n ⊗ T)(X)`.
pub fn partial_transpose_matrix(x: &CMatrix, dims: BipartiteDims) -> Result<CMatrix> {
    let (n, m) = (dims.n, dims.m);
    if x.nrows() != n * m || x.ncols() != n * m {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but split {dims} needs {}",
            x.nrows(),
            x.ncols(),
            n * m
        )));
    }
    let mut out = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[(i * m + k, j * m + l)] = x[(i * m + l, j * m + k)];
                }
            }
        }
    }
    Ok(out)
}

/// `X^Γ`, the transpose on the second tensor factor.
pub fn partial_transpose(x: &HermitianOperator, dims: BipartiteDims) -> Result<HermitianOperator> {
    if let Some(tag) = x.dims {
        if tag != dims {
            return Err(Error::DimensionMismatch(format!(
                "operator is tagged {tag} but {dims} was requested"
            )));
        }
    }
    let m = partial_transpose_matrix(&x.matrix, dims)?;
    Ok(HermitianOperator { matrix: m, dims: Some(dims) })
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.vectors.nrows();
        let mut lam = CMatrix::zeros(d, d);
        for (i, v) in self.values.iter().enumerate() {
            lam[(i, i)] = Complex64::new(*v, 0.0);
        }
        &self.vectors * lam * self.vectors.adjoint()
    }

    pub fn vector(&self, idx: usize) -> CVector {
        self.vectors.column(idx).into_owned()
    }
}

/// Eigen-decomposition of `h`, rejecting inputs that are not Hermitian to
/// within `1e-12·max(1, ‖h‖_max)`.
pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("eigensolver needs a square matrix".into()));
    }
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(eig_unchecked(h))
}

fn eig_unchecked(h: &CMatrix) -> HermitianEigen {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Real symmetric embedding `[[Re H, −Im H], [Im H, Re H]]`.
pub fn realify(h: &HermitianOperator) -> DMatrix<f64> {
    realify_matrix(&h.matrix)
}

pub(crate) fn realify_matrix(h: &CMatrix) -> DMatrix<f64> {
    let d = h.nrows();
    DMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let z = h[(i % d, j % d)];
        match (i < d, j < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

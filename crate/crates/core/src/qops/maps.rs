use num_complex::Complex64;

use super::{trace_product, BipartiteDims, CMatrix, HermitianOperator, ONE};
use crate::error::{Error, Result};

/// A linear map `Φ(X) = Σ_a E_a X F_a` stored as generalized Choi-Kraus pairs.
///
/// `E_a` is `out_dim × in_dim` and `F_a` is `in_dim × out_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRep {
    in_dim: usize,
    out_dim: usize,
    pairs: Vec<(CMatrix, CMatrix)>,
    label: String,
}

impl MapRep {
    pub fn new(in_dim: usize, out_dim: usize, pairs: Vec<(CMatrix, CMatrix)>) -> Result<Self> {
        for (e, f) in &pairs {
            if e.shape() != (out_dim, in_dim) || f.shape() != (in_dim, out_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Choi-Kraus pair has shapes {:?}/{:?}, expected ({out_dim}, {in_dim})/({in_dim}, {out_dim})",
                    e.shape(),
                    f.shape()
                )));
            }
        }
        Ok(Self { in_dim, out_dim, pairs, label: "custom".into() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn pairs(&self) -> &[(CMatrix, CMatrix)] {
        &self.pairs
    }

    pub fn is_real(&self) -> bool {
        self.pairs.iter().all(|(e, f)| e.iter().chain(f.iter()).all(|z| z.im == 0.0))
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "map expects {}x{} input, got {:?}",
                self.in_dim,
                self.in_dim,
                x.shape()
            )));
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for (e, f) in &self.pairs {
            out += e * x * f;
        }
        out
    }

    /// Image of the matrix unit `|g⟩⟨h|`: `Σ_a E_a[:, g] F_a[h, :]`.
    pub fn apply_unit(&self, g: usize, h: usize) -> CMatrix {
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for (e, f) in &self.pairs {
            out += e.column(g) * f.row(h);
        }
        out
    }

    /// Multiplies the map by a real scalar.
    pub fn scaled(&self, c: f64) -> Self {
        let s = Complex64::new(c, 0.0);
        Self {
            pairs: self.pairs.iter().map(|(e, f)| (e * s, f.clone())).collect(),
            ..self.clone()
        }
    }

    /// `id_n ⊗ Φ` as a map on `H_n ⊗ H_in`.
    pub fn lifted(&self, n: usize) -> Self {
        let id = CMatrix::identity(n, n);
        Self {
            in_dim: n * self.in_dim,
            out_dim: n * self.out_dim,
            pairs: self
                .pairs
                .iter()
                .map(|(e, f)| (id.kronecker(e), id.kronecker(f)))
                .collect(),
            label: format!("id_{n} ⊗ {}", self.label),
        }
    }

    /// Randomized check that `Φ(X)† = Φ(X†)` holds for Hermitian `X`.
    pub fn is_hermiticity_preserving<R: rand::Rng>(&self, samples: usize, rng: &mut R) -> bool {
        (0..samples).all(|_| {
            let x = crate::rng::random_hermitian(self.in_dim, rng).into_matrix();
            let y = self.apply_unchecked(&x);
            let scale = y.norm().max(1.0);
            super::hermitian_deviation(&y) <= 1e-10 * scale
        })
    }
}

/// `Φ†`: pairs `(E_a, F_a)` become `(F_a, E_a)`, so `Tr(Φ(X)Y) = Tr(X Φ†(Y))`.
pub fn adjoint_map(phi: &MapRep) -> MapRep {
    MapRep {
        in_dim: phi.out_dim,
        out_dim: phi.in_dim,
        pairs: phi.pairs.iter().map(|(e, f)| (f.clone(), e.clone())).collect(),
        label: format!("{}†", phi.label),
    }
}

fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    m[(i, j)] = ONE;
    m
}

pub fn identity_map(m: usize) -> MapRep {
    MapRep {
        in_dim: m,
        out_dim: m,
        pairs: vec![(CMatrix::identity(m, m), CMatrix::identity(m, m))],
        label: "identity".into(),
    }
}

/// `X ↦ Xᵀ`, with pairs `(|i⟩⟨j|, |i⟩⟨j|)`.
pub fn transpose_map(m: usize) -> MapRep {
    let mut pairs = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            pairs.push((unit(m, m, i, j), unit(m, m, i, j)));
        }
    }
    MapRep { in_dim: m, out_dim: m, pairs, label: "transpose".into() }
}

/// `X ↦ Tr(X)·I − X`, the reduction map.
pub fn reduction_map(m: usize) -> MapRep {
    reduction_map_k(m, 1).with_label("reduction")
}

/// `X ↦ k·Tr(X)·I − X`, which is `k`-positive (and equals [`reduction_map`] at `k = 1`).
pub fn reduction_map_k(m: usize, k: usize) -> MapRep {
    let w = Complex64::new(k as f64, 0.0);
    let mut pairs = Vec::with_capacity(m * m + 1);
    for i in 0..m {
        for j in 0..m {
            pairs.push((unit(m, m, i, j) * w, unit(m, m, j, i)));
        }
    }
    pairs.push((CMatrix::identity(m, m), -CMatrix::identity(m, m)));
    MapRep { in_dim: m, out_dim: m, pairs, label: format!("reduction(k={k})") }
}

/// `X ↦ Tr(X)` as a map into `1×1` matrices.
pub fn trace_map(dim: usize) -> MapRep {
    let pairs = (0..dim).map(|i| (unit(1, dim, 0, i), unit(dim, 1, i, 0))).collect();
    MapRep { in_dim: dim, out_dim: 1, pairs, label: "trace".into() }
}

/// `(id_n ⊗ Φ)(X)`, computed block by block.
pub fn apply_map_second(
    x: &HermitianOperator,
    phi: &MapRep,
    dims: BipartiteDims,
) -> Result<HermitianOperator> {
    let out = apply_second_matrix(x.matrix(), phi, dims)?;
    Ok(HermitianOperator::hermitian_part(&out))
}

pub(crate) fn apply_second_matrix(x: &CMatrix, phi: &MapRep, dims: BipartiteDims) -> Result<CMatrix> {
    let (n, m) = (dims.n, dims.m);
    if phi.in_dim != m {
        return Err(Error::DimensionMismatch(format!(
            "map acts on dimension {} but the second factor has dimension {m}",
            phi.in_dim
        )));
    }
    if x.shape() != (n * m, n * m) {
        return Err(Error::DimensionMismatch(format!(
            "operator is {:?}, split {dims} needs {}",
            x.shape(),
            n * m
        )));
    }
    let p = phi.out_dim;
    let mut out = CMatrix::zeros(n * p, n * p);
    for i in 0..n {
        for j in 0..n {
            let block = x.view((i * m, j * m), (m, m)).into_owned();
            out.view_mut((i * p, j * p), (p, p)).copy_from(&phi.apply_unchecked(&block));
        }
    }
    Ok(out)
}

/// `|Tr(Φ(X)Y) − Tr(X Φ†(Y))|` for the given pair.
pub fn adjoint_pairing_defect(phi: &MapRep, x: &CMatrix, y: &CMatrix) -> f64 {
    let lhs = trace_product(&phi.apply_unchecked(x), y);
    let rhs = trace_product(x, &adjoint_map(phi).apply_unchecked(y));
    (lhs - rhs).norm()
}

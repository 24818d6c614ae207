//! Problems of the form
//!
//! ```text
//! maximize Tr(A X)  subject to  L_j(X) ⪯ B_j  for every j,  X ⪰ 0
//! minimize Σ_j Tr(B_j Y_j)  subject to  Σ_j L_j†(Y_j) ⪰ A,  Y_j ⪰ 0
//! ```
//!
//! where each `L_j` is a [`LinearPiece`]. The block map
//! `Ψ(X) = diag(L_1(X), …, L_J(X), −X)` turns the pair into `Ψ(X) ⪯ diag(B, 0)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qops::{adjoint_map, BipartiteDims, CMatrix, HermitianOperator, MapRep, ZERO};

/// One linear constraint map acting on the primal variable.
#[derive(Debug, Clone)]
pub enum LinearPiece {
    /// `scale · (id_n ⊗ Φ)(X)`.
    Lifted { n: usize, map: MapRep, scale: f64 },
    /// `scale · Tr(X)` as a `1×1` block.
    Trace { dim: usize, scale: f64 },
}

impl LinearPiece {
    pub fn in_dim(&self) -> usize {
        match self {
            LinearPiece::Lifted { n, map, .. } => n * map.in_dim(),
            LinearPiece::Trace { dim, .. } => *dim,
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            LinearPiece::Lifted { n, map, .. } => n * map.out_dim(),
            LinearPiece::Trace { .. } => 1,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            LinearPiece::Lifted { map, .. } => map.is_real(),
            LinearPiece::Trace { .. } => true,
        }
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        match self {
            LinearPiece::Lifted { n, map, scale } => {
                let dims = BipartiteDims { n: *n, m: map.in_dim() };
                let out = crate::qops::apply_second_matrix(x, map, dims).expect("shape checked on construction");
                out * Complex64::new(*scale, 0.0)
            }
            LinearPiece::Trace { scale, .. } => CMatrix::from_element(1, 1, x.trace() * *scale),
        }
    }

    /// `L†(W)` with respect to `Tr(L(X) W) = Tr(X L†(W))`.
    pub fn adjoint_apply(&self, w: &CMatrix) -> CMatrix {
        match self {
            LinearPiece::Lifted { n, map, scale } => {
                let adj = adjoint_map(map);
                let dims = BipartiteDims { n: *n, m: adj.in_dim() };
                let out = crate::qops::apply_second_matrix(w, &adj, dims).expect("shape checked on construction");
                out * Complex64::new(*scale, 0.0)
            }
            LinearPiece::Trace { dim, scale } => CMatrix::identity(*dim, *dim) * (w[(0, 0)] * *scale),
        }
    }

    /// Nonzero entries of the image of the matrix unit `|g⟩⟨h|`.
    pub(crate) fn unit_image(&self, g: usize, h: usize) -> Vec<(usize, usize, Complex64)> {
        match self {
            LinearPiece::Lifted { map, scale, .. } => {
                let (m, p) = (map.in_dim(), map.out_dim());
                let (i, a) = (g / m, g % m);
                let (j, b) = (h / m, h % m);
                let local = map.apply_unit(a, b);
                let mut out = Vec::new();
                for r in 0..p {
                    for c in 0..p {
                        let z = local[(r, c)];
                        if z != ZERO {
                            out.push((i * p + r, j * p + c, z * *scale));
                        }
                    }
                }
                out
            }
            LinearPiece::Trace { scale, .. } => {
                if g == h {
                    vec![(0, 0, Complex64::new(*scale, 0.0))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn label(&self) -> String {
        match self {
            LinearPiece::Lifted { map, scale, .. } => format!("{scale}·(id ⊗ {})", map.label()),
            LinearPiece::Trace { scale, .. } => format!("{scale}·Tr"),
        }
    }
}

/// `L(X) ⪯ rhs`.
#[derive(Debug, Clone)]
pub struct ConstraintBlock {
    pub piece: LinearPiece,
    pub rhs: HermitianOperator,
}

#[derive(Debug, Clone)]
pub struct GeneralSdp {
    objective: HermitianOperator,
    constraints: Vec<ConstraintBlock>,
    cone_maps: Vec<MapRep>,
    dims: Option<BipartiteDims>,
}

impl GeneralSdp {
    /// Checks shapes and runs a randomized Hermiticity check on every lifted map.
    pub fn new(
        objective: HermitianOperator,
        constraints: Vec<ConstraintBlock>,
        cone_maps: Vec<MapRep>,
        dims: Option<BipartiteDims>,
    ) -> Result<Self> {
        let d = objective.dim();
        if let Some(dims) = dims {
            if dims.total() != d {
                return Err(Error::DimensionMismatch(format!("objective is {d}-dimensional, split is {dims}")));
            }
        }
        let mut rng = crate::rng::seeded(0x5eed);
        for (idx, c) in constraints.iter().enumerate() {
            if c.piece.in_dim() != d || c.rhs.dim() != c.piece.out_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "constraint {idx} ({}) maps {}→{} with a {}-dimensional right-hand side, variable is {d}-dimensional",
                    c.piece.label(),
                    c.piece.in_dim(),
                    c.piece.out_dim(),
                    c.rhs.dim()
                )));
            }
            if let LinearPiece::Lifted { map, .. } = &c.piece {
                if !map.is_hermiticity_preserving(4, &mut rng) {
                    return Err(Error::InvalidParameter(format!(
                        "map '{}' does not preserve Hermiticity",
                        map.label()
                    )));
                }
            }
        }
        Ok(Self { objective, constraints, cone_maps, dims })
    }

    pub fn objective(&self) -> &HermitianOperator {
        &self.objective
    }

    pub fn constraints(&self) -> &[ConstraintBlock] {
        &self.constraints
    }

    pub fn cone_maps(&self) -> &[MapRep] {
        &self.cone_maps
    }

    pub fn dims(&self) -> Option<BipartiteDims> {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn is_real(&self) -> bool {
        self.objective.is_real()
            && self.constraints.iter().all(|c| c.piece.is_real() && c.rhs.is_real())
    }

    /// Sizes of the blocks of `Ψ`, the last one being the `−X` block.
    pub fn block_dims(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.constraints.iter().map(|c| c.piece.out_dim()).collect();
        out.push(self.dim());
        out
    }

    /// `Ψ(X) = diag(L_1(X), …, L_J(X), −X)`.
    pub fn psi(&self, x: &CMatrix) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = self.constraints.iter().map(|c| c.piece.apply(x)).collect();
        out.push(-x);
        out
    }

    /// `Ψ†(W) = Σ_j L_j†(W_j) − W_last`.
    pub fn psi_adjoint(&self, w: &[CMatrix]) -> CMatrix {
        let mut out = -w[self.constraints.len()].clone();
        for (c, wj) in self.constraints.iter().zip(w) {
            out += c.piece.adjoint_apply(wj);
        }
        out
    }

    /// `Ψ(|g⟩⟨h|)`, materialized as dense blocks.
    pub fn psi_unit(&self, g: usize, h: usize) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = self
            .constraints
            .iter()
            .map(|c| {
                let k = c.piece.out_dim();
                let mut block = CMatrix::zeros(k, k);
                for (r, col, z) in c.piece.unit_image(g, h) {
                    block[(r, col)] += z;
                }
                block
            })
            .collect();
        let d = self.dim();
        let mut last = CMatrix::zeros(d, d);
        last[(g, h)] = Complex64::new(-1.0, 0.0);
        out.push(last);
        out
    }

    /// Right-hand side `diag(B_1, …, B_J, 0)`.
    pub fn rhs_blocks(&self) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = self.constraints.iter().map(|c| c.rhs.matrix().clone()).collect();
        out.push(CMatrix::zeros(self.dim(), self.dim()));
        out
    }

    pub fn primal_objective(&self, x: &HermitianOperator) -> f64 {
        self.objective.trace_product(x)
    }

    /// Largest eigenvalue of `Ψ(X) − diag(B, 0)`; `X` is feasible iff this is `≤ 0`.
    pub fn primal_violation(&self, x: &HermitianOperator) -> f64 {
        self.psi(x.matrix())
            .iter()
            .zip(self.rhs_blocks())
            .map(|(p, b)| HermitianOperator::hermitian_part(&(p - b)).max_eigenvalue())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ_j Tr(B_j Y_j)`.
    pub fn dual_objective(&self, y: &[HermitianOperator]) -> f64 {
        self.constraints.iter().zip(y).map(|(c, yj)| c.rhs.trace_product(yj)).sum()
    }
}

fn check_psd(x: &HermitianOperator) -> Result<()> {
    let min = x.min_eigenvalue();
    if min < -1e-9 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// How `Tr(ρ) = 1` enters the program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceEncoding {
    /// `Tr(ρ) ≤ 1` only. For `X ⪰ 0` the optimum is attained at trace one, so the
    /// value is unchanged, and the dual keeps a single bounded trace multiplier.
    #[default]
    UpperBound,
    /// `Tr(ρ) ≤ 1` and `−Tr(ρ) ≤ −1` as two `1×1` blocks. The primal then has no
    /// interior, and the two multipliers grow together near the optimum.
    Equality,
}

/// `max Tr(Xρ)` over states `ρ` with `(id ⊗ Φ_i)(ρ) ⪰ 0` for every cone map.
pub fn build_cone_sdp(x: &HermitianOperator, cone_maps: &[MapRep], dims: BipartiteDims) -> Result<GeneralSdp> {
    build_cone_sdp_with(x, cone_maps, dims, TraceEncoding::default())
}

pub fn build_cone_sdp_with(
    x: &HermitianOperator,
    cone_maps: &[MapRep],
    dims: BipartiteDims,
    encoding: TraceEncoding,
) -> Result<GeneralSdp> {
    if x.dim() != dims.total() {
        return Err(Error::DimensionMismatch(format!("operator is {}-dimensional, split is {dims}", x.dim())));
    }
    check_psd(x)?;
    let mut constraints = Vec::with_capacity(cone_maps.len() + 2);
    for map in cone_maps {
        if map.in_dim() != dims.m {
            return Err(Error::DimensionMismatch(format!(
                "map '{}' acts on dimension {}, second factor has dimension {}",
                map.label(),
                map.in_dim(),
                dims.m
            )));
        }
        constraints.push(ConstraintBlock {
            piece: LinearPiece::Lifted { n: dims.n, map: map.clone(), scale: -1.0 },
            rhs: HermitianOperator::zeros(dims.n * map.out_dim()),
        });
    }
    let d = dims.total();
    let one = |v: f64| HermitianOperator::from_real(&nalgebra::DMatrix::from_element(1, 1, v)).expect("1x1 real");
    constraints.push(ConstraintBlock { piece: LinearPiece::Trace { dim: d, scale: 1.0 }, rhs: one(1.0) });
    if encoding == TraceEncoding::Equality {
        constraints.push(ConstraintBlock { piece: LinearPiece::Trace { dim: d, scale: -1.0 }, rhs: one(-1.0) });
    }
    GeneralSdp::new(x.clone(), constraints, cone_maps.to_vec(), Some(dims))
}

/// The S(k) program for a `k`-positive map `Φk`: its optimum bounds `‖X‖_{S(k)}` from above.
pub fn build_sk_sdp(x: &HermitianOperator, phi_k: &MapRep, dims: BipartiteDims) -> Result<GeneralSdp> {
    build_cone_sdp(x, std::slice::from_ref(phi_k), dims)
}

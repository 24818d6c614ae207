//! Standard form `max cᵀx s.t. Σ_i x_i F_i ⪯ D` with real symmetric block-diagonal data.
//!
//! The Hermitian variable of a [`GeneralSdp`] is expanded in an orthonormal
//! Hermitian basis `{H_l}`, and each complex block of `Ψ(H_l)` is embedded as a
//! real symmetric matrix with [`realify`](crate::qops::realify). When every piece
//! of the problem is real the complex part is dropped and only the real symmetric
//! basis is used; conjugation symmetry makes the two programs value-equivalent.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::general::GeneralSdp;
use crate::error::{Error, Result};
use crate::qops::{CMatrix, HermitianOperator, ZERO};

/// One stored entry of a sparse block-diagonal coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Sparse symmetric block-diagonal matrix; both triangles are stored.
pub type SparseBlocks = Vec<BlockEntry>;

#[derive(Debug, Clone)]
pub struct StandardSdp {
    c: Vec<f64>,
    d: Vec<DMatrix<f64>>,
    f: Vec<SparseBlocks>,
}

impl StandardSdp {
    /// Validates block shapes and the symmetry of `D` and every `F_i` (tolerance `1e-12`).
    pub fn new(c: Vec<f64>, d: Vec<DMatrix<f64>>, f: Vec<SparseBlocks>) -> Result<Self> {
        if c.len() != f.len() {
            return Err(Error::DimensionMismatch(format!("{} objective entries for {} coefficient matrices", c.len(), f.len())));
        }
        for (k, b) in d.iter().enumerate() {
            if !b.is_square() || (b - b.transpose()).amax() > 1e-12 {
                return Err(Error::InvalidParameter(format!("block {k} of D is not square symmetric")));
            }
        }
        for (i, fi) in f.iter().enumerate() {
            let mut seen: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
            for e in fi {
                let size = d.get(e.block).map(|b| b.nrows()).unwrap_or(0);
                if e.row >= size || e.col >= size {
                    return Err(Error::DimensionMismatch(format!("F_{i} has an entry outside block {}", e.block)));
                }
                *seen.entry((e.block, e.row, e.col)).or_default() += e.value;
            }
            for (&(b, r, col), v) in &seen {
                let mirror = seen.get(&(b, col, r)).copied().unwrap_or(0.0);
                if (v - mirror).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!("F_{i} is not symmetric in block {b}")));
                }
            }
        }
        Ok(Self { c, d, f })
    }

    /// Builds the problem from dense coefficient blocks.
    pub fn from_dense(c: Vec<f64>, d: Vec<DMatrix<f64>>, f: Vec<Vec<DMatrix<f64>>>) -> Result<Self> {
        let sparse = f
            .iter()
            .map(|blocks| {
                let mut out = Vec::new();
                for (block, m) in blocks.iter().enumerate() {
                    for ((row, col), &value) in m.iter().enumerate().map(|(k, v)| ((k % m.nrows(), k / m.nrows()), v)) {
                        if value != 0.0 {
                            out.push(BlockEntry { block, row, col, value });
                        }
                    }
                }
                out
            })
            .collect();
        for blocks in &f {
            let shapes: Vec<usize> = blocks.iter().map(|m| m.nrows()).collect();
            if shapes != d.iter().map(|m| m.nrows()).collect::<Vec<_>>() {
                return Err(Error::DimensionMismatch("coefficient blocks do not match D".into()));
            }
        }
        Self::new(c, d, sparse)
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn d(&self) -> &[DMatrix<f64>] {
        &self.d
    }

    pub fn f(&self) -> &[SparseBlocks] {
        &self.f
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.d.iter().map(|b| b.nrows()).collect()
    }

    /// `Σ_i x_i F_i`.
    pub fn apply_f(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.d.iter().map(|b| DMatrix::zeros(b.nrows(), b.ncols())).collect();
        for (fi, &xi) in self.f.iter().zip(x) {
            if xi == 0.0 {
                continue;
            }
            for e in fi {
                out[e.block][(e.row, e.col)] += xi * e.value;
            }
        }
        out
    }

    /// `(Tr(F_i Y))_i`.
    pub fn adjoint_f(&self, y: &[DMatrix<f64>]) -> Vec<f64> {
        self.f
            .iter()
            .map(|fi| fi.iter().map(|e| e.value * y[e.block][(e.col, e.row)]).sum())
            .collect()
    }

    pub fn dense_f(&self, i: usize) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.d.iter().map(|b| DMatrix::zeros(b.nrows(), b.ncols())).collect();
        for e in &self.f[i] {
            out[e.block][(e.row, e.col)] += e.value;
        }
        out
    }

    pub fn primal_objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn dual_objective(&self, y: &[DMatrix<f64>]) -> f64 {
        self.d.iter().zip(y).map(|(a, b)| a.dot(b)).sum()
    }

    /// Dense dump for cross-checking against external solvers.
    pub fn to_dump(&self) -> StandardSdpDump {
        let rows = |m: &DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        StandardSdpDump {
            c: self.c.clone(),
            block_sizes: self.block_sizes(),
            d: self.d.iter().map(rows).collect(),
            f: (0..self.num_vars()).map(|i| self.dense_f(i).iter().map(rows).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_dump())?)
    }
}

/// JSON layout of a dumped standard-form problem; matrices are row-major.
#[derive(Debug, Clone, Serialize)]
pub struct StandardSdpDump {
    pub c: Vec<f64>,
    pub block_sizes: Vec<usize>,
    pub d: Vec<Vec<Vec<f64>>>,
    pub f: Vec<Vec<Vec<Vec<f64>>>>,
}

/// Orthonormal Hermitian basis element on `H_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElement {
    /// `|g⟩⟨g|`.
    Diagonal(usize),
    /// `(|g⟩⟨h| + |h⟩⟨g|)/√2`, `g < h`.
    Symmetric(usize, usize),
    /// `i(|g⟩⟨h| − |h⟩⟨g|)/√2`, `g < h`.
    Antisymmetric(usize, usize),
}

impl BasisElement {
    fn entries(self) -> Vec<(usize, usize, Complex64)> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BasisElement::Diagonal(g) => vec![(g, g, Complex64::new(1.0, 0.0))],
            BasisElement::Symmetric(g, h) => vec![(g, h, Complex64::new(s, 0.0)), (h, g, Complex64::new(s, 0.0))],
            BasisElement::Antisymmetric(g, h) => {
                vec![(g, h, Complex64::new(0.0, s)), (h, g, Complex64::new(0.0, -s))]
            }
        }
    }

    pub fn matrix(self, dim: usize) -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        for (r, c, z) in self.entries() {
            out[(r, c)] = z;
        }
        out
    }
}

/// How standard-form coordinates map back to the Hermitian variable and dual blocks.
#[derive(Debug, Clone)]
pub struct Parameterization {
    dim: usize,
    basis: Vec<BasisElement>,
    real_mode: bool,
    block_dims: Vec<usize>,
}

impl Parameterization {
    fn new(dim: usize, real_mode: bool, block_dims: Vec<usize>) -> Self {
        let mut basis = Vec::with_capacity(dim * dim);
        for g in 0..dim {
            basis.push(BasisElement::Diagonal(g));
        }
        for g in 0..dim {
            for h in g + 1..dim {
                basis.push(BasisElement::Symmetric(g, h));
                if !real_mode {
                    basis.push(BasisElement::Antisymmetric(g, h));
                }
            }
        }
        Self { dim, basis, real_mode, block_dims }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// True when only the real symmetric basis is used and blocks are not realified.
    pub fn is_real_mode(&self) -> bool {
        self.real_mode
    }

    /// `X = Σ_l x_l H_l`.
    pub fn operator(&self, x: &[f64]) -> HermitianOperator {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (el, &xl) in self.basis.iter().zip(x) {
            for (r, c, z) in el.entries() {
                out[(r, c)] += z * xl;
            }
        }
        HermitianOperator::hermitian_part(&out)
    }

    /// Coordinates `x_l = Tr(H_l X)`; in real mode the imaginary part of `X` is dropped.
    pub fn coordinates(&self, x: &HermitianOperator) -> Vec<f64> {
        self.basis
            .iter()
            .map(|el| el.entries().iter().map(|&(r, c, z)| (z * x.matrix()[(c, r)]).re).sum())
            .collect()
    }

    /// Complex Hermitian dual blocks from the real dual blocks.
    ///
    /// A realified block `W = [[W11, W12], [W21, W22]]` pairs with `realify(M)` exactly
    /// as `Y = W11 + W22 + i(W21 − W12)` pairs with `M`, and `W ⪰ 0` implies `Y ⪰ 0`.
    pub fn complex_blocks(&self, w: &[DMatrix<f64>]) -> Vec<HermitianOperator> {
        w.iter()
            .zip(&self.block_dims)
            .map(|(wk, &q)| {
                if self.real_mode {
                    return HermitianOperator::from_real(&((wk + wk.transpose()) * 0.5)).expect("symmetrized");
                }
                let m = CMatrix::from_fn(q, q, |r, c| {
                    Complex64::new(wk[(r, c)] + wk[(r + q, c + q)], wk[(r + q, c)] - wk[(r, c + q)])
                });
                HermitianOperator::hermitian_part(&m)
            })
            .collect()
    }
}

/// A standard-form problem together with its parameterization.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub problem: StandardSdp,
    pub param: Parameterization,
}

fn push_entries(out: &mut SparseBlocks, block: usize, q: usize, real_mode: bool, acc: &BTreeMap<(usize, usize), Complex64>) {
    for (&(r, c), &z) in acc {
        if real_mode {
            if z.re != 0.0 {
                out.push(BlockEntry { block, row: r, col: c, value: z.re });
            }
            continue;
        }
        if z.re != 0.0 {
            out.push(BlockEntry { block, row: r, col: c, value: z.re });
            out.push(BlockEntry { block, row: r + q, col: c + q, value: z.re });
        }
        if z.im != 0.0 {
            out.push(BlockEntry { block, row: r, col: c + q, value: -z.im });
            out.push(BlockEntry { block, row: r + q, col: c, value: z.im });
        }
    }
}

fn embed(m: &CMatrix, real_mode: bool) -> DMatrix<f64> {
    if real_mode {
        m.map(|z| z.re)
    } else {
        crate::qops::realify_matrix(m)
    }
}

/// Converts a problem to standard form with `F_l` the embedding of `Ψ(H_l)`,
/// `c_l = Tr(H_l A)` and `D` the embedding of `diag(B, 0)`.
pub fn to_standard_form(p: &GeneralSdp) -> Result<StandardForm> {
    let real_mode = p.is_real();
    let block_dims = p.block_dims();
    let param = Parameterization::new(p.dim(), real_mode, block_dims.clone());
    let a = p.objective().matrix();
    let nblocks = block_dims.len();
    let mut c = Vec::with_capacity(param.basis.len());
    let mut f = Vec::with_capacity(param.basis.len());
    for el in &param.basis {
        let entries = el.entries();
        c.push(entries.iter().map(|&(r, col, z)| (z * a[(col, r)]).re).sum());
        let mut fl = SparseBlocks::new();
        for (j, con) in p.constraints().iter().enumerate() {
            let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
            for &(g, h, z) in &entries {
                for (r, col, w) in con.piece.unit_image(g, h) {
                    *acc.entry((r, col)).or_insert(ZERO) += z * w;
                }
            }
            acc.retain(|_, z| z.norm() > 1e-15);
            push_entries(&mut fl, j, block_dims[j], real_mode, &acc);
        }
        let acc: BTreeMap<(usize, usize), Complex64> = entries.iter().map(|&(g, h, z)| ((g, h), -z)).collect();
        push_entries(&mut fl, nblocks - 1, p.dim(), real_mode, &acc);
        f.push(fl);
    }
    let d = p.rhs_blocks().iter().map(|b| embed(b, real_mode)).collect();
    Ok(StandardForm { problem: StandardSdp::new(c, d, f)?, param })
}

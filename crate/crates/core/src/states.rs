//! Werner states, Bures-random states, the recursive projection family and the
//! closed-form quantities attached to them.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::{kron, max_entangled, partial_transpose, swap_operator, BipartiteDims, CMatrix, HermitianOperator};
use crate::rng;

/// Default cap on materialized tensor-power dimensions.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// `ρ_α = (I − αS)/(n(n − α))` on `H_n ⊗ H_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerState {
    pub n: usize,
    pub alpha: f64,
}

impl WernerState {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("Werner states need n ≥ 2, got {n}")));
        }
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} is outside [-1, 1]")));
        }
        Ok(Self { n, alpha })
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims { n: self.n, m: self.n }
    }

    /// `n(n − α)`.
    pub fn normalization(&self) -> f64 {
        let n = self.n as f64;
        n * (n - self.alpha)
    }

    /// The unnormalized operator `I − αS`.
    pub fn unnormalized(&self) -> HermitianOperator {
        let d = self.n * self.n;
        HermitianOperator::identity(d)
            .add(&swap_operator(self.n).scaled(-self.alpha))
            .expect("same dimension")
    }

    pub fn matrix(&self) -> HermitianOperator {
        self.unnormalized()
            .scaled(1.0 / self.normalization())
            .tagged(self.dims())
            .expect("n² dimensional")
    }

    pub fn norm_exact(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidParameter(format!("k = {k} is outside 1..={}", self.n)));
        }
        let num = if k == 1 { 1.0 + (-self.alpha).max(0.0) } else { 1.0 + self.alpha.abs() };
        Ok(num / self.normalization())
    }
}

pub fn werner(n: usize, alpha: f64) -> Result<HermitianOperator> {
    Ok(WernerState::new(n, alpha)?.matrix())
}

/// `‖ρ_α‖_{S(1)} = (1 + |min(α, 0)|)/(n(n − α))` and `‖ρ_α‖_{S(k)} = (1 + |α|)/(n(n − α))` for `k ≥ 2`.
pub fn werner_norm_exact(n: usize, alpha: f64, k: usize) -> Result<f64> {
    WernerState::new(n, alpha)?.norm_exact(k)
}

/// Bures-random density matrix `ρ ∝ (I + U) G G† (I + U)†` with `G` Ginibre and `U` Haar.
pub fn bures_sample(dim: usize, seed: u64) -> Result<HermitianOperator> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {dim}")));
    }
    Ok(bures_sample_with(dim, &mut rng::seeded(seed)))
}

pub fn bures_sample_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let u = rng::haar_unitary(dim, rng);
    let g = rng::random_complex(dim, dim, rng);
    let a = (CMatrix::identity(dim, dim) + u) * g;
    let rho = HermitianOperator::hermitian_part(&(&a * a.adjoint()));
    let t = rho.trace();
    rho.scaled(1.0 / t)
}

/// The projection `ₙP_r` on `(H_n ⊗ H_n)^{⊗r}`, stored with all first factors
/// grouped before all second factors so that it splits as `H_{n^r} ⊗ H_{n^r}`.
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    pub n: usize,
    pub r: usize,
    pub matrix: HermitianOperator,
}

impl ProjectionFamily {
    pub fn dims(&self) -> BipartiteDims {
        let side = self.n.pow(self.r as u32);
        BipartiteDims { n: side, m: side }
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().round() as usize
    }

    pub fn partial_transpose(&self) -> HermitianOperator {
        partial_transpose(&self.matrix, self.dims()).expect("tagged with its own split")
    }
}

fn check_cap(n: usize, r: usize, cap: usize) -> Result<usize> {
    let dim = (n * n).checked_pow(r as u32).unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(dim)
}

/// Reorders `(A_1 B_1)(A_2 B_2)…` into `(A_1…A_r)(B_1…B_r)`.
fn group_factors(x: &CMatrix, n: usize, r: usize) -> CMatrix {
    let dim = x.nrows();
    let perm: Vec<usize> = (0..dim)
        .map(|idx| {
            let mut digits = vec![0; 2 * r];
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = rest % n;
                rest /= n;
            }
            let (mut a, mut b) = (0, 0);
            for copy in 0..r {
                a = a * n + digits[2 * copy];
                b = b * n + digits[2 * copy + 1];
            }
            a * n.pow(r as u32) + b
        })
        .collect();
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(perm[i], perm[j])] = x[(i, j)];
        }
    }
    out
}

/// `ₙP_1 = E`, `ₙP_r = (I − E) ⊗ ₙP_{r−1} + E ⊗ (I − ₙP_{r−1})`.
pub fn proj_family(n: usize, r: usize) -> Result<ProjectionFamily> {
    proj_family_with_cap(n, r, DEFAULT_DIM_CAP)
}

pub fn proj_family_with_cap(n: usize, r: usize, cap: usize) -> Result<ProjectionFamily> {
    if n < 2 || r < 1 {
        return Err(Error::InvalidParameter(format!("need n ≥ 2 and r ≥ 1, got n = {n}, r = {r}")));
    }
    check_cap(n, r, cap)?;
    let e = max_entangled(n).into_matrix();
    let id = CMatrix::identity(n * n, n * n);
    let mut p = e.clone();
    for _ in 1..r {
        let d = p.nrows();
        let comp = CMatrix::identity(d, d) - &p;
        p = kron(&(&id - &e), &p) + kron(&e, &comp);
    }
    let grouped = group_factors(&p, n, r);
    let side = n.pow(r as u32);
    let matrix = HermitianOperator::hermitian_part(&grouped).tagged(BipartiteDims { n: side, m: side })?;
    Ok(ProjectionFamily { n, r, matrix })
}

/// `‖ₙP_r‖_{S(1)} = 1/2 − (1/2)(1 − 2/n)^r`.
pub fn proj_s1_exact(n: usize, r: usize) -> f64 {
    0.5 - 0.5 * (1.0 - 2.0 / n as f64).powi(r as i32)
}

/// `‖ₙP_r‖_{S(2)} ≤ 1 − (1 − 2/n)^r`.
pub fn proj_s2_upper(n: usize, r: usize) -> f64 {
    1.0 - (1.0 - 2.0 / n as f64).powi(r as i32)
}

/// `λ_max(ₙP_r^Γ)`, which coincides with [`proj_s1_exact`].
pub fn proj_pt_max_eig(n: usize, r: usize) -> f64 {
    proj_s1_exact(n, r)
}

/// Eigenvalues `(1 − αn)^m`, `m = 0..=r`, of `(((I − αS))^{⊗r})^Γ`.
///
/// These omit the state normalization; multiply by [`werner_pt_normalization`]
/// for the spectrum of `(ρ_α^{⊗r})^Γ`.
pub fn werner_pt_eigs(n: usize, alpha: f64, r: usize) -> Result<Vec<f64>> {
    WernerState::new(n, alpha)?;
    let base = 1.0 - alpha * n as f64;
    Ok((0..=r).map(|m| base.powi(m as i32)).collect())
}

/// `(n(n − α))^{−r}`.
pub fn werner_pt_normalization(n: usize, alpha: f64, r: usize) -> Result<f64> {
    Ok(WernerState::new(n, alpha)?.normalization().powi(-(r as i32)))
}

/// `(X^{⊗r})^Γ` for `X` on `H_n ⊗ H_n`, with Γ acting on all second factors.
fn tensor_power_pt(x: &CMatrix, n: usize, r: usize) -> Result<HermitianOperator> {
    let mut p = x.clone();
    for _ in 1..r {
        p = kron(x, &p);
    }
    let side = n.pow(r as u32);
    let grouped = HermitianOperator::hermitian_part(&group_factors(&p, n, r));
    partial_transpose(&grouped, BipartiteDims { n: side, m: side })
}

/// Distinct eigenvalues (ascending, merged within `1e-8`) of `((I − αS)^{⊗r})^Γ`, computed explicitly.
pub fn werner_pt_spectrum_explicit(n: usize, alpha: f64, r: usize, cap: usize) -> Result<Vec<f64>> {
    let w = WernerState::new(n, alpha)?;
    check_cap(n, r, cap)?;
    let pt = tensor_power_pt(w.unnormalized().matrix(), n, r)?;
    let mut distinct: Vec<f64> = Vec::new();
    for v in pt.eigenvalues() {
        if distinct.last().is_none_or(|last| v - last > 1e-8) {
            distinct.push(v);
        }
    }
    Ok(distinct)
}

/// `p = (n − 2)^r / (n^r − (n − 2)^r)`; zero at `n = 2`.
pub fn p_value(n: usize, r: usize) -> f64 {
    let a = (n as f64 - 2.0).powi(r as i32);
    let b = (n as f64).powi(r as i32);
    a / (b - a)
}

/// The α below which `ρ_α` is certified `r`-undistillable, defined when `p ≥ 1`.
pub fn undistill_threshold(n: usize, r: usize) -> Option<f64> {
    let p = p_value(n, r);
    if r == 0 || p < 1.0 {
        return None;
    }
    let exp = if r % 2 == 1 { r } else { r - 1 };
    Some((p.powf(1.0 / exp as f64) + 1.0) / n as f64)
}

/// `min{2/n, ln 2 / (r + 3 ln 2 − 1)}`.
pub fn undistill_threshold_simple(n: usize, r: usize) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    (2.0 / n as f64).min(ln2 / (r as f64 + 3.0 * ln2 - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UndistillabilityReport {
    pub n: usize,
    pub r: usize,
    pub alpha: f64,
    pub p: f64,
    pub threshold: Option<f64>,
    pub simple_threshold: f64,
    pub certified: bool,
}

pub fn check_r_undistillable(n: usize, r: usize, alpha: f64) -> Result<UndistillabilityReport> {
    WernerState::new(n, alpha)?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let threshold = undistill_threshold(n, r);
    let simple_threshold = undistill_threshold_simple(n, r);
    let certified = threshold.is_some_and(|t| alpha <= t) || alpha <= simple_threshold;
    Ok(UndistillabilityReport { n, r, alpha, p: p_value(n, r), threshold, simple_threshold, certified })
}

/// `sqrt(rank / n^{2+ε})`.
pub fn brandao_rhs(n: usize, rank: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} is outside (0, 1)")));
    }
    if rank == 0 || rank > n * n {
        return Err(Error::InvalidParameter(format!("rank {rank} is outside 1..={}", n * n)));
    }
    Ok((rank as f64 / (n as f64).powf(2.0 + eps)).sqrt())
}

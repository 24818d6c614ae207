//! Bounds on `‖X‖_{S(k)} = sup{⟨v|X|v⟩ : SR(|v⟩) ≤ k}` and on cone norms.
//!
//! Upper bounds come from the SDP relaxation attached to a `k`-positive map and
//! are certified by the dual: for PSD dual blocks `Y`, `λ_max(X + (id ⊗ Φ†)(Y))`
//! bounds the norm. Lower bounds come from a truncated power iteration that only
//! visits Schmidt-rank-`k` vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::{identity_map, reduction_map, reduction_map_k, transpose_map, BipartiteDims, CVector};
use crate::qops::{HermitianOperator, MapRep};
use crate::rng;
use crate::schmidt::{random_rank_k_with, truncate_to_rank, PureState};
use crate::sdp::{
    build_cone_sdp, certificate_from_duals, solve_general, Certificate, SolveStatus, SolverOptions,
};

/// Solver bookkeeping attached to SDP-based bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverReport {
    pub tol: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

#[derive(Debug, Clone)]
pub struct UpperBound {
    pub value: f64,
    pub certificate: Option<Certificate>,
    pub map: String,
    pub solver: Option<SolverReport>,
}

#[derive(Debug, Clone)]
pub struct LowerBound {
    pub value: f64,
    pub witness: Option<PureState>,
}

/// A bracket `lower ≤ ‖X‖ ≤ upper` with its evidence.
#[derive(Debug, Clone)]
pub struct NormBound {
    pub upper: f64,
    pub lower: f64,
    pub upper_certificate: Option<Certificate>,
    pub lower_witness: Option<PureState>,
    pub maps_used: Vec<String>,
    pub solver: Option<SolverReport>,
}

impl NormBound {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    fn from_parts(upper: UpperBound, lower: LowerBound, maps_used: Vec<String>) -> Self {
        Self {
            upper: upper.value,
            lower: lower.value,
            upper_certificate: upper.certificate,
            lower_witness: lower.witness,
            maps_used,
            solver: upper.solver,
        }
    }
}

/// See-saw settings: restarts, iterations per restart and the base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self { restarts: 20, max_iters: 500, seed: 0 }
    }
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

fn check_operator(x: &HermitianOperator, dims: BipartiteDims) -> Result<()> {
    if x.dim() != dims.total() {
        return Err(Error::DimensionMismatch(format!("operator is {}-dimensional, split is {dims}", x.dim())));
    }
    Ok(())
}

fn check_psd(x: &HermitianOperator) -> Result<()> {
    let min = x.min_eigenvalue();
    if min < -1e-9 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// The shipped maps for a given `k`: transpose and reduction for `k = 1`, the
/// `k`-positive reduction `X ↦ k·Tr(X)·I − X` below full rank, the identity otherwise.
pub fn default_maps(k: usize, m: usize) -> Vec<MapRep> {
    if k >= m {
        vec![identity_map(m)]
    } else if k == 1 {
        vec![transpose_map(m), reduction_map(m)]
    } else {
        vec![reduction_map_k(m, k)]
    }
}

/// Solves the cone SDP for `X / λ_max(X)` and scales the result back, so bounds are
/// homogeneous in `X` up to rounding regardless of the solver path.
fn solve_normalized(
    x: &HermitianOperator,
    maps: &[MapRep],
    dims: BipartiteDims,
    opts: &SolverOptions,
) -> Result<(Certificate, f64, SolverReport)> {
    let top = x.max_eigenvalue();
    let s = if top > 0.0 { top } else { 1.0 };
    let p = build_cone_sdp(&x.scaled(1.0 / s), maps, dims)?;
    let sol = solve_general(&p, opts)?;
    let report = SolverReport { tol: opts.tol, iterations: sol.result.iterations, status: sol.result.status };
    if sol.result.status != SolveStatus::Optimal {
        return Err(Error::Solver(sol.result.status));
    }
    let cert = certificate_from_duals(&p, &sol);
    let cert = Certificate { lambda: s * cert.lambda, z: cert.z.scaled(s), certified_upper: s * cert.certified_upper };
    Ok((cert, s * sol.result.primal_obj, report))
}

fn solve_one(x: &HermitianOperator, maps: &[MapRep], dims: BipartiteDims, opts: &SolverOptions) -> Result<UpperBound> {
    let (cert, _, report) = solve_normalized(x, maps, dims, opts)?;
    let label = maps.iter().map(|m| m.label().to_owned()).collect::<Vec<_>>().join(" + ");
    Ok(UpperBound { value: cert.certified_upper, certificate: Some(cert), map: label, solver: Some(report) })
}

/// Minimum over `maps` of the S(k) SDP optima.
///
/// Each map must be `k`-positive for the result to bound `‖X‖_{S(k)}`; this is not checked.
/// The reported value is `λ_max(X + Z)` for the dual witness `Z`, which is an upper bound
/// for any PSD dual point.
pub fn sk_upper_bound(x: &HermitianOperator, maps: &[MapRep], dims: BipartiteDims) -> Result<UpperBound> {
    sk_upper_bound_with(x, maps, dims, &SolverOptions::default())
}

pub fn sk_upper_bound_with(
    x: &HermitianOperator,
    maps: &[MapRep],
    dims: BipartiteDims,
    opts: &SolverOptions,
) -> Result<UpperBound> {
    if maps.is_empty() {
        return Err(Error::EmptyMapSet);
    }
    check_operator(x, dims)?;
    check_psd(x)?;
    let mut best: Option<UpperBound> = None;
    for map in maps {
        let bound = solve_one(x, std::slice::from_ref(map), dims, opts)?;
        if best.as_ref().is_none_or(|b| bound.value < b.value) {
            best = Some(bound);
        }
    }
    Ok(best.expect("maps is non-empty"))
}

/// One see-saw run from `v`; returns the final value and vector.
fn seesaw_run(x: &HermitianOperator, k: usize, dims: BipartiteDims, mut v: CVector, max_iters: usize) -> (f64, CVector) {
    let mut value = x.expectation(&v);
    // Relative to ‖X‖ so the stopping point does not depend on the scale of X.
    let stop = 1e-10 * x.operator_norm().max(f64::MIN_POSITIVE);
    for _ in 0..max_iters {
        let w = x.matrix() * &v;
        let Some(t) = truncate_to_rank(&w, dims, k) else { break };
        let norm = t.norm();
        if norm < 1e-300 {
            break;
        }
        let next = t.unscale(norm);
        let next_value = x.expectation(&next);
        if next_value < value {
            break;
        }
        let delta = next_value - value;
        v = next;
        value = next_value;
        if delta <= stop {
            break;
        }
    }
    (value, v)
}

/// Lower bound by the iteration `v ← normalize(T_k(Xv))`, `T_k` the best rank-`k` truncation.
///
/// For `X ⪰ 0` each step does not decrease `⟨v|X|v⟩`. Restart 0 starts from the
/// truncated top eigenvector, the others from random rank-`k` states drawn from
/// substream `(seed, restart)`.
pub fn sk_lower_bound_seesaw(
    x: &HermitianOperator,
    k: usize,
    dims: BipartiteDims,
    opts: &SeesawOptions,
) -> Result<LowerBound> {
    check_operator(x, dims)?;
    check_k(k, dims)?;
    seesaw_from(x, k, dims, opts, &[])
}

/// As [`sk_lower_bound_seesaw`] with extra starting vectors tried first.
pub fn seesaw_from(
    x: &HermitianOperator,
    k: usize,
    dims: BipartiteDims,
    opts: &SeesawOptions,
    starts: &[CVector],
) -> Result<LowerBound> {
    let mut initial: Vec<CVector> = starts.iter().filter_map(|s| truncate_to_rank(s, dims, k)).collect();
    let top = x.eigen().vector(x.dim() - 1);
    initial.extend(truncate_to_rank(&top, dims, k));
    for idx in 1..opts.restarts.max(1) {
        let mut rng = rng::substream(opts.seed, idx as u64);
        initial.push(random_rank_k_with(dims, k, &mut rng).amplitudes().clone());
    }
    let mut best: Option<(f64, CVector)> = None;
    for v in initial {
        let norm = v.norm();
        if norm < 1e-300 {
            continue;
        }
        let (value, v) = seesaw_run(x, k, dims, v.unscale(norm), opts.max_iters);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, v));
        }
    }
    let (value, v) = best.ok_or(Error::ZeroVector)?;
    Ok(LowerBound { value, witness: Some(PureState::normalized(v, dims)?) })
}

/// `sup ⟨v|Y|v⟩` over Schmidt rank `≤ k` for Hermitian `Y`, by running the
/// see-saw on the PSD shift `Y + cI`.
pub fn sup_expectation_lower(y: &HermitianOperator, k: usize, dims: BipartiteDims, opts: &SeesawOptions) -> Result<LowerBound> {
    let c = (-y.min_eigenvalue()).max(0.0);
    let shifted = y.add(&HermitianOperator::identity(y.dim()).scaled(c))?;
    let mut lb = sk_lower_bound_seesaw(&shifted, k, dims, opts)?;
    lb.value = lb.witness.as_ref().map(|w| y.expectation(w.amplitudes())).unwrap_or(lb.value - c);
    Ok(lb)
}

/// Both bounds with the default maps for `k`. At `k = min(n, m)` the norm is `λ_max(X)`.
pub fn sk_norm_bounds(x: &HermitianOperator, k: usize, dims: BipartiteDims, seesaw: &SeesawOptions) -> Result<NormBound> {
    sk_norm_bounds_with(x, k, dims, &default_maps(k, dims.m), seesaw, &SolverOptions::default())
}

pub fn sk_norm_bounds_with(
    x: &HermitianOperator,
    k: usize,
    dims: BipartiteDims,
    maps: &[MapRep],
    seesaw: &SeesawOptions,
    opts: &SolverOptions,
) -> Result<NormBound> {
    check_operator(x, dims)?;
    check_k(k, dims)?;
    check_psd(x)?;
    if k >= dims.max_schmidt_rank() {
        let eig = x.eigen();
        let top = *eig.values.last().expect("nonempty");
        let witness = PureState::normalized(eig.vector(x.dim() - 1), dims)?;
        return Ok(NormBound {
            upper: top,
            lower: x.expectation(witness.amplitudes()),
            upper_certificate: None,
            lower_witness: Some(witness),
            maps_used: vec!["spectral".into()],
            solver: None,
        });
    }
    let upper = sk_upper_bound_with(x, maps, dims, opts)?;
    let lower = sk_lower_bound_seesaw(x, k, dims, seesaw)?;
    let names = maps.iter().map(|m| m.label().to_owned()).collect();
    Ok(NormBound::from_parts(upper, lower, names))
}

/// Bounds for every `k = 1..=min(n, m)`. Each see-saw is also started from the previous
/// witness, so the lower bounds are nondecreasing in `k`.
pub fn sk_norm_profile(x: &HermitianOperator, dims: BipartiteDims, seesaw: &SeesawOptions) -> Result<Vec<NormBound>> {
    let mut out: Vec<NormBound> = Vec::new();
    for k in 1..=dims.max_schmidt_rank() {
        let mut b = sk_norm_bounds(x, k, dims, seesaw)?;
        if let Some(prev) = out.last().and_then(|p| p.lower_witness.as_ref()) {
            let warm = seesaw_from(x, k, dims, &SeesawOptions { restarts: 1, ..*seesaw }, &[prev.amplitudes().clone()])?;
            if warm.value > b.lower {
                b.lower = warm.value;
                b.lower_witness = warm.witness;
            }
        }
        out.push(b);
    }
    Ok(out)
}

/// `‖X‖_{S(1)}` for `m = 2`, `n ≤ 3`, where the transpose relaxation is exact.
pub fn sk_exact_small(x: &HermitianOperator, dims: BipartiteDims) -> Result<f64> {
    if dims.m != 2 || dims.n > 3 {
        return Err(Error::InvalidParameter(format!(
            "the transpose relaxation is exact only for 2⊗2 and 3⊗2, got {dims}"
        )));
    }
    Ok(sk_upper_bound(x, &[transpose_map(2)], dims)?.value)
}

/// Three-way verdict on `k`-block positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CertifiedYes,
    CertifiedNo,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct Certification {
    pub verdict: Verdict,
    /// The shift `c = λ_max(Y) + 1`.
    pub shift: f64,
    /// Bounds on `‖cI − Y‖_{S(k)}`.
    pub upper: f64,
    pub lower: f64,
    /// Schmidt-rank-`k` vector with `⟨v|Y|v⟩ < 0` when the verdict is `CertifiedNo`.
    pub witness: Option<PureState>,
    pub witness_value: Option<f64>,
}

/// Decides whether `⟨v|Y|v⟩ ≥ 0` for all Schmidt-rank-`k` vectors via
/// `Y` `k`-block positive `⟺ ‖cI − Y‖_{S(k)} ≤ c`.
pub fn is_k_block_positive(
    y: &HermitianOperator,
    k: usize,
    dims: BipartiteDims,
    seesaw: &SeesawOptions,
    opts: &SolverOptions,
) -> Result<Certification> {
    check_operator(y, dims)?;
    check_k(k, dims)?;
    let c = y.max_eigenvalue() + 1.0;
    let x = y.shifted_complement(c);
    let bound = sk_norm_bounds_with(&x, k, dims, &default_maps(k, dims.m), seesaw, opts)?;
    let witness_value = bound.lower_witness.as_ref().map(|w| y.expectation(w.amplitudes()));
    let verdict = if bound.upper <= c + 1e-8 {
        Verdict::CertifiedYes
    } else if bound.lower > c + 1e-8 {
        Verdict::CertifiedNo
    } else {
        Verdict::Unknown
    };
    let witness = if verdict == Verdict::CertifiedNo { bound.lower_witness } else { None };
    Ok(Certification {
        verdict,
        shift: c,
        upper: bound.upper,
        lower: bound.lower,
        witness_value: witness.as_ref().and(witness_value),
        witness,
    })
}

/// `‖X‖_C` for the cone `{ρ ⪰ 0 : (id ⊗ Φ_i)(ρ) ⪰ 0}`.
///
/// The upper value is the certified dual bound and the lower value the primal
/// objective; with no maps both equal `λ_max(X)`.
pub fn cone_norm(x: &HermitianOperator, cone_maps: &[MapRep], dims: BipartiteDims) -> Result<NormBound> {
    check_operator(x, dims)?;
    check_psd(x)?;
    if cone_maps.is_empty() {
        let eig = x.eigen();
        let top = *eig.values.last().expect("nonempty");
        return Ok(NormBound {
            upper: top,
            lower: top,
            upper_certificate: None,
            lower_witness: Some(PureState::normalized(eig.vector(x.dim() - 1), dims)?),
            maps_used: vec![],
            solver: None,
        });
    }
    let opts = SolverOptions::default();
    let (cert, primal, report) = solve_normalized(x, cone_maps, dims, &opts)?;
    Ok(NormBound {
        upper: cert.certified_upper,
        lower: primal.min(cert.certified_upper),
        upper_certificate: Some(cert),
        lower_witness: None,
        maps_used: cone_maps.iter().map(|m| m.label().to_owned()).collect(),
        solver: Some(report),
    })
}

/// Checks `upper(‖X‖_{S(k)}) ≤ ‖X + Z‖ + 1e-6` for a `k`-block positive `Z`.
pub fn dual_char_spotcheck(x: &HermitianOperator, k: usize, z: &HermitianOperator, dims: BipartiteDims) -> Result<bool> {
    let bound = sk_norm_bounds(x, k, dims, &SeesawOptions { restarts: 1, ..SeesawOptions::default() })?;
    Ok(bound.upper <= x.add(z)?.operator_norm() + 1e-6)
}

//! Infeasible-start primal-dual path following for [`StandardSdp`].
//!
//! Iterates `(x, S, Y)` with slack `S = D − Σ x_i F_i` and dual `Y`, using the
//! HKM search direction and a Mehrotra predictor-corrector step. The Schur
//! complement `M_ij = Tr(F_i Y F_j S⁻¹)` is factored once per iteration.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use nalgebra::DMatrix;
use serde::Serialize;

use super::standard::{BlockEntry, StandardSdp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
    Infeasible,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub step_fraction: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200, step_fraction: 0.98 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x: Vec<f64>,
    /// Dual variable, one real symmetric block per block of `D`.
    pub y: Vec<DMatrix<f64>>,
    /// Primal slack `D − Σ x_i F_i` as carried by the iteration.
    pub s: Vec<DMatrix<f64>>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `|dual − primal| / max(1, |dual|)`.
    pub gap: f64,
    /// `‖D − F(x) − S‖_F / (1 + ‖D‖_F)`.
    pub primal_residual: f64,
    /// `‖c − F*(Y)‖ / (1 + ‖c‖)`.
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

type Blocks = Vec<DMatrix<f64>>;

fn frob(blocks: &[DMatrix<f64>]) -> f64 {
    blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
}

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Inverses of positive definite blocks, or `None` if one is not numerically PD.
fn inverses(blocks: &[DMatrix<f64>]) -> Option<Blocks> {
    blocks.iter().map(|b| b.clone().cholesky().map(|c| sym(c.inverse()))).collect()
}

/// Largest `α` with `S + α dS ⪰ 0`, or `∞`.
fn max_step(s: &[DMatrix<f64>], ds: &[DMatrix<f64>]) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (sk, dk) in s.iter().zip(ds) {
        let min = if sk.nrows() == 1 {
            dk[(0, 0)] / sk[(0, 0)]
        } else {
            let l = sk.clone().cholesky()?.l();
            let linv_d = l.solve_lower_triangular(dk)?;
            let inner = l.solve_lower_triangular(&linv_d.transpose())?;
            sym(inner).symmetric_eigenvalues().min()
        };
        if min < 0.0 {
            alpha = alpha.min(-1.0 / min);
        }
    }
    Some(alpha)
}

struct Workspace<'a> {
    p: &'a StandardSdp,
    /// Entries of each `F_i`, grouped by block.
    by_block: Vec<Vec<(usize, Vec<BlockEntry>)>>,
}

impl<'a> Workspace<'a> {
    fn new(p: &'a StandardSdp) -> Self {
        let by_block = p
            .f()
            .iter()
            .map(|fi| {
                let mut groups: Vec<(usize, Vec<BlockEntry>)> = Vec::new();
                let mut sorted = fi.clone();
                sorted.sort_by_key(|e| e.block);
                for e in sorted {
                    match groups.last_mut() {
                        Some((b, v)) if *b == e.block => v.push(e),
                        _ => groups.push((e.block, vec![e])),
                    }
                }
                groups
            })
            .collect();
        Self { p, by_block }
    }

    /// `M_ij = Tr(F_i Y F_j S⁻¹)`; only the lower triangle is filled.
    fn schur(&self, y: &[DMatrix<f64>], sinv: &[DMatrix<f64>]) -> Mat<f64> {
        let l = self.p.num_vars();
        let mut m = Mat::<f64>::zeros(l, l);
        let sizes = self.p.block_sizes();
        let mut k_buf: Vec<DMatrix<f64>> = sizes.iter().map(|&q| DMatrix::zeros(q, q)).collect();
        for i in 0..l {
            // K = Y F_i S⁻¹ on every block F_i touches
            for (b, entries) in &self.by_block[i] {
                let q = sizes[*b];
                let kb = &mut k_buf[*b];
                if entries.len() > q {
                    let mut fd = DMatrix::<f64>::zeros(q, q);
                    for e in entries {
                        fd[(e.row, e.col)] += e.value;
                    }
                    *kb = &y[*b] * fd * &sinv[*b];
                } else {
                    kb.fill(0.0);
                    for e in entries {
                        let ycol = y[*b].column(e.row);
                        let srow = sinv[*b].row(e.col);
                        kb.ger(e.value, &ycol, &srow.transpose(), 1.0);
                    }
                }
            }
            for j in i..l {
                let mut acc = 0.0;
                let (gi, gj) = (&self.by_block[i], &self.by_block[j]);
                let (mut a, mut b) = (0, 0);
                while a < gi.len() && b < gj.len() {
                    match gi[a].0.cmp(&gj[b].0) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            let kb = &k_buf[gi[a].0];
                            for e in &gj[b].1 {
                                acc += e.value * kb[(e.col, e.row)];
                            }
                            a += 1;
                            b += 1;
                        }
                    }
                }
                m[(j, i)] = acc;
            }
        }
        m
    }
}

/// Cholesky of the Schur complement with diagonal regularization as a fallback.
fn factor(m: &Mat<f64>) -> Option<faer::linalg::solvers::Llt<f64>> {
    let n = m.nrows();
    let max_diag = (0..n).map(|i| m[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    if let Ok(llt) = m.llt(Side::Lower) {
        return Some(llt);
    }
    let mut delta = 1e-14 * max_diag;
    while delta <= 1e-6 * max_diag {
        let mut reg = m.clone();
        for i in 0..n {
            reg[(i, i)] += delta;
        }
        if let Ok(llt) = reg.llt(Side::Lower) {
            return Some(llt);
        }
        delta *= 100.0;
    }
    None
}

struct Direction {
    dx: Vec<f64>,
    ds: Blocks,
    dy: Blocks,
}

#[allow(clippy::too_many_arguments)]
fn direction(
    p: &StandardSdp,
    llt: &faer::linalg::solvers::Llt<f64>,
    y: &[DMatrix<f64>],
    sinv: &[DMatrix<f64>],
    rp: &[DMatrix<f64>],
    sigma_mu: f64,
    corr: Option<&[DMatrix<f64>]>,
) -> Direction {
    // G = σμS⁻¹ − (Y R_p + C) S⁻¹
    let g: Blocks = (0..y.len())
        .map(|k| {
            let mut inner = &y[k] * &rp[k];
            if let Some(c) = corr {
                inner += &c[k];
            }
            &sinv[k] * sigma_mu - inner * &sinv[k]
        })
        .collect();
    let fg = p.adjoint_f(&g);
    let rhs = Mat::<f64>::from_fn(p.num_vars(), 1, |i, _| p.c()[i] - fg[i]);
    let sol = llt.solve(&rhs);
    let dx: Vec<f64> = (0..p.num_vars()).map(|i| sol[(i, 0)]).collect();
    let fdx = p.apply_f(&dx);
    let ds: Blocks = rp.iter().zip(&fdx).map(|(r, f)| r - f).collect();
    let dy: Blocks = (0..y.len())
        .map(|k| {
            let mut inner = &y[k] * &ds[k];
            if let Some(c) = corr {
                inner += &c[k];
            }
            sym(&sinv[k] * sigma_mu - &y[k] - inner * &sinv[k])
        })
        .collect();
    Direction { dx, ds, dy }
}

/// Solves `max cᵀx s.t. Σ x_i F_i ⪯ D` together with `min Tr(DY) s.t. Tr(F_i Y) = c_i, Y ⪰ 0`.
pub fn solve(p: &StandardSdp, opts: &SolverOptions) -> SolveResult {
    let sizes = p.block_sizes();
    let total: usize = sizes.iter().sum();
    let tau = 10.0 * (1.0 + frob(p.d()));
    let l = p.num_vars();
    let mut x = vec![0.0; l];
    let mut s: Blocks = sizes.iter().map(|&q| DMatrix::identity(q, q) * tau).collect();
    let mut y: Blocks = s.clone();
    let ws = Workspace::new(p);
    let d_norm = frob(p.d());
    let c_norm = norm2(p.c());

    let mut history: Vec<f64> = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    let measure = |x: &[f64], s: &[DMatrix<f64>], y: &[DMatrix<f64>]| {
        let fx = p.apply_f(x);
        let rp: Blocks = p.d().iter().zip(&fx).zip(s).map(|((d, f), sk)| d - f - sk).collect();
        let fy = p.adjoint_f(y);
        let rd: Vec<f64> = p.c().iter().zip(&fy).map(|(a, b)| a - b).collect();
        let pobj = p.primal_objective(x);
        let dobj = p.dual_objective(y);
        let rp_rel = frob(&rp) / (1.0 + d_norm);
        let rd_rel = norm2(&rd) / (1.0 + c_norm);
        let gap = (dobj - pobj).abs() / dobj.abs().max(1.0);
        (rp, rp_rel, rd_rel, pobj, dobj, gap)
    };

    loop {
        let (rp, rp_rel, rd_rel, _, _, gap) = measure(&x, &s, &y);
        if rp_rel <= opts.tol && rd_rel <= opts.tol && gap <= opts.tol {
            status = SolveStatus::Optimal;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        let infeas = rp_rel.max(rd_rel);
        history.push(infeas);
        if history.len() > 30 {
            let old = history[history.len() - 31];
            let size = norm2(&x).max(frob(&y));
            if infeas > 0.5 * old && size > 1e10 * (1.0 + tau) {
                status = SolveStatus::Infeasible;
                break;
            }
        }
        iterations += 1;

        let mu = inner(&s, &y) / total as f64;
        let Some(sinv) = inverses(&s) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let schur = ws.schur(&y, &sinv);
        let Some(llt) = factor(&schur) else {
            status = SolveStatus::NumericalFailure;
            break;
        };

        let pred = direction(p, &llt, &y, &sinv, &rp, 0.0, None);
        let (Some(ap), Some(ad)) = (max_step(&s, &pred.ds), max_step(&y, &pred.dy)) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let s_aff: Blocks = s.iter().zip(&pred.ds).map(|(a, b)| a + b * ap).collect();
        let y_aff: Blocks = y.iter().zip(&pred.dy).map(|(a, b)| a + b * ad).collect();
        let mu_aff = inner(&s_aff, &y_aff) / total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let corr: Blocks = pred.dy.iter().zip(&pred.ds).map(|(a, b)| a * b).collect();
        let step = direction(p, &llt, &y, &sinv, &rp, sigma * mu, Some(&corr));
        let (Some(ap), Some(ad)) = (max_step(&s, &step.ds), max_step(&y, &step.dy)) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let ap = (opts.step_fraction * ap).min(1.0);
        let ad = (opts.step_fraction * ad).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            status = SolveStatus::NumericalFailure;
            break;
        }
        for (xi, di) in x.iter_mut().zip(&step.dx) {
            *xi += ap * di;
        }
        for k in 0..s.len() {
            s[k] = sym(&s[k] + &step.ds[k] * ap);
            y[k] = sym(&y[k] + &step.dy[k] * ad);
        }
    }

    let (_, primal_residual, dual_residual, primal_obj, dual_obj, gap) = measure(&x, &s, &y);
    SolveResult { x, y, s, primal_obj, dual_obj, gap, primal_residual, dual_residual, iterations, status }
}

//! Besov semi-norms, walk-dimension estimates and related checks.

pub mod elementary;
mod kernel;
mod mc;

pub use kernel::{jump_kernel_ci, JumpKernelParams};
pub use mc::{besov_double_integral_mc, GraphPointFunction, McEstimate, McParams, PointFunction, ScSeparableFn};

use crate::energy::{
    cell_average_corners, cell_edge_sum, mean_value_mnm, sc_pointwise_energy_dn,
    sg_pointwise_energy_bn, VertexFunction,
};
use crate::error::{invalid, Result};
use crate::geometry::{cell_graph, vertex_graph, FractalKind, VertexGraph};
use crate::stats::log_linear_fit;

/// `log 5 / log 2`, the SG walk dimension.
pub fn sg_beta_star() -> f64 {
    5f64.ln() / 2f64.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesovForm {
    /// `sum base^{(beta-alpha)n} B_n(u)` (SG) or `D_n(u)` (SC).
    Pointwise,
    /// Same weights on the cell-graph edge sums of `P_n u`.
    CellGraph,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovParams {
    pub beta: f64,
    pub n_max: usize,
    pub kind: FractalKind,
    pub form: BesovForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BesovSum {
    pub value: f64,
    /// Weighted terms for `n = 1..=N`.
    pub terms: Vec<f64>,
    pub last_term: f64,
    /// The weighted terms did not decay over the last levels.
    pub diverging: bool,
}

/// Unweighted level energies of `u` (given on `V_N`) for `n = 1..=N`.
pub fn level_energies(fine: &VertexGraph, u: &VertexFunction<f64>, form: BesovForm) -> Result<Vec<f64>> {
    let kind = fine.kind;
    let mut out = Vec::with_capacity(fine.level);
    match form {
        BesovForm::Pointwise => {
            for n in 1..=fine.level {
                let g = if n == fine.level { fine.clone() } else { vertex_graph(kind, n)? };
                let un = u.restrict(fine, &g)?;
                out.push(match kind {
                    FractalKind::SG => sg_pointwise_energy_bn(&g, &un)?,
                    FractalKind::SC => sc_pointwise_energy_dn(&g, &un)?,
                });
            }
        }
        BesovForm::CellGraph => {
            let deep = cell_average_corners(fine, u)?;
            for n in 1..=fine.level {
                let cg = cell_graph(kind, n)?;
                let pn = if n == fine.level { deep.clone() } else { mean_value_mnm(&deep, n)? };
                out.push(cell_edge_sum(&cg, &pn)?);
            }
        }
    }
    Ok(out)
}

/// Weights `base^{(beta-alpha)n}` applied to level energies `e[n-1]`.
pub fn weighted_sum(kind: FractalKind, beta: f64, energies: &[f64]) -> Result<BesovSum> {
    if !(beta > 0.0) {
        return invalid("beta must be positive");
    }
    let w = (kind.base() as f64).powf(beta - kind.alpha());
    let terms: Vec<f64> =
        energies.iter().enumerate().map(|(k, e)| w.powi(k as i32 + 1) * e).collect();
    let value = terms.iter().sum();
    let last_term = terms.last().copied().unwrap_or(0.0);
    let diverging = terms.len() >= 2 && {
        let (a, b) = (terms[terms.len() - 2], terms[terms.len() - 1]);
        b > 0.0 && b >= a * (1.0 - 1e-9)
    };
    Ok(BesovSum { value, terms, last_term, diverging })
}

pub fn besov_partial_sum(fine: &VertexGraph, u: &VertexFunction<f64>, params: &BesovParams) -> Result<BesovSum> {
    if fine.kind != params.kind {
        return invalid("parameter kind does not match the graph");
    }
    if params.n_max == 0 || params.n_max > fine.level {
        return invalid("truncation level must lie in 1..=level of u");
    }
    let g = if params.n_max == fine.level { fine.clone() } else { vertex_graph(fine.kind, params.n_max)? };
    let u = if params.n_max == fine.level { u.clone() } else { u.restrict(fine, &g)? };
    let e = level_energies(&g, &u, params.form)?;
    weighted_sum(params.kind, params.beta, &e)
}

/// `beta* = alpha + log(1/sigma) / log(base)` from the fitted geometric ratio
/// `sigma` of an energy sequence `(n, x_n)`.
pub fn walkdim_estimate(seq: &[(usize, f64)], kind: FractalKind) -> Result<f64> {
    walkdim_estimate_with(seq, kind.base() as f64, kind.alpha())
}

pub fn walkdim_estimate_with(seq: &[(usize, f64)], base: f64, alpha: f64) -> Result<f64> {
    if seq.len() < 3 {
        return invalid("walk dimension fit needs at least 3 terms");
    }
    if seq.iter().any(|&(_, x)| !(x > 0.0 && x.is_finite())) {
        return invalid("energy terms must be positive");
    }
    let xs: Vec<f64> = seq.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = seq.iter().map(|&(_, x)| x.ln()).collect();
    let (slope, _) = log_linear_fit(&xs, &ys);
    Ok(alpha - slope / base.ln())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonePoint {
    pub beta: f64,
    pub lambda: f64,
    /// `(1 - lambda) E_beta`, including the modelled tail.
    pub value: f64,
    /// Contribution of the levels beyond the computed ones.
    pub tail: f64,
}

/// `(1 - 2^beta/5) E_beta(u)` written as `(1 - lambda) sum lambda^n E_n` from the
/// Kigami energies `E_1..E_L`. Levels past `L` are continued with `E_L`; this
/// is exact for harmonic functions, whose `E_n` is constant.
pub fn sg_monotone_limit(kigami: &[f64], beta_grid: &[f64]) -> Result<Vec<MonotonePoint>> {
    let (lo, hi) = (FractalKind::SG.alpha(), sg_beta_star());
    if kigami.is_empty() {
        return invalid("need at least one level energy");
    }
    beta_grid
        .iter()
        .map(|&beta| {
            if !(beta > lo && beta < hi) {
                return invalid(format!("beta {beta} outside (alpha, beta*)"));
            }
            let lambda = 2f64.powf(beta) / 5.0;
            let tail = lambda.powi(kigami.len() as i32 + 1) * kigami[kigami.len() - 1];
            let value = elementary::geometric_mean_value(kigami, lambda, kigami[kigami.len() - 1]);
            Ok(MonotonePoint { beta, lambda, value, tail })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCheck {
    pub sg_seminorm: f64,
    pub interval_seminorm: f64,
    pub holds: bool,
}

/// Compares the SG semi-norm of `u` with the dyadic interval semi-norm of its
/// restriction to the base `[p0, p1]`, with `beta2 = beta1 - alpha1 + 1`.
pub fn interval_trace_check(fine: &VertexGraph, u: &VertexFunction<f64>, beta1: f64) -> Result<TraceCheck> {
    if fine.kind != FractalKind::SG {
        return invalid("trace check runs on the SG");
    }
    let alpha1 = FractalKind::SG.alpha();
    if !(beta1 > alpha1 && beta1 < sg_beta_star()) {
        return invalid("beta1 must lie in (alpha1, beta1*)");
    }
    let beta2 = beta1 - alpha1 + 1.0;
    let big_n = fine.level;
    let sg = besov_partial_sum(
        fine,
        u,
        &BesovParams { beta: beta1, n_max: big_n, kind: FractalKind::SG, form: BesovForm::Pointwise },
    )?
    .value;
    let mut interval = 0.0;
    for n in 1..=big_n {
        let step = 1i64 << (fine.scale() as usize - n);
        let at = |i: i64| -> Result<f64> {
            let p = crate::geometry::ExactPoint::new(FractalKind::SG, i * step, 0, fine.scale());
            fine.find(&p).map(|v| u.values[v as usize]).ok_or(crate::Error::PointNotInGraph(big_n))
        };
        let mut s = 0.0;
        for i in 0..(1i64 << n) {
            let d = at(i)? - at(i + 1)?;
            s += d * d;
        }
        interval += 2f64.powf((beta2 - 1.0) * n as f64) * s;
    }
    Ok(TraceCheck { sg_seminorm: sg, interval_seminorm: interval, holds: interval <= sg * (1.0 + 1e-12) })
}

//! Sparse SPD solves for reduced graph Laplacians.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Symmetric matrix in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut t: Vec<(u32, u32, f64)>) -> Csr {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { n, row_ptr, col, val }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&k| self.col[k] as usize == i)
                    .map_or(0.0, |k| self.val[k])
            })
            .collect()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| -> f64 {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[k] * x[self.col[k] as usize];
            }
            s
        };
        if self.n > 4096 {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row(i);
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col[k] as usize)] += self.val[k];
            }
        }
        m
    }
}

const CHUNK: usize = 8192;

/// Dot product with a fixed reduction tree, independent of the thread pool.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    if a.len() <= CHUNK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SolverChoice {
    Auto,
    Dense,
    Cg,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub choice: SolverChoice,
    /// Relative residual tolerance `|r| / |b|` for CG.
    pub tol: f64,
    /// Iteration cap; `None` means `50 sqrt(n)`.
    pub max_iter: Option<usize>,
    /// Largest system solved densely under [`SolverChoice::Auto`].
    pub dense_max: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { choice: SolverChoice::Auto, tol: 1e-12, max_iter: None, dense_max: 2000 }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub fn solve_spd(a: &Csr, b: &[f64], opts: &SolverOptions) -> Result<Solution> {
    let dense = match opts.choice {
        SolverChoice::Dense => true,
        SolverChoice::Cg => false,
        SolverChoice::Auto => a.n <= opts.dense_max,
    };
    if a.n == 0 {
        return Ok(Solution { x: Vec::new(), residual: 0.0, iterations: 0 });
    }
    if dense {
        solve_dense(a, b)
    } else {
        pcg(a, b, opts)
    }
}

pub fn solve_dense(a: &Csr, b: &[f64]) -> Result<Solution> {
    let m = a.to_dense();
    let chol = m
        .cholesky()
        .ok_or(Error::NonConvergence { iterations: 0, residual: f64::INFINITY })?;
    let x = chol.solve(&DVector::from_column_slice(b));
    let x: Vec<f64> = x.iter().copied().collect();
    let residual = residual_norm(a, &x, b);
    Ok(Solution { x, residual, iterations: 1 })
}

fn residual_norm(a: &Csr, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; a.n];
    a.matvec(x, &mut ax);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| q - p).collect();
    dot(&r, &r).sqrt()
}

/// Jacobi-preconditioned conjugate gradient.
pub fn pcg(a: &Csr, b: &[f64], opts: &SolverOptions) -> Result<Solution> {
    let n = a.n;
    let max_iter = opts.max_iter.unwrap_or_else(|| (50.0 * (n as f64).sqrt()).ceil() as usize);
    let inv_diag: Vec<f64> = a.diag().iter().map(|&d| 1.0 / d).collect();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(Solution { x, residual: 0.0, iterations: 0 });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        a.matvec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        x.par_iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
        r.par_iter_mut().zip(&ap).for_each(|(r, ap)| *r -= alpha * ap);
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= opts.tol * bnorm {
            return Ok(Solution { x, residual: rnorm, iterations: it });
        }
        z.par_iter_mut().zip(&r).zip(&inv_diag).for_each(|((z, r), d)| *z = r * d);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.par_iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: dot(&r, &r).sqrt() / bnorm })
}

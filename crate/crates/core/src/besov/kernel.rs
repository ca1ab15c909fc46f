use crate::error::{invalid, Result};
use crate::geometry::FractalKind;

/// Parameters of the level-`i` jump kernel on the SG.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpKernelParams {
    pub i: usize,
    pub delta: f64,
    pub gamma: usize,
    pub beta_i: f64,
    /// Number of levels summed; defaults to `ceil(i / (1 - 2^beta_i / 5))`.
    pub phi: Option<usize>,
}

impl JumpKernelParams {
    fn lambda(&self) -> f64 {
        2f64.powf(self.beta_i) / 5.0
    }

    pub fn phi(&self) -> Result<usize> {
        let alpha = FractalKind::SG.alpha();
        if self.i == 0 {
            return invalid("kernel index i must be at least 1");
        }
        if !(self.beta_i > alpha && self.beta_i < super::sg_beta_star()) {
            return invalid("beta_i must lie in (alpha, beta*)");
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return invalid("delta must lie in (0, 1]");
        }
        let g = self.gamma as f64;
        if !(alpha - g < 0.0 && alpha - (self.beta_i - alpha) / 2.0 * g < 0.0) {
            return invalid("gamma too small for this beta_i");
        }
        let slack = 1.0 - self.lambda();
        match self.phi {
            None => Ok((self.i as f64 / slack).ceil() as usize),
            Some(p) if slack * p as f64 >= self.i as f64 => Ok(p),
            Some(_) => invalid("Phi(i) violates (1 - 2^beta_i/5) Phi(i) >= i"),
        }
    }

    /// Word depth needed to evaluate the kernel exactly.
    pub fn required_depth(&self) -> Result<usize> {
        let phi = self.phi()?;
        Ok(phi + self.gamma * phi * self.i)
    }
}

/// `C_i(x, y) = sum_{n<=Phi(i)} 2^{-2 alpha n} sum_{w in W_n} sum_{p, q in V_w}
/// 1_{K^{(i)}_{p,n}}(x) 1_{K^{(i)}_{q,n}}(y) / (nu(K^{(i)}_{p,n}) nu(K^{(i)}_{q,n}))` for
/// `x`, `y` given by SG addresses, where `K^{(i)}_{P_{wj},n} = K_{w j^{gamma n i}}`
/// has measure `3^{-(n + gamma n i)}`. Returns `(C_i, a_i)` with
/// `a_i = delta C_i + 1 - delta`.
pub fn jump_kernel_ci(x: &[u8], y: &[u8], p: &JumpKernelParams) -> Result<(f64, f64)> {
    let phi = p.phi()?;
    let need = p.required_depth()?;
    if x.len() < need || y.len() < need {
        return invalid(format!("addresses must have at least {need} digits"));
    }
    if x.iter().chain(y).any(|&d| d > 2) {
        return invalid("SG address digits are 0, 1, 2");
    }
    let alpha = FractalKind::SG.alpha();
    let mut c = 0.0;
    for n in 1..=phi {
        if x[..n] != y[..n] {
            break;
        }
        let run = p.gamma * n * p.i;
        let (j, k) = (x[n], y[n]);
        let inside = |z: &[u8], d: u8| z[n..n + run].iter().all(|&e| e == d);
        if inside(x, j) && inside(y, k) {
            c += (-2.0 * alpha * n as f64).exp2() * 3f64.powi(2 * (n + run) as i32);
        }
    }
    Ok((c, p.delta * c + 1.0 - p.delta))
}

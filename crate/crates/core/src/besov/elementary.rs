//! Discrete geometric averages `(1 - lambda) sum lambda^n x_n`.

/// `(1 - lambda) sum_{n>=1} lambda^n x_n` for `x_1..x_L` given and `x_n = tail`
/// for `n > L`.
pub fn geometric_mean_value(xs: &[f64], lambda: f64, tail: f64) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for &x in xs {
        p *= lambda;
        acc += p * x;
    }
    (1.0 - lambda) * acc + p * lambda * tail
}

/// `(1 - lambda) sum_{n=1}^{N} lambda^n x_n`, the truncated form.
pub fn truncated_geometric_mean(xs: &[f64], lambda: f64) -> f64 {
    geometric_mean_value(xs, lambda, 0.0)
}

/// Smallest `C` with `x_n <= C x_{n+m}` for all `n`, `m` in the finite sequence.
pub fn quasi_monotone_constant(xs: &[f64]) -> f64 {
    let mut c: f64 = 1.0;
    let mut suffix_min = f64::INFINITY;
    for &x in xs.iter().rev() {
        if suffix_min.is_finite() {
            c = c.max(x / suffix_min);
        }
        suffix_min = suffix_min.min(x);
    }
    c
}

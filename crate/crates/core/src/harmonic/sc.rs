use crate::energy::{sc_pointwise_energy_dn, VertexFunction};
use crate::error::{invalid, Result};
use crate::geometry::{vertex_graph, FractalKind, VertexGraph, Word};
use crate::network::{sc_rnv, SolverOptions};
use crate::scalar::{rat, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// The left-to-right harmonic minimizer `u_n` on the SC vertex graph.
#[derive(Clone, Debug)]
pub struct ScGoodFunction {
    pub level: usize,
    pub u: VertexFunction<f64>,
    /// `D_n(u_n)`.
    pub energy: f64,
    pub resistance: f64,
    pub residual: f64,
}

pub fn sc_good_function(g: &VertexGraph, opts: &SolverOptions) -> Result<ScGoodFunction> {
    let r = sc_rnv(g, opts)?;
    let u = VertexFunction::new(g, r.potentials)?;
    let energy = sc_pointwise_energy_dn(g, &u)?;
    Ok(ScGoodFunction { level: g.level, u, energy, resistance: r.value, residual: r.residual })
}

/// The increasing function on `[0, 1]` fixed by `f(0) = 0`, `f(1) = 1` and the
/// triadic 5/7 : 2/7 refinement, evaluated exactly and memoized.
#[derive(Clone, Debug, Default)]
pub struct TriadicFn {
    memo: HashMap<(u32, u64), BigRational>,
}

impl TriadicFn {
    pub fn new() -> Self {
        Self::default()
    }

    /// `f(i / 3^n)`.
    pub fn at(&mut self, i: u64, n: u32) -> BigRational {
        let den = 3u64.pow(n);
        assert!(i <= den, "argument outside [0, 1]");
        if i == 0 {
            return BigRational::zero();
        }
        if i == den {
            return BigRational::one();
        }
        if let Some(v) = self.memo.get(&(n, i)) {
            return v.clone();
        }
        let (q, r) = (i / 3, i % 3);
        let v = match r {
            0 => self.at(q, n - 1),
            1 => rat(5, 7) * self.at(q, n - 1) + rat(2, 7) * self.at(q + 1, n - 1),
            _ => rat(2, 7) * self.at(q, n - 1) + rat(5, 7) * self.at(q + 1, n - 1),
        };
        self.memo.insert((n, i), v.clone());
        v
    }

    /// `f(t)` for a triadic rational `t` in `[0, 1]`.
    pub fn eval(&mut self, t: &BigRational) -> Result<BigRational> {
        if *t < BigRational::zero() || *t > BigRational::one() {
            return invalid("triadic_f is defined on [0, 1]");
        }
        let mut d = t.denom().clone();
        let mut n = 0u32;
        let three = BigInt::from(3);
        while d > BigInt::one() {
            if (&d % &three) != BigInt::zero() {
                return invalid(format!("{t} is not a triadic rational"));
            }
            d /= &three;
            n += 1;
        }
        let i: u64 = t.numer().try_into().map_err(|_| crate::Error::InvalidArgument("too deep".into()))?;
        Ok(self.at(i, n))
    }

    /// `f(i / 3^n)` in floating point, by the affine map on each triadic digit.
    pub fn value_f64(i: u64, n: u32) -> f64 {
        const OFFSET: [f64; 3] = [0.0, 2.0 / 7.0, 5.0 / 7.0];
        const SCALE: [f64; 3] = [2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0];
        let den = 3u64.pow(n);
        assert!(i <= den, "argument outside [0, 1]");
        if i == den {
            return 1.0;
        }
        let (mut acc, mut mult, mut rest, mut place) = (0.0, 1.0, i, den);
        while rest > 0 {
            place /= 3;
            let d = (rest / place) as usize;
            rest %= place;
            acc += mult * OFFSET[d];
            mult *= SCALE[d];
        }
        acc
    }

    /// Floating-point [`TriadicFn::at_half_grid`].
    pub fn half_grid_f64(k: u64, n: u32) -> f64 {
        if k % 2 == 0 {
            Self::value_f64(k / 2, n)
        } else {
            0.5 * (Self::value_f64(k / 2, n) + Self::value_f64(k / 2 + 1, n))
        }
    }

    /// `f(k / (2 3^n))`. Odd `k` are side midpoints; since `f(1/2) = 1/2` and `f`
    /// is self-affine on triadic intervals, the value is the endpoint mean.
    pub fn at_half_grid(&mut self, k: u64, n: u32) -> BigRational {
        if k % 2 == 0 {
            self.at(k / 2, n)
        } else {
            (self.at(k / 2, n) + self.at(k / 2 + 1, n)) * rat(1, 2)
        }
    }
}

/// `U(x, y) = f(x)` on the SC vertex set, exactly.
pub fn f_of_x(g: &VertexGraph) -> Result<VertexFunction<BigRational>> {
    if g.kind != FractalKind::SC {
        return invalid("f(x) is an SC test function");
    }
    let mut f = TriadicFn::new();
    let values =
        (0..g.num_vertices()).map(|v| f.at_half_grid(g.raw_coords(v).0 as u64, g.level as u32)).collect();
    VertexFunction::new(g, values)
}

/// `phi(x, y) = 3x^2 + 2(x - y)^2 + 3(1 - y)^2`.
pub fn phi<T: Scalar>(x: T, y: T) -> T {
    let three = T::frac(3, 1);
    let d = x.clone() - y.clone();
    let e = T::one() - y;
    three.clone() * x.clone() * x + T::frac(2, 1) * d.clone() * d + three * e.clone() * e
}

pub fn phi_gradient<T: Scalar>(x: T, y: T) -> (T, T) {
    (
        T::frac(10, 1) * x.clone() - T::frac(4, 1) * y.clone(),
        T::frac(10, 1) * y - T::frac(4, 1) * x - T::frac(6, 1),
    )
}

/// Level-n energy of `x` over the cells whose digits all lie in
/// `{0, 1, 2, 4, 5, 6}` (a product of `[0, 1]` with a Cantor set).
pub fn cantor_strip_energy(g: &VertexGraph) -> Result<BigRational> {
    if g.kind != FractalKind::SC {
        return invalid("Cantor strip lives in the SC");
    }
    let den = rat(1, 2 * 3i64.pow(g.level as u32));
    let x = |v: u32| BigRational::from_integer(BigInt::from(g.raw_coords(v as usize).0)) * den.clone();
    let mut acc = BigRational::zero();
    for c in 0..g.num_cells() {
        let w = Word::from_index(FractalKind::SC, g.level, c);
        if w.digits().iter().any(|&d| d == 3 || d == 7) {
            continue;
        }
        let vs = g.cell(c);
        for j in 0..8 {
            let d = x(vs[j]) - x(vs[(j + 1) % 8]);
            acc += d.clone() * d;
        }
    }
    Ok(acc)
}

/// `(D_n(f(x)), strip energy of x)`; closed forms `(6/7)^n` and `(2/3)^n`.
pub fn strip_energy_checks(n: usize) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return invalid("strip energies are defined for n >= 1");
    }
    let g = vertex_graph(FractalKind::SC, n)?;
    let sc = sc_pointwise_energy_dn(&g, &f_of_x(&g)?)?;
    Ok((sc, cantor_strip_energy(&g)?))
}

//! Harmonic functions on the SG and SC and the explicit test functions.

mod harnack;
mod holder;
mod sc;
mod sg;

pub use harnack::{harnack_ratio, harnack_trials, HarnackBall, HarnackProblem};
pub use holder::holder_constant;
pub use sc::{
    cantor_strip_energy, f_of_x, phi, phi_gradient, sc_good_function, strip_energy_checks,
    ScGoodFunction, TriadicFn,
};
pub use sg::{sg_harmonic, SgHarmonic};

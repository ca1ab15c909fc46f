use fractaldf::besov::{besov_partial_sum, sg_beta_star, BesovForm, BesovParams};
use fractaldf::energy::{sc_pointwise_energy_dn, sg_pointwise_energy_bn, VertexFunction};
use fractaldf::geometry::{point_of, vertex_graph};
use fractaldf::harmonic::{
    harnack_ratio, holder_constant, phi, phi_gradient, sc_good_function, sg_harmonic, strip_energy_checks,
    HarnackBall, HarnackProblem, SgHarmonic, TriadicFn,
};
use fractaldf::network::{vertex_network, SolverOptions};
use fractaldf::scalar::rat;
use fractaldf::{ExactPoint, FractalKind, Word};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn value_at(g: &fractaldf::VertexGraph, u: &VertexFunction<BigRational>, w: &str) -> BigRational {
    let p = point_of(FractalKind::SG, &Word::parse(FractalKind::SG, w).unwrap()).unwrap();
    u.values[g.find(&p).unwrap() as usize].clone()
}

#[test]
fn sg_extension_example() {
    let g = vertex_graph(FractalKind::SG, 1).unwrap();
    let u = sg_harmonic(&g, [rat(0, 1), rat(1, 1), rat(2, 1)]).unwrap();
    assert_eq!(value_at(&g, &u, "01"), rat(4, 5));
    assert_eq!(value_at(&g, &u, "12"), rat(6, 5));
    assert_eq!(value_at(&g, &u, "02"), rat(1, 1));
    let c = sg_harmonic(&g, [rat(7, 3), rat(7, 3), rat(7, 3)]).unwrap();
    assert!(c.values.iter().all(|v| *v == rat(7, 3)));
    let g2 = vertex_graph(FractalKind::SG, 2).unwrap();
    let u = sg_harmonic(&g2, [rat(0, 1), rat(1, 1), rat(0, 1)]).unwrap();
    assert_eq!(sg_pointwise_energy_bn(&g2, &u).unwrap(), rat(18, 25));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Harmonic extensions satisfy the discrete mean-value property on `V_n`
    /// away from the three boundary points.
    #[test]
    fn sg_harmonic_is_graph_harmonic(a in -5i64..5, b in -5i64..5, c in -5i64..5, n in 1usize..5) {
        let g = vertex_graph(FractalKind::SG, n).unwrap();
        let u = sg_harmonic(&g, [rat(a, 1), rat(b, 1), rat(c, 1)]).unwrap();
        let net = vertex_network(&g);
        let mut acc = vec![BigRational::zero(); g.num_vertices()];
        for &(i, j, m) in net.edges() {
            let d = (u.values[i as usize].clone() - u.values[j as usize].clone()) * rat(m as i64, 1);
            acc[i as usize] += d.clone();
            acc[j as usize] -= d;
        }
        let corners: Vec<ExactPoint> = (0..3u8)
            .map(|j| point_of(FractalKind::SG, &Word::power(j, 1)).unwrap())
            .collect();
        for v in 0..g.num_vertices() {
            if !corners.contains(&g.point(v)) {
                prop_assert!(acc[v].is_zero(), "vertex {v}");
            }
        }
    }
}

#[test]
fn good_function_properties() {
    let opts = SolverOptions::default();
    for n in 1..=3 {
        let g = vertex_graph(FractalKind::SC, n).unwrap();
        let gf = sc_good_function(&g, &opts).unwrap();
        assert!((gf.energy * gf.resistance - 1.0).abs() < 1e-9);
        let side = g.side();
        let mut index = std::collections::HashMap::new();
        for v in 0..g.num_vertices() {
            index.insert(g.raw_coords(v), v);
        }
        for v in 0..g.num_vertices() {
            let (x, y) = g.raw_coords(v);
            let u = gf.u.values[v];
            assert!((-1e-12..=1.0 + 1e-12).contains(&u));
            if 2 * x == side {
                assert!((u - 0.5).abs() < 1e-9);
            }
            let flip_y = gf.u.values[index[&(x, side - y)]];
            let flip_x = gf.u.values[index[&(side - x, y)]];
            assert!((u - flip_y).abs() < 1e-9);
            assert!((u + flip_x - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn good_function_scaled_energies_stay_bounded() {
    let opts = SolverOptions::default();
    let rho: f64 = 1.25;
    let m = 4;
    let fine = vertex_graph(FractalKind::SC, m).unwrap();
    let u = sc_good_function(&fine, &opts).unwrap().u;
    let mut a = Vec::new();
    for n in 1..=m {
        let g = vertex_graph(FractalKind::SC, n).unwrap();
        let un = u.restrict(&fine, &g).unwrap();
        a.push(rho.powi(n as i32) * sc_pointwise_energy_dn(&g, &un).unwrap());
    }
    let (lo, hi) = a.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    assert!(lo > 0.0 && hi / lo < 2.0, "{a:?}");
}

#[test]
fn triadic_function_and_phi() {
    let mut f = TriadicFn::new();
    assert_eq!(f.eval(&rat(1, 3)).unwrap(), rat(2, 7));
    assert_eq!(f.eval(&rat(2, 3)).unwrap(), rat(5, 7));
    assert_eq!(f.eval(&rat(1, 9)).unwrap(), rat(4, 49));
    assert_eq!(f.eval(&rat(4, 9)).unwrap(), rat(20, 49));
    let mut prev = rat(-1, 1);
    for i in 0..=27 {
        let v = f.eval(&rat(i, 27)).unwrap();
        assert!(v > prev);
        prev = v;
    }
    let (x, y) = (rat(2, 7), rat(5, 7));
    assert_eq!(phi_gradient(x.clone(), y.clone()), (rat(0, 1), rat(0, 1)));
    assert_eq!(phi(x, y), rat(6, 7));
}

#[test]
fn strip_energies() {
    assert_eq!(strip_energy_checks(1).unwrap(), (rat(6, 7), rat(2, 3)));
    assert_eq!(strip_energy_checks(3).unwrap(), (rat(216, 343), rat(8, 27)));
    assert!(strip_energy_checks(0).is_err());
}

#[test]
fn harnack_constant_data_and_self_similarity() {
    let ball = HarnackBall::standard();
    let g = vertex_graph(FractalKind::SC, 3).unwrap();
    let p = HarnackProblem::new(&g, &ball).unwrap();
    let ones = vec![1.0; p.boundary.len()];
    assert!((p.ratio(&ones).unwrap() - 1.0).abs() < 1e-10);
    assert!(p.ratio(&vec![0.0; p.boundary.len()]).is_err());

    // The same ball mapped into cell 0 and refined once more.
    let g4 = vertex_graph(FractalKind::SC, 4).unwrap();
    let small = ball.mapped(&[0]);
    let q = HarnackProblem::new(&g4, &small).unwrap();
    assert_eq!(q.interior().len(), p.interior().len());
    let r = harnack_ratio(&g4, &small, &vec![1.0; q.boundary.len()]).unwrap();
    assert!((r - 1.0).abs() < 1e-10);
}

#[test]
fn holder_statistic_is_stable() {
    let beta = sg_beta_star() - 0.1;
    let h = SgHarmonic::new(0.0, 1.0, 0.0);
    // Full semi-norm of a harmonic function: B_n = (3/5)^n S, a geometric series.
    let q = 2f64.powf(beta - FractalKind::SG.alpha()) * 0.6;
    let e = h.boundary_energy() * q / (1.0 - q);
    let stats: Vec<f64> = (4..=6)
        .map(|n| {
            let g = vertex_graph(FractalKind::SG, n).unwrap();
            let u = h.on_graph(&g).unwrap();
            let params = BesovParams { beta, n_max: n, kind: FractalKind::SG, form: BesovForm::Pointwise };
            assert!(besov_partial_sum(&g, &u, &params).unwrap().value < e);
            holder_constant(&g, &u, e, beta).unwrap()
        })
        .collect();
    for s in &stats {
        assert!(s.is_finite() && *s > 0.0);
        assert!((s / stats[0] - 1.0).abs() <= 0.2, "{stats:?}");
    }
    let g = vertex_graph(FractalKind::SG, 3).unwrap();
    assert!(holder_constant(&g, &VertexFunction::constant(&g, 1.0), 0.0, beta).is_err());
}

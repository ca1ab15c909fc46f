use fractaldf::geometry::{cell_graph, vertex_graph};
use fractaldf::network::{
    cell_network, delta_to_wye, effective_resistance, effective_resistance_with, replace_triangle_with_wye,
    sc_rnv, sc_sides, sg_cell_resistance, wye_to_delta, SolverChoice, SolverOptions,
};
use fractaldf::scalar::rat;
use fractaldf::{FractalKind, WeightedNetwork};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Connected network on `n` nodes: a random spanning path plus extra edges,
/// with a triangle on nodes 0, 1, 2.
fn network_strategy() -> impl Strategy<Value = WeightedNetwork> {
    (4usize..=12)
        .prop_flat_map(|n| {
            let edge = (0..n as u32, 0..n as u32, 0.1f64..10.0);
            (
                Just(n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                prop::collection::vec(0.1f64..10.0, n - 1),
                prop::collection::vec(edge, 0..2 * n),
                prop::collection::vec(0.1f64..10.0, 3),
            )
        })
        .prop_map(|(n, order, path_c, extra, tri)| {
            let mut net = WeightedNetwork::new(n);
            for (k, c) in path_c.iter().enumerate() {
                net.add_edge(order[k], order[k + 1], *c).unwrap();
            }
            for (i, j, c) in extra {
                if i != j {
                    net.add_edge(i as usize, j as usize, c).unwrap();
                }
            }
            for (k, c) in tri.iter().enumerate() {
                net.add_edge(k, (k + 1) % 3, *c).unwrap();
            }
            net
        })
}

fn r(net: &WeightedNetwork, a: usize, b: usize) -> f64 {
    effective_resistance(net, &[a], &[b]).unwrap().value
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_and_cg_agree(net in network_strategy(), a in 0usize..4, b in 0usize..4) {
        prop_assume!(a != b);
        let dense = SolverOptions { choice: SolverChoice::Dense, ..SolverOptions::default() };
        let cg = SolverOptions { choice: SolverChoice::Cg, ..SolverOptions::default() };
        let x = effective_resistance_with(&net, &[a], &[b], &dense).unwrap();
        let y = effective_resistance_with(&net, &[a], &[b], &cg).unwrap();
        prop_assert!(close(x.value, y.value, 1e-10), "{} vs {}", x.value, y.value);
        prop_assert!(close(x.energy(), net.energy(&x.potentials), 1e-10));
    }

    #[test]
    fn delta_wye_preserves_resistance(net in network_strategy(), a in 0usize..4, b in 0usize..4) {
        prop_assume!(a != b);
        let (star, _) = replace_triangle_with_wye(&net, 0, 1, 2).unwrap();
        prop_assert!(close(r(&net, a, b), r(&star, a, b), 1e-10));
    }

    #[test]
    fn rayleigh_monotonicity(net in network_strategy(), e in 0usize..64, f in 1.0f64..5.0) {
        let e = e % net.edges().len();
        let mut stronger = net.clone();
        stronger.scale_conductance(e, f).unwrap();
        let n = net.num_nodes();
        prop_assert!(r(&stronger, 0, n - 1) <= r(&net, 0, n - 1) * (1.0 + 1e-12));
    }

    #[test]
    fn shorting_decreases_resistance(net in network_strategy(), s in prop::collection::vec(1usize..12, 2..4)) {
        let n = net.num_nodes();
        let mut set: Vec<usize> = s.into_iter().map(|v| 1 + v % (n - 2)).collect();
        set.sort_unstable();
        set.dedup();
        prop_assume!(set.len() >= 2);
        let (shorted, map) = net.short_nodes(&set).unwrap();
        let after = r(&shorted, map[0], map[n - 1]);
        prop_assert!(after <= r(&net, 0, n - 1) * (1.0 + 1e-12));
    }

    #[test]
    fn cutting_increases_resistance(net in network_strategy(), v in 1usize..11, mask in any::<u64>()) {
        let n = net.num_nodes();
        let v = 1 + v % (n - 2);
        let incident: Vec<usize> = (0..net.edges().len())
            .filter(|&e| net.edges()[e].0 as usize == v || net.edges()[e].1 as usize == v)
            .collect();
        let (keep, moved): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
            incident.into_iter().enumerate().partition(|(k, _)| mask >> (k % 64) & 1 == 0);
        let parts: Vec<Vec<usize>> =
            [keep, moved].into_iter().map(|p| p.into_iter().map(|e| e.1).collect()).collect();
        let (cut, _) = net.cut_node(v, &parts).unwrap();
        prop_assert!(r(&cut, 0, n - 1) >= r(&net, 0, n - 1) * (1.0 - 1e-12));
    }

    #[test]
    fn resistance_is_a_metric(net in network_strategy(), a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        prop_assume!(a != b && b != c && a != c);
        prop_assert!(close(r(&net, a, b), r(&net, b, a), 1e-10));
        prop_assert!(r(&net, a, c) <= (r(&net, a, b) + r(&net, b, c)) * (1.0 + 1e-10));
    }

    #[test]
    fn delta_wye_round_trip(r12 in 0.01f64..100.0, r23 in 0.01f64..100.0, r31 in 0.01f64..100.0) {
        let (a, b, c) = delta_to_wye(r12, r23, r31).unwrap();
        let (x, y, z) = wye_to_delta(a, b, c).unwrap();
        prop_assert!(close(x, r12, 1e-12) && close(y, r23, 1e-12) && close(z, r31, 1e-12));
    }
}

#[test]
fn delta_wye_examples() {
    let third = rat(1, 3);
    assert_eq!(delta_to_wye(rat(1, 1), rat(1, 1), rat(1, 1)).unwrap(), (third.clone(), third.clone(), third));
    assert_eq!(
        delta_to_wye(rat(2, 1), rat(3, 1), rat(6, 1)).unwrap(),
        (rat(12, 11), rat(6, 11), rat(18, 11))
    );
    let (a, b, c) = delta_to_wye(rat(1, 1), rat(2, 1), rat(3, 1)).unwrap();
    assert_eq!(wye_to_delta(a, b, c).unwrap(), (rat(1, 1), rat(2, 1), rat(3, 1)));
    assert!(delta_to_wye(0.0, 1.0, 1.0).is_err());
}

#[test]
fn sg_resistance_small_levels() {
    for (n, expect) in [(1usize, 2.0 / 3.0), (2, 16.0 / 9.0), (3, 98.0 / 27.0), (4, 544.0 / 81.0)] {
        let last = (3usize.pow(n as u32) - 1) / 2;
        let v = sg_cell_resistance(n, 0, last).unwrap().value;
        assert!(close(v, expect, 1e-12), "n={n}: {v}");
    }
}

#[test]
fn sg_resistance_to_corner_is_bounded() {
    for n in 1..=4 {
        let g = cell_graph(FractalKind::SG, n).unwrap();
        let net = cell_network(&g);
        let bound = 2.5 * (5f64 / 3.0).powi(n as i32);
        for w in 1..g.num_nodes() {
            assert!(r(&net, w, 0) <= bound, "n={n} w={w}");
        }
    }
}

/// Dense Laplacian solve with `nalgebra`, independent of the crate's solver.
fn brute_force_rnv(n: usize) -> f64 {
    let g = vertex_graph(FractalKind::SC, n).unwrap();
    let (left, right) = sc_sides(&g);
    let size = g.num_vertices();
    let mut fixed = vec![None; size];
    left.iter().for_each(|&v| fixed[v] = Some(0.0));
    right.iter().for_each(|&v| fixed[v] = Some(1.0));
    let free: Vec<usize> = (0..size).filter(|&v| fixed[v].is_none()).collect();
    let mut pos = vec![usize::MAX; size];
    free.iter().enumerate().for_each(|(k, &v)| pos[v] = k);
    let mut l = DMatrix::<f64>::zeros(free.len(), free.len());
    let mut rhs = DVector::<f64>::zeros(free.len());
    for &(i, j, m) in g.edges() {
        let (i, j, c) = (i as usize, j as usize, m as f64);
        for (a, b) in [(i, j), (j, i)] {
            if pos[a] != usize::MAX {
                l[(pos[a], pos[a])] += c;
                match fixed[b] {
                    Some(x) => rhs[pos[a]] += c * x,
                    None => l[(pos[a], pos[b])] -= c,
                }
            }
        }
    }
    let x = l.lu().solve(&rhs).unwrap();
    let u = |v: usize| fixed[v].unwrap_or_else(|| x[pos[v]]);
    let energy: f64 = g.edges().iter().map(|&(i, j, m)| m as f64 * (u(i as usize) - u(j as usize)).powi(2)).sum();
    1.0 / energy
}

#[test]
fn sc_rnv_matches_dense_oracle() {
    for n in 1..=2 {
        let g = vertex_graph(FractalKind::SC, n).unwrap();
        let ours = sc_rnv(&g, &SolverOptions { choice: SolverChoice::Cg, ..SolverOptions::default() }).unwrap();
        assert!(close(ours.value, brute_force_rnv(n), 1e-10));
    }
}

#[test]
fn sc_ratio_respects_short_cut_bounds() {
    let opts = SolverOptions::default();
    let rs: Vec<f64> =
        (1..=3).map(|n| sc_rnv(&vertex_graph(FractalKind::SC, n).unwrap(), &opts).unwrap().value).collect();
    for w in rs.windows(2) {
        let q = w[1] / w[0];
        assert!((7.0 / 6.0..=1.5).contains(&q), "{q}");
    }
}

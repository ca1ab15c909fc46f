use super::WeightedNetwork;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

fn positive<T: Scalar + PartialOrd>(xs: &[&T]) -> Result<()> {
    if xs.iter().all(|x| **x > T::zero()) {
        Ok(())
    } else {
        invalid("Δ-Y resistances must be positive")
    }
}

/// Triangle resistances `(R12, R23, R31)` to the equivalent star `(R1, R2, R3)`.
pub fn delta_to_wye<T: Scalar + PartialOrd>(r12: T, r23: T, r31: T) -> Result<(T, T, T)> {
    positive(&[&r12, &r23, &r31])?;
    let s = r12.clone() + r23.clone() + r31.clone();
    Ok((
        r12.clone() * r31.clone() / s.clone(),
        r12 * r23.clone() / s.clone(),
        r23 * r31 / s,
    ))
}

/// Star resistances `(R1, R2, R3)` to the equivalent triangle `(R12, R23, R31)`.
pub fn wye_to_delta<T: Scalar + PartialOrd>(r1: T, r2: T, r3: T) -> Result<(T, T, T)> {
    positive(&[&r1, &r2, &r3])?;
    let p = r1.clone() * r2.clone() + r2.clone() * r3.clone() + r3.clone() * r1.clone();
    Ok((p.clone() / r3, p.clone() / r1, p / r2))
}

/// Replaces the triangle on `(a, b, c)` by a star around a new node.
/// Returns the new network and the centre id.
pub fn replace_triangle_with_wye(
    net: &WeightedNetwork,
    a: usize,
    b: usize,
    c: usize,
) -> Result<(WeightedNetwork, usize)> {
    let (gab, gbc, gca) =
        (net.conductance_between(a, b), net.conductance_between(b, c), net.conductance_between(c, a));
    if gab <= 0.0 || gbc <= 0.0 || gca <= 0.0 {
        return invalid("nodes do not form a triangle");
    }
    let (r1, r2, r3) = delta_to_wye(1.0 / gab, 1.0 / gbc, 1.0 / gca)?;
    let mut out = net.clone();
    out.remove_edges_between(a, b);
    out.remove_edges_between(b, c);
    out.remove_edges_between(c, a);
    let o = out.add_node();
    out.add_edge(a, o, 1.0 / r1)?;
    out.add_edge(b, o, 1.0 / r2)?;
    out.add_edge(c, o, 1.0 / r3)?;
    Ok((out, o))
}

//! Brute-force reference computations. Deliberately plain: straight loops,
//! uncompensated accumulation, no shared code with the main paths they
//! cross-check.

use crate::blaschke::ZeroSequence;
use crate::geometry::BoundaryPoint;
use crate::Complex;
use statrs::function::gamma::gamma as gamma_fn;

/// Product of normalized factors conj(a)(a - z) / ((1 - z conj(a)) |a|) in
/// stored order.
pub fn oracle_naive_product(zs: &ZeroSequence, z: Complex) -> Complex {
    let mut prod = Complex::new(1.0, 0.0);
    for &a in zs.zeros() {
        prod *= a.conj() * (a - z) / ((1.0 - z * a.conj()) * a.norm());
    }
    prod
}

/// Uniform-mesh product-midpoint rule for the fractional integral: h at
/// each panel midpoint times the exact weight mass
/// [(r-a)^gamma - (r-b)^gamma]/gamma, summed without compensation.
pub fn oracle_naive_rl<F: Fn(f64) -> f64>(h: F, gamma: f64, r: f64, panels: usize) -> f64 {
    assert!(gamma > 0.0 && gamma <= 1.0 && r > 0.0 && r < 1.0 && panels > 0);
    let dx = r / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = i as f64 * dx;
        // The final right edge is r itself; recomputing it as panels*dx can
        // land a rounding error past r and poison (r-b)^gamma.
        let b = if i + 1 == panels { r } else { (i + 1) as f64 * dx };
        let mass = ((r - a).powf(gamma) - (r - b).powf(gamma)) / gamma;
        acc += h(0.5 * (a + b)) * mass;
    }
    acc / gamma_fn(gamma)
}

/// Frostman sum over the stored zeros, naive order and accumulation.
pub fn oracle_frostman(zs: &ZeroSequence, vertex: BoundaryPoint, gamma: f64) -> f64 {
    let v = vertex.to_complex();
    let mut acc = 0.0;
    for &a in zs.zeros() {
        acc += (1.0 - a.norm()) * (v - a).norm().powf(gamma - 1.0);
    }
    acc
}

//! Zero-free factors of a bounded function: the boundary-measure transform
//! h_psi, the factor g_psi = exp{-(1/2pi) h_psi + iC'}, exact argument
//! evaluation for the full factorization, and the two reference measures
//! used by the experiment suite.
//!
//! Because the measures are atoms plus piecewise-linear CDFs, the transform
//! integrates in closed form segment by segment: no quadrature, no failure
//! modes. The adaptive-panel route survives only as a test oracle.

use crate::blaschke::{self, BlaschkeError, ZeroSequence};
use crate::kahan::{ComplexSum, NeumaierSum};
use crate::measures::{BoundaryMeasure, BoundedFunctionSpec};
use crate::Complex;
use std::f64::consts::PI;

/// Kernel (e^{it} + z)/(e^{it} - z). Real part: the Poisson kernel
/// (1 - |z|^2)/|e^{it} - z|^2. Imaginary part: 2 Im(z e^{-it})/|e^{it} - z|^2.
pub fn herglotz_kernel(z: Complex, t: f64) -> Complex {
    let e = Complex::from_polar(1.0, t);
    (e + z) / (e - z)
}

/// Transform of the measure at z, |z| < 1: atoms summed exactly; each
/// linear-CDF segment of density c contributes
///
///   c * [ (t1 - t0) - 2i (Log(1 - z e^{-it1}) - Log(1 - z e^{-it0})) ],
///
/// exact because the Log argument has real part >= 1 - |z| > 0, so the
/// principal branch is the continuous one.
pub fn h_psi(z: Complex, m: &BoundaryMeasure) -> Complex {
    debug_assert!(z.norm() < 1.0);
    let one = Complex::new(1.0, 0.0);
    let mut acc = ComplexSum::new();
    for &(t, mass) in m.atoms() {
        acc.add(herglotz_kernel(z, t) * mass);
    }
    for seg in m.segments() {
        let c = seg.density();
        if c == 0.0 {
            continue;
        }
        let l1 = (one - z * Complex::from_polar(1.0, -seg.t1)).ln();
        let l0 = (one - z * Complex::from_polar(1.0, -seg.t0)).ln();
        let kernel_integral =
            Complex::new(seg.t1 - seg.t0, 0.0) - Complex::new(0.0, 2.0) * (l1 - l0);
        acc.add(kernel_integral * c);
    }
    acc.value()
}

/// log g = -(1/2pi) h_psi(z) + i phase.
pub fn log_g(z: Complex, m: &BoundaryMeasure, phase: f64) -> Complex {
    -h_psi(z, m) / (2.0 * PI) + Complex::new(0.0, phase)
}

/// The zero-free factor g(z) = exp{-(1/2pi) h_psi(z) + i phase}; its modulus
/// never exceeds 1 because Re h_psi is a Poisson integral of a non-negative
/// measure.
pub fn g_psi(z: Complex, m: &BoundaryMeasure, phase: f64) -> Complex {
    log_g(z, m, phase).exp()
}

/// arg g(z) from the exact imaginary parts: atoms contribute
/// 2 Im(z e^{-it})/|e^{it} - z|^2, segments -2c ln(|1 - z e^{-it1}|/|1 - z e^{-it0}|).
pub fn arg_g(z: Complex, m: &BoundaryMeasure, phase: f64) -> f64 {
    debug_assert!(z.norm() < 1.0);
    let one = Complex::new(1.0, 0.0);
    let mut acc = NeumaierSum::new();
    for &(t, mass) in m.atoms() {
        let e = Complex::from_polar(1.0, t);
        acc.add(mass * 2.0 * (z * Complex::from_polar(1.0, -t)).im / (e - z).norm_sqr());
    }
    for seg in m.segments() {
        let c = seg.density();
        if c == 0.0 {
            continue;
        }
        let n1 = (one - z * Complex::from_polar(1.0, -seg.t1)).norm_sqr();
        let n0 = (one - z * Complex::from_polar(1.0, -seg.t0)).norm_sqr();
        acc.add(-c * (n1.ln() - n0.ln()));
    }
    -acc.value() / (2.0 * PI) + phase
}

/// arg f(z) for f = C z^p B(z) g(z): p arg z plus the product argument over
/// the stored zeros plus arg g. Caller keeps z off the radial cuts and away
/// from zeros; tails must be materialized beforehand.
pub fn arg_f(spec: &BoundedFunctionSpec, z: Complex) -> f64 {
    let mut arg = blaschke::arg_sum_unchecked(spec.zeros.zeros(), z);
    if spec.origin_order > 0 {
        arg += spec.origin_order as f64 * z.arg();
    }
    arg + arg_g(z, &spec.boundary, spec.phase)
}

/// log f with branch bookkeeping: the product log over zeros (normalized so
/// each Blaschke factor has unit boundary modulus), ln C, p Log z, and log g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogF {
    pub value: Complex,
    /// Factors whose cut passes through z; the imaginary part uses the
    /// semicontinuous branch there.
    pub cut_multiplicity: usize,
    /// Certified bound on the omitted tail's contribution to |log|.
    pub tail_bound: f64,
}

pub fn log_f(
    spec: &BoundedFunctionSpec,
    z: crate::geometry::DiskPoint,
    tail_tol: f64,
) -> Result<LogF, BlaschkeError> {
    if spec.origin_order > 0 && z.value() == Complex::new(0.0, 0.0) {
        return Err(BlaschkeError::AtZero);
    }
    let plog = blaschke::product_log(&spec.zeros, z, tail_tol)?;
    let z = z.value();
    let normalization: NeumaierSum = spec
        .zeros
        .zeros()
        .iter()
        .map(|a| 0.5 * a.norm_sqr().ln())
        .collect();
    let mut value = plog.value - Complex::new(normalization.value(), 0.0);
    value += Complex::new(spec.scale.ln(), 0.0);
    if spec.origin_order > 0 {
        value += spec.origin_order as f64 * z.ln();
    }
    value += log_g(z, &spec.boundary, spec.phase);
    Ok(LogF {
        value,
        cut_multiplicity: plog.cut_multiplicity,
        tail_bound: plog.tail_bound,
    })
}

/// Point mass 2pi at t = 0; the resulting g is exp{-(1+z)/(1-z)}, the
/// reference function whose argument is -2r sin(phi)/|1 - z|^2.
pub fn example1_measure() -> BoundaryMeasure {
    BoundaryMeasure::from_atoms(vec![(0.0, 2.0 * PI)]).unwrap()
}

/// CDF sign(t) |t|^{1-alpha} on [-pi, pi] as a piecewise-linear measure.
/// Per-segment interpolation error is at most `tol` (see
/// [`example2_measure_refined`]); the default tolerance is 1e-6.
pub fn example2_measure(alpha: f64) -> BoundaryMeasure {
    example2_measure_refined(alpha, 1e-6)
}

/// Same CDF with explicit per-segment tolerance. The mesh is dyadic toward
/// t = 0 (where the density (1-alpha)|t|^{-alpha} blows up), each dyadic band
/// subdivided until the linear interpolation error bound
/// s(1-s) a^{s-2} w^2 / 8 (s = 1-alpha, a = band start, w = piece width)
/// drops below `tol`; the innermost segment [0, eps] is controlled by its
/// endpoint value eps^s <= tol, which fixes the mesh depth.
pub fn example2_measure_refined(alpha: f64, tol: f64) -> BoundaryMeasure {
    assert!((0.0..1.0).contains(&alpha), "alpha must lie in [0,1)");
    assert!(tol > 0.0 && tol < 1.0);
    if alpha == 0.0 {
        return BoundaryMeasure::from_cdf(vec![-PI, PI], vec![-PI, PI]).unwrap();
    }
    let s = 1.0 - alpha;
    let depth = ((PI.log2() - tol.log2() / s).ceil() as i64).clamp(8, 900) as i32;
    let mut pos = vec![0.0, PI * 0.5f64.powi(depth)];
    for k in (0..depth).rev() {
        let lo = PI * 0.5f64.powi(k + 1);
        let hi = PI * 0.5f64.powi(k);
        let curvature = s * (1.0 - s) * lo.powf(s - 2.0);
        let pieces = ((curvature * (hi - lo).powi(2) / (8.0 * tol)).sqrt().ceil() as i64)
            .clamp(1, 4096) as usize;
        for i in 1..=pieces {
            pos.push(lo + (hi - lo) * i as f64 / pieces as f64);
        }
    }
    let mut breakpoints = Vec::with_capacity(2 * pos.len());
    let mut values = Vec::with_capacity(2 * pos.len());
    for &t in pos.iter().skip(1).rev() {
        breakpoints.push(-t);
        values.push(-t.powf(s));
    }
    for &t in pos.iter() {
        breakpoints.push(t);
        values.push(if t == 0.0 { 0.0 } else { t.powf(s) });
    }
    BoundaryMeasure::from_cdf(breakpoints, values)
        .expect("dyadic mesh breakpoints are strictly increasing and the CDF is odd-monotone")
}

/// Spec of the atom reference function exp{-(1+z)/(1-z)} rotated to `vertex`:
/// no zeros, unit scale, the 2pi point mass at the vertex angle.
pub fn example1_spec(vertex_theta: f64) -> BoundedFunctionSpec {
    let measure = BoundaryMeasure::from_atoms(vec![(vertex_theta, 2.0 * PI)]).unwrap();
    BoundedFunctionSpec::new(1.0, 0, 0.0, ZeroSequence::finite(Vec::new()).unwrap(), measure)
        .unwrap()
}

/// Zero-free spec carrying the |t|^{1-alpha} boundary CDF.
pub fn example2_spec(alpha: f64) -> BoundedFunctionSpec {
    BoundedFunctionSpec::new(
        1.0,
        0,
        0.0,
        ZeroSequence::finite(Vec::new()).unwrap(),
        example2_measure(alpha),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::product_eval;
    use crate::measures::{frostman_integral, CompleteMeasure, FrostmanIntegral};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    // Midpoint quadrature of the continuous part, uniform panels; the kernel
    // is smooth for the moduli used here, so no clustering is needed.
    fn oracle_h_psi(z: Complex, m: &BoundaryMeasure, panels: usize) -> Complex {
        let mut acc = ComplexSum::new();
        for &(t, mass) in m.atoms() {
            acc.add(herglotz_kernel(z, t) * mass);
        }
        for seg in m.segments() {
            let c = seg.density();
            let h = (seg.t1 - seg.t0) / panels as f64;
            for j in 0..panels {
                let t = seg.t0 + (j as f64 + 0.5) * h;
                acc.add(herglotz_kernel(z, t) * (c * h));
            }
        }
        acc.value()
    }

    #[test]
    fn transform_at_origin_is_total_mass() {
        let m = BoundaryMeasure::new(vec![(1.0, 0.5)], vec![-1.0, 1.0], vec![0.0, 2.0]).unwrap();
        let h = h_psi(c(0.0, 0.0), &m);
        assert_relative_eq!(h.re, 2.5, max_relative = 1e-14);
        assert_abs_diff_eq!(h.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn single_atom_matches_kernel_formula() {
        let m = example1_measure();
        let z = c(0.3, 0.4);
        let expected = 2.0 * PI * (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z);
        let got = h_psi(z, &m);
        assert_relative_eq!(got.re, expected.re, max_relative = 1e-14);
        assert_relative_eq!(got.im, expected.im, max_relative = 1e-14);
    }

    #[test]
    fn lebesgue_cdf_gives_constant_transform() {
        let m = BoundaryMeasure::from_cdf(vec![-PI, PI], vec![-PI, PI]).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.0), Complex::from_polar(0.9, 2.2), c(-0.99, 0.0)] {
            let h = h_psi(z, &m);
            assert_relative_eq!(h.re, 2.0 * PI, max_relative = 1e-13);
            assert_abs_diff_eq!(h.im, 0.0, epsilon = 1e-13);
        }
        let q = oracle_h_psi(c(0.5, 0.0), &m, 100_000);
        assert_relative_eq!(q.re, 2.0 * PI, max_relative = 1e-8);
    }

    #[test]
    fn closed_form_matches_panel_quadrature() {
        let m = BoundaryMeasure::new(
            vec![(2.5, 0.3)],
            vec![-2.0, -0.5, 1.3],
            vec![0.0, 0.4, 1.1],
        )
        .unwrap();
        let z = Complex::from_polar(0.6, 1.1);
        let exact = h_psi(z, &m);
        let quad = oracle_h_psi(z, &m, 400_000);
        assert_relative_eq!(exact.re, quad.re, max_relative = 1e-8);
        assert_relative_eq!(exact.im, quad.im, max_relative = 1e-8);
    }

    #[test]
    fn factor_examples() {
        let empty = BoundaryMeasure::empty();
        assert_eq!(g_psi(c(0.3, -0.2), &empty, 0.0), c(1.0, 0.0));

        // Atom of mass 2pi at t=0 gives g = exp{-(1+z)/(1-z)}; at the origin
        // that is e^{-1}.
        let g0 = g_psi(c(0.0, 0.0), &example1_measure(), 0.0);
        assert_relative_eq!(g0.re, (-1.0f64).exp(), max_relative = 1e-12);
        assert_abs_diff_eq!(g0.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn modulus_bounded_and_poisson_part_positive() {
        let m = BoundaryMeasure::new(
            vec![(0.7, 0.9), (-2.0, 0.1)],
            vec![0.5, 2.0],
            vec![0.0, 0.35],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let z = Complex::from_polar(rng.gen::<f64>() * 0.999, PI * (2.0 * rng.gen::<f64>() - 1.0));
            let h = h_psi(z, &m);
            assert!(h.re > 0.0, "Poisson part must be positive at {z}");
            assert!(g_psi(z, &m, 0.4).norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn argument_examples() {
        // Atom function: arg F(re^{i phi}) = -2 r sin(phi)/|1 - z|^2; at
        // z = i/2 that is -1/(5/4).
        let arg = arg_g(c(0.0, 0.5), &example1_measure(), 0.0);
        assert_relative_eq!(arg, -0.8, max_relative = 1e-12);

        // At the origin only the phase survives.
        assert_eq!(arg_g(c(0.0, 0.0), &example1_measure(), 0.25), 0.25);

        // Symmetric measure, real z: the integrand is odd.
        let sym = example2_measure(0.5);
        assert_abs_diff_eq!(arg_g(c(0.7, 0.0), &sym, 0.0), 0.0, epsilon = 1e-13);

        // The dedicated imaginary-part path agrees with the full transform.
        let m = BoundaryMeasure::new(vec![(1.2, 0.4)], vec![-1.0, 0.5], vec![0.0, 0.3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let z = Complex::from_polar(0.95 * rng.gen::<f64>(), PI * (2.0 * rng.gen::<f64>() - 1.0));
            let direct = arg_g(z, &m, 0.1);
            let via_transform = -h_psi(z, &m).im / (2.0 * PI) + 0.1;
            assert_abs_diff_eq!(direct, via_transform, epsilon = 1e-13);
        }
    }

    #[test]
    fn narrow_ramp_converges_to_atom() {
        let mass = 0.7;
        let width = 1e-5;
        let ramp =
            BoundaryMeasure::from_cdf(vec![-width / 2.0, width / 2.0], vec![0.0, mass]).unwrap();
        let z = c(0.3, -0.2);
        let limit = herglotz_kernel(z, 0.0) * mass;
        let h = h_psi(z, &ramp);
        assert_relative_eq!(h.re, limit.re, max_relative = 1e-3);
        assert_abs_diff_eq!(h.im, limit.im, epsilon = 1e-3 * limit.re.abs());
    }

    #[test]
    fn power_cdf_mesh_tracks_the_exact_function() {
        let alpha = 0.5;
        let m = example2_measure(alpha);
        assert_relative_eq!(
            m.total_mass(),
            2.0 * PI.powf(1.0 - alpha),
            max_relative = 1e-12
        );
        for u in 0..=40 {
            for frac in [0.0, 0.37, 0.81] {
                let t = PI * 0.5f64.powi(u) * (1.0 - 0.5 * frac);
                assert_abs_diff_eq!(m.cdf_at(t), t.powf(1.0 - alpha), epsilon = 2e-6);
                assert_abs_diff_eq!(m.cdf_at(-t), -t.powf(1.0 - alpha), epsilon = 2e-6);
            }
        }

        let linear = example2_measure(0.0);
        assert_eq!(linear.cdf_at(1.25), 1.25);
        assert_eq!(linear.total_mass(), 2.0 * PI);
    }

    // The true CDF has a power singularity at t = 0; the mesh truncates it at
    // depth scale eps, so for gamma < alpha the integral grows without bound
    // as the mesh deepens, while for gamma > alpha it stabilizes.
    #[test]
    fn power_cdf_criterion_shows_through_refinement() {
        let alpha = 0.5;
        let vertex = crate::geometry::BoundaryPoint::new(0.0);
        let coarse = CompleteMeasure::new(
            ZeroSequence::finite(Vec::new()).unwrap(),
            example2_measure_refined(alpha, 1e-6),
        );
        let fine = CompleteMeasure::new(
            ZeroSequence::finite(Vec::new()).unwrap(),
            example2_measure_refined(alpha, 1e-10),
        );

        let below = |lambda: &CompleteMeasure| match frostman_integral(lambda, vertex, 0.2) {
            FrostmanIntegral::Finite(v) => v,
            other => panic!("truncated mesh keeps the integral finite, got {other:?}"),
        };
        assert!(below(&fine) >= 2.0 * below(&coarse));

        let above = |lambda: &CompleteMeasure| match frostman_integral(lambda, vertex, 0.8) {
            FrostmanIntegral::Finite(v) => v,
            other => panic!("gamma above alpha converges, got {other:?}"),
        };
        assert_relative_eq!(above(&fine), above(&coarse), max_relative = 1e-3);
    }

    #[test]
    fn restricted_linear_cdf_has_logarithmic_argument() {
        // Lebesgue CDF restricted to [0, pi/2]:
        // arg g(r) = (1/2pi)(ln(1 + r^2) - 2 ln(1 - r)), growing like
        // (1/pi) ln 1/(1-r).
        let m = example2_measure(0.0).restrict(0.0, PI / 2.0).unwrap();
        for j in [6, 10, 16] {
            let r = 1.0 - 0.5f64.powi(j);
            let expected = ((1.0 + r * r).ln() - 2.0 * (1.0 - r).ln()) / (2.0 * PI);
            assert_relative_eq!(arg_g(c(r, 0.0), &m, 0.0), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_f_exponentiates_to_the_factorization() {
        let spec = BoundedFunctionSpec::new(
            0.8,
            2,
            0.3,
            ZeroSequence::finite(vec![c(0.5, 0.3), c(-0.2, 0.1)]).unwrap(),
            BoundaryMeasure::from_atoms(vec![(1.0, 0.4)]).unwrap(),
        )
        .unwrap();
        let z = c(0.35, -0.15);
        let zp = crate::geometry::DiskPoint::new(z).unwrap();
        let lf = log_f(&spec, zp, 1e-9).unwrap();
        assert_eq!(lf.cut_multiplicity, 0);
        assert_eq!(lf.tail_bound, 0.0);

        let product = product_eval(&spec.zeros, zp, 1e-9, true).unwrap().value;
        let direct = 0.8 * z * z * product * g_psi(z, &spec.boundary, 0.3);
        let exp = lf.value.exp();
        assert_relative_eq!(exp.re, direct.re, max_relative = 1e-12);
        assert_relative_eq!(exp.im, direct.im, max_relative = 1e-12);

        assert_abs_diff_eq!(arg_f(&spec, z), lf.value.im, epsilon = 1e-12);
    }

    #[test]
    fn log_f_rejects_vanishing_origin() {
        let spec = BoundedFunctionSpec::new(
            1.0,
            1,
            0.0,
            ZeroSequence::finite(Vec::new()).unwrap(),
            BoundaryMeasure::empty(),
        )
        .unwrap();
        let origin = crate::geometry::DiskPoint::new(c(0.0, 0.0)).unwrap();
        assert_eq!(log_f(&spec, origin, 1e-9), Err(BlaschkeError::AtZero));
    }
}

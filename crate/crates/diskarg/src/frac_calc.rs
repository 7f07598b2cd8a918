//! Riemann-Liouville fractional integration of radial functions, the
//! Stolz-grid supremum of |D^{-gamma} arg f|, the kernel-bound ratio, and
//! the convergence-class integral.
//!
//! All four ride on one quadrature engine for integrals of the form
//! int_0^d (s - x)^{gamma-1} h(x) dx with d <= s: panels graded dyadically
//! toward d, the weight integrated exactly per panel against a degree-8
//! interpolant of h on Chebyshev-Lobatto nodes, and a nested degree-4 rule
//! (a node subset, no extra evaluations) supplying the error estimate. The
//! weight, not h, carries the endpoint singularity, so exact weight moments
//! keep full order right up to the singular panel.

use crate::blaschke::Tail;
use crate::geometry::{DiskPoint, StolzRegion};
use crate::herglotz;
use crate::kahan::NeumaierSum;
use crate::measures::BoundedFunctionSpec;
use crate::Complex;
use statrs::function::gamma::gamma as gamma_fn;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FracError {
    #[error("gamma {gamma} outside the supported range")]
    InvalidGamma { gamma: f64 },
    #[error("radius {r} outside (0, 1) or radii not ascending")]
    InvalidRadius { r: f64 },
    #[error("tolerance must be positive (got {tol})")]
    InvalidTolerance { tol: f64 },
    #[error("zero sequence carries an unmaterialized tail descriptor")]
    UnmaterializedTail,
    #[error("integration ray passes through a radial branch cut")]
    RayOnCut,
    #[error("quadrature failed to converge: estimate {error_estimate:e} after {nodes_used} evaluations")]
    Nonconvergent {
        value: f64,
        error_estimate: f64,
        nodes_used: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracResult {
    pub value: f64,
    pub quadrature_error_estimate: f64,
    pub nodes_used: usize,
}

pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_SPLITS: usize = 4000;
// Terminal panel of the initial mesh has width about this fraction of 1 - d,
// matching the scale on which arg f varies near the boundary.
const GRADING_FRACTION: f64 = 0.25;

const CL9: [f64; 9] = [
    1.0,
    0.923_879_532_511_286_7,
    std::f64::consts::FRAC_1_SQRT_2,
    0.382_683_432_365_089_8,
    0.0,
    -0.382_683_432_365_089_8,
    -std::f64::consts::FRAC_1_SQRT_2,
    -0.923_879_532_511_286_7,
    -1.0,
];
const CL5: [f64; 5] = [
    1.0,
    std::f64::consts::FRAC_1_SQRT_2,
    0.0,
    -std::f64::consts::FRAC_1_SQRT_2,
    -1.0,
];
const CL5_IN_CL9: [usize; 5] = [0, 2, 4, 6, 8];

// Modified moments M_k = int_{-1}^{1} (c - u)^{gamma-1} u^k du, k = 0..=8,
// parametrized by cp1 = c + 1 = (s - a)/rho and cm1 = c - 1 = (s - b)/rho so
// that cm1 is exactly zero on the panel touching the singularity.
fn weight_moments(gamma: f64, cp1: f64, cm1: f64) -> [f64; 9] {
    let c = 0.5 * (cp1 + cm1);
    let mut m = [0.0; 9];
    if c < 4.0 {
        // Forward recurrence (gamma + k) M_k = B_k + k c M_{k-1} from
        // d/dt [t^gamma (c-t)^k]; error amplification per step is about c,
        // harmless for c < 4 and k <= 8.
        let pg = cp1.powf(gamma);
        let mg = cm1.powf(gamma);
        m[0] = (pg - mg) / gamma;
        for k in 1..9 {
            let boundary = if k % 2 == 0 { pg - mg } else { -pg - mg };
            m[k] = (boundary + k as f64 * c * m[k - 1]) / (gamma + k as f64);
        }
    } else {
        // (c - u)^{gamma-1} = c^{gamma-1} sum_j coeff_j (u/c)^j with
        // coeff_j = prod_{i<=j} (i - gamma)/i, all non-negative for
        // gamma <= 1: a positive series decaying at least like 4^{-j}.
        let scale = c.powf(gamma - 1.0);
        let inv = 1.0 / c;
        for (k, slot) in m.iter_mut().enumerate() {
            let mut coeff = 1.0;
            let mut cpow = 1.0;
            let mut acc = 0.0;
            for j in 0..64 {
                if (k + j) % 2 == 0 {
                    let term = coeff * cpow * 2.0 / (k + j + 1) as f64;
                    acc += term;
                    if term < 1e-18 * acc {
                        break;
                    }
                }
                coeff *= (j as f64 + 1.0 - gamma) / (j as f64 + 1.0);
                cpow *= inv;
            }
            *slot = scale * acc;
        }
    }
    m
}

// Interpolatory weights: solve sum_j w_j u_j^k = M_k by Gaussian elimination
// with partial pivoting. n <= 9 on Chebyshev-Lobatto nodes is comfortably
// conditioned; the k = 0 and k = 1 rows pin the constant and linear moments
// regardless of any high-order moment error.
fn interpolatory_weights(nodes: &[f64], moments: &[f64]) -> [f64; 9] {
    let n = nodes.len();
    debug_assert!(n <= 9 && moments.len() >= n);
    let mut a = [[0.0f64; 10]; 9];
    for k in 0..n {
        for j in 0..n {
            a[k][j] = nodes[j].powi(k as i32);
        }
        a[k][n] = moments[k];
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let lead = a[col];
        for row in a.iter_mut().take(n).skip(col + 1) {
            let f = row[col] / lead[col];
            for (x, l) in row[col..=n].iter_mut().zip(&lead[col..=n]) {
                *x -= f * l;
            }
        }
    }
    let mut w = [0.0f64; 9];
    for row in (0..n).rev() {
        let mut s = a[row][n];
        for j in row + 1..n {
            s -= a[row][j] * w[j];
        }
        w[row] = s / a[row][row];
    }
    w
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

struct ByErr(Panel);

impl PartialEq for ByErr {
    fn eq(&self, other: &Self) -> bool {
        self.0.err == other.0.err
    }
}
impl Eq for ByErr {}
impl PartialOrd for ByErr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByErr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.err.total_cmp(&other.0.err)
    }
}

fn eval_panel<F: FnMut(f64) -> f64>(h: &mut F, gamma: f64, s: f64, a: f64, b: f64) -> Panel {
    let mid = 0.5 * (a + b);
    let rho = 0.5 * (b - a);
    let cp1 = (s - a) / rho;
    let cm1 = ((s - b) / rho).max(0.0);
    let moments = weight_moments(gamma, cp1, cm1);
    let w9 = interpolatory_weights(&CL9, &moments);
    let w5 = interpolatory_weights(&CL5, &moments[..5]);
    let mut hv = [0.0f64; 9];
    for (v, &u) in hv.iter_mut().zip(CL9.iter()) {
        *v = h(mid + rho * u);
    }
    let scale = rho.powf(gamma);
    let i9: f64 = scale * w9.iter().zip(&hv).map(|(w, v)| w * v).sum::<f64>();
    let i5: f64 = scale
        * CL5_IN_CL9
            .iter()
            .zip(&w5)
            .map(|(&j, w)| w * hv[j])
            .sum::<f64>();
    Panel {
        a,
        b,
        value: i9,
        err: (i9 - i5).abs(),
    }
}

struct Quadrature {
    value: f64,
    error: f64,
    nodes: usize,
    terminal_value: f64,
}

// Adaptive core for int_0^d (s - x)^{gamma-1} h(x) dx, d <= s: initial
// dyadic mesh graded toward d, then worst-panel bisection until the summed
// error estimate drops below tol relative to the summed panel magnitudes.
fn weighted_singular<F: FnMut(f64) -> f64>(
    mut h: F,
    gamma: f64,
    d: f64,
    s: f64,
    tol: f64,
) -> Result<Quadrature, FracError> {
    let k = ((d / ((1.0 - d) * GRADING_FRACTION)).log2().ceil()).clamp(2.0, 48.0) as i32;
    let mut cuts = Vec::with_capacity(k as usize + 2);
    cuts.push(0.0);
    for j in 1..=k {
        cuts.push(d * (1.0 - 0.5f64.powi(j)));
    }
    cuts.push(d);

    let mut nodes = 0usize;
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for w in cuts.windows(2) {
        let p = eval_panel(&mut h, gamma, s, w[0], w[1]);
        nodes += 9;
        total_err += p.err;
        total_abs += p.value.abs();
        heap.push(ByErr(p));
    }

    let mut splits = 0usize;
    while total_err > tol * total_abs.max(1e-300) && splits < MAX_SPLITS {
        let worst = heap.pop().expect("mesh always has panels").0;
        if worst.b - worst.a <= 1e-15 * d {
            heap.push(ByErr(worst));
            break;
        }
        total_err -= worst.err;
        total_abs -= worst.value.abs();
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let p = eval_panel(&mut h, gamma, s, a, b);
            nodes += 9;
            total_err += p.err;
            total_abs += p.value.abs();
            heap.push(ByErr(p));
        }
        splits += 1;
    }

    let mut value = NeumaierSum::new();
    let mut error = NeumaierSum::new();
    let mut magnitude = NeumaierSum::new();
    let mut terminal_value = 0.0;
    for ByErr(p) in heap.iter() {
        value.add(p.value);
        error.add(p.err);
        magnitude.add(p.value.abs());
        if p.b == d {
            terminal_value = p.value;
        }
    }
    let out = Quadrature {
        value: value.value(),
        error: error.value(),
        nodes,
        terminal_value,
    };
    if out.error > tol * magnitude.value().max(1e-300) {
        return Err(FracError::Nonconvergent {
            value: out.value,
            error_estimate: out.error,
            nodes_used: out.nodes,
        });
    }
    Ok(out)
}

/// D^{-gamma} h(r) = (1/Gamma(gamma)) int_0^r (r - x)^{gamma-1} h(x) dx for
/// gamma in (0, 1]; gamma = 1 is plain integration, gamma = 0 (the identity)
/// is the caller's convention and rejected here.
pub fn rl_integral<F: FnMut(f64) -> f64>(
    h: F,
    gamma: f64,
    r: f64,
    tol: f64,
) -> Result<FracResult, FracError> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(FracError::InvalidGamma { gamma });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(FracError::InvalidRadius { r });
    }
    if !(tol > 0.0) {
        return Err(FracError::InvalidTolerance { tol });
    }
    let norm = gamma_fn(gamma);
    match weighted_singular(h, gamma, r, r, tol) {
        Ok(q) => Ok(FracResult {
            value: q.value / norm,
            quadrature_error_estimate: q.error / norm,
            nodes_used: q.nodes,
        }),
        Err(FracError::Nonconvergent {
            value,
            error_estimate,
            nodes_used,
        }) => Err(FracError::Nonconvergent {
            value: value / norm,
            error_estimate: error_estimate / norm,
            nodes_used,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SupOptions {
    /// Chebyshev-spaced angles across the Stolz aperture per radius level.
    pub grid_angles: usize,
    /// Also probe the point of the level circle with arg(1 - z e^{-i theta0})
    /// = pi/4, when it exists (needs r^2 >= 1/2 and sigma >= sqrt 2).
    pub include_quarter_ray: bool,
    pub tol: f64,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self {
            grid_angles: 65,
            include_quarter_ray: true,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LevelSupremum {
    pub radius: f64,
    pub supremum: f64,
    pub grid_failures: usize,
    pub grid_points: usize,
}

/// Ray angles probed at radius r inside the region: Chebyshev-spaced across
/// the aperture (clustering at its edges), the radial direction, and the
/// pi/4 point when requested. Candidates that fall outside the region
/// (truncation, rim rounding) are dropped.
pub fn stolz_grid(region: &StolzRegion, r: f64, opts: &SupOptions) -> Vec<f64> {
    let theta0 = region.vertex.theta();
    let mut rays = Vec::with_capacity(opts.grid_angles + 3);
    // |1 - r e^{it}|^2 = (1-r)^2 + 4 r sin^2(t/2) <= sigma^2 (1-r)^2 bounds
    // the angular offset t.
    let s2 = (region.sigma * region.sigma - 1.0) * (1.0 - r) * (1.0 - r) / (4.0 * r);
    let half = if s2 >= 1.0 { PI } else { 2.0 * s2.sqrt().asin() };
    if opts.grid_angles > 1 {
        for i in 0..opts.grid_angles {
            let u = (PI * i as f64 / (opts.grid_angles - 1) as f64).cos();
            rays.push(theta0 + half * u);
        }
    }
    rays.push(theta0);
    if opts.include_quarter_ray && r * r >= 0.5 {
        let rho = (SQRT_2 - (4.0 * r * r - 2.0).sqrt()) / 2.0;
        let w = Complex::new(1.0, 0.0) - Complex::from_polar(rho, FRAC_PI_4);
        rays.push(theta0 + w.arg());
    }
    rays.retain(|&phi| {
        DiskPoint::new(Complex::from_polar(r, phi))
            .map(|zp| region.contains(zp))
            .unwrap_or(false)
    });
    rays
}

/// Per-radius maxima of |D^{-gamma} arg f| over the grid, the fractional
/// integral taken along the ray through each grid point. Rays passing
/// through a branch cut are skipped and counted, as are grid points whose
/// quadrature fails; gamma = 0 means raw |arg f| at the grid point.
///
/// A finite grid only lower-bounds the supremum over the region; the counts
/// in the result say how much of the grid actually contributed.
pub fn sup_frac_arg(
    spec: &BoundedFunctionSpec,
    region: &StolzRegion,
    gamma: f64,
    radii: &[f64],
    opts: &SupOptions,
) -> Result<Vec<LevelSupremum>, FracError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(FracError::InvalidGamma { gamma });
    }
    if spec.zeros.tail() != Tail::None {
        return Err(FracError::UnmaterializedTail);
    }
    if let Some(&bad) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(FracError::InvalidRadius { r: bad });
    }
    if let Some(w) = radii.windows(2).find(|w| w[0] >= w[1]) {
        return Err(FracError::InvalidRadius { r: w[1] });
    }
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let rays = stolz_grid(region, r, opts);
        let grid_points = rays.len();
        let mut grid_failures = 0usize;
        let mut supremum = 0.0f64;
        for &phi in &rays {
            let outer = DiskPoint::new(Complex::from_polar(r, phi)).expect("r < 1");
            if spec.zeros.cuts().contains(outer) {
                grid_failures += 1;
                continue;
            }
            let value = if gamma == 0.0 {
                herglotz::arg_f(spec, outer.value())
            } else {
                let along_ray = |x: f64| {
                    if x == 0.0 {
                        // Ray limit at the origin: arg z^p -> p phi, which
                        // the principal value at the point 0 drops.
                        return herglotz::arg_f(spec, Complex::new(0.0, 0.0))
                            + spec.origin_order as f64 * phi;
                    }
                    herglotz::arg_f(spec, Complex::from_polar(x, phi))
                };
                match rl_integral(along_ray, gamma, r, opts.tol) {
                    Ok(res) => res.value,
                    Err(FracError::Nonconvergent { .. }) => {
                        grid_failures += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            };
            supremum = supremum.max(value.abs());
        }
        out.push(LevelSupremum {
            radius: r,
            supremum,
            grid_failures,
            grid_points,
        });
    }
    Ok(out)
}

/// D^{-gamma}|1 - x zeta|^{-alpha}(r) scaled by |1 - r zeta|^{alpha-gamma}:
/// boundedness of this ratio as r -> 1 is the kernel estimate callers probe
/// empirically. gamma = 0 follows the identity convention and the ratio is 1
/// up to rounding.
pub fn kernel_bound_ratio(
    zeta: Complex,
    alpha: f64,
    gamma: f64,
    r: f64,
    tol: f64,
) -> Result<f64, FracError> {
    if !((0.0..=1.0).contains(&gamma) && gamma < alpha) {
        return Err(FracError::InvalidGamma { gamma });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(FracError::InvalidRadius { r });
    }
    debug_assert!(zeta.norm() <= 1.0 + 1e-12);
    let one = Complex::new(1.0, 0.0);
    let tail_scale = (one - r * zeta).norm().powf(alpha - gamma);
    if gamma == 0.0 {
        return Ok((one - r * zeta).norm().powf(-alpha) * tail_scale);
    }
    let res = rl_integral(|x| (one - x * zeta).norm().powf(-alpha), gamma, r, tol)?;
    Ok(res.value * tail_scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceClass {
    pub value: f64,
    pub quadrature_error_estimate: f64,
    pub nodes_used: usize,
    /// Share of the value carried by the panel ending at r_max; close to 1
    /// means the truncation dominates and the r_max -> 1 limit is unattested.
    pub last_panel_fraction: f64,
}

/// int_0^{r_max} (1 - x)^{gamma-1} |arg f(x)| dx along the positive real
/// radius, the weight integrated exactly per panel (its singular point 1
/// lies beyond r_max, so the integrand is finite but steep).
pub fn convergence_class_integral(
    spec: &BoundedFunctionSpec,
    gamma: f64,
    r_max: f64,
    tol: f64,
) -> Result<ConvergenceClass, FracError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(FracError::InvalidGamma { gamma });
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(FracError::InvalidRadius { r: r_max });
    }
    if spec.zeros.tail() != Tail::None {
        return Err(FracError::UnmaterializedTail);
    }
    let outer = DiskPoint::new(Complex::new(r_max, 0.0)).expect("r_max < 1");
    if spec.zeros.cuts().contains(outer) {
        return Err(FracError::RayOnCut);
    }
    let q = weighted_singular(
        |x| herglotz::arg_f(spec, Complex::new(x, 0.0)).abs(),
        gamma,
        r_max,
        1.0,
        tol,
    )?;
    let last_panel_fraction = if q.value == 0.0 {
        0.0
    } else {
        (q.terminal_value / q.value).abs()
    };
    Ok(ConvergenceClass {
        value: q.value,
        quadrature_error_estimate: q.error,
        nodes_used: q.nodes,
        last_panel_fraction,
    })
}

//! Blaschke factors and products: factor logarithms summed in stored order
//! give a continuous argument branch on the slit disk (the disk minus the
//! radial cut drawn outward from each zero).
//!
//! Off the cuts no factor touches the negative real axis, so the principal
//! argument of each factor already is the continuous branch and the sum needs
//! no unwinding. On a cut the factor is real negative and its argument is
//! pinned to -pi, the semicontinuous choice.

use crate::geometry::{BoundaryPoint, DiskPoint};
use crate::kahan::{ComplexSum, NeumaierSum};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BlaschkeError {
    #[error("zero {index} has modulus {modulus} outside (0,1)")]
    InvalidZero { index: usize, modulus: f64 },
    #[error("invalid tail descriptor: {reason}")]
    InvalidTail { reason: &'static str },
    #[error("evaluation point coincides with a zero of the product")]
    AtZero,
    #[error("certified tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBoundExceeded { bound: f64, tol: f64 },
    #[error("cannot append zeros after a tail descriptor; its gap law anchors to the last stored zero")]
    ConcatAfterTail,
}

/// Analytic continuation of a zero sequence past its materialized prefix.
///
/// The descriptor prescribes the boundary gaps 1-|a_n| of the zeros that are
/// not listed explicitly: `Geometric` continues with gaps `g_last * param^k`,
/// `Power` with gaps `(n0+k)^-param` where `n0` is the materialized count.
/// `count` says how many tail zeros to materialize on request; mass
/// bookkeeping always covers the whole infinite tail in closed form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tail {
    #[default]
    None,
    Geometric { param: f64, count: usize },
    Power { param: f64, count: usize },
}

/// Ordered zeros a_n with 0 < |a_n| < 1, plus an optional tail descriptor.
///
/// The order is part of the value: sums over factors run in stored order so
/// results are reproducible and finite-sum identities hold exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZeroSequenceWire", into = "ZeroSequenceWire")]
pub struct ZeroSequence {
    zeros: Vec<Complex>,
    tail: Tail,
}

#[derive(Serialize, Deserialize)]
struct ZeroSequenceWire {
    zeros: Vec<[f64; 2]>,
    #[serde(default)]
    tail: Tail,
}

impl TryFrom<ZeroSequenceWire> for ZeroSequence {
    type Error = BlaschkeError;

    fn try_from(wire: ZeroSequenceWire) -> Result<Self, BlaschkeError> {
        let zeros = wire
            .zeros
            .into_iter()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        ZeroSequence::new(zeros, wire.tail)
    }
}

impl From<ZeroSequence> for ZeroSequenceWire {
    fn from(zs: ZeroSequence) -> Self {
        ZeroSequenceWire {
            zeros: zs.zeros.iter().map(|a| [a.re, a.im]).collect(),
            tail: zs.tail,
        }
    }
}

impl ZeroSequence {
    pub fn new(zeros: Vec<Complex>, tail: Tail) -> Result<Self, BlaschkeError> {
        for (index, a) in zeros.iter().enumerate() {
            let modulus = a.norm();
            if !(modulus > 0.0 && modulus < 1.0) {
                return Err(BlaschkeError::InvalidZero { index, modulus });
            }
        }
        match tail {
            Tail::None => {}
            Tail::Geometric { param, .. } => {
                if !(param > 0.0 && param < 1.0) {
                    return Err(BlaschkeError::InvalidTail {
                        reason: "geometric ratio must lie in (0,1)",
                    });
                }
                if zeros.is_empty() {
                    return Err(BlaschkeError::InvalidTail {
                        reason: "a tail needs at least one stored zero to anchor its gaps",
                    });
                }
            }
            Tail::Power { param, .. } => {
                if !(param > 1.0) {
                    return Err(BlaschkeError::InvalidTail {
                        reason: "power exponent must exceed 1 for a finite Blaschke sum",
                    });
                }
                if zeros.is_empty() {
                    return Err(BlaschkeError::InvalidTail {
                        reason: "a tail needs at least one stored zero to anchor its gaps",
                    });
                }
            }
        }
        Ok(Self { zeros, tail })
    }

    pub fn finite(zeros: Vec<Complex>) -> Result<Self, BlaschkeError> {
        Self::new(zeros, Tail::None)
    }

    #[inline]
    pub fn zeros(&self) -> &[Complex] {
        &self.zeros
    }

    #[inline]
    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn cuts(&self) -> CutSet<'_> {
        CutSet { zeros: &self.zeros }
    }

    /// Gap 1-|a| of the last stored zero; the anchor of every tail law.
    fn last_gap(&self) -> f64 {
        1.0 - self.zeros.last().expect("tail validated non-empty").norm()
    }

    /// First un-materialized gap, if there is a tail at all.
    fn first_tail_gap(&self) -> Option<f64> {
        match self.tail {
            Tail::None => None,
            Tail::Geometric { param, .. } => Some(self.last_gap() * param),
            Tail::Power { param, .. } => Some(((self.zeros.len() + 1) as f64).powf(-param)),
        }
    }

    /// Total gap mass of the un-materialized tail, in closed form.
    pub fn tail_mass(&self) -> f64 {
        match self.tail {
            Tail::None => 0.0,
            Tail::Geometric { param, .. } => self.last_gap() * param / (1.0 - param),
            Tail::Power { param, .. } => p_series_tail(param, self.zeros.len()),
        }
    }

    /// Sum of gap^gamma over the un-materialized tail.
    ///
    /// This is the radial worst case of a Frostman-type sum: for zeros lying
    /// on the ray toward the test point, the chordal distance equals the gap.
    /// Divergent tails report +inf.
    pub fn tail_gap_power_sum(&self, gamma: f64) -> f64 {
        match self.tail {
            Tail::None => 0.0,
            Tail::Geometric { param, .. } => {
                if gamma <= 0.0 {
                    return f64::INFINITY;
                }
                let ratio = param.powf(gamma);
                self.last_gap().powf(gamma) * ratio / (1.0 - ratio)
            }
            Tail::Power { param, .. } => {
                let exponent = param * gamma;
                if exponent <= 1.0 {
                    f64::INFINITY
                } else {
                    p_series_tail(exponent, self.zeros.len())
                }
            }
        }
    }

    /// Appends `count` tail zeros along the ray toward `direction` and
    /// rebinds the descriptor so the remaining tail continues the same gap
    /// law. Blaschke mass is conserved up to rounding.
    pub fn materialize_tail(&self, direction: BoundaryPoint) -> Self {
        let theta = direction.theta();
        let mut zeros = self.zeros.clone();
        let tail = match self.tail {
            Tail::None => Tail::None,
            Tail::Geometric { param, count } => {
                let mut gap = self.last_gap();
                for _ in 0..count {
                    gap *= param;
                    zeros.push(Complex::from_polar(1.0 - gap, theta));
                }
                Tail::Geometric { param, count: 0 }
            }
            Tail::Power { param, count } => {
                let n0 = zeros.len();
                for k in 1..=count {
                    let gap = ((n0 + k) as f64).powf(-param);
                    zeros.push(Complex::from_polar(1.0 - gap, theta));
                }
                Tail::Power { param, count: 0 }
            }
        };
        Self { zeros, tail }
    }

    /// Concatenates in stored order. The left operand must be tail-free:
    /// appending zeros after a tail would silently change its gap law.
    pub fn concat(&self, other: &Self) -> Result<Self, BlaschkeError> {
        if self.tail != Tail::None {
            return Err(BlaschkeError::ConcatAfterTail);
        }
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        Ok(Self {
            zeros,
            tail: other.tail,
        })
    }
}

/// View of the radial cuts l_n = {tau a_n : tau >= 1} inside the disk.
#[derive(Debug, Clone, Copy)]
pub struct CutSet<'a> {
    zeros: &'a [Complex],
}

impl CutSet<'_> {
    /// Number of cuts passing through z.
    pub fn multiplicity(&self, z: DiskPoint) -> usize {
        let zv = z.value();
        self.zeros.iter().filter(|a| on_cut_value(zv, **a)).count()
    }

    pub fn contains(&self, z: DiskPoint) -> bool {
        let zv = z.value();
        self.zeros.iter().any(|a| on_cut_value(zv, *a))
    }
}

/// Angular half-width of a cut; directions closer than this count as the
/// same ray.
const CUT_ANGLE_TOL: f64 = 1e-12;

#[inline]
fn on_cut_value(z: Complex, xi: Complex) -> bool {
    // z = tau*xi, tau >= 1 means: same direction (positive dot, vanishing
    // cross) and |z| >= |xi|. |sin(angle)| = |cross|/(|z||xi|), compared
    // squared so the per-factor hot path stays free of square roots.
    let cross = z.re * xi.im - z.im * xi.re;
    let dot = z.re * xi.re + z.im * xi.im;
    dot > 0.0
        && z.norm_sqr() >= xi.norm_sqr()
        && cross * cross <= CUT_ANGLE_TOL * CUT_ANGLE_TOL * z.norm_sqr() * xi.norm_sqr()
}

/// True iff z lies on the cut drawn from xi radially out to the boundary,
/// within angular tolerance 1e-12.
pub fn on_cut(z: DiskPoint, xi: Complex) -> bool {
    on_cut_value(z.value(), xi)
}

/// The Blaschke factor b(z, xi) = conj(xi) (xi - z) / (1 - z conj(xi)),
/// normalized so b(0, xi) = |xi|^2 > 0. |b(z, xi)| <= |xi|, with equality
/// only at z = 0.
pub fn factor(z: DiskPoint, xi: Complex) -> Complex {
    let zv = z.value();
    xi.conj() * (xi - zv) / (1.0 - zv * xi.conj())
}

/// Argument of one factor on the branch continuous off the cut.
///
/// The factor is real negative exactly on the cut, so off it the principal
/// value is the continuous branch; on it the value is the semicontinuous -pi.
pub fn factor_arg(z: DiskPoint, xi: Complex) -> Result<f64, BlaschkeError> {
    let zv = z.value();
    if zv == xi {
        return Err(BlaschkeError::AtZero);
    }
    if on_cut_value(zv, xi) {
        return Ok(-PI);
    }
    let num = xi.conj() * (xi - zv);
    let den = 1.0 - zv * xi.conj();
    // arg(num/den) = arg(num * conj(den)); skips the complex division.
    let w = num * den.conj();
    Ok(w.im.atan2(w.re))
}

/// Sum of factor logarithms over the stored zeros plus a certified bound on
/// everything the tail descriptor left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductLog {
    /// Compensated sum of log|b| + i arg b in stored order.
    pub value: Complex,
    /// Certified bound on the modulus of the neglected tail sum.
    pub tail_bound: f64,
    /// Number of cuts through the evaluation point. Nonzero means the
    /// argument took the semicontinuous -pi choice there, not a limit
    /// through the slit disk.
    pub cut_multiplicity: usize,
}

impl ProductLog {
    pub fn on_cut(&self) -> bool {
        self.cut_multiplicity > 0
    }

    pub fn arg(&self) -> f64 {
        self.value.im
    }
}

pub fn product_log(
    zs: &ZeroSequence,
    z: DiskPoint,
    tol: f64,
) -> Result<ProductLog, BlaschkeError> {
    let zv = z.value();
    let mut acc = ComplexSum::new();
    let mut cut_multiplicity = 0usize;
    for &a in zs.zeros() {
        let diff = a - zv;
        if diff.re == 0.0 && diff.im == 0.0 {
            return Err(BlaschkeError::AtZero);
        }
        let num = a.conj() * diff;
        let den = 1.0 - zv * a.conj();
        let re = 0.5 * (num.norm_sqr().ln() - den.norm_sqr().ln());
        let im = if on_cut_value(zv, a) {
            cut_multiplicity += 1;
            -PI
        } else {
            let w = num * den.conj();
            w.im.atan2(w.re)
        };
        acc.add(Complex::new(re, im));
    }
    let tail_bound = tail_log_bound(zs, z);
    if !(tail_bound <= tol) {
        return Err(BlaschkeError::TailBoundExceeded {
            bound: tail_bound,
            tol,
        });
    }
    Ok(ProductLog {
        value: acc.value(),
        tail_bound,
        cut_multiplicity,
    })
}

// Per tail factor with gap g = 1-|a|: |A(z,a)| <= 2g/(1-|z|), and once that
// is <= 1/2 both |arg b| <= pi |A| and -log|b| <= 2|A| apply, so
// |log b| <= (pi+2)|A|. Gaps decrease along both tail laws, so certifying
// the first gap certifies them all.
fn tail_log_bound(zs: &ZeroSequence, z: DiskPoint) -> f64 {
    let Some(first_gap) = zs.first_tail_gap() else {
        return 0.0;
    };
    let reach = 1.0 - z.abs();
    if first_gap > 0.25 * reach {
        return f64::INFINITY;
    }
    (PI + 2.0) * 2.0 * zs.tail_mass() / reach
}

/// Value of the product itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductValue {
    pub value: Complex,
    /// True when z hit a stored zero; the value 0 is then exact.
    pub at_zero: bool,
    pub tail_bound: f64,
    pub cut_multiplicity: usize,
}

/// Evaluates the product. `normalized` divides each factor by |a_n| (the
/// convergent normalization whose factors tend to 1); either way |B(z)| < 1.
pub fn product_eval(
    zs: &ZeroSequence,
    z: DiskPoint,
    tol: f64,
    normalized: bool,
) -> Result<ProductValue, BlaschkeError> {
    match product_log(zs, z, tol) {
        Ok(pl) => {
            let mut log_value = pl.value;
            if normalized {
                let mut shift = NeumaierSum::new();
                for &a in zs.zeros() {
                    shift.add(0.5 * a.norm_sqr().ln());
                }
                log_value.re -= shift.value();
            }
            Ok(ProductValue {
                value: log_value.exp(),
                at_zero: false,
                tail_bound: pl.tail_bound,
                cut_multiplicity: pl.cut_multiplicity,
            })
        }
        Err(BlaschkeError::AtZero) => Ok(ProductValue {
            value: Complex::new(0.0, 0.0),
            at_zero: true,
            tail_bound: 0.0,
            cut_multiplicity: zs.cuts().multiplicity(z),
        }),
        Err(e) => Err(e),
    }
}

/// Sum of gaps 1-|a_n| over stored zeros plus the closed-form tail mass.
pub fn blaschke_sum(zs: &ZeroSequence) -> f64 {
    let mut acc = NeumaierSum::new();
    for &a in zs.zeros() {
        acc.add(1.0 - a.norm());
    }
    acc.value() + zs.tail_mass()
}

/// Argument of the product as a bare compensated sum of principal factor
/// arguments.
///
/// Fast path for sweep grids that already excluded cuts and zeros; the caller
/// must guarantee z lies off every cut and coincides with no zero, otherwise
/// the branch choice here is wrong without warning.
pub fn arg_sum_unchecked(zeros: &[Complex], z: Complex) -> f64 {
    let mut acc = NeumaierSum::new();
    for &a in zeros {
        let num = a.conj() * (a - z);
        let den = 1.0 - z * a.conj();
        let w = num * den.conj();
        acc.add(w.im.atan2(w.re));
    }
    acc.value()
}

/// Tail of the p-series: sum of k^-beta over k > n0, for beta > 1.
///
/// Sums explicitly up to k = 64, then switches to Euler-Maclaurin with
/// corrections through the fifth derivative; past that index the first
/// omitted term stays below 1e-13 relative for exponents up to ~8.
pub(crate) fn p_series_tail(beta: f64, n0: usize) -> f64 {
    debug_assert!(beta > 1.0);
    let mut head = NeumaierSum::new();
    let mut n = n0;
    while n < 64 {
        n += 1;
        head.add((n as f64).powf(-beta));
    }
    let start = (n + 1) as f64;
    let em = start.powf(1.0 - beta) / (beta - 1.0)
        + 0.5 * start.powf(-beta)
        + beta * start.powf(-beta - 1.0) / 12.0
        - beta * (beta + 1.0) * (beta + 2.0) * start.powf(-beta - 3.0) / 720.0
        + beta * (beta + 1.0) * (beta + 2.0) * (beta + 3.0) * (beta + 4.0)
            * start.powf(-beta - 5.0)
            / 30240.0;
    head.value() + em
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::a_kernel;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn finite(zeros: &[(f64, f64)]) -> ZeroSequence {
        ZeroSequence::finite(zeros.iter().map(|&(re, im)| c(re, im)).collect()).unwrap()
    }

    fn sample_disk(rng: &mut ChaCha8Rng) -> Complex {
        loop {
            let x = 2.0 * rng.gen::<f64>() - 1.0;
            let y = 2.0 * rng.gen::<f64>() - 1.0;
            if x * x + y * y < 1.0 {
                return c(x, y);
            }
        }
    }

    #[test]
    fn factor_at_origin_is_modulus_squared() {
        assert_eq!(factor(dp(0.0, 0.0), c(0.5, 0.0)), c(0.25, 0.0));
    }

    #[test]
    fn factor_vanishes_at_its_own_zero() {
        assert_eq!(factor(dp(0.5, 0.3), c(0.5, 0.3)), c(0.0, 0.0));
    }

    #[test]
    fn factor_hand_value() {
        let b = factor(dp(0.0, 0.5), c(0.5, 0.0));
        assert_abs_diff_eq!(b.re, 0.2941176, epsilon = 1e-7);
        assert_abs_diff_eq!(b.im, -0.1764706, epsilon = 1e-7);
    }

    #[test]
    fn factor_modulus_below_zero_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let z = sample_disk(&mut rng);
            let xi = sample_disk(&mut rng);
            if xi.norm() < 1e-3 || z.norm() < 1e-6 {
                continue;
            }
            let b = factor(DiskPoint::new(z).unwrap(), xi);
            assert!(b.norm() < xi.norm());
        }
    }

    #[test]
    fn factor_arg_at_origin_is_exactly_zero() {
        assert_eq!(factor_arg(dp(0.0, 0.0), c(0.3, 0.4)).unwrap(), 0.0);
    }

    #[test]
    fn factor_arg_on_cut_is_minus_pi() {
        // tau = (1 + 1/|xi|)/2 = 1.5 puts z = 0.75 midway along the cut of 0.5.
        assert_eq!(factor_arg(dp(0.75, 0.0), c(0.5, 0.0)).unwrap(), -PI);
    }

    #[test]
    fn factor_arg_hand_value() {
        let phi = factor_arg(dp(0.0, 0.5), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(phi, -0.5404195, epsilon = 1e-7);
    }

    #[test]
    fn factor_arg_errors_at_the_zero() {
        assert_eq!(
            factor_arg(dp(0.5, 0.3), c(0.5, 0.3)),
            Err(BlaschkeError::AtZero)
        );
    }

    #[test]
    fn argument_bound_by_pi_min_one_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100_000 {
            let z = sample_disk(&mut rng);
            let xi = sample_disk(&mut rng);
            if xi.norm() < 1e-6 || z == xi {
                continue;
            }
            let zp = DiskPoint::new(z).unwrap();
            let phi = factor_arg(zp, xi).unwrap();
            let bound = PI * a_kernel(z, xi).norm().min(1.0) + 1e-12;
            assert!(
                phi.abs() <= bound,
                "arg {phi} exceeds bound {bound} at z={z}, xi={xi}"
            );
        }
    }

    #[test]
    fn on_cut_examples() {
        let xi = c(0.5, 0.3);
        assert!(on_cut(DiskPoint::new(xi).unwrap(), xi));
        assert!(!on_cut(dp(0.0, 0.0), xi));
        assert!(on_cut(DiskPoint::new(1.2 * xi).unwrap(), xi));
        assert!(!on_cut(DiskPoint::new(0.5 * xi).unwrap(), xi));
        let rotated = 1.2 * xi * Complex::from_polar(1.0, 1e-6);
        assert!(!on_cut(DiskPoint::new(rotated).unwrap(), xi));
    }

    #[test]
    fn product_log_empty_is_zero() {
        let zs = finite(&[]);
        let pl = product_log(&zs, dp(0.3, -0.2), 0.0).unwrap();
        assert_eq!(pl.value, c(0.0, 0.0));
        assert_eq!(pl.tail_bound, 0.0);
        assert_eq!(pl.cut_multiplicity, 0);
    }

    #[test]
    fn product_log_at_origin_has_exactly_zero_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zeros: Vec<Complex> = (0..50)
            .map(|_| {
                let r = 0.1 + 0.85 * rng.gen::<f64>();
                Complex::from_polar(r, 2.0 * PI * rng.gen::<f64>())
            })
            .collect();
        let mut log_mod = 0.0;
        for a in &zeros {
            log_mod += a.norm_sqr().ln();
        }
        let zs = ZeroSequence::finite(zeros).unwrap();
        let pl = product_log(&zs, dp(0.0, 0.0), 0.0).unwrap();
        assert_eq!(pl.value.im, 0.0);
        assert_relative_eq!(pl.value.re, log_mod, max_relative = 1e-13);
    }

    #[test]
    fn product_log_single_zero_matches_factor_log() {
        let zs = finite(&[(0.5, 0.0)]);
        let z = dp(0.0, 0.5);
        let pl = product_log(&zs, z, 0.0).unwrap();
        let direct = factor(z, c(0.5, 0.0)).ln();
        assert_abs_diff_eq!(pl.value.re, direct.re, epsilon = 1e-13);
        assert_abs_diff_eq!(pl.value.im, direct.im, epsilon = 1e-13);
        assert_abs_diff_eq!(pl.value.re, -1.0700, epsilon = 1e-4);
        assert_abs_diff_eq!(pl.value.im, -0.5404195, epsilon = 1e-7);
    }

    #[test]
    fn product_log_additivity_is_exact() {
        let left = finite(&[(0.3, 0.1), (-0.5, 0.0)]);
        let right = finite(&[(0.2, -0.7)]);
        let z = dp(0.1, 0.2);
        let sum = product_log(&left.concat(&right).unwrap(), z, 0.0).unwrap();
        let a = product_log(&left, z, 0.0).unwrap();
        let b = product_log(&right, z, 0.0).unwrap();
        assert_eq!(sum.value, a.value + b.value);
    }

    #[test]
    fn product_log_counts_cut_crossings() {
        let zs = finite(&[(0.5, 0.0), (0.0, 0.3)]);
        let on_first_cut = product_log(&zs, dp(0.75, 0.0), 0.0).unwrap();
        assert_eq!(on_first_cut.cut_multiplicity, 1);
        assert!(on_first_cut.on_cut());
        let off = product_log(&zs, dp(0.2, -0.4), 0.0).unwrap();
        assert_eq!(off.cut_multiplicity, 0);
    }

    #[test]
    fn product_log_errors_at_a_zero() {
        let zs = finite(&[(0.5, 0.0)]);
        assert_eq!(
            product_log(&zs, dp(0.5, 0.0), 0.0),
            Err(BlaschkeError::AtZero)
        );
    }

    #[test]
    fn tail_bound_is_certified_or_refused() {
        let zeros: Vec<Complex> = (1..=20)
            .map(|k| c(1.0 - 0.5f64.powi(k), 0.0))
            .collect();
        let zs = ZeroSequence::new(
            zeros,
            Tail::Geometric {
                param: 0.5,
                count: 0,
            },
        )
        .unwrap();
        let pl = product_log(&zs, dp(0.0, 0.3), 1e-3).unwrap();
        assert!(pl.tail_bound > 0.0 && pl.tail_bound < 2e-5);

        match product_log(&zs, dp(0.0, 0.3), 1e-9) {
            Err(BlaschkeError::TailBoundExceeded { bound, tol }) => {
                assert!(bound.is_finite() && bound > tol);
            }
            other => panic!("expected tail refusal, got {other:?}"),
        }

        // First tail gap 0.25 dwarfs 1-|z| = 0.1: no finite bound exists.
        let coarse = ZeroSequence::new(
            vec![c(0.5, 0.0)],
            Tail::Geometric {
                param: 0.5,
                count: 0,
            },
        )
        .unwrap();
        match product_log(&coarse, dp(0.0, 0.9), 1e6) {
            Err(BlaschkeError::TailBoundExceeded { bound, .. }) => {
                assert!(bound.is_infinite());
            }
            other => panic!("expected infinite bound, got {other:?}"),
        }
    }

    #[test]
    fn product_eval_examples() {
        let empty = finite(&[]);
        let one = product_eval(&empty, dp(0.2, 0.2), 0.0, false).unwrap();
        assert_eq!(one.value, c(1.0, 0.0));
        assert!(!one.at_zero);

        let zs = finite(&[(0.5, 0.0), (0.8, 0.0)]);
        let origin = dp(0.0, 0.0);
        let raw = product_eval(&zs, origin, 0.0, false).unwrap();
        assert_relative_eq!(raw.value.re, 0.16, max_relative = 1e-14);
        assert_abs_diff_eq!(raw.value.im, 0.0, epsilon = 1e-16);
        let tilde = product_eval(&zs, origin, 0.0, true).unwrap();
        assert_relative_eq!(tilde.value.re, 0.4, max_relative = 1e-14);

        let hit = product_eval(&zs, dp(0.5, 0.0), 0.0, false).unwrap();
        assert_eq!(hit.value, c(0.0, 0.0));
        assert!(hit.at_zero);
        assert!(hit.cut_multiplicity >= 1);
    }

    #[test]
    fn exp_product_log_matches_direct_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let zeros: Vec<Complex> = (0..300)
            .map(|_| {
                let r = 0.1 + 0.88 * rng.gen::<f64>();
                Complex::from_polar(r, 2.0 * PI * rng.gen::<f64>())
            })
            .collect();
        let z = dp(0.3, 0.4);
        let mut direct = c(1.0, 0.0);
        for &a in &zeros {
            direct *= factor(z, a);
        }
        let zs = ZeroSequence::finite(zeros).unwrap();
        let via_log = product_eval(&zs, z, 0.0, false).unwrap();
        assert!(
            (via_log.value - direct).norm() <= 1e-10 * direct.norm(),
            "exp(sum log) {} vs direct product {}",
            via_log.value,
            direct
        );
    }

    #[test]
    fn conjugate_closed_zeros_have_real_product_on_the_radius() {
        let zs = ZeroSequence::finite(vec![
            Complex::from_polar(0.6, 0.8),
            Complex::from_polar(0.6, -0.8),
            Complex::from_polar(0.8, 2.0),
            Complex::from_polar(0.8, -2.0),
        ])
        .unwrap();
        for &r in &[0.0, 0.1, 0.5, 0.9, 0.95] {
            let pl = product_log(&zs, dp(r, 0.0), 0.0).unwrap();
            assert!(pl.value.im.abs() <= 1e-12, "Im = {} at r = {r}", pl.value.im);
        }
        // Off the radius the argument is genuinely nonzero.
        let r = 0.9f64;
        let z = DiskPoint::new(Complex::from_polar(r, 1.0 - r)).unwrap();
        let pl = product_log(&zs, z, 0.0).unwrap();
        assert!(pl.value.im.abs() > 1e-6);
    }

    #[test]
    fn blaschke_sum_cases() {
        let ladder: Vec<Complex> = (1..=40).map(|k| c(1.0 - 0.5f64.powi(k), 0.0)).collect();
        let zs = ZeroSequence::finite(ladder).unwrap();
        assert_abs_diff_eq!(blaschke_sum(&zs), 1.0 - 0.5f64.powi(40), epsilon = 1e-15);

        assert_eq!(blaschke_sum(&finite(&[])), 0.0);
        assert_eq!(blaschke_sum(&finite(&[(0.25, 0.0)])), 0.75);

        // Gap 1/2 then geometric halving: total mass is exactly 1.
        let tailed = ZeroSequence::new(
            vec![c(0.5, 0.0)],
            Tail::Geometric {
                param: 0.5,
                count: 0,
            },
        )
        .unwrap();
        assert_eq!(blaschke_sum(&tailed), 1.0);
    }

    #[test]
    fn p_series_tail_matches_zeta_values() {
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert_relative_eq!(p_series_tail(2.0, 0), zeta2, max_relative = 1e-12);
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert_relative_eq!(p_series_tail(4.0, 0), zeta4, max_relative = 1e-12);
    }

    #[test]
    fn p_series_tail_matches_brute_force() {
        let brute: f64 = (11..200_000u64)
            .map(|k| (k as f64).powf(-4.0))
            .collect::<NeumaierSum>()
            .value();
        assert_relative_eq!(p_series_tail(4.0, 10), brute, max_relative = 1e-12);
        let brute25: f64 = (6..3_000_000u64)
            .map(|k| (k as f64).powf(-2.5))
            .collect::<NeumaierSum>()
            .value();
        assert_relative_eq!(p_series_tail(2.5, 5), brute25, max_relative = 1e-8);
    }

    #[test]
    fn tail_gap_power_sum_agrees_with_series() {
        let zs = ZeroSequence::new(
            vec![c(0.5, 0.0)],
            Tail::Geometric {
                param: 0.6,
                count: 0,
            },
        )
        .unwrap();
        let gamma = 0.3;
        let brute: f64 = (1..4000)
            .map(|k| (0.5 * 0.6f64.powi(k)).powf(gamma))
            .sum();
        assert_relative_eq!(zs.tail_gap_power_sum(gamma), brute, max_relative = 1e-10);
        assert!(zs.tail_gap_power_sum(0.0).is_infinite());

        let power = ZeroSequence::new(
            vec![c(0.5, 0.0); 3],
            Tail::Power {
                param: 3.0,
                count: 0,
            },
        )
        .unwrap();
        // beta*gamma = 0.9 <= 1 diverges; 1.5 converges.
        assert!(power.tail_gap_power_sum(0.3).is_infinite());
        assert!(power.tail_gap_power_sum(0.5).is_finite());
    }

    #[test]
    fn materialize_tail_conserves_mass() {
        let geo = ZeroSequence::new(
            vec![Complex::from_polar(0.9, 0.3)],
            Tail::Geometric {
                param: 0.5,
                count: 4,
            },
        )
        .unwrap();
        let grown = geo.materialize_tail(BoundaryPoint::new(0.3));
        assert_eq!(grown.len(), 5);
        assert_eq!(grown.tail(), Tail::Geometric { param: 0.5, count: 0 });
        assert_abs_diff_eq!(blaschke_sum(&grown), blaschke_sum(&geo), epsilon = 1e-15);
        assert_abs_diff_eq!(grown.zeros()[1].norm(), 1.0 - 0.05, epsilon = 1e-15);

        let pow = ZeroSequence::new(
            vec![c(0.3, 0.0), c(0.0, 0.5), c(-0.2, 0.1)],
            Tail::Power {
                param: 2.0,
                count: 5,
            },
        )
        .unwrap();
        let grown = pow.materialize_tail(BoundaryPoint::new(-1.0));
        assert_eq!(grown.len(), 8);
        assert_abs_diff_eq!(blaschke_sum(&grown), blaschke_sum(&pow), epsilon = 1e-15);
        // First materialized gap continues the law at index n0+1 = 4.
        assert_abs_diff_eq!(grown.zeros()[3].norm(), 1.0 - 4.0f64.powf(-2.0), epsilon = 1e-15);
    }

    #[test]
    fn arg_sum_unchecked_matches_product_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let zeros: Vec<Complex> = (0..100)
            .map(|_| Complex::from_polar(0.2 + 0.7 * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))
            .collect();
        let z = c(-0.1, 0.55);
        let zs = ZeroSequence::finite(zeros.clone()).unwrap();
        let pl = product_log(&zs, DiskPoint::new(z).unwrap(), 0.0).unwrap();
        assert_eq!(arg_sum_unchecked(&zeros, z), pl.value.im);
    }

    #[test]
    fn concat_after_tail_is_rejected() {
        let tailed = ZeroSequence::new(
            vec![c(0.5, 0.0)],
            Tail::Geometric {
                param: 0.5,
                count: 0,
            },
        )
        .unwrap();
        let more = finite(&[(0.1, 0.1)]);
        assert_eq!(
            tailed.concat(&more),
            Err(BlaschkeError::ConcatAfterTail)
        );
        // Tail on the right side is fine and is inherited.
        let joined = more.concat(&tailed).unwrap();
        assert_eq!(joined.len(), 2);
        assert_eq!(joined.tail(), Tail::Geometric { param: 0.5, count: 0 });
    }

    #[test]
    fn rejects_invalid_zeros_and_tails() {
        assert!(matches!(
            ZeroSequence::finite(vec![c(0.0, 0.0)]),
            Err(BlaschkeError::InvalidZero { index: 0, .. })
        ));
        assert!(matches!(
            ZeroSequence::finite(vec![c(0.5, 0.0), c(1.0, 0.0)]),
            Err(BlaschkeError::InvalidZero { index: 1, .. })
        ));
        assert!(matches!(
            ZeroSequence::new(vec![c(0.5, 0.0)], Tail::Geometric { param: 1.0, count: 3 }),
            Err(BlaschkeError::InvalidTail { .. })
        ));
        assert!(matches!(
            ZeroSequence::new(vec![c(0.5, 0.0)], Tail::Power { param: 1.0, count: 3 }),
            Err(BlaschkeError::InvalidTail { .. })
        ));
        assert!(matches!(
            ZeroSequence::new(vec![], Tail::Power { param: 2.0, count: 3 }),
            Err(BlaschkeError::InvalidTail { .. })
        ));
    }

    #[test]
    fn serde_wire_format_round_trips() {
        let text = r#"{"zeros":[[0.5,0.0],[0.0,0.8]],"tail":{"kind":"geometric","param":0.5,"count":16}}"#;
        let zs: ZeroSequence = serde_json::from_str(text).unwrap();
        assert_eq!(zs.len(), 2);
        assert_eq!(zs.zeros()[1], c(0.0, 0.8));
        assert_eq!(zs.tail(), Tail::Geometric { param: 0.5, count: 16 });

        let back = serde_json::to_string(&zs).unwrap();
        let again: ZeroSequence = serde_json::from_str(&back).unwrap();
        assert_eq!(again, zs);

        let no_tail: ZeroSequence = serde_json::from_str(r#"{"zeros":[[0.5,0.0]]}"#).unwrap();
        assert_eq!(no_tail.tail(), Tail::None);
        let explicit: ZeroSequence =
            serde_json::from_str(r#"{"zeros":[[0.5,0.0]],"tail":{"kind":"none"}}"#).unwrap();
        assert_eq!(explicit.tail(), Tail::None);

        assert!(serde_json::from_str::<ZeroSequence>(r#"{"zeros":[[1.5,0.0]]}"#).is_err());
        assert!(serde_json::from_str::<ZeroSequence>(
            r#"{"zeros":[],"tail":{"kind":"power","param":2.0,"count":8}}"#
        )
        .is_err());
    }
}

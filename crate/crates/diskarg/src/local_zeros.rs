//! Local zero-concentration functionals: the count and log-sum of zeros
//! inside the disk |a - z| <= h(1 - |z|), the compensated logarithm
//! L(z, h, f) = log f(z) + N_z(h), and the two sides of the Tsuji-style
//! small-factor bound.

use crate::blaschke::{BlaschkeError, Tail, ZeroSequence};
use crate::geometry::{a_kernel, DiskPoint};
use crate::herglotz;
use crate::kahan::NeumaierSum;
use crate::measures::BoundedFunctionSpec;
use crate::Complex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LocalZerosError {
    #[error("h must lie in (0, 1), got {h}")]
    InvalidH { h: f64 },
    #[error("evaluation point coincides with a zero")]
    AtZero,
    #[error("evaluation point lies on a radial branch cut")]
    OnCut,
    #[error("local counts need stored zero positions, not a tail descriptor")]
    UnmaterializedTail,
    #[error(transparent)]
    Product(#[from] BlaschkeError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCount {
    /// Zeros inside the closed disk of radius h(1 - |z|) about z.
    pub count: usize,
    /// Sum of ln(h(1 - |z|) / |a - z|) over those zeros; each term >= 0.
    pub log_sum: f64,
}

/// Count and log-sum of the zeros concentrated near z at scale h.
///
/// z closer than 1e-14 (1 - |z|) to some zero counts as sitting on it: the
/// log of such a distance carries no information.
pub fn local_count(
    zs: &ZeroSequence,
    z: DiskPoint,
    h: f64,
) -> Result<LocalCount, LocalZerosError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(LocalZerosError::InvalidH { h });
    }
    if zs.tail() != Tail::None {
        return Err(LocalZerosError::UnmaterializedTail);
    }
    let zv = z.value();
    let reach = 1.0 - z.abs();
    let radius = h * reach;
    let mut count = 0usize;
    let mut log_sum = NeumaierSum::new();
    for &a in zs.zeros() {
        let dist = (a - zv).norm();
        if dist < 1e-14 * reach {
            return Err(LocalZerosError::AtZero);
        }
        if dist <= radius {
            count += 1;
            log_sum.add((radius / dist).ln());
        }
    }
    Ok(LocalCount {
        count,
        log_sum: log_sum.value(),
    })
}

/// L(z, h, f) = log f(z) + N_z(h): the nearby zeros' divergent logs are
/// compensated by the concentration sum, leaving Re L <= 0 whenever the
/// scale C of the spec is <= 1.
pub fn l_value(
    spec: &BoundedFunctionSpec,
    z: DiskPoint,
    h: f64,
) -> Result<Complex, LocalZerosError> {
    let local = local_count(&spec.zeros, z, h)?;
    let lf = herglotz::log_f(spec, z, 0.0)?;
    if lf.cut_multiplicity > 0 {
        return Err(LocalZerosError::OnCut);
    }
    Ok(lf.value + Complex::new(local.log_sum, 0.0))
}

/// Both sides of the small-factor inequality
/// sum_{|A(z,a)| < 1/2} -ln|b(z,a)| <= 2 sum_{|A(z,a)| < 1/2} |A(z,a)|
/// over the stored zeros (normalized factors, moduli only, so cuts are
/// irrelevant; |A| = 1 at z = a, so the restriction also excludes zeros).
pub fn tsuji_bound_check(zs: &ZeroSequence, z: DiskPoint) -> (f64, f64) {
    let zv = z.value();
    let mut lhs = NeumaierSum::new();
    let mut rhs = NeumaierSum::new();
    for &a in zs.zeros() {
        let kernel = a_kernel(zv, a).norm();
        if kernel < 0.5 {
            let denom = (Complex::new(1.0, 0.0) - zv * a.conj()).norm();
            let b_mod = (a - zv).norm() / denom;
            lhs.add(-b_mod.ln());
            rhs.add(2.0 * kernel);
        }
    }
    (lhs.value(), rhs.value())
}

//! Disk geometry: validated points, Stolz regions, the comparison kernel
//! A(z,ξ), and pseudohyperbolic disks.
//!
//! Boundary points are stored as angles so that their modulus is exactly 1;
//! every conversion to a complex number costs one `sin_cos` pair.

use crate::Complex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point outside the open unit disk (|z| = {modulus})")]
    OutsideDisk { modulus: f64 },
    #[error("stolz aperture must exceed 1 (got sigma = {sigma})")]
    InvalidSigma { sigma: f64 },
    #[error("degenerate denominator |1 - conj(z) zeta| = {denom:e}")]
    DegenerateDenominator { denom: f64 },
}

/// A point of the open unit disk, `|z| < 1` enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex);

impl DiskPoint {
    pub fn new(z: Complex) -> Result<Self, GeometryError> {
        let modulus = z.norm();
        if modulus < 1.0 {
            Ok(Self(z))
        } else {
            Err(GeometryError::OutsideDisk { modulus })
        }
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self, GeometryError> {
        Self::new(Complex::from_polar(r, theta))
    }

    #[inline]
    pub fn value(self) -> Complex {
        self.0
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.0.norm()
    }
}

/// A point of the unit circle, stored as its angle in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    theta: f64,
}

impl BoundaryPoint {
    /// Wraps any finite angle into `(-pi, pi]`.
    pub fn new(theta: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
        }
    }

    #[inline]
    pub fn theta(self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn to_complex(self) -> Complex {
        let (s, c) = self.theta.sin_cos();
        Complex::new(c, s)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Stolz approach region `|1 - z conj(vertex)| <= sigma (1 - |z|)`, optionally
/// truncated to `|z - vertex| < 1/2`.
#[derive(Debug, Clone, Copy)]
pub struct StolzRegion {
    pub vertex: BoundaryPoint,
    pub sigma: f64,
    pub truncated: bool,
}

impl StolzRegion {
    pub fn new(vertex: BoundaryPoint, sigma: f64, truncated: bool) -> Result<Self, GeometryError> {
        if sigma > 1.0 {
            Ok(Self {
                vertex,
                sigma,
                truncated,
            })
        } else {
            Err(GeometryError::InvalidSigma { sigma })
        }
    }

    /// Membership test. The inequality is `<=` with no slack: the boundary of
    /// the angle counts as inside. For a unimodular vertex `|z - vertex|`
    /// equals `|1 - z conj(vertex)|`, so the truncation reuses that quantity.
    pub fn contains(&self, z: DiskPoint) -> bool {
        let zv = z.value();
        let d = (Complex::new(1.0, 0.0) - zv * self.vertex.to_complex().conj()).norm();
        if d > self.sigma * (1.0 - zv.norm()) {
            return false;
        }
        !self.truncated || d < 0.5
    }
}

/// The kernel `A(z, xi) = (1 - |xi|^2) / (1 - z conj(xi))`.
///
/// `z` may lie anywhere in the closed disk, `xi` strictly inside; then the
/// denominator is bounded away from zero.
#[inline]
pub fn a_kernel(z: Complex, xi: Complex) -> Complex {
    let num = 1.0 - xi.norm_sqr();
    num / (Complex::new(1.0, 0.0) - z * xi.conj())
}

/// The ratio `|1 - zeta| / |1 - conj(z) zeta|` compared in the Stolz lemma
/// for the vertex at 1; rotate inputs for a general vertex.
pub fn gpv_ratio(z: DiskPoint, zeta: Complex) -> Result<f64, GeometryError> {
    let num = (Complex::new(1.0, 0.0) - zeta).norm();
    let denom = (Complex::new(1.0, 0.0) - z.value().conj() * zeta).norm();
    if denom < 1e-300 {
        return Err(GeometryError::DegenerateDenominator { denom });
    }
    Ok(num / denom)
}

/// Euclidean center and radius of the pseudohyperbolic disk
/// `{w : |(z - w)/(1 - conj(z) w)| < s}`.
pub fn pseudo_disk(z: DiskPoint, s: f64) -> (Complex, f64) {
    assert!(s > 0.0 && s < 1.0, "pseudohyperbolic radius must be in (0,1)");
    let zz = z.value();
    let denom = 1.0 - s * s * zz.norm_sqr();
    let center = zz * ((1.0 - s * s) / denom);
    let radius = (1.0 - zz.norm_sqr()) * s / denom;
    (center, radius)
}

//! Zero-sequence generators with known Frostman behavior.

use super::ExperimentsError;
use crate::blaschke::{Tail, ZeroSequence};
use crate::geometry::BoundaryPoint;
use crate::Complex;

/// Radial zeros a_k = (1 - k^{-beta}) vertex, k = 2, ..., count + 1.
///
/// The Frostman sum at the vertex reduces to sum k^{-beta gamma}, so the
/// threshold exponent is gamma = 1/beta. Indexing starts at k = 2 because
/// k = 1 would put a zero at the origin, which belongs to the origin order
/// of a spec, not to its zero sequence.
pub fn gen_power_radial(beta: f64, count: usize, vertex: BoundaryPoint) -> ZeroSequence {
    assert!(beta > 1.0, "the Blaschke condition needs beta > 1");
    let direction = vertex.to_complex();
    let zeros = (2..=count + 1)
        .map(|k| (1.0 - (k as f64).powf(-beta)) * direction)
        .collect();
    ZeroSequence::finite(zeros).expect("moduli lie strictly between 0 and 1")
}

/// Interleave each base zero with its conjugate: c_{2n-1} = a_n,
/// c_{2n} = conj(a_n). The product is then real on the real axis, so its
/// radial argument vanishes identically while off-axis arguments do not.
pub fn gen_conjugate_pairs(base: &ZeroSequence) -> Result<ZeroSequence, ExperimentsError> {
    if base.tail() != Tail::None {
        return Err(ExperimentsError::TailedBase);
    }
    let mut out = Vec::with_capacity(2 * base.len());
    for (index, &a) in base.zeros().iter().enumerate() {
        if a.im == 0.0 {
            return Err(ExperimentsError::RealZeroInBase { index });
        }
        out.push(a);
        out.push(a.conj());
    }
    Ok(ZeroSequence::finite(out).expect("conjugation preserves moduli"))
}

/// Conjugate-closed product evaluated straightforwardly; a convenience for
/// tests probing the real-axis symmetry.
pub fn is_conjugate_closed(zeros: &[Complex]) -> bool {
    let mut pool: Vec<Complex> = zeros.to_vec();
    while let Some(a) = pool.pop() {
        if a.im == 0.0 {
            continue;
        }
        match pool.iter().position(|&b| b == a.conj()) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

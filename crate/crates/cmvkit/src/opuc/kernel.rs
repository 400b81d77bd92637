use super::{values_at, Variant};
use crate::coefficients::CoefficientSchedule;
use crate::{Error, Result, C64};

/// Which Christoffel–Darboux identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    /// `sum conj(phi_k(xi)) phi_k(z)`.
    Standard,
    /// Same with rotated polynomials.
    Rotated,
    /// `sum conj(phi_k(xi)) psi_k(z)`.
    Mixed,
    /// Same with rotated polynomials.
    RotatedMixed,
}

/// Both sides of a Christoffel–Darboux identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdKernel {
    /// The finite sum over `k = 0 ..= n`.
    pub sum: C64,
    /// The closed form in terms of index `n + 1`.
    pub closed: C64,
}

impl CdKernel {
    /// `|sum - closed|`.
    pub fn residual(&self) -> f64 {
        (self.sum - self.closed).norm()
    }
}

/// Evaluates the sum and closed form of the (mixed) Christoffel–Darboux
/// identity at order `n`:
///
/// * plain: `(conj(phi*_{n+1}(xi)) phi*_{n+1}(z) - conj(phi_{n+1}(xi)) phi_{n+1}(z)) / (1 - conj(xi) z)`
/// * mixed: `(2 - conj(phi*_{n+1}(xi)) psi*_{n+1}(z) - conj(phi_{n+1}(xi)) psi_{n+1}(z)) / (1 - conj(xi) z)`
pub fn cd_kernel(schedule: &CoefficientSchedule, n: usize, xi: C64, z: C64, variant: KernelVariant) -> Result<CdKernel> {
    let denom = C64::new(1.0, 0.0) - xi.conj() * z;
    if denom.norm() < 1e-14 {
        return Err(Error::VanishingDenominator);
    }
    let (rotated, mixed) = match variant {
        KernelVariant::Standard => (false, false),
        KernelVariant::Rotated => (true, false),
        KernelVariant::Mixed => (false, true),
        KernelVariant::RotatedMixed => (true, true),
    };
    let first = Variant::new(rotated, false);
    let left = values_at(schedule, xi, n + 1, first)?;
    let right = values_at(schedule, z, n + 1, Variant::new(rotated, mixed))?;
    let sum: C64 = left[..=n].iter().zip(&right[..=n]).map(|(l, r)| l.0.conj() * r.0).sum();
    let (lp, ls) = left[n + 1];
    let (rp, rs) = right[n + 1];
    let closed = if mixed {
        (C64::new(2.0, 0.0) - ls.conj() * rs - lp.conj() * rp) / denom
    } else {
        (ls.conj() * rs - lp.conj() * rp) / denom
    };
    Ok(CdKernel { sum, closed })
}

/// Both sides of `psi*_n phi_n + phi*_n psi_n = 2 z^n` (times
/// `prod_{j<n} zeta_j^2` in the rotated case).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    /// `psi*_n(z) phi_n(z) + phi*_n(z) psi_n(z)`.
    pub lhs: C64,
    /// `2 z^n` or `2 z^n prod zeta_j^2`.
    pub rhs: C64,
    /// `Re(conj(psi_n(z)) phi_n(z))`, reported when `|z| = 1` (within 1e-12).
    pub circle_real_part: Option<f64>,
}

impl Pairing {
    /// `|lhs - rhs|`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Evaluates the pairing identity between first- and second-kind
/// polynomials at index `n`.
pub fn pairing_identity(schedule: &CoefficientSchedule, n: usize, z: C64, rotated: bool) -> Result<Pairing> {
    let (phi, phi_s) = values_at(schedule, z, n, Variant::new(rotated, false))?[n];
    let (psi, psi_s) = values_at(schedule, z, n, Variant::new(rotated, true))?[n];
    let lhs = psi_s * phi + phi_s * psi;
    let mut rhs = z.powi(n as i32) * 2.0;
    if rotated {
        let p = schedule.phase_product(n)?;
        rhs *= p * p;
    }
    let circle_real_part = ((z.norm() - 1.0).abs() < 1e-12).then(|| (psi.conj() * phi).re);
    Ok(Pairing { lhs, rhs, circle_real_part })
}

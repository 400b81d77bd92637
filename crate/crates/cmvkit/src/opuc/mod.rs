//! Orthonormal polynomials on the unit circle, their reverses and the
//! second-kind family, generated by forward and backward Szegő steps.
//!
//! Four families share one recursion:
//!
//! | variant               | coefficient | denominator |
//! |-----------------------|-------------|-------------|
//! | `Standard`            | `alpha`     | `|rho|`     |
//! | `Rotated`             | `alpha`     | `conj(rho)` |
//! | `SecondKind`          | `-alpha`    | `|rho|`     |
//! | `RotatedSecondKind`   | `-alpha`    | `conj(rho)` |
//!
//! The forward step is `p_{n+1} = (z p_n - conj(a) p*_n) / d`,
//! `p*_{n+1} = (p*_n - a z p_n) / d`; the backward step uses `rho` itself
//! (not its conjugate) in the rotated case.

mod kernel;
mod oracle;
mod poly;

pub use kernel::{cd_kernel, pairing_identity, CdKernel, KernelVariant, Pairing};
pub use oracle::gram_schmidt_oracle;
pub use poly::{reverse, rotated_reverse, ComplexPoly};

use crate::coefficients::{rho_from_alpha, CoefficientSchedule, ALPHA_SLACK};
use crate::{Error, Result, C64};

/// Which polynomial family a recursion step produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `phi_n`, real positive `rho_n`.
    Standard,
    /// `phi_n` times `prod_{j<n} zeta_j`.
    Rotated,
    /// `psi_n`: OPUC of the sign-flipped coefficients.
    SecondKind,
    /// `psi_n` times `prod_{j<n} zeta_j`.
    RotatedSecondKind,
}

impl Variant {
    /// Builds a variant from the two flags.
    pub fn new(rotated: bool, second_kind: bool) -> Self {
        match (rotated, second_kind) {
            (false, false) => Variant::Standard,
            (true, false) => Variant::Rotated,
            (false, true) => Variant::SecondKind,
            (true, true) => Variant::RotatedSecondKind,
        }
    }

    /// True for the phase-carrying variants.
    pub fn is_rotated(self) -> bool {
        matches!(self, Variant::Rotated | Variant::RotatedSecondKind)
    }

    /// True for the second-kind variants.
    pub fn is_second_kind(self) -> bool {
        matches!(self, Variant::SecondKind | Variant::RotatedSecondKind)
    }
}

/// A polynomial of formal degree `n` together with its reverse.
///
/// For second-kind pairs `p_star` is the reverse `psi*_n` itself; the
/// vector entering the Weyl solution is `(p, -p_star)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPair {
    /// The polynomial.
    pub p: ComplexPoly,
    /// Its reverse at order `n` (rotated reverse for rotated variants).
    pub p_star: ComplexPoly,
    /// Formal degree.
    pub n: usize,
}

impl PolyPair {
    /// The pair `(1, 1)` at index 0.
    pub fn initial() -> Self {
        Self { p: ComplexPoly::one(), p_star: ComplexPoly::one(), n: 0 }
    }

    /// Evaluates `(p(z), p*(z))`.
    pub fn eval(&self, z: C64) -> (C64, C64) {
        (self.p.eval(z), self.p_star.eval(z))
    }

    /// Largest coefficient difference over both components.
    pub fn max_abs_diff(&self, other: &PolyPair) -> f64 {
        self.p.max_abs_diff(&other.p).max(self.p_star.max_abs_diff(&other.p_star))
    }
}

struct Step {
    a: C64,
    forward_denominator: C64,
    backward_denominator: C64,
}

fn step(alpha: C64, zeta: C64, variant: Variant, index: usize) -> Result<Step> {
    let a = if variant.is_second_kind() { -alpha } else { alpha };
    if a.norm() >= 1.0 - ALPHA_SLACK {
        return Err(Error::SingularCoefficient { index: index as i64 });
    }
    let rho = rho_from_alpha(a, zeta)?;
    let (fwd, bwd) = if variant.is_rotated() {
        (rho.conj(), rho)
    } else {
        (C64::new(rho.norm(), 0.0), C64::new(rho.norm(), 0.0))
    };
    Ok(Step { a, forward_denominator: fwd, backward_denominator: bwd })
}

/// One forward Szegő step from index `n` to `n + 1`.
pub fn szego_forward(pair: &PolyPair, alpha: C64, zeta: C64, variant: Variant) -> Result<PolyPair> {
    let s = step(alpha, zeta, variant, pair.n)?;
    let zp = pair.p.mul_z();
    let p = zp.sub(&pair.p_star.scale(s.a.conj())).scale(s.forward_denominator.inv());
    let p_star = pair.p_star.sub(&zp.scale(s.a)).scale(s.forward_denominator.inv());
    Ok(PolyPair { p, p_star, n: pair.n + 1 })
}

/// One backward Szegő step from index `n + 1` to `n`.
///
/// The recursion yields `z p_n`; its constant term must vanish (checked to
/// `1e-12` relative to the largest coefficient of the input) before
/// division by `z`.
pub fn szego_backward(pair: &PolyPair, alpha: C64, zeta: C64, variant: Variant) -> Result<PolyPair> {
    if pair.n == 0 {
        return Err(Error::WindowTooSmall { lo: 0, hi: 0, reason: "no backward step from index 0" });
    }
    let s = step(alpha, zeta, variant, pair.n - 1)?;
    let inv = s.backward_denominator.inv();
    let zp = pair.p.add(&pair.p_star.scale(s.a.conj())).scale(inv);
    let p_star = pair.p_star.add(&pair.p.scale(s.a)).scale(inv);
    let scale = pair.p.coeffs().iter().chain(pair.p_star.coeffs()).map(|c| c.norm()).fold(1.0, f64::max);
    let p = zp.div_z(1e-12 * scale)?;
    Ok(PolyPair { p, p_star, n: pair.n - 1 })
}

/// Pairs `0 ..= count` of the requested family.
///
/// Rotated output equals `prod_{j<n} zeta_j` times standard output.
pub fn opuc_sequence(schedule: &CoefficientSchedule, count: usize, variant: Variant) -> Result<Vec<PolyPair>> {
    let mut out = Vec::with_capacity(count + 1);
    out.push(PolyPair::initial());
    for n in 0..count {
        let next = szego_forward(&out[n], schedule.alpha(n as i64)?, schedule.zeta(n as i64)?, variant)?;
        out.push(next);
    }
    Ok(out)
}

/// Second-kind pairs `0 ..= count` (`alpha -> -alpha`).
pub fn second_kind_sequence(schedule: &CoefficientSchedule, count: usize, rotated: bool) -> Result<Vec<PolyPair>> {
    opuc_sequence(schedule, count, Variant::new(rotated, true))
}

/// Values `(p_n(z), p*_n(z))` for `n = 0 ..= count`, by the scalar form of
/// the forward recursion.
pub fn values_at(schedule: &CoefficientSchedule, z: C64, count: usize, variant: Variant) -> Result<Vec<(C64, C64)>> {
    let mut out = Vec::with_capacity(count + 1);
    let (mut p, mut q) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    out.push((p, q));
    for n in 0..count {
        let s = step(schedule.alpha(n as i64)?, schedule.zeta(n as i64)?, variant, n)?;
        let inv = s.forward_denominator.inv();
        let next_p = (z * p - s.a.conj() * q) * inv;
        let next_q = (q - s.a * z * p) * inv;
        p = next_p;
        q = next_q;
        out.push((p, q));
    }
    Ok(out)
}

/// `prod_{j<n} (1 - |alpha_j|^2)^{1/2}`, the `L^2` norm of the monic `Phi_n`.
pub fn monic_norm(schedule: &CoefficientSchedule, n: usize) -> Result<f64> {
    let mut acc = 1.0;
    for j in 0..n as i64 {
        acc *= schedule.rho_abs(j)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;

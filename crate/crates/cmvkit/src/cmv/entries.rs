use super::CmvVariant;
use crate::coefficients::CoefficientSchedule;
use crate::{Result, C64};

/// Closed-form entry `(k, l)` of the (extended) CMV operator built from the
/// raw schedule, without any boundary treatment.
///
/// Rows where `L` has its block first (`k` even for `L M`, `k` odd for
/// `M L`) read
/// `(k, k-1) = conj(alpha_k) conj(rho_{k-1})`, `(k, k) = -conj(alpha_k) alpha_{k-1}`,
/// `(k, k+1) = rho_k conj(alpha_{k+1})`, `(k, k+2) = rho_k rho_{k+1}`;
/// the other rows read
/// `(k, k-2) = conj(rho_{k-1}) conj(rho_{k-2})`, `(k, k-1) = -conj(rho_{k-1}) alpha_{k-2}`,
/// `(k, k) = -alpha_{k-1} conj(alpha_k)`, `(k, k+1) = -alpha_{k-1} rho_k`.
/// On the half lattice `alpha_{-1} = -1` gives `(0, 0) = conj(alpha_0)`.
pub fn cmv_entry_direct(schedule: &CoefficientSchedule, k: i64, l: i64, variant: CmvVariant) -> Result<C64> {
    let alpha = |m: i64| schedule.alpha(m);
    let rho = |m: i64| -> Result<C64> {
        let r = schedule.rho(m)?;
        Ok(if variant.rotated { r } else { C64::new(r.norm(), 0.0) })
    };
    let leading = (k.rem_euclid(2) == 0) != variant.alternate;
    let zero = C64::new(0.0, 0.0);
    let v = if leading {
        match l - k {
            -1 => alpha(k)?.conj() * rho(k - 1)?.conj(),
            0 => -alpha(k)?.conj() * alpha(k - 1)?,
            1 => rho(k)? * alpha(k + 1)?.conj(),
            2 => rho(k)? * rho(k + 1)?,
            _ => zero,
        }
    } else {
        match l - k {
            -2 => rho(k - 1)?.conj() * rho(k - 2)?.conj(),
            -1 => -rho(k - 1)?.conj() * alpha(k - 2)?,
            0 => -alpha(k - 1)? * alpha(k)?.conj(),
            1 => -alpha(k - 1)? * rho(k)?,
            _ => zero,
        }
    };
    Ok(v)
}

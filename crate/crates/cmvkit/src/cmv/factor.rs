use nalgebra::DMatrix;

use crate::coefficients::CoefficientSchedule;
use crate::{Error, Result, C64};

/// Treatment of a block that straddles a window edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Edge {
    /// Keep the in-window diagonal entry of the block as it is.
    Raw,
    /// Use the block of `alpha = -1` (entry `-1` at the top, `1` at the bottom).
    Closed,
}

/// Direct sum of the blocks `Theta_m`, `m = parity (mod 2)`, with
/// `Theta_m` acting on sites `(m - offset, m - offset + 1)`, restricted to
/// the window `[lo, hi]`.
///
/// With `periodic` the block straddling the upper edge wraps onto
/// `(hi, lo)` and the window length must be even.
#[allow(clippy::too_many_arguments)]
pub(crate) fn block_factor(
    schedule: &CoefficientSchedule,
    lo: i64,
    hi: i64,
    parity: i64,
    offset: i64,
    rotated: bool,
    lower: Edge,
    upper: Edge,
    periodic: bool,
) -> Result<DMatrix<C64>> {
    if hi < lo {
        return Err(Error::WindowTooSmall { lo, hi, reason: "empty window" });
    }
    let n = (hi - lo + 1) as usize;
    if periodic && n % 2 != 0 {
        return Err(Error::OddPeriodicWindow { len: n });
    }
    let coeffs = |m: i64| -> Result<(C64, C64)> {
        let a = schedule.alpha(m)?;
        let r = schedule.rho(m)?;
        Ok((a, if rotated { r } else { C64::new(r.norm(), 0.0) }))
    };
    let minus_one = C64::new(-1.0, 0.0);
    let idx = |site: i64| (site - lo) as usize;
    let mut out = DMatrix::<C64>::zeros(n, n);
    for m in (lo + offset - 1)..=(hi + offset) {
        if (m - parity).rem_euclid(2) != 0 {
            continue;
        }
        let first = m - offset;
        let second = first + 1;
        let (in_first, in_second) = (first >= lo, second <= hi);
        if in_first && in_second {
            let (a, r) = coeffs(m)?;
            let (i, j) = (idx(first), idx(second));
            out[(i, i)] = a.conj();
            out[(i, j)] = r;
            out[(j, i)] = r.conj();
            out[(j, j)] = -a;
        } else if periodic {
            if n >= 2 {
                let (a, r) = coeffs(if in_second { m + n as i64 } else { m })?;
                let (i, j) = (idx(hi), idx(lo));
                out[(i, i)] = a.conj();
                out[(i, j)] = r;
                out[(j, i)] = r.conj();
                out[(j, j)] = -a;
            }
        } else if !in_second {
            let a = match upper {
                Edge::Raw => coeffs(m)?.0,
                Edge::Closed => minus_one,
            };
            out[(idx(hi), idx(hi))] = a.conj();
        } else {
            let a = match lower {
                Edge::Raw => coeffs(m)?.0,
                Edge::Closed => minus_one,
            };
            out[(idx(lo), idx(lo))] = -a;
        }
    }
    Ok(out)
}

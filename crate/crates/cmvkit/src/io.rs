//! File formats and command-line value parsers.
//!
//! Complex numbers are `[re, im]` in files and `RE,IM` on the command line.
//!
//! * Schedule: `{"window": [lo, hi], "alpha": [[re, im], ...], "zeta": [[re, im], ...]}`
//!   with `zeta` optional (all ones when absent).
//! * Polynomial: `{"degree": d, "coeffs": [[re, im], ...]}`, lowest degree first.
//! * Operator: `{"window": [lo, hi], "variant": "C_rot", "boundary": "half_lattice_closed",
//!   "entries": [[k, l, re, im], ...]}` listing the nonzero entries.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cmv::{BandedUnitary, Boundary, OperatorKind};
use crate::coefficients::CoefficientSchedule;
use crate::opuc::ComplexPoly;
use crate::{Error, Result, C64};

/// Largest window accepted by the decoders.
pub const MAX_WINDOW: i64 = 1 << 16;

fn to_pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn from_pair(p: [f64; 2], what: &str) -> Result<C64> {
    if !(p[0].is_finite() && p[1].is_finite()) {
        return Err(Error::Parse(format!("non-finite {what} entry")));
    }
    Ok(C64::new(p[0], p[1]))
}

fn check_window(lo: i64, hi: i64, len: usize) -> Result<()> {
    if hi < lo || hi.saturating_sub(lo) >= MAX_WINDOW {
        return Err(Error::Parse(format!("window [{lo}, {hi}] must be nonempty and shorter than {MAX_WINDOW}")));
    }
    if (hi - lo + 1) as usize != len {
        return Err(Error::Parse(format!("window [{lo}, {hi}] holds {} entries, got {len}", hi - lo + 1)));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    window: [i64; 2],
    alpha: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeta: Option<Vec<[f64; 2]>>,
}

/// Decodes a schedule file.
pub fn parse_schedule_json(text: &str) -> Result<CoefficientSchedule> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    let [lo, hi] = file.window;
    check_window(lo, hi, file.alpha.len())?;
    let alpha = file.alpha.into_iter().map(|p| from_pair(p, "alpha")).collect::<Result<Vec<_>>>()?;
    let zeta = match file.zeta {
        Some(z) => z.into_iter().map(|p| from_pair(p, "zeta")).collect::<Result<Vec<_>>>()?,
        None => vec![C64::new(1.0, 0.0); alpha.len()],
    };
    CoefficientSchedule::new(lo, alpha, zeta)
}

/// Encodes a schedule file.
pub fn schedule_to_json(schedule: &CoefficientSchedule) -> Result<String> {
    let file = ScheduleFile {
        window: [schedule.lo(), schedule.hi()],
        alpha: schedule.alphas().iter().copied().map(to_pair).collect(),
        zeta: Some(schedule.zetas().iter().copied().map(to_pair).collect()),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Decodes a polynomial file.
pub fn parse_poly_json(text: &str) -> Result<ComplexPoly> {
    Ok(serde_json::from_str(text)?)
}

/// Encodes a polynomial file.
pub fn poly_to_json(p: &ComplexPoly) -> Result<String> {
    Ok(serde_json::to_string(p)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    window: [i64; 2],
    variant: String,
    boundary: Boundary,
    entries: Vec<(i64, i64, f64, f64)>,
}

/// Decodes an operator file.
pub fn parse_matrix_json(text: &str) -> Result<BandedUnitary> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let [lo, hi] = file.window;
    if hi < lo || hi.saturating_sub(lo) >= MAX_WINDOW {
        return Err(Error::Parse(format!("window [{lo}, {hi}] must be nonempty and shorter than {MAX_WINDOW}")));
    }
    let kind = OperatorKind::from_name(&file.variant)?;
    let entries = file
        .entries
        .into_iter()
        .map(|(k, l, re, im)| Ok((k, l, from_pair([re, im], "matrix")?)))
        .collect::<Result<Vec<_>>>()?;
    BandedUnitary::from_triplets(lo, hi, &entries, file.boundary, kind)
}

/// Encodes an operator file.
pub fn matrix_to_json(m: &BandedUnitary) -> Result<String> {
    let (lo, hi) = m.window();
    let file = MatrixFile {
        window: [lo, hi],
        variant: m.kind().name().to_string(),
        boundary: m.boundary(),
        entries: m.triplets().into_iter().map(|(k, l, v)| (k, l, v.re, v.im)).collect(),
    };
    Ok(serde_json::to_string(&file)?)
}

fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: '{t}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("not a finite number: '{t}'")));
    }
    Ok(v)
}

/// Parses `RE,IM` (or a bare real `RE`).
pub fn parse_complex_arg(s: &str) -> Result<C64> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(C64::new(parse_real(s)?, 0.0)),
    }
}

/// Parses an angle: `Xpi` means `X * pi` (`pi` alone means `pi`), anything
/// else is radians.
pub fn parse_pi_multiple(s: &str) -> Result<f64> {
    let t = s.trim();
    match t.strip_suffix("pi") {
        Some("") => Ok(PI),
        Some("-") => Ok(-PI),
        Some(x) => Ok(parse_real(x.trim_end_matches('*'))? * PI),
        None => parse_real(t),
    }
}

//! Carathéodory functions, integral forms of the second-kind polynomials
//! and the square-summability test for Weyl solutions.

use serde::{Deserialize, Serialize};

use crate::coefficients::{default_nodes, CoefficientSchedule, MeasureSpec};
use crate::opuc::{values_at, Variant};
use crate::{Error, Result, C64};

/// Largest admissible term count for [`weyl_residual`].
pub const MAX_TERMS: usize = 1024;
/// Smallest admissible term count for [`weyl_residual`].
pub const MIN_TERMS: usize = 4;
/// Default term count for classification.
pub const DEFAULT_TERMS: usize = 256;

fn check_disk(z: C64) -> Result<()> {
    let r = z.norm();
    if r.is_nan() || r >= 1.0 {
        return Err(Error::OutsideDisk { modulus: r });
    }
    Ok(())
}

fn kernel(xi: C64, z: C64) -> C64 {
    (xi + z) / (xi - z)
}

/// `F(z) = int (xi + z)/(xi - z) dmu(xi)` for `|z| < 1`.
///
/// Builtins use their closed forms, density grids the trapezoid rule on
/// their own grid, coefficient-defined measures the Schur continued fraction
/// of their coefficients.
pub fn caratheodory(measure: &MeasureSpec, z: C64) -> Result<C64> {
    check_disk(z)?;
    match measure {
        MeasureSpec::Builtin(b) => Ok(b.caratheodory(z)),
        MeasureSpec::DensityGrid(_) => measure.integrate(0, |xi| kernel(xi, z)),
        MeasureSpec::CoefficientDefined(s) => caratheodory_from_coefficients(s, z),
    }
}

/// `F(z)` by quadrature with `nodes` points (plus exact point masses).
pub fn caratheodory_quadrature(measure: &MeasureSpec, z: C64, nodes: usize) -> Result<C64> {
    check_disk(z)?;
    measure.integrate(nodes, |xi| kernel(xi, z))
}

/// `F(z) = (1 + z f(z)) / (1 - z f(z))` with the Schur function `f`
/// obtained from `f_n = (alpha_n + z f_{n+1}) / (1 + conj(alpha_n) z f_{n+1})`,
/// started from `f_N = 0` after the last coefficient of the schedule.
pub fn caratheodory_from_coefficients(schedule: &CoefficientSchedule, z: C64) -> Result<C64> {
    check_disk(z)?;
    let one = C64::new(1.0, 0.0);
    let mut f = C64::new(0.0, 0.0);
    for a in schedule.alphas().iter().rev() {
        let w = z * f;
        f = (a + w) / (one + a.conj() * w);
    }
    Ok((one + z * f) / (one - z * f))
}

/// Second-kind values obtained by integration against the measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondKindIntegral {
    /// `int (phi_n(xi) - phi_n(z)) K(xi, z) dmu` (zero at `n = 0`).
    pub psi: C64,
    /// `int (phi*_n(z) - (z/xi)^n phi*_n(xi)) K(xi, z) dmu` (zero at `n = 0`).
    pub psi_star: C64,
    /// `int (phi*_n(z) - phi*_n(xi)) K(xi, z) dmu`, kept for comparison.
    pub psi_star_as_printed: C64,
}

/// Integral forms of `psi_n(z)` and `psi*_n(z)` with `K = (xi+z)/(xi-z)`.
///
/// `phi_n` is taken from `schedule` (rotated when `rotated` is set); the
/// schedule must be the coefficient sequence of `measure`.
pub fn second_kind_integral(
    measure: &MeasureSpec,
    schedule: &CoefficientSchedule,
    n: usize,
    z: C64,
    rotated: bool,
    nodes: usize,
) -> Result<SecondKindIntegral> {
    check_disk(z)?;
    let variant = Variant::new(rotated, false);
    let (pz, psz) = values_at(schedule, z, n, variant)?[n];
    let eval = |xi: C64| values_at(schedule, xi, n, variant).map_or((C64::new(f64::NAN, f64::NAN), C64::new(f64::NAN, f64::NAN)), |v| v[n]);
    let zn = |xi: C64| (z / xi).powi(n as i32);
    let psi = measure.integrate(nodes, |xi| (eval(xi).0 - pz) * kernel(xi, z))?;
    let psi_star = measure.integrate(nodes, |xi| (psz - zn(xi) * eval(xi).1) * kernel(xi, z))?;
    let psi_star_as_printed = measure.integrate(nodes, |xi| (psz - eval(xi).1) * kernel(xi, z))?;
    Ok(SecondKindIntegral { psi, psi_star, psi_star_as_printed })
}

/// Outcome of the finite-sample square-summability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Tail increments negligible.
    SquareSummable,
    /// Increments not decaying.
    Divergent,
    /// Neither criterion met.
    Inconclusive,
}

/// Thresholds of the verdict rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylThresholds {
    /// Square-summable when every increment in the last quarter is below
    /// `tail * (1 - |z|)`.
    pub tail: f64,
    /// Divergent when the last increment is at least `ratio` times the
    /// median increment of the first quarter.
    pub ratio: f64,
}

impl Default for WeylThresholds {
    fn default() -> Self {
        Self { tail: 1e-10, ratio: 0.1 }
    }
}

/// Partial sums of `|psi_n + r phi_n|^2 + |-psi*_n + r phi*_n|^2` and
/// their verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSample {
    /// Spectral parameter.
    pub z: C64,
    /// Trial value.
    pub r: C64,
    /// Partial sums over `n = 0 ..= N`.
    pub partial_sums: Vec<f64>,
    /// Classification.
    pub verdict: Verdict,
}

impl WeylSample {
    /// Terms of the series (successive increments of the partial sums).
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.partial_sums
            .iter()
            .map(|&s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }
}

fn weyl_terms(schedule: &CoefficientSchedule, z: C64, r: C64, n: usize) -> Result<Vec<f64>> {
    let phi = values_at(schedule, z, n, Variant::Rotated)?;
    let psi = values_at(schedule, z, n, Variant::RotatedSecondKind)?;
    Ok(phi
        .iter()
        .zip(&psi)
        .map(|(&(p, ps), &(q, qs))| (q + r * p).norm_sqr() + (-qs + r * ps).norm_sqr())
        .collect())
}

fn classify(terms: &[f64], z: C64, t: WeylThresholds) -> Verdict {
    let quarter = (terms.len() - 1) / 4;
    let tail = &terms[terms.len() - quarter..];
    if tail.iter().all(|&d| d < t.tail * (1.0 - z.norm())) {
        return Verdict::SquareSummable;
    }
    let mut head = terms[..quarter].to_vec();
    head.sort_by(f64::total_cmp);
    let median = if head.len() % 2 == 1 {
        head[head.len() / 2]
    } else {
        0.5 * (head[head.len() / 2 - 1] + head[head.len() / 2])
    };
    if terms[terms.len() - 1] >= t.ratio * median {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    }
}

/// Evaluates the Weyl series for trial value `r` over `n = 0 ..= terms`.
///
/// The polynomials are the rotated ones of the schedule (the classical ones
/// when all `zeta_n = 1`); the schedule needs at least `terms` coefficients.
pub fn weyl_residual(
    schedule: &CoefficientSchedule,
    z: C64,
    r: C64,
    terms: usize,
    thresholds: WeylThresholds,
) -> Result<WeylSample> {
    check_disk(z)?;
    if !(MIN_TERMS..=MAX_TERMS).contains(&terms) {
        return Err(Error::TermCount { n: terms, min: MIN_TERMS, max: MAX_TERMS });
    }
    let t = weyl_terms(schedule, z, r, terms)?;
    let mut acc = 0.0;
    let partial_sums = t
        .iter()
        .map(|d| {
            acc += d;
            acc
        })
        .collect();
    Ok(WeylSample { z, r, partial_sums, verdict: classify(&t, z, thresholds) })
}

/// Partial sums for a schedule and for the same coefficients with all
/// phases set to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationInvariance {
    /// Sample with the schedule's phases.
    pub rotated: WeylSample,
    /// Sample with `zeta = 1`.
    pub plain: WeylSample,
    /// Max over `N` of `|S_rot(N) - S_plain(N)| / max(1, S_plain(N))`.
    pub max_relative_difference: f64,
}

/// Compares the Weyl partial sums of a schedule with those of its
/// phase-free version.
pub fn rotation_invariance_check(
    schedule: &CoefficientSchedule,
    z: C64,
    r: C64,
    terms: usize,
) -> Result<RotationInvariance> {
    let rotated = weyl_residual(schedule, z, r, terms, WeylThresholds::default())?;
    let plain = weyl_residual(&schedule.plain(), z, r, terms, WeylThresholds::default())?;
    let max_relative_difference = rotated
        .partial_sums
        .iter()
        .zip(&plain.partial_sums)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(RotationInvariance { rotated, plain, max_relative_difference })
}

/// Quadrature node count used by default for integral forms.
pub fn default_integral_nodes(n: usize) -> usize {
    default_nodes(n).max(1024)
}

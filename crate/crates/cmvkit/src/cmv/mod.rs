//! Theta-blocks, the `L`/`M` factors, half-lattice and extended CMV
//! operators (standard/alternate, plain/rotated), diagonal conjugators,
//! splits at unimodular coefficients and walk evolution.
//!
//! Block placement: `Theta_m` acts on sites `(m, m+1)`; `L` collects the
//! even-indexed blocks and `M` the odd-indexed ones, so that on the half
//! lattice `M` starts with the `1x1` block `-alpha_{-1} = 1`. The standard
//! operator is `L M`, the alternate one `M L`.

mod banded;
mod entries;
mod factor;
mod walk;

pub use banded::{BandedUnitary, OperatorKind};
pub use entries::cmv_entry_direct;
pub use walk::{apply, evolve};

pub(crate) use factor::{block_factor, Edge};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSchedule;
use crate::opuc::{values_at, Variant};
use crate::{Error, Result, C64};

/// How a finite window treats the blocks that straddle its edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Straddling coefficients replaced by `-1`; the matrix is unitary.
    HalfLatticeClosed,
    /// Raw corner of the infinite operator; not unitary in general.
    PrincipalTruncation,
    /// The straddling block `Theta_hi` wraps onto sites `(hi, lo)`; needs an
    /// even window length; unitary.
    PeriodicClosed,
}

impl Boundary {
    /// Parses `half_lattice_closed`, `principal_truncation` or `periodic_closed`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "half_lattice_closed" => Ok(Boundary::HalfLatticeClosed),
            "principal_truncation" => Ok(Boundary::PrincipalTruncation),
            "periodic_closed" => Ok(Boundary::PeriodicClosed),
            other => Err(Error::Parse(format!("unknown boundary mode '{other}'"))),
        }
    }

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Boundary::HalfLatticeClosed => "half_lattice_closed",
            Boundary::PrincipalTruncation => "principal_truncation",
            Boundary::PeriodicClosed => "periodic_closed",
        }
    }

    /// True for the modes that produce unitary matrices.
    pub fn is_unitary(self) -> bool {
        !matches!(self, Boundary::PrincipalTruncation)
    }

    fn edges(self) -> (Edge, Edge, bool) {
        match self {
            Boundary::HalfLatticeClosed => (Edge::Closed, Edge::Closed, false),
            Boundary::PrincipalTruncation => (Edge::Raw, Edge::Raw, false),
            Boundary::PeriodicClosed => (Edge::Raw, Edge::Raw, true),
        }
    }
}

/// Standard (`L M`) or alternate (`M L`), plain (`|rho|`) or rotated (`rho`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmvVariant {
    /// Use `M L` instead of `L M`.
    pub alternate: bool,
    /// Use complex `rho_n` instead of `|rho_n|`.
    pub rotated: bool,
}

impl CmvVariant {
    /// `C`.
    pub const STANDARD: Self = Self { alternate: false, rotated: false };
    /// `C~`.
    pub const ALTERNATE: Self = Self { alternate: true, rotated: false };
    /// Rotated `C`.
    pub const ROTATED: Self = Self { alternate: false, rotated: true };
    /// Rotated `C~`.
    pub const ALTERNATE_ROTATED: Self = Self { alternate: true, rotated: true };
}

/// A 2x2 unitary block `[[conj(alpha), rho], [conj(rho), -alpha]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaBlock {
    /// `alpha`.
    pub alpha: C64,
    /// `rho`.
    pub rho: C64,
}

impl ThetaBlock {
    /// The matrix entries, row-major.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.alpha.conj(), self.rho], [self.rho.conj(), -self.alpha]]
    }

    /// `||Theta Theta^* - I||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.matrix();
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let v: C64 = (0..2).map(|k| m[i][k] * m[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (v - target).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Builds a Theta-block after checking `|alpha|^2 + |rho|^2 = 1` to `1e-12`.
pub fn theta(alpha: C64, rho: C64) -> Result<ThetaBlock> {
    let residual = alpha.norm_sqr() + rho.norm_sqr() - 1.0;
    if !residual.is_finite() || residual.abs() > 1e-12 {
        return Err(Error::NormalizationViolated { residual });
    }
    Ok(ThetaBlock { alpha, rho })
}

fn half_lattice_window(schedule: &CoefficientSchedule, n: usize) -> Result<()> {
    if !schedule.is_half_lattice() {
        return Err(Error::Unsupported("half-lattice operators need a schedule starting at 0"));
    }
    if n == 0 {
        return Err(Error::WindowTooSmall { lo: 0, hi: -1, reason: "empty window" });
    }
    if schedule.len() < n {
        return Err(Error::OutOfWindow { index: n as i64 - 1, lo: 0, hi: schedule.hi() });
    }
    Ok(())
}

fn factor_pair(
    schedule: &CoefficientSchedule,
    lo: i64,
    hi: i64,
    rotated: bool,
    boundary: Boundary,
) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let (lower, upper, periodic) = boundary.edges();
    let l = block_factor(schedule, lo, hi, 0, 0, rotated, lower, upper, periodic)?;
    let m = block_factor(schedule, lo, hi, 1, 0, rotated, lower, upper, periodic)?;
    Ok((l, m))
}

fn factor_kinds(rotated: bool) -> (OperatorKind, OperatorKind) {
    if rotated {
        (OperatorKind::LRot, OperatorKind::MRot)
    } else {
        (OperatorKind::L, OperatorKind::M)
    }
}

/// The factors `L` and `M` over `[lo, hi]`.
///
/// A half-lattice operator of size `N` uses `[0, N-1]`; extended windows
/// may start anywhere the schedule covers.
pub fn build_lm(
    schedule: &CoefficientSchedule,
    lo: i64,
    hi: i64,
    rotated: bool,
    boundary: Boundary,
) -> Result<(BandedUnitary, BandedUnitary)> {
    let (l, m) = factor_pair(schedule, lo, hi, rotated, boundary)?;
    let (kl, km) = factor_kinds(rotated);
    Ok((BandedUnitary::new(lo, l, boundary, kl), BandedUnitary::new(lo, m, boundary, km)))
}

/// The `N x N` half-lattice CMV matrix filled from the closed-form entry
/// table (independently of the factors).
///
/// `HalfLatticeClosed` replaces `alpha_{N-1}` by `-1`; `PeriodicClosed` is
/// not defined on the half lattice.
pub fn build_cmv(schedule: &CoefficientSchedule, n: usize, variant: CmvVariant, boundary: Boundary) -> Result<BandedUnitary> {
    half_lattice_window(schedule, n)?;
    let closed = match boundary {
        Boundary::PeriodicClosed => return Err(Error::Unsupported("periodic closure of a half-lattice matrix")),
        Boundary::HalfLatticeClosed => Some(schedule.with_alpha(n as i64 - 1, C64::new(-1.0, 0.0))?),
        Boundary::PrincipalTruncation => None,
    };
    let source = closed.as_ref().unwrap_or(schedule);
    let mut m = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        for l in k.saturating_sub(2)..(k + 3).min(n) {
            m[(k, l)] = cmv_entry_direct(source, k as i64, l as i64, variant)?;
        }
    }
    Ok(BandedUnitary::new(0, m, boundary, OperatorKind::cmv(variant)))
}

/// The extended operator `L~ M~` (or `M~ L~`) on the window `[lo, hi]`,
/// which must contain 0.
pub fn build_extended(
    schedule: &CoefficientSchedule,
    lo: i64,
    hi: i64,
    variant: CmvVariant,
    boundary: Boundary,
) -> Result<BandedUnitary> {
    if lo > 0 || hi < 0 {
        return Err(Error::WindowTooSmall { lo, hi, reason: "extended windows must contain 0" });
    }
    let (l, m) = factor_pair(schedule, lo, hi, variant.rotated, boundary)?;
    let e = if variant.alternate { &m * &l } else { &l * &m };
    Ok(BandedUnitary::new(lo, e, boundary, OperatorKind::extended(variant)))
}

/// Values of the CMV basis `chi_0(z), ..., chi_{count-1}(z)` at `z != 0`:
/// `chi_{2m} = z^{-m} phi*_{2m}` and `chi_{2m-1} = z^{-m+1} phi_{2m-1}`,
/// built from rotated polynomials when `rotated` is set.
pub fn cmv_basis_values(schedule: &CoefficientSchedule, z: C64, count: usize, rotated: bool) -> Result<Vec<C64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let values = values_at(schedule, z, count - 1, Variant::new(rotated, false))?;
    Ok(values
        .iter()
        .enumerate()
        .map(|(k, &(p, p_star))| {
            let m = k.div_ceil(2) as i32;
            if k % 2 == 0 {
                p_star * z.powi(-m)
            } else {
                p * z.powi(1 - m)
            }
        })
        .collect())
}

/// Diagonal conjugators over a window.
///
/// `r_tilde[n] = prod_{0<=j<n} zeta_j` for `n >= 0` and
/// `prod_{n<=j<0} zeta_j^{-1}` for `n < 0`; `R` is its restriction to
/// `n >= 0` and `Q = R^2` entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugators {
    /// First index of the window.
    pub lo: i64,
    /// Diagonal of `R~` over the window.
    pub r_tilde: Vec<C64>,
    /// Diagonal of `Q = R~^2` over the window.
    pub q: Vec<C64>,
}

impl Conjugators {
    /// Diagonal of `R` (indices `n >= 0` of the window).
    pub fn r(&self) -> &[C64] {
        let skip = (-self.lo).max(0) as usize;
        &self.r_tilde[skip.min(self.r_tilde.len())..]
    }
}

/// Builds `R`, `R~` and `Q` over `[lo, hi]`.
pub fn conjugators(schedule: &CoefficientSchedule, lo: i64, hi: i64) -> Result<Conjugators> {
    let mut r_tilde = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for n in lo..=hi {
        let mut d = C64::new(1.0, 0.0);
        if n >= 0 {
            for j in 0..n {
                d *= schedule.zeta(j)?;
            }
        } else {
            for j in n..0 {
                d /= schedule.zeta(j)?;
            }
        }
        r_tilde.push(d);
    }
    let q = r_tilde.iter().map(|d| d * d).collect();
    Ok(Conjugators { lo, r_tilde, q })
}

/// `D A D^{-1}` for a unimodular diagonal `D`.
pub fn conjugate(diag: &[C64], a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if diag.len() != a.nrows() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: diag.len() });
    }
    Ok(DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| diag[i] * a[(i, j)] / diag[j]))
}

/// The two halves of an extended operator split at a unimodular `alpha_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    /// Split index.
    pub k: i64,
    /// Operator on `[lo, K]`.
    pub left: BandedUnitary,
    /// Operator on `[K+1, hi]`.
    pub right: BandedUnitary,
    /// `(L, M)` factors on `[lo, K]`.
    pub left_factors: (BandedUnitary, BandedUnitary),
    /// `(L, M)` factors on `[K+1, hi]`.
    pub right_factors: (BandedUnitary, BandedUnitary),
}

/// Splits the extended operator on `[lo, hi]` at `K`, where `|alpha_K| = 1`.
///
/// The block `Theta_K` is diagonal, so its entries `conj(alpha_K)` at `K`
/// and `-alpha_K` at `K+1` become `1x1` blocks of the respective halves.
/// The outer edges `lo` and `hi` follow `outer`.
pub fn split_at(
    schedule: &CoefficientSchedule,
    k: i64,
    lo: i64,
    hi: i64,
    variant: CmvVariant,
    outer: Boundary,
) -> Result<Split> {
    let a = schedule.alpha(k)?;
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NoSplit { index: k, modulus: a.norm() });
    }
    if !(lo <= k && k < hi) {
        return Err(Error::WindowTooSmall { lo, hi, reason: "split index must satisfy lo <= K < hi" });
    }
    let (lower, upper, periodic) = outer.edges();
    if periodic {
        return Err(Error::Unsupported("periodic outer edges for a split"));
    }
    let (kl, km) = factor_kinds(variant.rotated);
    let half = |a: i64, b: i64, lower: Edge, upper: Edge| -> Result<(BandedUnitary, BandedUnitary, BandedUnitary)> {
        let l = block_factor(schedule, a, b, 0, 0, variant.rotated, lower, upper, false)?;
        let m = block_factor(schedule, a, b, 1, 0, variant.rotated, lower, upper, false)?;
        let e = if variant.alternate { &m * &l } else { &l * &m };
        Ok((
            BandedUnitary::new(a, e, outer, OperatorKind::extended(variant)),
            BandedUnitary::new(a, l, outer, kl),
            BandedUnitary::new(a, m, outer, km),
        ))
    };
    let (left, ll, lm) = half(lo, k, lower, Edge::Raw)?;
    let (right, rl, rm) = half(k + 1, hi, Edge::Raw, upper)?;
    Ok(Split { k, left, right, left_factors: (ll, lm), right_factors: (rl, rm) })
}

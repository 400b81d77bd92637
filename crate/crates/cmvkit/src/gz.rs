//! Transfer matrices for the coupled eigenvalue problem of the extended
//! (rotated) CMV operator.
//!
//! A pair of sequences `(f_n, g_n)` is propagated by
//! `(f_n, g_n) = T_n(z) (f_{n-1}, g_{n-1})` with
//!
//! * `n` even: `T_n = (1/rho_n) [[-conj(alpha_n), z], [1/z, -alpha_n]]`,
//! * `n` odd:  `T_n = (1/rho_n) [[-alpha_n, 1], [1, -conj(alpha_n)]]`,
//!
//! and `T_n^{-1}` carries `1/conj(rho_n)`. The same relations written as
//! block equations couple sites `(m-1, m)` through `Theta_m`: even blocks act
//! on `f` (`F f = z g`), odd blocks act on `g` (`G g = f`).
//! With all `zeta_n = 1` these are the classical relations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cmv::{block_factor, Edge};
use crate::coefficients::{CoefficientSchedule, ALPHA_SLACK};
use crate::{Error, Result, C64};

/// Smallest admissible `|z|`.
pub const MIN_SPECTRAL_MODULUS: f64 = 1e-6;
/// Largest admissible `|z|`.
pub const MAX_SPECTRAL_MODULUS: f64 = 1e6;

/// Parity of an integer index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// Even index.
    Even,
    /// Odd index.
    Odd,
}

impl Parity {
    /// Parity of `n`.
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A 2x2 transfer matrix tagged with its index, parity and spectral
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer2x2 {
    /// Index `n`.
    pub n: i64,
    /// Parity of `n`.
    pub parity: Parity,
    /// Spectral parameter.
    pub z: C64,
    /// Entries, row-major.
    pub m: [[C64; 2]; 2],
}

impl Transfer2x2 {
    /// Determinant.
    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `M (f, g)`.
    pub fn apply(&self, f: C64, g: C64) -> (C64, C64) {
        (self.m[0][0] * f + self.m[0][1] * g, self.m[1][0] * f + self.m[1][1] * g)
    }

    /// Matrix product `self * other` (tags taken from `self`).
    pub fn mul(&self, other: &Transfer2x2) -> Transfer2x2 {
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        Transfer2x2 { m, ..*self }
    }

    /// Largest entrywise distance to the identity.
    pub fn identity_defect(&self) -> f64 {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        [(self.m[0][0] - one), (self.m[0][1] - zero), (self.m[1][0] - zero), (self.m[1][1] - one)]
            .iter()
            .map(|d| d.norm())
            .fold(0.0, f64::max)
    }
}

fn check_z(z: C64) -> Result<()> {
    let r = z.norm();
    if !(MIN_SPECTRAL_MODULUS..=MAX_SPECTRAL_MODULUS).contains(&r) || !r.is_finite() {
        return Err(Error::SpectralParameter { modulus: r });
    }
    Ok(())
}

fn coefficients(schedule: &CoefficientSchedule, n: i64) -> Result<(C64, C64)> {
    let a = schedule.alpha(n)?;
    if a.norm() >= 1.0 - ALPHA_SLACK {
        return Err(Error::SingularCoefficient { index: n });
    }
    Ok((a, schedule.rho(n)?))
}

/// `T_n(z)`.
pub fn gz_transfer(schedule: &CoefficientSchedule, n: i64, z: C64) -> Result<Transfer2x2> {
    check_z(z)?;
    let (a, rho) = coefficients(schedule, n)?;
    let s = rho.inv();
    let parity = Parity::of(n);
    let m = match parity {
        Parity::Even => [[-a.conj() * s, z * s], [z.inv() * s, -a * s]],
        Parity::Odd => [[-a * s, s], [s, -a.conj() * s]],
    };
    Ok(Transfer2x2 { n, parity, z, m })
}

/// `T_n(z)^{-1}`.
pub fn gz_transfer_inv(schedule: &CoefficientSchedule, n: i64, z: C64) -> Result<Transfer2x2> {
    check_z(z)?;
    let (a, rho) = coefficients(schedule, n)?;
    let s = rho.conj().inv();
    let parity = Parity::of(n);
    let m = match parity {
        Parity::Even => [[a * s, z * s], [z.inv() * s, a.conj() * s]],
        Parity::Odd => [[a.conj() * s, s], [s, a * s]],
    };
    Ok(Transfer2x2 { n, parity, z, m })
}

/// A value of the pair `(f_n, g_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GZState {
    /// `f_n`.
    pub f: C64,
    /// `g_n`.
    pub g: C64,
    /// Index `n`.
    pub n: i64,
}

/// Propagation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Increasing index, by `T_{n+1}`.
    Right,
    /// Decreasing index, by `T_n^{-1}`.
    Left,
}

/// Propagates `init` by `steps` steps; the result starts with `init`.
pub fn propagate(
    schedule: &CoefficientSchedule,
    init: GZState,
    steps: usize,
    z: C64,
    direction: Direction,
) -> Result<Vec<GZState>> {
    check_z(z)?;
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = init;
    out.push(s);
    for _ in 0..steps {
        s = match direction {
            Direction::Right => {
                let (f, g) = gz_transfer(schedule, s.n + 1, z)?.apply(s.f, s.g);
                GZState { f, g, n: s.n + 1 }
            }
            Direction::Left => {
                let (f, g) = gz_transfer_inv(schedule, s.n, z)?.apply(s.f, s.g);
                GZState { f, g, n: s.n - 1 }
            }
        };
        out.push(s);
    }
    Ok(out)
}

/// The four boundary families at a split index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeedFamily {
    /// `f+`.
    #[serde(rename = "f+")]
    FPlus,
    /// `p+`.
    #[serde(rename = "p+")]
    PPlus,
    /// `f-`.
    #[serde(rename = "f-")]
    FMinus,
    /// `p-`.
    #[serde(rename = "p-")]
    PMinus,
}

impl SeedFamily {
    /// All families in table order.
    pub const ALL: [SeedFamily; 4] = [SeedFamily::FPlus, SeedFamily::PPlus, SeedFamily::FMinus, SeedFamily::PMinus];

    /// `f+`, `p+`, `f-` or `p-`.
    pub fn name(self) -> &'static str {
        match self {
            SeedFamily::FPlus => "f+",
            SeedFamily::PPlus => "p+",
            SeedFamily::FMinus => "f-",
            SeedFamily::PMinus => "p-",
        }
    }

    /// Inverse of [`SeedFamily::name`].
    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::Parse(format!("unknown seed family '{name}'")))
    }
}

/// Initial value at index `k` of a half-lattice family.
///
/// `k` even: `f+ = (z, 1)`, `p+ = (z, -1)`, `f- = (1, -1)`, `p- = (1, 1)`;
/// `k` odd: `f+ = (1, 1)`, `p+ = (-1, 1)`, `f- = (-z, 1)`, `p- = (z, 1)`.
pub fn half_lattice_seeds(k: i64, family: SeedFamily, z: C64) -> GZState {
    let one = C64::new(1.0, 0.0);
    let (f, g) = match (Parity::of(k), family) {
        (Parity::Even, SeedFamily::FPlus) => (z, one),
        (Parity::Even, SeedFamily::PPlus) => (z, -one),
        (Parity::Even, SeedFamily::FMinus) => (one, -one),
        (Parity::Even, SeedFamily::PMinus) => (one, one),
        (Parity::Odd, SeedFamily::FPlus) => (one, one),
        (Parity::Odd, SeedFamily::PPlus) => (-one, one),
        (Parity::Odd, SeedFamily::FMinus) => (-z, one),
        (Parity::Odd, SeedFamily::PMinus) => (z, one),
    };
    GZState { f, g, n: k }
}

/// One row of a neighbour table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeighborRow {
    /// Family of the seed.
    pub family: SeedFamily,
    /// Seed at `K`.
    pub seed: GZState,
    /// Value at `K - 1`, i.e. `T_K^{-1}` applied to the seed.
    pub left: GZState,
    /// Value at `K + 1`, i.e. `T_{K+1}` applied to the seed.
    pub right: GZState,
}

/// The values of the four seed families one step to each side of `K`.
pub fn neighbor_table(schedule: &CoefficientSchedule, k: i64, z: C64) -> Result<Vec<NeighborRow>> {
    let inv = gz_transfer_inv(schedule, k, z)?;
    let fwd = gz_transfer(schedule, k + 1, z)?;
    Ok(SeedFamily::ALL
        .into_iter()
        .map(|family| {
            let seed = half_lattice_seeds(k, family, z);
            let (fl, gl) = inv.apply(seed.f, seed.g);
            let (fr, gr) = fwd.apply(seed.f, seed.g);
            NeighborRow {
                family,
                seed,
                left: GZState { f: fl, g: gl, n: k - 1 },
                right: GZState { f: fr, g: gr, n: k + 1 },
            }
        })
        .collect())
}

/// The block operators `F = (+) Theta_{even m}` and `G = (+) Theta_{odd m}`
/// with `Theta_m` on sites `(m-1, m)`, over `[lo, hi]`, closed at the edges.
pub fn coupling_operators(schedule: &CoefficientSchedule, lo: i64, hi: i64) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let f = block_factor(schedule, lo, hi, 0, 1, true, Edge::Closed, Edge::Closed, false)?;
    let g = block_factor(schedule, lo, hi, 1, 1, true, Edge::Closed, Edge::Closed, false)?;
    Ok((f, g))
}

/// Residuals of the two equivalent formulations on a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Window `[lo, hi]`; the sequences cover `[lo - 1, hi + 1]`.
    pub window: (i64, i64),
    /// Max `|(F f)_k - z g_k|` over rows of complete even blocks.
    pub block_f: f64,
    /// Max `|(G g)_k - f_k|` over rows of complete odd blocks.
    pub block_g: f64,
    /// Max `|(f, g)_n - T_n (f, g)_{n-1}|` for `n` in `[lo, hi + 1]`.
    pub recursion: f64,
    /// Max `|f_n|, |g_n|` over the sequences.
    pub scale: f64,
}

impl EquivalenceReport {
    /// Largest of the two block residuals.
    pub fn block(&self) -> f64 {
        self.block_f.max(self.block_g)
    }

    /// True when both block equations hold within `tol * max(1, scale)`.
    pub fn blocks_hold(&self, tol: f64) -> bool {
        self.block() <= tol * self.scale.max(1.0)
    }

    /// True when the recursion holds within `tol * max(1, scale)`.
    pub fn recursion_holds(&self, tol: f64) -> bool {
        self.recursion <= tol * self.scale.max(1.0)
    }
}

/// Checks the block equations and the transfer recursion for sequences
/// `f`, `g` indexed from `first_index`, on the window `[lo, hi]`.
///
/// Both checks use exactly the coefficients `alpha_m`, `m` in `[lo, hi + 1]`,
/// and each block `Theta_m` is equivalent to the step `T_m`.
#[allow(clippy::too_many_arguments)]
pub fn verify_equivalence(
    schedule: &CoefficientSchedule,
    f: &[C64],
    g: &[C64],
    first_index: i64,
    z: C64,
    lo: i64,
    hi: i64,
) -> Result<EquivalenceReport> {
    check_z(z)?;
    if hi < lo {
        return Err(Error::WindowTooSmall { lo, hi, reason: "empty window" });
    }
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: f.len(), got: g.len() });
    }
    let last_index = first_index + f.len() as i64 - 1;
    if first_index > lo - 1 || last_index < hi + 1 {
        return Err(Error::WindowTooSmall { lo, hi, reason: "sequences must cover one index beyond each side" });
    }
    let (wlo, whi) = (lo - 1, hi + 1);
    let at = |v: &[C64], n: i64| v[(n - first_index) as usize];
    let fv: Vec<C64> = (wlo..=whi).map(|n| at(f, n)).collect();
    let gv: Vec<C64> = (wlo..=whi).map(|n| at(g, n)).collect();
    let (fo, go) = coupling_operators(schedule, wlo, whi)?;
    let ff = &fo * DMatrix::from_column_slice(fv.len(), 1, &fv);
    let gg = &go * DMatrix::from_column_slice(gv.len(), 1, &gv);

    let mut block_f: f64 = 0.0;
    let mut block_g: f64 = 0.0;
    let mut recursion: f64 = 0.0;
    for m in lo..=whi {
        for site in [m - 1, m] {
            let i = (site - wlo) as usize;
            if m.rem_euclid(2) == 0 {
                block_f = block_f.max((ff[i] - z * gv[i]).norm());
            } else {
                block_g = block_g.max((gg[i] - fv[i]).norm());
            }
        }
        let i = (m - wlo) as usize;
        let (tf, tg) = gz_transfer(schedule, m, z)?.apply(fv[i - 1], gv[i - 1]);
        recursion = recursion.max((tf - fv[i]).norm()).max((tg - gv[i]).norm());
    }
    let scale = fv.iter().chain(&gv).map(|v| v.norm()).fold(0.0, f64::max);
    Ok(EquivalenceReport { window: (lo, hi), block_f, block_g, recursion, scale })
}

//! Coefficient/phase schedules, probability measures on the unit circle,
//! trigonometric moments and Verblunsky-coefficient extraction.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

/// Largest accepted deviation of `|alpha|` above one before rejection.
pub const ALPHA_SLACK: f64 = 1e-12;
/// Largest accepted deviation of `|zeta|` from one.
pub const UNIMODULAR_TOL: f64 = 1e-14;

/// Returns `rho = (1 - |alpha|^2)^{1/2} zeta`.
///
/// `zeta` is renormalised to modulus one so that `|alpha|^2 + |rho|^2 = 1`
/// holds to roundoff. Values of `|alpha|` in `(1, 1 + 1e-12]` are treated as
/// lying on the circle and give `rho = 0`.
pub fn rho_from_alpha(alpha: C64, zeta: C64) -> Result<C64> {
    check_alpha(-1, alpha)?;
    check_zeta(-1, zeta)?;
    Ok(rho_unchecked(alpha, zeta))
}

fn rho_unchecked(alpha: C64, zeta: C64) -> C64 {
    let modulus = (1.0 - alpha.norm_sqr()).max(0.0).sqrt();
    zeta.unscale(zeta.norm()).scale(modulus)
}

fn check_alpha(index: i64, alpha: C64) -> Result<()> {
    let modulus = alpha.norm();
    if !modulus.is_finite() || modulus > 1.0 + ALPHA_SLACK {
        return Err(Error::InvalidCoefficient { index, modulus });
    }
    Ok(())
}

fn check_zeta(index: i64, zeta: C64) -> Result<()> {
    let modulus = zeta.norm();
    if !modulus.is_finite() || (modulus - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NonUnimodularPhase { index, modulus });
    }
    Ok(())
}

/// Verblunsky coefficients `alpha_n` and phases `zeta_n` over an explicit
/// integer window `[lo, hi]`, with the derived `rho_n = |rho_n| zeta_n`.
///
/// A schedule whose window starts at 0 is a half-lattice schedule; for it
/// `alpha_{-1} = -1` and `rho_{-1} = 0`. Schedules are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSchedule {
    lo: i64,
    alpha: Vec<C64>,
    zeta: Vec<C64>,
    rho: Vec<C64>,
}

impl CoefficientSchedule {
    /// Builds a schedule over `[lo, lo + alpha.len() - 1]`.
    pub fn new(lo: i64, alpha: Vec<C64>, zeta: Vec<C64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptySchedule);
        }
        if alpha.len() != zeta.len() {
            return Err(Error::LengthMismatch { alpha: alpha.len(), zeta: zeta.len() });
        }
        let mut rho = Vec::with_capacity(alpha.len());
        for (offset, (&a, &z)) in alpha.iter().zip(&zeta).enumerate() {
            let index = lo + offset as i64;
            check_alpha(index, a)?;
            check_zeta(index, z)?;
            rho.push(rho_unchecked(a, z));
        }
        Ok(Self { lo, alpha, zeta, rho })
    }

    /// Half-lattice schedule `alpha_0, ..., alpha_{N-1}` with phases.
    pub fn half_lattice(alpha: Vec<C64>, zeta: Vec<C64>) -> Result<Self> {
        Self::new(0, alpha, zeta)
    }

    /// Half-lattice schedule with all phases equal to one.
    pub fn from_alpha(alpha: Vec<C64>) -> Result<Self> {
        let zeta = vec![C64::new(1.0, 0.0); alpha.len()];
        Self::new(0, alpha, zeta)
    }

    /// Schedule over `[lo, ...]` with a constant phase.
    pub fn with_constant_phase(lo: i64, alpha: Vec<C64>, zeta: C64) -> Result<Self> {
        let zeta = vec![zeta; alpha.len()];
        Self::new(lo, alpha, zeta)
    }

    /// First index of the window.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last index of the window.
    pub fn hi(&self) -> i64 {
        self.lo + self.alpha.len() as i64 - 1
    }

    /// The window `[lo, hi]`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo(), self.hi())
    }

    /// Number of coefficients.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    /// Always false: empty schedules cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// True when the window starts at 0.
    pub fn is_half_lattice(&self) -> bool {
        self.lo == 0
    }

    /// True when `n` has a stored or conventional coefficient.
    pub fn covers(&self, n: i64) -> bool {
        (self.lo..=self.hi()).contains(&n) || (self.is_half_lattice() && n == -1)
    }

    fn slot(&self, n: i64) -> Result<Option<usize>> {
        if (self.lo..=self.hi()).contains(&n) {
            Ok(Some((n - self.lo) as usize))
        } else if self.is_half_lattice() && n == -1 {
            Ok(None)
        } else {
            Err(Error::OutOfWindow { index: n, lo: self.lo, hi: self.hi() })
        }
    }

    /// `alpha_n`; `alpha_{-1} = -1` on a half-lattice.
    pub fn alpha(&self, n: i64) -> Result<C64> {
        Ok(self.slot(n)?.map_or(C64::new(-1.0, 0.0), |i| self.alpha[i]))
    }

    /// `zeta_n`; `zeta_{-1} = 1` on a half-lattice.
    pub fn zeta(&self, n: i64) -> Result<C64> {
        Ok(self.slot(n)?.map_or(C64::new(1.0, 0.0), |i| self.zeta[i]))
    }

    /// Complex `rho_n = |rho_n| zeta_n`; `rho_{-1} = 0` on a half-lattice.
    pub fn rho(&self, n: i64) -> Result<C64> {
        Ok(self.slot(n)?.map_or(C64::new(0.0, 0.0), |i| self.rho[i]))
    }

    /// `|rho_n| = (1 - |alpha_n|^2)^{1/2}`.
    pub fn rho_abs(&self, n: i64) -> Result<f64> {
        Ok(self.rho(n)?.norm())
    }

    /// Stored coefficients in window order.
    pub fn alphas(&self) -> &[C64] {
        &self.alpha
    }

    /// Stored phases in window order.
    pub fn zetas(&self) -> &[C64] {
        &self.zeta
    }

    /// Stored `rho_n` in window order.
    pub fn rhos(&self) -> &[C64] {
        &self.rho
    }

    /// Same coefficients with every phase set to one.
    pub fn plain(&self) -> Self {
        let zeta = vec![C64::new(1.0, 0.0); self.len()];
        let rho = self.rho.iter().map(|r| C64::new(r.norm(), 0.0)).collect();
        Self { lo: self.lo, alpha: self.alpha.clone(), zeta, rho }
    }

    /// Schedule of the second-kind measure: `alpha_n -> -alpha_n`, phases kept.
    pub fn second_kind(&self) -> Self {
        Self {
            lo: self.lo,
            alpha: self.alpha.iter().map(|a| -a).collect(),
            zeta: self.zeta.clone(),
            rho: self.rho.clone(),
        }
    }

    /// Copy with `alpha_n` replaced by `value`.
    pub fn with_alpha(&self, n: i64, value: C64) -> Result<Self> {
        let i = self.slot(n)?.ok_or(Error::OutOfWindow { index: n, lo: self.lo, hi: self.hi() })?;
        let mut alpha = self.alpha.clone();
        alpha[i] = value;
        Self::new(self.lo, alpha, self.zeta.clone())
    }

    /// Copy with the window shifted so that it starts at `lo`.
    pub fn relabel(&self, lo: i64) -> Self {
        Self { lo, ..self.clone() }
    }

    /// Indices with `|alpha_n| = 1` (within `1e-12`), where `rho_n = 0`
    /// and the stored phase plays no role in any operator entry.
    pub fn split_points(&self) -> Vec<i64> {
        self.alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| (a.norm() - 1.0).abs() <= ALPHA_SLACK)
            .map(|(i, _)| self.lo + i as i64)
            .collect()
    }

    /// `prod_{j<n} zeta_j` for `n >= 0`.
    pub fn phase_product(&self, n: usize) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for j in 0..n as i64 {
            acc *= self.zeta(j)?;
        }
        Ok(acc)
    }
}

/// Named measures with closed-form Verblunsky coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Normalised arc length: `alpha_n = 0`.
    Lebesgue,
    /// `(1 - cos theta) dtheta / 2pi`: `alpha_n = -1/(n+2)`.
    GeronimusMu,
    /// `dtheta / 4pi + delta_{theta=0} / 2`: `alpha_n = 1/(n+2)`.
    GeronimusNu,
}

impl Builtin {
    /// All builtin measures.
    pub const ALL: [Builtin; 3] = [Builtin::Lebesgue, Builtin::GeronimusMu, Builtin::GeronimusNu];

    /// Looks a builtin up by its name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "lebesgue" => Ok(Builtin::Lebesgue),
            "geronimus_mu" => Ok(Builtin::GeronimusMu),
            "geronimus_nu" => Ok(Builtin::GeronimusNu),
            other => Err(Error::Parse(format!("unknown measure '{other}'"))),
        }
    }

    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Lebesgue => "lebesgue",
            Builtin::GeronimusMu => "geronimus_mu",
            Builtin::GeronimusNu => "geronimus_nu",
        }
    }

    /// Closed-form `alpha_n`.
    pub fn alpha(self, n: usize) -> C64 {
        let v = match self {
            Builtin::Lebesgue => 0.0,
            Builtin::GeronimusMu => -1.0 / (n as f64 + 2.0),
            Builtin::GeronimusNu => 1.0 / (n as f64 + 2.0),
        };
        C64::new(v, 0.0)
    }

    /// Half-lattice schedule of the first `count` coefficients with phases `zeta`.
    pub fn schedule(self, count: usize, zeta: C64) -> Result<CoefficientSchedule> {
        let alpha = (0..count).map(|n| self.alpha(n)).collect();
        CoefficientSchedule::with_constant_phase(0, alpha, zeta)
    }

    /// Absolutely continuous density relative to `dtheta / 2pi`.
    pub fn density(self, theta: f64) -> f64 {
        match self {
            Builtin::Lebesgue => 1.0,
            Builtin::GeronimusMu => 1.0 - theta.cos(),
            Builtin::GeronimusNu => 0.5,
        }
    }

    /// Point masses `(xi, weight)`.
    pub fn point_masses(self) -> &'static [(f64, f64)] {
        match self {
            Builtin::GeronimusNu => &[(0.0, 0.5)],
            _ => &[],
        }
    }

    /// Exact moment `int xi^k dmu`.
    pub fn exact_moment(self, k: i64) -> C64 {
        let v = match (self, k) {
            (_, 0) => 1.0,
            (Builtin::Lebesgue, _) => 0.0,
            (Builtin::GeronimusMu, 1 | -1) => -0.5,
            (Builtin::GeronimusMu, _) => 0.0,
            (Builtin::GeronimusNu, _) => 0.5,
        };
        C64::new(v, 0.0)
    }

    /// Closed-form Carathéodory function.
    pub fn caratheodory(self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self {
            Builtin::Lebesgue => one,
            Builtin::GeronimusMu => one - z,
            Builtin::GeronimusNu => one / (one - z),
        }
    }
}

/// A density relative to `dtheta / 2pi` sampled on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    theta: Vec<f64>,
    density: Vec<f64>,
}

impl DensityGrid {
    /// Validates uniform spacing `2pi / M`, nonnegativity and unit mass.
    pub fn new(theta: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let m = theta.len();
        if m < 2 || density.len() != m {
            return Err(Error::NonUniformGrid);
        }
        let h = 2.0 * PI / m as f64;
        for (j, &t) in theta.iter().enumerate() {
            if !t.is_finite() || (t - theta[0] - j as f64 * h).abs() > 1e-9 {
                return Err(Error::NonUniformGrid);
            }
        }
        for (index, &w) in density.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDensity { index });
            }
        }
        let total = density.iter().sum::<f64>() / m as f64;
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::NonNormalizedDensity { total });
        }
        Ok(Self { theta, density })
    }

    /// Samples `f` on `theta_j = -pi + 2 pi j / nodes`.
    pub fn sample(nodes: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let theta: Vec<f64> = uniform_grid(nodes).collect();
        let density = theta.iter().map(|&t| f(t)).collect();
        Self::new(theta, density)
    }

    /// Grid angles.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Density values.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Number of grid points.
    pub fn nodes(&self) -> usize {
        self.theta.len()
    }
}

fn uniform_grid(nodes: usize) -> impl Iterator<Item = f64> {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(move |j| -PI + j as f64 * h)
}

/// A probability measure on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Named measure with closed forms.
    Builtin(Builtin),
    /// Sampled density (no point masses).
    DensityGrid(DensityGrid),
    /// Measure determined by its Verblunsky coefficients (half-lattice).
    CoefficientDefined(CoefficientSchedule),
}

impl MeasureSpec {
    /// Integrates `f(xi)` against the measure.
    ///
    /// Builtins use the composite trapezoid rule with `nodes` points for the
    /// continuous part and add point masses exactly; density grids use
    /// their own sample points and ignore `nodes`.
    pub fn integrate(&self, nodes: usize, f: impl Fn(C64) -> C64) -> Result<C64> {
        match self {
            MeasureSpec::Builtin(b) => {
                let mut acc = C64::new(0.0, 0.0);
                for t in uniform_grid(nodes) {
                    acc += f(C64::from_polar(1.0, t)) * b.density(t);
                }
                acc /= nodes as f64;
                for &(t, w) in b.point_masses() {
                    acc += f(C64::from_polar(1.0, t)) * w;
                }
                Ok(acc)
            }
            MeasureSpec::DensityGrid(g) => {
                let acc: C64 = g
                    .theta
                    .iter()
                    .zip(&g.density)
                    .map(|(&t, &w)| f(C64::from_polar(1.0, t)) * w)
                    .sum();
                Ok(acc / g.nodes() as f64)
            }
            MeasureSpec::CoefficientDefined(_) => {
                Err(Error::Unsupported("quadrature against a coefficient-defined measure"))
            }
        }
    }

    /// Node count actually used by [`MeasureSpec::integrate`], if any.
    pub fn effective_nodes(&self, nodes: usize) -> Option<usize> {
        match self {
            MeasureSpec::Builtin(_) => Some(nodes),
            MeasureSpec::DensityGrid(g) => Some(g.nodes()),
            MeasureSpec::CoefficientDefined(_) => None,
        }
    }
}

/// Default quadrature size for moments up to `max_order`.
pub fn default_nodes(max_order: usize) -> usize {
    (8 * max_order).max(512)
}

/// Trigonometric moments `m_k = int xi^k dmu` for `|k| <= max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    values: Vec<C64>,
}

impl Moments {
    /// Builds the symmetric family from `m_0, ..., m_K`, setting
    /// `m_{-k} = conj(m_k)`.
    pub fn from_nonnegative(m: &[C64]) -> Self {
        let k = m.len() - 1;
        let mut values = Vec::with_capacity(2 * k + 1);
        values.extend(m.iter().rev().map(|v| v.conj()));
        values.extend_from_slice(&m[1..]);
        Self { values }
    }

    /// Largest available order.
    pub fn max_order(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    /// `m_k`; panics if `|k| > max_order`.
    pub fn get(&self, k: i64) -> C64 {
        self.values[(k + self.max_order() as i64) as usize]
    }

    /// Values for `k = -K ..= K`.
    pub fn as_slice(&self) -> &[C64] {
        &self.values
    }
}

/// Computes moments up to `max_order`.
///
/// Requires at least `4 * max_order` quadrature nodes. Coefficient-defined
/// measures obtain `m_k` as the `(0,0)` entry of the `k`-th power of the
/// CMV matrix, which needs `max_order + 2` coefficients.
pub fn moments(measure: &MeasureSpec, max_order: usize, nodes: usize) -> Result<Moments> {
    if let MeasureSpec::CoefficientDefined(s) = measure {
        return coefficient_moments(s, max_order);
    }
    let used = measure.effective_nodes(nodes).unwrap_or(nodes);
    let required = (4 * max_order).max(1);
    if used < required {
        return Err(Error::TooFewNodes { nodes: used, max_order, required });
    }
    let mut m = Vec::with_capacity(max_order + 1);
    for k in 0..=max_order as i32 {
        m.push(measure.integrate(nodes, |xi| xi.powi(k))?);
    }
    Ok(Moments::from_nonnegative(&m))
}

fn coefficient_moments(schedule: &CoefficientSchedule, max_order: usize) -> Result<Moments> {
    use crate::cmv::{build_cmv, Boundary, CmvVariant};
    let size = max_order + 2;
    if !schedule.is_half_lattice() || schedule.len() < size {
        return Err(Error::WindowTooSmall {
            lo: schedule.lo(),
            hi: schedule.hi(),
            reason: "coefficient-defined moments need alpha_0 .. alpha_{K+1}",
        });
    }
    let c = build_cmv(&schedule.plain(), size, CmvVariant::STANDARD, Boundary::PrincipalTruncation)?;
    let mut v = nalgebra::DVector::<C64>::zeros(size);
    v[0] = C64::new(1.0, 0.0);
    let mut m = vec![C64::new(1.0, 0.0)];
    for _ in 0..max_order {
        v = c.matrix() * v;
        m.push(v[0]);
    }
    Ok(Moments::from_nonnegative(&m))
}

/// Extracts `alpha_0, ..., alpha_{count-1}` from moments by the Szegő
/// (Levinson) recursion on monic polynomials.
pub fn verblunsky_from_moments(moments: &Moments, count: usize) -> Result<Vec<C64>> {
    if moments.max_order() < count {
        return Err(Error::TooFewNodes { nodes: moments.max_order(), max_order: count, required: count });
    }
    let mut phi = vec![C64::new(1.0, 0.0)];
    let mut norm_sq = moments.get(0).re;
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        if norm_sq <= 1e-14 {
            return Err(Error::NotPositiveDefinite { order: n });
        }
        let s: C64 = phi.iter().enumerate().map(|(j, c)| c * moments.get(j as i64 + 1)).sum();
        let alpha = s.conj() / norm_sq;
        if alpha.norm() >= 1.0 - 1e-12 {
            return Err(Error::NotPositiveDefinite { order: n + 1 });
        }
        let star: Vec<C64> = phi.iter().rev().map(|c| c.conj()).collect();
        let mut next = vec![C64::new(0.0, 0.0); n + 2];
        for (j, c) in phi.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, c) in star.iter().enumerate() {
            next[j] -= alpha.conj() * c;
        }
        phi = next;
        norm_sq *= 1.0 - alpha.norm_sqr();
        out.push(alpha);
    }
    Ok(out)
}

/// Extracts `alpha_0, ..., alpha_{count-1}` from the moments of `measure`
/// computed with [`default_nodes`].
pub fn verblunsky_from_measure(measure: &MeasureSpec, count: usize) -> Result<Vec<C64>> {
    let m = moments(measure, count, default_nodes(count))?;
    verblunsky_from_moments(&m, count)
}

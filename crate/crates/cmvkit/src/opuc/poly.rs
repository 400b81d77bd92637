use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Dense complex polynomial in the monomial basis; index = degree.
///
/// Trailing exact zeros are trimmed, so the stored leading coefficient is
/// nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<PolyRepr> for ComplexPoly {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        if r.coeffs.len() != r.degree + 1 {
            return Err(Error::Parse(format!(
                "degree {} needs {} coefficients, found {}",
                r.degree,
                r.degree + 1,
                r.coeffs.len()
            )));
        }
        if r.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        Ok(ComplexPoly::new(r.coeffs.iter().map(|[re, im]| C64::new(*re, *im)).collect()))
    }
}

impl From<ComplexPoly> for PolyRepr {
    fn from(p: ComplexPoly) -> Self {
        PolyRepr { degree: p.degree(), coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect() }
    }
}

impl ComplexPoly {
    /// Builds a polynomial, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::new(vec![])
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::new(vec![C64::new(1.0, 0.0)])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); n + 1];
        c[n] = C64::new(1.0, 0.0);
        Self::new(c)
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    /// Degree (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `c * p`.
    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p + q`.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    /// `p - q`.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeff(j) - other.coeff(j)).collect())
    }

    /// `z p`.
    pub fn mul_z(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(C64::new(0.0, 0.0));
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// `p / z`, after checking that `|p(0)| <= tol`.
    pub fn div_z(&self, tol: f64) -> Result<Self> {
        let c0 = self.coeffs[0].norm();
        if c0 > tol {
            return Err(Error::NonzeroConstantTerm { value: c0 });
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    /// Maximum coefficientwise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|j| (self.coeff(j) - other.coeff(j)).norm()).fold(0.0, f64::max)
    }
}

/// Reverse at order `n`: coefficient `j` of the output is
/// `conj(c_{n-j})`, i.e. `p*(z) = z^n conj(p(1/conj z))`.
pub fn reverse(p: &ComplexPoly, n: usize) -> Result<ComplexPoly> {
    if p.degree() > n && !p.is_zero() {
        return Err(Error::DegreeTooLarge { degree: p.degree(), order: n });
    }
    Ok(ComplexPoly::new((0..=n).map(|j| p.coeff(n - j).conj()).collect()))
}

/// Rotated reverse at order `n`: `(prod_{j<n} zeta_j^2) reverse(p, n)`.
pub fn rotated_reverse(p: &ComplexPoly, n: usize, zetas: &[C64]) -> Result<ComplexPoly> {
    if zetas.len() < n {
        return Err(Error::MissingPhases { needed: n, given: zetas.len() });
    }
    let factor: C64 = zetas[..n].iter().map(|z| z * z).product();
    Ok(reverse(p, n)?.scale(factor))
}

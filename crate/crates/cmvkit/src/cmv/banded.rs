use nalgebra::DMatrix;

use super::{Boundary, CmvVariant};
use crate::{Error, Result, C64};

/// Which operator a [`BandedUnitary`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// Half-lattice CMV matrix.
    C,
    /// Half-lattice alternate CMV matrix.
    CAlt,
    /// Rotated CMV matrix.
    CRot,
    /// Rotated alternate CMV matrix.
    CAltRot,
    /// Extended operator with real `rho`.
    E,
    /// Extended alternate operator with real `rho`.
    EAlt,
    /// Rotated extended operator.
    ERot,
    /// Rotated extended alternate operator.
    EAltRot,
    /// Even-block factor.
    L,
    /// Odd-block factor.
    M,
    /// Rotated even-block factor.
    LRot,
    /// Rotated odd-block factor.
    MRot,
}

impl OperatorKind {
    /// Half-lattice kind for a variant.
    pub fn cmv(v: CmvVariant) -> Self {
        match (v.alternate, v.rotated) {
            (false, false) => OperatorKind::C,
            (true, false) => OperatorKind::CAlt,
            (false, true) => OperatorKind::CRot,
            (true, true) => OperatorKind::CAltRot,
        }
    }

    /// Extended kind for a variant.
    pub fn extended(v: CmvVariant) -> Self {
        match (v.alternate, v.rotated) {
            (false, false) => OperatorKind::E,
            (true, false) => OperatorKind::EAlt,
            (false, true) => OperatorKind::ERot,
            (true, true) => OperatorKind::EAltRot,
        }
    }

    /// Tag used in files.
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::C => "C",
            OperatorKind::CAlt => "C_alt",
            OperatorKind::CRot => "C_rot",
            OperatorKind::CAltRot => "C_alt_rot",
            OperatorKind::E => "E",
            OperatorKind::EAlt => "E_alt",
            OperatorKind::ERot => "E_rot",
            OperatorKind::EAltRot => "E_alt_rot",
            OperatorKind::L => "L",
            OperatorKind::M => "M",
            OperatorKind::LRot => "L_rot",
            OperatorKind::MRot => "M_rot",
        }
    }

    /// Inverse of [`OperatorKind::name`].
    pub fn from_name(name: &str) -> Result<Self> {
        const ALL: [OperatorKind; 12] = [
            OperatorKind::C,
            OperatorKind::CAlt,
            OperatorKind::CRot,
            OperatorKind::CAltRot,
            OperatorKind::E,
            OperatorKind::EAlt,
            OperatorKind::ERot,
            OperatorKind::EAltRot,
            OperatorKind::L,
            OperatorKind::M,
            OperatorKind::LRot,
            OperatorKind::MRot,
        ];
        ALL.into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Parse(format!("unknown operator variant '{name}'")))
    }
}

/// A square complex matrix over the integer window `[lo, lo + dim - 1]`,
/// stored densely, with its nonzero pattern cached for matrix–vector
/// products.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedUnitary {
    lo: i64,
    matrix: DMatrix<C64>,
    boundary: Boundary,
    kind: OperatorKind,
    nonzeros: Vec<(usize, usize, C64)>,
}

impl BandedUnitary {
    /// Wraps a square matrix whose first row/column is site `lo`.
    ///
    /// # Panics
    /// If `matrix` is not square.
    pub fn new(lo: i64, matrix: DMatrix<C64>, boundary: Boundary, kind: OperatorKind) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator matrices are square");
        let mut nonzeros = Vec::new();
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                let v = matrix[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    nonzeros.push((i, j, v));
                }
            }
        }
        Self { lo, matrix, boundary, kind, nonzeros }
    }

    /// Builds an operator from `(k, l, value)` triplets in global indices.
    pub fn from_triplets(
        lo: i64,
        hi: i64,
        entries: &[(i64, i64, C64)],
        boundary: Boundary,
        kind: OperatorKind,
    ) -> Result<Self> {
        if hi < lo || hi - lo >= 1 << 16 {
            return Err(Error::WindowTooSmall { lo, hi, reason: "window must be nonempty and below 65536 sites" });
        }
        let n = (hi - lo + 1) as usize;
        let mut m = DMatrix::<C64>::zeros(n, n);
        for &(k, l, v) in entries {
            for idx in [k, l] {
                if !(lo..=hi).contains(&idx) {
                    return Err(Error::OutOfWindow { index: idx, lo, hi });
                }
            }
            m[((k - lo) as usize, (l - lo) as usize)] = v;
        }
        Ok(Self::new(lo, m, boundary, kind))
    }

    /// `(lo, hi)`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.dim() as i64 - 1)
    }

    /// Number of sites.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Dense matrix.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Boundary mode.
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Operator tag.
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Entry at global indices (zero outside the window).
    pub fn get(&self, k: i64, l: i64) -> C64 {
        let (lo, hi) = self.window();
        if (lo..=hi).contains(&k) && (lo..=hi).contains(&l) {
            self.matrix[((k - lo) as usize, (l - lo) as usize)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Nonzero entries as `(k, l, value)` in global indices.
    pub fn triplets(&self) -> Vec<(i64, i64, C64)> {
        self.nonzeros.iter().map(|&(i, j, v)| (self.lo + i as i64, self.lo + j as i64, v)).collect()
    }

    /// Nonzero entries in local indices.
    pub fn nonzeros(&self) -> &[(usize, usize, C64)] {
        &self.nonzeros
    }

    /// Largest `|k - l|` over nonzero entries.
    pub fn bandwidth(&self) -> usize {
        self.nonzeros.iter().map(|&(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }

    /// Largest cyclic distance `min(|k-l|, dim-|k-l|)` over nonzero entries.
    pub fn cyclic_bandwidth(&self) -> usize {
        let n = self.dim();
        self.nonzeros.iter().map(|&(i, j, _)| i.abs_diff(j).min(n - i.abs_diff(j))).max().unwrap_or(0)
    }

    /// `||U U^* - I||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (&self.matrix * self.matrix.adjoint() - DMatrix::<C64>::identity(n, n)).norm()
    }
}

use super::BandedUnitary;
use crate::{Error, Result, C64};

/// Sparse matrix–vector product over the cached nonzero pattern.
pub fn apply(matrix: &BandedUnitary, v: &[C64]) -> Result<Vec<C64>> {
    if v.len() != matrix.dim() {
        return Err(Error::DimensionMismatch { expected: matrix.dim(), got: v.len() });
    }
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for &(i, j, a) in matrix.nonzeros() {
        out[i] += a * v[j];
    }
    Ok(out)
}

/// Applies `matrix` `steps` times starting from `v`; returns the
/// probability vectors `|v_t|^2` for `t = 0 ..= steps`.
pub fn evolve(matrix: &BandedUnitary, v: &[C64], steps: usize) -> Result<Vec<Vec<f64>>> {
    let mut state = v.to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(state.iter().map(|x| x.norm_sqr()).collect());
    for _ in 0..steps {
        state = apply(matrix, &state)?;
        out.push(state.iter().map(|x| x.norm_sqr()).collect());
    }
    Ok(out)
}

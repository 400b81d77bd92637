use super::ComplexPoly;
use crate::coefficients::Moments;
use crate::{Error, Result, C64};

fn inner(m: &Moments, p: &[C64], q: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (j, pj) in p.iter().enumerate() {
        for (k, qk) in q.iter().enumerate() {
            acc += pj.conj() * qk * m.get(k as i64 - j as i64);
        }
    }
    acc
}

/// Orthonormalises `1, z, ..., z^count` in the inner product defined by
/// the moments (`<z^j, z^k> = m_{k-j}`), by modified Gram–Schmidt with one
/// reorthogonalisation pass.
///
/// Leading coefficients come out positive. Fails when the Toeplitz moment
/// matrix is not positive definite up to size `count + 1`.
pub fn gram_schmidt_oracle(moments: &Moments, count: usize) -> Result<Vec<ComplexPoly>> {
    if moments.max_order() < count {
        return Err(Error::NotPositiveDefinite { order: moments.max_order() + 1 });
    }
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(count + 1);
    for n in 0..=count {
        let mut v = vec![C64::new(0.0, 0.0); n + 1];
        v[n] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &basis {
                let c = inner(moments, q, &v);
                for (vj, qj) in v.iter_mut().zip(q) {
                    *vj -= c * qj;
                }
            }
        }
        let norm_sq = inner(moments, &v, &v).re;
        if norm_sq.is_nan() || norm_sq <= 1e-14 {
            return Err(Error::NotPositiveDefinite { order: n });
        }
        let s = norm_sq.sqrt();
        basis.push(v.into_iter().map(|x| x / s).collect());
    }
    Ok(basis.into_iter().map(ComplexPoly::new).collect())
}
